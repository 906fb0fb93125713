//! `slag` scenario: phase-`φ` curves of `exp(z + c + e^a/z) dz/z`.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use stabforge_core::slag::{find_closed_slag, product_phase_check, trace_slag};
use stabforge_core::{Complex64, SLagProblem, TracedPath};

use super::Tolerances;
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::paths::emit_paths;
use crate::report::ReportRecord;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Tracer settings shared by every path of the scenario.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceSettings {
    pub rtol: f64,
    pub max_arclength: f64,
    pub guard_radius: f64,
    pub end_level: f64,
    pub closed_delta: f64,
}

impl Default for TraceSettings {
    fn default() -> Self {
        let p = SLagProblem::new(c(0.0, 0.0), c(0.0, 0.0), 0.0, c(1.0, 0.0));
        Self {
            rtol: p.rtol,
            max_arclength: p.max_arclength,
            guard_radius: p.guard_radius,
            end_level: p.end_level,
            closed_delta: p.closed_delta,
        }
    }
}

impl TraceSettings {
    fn problem(&self, a: Complex64, c: Complex64, phi: f64, seed: Complex64) -> SLagProblem {
        SLagProblem {
            rtol: self.rtol,
            max_arclength: self.max_arclength,
            guard_radius: self.guard_radius,
            end_level: self.end_level,
            closed_delta: self.closed_delta,
            ..SLagProblem::new(a, c, phi, seed)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlagScenario {
    pub a: Vec<Complex64>,
    pub c: Complex64,
    pub phi: Vec<f64>,
    pub seeds: Vec<Complex64>,
    pub trace: TraceSettings,
    pub real_axis: bool,
    pub real_seeds: Vec<f64>,
    pub product: bool,
    pub product_samples: usize,
    pub closed: bool,
    pub output_dir: Option<PathBuf>,
    pub tol: Tolerances,
}

impl SlagScenario {
    pub fn parse(cfg: &Config, tol: &Tolerances) -> CliResult<Self> {
        let d = TraceSettings::default();
        let s = Self {
            a: cfg.complex_list_or("a", &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)])?,
            c: cfg.complex_or("c", c(0.0, 0.0))?,
            phi: cfg.f64_list_or("phi", &[0.0, 0.25, 0.5])?,
            seeds: cfg.complex_list_or(
                "seeds",
                &[c(0.5, 0.8), c(-1.0, 0.3), c(3.0, -1.0), c(1.5, 0.0), c(0.3, -0.6), c(-2.0, -2.0)],
            )?,
            trace: TraceSettings {
                rtol: cfg.positive_or("trace.rtol", d.rtol)?,
                max_arclength: cfg.positive_or("trace.max_arclength", d.max_arclength)?,
                guard_radius: cfg.positive_or("trace.guard_radius", d.guard_radius)?,
                end_level: cfg.positive_or("trace.end_level", d.end_level)?,
                closed_delta: cfg.positive_or("trace.closed_delta", d.closed_delta)?,
            },
            real_axis: cfg.bool_or("real_axis", true)?,
            real_seeds: cfg.f64_list_or("real_seeds", &[1.5, 0.4, -0.7])?,
            product: cfg.bool_or("product", true)?,
            product_samples: cfg.count_or("product_samples", 20)?,
            closed: cfg.bool_or("closed", true)?,
            output_dir: cfg.string("output.dir")?.map(PathBuf::from),
            tol: tol.clone(),
        };
        s.validate()?;
        Ok(s)
    }

    /// One path through `seed`, nothing else.
    pub fn single(a: Complex64, c: Complex64, phi: f64, seed: Complex64, csv: Option<PathBuf>, tol: &Tolerances) -> CliResult<Self> {
        let s = Self {
            a: vec![a],
            c,
            phi: vec![phi],
            seeds: vec![seed],
            trace: TraceSettings::default(),
            real_axis: false,
            real_seeds: Vec::new(),
            product: false,
            product_samples: 0,
            closed: false,
            output_dir: csv,
            tol: tol.clone(),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> CliResult<()> {
        let invalid = |m: String| Err(CliError::ConfigInvalid(m));
        if self.a.is_empty() || self.phi.is_empty() || self.seeds.is_empty() {
            return invalid("a, phi and seeds must be nonempty".into());
        }
        if let Some(z) = self.seeds.iter().find(|z| !z.is_finite() || z.norm() == 0.0) {
            return invalid(format!("seeds: need finite nonzero seeds, got {z}"));
        }
        if let Some(x) = self.real_seeds.iter().find(|x| !x.is_finite() || **x == 0.0) {
            return invalid(format!("real_seeds: need finite nonzero seeds, got {x}"));
        }
        if let Some(a) = self.a.iter().find(|a| !a.is_finite() || a.re.abs() > 8.0) {
            return invalid(format!("a = {a}: need finite a with |Re a| <= 8"));
        }
        if let Some(phi) = self.phi.iter().find(|p| !p.is_finite()) {
            return invalid(format!("phi: must be finite, got {phi}"));
        }
        if !self.c.is_finite() {
            return invalid("c: must be finite".into());
        }
        Ok(())
    }

    fn record(&self, check: &str, op: &str, case: serde_json::Value) -> ReportRecord {
        let params = json!({ "scenario": self, "case": case });
        ReportRecord::new(check, "slag_tracer", op, params)
    }

    fn trace_record(&self, p: &SLagProblem, path: &TracedPath) -> ReportRecord {
        let case = json!({ "a": p.a, "phi": p.phi, "seed": p.seed });
        let ok = path.phase_drift <= self.tol.slag_phase && path.mass_residual <= self.tol.slag_mass;
        self.record("slag.trace", "trace_slag", case)
            .value("ends", path.ends)
            .value("mass", path.mass)
            .value("samples", path.samples.len())
            .value("phase_drift", path.phase_drift)
            .value("mass_residual", path.mass_residual)
            .tol("slag_phase", self.tol.slag_phase)
            .tol("slag_mass", self.tol.slag_mass)
            .expect(ok, || {
                format!(
                    "phase drift {:e}, mass residual {:e}",
                    path.phase_drift, path.mass_residual
                )
            })
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        let problems: Vec<SLagProblem> = self
            .a
            .iter()
            .flat_map(|&a| {
                self.phi
                    .iter()
                    .flat_map(move |&phi| self.seeds.iter().map(move |&seed| (a, phi, seed)))
            })
            .map(|(a, phi, seed)| self.trace.problem(a, self.c, phi, seed))
            .collect();
        let paths: Vec<TracedPath> = problems
            .par_iter()
            .map(trace_slag)
            .collect::<Result<_, _>>()?;
        let mut out: Vec<ReportRecord> = problems
            .iter()
            .zip(&paths)
            .map(|(p, path)| self.trace_record(p, path))
            .collect();

        if self.real_axis {
            out.extend(self.real_axis_records()?);
        }
        if self.product {
            out.push(self.product_record(&paths));
        }
        let mut orbit = None;
        if self.closed {
            let (rec, path) = self.closed_record()?;
            out.push(rec);
            orbit = path;
        }
        if let Some(dir) = &self.output_dir {
            emit_paths(&paths, dir, "path")?;
            if let Some(o) = &orbit {
                emit_paths(std::slice::from_ref(o), dir, "closed")?;
            }
        }
        Ok(out)
    }

    fn real_axis_records(&self) -> CliResult<Vec<ReportRecord>> {
        let real: Vec<Complex64> = self.a.iter().copied().filter(|a| a.im == 0.0).collect();
        let mut out = Vec::new();
        for &a in &real {
            let case = json!({ "a": a, "seeds": self.real_seeds });
            if self.c.im != 0.0 {
                out.push(self.record("slag.real-axis", "trace_slag", case).skip("c is not real"));
                continue;
            }
            let mut max_im = 0.0f64;
            for &x in &self.real_seeds {
                let path = trace_slag(&self.trace.problem(a, self.c, 0.0, c(x, 0.0)))?;
                max_im = path.samples.iter().map(|s| s.z.im.abs()).fold(max_im, f64::max);
            }
            out.push(
                self.record("slag.real-axis", "trace_slag", case)
                    .value("max_abs_im_z", max_im)
                    .expect(max_im == 0.0, || format!("path left the real axis by {max_im:e}")),
            );
        }
        Ok(out)
    }

    /// Consecutive pairs and triples of the traced paths.
    fn product_record(&self, paths: &[TracedPath]) -> ReportRecord {
        let rec = self.record("slag.product-phase", "product_phase_check", json!({ "samples": self.product_samples }));
        let mut tuples: Vec<Vec<&TracedPath>> = paths.windows(2).map(|w| w.iter().collect()).collect();
        tuples.extend(paths.windows(3).map(|w| w.iter().collect::<Vec<_>>()));
        if tuples.is_empty() {
            return rec.skip("fewer than two paths");
        }
        let mut checked = 0;
        for t in &tuples {
            match product_phase_check(t, self.product_samples, self.tol.product_phase) {
                Ok(n) => checked += n,
                Err(w) => {
                    let phis: Vec<f64> = t.iter().map(|p| p.phi).collect();
                    return rec
                        .value("tuples", tuples.len())
                        .tol("product_phase", self.tol.product_phase)
                        .fail(format!(
                            "phases {phis:?} at samples {:?}: product phase {} vs {}",
                            w.indices, w.phase, w.expected
                        ));
                }
            }
        }
        rec.value("tuples", tuples.len())
            .value("points_checked", checked)
            .tol("product_phase", self.tol.product_phase)
    }

    /// Closed orbits around `|z| = √q` at `φ = 1/2` for the first real `a`.
    fn closed_record(&self) -> CliResult<(ReportRecord, Option<TracedPath>)> {
        let Some(&a) = self.a.iter().find(|a| a.im == 0.0) else {
            let rec = self.record("slag.closed-orbit", "find_closed_slag", json!({}));
            return Ok((rec.skip("no real a"), None));
        };
        let root = (a.re / 2.0).exp();
        let radii = (0.6 * root, 1.6 * root);
        let delta = self.trace.closed_delta;
        let case = json!({ "a": a, "phi": 0.5, "angle": 0.0, "radii": radii, "delta": delta });
        let rec = self.record("slag.closed-orbit", "find_closed_slag", case);
        if self.c.im != 0.0 {
            return Ok((rec.skip("c is not real"), None));
        }
        let found = find_closed_slag(a, self.c, 0.5, 0.0, radii, 5, delta)?;
        let rec = match &found.orbit {
            Some(o) => {
                let gap = (o.samples[0].z - o.samples.last().expect("nonempty").z).norm();
                rec.value("return_distance", o.return_distance)
                    .value("endpoint_gap", gap)
                    .value("mass", o.mass)
                    .tol("closed_delta", delta)
                    .expect(gap <= delta, || format!("endpoints {gap:e} apart"))
            }
            None => rec.fail(format!("no closed orbit among {} scanned seeds", found.scan.len())),
        };
        Ok((rec, found.orbit))
    }
}
