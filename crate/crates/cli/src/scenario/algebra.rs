//! `p1`, `product`, `surface` and `elliptic` scenarios.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use stabforge_core::derived::FactorClass;
use stabforge_core::hn::{self, HnFactor};
use stabforge_core::p1::{hn_p1, phase_p1, stable_objects_p1};
use stabforge_core::product::{
    admissible, heart_shift, random_filtration, recover_factors, support_constant, verify_axioms,
    AxiomSettings,
};
use stabforge_core::surface::{
    charge_bh, decomposition_defect_polynomial, elliptic_factor_charge, elliptic_factor_stable,
    elliptic_phase, elliptic_product_charge, factor_charge_in, geom_product,
    product_decomposition_exact, SurfaceChargeData, SurfaceClass,
};
use stabforge_core::{Complex64, Error, FormalObject, Generator, ProductStab, StabP1};

use super::{rel, window_of, Tolerances};
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::report::ReportRecord;

fn invalid(msg: String) -> CliError {
    CliError::ConfigInvalid(msg)
}

/// `<prefix>.kind = "geometric" | "algebraic"` and its parameters. With
/// `strict`, algebraic data must have `phi >= 1`.
fn parse_stab(cfg: &Config, prefix: &str, strict: bool) -> CliResult<StabP1> {
    let key = |f: &str| format!("{prefix}.{f}");
    let kind = cfg
        .string(&key("kind"))?
        .ok_or_else(|| invalid(format!("missing key {}", key("kind"))))?;
    let s = match kind.as_str() {
        "geometric" => StabP1::Geometric {
            tau: cfg.complex_req(&key("tau"))?,
            c: cfg.complex_or(&key("c"), Complex64::new(0.0, 0.0))?,
        },
        "algebraic" => {
            let phi = cfg.f64_req(&key("phi"))?;
            if !(phi > 0.0 && phi.is_finite()) {
                return Err(invalid(format!("{}: must be positive, got {phi}", key("phi"))));
            }
            StabP1::Algebraic {
                k: cfg.int_or(&key("k"), 0)?,
                psi: cfg.f64_or(&key("psi"), 0.0)?,
                phi,
                m0: cfg.positive_or(&key("m0"), 1.0)?,
                m1: cfg.positive_or(&key("m1"), 1.0)?,
            }
        }
        other => {
            return Err(invalid(format!(
                "{}: expected geometric or algebraic, got {other}",
                key("kind")
            )))
        }
    };
    match s {
        StabP1::Algebraic { .. } if !strict => {}
        _ => s.validate().map_err(|e| invalid(format!("{prefix}: {e}")))?,
    }
    Ok(s)
}

fn seed_of(cfg: &Config) -> CliResult<u64> {
    let s = cfg.int_or("seed", 0x5eed)?;
    u64::try_from(s).map_err(|_| invalid(format!("seed: must be non-negative, got {s}")))
}

fn parts_conserved(input: &[Generator], out: &[HnFactor]) -> bool {
    let mut a: Vec<&Generator> = input.iter().collect();
    let mut b: Vec<&Generator> = out.iter().flat_map(|f| &f.parts).collect();
    a.sort();
    b.sort();
    a == b
}

#[derive(Debug, Clone, Serialize)]
pub struct P1Scenario {
    pub stab: StabP1,
    pub window: i64,
    pub seed: u64,
    pub hn_trials: usize,
    pub tol: Tolerances,
}

impl P1Scenario {
    pub fn parse(cfg: &Config, tol: &Tolerances) -> CliResult<Self> {
        Ok(Self {
            stab: parse_stab(cfg, "stab", true)?,
            window: window_of(cfg, "window", 8)?,
            seed: seed_of(cfg)?,
            hn_trials: cfg.count_or("hn_trials", 32)?,
            tol: tol.clone(),
        })
    }

    fn record(&self, check: &str, op: &str) -> ReportRecord {
        ReportRecord::new(check, "p1_stab", op, json!({ "scenario": self }))
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        let s = &self.stab;
        let w = self.window;
        let gens = stable_objects_p1(s, -w..=w);
        let expected = if s.is_geometric() { 2 * w as usize + 2 } else { 2 };
        let mut out = vec![self
            .record("p1.stable-objects", "stable_objects_p1")
            .value("count", gens.len())
            .value("expected", expected)
            .expect(gens.len() == expected, || {
                format!("{} stable objects, expected {expected}", gens.len())
            })];

        let mut worst = 0.0f64;
        let mut witness = None;
        for g in &gens {
            for shift in -1..=1 {
                let gs = g.shifted(shift);
                let sign = if shift.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let z = s.central_charge(gs.factors[0].class()) * sign;
                let phase = phase_p1(s, &gs)?;
                let err = (z * Complex64::from_polar(1.0, -PI * phase)).arg().abs();
                if err > worst {
                    worst = err;
                    witness = Some(format!("{gs}: Z = {z}, phase = {phase}"));
                }
            }
        }
        out.push(
            self.record("p1.alignment", "phase_p1")
                .value("max_angle_error", worst)
                .tol("alignment", self.tol.alignment)
                .expect(worst <= self.tol.alignment, || witness.unwrap_or_default()),
        );

        let heart: Vec<Generator> = gens
            .iter()
            .map(|g| Ok(g.shifted(heart_shift(phase_p1(s, g)?))))
            .collect::<CliResult<_>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut failure = None;
        for trial in 0..self.hn_trials {
            let len = rng.gen_range(1..=6);
            let filt = random_filtration(&heart, len, &mut rng);
            let obj = FormalObject::new(1, filt.clone());
            let problem = match hn_p1(s, &obj) {
                Ok(f) if !hn::is_strictly_decreasing(&f) => Some("phases not strictly decreasing".into()),
                Ok(f) if !parts_conserved(&filt, &f) => Some("subquotients not conserved".into()),
                Ok(_) => None,
                Err(e) => Some(e.to_string()),
            };
            if let Some(p) = problem {
                failure = Some(format!("trial {trial}: {p}"));
                break;
            }
        }
        out.push(
            self.record("p1.hn", "hn_p1")
                .value("trials", self.hn_trials)
                .expect(failure.is_none(), || failure.unwrap_or_default()),
        );
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductScenario {
    pub factors: Vec<StabP1>,
    pub twist: Complex64,
    pub window: i64,
    pub seed: u64,
    pub hn_trials: usize,
    pub max_filtration: usize,
    pub tol: Tolerances,
}

impl ProductScenario {
    pub fn parse(cfg: &Config, tol: &Tolerances) -> CliResult<Self> {
        let idx = cfg.indices("factor")?;
        if idx.is_empty() {
            return Err(invalid("product needs at least one factor.<i> section".into()));
        }
        // Phase steps below 1 are accepted here so that controls reach the checks.
        let factors = idx
            .iter()
            .map(|i| parse_stab(cfg, &format!("factor.{i}"), false))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Self {
            factors,
            twist: cfg.complex_or("twist", Complex64::new(0.0, 0.0))?,
            window: window_of(cfg, "window", 8)?,
            seed: seed_of(cfg)?,
            hn_trials: cfg.count_or("hn_trials", 32)?,
            max_filtration: cfg.count_or("max_filtration", 6)?,
            tol: tol.clone(),
        })
    }

    pub fn from_stab(ps: &ProductStab, window: i64, seed: u64, tol: &Tolerances) -> Self {
        Self {
            factors: ps.factors().to_vec(),
            twist: ps.twist(),
            window,
            seed,
            hn_trials: 32,
            max_filtration: 6,
            tol: tol.clone(),
        }
    }

    fn record(&self, check: &str, op: &str) -> ReportRecord {
        ReportRecord::new(check, "product_stab", op, json!({ "scenario": self }))
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        let geo = self.factors.iter().filter(|s| s.is_geometric()).count();
        let ok = admissible(&self.factors);
        let mut out = vec![self
            .record("product.admissible", "admissible")
            .value("geometric_factors", geo)
            .expect(ok, || format!("{geo} geometric factors, at most one allowed"))];
        if !ok {
            return Ok(out);
        }
        let ps = ProductStab::new_unchecked(self.factors.clone(), self.twist);
        let settings = AxiomSettings {
            window: -self.window..=self.window,
            hn_trials: self.hn_trials,
            max_filtration: self.max_filtration,
            seed: self.seed,
            angle_tolerance: self.tol.alignment,
        };
        let report = verify_axioms(&ps, &settings)?;
        for e in &report.entries {
            out.push(
                self.record(&format!("product.axiom.{}", e.axiom), "verify_axioms")
                    .value("checked", e.checked)
                    .tol("alignment", self.tol.alignment)
                    .expect(e.passed, || e.witness.clone().unwrap_or_default()),
            );
        }

        let rec = self.record("product.recovery", "recover_factors");
        out.push(if ps.geo_index().is_some() {
            rec.skip("tuple has a geometric factor")
        } else {
            let expected = super::suites::expected_factors(&ps);
            match recover_factors(&ps.stable_data()?) {
                Ok(got) => {
                    let err = got
                        .iter()
                        .zip(&expected)
                        .map(|(g, &(phi, ratio))| {
                            (g.step - phi).abs().max((g.mass_ratio / ratio - 1.0).abs())
                        })
                        .fold(0.0, f64::max);
                    rec.value("max_error", err)
                        .tol("recovery", self.tol.recovery)
                        .expect(err <= self.tol.recovery, || {
                            format!("recovered {got:?}, configured {expected:?}")
                        })
                }
                Err(e) => rec.fail(e.to_string()),
            }
        });

        let rec = self.record("product.support", "support_constant");
        out.push(match support_constant(&ps, -self.window..=self.window) {
            Ok(r) => rec
                .value("constant", r.constant)
                .value("min_ratio", r.min_ratio)
                .value("generators", r.generators_checked),
            Err(e @ Error::SupportViolated { .. }) => rec.fail(e.to_string()),
            Err(e) => return Err(e.into()),
        });
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceScenario {
    pub b: [f64; 2],
    pub h: [f64; 2],
    pub samples: usize,
    pub seed: u64,
    pub tau1: Complex64,
    pub c1: Complex64,
    pub tau2: Complex64,
    pub c2: Complex64,
    pub window: i64,
    pub tol: Tolerances,
}

impl SurfaceScenario {
    pub fn parse(cfg: &Config, tol: &Tolerances) -> CliResult<Self> {
        let s = Self {
            b: cfg.pair_or("b", [0.3, -1.2])?,
            h: cfg.pair_or("h", [0.7, 2.5])?,
            samples: cfg.count_or("samples", 1000)?,
            seed: seed_of(cfg)?,
            tau1: cfg.complex_or("geom.tau1", Complex64::new(0.25, 1.0))?,
            c1: cfg.complex_or("geom.c1", Complex64::new(0.0, 0.0))?,
            tau2: cfg.complex_or("geom.tau2", Complex64::new(-0.5, 0.75))?,
            c2: cfg.complex_or("geom.c2", Complex64::new(0.1, 0.2))?,
            window: window_of(cfg, "window", 4)?,
            tol: tol.clone(),
        };
        SurfaceChargeData::new(s.b[0], s.b[1], s.h[0], s.h[1]).map_err(|e| invalid(format!("h: {e}")))?;
        for (name, tau) in [("geom.tau1", s.tau1), ("geom.tau2", s.tau2)] {
            if !(tau.im > 0.0) {
                return Err(invalid(format!("{name}: needs Im > 0, got {tau}")));
            }
        }
        Ok(s)
    }

    fn record(&self, check: &str, op: &str) -> ReportRecord {
        ReportRecord::new(check, "surface_geom", op, json!({ "scenario": self }))
    }

    fn sample_classes(&self) -> Vec<(FactorClass, FactorClass)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let class = |rng: &mut ChaCha8Rng| FactorClass::new(rng.gen_range(-3..=3), rng.gen_range(-6..=6));
        (0..self.samples).map(|_| (class(&mut rng), class(&mut rng))).collect()
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        let mut out = Vec::new();
        let defect = decomposition_defect_polynomial();
        out.push(
            self.record("surface.polynomial-identity", "decomposition_defect_polynomial")
                .value("defect_terms", defect.terms())
                .expect(defect.terms() == 0, || format!("{} nonzero terms remain", defect.terms())),
        );

        let samples = self.sample_classes();
        // Exact arithmetic on B and H rounded to the 1/1000 grid.
        let grid = |x: f64| Ratio::new((x * 1000.0).round() as i64, 1000);
        let (bq, hq) = ([grid(self.b[0]), grid(self.b[1])], [grid(self.h[0]), grid(self.h[1])]);
        let exact = product_decomposition_exact(bq, hq, &samples);
        out.push(
            self.record("surface.decomposition-exact", "product_decomposition_exact")
                .value("b", bq.map(|r| r.to_string()))
                .value("h", hq.map(|r| r.to_string()))
                .value("samples", samples.len())
                .expect(exact.is_ok(), || format!("{:?} differs", exact.err())),
        );

        let d = SurfaceChargeData::new(self.b[0], self.b[1], self.h[0], self.h[1])?;
        let mut worst = 0.0f64;
        let mut witness = String::new();
        for &(e1, e2) in &samples {
            let z1 = factor_charge_in(d.beta1(), e1);
            let z2 = factor_charge_in(d.beta2(), e2);
            let surface = charge_bh(&d, &SurfaceClass::external(e1, e2));
            let scale = z1.norm() * z2.norm();
            if scale == 0.0 {
                continue;
            }
            let err = (surface + z1 * z2).norm() / scale;
            if err > worst {
                worst = err;
                witness = format!("E1 = {e1:?}, E2 = {e2:?}: Z = {surface}, -Z1 Z2 = {}", -z1 * z2);
            }
        }
        out.push(
            self.record("surface.decomposition-float", "charge_bh")
                .value("max_rel_error", worst)
                .value("samples", samples.len())
                .tol("surface", self.tol.surface)
                .expect(worst <= self.tol.surface, || witness),
        );

        let g = geom_product(self.tau1, self.c1, self.tau2, self.c2)?;
        let windows = g.phase_windows(-self.window..=self.window)?;
        let bad = windows
            .iter()
            .find(|s| !s.in_window || s.offset.abs() > self.tol.alignment);
        let max_offset = windows.iter().map(|s| s.offset.abs()).fold(0.0, f64::max);
        let mut families = BTreeMap::new();
        for s in &windows {
            *families.entry(format!("{:?}", s.family)).or_insert(0usize) += 1;
        }
        out.push(
            self.record("surface.phase-windows", "geom_product")
                .value("samples", windows.len())
                .value("families", families)
                .value("max_offset", max_offset)
                .tol("alignment", self.tol.alignment)
                .expect(bad.is_none(), || format!("{bad:?}")),
        );
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipticScenario {
    pub tau1: Complex64,
    pub c1: Complex64,
    pub tau2: Complex64,
    pub c2: Complex64,
    pub max_rank: i64,
    pub max_degree: i64,
    pub tol: Tolerances,
}

impl EllipticScenario {
    pub fn parse(cfg: &Config, tol: &Tolerances) -> CliResult<Self> {
        let s = Self {
            tau1: cfg.complex_or("tau1", Complex64::new(0.1, 1.1))?,
            c1: cfg.complex_or("c1", Complex64::new(0.0, 0.0))?,
            tau2: cfg.complex_or("tau2", Complex64::new(-0.3, 0.8))?,
            c2: cfg.complex_or("c2", Complex64::new(0.2, -0.4))?,
            max_rank: cfg.int_or("max_rank", 3)?,
            max_degree: cfg.int_or("max_degree", 4)?,
            tol: tol.clone(),
        };
        for (name, tau) in [("tau1", s.tau1), ("tau2", s.tau2)] {
            if !(tau.im > 0.0) {
                return Err(invalid(format!("{name}: needs Im > 0, got {tau}")));
            }
        }
        if !(0..=16).contains(&s.max_rank) || !(0..=16).contains(&s.max_degree) {
            return Err(invalid("max_rank and max_degree must lie in 0..=16".into()));
        }
        Ok(s)
    }

    fn record(&self, check: &str, op: &str) -> ReportRecord {
        ReportRecord::new(check, "surface_geom", op, json!({ "scenario": self }))
    }

    /// Primitive classes with `0 <= r <= max_rank`, `|d| <= max_degree`.
    fn stable_classes(&self) -> CliResult<Vec<FactorClass>> {
        let mut out = Vec::new();
        for r in 0..=self.max_rank {
            for d in -self.max_degree..=self.max_degree {
                if (r, d) != (0, 0) && elliptic_factor_stable(r, d)? {
                    out.push(FactorClass::new(r, d));
                }
            }
        }
        Ok(out)
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        let classes = self.stable_classes()?;
        let (mut charge_err, mut phase_err) = (0.0f64, 0.0f64);
        let (mut charge_w, mut phase_w) = (String::new(), String::new());
        for &e1 in &classes {
            for &e2 in &classes {
                let z = elliptic_product_charge(self.tau1, self.c1, e1, self.tau2, self.c2, e2);
                let z1 = elliptic_factor_charge(self.tau1, self.c1, e1);
                let z2 = elliptic_factor_charge(self.tau2, self.c2, e2);
                let err = rel(z, z1 * z2);
                if err > charge_err {
                    charge_err = err;
                    charge_w = format!("{e1:?} x {e2:?}: Z = {z}, Z1 Z2 = {}", z1 * z2);
                }
                let sum = elliptic_phase(self.tau1, self.c1, e1)? + elliptic_phase(self.tau2, self.c2, e2)?;
                let d = sum - z.arg() / PI;
                let err = (d - 2.0 * (d / 2.0).round()).abs();
                if err > phase_err {
                    phase_err = err;
                    phase_w = format!("{e1:?} x {e2:?}: phase sum {sum}, arg Z / pi = {}", z.arg() / PI);
                }
            }
        }
        let pairs = classes.len() * classes.len();
        Ok(vec![
            self.record("elliptic.charge-multiplicativity", "elliptic_product_charge")
                .value("pairs", pairs)
                .value("max_rel_error", charge_err)
                .tol("surface", self.tol.surface)
                .expect(charge_err <= self.tol.surface, || charge_w),
            self.record("elliptic.phase-additivity", "elliptic_phase")
                .value("pairs", pairs)
                .value("max_error_mod_2", phase_err)
                .tol("alignment", self.tol.alignment)
                .expect(phase_err <= self.tol.alignment, || phase_w),
        ])
    }
}
