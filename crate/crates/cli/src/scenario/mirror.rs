//! `mirror` scenario: circle and thimble periods of `z + e^a/z`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use stabforge_core::mirror::{
    circle_charge, circle_closed_form, monodromy_probe, product_charge_numeric, trace_thimble, Cycle,
    ThimbleOptions,
};
use stabforge_core::{Complex64, LGModel, Saddle};

use super::{rel, Tolerances};
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::report::ReportRecord;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Serialize)]
pub struct MirrorScenario {
    pub a: Vec<Complex64>,
    pub c: Complex64,
    pub k_min: i64,
    pub k_max: i64,
    pub radii: Vec<f64>,
    pub thimble_a: Vec<Complex64>,
    pub asymptotic_q: f64,
    pub product_a: Vec<Complex64>,
    pub product_k: Vec<i64>,
    pub monodromy_a0: Vec<Complex64>,
    pub monodromy_steps: usize,
    pub tol: Tolerances,
}

impl MirrorScenario {
    pub fn parse(cfg: &Config, tol: &Tolerances) -> CliResult<Self> {
        let invalid = |m: String| CliError::ConfigInvalid(m);
        let product_k = cfg.f64_list_or("product_k", &[0.0, 1.0])?;
        let s = Self {
            a: cfg.complex_list_or("a", &[c(0.0, 0.0), c(1.0, 1.0), c(-0.5, 2.0)])?,
            c: cfg.complex_or("c", c(0.0, 0.0))?,
            k_min: cfg.int_or("k_min", -6)?,
            k_max: cfg.int_or("k_max", 6)?,
            radii: cfg.f64_list_or("radii", &[0.3, 1.0, 3.0])?,
            thimble_a: cfg.complex_list_or("thimble_a", &[c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.3)])?,
            asymptotic_q: cfg.positive_or("asymptotic_q", 25.0)?,
            product_a: cfg.complex_list_or("product_a", &[c(0.2, 0.3), c(-0.1, 0.0)])?,
            product_k: product_k
                .iter()
                .map(|&k| {
                    if k.fract() == 0.0 && k.abs() <= 32.0 {
                        Ok(k as i64)
                    } else {
                        Err(invalid(format!("product_k: expected small integers, got {k}")))
                    }
                })
                .collect::<CliResult<_>>()?,
            monodromy_a0: cfg.complex_list_or("monodromy_a0", &[c(0.0, 0.0), c(0.0, 0.7)])?,
            monodromy_steps: cfg.count_or("monodromy_steps", 64)?,
            tol: tol.clone(),
        };
        if s.k_min > s.k_max || s.k_min < -32 || s.k_max > 32 {
            return Err(invalid(format!("k range {}..={} must lie in -32..=32", s.k_min, s.k_max)));
        }
        if let Some(r) = s.radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(invalid(format!("radii: must be positive, got {r}")));
        }
        if s.product_a.len() != 2 || s.product_k.len() != 2 {
            return Err(invalid("product_a and product_k need exactly two entries".into()));
        }
        let mut all = s.a.iter().chain(&s.thimble_a).chain(&s.product_a).chain(&s.monodromy_a0);
        if let Some(a) = all.find(|a| !a.is_finite() || a.re.abs() > 8.0) {
            return Err(invalid(format!("a = {a}: need finite a with |Re a| <= 8")));
        }
        Ok(s)
    }

    fn record(&self, check: &str, op: &str, case: serde_json::Value) -> ReportRecord {
        let params = json!({ "scenario": self, "case": case });
        ReportRecord::new(check, "mirror_numeric", op, params)
    }

    fn circles(&self, a: Complex64) -> CliResult<Vec<ReportRecord>> {
        let m = LGModel::single(a, self.c);
        let ks: Vec<i64> = (self.k_min..=self.k_max).collect();
        let unit: Vec<Complex64> = ks.iter().map(|&k| circle_charge(&m, k, 1.0)).collect::<Result<_, _>>()?;

        let (mut worst, mut at) = (0.0f64, 0);
        for (&k, &v) in ks.iter().zip(&unit) {
            let err = rel(v, circle_closed_form(&m, k)?);
            if err > worst {
                (worst, at) = (err, k);
            }
        }
        let closed = self
            .record("mirror.circle-closed-form", "circle_charge", json!({ "a": a }))
            .value("max_rel_error", worst)
            .value("worst_k", at)
            .tol("circle", self.tol.circle)
            .expect(worst <= self.tol.circle, || format!("k = {at}: relative error {worst:e}"));

        let (mut worst, mut at) = (0.0f64, (0, 1.0));
        for (&k, &v) in ks.iter().zip(&unit) {
            for &r in &self.radii {
                let err = rel(circle_charge(&m, k, r)?, v);
                if err > worst {
                    (worst, at) = (err, (k, r));
                }
            }
        }
        let contour = self
            .record("mirror.contour-independence", "circle_charge", json!({ "a": a }))
            .value("max_rel_difference", worst)
            .value("radii", &self.radii)
            .tol("contour", self.tol.contour)
            .expect(worst <= self.tol.contour, || {
                format!("k = {}, r = {}: differs from r = 1 by {worst:e}", at.0, at.1)
            });

        // C_{k-1} - q C_{k+1} - k C_k = 0 with C_k the weight-k period.
        let q = m.q(0);
        let (mut worst, mut at) = (0.0f64, 0);
        for i in 1..ks.len().saturating_sub(1) {
            let k = ks[i] as f64;
            let terms = [unit[i - 1], -q * unit[i + 1], -k * unit[i]];
            let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            let res = terms.iter().sum::<Complex64>().norm() / scale;
            if res > worst {
                (worst, at) = (res, ks[i]);
            }
        }
        let recurrence = self
            .record("mirror.bessel-recurrence", "circle_charge", json!({ "a": a }))
            .value("max_residual", worst)
            .tol("recurrence", self.tol.recurrence)
            .expect(worst <= self.tol.recurrence, || format!("k = {at}: residual {worst:e}"));
        Ok(vec![closed, contour, recurrence])
    }

    fn thimbles(&self, a: Complex64) -> CliResult<Vec<ReportRecord>> {
        let m = LGModel::single(a, c(0.0, 0.0));
        let opts = ThimbleOptions::default();
        let circle = circle_charge(&m, 0, 1.0)?;
        let p = trace_thimble(&m, Saddle::Plus, &opts)?;
        let n = trace_thimble(&m, Saddle::Minus, &opts)?;
        let diff = p.integral - n.integral;
        let (plus, minus) = ((circle - diff).norm(), (circle + diff).norm());
        let (sign, res) = if plus <= minus { (1, plus) } else { (-1, minus) };
        let res = res / circle.norm();
        let homology = self
            .record("mirror.thimble-homology", "trace_thimble", json!({ "a": a }))
            .value("circle", circle)
            .value("thimble_difference", diff)
            .value("sign", sign)
            .value("rel_residual", res)
            .value("stokes", [p.stokes, n.stokes])
            .tol("homology", self.tol.homology)
            .expect(res <= self.tol.homology, || {
                format!("circle {circle} vs ±(Γ+ - Γ-) = ±{diff}")
            });
        // Drift is measured against the critical value's size.
        let drift = [&p, &n]
            .iter()
            .map(|t| t.im_drift / (1.0 + t.critical_value.norm()))
            .fold(0.0, f64::max);
        let drift = self
            .record("mirror.thimble-drift", "trace_thimble", json!({ "a": a }))
            .value("max_scaled_drift", drift)
            .value("im_drift", [p.im_drift, n.im_drift])
            .tol("drift", self.tol.drift)
            .expect(drift <= self.tol.drift, || format!("Im W drift {drift:e}"));
        Ok(vec![homology, drift])
    }

    fn asymptotic(&self) -> CliResult<ReportRecord> {
        let m = LGModel::single(c(self.asymptotic_q.ln(), 0.0), c(0.0, 0.0));
        let t = trace_thimble(&m, Saddle::Plus, &ThimbleOptions::default())?;
        let dev = rel(t.integral, t.leading_order);
        Ok(self
            .record("mirror.asymptotic", "trace_thimble", json!({ "q": self.asymptotic_q }))
            .value("integral", t.integral)
            .value("leading_order", t.leading_order)
            .value("rel_deviation", dev)
            .tol("asymptotic", self.tol.asymptotic)
            .expect(dev <= self.tol.asymptotic, || format!("relative deviation {dev}")))
    }

    fn factorization(&self, name: &str, cycles: [Cycle; 2]) -> CliResult<ReportRecord> {
        let m = LGModel::new(self.product_a.clone(), self.c)?;
        let r = product_charge_numeric(&m, &self.product_k, &cycles)?;
        let fubini = r.fubini_residual.unwrap_or(f64::INFINITY);
        let mut one_d = Vec::new();
        for (i, cycle) in cycles.iter().enumerate() {
            let single = LGModel::single(self.product_a[i], c(0.0, 0.0));
            one_d.push(match *cycle {
                Cycle::Circle { radius } => circle_charge(&single, self.product_k[i], radius)?,
                Cycle::Thimble { saddle } => trace_thimble(&single, saddle, &ThimbleOptions::default())?
                    .weighted_integral(single.q(0), c(0.0, 0.0), self.product_k[i]),
            });
        }
        let separate = self.c.exp() * one_d[0] * one_d[1];
        let product_err = rel(r.value, separate);
        let worst = fubini.max(product_err);
        Ok(self
            .record(&format!("mirror.factorization-{name}"), "product_charge_numeric", json!({ "cycles": cycles }))
            .value("value", r.value)
            .value("fubini_residual", fubini)
            .value("product_rel_error", product_err)
            .tol("fubini", self.tol.fubini)
            .expect(worst <= self.tol.fubini, || {
                format!("tensor quadrature {} vs product of factors {separate}", r.value)
            }))
    }

    fn monodromy(&self, a0: Complex64) -> CliResult<ReportRecord> {
        let m = LGModel::single(a0, self.c);
        let once = monodromy_probe(&m, 1, self.monodromy_steps)?;
        let twice = monodromy_probe(&m, 2, self.monodromy_steps)?;
        let ret = once.circle_return_error.max(twice.circle_return_error);
        let ok = once.swapped && twice.permutation == [0, 1] && ret <= self.tol.monodromy;
        Ok(self
            .record("mirror.monodromy", "monodromy_probe", json!({ "a0": a0 }))
            .value("one_loop_permutation", once.permutation)
            .value("two_loop_permutation", twice.permutation)
            .value("circle_return_error", ret)
            .value("max_step", once.max_step)
            .tol("monodromy", self.tol.monodromy)
            .expect(ok, || {
                format!(
                    "one loop {:?}, two loops {:?}, circle return {ret:e}",
                    once.permutation, twice.permutation
                )
            }))
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        let mut out: Vec<ReportRecord> = Vec::new();
        for batch in self.a.par_iter().map(|&a| self.circles(a)).collect::<Vec<_>>() {
            out.extend(batch?);
        }
        for batch in self.thimble_a.par_iter().map(|&a| self.thimbles(a)).collect::<Vec<_>>() {
            out.extend(batch?);
        }
        out.push(self.asymptotic()?);
        let circle = Cycle::Circle { radius: 1.0 };
        out.push(self.factorization("circles", [circle, circle])?);
        out.push(self.factorization("thimble-circle", [Cycle::Thimble { saddle: Saddle::Minus }, circle])?);
        for r in self.monodromy_a0.par_iter().map(|&a0| self.monodromy(a0)).collect::<Vec<_>>() {
            out.push(r?);
        }
        Ok(out)
    }
}
