//! `verify-all`: every scenario at its defaults plus the randomized suites.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use stabforge_core::product::{
    ext_exceptional_check, gluing_vanishing_check, recover_factors, support_constant, verify_axioms,
    AxiomSettings,
};
use stabforge_core::{Error, ProductStab};

use super::suites::{
    expected_factors, gluing_control, inject_defect, random_control_tuple, random_mixed_tuple, random_pure_tuple,
};
use super::{
    window_of, EllipticScenario, MirrorScenario, P1Scenario, Scenario, SlagScenario, SurfaceScenario, Tolerances,
};
use crate::config::Config;
use crate::error::CliResult;
use crate::report::ReportRecord;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyAll {
    /// Line-bundle window half-width for every windowed check.
    pub window: i64,
    pub seed: u64,
    pub pure: usize,
    pub controls: usize,
    pub mixed: usize,
    pub recovery: usize,
    pub tol: Tolerances,
}

/// One tuple of a suite that did not behave.
struct Miss {
    index: usize,
    tuple: ProductStab,
    what: String,
}

impl VerifyAll {
    pub fn parse(cfg: &Config, tol: Tolerances) -> CliResult<Self> {
        let seed = cfg.int_or("verify.seed", 20_240_101)?;
        Ok(Self {
            window: window_of(cfg, "verify.window", 4)?,
            seed: u64::try_from(seed)
                .map_err(|_| crate::error::CliError::ConfigInvalid(format!("verify.seed: must be non-negative, got {seed}")))?,
            pure: cfg.count_or("verify.pure", 500)?,
            controls: cfg.count_or("verify.controls", 100)?,
            mixed: cfg.count_or("verify.mixed", 100)?,
            recovery: cfg.count_or("verify.recovery", 200)?,
            tol,
        })
    }

    pub fn defaults() -> Self {
        Self::parse(&Config::empty(), Tolerances::default()).expect("defaults are valid")
    }

    fn record(&self, check: &str, op: &str, count: usize) -> ReportRecord {
        ReportRecord::new(check, "product_stab", op, json!({ "verify": self, "count": count }))
    }

    fn settings(&self, salt: u64) -> AxiomSettings {
        AxiomSettings {
            window: -self.window..=self.window,
            seed: self.seed ^ salt,
            angle_tolerance: self.tol.alignment,
            ..AxiomSettings::default()
        }
    }

    /// `count` tuples from `make`, drawn sequentially so the family only
    /// depends on the seed.
    fn family(&self, salt: u64, count: usize, make: fn(&mut ChaCha8Rng) -> ProductStab) -> Vec<ProductStab> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(salt));
        (0..count).map(|_| make(&mut rng)).collect()
    }

    /// Pure, control and mixed tuples, in that order.
    pub fn families(&self) -> (Vec<ProductStab>, Vec<ProductStab>, Vec<ProductStab>) {
        (
            self.family(1, self.pure, random_pure_tuple),
            self.family(2, self.controls, random_control_tuple),
            self.family(3, self.mixed, random_mixed_tuple),
        )
    }

    fn scenarios(&self) -> CliResult<Vec<Scenario>> {
        let empty = Config::empty();
        let mut list = Vec::new();
        for text in [
            "[stab]\nkind = \"geometric\"\ntau = [0.3, 1.2]\nc = [0.1, 0.2]\n",
            "[stab]\nkind = \"algebraic\"\nk = -1\npsi = 0.2\nphi = 1.5\nm0 = 2.0\nm1 = 0.5\n",
        ] {
            let cfg = Config::parse(text)?;
            let mut s = P1Scenario::parse(&cfg, &self.tol)?;
            s.window = self.window;
            list.push(Scenario::P1(s));
        }
        let mut surface = SurfaceScenario::parse(&empty, &self.tol)?;
        surface.window = self.window;
        list.push(Scenario::Surface(surface));
        list.push(Scenario::Elliptic(EllipticScenario::parse(&empty, &self.tol)?));
        list.push(Scenario::Mirror(MirrorScenario::parse(&empty, &self.tol)?));
        list.push(Scenario::Slag(SlagScenario::parse(&empty, &self.tol)?));
        Ok(list)
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        let mut out = Vec::new();
        for batch in self.scenarios()?.par_iter().map(|s| s.run()).collect::<Vec<_>>() {
            out.extend(batch?);
        }
        let (pure, controls, mixed) = self.families();
        out.push(self.pure_suite(&pure)?);
        out.push(self.control_suite(&controls)?);
        out.extend(self.gluing_suite(&mixed)?);
        out.extend(self.recovery_suite()?);
        let all: Vec<ProductStab> = pure.into_iter().chain(mixed).collect();
        out.push(self.support_suite(&all)?);
        Ok(out)
    }

    fn first_miss(
        &self,
        tuples: &[ProductStab],
        check: impl Fn(&ProductStab) -> CliResult<Option<String>> + Sync + Send,
    ) -> CliResult<Option<Miss>> {
        let results: Vec<CliResult<Option<String>>> = tuples.par_iter().map(check).collect();
        for (index, r) in results.into_iter().enumerate() {
            if let Some(what) = r? {
                return Ok(Some(Miss {
                    index,
                    tuple: tuples[index].clone(),
                    what,
                }));
            }
        }
        Ok(None)
    }

    fn with_miss(rec: ReportRecord, miss: Option<Miss>) -> ReportRecord {
        match miss {
            None => rec,
            Some(m) => rec.fail(format!(
                "tuple {} (factors {:?}, twist {}): {}",
                m.index,
                m.tuple.factors(),
                m.tuple.twist(),
                m.what
            )),
        }
    }

    pub fn pure_suite(&self, tuples: &[ProductStab]) -> CliResult<ReportRecord> {
        let settings = self.settings(1);
        let miss = self.first_miss(tuples, |ps| {
            let heart = ps.stable_generators(-self.window..=self.window)?;
            if let Err(w) = ext_exceptional_check(&heart) {
                return Ok(Some(w.to_string()));
            }
            let report = verify_axioms(ps, &settings)?;
            Ok(report
                .first_failure()
                .map(|e| format!("{}: {}", e.axiom, e.witness.clone().unwrap_or_default())))
        })?;
        let rec = self
            .record("suite.product-pure", "verify_axioms", tuples.len())
            .tol("alignment", self.tol.alignment);
        Ok(Self::with_miss(rec, miss))
    }

    /// Every control must fail with a witness.
    pub fn control_suite(&self, tuples: &[ProductStab]) -> CliResult<ReportRecord> {
        let settings = self.settings(2);
        let miss = self.first_miss(tuples, |ps| {
            let report = verify_axioms(ps, &settings)?;
            Ok(match report.first_failure() {
                Some(e) if e.witness.is_some() => None,
                Some(e) => Some(format!("{} failed without a witness", e.axiom)),
                None => Some("all axioms passed although some phase step is below 1".into()),
            })
        })?;
        Ok(Self::with_miss(
            self.record("suite.product-control", "verify_axioms", tuples.len()),
            miss,
        ))
    }

    pub fn gluing_suite(&self, tuples: &[ProductStab]) -> CliResult<Vec<ReportRecord>> {
        let degrees = -self.window..=self.window;
        let miss = self.first_miss(tuples, |ps| {
            let r = gluing_vanishing_check(ps, degrees.clone())?;
            Ok(r.witness.map(|w| format!("{w:?}")))
        })?;
        let suite = Self::with_miss(
            self.record("suite.gluing", "gluing_vanishing_check", tuples.len()),
            miss,
        );
        let control = gluing_control();
        let r = gluing_vanishing_check(&control, degrees)?;
        let rec = self
            .record("suite.gluing-control", "gluing_vanishing_check", 1)
            .value("pairs_checked", r.pairs_checked);
        let rec = match r.witness {
            Some(w) => rec.value("witness", format!("{w:?}")),
            None => rec.fail("control with phase step 0.5 passed the vanishing check"),
        };
        Ok(vec![suite, rec])
    }

    pub fn recovery_suite(&self) -> CliResult<Vec<ReportRecord>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(4));
        let mut worst = 0.0f64;
        let mut miss = None;
        let (mut defects, mut detected) = (0usize, 0usize);
        let mut undetected = None;
        for i in 0..self.recovery {
            let ps = random_pure_tuple(&mut rng);
            let mut data = ps.stable_data()?;
            let expected = expected_factors(&ps);
            match recover_factors(&data) {
                Ok(got) => {
                    for (g, &(phi, ratio)) in got.iter().zip(&expected) {
                        worst = worst.max((g.step - phi).abs()).max((g.mass_ratio / ratio - 1.0).abs());
                    }
                }
                Err(e) => {
                    miss.get_or_insert(format!("tuple {i}: {e}"));
                }
            }
            if let Some(at) = inject_defect(&mut data, 1e-3, &mut rng) {
                defects += 1;
                match recover_factors(&data) {
                    Err(Error::InconsistentData { .. }) => detected += 1,
                    other => {
                        undetected.get_or_insert(format!("tuple {i}, index {}: {other:?}", data[at].index));
                    }
                }
            }
        }
        if miss.is_none() && worst > self.tol.recovery {
            miss = Some(format!("max recovery error {worst:e}"));
        }
        let round_trip = self
            .record("suite.recovery", "recover_factors", self.recovery)
            .value("max_error", worst)
            .tol("recovery", self.tol.recovery);
        let round_trip = match miss {
            Some(w) => round_trip.fail(w),
            None => round_trip,
        };
        let defect = self
            .record("suite.recovery-defects", "recover_factors", defects)
            .value("injected", defects)
            .value("detected", detected);
        let defect = match undetected {
            Some(w) => defect.fail(w),
            None if defects == 0 => defect.skip("no tuple with two or more factors"),
            None => defect,
        };
        Ok(vec![round_trip, defect])
    }

    pub fn support_suite(&self, tuples: &[ProductStab]) -> CliResult<ReportRecord> {
        let miss = self.first_miss(tuples, |ps| match support_constant(ps, -self.window..=self.window) {
            Ok(_) => Ok(None),
            Err(e @ Error::SupportViolated { .. }) => Ok(Some(e.to_string())),
            Err(e) => Err(e.into()),
        })?;
        Ok(Self::with_miss(
            self.record("suite.support", "support_constant", tuples.len()),
            miss,
        ))
    }
}
