//! Scenario schemas and the pipelines behind them.

mod algebra;
mod mirror;
mod slag;
pub mod suites;
mod verify;

use serde::Serialize;

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::report::ReportRecord;

pub use algebra::{EllipticScenario, P1Scenario, ProductScenario, SurfaceScenario};
pub use mirror::MirrorScenario;
pub use slag::SlagScenario;
pub use verify::VerifyAll;

/// Agreement tolerances. Defaults are the module defaults; `tol.<name>`
/// overrides one, `--tol` overrides all but `asymptotic`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub surface: f64,
    pub alignment: f64,
    pub recovery: f64,
    pub circle: f64,
    pub contour: f64,
    pub recurrence: f64,
    pub homology: f64,
    pub drift: f64,
    /// Relative deviation from the leading saddle-point term; a truncation
    /// bound rather than an agreement tolerance.
    pub asymptotic: f64,
    pub fubini: f64,
    pub slag_phase: f64,
    pub slag_mass: f64,
    pub product_phase: f64,
    pub monodromy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            surface: 1e-12,
            alignment: 1e-10,
            recovery: 1e-9,
            circle: 1e-9,
            contour: 1e-10,
            recurrence: 1e-9,
            homology: 1e-6,
            drift: 1e-8,
            asymptotic: 0.05,
            fubini: 1e-8,
            slag_phase: 1e-6,
            slag_mass: 1e-8,
            product_phase: 1e-9,
            monodromy: 1e-8,
        }
    }
}

impl Tolerances {
    fn fields(&mut self) -> [(&'static str, &mut f64); 14] {
        [
            ("surface", &mut self.surface),
            ("alignment", &mut self.alignment),
            ("recovery", &mut self.recovery),
            ("circle", &mut self.circle),
            ("contour", &mut self.contour),
            ("recurrence", &mut self.recurrence),
            ("homology", &mut self.homology),
            ("drift", &mut self.drift),
            ("asymptotic", &mut self.asymptotic),
            ("fubini", &mut self.fubini),
            ("slag_phase", &mut self.slag_phase),
            ("slag_mass", &mut self.slag_mass),
            ("product_phase", &mut self.product_phase),
            ("monodromy", &mut self.monodromy),
        ]
    }

    pub fn from_config(cfg: &Config) -> CliResult<Self> {
        let mut t = Self::default();
        if let Some(all) = cfg.f64_opt("tol.all")? {
            t.override_all(all)?;
        }
        for (name, slot) in t.fields() {
            *slot = cfg.positive_or(&format!("tol.{name}"), *slot)?;
        }
        Ok(t)
    }

    pub fn override_all(&mut self, value: f64) -> CliResult<()> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(CliError::ConfigInvalid(format!("tolerance must be positive, got {value}")));
        }
        for (name, slot) in self.fields() {
            if name != "asymptotic" {
                *slot = value;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    P1(P1Scenario),
    Product(ProductScenario),
    Surface(SurfaceScenario),
    Elliptic(EllipticScenario),
    Mirror(MirrorScenario),
    Slag(SlagScenario),
    VerifyAll(VerifyAll),
}

pub const KINDS: [&str; 7] = ["p1", "product", "surface", "elliptic", "mirror", "slag", "verify-all"];

impl Scenario {
    /// Validate `cfg` against the schema of its `kind`. Nothing is computed.
    pub fn from_config(cfg: &Config) -> CliResult<Self> {
        let kind = cfg
            .string("kind")?
            .ok_or_else(|| CliError::ConfigInvalid("missing key kind".into()))?;
        let tol = Tolerances::from_config(cfg)?;
        let s = match kind.as_str() {
            "p1" => Scenario::P1(P1Scenario::parse(cfg, &tol)?),
            "product" => Scenario::Product(ProductScenario::parse(cfg, &tol)?),
            "surface" => Scenario::Surface(SurfaceScenario::parse(cfg, &tol)?),
            "elliptic" => Scenario::Elliptic(EllipticScenario::parse(cfg, &tol)?),
            "mirror" => Scenario::Mirror(MirrorScenario::parse(cfg, &tol)?),
            "slag" => Scenario::Slag(SlagScenario::parse(cfg, &tol)?),
            "verify-all" => Scenario::VerifyAll(VerifyAll::parse(cfg, tol)?),
            other => {
                return Err(CliError::ConfigInvalid(format!(
                    "kind must be one of {}, got {other}",
                    KINDS.join(", ")
                )))
            }
        };
        cfg.finish()?;
        Ok(s)
    }

    pub fn run(&self) -> CliResult<Vec<ReportRecord>> {
        match self {
            Scenario::P1(s) => s.run(),
            Scenario::Product(s) => s.run(),
            Scenario::Surface(s) => s.run(),
            Scenario::Elliptic(s) => s.run(),
            Scenario::Mirror(s) => s.run(),
            Scenario::Slag(s) => s.run(),
            Scenario::VerifyAll(s) => s.run(),
        }
    }
}

/// `-K..=K` from a positive half-width.
pub(crate) fn window_of(cfg: &Config, key: &str, default: i64) -> CliResult<i64> {
    let k = cfg.int_or(key, default)?;
    if !(0..=64).contains(&k) {
        return Err(CliError::ConfigInvalid(format!("{key}: window half-width must be in 0..=64, got {k}")));
    }
    Ok(k)
}

pub(crate) fn rel(a: stabforge_core::Complex64, b: stabforge_core::Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}
