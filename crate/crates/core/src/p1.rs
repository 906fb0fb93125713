//! Stability conditions on `D^b(P^1)`.
//!
//! Two families: the geometric conditions `σ_τ · c`, for which every line
//! bundle and the skyscraper are stable, and the algebraic conditions in
//! which only `O(k)` and `O(k+1)` (up to shift) are stable with a phase gap
//! of at least one.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::derived::{FactorClass, FactorSymbol, FormalObject, Generator};
use crate::error::{Error, Result};
use crate::hn::{self, HnFactor};

/// Default line-bundle window for enumerating geometric stable objects.
pub const DEFAULT_WINDOW: RangeInclusive<i64> = -8..=8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StabP1 {
    /// `σ_τ · c` with `Z(E) = e^c (-deg E + τ rank E)`.
    Geometric { tau: Complex64, c: Complex64 },
    /// `O(k)` has `Z = m0 e^{iπψ}`, `O(k+1)` has `Z = m1 e^{iπ(ψ+φ)}`.
    Algebraic {
        k: i64,
        psi: f64,
        phi: f64,
        m0: f64,
        m1: f64,
    },
}

impl StabP1 {
    pub fn geometric(tau: Complex64, c: Complex64) -> Result<Self> {
        let s = StabP1::Geometric { tau, c };
        s.validate()?;
        Ok(s)
    }

    pub fn algebraic(k: i64, psi: f64, phi: f64, m0: f64, m1: f64) -> Result<Self> {
        let s = StabP1::Algebraic {
            k,
            psi,
            phi,
            m0,
            m1,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StabP1::Geometric { tau, c } => {
                if !(tau.im > 0.0) || !tau.re.is_finite() || !c.re.is_finite() || !c.im.is_finite()
                {
                    return Err(Error::InvalidStability(format!(
                        "geometric datum needs Im(tau) > 0, got tau = {tau}"
                    )));
                }
            }
            StabP1::Algebraic {
                psi, phi, m0, m1, ..
            } => {
                if !psi.is_finite() || !(phi >= 1.0) || !(m0 > 0.0) || !(m1 > 0.0) {
                    return Err(Error::InvalidStability(format!(
                        "algebraic datum needs phi >= 1 and m0, m1 > 0, got phi = {phi}, m0 = {m0}, m1 = {m1}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_geometric(&self) -> bool {
        matches!(self, StabP1::Geometric { .. })
    }

    /// The charge as a linear functional: `(Z(1, 0), Z(0, 1))`.
    pub fn charge_functional(&self) -> (Complex64, Complex64) {
        match *self {
            StabP1::Geometric { tau, c } => {
                let e = c.exp();
                (e * tau, -e)
            }
            StabP1::Algebraic {
                k,
                psi,
                phi,
                m0,
                m1,
            } => {
                let z0 = Complex64::from_polar(m0, PI * psi);
                let z1 = Complex64::from_polar(m1, PI * (psi + phi));
                let k = k as f64;
                // Z(r, d) = (r(k+1) - d) Z0 + (d - rk) Z1
                ((k + 1.0) * z0 - k * z1, z1 - z0)
            }
        }
    }

    pub fn central_charge(&self, cls: FactorClass) -> Complex64 {
        let (rank_part, degree_part) = self.charge_functional();
        rank_part * cls.rank as f64 + degree_part * cls.degree as f64
    }

    pub fn is_stable_symbol(&self, s: FactorSymbol) -> bool {
        match *self {
            StabP1::Geometric { .. } => true,
            StabP1::Algebraic { k, .. } => {
                matches!(s, FactorSymbol::Line(m) if m == k || m == k + 1)
            }
        }
    }

    /// Stable symbols at shift 0. The window is ignored in the algebraic case.
    pub fn stable_symbols(&self, window: RangeInclusive<i64>) -> Vec<FactorSymbol> {
        match *self {
            StabP1::Geometric { .. } => window
                .map(FactorSymbol::Line)
                .chain(std::iter::once(FactorSymbol::Sky))
                .collect(),
            StabP1::Algebraic { k, .. } => vec![FactorSymbol::Line(k), FactorSymbol::Line(k + 1)],
        }
    }

    /// Phase of a stable symbol at shift 0.
    pub fn symbol_phase(&self, s: FactorSymbol) -> Result<f64> {
        match *self {
            StabP1::Geometric { tau, c } => {
                let base = c.im / PI;
                Ok(match s {
                    FactorSymbol::Sky => base + 1.0,
                    // arg(-m + τ) lies in (0, π) because Im τ > 0.
                    FactorSymbol::Line(m) => base + (tau - m as f64).arg() / PI,
                })
            }
            StabP1::Algebraic { k, psi, phi, .. } => match s {
                FactorSymbol::Line(m) if m == k => Ok(psi),
                FactorSymbol::Line(m) if m == k + 1 => Ok(psi + phi),
                other => Err(Error::NotStable(other.to_string())),
            },
        }
    }

    /// Lower end of the open phase window `(Im c / π, Im c / π + 1)` that
    /// holds all geometric line-bundle phases.
    pub fn geometric_base_phase(&self) -> Option<f64> {
        match *self {
            StabP1::Geometric { c, .. } => Some(c.im / PI),
            StabP1::Algebraic { .. } => None,
        }
    }
}

pub fn central_charge_p1(s: &StabP1, cls: FactorClass) -> Complex64 {
    s.central_charge(cls)
}

pub fn stable_objects_p1(s: &StabP1, window: RangeInclusive<i64>) -> Vec<Generator> {
    s.stable_symbols(window)
        .into_iter()
        .map(|sym| Generator::new(vec![sym], 0))
        .collect()
}

pub fn phase_p1(s: &StabP1, g: &Generator) -> Result<f64> {
    if g.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: g.n(),
        });
    }
    Ok(s.symbol_phase(g.factors[0])? + g.shift as f64)
}

/// HN filtration of an object of `D^b(P^1)` presented by stable subquotients.
///
/// In the geometric case every object of `D^b(P^1)` is a direct sum of
/// shifted line bundles and torsion sheaves, so the subquotients are read as
/// direct summands and simply sorted. In the algebraic case the subquotients
/// must be shifts of `O(k)` and `O(k+1)`, and they are rearranged across
/// vanishing extensions.
pub fn hn_p1(s: &StabP1, obj: &FormalObject) -> Result<Vec<HnFactor>> {
    if obj.n != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: obj.n,
        });
    }
    let sorted = match s {
        StabP1::Geometric { .. } => {
            let mut items: Vec<(f64, Generator)> = obj
                .filtration
                .iter()
                .map(|g| phase_p1(s, g).map(|p| (p, g.clone())))
                .collect::<Result<_>>()?;
            items.sort_by(|a, b| b.0.total_cmp(&a.0));
            items
        }
        StabP1::Algebraic { .. } => hn::rearrange(&obj.filtration, |g| {
            phase_p1(s, g).map_err(|_| Error::UnsupportedObject(g.to_string()))
        })?,
    };
    let factors = hn::group(sorted);
    hn::check_hom_vanishing(&factors)?;
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::FactorSymbol::{Line, Sky};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn alg(k: i64, psi: f64, phi: f64) -> StabP1 {
        StabP1::algebraic(k, psi, phi, 1.0, 1.0).unwrap()
    }

    #[test]
    fn constructors_enforce_invariants() {
        assert!(StabP1::geometric(c(0.3, 0.0), c(0.0, 0.0)).is_err());
        assert!(StabP1::algebraic(0, 0.0, 0.99, 1.0, 1.0).is_err());
        assert!(StabP1::algebraic(0, 0.0, 1.0, 1.0, 1.0).is_ok());
        assert!(StabP1::algebraic(0, 0.0, 1.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn central_charge_examples() {
        let g = StabP1::geometric(c(0.4, 1.3), c(0.0, 0.0)).unwrap();
        assert_eq!(g.central_charge(FactorClass::point()), c(-1.0, 0.0));

        let a = alg(0, 0.0, 1.0);
        assert!((a.central_charge(FactorClass::new(1, 0)) - c(1.0, 0.0)).norm() < 1e-15);
        // Z(O(2)) = 2 Z(O(1)) - Z(O), matching O -> O(1)^2 -> O(2).
        let z2 = a.central_charge(FactorClass::line_bundle(2));
        assert!((z2 - c(-3.0, 0.0)).norm() < 1e-12);
        let triangle = 2.0 * a.central_charge(FactorClass::line_bundle(1))
            - a.central_charge(FactorClass::line_bundle(0));
        assert!((z2 - triangle).norm() < 1e-12);
    }

    #[test]
    fn algebraic_charge_hits_generators() {
        let s = StabP1::algebraic(3, 0.2, 1.7, 2.5, 0.4).unwrap();
        let z0 = s.central_charge(FactorClass::line_bundle(3));
        let z1 = s.central_charge(FactorClass::line_bundle(4));
        assert!((z0 - Complex64::from_polar(2.5, 0.2 * PI)).norm() < 1e-12);
        assert!((z1 - Complex64::from_polar(0.4, 1.9 * PI)).norm() < 1e-12);
    }

    #[test]
    fn stable_object_examples() {
        let a = alg(3, 0.0, 1.0);
        assert_eq!(
            stable_objects_p1(&a, -1..=1),
            vec![Generator::line_bundle(&[3], 0), Generator::line_bundle(&[4], 0)]
        );
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 1..=0;
        assert_eq!(stable_objects_p1(&a, empty).len(), 2);

        let g = StabP1::geometric(c(0.0, 1.0), c(0.0, 0.0)).unwrap();
        let got: Vec<_> = stable_objects_p1(&g, -1..=1).into_iter().map(|g| g.factors[0]).collect();
        assert_eq!(got, vec![Line(-1), Line(0), Line(1), Sky]);
    }

    #[test]
    fn phase_examples() {
        let g = StabP1::geometric(c(0.0, 1.0), c(0.0, 0.0)).unwrap();
        assert_eq!(phase_p1(&g, &Generator::new(vec![Sky], 0)).unwrap(), 1.0);
        assert!((phase_p1(&g, &Generator::line_bundle(&[0], 0)).unwrap() - 0.5).abs() < 1e-15);

        let a = alg(0, 0.2, 1.5);
        assert!((phase_p1(&a, &Generator::line_bundle(&[1], 2)).unwrap() - 3.7).abs() < 1e-12);
        assert!(matches!(
            phase_p1(&a, &Generator::line_bundle(&[5], 0)),
            Err(Error::NotStable(_))
        ));
    }

    #[test]
    fn hn_examples() {
        let g = StabP1::geometric(c(0.0, 1.0), c(0.0, 0.0)).unwrap();
        let obj = FormalObject::new(
            1,
            vec![Generator::line_bundle(&[1], 0), Generator::new(vec![Sky], 0)],
        );
        let hn = hn_p1(&g, &obj).unwrap();
        assert_eq!(hn.len(), 2);
        assert_eq!(hn[0].phase, 1.0);
        assert_eq!(hn[0].parts[0].factors[0], Sky);
        assert!((hn[1].phase - c(-1.0, 1.0).arg() / PI).abs() < 1e-15);

        let a = alg(0, 0.0, 1.0);
        let obj = FormalObject::new(
            1,
            vec![Generator::line_bundle(&[0], 0), Generator::line_bundle(&[1], 0)],
        );
        let hn = hn_p1(&a, &obj).unwrap();
        assert_eq!(hn.len(), 2);
        assert_eq!(hn[0].parts, vec![Generator::line_bundle(&[1], 0)]);
        assert_eq!(hn[0].phase, 1.0);
        assert_eq!(hn[1].parts, vec![Generator::line_bundle(&[0], 0)]);

        let single = FormalObject::single(Generator::line_bundle(&[1], 3));
        let hn = hn_p1(&a, &single).unwrap();
        assert_eq!(hn.len(), 1);
        assert_eq!(hn[0].parts, single.filtration);
    }

    #[test]
    fn hn_rejects_foreign_generators_in_algebraic_case() {
        let a = alg(0, 0.0, 1.0);
        let obj = FormalObject::new(1, vec![Generator::new(vec![Sky], 0)]);
        assert!(matches!(hn_p1(&a, &obj), Err(Error::UnsupportedObject(_))));
    }
}
