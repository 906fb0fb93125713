//! Central charges on `P^1 x P^1` and on products of elliptic curves.
//!
//! `Z_{B,H}(E) = -∫ e^{-(B + iH)} ch(E)` is evaluated in the truncated ring
//! `R[D1, D2]/(D1^2, D2^2)` with `D1·D2 = 1`, generically over any
//! commutative ring so the same code runs in floating point, exact
//! Gaussian rationals and symbolic polynomials.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::derived::{FactorClass, FactorSymbol};
use crate::error::{Error, Result};
use crate::p1::StabP1;

/// Commutative ring with unit.
pub trait Ring:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Ring for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

pub type GaussRational = Complex<Ratio<i64>>;

impl Ring for GaussRational {
    fn from_i64(v: i64) -> Self {
        Complex::new(Ratio::from_integer(v), Ratio::zero())
    }
}

/// `a + b1 D1 + b2 D2 + c D1 D2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub unit: T,
    pub d1: T,
    pub d2: T,
    pub d12: T,
}

impl<T: Ring> Truncated<T> {
    /// `e^x` for `x = x1 D1 + x2 D2`: `1 + x + x1 x2 D1 D2` (since `x^2/2 = x1 x2 D1 D2`).
    pub fn exp_nilpotent(x1: T, x2: T) -> Self {
        Self {
            unit: T::one(),
            d12: x1.clone() * x2.clone(),
            d1: x1,
            d2: x2,
        }
    }
}

impl<T: Ring> Mul for Truncated<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            unit: self.unit.clone() * o.unit.clone(),
            d1: self.unit.clone() * o.d1.clone() + self.d1.clone() * o.unit.clone(),
            d2: self.unit.clone() * o.d2.clone() + self.d2.clone() * o.unit.clone(),
            d12: self.unit * o.d12 + self.d12 * o.unit + self.d1 * o.d2 + self.d2 * o.d1,
        }
    }
}

/// `B = b1 D1 + b2 D2`, `H = h1 D1 + h2 D2` with `h1, h2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceChargeData {
    pub b1: f64,
    pub b2: f64,
    pub h1: f64,
    pub h2: f64,
}

impl SurfaceChargeData {
    pub fn new(b1: f64, b2: f64, h1: f64, h2: f64) -> Result<Self> {
        if !(h1 > 0.0 && h2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "H = ({h1}, {h2}) is not ample"
            )));
        }
        Ok(Self { b1, b2, h1, h2 })
    }

    pub fn beta1(&self) -> Complex64 {
        Complex64::new(self.b1, self.h1)
    }

    pub fn beta2(&self) -> Complex64 {
        Complex64::new(self.b2, self.h2)
    }
}

/// Chern character `(r, c1 = c1a D1 + c1b D2, ch2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub r: i64,
    pub c1a: i64,
    pub c1b: i64,
    pub ch2: Ratio<i64>,
}

impl SurfaceClass {
    pub fn new(r: i64, c1a: i64, c1b: i64, ch2: Ratio<i64>) -> Self {
        Self { r, c1a, c1b, ch2 }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0, Ratio::zero())
    }

    /// `O(k1, k2)`.
    pub fn line_bundle(k1: i64, k2: i64) -> Self {
        Self::new(1, k1, k2, Ratio::from_integer(k1 * k2))
    }

    /// Point class.
    pub fn point() -> Self {
        Self::new(0, 0, 0, Ratio::one())
    }

    /// `E1 ⊠ E2` for factor classes `(r, d)`.
    pub fn external(e1: FactorClass, e2: FactorClass) -> Self {
        Self::new(
            e1.rank * e2.rank,
            e2.rank * e1.degree,
            e1.rank * e2.degree,
            Ratio::from_integer(e1.degree * e2.degree),
        )
    }
}

impl Add for SurfaceClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.r + o.r, self.c1a + o.c1a, self.c1b + o.c1b, self.ch2 + o.ch2)
    }
}

/// Ring that can represent `ch2 ∈ Q`.
pub trait RingWithRationals: Ring {
    fn from_ratio(v: Ratio<i64>) -> Self;
}

impl RingWithRationals for Complex64 {
    fn from_ratio(v: Ratio<i64>) -> Self {
        Complex64::new(*v.numer() as f64 / *v.denom() as f64, 0.0)
    }
}

impl RingWithRationals for GaussRational {
    fn from_ratio(v: Ratio<i64>) -> Self {
        Complex::new(v, Ratio::zero())
    }
}

/// `-(D1 D2 coefficient of e^{-(β1 D1 + β2 D2)} ch)` with `βi = bi + i hi`.
pub fn charge_bh_in<T: RingWithRationals>(beta1: T, beta2: T, cls: &SurfaceClass) -> T {
    let ch = Truncated {
        unit: T::from_i64(cls.r),
        d1: T::from_i64(cls.c1a),
        d2: T::from_i64(cls.c1b),
        d12: T::from_ratio(cls.ch2),
    };
    let twist = Truncated::exp_nilpotent(-beta1, -beta2);
    -(twist * ch).d12
}

pub fn charge_bh(d: &SurfaceChargeData, cls: &SurfaceClass) -> Complex64 {
    charge_bh_in(d.beta1(), d.beta2(), cls)
}

/// Factor charge `Z_i(E) = -deg + (b_i + i h_i) rank` on `P^1`.
pub fn factor_charge_in<T: Ring>(beta: T, e: FactorClass) -> T {
    beta * T::from_i64(e.rank) - T::from_i64(e.degree)
}

/// Polynomial in eight commuting variables with Gaussian-rational
/// coefficients, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(BTreeMap<[u8; POLY_VARS], GaussRational>);

pub const POLY_VARS: usize = 8;

impl Poly {
    pub fn var(i: usize) -> Self {
        let mut e = [0u8; POLY_VARS];
        e[i] = 1;
        Self(BTreeMap::from([(e, GaussRational::one())]))
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert([0u8; POLY_VARS], c);
        }
        Self(m)
    }

    pub fn imag_unit() -> Self {
        Self::constant(Complex::new(Ratio::zero(), Ratio::one()))
    }

    fn normalized(mut self) -> Self {
        self.0.retain(|_, c| !c.is_zero());
        self
    }

    pub fn terms(&self) -> usize {
        self.0.len()
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Self(BTreeMap::new())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Self::constant(GaussRational::one())
    }
}

impl Add for Poly {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (e, c) in o.0 {
            let slot = self.0.entry(e).or_insert_with(GaussRational::zero);
            *slot += c;
        }
        self.normalized()
    }
}

impl Neg for Poly {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.into_iter().map(|(e, c)| (e, -c)).collect())
    }
}

impl Sub for Poly {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Poly {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out: BTreeMap<[u8; POLY_VARS], GaussRational> = BTreeMap::new();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &o.0 {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb) {
                    *x += y;
                }
                let slot = out.entry(e).or_insert_with(GaussRational::zero);
                *slot += ca * cb;
            }
        }
        Self(out).normalized()
    }
}

impl Ring for Poly {
    fn from_i64(v: i64) -> Self {
        Self::constant(GaussRational::from_i64(v))
    }
}

impl RingWithRationals for Poly {
    fn from_ratio(v: Ratio<i64>) -> Self {
        Self::constant(Complex::new(v, Ratio::zero()))
    }
}

/// `Z_{B,H}(E1 ⊠ E2) + Z_1(E1) Z_2(E2)` as a polynomial in
/// `(b1, b2, h1, h2, r1, d1, r2, d2)`. It vanishes identically.
///
/// The external product is expanded symbolically:
/// `ch(E1 ⊠ E2) = (r1 + d1 D1)(r2 + d2 D2)`.
pub fn decomposition_defect_polynomial() -> Poly {
    let v = Poly::var;
    let i = Poly::imag_unit();
    let beta1 = v(0) + i.clone() * v(2);
    let beta2 = v(1) + i * v(3);
    let (r1, d1, r2, d2) = (v(4), v(5), v(6), v(7));
    let ch = Truncated {
        unit: r1.clone(),
        d1: d1.clone(),
        d2: Poly::zero(),
        d12: Poly::zero(),
    } * Truncated {
        unit: r2.clone(),
        d1: Poly::zero(),
        d2: d2.clone(),
        d12: Poly::zero(),
    };
    let twist = Truncated::exp_nilpotent(-beta1.clone(), -beta2.clone());
    let z = -(twist * ch).d12;
    let z1 = beta1 * r1 - d1;
    let z2 = beta2 * r2 - d2;
    z + z1 * z2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub e1: FactorClass,
    pub e2: FactorClass,
    pub surface: Complex64,
    pub product: Complex64,
}

/// `Z_{B,H}(E1 ⊠ E2) = -Z_1(E1) Z_2(E2)` to `1e-12` relative on the samples.
pub fn product_decomposition_check(
    d: &SurfaceChargeData,
    samples: &[(FactorClass, FactorClass)],
) -> std::result::Result<usize, DecompositionWitness> {
    for &(e1, e2) in samples {
        let surface = charge_bh(d, &SurfaceClass::external(e1, e2));
        let product = -factor_charge_in(d.beta1(), e1) * factor_charge_in(d.beta2(), e2);
        let scale = factor_charge_in(d.beta1(), e1).norm() * factor_charge_in(d.beta2(), e2).norm();
        if (surface - product).norm() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(DecompositionWitness {
                e1,
                e2,
                surface,
                product,
            });
        }
    }
    Ok(samples.len())
}

/// Same check in exact arithmetic for rational `B`, `H`.
pub fn product_decomposition_exact(
    b: [Ratio<i64>; 2],
    h: [Ratio<i64>; 2],
    samples: &[(FactorClass, FactorClass)],
) -> std::result::Result<usize, (FactorClass, FactorClass)> {
    let beta1 = GaussRational::new(b[0], h[0]);
    let beta2 = GaussRational::new(b[1], h[1]);
    for &(e1, e2) in samples {
        let surface = charge_bh_in(beta1, beta2, &SurfaceClass::external(e1, e2));
        let product = -factor_charge_in(beta1, e1) * factor_charge_in(beta2, e2);
        if surface != product {
            return Err((e1, e2));
        }
    }
    Ok(samples.len())
}

/// `σ_{τ1}·c1 × σ_{τ2}·c2` realized as `σ_{B,H}·(c1 + c2 + iπ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeomProduct {
    pub sigma1: StabP1,
    pub sigma2: StabP1,
    pub data: SurfaceChargeData,
    pub twist: Complex64,
}

pub fn geom_product(tau1: Complex64, c1: Complex64, tau2: Complex64, c2: Complex64) -> Result<GeomProduct> {
    let sigma1 = StabP1::geometric(tau1, c1)?;
    let sigma2 = StabP1::geometric(tau2, c2)?;
    Ok(GeomProduct {
        sigma1,
        sigma2,
        data: SurfaceChargeData::new(tau1.re, tau2.re, tau1.im, tau2.im)?,
        twist: c1 + c2 + Complex64::new(0.0, PI),
    })
}

/// The four families of stable objects compared across the two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StableFamily {
    LineBundle,
    LineTimesPoint,
    PointTimesLine,
    Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseWindowSample {
    pub family: StableFamily,
    pub e1: FactorSymbol,
    pub e2: FactorSymbol,
    pub factor_phase_sum: f64,
    /// Phase of `E` for `σ_{B,H}`, normalized into the window the family uses.
    pub surface_phase: f64,
    pub in_window: bool,
    /// `factor_phase_sum - Im(twist)/π - surface_phase`, expected to be 0.
    pub offset: f64,
}

impl GeomProduct {
    fn window(family: StableFamily) -> (f64, f64, bool) {
        match family {
            StableFamily::LineBundle => (-1.0, 1.0, false),
            StableFamily::LineTimesPoint | StableFamily::PointTimesLine => (0.0, 1.0, false),
            StableFamily::Point => (1.0, 1.0, true),
        }
    }

    /// Compare the factor phase sum of `e1 ⊠ e2` with its `σ_{B,H}` phase.
    pub fn phase_sample(&self, e1: FactorSymbol, e2: FactorSymbol) -> Result<PhaseWindowSample> {
        let family = match (e1, e2) {
            (FactorSymbol::Line(_), FactorSymbol::Line(_)) => StableFamily::LineBundle,
            (FactorSymbol::Line(_), FactorSymbol::Sky) => StableFamily::LineTimesPoint,
            (FactorSymbol::Sky, FactorSymbol::Line(_)) => StableFamily::PointTimesLine,
            (FactorSymbol::Sky, FactorSymbol::Sky) => StableFamily::Point,
        };
        let sum = self.sigma1.symbol_phase(e1)? + self.sigma2.symbol_phase(e2)?;
        let z = charge_bh(&self.data, &SurfaceClass::external(e1.class(), e2.class()));
        let mut surface_phase = z.arg() / PI;
        if surface_phase <= -1.0 {
            surface_phase += 2.0;
        }
        let (lo, hi, exact) = Self::window(family);
        let in_window = if exact {
            (surface_phase - lo).abs() < 1e-12
        } else {
            surface_phase > lo && surface_phase < hi
        };
        Ok(PhaseWindowSample {
            family,
            e1,
            e2,
            factor_phase_sum: sum,
            surface_phase,
            in_window,
            offset: sum - self.twist.im / PI - surface_phase,
        })
    }

    /// All four families over line-bundle degrees in `degrees`.
    pub fn phase_windows(&self, degrees: std::ops::RangeInclusive<i64>) -> Result<Vec<PhaseWindowSample>> {
        let syms: Vec<FactorSymbol> = degrees
            .map(FactorSymbol::Line)
            .chain(std::iter::once(FactorSymbol::Sky))
            .collect();
        let mut out = Vec::new();
        for &a in &syms {
            for &b in &syms {
                out.push(self.phase_sample(a, b)?);
            }
        }
        Ok(out)
    }
}

/// Factor charge `e^c (-d + τ r)` of a geometric condition on an elliptic curve.
pub fn elliptic_factor_charge(tau: Complex64, c: Complex64, e: FactorClass) -> Complex64 {
    c.exp() * (tau * e.rank as f64 - e.degree as f64)
}

/// `e^{c1 + c2 + iπ} · (-1) · Π (-d_i + τ_i r_i)`.
pub fn elliptic_product_charge(
    tau1: Complex64,
    c1: Complex64,
    e1: FactorClass,
    tau2: Complex64,
    c2: Complex64,
    e2: FactorClass,
) -> Complex64 {
    let twist = (c1 + c2 + Complex64::new(0.0, PI)).exp();
    -twist
        * (tau1 * e1.rank as f64 - e1.degree as f64)
        * (tau2 * e2.rank as f64 - e2.degree as f64)
}

/// Phase of a stable class on an elliptic curve: `Im c/π` plus the argument
/// of `-d + τ r` taken in `(0, 1]` for sheaves and `(1, 2]` for their shifts.
pub fn elliptic_phase(tau: Complex64, c: Complex64, e: FactorClass) -> Result<f64> {
    if !elliptic_factor_stable(e.rank, e.degree)? {
        return Err(Error::NotStable(format!("({}, {})", e.rank, e.degree)));
    }
    let mut theta = (tau * e.rank as f64 - e.degree as f64).arg() / PI;
    if theta <= 0.0 {
        theta += 2.0;
    }
    Ok(c.im / PI + theta)
}

/// Stable classes on an elliptic curve are exactly the primitive ones.
pub fn elliptic_factor_stable(r: i64, d: i64) -> Result<bool> {
    if r == 0 && d == 0 {
        return Err(Error::ZeroClass);
    }
    Ok(r.abs().gcd(&d.abs()) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn line_bundle_charge_factorizes() {
        let d = SurfaceChargeData::new(0.3, -1.2, 0.7, 2.5).unwrap();
        for k1 in -3..=3 {
            for k2 in -3..=3 {
                let z = charge_bh(&d, &SurfaceClass::line_bundle(k1, k2));
                let expect = -(c(-k1 as f64 + d.b1, d.h1)) * c(-k2 as f64 + d.b2, d.h2);
                assert!((z - expect).norm() < 1e-12 * expect.norm());
            }
        }
    }

    #[test]
    fn pushforward_and_zero() {
        let d = SurfaceChargeData::new(0.4, 0.9, 1.1, 0.6).unwrap();
        let z = charge_bh(&d, &SurfaceClass::new(0, 1, 0, Ratio::from_integer(3)));
        assert!((z - (c(-3.0, 0.0) + c(d.b2, d.h2))).norm() < 1e-14);
        assert_eq!(charge_bh(&d, &SurfaceClass::zero()), c(0.0, 0.0));
        let d0 = SurfaceChargeData::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(charge_bh(&d0, &SurfaceClass::line_bundle(0, 0)), c(1.0, 0.0));
    }

    #[test]
    fn charge_is_additive_and_half_integral_ch2_works() {
        let d = SurfaceChargeData::new(0.25, 0.5, 1.5, 0.75).unwrap();
        let a = SurfaceClass::new(2, 1, -1, Ratio::new(1, 2));
        let b = SurfaceClass::line_bundle(3, -2);
        let lhs = charge_bh(&d, &(a + b));
        let rhs = charge_bh(&d, &a) + charge_bh(&d, &b);
        assert!((lhs - rhs).norm() < 1e-12);
        let exact = charge_bh_in(
            GaussRational::new(Ratio::new(1, 4), Ratio::new(3, 2)),
            GaussRational::new(Ratio::new(1, 2), Ratio::new(3, 4)),
            &a,
        );
        let f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        assert!((c(f(exact.re), f(exact.im)) - charge_bh(&d, &a)).norm() < 1e-14);
    }

    #[test]
    fn decomposition_is_a_polynomial_identity() {
        let defect = decomposition_defect_polynomial();
        assert!(defect.is_zero(), "{} nonzero terms", defect.terms());
    }

    #[test]
    fn decomposition_with_skyscraper_factor() {
        let d = SurfaceChargeData::new(-0.2, 0.35, 0.8, 1.9).unwrap();
        let pt = FactorClass::point();
        assert_eq!(factor_charge_in(d.beta2(), pt), c(-1.0, 0.0));
        for e1 in [FactorClass::line_bundle(2), FactorClass::point(), FactorClass { rank: 3, degree: -1 }] {
            let z = charge_bh(&d, &SurfaceClass::external(e1, pt));
            assert!((z - factor_charge_in(d.beta1(), e1)).norm() < 1e-13);
        }
        let samples: Vec<_> = (-2..=2)
            .flat_map(|k| [(FactorClass::line_bundle(k), pt), (pt, FactorClass::line_bundle(k))])
            .collect();
        assert!(product_decomposition_check(&d, &samples).is_ok());
        assert!(product_decomposition_exact(
            [Ratio::new(-1, 5), Ratio::new(7, 20)],
            [Ratio::new(4, 5), Ratio::new(19, 10)],
            &samples
        )
        .is_ok());
    }

    #[test]
    fn geom_product_phase_examples() {
        let gp = geom_product(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)).unwrap();
        let pt = gp.phase_sample(FactorSymbol::Sky, FactorSymbol::Sky).unwrap();
        assert!((pt.factor_phase_sum - 2.0).abs() < 1e-15);
        assert!(pt.in_window && pt.offset.abs() < 1e-12);
        let o = gp.phase_sample(FactorSymbol::Line(0), FactorSymbol::Line(0)).unwrap();
        assert!((o.factor_phase_sum - 1.0).abs() < 1e-15);
        assert!(o.in_window);

        let gp = geom_product(c(0.4, 0.3), c(0.2, 0.5), c(-1.3, 2.0), c(-0.1, -0.2)).unwrap();
        for s in gp.phase_windows(-6..=6).unwrap() {
            assert!(s.in_window, "{s:?}");
            assert!(s.offset.abs() < 1e-12, "{s:?}");
        }
    }

    #[test]
    fn elliptic_examples() {
        let (c1, c2) = (c(0.3, -0.2), c(-0.1, 0.9));
        let pt = FactorClass::point();
        let z = elliptic_product_charge(c(0.2, 1.0), c1, pt, c(0.5, 0.5), c2, pt);
        assert!((z - (c1 + c2).exp()).norm() < 1e-14);

        let o = FactorClass::line_bundle(0);
        let i = c(0.0, 1.0);
        let z = elliptic_product_charge(i, c1, o, i, c2, o);
        let direct = (c1 + c2).exp() * (-1.0) * c(-1.0, 0.0) * (i * i);
        assert!((z - direct).norm() < 1e-14);
        assert_eq!(
            elliptic_product_charge(i, c1, FactorClass { rank: 0, degree: 0 }, i, c2, o),
            c(0.0, 0.0)
        );

        for d in -5..=5 {
            assert!(elliptic_factor_stable(1, d).unwrap());
        }
        assert!(!elliptic_factor_stable(2, 4).unwrap());
        assert!(elliptic_factor_stable(0, 1).unwrap());
        assert_eq!(elliptic_factor_stable(0, 0), Err(Error::ZeroClass));
    }

    #[test]
    fn elliptic_phases_add() {
        let (t1, t2) = (c(0.3, 1.2), c(-0.7, 0.4));
        let (c1, c2) = (c(0.1, 0.2), c(0.0, -0.3));
        for e1 in [FactorClass { rank: 2, degree: 1 }, FactorClass::point(), FactorClass::line_bundle(-3)] {
            for e2 in [FactorClass { rank: 3, degree: -2 }, FactorClass::point()] {
                let sum = elliptic_phase(t1, c1, e1).unwrap() + elliptic_phase(t2, c2, e2).unwrap();
                let z = elliptic_factor_charge(t1, c1, e1) * elliptic_factor_charge(t2, c2, e2);
                let rotated = z * Complex64::from_polar(1.0, -PI * sum);
                assert!(rotated.im.abs() < 1e-12 * z.norm() && rotated.re > 0.0);
                let zp = elliptic_product_charge(t1, c1, e1, t2, c2, e2);
                assert!((zp - z).norm() < 1e-12 * z.norm());
            }
        }
        assert!(elliptic_phase(t1, c1, FactorClass { rank: 2, degree: 2 }).is_err());
    }
}
