//! Numerical K-lattice and graded Hom dimensions on `(P^1)^n`.
//!
//! Objects are modelled by their generators: external products of line
//! bundles `O(m)` and a marked skyscraper `O_x` on each factor, shifted
//! homologically. Graded Hom dimensions between generators follow from the
//! cohomology of `O(d)` on `P^1` and the Künneth formula.
//!
//! K-classes are stored in the tensor basis `e_S`, where `S` is the set of
//! factors carrying the point class. Factor `l` (0-based) corresponds to bit
//! `n - 1 - l` of the coordinate index, so that external products are
//! Kronecker products of coordinate vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Rank and degree of a class on a single `P^1` (or elliptic curve) factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FactorClass {
    pub rank: i64,
    pub degree: i64,
}

impl FactorClass {
    pub const fn new(rank: i64, degree: i64) -> Self {
        Self { rank, degree }
    }

    /// `[O(m)] = (1, m)`.
    pub const fn line_bundle(m: i64) -> Self {
        Self::new(1, m)
    }

    /// `[O_x] = (0, 1)`.
    pub const fn point() -> Self {
        Self::new(0, 1)
    }

    pub fn sup_norm(&self) -> i64 {
        self.rank.abs().max(self.degree.abs())
    }
}

impl Add for FactorClass {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.rank + rhs.rank, self.degree + rhs.degree)
    }
}

impl Sub for FactorClass {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.rank - rhs.rank, self.degree - rhs.degree)
    }
}

impl Neg for FactorClass {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.rank, -self.degree)
    }
}

impl Mul<FactorClass> for i64 {
    type Output = FactorClass;
    fn mul(self, rhs: FactorClass) -> FactorClass {
        FactorClass::new(self * rhs.rank, self * rhs.degree)
    }
}

/// One tensor factor of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorSymbol {
    /// The line bundle `O(m)`.
    Line(i64),
    /// The skyscraper sheaf at the marked point.
    Sky,
}

impl FactorSymbol {
    pub fn class(&self) -> FactorClass {
        match *self {
            FactorSymbol::Line(m) => FactorClass::line_bundle(m),
            FactorSymbol::Sky => FactorClass::point(),
        }
    }
}

impl fmt::Display for FactorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorSymbol::Line(m) => write!(f, "O({m})"),
            FactorSymbol::Sky => write!(f, "O_x"),
        }
    }
}

/// Graded dimensions `k -> dim Hom^k(A, B)`, with `Hom^k(A, B) = Hom(A, B[k])`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradedDims(BTreeMap<i64, u64>);

impl GradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut out = Self::new();
        for (k, d) in pairs {
            out.add(k, d);
        }
        out
    }

    fn add(&mut self, degree: i64, dim: u64) {
        if dim > 0 {
            *self.0.entry(degree).or_insert(0) += dim;
        }
    }

    pub fn get(&self, degree: i64) -> u64 {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_k (-1)^k dim Hom^k`.
    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .map(|(&k, &d)| if k.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Lowest degree with a nonzero dimension.
    pub fn min_degree(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    /// First degree `<= bound` carrying a nonzero dimension.
    pub fn first_at_or_below(&self, bound: i64) -> Option<(i64, u64)> {
        self.0.range(..=bound).next().map(|(&k, &d)| (k, d))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.0.iter().map(|(&k, &d)| (k, d))
    }

    /// Product of Poincaré polynomials in the degree variable.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (a, da) in self.iter() {
            for (b, db) in other.iter() {
                out.add(a + b, da * db);
            }
        }
        out
    }

    /// Relabel degree `k` as `k - offset`.
    pub fn lowered_by(&self, offset: i64) -> Self {
        Self(self.0.iter().map(|(&k, &d)| (k - offset, d)).collect())
    }
}

/// Graded dimensions of `Hom^*(a, b)` on a single `P^1`.
pub fn factor_hom_degrees(a: FactorSymbol, b: FactorSymbol) -> GradedDims {
    use FactorSymbol::*;
    match (a, b) {
        (Line(a), Line(b)) => {
            let d = b - a;
            GradedDims::from_pairs([(0, (d + 1).max(0) as u64), (1, (-d - 1).max(0) as u64)])
        }
        (Line(_), Sky) => GradedDims::from_pairs([(0, 1)]),
        (Sky, Line(_)) => GradedDims::from_pairs([(1, 1)]),
        (Sky, Sky) => GradedDims::from_pairs([(0, 1), (1, 1)]),
    }
}

/// A shifted external product of factor symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub factors: Vec<FactorSymbol>,
    pub shift: i64,
}

impl Generator {
    pub fn new(factors: Vec<FactorSymbol>, shift: i64) -> Self {
        Self { factors, shift }
    }

    /// `O(m_1, ..., m_n)[shift]`.
    pub fn line_bundle(degrees: &[i64], shift: i64) -> Self {
        Self::new(degrees.iter().map(|&m| FactorSymbol::Line(m)).collect(), shift)
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn shifted(&self, by: i64) -> Self {
        Self::new(self.factors.clone(), self.shift + by)
    }

    pub fn unshifted(&self) -> Self {
        Self::new(self.factors.clone(), 0)
    }

    /// Class of the underlying sheaf, ignoring the shift.
    pub fn sheaf_class(&self) -> KClass {
        KClass::external(self.factors.iter().map(FactorSymbol::class))
    }

    pub fn k_class(&self) -> KClass {
        let c = self.sheaf_class();
        if self.shift.rem_euclid(2) == 0 {
            c
        } else {
            -c
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("⊠")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "[{}]", self.shift)
    }
}

/// Graded dimensions of `Hom^*(g1, g2)` via Künneth, adjusted for shifts.
///
/// Panics if the generators live on different numbers of factors.
pub fn hom_degrees(g1: &Generator, g2: &Generator) -> GradedDims {
    assert_eq!(g1.n(), g2.n(), "generators on different products");
    let unshifted = g1
        .factors
        .iter()
        .zip(&g2.factors)
        .fold(GradedDims::from_pairs([(0, 1)]), |acc, (&a, &b)| {
            acc.convolve(&factor_hom_degrees(a, b))
        });
    unshifted.lowered_by(g2.shift - g1.shift)
}

/// A multi-index `I` in `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u8>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, l: usize) -> Self {
        let mut v = vec![0; n];
        v[l] = 1;
        Self(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `|I|`.
    pub fn weight(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    /// Componentwise partial order.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Coordinate index in the tensor basis (factor 0 is the high bit).
    pub fn mask(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn from_mask(n: usize, mask: usize) -> Self {
        Self((0..n).map(|l| ((mask >> (n - 1 - l)) & 1) as u8).collect())
    }

    /// All of `{0,1}^n` as a linear extension of the partial order:
    /// non-decreasing `|I|`, ties broken lexicographically.
    pub fn all(n: usize) -> Vec<Self> {
        let mut v: Vec<Self> = (0..1usize << n).map(|m| Self::from_mask(n, m)).collect();
        v.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(")")
    }
}

/// Element of the numerical Grothendieck lattice of `(P^1)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KClass {
    n: usize,
    coords: Vec<i64>,
}

impl KClass {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coords: vec![0; 1 << n],
        }
    }

    pub fn from_coords(n: usize, coords: Vec<i64>) -> Self {
        assert_eq!(coords.len(), 1 << n, "coordinate vector must have length 2^n");
        Self { n, coords }
    }

    pub fn from_factor(c: FactorClass) -> Self {
        Self::from_coords(1, vec![c.rank, c.degree])
    }

    /// External product of factor classes.
    pub fn external(factors: impl IntoIterator<Item = FactorClass>) -> Self {
        factors
            .into_iter()
            .map(Self::from_factor)
            .reduce(|acc, c| acc.external_product(&c))
            .expect("at least one factor")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Kronecker product of coordinate vectors.
    pub fn external_product(&self, other: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .flat_map(|&x| other.coords.iter().map(move |&y| x * y))
            .collect();
        Self {
            n: self.n + other.n,
            coords,
        }
    }

    pub fn sup_norm(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Whether factor `l` carries the point class in basis vector `index`.
    pub fn point_slot(n: usize, index: usize, l: usize) -> bool {
        (index >> (n - 1 - l)) & 1 == 1
    }

    /// Euler pairing `chi(x, y) = sum_k (-1)^k dim Hom^k`, extended bilinearly.
    ///
    /// On one factor `chi((r1, d1), (r2, d2)) = r1 r2 + r1 d2 - d1 r2`.
    pub fn euler_form(&self, other: &Self) -> i64 {
        assert_eq!(self.n, other.n);
        // Factor matrix indexed [point_slot(x)][point_slot(y)].
        const M: [[i64; 2]; 2] = [[1, 1], [-1, 0]];
        let n = self.n;
        let mut total = 0;
        for (s, &x) in self.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (t, &y) in other.coords.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let w: i64 = (0..n)
                    .map(|l| {
                        M[Self::point_slot(n, s, l) as usize][Self::point_slot(n, t, l) as usize]
                    })
                    .product();
                total += x * y * w;
            }
        }
        total
    }

    /// Coordinates in the line-bundle basis `{[L_I]}` with
    /// `L_I = O(k_1 + i_1, ..., k_n + i_n)`, indexed by `I.mask()`.
    ///
    /// Per factor, `e_O = (k+1)[O(k)] - k[O(k+1)]` and `e_pt = [O(k+1)] - [O(k)]`.
    pub fn line_bundle_coords(&self, base_ks: &[i64]) -> Vec<i64> {
        assert_eq!(base_ks.len(), self.n);
        let n = self.n;
        // T[l][slot][bit]: coefficient of O(k_l + bit) in the basis vector `slot`.
        let t: Vec<[[i64; 2]; 2]> = base_ks.iter().map(|&k| [[k + 1, -k], [-1, 1]]).collect();
        let mut out = vec![0; 1 << n];
        for (s, &x) in self.coords.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                let w: i64 = (0..n)
                    .map(|l| {
                        t[l][Self::point_slot(n, s, l) as usize][Self::point_slot(n, i, l) as usize]
                    })
                    .product();
                *slot += x * w;
            }
        }
        out
    }

    /// Inverse of [`KClass::line_bundle_coords`].
    pub fn from_line_bundle_coords(base_ks: &[i64], coeffs: &[i64]) -> Self {
        let n = base_ks.len();
        let mut out = Self::zero(n);
        for (mask, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let idx = MultiIndex::from_mask(n, mask);
            let degrees: Vec<i64> = base_ks
                .iter()
                .zip(idx.bits())
                .map(|(&k, &b)| k + b as i64)
                .collect();
            let g = Generator::line_bundle(&degrees, 0);
            out += &(g.sheaf_class() * c);
        }
        out
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        assert_eq!(self.n, rhs.n);
        KClass {
            n: self.n,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl AddAssign<&KClass> for KClass {
    fn add_assign(&mut self, rhs: &KClass) {
        assert_eq!(self.n, rhs.n);
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl Neg for KClass {
    type Output = KClass;
    fn neg(mut self) -> KClass {
        self.coords.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Mul<i64> for KClass {
    type Output = KClass;
    fn mul(mut self, rhs: i64) -> KClass {
        self.coords.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}

/// An object presented by a filtration with shifted generator subquotients.
/// The first entry is the bottom subquotient; an empty filtration is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalObject {
    pub n: usize,
    pub filtration: Vec<Generator>,
}

impl FormalObject {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            filtration: Vec::new(),
        }
    }

    pub fn new(n: usize, filtration: Vec<Generator>) -> Self {
        debug_assert!(filtration.iter().all(|g| g.n() == n));
        Self { n, filtration }
    }

    pub fn single(g: Generator) -> Self {
        Self::new(g.n(), vec![g])
    }

    pub fn k_class(&self) -> KClass {
        let mut acc = KClass::zero(self.n);
        for g in &self.filtration {
            acc += &g.k_class();
        }
        acc
    }

    /// Filtration of `self` followed by `top`.
    pub fn concat(&self, top: &FormalObject) -> FormalObject {
        assert_eq!(self.n, top.n);
        let mut filtration = self.filtration.clone();
        filtration.extend(top.filtration.iter().cloned());
        FormalObject::new(self.n, filtration)
    }
}
