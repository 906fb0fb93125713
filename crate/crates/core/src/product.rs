//! Product-type stability conditions on `D^b((P^1)^n)`.
//!
//! A tuple of `P^1` stability conditions with at most one geometric factor
//! determines a stability condition on the product whose charge is the
//! product of factor charges and whose stable objects are exactly the
//! external products of factor-stable objects.
//!
//! * Pure algebraic tuples: the shifted line bundles `L_I[p_I]` form a full
//!   Ext-exceptional collection and HN filtrations come from rearranging
//!   subquotients across vanishing extensions.
//! * One geometric factor: the heart is glued along the semiorthogonal
//!   decomposition given by the last algebraic factor, and the gluing
//!   hypothesis `Hom(A_0, A_1[<= 0]) = 0` is checked on generators.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::derived::{hom_degrees, FactorSymbol, FormalObject, Generator, KClass, MultiIndex};
use crate::error::{Error, Result};
use crate::hn::{self, HnFactor, PHASE_EPS};
use crate::p1::StabP1;

/// Shift placing phase `phase` into `(0, 1]`: `-ceil(phase - 1)`.
pub fn heart_shift(phase: f64) -> i64 {
    -((phase - 1.0).ceil() as i64)
}

/// `p_I = -ceil(φ_I - 1)` with `φ_I = φ + Σ i_l φ_l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftTable {
    pub base_phase: f64,
    pub steps: Vec<f64>,
    pub shifts: BTreeMap<MultiIndex, i64>,
}

impl ShiftTable {
    pub fn compute(base_phase: f64, steps: &[f64]) -> Self {
        let n = steps.len();
        let mut table = Self {
            base_phase,
            steps: steps.to_vec(),
            shifts: BTreeMap::new(),
        };
        for idx in MultiIndex::all(n) {
            let p = heart_shift(table.phase(&idx));
            table.shifts.insert(idx, p);
        }
        table
    }

    pub fn phase(&self, idx: &MultiIndex) -> f64 {
        self.base_phase
            + idx
                .bits()
                .iter()
                .zip(&self.steps)
                .map(|(&b, &s)| b as f64 * s)
                .sum::<f64>()
    }

    pub fn shift(&self, idx: &MultiIndex) -> i64 {
        self.shifts[idx]
    }

    pub fn shifted_phase(&self, idx: &MultiIndex) -> f64 {
        self.phase(idx) + self.shift(idx) as f64
    }
}

/// Data of a pure algebraic product condition: masses and phases of the
/// `L_I`, the shift table, and the shifted exceptional collection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureAlgebraic {
    pub base_ks: Vec<i64>,
    pub table: ShiftTable,
    /// `m_I`, indexed by `I.mask()`.
    pub masses: Vec<f64>,
    /// Linear extension of the partial order on `{0,1}^n`.
    pub order: Vec<MultiIndex>,
    /// `L_I[p_I]` listed in `order`.
    pub generators: Vec<Generator>,
}

impl PureAlgebraic {
    pub fn n(&self) -> usize {
        self.base_ks.len()
    }

    pub fn line_bundle(&self, idx: &MultiIndex) -> Generator {
        let degrees: Vec<i64> = self
            .base_ks
            .iter()
            .zip(idx.bits())
            .map(|(&k, &b)| k + b as i64)
            .collect();
        Generator::line_bundle(&degrees, 0)
    }

    /// Recognize `g` as a shift of some `L_I`.
    pub fn index_of(&self, g: &Generator) -> Option<MultiIndex> {
        if g.n() != self.n() {
            return None;
        }
        let bits = g
            .factors
            .iter()
            .zip(&self.base_ks)
            .map(|(s, &k)| match *s {
                FactorSymbol::Line(m) if m == k => Some(0u8),
                FactorSymbol::Line(m) if m == k + 1 => Some(1u8),
                _ => None,
            })
            .collect::<Option<Vec<u8>>>()?;
        Some(MultiIndex(bits))
    }

    /// `Z(L_I) = m_I e^{iπφ_I}`.
    pub fn charge(&self, idx: &MultiIndex) -> Complex64 {
        Complex64::from_polar(self.masses[idx.mask()], PI * self.table.phase(idx))
    }

    pub fn phase_of(&self, g: &Generator) -> Result<f64> {
        let idx = self
            .index_of(g)
            .ok_or_else(|| Error::NotStable(g.to_string()))?;
        Ok(self.table.phase(&idx) + g.shift as f64)
    }

    /// Charge of an arbitrary class through the line-bundle basis.
    pub fn charge_of_class(&self, cls: &KClass) -> Complex64 {
        cls.line_bundle_coords(&self.base_ks)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(mask, &c)| self.charge(&MultiIndex::from_mask(self.n(), mask)) * c as f64)
            .sum()
    }

    pub fn hn(&self, obj: &FormalObject) -> Result<Vec<HnFactor>> {
        let sorted = hn::rearrange(&obj.filtration, |g| {
            self.phase_of(g)
                .map_err(|_| Error::UnsupportedObject(g.to_string()))
        })?;
        let factors = hn::group(sorted);
        hn::check_hom_vanishing(&factors)?;
        Ok(factors)
    }

    /// `(index, phase of L_I, |Z(L_I)|)` for every `I`.
    pub fn stable_data(&self) -> Vec<StableDatum> {
        self.order
            .iter()
            .map(|idx| StableDatum {
                index: idx.clone(),
                phase: self.table.phase(idx),
                mass: self.masses[idx.mask()],
            })
            .collect()
    }
}

/// Build the pure algebraic product data from masses `m_I > 0`, a base phase
/// and phase steps `φ_l >= 1`.
pub fn build_pure_algebraic(
    base_ks: &[i64],
    masses: &[f64],
    base_phase: f64,
    steps: &[f64],
) -> Result<PureAlgebraic> {
    if let Some((factor, &value)) = steps.iter().enumerate().find(|(_, &s)| !(s >= 1.0)) {
        return Err(Error::InvalidPhaseStep { factor, value });
    }
    if let Some(m) = masses.iter().find(|&&m| !(m > 0.0)) {
        return Err(Error::InvalidParameter(format!("mass {m} is not positive")));
    }
    Ok(pure_algebraic_unchecked(base_ks, masses, base_phase, steps))
}

/// [`build_pure_algebraic`] without the `φ_l >= 1` check, for building
/// counterexamples.
pub fn pure_algebraic_unchecked(
    base_ks: &[i64],
    masses: &[f64],
    base_phase: f64,
    steps: &[f64],
) -> PureAlgebraic {
    let n = base_ks.len();
    assert_eq!(steps.len(), n);
    assert_eq!(masses.len(), 1 << n);
    let table = ShiftTable::compute(base_phase, steps);
    let order = MultiIndex::all(n);
    let mut out = PureAlgebraic {
        base_ks: base_ks.to_vec(),
        table,
        masses: masses.to_vec(),
        order,
        generators: Vec::new(),
    };
    out.generators = out
        .order
        .iter()
        .map(|idx| out.line_bundle(idx).shifted(out.table.shift(idx)))
        .collect();
    out
}

/// Offending pair for an Ext-exceptionality or vanishing check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomWitness {
    pub from: Generator,
    pub to: Generator,
    pub degree: i64,
    pub dim: u64,
}

impl std::fmt::Display for HomWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dim Hom^{}({}, {}) = {}",
            self.degree, self.from, self.to, self.dim
        )
    }
}

/// `Hom^{<=0}(E_i, E_j) = 0` for every ordered pair `i != j`.
pub fn ext_exceptional_check(generators: &[Generator]) -> std::result::Result<(), HomWitness> {
    for (i, a) in generators.iter().enumerate() {
        for (j, b) in generators.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some((degree, dim)) = hom_degrees(a, b).first_at_or_below(0) {
                return Err(HomWitness {
                    from: a.clone(),
                    to: b.clone(),
                    degree,
                    dim,
                });
            }
        }
    }
    Ok(())
}

/// `Ext^1(B, A) = 0` whenever `phase(A) < phase(B)`, over the given pairs
/// `(A, B)`. This is what lets any filtration be rearranged.
pub fn rearrangement_check<'a>(
    pairs: impl IntoIterator<Item = ((&'a Generator, f64), (&'a Generator, f64))>,
) -> std::result::Result<usize, HomWitness> {
    let mut checked = 0;
    for ((a, pa), (b, pb)) in pairs {
        if pa + PHASE_EPS < pb {
            checked += 1;
            let dim = hom_degrees(b, a).get(1);
            if dim != 0 {
                return Err(HomWitness {
                    from: b.clone(),
                    to: a.clone(),
                    degree: 1,
                    dim,
                });
            }
        }
    }
    Ok(checked)
}

/// A tuple `(σ_1, ..., σ_n)` together with a global `C`-action parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductStab {
    factors: Vec<StabP1>,
    twist: Complex64,
}

/// At most one factor is geometric.
pub fn admissible(factors: &[StabP1]) -> bool {
    factors.iter().filter(|s| s.is_geometric()).count() <= 1
}

type PureParams = (Vec<i64>, Vec<f64>, f64, Vec<f64>);
type Phased<'a> = (&'a Generator, f64);

impl ProductStab {
    pub fn new(factors: Vec<StabP1>, twist: Complex64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("no factors".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        let geo = factors.iter().filter(|s| s.is_geometric()).count();
        if geo > 1 {
            return Err(Error::NotAdmissible(geo));
        }
        Ok(Self { factors, twist })
    }

    /// Skip validation; used to build inadmissible controls.
    pub fn new_unchecked(factors: Vec<StabP1>, twist: Complex64) -> Self {
        Self { factors, twist }
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[StabP1] {
        &self.factors
    }

    pub fn twist(&self) -> Complex64 {
        self.twist
    }

    pub fn geo_index(&self) -> Option<usize> {
        self.factors.iter().position(|s| s.is_geometric())
    }

    pub fn base_ks(&self) -> Vec<Option<i64>> {
        self.factors
            .iter()
            .map(|s| match *s {
                StabP1::Algebraic { k, .. } => Some(k),
                StabP1::Geometric { .. } => None,
            })
            .collect()
    }

    fn ensure_admissible(&self) -> Result<()> {
        let geo = self.factors.iter().filter(|s| s.is_geometric()).count();
        if geo > 1 {
            Err(Error::NotAdmissible(geo))
        } else {
            Ok(())
        }
    }

    /// The factor through which the heart is glued: the last algebraic one.
    pub fn gluing_factor(&self) -> Option<usize> {
        self.geo_index()?;
        self.factors.iter().rposition(|s| !s.is_geometric())
    }

    /// Pure algebraic data per the product construction: `m_I = Π m_{l,i_l}`
    /// scaled by `e^{Re c}`, `φ = Σ ψ_l + Im c / π`.
    pub fn pure_algebraic(&self) -> Result<PureAlgebraic> {
        let (ks, steps, base, masses) = self.pure_parameters()?;
        build_pure_algebraic(&ks, &masses, base, &steps)
    }

    /// `(k_l, phase steps, base phase, mass ratios)`.
    fn pure_parameters(&self) -> Result<PureParams> {
        let mut ks = Vec::new();
        let mut steps = Vec::new();
        let mut pairs = Vec::new();
        let mut base = self.twist.im / PI;
        for s in &self.factors {
            match *s {
                StabP1::Algebraic {
                    k,
                    psi,
                    phi,
                    m0,
                    m1,
                } => {
                    ks.push(k);
                    steps.push(phi);
                    pairs.push((m0, m1));
                    base += psi;
                }
                StabP1::Geometric { .. } => {
                    return Err(Error::InvalidParameter(
                        "pure algebraic data requested for a tuple with a geometric factor".into(),
                    ))
                }
            }
        }
        let n = ks.len();
        let scale = self.twist.re.exp();
        let masses = (0..1usize << n)
            .map(|mask| {
                let idx = MultiIndex::from_mask(n, mask);
                scale
                    * idx
                        .bits()
                        .iter()
                        .zip(&pairs)
                        .map(|(&b, &(m0, m1))| if b == 0 { m0 } else { m1 })
                        .product::<f64>()
            })
            .collect();
        Ok((ks, steps, base, masses))
    }

    pub fn is_stable_generator(&self, g: &Generator) -> bool {
        g.n() == self.n()
            && g.factors
                .iter()
                .zip(&self.factors)
                .all(|(&sym, s)| s.is_stable_symbol(sym))
    }

    /// Phase of a stable generator: factor phases plus `Im c / π` plus shift.
    pub fn phase(&self, g: &Generator) -> Result<f64> {
        if g.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: g.n(),
            });
        }
        let mut total = self.twist.im / PI + g.shift as f64;
        for (&sym, s) in g.factors.iter().zip(&self.factors) {
            total += s
                .symbol_phase(sym)
                .map_err(|_| Error::NotStable(g.to_string()))?;
        }
        Ok(total)
    }

    /// The additive extension of `e^c Π Z_l` through the tensor basis.
    pub fn charge(&self, cls: &KClass) -> Complex64 {
        self.charge_and_scale(cls).0
    }

    /// The charge together with `Σ |terms|`, which bounds its rounding error
    /// (classes far from the basis cancel heavily).
    pub fn charge_and_scale(&self, cls: &KClass) -> (Complex64, f64) {
        let n = self.n();
        let functionals: Vec<(Complex64, Complex64)> =
            self.factors.iter().map(|s| s.charge_functional()).collect();
        let e = self.twist.exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (s, &x) in cls.coords().iter().enumerate().filter(|(_, &x)| x != 0) {
            let w: Complex64 = (0..n)
                .map(|l| {
                    let (rank_part, degree_part) = functionals[l];
                    if KClass::point_slot(n, s, l) {
                        degree_part
                    } else {
                        rank_part
                    }
                })
                .product();
            let term = w * x as f64;
            sum += term;
            scale += term.norm();
        }
        (e * sum, e.norm() * scale)
    }

    /// Stable generators with shifts placing their phases in `(0, 1]`.
    pub fn stable_generators(&self, window: RangeInclusive<i64>) -> Result<Vec<Generator>> {
        self.ensure_admissible()?;
        if self.geo_index().is_none() {
            let pure = self.pure_algebraic_lenient()?;
            return Ok(pure.generators);
        }
        let symbol_sets: Vec<Vec<FactorSymbol>> = self
            .factors
            .iter()
            .map(|s| s.stable_symbols(window.clone()))
            .collect();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(self.n());
        self.cartesian(&symbol_sets, &mut current, &mut out)?;
        Ok(out)
    }

    fn cartesian(
        &self,
        sets: &[Vec<FactorSymbol>],
        current: &mut Vec<FactorSymbol>,
        out: &mut Vec<Generator>,
    ) -> Result<()> {
        if current.len() == sets.len() {
            let g = Generator::new(current.clone(), 0);
            let p = self.phase(&g)?;
            out.push(g.shifted(heart_shift(p)));
            return Ok(());
        }
        for &sym in &sets[current.len()] {
            current.push(sym);
            self.cartesian(sets, current, out)?;
            current.pop();
        }
        Ok(())
    }

    /// Pure algebraic data without the `φ_l >= 1` check, so that forced
    /// counterexamples can still be examined.
    fn pure_algebraic_lenient(&self) -> Result<PureAlgebraic> {
        let (ks, steps, base, masses) = self.pure_parameters()?;
        Ok(pure_algebraic_unchecked(&ks, &masses, base, &steps))
    }

    /// For glued hearts: which side of the decomposition `g` lies in
    /// (`Some(1)` for `... ⊠ O(k+1)`, the subobject side).
    pub fn gluing_side(&self, g: &Generator) -> Option<u8> {
        let l = self.gluing_factor()?;
        let k = self.base_ks()[l]?;
        match g.factors[l] {
            FactorSymbol::Line(m) if m == k => Some(0),
            FactorSymbol::Line(m) if m == k + 1 => Some(1),
            _ => None,
        }
    }

    /// Arrange subquotients as an object of the glued heart: the
    /// `A_1`-part below the `A_0`-part, each in HN order.
    pub fn glued_filtration(&self, mut gens: Vec<Generator>) -> Result<FormalObject> {
        let n = self.n();
        let mut keyed: Vec<(u8, f64, Generator)> = gens
            .drain(..)
            .map(|g| {
                let side = self.gluing_side(&g).unwrap_or(0);
                self.phase(&g).map(|p| (side, p, g))
            })
            .collect::<Result<_>>()?;
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.total_cmp(&a.1)));
        Ok(FormalObject::new(
            n,
            keyed.into_iter().map(|(_, _, g)| g).collect(),
        ))
    }

    /// `(index, phase of L_I, |Z(L_I)|)` for a pure algebraic tuple.
    pub fn stable_data(&self) -> Result<Vec<StableDatum>> {
        Ok(self.pure_algebraic_lenient()?.stable_data())
    }
}

pub fn stable_generators(ps: &ProductStab, window: RangeInclusive<i64>) -> Result<Vec<Generator>> {
    ps.stable_generators(window)
}

pub fn product_charge(ps: &ProductStab, cls: &KClass) -> Result<Complex64> {
    ps.ensure_admissible()?;
    if cls.n() != ps.n() {
        return Err(Error::DimensionMismatch {
            expected: ps.n(),
            found: cls.n(),
        });
    }
    Ok(ps.charge(cls))
}

pub fn product_phase(ps: &ProductStab, g: &Generator) -> Result<f64> {
    ps.phase(g)
}

/// HN filtration by rearranging stable subquotients into non-increasing phase.
pub fn hn_product(ps: &ProductStab, obj: &FormalObject) -> Result<Vec<HnFactor>> {
    ps.ensure_admissible()?;
    if obj.n != ps.n() {
        return Err(Error::DimensionMismatch {
            expected: ps.n(),
            found: obj.n,
        });
    }
    if let Some(g) = obj.filtration.iter().find(|g| !ps.is_stable_generator(g)) {
        return Err(Error::UnsupportedObject(g.to_string()));
    }
    let sorted = hn::rearrange(&obj.filtration, |g| ps.phase(g))?;
    let factors = hn::group(sorted);
    hn::check_hom_vanishing(&factors)?;
    Ok(factors)
}

/// Which branch of the gluing argument a generator pair falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GluingCase {
    /// `J` not below `J'`: no morphisms at all.
    Incomparable,
    /// `m0 <= m1`: morphisms concentrated in degree 0.
    DegreeZero,
    /// `m0 >= m1 + 2`: morphisms concentrated in degree 1.
    DegreeOne,
    /// `m0 = m1 + 1`: no morphisms.
    Adjacent,
    /// A skyscraper on the geometric factor.
    Skyscraper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingWitness {
    pub m0: String,
    pub m1: String,
    pub j: MultiIndex,
    pub j_prime: MultiIndex,
    pub degree: i64,
    pub dim: u64,
    pub n0: i64,
    pub n1: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingReport {
    pub passed: bool,
    pub pairs_checked: usize,
    pub case_counts: BTreeMap<GluingCase, usize>,
    pub witness: Option<GluingWitness>,
}

/// Check `Hom^{<=0}(gen_0[N_0], gen_1[N_1]) = 0` between the two sides of the
/// decomposition `<D_0, D_1>` along the last algebraic factor, for geometric
/// degrees in `degrees` plus the skyscraper.
pub fn gluing_vanishing_check(
    ps: &ProductStab,
    degrees: RangeInclusive<i64>,
) -> Result<GluingReport> {
    let geo = ps
        .geo_index()
        .ok_or_else(|| Error::InvalidParameter("gluing check needs a geometric factor".into()))?;
    let mut report = GluingReport {
        passed: true,
        pairs_checked: 0,
        case_counts: BTreeMap::new(),
        witness: None,
    };
    let Some(peel) = ps.gluing_factor() else {
        return Ok(report);
    };
    let n = ps.n();
    let ks = ps.base_ks();
    let k_peel = ks[peel].expect("gluing factor is algebraic");
    let others: Vec<usize> = (0..n).filter(|&l| l != geo && l != peel).collect();
    let geo_symbols: Vec<FactorSymbol> = degrees
        .map(FactorSymbol::Line)
        .chain(std::iter::once(FactorSymbol::Sky))
        .collect();
    let js = MultiIndex::all(others.len());

    let make = |sym: FactorSymbol, j: &MultiIndex, side: i64| -> Generator {
        let mut factors = vec![FactorSymbol::Sky; n];
        factors[geo] = sym;
        factors[peel] = FactorSymbol::Line(k_peel + side);
        for (pos, &l) in others.iter().enumerate() {
            factors[l] = FactorSymbol::Line(ks[l].unwrap() + j.bits()[pos] as i64);
        }
        Generator::new(factors, 0)
    };

    for &s0 in &geo_symbols {
        for j in &js {
            let g0 = make(s0, j, 0);
            let n0 = heart_shift(ps.phase(&g0)?);
            let g0 = g0.shifted(n0);
            for &s1 in &geo_symbols {
                for j1 in &js {
                    let g1 = make(s1, j1, 1);
                    let n1 = heart_shift(ps.phase(&g1)?);
                    let g1 = g1.shifted(n1);
                    let case = if !j.le(j1) {
                        GluingCase::Incomparable
                    } else {
                        match (s0, s1) {
                            (FactorSymbol::Line(m0), FactorSymbol::Line(m1)) if m0 <= m1 => {
                                GluingCase::DegreeZero
                            }
                            (FactorSymbol::Line(m0), FactorSymbol::Line(m1)) if m0 >= m1 + 2 => {
                                GluingCase::DegreeOne
                            }
                            (FactorSymbol::Line(_), FactorSymbol::Line(_)) => GluingCase::Adjacent,
                            _ => GluingCase::Skyscraper,
                        }
                    };
                    *report.case_counts.entry(case).or_insert(0) += 1;
                    report.pairs_checked += 1;
                    if let Some((degree, dim)) = hom_degrees(&g0, &g1).first_at_or_below(0) {
                        report.passed = false;
                        report.witness = Some(GluingWitness {
                            m0: s0.to_string(),
                            m1: s1.to_string(),
                            j: j.clone(),
                            j_prime: j1.clone(),
                            degree,
                            dim,
                            n0,
                            n1,
                        });
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub constant: f64,
    pub factor_constants: Vec<f64>,
    pub generators_checked: usize,
    /// Smallest `|Z(g)| / (C ||g||)` seen; at least 1 when the bound holds.
    pub min_ratio: f64,
}

/// Support constant `C = e^{Re c} Π C_l` in the sup-norm on the tensor basis,
/// verified on every window generator.
///
/// The sup-norm of a Kronecker product is the product of sup-norms, so the
/// product norm needs no compatibility factor.
pub fn support_constant(ps: &ProductStab, window: RangeInclusive<i64>) -> Result<SupportReport> {
    ps.ensure_admissible()?;
    let factor_constants: Vec<f64> = ps
        .factors()
        .iter()
        .map(|s| {
            s.stable_symbols(window.clone())
                .into_iter()
                .map(|sym| {
                    let cls = sym.class();
                    s.central_charge(cls).norm() / cls.sup_norm() as f64
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let constant = ps.twist().re.exp() * factor_constants.iter().product::<f64>();
    let gens = ps.stable_generators(window)?;
    let mut min_ratio = f64::INFINITY;
    for g in &gens {
        let cls = g.k_class();
        let (z, scale) = ps.charge_and_scale(&cls);
        let z = z.norm();
        let bound = constant * cls.sup_norm() as f64;
        let ratio = z / bound;
        min_ratio = min_ratio.min(ratio);
        // The tensor-basis sum cancels heavily; allow for its rounding.
        if ratio < 1.0 - 1e-12 - 64.0 * f64::EPSILON * scale / z {
            return Err(Error::SupportViolated {
                generator: g.to_string(),
                charge_norm: z,
                bound,
            });
        }
    }
    Ok(SupportReport {
        constant,
        factor_constants,
        generators_checked: gens.len(),
        min_ratio,
    })
}

/// Phase and mass of one stable line bundle `L_I` (at shift 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableDatum {
    pub index: MultiIndex,
    pub phase: f64,
    pub mass: f64,
}

/// Recovered factor invariants modulo the `C`-action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveredFactor {
    pub step: f64,
    pub mass_ratio: f64,
}

pub const RECOVERY_TOLERANCE: f64 = 1e-9;

/// Read off `φ_i = φ_{e_i} - φ_0` and `m_{i,1}/m_{i,0} = |Z(L_{e_i})| / |Z(L_0)|`,
/// after checking that phases and log-masses are affine in `I`.
pub fn recover_factors(data: &[StableDatum]) -> Result<Vec<RecoveredFactor>> {
    let first = data
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty stable data".into()))?;
    let n = first.index.n();
    let lookup: BTreeMap<&MultiIndex, &StableDatum> = data.iter().map(|d| (&d.index, d)).collect();
    if lookup.len() != 1 << n || data.iter().any(|d| d.index.n() != n) {
        return Err(Error::InvalidParameter(format!(
            "need one datum for each of the {} indices",
            1 << n
        )));
    }
    let get = |idx: &MultiIndex| -> Result<&StableDatum> {
        lookup
            .get(idx)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("missing index {idx}")))
    };
    let origin = get(&MultiIndex::zero(n))?;
    if data.iter().any(|d| !(d.mass > 0.0)) {
        return Err(Error::InvalidParameter("masses must be positive".into()));
    }
    let factors: Vec<RecoveredFactor> = (0..n)
        .map(|l| {
            let unit = get(&MultiIndex::unit(n, l))?;
            Ok(RecoveredFactor {
                step: unit.phase - origin.phase,
                mass_ratio: unit.mass / origin.mass,
            })
        })
        .collect::<Result<_>>()?;
    for d in data {
        let bits = d.index.bits();
        let phase_pred = origin.phase
            + bits
                .iter()
                .zip(&factors)
                .map(|(&b, f)| b as f64 * f.step)
                .sum::<f64>();
        let log_pred = origin.mass.ln()
            + bits
                .iter()
                .zip(&factors)
                .map(|(&b, f)| b as f64 * f.mass_ratio.ln())
                .sum::<f64>();
        let residual = (d.phase - phase_pred).abs().max((d.mass.ln() - log_pred).abs());
        if residual > RECOVERY_TOLERANCE {
            return Err(Error::InconsistentData {
                index: d.index.to_string(),
                residual,
                tolerance: RECOVERY_TOLERANCE,
            });
        }
    }
    Ok(factors)
}

/// One line of an axiom report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomEntry {
    pub axiom: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Sorted by axiom id.
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn entry(&self, axiom: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    pub fn first_failure(&self) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| !e.passed)
    }
}

/// Settings for [`verify_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomSettings {
    pub window: RangeInclusive<i64>,
    pub hn_trials: usize,
    pub max_filtration: usize,
    pub seed: u64,
    pub angle_tolerance: f64,
}

impl Default for AxiomSettings {
    fn default() -> Self {
        Self {
            window: crate::p1::DEFAULT_WINDOW,
            hn_trials: 32,
            max_filtration: 6,
            seed: 0x5eed,
            angle_tolerance: 1e-10,
        }
    }
}

fn entry(axiom: &str, checked: usize, witness: Option<String>) -> AxiomEntry {
    AxiomEntry {
        axiom: axiom.to_string(),
        passed: witness.is_none(),
        checked,
        witness,
    }
}

/// Check the stability-condition axioms (i)–(v) at generator level on the
/// window, plus the structural hypothesis of the construction
/// (Ext-exceptionality or gluing).
pub fn verify_axioms(ps: &ProductStab, settings: &AxiomSettings) -> Result<AxiomReport> {
    ps.ensure_admissible()?;
    let window = settings.window.clone();
    let heart = ps.stable_generators(window.clone())?;
    let phases: Vec<f64> = heart.iter().map(|g| ps.phase(g)).collect::<Result<_>>()?;
    let mut entries = Vec::new();

    // Structural hypothesis.
    entries.push(if ps.geo_index().is_none() {
        let w = ext_exceptional_check(&heart).err().map(|w| w.to_string());
        entry("0-ext-exceptional", heart.len() * heart.len().saturating_sub(1), w)
    } else {
        let r = gluing_vanishing_check(ps, window.clone())?;
        let w = r.witness.map(|w| {
            format!(
                "Hom^{}({}⊠L_{}[{}], {}⊠L_{}[{}]) = {}",
                w.degree, w.m0, w.j, w.n0, w.m1, w.j_prime, w.n1, w.dim
            )
        });
        entry("0-gluing", r.pairs_checked, w)
    });

    // (i) charge/phase alignment, (ii) shift compatibility.
    let mut align_witness = None;
    let mut shift_witness = None;
    let mut count = 0;
    'outer: for g in &heart {
        for s in -1..=1 {
            let gs = g.shifted(s);
            let (z, scale) = ps.charge_and_scale(&gs.k_class());
            let phase = ps.phase(&gs)?;
            count += 1;
            let rotated = z * Complex64::from_polar(1.0, -PI * phase);
            let rounding = 64.0 * f64::EPSILON * scale / z.norm();
            if !(z.norm() > 0.0) || rotated.arg().abs() > settings.angle_tolerance + rounding {
                align_witness = Some(format!("{gs}: Z = {z}, phase = {phase}"));
                break 'outer;
            }
            let up = ps.phase(&gs.shifted(1))?;
            let z_up = ps.charge(&gs.shifted(1).k_class());
            if (up - phase - 1.0).abs() > 1e-12 || (z_up + z).norm() > 1e-12 * z.norm() {
                shift_witness = Some(format!("{gs}: phase({gs}[1]) = {up}"));
                break 'outer;
            }
        }
    }
    entries.push(entry("i-alignment", count, align_witness));
    entries.push(entry("ii-shift", count, shift_witness));

    // (iii) Hom^0(higher, lower) = 0.
    let mut checked = 0;
    let mut witness = None;
    'iii: for (a, &pa) in heart.iter().zip(&phases) {
        for (b, &pb) in heart.iter().zip(&phases) {
            for s in -1..=1 {
                let (bs, pbs) = (b.shifted(s), pb + s as f64);
                if pa > pbs + PHASE_EPS {
                    checked += 1;
                    let dim = hom_degrees(a, &bs).get(0);
                    if dim != 0 {
                        witness = Some(format!(
                            "dim Hom({a}, {bs}) = {dim} with phases {pa} > {pbs}"
                        ));
                        break 'iii;
                    }
                }
            }
        }
    }
    entries.push(entry("iii-hom-vanishing", checked, witness));

    // (iv) HN property: extension vanishing behind every rearrangement, then
    // randomized filtrations.
    let pairs: Vec<(Phased, Phased)> = heart
        .iter()
        .zip(phases.iter().copied())
        .flat_map(|a| heart.iter().zip(phases.iter().copied()).map(move |b| (a, b)))
        .filter(|((a, _), (b, _))| match (ps.gluing_side(a), ps.gluing_side(b)) {
            // In a glued heart only A_1 (lower) against A_0 (upper) is rearranged.
            (Some(sa), Some(sb)) => sa == 1 && sb == 0,
            _ => ps.geo_index().is_none(),
        })
        .collect();
    let mut iv_witness = rearrangement_check(pairs.iter().copied())
        .err()
        .map(|w| format!("{w} blocks a rearrangement"));
    let mut iv_checked = pairs.len();
    if iv_witness.is_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
        for _ in 0..settings.hn_trials {
            let len = rng.gen_range(1..=settings.max_filtration.max(1));
            let gens: Vec<Generator> = (0..len)
                .map(|_| heart.choose(&mut rng).expect("nonempty heart").clone())
                .collect();
            let obj = if ps.geo_index().is_some() {
                ps.glued_filtration(gens)?
            } else {
                FormalObject::new(ps.n(), gens)
            };
            iv_checked += 1;
            match hn_product(ps, &obj) {
                Ok(f) if hn::is_strictly_decreasing(&f) => {}
                Ok(_) => {
                    iv_witness = Some("HN phases not strictly decreasing".into());
                    break;
                }
                Err(e) => {
                    iv_witness = Some(e.to_string());
                    break;
                }
            }
        }
    }
    entries.push(entry("iv-hn", iv_checked, iv_witness));

    // (v) support property.
    entries.push(match support_constant(ps, window) {
        Ok(r) => entry("v-support", r.generators_checked, None),
        Err(e) => entry("v-support", 0, Some(e.to_string())),
    });

    entries.sort_by(|a, b| a.axiom.cmp(&b.axiom));
    Ok(AxiomReport { entries })
}

/// Shuffle helper for tests and the CLI: a random filtration drawn from `pool`.
pub fn random_filtration(pool: &[Generator], len: usize, rng: &mut impl Rng) -> Vec<Generator> {
    let mut v: Vec<Generator> = (0..len)
        .map(|_| pool.choose(rng).expect("nonempty pool").clone())
        .collect();
    v.shuffle(rng);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::FactorSymbol::{Line, Sky};
    use crate::p1::StabP1;

    fn cz(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn alg(k: i64, psi: f64, phi: f64, m0: f64, m1: f64) -> StabP1 {
        StabP1::algebraic(k, psi, phi, m0, m1).unwrap()
    }

    fn geo(tau: Complex64) -> StabP1 {
        StabP1::geometric(tau, cz(0.0, 0.0)).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        let a = alg(0, 0.0, 1.0, 1.0, 1.0);
        let g = geo(cz(0.0, 1.0));
        assert!(admissible(&[a, a, a]));
        assert!(admissible(&[g, a]));
        assert!(!admissible(&[g, g, a]));
        assert_eq!(
            ProductStab::new(vec![g, g, a], cz(0.0, 0.0)).unwrap_err(),
            Error::NotAdmissible(2)
        );
    }

    #[test]
    fn shift_table_examples() {
        let t = ShiftTable::compute(0.5, &[1.0]);
        assert_eq!(t.shift(&MultiIndex(vec![0])), 0);
        assert_eq!(t.shift(&MultiIndex(vec![1])), -1);

        let t = ShiftTable::compute(1.0, &[1.3, 2.0]);
        assert_eq!(t.shift(&MultiIndex(vec![0, 0])), 0);
        assert_eq!(t.shifted_phase(&MultiIndex(vec![0, 0])), 1.0);

        let t = ShiftTable::compute(0.3, &[1.2, 1.4]);
        let expect = [(vec![0, 0], 0), (vec![1, 0], -1), (vec![0, 1], -1), (vec![1, 1], -2)];
        for (bits, p) in expect {
            assert_eq!(t.shift(&MultiIndex(bits)), p);
        }
        for idx in t.shifts.keys() {
            let sp = t.shifted_phase(idx);
            assert!(sp > 0.0 && sp <= 1.0);
        }
    }

    #[test]
    fn build_rejects_small_steps() {
        let err = build_pure_algebraic(&[0, 0], &[1.0; 4], 0.0, &[1.0, 0.7]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidPhaseStep {
                factor: 1,
                value: 0.7
            }
        );
    }

    #[test]
    fn ext_exceptional_examples() {
        let pa = build_pure_algebraic(&[0, 0, 0], &[1.0; 8], 0.3, &[1.2, 1.4, 2.9]).unwrap();
        assert!(ext_exceptional_check(&pa.generators).is_ok());

        let w = ext_exceptional_check(&[
            Generator::line_bundle(&[0], 0),
            Generator::line_bundle(&[1], 0),
        ])
        .unwrap_err();
        assert_eq!(w.from, Generator::line_bundle(&[0], 0));
        assert_eq!(w.to, Generator::line_bundle(&[1], 0));
        assert_eq!(w.degree, 0);

        // φ_1 = 0.5 forced: L_0 and L_1 land on the same shift.
        let bad = pure_algebraic_unchecked(&[0], &[1.0, 1.0], 0.3, &[0.5]);
        let w = ext_exceptional_check(&bad.generators).unwrap_err();
        assert_eq!(w.degree, 0);
        assert_eq!(w.dim, 2);
    }

    #[test]
    fn stable_generator_examples() {
        let ps = ProductStab::new(
            vec![alg(0, 0.1, 1.5, 1.0, 2.0), alg(2, -0.4, 1.1, 0.5, 1.0)],
            cz(0.0, 0.0),
        )
        .unwrap();
        let gens = ps.stable_generators(-8..=8).unwrap();
        assert_eq!(gens.len(), 4);
        let unshifted: Vec<_> = gens.iter().map(|g| g.unshifted()).collect();
        for (a, b) in [(0, 2), (1, 2), (0, 3), (1, 3)] {
            assert!(unshifted.contains(&Generator::line_bundle(&[a, b], 0)));
        }

        let ps = ProductStab::new(vec![geo(cz(0.3, 1.0)), alg(5, 0.2, 1.3, 1.0, 1.0)], cz(0.0, 0.0))
            .unwrap();
        let gens = ps.stable_generators(0..=0).unwrap();
        let unshifted: Vec<_> = gens.iter().map(|g| g.unshifted()).collect();
        assert_eq!(gens.len(), 4);
        for a in [Line(0), Sky] {
            for b in [Line(5), Line(6)] {
                assert!(unshifted.contains(&Generator::new(vec![a, b], 0)));
            }
        }
        for g in &gens {
            let p = ps.phase(g).unwrap();
            assert!(p > 0.0 && p <= 1.0 + 1e-15, "{g} has phase {p}");
        }

        let ps = ProductStab::new(vec![geo(cz(0.0, 1.0))], cz(0.0, 0.0)).unwrap();
        assert_eq!(
            ps.stable_generators(-1..=1).unwrap(),
            crate::p1::stable_objects_p1(&ps.factors()[0], -1..=1)
        );
    }

    #[test]
    fn product_charge_examples() {
        let s1 = alg(0, 0.2, 1.3, 1.5, 0.7);
        let s2 = geo(cz(-0.4, 0.8));
        let ps = ProductStab::new(vec![s1, s2], cz(0.1, 0.3)).unwrap();
        let g = Generator::line_bundle(&[1, -2], 0);
        let expect = cz(0.1, 0.3).exp()
            * s1.central_charge(crate::derived::FactorClass::line_bundle(1))
            * s2.central_charge(crate::derived::FactorClass::line_bundle(-2));
        let got = product_charge(&ps, &g.k_class()).unwrap();
        assert!((got - expect).norm() < 1e-12 * expect.norm());

        assert_eq!(product_charge(&ps, &KClass::zero(2)).unwrap(), cz(0.0, 0.0));

        let h = Generator::new(vec![Line(0), Sky], 0);
        let sum = &g.k_class() + &h.k_class();
        let a = product_charge(&ps, &sum).unwrap();
        let b = product_charge(&ps, &g.k_class()).unwrap() + product_charge(&ps, &h.k_class()).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn product_phase_examples() {
        let ps = ProductStab::new(
            vec![alg(0, 0.1, 1.5, 1.0, 1.0), alg(0, 0.25, 1.2, 1.0, 1.0)],
            cz(0.0, 0.0),
        )
        .unwrap();
        let l11 = Generator::line_bundle(&[1, 1], 0);
        assert!((ps.phase(&l11).unwrap() - (1.6 + 1.45)).abs() < 1e-12);
        assert!((ps.phase(&l11.shifted(3)).unwrap() - ps.phase(&l11).unwrap() - 3.0).abs() < 1e-12);
        assert!(matches!(
            ps.phase(&Generator::line_bundle(&[2, 0], 0)),
            Err(Error::NotStable(_))
        ));

        let s1 = geo(cz(0.7, 1.1));
        let ps = ProductStab::new(vec![s1, alg(4, 0.35, 1.0, 2.0, 1.0)], cz(0.0, 0.0)).unwrap();
        let g = Generator::line_bundle(&[0, 4], 0);
        let phase = ps.phase(&g).unwrap();
        let expect = s1.symbol_phase(Line(0)).unwrap() + 0.35;
        assert!((phase - expect).abs() < 1e-12);
        let z = ps.charge(&g.k_class());
        let angle = (z * Complex64::from_polar(1.0, -PI * phase)).arg();
        assert!(angle.abs() < 1e-10);
    }

    #[test]
    fn hn_product_swaps_ascending_pair() {
        let ps = ProductStab::new(
            vec![alg(0, 0.05, 1.5, 1.0, 1.0), alg(0, 0.05, 1.2, 1.0, 1.0)],
            cz(0.0, 0.0),
        )
        .unwrap();
        let pa = ps.pure_algebraic().unwrap();
        let g00 = pa.generators[0].clone();
        let g11 = pa.generators[3].clone();
        let lo = ps.phase(&g00).unwrap();
        let hi = ps.phase(&g11).unwrap();
        assert!(lo < hi);
        let hn = hn_product(&ps, &FormalObject::new(2, vec![g00.clone(), g11.clone()])).unwrap();
        assert_eq!(hn.len(), 2);
        assert_eq!(hn[0].parts, vec![g11]);
        assert_eq!(hn[1].parts, vec![g00.clone()]);

        let single = hn_product(&ps, &FormalObject::single(g00.clone())).unwrap();
        assert_eq!(single.len(), 1);

        let same = FormalObject::new(2, vec![g00.clone(); 4]);
        let hn = hn_product(&ps, &same).unwrap();
        assert_eq!(hn.len(), 1);
        assert_eq!(hn[0].parts.len(), 4);
    }

    #[test]
    fn hn_product_rejects_unstable_subquotients() {
        let ps = ProductStab::new(vec![alg(0, 0.0, 1.0, 1.0, 1.0)], cz(0.0, 0.0)).unwrap();
        let obj = FormalObject::single(Generator::line_bundle(&[3], 0));
        assert!(matches!(hn_product(&ps, &obj), Err(Error::UnsupportedObject(_))));
    }

    #[test]
    fn gluing_examples() {
        let ps = ProductStab::new(
            vec![geo(cz(0.2, 0.9)), alg(1, 0.3, 1.4, 1.0, 1.0), alg(-2, 0.6, 1.0, 1.0, 3.0)],
            cz(0.0, 0.0),
        )
        .unwrap();
        let r = gluing_vanishing_check(&ps, -4..=4).unwrap();
        assert!(r.passed, "{:?}", r.witness);
        assert!(r.case_counts[&GluingCase::DegreeZero] > 0);
        assert!(r.case_counts[&GluingCase::DegreeOne] > 0);

        let forced = ProductStab::new_unchecked(
            vec![geo(cz(0.2, 0.9)), StabP1::Algebraic { k: 0, psi: 0.1, phi: 0.5, m0: 1.0, m1: 1.0 }],
            cz(0.0, 0.0),
        );
        let r = gluing_vanishing_check(&forced, -4..=4).unwrap();
        assert!(!r.passed);
        let w = r.witness.unwrap();
        assert!(w.degree <= 0);

        let single = ProductStab::new(vec![geo(cz(0.0, 1.0))], cz(0.0, 0.0)).unwrap();
        let r = gluing_vanishing_check(&single, -4..=4).unwrap();
        assert!(r.passed);
        assert_eq!(r.pairs_checked, 0);
    }

    #[test]
    fn support_examples() {
        let ps = ProductStab::new(vec![alg(0, 0.0, 1.0, 1.0, 1.0)], cz(0.0, 0.0)).unwrap();
        let r = support_constant(&ps, -8..=8).unwrap();
        // Direct minimization over O(0) = (1,0) and O(1) = (1,1).
        let direct = [(1.0_f64, 1.0_f64), (1.0, 1.0)]
            .iter()
            .map(|(z, norm)| z / norm)
            .fold(f64::INFINITY, f64::min);
        assert!((r.constant - direct).abs() < 1e-15);

        let t = 3.5;
        let scaled = ProductStab::new(vec![alg(0, 0.0, 1.0, t, t)], cz(0.0, 0.0)).unwrap();
        let rs = support_constant(&scaled, -8..=8).unwrap();
        assert!((rs.constant - t * r.constant).abs() < 1e-12);

        let ps2 = ProductStab::new(
            vec![alg(0, 0.0, 1.2, 0.5, 2.0), alg(3, 0.4, 1.7, 1.5, 0.25)],
            cz(0.0, 0.0),
        )
        .unwrap();
        let r2 = support_constant(&ps2, -8..=8).unwrap();
        assert_eq!(r2.generators_checked, 4);
        assert!(r2.min_ratio >= 1.0 - 1e-12);
    }

    #[test]
    fn recovery_round_trip() {
        let pa = build_pure_algebraic(&[0, 0], &[1.0; 4], 0.3, &[1.2, 1.4]).unwrap();
        let rec = recover_factors(&pa.stable_data()).unwrap();
        assert!((rec[0].step - 1.2).abs() < 1e-12 && (rec[1].step - 1.4).abs() < 1e-12);
        assert!((rec[0].mass_ratio - 1.0).abs() < 1e-12);

        let sym = build_pure_algebraic(&[0, 0, 0], &[2.0; 8], 0.0, &[1.5; 3]).unwrap();
        let rec = recover_factors(&sym.stable_data()).unwrap();
        assert!(rec.windows(2).all(|w| (w[0].step - w[1].step).abs() < 1e-15));

        let mut data = pa.stable_data();
        let last = data.iter_mut().find(|d| d.index == MultiIndex(vec![1, 1])).unwrap();
        last.phase += 1e-3;
        assert!(matches!(recover_factors(&data), Err(Error::InconsistentData { .. })));
    }

    #[test]
    fn verify_axioms_examples() {
        let ps = ProductStab::new(
            vec![alg(0, 0.1, 1.5, 1.0, 2.0), alg(2, -0.4, 1.1, 0.5, 1.0)],
            cz(0.2, 0.4),
        )
        .unwrap();
        let r = verify_axioms(&ps, &AxiomSettings::default()).unwrap();
        assert!(r.all_passed(), "{r:?}");

        let forced = ProductStab::new_unchecked(
            vec![
                StabP1::Algebraic { k: 0, psi: 0.1, phi: 0.9, m0: 1.0, m1: 1.0 },
                alg(0, 0.0, 1.0, 1.0, 1.0),
            ],
            cz(0.0, 0.0),
        );
        let r = verify_axioms(&forced, &AxiomSettings::default()).unwrap();
        let failed = r.first_failure().expect("forced phi = 0.9 must fail");
        assert!(failed.axiom == "0-ext-exceptional" || failed.axiom == "iv-hn");
        assert!(failed.witness.is_some());

        let single = ProductStab::new(vec![geo(cz(0.0, 1.0))], cz(0.0, 0.0)).unwrap();
        let r = verify_axioms(&single, &AxiomSettings::default()).unwrap();
        assert!(r.all_passed(), "{r:?}");
    }
}
