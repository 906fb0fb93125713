//! Seeded random families of product tuples, shared by `verify-all` and the
//! acceptance tests.

use rand::Rng;
use stabforge_core::product::StableDatum;
use stabforge_core::{Complex64, ProductStab, StabP1};

fn algebraic(rng: &mut impl Rng, phi: f64) -> StabP1 {
    StabP1::Algebraic {
        k: rng.gen_range(-3..=3),
        psi: rng.gen_range(-0.5..0.5),
        phi,
        m0: rng.gen_range(0.1..10.0),
        m1: rng.gen_range(0.1..10.0),
    }
}

fn geometric(rng: &mut impl Rng) -> StabP1 {
    let tau = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0));
    let c = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-1.0..1.0));
    StabP1::geometric(tau, c).expect("Im tau > 0")
}

fn twist(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-1.0..1.0))
}

/// `n ≤ 4` algebraic factors with `φ ∈ [1, 3]`, masses in `[0.1, 10]`.
pub fn random_pure_tuple(rng: &mut impl Rng) -> ProductStab {
    let n = rng.gen_range(1..=4);
    let factors = (0..n)
        .map(|_| {
            let phi = rng.gen_range(1.0..=3.0);
            algebraic(rng, phi)
        })
        .collect();
    ProductStab::new(factors, twist(rng)).expect("admissible by construction")
}

/// A pure tuple with at least one `φ ∈ [0.3, 0.99]`.
pub fn random_control_tuple(rng: &mut impl Rng) -> ProductStab {
    let n = rng.gen_range(1..=4);
    let bad = rng.gen_range(0..n);
    let factors = (0..n)
        .map(|l| {
            let phi = if l == bad {
                rng.gen_range(0.3..=0.99)
            } else {
                rng.gen_range(1.0..=3.0)
            };
            algebraic(rng, phi)
        })
        .collect();
    ProductStab::new_unchecked(factors, twist(rng))
}

/// One geometric factor among `n ∈ {2, 3}`.
pub fn random_mixed_tuple(rng: &mut impl Rng) -> ProductStab {
    let n = rng.gen_range(2..=3);
    let geo = rng.gen_range(0..n);
    let factors = (0..n)
        .map(|l| {
            if l == geo {
                geometric(rng)
            } else {
                let phi = rng.gen_range(1.0..=3.0);
                algebraic(rng, phi)
            }
        })
        .collect();
    ProductStab::new(factors, twist(rng)).expect("admissible by construction")
}

/// Geometric factor glued to an algebraic one with `φ = 0.5`.
pub fn gluing_control() -> ProductStab {
    let geo = StabP1::geometric(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)).unwrap();
    let bad = StabP1::Algebraic {
        k: 0,
        psi: 0.0,
        phi: 0.5,
        m0: 1.0,
        m1: 1.0,
    };
    ProductStab::new_unchecked(vec![geo, bad], Complex64::new(0.0, 0.0))
}

/// `(φ_l, m_{l,1}/m_{l,0})` as configured, for comparison with recovery.
pub fn expected_factors(ps: &ProductStab) -> Vec<(f64, f64)> {
    ps.factors()
        .iter()
        .filter_map(|s| match *s {
            StabP1::Algebraic { phi, m0, m1, .. } => Some((phi, m1 / m0)),
            StabP1::Geometric { .. } => None,
        })
        .collect()
}

/// Perturb the phase of one index of weight at least 2 by `size`, so the
/// data is no longer affine in the index. `None` when `n < 2`.
pub fn inject_defect(data: &mut [StableDatum], size: f64, rng: &mut impl Rng) -> Option<usize> {
    let candidates: Vec<usize> = (0..data.len()).filter(|&i| data[i].index.weight() >= 2).collect();
    if candidates.is_empty() {
        return None;
    }
    let i = candidates[rng.gen_range(0..candidates.len())];
    if rng.gen_bool(0.5) {
        data[i].phase += size;
    } else {
        data[i].mass *= size.exp();
    }
    Some(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_have_the_advertised_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(random_pure_tuple(&mut rng).geo_index().is_none());
            let c = random_control_tuple(&mut rng);
            assert!(expected_factors(&c).iter().any(|&(phi, _)| phi < 1.0));
            assert!(random_mixed_tuple(&mut rng).geo_index().is_some());
        }
    }
}
