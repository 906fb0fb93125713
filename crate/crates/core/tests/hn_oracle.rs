mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabforge_core::product::{hn_product, random_filtration};
use stabforge_core::{Complex64, Error, FormalObject, Generator, ProductStab, StabP1};
use support::{grouping_of, hn_oracle, same_grouping};

/// Compare `hn_product` with the brute-force oracle; `None` on agreement.
fn mismatch(ps: &ProductStab, obj: &FormalObject) -> Option<String> {
    let oracle = hn_oracle(&obj.filtration, |g| ps.phase(g).unwrap());
    match hn_product(ps, obj) {
        Ok(f) => {
            let g = grouping_of(&f);
            if oracle.is_empty() || !oracle.iter().all(|h| same_grouping(h, &g)) {
                Some(format!("{obj:?}: got {g:?}, oracle {oracle:?}"))
            } else {
                None
            }
        }
        Err(Error::RearrangementBlocked { .. }) if oracle.is_empty() => None,
        Err(e) => Some(format!("{obj:?}: {e}, oracle {oracle:?}")),
    }
}

fn pure_pair() -> ProductStab {
    ProductStab::new(
        vec![
            StabP1::algebraic(0, 0.1, 1.3, 1.0, 2.0).unwrap(),
            StabP1::algebraic(-1, 0.2, 1.6, 0.5, 3.0).unwrap(),
        ],
        Complex64::new(0.0, 0.0),
    )
    .unwrap()
}

fn sequences(pool: &[Generator], max_len: usize) -> Vec<Vec<Generator>> {
    let mut out: Vec<Vec<Generator>> = vec![vec![]];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|s| {
                pool.iter().map(move |g| {
                    let mut t = s.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out.remove(0);
    out
}

#[test]
fn exhaustive_pool_of_four() {
    let ps = pure_pair();
    let pool = ps.stable_generators(-2..=2).unwrap();
    assert_eq!(pool.len(), 4);
    let seqs = sequences(&pool, 5);
    assert_eq!(seqs.len(), 4 + 16 + 64 + 256 + 1024);
    for s in seqs {
        let obj = FormalObject::new(2, s);
        if let Some(m) = mismatch(&ps, &obj) {
            panic!("{m}");
        }
    }
}

pub fn random_mixed(rng: &mut ChaCha8Rng) -> ProductStab {
    let n = rng.gen_range(2..=3);
    let geo = rng.gen_range(0..n);
    let factors = (0..n)
        .map(|l| {
            if l == geo {
                StabP1::geometric(
                    Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(0.2..2.5)),
                    Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
                )
                .unwrap()
            } else {
                StabP1::algebraic(
                    rng.gen_range(-2..=2),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(1.0..3.0),
                    rng.gen_range(0.1..10.0),
                    rng.gen_range(0.1..10.0),
                )
                .unwrap()
            }
        })
        .collect();
    ProductStab::new(factors, Complex64::new(0.0, rng.gen_range(-1.0..1.0))).unwrap()
}

#[test]
fn random_mixed_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let ps = random_mixed(&mut rng);
        let pool = ps.stable_generators(-2..=2).unwrap();
        let len = rng.gen_range(1..=5);
        let gens = random_filtration(&pool, len, &mut rng);
        let obj = ps.glued_filtration(gens).unwrap();
        if let Some(m) = mismatch(&ps, &obj) {
            panic!("{m}");
        }
    }
}
