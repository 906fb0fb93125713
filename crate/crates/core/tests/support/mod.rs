//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use stabforge_core::{hom_degrees, Complex64, Generator};

/// HN data as a list of `(phase, sorted parts)`.
pub type Grouping = Vec<(f64, Vec<String>)>;

/// Enumerate every ordering of `filtration` reachable by swapping adjacent
/// subquotients whose extension splits, keep those with non-increasing
/// phase, and group them. Returns the distinct groupings found.
pub fn hn_oracle(filtration: &[Generator], phase: impl Fn(&Generator) -> f64) -> Vec<Grouping> {
    let phases: Vec<f64> = filtration.iter().map(&phase).collect();
    let n = filtration.len();
    let splits: Vec<Vec<bool>> = (0..n)
        .map(|lower| {
            (0..n)
                .map(|upper| hom_degrees(&filtration[upper], &filtration[lower]).get(1) == 0)
                .collect()
        })
        .collect();
    let start: Vec<usize> = (0..n).collect();
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut groupings: Vec<Grouping> = Vec::new();
    while let Some(order) = queue.pop_front() {
        if order.windows(2).all(|w| phases[w[0]] >= phases[w[1]] - 1e-12) {
            let g = group(&order, filtration, &phases);
            if !groupings.iter().any(|h| same_grouping(h, &g)) {
                groupings.push(g);
            }
        }
        for i in 0..n.saturating_sub(1) {
            if splits[order[i]][order[i + 1]] {
                let mut next = order.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    groupings
}

fn group(order: &[usize], filtration: &[Generator], phases: &[f64]) -> Grouping {
    let mut out: Grouping = Vec::new();
    for &i in order {
        let name = filtration[i].to_string();
        match out.last_mut() {
            Some((p, parts)) if (*p - phases[i]).abs() <= 1e-12 => parts.push(name),
            _ => out.push((phases[i], vec![name])),
        }
    }
    for (_, parts) in out.iter_mut() {
        parts.sort();
    }
    out
}

pub fn same_grouping(a: &Grouping, b: &Grouping) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|((pa, xa), (pb, xb))| (pa - pb).abs() <= 1e-12 && xa == xb)
}

pub fn grouping_of(factors: &[stabforge_core::HnFactor]) -> Grouping {
    factors
        .iter()
        .map(|f| {
            let mut parts: Vec<String> = f.parts.iter().map(|g| g.to_string()).collect();
            parts.sort();
            (f.phase, parts)
        })
        .collect()
}

/// `2πi e^c Σ_j q^{j} / (j! (j+k)!)` (shifted for `k < 0`): the residue of
/// `e^{z + q/z} z^{-k-1}` at the origin, summed directly from the Laurent
/// coefficients.
pub fn circle_residue(q: Complex64, c: Complex64, k: i64) -> Complex64 {
    // Coefficient of z^k in e^z e^{q/z}: Σ_{m - j = k} 1/m! q^j/j!.
    let mut sum = Complex64::new(0.0, 0.0);
    let mut fact = vec![1.0f64; 200];
    for i in 1..200 {
        fact[i] = fact[i - 1] * i as f64;
    }
    for j in 0..150i64 {
        let m = j + k;
        if !(0..170).contains(&m) {
            continue;
        }
        sum += q.powi(j as i32) / (fact[j as usize] * fact[m as usize]);
    }
    2.0 * PI * Complex64::new(0.0, 1.0) * c.exp() * sum
}

/// Count multiplicities in a list of displayable items.
pub fn multiset<T: ToString>(items: impl IntoIterator<Item = T>) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for x in items {
        *m.entry(x.to_string()).or_insert(0) += 1;
    }
    m
}
