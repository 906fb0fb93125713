//! Harder–Narasimhan filtrations by rearranging stable subquotients.

use serde::{Deserialize, Serialize};

use crate::derived::{hom_degrees, Generator};
use crate::error::{Error, Result};

/// Phases closer than this are treated as equal.
pub const PHASE_EPS: f64 = 1e-12;

/// One semistable factor of an HN filtration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HnFactor {
    pub phase: f64,
    /// Stable subquotients of this factor, bottom first.
    pub parts: Vec<Generator>,
}

/// Bubble-sort a filtration (bottom first) into non-increasing phase order.
///
/// Adjacent subquotients `A` (lower) and `B` (upper) with
/// `phase(A) < phase(B)` are swapped only when `Ext^1(B, A) = 0`, i.e. when
/// the extension between them splits.
pub fn rearrange(
    filtration: &[Generator],
    phase: impl Fn(&Generator) -> Result<f64>,
) -> Result<Vec<(f64, Generator)>> {
    let mut items: Vec<(f64, Generator)> = filtration
        .iter()
        .map(|g| phase(g).map(|p| (p, g.clone())))
        .collect::<Result<_>>()?;
    let len = items.len();
    for pass in 0..len {
        let mut swapped = false;
        for i in 0..len.saturating_sub(1 + pass) {
            let (lower_phase, upper_phase) = (items[i].0, items[i + 1].0);
            if lower_phase + PHASE_EPS < upper_phase {
                let ext1 = hom_degrees(&items[i + 1].1, &items[i].1).get(1);
                if ext1 != 0 {
                    return Err(Error::RearrangementBlocked {
                        lower: items[i].1.to_string(),
                        upper: items[i + 1].1.to_string(),
                        lower_phase,
                        upper_phase,
                        dim: ext1,
                    });
                }
                items.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    Ok(items)
}

/// Group a phase-sorted list (non-increasing) into semistable factors.
pub fn group(sorted: Vec<(f64, Generator)>) -> Vec<HnFactor> {
    let mut out: Vec<HnFactor> = Vec::new();
    for (phase, g) in sorted {
        match out.last_mut() {
            Some(last) if (last.phase - phase).abs() <= PHASE_EPS => last.parts.push(g),
            _ => out.push(HnFactor {
                phase,
                parts: vec![g],
            }),
        }
    }
    out
}

/// Axiom (iii) between HN factors: `Hom^0(earlier, later) = 0`.
pub fn check_hom_vanishing(factors: &[HnFactor]) -> Result<()> {
    for (i, hi) in factors.iter().enumerate() {
        for lo in &factors[i + 1..] {
            for a in &hi.parts {
                for b in &lo.parts {
                    let dim = hom_degrees(a, b).get(0);
                    if dim != 0 {
                        return Err(Error::HomVanishingFailed {
                            from: a.to_string(),
                            to: b.to_string(),
                            from_phase: hi.phase,
                            to_phase: lo.phase,
                            dim,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Phases strictly decrease along the output.
pub fn is_strictly_decreasing(factors: &[HnFactor]) -> bool {
    factors.windows(2).all(|w| w[0].phase > w[1].phase + PHASE_EPS)
}
