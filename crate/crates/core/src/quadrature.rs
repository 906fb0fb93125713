//! Gauss–Legendre rules.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Nodes and weights for `[a, b]` split into `panels` equal pieces.
pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi));
        }
    }
    out
}

/// Like [`composite`] with panels of width at most `panel`, but graded
/// geometrically toward `center` (a point of `[a, b]`) starting from width
/// `inner`, for integrands with a singularity at distance `~inner` from the
/// real axis above `center`.
pub fn graded(a: f64, b: f64, panel: f64, order: usize, center: f64, inner: f64) -> Vec<(f64, f64)> {
    let mut breaks = vec![center];
    let mut push_side = |dir: f64, end: f64| {
        let (mut x, mut width) = (center, inner);
        loop {
            let next = x + dir * width.min(panel);
            if (end - next) * dir <= 0.5 * width.min(panel) {
                breaks.push(end);
                break;
            }
            breaks.push(next);
            x = next;
            width *= 2.0;
        }
    };
    if center > a {
        push_side(-1.0, a);
    }
    if center < b {
        push_side(1.0, b);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
        .windows(2)
        .flat_map(|w| composite(w[0], w[1], 1, order))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1, 2, 5, 10, 16] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..2 * n {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn composite_gaussian() {
        let s: f64 = composite(0.0, 8.0, 32, 10)
            .iter()
            .map(|(u, w)| w * (-u * u).exp())
            .sum();
        assert!((s - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn graded_resolves_near_singularity() {
        // ∫_0^4 dx / ((x - 1)^2 + d^2) = (atan(3/d) + atan(1/d)) / d
        let d: f64 = 1e-4;
        let exact = ((3.0 / d).atan() + (1.0 / d).atan()) / d;
        let rule = graded(0.0, 4.0, 0.25, 16, 1.0, d);
        let s: f64 = rule.iter().map(|(x, w)| w / ((x - 1.0).powi(2) + d * d)).sum();
        assert!((s / exact - 1.0).abs() < 1e-12, "{s} vs {exact}");
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 4.0).abs() < 1e-13);
    }
}
