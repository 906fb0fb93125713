//! Numerical periods of the Landau–Ginzburg mirror `W(z) = z + e^a / z`.
//!
//! Circle integrals use the periodic trapezoid rule with node doubling;
//! thimbles are traced in the parameter `u` with `W(z(u)) = W(saddle) - u^2`,
//! so `Im W` is conserved up to the Newton corrector and the integrand
//! carries the Gaussian factor `e^{-u^2}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::{CDd, Dd, TWO_PI};
use crate::error::{Error, Result};
use crate::quadrature::{composite, graded};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `exp(Σ z_i + c + Σ e^{a_i}/z_i) Π dz_i/z_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LGModel {
    pub a: Vec<Complex64>,
    pub c: Complex64,
}

impl LGModel {
    pub fn new(a: Vec<Complex64>, c: Complex64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter("LG model needs at least one factor".into()));
        }
        if a.iter().chain(std::iter::once(&c)).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite LG parameter".into()));
        }
        Ok(Self { a, c })
    }

    pub fn single(a: Complex64, c: Complex64) -> Self {
        Self { a: vec![a], c }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self, i: usize) -> Complex64 {
        self.a[i].exp()
    }

    /// `[√q, -√q]` with the principal square root.
    pub fn saddles(&self, i: usize) -> [Complex64; 2] {
        let s = self.q(i).sqrt();
        [s, -s]
    }

    pub fn critical_values(&self, i: usize) -> [Complex64; 2] {
        let s = self.q(i).sqrt();
        [2.0 * s, -2.0 * s]
    }

    fn single_q(&self) -> Result<Complex64> {
        if self.n() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.n(),
            });
        }
        Ok(self.q(0))
    }
}

fn w(q: Complex64, z: Complex64) -> Complex64 {
    z + q / z
}

fn dw(q: Complex64, z: Complex64) -> Complex64 {
    1.0 - q / (z * z)
}

fn d2w(q: Complex64, z: Complex64) -> Complex64 {
    2.0 * q / (z * z * z)
}

/// `z - c` for a critical point `c`, from `W(z) - W(c) = (z - c)^2 / z` and
/// the known level difference. Unlike the plain difference this keeps full
/// relative accuracy next to `c`.
fn offset(z: Complex64, c: Complex64, level: Complex64) -> Complex64 {
    let r = (level * z).sqrt();
    let naive = z - c;
    if (r - naive).norm() <= (r + naive).norm() {
        r
    } else {
        -r
    }
}

/// `W'(z) = (z - zs)(z + zs) / z^2` on the level `W(zs) - lower`, where
/// `gap = W(zs) - W(-zs)`.
fn dw_on_level(z: Complex64, zs: Complex64, lower: Complex64, gap: Complex64) -> Complex64 {
    offset(z, zs, -lower) * offset(z, -zs, gap - lower) / (z * z)
}

/// `I_{|k|}(x) = Σ_j (x/2)^{2j+|k|} / (j! (j+|k|)!)`.
pub fn bessel_i(k: i64, x: Complex64) -> Complex64 {
    let k = k.unsigned_abs();
    let half = x / 2.0;
    let mut term = Complex64::new(1.0, 0.0);
    for m in 1..=k {
        term *= half / m as f64;
    }
    let sq = half * half;
    let mut sum = term;
    for j in 1..10_000u64 {
        term *= sq / (j as f64 * (j + k) as f64);
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// `2πi e^c (√q)^{-k} I_{|k|}(2√q)`, the residue evaluation of the circle period.
pub fn circle_closed_form(m: &LGModel, k: i64) -> Result<Complex64> {
    let q = m.single_q()?;
    let s = q.sqrt();
    Ok(2.0 * PI * I * m.c.exp() * s.powi(-k as i32) * bessel_i(k, 2.0 * s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleOptions {
    pub rel_tol: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl Default for CircleOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            min_nodes: 64,
            max_nodes: 1 << 18,
        }
    }
}

/// Converged trapezoid result with its node count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleResult {
    pub value: Complex64,
    pub nodes: usize,
    pub last_change: f64,
}

/// `∮_{|z|=r} e^{z + c + q/z} z^{-k} dz/z`, counterclockwise.
pub fn circle_charge(m: &LGModel, k: i64, r: f64) -> Result<Complex64> {
    circle_charge_with(m, k, r, &CircleOptions::default()).map(|c| c.value)
}

pub fn circle_charge_with(m: &LGModel, k: i64, r: f64, opts: &CircleOptions) -> Result<CircleResult> {
    m.single_q()?;
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius {r} must be positive")));
    }
    // The integrand is evaluated in double-double: away from |z| = √|q| it
    // exceeds the integral by up to |k| log r + |q|/r orders of magnitude.
    let q_dd = CDd::from_c64(m.a[0]).exp();
    let r_dd = Dd::from_f64(r);
    let r_pow = Dd::from_f64(r.powi(-k as i32));
    let f = |j: usize, n: usize| -> CDd {
        let theta = TWO_PI * Dd::from_f64(j as f64 / n as f64);
        let u = CDd::cis(theta);
        let z = u.scale(r_dd);
        let q_over_z = (q_dd * CDd::new(u.re, -u.im)).scale(Dd::ONE.div_f64(r));
        let weight = CDd::cis(-(theta * Dd::from_f64(k as f64))).scale(r_pow);
        (z + q_over_z).exp() * weight
    };
    let mut n = 8usize;
    let mut sum = CDd::ZERO;
    let mut abs_sum = 0.0;
    for j in 0..n {
        let v = f(j, n);
        sum = sum + v;
        abs_sum += v.abs_f64();
    }
    let finish = |sum: CDd, n: usize| I * sum.to_c64() * (2.0 * PI / n as f64) * m.c.exp();
    let mut value = finish(sum, n);
    loop {
        for j in 0..n {
            let v = f(2 * j + 1, 2 * n);
            sum = sum + v;
            abs_sum += v.abs_f64();
        }
        n *= 2;
        let next = finish(sum, n);
        let change = (next - value).norm();
        // Floor at the double-double rounding level of the sum.
        let scale = next.norm().max(1e-20 * abs_sum * 2.0 * PI / n as f64 * m.c.exp().norm());
        value = next;
        if n >= opts.min_nodes && change <= opts.rel_tol * scale {
            return Ok(CircleResult {
                value,
                nodes: n,
                last_change: change,
            });
        }
        if n >= opts.max_nodes {
            return Err(Error::QuadratureNotConverged { nodes: n, change });
        }
    }
}

/// Which critical point of `W`: `+√q` or `-√q` (principal root).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Saddle {
    Plus,
    Minus,
}

impl Saddle {
    pub fn point(self, q: Complex64) -> Complex64 {
        match self {
            Saddle::Plus => q.sqrt(),
            Saddle::Minus => -q.sqrt(),
        }
    }
}

/// Where a thimble branch ends: `Re(q/z) → -∞` or `Re z → -∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThimbleEnd {
    Zero,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThimbleOptions {
    /// Stop once `Re W <= Re W(saddle) - lambda`.
    pub lambda: f64,
    /// Panel width in `u`.
    pub panel: f64,
    pub order: usize,
    pub rel_tol: f64,
}

impl Default for ThimbleOptions {
    fn default() -> Self {
        Self {
            lambda: 40.0,
            panel: 0.25,
            order: 16,
            rel_tol: 1e-12,
        }
    }
}

/// A traced Lefschetz thimble, oriented from its zero end to its infinity end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThimbleResult {
    pub saddle: Complex64,
    pub critical_value: Complex64,
    /// Polyline through the quadrature nodes, in orientation order.
    pub path: Vec<Complex64>,
    /// `∫ e^{W + c} dz/z`.
    pub integral: Complex64,
    pub im_drift: f64,
    pub tail_bound: f64,
    pub ends: [ThimbleEnd; 2],
    /// The flow ran into the other critical point and was continued by the
    /// lateral rule `a → a + i0`.
    pub stokes: bool,
    /// `e^{W0 + c} √(2π/|W''|) · (unit tangent) / z0`.
    pub leading_order: Complex64,
    /// `(z_j, w_j)` with `∫ f dz/z ≈ Σ w_j f(z_j)`.
    pub nodes: Vec<(Complex64, Complex64)>,
}

impl ThimbleResult {
    /// `∫ e^{W + c} z^{-k} dz/z` over the same cycle.
    pub fn weighted_integral(&self, q: Complex64, c: Complex64, k: i64) -> Complex64 {
        self.nodes
            .iter()
            .map(|&(z, wt)| wt * (w(q, z) + c).exp() * z.powi(-k as i32))
            .sum()
    }
}

struct Branch {
    /// Outward from the saddle: `(z, dz/z weight)`.
    nodes: Vec<(Complex64, Complex64)>,
    drift: f64,
    tail: f64,
}

fn newton(q: Complex64, mut z: Complex64, target: Complex64) -> Option<Complex64> {
    for _ in 0..40 {
        let step = (w(q, z) - target) / dw(q, z);
        z -= step;
        if !z.is_finite() {
            return None;
        }
        if step.norm() <= 4e-16 * z.norm() {
            break;
        }
    }
    let residual = (w(q, z) - target).norm();
    (residual <= 1e-11 * (1.0 + target.norm())).then_some(z)
}

/// RK4 from `(p0, z0)` to `p1` for `dz/dp = f(p, z)`, with substeps of at
/// most `h` controlled by step doubling.
fn rk4(f: impl Fn(f64, Complex64) -> Complex64, p0: f64, z0: Complex64, p1: f64, h: f64) -> Complex64 {
    let step = |p: f64, z: Complex64, dt: f64| {
        let k1 = f(p, z);
        let k2 = f(p + dt / 2.0, z + k1 * (dt / 2.0));
        let k3 = f(p + dt / 2.0, z + k2 * (dt / 2.0));
        let k4 = f(p + dt, z + k3 * dt);
        z + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0)
    };
    let span = p1 - p0;
    let (mut p, mut z) = (p0, z0);
    let mut dt = h.min(span.abs()).copysign(span);
    while (p1 - p) * span.signum() > 0.0 {
        if (p + dt - p1) * span.signum() > 0.0 {
            dt = p1 - p;
        }
        let full = step(p, z, dt);
        let half = step(p + dt / 2.0, step(p, z, dt / 2.0), dt / 2.0);
        let err = (full - half).norm();
        if err <= 1e-9 * (1.0 + half.norm()) || dt.abs() < 1e-12 * (1.0 + span.abs()) || !err.is_finite() {
            p += dt;
            z = half;
            dt = (dt * 1.5).abs().min(h).copysign(span);
        } else {
            dt /= 2.0;
        }
    }
    z
}

fn check_point(q: Complex64, z: Complex64, prev_re_w: f64) -> Result<f64> {
    if z.norm() < 1e-10 || dw(q, z).norm() < 1e-9 {
        return Err(Error::FlowSingular { z_re: z.re, z_im: z.im });
    }
    let re_w = w(q, z).re;
    if re_w > prev_re_w + 1e-9 * (1.0 + prev_re_w.abs()) {
        return Err(Error::NonMonotone { index: 0 });
    }
    Ok(re_w)
}

/// Descend from saddle `zs` along `W = W(zs) - u^2`, `u ∈ [0, u_max]`,
/// leaving in direction `v` (which must satisfy `v^2 W''(zs) = -2`).
fn march_u(
    q: Complex64,
    zs: Complex64,
    v: Complex64,
    u_max: f64,
    opts: &ThimbleOptions,
    panel: f64,
) -> Result<Branch> {
    let ws = w(q, zs);
    let gap = ws - w(q, -zs);
    // z(u) branches where the level set meets the other saddle, at
    // u* = ±sqrt(W(zs) - W(-zs)). Near a Stokes line u* approaches the real
    // axis and the panels are graded toward it.
    let star = gap.sqrt();
    let star = if star.re < 0.0 { -star } else { star };
    let rule = if star.re > 0.0 && star.re < u_max && star.im.abs() < panel {
        let inner = (star.im.abs() * panel / opts.panel).max(1e-14);
        graded(0.0, u_max, panel, opts.order, star.re, inner)
    } else {
        let panels = (u_max / panel).ceil().max(1.0) as usize;
        composite(0.0, u_max, panels, opts.order)
    };
    let rhs = |u: f64, z: Complex64| -2.0 * u / dw(q, z);
    let mut nodes = Vec::with_capacity(rule.len());
    let mut drift: f64 = 0.0;
    let (mut u_prev, mut z_prev) = (0.0, zs);
    let mut re_prev = ws.re;
    let mut last_density = 0.0;
    for (idx, &(u, gw)) in rule.iter().enumerate() {
        let guess = if idx == 0 {
            zs + v * u + v * v * u * u / (2.0 * zs)
        } else {
            rk4(rhs, u_prev, z_prev, u, 0.02)
        };
        let target = ws - u * u;
        let z = newton(q, guess, target).ok_or(Error::FlowSingular {
            z_re: guess.re,
            z_im: guess.im,
        })?;
        if (z - guess).norm() > 1e-2 * (1.0 + (z - z_prev).norm()) {
            return Err(Error::NonMonotone { index: idx });
        }
        re_prev = check_point(q, z, re_prev).map_err(|e| match e {
            Error::NonMonotone { .. } => Error::NonMonotone { index: idx },
            e => e,
        })?;
        drift = drift.max((w(q, z).im - ws.im).abs());
        let dz = -2.0 * u / dw_on_level(z, zs, Complex64::new(u * u, 0.0), gap);
        last_density = (dz / z).norm();
        nodes.push((z, gw * dz / z));
        u_prev = u;
        z_prev = z;
    }
    let tail = (ws.re - u_max * u_max).exp() * last_density / (2.0 * u_max.max(1e-300));
    Ok(Branch { nodes, drift, tail })
}

/// Stokes segment from `zs` to the other critical point `-zs` along
/// `W = W(zs) - σ`, `σ = Σ (1 - cos t)/2`, which is smooth at both ends.
fn march_segment(
    q: Complex64,
    zs: Complex64,
    v: Complex64,
    sigma_total: f64,
    t_max: f64,
    opts: &ThimbleOptions,
    panel: f64,
) -> Result<(Branch, Complex64)> {
    let ws = w(q, zs);
    let panels = (t_max / panel).ceil().max(1.0) as usize;
    let rule = composite(0.0, t_max, panels, opts.order);
    let sigma = |t: f64| sigma_total * (1.0 - t.cos()) / 2.0;
    let rhs = |t: f64, z: Complex64| -(sigma_total * t.sin() / 2.0) / dw(q, z);
    let mut nodes = Vec::with_capacity(rule.len());
    let mut drift: f64 = 0.0;
    let (mut t_prev, mut z_prev) = (0.0, zs);
    for (idx, &(t, gw)) in rule.iter().enumerate() {
        let guess = if idx == 0 {
            let u = sigma(t).sqrt();
            zs + v * u + v * v * u * u / (2.0 * zs)
        } else {
            rk4(rhs, t_prev, z_prev, t, 0.01)
        };
        let z = newton(q, guess, ws - sigma(t)).ok_or(Error::FlowSingular {
            z_re: guess.re,
            z_im: guess.im,
        })?;
        if (z - guess).norm() > 1e-2 * (1.0 + (z - z_prev).norm()) {
            return Err(Error::NonMonotone { index: idx });
        }
        drift = drift.max((w(q, z).im - ws.im).abs());
        // σ = Σ sin²(t/2) and Σ - σ = Σ cos²(t/2), both without cancellation.
        let below = Complex64::new(sigma_total * (t / 2.0).sin().powi(2), 0.0);
        let above = Complex64::new(sigma_total * (t / 2.0).cos().powi(2), 0.0);
        let slope = -(sigma_total * t.sin() / 2.0)
            / (offset(z, zs, -below) * offset(z, -zs, above) / (z * z));
        nodes.push((z, gw * slope / z));
        t_prev = t;
        z_prev = z;
    }
    Ok((
        Branch {
            nodes,
            drift,
            tail: 0.0,
        },
        z_prev,
    ))
}

fn trace_branch(q: Complex64, zs: Complex64, v: Complex64, opts: &ThimbleOptions, scale: f64) -> Result<(Branch, bool)> {
    let ws = w(q, zs);
    let other = -zs;
    let gap = ws - w(q, other);
    let stokes = gap.im.abs() <= 1e-10 * (1.0 + ws.norm()) && gap.re > 0.0;
    if !stokes {
        return Ok((march_u(q, zs, v, opts.lambda.sqrt(), opts, opts.panel * scale)?, false));
    }
    let sigma_total = gap.re;
    let t_max = if sigma_total > opts.lambda {
        (1.0 - 2.0 * opts.lambda / sigma_total).acos()
    } else {
        PI
    };
    let (mut seg, last) = march_segment(q, zs, v, sigma_total, t_max, opts, PI / 16.0 * scale)?;
    if sigma_total >= opts.lambda {
        return Ok((seg, true));
    }
    // Arrival direction at the other critical point, snapped to its ascent axis.
    let vt = (-2.0 / d2w(q, other)).sqrt();
    let ascent = I * vt;
    let toward = other - last;
    let arrive = if (toward * ascent.conj()).re < 0.0 { ascent } else { -ascent };
    // Lateral rule for a → a + i0: turn right onto the descent axis.
    let d = if (vt * arrive.conj()).im < 0.0 { vt } else { -vt };
    let rest = march_u(q, other, d, (opts.lambda - sigma_total).sqrt(), opts, opts.panel * scale)?;
    seg.nodes.extend(rest.nodes);
    seg.drift = seg.drift.max(rest.drift + (w(q, other).im - ws.im).abs());
    seg.tail = rest.tail;
    Ok((seg, true))
}

fn classify(q: Complex64, branch: &Branch) -> ThimbleEnd {
    let z = branch.nodes.last().map(|n| n.0).unwrap_or_default();
    if z.norm() < q.norm().sqrt() {
        ThimbleEnd::Zero
    } else {
        ThimbleEnd::Infinity
    }
}

fn assemble(q: Complex64, c: Complex64, zs: Complex64, v: Complex64, opts: &ThimbleOptions, scale: f64) -> Result<ThimbleResult> {
    let ws = w(q, zs);
    let (b_plus, stokes_p) = trace_branch(q, zs, v, opts, scale)?;
    let (b_minus, stokes_m) = trace_branch(q, zs, -v, opts, scale)?;
    let (e_plus, e_minus) = (classify(q, &b_plus), classify(q, &b_minus));
    // Orient zero end → infinity end; default: the -v branch comes first.
    let (first, second, v_out) = if e_plus == ThimbleEnd::Zero && e_minus == ThimbleEnd::Infinity {
        (b_plus, b_minus, -v)
    } else {
        (b_minus, b_plus, v)
    };
    let ends = [classify(q, &first), classify(q, &second)];
    let mut nodes: Vec<(Complex64, Complex64)> = first.nodes.iter().rev().map(|&(z, wt)| (z, -wt)).collect();
    nodes.extend(second.nodes.iter().copied());
    let path: Vec<Complex64> = first
        .nodes
        .iter()
        .rev()
        .map(|n| n.0)
        .chain(std::iter::once(zs))
        .chain(second.nodes.iter().map(|n| n.0))
        .collect();
    let ec = (ws + c).exp();
    let integral = nodes.iter().map(|&(z, wt)| wt * (w(q, z) + c).exp()).sum();
    let leading_order = ec / zs * PI.sqrt() * v_out;
    Ok(ThimbleResult {
        saddle: zs,
        critical_value: ws,
        path,
        integral,
        im_drift: first.drift.max(second.drift),
        tail_bound: c.re.exp() * (first.tail + second.tail),
        ends,
        stokes: stokes_p || stokes_m,
        leading_order,
        nodes,
    })
}

/// Trace the thimble of `W = z + q/z` through the chosen saddle and
/// integrate `e^{W + c} dz/z` along it, halving the panels until the
/// integral settles.
pub fn trace_thimble(m: &LGModel, saddle: Saddle, opts: &ThimbleOptions) -> Result<ThimbleResult> {
    let q = m.single_q()?;
    if !(opts.lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("cutoff {} must be positive", opts.lambda)));
    }
    let zs = saddle.point(q);
    let v = (-2.0 / d2w(q, zs)).sqrt();
    let mut coarse = assemble(q, m.c, zs, v, opts, 1.0)?;
    // Near a Stokes line the other saddle sits close to the path and the
    // panels need refining; halve until two levels agree.
    let mut scale = 1.0;
    loop {
        scale *= 0.5;
        let fine = assemble(q, m.c, zs, v, opts, scale)?;
        let change = (fine.integral - coarse.integral).norm();
        // Rounding floor of the summation, which refinement cannot beat.
        let floor: f64 = 1e3
            * f64::EPSILON
            * fine
                .nodes
                .iter()
                .map(|&(z, wt)| (wt * (w(q, z) + m.c).exp()).norm())
                .sum::<f64>();
        if change <= opts.rel_tol * fine.integral.norm().max(1e-300) + fine.tail_bound + floor {
            return Ok(fine);
        }
        if scale < 1.0 / 64.0 {
            return Err(Error::QuadratureNotConverged {
                nodes: fine.nodes.len(),
                change,
            });
        }
        coarse = fine;
    }
}

/// Integration cycle for one factor of [`product_charge_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Cycle {
    Circle { radius: f64 },
    Thimble { saddle: Saddle },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductCharge {
    pub value: Complex64,
    /// One-dimensional factor integrals with `c = 0`.
    pub factors: Vec<Complex64>,
    /// Relative difference to the direct two-dimensional tensor quadrature
    /// (only for `n = 2`).
    pub fubini_residual: Option<f64>,
}

fn factor_nodes(q: Complex64, k: i64, cycle: Cycle) -> Result<Vec<(Complex64, Complex64)>> {
    let m = LGModel::single(q.ln(), Complex64::new(0.0, 0.0));
    match cycle {
        Cycle::Circle { radius } => {
            let n = circle_charge_with(&m, k, radius, &CircleOptions::default())?.nodes;
            let wt = I * (2.0 * PI / n as f64);
            Ok((0..n)
                .map(|j| (Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64), wt))
                .collect())
        }
        Cycle::Thimble { saddle } => Ok(trace_thimble(&m, saddle, &ThimbleOptions::default())?.nodes),
    }
}

/// `e^c Π_i ∫_{cycle_i} e^{z_i + q_i/z_i} z_i^{-k_i} dz_i/z_i`.
pub fn product_charge_numeric(m: &LGModel, ks: &[i64], cycles: &[Cycle]) -> Result<ProductCharge> {
    let n = m.n();
    if ks.len() != n || cycles.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ks.len().min(cycles.len()),
        });
    }
    let node_sets: Vec<Vec<(Complex64, Complex64)>> = (0..n)
        .map(|i| factor_nodes(m.q(i), ks[i], cycles[i]))
        .collect::<Result<_>>()?;
    let factors: Vec<Complex64> = node_sets
        .iter()
        .enumerate()
        .map(|(i, nodes)| {
            let q = m.q(i);
            nodes
                .iter()
                .map(|&(z, wt)| wt * w(q, z).exp() * z.powi(-ks[i] as i32))
                .sum()
        })
        .collect();
    let value = m.c.exp() * factors.iter().product::<Complex64>();
    let fubini_residual = (n == 2).then(|| {
        let (q1, q2) = (m.q(0), m.q(1));
        let mut total = Complex64::new(0.0, 0.0);
        for &(z1, w1) in &node_sets[0] {
            let mut row = Complex64::new(0.0, 0.0);
            for &(z2, w2) in &node_sets[1] {
                row += w2
                    * (z1 + z2 + m.c + q1 / z1 + q2 / z2).exp()
                    * z1.powi(-ks[0] as i32)
                    * z2.powi(-ks[1] as i32);
            }
            total += w1 * row;
        }
        (total - value).norm() / value.norm()
    });
    Ok(ProductCharge {
        value,
        factors,
        fubini_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub a0: Complex64,
    pub loops: u32,
    pub steps: usize,
    pub start: [Complex64; 2],
    pub end: [Complex64; 2],
    /// `end[i] = start[permutation[i]]`.
    pub permutation: [usize; 2],
    pub swapped: bool,
    pub max_step: f64,
    pub circle_start: Complex64,
    pub circle_end: Complex64,
    /// `|circle_end - circle_start| / |circle_start|`.
    pub circle_return_error: f64,
    /// Thimble integrals through `start[i]` at `a0`.
    pub thimble_start: [Complex64; 2],
    /// Thimble integrals through the continued saddle `end[i]` at the end of the loop.
    pub thimble_end: [Complex64; 2],
}

/// Follow `±√q` along `a(t) = a0 + 2πi t`, `t ∈ [0, loops]`.
pub fn monodromy_probe(m: &LGModel, loops: u32, steps: usize) -> Result<MonodromyReport> {
    let _ = m.single_q()?;
    if steps == 0 || loops == 0 {
        return Err(Error::InvalidParameter("monodromy probe needs steps and loops".into()));
    }
    let a0 = m.a[0];
    let start = m.saddles(0);
    let circle_start = circle_charge(m, 0, 1.0)?;
    let mut tracked = start;
    let mut max_step: f64 = 0.0;
    let total = steps * loops as usize;
    for j in 1..=total {
        let a = a0 + 2.0 * PI * I * (j as f64 / steps as f64);
        let s = a.exp().sqrt();
        let roots = [s, -s];
        let separation = (roots[0] - roots[1]).norm();
        // The continuous branch of √q along the path is e^{a/2}; its step
        // bounds how far either saddle moves.
        let prev_a = a0 + 2.0 * PI * I * ((j - 1) as f64 / steps as f64);
        let moved = ((a / 2.0).exp() - (prev_a / 2.0).exp()).norm();
        if moved >= separation / 2.0 {
            return Err(Error::TrackingLost { step: j, moved, separation });
        }
        max_step = max_step.max(moved);
        for t in tracked.iter_mut() {
            *t = if (roots[0] - *t).norm() <= (roots[1] - *t).norm() { roots[0] } else { roots[1] };
        }
    }
    let end_model = LGModel::single(a0 + 2.0 * PI * I * loops as f64, m.c);
    let circle_end = circle_charge(&end_model, 0, 1.0)?;
    let which = |z: Complex64| usize::from((z - start[0]).norm() > (z - start[1]).norm());
    let permutation = [which(tracked[0]), which(tracked[1])];
    let opts = ThimbleOptions::default();
    let thimble = |model: &LGModel, idx: usize| -> Result<Complex64> {
        let saddle = if idx == 0 { Saddle::Plus } else { Saddle::Minus };
        Ok(trace_thimble(model, saddle, &opts)?.integral)
    };
    let thimble_start = [thimble(m, 0)?, thimble(m, 1)?];
    let thimble_end = [
        thimble(&end_model, which(tracked[0]))?,
        thimble(&end_model, which(tracked[1]))?,
    ];
    Ok(MonodromyReport {
        a0,
        loops,
        steps,
        start,
        end: tracked,
        permutation,
        swapped: permutation == [1, 0],
        max_step,
        circle_start,
        circle_end,
        circle_return_error: (circle_end - circle_start).norm() / circle_start.norm(),
        thimble_start,
        thimble_end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bessel_series_known_values() {
        // I_0(2) and I_1(2) from standard tables.
        assert!((bessel_i(0, c(2.0, 0.0)).re - 2.279585302336067).abs() < 1e-14);
        assert!((bessel_i(1, c(2.0, 0.0)).re - 1.590636854637329).abs() < 1e-14);
        assert_eq!(bessel_i(-3, c(0.7, 0.2)), bessel_i(3, c(0.7, 0.2)));
    }

    #[test]
    fn circle_matches_series() {
        for a in [c(0.0, 0.0), c(1.0, 1.0), c(-0.5, 2.0)] {
            let m = LGModel::single(a, c(0.2, -0.3));
            for k in -6..=6 {
                let quad = circle_charge(&m, k, 1.0).unwrap();
                let exact = circle_closed_form(&m, k).unwrap();
                assert!((quad - exact).norm() <= 1e-9 * exact.norm(), "a={a} k={k}");
            }
        }
        let m = LGModel::single(c(0.0, 0.0), c(0.0, 0.0));
        let v = circle_charge(&m, 0, 1.0).unwrap();
        assert!((v - 2.0 * PI * I * 2.279585302336067).norm() < 1e-12);
    }

    #[test]
    fn circle_radius_independence() {
        let m = LGModel::single(c(0.3, 0.4), c(0.0, 0.0));
        let a = circle_charge(&m, 0, 1.0).unwrap();
        let b = circle_charge(&m, 0, 2.0).unwrap();
        assert!((a - b).norm() <= 1e-10 * a.norm());
    }

    #[test]
    fn thimbles_at_a_zero() {
        let m = LGModel::single(c(0.0, 0.0), c(0.0, 0.0));
        for saddle in [Saddle::Plus, Saddle::Minus] {
            let t = trace_thimble(&m, saddle, &ThimbleOptions::default()).unwrap();
            assert!(t.im_drift <= 1e-8 * (1.0 + t.critical_value.norm()));
            let re: Vec<f64> = t.path.iter().map(|&z| w(c(1.0, 0.0), z).re).collect();
            let peak = re.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!((peak - t.critical_value.re).abs() < 1e-12);
            assert_eq!(t.ends, [ThimbleEnd::Zero, ThimbleEnd::Infinity]);
        }
        let plus = trace_thimble(&m, Saddle::Plus, &ThimbleOptions::default()).unwrap();
        assert!(plus.stokes);
    }

    #[test]
    fn homology_relation_generic_point() {
        for a in [c(0.3, 0.7), c(-0.4, -1.1), c(0.5, 0.0), c(0.0, 0.01), c(0.2, -0.003)] {
            let m = LGModel::single(a, c(0.0, 0.0));
            let circle = circle_charge(&m, 0, 1.0).unwrap();
            let p = trace_thimble(&m, Saddle::Plus, &ThimbleOptions::default()).unwrap();
            let n = trace_thimble(&m, Saddle::Minus, &ThimbleOptions::default()).unwrap();
            let diff = p.integral - n.integral;
            let best = (circle - diff).norm().min((circle + diff).norm());
            assert!(best <= 1e-6 * circle.norm(), "a={a}: {circle} vs {diff}");
        }
    }

    #[test]
    fn saddle_point_asymptotics() {
        let m = LGModel::single(c(25f64.ln(), 0.0), c(0.0, 0.0));
        let t = trace_thimble(&m, Saddle::Plus, &ThimbleOptions::default()).unwrap();
        let rel = (t.integral - t.leading_order).norm() / t.integral.norm();
        assert!(rel < 0.05, "relative deviation {rel}");
    }

    #[test]
    fn product_of_circles_factorizes() {
        let m = LGModel::new(vec![c(0.0, 0.0), c(0.0, 0.0)], c(0.0, 0.0)).unwrap();
        let circ = Cycle::Circle { radius: 1.0 };
        let r = product_charge_numeric(&m, &[0, 0], &[circ, circ]).unwrap();
        let one = 2.0 * PI * I * bessel_i(0, c(2.0, 0.0));
        assert!((r.value - one * one).norm() < 1e-10 * r.value.norm());
        assert!(r.fubini_residual.unwrap() < 1e-8);

        let shifted = LGModel::new(m.a.clone(), c(0.7, 0.2)).unwrap();
        let rs = product_charge_numeric(&shifted, &[0, 0], &[circ, circ]).unwrap();
        assert!((rs.value - r.value * c(0.7, 0.2).exp()).norm() < 1e-12 * rs.value.norm());

        let mixed = LGModel::new(vec![c(0.2, 0.3), c(-0.1, 0.0)], c(0.0, 0.0)).unwrap();
        let r = product_charge_numeric(&mixed, &[1, 0], &[Cycle::Thimble { saddle: Saddle::Minus }, circ]).unwrap();
        assert!(r.fubini_residual.unwrap() < 1e-8);
    }

    #[test]
    fn monodromy_swaps_saddles() {
        let m = LGModel::single(c(0.0, 0.0), c(0.0, 0.0));
        let r = monodromy_probe(&m, 1, 64).unwrap();
        assert!(r.swapped);
        assert!(r.circle_return_error < 1e-8);
        let r2 = monodromy_probe(&m, 2, 64).unwrap();
        assert_eq!(r2.permutation, [0, 1]);
        assert!(matches!(monodromy_probe(&m, 1, 1), Err(Error::TrackingLost { .. })));
    }
}
