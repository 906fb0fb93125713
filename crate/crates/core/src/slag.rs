//! Special Lagrangian curves of `Ω = exp(z + c + q/z) dz/z` in `C^×`.
//!
//! A curve of phase `φ` solves `dz/dt = e^{iπφ} z e^{-(z + c + q/z)}`, so
//! that `Ω(ż) = e^{iπφ}` and the mass is the `t`-extent. The magnitude of
//! the right-hand side spans dozens of orders, so the integrator runs in
//! arclength `s` with state `(Re z, Im z, t)`:
//! `dz/ds = ±F/|F|`, `dt/ds = ±1/|F|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SLagProblem {
    pub a: Complex64,
    pub c: Complex64,
    pub phi: f64,
    pub seed: Complex64,
    pub rtol: f64,
    /// Per direction.
    pub max_arclength: f64,
    pub guard_radius: f64,
    /// Ends are declared once `|Re(W + c)|` reaches this level.
    pub end_level: f64,
    /// Return distance accepted as a closed orbit.
    pub closed_delta: f64,
}

impl SLagProblem {
    pub fn new(a: Complex64, c: Complex64, phi: f64, seed: Complex64) -> Self {
        Self {
            a,
            c,
            phi,
            seed,
            rtol: 1e-12,
            max_arclength: 200.0,
            guard_radius: 1e-8,
            end_level: 30.0,
            closed_delta: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.c, self.seed].iter().all(|z| z.is_finite()) && self.phi.is_finite();
        if !finite {
            return Err(Error::InvalidParameter("non-finite sLag parameter".into()));
        }
        if self.seed.norm() == 0.0 {
            return Err(Error::InvalidParameter("seed must be nonzero".into()));
        }
        for (name, v) in [
            ("rtol", self.rtol),
            ("max_arclength", self.max_arclength),
            ("guard_radius", self.guard_radius),
            ("end_level", self.end_level),
            ("closed_delta", self.closed_delta),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn q(&self) -> Complex64 {
        self.a.exp()
    }

    /// `ρ(z) = e^{z + c + q/z} / z`, so that `Ω = ρ dz`.
    pub fn rho(&self, z: Complex64) -> Complex64 {
        (z + self.c + self.q() / z).exp() / z
    }

    /// `dz/dt`.
    pub fn velocity(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, PI * self.phi) * z * (-(z + self.c + self.q() / z)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndKind {
    /// `Re z → -∞`.
    LeftInfinity,
    /// `Re(q/z) → -∞`.
    ZeroPuncture,
    /// `Re(z + q/z) → +∞`.
    Escaping,
    ClosedOrbit,
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub z: Complex64,
    pub zdot: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedPath {
    pub a: Complex64,
    pub c: Complex64,
    pub phi: f64,
    /// Ordered by increasing `t`; the seed sits at `t = 0`.
    pub samples: Vec<Sample>,
    /// `t`-extent.
    pub mass: f64,
    /// Largest `|arg(∫_chord Ω)/π - φ|` (mod 2) over consecutive samples.
    pub phase_drift: f64,
    /// `| |∫_γ Ω| - mass | / mass`, with `∫_γ Ω` from chord quadrature.
    pub mass_residual: f64,
    /// Ends in the backward and forward directions.
    pub ends: [EndKind; 2],
    /// For closed orbits: `∮ Ω` including the closing chord.
    pub loop_integral: Option<Complex64>,
    pub return_distance: Option<f64>,
}

impl TracedPath {
    pub fn is_closed(&self) -> bool {
        self.ends[1] == EndKind::ClosedOrbit
    }
}

const GL_ORDER: usize = 16;

/// `∫ ρ(z) dz` along the straight chord `z0 → z1`.
pub fn chord_integral(p: &SLagProblem, z0: Complex64, z1: Complex64) -> Complex64 {
    let (x, w) = gauss_legendre(GL_ORDER);
    let half = (z1 - z0) / 2.0;
    let mid = (z0 + z1) / 2.0;
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| p.rho(mid + half * xi) * wi)
        .sum::<Complex64>()
        * half
}

fn wrap2(x: f64) -> f64 {
    let y = x.rem_euclid(2.0);
    if y > 1.0 {
        y - 2.0
    } else {
        y
    }
}

type State = [f64; 3];

struct Flow<'a> {
    p: &'a SLagProblem,
    q: Complex64,
    sign: f64,
    rotation: Complex64,
}

impl Flow<'_> {
    fn rhs(&self, y: &State) -> State {
        let z = Complex64::new(y[0], y[1]);
        let ew = z + self.p.c + self.q / z;
        // F/|F| = e^{iπφ} (z/|z|) e^{-i Im(W + c)}
        let dir = self.rotation * (z / z.norm()) * Complex64::from_polar(1.0, -ew.im);
        let inv_speed = ew.re.exp() / z.norm();
        [self.sign * dir.re, self.sign * dir.im, self.sign * inv_speed]
    }

    /// One Dormand–Prince 5(4) step; returns the new state and the scaled error.
    fn step(&self, y: &State, h: f64) -> (State, f64) {
        const A: [[f64; 6]; 6] = [
            [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
            [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
            [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
            [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
            [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
        ];
        const B4: [f64; 7] = [
            5179.0 / 57600.0,
            0.0,
            7571.0 / 16695.0,
            393.0 / 640.0,
            -92097.0 / 339200.0,
            187.0 / 2100.0,
            1.0 / 40.0,
        ];
        let mut k = [[0.0; 3]; 7];
        k[0] = self.rhs(y);
        for s in 0..6 {
            let mut ys = *y;
            for (i, yi) in ys.iter_mut().enumerate() {
                *yi += h * (0..=s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            k[s + 1] = self.rhs(&ys);
        }
        let mut y5 = *y;
        for (i, yi) in y5.iter_mut().enumerate() {
            *yi += h * (0..6).map(|j| A[5][j] * k[j][i]).sum::<f64>();
        }
        let b5: [f64; 7] = [A[5][0], A[5][1], A[5][2], A[5][3], A[5][4], A[5][5], 0.0];
        let err: State = std::array::from_fn(|i| h * (0..7).map(|j| (b5[j] - B4[j]) * k[j][i]).sum::<f64>());
        let zscale = Complex64::new(y[0], y[1]).norm().max(Complex64::new(y5[0], y5[1]).norm());
        let rtol = self.p.rtol;
        let sz = 1e-3 * rtol + rtol * zscale;
        let st = 1e-300 + rtol * y[2].abs().max(y5[2].abs());
        let e = ((err[0] / sz).powi(2) + (err[1] / sz).powi(2) + (err[2] / st).powi(2)) / 3.0;
        (y5, e.sqrt())
    }
}

struct DirectionTrace {
    states: Vec<State>,
    end: EndKind,
    return_distance: Option<f64>,
}

/// What to do when the path crosses the ray through the seed after a full turn.
#[derive(Clone, Copy, PartialEq)]
enum OnReturn {
    CloseWithin(f64),
    Stop,
}

fn angle_of(y: &State) -> f64 {
    y[1].atan2(y[0])
}

fn trace_direction(p: &SLagProblem, sign: f64, on_return: OnReturn) -> Result<DirectionTrace> {
    let flow = Flow {
        p,
        q: p.q(),
        sign,
        rotation: Complex64::from_polar(1.0, PI * p.phi),
    };
    let mut y: State = [p.seed.re, p.seed.im, 0.0];
    let mut states = vec![y];
    let mut h = 1e-3 * p.seed.norm();
    let mut arclength = 0.0;
    let mut winding = 0.0;
    let mut next_turn = 1.0;
    loop {
        let z = Complex64::new(y[0], y[1]);
        if z.norm() < p.guard_radius {
            return Err(Error::StepCollapse { z_re: z.re, z_im: z.im });
        }
        let hmax = 0.1 * z.norm();
        h = h.min(hmax).min(p.max_arclength - arclength);
        if h <= 1e-13 * z.norm() {
            if p.max_arclength - arclength <= 1e-13 * z.norm() {
                return Ok(DirectionTrace {
                    states,
                    end: EndKind::Truncated,
                    return_distance: None,
                });
            }
            return Err(Error::StepCollapse { z_re: z.re, z_im: z.im });
        }
        let (y_new, err) = flow.step(&y, h);
        let finite = y_new.iter().all(|v| v.is_finite());
        if !finite || err > 1.0 {
            let factor = if finite { (0.9 * err.powf(-0.2)).max(0.1) } else { 0.1 };
            h *= factor;
            continue;
        }
        // Unwrapped winding about the origin.
        let mut d_theta = angle_of(&y_new) - angle_of(&y);
        if d_theta > PI {
            d_theta -= 2.0 * PI;
        } else if d_theta < -PI {
            d_theta += 2.0 * PI;
        }
        let new_winding = winding + d_theta;
        if new_winding.abs() >= 2.0 * PI * next_turn {
            // Land exactly on the seed ray with a shortened step (secant on h).
            let target = 2.0 * PI * next_turn * new_winding.signum();
            let residual = |hh: f64| -> (State, f64) {
                let (ys, _) = flow.step(&y, hh);
                let mut dt = angle_of(&ys) - angle_of(&y);
                if dt > PI {
                    dt -= 2.0 * PI;
                } else if dt < -PI {
                    dt += 2.0 * PI;
                }
                (ys, winding + dt - target)
            };
            let (mut h0, mut f0) = (0.0, winding - target);
            let (mut h1, mut f1) = (h, new_winding - target);
            let mut hit = y_new;
            for _ in 0..60 {
                let h2 = (h1 - f1 * (h1 - h0) / (f1 - f0)).clamp(0.0, h);
                let (ys, f2) = residual(h2);
                hit = ys;
                if f2.abs() < 1e-14 || (h2 - h1).abs() < 1e-16 * h {
                    break;
                }
                h0 = h1;
                f0 = f1;
                h1 = h2;
                f1 = f2;
            }
            let distance = (Complex64::new(hit[0], hit[1]) - p.seed).norm();
            let closes = match on_return {
                OnReturn::CloseWithin(delta) => distance <= delta,
                OnReturn::Stop => true,
            };
            if closes {
                states.push(hit);
                return Ok(DirectionTrace {
                    states,
                    end: if matches!(on_return, OnReturn::Stop) && distance > p.closed_delta {
                        EndKind::Truncated
                    } else {
                        EndKind::ClosedOrbit
                    },
                    return_distance: Some(distance),
                });
            }
            next_turn += 1.0;
        }
        winding = new_winding;
        arclength += h;
        y = y_new;
        states.push(y);
        h *= (0.9 * err.max(1e-10).powf(-0.2)).min(5.0);

        let z = Complex64::new(y[0], y[1]);
        let level = (z + p.c + flow.q / z).re;
        if level <= -p.end_level {
            let end = if z.norm() > flow.q.norm().sqrt() {
                EndKind::LeftInfinity
            } else {
                EndKind::ZeroPuncture
            };
            return Ok(DirectionTrace {
                states,
                end,
                return_distance: None,
            });
        }
        if level >= p.end_level {
            return Ok(DirectionTrace {
                states,
                end: EndKind::Escaping,
                return_distance: None,
            });
        }
        if arclength >= p.max_arclength {
            return Ok(DirectionTrace {
                states,
                end: EndKind::Truncated,
                return_distance: None,
            });
        }
    }
}

fn assemble(p: &SLagProblem, backward: Option<DirectionTrace>, forward: DirectionTrace) -> TracedPath {
    let mut states: Vec<State> = Vec::new();
    let back_end = match &backward {
        Some(b) => {
            states.extend(b.states.iter().skip(1).rev());
            b.end
        }
        None => EndKind::ClosedOrbit,
    };
    states.extend(forward.states.iter());
    let samples: Vec<Sample> = states
        .iter()
        .map(|s| {
            let z = Complex64::new(s[0], s[1]);
            Sample {
                t: s[2],
                z,
                zdot: p.velocity(z),
            }
        })
        .collect();
    let rotation = Complex64::from_polar(1.0, -PI * p.phi);
    let mut total = Complex64::new(0.0, 0.0);
    let mut drift: f64 = 0.0;
    for pair in samples.windows(2) {
        let chord = chord_integral(p, pair[0].z, pair[1].z);
        total += chord;
        if pair[1].t > pair[0].t {
            drift = drift.max(wrap2((chord * rotation).arg() / PI).abs());
        }
    }
    let mass = samples.last().map_or(0.0, |s| s.t) - samples.first().map_or(0.0, |s| s.t);
    let closed = forward.end == EndKind::ClosedOrbit;
    let loop_integral = closed.then(|| {
        let last = samples.last().expect("nonempty").z;
        total + chord_integral(p, last, p.seed)
    });
    TracedPath {
        a: p.a,
        c: p.c,
        phi: p.phi,
        mass_residual: if mass > 0.0 { (total.norm() - mass).abs() / mass } else { 0.0 },
        samples,
        mass,
        phase_drift: drift,
        ends: [back_end, forward.end],
        loop_integral,
        return_distance: forward.return_distance,
    }
}

/// Trace the phase-`φ` curve through the seed in both directions.
pub fn trace_slag(p: &SLagProblem) -> Result<TracedPath> {
    p.validate()?;
    let forward = trace_direction(p, 1.0, OnReturn::CloseWithin(p.closed_delta))?;
    if forward.end == EndKind::ClosedOrbit {
        return Ok(assemble(p, None, forward));
    }
    let backward = trace_direction(p, -1.0, OnReturn::CloseWithin(p.closed_delta))?;
    Ok(assemble(p, Some(backward), forward))
}

/// One seed of a closed-orbit scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnSample {
    pub radius: f64,
    /// The forward path came back to the seed ray.
    pub returned: bool,
    /// `|z_final| - r`, where `z_final` is the return point or, when the
    /// path ends first, its end point. The sign tells which side of the
    /// seed the path went.
    pub displacement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedSearch {
    pub scan: Vec<ReturnSample>,
    pub orbit: Option<TracedPath>,
}

/// Signed Poincaré return for the seed `r e^{iθ}`.
pub fn return_displacement(base: &SLagProblem, radius: f64, angle: f64) -> Result<ReturnSample> {
    let p = SLagProblem {
        seed: Complex64::from_polar(radius, angle),
        ..*base
    };
    p.validate()?;
    let tr = trace_direction(&p, 1.0, OnReturn::Stop)?;
    let last = tr.states.last().expect("nonempty");
    Ok(ReturnSample {
        radius,
        returned: tr.return_distance.is_some(),
        displacement: Complex64::new(last[0], last[1]).norm() - radius,
    })
}

/// Scan seeds `r e^{iθ}` on `radii` (a grid of `grid` points) for a closed
/// orbit, refining sign changes of the signed return by bisection.
pub fn find_closed_slag(
    a: Complex64,
    c: Complex64,
    phi: f64,
    angle: f64,
    radii: (f64, f64),
    grid: usize,
    delta: f64,
) -> Result<ClosedSearch> {
    let base = SLagProblem {
        closed_delta: delta,
        ..SLagProblem::new(a, c, phi, Complex64::from_polar(radii.0, angle))
    };
    let grid = grid.max(2);
    let scan: Vec<ReturnSample> = (0..grid)
        .map(|i| {
            let radius = radii.0 + (radii.1 - radii.0) * i as f64 / (grid - 1) as f64;
            return_displacement(&base, radius, angle)
        })
        .collect::<Result<_>>()?;
    let hit = |s: &ReturnSample| s.returned && s.displacement.abs() <= delta;
    let close = |radius: f64| -> Result<Option<TracedPath>> {
        let p = SLagProblem {
            seed: Complex64::from_polar(radius, angle),
            ..base
        };
        let path = trace_slag(&p)?;
        Ok(path.is_closed().then_some(path))
    };
    for s in scan.iter().filter(|s| hit(s)) {
        if let Some(path) = close(s.radius)? {
            return Ok(ClosedSearch { scan, orbit: Some(path) });
        }
    }
    for pair in scan.windows(2) {
        let (d0, d1) = (pair[0].displacement, pair[1].displacement);
        if d0.signum() == d1.signum() {
            continue;
        }
        let (mut lo, mut hi, mut dlo) = (pair[0].radius, pair[1].radius, d0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let s = return_displacement(&base, mid, angle)?;
            if hit(&s) {
                if let Some(path) = close(mid)? {
                    return Ok(ClosedSearch { scan, orbit: Some(path) });
                }
                break;
            }
            if s.displacement.signum() == dlo.signum() {
                lo = mid;
                dlo = s.displacement;
            } else {
                hi = mid;
            }
        }
    }
    Ok(ClosedSearch { scan, orbit: None })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductPhaseWitness {
    /// Sample index used in each path.
    pub indices: Vec<usize>,
    pub phase: f64,
    pub expected: f64,
    pub mass_mismatch: f64,
}

/// At `samples` tuples of points (same relative position along each path),
/// `Π ρ_i(z_i) ż_i` has phase `Σ φ_i` and modulus `Π |ρ_i ż_i|`.
pub fn product_phase_check(
    paths: &[&TracedPath],
    samples: usize,
    tolerance: f64,
) -> std::result::Result<usize, ProductPhaseWitness> {
    let expected: f64 = paths.iter().map(|p| p.phi).sum();
    let count = samples.max(1);
    for j in 0..count {
        let indices: Vec<usize> = paths
            .iter()
            .map(|p| {
                let len = p.samples.len();
                if count == 1 { 0 } else { j * (len - 1) / (count - 1) }
            })
            .collect();
        let mut product = Complex64::new(1.0, 0.0);
        let mut modulus = 1.0;
        for (p, &i) in paths.iter().zip(&indices) {
            let s = p.samples[i];
            let prob = SLagProblem::new(p.a, p.c, p.phi, s.z);
            let factor = prob.rho(s.z) * s.zdot;
            product *= factor;
            modulus *= factor.norm();
        }
        let phase = product.arg() / PI;
        let mismatch = (product.norm() - modulus).abs() / modulus;
        if wrap2(phase - expected).abs() > tolerance || mismatch > 1e-12 {
            return Err(ProductPhaseWitness {
                indices,
                phase,
                expected,
                mass_mismatch: mismatch,
            });
        }
    }
    Ok(count)
}
