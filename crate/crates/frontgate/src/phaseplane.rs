//! Phase-plane machinery for the standing-wave problem.
//!
//! The profile equation -p'' - C p' = f(p) becomes the planar system
//! X' = Y, Y' = -C Y - f(X) with energy E = Y^2/2 + F(X). Barrier tails live
//! on the level sets E = F(1) (entry, Gamma_B) and E = 0 (exit, Gamma_A);
//! the interior connection is found by integrating orbits between them.
//!
//! The same module integrates the first-order form of the connection problem,
//! w'(p) = C sqrt(2 (w(p) - F(p))), the "w-equation", including the
//! square-root-singular starts at p = 0 and p = 1 used for the limiting
//! endpoints and the traveling-wave speed.

use crate::error::{invalid, numerical, Result};
use crate::reaction::{Kind, ReactionModel};

/// Offset used to leave a square-root-singular start along its quadratic asymptote.
pub(crate) const SINGULAR_OFFSET: f64 = 1e-6;

/// Default orbit time step; shrunk automatically for stiff (large C) systems.
pub const DEFAULT_ORBIT_STEP: f64 = 1e-3;

/// Default p step of the w-equation integrator.
pub const DEFAULT_W_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

/// E(X, Y) = Y^2/2 + F(X); decreases along orbits at rate -C Y^2.
pub fn energy(model: &ReactionModel, pt: PhasePoint) -> f64 {
    0.5 * pt.y * pt.y + model.potential(pt.x)
}

/// Point of the entry level set Gamma_B: (beta, -sqrt(2 (F(1) - F(beta)))).
pub fn entry_point(model: &ReactionModel, beta: f64) -> Result<PhasePoint> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(invalid(format!("beta must lie in (0, 1], got {beta}")));
    }
    let gap = model.mass() - model.potential(beta);
    if gap < -1e-14 {
        return Err(invalid(format!("F(1) < F({beta}); no entry point")));
    }
    Ok(PhasePoint { x: beta, y: -(2.0 * gap.max(0.0)).sqrt() })
}

/// Why an orbit stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExitReason {
    /// Energy crossed zero with X in (0, theta_c]: the orbit reached Gamma_A.
    HitGammaA { alpha: f64, y: f64 },
    /// X left [0, 1].
    LeftUnitBox,
    /// Y turned non-negative.
    TurnedBack,
    MaxTime,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub coefficient: f64,
    pub samples: Vec<(f64, PhasePoint)>,
    pub exit: ExitReason,
    pub exit_time: f64,
    pub exit_state: PhasePoint,
}

impl Orbit {
    /// Rows (t, X, Y) for CSV emission.
    pub fn csv_rows(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|(t, pt)| vec![*t, pt.x, pt.y]).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitOptions {
    /// Time step; None picks min(1e-3, 1e-2 / max|f'|, 1e-2 / max(C, 1)).
    pub dt: Option<f64>,
    /// Keep every n-th sample; 0 keeps only the endpoints.
    pub record_every: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self { dt: None, record_every: 1 }
    }
}

#[inline]
fn orbit_rhs(model: &ReactionModel, c: f64, x: f64, y: f64) -> (f64, f64) {
    (y, -c * y - model.f(x))
}

#[inline]
fn orbit_step(model: &ReactionModel, c: f64, x: f64, y: f64, dt: f64) -> (f64, f64) {
    let (k1x, k1y) = orbit_rhs(model, c, x, y);
    let (k2x, k2y) = orbit_rhs(model, c, x + 0.5 * dt * k1x, y + 0.5 * dt * k1y);
    let (k3x, k3y) = orbit_rhs(model, c, x + 0.5 * dt * k2x, y + 0.5 * dt * k2y);
    let (k4x, k4y) = orbit_rhs(model, c, x + dt * k3x, y + dt * k3y);
    (
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )
}

pub(crate) fn default_orbit_dt(model: &ReactionModel, c: f64) -> f64 {
    DEFAULT_ORBIT_STEP
        .min(1e-2 / model.max_abs_fprime().max(1e-9))
        .min(1e-2 / c.max(1.0))
}

/// Bisect the step fraction at which `event` (positive before, non-positive
/// after) crosses zero; returns (t_offset, state just after crossing).
fn refine_crossing<E: Fn(f64, f64) -> f64>(
    model: &ReactionModel,
    c: f64,
    pre: (f64, f64),
    dt: f64,
    event: E,
) -> (f64, (f64, f64)) {
    let mut lo = 0.0;
    let mut hi = dt;
    let mut state_hi = orbit_step(model, c, pre.0, pre.1, dt);
    for _ in 0..80 {
        if hi - lo <= 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s = orbit_step(model, c, pre.0, pre.1, mid);
        if event(s.0, s.1) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
            state_hi = s;
        }
    }
    (hi, state_hi)
}

/// Integrate the planar system until Gamma_A is hit, the unit box is left,
/// the orbit turns back, or `t_max` elapses. Fixed-step RK4; each triggered
/// event time is refined by bisection to 1e-12 and the earliest one wins.
pub fn integrate_orbit(
    model: &ReactionModel,
    c: f64,
    start: PhasePoint,
    t_max: f64,
    opts: OrbitOptions,
) -> Result<Orbit> {
    if c < 0.0 {
        return Err(invalid("coefficient must be non-negative"));
    }
    if model.kind() != Kind::Bistable {
        return Err(invalid("orbit integration expects a bistable model"));
    }
    let dt = opts.dt.unwrap_or_else(|| default_orbit_dt(model, c));
    let stiff_bound = 1e-2 / model.max_abs_fprime().max(1e-9);
    if dt > stiff_bound {
        return Err(invalid(format!(
            "step {dt} exceeds stiffness bound {stiff_bound} (1e-2 / max|f'|)"
        )));
    }

    let mut t = 0.0;
    let mut x = start.x;
    let mut y = start.y;
    let mut e_prev = energy(model, start);
    let mut samples = vec![(t, start)];
    let mut step_count = 0usize;

    loop {
        if t >= t_max {
            let pt = PhasePoint { x, y };
            if opts.record_every == 0 {
                samples.push((t, pt));
            }
            return Ok(Orbit { coefficient: c, samples, exit: ExitReason::MaxTime, exit_time: t, exit_state: pt });
        }
        let h = dt.min(t_max - t);
        let pre = (x, y);
        let (nx, ny) = orbit_step(model, c, x, y, h);

        // Candidate events at the end of this step, each with its event
        // function (positive before the crossing).
        let mut best: Option<(f64, (f64, f64), ExitReason)> = None;
        let e_end = 0.5 * ny * ny + model.potential(nx);
        if e_end <= 0.0 && e_prev > 0.0 {
            let (dtc, s) =
                refine_crossing(model, c, pre, h, |px, py| 0.5 * py * py + model.potential(px));
            best = Some((dtc, s, ExitReason::HitGammaA { alpha: s.0, y: s.1 }));
        }
        if nx <= 0.0 {
            let (dtc, s) = refine_crossing(model, c, pre, h, |px, _| px);
            if best.as_ref().map_or(true, |b| dtc < b.0) {
                best = Some((dtc, s, ExitReason::LeftUnitBox));
            }
        }
        if nx >= 1.0 && x < 1.0 {
            let (dtc, s) = refine_crossing(model, c, pre, h, |px, _| 1.0 - px);
            if best.as_ref().map_or(true, |b| dtc < b.0) {
                best = Some((dtc, s, ExitReason::LeftUnitBox));
            }
        }
        if ny > 1e-14 && y <= 0.0 {
            let (dtc, s) = refine_crossing(model, c, pre, h, |_, py| -py);
            if best.as_ref().map_or(true, |b| dtc < b.0) {
                best = Some((dtc, s, ExitReason::TurnedBack));
            }
        }

        if let Some((dtc, (ex, ey), mut exit)) = best {
            let te = t + dtc;
            let pt = PhasePoint { x: ex, y: ey };
            if let ExitReason::HitGammaA { .. } = exit {
                exit = ExitReason::HitGammaA { alpha: ex, y: ey };
            }
            samples.push((te, pt));
            return Ok(Orbit { coefficient: c, samples, exit, exit_time: te, exit_state: pt });
        }

        t += h;
        x = nx;
        y = ny;
        e_prev = e_end;
        step_count += 1;
        if opts.record_every > 0 && step_count % opts.record_every == 0 {
            samples.push((t, PhasePoint { x, y }));
        }
    }
}

/// The connection profile w(p) with w(alpha) = 0, together with the running
/// crossing integral int_alpha^p dq / sqrt(2 (w - F)) whose half value is the
/// half-length lambda.
#[derive(Debug, Clone)]
pub struct EnergyProfile {
    pub coefficient: f64,
    pub alpha: f64,
    pub grid: Vec<f64>,
    pub w: Vec<f64>,
    pub length_integral: Vec<f64>,
    /// p at which w - F reached zero, when integration stopped early.
    pub truncated: Option<f64>,
}

impl EnergyProfile {
    pub fn end_value(&self) -> f64 {
        *self.w.last().unwrap()
    }

    pub fn crossing_measure(&self) -> f64 {
        *self.length_integral.last().unwrap()
    }

    pub fn eval(&self, p: f64) -> f64 {
        crate::numerics::interp_clamped(&self.grid, &self.w, p)
    }

    /// Rows (p, w, Y) for CSV emission, where Y = -sqrt(2 (w - F)) is the
    /// profile slope on the connection.
    pub fn csv_rows(&self, model: &ReactionModel) -> Vec<Vec<f64>> {
        self.grid
            .iter()
            .zip(self.w.iter())
            .map(|(p, w)| {
                let y = -(2.0 * (w - model.potential(*p)).max(0.0)).sqrt();
                vec![*p, *w, y]
            })
            .collect()
    }
}

// The connection problem is integrated in the slope variable
// v(p) = sqrt(2 (w(p) - F(p))) = |p'|, which obeys v' = C - f(p)/v. Along a
// valid connection v stays positive and the right-hand side is smooth, so the
// square-root singularities of the w-form never enter the arithmetic; the
// profile energy is recovered as w = F(p) + v^2/2.

#[inline]
fn v_rhs(model: &ReactionModel, c: f64, p: f64, v: f64) -> (f64, f64) {
    let v = v.max(1e-300);
    (c - model.f(p) / v, 1.0 / v)
}

/// One RK4 step of (v, I) in p, where I accumulates int dp / v.
#[inline]
fn w_step(model: &ReactionModel, c: f64, p: f64, v: f64, i_acc: f64, h: f64) -> (f64, f64) {
    let (k1, l1) = v_rhs(model, c, p, v);
    let (k2, l2) = v_rhs(model, c, p + 0.5 * h, v + 0.5 * h * k1);
    let (k3, l3) = v_rhs(model, c, p + 0.5 * h, v + 0.5 * h * k2);
    let (k4, l4) = v_rhs(model, c, p + h, v + h * k3);
    (
        v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
        i_acc + h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4),
    )
}

/// Integrate the w-equation from the regular start w(alpha) = 0 (requires
/// alpha < theta_c so that w - F starts positive). Truncates with a flag if
/// w - F reaches zero before `p_end`.
pub fn solve_energy_profile(
    model: &ReactionModel,
    c: f64,
    alpha: f64,
    p_end: f64,
    step: Option<f64>,
) -> Result<EnergyProfile> {
    let theta_c = model
        .theta_c()
        .ok_or_else(|| invalid("model has no theta_c (degenerate or monostable)"))?;
    if !(alpha > 0.0 && alpha < theta_c) {
        return Err(invalid(format!(
            "alpha must lie in (0, theta_c) = (0, {theta_c}), got {alpha} (w(alpha) - F(alpha) must be positive)"
        )));
    }
    if !(p_end > alpha && p_end <= 1.0) {
        return Err(invalid("need alpha < p_end <= 1"));
    }
    if c < 0.0 {
        return Err(invalid("coefficient must be non-negative"));
    }
    let h = step.unwrap_or_else(|| DEFAULT_W_STEP.min((p_end - alpha) / 1000.0));
    let n = ((p_end - alpha) / h).ceil() as usize;
    let h = (p_end - alpha) / n as f64;

    let mut grid = Vec::with_capacity(n + 1);
    let mut ws = Vec::with_capacity(n + 1);
    let mut lint = Vec::with_capacity(n + 1);
    grid.push(alpha);
    ws.push(0.0);
    lint.push(0.0);

    let mut v = (-2.0 * model.potential(alpha)).sqrt();
    let mut acc = 0.0;
    let mut truncated = None;
    for k in 0..n {
        let p = alpha + k as f64 * h;
        let (nv, nacc) = w_step(model, c, p, v, acc, h);
        let p_next = alpha + (k + 1) as f64 * h;
        if !(nv > 0.0) || !nv.is_finite() {
            // Refine the touching point by bisection on the step fraction.
            let mut lo = 0.0;
            let mut hi = h;
            for _ in 0..80 {
                if hi - lo <= 1e-13 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let (vm, _) = w_step(model, c, p, v, acc, mid);
                if vm > 0.0 && vm.is_finite() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            truncated = Some(p + 0.5 * (lo + hi));
            break;
        }
        v = nv;
        acc = nacc;
        grid.push(p_next);
        ws.push(model.potential(p_next) + 0.5 * v * v);
        lint.push(acc);
    }

    Ok(EnergyProfile { coefficient: c, alpha, grid, w: ws, length_integral: lint, truncated })
}

/// Outcome of a singular-start w integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum WShot {
    /// Reached the far end of the p interval; carries w there.
    Reached { w_end: f64 },
    /// w - F vanished at p before the far end.
    Truncated { p: f64 },
    /// w crossed the requested level at p.
    CrossedLevel { p: f64 },
}

/// Quadratic asymptote coefficient at the p = 0 singular start:
/// positive root of 4 a^2 - 2 C^2 a + C^2 f'(0) = 0.
pub(crate) fn singular_coeff_at_zero(model: &ReactionModel, c: f64) -> f64 {
    0.25 * (c * c + c * (c * c - 4.0 * model.fprime0()).sqrt())
}

/// Mirrored coefficient at p = 1: w = F(1) - b (1-p)^2 with
/// 4 b^2 + 2 C^2 b + C^2 f'(1) = 0, positive root.
pub(crate) fn singular_coeff_at_one(model: &ReactionModel, c: f64) -> f64 {
    0.25 * (-c * c + c * (c * c - 4.0 * model.fprime1()).sqrt())
}

/// Integrate the connection from the singular start at p = 0 towards
/// `p_stop`; in the slope variable the start is v(delta) = sqrt(2 a) delta.
/// If `stop_level` is given, reports the first crossing of w = level.
pub(crate) fn w_from_zero(
    model: &ReactionModel,
    c: f64,
    p_stop: f64,
    step: f64,
    stop_level: Option<f64>,
) -> Result<WShot> {
    if c <= 0.0 {
        return Err(invalid("coefficient must be positive for a singular start"));
    }
    // w ~ a p^2 translates to the slope asymptote v ~ k p with
    // k = sqrt(2a - f'(0)) = (c + sqrt(c^2 - 4 f'(0)))/2. The corner is
    // contracting in forward p, so errors in the offset start are forgotten;
    // the offset itself is pushed out far enough that the local stiffness
    // |f'(0)|/(k^2 p) stays resolvable by the step.
    let k_slope = (2.0 * singular_coeff_at_zero(model, c) - model.fprime0()).sqrt();
    let p0 = SINGULAR_OFFSET
        .max(20.0 * step * model.fprime0().abs() / (k_slope * k_slope))
        .min(0.01);
    let mut v = k_slope * p0;
    let n = ((p_stop - p0) / step).ceil().max(8.0) as usize;
    let h = (p_stop - p0) / n as f64;
    let w_of = |p: f64, v: f64| model.potential(p) + 0.5 * v * v;
    for k in 0..n {
        let p = p0 + k as f64 * h;
        let (nv, _) = w_step(model, c, p, v, 0.0, h);
        let p_next = p0 + (k + 1) as f64 * h;
        if !(nv > 0.0) || !nv.is_finite() {
            return Ok(WShot::Truncated { p: p_next });
        }
        if let Some(level) = stop_level {
            if w_of(p_next, nv) >= level {
                let mut lo = 0.0;
                let mut hi = h;
                for _ in 0..80 {
                    if hi - lo <= 1e-13 {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    let (vm, _) = w_step(model, c, p, v, 0.0, mid);
                    if w_of(p + mid, vm) < level {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(WShot::CrossedLevel { p: p + 0.5 * (lo + hi) });
            }
        }
        v = nv;
    }
    Ok(WShot::Reached { w_end: w_of(p_stop, v) })
}

/// Integrate the connection backwards from the singular start at p = 1 down
/// towards 0, reporting where the profile energy w = F + v^2/2 crosses zero
/// (the limiting exit frequency).
pub(crate) fn w_backward_from_one(model: &ReactionModel, c: f64, step: f64) -> Result<WShot> {
    if c <= 0.0 {
        return Err(invalid("coefficient must be positive for a singular start"));
    }
    // w ~ F(1) - b (1-p)^2 translates to v ~ k (1-p) with
    // k = sqrt(-f'(1) - 2b) = (-c + sqrt(c^2 - 4 f'(1)))/2. Backwards from
    // p = 1 the corner contracts like s^(-|f'(1)|/k^2), which for large c is
    // ferociously stiff: the start is pushed out to where the step resolves
    // it, and the contraction wipes out the asymptote truncation error.
    let k_slope = (-model.fprime1() - 2.0 * singular_coeff_at_one(model, c)).sqrt();
    let s0 = SINGULAR_OFFSET
        .max(20.0 * step * model.fprime1().abs() / (k_slope * k_slope))
        .min(0.02);
    let p0 = 1.0 - s0;
    let mut v = k_slope * s0;
    let mut p = p0;
    let h = -step.abs();
    let w_of = |p: f64, v: f64| model.potential(p) + 0.5 * v * v;
    while p > SINGULAR_OFFSET {
        let hh = h.max(SINGULAR_OFFSET - p);
        let (nv, _) = w_step(model, c, p, v, 0.0, hh);
        let p_next = p + hh;
        if !(nv > 0.0) || !nv.is_finite() {
            return Ok(WShot::Truncated { p: p_next });
        }
        if w_of(p_next, nv) <= 0.0 {
            let mut lo = 0.0f64;
            let mut hi = hh.abs();
            for _ in 0..80 {
                if hi - lo <= 1e-13 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let (vm, _) = w_step(model, c, p, v, 0.0, -mid);
                if w_of(p - mid, vm) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(WShot::CrossedLevel { p: p - 0.5 * (lo + hi) });
        }
        v = nv;
        p = p_next;
    }
    Err(numerical(format!(
        "backward w-integration reached p = 0 without crossing w = 0 (C = {c} likely at or below the wave speed)"
    )))
}
