//! Double-shooting solver for standing blocking fronts.
//!
//! A (C, L)-barrier connects the entry level set E = F(1) at p(-L) = beta to
//! the exit level set E = 0 at p(L) = alpha. For each admissible pair
//! (alpha, beta) there is a unique coefficient gamma(alpha, beta) making the
//! connection, with half-length lambda(alpha, beta); this module computes
//! them, the minimal blocking half-length L*(C) and its inverse C*(L),
//! enumerates barriers at given (C, L), and evaluates the critical
//! population-jump formulas.

use rayon::prelude::*;

use crate::error::{degenerate, infeasible, invalid, numerical, Result};
use crate::numerics::{bisect, golden_min, interp_clamped};
use crate::phaseplane::{
    entry_point, integrate_orbit, solve_energy_profile, w_backward_from_one, w_from_zero,
    ExitReason, OrbitOptions, WShot, DEFAULT_W_STEP,
};
use crate::reaction::{Kind, ReactionModel};
use crate::wavespeed::cached_bistable_speed;

/// Margin keeping the beta searches away from the diverging interval ends.
const BETA_MARGIN: f64 = 1e-4;
/// Hard cap on phase-plane flight times.
const FLIGHT_CAP: f64 = 1e4;

/// A solved connection: gamma(alpha, beta) = coefficient, lambda = half_length.
#[derive(Debug, Clone, Copy)]
pub struct ShootingPair {
    pub alpha: f64,
    pub beta: f64,
    pub coefficient: f64,
    pub half_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierKind {
    Minimal,
    Maximal,
    Other,
}

/// A standing-wave profile sampled on a truncated line.
#[derive(Debug, Clone)]
pub struct BarrierSolution {
    pub pair: ShootingPair,
    pub xs: Vec<f64>,
    pub p: Vec<f64>,
    pub kind: BarrierKind,
    interior: std::ops::Range<usize>,
}

/// Barriers found at a given (C, L), plus the threshold length.
#[derive(Debug, Clone)]
pub struct BarrierSet {
    pub solutions: Vec<BarrierSolution>,
    pub l_star: f64,
}

/// Minimal blocking half-length and the pair realizing it.
#[derive(Debug, Clone, Copy)]
pub struct MinHalfLength {
    pub l_star: f64,
    pub beta_star: f64,
    pub alpha_star: f64,
}

/// Sampled curve C -> L*(C) with its minimizing entry/exit frequencies.
#[derive(Debug, Clone)]
pub struct LStarCurve {
    pub c_values: Vec<f64>,
    pub l_star: Vec<f64>,
    pub beta_star: Vec<f64>,
    pub alpha_star: Vec<f64>,
}

fn require_barrier_model(model: &ReactionModel) -> Result<f64> {
    if model.kind() != Kind::Bistable {
        return Err(invalid("barrier computations need a bistable model"));
    }
    if model.mass() <= 1e-12 {
        return Err(degenerate("F(1) must be positive for barrier computations"));
    }
    model
        .theta_c()
        .ok_or_else(|| degenerate("model has no theta_c"))
}

/// w(beta) for the profile started at w(alpha) = 0, or None if w touched F
/// first. Integrated in the slope variable v = sqrt(2 (w - F)), whose
/// equation v' = C - f/v is smooth along valid connections.
fn w_shoot(model: &ReactionModel, c: f64, alpha: f64, beta: f64, step: f64) -> Option<f64> {
    let n = ((beta - alpha) / step).ceil().max(8.0) as usize;
    let h = (beta - alpha) / n as f64;
    let mut v = (-2.0 * model.potential(alpha)).sqrt();
    let rhs = |p: f64, v: f64| c - model.f(p) / v.max(1e-300);
    for k in 0..n {
        let p = alpha + k as f64 * h;
        let k1 = rhs(p, v);
        let k2 = rhs(p + 0.5 * h, v + 0.5 * h * k1);
        let k3 = rhs(p + 0.5 * h, v + 0.5 * h * k2);
        let k4 = rhs(p + h, v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(v > 0.0) || !v.is_finite() {
            return None;
        }
    }
    Some(model.potential(beta) + 0.5 * v * v)
}

/// The unique coefficient gamma(alpha, beta) with w(beta) = F(1).
///
/// Monotone bisection in C (w is increasing in C); the bracket is grown
/// geometrically from [c_*, 2 c_*] until it straddles the target.
pub fn shooting_coefficient(model: &ReactionModel, alpha: f64, beta: f64, tol: f64) -> Result<f64> {
    let theta_c = require_barrier_model(model)?;
    if !(alpha > 0.0 && alpha < theta_c) {
        return Err(invalid(format!("alpha must lie in (0, theta_c), got {alpha}")));
    }
    if !(beta > alpha && beta < 1.0) {
        return Err(invalid(format!("beta must lie in (alpha, 1), got {beta}")));
    }
    let c_star = cached_bistable_speed(model)?;
    let mass = model.mass();
    let step = DEFAULT_W_STEP.min((beta - alpha) / 1000.0);
    let reaches = |c: f64| w_shoot(model, c, alpha, beta, step).is_some_and(|w| w >= mass);

    let mut lo = c_star;
    let mut hi = 2.0 * c_star;
    if reaches(lo) {
        lo = 0.0; // gamma > c_* should rule this out; fall back to a safe floor
    }
    let mut grow = 0;
    while !reaches(hi) {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(numerical("gamma bracket did not close after 200 doublings"));
        }
    }
    let tol = tol.max(1e-14);
    let mut iters = 0;
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iters += 1;
        if iters > 200 {
            return Err(numerical("gamma did not converge after 200 bisections"));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Half-length lambda(alpha, beta) = (1/2) int_alpha^beta dp / sqrt(2 (w - F))
/// evaluated on the connection at C = gamma(alpha, beta).
pub fn shooting_half_length(model: &ReactionModel, alpha: f64, beta: f64, tol: f64) -> Result<f64> {
    Ok(shooting_pair(model, alpha, beta, tol)?.half_length)
}

/// Solve both gamma and lambda for one (alpha, beta).
pub fn shooting_pair(model: &ReactionModel, alpha: f64, beta: f64, tol: f64) -> Result<ShootingPair> {
    let c = shooting_coefficient(model, alpha, beta, tol)?;
    let step = DEFAULT_W_STEP.min((beta - alpha) / 1000.0);
    let prof = solve_energy_profile(model, c, alpha, beta, Some(step))?;
    if prof.truncated.is_some() {
        return Err(numerical("connection profile touched F despite converged gamma"));
    }
    Ok(ShootingPair { alpha, beta, coefficient: c, half_length: 0.5 * prof.crossing_measure() })
}

/// Exit frequency and half flight time of the orbit from the entry level set.
fn orbit_exit(model: &ReactionModel, c: f64, beta: f64, t_cap: f64) -> Result<(f64, f64)> {
    let start = entry_point(model, beta)?;
    let orbit = integrate_orbit(
        model,
        c,
        start,
        t_cap,
        OrbitOptions { dt: None, record_every: 0 },
    )?;
    match orbit.exit {
        ExitReason::HitGammaA { alpha, .. } => Ok((alpha, orbit.exit_time)),
        other => Err(infeasible(format!(
            "orbit from beta = {beta} did not reach the exit level (exit: {other:?}); beta outside (beta_C, 1)"
        ))),
    }
}

/// The unique exit frequency alpha with gamma(alpha, beta) = C, computed as
/// the exit abscissa of the phase-plane orbit started on the entry level set.
pub fn exit_frequency(model: &ReactionModel, c: f64, beta: f64) -> Result<f64> {
    require_barrier_model(model)?;
    Ok(orbit_exit(model, c, beta, FLIGHT_CAP)?.0)
}

/// Half-length of the (C, beta) connection: half the phase-plane flight time
/// from the entry level set to the exit level set.
pub fn half_length_profile(model: &ReactionModel, c: f64, beta: f64) -> Result<f64> {
    require_barrier_model(model)?;
    Ok(0.5 * orbit_exit(model, c, beta, FLIGHT_CAP)?.1)
}

/// Limiting endpoints (alpha_C, beta_C) of the shooting interval:
/// beta_C solves gamma(0, beta) = C via the singular start at p = 0, and
/// alpha_C comes from the mirrored singular start at p = 1 integrated
/// backwards to w = 0.
pub fn limit_endpoints(model: &ReactionModel, c: f64, tol: f64) -> Result<(f64, f64)> {
    require_barrier_model(model)?;
    let c_star = cached_bistable_speed(model)?;
    if c <= c_star {
        return Err(infeasible(format!("C = {c} must exceed the wave speed {c_star}")));
    }
    let step = (tol / 10.0).clamp(1e-6, DEFAULT_W_STEP);
    let beta_c = match w_from_zero(model, c, 1.0, step, Some(model.mass()))? {
        WShot::CrossedLevel { p } => p,
        WShot::Reached { .. } => {
            return Err(numerical("w never reached F(1): C too close to the wave speed"))
        }
        WShot::Truncated { p } => {
            return Err(numerical(format!("w touched F at p = {p}: C below the wave speed")))
        }
    };
    let alpha_c = match w_backward_from_one(model, c, step)? {
        WShot::CrossedLevel { p } => p,
        WShot::Truncated { p } => {
            return Err(numerical(format!("backward w touched F at p = {p}")))
        }
        WShot::Reached { .. } => unreachable!(),
    };
    Ok((alpha_c, beta_c))
}

/// Minimal blocking half-length L*(C) with its minimizer, found by a coarse
/// scan of the half-length profile over (beta_C, 1) followed by
/// golden-section refinement. The scan caps flight times at a multiple of the
/// best value seen so far, which is sound because only the minimum matters.
pub fn min_half_length(model: &ReactionModel, c: f64, tol: f64) -> Result<MinHalfLength> {
    require_barrier_model(model)?;
    let c_star = cached_bistable_speed(model)?;
    if c <= c_star {
        return Err(infeasible(format!(
            "C = {c} must exceed the wave speed c_* = {c_star}"
        )));
    }
    let (_, beta_c) = limit_endpoints(model, c, 1e-5)?;
    let lo = beta_c + BETA_MARGIN;
    let hi = 1.0 - BETA_MARGIN;
    if lo >= hi {
        return Err(numerical("empty beta interval after margins"));
    }

    let mut cap = FLIGHT_CAP;
    let mut best: Option<(usize, f64)> = None;
    let n_scan = 64;
    let mut scan = vec![f64::INFINITY; n_scan];
    for i in 0..n_scan {
        let beta = lo + (hi - lo) * i as f64 / (n_scan - 1) as f64;
        if let Ok((_, flight)) = orbit_exit(model, c, beta, cap) {
            scan[i] = 0.5 * flight;
            if best.map_or(true, |(_, b)| scan[i] < b) {
                best = Some((i, scan[i]));
                cap = (8.0 * flight).max(1.0).min(FLIGHT_CAP);
            }
        }
    }
    let (k, _) = best.ok_or_else(|| numerical("no finite half-length in the coarse scan"))?;
    let b_lo = lo + (hi - lo) * k.saturating_sub(1) as f64 / (n_scan - 1) as f64;
    let b_hi = lo + (hi - lo) * (k + 1).min(n_scan - 1) as f64 / (n_scan - 1) as f64;

    let half_len = |beta: f64| -> f64 {
        orbit_exit(model, c, beta, cap).map_or(f64::INFINITY, |(_, t)| 0.5 * t)
    };
    let xtol = tol.max(1e-12).sqrt().min(1e-6).max(1e-9);
    let (beta_star, l_star) = golden_min(&half_len, b_lo, b_hi, xtol);
    let (alpha_star, flight) = orbit_exit(model, c, beta_star, FLIGHT_CAP)?;
    Ok(MinHalfLength { l_star: 0.5 * flight.min(2.0 * l_star), beta_star, alpha_star })
}

/// Minimizing pair (alpha_*, beta_*) of the half-length profile at C.
pub fn minimizer_pair(model: &ReactionModel, c: f64) -> Result<(f64, f64)> {
    let m = min_half_length(model, c, 1e-10)?;
    Ok((m.alpha_star, m.beta_star))
}

/// Minimal blocking coefficient C*(L): the inverse of the decreasing map
/// C -> L*(C), found by bisection.
pub fn min_coefficient(model: &ReactionModel, l: f64, tol: f64) -> Result<f64> {
    require_barrier_model(model)?;
    if l <= 0.0 {
        return Err(invalid("L must be positive"));
    }
    let c_star = cached_bistable_speed(model)?;
    let l_at = |c: f64| min_half_length(model, c, 1e-10).map(|m| m.l_star);

    let mut hi = 2.0 * c_star;
    let mut grow = 0;
    while l_at(hi)? > l {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(numerical("C*(L) bracket did not close upward"));
        }
    }
    // Walk the lower end towards c_* until L*(lo) > l.
    let mut lo = (0.5 * hi).max(c_star * 1.000001);
    let mut shrink = 0;
    while l_at(lo)? <= l {
        lo = c_star + 0.5 * (lo - c_star);
        shrink += 1;
        if shrink > 60 {
            return Err(numerical("C*(L) bracket did not close downward"));
        }
    }
    let tol = tol.max(1e-12);
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if l_at(mid)? > l {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Critical population jump ratio N_R / N_L = (1 - F(1)/F(theta))^(1/4).
pub fn critical_jump(model: &ReactionModel) -> Result<f64> {
    if model.kind() != Kind::Bistable {
        return Err(invalid("critical jump needs a bistable model"));
    }
    if model.mass() < 0.0 {
        return Err(degenerate("critical jump needs F(1) >= 0"));
    }
    let theta = model.theta().ok_or_else(|| invalid("missing interior zero"))?;
    let f_theta = model.potential(theta);
    Ok((1.0 - model.mass() / f_theta).powf(0.25))
}

/// Local-barrier exponent K(alpha0) = (1/4) log(1 - F(1)/F(alpha0));
/// minimal over alpha0 at alpha0 = theta, where it equals log(critical jump).
pub fn local_barrier_exponent(model: &ReactionModel, alpha0: f64) -> Result<f64> {
    let theta_c = require_barrier_model(model)?;
    if !(alpha0 > 0.0 && alpha0 < theta_c) {
        return Err(invalid(format!(
            "alpha0 = {alpha0} must lie in (0, theta_c) so that F(alpha0) < 0"
        )));
    }
    let f_a = model.potential(alpha0);
    if f_a >= 0.0 {
        return Err(invalid("F(alpha0) must be negative"));
    }
    Ok(0.25 * (1.0 - model.mass() / f_a).ln())
}

/// Evaluate L*(C) over a set of coefficients, in parallel, preserving order.
pub fn l_star_curve(model: &ReactionModel, c_values: &[f64], tol: f64) -> Result<LStarCurve> {
    let rows: Result<Vec<MinHalfLength>> = c_values
        .par_iter()
        .map(|&c| min_half_length(model, c, tol))
        .collect();
    let rows = rows?;
    Ok(LStarCurve {
        c_values: c_values.to_vec(),
        l_star: rows.iter().map(|m| m.l_star).collect(),
        beta_star: rows.iter().map(|m| m.beta_star).collect(),
        alpha_star: rows.iter().map(|m| m.alpha_star).collect(),
    })
}

/// Derivative of the Lagrange interpolant through (xs, ys) at node `at`;
/// exact for degree-4 polynomials, valid for non-uniform spacing.
fn lagrange_derivative_at(xs: &[f64], ys: &[f64], at: usize) -> f64 {
    let n = xs.len();
    let xa = xs[at];
    let mut total = 0.0;
    for j in 0..n {
        let coeff = if j == at {
            let mut s = 0.0;
            for m in 0..n {
                if m != at {
                    s += 1.0 / (xa - xs[m]);
                }
            }
            s
        } else {
            let mut num = 1.0;
            let mut den = 1.0;
            for m in 0..n {
                if m != j && m != at {
                    num *= xa - xs[m];
                }
                if m != j {
                    den *= xs[j] - xs[m];
                }
            }
            num / den
        };
        total += coeff * ys[j];
    }
    total
}

fn rk4_scalar<F: Fn(f64) -> f64>(f: &F, q: f64, h: f64) -> f64 {
    let k1 = f(q);
    let k2 = f(q + 0.5 * h * k1);
    let k3 = f(q + 0.5 * h * k2);
    let k4 = f(q + h * k3);
    q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Reconstruct the full profile for the connection at (c, beta): orbit
/// integration inside [-L, L], explicit energy-level quadratures for the
/// outer tails, truncated at p = 1 - 1e-4 (left) and p = 1e-4 (right).
fn reconstruct(model: &ReactionModel, c: f64, beta: f64) -> Result<BarrierSolution> {
    let start = entry_point(model, beta)?;
    let orbit = integrate_orbit(
        model,
        c,
        start,
        FLIGHT_CAP,
        OrbitOptions { dt: None, record_every: 1 },
    )?;
    let (alpha, flight) = match orbit.exit {
        ExitReason::HitGammaA { alpha, .. } => (alpha, orbit.exit_time),
        other => return Err(numerical(format!("reconstruction orbit exited via {other:?}"))),
    };
    let l = 0.5 * flight;
    let mass = model.mass();

    // Left tail: -p'' = f(p) at energy F(1), integrated leftwards from (-L, beta).
    let tail_step = 1e-3;
    let left_rhs = |q: f64| -(2.0 * (mass - model.potential(q)).max(0.0)).sqrt();
    let mut left: Vec<(f64, f64)> = Vec::new();
    let mut x = -l;
    let mut q = beta;
    while q < 1.0 - 1e-4 {
        x -= tail_step;
        q = rk4_scalar(&left_rhs, q, -tail_step);
        left.push((x, q.min(1.0)));
        if left.len() > 2_000_000 {
            return Err(numerical("left tail did not reach its truncation level"));
        }
    }
    left.reverse();

    // Right tail: -p'' = f(p) at energy 0, integrated rightwards from (L, alpha).
    let right_rhs = |q: f64| -(-2.0 * model.potential(q).min(0.0)).sqrt();
    let mut right: Vec<(f64, f64)> = Vec::new();
    let mut x = l;
    let mut q = alpha;
    while q > 1e-4 {
        x += tail_step;
        q = rk4_scalar(&right_rhs, q, tail_step);
        right.push((x, q.max(0.0)));
        if right.len() > 2_000_000 {
            return Err(numerical("right tail did not reach its truncation level"));
        }
    }

    let mut xs = Vec::with_capacity(left.len() + orbit.samples.len() + right.len());
    let mut p = Vec::with_capacity(xs.capacity());
    for (x, q) in &left {
        xs.push(*x);
        p.push(*q);
    }
    let interior_start = xs.len();
    for (t, pt) in &orbit.samples {
        xs.push(t - l);
        p.push(pt.x);
    }
    let interior_end = xs.len();
    for (x, q) in &right {
        xs.push(*x);
        p.push(*q);
    }

    Ok(BarrierSolution {
        pair: ShootingPair { alpha, beta, coefficient: c, half_length: l },
        xs,
        p,
        kind: BarrierKind::Other,
        interior: interior_start..interior_end,
    })
}

impl BarrierSolution {
    /// Linear interpolation; clamps to the tail limits outside the sampled range.
    pub fn eval(&self, x: f64) -> f64 {
        interp_clamped(&self.xs, &self.p, x)
    }

    /// Max residual of -p'' - C p' - f(p) on the interior, by centered
    /// second differences of the sampled profile.
    pub fn interior_residual(&self, model: &ReactionModel) -> f64 {
        let c = self.pair.coefficient;
        let mut worst = 0.0f64;
        let r = &self.interior;
        // Skip the refined exit sample, whose spacing differs.
        for i in r.start + 1..r.end.saturating_sub(2) {
            let h = self.xs[i + 1] - self.xs[i];
            let h_prev = self.xs[i] - self.xs[i - 1];
            if (h - h_prev).abs() > 1e-12 {
                continue;
            }
            let d2 = (self.p[i + 1] - 2.0 * self.p[i] + self.p[i - 1]) / (h * h);
            let d1 = (self.p[i + 1] - self.p[i - 1]) / (2.0 * h);
            worst = worst.max((-d2 - c * d1 - model.f(self.p[i])).abs());
        }
        worst
    }

    /// Max residual of -p'' - f(p) on the outer tails.
    pub fn outer_residual(&self, model: &ReactionModel) -> f64 {
        let mut worst = 0.0f64;
        for range in [1..self.interior.start.saturating_sub(1), self.interior.end + 1..self.xs.len() - 1]
        {
            for i in range {
                if i == 0 || i + 1 >= self.xs.len() {
                    continue;
                }
                let h = self.xs[i + 1] - self.xs[i];
                let h_prev = self.xs[i] - self.xs[i - 1];
                if (h - h_prev).abs() > 1e-12 {
                    continue;
                }
                let d2 = (self.p[i + 1] - 2.0 * self.p[i] + self.p[i - 1]) / (h * h);
                worst = worst.max((-d2 - model.f(self.p[i])).abs());
            }
        }
        worst
    }

    /// Defects of the two matching conditions
    /// p'(-L)^2/2 + F(beta) = F(1) and p'(L)^2/2 + F(alpha) = 0,
    /// with p' taken from 5-point one-sided Lagrange differentiation of the
    /// sampled interior (handles the non-uniform refined exit sample).
    pub fn boundary_energy_defects(&self, model: &ReactionModel) -> (f64, f64) {
        let r = &self.interior;
        let i0 = r.start;
        let dp_left = lagrange_derivative_at(&self.xs[i0..i0 + 5], &self.p[i0..i0 + 5], 0);
        let left =
            (0.5 * dp_left * dp_left + model.potential(self.pair.beta) - model.mass()).abs();
        let i1 = r.end - 5;
        let dp_right = lagrange_derivative_at(&self.xs[i1..i1 + 5], &self.p[i1..i1 + 5], 4);
        let e_right = 0.5 * dp_right * dp_right + model.potential(self.p[r.end - 1]);
        (left, e_right.abs())
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.p.windows(2).all(|w| w[1] < w[0] + 1e-12)
    }
}

/// All barriers at (C, L) found by bisecting the half-length profile on each
/// side of its minimizer. Below the threshold the list is empty. The search
/// reports what bisection finds on each side; completeness beyond the two
/// monotone branches is not asserted.
pub fn enumerate_barriers(model: &ReactionModel, c: f64, l: f64, tol: f64) -> Result<BarrierSet> {
    require_barrier_model(model)?;
    if l <= 0.0 {
        return Err(invalid("L must be positive"));
    }
    let mh = min_half_length(model, c, 1e-10)?;
    if l < mh.l_star * (1.0 - 1e-9) {
        return Ok(BarrierSet { solutions: vec![], l_star: mh.l_star });
    }
    if l <= mh.l_star * (1.0 + 1e-7) {
        // At the threshold the two branches coincide within resolution.
        let mut sol = reconstruct(model, c, mh.beta_star)?;
        sol.kind = BarrierKind::Minimal;
        return Ok(BarrierSet { solutions: vec![sol], l_star: mh.l_star });
    }

    let (_, beta_c) = limit_endpoints(model, c, 1e-5)?;
    let xtol = tol.max(1e-10);
    let profile = |beta: f64| {
        orbit_exit(model, c, beta, FLIGHT_CAP).map_or(f64::INFINITY, |(_, t)| 0.5 * t)
    };

    let mut betas = Vec::new();
    // Left branch: decreasing from +inf at beta_C down to L* at the minimizer.
    let mut a = beta_c + BETA_MARGIN;
    let mut guard = 0;
    while profile(a) <= l && guard < 40 {
        a = beta_c + 0.25 * (a - beta_c);
        guard += 1;
    }
    if guard < 40 {
        if let Ok(b) = bisect(&|beta| profile(beta) - l, a, mh.beta_star, xtol, 200) {
            betas.push(b);
        }
    }
    // Right branch: increasing from L* up to +inf at beta = 1.
    let mut b_end = 1.0 - BETA_MARGIN;
    guard = 0;
    while profile(b_end) <= l && guard < 40 {
        b_end = 1.0 - 0.25 * (1.0 - b_end);
        guard += 1;
    }
    if guard < 40 {
        if let Ok(b) = bisect(&|beta| profile(beta) - l, mh.beta_star, b_end, xtol, 200) {
            betas.push(b);
        }
    }
    betas.sort_by(|x, y| x.partial_cmp(y).unwrap());
    betas.dedup_by(|x, y| (*x - *y).abs() < 1e-7);

    let mut solutions = Vec::with_capacity(betas.len());
    for beta in &betas {
        solutions.push(reconstruct(model, c, *beta)?);
    }
    let n = solutions.len();
    for (i, sol) in solutions.iter_mut().enumerate() {
        sol.kind = if i == 0 {
            BarrierKind::Minimal
        } else if i == n - 1 {
            BarrierKind::Maximal
        } else {
            BarrierKind::Other
        };
    }
    Ok(BarrierSet { solutions, l_star: mh.l_star })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reaction::ReactionModel;

    fn cubic() -> ReactionModel {
        ReactionModel::cubic(0.25).unwrap()
    }

    const F_THETA: f64 = -7.0 / 3072.0;
    const MASS: f64 = 1.0 / 24.0;

    #[test]
    fn gamma_exceeds_wave_speed_and_is_monotone() {
        let m = cubic();
        let c_star = crate::wavespeed::bistable_speed(&m, 1e-9).unwrap().speed;
        let alphas = [0.05, 0.12, 0.2, 0.28, 0.35];
        let betas = [0.45, 0.55, 0.68, 0.8, 0.92];
        let mut gammas = [[0.0; 5]; 5];
        let mut lambdas = [[0.0; 5]; 5];
        for (i, &a) in alphas.iter().enumerate() {
            for (j, &b) in betas.iter().enumerate() {
                let pair = shooting_pair(&m, a, b, 1e-10).unwrap();
                gammas[i][j] = pair.coefficient;
                lambdas[i][j] = pair.half_length;
                assert!(pair.coefficient > c_star, "gamma({a},{b}) <= c_*");
            }
        }
        for j in 0..5 {
            for i in 1..5 {
                assert!(gammas[i][j] > gammas[i - 1][j], "gamma increasing in alpha");
            }
        }
        for i in 0..5 {
            for j in 1..5 {
                assert!(gammas[i][j] < gammas[i][j - 1], "gamma decreasing in beta");
                assert!(lambdas[i][j] > lambdas[i][j - 1], "lambda increasing in beta");
            }
        }
    }

    #[test]
    fn gamma_blows_up_as_beta_drops_to_alpha() {
        let m = cubic();
        let wide = shooting_coefficient(&m, 0.2, 0.6, 1e-10).unwrap();
        let narrow = shooting_coefficient(&m, 0.2, 0.21, 1e-10).unwrap();
        let very_narrow = shooting_coefficient(&m, 0.2, 0.201, 1e-10).unwrap();
        assert!(narrow > wide);
        assert!(very_narrow > 10.0 * wide);
    }

    #[test]
    fn lambda_monotone_in_beta_and_small_for_narrow_intervals() {
        let m = cubic();
        let l1 = shooting_half_length(&m, 0.2, 0.5, 1e-10).unwrap();
        let l2 = shooting_half_length(&m, 0.2, 0.7, 1e-10).unwrap();
        let l3 = shooting_half_length(&m, 0.2, 0.9, 1e-10).unwrap();
        assert!(l1 < l2 && l2 < l3);

        // 2 lambda <= (beta - alpha) / sqrt(-F(alpha)) for beta near alpha below theta_c.
        let gap = 1e-4;
        let lam = shooting_half_length(&m, 0.2, 0.2 + gap, 1e-10).unwrap();
        let bound = gap / (-m.potential(0.2)).sqrt();
        assert!(2.0 * lam <= bound * 1.0001, "2l = {} vs {}", 2.0 * lam, bound);
    }

    #[test]
    fn product_bound_and_limit() {
        let m = cubic();
        let lower = 1.0 - (-F_THETA / (MASS - F_THETA)).sqrt();
        for &(a, b) in &[(0.1, 0.4), (0.2, 0.6), (0.3, 0.8), (0.05, 0.95), (0.34, 0.5)] {
            let pair = shooting_pair(&m, a, b, 1e-10).unwrap();
            let prod = 2.0 * pair.half_length * pair.coefficient;
            assert!(prod >= lower - 1e-9, "2*lambda*gamma({a},{b}) = {prod} < {lower}");
        }
        // Limit as alpha -> beta for beta < theta_c: (1/2) ln(1 - F(1)/F(beta)).
        let beta = 0.3;
        let pair = shooting_pair(&m, beta - 1e-3, beta, 1e-10).unwrap();
        let prod = 2.0 * pair.half_length * pair.coefficient;
        let f_beta = m.potential(beta);
        let limit = 0.5 * (1.0 - MASS / f_beta).ln();
        assert!(
            (prod - limit).abs() / limit < 0.02,
            "2*lambda*gamma = {prod} vs limit {limit}"
        );
    }

    #[test]
    fn pair_satisfies_connection_conditions() {
        let m = cubic();
        let pair = shooting_pair(&m, 0.2, 0.6, 1e-12).unwrap();
        let prof = solve_energy_profile(&m, pair.coefficient, 0.2, 0.6, None).unwrap();
        assert!(prof.truncated.is_none());
        assert!((prof.end_value() - MASS).abs() < 1e-8);
        assert!((prof.w[0]).abs() == 0.0);
        // Regression values frozen from the fine-step integrate-and-bisect
        // oracle (p-steps 1e-4 and 5e-5 agree below 1e-9).
        assert!((pair.coefficient - 0.622106201341).abs() < 1e-9);
        assert!((pair.half_length - 1.344320656127).abs() < 1e-9);
    }

    #[test]
    fn exit_frequency_limits() {
        let m = cubic();
        let c = 1.0;
        let (alpha_c, beta_c) = limit_endpoints(&m, c, 1e-6).unwrap();
        assert!(alpha_c > 0.0 && alpha_c < m.theta_c().unwrap());
        assert!(beta_c > 0.0 && beta_c < 1.0);
        // beta -> 1: exit approaches alpha_C.
        let near_one = exit_frequency(&m, c, 1.0 - 1e-6).unwrap();
        assert!((near_one - alpha_c).abs() < 1e-2, "{near_one} vs {alpha_c}");
        // beta -> beta_C: exit approaches 0.
        let near_bc = exit_frequency(&m, c, beta_c + 1e-6).unwrap();
        assert!(near_bc < 2e-2, "{near_bc}");
        // Orbits from below beta_C never reach the exit level.
        assert!(exit_frequency(&m, c, beta_c * 0.5).is_err());
    }

    #[test]
    fn limit_endpoints_monotone_in_c() {
        let m = cubic();
        // Frozen regression at C = 1 (stable under step and offset halving).
        let (a_reg, b_reg) = limit_endpoints(&m, 1.0, 1e-6).unwrap();
        assert!((a_reg - 0.365157128848).abs() < 1e-8, "{a_reg}");
        assert!((b_reg - 0.271985544216).abs() < 1e-8, "{b_reg}");
        let (a1, b1) = limit_endpoints(&m, 0.6, 1e-6).unwrap();
        let (a2, b2) = limit_endpoints(&m, 1.2, 1e-6).unwrap();
        let (a3, b3) = limit_endpoints(&m, 3.0, 1e-6).unwrap();
        // alpha_C grows, beta_C shrinks, away from the wave-speed limit (0, 1).
        assert!(a1 < a2 && a2 < a3);
        assert!(b1 > b2 && b2 > b3);
        // Towards the wave speed the endpoints open up to (0, 1).
        let c_star = crate::wavespeed::bistable_speed(&m, 1e-10).unwrap().speed;
        let (a0, b0) = limit_endpoints(&m, c_star + 0.02, 1e-6).unwrap();
        assert!(a0 < a1 && b0 > b1, "alpha_C = {a0}, beta_C = {b0}");
        assert!(a0 < 0.08 && b0 > 0.75, "alpha_C = {a0}, beta_C = {b0}");
    }

    #[test]
    fn half_length_profile_diverges_at_interval_ends() {
        let m = cubic();
        let c = 1.0;
        let mh = min_half_length(&m, c, 1e-10).unwrap();
        // Frozen regression from the refined scan oracle.
        assert!((mh.l_star - 0.764535794770).abs() < 1e-8);
        let (_, beta_c) = limit_endpoints(&m, c, 1e-6).unwrap();
        // Divergence at beta -> 1 is fast; at beta -> beta_C it is logarithmic,
        // so check growth rather than a fixed large multiple there.
        let edge_hi = half_length_profile(&m, c, 1.0 - 1e-4).unwrap();
        assert!(edge_hi > 10.0 * mh.l_star, "{edge_hi} vs {}", mh.l_star);
        let edge_lo = half_length_profile(&m, c, beta_c + 1e-4).unwrap();
        let edge_lo_finer = half_length_profile(&m, c, beta_c + 1e-6).unwrap();
        assert!(edge_lo > 3.0 * mh.l_star, "{edge_lo} vs {}", mh.l_star);
        assert!(edge_lo_finer > edge_lo);
        // Consistency of the two half-length routes at the minimizer.
        let via_orbit = half_length_profile(&m, c, mh.beta_star).unwrap();
        assert!((via_orbit - mh.l_star).abs() < 1e-8);
        let (a_star, b_star) = minimizer_pair(&m, c).unwrap();
        assert!(a_star < 0.25 && 0.25 < b_star, "minimizers bracket theta");
        assert!((a_star - mh.alpha_star).abs() < 1e-9 && (b_star - mh.beta_star).abs() < 1e-9);
        let pair = shooting_pair(&m, mh.alpha_star, mh.beta_star, 1e-12).unwrap();
        assert!((pair.coefficient - c).abs() < 2e-4, "gamma at minimizer = {}", pair.coefficient);
        assert!((pair.half_length - mh.l_star).abs() < 2e-4);
    }

    #[test]
    fn orbit_and_quadrature_half_length_routes_agree() {
        // Two algebraically independent routes to the same connection: the
        // quadrature of 1/sqrt(2 (w - F)) at C = gamma(alpha, beta), and the
        // phase-plane flight time from the entry to the exit level set.
        let m = cubic();
        let (alpha, beta) = (0.2, 0.6);
        let pair = shooting_pair(&m, alpha, beta, 1e-12).unwrap();
        let (alpha_exit, flight) = orbit_exit(&m, pair.coefficient, beta, 1e4).unwrap();
        assert!((alpha_exit - alpha).abs() < 1e-6, "{alpha_exit}");
        assert!((0.5 * flight - pair.half_length).abs() < 1e-6, "{} vs {}", 0.5 * flight, pair.half_length);
    }

    #[test]
    fn round_trip_c_star_l_star() {
        let m = cubic();
        let c = 1.0;
        let l = min_half_length(&m, c, 1e-10).unwrap().l_star;
        let c_back = min_coefficient(&m, l, 1e-6).unwrap();
        assert!((c_back - c).abs() < 1e-4 * c, "{c_back} vs {c}");
    }

    #[test]
    fn critical_jump_cubic_quarter() {
        let m = cubic();
        let jump = critical_jump(&m).unwrap();
        let exact = (1.0f64 + (1.0 / 24.0) / (7.0 / 3072.0)).powf(0.25);
        assert!((jump - exact).abs() < 1e-6);
        assert!((exact - 2.0956).abs() < 1e-4);
        // Zero-mass family limit: ratio -> 1.
        let almost = ReactionModel::cubic(0.499999).unwrap();
        assert!((critical_jump(&almost).unwrap() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn local_exponent_consistency() {
        let m = cubic();
        let theta = 0.25;
        let k_theta = local_barrier_exponent(&m, theta).unwrap();
        assert!((k_theta - critical_jump(&m).unwrap().ln()).abs() < 1e-12);
        // Diverges as alpha0 approaches theta_c.
        let near = local_barrier_exponent(&m, m.theta_c().unwrap() - 1e-6).unwrap();
        assert!(near > 2.0);
        // Value by the exact polynomial potential at alpha0 = 0.3.
        let k = local_barrier_exponent(&m, 0.3).unwrap();
        let exact = 0.25 * (1.0f64 - (1.0 / 24.0) / (-0.002025)).ln();
        assert!((k - exact).abs() < 1e-9);
        assert!(local_barrier_exponent(&m, 0.45).is_err());
    }

    #[test]
    fn barriers_below_threshold_absent_above_present_ordered() {
        let m = cubic();
        let c = 1.0;
        let mh = min_half_length(&m, c, 1e-10).unwrap();

        let below = enumerate_barriers(&m, c, 0.5 * mh.l_star, 1e-10).unwrap();
        assert!(below.solutions.is_empty());

        let at = enumerate_barriers(&m, c, mh.l_star, 1e-10).unwrap();
        assert_eq!(at.solutions.len(), 1);

        let above = enumerate_barriers(&m, c, 1.5 * mh.l_star, 1e-10).unwrap();
        assert_eq!(above.solutions.len(), 2);
        let lo = &above.solutions[0];
        let hi = &above.solutions[1];
        assert_eq!(lo.kind, BarrierKind::Minimal);
        assert_eq!(hi.kind, BarrierKind::Maximal);
        assert!(lo.pair.beta < hi.pair.beta && lo.pair.alpha < hi.pair.alpha);
        for sol in &above.solutions {
            assert!(sol.is_strictly_decreasing());
            assert!(sol.interior_residual(&m) < 1e-6, "residual {}", sol.interior_residual(&m));
            assert!(sol.outer_residual(&m) < 1e-6, "outer {}", sol.outer_residual(&m));
            let (dl, dr) = sol.boundary_energy_defects(&m);
            assert!(dl < 1e-8 && dr < 1e-8, "boundary defects {dl}, {dr}");
            assert!((sol.pair.half_length - 1.5 * mh.l_star).abs() < 1e-6);
        }
        // Pointwise strict order on a common grid.
        for k in 0..=200 {
            let x = -10.0 + 20.0 * k as f64 / 200.0;
            let a = lo.eval(x);
            let b = hi.eval(x);
            assert!(a < b + 1e-12, "x={x}: {a} vs {b}");
            if a > 1e-3 && a < 1.0 - 1e-3 {
                assert!(a < b, "strict order inside the transition, x={x}");
            }
        }
    }

    #[test]
    fn barrier_set_is_upward_closed() {
        let m = cubic();
        let c = 1.0;
        let mh = min_half_length(&m, c, 1e-10).unwrap();
        let l = 1.2 * mh.l_star;
        assert!(!enumerate_barriers(&m, c, l, 1e-10).unwrap().solutions.is_empty());
        assert!(!enumerate_barriers(&m, c + 0.1, l, 1e-10).unwrap().solutions.is_empty());
        assert!(!enumerate_barriers(&m, c, l + 0.1, 1e-10).unwrap().solutions.is_empty());
    }
}
