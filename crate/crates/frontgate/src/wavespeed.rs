//! Traveling-wave speeds: the unique bistable speed and the KPP minimal speed.

use crate::error::{degenerate, invalid, numerical, Result};
use crate::phaseplane::{w_from_zero, WShot, DEFAULT_W_STEP};
use crate::reaction::{Kind, ReactionModel};

/// Bistable speed together with the boundary defect of the final shot and the
/// final bisection bracket.
#[derive(Debug, Clone, Copy)]
pub struct SpeedResult {
    pub speed: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
}

/// The unique speed c of the decreasing wave connecting 1 to 0.
///
/// Solved through the degenerate connection problem: integrate
/// w' = c sqrt(2 (w - F)) from the singular start at p = 0; too small a c
/// makes w touch F before p = 1, too large a c overshoots w(1) > F(1).
pub fn bistable_speed(model: &ReactionModel, tol: f64) -> Result<SpeedResult> {
    if model.kind() != Kind::Bistable {
        return Err(invalid("bistable speed needs a bistable model"));
    }
    if model.mass() <= 1e-12 {
        return Err(degenerate(format!(
            "F(1) = {} <= 0: speed would not be positive; reflect with u -> 1 - u instead",
            model.mass()
        )));
    }
    let mass = model.mass();
    // In the slope variable, too small a c makes v hit zero before p = 1;
    // surviving to p = 1 means w(1) = F(1) + v(1)^2/2 >= F(1), i.e. too large.
    let too_large = |c: f64| -> Result<bool> {
        match w_from_zero(model, c, 1.0, DEFAULT_W_STEP, None)? {
            WShot::Reached { w_end } => Ok(w_end >= mass),
            WShot::Truncated { .. } => Ok(false),
            WShot::CrossedLevel { .. } => unreachable!("no stop level requested"),
        }
    };

    // Bistable speed sits below the KPP bound of the concave hull.
    let mut lo = 0.0;
    let mut hi = 2.0 * model.max_fprime().max(1e-6).sqrt();
    let mut grow = 0;
    while !too_large(hi)? {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(numerical("speed bracket did not close"));
        }
    }
    // Refine past the requested tolerance so the reported boundary defect
    // stays at the 1e-8 scale even for loose requests.
    let tol = tol.max(1e-14).min(1e-10);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if too_large(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let speed = 0.5 * (lo + hi);
    let residual = match w_from_zero(model, hi, 1.0, DEFAULT_W_STEP, None)? {
        WShot::Reached { w_end } => (w_end - mass).abs(),
        _ => f64::NAN,
    };
    Ok(SpeedResult { speed, residual, bracket: (lo, hi) })
}

/// Memoized bistable speed at tight tolerance, shared by the barrier solvers.
pub(crate) fn cached_bistable_speed(model: &ReactionModel) -> Result<f64> {
    model
        .speed_cache
        .get_or_init(|| bistable_speed(model, 1e-10).map(|r| r.speed))
        .clone()
}

/// KPP minimal speed 2 sqrt(f'(0)) of a monostable model. The change of
/// variable preserves it because g'(0) = f'(0).
pub fn kpp_min_speed(model: &ReactionModel) -> Result<f64> {
    if model.kind() != Kind::Monostable {
        return Err(invalid("KPP minimal speed needs a monostable model"));
    }
    let d = model.fprime0();
    if d <= 0.0 {
        return Err(invalid(format!("f'(0) = {d} must be positive")));
    }
    Ok(2.0 * d.sqrt())
}
