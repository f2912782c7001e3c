//! 1-D time-dependent finite-difference simulators and outcome classification.
//!
//! All schemes share the same backbone: implicit (tridiagonal) solve for the
//! linear diffusion/advection part, explicit reaction (and explicit
//! gradient-squared term where present), zero-flux boundaries. Steady states
//! of the split scheme are exact discrete steady states, so long blocked runs
//! converge to the discrete barrier rather than drifting with dt.

use crate::error::{invalid, numerical, Result};
use crate::numerics::{interp_clamped, line_fit, TridiagScratch};
use crate::propagule::bubble_profile;
use crate::reaction::{FrequencyLaw, ReactionModel, WolbachiaParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        if !(x_max > x_min && dx > 0.0) {
            return Err(invalid("need x_max > x_min and dx > 0"));
        }
        let steps = (x_max - x_min) / dx;
        let rounded = steps.round();
        if (steps - rounded).abs() > 1e-6 * steps.max(1.0) {
            return Err(invalid(format!(
                "(x_max - x_min)/dx = {steps} is not an integer within rounding"
            )));
        }
        let n = rounded as usize + 1;
        if n < 16 {
            return Err(invalid("grid needs at least 16 points"));
        }
        Ok(Self { x_min, x_max, dx, n })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
}

/// Advection coefficient 2 d/dx log N of the heterogeneous equation.
/// `interval_constant` stores the PDE coefficient directly: eta = C on [-L, L].
#[derive(Debug, Clone)]
pub enum GradientProfile {
    IntervalConstant { c: f64, l: f64 },
    /// eta(x) = C (1 - x^2/L^2) on [-L, L]: non-negative, peak C at the
    /// center, so its strength is directly comparable with the
    /// interval-constant profile. `literal_sign` flips the sign for audit
    /// runs probing the negative variant.
    Parabolic { c: f64, l: f64, literal_sign: bool },
    Sampled { xs: Vec<f64>, values: Vec<f64> },
}

impl GradientProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::IntervalConstant { c, l } => {
                if x.abs() <= *l {
                    *c
                } else {
                    0.0
                }
            }
            Self::Parabolic { c, l, literal_sign } => {
                if x.abs() <= *l {
                    let v = c * (1.0 - x * x / (l * l));
                    if *literal_sign {
                        -v
                    } else {
                        v
                    }
                } else {
                    0.0
                }
            }
            Self::Sampled { xs, values } => {
                if x < xs[0] || x > *xs.last().unwrap() {
                    0.0
                } else {
                    interp_clamped(xs, values, x)
                }
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::IntervalConstant { l, .. } => (-l, *l),
            Self::Parabolic { l, .. } => (-l, *l),
            Self::Sampled { xs, .. } => (xs[0], *xs.last().unwrap()),
        }
    }
}

#[derive(Debug, Clone)]
pub enum InitialDatum {
    /// 1 on [x_min, x0], 0 beyond, with a one-cell linear ramp at x0.
    Front { x0: f64 },
    /// Sharp indicator of x <= x0.
    Heaviside { x0: f64 },
    /// Bubble of peak alpha centered at `center` (built with the simulation's
    /// law when it admits bubbles, with h = 1 otherwise).
    Propagule { alpha: f64, center: f64 },
    Sampled(Vec<f64>),
}

impl InitialDatum {
    pub fn materialize(
        &self,
        grid: &Grid1D,
        model: &ReactionModel,
        law: Option<&FrequencyLaw>,
    ) -> Result<Vec<f64>> {
        match self {
            Self::Front { x0 } => Ok((0..grid.n)
                .map(|i| {
                    let x = grid.x(i);
                    if x <= *x0 {
                        1.0
                    } else if x >= x0 + grid.dx {
                        0.0
                    } else {
                        1.0 - (x - x0) / grid.dx
                    }
                })
                .collect()),
            Self::Heaviside { x0 } => {
                Ok((0..grid.n).map(|i| if grid.x(i) <= *x0 { 1.0 } else { 0.0 }).collect())
            }
            Self::Propagule { alpha, center } => {
                let constant = FrequencyLaw::constant();
                let law_used = match law {
                    Some(l) if crate::propagule::ScriptF::new(model, l)?.mass() > 0.0 => l,
                    _ => &constant,
                };
                let bubble = bubble_profile(model, law_used, *alpha, 2048)?;
                Ok(bubble.sample_symmetric(*center, &grid.xs()))
            }
            Self::Sampled(values) => {
                if values.len() != grid.n {
                    return Err(invalid(format!(
                        "sampled initial datum has {} values, grid has {}",
                        values.len(),
                        grid.n
                    )));
                }
                if values.iter().any(|v| !(-1e-9..=1.0 + 1e-9).contains(v)) {
                    return Err(invalid("initial datum must take values in [0, 1]"));
                }
                Ok(values.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Blocked,
    Propagated,
    Undecided,
}

#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_every: f64,
    /// Classification probe; defaults to x_max - 1 (right of any gradient support).
    pub probe_x: Option<f64>,
    /// Fraction of the run over which the front must stand still to call it blocked.
    pub window_frac: f64,
    pub level: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self { dt: 0.05, t_end: 400.0, snapshot_every: 2.0, probe_x: None, window_frac: 0.2, level: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub grid: Grid1D,
    pub snapshots: Vec<(f64, Vec<f64>)>,
    pub front_positions: Vec<(f64, Option<f64>)>,
    pub outcome: Outcome,
    /// True when the final field never crosses the tracking level (degenerate
    /// no-front case, reported Blocked).
    pub no_front: bool,
    pub final_field: Vec<f64>,
}

impl SimulationResult {
    /// Least-squares front speed over the time window [t0, t1].
    pub fn measured_front_speed(&self, t0: f64, t1: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .front_positions
            .iter()
            .filter_map(|(t, x)| x.map(|x| (*t, x)))
            .filter(|(t, _)| *t >= t0 && *t <= t1)
            .collect();
        if pts.len() < 4 {
            return None;
        }
        let ts: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let xs: Vec<f64> = pts.iter().map(|p| p.1).collect();
        Some(line_fit(&ts, &xs).0)
    }
}

/// Rightmost linear-interpolated crossing of `level`, if any.
pub fn front_position(field: &[f64], grid: &Grid1D, level: f64) -> Option<f64> {
    for i in (0..field.len() - 1).rev() {
        let a = field[i] - level;
        let b = field[i + 1] - level;
        if a == 0.0 && b == 0.0 {
            continue;
        }
        if a * b <= 0.0 {
            let t = a / (a - b);
            return Some(grid.x(i) + t * grid.dx);
        }
    }
    None
}

struct ImplicitOperator {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

/// (I - dt (d_xx + eta(x) d_x)) with zero-flux rows at both ends.
fn build_operator(grid: &Grid1D, dt: f64, eta: impl Fn(f64) -> f64) -> ImplicitOperator {
    let n = grid.n;
    let r = dt / (grid.dx * grid.dx);
    let mut sub = vec![0.0; n - 1];
    let diag = vec![1.0 + 2.0 * r; n];
    let mut sup = vec![0.0; n - 1];
    sup[0] = -2.0 * r;
    sub[n - 2] = -2.0 * r;
    for i in 1..n - 1 {
        let s = dt * eta(grid.x(i)) / (2.0 * grid.dx);
        sub[i - 1] = -(r - s);
        sup[i] = -(r + s);
    }
    ImplicitOperator { sub, diag, sup }
}

fn check_reaction_bound(model: &ReactionModel, dt: f64) -> Result<()> {
    if dt > 0.5 {
        return Err(invalid("dt must be <= 0.5"));
    }
    let bound = dt * model.max_abs_fprime();
    if bound >= 1.0 {
        return Err(invalid(format!(
            "reaction stability bound violated: dt * sup|f'| = {bound} >= 1"
        )));
    }
    Ok(())
}

fn check_support(grid: &Grid1D, support: (f64, f64)) -> Result<()> {
    if support.0 < grid.x_min + 5.0 || support.1 > grid.x_max - 5.0 {
        return Err(invalid(format!(
            "gradient support [{}, {}] must sit at least 5 inside the domain [{}, {}]",
            support.0, support.1, grid.x_min, grid.x_max
        )));
    }
    Ok(())
}

struct Recorder {
    opts: SimOptions,
    grid: Grid1D,
    snapshots: Vec<(f64, Vec<f64>)>,
    front_positions: Vec<(f64, Option<f64>)>,
    next_snapshot: f64,
}

impl Recorder {
    fn new(opts: SimOptions, grid: Grid1D, field: &[f64]) -> Self {
        let mut rec = Self {
            opts,
            grid,
            snapshots: Vec::new(),
            front_positions: Vec::new(),
            next_snapshot: 0.0,
        };
        rec.record(0.0, field);
        rec
    }

    fn record(&mut self, t: f64, field: &[f64]) {
        self.front_positions.push((t, front_position(field, &self.grid, self.opts.level)));
        if t + 1e-12 >= self.next_snapshot {
            self.snapshots.push((t, field.to_vec()));
            self.next_snapshot += self.opts.snapshot_every.max(self.opts.dt);
        }
    }

    fn finish(mut self, t_end: f64, field: Vec<f64>, support_right: f64) -> SimulationResult {
        if self.snapshots.last().map_or(true, |(t, _)| (*t - t_end).abs() > 1e-9) {
            self.snapshots.push((t_end, field.clone()));
        }
        let probe = self.opts.probe_x.unwrap_or(self.grid.x_max - 1.0).max(support_right);
        let xs = self.grid.xs();
        let p_probe = interp_clamped(&xs, &field, probe);
        let window_start = (1.0 - self.opts.window_frac) * t_end;
        let window: Vec<&(f64, Option<f64>)> =
            self.front_positions.iter().filter(|(t, _)| *t >= window_start).collect();
        let final_front = self.front_positions.last().and_then(|(_, x)| *x);

        let mut no_front = false;
        let outcome = if p_probe > 0.9 {
            Outcome::Propagated
        } else if final_front.is_none() {
            no_front = true;
            Outcome::Blocked
        } else if p_probe < 0.1 && window.iter().all(|(_, x)| x.is_some()) {
            let lo = window.iter().map(|(_, x)| x.unwrap()).fold(f64::INFINITY, f64::min);
            let hi = window.iter().map(|(_, x)| x.unwrap()).fold(f64::NEG_INFINITY, f64::max);
            if hi - lo < self.grid.dx {
                Outcome::Blocked
            } else {
                Outcome::Undecided
            }
        } else {
            Outcome::Undecided
        };
        SimulationResult {
            grid: self.grid,
            snapshots: self.snapshots,
            front_positions: self.front_positions,
            outcome,
            no_front,
            final_field: field,
        }
    }
}

/// Front propagation through a fixed spatial gradient:
/// dp/dt = p_xx + eta(x) p_x + f(p).
pub fn simulate_heterogeneous(
    model: &ReactionModel,
    gradient: &GradientProfile,
    init: &InitialDatum,
    grid: &Grid1D,
    opts: SimOptions,
) -> Result<SimulationResult> {
    check_reaction_bound(model, opts.dt)?;
    check_support(grid, gradient.support())?;
    let mut field = init.materialize(grid, model, None)?;
    let op = build_operator(grid, opts.dt, |x| gradient.eval(x));
    let mut scratch = TridiagScratch::new(grid.n);
    let mut rhs = vec![0.0; grid.n];
    let mut next = vec![0.0; grid.n];
    let mut rec = Recorder::new(opts, *grid, &field);

    let n_steps = (opts.t_end / opts.dt).round().max(1.0) as usize;
    let dt = opts.t_end / n_steps as f64;
    for k in 0..n_steps {
        for i in 0..grid.n {
            rhs[i] = field[i] + dt * model.f(field[i]);
        }
        scratch.solve(&op.sub, &op.diag, &op.sup, &rhs, &mut next);
        std::mem::swap(&mut field, &mut next);
        rec.record((k + 1) as f64 * dt, &field);
    }
    Ok(rec.finish(opts.t_end, field, gradient.support().1))
}

/// Frequency-dependent population law:
/// dp/dt = p_xx + 2 (h'(p)/h(p)) (p_x)^2 + f(p).
pub fn simulate_frequency_law(
    model: &ReactionModel,
    law: &FrequencyLaw,
    init: &InitialDatum,
    grid: &Grid1D,
    opts: SimOptions,
) -> Result<SimulationResult> {
    check_reaction_bound(model, opts.dt)?;
    for i in 0..=100 {
        if law.h(i as f64 / 100.0) <= 0.0 {
            return Err(invalid("h evaluates non-positive on [0, 1]"));
        }
    }
    let mut field = init.materialize(grid, model, Some(law))?;
    let op = build_operator(grid, opts.dt, |_| 0.0);
    let mut scratch = TridiagScratch::new(grid.n);
    let mut rhs = vec![0.0; grid.n];
    let mut next = vec![0.0; grid.n];
    let mut rec = Recorder::new(opts, *grid, &field);

    let n_steps = (opts.t_end / opts.dt).round().max(1.0) as usize;
    let dt = opts.t_end / n_steps as f64;
    let inv_2dx = 1.0 / (2.0 * grid.dx);
    for k in 0..n_steps {
        for i in 0..grid.n {
            // Zero-flux ghosts make the boundary gradient vanish.
            let gradient = if i == 0 || i == grid.n - 1 {
                0.0
            } else {
                (field[i + 1] - field[i - 1]) * inv_2dx
            };
            let p = field[i];
            rhs[i] = p + dt * (model.f(p) + 2.0 * law.h_prime(p) / law.h(p) * gradient * gradient);
        }
        scratch.solve(&op.sub, &op.diag, &op.sup, &rhs, &mut next);
        std::mem::swap(&mut field, &mut next);
        rec.record((k + 1) as f64 * dt, &field);
    }
    Ok(rec.finish(opts.t_end, field, grid.x_min))
}

#[derive(Debug, Clone)]
pub struct TwoPopulationInit {
    pub infected: Vec<f64>,
    pub uninfected: Vec<f64>,
}

/// Two-population initial state from an infection indicator profile `chi`:
/// infected at their steady density where chi = 1, uninfected at theirs
/// where chi = 0.
pub fn two_population_init_from_profile(
    params: &WolbachiaParams,
    capacity: &[f64],
    chi: &[f64],
) -> Result<TwoPopulationInit> {
    let f_u = scaled_fecundity(params)?;
    if chi.len() != capacity.len() {
        return Err(invalid("chi and capacity must share the grid"));
    }
    let infected_level = (1.0 - params.delta * params.d_u / ((1.0 - params.s_f) * f_u)).max(0.0);
    let uninfected_level = (1.0 - params.d_u / f_u).max(0.0);
    let infected = chi
        .iter()
        .zip(capacity)
        .map(|(c, k)| c.clamp(0.0, 1.0) * infected_level * k)
        .collect();
    let uninfected = chi
        .iter()
        .zip(capacity)
        .map(|(c, k)| (1.0 - c.clamp(0.0, 1.0)) * uninfected_level * k)
        .collect();
    Ok(TwoPopulationInit { infected, uninfected })
}

/// Front-like two-population initial state: infected at their steady density
/// on [x_min, x0], uninfected at theirs beyond, with a one-cell ramp.
pub fn two_population_front_init(
    params: &WolbachiaParams,
    capacity: &[f64],
    grid: &Grid1D,
    x0: f64,
) -> Result<TwoPopulationInit> {
    let chi: Vec<f64> = (0..grid.n)
        .map(|i| {
            let x = grid.x(i);
            if x <= x0 {
                1.0
            } else if x >= x0 + grid.dx {
                0.0
            } else {
                1.0 - (x - x0) / grid.dx
            }
        })
        .collect();
    two_population_init_from_profile(params, capacity, &chi)
}

fn scaled_fecundity(params: &WolbachiaParams) -> Result<f64> {
    params.validate()?;
    if params.eps <= 0.0 {
        return Err(invalid("two-population runs need eps > 0 (fecundity scales as sigma_f_u / eps)"));
    }
    Ok(params.sigma_f_u / params.eps)
}

#[derive(Debug, Clone)]
pub struct TwoPopulationResult {
    /// Snapshots, fronts and outcome of the infection frequency p = n_i / N.
    pub frequency: SimulationResult,
    pub final_infected: Vec<f64>,
    pub final_uninfected: Vec<f64>,
}

/// Coupled infected/uninfected densities with logistic crowding against the
/// carrying capacity K(x); the reported field is the frequency n_i / N.
pub fn simulate_two_population(
    params: &WolbachiaParams,
    capacity: &[f64],
    init: &TwoPopulationInit,
    grid: &Grid1D,
    opts: SimOptions,
) -> Result<TwoPopulationResult> {
    let f_u = scaled_fecundity(params)?;
    if capacity.len() != grid.n {
        return Err(invalid("capacity must be sampled on the grid"));
    }
    if capacity.iter().any(|k| *k <= 0.0) {
        return Err(invalid("carrying capacity must be positive"));
    }
    if init.infected.len() != grid.n || init.uninfected.len() != grid.n {
        return Err(invalid("initial densities must be sampled on the grid"));
    }
    if init.infected.iter().chain(init.uninfected.iter()).any(|v| *v < 0.0) {
        return Err(invalid("initial densities must be non-negative"));
    }
    if opts.dt * f_u >= 1.0 {
        return Err(invalid(format!(
            "dt * F_u = {} >= 1: explicit reaction unstable; reduce dt",
            opts.dt * f_u
        )));
    }

    let mut ni = init.infected.clone();
    let mut nu = init.uninfected.clone();
    let frequency = |ni: &[f64], nu: &[f64]| -> Vec<f64> {
        ni.iter()
            .zip(nu.iter())
            .map(|(a, b)| {
                let n = a + b;
                if n > 0.0 {
                    a / n
                } else {
                    0.0
                }
            })
            .collect()
    };

    let op = build_operator(grid, opts.dt, |_| 0.0);
    let mut scratch = TridiagScratch::new(grid.n);
    let mut rhs = vec![0.0; grid.n];
    let mut next = vec![0.0; grid.n];
    let mut freq = frequency(&ni, &nu);
    let mut rec = Recorder::new(opts, *grid, &freq);

    let n_steps = (opts.t_end / opts.dt).round().max(1.0) as usize;
    let dt = opts.t_end / n_steps as f64;
    for k in 0..n_steps {
        for i in 0..grid.n {
            let n = ni[i] + nu[i];
            let p = if n > 0.0 { ni[i] / n } else { 0.0 };
            let crowd = 1.0 - n / capacity[i];
            rhs[i] = ni[i]
                + dt * ((1.0 - params.s_f) * f_u * ni[i] * crowd - params.delta * params.d_u * ni[i]);
            let ru = f_u * nu[i] * (1.0 - params.s_h * p) * crowd - params.d_u * nu[i];
            next[i] = nu[i] + dt * ru;
        }
        scratch.solve(&op.sub, &op.diag, &op.sup, &rhs, &mut ni);
        rhs.copy_from_slice(&next);
        scratch.solve(&op.sub, &op.diag, &op.sup, &rhs, &mut nu);
        let worst = ni.iter().chain(nu.iter()).fold(0.0f64, |m, v| m.min(*v));
        if worst < -1e-9 || !worst.is_finite() {
            return Err(numerical(format!(
                "negative density {worst} at t = {}: scheme failure (reduce dt)",
                (k + 1) as f64 * dt
            )));
        }
        freq = frequency(&ni, &nu);
        rec.record((k + 1) as f64 * dt, &freq);
    }
    Ok(TwoPopulationResult {
        frequency: rec.finish(opts.t_end, freq, grid.x_min),
        final_infected: ni,
        final_uninfected: nu,
    })
}

/// Exponential-ramp carrying capacity K(x) = K_L exp(C min((x+L)_+, 2L)).
pub fn exp_ramp_capacity(k_left: f64, c: f64, l: f64, grid: &Grid1D) -> Vec<f64> {
    (0..grid.n)
        .map(|i| {
            let x = grid.x(i);
            k_left * (c * ((x + l).max(0.0)).min(2.0 * l)).exp()
        })
        .collect()
}

pub fn assert_range_preserved(result: &SimulationResult) -> Result<()> {
    for (t, snap) in &result.snapshots {
        for v in snap {
            if !(-1e-9..=1.0 + 1e-9).contains(v) {
                return Err(numerical(format!("field left [0,1] at t={t}: {v}")));
            }
        }
    }
    Ok(())
}
