//! Reaction nonlinearities, their potentials, and population-vs-frequency laws.
//!
//! A bistable nonlinearity vanishes at 0, theta and 1, is negative on
//! (0, theta) and positive on (theta, 1). Its potential F(x) = int_0^x f
//! returns to zero at theta_c; F(1) > 0 means the invading state is
//! energetically favored. Outside [0, 1] every nonlinearity is extended by
//! negative linear tails so that comparison arguments keep working for
//! fields that leave the unit interval by rounding.

use std::sync::{Arc, OnceLock};

use crate::error::{degenerate, invalid, Error, Result};
use crate::numerics::{bisect, integrate, CumulativeIntegral};

const POTENTIAL_PANELS: usize = 2048;

/// Parameters of the cytoplasmic-incompatibility frequency model.
///
/// `delta` is the infected/uninfected death-rate ratio, `s_f` the fecundity
/// reduction, `s_h` the incompatibility fraction, `eps` the inverse
/// population-size scale entering the population law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WolbachiaParams {
    pub d_s: f64,
    pub s_f: f64,
    pub s_h: f64,
    pub delta: f64,
    pub d_u: f64,
    pub sigma_f_u: f64,
    pub eps: f64,
}

impl Default for WolbachiaParams {
    fn default() -> Self {
        Self {
            d_s: 1.0,
            s_f: 0.1,
            s_h: 0.8,
            delta: 1.25,
            d_u: 1.0,
            sigma_f_u: 1.0,
            eps: 0.1,
        }
    }
}

impl WolbachiaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_s > 0.0 && self.d_u > 0.0 && self.sigma_f_u > 0.0 && self.delta > 0.0) {
            return Err(invalid("all rates must be positive"));
        }
        if !(0.0..1.0).contains(&self.s_f) {
            return Err(invalid("s_f must lie in [0, 1)"));
        }
        if !(self.s_h > 0.0 && self.s_h <= 1.0) {
            return Err(invalid("s_h must lie in (0, 1]"));
        }
        if self.eps < 0.0 {
            return Err(invalid("eps must be non-negative"));
        }
        if self.bistability_margin() <= 0.0 {
            return Err(invalid(format!(
                "bistability condition delta*s_h - delta + 1 - s_f > 0 violated (margin {})",
                self.bistability_margin()
            )));
        }
        if self.delta <= 1.0 - self.s_f {
            return Err(invalid("need delta > 1 - s_f for the incompatible state to be stable"));
        }
        Ok(())
    }

    /// delta*s_h - delta + 1 - s_f; positive iff the frequency dynamics are bistable.
    pub fn bistability_margin(&self) -> f64 {
        self.delta * self.s_h - self.delta + 1.0 - self.s_f
    }

    fn denominator(&self, p: f64) -> f64 {
        self.s_h * p * p - (self.s_f + self.s_h) * p + 1.0
    }

    /// Numerator quadratic of the reaction rate, after factoring out p.
    fn numerator_quadratic(&self, p: f64) -> f64 {
        -self.s_h * self.delta * p * p
            + (self.delta * (1.0 + self.s_h) - (1.0 - self.s_f)) * p
            + (1.0 - self.s_f)
            - self.delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Bistable,
    Monostable,
}

#[derive(Clone)]
enum Form {
    Cubic { theta: f64 },
    Logistic { rate: f64 },
    Wolbachia { params: WolbachiaParams },
    /// Image g of the change of variable: g(H(x)) = f(x) h^2(x).
    Mapped { inner: Arc<ReactionModel>, law: Arc<FrequencyLaw> },
    /// u -> -f(1 - u); used to reduce negative-mass models to the standard orientation.
    Reflected { inner: Arc<ReactionModel> },
}

/// A reaction nonlinearity together with its derived quantities.
#[derive(Clone)]
pub struct ReactionModel {
    kind: Kind,
    form: Form,
    theta: Option<f64>,
    theta_c: Option<f64>,
    mass: f64,
    fp0: f64,
    fp1: f64,
    tail_left_slope: f64,
    tail_right_slope: f64,
    max_fprime: f64,
    max_abs_fprime: f64,
    potential_table: Option<CumulativeIntegral>,
    pub(crate) speed_cache: Arc<OnceLock<std::result::Result<f64, Error>>>,
}

impl std::fmt::Debug for ReactionModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReactionModel")
            .field("kind", &self.kind)
            .field("theta", &self.theta)
            .field("theta_c", &self.theta_c)
            .field("mass", &self.mass)
            .finish()
    }
}

fn form_eval(form: &Form, x: f64) -> f64 {
    match form {
        Form::Cubic { theta } => x * (1.0 - x) * (x - theta),
        Form::Logistic { rate } => rate * x * (1.0 - x),
        Form::Wolbachia { params } => {
            params.d_s * x * params.numerator_quadratic(x) / params.denominator(x)
        }
        Form::Mapped { inner, law } => {
            let x_orig = law.inverse_cumulative(x);
            let h = law.h(x_orig);
            inner.f(x_orig) * h * h
        }
        Form::Reflected { inner } => -inner.f(1.0 - x),
    }
}

impl ReactionModel {
    fn finish(kind: Kind, form: Form, theta: Option<f64>) -> Result<Self> {
        let h = 1e-6;
        let fp0 = (4.0 * form_eval(&form, h) - form_eval(&form, 2.0 * h)) / (2.0 * h);
        let fp1 =
            (-4.0 * form_eval(&form, 1.0 - h) + form_eval(&form, 1.0 - 2.0 * h)) / (2.0 * h);

        // Interior derivative range, scanned on a fixed grid.
        let n = 4096;
        let mut max_fprime = f64::NEG_INFINITY;
        let mut max_abs = 0.0f64;
        let mut prev = form_eval(&form, 0.0);
        for i in 1..=n {
            let x = i as f64 / n as f64;
            let val = form_eval(&form, x);
            let d = (val - prev) * n as f64;
            max_fprime = max_fprime.max(d);
            max_abs = max_abs.max(d.abs());
            prev = val;
        }

        let (potential_table, mass) = match &form {
            Form::Cubic { theta } => (None, (1.0 - 2.0 * theta) / 12.0),
            Form::Logistic { rate } => (None, rate / 6.0),
            Form::Reflected { inner } => (None, -inner.mass),
            _ => {
                let fc = form.clone();
                let table = CumulativeIntegral::build(move |x| form_eval(&fc, x), 0.0, 1.0, POTENTIAL_PANELS);
                let mass = table.total();
                (Some(table), mass)
            }
        };

        let mut model = Self {
            kind,
            form,
            theta,
            theta_c: None,
            mass,
            fp0,
            fp1,
            tail_left_slope: 1.0 + fp0.abs(),
            tail_right_slope: 1.0 + fp1.abs(),
            max_fprime,
            max_abs_fprime: max_abs,
            potential_table,
            speed_cache: Arc::new(OnceLock::new()),
        };
        if kind == Kind::Bistable {
            let th = theta.ok_or_else(|| invalid("bistable model needs an interior zero"))?;
            if model.mass > 1e-12 {
                let pot = |x: f64| model.potential(x);
                let lo = th + 1e-9;
                let hi = 1.0;
                let tc = bisect(&pot, lo, hi, 1e-14, 200)
                    .map_err(|e| Error::Numerical(format!("theta_c bisection: {e}")))?;
                model.theta_c = Some(tc);
            }
        }
        Ok(model)
    }

    /// Canonical bistable cubic f(u) = u(1-u)(u-theta).
    pub fn cubic(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(invalid(format!("theta must lie in (0, 1), got {theta}")));
        }
        Self::finish(Kind::Bistable, Form::Cubic { theta }, Some(theta))
    }

    /// Monostable logistic f(u) = rate * u(1-u).
    pub fn logistic(rate: f64) -> Result<Self> {
        if rate <= 0.0 {
            return Err(invalid("rate must be positive"));
        }
        Self::finish(Kind::Monostable, Form::Logistic { rate }, None)
    }

    /// Frequency-dependent reaction rate of the incompatibility model.
    pub fn wolbachia(params: WolbachiaParams) -> Result<Self> {
        params.validate()?;
        let mut den_min = f64::INFINITY;
        for i in 0..=1000 {
            den_min = den_min.min(params.denominator(i as f64 / 1000.0));
        }
        if den_min <= 0.0 {
            return Err(invalid("denominator vanishes on [0, 1]"));
        }
        // Interior zero by root-finding on the numerator quadratic.
        let q = |p: f64| params.numerator_quadratic(p);
        let theta = bisect(&q, 1e-12, 1.0 - 1e-9, 1e-14, 200)
            .map_err(|e| invalid(format!("no interior zero in (0, 1): {e}")))?;
        Self::finish(Kind::Bistable, Form::Wolbachia { params }, Some(theta))
    }

    /// Image of the change of variable y = H(x); see [`change_of_variable`].
    fn mapped(inner: Arc<ReactionModel>, law: Arc<FrequencyLaw>) -> Result<Self> {
        let theta = inner.theta.map(|t| law.cumulative(t));
        Self::finish(inner.kind, Form::Mapped { inner, law }, theta)
    }

    /// The reflection u -> 1 - u, turning a negative-mass bistable model into a
    /// positive-mass one (and negating the wave speed).
    pub fn reflected(&self) -> Result<Self> {
        let theta = self.theta.map(|t| 1.0 - t);
        Self::finish(self.kind, Form::Reflected { inner: Arc::new(self.clone()) }, theta)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Interior zero of a bistable nonlinearity.
    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    /// Zero of the potential in (theta, 1); None when F(1) <= 0.
    pub fn theta_c(&self) -> Option<f64> {
        self.theta_c
    }

    /// F(1) = int_0^1 f.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Balanced case F(1) = 0: wave speed zero, no blocking theory applies.
    pub fn is_degenerate(&self) -> bool {
        self.mass.abs() <= 1e-12
    }

    pub fn fprime0(&self) -> f64 {
        self.fp0
    }

    pub fn fprime1(&self) -> f64 {
        self.fp1
    }

    pub(crate) fn max_fprime(&self) -> f64 {
        self.max_fprime
    }

    pub fn max_abs_fprime(&self) -> f64 {
        self.max_abs_fprime
    }

    /// Reaction rate, with negative linear tails outside [0, 1].
    pub fn f(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.tail_left_slope * x
        } else if x > 1.0 {
            -self.tail_right_slope * (x - 1.0)
        } else {
            form_eval(&self.form, x)
        }
    }

    /// Potential F(x) = int_0^x f, consistent with the tail extension.
    pub fn potential(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.5 * self.tail_left_slope * x * x;
        }
        if x > 1.0 {
            return self.mass - 0.5 * self.tail_right_slope * (x - 1.0) * (x - 1.0);
        }
        match &self.form {
            Form::Cubic { theta } => {
                let x2 = x * x;
                -0.25 * x2 * x2 + (1.0 + theta) * x2 * x / 3.0 - 0.5 * theta * x2
            }
            Form::Logistic { rate } => rate * (0.5 * x * x - x * x * x / 3.0),
            Form::Reflected { inner } => inner.potential(1.0 - x) - inner.mass,
            _ => self.potential_table.as_ref().expect("table present").eval(x),
        }
    }
}

#[derive(Clone)]
enum LawForm {
    Constant,
    Wolbachia { params: WolbachiaParams },
}

/// Positive population-per-frequency law h(p) with its square antiderivative
/// H(x) = int_0^x h^2.
#[derive(Clone)]
pub struct FrequencyLaw {
    form: LawForm,
    scale: f64,
    cum: CumulativeIntegral,
}

impl std::fmt::Debug for FrequencyLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FrequencyLaw")
            .field("scale", &self.scale)
            .field("normalized", &self.is_normalized())
            .finish()
    }
}

fn law_raw(form: &LawForm, p: f64) -> f64 {
    match form {
        LawForm::Constant => 1.0,
        LawForm::Wolbachia { params } => {
            1.0 - params.eps * (params.d_u / params.sigma_f_u) * ((params.delta - 1.0) * p + 1.0)
                / params.denominator(p)
        }
    }
}

fn law_raw_prime(form: &LawForm, p: f64) -> f64 {
    match form {
        LawForm::Constant => 0.0,
        LawForm::Wolbachia { params } => {
            let den = params.denominator(p);
            params.eps
                * (params.d_u / params.sigma_f_u)
                * ((params.delta - 1.0) * params.s_h * p * p + 2.0 * params.s_h * p
                    - (params.delta - 1.0 + params.s_f + params.s_h))
                / (den * den)
        }
    }
}

impl FrequencyLaw {
    fn build(form: LawForm, scale: f64) -> Self {
        let fc = form.clone();
        let cum = CumulativeIntegral::build(
            move |x| {
                let h = scale * law_raw(&fc, x);
                h * h
            },
            0.0,
            1.0,
            POTENTIAL_PANELS,
        );
        Self { form, scale, cum }
    }

    /// h identically one (already normalized).
    pub fn constant() -> Self {
        Self::build(LawForm::Constant, 1.0)
    }

    /// Population law of the incompatibility model in the large-population limit.
    pub fn wolbachia(params: WolbachiaParams) -> Result<Self> {
        params.validate()?;
        let mut h_min = f64::INFINITY;
        for i in 0..=2000 {
            h_min = h_min.min(law_raw(&LawForm::Wolbachia { params }, i as f64 / 2000.0));
        }
        if h_min <= 0.0 {
            return Err(invalid(format!("h must stay positive on [0, 1]; min is {h_min}")));
        }
        Ok(Self::build(LawForm::Wolbachia { params }, 1.0))
    }

    pub fn h(&self, p: f64) -> f64 {
        self.scale * law_raw(&self.form, p.clamp(0.0, 1.0))
    }

    pub fn h_prime(&self, p: f64) -> f64 {
        self.scale * law_raw_prime(&self.form, p.clamp(0.0, 1.0))
    }

    /// H(x) = int_0^x h^2, an increasing bijection of [0, 1] once normalized.
    pub fn cumulative(&self, x: f64) -> f64 {
        self.cum.eval(x.clamp(0.0, 1.0))
    }

    /// Inverse bijection H^{-1}; Newton with bisection fallback.
    pub fn inverse_cumulative(&self, y: f64) -> f64 {
        let total = self.cum.total();
        let target = y.clamp(0.0, total);
        let mut x = (target / total).clamp(0.0, 1.0);
        for _ in 0..64 {
            let err = self.cumulative(x) - target;
            if err.abs() <= 1e-15 {
                return x;
            }
            let h = self.h(x);
            let step = err / (h * h);
            x = (x - step).clamp(0.0, 1.0);
            if step.abs() <= 1e-16 {
                return x;
            }
        }
        bisect(&|x| self.cumulative(x) - target, 0.0, 1.0, 1e-15, 200).unwrap_or(x)
    }

    pub fn integral_h2(&self) -> f64 {
        self.cum.total()
    }

    pub fn is_normalized(&self) -> bool {
        (self.integral_h2() - 1.0).abs() <= 1e-10
    }

    /// Rescale so that int_0^1 h^2 = 1. Idempotent.
    pub fn normalized(&self) -> Self {
        let scale = self.scale / self.integral_h2().sqrt();
        Self::build(self.form.clone(), scale)
    }

    /// Unique sign change of h' in (0, 1); None when h is constant (eps = 0).
    pub fn theta0(&self) -> Option<f64> {
        match &self.form {
            LawForm::Constant => None,
            LawForm::Wolbachia { params } => {
                if params.eps == 0.0 {
                    return None;
                }
                let d = params.delta;
                if (d - 1.0).abs() < 1e-12 {
                    Some(0.5 + params.s_f / (2.0 * params.s_h))
                } else {
                    let rad =
                        1.0 + (d - 1.0) * ((d - 1.0 + params.s_f) / params.s_h + 1.0);
                    Some((-1.0 + rad.sqrt()) / (d - 1.0))
                }
            }
        }
    }
}

/// Result of the reduction y = H(x): the transformed nonlinearity g with
/// g(H(x)) = f(x) h^2(x), plus the map itself.
#[derive(Debug, Clone)]
pub struct VariableChange {
    pub g: ReactionModel,
    pub law: FrequencyLaw,
}

impl VariableChange {
    pub fn forward(&self, x: f64) -> f64 {
        self.law.cumulative(x)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        self.law.inverse_cumulative(y)
    }
}

/// Reduce the frequency-dependent equation to a plain reaction-diffusion one.
/// Requires the law normalized (int h^2 = 1) so H maps [0,1] onto [0,1].
pub fn change_of_variable(model: &ReactionModel, law: &FrequencyLaw) -> Result<VariableChange> {
    if !law.is_normalized() {
        return Err(invalid(format!(
            "law must be normalized (int h^2 = {}, expected 1)",
            law.integral_h2()
        )));
    }
    let g = ReactionModel::mapped(Arc::new(model.clone()), Arc::new(law.clone()))?;
    Ok(VariableChange { g, law: law.clone() })
}

/// int_0^1 f h^4; its sign equals the sign of the bistable wave speed of the
/// frequency-dependent equation.
pub fn speed_sign_integral(model: &ReactionModel, law: &FrequencyLaw) -> Result<f64> {
    if model.kind() != Kind::Bistable {
        return Err(degenerate("speed-sign integral requires a bistable model"));
    }
    Ok(integrate(
        &|x| {
            let h = law.h(x);
            model.f(x) * h * h * h * h
        },
        0.0,
        1.0,
        1e-12,
    ))
}

/// Limit population density at frequency p in the two-population model.
pub fn wolbachia_h0(params: &WolbachiaParams, p: f64) -> Result<f64> {
    params.validate()?;
    // Same quadratic as the reaction denominator: (1-s_f)p + (1-p)(1-s_h p).
    let bracket = params.denominator(p);
    if bracket <= 0.0 {
        return Err(invalid("population bracket vanishes"));
    }
    Ok(params.d_u * (params.delta * p + 1.0 - p) / (params.sigma_f_u * bracket))
}
