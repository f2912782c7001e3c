//! JSON configuration schemas. Unknown keys are rejected, and keys belonging
//! to a different `kind` are rejected explicitly, so a typo never silently
//! falls back to a default.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pde::{GradientProfile, Grid1D, InitialDatum};
use crate::reaction::{FrequencyLaw, ReactionModel, WolbachiaParams};

fn reject_extras(kind: &str, extras: &[(&str, bool)]) -> Result<()> {
    for (name, present) in extras {
        if *present {
            return Err(invalid(format!("key \"{name}\" is not valid for kind \"{kind}\"")));
        }
    }
    Ok(())
}

/// {"kind":"cubic","theta":0.25} or
/// {"kind":"wolbachia","s_f":...,"s_h":...,"delta":...,"d_s":...,"d_u":...,"sigmaFu":...,"eps":...}
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_u: Option<f64>,
    #[serde(rename = "sigmaFu", skip_serializing_if = "Option::is_none")]
    pub sigma_f_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

impl ModelSpec {
    pub fn cubic(theta: f64) -> Self {
        Self {
            kind: "cubic".into(),
            theta: Some(theta),
            rate: None,
            s_f: None,
            s_h: None,
            delta: None,
            d_s: None,
            d_u: None,
            sigma_f_u: None,
            eps: None,
        }
    }

    pub fn wolbachia_defaults() -> Self {
        Self {
            kind: "wolbachia".into(),
            theta: None,
            rate: None,
            s_f: None,
            s_h: None,
            delta: None,
            d_s: None,
            d_u: None,
            sigma_f_u: None,
            eps: None,
        }
    }

    fn has_wolbachia_keys(&self) -> bool {
        self.s_f.is_some()
            || self.s_h.is_some()
            || self.delta.is_some()
            || self.d_s.is_some()
            || self.d_u.is_some()
            || self.sigma_f_u.is_some()
            || self.eps.is_some()
    }

    pub fn wolbachia_params(&self) -> Result<WolbachiaParams> {
        if self.kind != "wolbachia" {
            return Err(invalid(format!("model kind \"{}\" is not \"wolbachia\"", self.kind)));
        }
        let d = WolbachiaParams::default();
        Ok(WolbachiaParams {
            d_s: self.d_s.unwrap_or(d.d_s),
            s_f: self.s_f.unwrap_or(d.s_f),
            s_h: self.s_h.unwrap_or(d.s_h),
            delta: self.delta.unwrap_or(d.delta),
            d_u: self.d_u.unwrap_or(d.d_u),
            sigma_f_u: self.sigma_f_u.unwrap_or(d.sigma_f_u),
            eps: self.eps.unwrap_or(d.eps),
        })
    }

    pub fn build(&self) -> Result<ReactionModel> {
        match self.kind.as_str() {
            "cubic" => {
                reject_extras(
                    "cubic",
                    &[("rate", self.rate.is_some()), ("s_f", self.has_wolbachia_keys())],
                )?;
                let theta =
                    self.theta.ok_or_else(|| invalid("cubic model needs \"theta\""))?;
                ReactionModel::cubic(theta)
            }
            "logistic" => {
                reject_extras(
                    "logistic",
                    &[("theta", self.theta.is_some()), ("s_f", self.has_wolbachia_keys())],
                )?;
                let rate =
                    self.rate.ok_or_else(|| invalid("logistic model needs \"rate\""))?;
                ReactionModel::logistic(rate)
            }
            "wolbachia" => {
                reject_extras(
                    "wolbachia",
                    &[("theta", self.theta.is_some()), ("rate", self.rate.is_some())],
                )?;
                ReactionModel::wolbachia(self.wolbachia_params()?)
            }
            other => Err(invalid(format!("unknown model kind \"{other}\""))),
        }
    }
}

/// {"kind":"constant"} or {"kind":"wolbachia",...,"normalize":true}
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_u: Option<f64>,
    #[serde(rename = "sigmaFu", skip_serializing_if = "Option::is_none")]
    pub sigma_f_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default)]
    pub normalize: bool,
}

impl LawSpec {
    pub fn constant() -> Self {
        Self {
            kind: "constant".into(),
            s_f: None,
            s_h: None,
            delta: None,
            d_u: None,
            sigma_f_u: None,
            eps: None,
            normalize: false,
        }
    }

    pub fn wolbachia(eps: f64, normalize: bool) -> Self {
        Self { eps: Some(eps), normalize, ..Self::constant_with_kind("wolbachia") }
    }

    fn constant_with_kind(kind: &str) -> Self {
        Self { kind: kind.into(), ..Self::constant() }
    }

    pub fn build(&self) -> Result<FrequencyLaw> {
        let law = match self.kind.as_str() {
            "constant" => FrequencyLaw::constant(),
            "wolbachia" => {
                let d = WolbachiaParams::default();
                FrequencyLaw::wolbachia(WolbachiaParams {
                    d_s: d.d_s,
                    s_f: self.s_f.unwrap_or(d.s_f),
                    s_h: self.s_h.unwrap_or(d.s_h),
                    delta: self.delta.unwrap_or(d.delta),
                    d_u: self.d_u.unwrap_or(d.d_u),
                    sigma_f_u: self.sigma_f_u.unwrap_or(d.sigma_f_u),
                    eps: self.eps.unwrap_or(d.eps),
                })?
            }
            other => return Err(invalid(format!("unknown law kind \"{other}\""))),
        };
        Ok(if self.normalize { law.normalized() } else { law })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradientSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    /// Audit switch: use the literal negative parabolic variant.
    #[serde(default)]
    pub literal_sign: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl GradientSpec {
    pub fn interval(c: f64, l: f64) -> Self {
        Self { kind: "interval_constant".into(), c: Some(c), l: Some(l), literal_sign: false, xs: None, values: None }
    }

    pub fn parabolic(c: f64, l: f64) -> Self {
        Self { kind: "parabolic".into(), c: Some(c), l: Some(l), literal_sign: false, xs: None, values: None }
    }

    pub fn build(&self) -> Result<GradientProfile> {
        match self.kind.as_str() {
            "interval_constant" => Ok(GradientProfile::IntervalConstant {
                c: self.c.ok_or_else(|| invalid("interval_constant needs \"c\""))?,
                l: self.l.ok_or_else(|| invalid("interval_constant needs \"l\""))?,
            }),
            "parabolic" => Ok(GradientProfile::Parabolic {
                c: self.c.ok_or_else(|| invalid("parabolic needs \"c\""))?,
                l: self.l.ok_or_else(|| invalid("parabolic needs \"l\""))?,
                literal_sign: self.literal_sign,
            }),
            "sampled" => {
                let xs = self.xs.clone().ok_or_else(|| invalid("sampled needs \"xs\""))?;
                let values =
                    self.values.clone().ok_or_else(|| invalid("sampled needs \"values\""))?;
                if xs.len() != values.len() || xs.len() < 2 {
                    return Err(invalid("sampled gradient needs matching xs/values"));
                }
                Ok(GradientProfile::Sampled { xs, values })
            }
            other => Err(invalid(format!("unknown gradient kind \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl InitSpec {
    pub fn front(x0: f64) -> Self {
        Self { kind: "front".into(), x0: Some(x0), alpha: None, center: None, values: None }
    }

    pub fn heaviside(x0: f64) -> Self {
        Self { kind: "heaviside".into(), x0: Some(x0), alpha: None, center: None, values: None }
    }

    pub fn propagule(alpha: f64, center: f64) -> Self {
        Self { kind: "propagule".into(), x0: None, alpha: Some(alpha), center: Some(center), values: None }
    }

    pub fn build(&self) -> Result<InitialDatum> {
        match self.kind.as_str() {
            "front" => Ok(InitialDatum::Front {
                x0: self.x0.ok_or_else(|| invalid("front needs \"x0\""))?,
            }),
            "heaviside" => Ok(InitialDatum::Heaviside {
                x0: self.x0.ok_or_else(|| invalid("heaviside needs \"x0\""))?,
            }),
            "propagule" => Ok(InitialDatum::Propagule {
                alpha: self.alpha.ok_or_else(|| invalid("propagule needs \"alpha\""))?,
                center: self.center.unwrap_or(0.0),
            }),
            "sampled" => Ok(InitialDatum::Sampled(
                self.values.clone().ok_or_else(|| invalid("sampled needs \"values\""))?,
            )),
            other => Err(invalid(format!("unknown init kind \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { x_min: -20.0, x_max: 20.0, dx: 0.1 }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid1D> {
        Grid1D::new(self.x_min, self.x_max, self.dx)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacitySpec {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_left: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl CapacitySpec {
    pub fn exp_ramp(k_left: f64, c: f64, l: f64) -> Self {
        Self { kind: "exp_ramp".into(), k_left: Some(k_left), c: Some(c), l: Some(l), value: None }
    }

    pub fn sample(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        match self.kind.as_str() {
            "exp_ramp" => Ok(crate::pde::exp_ramp_capacity(
                self.k_left.ok_or_else(|| invalid("exp_ramp needs \"k_left\""))?,
                self.c.ok_or_else(|| invalid("exp_ramp needs \"c\""))?,
                self.l.ok_or_else(|| invalid("exp_ramp needs \"l\""))?,
                grid,
            )),
            "constant" => {
                let v = self.value.ok_or_else(|| invalid("constant capacity needs \"value\""))?;
                Ok(vec![v; grid.n])
            }
            other => Err(invalid(format!("unknown capacity kind \"{other}\""))),
        }
    }

    pub fn support_right(&self) -> f64 {
        self.l.unwrap_or(0.0)
    }
}

fn default_dt() -> f64 {
    0.05
}

fn default_t_end() -> f64 {
    400.0
}

fn default_snapshot_every() -> f64 {
    2.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub model: ModelSpec,
    /// "heterogeneous", "frequency_law", or "two_population".
    pub equation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient: Option<GradientSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<LawSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CapacitySpec>,
    pub init: InitSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(rename = "T", default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_x: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeedConfig {
    pub model: ModelSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaCConfig {
    pub model: ModelSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignCurveConfig {
    /// Wolbachia parameters; the eps field is swept over [eps_min, eps_max].
    pub model: ModelSpec,
    pub eps_min: f64,
    pub eps_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarrierConfig {
    pub model: ModelSpec,
    pub c: f64,
    pub l: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LstarCurveConfig {
    pub model: ModelSpec,
    pub c_min: f64,
    pub c_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CstarConfig {
    pub model: ModelSpec,
    pub l: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpConfig {
    pub model: ModelSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropaguleConfig {
    pub model: ModelSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub law: Option<LawSpec>,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_spec_round_trips() {
        let spec: ModelSpec = serde_json::from_str(r#"{"kind":"cubic","theta":0.25}"#).unwrap();
        let model = spec.build().unwrap();
        assert!((model.theta().unwrap() - 0.25).abs() < 1e-15);

        let spec: ModelSpec =
            serde_json::from_str(r#"{"kind":"wolbachia","eps":0.2,"sigmaFu":2.0}"#).unwrap();
        let params = spec.wolbachia_params().unwrap();
        assert_eq!(params.eps, 0.2);
        assert_eq!(params.sigma_f_u, 2.0);
        assert_eq!(params.s_f, 0.1);
    }

    #[test]
    fn unknown_and_misplaced_keys_rejected() {
        assert!(serde_json::from_str::<ModelSpec>(r#"{"kind":"cubic","theta":0.2,"bogus":1}"#)
            .is_err());
        let spec: ModelSpec =
            serde_json::from_str(r#"{"kind":"cubic","theta":0.2,"eps":0.1}"#).unwrap();
        assert!(spec.build().is_err(), "wolbachia key on a cubic model");
    }

    #[test]
    fn simulate_config_defaults() {
        let cfg: SimulateConfig = serde_json::from_str(
            r#"{"model":{"kind":"cubic","theta":0.25},
                "equation":"heterogeneous",
                "gradient":{"kind":"interval_constant","c":2.0,"l":0.5},
                "init":{"kind":"front","x0":-14.0}}"#,
        )
        .unwrap();
        assert_eq!(cfg.dt, 0.05);
        assert_eq!(cfg.t_end, 400.0);
        assert_eq!(cfg.grid.dx, 0.1);
        let cfg2: SimulateConfig = serde_json::from_str(
            r#"{"model":{"kind":"cubic","theta":0.25},
                "equation":"heterogeneous",
                "gradient":{"kind":"interval_constant","c":2.0,"l":0.5},
                "init":{"kind":"front","x0":-14.0},
                "T":100.0}"#,
        )
        .unwrap();
        assert_eq!(cfg2.t_end, 100.0);
    }
}
