//! Stationarity conditions of K₃ at θ = π/2.
//!
//! For RTN, dK₃/dν = 2Λ′(ν) − 2Λ′(2ν) with Λ′(ν) ∝ e^{−ν} sin(μν)/μ, so
//! dK₃/dν = 0 exactly when sin(μν) = 0 or 2e^{−ν}cos(μν) = 1 (cosh for
//! imaginary μ). The first family only exists for real μ and is reported
//! separately.
//!
//! For OUN, q′(t) = −(Γ/2)(1 − e^{−γt}) q(t), so dK₃/dΔt = 0 exactly when
//! (1 + e^{−γΔt})·q(2Δt)/q(Δt) = 1, equivalently
//! (1 − e^{−2γΔt})/(1 − e^{−γΔt})·q(2Δt)/q(Δt) = 1.

use serde::Serialize;

use super::roots::find_roots;
use crate::error::{LgError, Result};
use crate::noise::{NoiseChannel, OunParams, RtnBranch, RtnParams};

/// Minimum number of scan samples used to bracket roots.
pub const DEFAULT_SCAN_POINTS: usize = 10_000;

/// A root passes the stationarity check when |dK₃/dx| is below this.
pub const STATIONARITY_TOL: f64 = 1e-6;

const MAX_SCAN_POINTS: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionKind {
    /// 2e^{−ν}cosh(μ₀ν) = 1
    RtnMarkov,
    /// 2e^{−ν}cos(μν) = 1
    RtnNonMarkov,
    /// F(Δt) = 1
    Oun,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Params {
    Rtn(RtnParams),
    Oun(OunParams),
}

/// The extremum condition for one channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremumCondition {
    pub kind: ConditionKind,
    params: Params,
}

/// Which factor of dK₃ vanishes at a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootFamily {
    /// The printed transcendental condition.
    Condition,
    /// sin(μν) = 0 (RTN with real μ only).
    SinZero,
}

impl RootFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootFamily::Condition => "condition",
            RootFamily::SinZero => "sin-zero",
        }
    }
}

/// A verified stationary point of K₃(Δt) at θ = π/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtremumRoot {
    pub family: RootFamily,
    /// Raw time separation Δt.
    pub dt: f64,
    /// ν = γΔt for RTN, `None` for OUN.
    pub nu: Option<f64>,
    /// |LHS − 1| for the condition family, |sin μν| for the other.
    pub residual: f64,
    pub k3: f64,
    /// Finite-difference dK₃/dν (RTN) or dK₃/dΔt (OUN).
    pub dk3: f64,
    pub is_maximum: bool,
    pub stationary: bool,
}

impl ExtremumCondition {
    pub fn for_channel(channel: &NoiseChannel) -> Result<Self> {
        match channel {
            NoiseChannel::Rtn(p) => {
                let kind = match p.branch() {
                    RtnBranch::Oscillating { .. } => ConditionKind::RtnNonMarkov,
                    _ => ConditionKind::RtnMarkov,
                };
                Ok(Self { kind, params: Params::Rtn(*p) })
            }
            NoiseChannel::Oun(p) => Ok(Self {
                kind: ConditionKind::Oun,
                params: Params::Oun(*p),
            }),
            NoiseChannel::Unitary { .. } => Err(LgError::Unsupported(
                "no extremum condition for unitary evolution".into(),
            )),
        }
    }

    /// Raw time → the condition's natural variable (ν for RTN, Δt for OUN).
    pub fn to_native(&self, dt: f64) -> f64 {
        match self.params {
            Params::Rtn(p) => p.nu(dt),
            Params::Oun(_) => dt,
        }
    }

    pub fn to_time(&self, x: f64) -> f64 {
        match self.params {
            Params::Rtn(p) => x / p.gamma,
            Params::Oun(_) => x,
        }
    }

    /// Left-hand side of the condition "LHS = 1" in the natural variable.
    pub fn lhs(&self, x: f64) -> f64 {
        self.log_lhs_or_gap(x).1
    }

    /// A function with the same sign and zeros as LHS − 1, evaluated
    /// without overflow.
    pub fn signed_gap(&self, x: f64) -> f64 {
        self.log_lhs_or_gap(x).0
    }

    fn log_lhs_or_gap(&self, x: f64) -> (f64, f64) {
        match self.params {
            Params::Rtn(p) => match p.branch() {
                RtnBranch::Oscillating { mu } => {
                    let lhs = 2.0 * (-x).exp() * (mu * x).cos();
                    (lhs - 1.0, lhs)
                }
                RtnBranch::Critical => {
                    let lhs = 2.0 * (-x).exp();
                    (lhs - 1.0, lhs)
                }
                RtnBranch::Damped { mu0 } => {
                    // 2e^{−ν}cosh(μ₀ν) = e^{−(1−μ₀)ν} + e^{−(1+μ₀)ν}
                    let slow = p.coupling_ratio().powi(2) / (1.0 + mu0);
                    let lhs = (-slow * x).exp() + (-(1.0 + mu0) * x).exp();
                    (lhs - 1.0, lhs)
                }
            },
            Params::Oun(p) => {
                let log_f = oun_log_f(&p, x);
                (log_f, log_f.exp())
            }
        }
    }

    /// |LHS(x) − 1|
    pub fn residual(&self, x: f64) -> f64 {
        match self.params {
            Params::Oun(p) => oun_log_f(&p, x).exp_m1().abs(),
            _ => (self.lhs(x) - 1.0).abs(),
        }
    }

    /// K₃ at θ = π/2 as a function of the natural variable.
    pub fn k3_native(&self, x: f64) -> f64 {
        match self.params {
            Params::Rtn(p) => 2.0 * p.lambda_at_nu(x) - p.lambda_at_nu(2.0 * x),
            Params::Oun(p) => 2.0 * p.q(x) - p.q(2.0 * x),
        }
    }

    /// Length scale over which K₃ varies in the natural variable.
    fn scale(&self) -> f64 {
        match self.params {
            Params::Rtn(p) => match p.branch() {
                RtnBranch::Oscillating { mu } => 1.0 / (1.0 + mu),
                _ => 1.0,
            },
            Params::Oun(p) => 1.0 / (1.0 + p.gamma + p.big_gamma),
        }
    }

    fn scan_points(&self, lo: f64, hi: f64) -> usize {
        let wanted = match self.params {
            Params::Rtn(p) => match p.branch() {
                // 40 samples per oscillation of cos(μν).
                RtnBranch::Oscillating { mu } => {
                    (40.0 * mu * (hi - lo) / std::f64::consts::TAU).ceil() as usize
                }
                _ => 0,
            },
            Params::Oun(_) => 0,
        };
        wanted.clamp(DEFAULT_SCAN_POINTS, MAX_SCAN_POINTS)
    }

    /// Five-point centered derivative of K₃ in the natural variable.
    pub fn k3_derivative_fd(&self, x: f64) -> f64 {
        let h = (1e-3 * self.scale()).min(0.25 * x.abs()).max(f64::EPSILON * x.abs());
        let f = |y: f64| self.k3_native(y);
        (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
    }

    fn is_maximum(&self, x: f64) -> bool {
        let d = (1e-2 * self.scale()).min(0.5 * x.abs());
        let f0 = self.k3_native(x);
        self.k3_native(x - d) + self.k3_native(x + d) - 2.0 * f0 < 0.0
    }

    fn make_root(&self, family: RootFamily, x: f64) -> ExtremumRoot {
        let residual = match (family, self.params) {
            (RootFamily::SinZero, Params::Rtn(p)) => match p.branch() {
                RtnBranch::Oscillating { mu } => (mu * x).sin().abs(),
                _ => 0.0,
            },
            _ => self.residual(x),
        };
        let dk3 = self.k3_derivative_fd(x);
        ExtremumRoot {
            family,
            dt: self.to_time(x),
            nu: matches!(self.params, Params::Rtn(_)).then_some(x),
            residual,
            k3: self.k3_native(x),
            dk3,
            is_maximum: self.is_maximum(x),
            stationary: dk3.abs() < STATIONARITY_TOL,
        }
    }
}

/// ln F(Δt) = ln(1 + e^{−γΔt}) + ln q(2Δt) − ln q(Δt)
fn oun_log_f(p: &OunParams, dt: f64) -> f64 {
    (-p.gamma * dt).exp().ln_1p() + p.log_q(2.0 * dt) - p.log_q(dt)
}

/// All stationary points of K₃ with raw time separation in `bracket`.
///
/// Returns an empty list for an empty bracket or when the condition has no
/// sign change inside it. Roots are sorted by Δt.
pub fn solve_extremum(cond: &ExtremumCondition, bracket: (f64, f64)) -> Result<Vec<ExtremumRoot>> {
    let (lo_t, hi_t) = bracket;
    if !(lo_t.is_finite() && hi_t.is_finite()) || lo_t < 0.0 {
        return Err(LgError::InvalidBracket { lo: lo_t, hi: hi_t });
    }
    if hi_t <= lo_t {
        return Ok(Vec::new());
    }
    let (lo, hi) = (cond.to_native(lo_t), cond.to_native(hi_t));
    let gap = |x: f64| cond.log_lhs_or_gap(x).0;
    let mut roots: Vec<ExtremumRoot> = find_roots(gap, lo, hi, cond.scan_points(lo, hi))
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| cond.make_root(RootFamily::Condition, x))
        .collect();

    if let Params::Rtn(p) = cond.params {
        if let RtnBranch::Oscillating { mu } = p.branch() {
            let step = std::f64::consts::PI / mu;
            let first = (lo / step).ceil().max(1.0) as u64;
            let last = (hi / step).floor() as u64;
            for k in first..=last {
                roots.push(cond.make_root(RootFamily::SinZero, k as f64 * step));
            }
        }
    }
    roots.sort_by(|a, b| a.dt.total_cmp(&b.dt));
    Ok(roots)
}
