//! Dephasing noise models: random telegraph noise (RTN), Ornstein-Uhlenbeck
//! noise (OUN), and noiseless unitary precession as a baseline.
//!
//! Every channel here is a pure dephasing in the σ_z basis: populations are
//! fixed and the coherence ⟨0|ρ|1⟩ is multiplied by a decoherence factor
//! D(t). For RTN D = Λ(γt), for OUN D = q(t), and for unitary precession
//! the coherence is rotated by e^{−iΩt} (so the real factor seen by the
//! correlators is cos Ωt).
//!
//! Time is a raw non-negative real in the channel's own units. RTN is
//! naturally expressed through the dimensionless ν = γt; helpers accept
//! either.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LgError, Result};
use crate::qubit::{ComplexMat2, KrausSet, C64};

/// Random telegraph noise with coupling `a` and switching rate
/// `gamma` = 1/(2τ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RtnParams {
    pub a: f64,
    pub gamma: f64,
}

/// Ornstein-Uhlenbeck noise with relaxation rate `big_gamma` (Γ) and
/// bandwidth `gamma` (γ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OunParams {
    pub big_gamma: f64,
    pub gamma: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(LgError::InvalidParams(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Which closed form Λ takes for given RTN parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RtnBranch {
    /// 4aτ > 1: μ real, Λ oscillates.
    Oscillating { mu: f64 },
    /// 4aτ < 1: μ = iμ₀, Λ decays monotonically.
    Damped { mu0: f64 },
    /// 4aτ = 1: μ = 0, Λ = e^{−ν}(1 + ν).
    Critical,
}

impl RtnParams {
    pub fn new(a: f64, gamma: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("gamma", gamma)?;
        Ok(Self { a, gamma })
    }

    /// Parameterizes by the correlation time τ, γ = 1/(2τ).
    pub fn from_tau(a: f64, tau: f64) -> Result<Self> {
        check_positive("tau", tau)?;
        Self::new(a, 1.0 / (2.0 * tau))
    }

    /// Chooses `a` so that μ takes the given non-negative real value at
    /// switching rate `gamma`.
    pub fn from_mu(mu: f64, gamma: f64) -> Result<Self> {
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(LgError::InvalidParams(format!("mu must be >= 0, got {mu}")));
        }
        Self::new(0.5 * gamma * mu.hypot(1.0), gamma)
    }

    pub fn tau(&self) -> f64 {
        0.5 / self.gamma
    }

    /// 4aτ = 2a/γ.
    pub fn coupling_ratio(&self) -> f64 {
        2.0 * self.a / self.gamma
    }

    pub fn nu(&self, t: f64) -> f64 {
        self.gamma * t
    }

    pub fn branch(&self) -> RtnBranch {
        let c = self.coupling_ratio();
        let d = (c - 1.0) * (c + 1.0);
        if d > 0.0 {
            RtnBranch::Oscillating { mu: d.sqrt() }
        } else if d < 0.0 {
            RtnBranch::Damped { mu0: (-d).sqrt() }
        } else {
            RtnBranch::Critical
        }
    }

    /// Λ(ν) = e^{−ν}[cos μν + sin(μν)/μ], continued analytically through
    /// μ = 0 to the cosh/sinh form for imaginary μ.
    pub fn lambda_at_nu(&self, nu: f64) -> f64 {
        match self.branch() {
            RtnBranch::Oscillating { mu } => {
                let x = mu * nu;
                (-nu).exp() * (x.cos() + nu * sinc(x))
            }
            RtnBranch::Critical => (-nu).exp() * (1.0 + nu),
            RtnBranch::Damped { mu0 } => {
                let x = mu0 * nu;
                if x <= 1.0 {
                    (-nu).exp() * (x.cosh() + nu * sinhc(x))
                } else {
                    let (slow, fast) = self.damped_rates(mu0, nu);
                    0.5 * (slow + fast) + 0.5 * (slow - fast) / mu0
                }
            }
        }
    }

    /// dΛ/dν = −(1 + μ²) e^{−ν} sin(μν)/μ, with 1 + μ² = (4aτ)².
    pub fn lambda_derivative_at_nu(&self, nu: f64) -> f64 {
        let c2 = self.coupling_ratio().powi(2);
        match self.branch() {
            RtnBranch::Oscillating { mu } => -c2 * (-nu).exp() * nu * sinc(mu * nu),
            RtnBranch::Critical => -c2 * (-nu).exp() * nu,
            RtnBranch::Damped { mu0 } => {
                let x = mu0 * nu;
                if x <= 1.0 {
                    -c2 * (-nu).exp() * nu * sinhc(x)
                } else {
                    let (slow, fast) = self.damped_rates(mu0, nu);
                    -c2 * 0.5 * (slow - fast) / mu0
                }
            }
        }
    }

    /// (e^{−(1−μ₀)ν}, e^{−(1+μ₀)ν}), with 1 − μ₀ computed without
    /// cancellation as (4aτ)²/(1 + μ₀).
    fn damped_rates(&self, mu0: f64, nu: f64) -> (f64, f64) {
        let slow_rate = self.coupling_ratio().powi(2) / (1.0 + mu0);
        ((-slow_rate * nu).exp(), (-(1.0 + mu0) * nu).exp())
    }
}

/// sin(x)/x
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// sinh(x)/x
fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    }
}

impl OunParams {
    pub fn new(big_gamma: f64, gamma: f64) -> Result<Self> {
        check_positive("Gamma", big_gamma)?;
        check_positive("gamma", gamma)?;
        Ok(Self { big_gamma, gamma })
    }

    /// t + (e^{−γt} − 1)/γ, the integrated correlation time.
    pub(crate) fn memory_integral(&self, t: f64) -> f64 {
        let x = self.gamma * t;
        if x < 1e-3 {
            // x + expm1(−x) = x²/2 − x³/6 + x⁴/24 − x⁵/120 + ...
            let x2 = x * x;
            x2 * (0.5 - x / 6.0 + x2 / 24.0 - x2 * x / 120.0) / self.gamma
        } else {
            t + (-x).exp_m1() / self.gamma
        }
    }

    /// ln q(t)
    pub fn log_q(&self, t: f64) -> f64 {
        -0.5 * self.big_gamma * self.memory_integral(t)
    }

    pub fn q(&self, t: f64) -> f64 {
        self.log_q(t).exp()
    }
}

/// μ = √((4aτ)² − 1): real in the oscillating regime, iμ₀ otherwise.
pub fn mu(p: &RtnParams) -> C64 {
    match p.branch() {
        RtnBranch::Oscillating { mu } => C64::new(mu, 0.0),
        RtnBranch::Damped { mu0 } => C64::new(0.0, mu0),
        RtnBranch::Critical => C64::new(0.0, 0.0),
    }
}

/// Λ at raw time `t` (ν = γt).
pub fn lambda_rtn(p: &RtnParams, t: f64) -> f64 {
    p.lambda_at_nu(p.nu(t))
}

/// q(t) = exp[−(Γ/2)(t + (e^{−γt} − 1)/γ)]
pub fn q_oun(p: &OunParams, t: f64) -> f64 {
    p.q(t)
}

/// {√((1+Λ)/2) I, √((1−Λ)/2) σ_z}
pub fn kraus_rtn(p: &RtnParams, t: f64) -> KrausSet {
    let l = lambda_rtn(p, t);
    let kp = (0.5 * (1.0 + l)).max(0.0).sqrt();
    let km = (0.5 * (1.0 - l)).max(0.0).sqrt();
    KrausSet::from_operators_unchecked(vec![
        ComplexMat2::identity() * kp,
        ComplexMat2::sigma_z() * km,
    ])
}

/// {|0⟩⟨0| + q|1⟩⟨1|, √(1−q²)|1⟩⟨1|}
pub fn kraus_oun(p: &OunParams, t: f64) -> KrausSet {
    let q = q_oun(p, t);
    let r = (1.0 - q * q).max(0.0).sqrt();
    KrausSet::from_operators_unchecked(vec![
        ComplexMat2::from_real(1.0, 0.0, 0.0, q),
        ComplexMat2::from_real(0.0, 0.0, 0.0, r),
    ])
}

/// exp(−iΩtσ_z/2)
pub fn kraus_unitary(omega: f64, t: f64) -> KrausSet {
    let half = 0.5 * omega * t;
    KrausSet::from_operators_unchecked(vec![ComplexMat2::diag(
        C64::from_polar(1.0, -half),
        C64::from_polar(1.0, half),
    )])
}

/// Memory classification of a channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeTag {
    Markovian,
    NonMarkovian,
    /// OUN with 1 ≤ γ/Γ < 100: no sharp boundary is available.
    Intermediate,
    /// Noiseless precession.
    Unitary,
}

impl RegimeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::Markovian => "markovian",
            RegimeTag::NonMarkovian => "non-markovian",
            RegimeTag::Intermediate => "intermediate",
            RegimeTag::Unitary => "unitary",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegimeTag {
    type Err = LgError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markovian" => Ok(RegimeTag::Markovian),
            "non-markovian" => Ok(RegimeTag::NonMarkovian),
            "intermediate" => Ok(RegimeTag::Intermediate),
            "unitary" => Ok(RegimeTag::Unitary),
            other => Err(LgError::InvalidParams(format!("unknown regime '{other}'"))),
        }
    }
}

/// OUN bandwidth ratios γ/Γ below this are flagged non-Markovian.
pub const OUN_NON_MARKOVIAN_BELOW: f64 = 1.0;
/// OUN bandwidth ratios γ/Γ at or above this are flagged Markovian.
pub const OUN_MARKOVIAN_FROM: f64 = 100.0;

/// A dephasing channel acting between measurements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseChannel {
    Rtn(RtnParams),
    Oun(OunParams),
    Unitary { omega: f64 },
}

impl NoiseChannel {
    pub fn rtn(a: f64, gamma: f64) -> Result<Self> {
        RtnParams::new(a, gamma).map(NoiseChannel::Rtn)
    }

    pub fn oun(big_gamma: f64, gamma: f64) -> Result<Self> {
        OunParams::new(big_gamma, gamma).map(NoiseChannel::Oun)
    }

    pub fn unitary(omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(LgError::InvalidParams(format!("Omega must be finite, got {omega}")));
        }
        Ok(NoiseChannel::Unitary { omega })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            NoiseChannel::Rtn(_) => "rtn",
            NoiseChannel::Oun(_) => "oun",
            NoiseChannel::Unitary { .. } => "unitary",
        }
    }

    /// The two defining parameters in a fixed order: (a, γ) for RTN,
    /// (Γ, γ) for OUN, (Ω, 0) for unitary.
    pub fn parameters(&self) -> (f64, f64) {
        match *self {
            NoiseChannel::Rtn(p) => (p.a, p.gamma),
            NoiseChannel::Oun(p) => (p.big_gamma, p.gamma),
            NoiseChannel::Unitary { omega } => (omega, 0.0),
        }
    }

    pub fn from_parameters(kind: &str, first: f64, second: f64) -> Result<Self> {
        match kind {
            "rtn" => Self::rtn(first, second),
            "oun" => Self::oun(first, second),
            "unitary" => Self::unitary(first),
            other => Err(LgError::InvalidParams(format!("unknown channel '{other}'"))),
        }
    }

    /// Kraus operators for evolution over an interval of length `t`.
    pub fn kraus(&self, t: f64) -> KrausSet {
        match self {
            NoiseChannel::Rtn(p) => kraus_rtn(p, t),
            NoiseChannel::Oun(p) => kraus_oun(p, t),
            NoiseChannel::Unitary { omega } => kraus_unitary(*omega, t),
        }
    }

    /// Real factor D(t) multiplying sin²θ in the two-time correlator.
    pub fn decoherence(&self, t: f64) -> f64 {
        match self {
            NoiseChannel::Rtn(p) => lambda_rtn(p, t),
            NoiseChannel::Oun(p) => q_oun(p, t),
            NoiseChannel::Unitary { omega } => (omega * t).cos(),
        }
    }

    pub fn regime(&self) -> RegimeTag {
        classify_regime(self)
    }
}

/// RTN is non-Markovian iff 4aτ > 1 (some dΛ/dν > 0); the boundary
/// 4aτ = 1 is Markovian. OUN uses the bandwidth ratio γ/Γ with an
/// intermediate band between the thresholds.
pub fn classify_regime(channel: &NoiseChannel) -> RegimeTag {
    match channel {
        NoiseChannel::Rtn(p) => match p.branch() {
            RtnBranch::Oscillating { .. } => RegimeTag::NonMarkovian,
            _ => RegimeTag::Markovian,
        },
        NoiseChannel::Oun(p) => {
            let ratio = p.gamma / p.big_gamma;
            if ratio < OUN_NON_MARKOVIAN_BELOW {
                RegimeTag::NonMarkovian
            } else if ratio >= OUN_MARKOVIAN_FROM {
                RegimeTag::Markovian
            } else {
                RegimeTag::Intermediate
            }
        }
        NoiseChannel::Unitary { .. } => RegimeTag::Unitary,
    }
}
