//! Two-time correlators and Leggett-Garg parameters.
//!
//! Three routes to C_ij = ⟨Q(t_i)Q(t_j)⟩ are provided:
//!
//! * [`correlator_chain`] runs the sequential-measurement experiment
//!   explicitly: evolve, project, renormalize, evolve, project, and sums
//!   a·b·p(a)·q(b|a) over the four outcome branches. This is the reference.
//! * [`correlator_expansion`] evaluates 1 − 2p₊(tᵢ) − 2p₊(tⱼ) + 4 Re g,
//!   where p₊(tⱼ) is the probability of "+" at tⱼ *without* the earlier
//!   measurement and g = Tr{Π⁺ Σ K Π⁺ρ(tᵢ) K†}.
//! * [`correlator_closed`] is cos²θ + sin²θ·D(tⱼ − tᵢ), with D the
//!   channel's decoherence factor.
//!
//! Zero-probability branches at tᵢ contribute nothing: their weight
//! p(a)·q(b|a) tends to zero with p(a) since q is bounded.

use serde::{Deserialize, Serialize};

use crate::error::{LgError, Result};
use crate::noise::{NoiseChannel, RegimeTag};
use crate::qubit::{apply_channel, measure, observable, DensityMatrix, Observable, Projector};

/// Measurement angles defining O(θ, φ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementSetting {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn observable(&self) -> Observable {
        observable(self.theta, self.phi)
    }
}

fn check_times(ti: f64, tj: f64) -> Result<()> {
    if !(ti.is_finite() && tj.is_finite()) || ti < 0.0 || tj < ti {
        return Err(LgError::InvalidTimes(format!(
            "need 0 <= ti <= tj, got ti={ti}, tj={tj}"
        )));
    }
    Ok(())
}

/// C_ij from the explicit measurement chain, with the system prepared in
/// `rho0` at time 0.
pub fn correlator_chain(
    channel: &NoiseChannel,
    setting: &MeasurementSetting,
    rho0: &DensityMatrix,
    ti: f64,
    tj: f64,
) -> Result<f64> {
    check_times(ti, tj)?;
    let obs = setting.observable();
    let rho_i = apply_channel(rho0, &channel.kraus(ti))?;
    let between = channel.kraus(tj - ti);
    let branches: [(f64, &Projector); 2] = [(1.0, &obs.plus), (-1.0, &obs.minus)];

    let mut c = 0.0;
    for (a, pa) in branches {
        let first = match measure(&rho_i, pa) {
            Ok(out) => out,
            Err(LgError::ZeroProbability) => continue,
            Err(e) => return Err(e),
        };
        let rho_j = apply_channel(&first.post_state, &between)?;
        for (b, pb) in branches {
            let q = pb.probability(rho_j.matrix());
            c += a * b * first.probability * q;
        }
    }
    Ok(c)
}

/// C_ij = 1 − 2p₊(tᵢ) − 2p₊(tⱼ) + 4 Re g(tᵢ, tⱼ).
pub fn correlator_expansion(
    channel: &NoiseChannel,
    setting: &MeasurementSetting,
    rho0: &DensityMatrix,
    ti: f64,
    tj: f64,
) -> Result<f64> {
    check_times(ti, tj)?;
    let obs = setting.observable();
    let plus = obs.plus.matrix();
    let rho_i = apply_channel(rho0, &channel.kraus(ti))?;
    let between = channel.kraus(tj - ti);
    let p_i = obs.plus.probability(rho_i.matrix());
    let rho_j = apply_channel(&rho_i, &between)?;
    let p_j = obs.plus.probability(rho_j.matrix());
    let g = (*plus * between.apply_to(&(*plus * *rho_i.matrix()))).trace();
    Ok(1.0 - 2.0 * p_i - 2.0 * p_j + 4.0 * g.re)
}

/// cos²θ + sin²θ·D(tⱼ − tᵢ)
pub fn correlator_closed(channel: &NoiseChannel, theta: f64, ti: f64, tj: f64) -> Result<f64> {
    check_times(ti, tj)?;
    Ok(closed_form(channel, theta, tj - ti))
}

fn closed_form(channel: &NoiseChannel, theta: f64, dt: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    c * c + s * s * channel.decoherence(dt)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorTriple {
    pub c01: f64,
    pub c12: f64,
    pub c02: f64,
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
}

impl CorrelatorTriple {
    pub fn closed(channel: &NoiseChannel, theta: f64, t0: f64, t1: f64, t2: f64) -> Result<Self> {
        Ok(Self {
            c01: correlator_closed(channel, theta, t0, t1)?,
            c12: correlator_closed(channel, theta, t1, t2)?,
            c02: correlator_closed(channel, theta, t0, t2)?,
            t0,
            t1,
            t2,
        })
    }

    pub fn chain(
        channel: &NoiseChannel,
        setting: &MeasurementSetting,
        rho0: &DensityMatrix,
        t0: f64,
        t1: f64,
        t2: f64,
    ) -> Result<Self> {
        Ok(Self {
            c01: correlator_chain(channel, setting, rho0, t0, t1)?,
            c12: correlator_chain(channel, setting, rho0, t1, t2)?,
            c02: correlator_chain(channel, setting, rho0, t0, t2)?,
            t0,
            t1,
            t2,
        })
    }

    /// C01 + C12 − C02
    pub fn k3(&self) -> f64 {
        self.c01 + self.c12 - self.c02
    }

    /// −C01 − C12 − C02
    pub fn k3_prime(&self) -> f64 {
        -self.c01 - self.c12 - self.c02
    }
}

/// LG parameters for equally spaced measurements t₀ = 0, t₁ = Δt, t₂ = 2Δt.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LGResult {
    pub dt: f64,
    pub theta: f64,
    pub phi: f64,
    pub triple: CorrelatorTriple,
    pub k3: f64,
    pub k3_prime: f64,
    pub regime: RegimeTag,
}

impl LGResult {
    pub fn from_triple(
        triple: CorrelatorTriple,
        setting: &MeasurementSetting,
        regime: RegimeTag,
    ) -> Self {
        Self {
            dt: triple.t1 - triple.t0,
            theta: setting.theta,
            phi: setting.phi,
            triple,
            k3: triple.k3(),
            k3_prime: triple.k3_prime(),
            regime,
        }
    }
}

/// K₃ and K₃′ from the closed-form correlators. Requires Δt > 0.
pub fn k3(channel: &NoiseChannel, setting: &MeasurementSetting, dt: f64) -> Result<LGResult> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(LgError::InvalidTimes(format!("dt must be positive, got {dt}")));
    }
    let triple = CorrelatorTriple::closed(channel, setting.theta, 0.0, dt, 2.0 * dt)?;
    Ok(LGResult::from_triple(triple, setting, channel.regime()))
}

/// K₃ as in [`k3`], through the measurement chain from `rho0`.
pub fn k3_by_chain(
    channel: &NoiseChannel,
    setting: &MeasurementSetting,
    rho0: &DensityMatrix,
    dt: f64,
) -> Result<LGResult> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(LgError::InvalidTimes(format!("dt must be positive, got {dt}")));
    }
    let triple = CorrelatorTriple::chain(channel, setting, rho0, 0.0, dt, 2.0 * dt)?;
    Ok(LGResult::from_triple(triple, setting, channel.regime()))
}

/// cos²θ + sin²θ·[2D(Δt) − D(2Δt)], the scalar behind [`k3`].
pub fn k3_value(channel: &NoiseChannel, theta: f64, dt: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    c * c + s * s * (2.0 * channel.decoherence(dt) - channel.decoherence(2.0 * dt))
}

/// −3cos²θ − sin²θ·[2D(Δt) + D(2Δt)], the scalar behind K₃′.
pub fn k3_prime_value(channel: &NoiseChannel, theta: f64, dt: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    -3.0 * c * c - s * s * (2.0 * channel.decoherence(dt) + channel.decoherence(2.0 * dt))
}

/// 2cos(ΩΔt) − cos(2ΩΔt)
pub fn k3_unitary(omega: f64, dt: f64) -> f64 {
    let x = omega * dt;
    2.0 * x.cos() - (2.0 * x).cos()
}
