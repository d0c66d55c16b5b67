//! Grid sweeps of K₃ over (Δt, θ, φ).

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditions::ExtremumCondition;
use super::roots::{find_roots, golden_section_max};
use crate::correlators::{k3, k3_prime_value, k3_value, LGResult, MeasurementSetting};
use crate::error::{LgError, Result};
use crate::noise::NoiseChannel;

/// K₃ counts as violating only above 1 + VIOLATION_MARGIN.
pub const VIOLATION_MARGIN: f64 = 1e-12;

const POLISH_TOL: f64 = 1e-10;

/// Evenly spaced sample points along one axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
    /// Exclude `start` itself: points are start + (end − start)·k/steps
    /// for k = 1..=steps.
    pub left_open: bool,
}

impl GridAxis {
    /// `steps` points covering [start, end] inclusive.
    pub fn closed(start: f64, end: f64, steps: usize) -> Self {
        Self { start, end, steps, left_open: false }
    }

    /// `steps` points covering (start, end].
    pub fn left_open(start: f64, end: f64, steps: usize) -> Self {
        Self { start, end, steps, left_open: true }
    }

    pub fn point(v: f64) -> Self {
        Self::closed(v, v, 1)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if self.steps == 0 {
            return Err(LgError::InvalidGrid(format!("{name}: no points")));
        }
        if !(self.start.is_finite() && self.end.is_finite()) || self.end < self.start {
            return Err(LgError::InvalidGrid(format!(
                "{name}: bad range [{}, {}]",
                self.start, self.end
            )));
        }
        if self.steps > 1 && self.end == self.start && !self.left_open {
            return Err(LgError::InvalidGrid(format!("{name}: empty range with {} steps", self.steps)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.steps;
        let span = self.end - self.start;
        if self.left_open {
            (1..=n)
                .map(|k| if k == n { self.end } else { self.start + span * k as f64 / n as f64 })
                .collect()
        } else if n == 1 {
            vec![self.start]
        } else {
            (0..n)
                .map(|k| if k == n - 1 { self.end } else { self.start + span * k as f64 / (n - 1) as f64 })
                .collect()
        }
    }

    /// Lower edge used when polishing around the first point.
    fn floor(&self) -> f64 {
        self.start
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dt: GridAxis,
    pub theta: GridAxis,
    pub phi: GridAxis,
}

impl GridSpec {
    pub fn new(dt: GridAxis, theta: GridAxis, phi: GridAxis) -> Self {
        Self { dt, theta, phi }
    }

    /// Δt sweep at fixed θ = π/2, φ = 0.
    pub fn equatorial(dt: GridAxis) -> Self {
        Self::new(dt, GridAxis::point(FRAC_PI_2), GridAxis::point(0.0))
    }

    pub fn validate(&self) -> Result<()> {
        self.dt.validate("dt")?;
        self.theta.validate("theta")?;
        self.phi.validate("phi")?;
        if self.dt.points().iter().any(|&t| !(t > 0.0)) {
            return Err(LgError::InvalidGrid("dt: all points must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dt.steps * self.theta.steps * self.phi.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A maximum of K₃ along Δt, polished between neighbouring grid points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxPoint {
    pub dt: f64,
    pub theta: f64,
    pub phi: f64,
    pub k3: f64,
    /// The maximum lies on the first or last Δt of the grid and need not
    /// be a stationary point.
    pub boundary: bool,
    /// |LHS − 1| of the extremum condition at `dt`, for interior maxima of
    /// channels that have one.
    pub condition_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: GridSpec,
    /// One record per grid cell, θ outermost then φ then Δt.
    pub records: Vec<LGResult>,
    /// Largest K₃ found, after polishing.
    pub best: MaxPoint,
    /// Local maxima along Δt on the (θ, φ) line holding the best cell.
    pub maxima: Vec<MaxPoint>,
    /// Records with K₃ > 1 + [`VIOLATION_MARGIN`].
    pub violation_count: usize,
}

/// Evaluates K₃ on every grid cell and polishes the maxima along Δt.
///
/// Cells are evaluated in parallel; the record order is fixed by the grid.
pub fn max_k3(channel: &NoiseChannel, grid: &GridSpec) -> Result<SweepReport> {
    grid.validate()?;
    let dts = grid.dt.points();
    let thetas = grid.theta.points();
    let phis = grid.phi.points();
    let (n_dt, n_phi) = (dts.len(), phis.len());

    let records: Vec<LGResult> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let theta = thetas[idx / (n_phi * n_dt)];
            let phi = phis[(idx / n_dt) % n_phi];
            k3(channel, &MeasurementSetting::new(theta, phi), dts[idx % n_dt])
        })
        .collect::<Result<_>>()?;

    let best_idx = records
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.k3 > records[b].k3 { i } else { b });
    let line_start = best_idx - best_idx % n_dt;
    let line = &records[line_start..line_start + n_dt];
    let (theta, phi) = (line[0].theta, line[0].phi);

    let condition = ExtremumCondition::for_channel(channel)
        .ok()
        .filter(|_| theta.sin().abs() > 1e-8);
    let maxima: Vec<MaxPoint> = local_max_indices(line)
        .into_iter()
        .map(|i| {
            let lo = if i == 0 { grid.dt.floor() } else { dts[i - 1] };
            let hi = if i + 1 == n_dt { dts[i] } else { dts[i + 1] };
            let boundary = i == 0 || i + 1 == n_dt;
            let cond = condition.as_ref().filter(|_| !boundary);
            let mut m = polish(channel, cond, theta, phi, lo, hi, &line[i]);
            m.boundary = boundary;
            m
        })
        .collect();

    let grid_best = MaxPoint {
        dt: records[best_idx].dt,
        theta,
        phi,
        k3: records[best_idx].k3,
        boundary: false,
        condition_residual: None,
    };
    let best = maxima
        .iter()
        .copied()
        .fold(grid_best, |b, m| if m.k3 > b.k3 { m } else { b });
    let violation_count = records.iter().filter(|r| r.k3 > 1.0 + VIOLATION_MARGIN).count();

    Ok(SweepReport {
        grid: *grid,
        records,
        best,
        maxima,
        violation_count,
    })
}

fn local_max_indices(line: &[LGResult]) -> Vec<usize> {
    let n = line.len();
    (0..n)
        .filter(|&i| {
            let rises = i == 0 || line[i].k3 > line[i - 1].k3;
            let holds = i + 1 == n || line[i].k3 >= line[i + 1].k3;
            rises && holds
        })
        .collect()
}

fn polish(
    channel: &NoiseChannel,
    condition: Option<&ExtremumCondition>,
    theta: f64,
    phi: f64,
    lo: f64,
    hi: f64,
    at: &LGResult,
) -> MaxPoint {
    let f = |t: f64| k3_value(channel, theta, t);
    let (mut dt, mut val) = golden_section_max(f, lo, hi, POLISH_TOL);
    if at.k3 > val {
        (dt, val) = (at.dt, at.k3);
    }
    let mut condition_residual = None;
    if let Some(cond) = condition {
        // Snap to the condition root when the cell holds exactly one.
        let (x_lo, x_hi) = (cond.to_native(lo), cond.to_native(hi));
        let roots = find_roots(|x| cond.signed_gap(x), x_lo, x_hi, 64);
        if let [x] = roots[..] {
            let t = cond.to_time(x);
            let v = f(t);
            if v >= val - 1e-12 && x > 0.0 {
                dt = t;
                val = v;
            }
        }
        condition_residual = Some(cond.residual(cond.to_native(dt)));
    }
    MaxPoint {
        dt,
        theta,
        phi,
        k3: val,
        boundary: false,
        condition_residual,
    }
}

/// Maximal runs of consecutive grid points where `pred` holds, as
/// (first, last) index pairs.
pub fn count_intervals(values: &[f64], pred: impl Fn(f64) -> bool) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut open: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match (pred(v), open) {
            (true, None) => open = Some(i),
            (false, Some(s)) => {
                runs.push((s, i - 1));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(s) = open {
        runs.push((s, values.len() - 1));
    }
    runs
}

/// Violation regions of K₃ and K₃′ along Δt at θ = π/2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Census {
    /// Number of maximal Δt intervals with K₃ > 1.
    pub count_k3: usize,
    /// Number of maximal Δt intervals with K₃′ > 1.
    pub count_k3_prime: usize,
    /// Whether some grid Δt has both K₃ > 1 and K₃′ > 1.
    pub overlap: bool,
    /// (first Δt, last Δt) of each K₃ violation interval.
    pub k3_intervals: Vec<(f64, f64)>,
    pub k3_prime_intervals: Vec<(f64, f64)>,
}

pub fn violation_census(channel: &NoiseChannel, dt: &GridAxis) -> Result<Census> {
    dt.validate("dt")?;
    let ts = dt.points();
    let theta = FRAC_PI_2;
    let k: Vec<f64> = ts.par_iter().map(|&t| k3_value(channel, theta, t)).collect();
    let kp: Vec<f64> = ts.par_iter().map(|&t| k3_prime_value(channel, theta, t)).collect();
    let violates = |v: f64| v > 1.0 + VIOLATION_MARGIN;
    let to_times = |runs: Vec<(usize, usize)>| -> Vec<(f64, f64)> {
        runs.into_iter().map(|(a, b)| (ts[a], ts[b])).collect()
    };
    let k3_intervals = to_times(count_intervals(&k, violates));
    let k3_prime_intervals = to_times(count_intervals(&kp, violates));
    Ok(Census {
        count_k3: k3_intervals.len(),
        count_k3_prime: k3_prime_intervals.len(),
        overlap: k.iter().zip(&kp).any(|(&a, &b)| violates(a) && violates(b)),
        k3_intervals,
        k3_prime_intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extrema::{solve_extremum, RootFamily};
    use crate::noise::RtnParams;
    use std::f64::consts::{FRAC_PI_3, PI};

    #[test]
    fn axis_points() {
        assert_eq!(GridAxis::left_open(0.0, 3.0, 3).points(), vec![1.0, 2.0, 3.0]);
        assert_eq!(GridAxis::closed(-1.0, 1.0, 3).points(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(GridAxis::point(0.5).points(), vec![0.5]);
        assert!(GridAxis::closed(1.0, 0.0, 3).validate("x").is_err());
        assert!(GridAxis::closed(1.0, 1.0, 3).validate("x").is_err());
        assert!(GridAxis::closed(0.0, 1.0, 0).validate("x").is_err());
        let g = GridSpec::equatorial(GridAxis::closed(0.0, 1.0, 5));
        assert!(matches!(g.validate(), Err(LgError::InvalidGrid(_))));
    }

    #[test]
    fn intervals() {
        let v = [0.0, 2.0, 2.0, 0.0, 3.0, 0.0, 5.0];
        assert_eq!(count_intervals(&v, |x| x > 1.0), vec![(1, 2), (4, 4), (6, 6)]);
        assert!(count_intervals(&[], |x: f64| x > 1.0).is_empty());
    }

    #[test]
    fn unitary_peak_is_quantum_bound() {
        let ch = NoiseChannel::unitary(1.0).unwrap();
        let report = max_k3(&ch, &GridSpec::equatorial(GridAxis::left_open(0.0, 2.0, 97))).unwrap();
        assert!((report.best.k3 - 1.5).abs() < 1e-9);
        assert!((report.best.dt - FRAC_PI_3).abs() < 1e-4);
        assert_eq!(report.records.len(), 97);
    }

    #[test]
    fn record_order_is_theta_phi_dt() {
        let ch = NoiseChannel::oun(0.1, 0.01).unwrap();
        let grid = GridSpec::new(
            GridAxis::left_open(0.0, 3.0, 3),
            GridAxis::closed(0.0, 1.0, 2),
            GridAxis::closed(-0.5, 0.5, 2),
        );
        let r = max_k3(&ch, &grid).unwrap();
        let keys: Vec<(f64, f64, f64)> = r.records.iter().map(|x| (x.theta, x.phi, x.dt)).collect();
        assert_eq!(keys[0], (0.0, -0.5, 1.0));
        assert_eq!(keys[2], (0.0, -0.5, 3.0));
        assert_eq!(keys[3], (0.0, 0.5, 1.0));
        assert_eq!(keys[6], (1.0, -0.5, 1.0));
    }

    #[test]
    fn polished_maxima_agree_with_condition_roots() {
        let ch = NoiseChannel::rtn(0.05, 0.001).unwrap();
        let axis = GridAxis::left_open(0.0, 600.0, 3000);
        let report = max_k3(&ch, &GridSpec::equatorial(axis)).unwrap();
        let cond = ExtremumCondition::for_channel(&ch).unwrap();
        let roots: Vec<f64> = solve_extremum(&cond, (0.0, 600.0))
            .unwrap()
            .into_iter()
            .filter(|r| r.family == RootFamily::Condition)
            .map(|r| r.dt)
            .collect();
        assert!(report.maxima.len() > 5);
        let resolution = 600.0 / 3000.0;
        for m in report.maxima.iter().filter(|m| !m.boundary) {
            let nearest = roots.iter().map(|r| (r - m.dt).abs()).fold(f64::MAX, f64::min);
            assert!(nearest < resolution + POLISH_TOL, "{m:?}");
            assert!(m.condition_residual.unwrap() < 1e-9, "{m:?}");
        }
    }

    #[test]
    fn large_mu_approaches_quantum_bound() {
        let p = RtnParams::from_mu(1000.0, 0.001).unwrap();
        let ch = NoiseChannel::Rtn(p);
        // ν ∈ (0, 0.02]: the first few oscillations.
        let report = max_k3(&ch, &GridSpec::equatorial(GridAxis::left_open(0.0, 20.0, 4000))).unwrap();
        assert!(report.best.k3 >= 1.49 && report.best.k3 <= 1.5 + 1e-9, "{:?}", report.best);
    }

    #[test]
    fn argmax_theta_on_equator() {
        let ch = NoiseChannel::rtn(0.05, 0.001).unwrap();
        let grid = GridSpec::new(
            GridAxis::left_open(0.0, 100.0, 200),
            GridAxis::closed(-PI, PI, 73),
            GridAxis::closed(-FRAC_PI_2, FRAC_PI_2, 5),
        );
        let r = max_k3(&ch, &grid).unwrap();
        assert!((r.best.theta.abs() - FRAC_PI_2).abs() < 1e-12, "{:?}", r.best);
    }

    #[test]
    fn oun_markovian_excess_is_bounded_by_white_noise_offset() {
        // For γΔt ≫ 1, q(t) ≈ e^{Γ/2γ}·e^{−Γt/2}, so K₃ ≤ e^{Γ/2γ} up to
        // transients; the excess is tiny compared with the non-Markovian case.
        let m = NoiseChannel::oun(0.1, 100.0).unwrap();
        let nm = NoiseChannel::oun(0.1, 0.01).unwrap();
        let axis = GridAxis::left_open(0.0, 100.0, 20_000);
        let best_m = max_k3(&m, &GridSpec::equatorial(axis)).unwrap().best.k3;
        let best_nm = max_k3(&nm, &GridSpec::equatorial(axis)).unwrap().best.k3;
        assert!(best_m <= (0.1f64 / 200.0).exp() + 1e-12);
        assert!(best_nm - 1.0 > 100.0 * (best_m - 1.0));
    }

    #[test]
    fn census_examples() {
        let nm = NoiseChannel::rtn(0.05, 0.001).unwrap();
        let c = violation_census(&nm, &GridAxis::left_open(0.0, 3000.0, 30_000)).unwrap();
        assert!(c.count_k3 >= 1 && c.count_k3_prime >= 1);
        assert!(!c.overlap);

        let tiny = violation_census(&nm, &GridAxis::point(1e-9)).unwrap();
        assert_eq!((tiny.count_k3, tiny.count_k3_prime), (0, 0));

        // Markovian OUN: a single shallow K₃ interval, never K₃′.
        let m = NoiseChannel::oun(0.1, 100.0).unwrap();
        let c = violation_census(&m, &GridAxis::left_open(0.0, 100.0, 10_000)).unwrap();
        assert!(c.count_k3 <= 1);
        assert_eq!(c.count_k3_prime, 0);
    }
}
