use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::File;
use std::io::{self, BufWriter, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{CommandKind, ConfigError, Method, RunConfig, TimeAxis};
use super::output::{
    write_records, ExtremaRecord, OracleRecord, OutputRecord, Record, SurfaceRecord,
};
use super::CliError;
use crate::correlators::{correlator_chain, correlator_closed, k3, k3_by_chain, LGResult, MeasurementSetting};
use crate::error::LgError;
use crate::extrema::{solve_extremum, ExtremumCondition, GridAxis};
use crate::noise::NoiseChannel;
use crate::qubit::DensityMatrix;

/// Largest chain-versus-closed-form deviation oracle-check accepts.
pub const ORACLE_TOL: f64 = 1e-9;

/// Messages for stderr from a successful run.
#[derive(Debug, Default)]
pub struct CommandOutcome {
    pub notes: Vec<String>,
}

pub fn run_command(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    match cfg.command {
        CommandKind::Sweep => sweep(cfg),
        CommandKind::Extrema => extrema(cfg),
        CommandKind::Surface => surface(cfg),
        CommandKind::OracleCheck => oracle_check(cfg),
    }
}

fn config_error(e: LgError) -> CliError {
    CliError::Config(ConfigError {
        key: None,
        source: None,
        message: e.to_string(),
    })
}

fn emit<R: Record>(cfg: &RunConfig, records: &[R]) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let io_err = |source| CliError::Io { path: Some(path.clone()), source };
            let file = File::create(path).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            write_records(&mut w, cfg.format, records).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let mut w = io::stdout().lock();
            write_records(&mut w, cfg.format, records)
                .and_then(|_| w.flush())
                .or_else(|e| match e.kind() {
                    io::ErrorKind::BrokenPipe => Ok(()),
                    _ => Err(e),
                })
                .map_err(|source| CliError::Io { path: None, source })
        }
    }
}

/// The initial state used by chain evaluations.
fn seeded_state(seed: u64) -> DensityMatrix {
    DensityMatrix::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Evaluates every (θ, φ, Δt) cell, θ outermost and Δt innermost.
fn evaluate_grid(cfg: &RunConfig, theta: &GridAxis, phi: &GridAxis) -> Result<Vec<LGResult>, CliError> {
    let channel = cfg.eval_channel();
    let dts = cfg.dt.points();
    let thetas = theta.points();
    let phis = phi.points();
    let (n_dt, n_phi) = (dts.len(), phis.len());
    let rho0 = seeded_state(cfg.seed);
    (0..thetas.len() * n_phi * n_dt)
        .into_par_iter()
        .map(|idx| {
            let setting = MeasurementSetting::new(thetas[idx / (n_phi * n_dt)], phis[(idx / n_dt) % n_phi]);
            let dt = dts[idx % n_dt];
            match cfg.method {
                Method::Closed => k3(&channel, &setting, dt),
                Method::Chain => k3_by_chain(&channel, &setting, &rho0, dt),
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(config_error)
}

fn argmax(records: &[LGResult]) -> Option<usize> {
    (0..records.len()).reduce(|b, i| if records[i].k3 > records[b].k3 { i } else { b })
}

fn sweep(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let records = evaluate_grid(cfg, &cfg.theta_or_equator(), &cfg.phi_or_zero())?;
    let axis = cfg.time_axis.as_str();
    let rows: Vec<OutputRecord> = records
        .iter()
        .map(|r| OutputRecord::new(&cfg.channel, axis, r))
        .collect();
    emit(cfg, &rows)?;
    let mut notes = Vec::new();
    if let Some(i) = argmax(&records) {
        let r = &records[i];
        notes.push(format!(
            "max k3 = {:.12} at {axis} = {:.12}, theta = {:.6}, phi = {:.6}",
            r.k3, r.dt, r.theta, r.phi
        ));
    }
    Ok(CommandOutcome { notes })
}

fn extrema(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let cond = ExtremumCondition::for_channel(&cfg.channel).map_err(config_error)?;
    let to_time = |x: f64| match (cfg.time_axis, cfg.channel) {
        (TimeAxis::Nu, NoiseChannel::Rtn(p)) => x / p.gamma,
        _ => x,
    };
    let bracket = (to_time(cfg.dt.start), to_time(cfg.dt.end));
    let roots = solve_extremum(&cond, bracket).map_err(config_error)?;
    let axis = cfg.time_axis.as_str();
    let rows: Vec<ExtremaRecord> = roots.iter().map(|r| ExtremaRecord::new(axis, r)).collect();
    emit(cfg, &rows)?;

    let mut notes = Vec::new();
    if rows.is_empty() {
        notes.push(format!(
            "no extrema for {axis} in ({}, {}]",
            cfg.dt.start, cfg.dt.end
        ));
    }
    if let Some(bad) = rows.iter().find(|r| !r.stationary) {
        return Err(CliError::CheckFailed(format!(
            "root at {axis} = {} is not stationary: dK3 = {:e}",
            bad.dt, bad.dk3
        )));
    }
    Ok(CommandOutcome { notes })
}

fn surface(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let theta = cfg.theta.expect("surface config has a theta range");
    let phi = cfg.phi.expect("surface config has a phi range");
    let records = evaluate_grid(cfg, &theta, &phi)?;
    let best = argmax(&records);
    let axis = cfg.time_axis.as_str();
    let rows: Vec<SurfaceRecord> = records
        .iter()
        .enumerate()
        .map(|(i, r)| SurfaceRecord {
            time_axis: axis.to_string(),
            dt: r.dt,
            theta: r.theta,
            phi: r.phi,
            k3: r.k3,
            k3_prime: r.k3_prime,
            argmax: Some(i) == best,
        })
        .collect();
    emit(cfg, &rows)?;
    let notes = best
        .map(|i| {
            let r = &records[i];
            vec![format!(
                "argmax: theta = {:.6}, phi = {:.6}, {axis} = {:.12}, k3 = {:.12}",
                r.theta, r.phi, r.dt, r.k3
            )]
        })
        .unwrap_or_default();
    Ok(CommandOutcome { notes })
}

struct OracleCase {
    rho0: DensityMatrix,
    setting: MeasurementSetting,
    ti: f64,
    tj: f64,
}

fn draw(rng: &mut ChaCha8Rng, axis: Option<GridAxis>, lo: f64, hi: f64) -> f64 {
    match axis {
        Some(a) if a.steps == 1 => a.start,
        Some(a) => rng.gen_range(a.start..=a.end),
        None => rng.gen_range(lo..=hi),
    }
}

fn oracle_check(cfg: &RunConfig) -> Result<CommandOutcome, CliError> {
    let channel = cfg.eval_channel();
    let horizon = cfg.dt.end;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cases: Vec<OracleCase> = (0..cfg.samples)
        .map(|_| {
            let rho0 = DensityMatrix::random(&mut rng);
            let theta = draw(&mut rng, cfg.theta, -PI, PI);
            let phi = draw(&mut rng, cfg.phi, -FRAC_PI_2, FRAC_PI_2);
            let ti = rng.gen_range(0.0..=horizon);
            let tj = ti + rng.gen_range(0.0..=horizon);
            OracleCase { rho0, setting: MeasurementSetting::new(theta, phi), ti, tj }
        })
        .collect();

    let rows: Vec<OracleRecord> = cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let chain = correlator_chain(&channel, &c.setting, &c.rho0, c.ti, c.tj)?;
            let closed = correlator_closed(&channel, c.setting.theta, c.ti, c.tj)?;
            Ok(OracleRecord {
                case: i as f64,
                ti: c.ti,
                tj: c.tj,
                theta: c.setting.theta,
                phi: c.setting.phi,
                chain,
                closed,
                deviation: (chain - closed).abs(),
            })
        })
        .collect::<Result<_, LgError>>()
        .map_err(config_error)?;

    if cfg.out.is_some() {
        emit(cfg, &rows)?;
    }
    let worst = rows
        .iter()
        .enumerate()
        .reduce(|b, r| if r.1.deviation > b.1.deviation { r } else { b });
    let max_dev = worst.map_or(0.0, |(_, r)| r.deviation);
    let mut out = io::stdout().lock();
    writeln!(out, "channel = {} ({})", cfg.channel.kind_name(), cfg.channel.regime())
        .and_then(|_| writeln!(out, "cases = {}", rows.len()))
        .and_then(|_| writeln!(out, "max_abs_deviation = {max_dev:.3e}"))
        .map_err(|source| CliError::Io { path: None, source })?;

    match worst {
        Some((i, r)) if r.deviation >= ORACLE_TOL => {
            let b = cases[i].rho0.bloch_vector();
            Err(CliError::CheckFailed(format!(
                "deviation {:.3e} >= {ORACLE_TOL:e} for case {i}: bloch = ({:.6}, {:.6}, {:.6}), \
                 theta = {}, phi = {}, ti = {}, tj = {}, chain = {}, closed = {}",
                r.deviation, b[0], b[1], b[2], r.theta, r.phi, r.ti, r.tj, r.chain, r.closed
            )))
        }
        _ => Ok(CommandOutcome::default()),
    }
}
