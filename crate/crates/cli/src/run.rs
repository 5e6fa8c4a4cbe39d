use std::io::Write;

use qkin::angular::AngularConfig;
use qkin::hilbert::{dft_matrix, labels, LinearOperator, DENSE_LIMIT};
use qkin::kinematics::KinematicsConfig;
use qkin::limits::{
    cartesian_kernel_profile, commutator_sweep, kernel_error_profile, ConvergenceRow, ConvergenceTable,
};
use qkin::schwinger::{build_pair, full_grid, mutual_unbiasedness_residual, verify_weyl, Generator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, RunConfig};
use crate::csv::{csv_string, format_float};
use crate::error::{CliError, Result};
use crate::plot::emit_plot;

pub const RESIDUAL_TOL: f64 = 1e-12;
pub const UNBIASED_TOL: f64 = 1e-13;
pub const FULL_WEYL_LIMIT: usize = 33;
pub const WEYL_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub metric: String,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

fn weyl_sample(n: usize) -> Vec<(i64, i64)> {
    if n <= FULL_WEYL_LIMIT {
        return full_grid(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let m = n as i64;
    (0..WEYL_SAMPLES)
        .map(|_| (rng.gen_range(0..m), rng.gen_range(0..m)))
        .collect()
}

pub fn verify_checks(ns: &[usize]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &n in ns {
        let pair = build_pair(n)?;
        let mut push = |name: &str, value: f64, threshold: f64| {
            checks.push(Check {
                metric: format!("{name}[N={n}]"),
                value,
                threshold,
            })
        };
        push("weyl_residual", verify_weyl(&pair, &weyl_sample(n)).max_residual, RESIDUAL_TOL);
        let unitarity = pair.u().unitarity_residual().max(pair.v().unitarity_residual());
        push("unitarity_residual", unitarity, RESIDUAL_TOL);
        let identity = LinearOperator::identity(n);
        for (name, which) in [("u_power_n_identity", Generator::U), ("v_power_n_identity", Generator::V)] {
            let exact = pair.power(which, n as i64) == identity;
            push(name, if exact { 0.0 } else { 1.0 }, 0.0);
        }
        push("mutual_unbiasedness", mutual_unbiasedness_residual(n)?, UNBIASED_TOL);
        if n <= DENSE_LIMIT {
            push("dft_unitarity", dft_matrix(n)?.unitarity_residual(), RESIDUAL_TOL);
        }
    }
    Ok(checks)
}

pub fn report_string(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            format!(
                "{}\t{}\t{}\t{}\n",
                c.metric,
                format_float(c.value),
                format_float(c.threshold),
                if c.passed() { "pass" } else { "fail" }
            )
        })
        .collect()
}

pub fn sweep_table(cfg: &RunConfig) -> Result<ConvergenceTable> {
    Ok(commutator_sweep(&cfg.ns, &cfg.deltas, &cfg.state, cfg.units.p0, cfg.units.q0)?)
}

pub fn kernel_table(cfg: &RunConfig) -> Result<ConvergenceTable> {
    let mut rows = Vec::new();
    let indices = |n: usize| cfg.indices.clone().unwrap_or_else(|| labels(n).collect());
    for &n in &cfg.ns {
        if cfg.angular {
            let config = AngularConfig::new(n, cfg.units.m0, cfg.units.theta0)?;
            for j_m in indices(n) {
                for (j_theta, err) in kernel_error_profile(&config, j_m)? {
                    rows.push(ConvergenceRow {
                        n,
                        delta: 0.0,
                        metric: format!("angular_kernel_error[m={j_m}]"),
                        value: err,
                        aux: Some(j_theta as f64),
                    });
                }
            }
        } else {
            for &delta in &cfg.deltas {
                let config = KinematicsConfig::new(n, delta, cfg.units.p0, cfg.units.q0)?;
                for j_p in indices(n) {
                    for (j_q, err) in cartesian_kernel_profile(&config, j_p)? {
                        rows.push(ConvergenceRow {
                            n,
                            delta,
                            metric: format!("cartesian_kernel_error[p={j_p}]"),
                            value: err,
                            aux: Some(j_q as f64),
                        });
                    }
                }
            }
        }
    }
    Ok(ConvergenceTable::from_rows(rows)?)
}

fn write_output(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Runs one command, writing its data to `--out` or to `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match cfg.command {
        Command::Verify => {
            let checks = verify_checks(&cfg.ns)?;
            write_output(cfg, &report_string(&checks), stdout)?;
            let failed: Vec<String> = checks.into_iter().filter(|c| !c.passed()).map(|c| c.metric).collect();
            if !failed.is_empty() {
                return Err(CliError::InvariantFailed(failed));
            }
            Ok(())
        }
        Command::Sweep | Command::Kernel => {
            let table = match cfg.command {
                Command::Sweep => sweep_table(cfg)?,
                _ => kernel_table(cfg)?,
            };
            write_output(cfg, &csv_string(&table), stdout)?;
            if cfg.emit_plot {
                if let Some(out) = &cfg.output_path {
                    emit_plot(&table, out)?;
                }
            }
            Ok(())
        }
    }
}
