use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use swapchain_core::chain::exhaustive::MAX_MEASURING_PARTIES;
use swapchain_core::chain::scan::{check_n_list, linspace};
use swapchain_core::chain::{
    activating_window, exhaustive_search, p_k_closed, run_verification, scan_activation_region,
    scan_critical_number, scan_initial_region, simulate_all_psi, ScanGrid, VerifyConfig,
};
use swapchain_core::criteria::{chsh_report, CHSH_TOL};
use swapchain_core::ChainParams;

use crate::table::Table;
use crate::{CliError, RunConfig};

/// Which table `scan-activation` emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActivationTable {
    /// One row per grid point with the activation verdicts.
    Regions,
    /// One row per angle with the `Phi`-branch separability boundaries.
    PhiBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum CommandConfig {
    ScanInitial {
        grid: ScanGrid,
    },
    ScanActivation {
        grid: ScanGrid,
        n_list: Vec<u32>,
        table: ActivationTable,
    },
    CriticalNumber {
        p: f64,
        alphas: Vec<f64>,
        p1_min: f64,
        p1_max: f64,
        steps: usize,
        k_max: u32,
    },
    Simulate {
        params: ChainParams,
        k: u32,
    },
    Exhaustive {
        params: ChainParams,
        m_parties: u32,
    },
    Verify {
        samples: usize,
    },
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl CommandConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            CommandConfig::ScanInitial { grid } => grid.validate()?,
            CommandConfig::ScanActivation { grid, n_list, .. } => {
                grid.validate()?;
                check_n_list(n_list)
                    .map_err(|e| config_error(format!("--n-list: {e}")))?;
            }
            CommandConfig::CriticalNumber {
                p,
                alphas,
                p1_min,
                p1_max,
                steps,
                k_max,
            } => {
                ChainParams::new(*p, 0.0, 0.0)?;
                if alphas.is_empty() {
                    return Err(config_error("no angles given (use --alphas or --window-alphas)"));
                }
                for &a in alphas {
                    ChainParams::new(*p, a, 0.0)?;
                }
                if !(0.0 <= *p1_min && p1_min < p1_max && *p1_max <= 1.0) {
                    return Err(config_error(format!(
                        "need 0 <= --p1-min < --p1-max <= 1, got {p1_min} and {p1_max}"
                    )));
                }
                if *steps < 2 {
                    return Err(config_error("--steps must be at least 2"));
                }
                if *k_max < 2 {
                    return Err(config_error("--k-max must be at least 2"));
                }
            }
            CommandConfig::Simulate { k, .. } => {
                if *k == 0 {
                    return Err(config_error("--k must be at least 1"));
                }
            }
            CommandConfig::Exhaustive { m_parties, .. } => {
                if !(1..=MAX_MEASURING_PARTIES).contains(m_parties) {
                    return Err(config_error(format!(
                        "--m-parties must lie in 1..={MAX_MEASURING_PARTIES}, got {m_parties}"
                    )));
                }
            }
            CommandConfig::Verify { samples } => {
                if *samples == 0 {
                    return Err(config_error("--samples must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// `count` angles evenly spread inside the activating window for `p`.
pub fn window_alphas(p: f64, count: usize) -> Result<Vec<f64>, CliError> {
    if count == 0 {
        return Err(config_error("--window-alphas must be positive"));
    }
    let window = activating_window(p)?
        .ok_or_else(|| config_error(format!("no activating window exists for p = {p}")))?;
    Ok(window.interior(count))
}

pub struct Outcome {
    pub table: Table,
    pub passed: bool,
    /// Human-readable report for standard error.
    pub summary: Option<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self {
            table,
            passed: true,
            summary: None,
        }
    }
}

pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    match &config.command {
        CommandConfig::ScanInitial { grid } => {
            let mut t = Table::new(["alpha", "p", "m_rhoL", "m_rhoR", "nonviolating"]);
            for r in scan_initial_region(grid)? {
                t.push(vec![
                    r.alpha.into(),
                    r.p.into(),
                    r.m_rho_l.into(),
                    r.m_rho_r.into(),
                    r.nonviolating.into(),
                ]);
            }
            Ok(t.into())
        }
        CommandConfig::ScanActivation { grid, n_list, table } => {
            let scan = scan_activation_region(grid, n_list)?;
            match table {
                ActivationTable::Regions => {
                    let mut columns: Vec<String> = ["alpha", "p", "initial_gate", "n_min", "n_inf"]
                        .map(String::from)
                        .to_vec();
                    columns.extend(n_list.iter().map(|n| format!("n_{n}")));
                    let mut t = Table::new(columns);
                    for r in &scan.rows {
                        let mut row = vec![
                            r.alpha.into(),
                            r.p.into(),
                            r.initial_gate.into(),
                            r.n_min.into(),
                            r.asymptotic.into(),
                        ];
                        row.extend(r.activated.iter().map(|&a| a.into()));
                        t.push(row);
                    }
                    Ok(t.into())
                }
                ActivationTable::PhiBoundary => {
                    let mut t = Table::new(["alpha", "p_star_rr", "p_star_1r"]);
                    for r in &scan.phi_boundary {
                        t.push(vec![r.alpha.into(), r.p_star_rr.into(), r.p_star_1r.into()]);
                    }
                    Ok(t.into())
                }
            }
        }
        CommandConfig::CriticalNumber {
            p,
            alphas,
            p1_min,
            p1_max,
            steps,
            k_max,
        } => {
            let p1s = linspace(*p1_min, *p1_max, *steps);
            let mut t = Table::new(["alpha", "p1", "n_c"]);
            for r in scan_critical_number(*p, alphas, &p1s, *k_max)? {
                t.push(vec![r.alpha.into(), r.p1.into(), r.n_c().into()]);
            }
            Ok(t.into())
        }
        CommandConfig::Simulate { params, k } => {
            let mut t = Table::new([
                "k",
                "n_swaps",
                "probability",
                "p_k_simulated",
                "p_k_closed",
                "max_entry_deviation",
                "m_value",
                "violates",
            ]);
            for k in 1..=*k {
                let sim = simulate_all_psi(k, params)?;
                let closed = p_k_closed(k, params).ok();
                let dev = swapchain_core::chain::rho_k_closed(k, params)
                    .ok()
                    .map(|c| c.max_abs_diff(&sim.state));
                let chsh = chsh_report(&sim.state, CHSH_TOL)?;
                t.push(vec![
                    k.into(),
                    (2 * (k - 1)).into(),
                    sim.probability.into(),
                    swapchain_core::chain::oracle::werner_weight(&sim.state).into(),
                    closed.into(),
                    dev.into(),
                    chsh.m_value.into(),
                    chsh.violates.into(),
                ]);
            }
            Ok(t.into())
        }
        CommandConfig::Exhaustive { params, m_parties } => {
            let report = exhaustive_search(params, *m_parties)?;
            let mut t = Table::new([
                "set",
                "left_end",
                "right_end",
                "configurations",
                "defined_branches",
                "probability_sum",
                "all_psi_m_value",
                "all_psi_violates",
                "violating_branches",
                "violating_probability",
                "max_m_value",
                "max_m_value_with_phi",
                "phi_branches",
                "phi_branches_separable",
                "rule_holds",
            ]);
            for s in &report.sets {
                let with_phi = (s.phi_branches > 0).then_some(s.max_m_value_with_phi);
                t.push(vec![
                    s.set.to_string().into(),
                    s.end_parties.0.into(),
                    s.end_parties.1.into(),
                    s.configurations.into(),
                    s.defined_branches.into(),
                    s.probability_sum.into(),
                    s.all_psi_m_value.into(),
                    s.all_psi_violates.into(),
                    s.violating.len().into(),
                    s.violating_probability().into(),
                    s.max_m_value.into(),
                    with_phi.into(),
                    s.phi_branches.into(),
                    s.phi_branches_separable.into(),
                    s.rule_holds().into(),
                ]);
            }
            Ok(t.into())
        }
        CommandConfig::Verify { samples } => {
            let report = run_verification(&VerifyConfig {
                seed: config.seed,
                samples: *samples,
            });
            let mut t = Table::new([
                "check",
                "evaluated",
                "skipped",
                "max_deviation",
                "tolerance",
                "failures",
                "passed",
            ]);
            let mut summary = String::new();
            for c in &report.checks {
                t.push(vec![
                    c.name.into(),
                    c.evaluated.into(),
                    c.skipped.into(),
                    c.max_deviation.into(),
                    c.tolerance.into(),
                    c.failures.into(),
                    c.passed().into(),
                ]);
                let _ = writeln!(
                    summary,
                    "{:<5} {:<28} max deviation {:.3e} (tolerance {:.0e}, {} evaluated, {} skipped)",
                    if c.passed() { "ok" } else { "FAIL" },
                    c.name,
                    c.max_deviation,
                    c.tolerance,
                    c.evaluated,
                    c.skipped
                );
            }
            Ok(Outcome {
                table: t,
                passed: report.passed(),
                summary: Some(summary),
            })
        }
    }
}
