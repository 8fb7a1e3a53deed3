//! Seeded randomized self-check: closed forms against direct simulation plus
//! the state-level invariants the rest of the crate relies on.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::closed::{p_k_closed, p_k_bracket, rho_k_closed, rho_rn_closed, rho_rnk_closed};
use super::oracle::{simulate_all_psi, simulate_core_with_wing, simulate_right_wing, werner_weight};
use crate::criteria::{chsh_report, GateClosedForms, CHSH_TOL};
use crate::error::Result;
use crate::qstate::{
    hermitian_eigenvalues, make_rho_1, qubit_unitary, BellOutcome, ChainParams, DensityMatrix,
};
use crate::swap::{bell_swap, chain_step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random parameter draws per check.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            samples: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Comparisons that were evaluated.
    pub evaluated: usize,
    /// Draws skipped because the branch has zero probability or the closed
    /// form is undefined there.
    pub skipped: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Boolean verdicts that came out wrong.
    pub failures: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance && self.failures == 0 && self.evaluated > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Per-draw outcome: deviations, failed verdicts, or a skip.
#[derive(Default)]
struct Tally {
    evaluated: usize,
    skipped: usize,
    max_deviation: f64,
    failures: usize,
}

impl Tally {
    fn deviation(d: f64) -> Self {
        Self {
            evaluated: 1,
            max_deviation: d,
            ..Self::default()
        }
    }

    fn skip() -> Self {
        Self {
            skipped: 1,
            ..Self::default()
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            evaluated: self.evaluated + other.evaluated,
            skipped: self.skipped + other.skipped,
            max_deviation: self.max_deviation.max(other.max_deviation),
            failures: self.failures + other.failures,
        }
    }

    fn finish(self, name: &'static str, tolerance: f64) -> CheckResult {
        CheckResult {
            name,
            evaluated: self.evaluated,
            skipped: self.skipped,
            max_deviation: self.max_deviation,
            tolerance,
            failures: self.failures,
        }
    }
}

fn run_check<T: Sync>(
    name: &'static str,
    tolerance: f64,
    draws: &[T],
    f: impl Fn(&T) -> Result<Tally> + Sync,
) -> CheckResult {
    draws
        .par_iter()
        .map(|d| f(d).unwrap_or_else(|_| Tally::skip()))
        .reduce(Tally::default, Tally::merge)
        .finish(name, tolerance)
}

pub fn random_params(rng: &mut impl Rng) -> ChainParams {
    ChainParams::new(
        rng.random::<f64>(),
        rng.random_range(0.0..=PI),
        rng.random::<f64>(),
    )
    .expect("drawn inside the domain")
}

/// Random product unitary `U (x) V` on two qubits.
pub fn random_local_unitary(rng: &mut impl Rng) -> crate::qstate::ComplexMatrix {
    let mut one = || {
        qubit_unitary(
            rng.random_range(0.0..PI),
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(0.0..2.0 * PI),
        )
    };
    let (u, v) = (one(), one());
    u.kron(&v).expect("4-dimensional")
}

fn validity_deviation(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let trace = (m.trace() - 1.0).norm();
    let min_eig = hermitian_eigenvalues(m)?.into_iter().fold(f64::INFINITY, f64::min);
    Ok(m.hermitian_deviation().max(trace).max((-min_eig).max(0.0)))
}

pub fn run_verification(config: &VerifyConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let params: Vec<ChainParams> = (0..config.samples).map(|_| random_params(&mut rng)).collect();
    let unitaries: Vec<_> = (0..config.samples)
        .map(|_| (random_params(&mut rng), random_local_unitary(&mut rng)))
        .collect();
    let small: Vec<(u32, u32, ChainParams)> = (0..config.samples)
        .map(|_| {
            (
                rng.random_range(1..=6),
                rng.random_range(1..=6),
                random_params(&mut rng),
            )
        })
        .collect();

    let mut checks = Vec::new();

    checks.push(run_check("state validity", 1e-10, &params, |pr| {
        let mut d: f64 = 0.0;
        for rho in [pr.rho_l(), pr.rho_r(), pr.rho_1()] {
            d = d.max(validity_deviation(&rho)?);
        }
        Ok(Tally::deviation(d))
    }));

    checks.push(run_check("all-psi chain state", 1e-10, &params, |pr| {
        let mut t = Tally::default();
        for k in 1..=8 {
            let sim = simulate_all_psi(k, pr);
            let closed = rho_k_closed(k, pr);
            t = t.merge(match (sim, closed) {
                (Ok(sim), Ok(closed)) => Tally::deviation(sim.state.max_abs_diff(&closed)),
                _ => Tally::skip(),
            });
        }
        Ok(t)
    }));

    checks.push(run_check("all-psi chain weight", 1e-10, &params, |pr| {
        let mut t = Tally::default();
        for k in 1..=8 {
            t = t.merge(match (simulate_all_psi(k, pr), p_k_closed(k, pr)) {
                (Ok(sim), Ok(q)) => Tally::deviation((werner_weight(&sim.state) - q).abs()),
                _ => Tally::skip(),
            });
        }
        Ok(t)
    }));

    checks.push(run_check("bracket weight form", 1e-9, &params, |pr| {
        if (2.0 * pr.alpha).cos().abs() < 0.05 {
            return Ok(Tally::skip());
        }
        let mut d: f64 = 0.0;
        for k in 1..=8 {
            let (a, b) = (p_k_closed(k, pr)?, p_k_bracket(k, pr)?);
            d = d.max((a - b).abs() / a.abs().max(1e-300));
        }
        Ok(Tally::deviation(d))
    }));

    checks.push(run_check("psi-minus after correction", 1e-12, &params, |pr| {
        let rho = pr.rho_1();
        let plus = chain_step(&rho, pr, BellOutcome::PsiPlus, BellOutcome::PsiPlus)?;
        let minus = chain_step(&rho, pr, BellOutcome::PsiMinus, BellOutcome::PsiMinus)?;
        let mixed = chain_step(&rho, pr, BellOutcome::PsiMinus, BellOutcome::PsiPlus)?;
        let d = minus
            .state()?
            .max_abs_diff(plus.state()?)
            .max(mixed.state()?.max_abs_diff(plus.state()?))
            .max((plus.probability - minus.probability).abs());
        Ok(Tally::deviation(d))
    }));

    checks.push(run_check("born completeness", 1e-10, &params, |pr| {
        let mut d: f64 = 0.0;
        for (l, r) in [
            (pr.rho_l(), pr.rho_1()),
            (pr.rho_1(), pr.rho_r()),
            (pr.rho_r(), pr.rho_r()),
            (pr.rho_l(), pr.rho_l()),
        ] {
            let mut total = 0.0;
            for o in BellOutcome::ALL {
                total += bell_swap(&l, &r, o)?.probability;
            }
            d = d.max((total - 1.0).abs());
        }
        Ok(Tally::deviation(d))
    }));

    checks.push(run_check("right wing state", 1e-10, &small, |(n, _, pr)| {
        let sim = simulate_right_wing(*n, pr.p, pr.alpha)?;
        let closed = rho_rn_closed(*n, pr.p, pr.alpha)?;
        Ok(Tally::deviation(sim.state.max_abs_diff(&closed.state)))
    }));

    checks.push(run_check("core joined to wing", 1e-10, &small, |(n, k, pr)| {
        let sim = simulate_core_with_wing(*n, *k, pr)?;
        let (_, closed) = rho_rnk_closed(*n, *k, pr)?;
        Ok(Tally::deviation(sim.state.max_abs_diff(&closed)))
    }));

    checks.push(run_check("local unitary invariance", 1e-8, &unitaries, |(pr, u)| {
        let mut d: f64 = 0.0;
        for rho in [pr.rho_l(), pr.rho_r(), pr.rho_1()] {
            let m0 = chsh_report(&rho, CHSH_TOL)?.m_value;
            let m1 = chsh_report(&rho.conjugate_by(u), CHSH_TOL)?.m_value;
            d = d.max((m0 - m1).abs());
        }
        Ok(Tally::deviation(d))
    }));

    checks.push(run_check("wing closed-form m value", 1e-10, &params, |pr| {
        let eigen = chsh_report(&pr.rho_r(), CHSH_TOL)?.m_value;
        let closed = GateClosedForms::new(pr.p, pr.alpha).derived_m_value();
        Ok(Tally::deviation((eigen - closed).abs()))
    }));

    checks.push(run_check("chsh threshold", 1e-10, &[-1.0, 0.0, 1.0], |&side: &f64| {
        let q = FRAC_1_SQRT_2 + side * 2e-9;
        let r = chsh_report(&make_rho_1(q)?, CHSH_TOL)?;
        let expected = side > 0.0;
        let mut t = Tally::deviation((r.m_value - 2.0 * q * q).abs());
        if r.violates != expected {
            t.failures = 1;
        }
        Ok(t)
    }));

    VerifyReport {
        config: *config,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let config = VerifyConfig {
            seed: 7,
            samples: 60,
        };
        let a = run_verification(&config);
        for c in &a.checks {
            assert!(c.passed(), "{c:?}");
        }
        assert_eq!(a, run_verification(&config));
    }
}
