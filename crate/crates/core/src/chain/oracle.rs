//! Direct simulation of outcome sequences with exact Bell projections.
//!
//! Everything here is built from [`bell_swap`] and [`chain_step`] alone and
//! is the reference the closed forms are checked against.

use crate::error::{Error, Result};
use crate::qstate::{BellOutcome, ChainParams, DensityMatrix};
use crate::swap::{bell_swap, chain_step};

/// Joint post-selection probability and the resulting end-to-end state.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub probability: f64,
    pub state: DensityMatrix,
}

/// Weight of the entangled component of `q |psi><psi| + (1 - q)|00><00|`.
pub fn werner_weight(state: &DensityMatrix) -> f64 {
    1.0 - state.get(0, 0).re
}

/// Repeats the symmetric chain step `k - 1` times starting from `rho_1`, with
/// `Psi+` on both sides each time.
pub fn simulate_all_psi(k: u32, params: &ChainParams) -> Result<Simulation> {
    if k == 0 {
        return Err(Error::OutOfRange {
            name: "k",
            value: 0.0,
            range: "k >= 1",
        });
    }
    let mut state = params.rho_1();
    let mut probability = 1.0;
    for _ in 1..k {
        let step = chain_step(&state, params, BellOutcome::PsiPlus, BellOutcome::PsiPlus)?;
        probability *= step.probability;
        state = step.into_state()?;
    }
    Ok(Simulation { probability, state })
}

/// `n` consecutive `rho_R` links joined by `n - 1` `Psi+` outcomes.
pub fn simulate_right_wing(n: u32, p: f64, alpha: f64) -> Result<Simulation> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            range: "n >= 1",
        });
    }
    let link = crate::qstate::make_rho_r(p, alpha)?;
    let mut state = link.clone();
    let mut probability = 1.0;
    for _ in 1..n {
        let r = bell_swap(&state, &link, BellOutcome::PsiPlus)?;
        probability *= r.probability;
        state = r.into_state()?;
    }
    Ok(Simulation { probability, state })
}

/// `rho_k` joined to an `n`-link right wing by a `Psi+` outcome at `P_k`.
pub fn simulate_core_with_wing(n: u32, k: u32, params: &ChainParams) -> Result<Simulation> {
    let core = simulate_all_psi(k, params)?;
    let wing = simulate_right_wing(n, params.p, params.alpha)?;
    let r = bell_swap(&core.state, &wing.state, BellOutcome::PsiPlus)?;
    let probability = core.probability * wing.probability * r.probability;
    Ok(Simulation {
        probability,
        state: r.into_state()?,
    })
}
