//! Projective Bell measurement on the middle pair of a four-qubit composite.
//!
//! For `left` on qubits (A, B) and `right` on (C, D), measuring (B, C) with
//! outcome `phi` leaves A and D in
//! `<phi|_BC (left ⊗ right) |phi>_BC / probability`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{BellOutcome, ChainParams, ComplexMatrix, DensityMatrix};

/// Conditional probabilities at or below this value are treated as zero and
/// leave the post-measurement state undefined.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Born probability of a measurement together with the renormalised state of
/// the unmeasured qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapResult {
    pub probability: f64,
    post_state: Option<DensityMatrix>,
}

impl SwapResult {
    pub(crate) fn new(probability: f64, post_state: Option<DensityMatrix>) -> Self {
        Self {
            probability,
            post_state,
        }
    }

    pub fn is_defined(&self) -> bool {
        self.post_state.is_some()
    }

    pub fn state(&self) -> Result<&DensityMatrix> {
        self.post_state
            .as_ref()
            .ok_or(Error::ZeroProbabilityBranch(self.probability))
    }

    pub fn into_state(self) -> Result<DensityMatrix> {
        let p = self.probability;
        self.post_state.ok_or(Error::ZeroProbabilityBranch(p))
    }
}

/// Which of the two Bell measurements of a chain step is carried out first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeasurementOrder {
    LeftFirst,
    RightFirst,
}

/// Bell measurement on factor 1 of `left` jointly with factor 0 of `right`.
pub fn bell_swap(
    left: &DensityMatrix,
    right: &DensityMatrix,
    outcome: BellOutcome,
) -> Result<SwapResult> {
    left.expect_qubits(2)?;
    right.expect_qubits(2)?;
    let phi = outcome.amplitudes();
    let l = left.matrix();
    let r = right.matrix();

    let mut out = ComplexMatrix::zeros(4)?;
    for a in 0..2 {
        for d in 0..2 {
            for a2 in 0..2 {
                for d2 in 0..2 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..2 {
                        for c in 0..2 {
                            let bra = phi[2 * b + c].conj();
                            if bra.norm_sqr() == 0.0 {
                                continue;
                            }
                            for b2 in 0..2 {
                                for c2 in 0..2 {
                                    let ket = phi[2 * b2 + c2];
                                    if ket.norm_sqr() == 0.0 {
                                        continue;
                                    }
                                    acc += bra
                                        * l[(2 * a + b, 2 * a2 + b2)]
                                        * r[(2 * c + d, 2 * c2 + d2)]
                                        * ket;
                                }
                            }
                        }
                    }
                    out[(2 * a + d, 2 * a2 + d2)] = acc;
                }
            }
        }
    }

    let probability = out.trace().re;
    if probability <= ZERO_PROBABILITY {
        return Ok(SwapResult::new(probability, None));
    }
    let post = out.scale(1.0 / probability);
    Ok(SwapResult::new(
        probability,
        Some(DensityMatrix::from_matrix_unchecked(post)),
    ))
}

/// Local correction applied by the right-hand party after an outcome:
/// `sigma_z` on the second qubit for the minus outcomes, identity otherwise.
///
/// After `Phi` outcomes this only removes the relative sign; no bit flip is
/// applied, so those branches are analysed in their uncorrected `Phi` frame.
pub fn phase_correct(state: &DensityMatrix, outcome: BellOutcome) -> Result<DensityMatrix> {
    state.expect_qubits(2)?;
    if matches!(outcome, BellOutcome::PsiPlus | BellOutcome::PhiPlus) {
        return Ok(state.clone());
    }
    let m = state.matrix();
    let mut out = m.clone();
    for i in 0..4 {
        for j in 0..4 {
            if (i & 1) != (j & 1) {
                out[(i, j)] = -m[(i, j)];
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// One symmetric extension of the chain: `rho_L ⊗ middle ⊗ rho_R` with Bell
/// measurements on both inner pairs, followed by phase correction.
pub fn chain_step(
    middle: &DensityMatrix,
    params: &ChainParams,
    left_outcome: BellOutcome,
    right_outcome: BellOutcome,
) -> Result<SwapResult> {
    chain_step_ordered(
        middle,
        params,
        left_outcome,
        right_outcome,
        MeasurementOrder::LeftFirst,
    )
}

pub fn chain_step_ordered(
    middle: &DensityMatrix,
    params: &ChainParams,
    left_outcome: BellOutcome,
    right_outcome: BellOutcome,
    order: MeasurementOrder,
) -> Result<SwapResult> {
    extend_both_sides(
        &params.rho_l(),
        middle,
        &params.rho_r(),
        left_outcome,
        right_outcome,
        order,
    )
}

pub(crate) fn extend_both_sides(
    left_link: &DensityMatrix,
    middle: &DensityMatrix,
    right_link: &DensityMatrix,
    left_outcome: BellOutcome,
    right_outcome: BellOutcome,
    order: MeasurementOrder,
) -> Result<SwapResult> {
    let (first, second) = match order {
        MeasurementOrder::LeftFirst => {
            let first = bell_swap(left_link, middle, left_outcome)?;
            let Ok(state) = first.state() else {
                return Ok(first);
            };
            let second = bell_swap(state, right_link, right_outcome)?;
            (first, second)
        }
        MeasurementOrder::RightFirst => {
            let first = bell_swap(middle, right_link, right_outcome)?;
            let Ok(state) = first.state() else {
                return Ok(first);
            };
            let second = bell_swap(left_link, state, left_outcome)?;
            (first, second)
        }
    };
    let probability = first.probability * second.probability;
    match second.post_state {
        None => Ok(SwapResult::new(probability, None)),
        Some(state) => {
            let state = phase_correct(&phase_correct(&state, left_outcome)?, right_outcome)?;
            Ok(SwapResult::new(probability, Some(state)))
        }
    }
}
