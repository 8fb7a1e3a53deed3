//! CHSH violation via the Horodecki correlation-matrix criterion and
//! separability via positivity of the partial transpose.

use serde::Serialize;

use crate::error::Result;
use crate::qstate::{
    correlation_matrix, hermitian_eigenvalues, partial_transpose, symmetric3_eigenvalues,
    ChainParams, DensityMatrix,
};

/// Default additive tolerance on the `m_value > 1` test.
pub const CHSH_TOL: f64 = 1e-9;
/// Default tolerance on the smallest partial-transpose eigenvalue.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshReport {
    /// Eigenvalues of `R^T R`, descending.
    pub lambdas: [f64; 3],
    /// `lambdas[0] + lambdas[1]`; the maximal CHSH value is `2 sqrt(m_value)`.
    pub m_value: f64,
    pub violates: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparabilityReport {
    pub min_pt_eigenvalue: f64,
    pub separable: bool,
}

/// `R^T R` for the Pauli correlation matrix of a two-qubit state.
pub fn correlation_gram(rho: &DensityMatrix) -> Result<[[f64; 3]; 3]> {
    let r = correlation_matrix(rho)?;
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = (0..3).map(|k| r[k][i] * r[k][j]).sum();
        }
    }
    Ok(g)
}

/// A state violates CHSH iff the two largest eigenvalues of `R^T R` sum to more
/// than `1 + tol`.
pub fn chsh_report(rho: &DensityMatrix, tol: f64) -> Result<ChshReport> {
    let g = correlation_gram(rho)?;
    let [l0, l1, l2] = symmetric3_eigenvalues(&g)?;
    let lambdas = [l2, l1, l0];
    let m_value = lambdas[0] + lambdas[1];
    Ok(ChshReport {
        lambdas,
        m_value,
        violates: m_value > 1.0 + tol,
    })
}

/// Peres-Horodecki test, transposing the second factor.
pub fn ppt_report(rho: &DensityMatrix, tol: f64) -> Result<SeparabilityReport> {
    ppt_report_on(rho, 1, tol)
}

/// Same as [`ppt_report`] with a selectable transposed factor (0 or 1).
pub fn ppt_report_on(rho: &DensityMatrix, factor: usize, tol: f64) -> Result<SeparabilityReport> {
    rho.expect_qubits(2)?;
    let pt = partial_transpose(rho.matrix(), factor)?;
    let min_pt_eigenvalue = hermitian_eigenvalues(&pt)?[0];
    Ok(SeparabilityReport {
        min_pt_eigenvalue,
        separable: min_pt_eigenvalue >= -tol,
    })
}

/// True iff none of the wing states and the central state violates CHSH.
pub fn initial_gate(params: &ChainParams) -> bool {
    initial_gate_with(params, CHSH_TOL)
}

pub fn initial_gate_with(params: &ChainParams, tol: f64) -> bool {
    wings_nonviolating(params, tol)
        && !chsh_report(&params.rho_1(), tol)
            .expect("two-qubit state")
            .violates
}

/// CHSH gate on `rho_L` and `rho_R` only.
pub fn wings_nonviolating(params: &ChainParams, tol: f64) -> bool {
    [params.rho_l(), params.rho_r()]
        .iter()
        .all(|rho| !chsh_report(rho, tol).expect("two-qubit state").violates)
}

/// Closed-form pair sums for the wing states alongside the
/// value derived from the correlation eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateClosedForms {
    /// `2 p^2 sin(2 alpha)`, a variant with the sine unsquared.
    pub single_sine_first: f64,
    /// `2 p^2 sin^2(2 alpha)`, the x/y eigenvalue pair sum.
    pub derived_first: f64,
    /// `1 - 4p + p^2 (9 - cos 4 alpha) / 2`.
    pub second: f64,
}

impl GateClosedForms {
    pub fn new(p: f64, alpha: f64) -> Self {
        let s2 = (2.0 * alpha).sin();
        Self {
            single_sine_first: 2.0 * p * p * s2,
            derived_first: 2.0 * p * p * s2 * s2,
            second: 1.0 - 4.0 * p + 0.5 * p * p * (9.0 - (4.0 * alpha).cos()),
        }
    }

    pub fn derived_m_value(&self) -> f64 {
        self.derived_first.max(self.second)
    }

    pub fn single_sine_nonviolating(&self, tol: f64) -> bool {
        self.single_sine_first.max(self.second) <= 1.0 + tol
    }
}

/// Outcome of comparing the unsquared-sine wing-gate formula with the eigenvalue route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateCrossCheck {
    pub p: f64,
    pub alpha: f64,
    pub eigen_m_value: f64,
    pub derived_m_value: f64,
    pub eigen_nonviolating: bool,
    pub single_sine_nonviolating: bool,
}

impl GateCrossCheck {
    pub fn new(p: f64, alpha: f64) -> Self {
        let closed = GateClosedForms::new(p, alpha);
        let rho = crate::qstate::rho_r_unchecked(p, alpha);
        let eigen = chsh_report(&rho, CHSH_TOL).expect("two-qubit state");
        Self {
            p,
            alpha,
            eigen_m_value: eigen.m_value,
            derived_m_value: closed.derived_m_value(),
            eigen_nonviolating: !eigen.violates,
            single_sine_nonviolating: closed.single_sine_nonviolating(CHSH_TOL),
        }
    }

    pub fn verdicts_agree(&self) -> bool {
        self.eigen_nonviolating == self.single_sine_nonviolating
    }
}
