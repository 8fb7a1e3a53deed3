//! Dense states over one to four qubits and the state families of the
//! swapping chain.
//!
//! Qubit ordering is big-endian on the tensor factor: in a two-qubit state
//! factor 0 is the left party, and the computational basis is
//! `|00>, |01>, |10>, |11>`. A four-qubit composite `left ⊗ right` carries the
//! factors in order A, B, C, D.

mod jacobi;
mod matrix;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use jacobi::{
    hermitian_eigen, hermitian_eigenvalues, symmetric3_eigenvalues, HermitianEigen,
    HERMITIAN_TOLERANCE,
};
pub use matrix::{pauli, qubit_unitary, ComplexMatrix};

use crate::error::{check_range, Error, Result};
use matrix::{ONE, ZERO};

/// Hermiticity tolerance for a valid density matrix.
pub const STATE_HERMITIAN_TOL: f64 = 1e-12;
/// Unit-trace tolerance for a valid density matrix.
pub const STATE_TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue a density matrix may have.
pub const STATE_PSD_TOL: f64 = -1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all density-matrix invariants.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > STATE_HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > STATE_TRACE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let smallest = hermitian_eigenvalues(&matrix)?[0];
        if smallest < STATE_PSD_TOL {
            return Err(Error::NotPositive(smallest));
        }
        Ok(Self { matrix })
    }

    /// Pure state `|psi><psi|`; `psi` must be normalised.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi)?)
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// Re-runs the invariant checks, e.g. on a state produced by a long chain.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.matrix.clone()).map(|_| ())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn qubits(&self) -> usize {
        self.matrix.qubits()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.matrix[(i, j)] * self.matrix[(j, i)]).re;
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub(crate) fn expect_qubits(&self, expected: usize) -> Result<()> {
        let got = self.qubits();
        if got == expected {
            Ok(())
        } else {
            Err(Error::QubitCount { expected, got })
        }
    }

    /// `U rho U^dagger` for a unitary of matching dimension.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Self {
        Self::from_matrix_unchecked(self.matrix.conjugate_by(unitary))
    }
}

/// The `(p, alpha, p1)` triple that fixes every link of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    /// Weight of the entangled component in the wing links.
    pub p: f64,
    /// Entanglement angle of the wing links, radians in `[0, pi]`.
    pub alpha: f64,
    /// Weight of `|Psi+>` in the central link.
    pub p1: f64,
}

impl ChainParams {
    pub fn new(p: f64, alpha: f64, p1: f64) -> Result<Self> {
        check_range("p", p, 0.0, 1.0, "[0, 1]")?;
        check_range("alpha", alpha, 0.0, PI, "[0, pi]")?;
        check_range("p1", p1, 0.0, 1.0, "[0, 1]")?;
        Ok(Self { p, alpha, p1 })
    }

    pub fn rho_l(&self) -> DensityMatrix {
        rho_l_unchecked(self.p, self.alpha)
    }

    pub fn rho_r(&self) -> DensityMatrix {
        rho_r_unchecked(self.p, self.alpha)
    }

    pub fn rho_1(&self) -> DensityMatrix {
        rho_1_unchecked(self.p1)
    }
}

/// Result of a Bell-basis measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    pub fn is_psi(self) -> bool {
        matches!(self, BellOutcome::PsiPlus | BellOutcome::PsiMinus)
    }

    pub fn is_phi(self) -> bool {
        !self.is_psi()
    }

    /// Amplitudes in the computational basis.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            BellOutcome::PhiPlus => [h, ZERO, ZERO, h],
            BellOutcome::PhiMinus => [h, ZERO, ZERO, -h],
            BellOutcome::PsiPlus => [ZERO, h, h, ZERO],
            BellOutcome::PsiMinus => [ZERO, h, -h, ZERO],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "Phi+",
            BellOutcome::PhiMinus => "Phi-",
            BellOutcome::PsiPlus => "Psi+",
            BellOutcome::PsiMinus => "Psi-",
        }
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn basis(index: usize) -> [Complex64; 4] {
    let mut v = [ZERO; 4];
    v[index] = ONE;
    v
}

/// `p |psi><psi| + (1 - p) |00><00|` for `psi = a|01> + b|10>`, real a, b.
fn werner_like(p: f64, amp01: f64, amp10: f64) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros_unchecked(4);
    m[(0, 0)] = Complex64::new(1.0 - p, 0.0);
    m[(1, 1)] = Complex64::new(p * amp01 * amp01, 0.0);
    m[(2, 2)] = Complex64::new(p * amp10 * amp10, 0.0);
    m[(1, 2)] = Complex64::new(p * amp01 * amp10, 0.0);
    m[(2, 1)] = m[(1, 2)];
    DensityMatrix::from_matrix_unchecked(m)
}

pub(crate) fn rho_l_unchecked(p: f64, alpha: f64) -> DensityMatrix {
    werner_like(p, alpha.cos(), alpha.sin())
}

pub(crate) fn rho_r_unchecked(p: f64, alpha: f64) -> DensityMatrix {
    werner_like(p, alpha.sin(), alpha.cos())
}

pub(crate) fn rho_1_unchecked(p1: f64) -> DensityMatrix {
    werner_like(p1, FRAC_1_SQRT_2, FRAC_1_SQRT_2)
}

/// Wing state with `cos(alpha)|01> + sin(alpha)|10>`.
pub fn make_rho_l(p: f64, alpha: f64) -> Result<DensityMatrix> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    check_range("alpha", alpha, 0.0, PI, "[0, pi]")?;
    Ok(rho_l_unchecked(p, alpha))
}

/// Wing state with `sin(alpha)|01> + cos(alpha)|10>`.
pub fn make_rho_r(p: f64, alpha: f64) -> Result<DensityMatrix> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    check_range("alpha", alpha, 0.0, PI, "[0, pi]")?;
    Ok(rho_r_unchecked(p, alpha))
}

/// Central state `p1 |Psi+><Psi+| + (1 - p1) |00><00|`.
pub fn make_rho_1(p1: f64) -> Result<DensityMatrix> {
    check_range("p1", p1, 0.0, 1.0, "[0, 1]")?;
    Ok(rho_1_unchecked(p1))
}

/// `p |psi><psi| + (1 - p)|00><00|` with `psi = sin(theta)|01> + cos(theta)|10>`
/// given through its (normalised) amplitude pair.
pub(crate) fn werner_like_from_amplitudes(p: f64, sin_amp: f64, cos_amp: f64) -> DensityMatrix {
    werner_like(p, sin_amp, cos_amp)
}

/// Rank-one projector onto a Bell state.
pub fn bell_projector(outcome: BellOutcome) -> ComplexMatrix {
    ComplexMatrix::outer(&outcome.amplitudes()).expect("4-dimensional")
}

/// `|00><00|` as a two-qubit state.
pub fn ket00() -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(ComplexMatrix::outer(&basis(0)).expect("4-dimensional"))
}

/// Kronecker product of two states; the combined dimension must not exceed 16.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_matrix_unchecked(
        a.matrix.kron(&b.matrix)?,
    ))
}

/// Traces out every qubit not listed in `keep`. The kept qubits appear in the
/// order given. No renormalisation is applied.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.qubits();
    if keep.is_empty() {
        return Err(Error::BadQubits("at least one qubit must be kept".into()));
    }
    for (i, &q) in keep.iter().enumerate() {
        if q >= n {
            return Err(Error::BadQubits(format!(
                "qubit {q} out of range for a {n}-qubit state"
            )));
        }
        if keep[..i].contains(&q) {
            return Err(Error::BadQubits(format!("qubit {q} listed twice")));
        }
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let out_dim = 1usize << keep.len();
    let assemble = |kept: usize, rest: usize| {
        let mut full = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            full |= ((kept >> (keep.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            full |= ((rest >> (traced.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        full
    };

    let mut out = ComplexMatrix::zeros(out_dim)?;
    for r in 0..out_dim {
        for c in 0..out_dim {
            let mut acc = ZERO;
            for t in 0..(1usize << traced.len()) {
                acc += rho.matrix[(assemble(r, t), assemble(c, t))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Pauli correlation matrix `R[i][j] = Tr[(sigma_i ⊗ sigma_j) rho]`.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<[[f64; 3]; 3]> {
    rho.expect_qubits(2)?;
    let paulis = pauli();
    let mut r = [[0.0; 3]; 3];
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            let op = si.kron(sj).expect("4-dimensional");
            // Tr(op rho) = sum_ab op[a][b] rho[b][a]
            let mut acc = ZERO;
            for a in 0..4 {
                for b in 0..4 {
                    acc += op[(a, b)] * rho.matrix[(b, a)];
                }
            }
            r[i][j] = acc.re;
        }
    }
    Ok(r)
}

/// Partial transpose of a two-qubit operator over the second factor.
pub fn partial_transpose_second(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    partial_transpose(m, 1)
}

/// Partial transpose of a two-qubit operator over factor `which` (0 or 1).
pub fn partial_transpose(m: &ComplexMatrix, which: usize) -> Result<ComplexMatrix> {
    if m.dim() != 4 {
        return Err(Error::QubitCount {
            expected: 2,
            got: m.qubits(),
        });
    }
    if which > 1 {
        return Err(Error::BadQubits(format!("factor {which} of a two-qubit state")));
    }
    let mut out = ComplexMatrix::zeros_unchecked(4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let (src_r, src_c) = if which == 1 {
                        (2 * a + b2, 2 * a2 + b)
                    } else {
                        (2 * a2 + b, 2 * a + b2)
                    };
                    out[(2 * a + b, 2 * a2 + b2)] = m[(src_r, src_c)];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn psi_plus() -> DensityMatrix {
        DensityMatrix::pure(&BellOutcome::PsiPlus.amplitudes()).unwrap()
    }

    #[test]
    fn rho_l_examples() {
        assert!(make_rho_l(1.0, FRAC_PI_4).unwrap().max_abs_diff(&psi_plus()) < 1e-15);
        assert!(make_rho_l(0.0, 1.234).unwrap().max_abs_diff(&ket00()) == 0.0);

        let a = 0.45 * PI;
        let m = make_rho_l(0.75, a).unwrap();
        let expect = [
            (0, 0, 0.25),
            (1, 1, 0.75 * a.cos().powi(2)),
            (2, 2, 0.75 * a.sin().powi(2)),
            (1, 2, 0.75 * a.cos() * a.sin()),
            (2, 1, 0.75 * a.cos() * a.sin()),
        ];
        for i in 0..4 {
            for j in 0..4 {
                let want = expect
                    .iter()
                    .find(|e| e.0 == i && e.1 == j)
                    .map_or(0.0, |e| e.2);
                assert!((m.get(i, j) - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rho_r_examples() {
        assert!(make_rho_r(1.0, FRAC_PI_4).unwrap().max_abs_diff(&psi_plus()) < 1e-15);
        let a = 0.45 * PI;
        let m = make_rho_r(0.75, a).unwrap();
        assert!((m.get(1, 1).re - 0.75 * a.sin().powi(2)).abs() < 1e-15);
        for &alpha in &[0.0, 0.3, 0.7, 1.2, PI / 2.0] {
            let l = make_rho_l(0.6, PI / 2.0 - alpha).unwrap();
            let r = make_rho_r(0.6, alpha).unwrap();
            assert!(l.max_abs_diff(&r) < 1e-15);
        }
    }

    #[test]
    fn rho_1_examples() {
        assert!(make_rho_1(1.0).unwrap().max_abs_diff(&psi_plus()) < 1e-15);
        assert_eq!(make_rho_1(0.0).unwrap(), ket00());
        let m = make_rho_1(0.5).unwrap();
        let want = ComplexMatrix::from_real(
            4,
            &[
                0.5, 0.0, 0.0, 0.0, //
                0.0, 0.25, 0.25, 0.0, //
                0.0, 0.25, 0.25, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert!(m.matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn constructors_reject_out_of_range() {
        assert!(matches!(
            make_rho_l(1.1, 0.3),
            Err(Error::OutOfRange { name: "p", .. })
        ));
        assert!(matches!(
            make_rho_r(0.5, -0.1),
            Err(Error::OutOfRange { name: "alpha", .. })
        ));
        assert!(make_rho_r(0.5, 3.2).is_err());
        assert!(make_rho_1(f64::NAN).is_err());
        assert!(ChainParams::new(0.5, 0.5, 1.5).is_err());
    }

    #[test]
    fn bell_projectors() {
        let psi = bell_projector(BellOutcome::PsiPlus);
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((psi[(i, j)].re - 0.5).abs() < 1e-15);
        }
        let phim = bell_projector(BellOutcome::PhiMinus);
        assert!((phim[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((phim[(3, 3)].re - 0.5).abs() < 1e-15);
        assert!((phim[(0, 3)].re + 0.5).abs() < 1e-15);
        assert!((phim[(3, 0)].re + 0.5).abs() < 1e-15);
        for o in BellOutcome::ALL {
            let p = bell_projector(o);
            assert!((&p * &p).max_abs_diff(&p) < 1e-15);
            assert!((p.trace().re - 1.0).abs() < 1e-15);
        }
        // the four projectors resolve the identity
        let sum = BellOutcome::ALL
            .iter()
            .map(|&o| bell_projector(o))
            .reduce(|a, b| &a + &b)
            .unwrap();
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(4).unwrap()) < 1e-15);
    }

    #[test]
    fn tensor_and_trace() {
        let zero = DensityMatrix::pure(&[ONE, ZERO]).unwrap();
        let plus = DensityMatrix::pure(&[
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let t = tensor(&zero, &plus).unwrap();
        assert_eq!(t.dim(), 4);
        assert!((t.matrix().trace().re - 1.0).abs() < 1e-15);

        let bb = tensor(&psi_plus(), &psi_plus()).unwrap();
        assert_eq!(bb.dim(), 16);
        assert!((bb.purity() - 1.0).abs() < 1e-14);
        assert!(tensor(&bb, &zero).is_err());
        assert!(partial_trace(&bb, &[0, 1]).unwrap().max_abs_diff(&psi_plus()) < 1e-15);
        // product across the (12|34) cut: reduced state on 0,1 is still pure
        assert!((partial_trace(&bb, &[0, 1]).unwrap().purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let reduced = partial_trace(&psi_plus(), &[0]).unwrap();
        let half = ComplexMatrix::identity(2).unwrap().scale(0.5);
        assert!(reduced.matrix().max_abs_diff(&half) < 1e-15);

        let r = partial_trace(&ket00(), &[1]).unwrap();
        assert_eq!(r.get(0, 0), ONE);
        assert_eq!(r.get(1, 1), ZERO);

        assert!(partial_trace(&ket00(), &[2]).is_err());
        assert!(partial_trace(&ket00(), &[0, 0]).is_err());
        assert!(partial_trace(&ket00(), &[]).is_err());
    }

    #[test]
    fn partial_trace_respects_keep_order() {
        let l = make_rho_l(0.7, 0.3).unwrap();
        let swapped = partial_trace(&l, &[1, 0]).unwrap();
        let r = make_rho_r(0.7, 0.3).unwrap();
        // exchanging the two factors of rho_L(alpha) gives rho_R(alpha)
        assert!(swapped.max_abs_diff(&r) < 1e-15);
    }

    #[test]
    fn correlation_examples() {
        let r = correlation_matrix(&psi_plus()).unwrap();
        let want = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        for (row, w) in r.iter().zip(&want) {
            for (x, y) in row.iter().zip(w) {
                assert!((x - y).abs() < 1e-15);
            }
        }
        let r = correlation_matrix(&ket00()).unwrap();
        assert_eq!(r, [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        for &p1 in &[0.0, 0.13, 0.5, 0.9, 1.0] {
            let r = correlation_matrix(&make_rho_1(p1).unwrap()).unwrap();
            let want = [[p1, 0.0, 0.0], [0.0, p1, 0.0], [0.0, 0.0, 1.0 - 2.0 * p1]];
            for i in 0..3 {
                for j in 0..3 {
                    assert!((r[i][j] - want[i][j]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(4).unwrap()).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(4).unwrap().scale(0.25)).is_ok());
        let bad = ComplexMatrix::from_diag(&[1.5, -0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NotPositive(_))));
        let skew = ComplexMatrix::from_real(2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn partial_transpose_involution() {
        let m = make_rho_l(0.8, 0.9).unwrap().into_matrix();
        let pt = partial_transpose_second(&m).unwrap();
        assert_eq!(partial_transpose_second(&pt).unwrap(), m);
        // full transpose = PT_A after PT_B
        let full = partial_transpose(&pt, 0).unwrap();
        assert_eq!(full, m.transpose());
    }
}
