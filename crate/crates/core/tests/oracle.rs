//! Closed forms and the chain step against a from-scratch simulation of the
//! whole three-link chain on six qubits.

use std::f64::consts::{FRAC_PI_4, PI};

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use swapchain_core::chain::{
    p_k_closed, p_k_limit, p_rnk_closed, rho_k_closed, rho_rn_closed, rho_rnk_closed,
    simulate_all_psi, simulate_core_with_wing, simulate_right_wing, ACTIVATION_THRESHOLD,
};
use swapchain_core::criteria::{chsh_report, initial_gate, CHSH_TOL};
use swapchain_core::{chain_step, BellOutcome, ChainParams, DensityMatrix};

type C = Complex64;

fn dense(rho: &DensityMatrix) -> Vec<C> {
    rho.matrix().entries().to_vec()
}

fn kron(a: &[C], da: usize, b: &[C], db: usize) -> Vec<C> {
    let d = da * db;
    let mut out = vec![C::new(0.0, 0.0); d * d];
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k) * d + j * db + l] = a[i * da + j] * b[k * db + l];
                }
            }
        }
    }
    out
}

/// `L ⊗ M ⊗ R` on qubits A..F, project (B, C) and (D, E) onto the given Bell
/// vectors and keep (A, F).
fn three_link_chain(l: &DensityMatrix, m: &DensityMatrix, r: &DensityMatrix, lo: BellOutcome, ro: BellOutcome) -> (f64, Vec<C>) {
    let full = kron(&kron(&dense(l), 4, &dense(m), 4), 16, &dense(r), 4);
    let (bl, br) = (lo.amplitudes(), ro.amplitudes());
    let mut out = vec![C::new(0.0, 0.0); 16];
    let idx = |a: usize, bc: usize, de: usize, f: usize| (a << 5) | (bc << 3) | (de << 1) | f;
    for a in 0..2 {
        for f in 0..2 {
            for a2 in 0..2 {
                for f2 in 0..2 {
                    let mut acc = C::new(0.0, 0.0);
                    for bc in 0..4 {
                        for de in 0..4 {
                            for bc2 in 0..4 {
                                for de2 in 0..4 {
                                    let amp = (bl[bc] * br[de]).conj() * bl[bc2] * br[de2];
                                    acc += amp * full[idx(a, bc, de, f) * 64 + idx(a2, bc2, de2, f2)];
                                }
                            }
                        }
                    }
                    out[(a * 2 + f) * 4 + a2 * 2 + f2] = acc;
                }
            }
        }
    }
    let prob = (0..4).map(|i| out[i * 5].re).sum::<f64>();
    (prob, out.into_iter().map(|z| z / prob).collect())
}

fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn chain_step_matches_six_qubit_simulation() {
    let pr = ChainParams::new(0.75, 0.45 * PI, 0.3).unwrap();
    for lo in BellOutcome::ALL {
        for ro in BellOutcome::ALL {
            let (prob, _) = three_link_chain(&pr.rho_l(), &pr.rho_1(), &pr.rho_r(), lo, ro);
            let step = chain_step(&pr.rho_1(), &pr, lo, ro).unwrap();
            assert_abs_diff_eq!(prob, step.probability, epsilon = 1e-14);
        }
    }
    let (prob, state) = three_link_chain(
        &pr.rho_l(),
        &pr.rho_1(),
        &pr.rho_r(),
        BellOutcome::PsiPlus,
        BellOutcome::PsiPlus,
    );
    assert!(prob > 0.0);
    let closed = rho_k_closed(2, &pr).unwrap();
    assert!(max_diff(&state, closed.matrix().entries()) < 1e-12);
    assert_abs_diff_eq!(1.0 - state[0].re, 0.7141692286092137, epsilon = 1e-12);
}

#[test]
fn all_psi_matches_closed_form_up_to_eight() {
    for &(p, a, p1) in &[
        (0.75, 0.45 * PI, 0.01),
        (0.9, 0.3, 0.5),
        (0.4, 2.0, 0.8),
        (0.66, FRAC_PI_4, 0.2),
        (1.0, 0.4 * PI, 0.1),
    ] {
        let pr = ChainParams::new(p, a, p1).unwrap();
        for k in 1..=8 {
            let sim = simulate_all_psi(k, &pr).unwrap();
            assert!(sim.state.max_abs_diff(&rho_k_closed(k, &pr).unwrap()) < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn monotone_rise_to_the_limit(p in 0.05..=1.0f64, a in 0.26 * PI..0.74 * PI, p1 in 0.001..=1.0f64) {
        let pr = ChainParams::new(p, a, p1).unwrap();
        let x = 1.0 + (p - 1.0) / (p * (2.0 * a).cos());
        prop_assume!(x < 1.0 / p1 - 1e-9);
        let limit = p_k_limit(&pr).unwrap();
        prop_assert!((limit - 1.0 / x).abs() < 1e-9);
        let mut last = p_k_closed(1, &pr).unwrap();
        for k in 2..=40 {
            let q = p_k_closed(k, &pr).unwrap();
            prop_assert!(q > last || (q - last).abs() < 1e-15 && (q - limit).abs() < 1e-12);
            prop_assert!(q <= limit + 1e-12);
            last = q;
        }
    }

    #[test]
    fn wing_and_joined_closed_forms(n in 1u32..=6, k in 1u32..=6, p in 0.0..=1.0f64, a in 0.26 * PI..0.49 * PI, p1 in 0.0..=ACTIVATION_THRESHOLD) {
        let pr = ChainParams::new(p, a, p1).unwrap();
        prop_assume!(initial_gate(&pr) && p > 0.0);
        let wing = rho_rn_closed(n, p, a).unwrap();
        let sim = simulate_right_wing(n, p, a).unwrap();
        prop_assert!(wing.state.max_abs_diff(&sim.state) < 1e-10);
        if n >= 2 && p < 1.0 {
            prop_assert!(wing.p_rn < p);
            prop_assert!(wing.alpha_n > a);
        }
        prop_assert!(!chsh_report(&wing.state, CHSH_TOL).unwrap().violates);

        let q = p_rnk_closed(n, k, &pr).unwrap();
        prop_assert!(q <= wing.p_rn);
        if p_k_closed(k, &pr).unwrap() < 1.0 && wing.cos_n.powi(2) > 1e-12 {
            prop_assert!(q < wing.p_rn);
        }
        let (_, joined) = rho_rnk_closed(n, k, &pr).unwrap();
        prop_assert!(!chsh_report(&joined, CHSH_TOL).unwrap().violates);
        // a vanishing joining probability leaves nothing to compare against
        if let Ok(sim) = simulate_core_with_wing(n, k, &pr) {
            prop_assert!(joined.max_abs_diff(&sim.state) < 1e-10);
        }
    }
}
