//! Parameter-plane scans: the non-violating input region, the activation
//! regions per number of measurements, the separability boundaries of the
//! `Phi` branches and critical-number curves.
//!
//! Every scan evaluates grid points in parallel and returns rows in grid
//! order, so the output does not depend on the number of worker threads.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::closed::{p_k_closed, p_k_limit, werner_violates, ChainIndex};
use super::critical::{critical_n, CriticalNumber};
use crate::criteria::{chsh_report, initial_gate, ppt_report, wings_nonviolating, CHSH_TOL, PPT_TOL};
use crate::error::{Error, Result};
use crate::qstate::{make_rho_1, make_rho_r, BellOutcome, ChainParams, DensityMatrix};
use crate::swap::bell_swap;

const BISECTION_STEPS: usize = 60;

/// Rectangular grid in the `(alpha, p)` plane; `p1` is held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub alpha_steps: usize,
    pub p_steps: usize,
    pub p1: f64,
}

impl Default for ScanGrid {
    /// `[pi/4, 3 pi/4] x [0, 1]`, 400 x 400, `p1 = 0.01`.
    fn default() -> Self {
        Self {
            alpha_min: FRAC_PI_4,
            alpha_max: 3.0 * FRAC_PI_4,
            p_min: 0.0,
            p_max: 1.0,
            alpha_steps: 400,
            p_steps: 400,
            p1: 0.01,
        }
    }
}

impl ScanGrid {
    /// The whole `[0, pi] x [0, 1]` plane.
    pub fn full_range(steps: usize, p1: f64) -> Self {
        Self {
            alpha_min: 0.0,
            alpha_max: PI,
            p_min: 0.0,
            p_max: 1.0,
            alpha_steps: steps,
            p_steps: steps,
            p1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadGrid(msg));
        for (name, v) in [
            ("alpha_min", self.alpha_min),
            ("alpha_max", self.alpha_max),
            ("p_min", self.p_min),
            ("p_max", self.p_max),
            ("p1", self.p1),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite, got {v}"));
            }
        }
        if self.alpha_min >= self.alpha_max {
            return bad(format!(
                "alpha_min ({}) must be below alpha_max ({})",
                self.alpha_min, self.alpha_max
            ));
        }
        if self.p_min >= self.p_max {
            return bad(format!(
                "p_min ({}) must be below p_max ({})",
                self.p_min, self.p_max
            ));
        }
        if self.alpha_min < 0.0 || self.alpha_max > PI {
            return bad("alpha range must lie within [0, pi]".into());
        }
        if self.p_min < 0.0 || self.p_max > 1.0 {
            return bad("p range must lie within [0, 1]".into());
        }
        if !(0.0..=1.0).contains(&self.p1) {
            return bad(format!("p1 must lie in [0, 1], got {}", self.p1));
        }
        if self.alpha_steps < 2 || self.p_steps < 2 {
            return bad("at least two steps per axis are required".into());
        }
        Ok(())
    }

    pub fn alphas(&self) -> Vec<f64> {
        linspace(self.alpha_min, self.alpha_max, self.alpha_steps)
    }

    pub fn ps(&self) -> Vec<f64> {
        linspace(self.p_min, self.p_max, self.p_steps)
    }

    /// Grid points in row-major order: `alpha` outer, `p` inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let ps = self.ps();
        self.alphas()
            .into_iter()
            .flat_map(|a| ps.iter().map(move |&p| (a, p)))
            .collect()
    }
}

/// `steps` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialRow {
    pub alpha: f64,
    pub p: f64,
    pub m_rho_l: f64,
    pub m_rho_r: f64,
    pub nonviolating: bool,
}

pub fn scan_initial_region(grid: &ScanGrid) -> Result<Vec<InitialRow>> {
    grid.validate()?;
    grid.points()
        .into_par_iter()
        .map(|(alpha, p)| {
            let params = ChainParams::new(p, alpha, grid.p1)?;
            let l = chsh_report(&params.rho_l(), CHSH_TOL)?;
            let r = chsh_report(&params.rho_r(), CHSH_TOL)?;
            Ok(InitialRow {
                alpha,
                p,
                m_rho_l: l.m_value,
                m_rho_r: r.m_value,
                nonviolating: !l.violates && !r.violates,
            })
        })
        .collect()
}

/// Largest `p` at which neither wing state violates CHSH, found by bisection
/// on the eigenvalue criterion. `None` if the wings never violate on `[0, 1]`.
pub fn initial_boundary(alpha: f64) -> Result<Option<f64>> {
    let ok = |p: f64| -> Result<bool> {
        Ok(wings_nonviolating(&ChainParams::new(p, alpha, 0.0)?, CHSH_TOL))
    };
    if ok(1.0)? {
        return Ok(None);
    }
    bisect(0.0, 1.0, ok).map(Some)
}

/// Assumes `good(lo)` and `!good(hi)`; returns the last good point.
fn bisect(mut lo: f64, mut hi: f64, good: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if good(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Activation verdicts at one grid point. `activated[i]` refers to
/// `n_list[i]`; each entry is evaluated independently.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivationRow {
    pub alpha: f64,
    pub p: f64,
    pub initial_gate: bool,
    pub activated: Vec<bool>,
    /// Smallest listed `n` that activates.
    pub n_min: Option<u32>,
    /// The `n -> inf` limit activates.
    pub asymptotic: bool,
}

/// The two link pairs whose `Phi` outcomes are checked for separability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiPair {
    /// `rho_R (x) rho_R`
    RightRight,
    /// `rho_1 (x) rho_R`
    CentralRight,
}

/// Per `alpha`, the largest `p` below which every `Phi` outcome on each pair
/// leaves a PPT state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiBoundaryRow {
    pub alpha: f64,
    pub p_star_rr: f64,
    pub p_star_1r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivationScan {
    pub grid: ScanGrid,
    pub n_list: Vec<u32>,
    pub rows: Vec<ActivationRow>,
    pub phi_boundary: Vec<PhiBoundaryRow>,
}

impl ActivationScan {
    /// Grid cells where activation at `n_list[i]` holds but fails at
    /// `n_list[i + 1]`.
    pub fn nesting_violations(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.activated.windows(2).filter(|w| w[0] && !w[1]).count())
            .sum()
    }
}

pub fn check_n_list(n_list: &[u32]) -> Result<Vec<ChainIndex>> {
    if n_list.is_empty() {
        return Err(Error::BadGrid("n_list is empty".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadGrid("n_list must be strictly increasing".into()));
    }
    n_list.iter().map(|&n| ChainIndex::from_n_swaps(n)).collect()
}

pub fn scan_activation_region(grid: &ScanGrid, n_list: &[u32]) -> Result<ActivationScan> {
    grid.validate()?;
    let indices = check_n_list(n_list)?;
    let rows = grid
        .points()
        .into_par_iter()
        .map(|(alpha, p)| activation_at(&ChainParams::new(p, alpha, grid.p1)?, &indices))
        .collect::<Result<Vec<_>>>()?;
    let phi_boundary = grid
        .alphas()
        .into_par_iter()
        .map(|alpha| {
            Ok(PhiBoundaryRow {
                alpha,
                p_star_rr: phi_separability_boundary(PhiPair::RightRight, alpha, FRAC_1_SQRT_2)?,
                p_star_1r: phi_separability_boundary(
                    PhiPair::CentralRight,
                    alpha,
                    FRAC_1_SQRT_2,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ActivationScan {
        grid: *grid,
        n_list: n_list.to_vec(),
        rows,
        phi_boundary,
    })
}

fn activation_at(params: &ChainParams, indices: &[ChainIndex]) -> Result<ActivationRow> {
    let gate = initial_gate(params);
    let activated: Vec<bool> = indices
        .iter()
        .map(|i| gate && p_k_closed(i.k(), params).is_ok_and(werner_violates))
        .collect();
    let n_min = indices
        .iter()
        .zip(&activated)
        .find(|(_, &a)| a)
        .map(|(i, _)| i.n_swaps());
    Ok(ActivationRow {
        alpha: params.alpha,
        p: params.p,
        initial_gate: gate,
        activated,
        n_min,
        asymptotic: gate && p_k_limit(params).is_ok_and(werner_violates),
    })
}

/// Post-measurement states of every defined `Phi` outcome on `pair`.
pub fn phi_branch_states(
    pair: PhiPair,
    p: f64,
    alpha: f64,
    p1: f64,
) -> Result<Vec<(BellOutcome, DensityMatrix)>> {
    let right = make_rho_r(p, alpha)?;
    let left = match pair {
        PhiPair::RightRight => right.clone(),
        PhiPair::CentralRight => make_rho_1(p1)?,
    };
    let mut out = Vec::with_capacity(2);
    for outcome in [BellOutcome::PhiPlus, BellOutcome::PhiMinus] {
        if let Ok(state) = bell_swap(&left, &right, outcome)?.into_state() {
            out.push((outcome, state));
        }
    }
    Ok(out)
}

/// Smallest partial-transpose eigenvalue over the `Phi` outcomes on `pair`;
/// `None` when no `Phi` outcome occurs.
pub fn phi_pair_min_pt(pair: PhiPair, p: f64, alpha: f64, p1: f64) -> Result<Option<f64>> {
    let mut min: Option<f64> = None;
    for (_, state) in phi_branch_states(pair, p, alpha, p1)? {
        let e = ppt_report(&state, PPT_TOL)?.min_pt_eigenvalue;
        min = Some(min.map_or(e, |m| m.min(e)));
    }
    Ok(min)
}

fn phi_pair_separable(pair: PhiPair, p: f64, alpha: f64, p1: f64) -> Result<bool> {
    Ok(phi_pair_min_pt(pair, p, alpha, p1)?.is_none_or(|e| e >= -PPT_TOL))
}

/// Largest `p` in `[0, 1]` for which the `Phi` branches of `pair` stay PPT,
/// located by bisection. Returns `1.0` if they are PPT on the whole range.
pub fn phi_separability_boundary(pair: PhiPair, alpha: f64, p1: f64) -> Result<f64> {
    if phi_pair_separable(pair, 1.0, alpha, p1)? {
        return Ok(1.0);
    }
    bisect(0.0, 1.0, |p| phi_pair_separable(pair, p, alpha, p1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalRow {
    pub alpha: f64,
    pub p1: f64,
    pub critical: CriticalNumber,
}

impl CriticalRow {
    pub fn n_c(&self) -> Option<u32> {
        self.critical.n_swaps()
    }
}

/// `n_c` over the product of `alphas` and `p1s`, `alpha` outer. Points where
/// the initial gate fails are left out.
pub fn scan_critical_number(
    p: f64,
    alphas: &[f64],
    p1s: &[f64],
    k_max: u32,
) -> Result<Vec<CriticalRow>> {
    let points: Vec<ChainParams> = alphas
        .iter()
        .flat_map(|&a| p1s.iter().map(move |&p1| ChainParams::new(p, a, p1)))
        .collect::<Result<_>>()?;
    let rows: Vec<Option<CriticalRow>> = points
        .into_par_iter()
        .map(|params| {
            if !initial_gate(&params) {
                return Ok(None);
            }
            Ok(Some(CriticalRow {
                alpha: params.alpha,
                p1: params.p1,
                critical: critical_n(&params, k_max)?,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}
