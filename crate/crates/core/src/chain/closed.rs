//! Closed forms for the mixing weights produced by all-`Psi` swapping.
//!
//! With `c = cot^2(alpha)` and `m = k - 1` symmetric steps, the inverse weight
//! of the central state is
//!
//! ```text
//! 1/p_k = c^m / p1 + (1 - c^m) ((p - 1) / (p cos 2 alpha) + 1)
//!       = 1 + c^m (1/p1 - 1) + (1 - p) / (p sin^2 alpha) * (1 + c + ... + c^(m-1))
//! ```
//!
//! The second line is the form evaluated here: it has no removable
//! singularity at `alpha = pi/4` and every term is non-negative, so
//! `p_k ∈ [0, 1]` whenever the inputs are valid.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::criteria::CHSH_TOL;
use crate::error::{check_range, Error, Result};
use crate::qstate::{werner_like_from_amplitudes, ChainParams, DensityMatrix, make_rho_1};

/// `p_k` above this value makes `rho_k` violate CHSH.
pub const ACTIVATION_THRESHOLD: f64 = FRAC_1_SQRT_2;

const SINGULAR_EPS: f64 = 1e-12;

/// Position in the symmetric chain: `rho_k` is shared by `P_-k` and `P_k`
/// after `2 (k - 1)` Bell measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ChainIndex {
    k: u32,
}

impl ChainIndex {
    pub fn from_k(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::OutOfRange {
                name: "k",
                value: 0.0,
                range: "k >= 1",
            });
        }
        Ok(Self { k })
    }

    pub fn from_n_swaps(n_swaps: u32) -> Result<Self> {
        if n_swaps % 2 != 0 {
            return Err(Error::OutOfRange {
                name: "n_swaps",
                value: n_swaps as f64,
                range: "even values",
            });
        }
        Ok(Self { k: n_swaps / 2 + 1 })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn n_swaps(self) -> u32 {
        2 * (self.k - 1)
    }
}

/// Largest Horodecki pair sum of `q |psi><psi| + (1 - q)|00><00|` with a
/// maximally entangled `psi`.
pub fn werner_m_value(q: f64) -> f64 {
    (2.0 * q * q).max(1.0 - 4.0 * q + 5.0 * q * q)
}

/// CHSH verdict for the `Psi+` / `|00>` mixture with weight `q`.
pub fn werner_violates(q: f64) -> bool {
    werner_m_value(q) > 1.0 + CHSH_TOL
}

pub fn in_model(q: f64) -> bool {
    (0.0..=1.0).contains(&q)
}

struct Geometry {
    /// `cot^2(alpha)`
    ratio: f64,
    /// `(1 - p) / (p sin^2 alpha)`
    noise: f64,
}

fn geometry(params: &ChainParams) -> Result<Geometry> {
    let (s, c) = params.alpha.sin_cos();
    if s.abs() < SINGULAR_EPS {
        return Err(Error::Singular {
            alpha: params.alpha,
            reason: "cot(alpha) is undefined",
        });
    }
    if params.p <= 0.0 {
        return Err(Error::OutOfRange {
            name: "p",
            value: params.p,
            range: "(0, 1] for the closed form",
        });
    }
    Ok(Geometry {
        ratio: (c / s) * (c / s),
        noise: (1.0 - params.p) / (params.p * s * s),
    })
}

/// `1 + c + ... + c^(m-1)`
fn geometric_sum(ratio: f64, m: u32) -> f64 {
    if (1.0 - ratio).abs() > 1e-3 {
        (1.0 - ratio.powi(m as i32)) / (1.0 - ratio)
    } else {
        let mut acc = 0.0;
        let mut term = 1.0;
        for _ in 0..m {
            acc += term;
            term *= ratio;
        }
        acc
    }
}

fn inverse_weight(m: u32, params: &ChainParams, g: &Geometry) -> Result<f64> {
    let cm = g.ratio.powi(m as i32);
    let central = if params.p1 == 0.0 {
        if cm == 0.0 {
            return Err(Error::Singular {
                alpha: params.alpha,
                reason: "p1 = 0 with cot(alpha) = 0 leaves the weight undefined",
            });
        }
        f64::INFINITY
    } else {
        cm * (1.0 / params.p1 - 1.0)
    };
    Ok(1.0 + central + geometric_sum(g.ratio, m) * g.noise)
}

/// Weight `p_k` of `|Psi+>` in the state shared by `P_-k` and `P_k` after all
/// `2 (k - 1)` measurements returned a `Psi` outcome.
pub fn p_k_closed(k: u32, params: &ChainParams) -> Result<f64> {
    ChainIndex::from_k(k)?;
    if k == 1 {
        return Ok(params.p1);
    }
    let g = geometry(params)?;
    Ok(1.0 / inverse_weight(k - 1, params, &g)?)
}

/// The same weight evaluated literally in the bracket form.
/// Singular at `cos 2 alpha = 0`; kept as a cross-check of [`p_k_closed`].
pub fn p_k_bracket(k: u32, params: &ChainParams) -> Result<f64> {
    ChainIndex::from_k(k)?;
    let ChainParams { p, alpha, p1 } = *params;
    let cos2 = (2.0 * alpha).cos();
    if cos2.abs() < SINGULAR_EPS {
        return Err(Error::Singular {
            alpha,
            reason: "cos(2 alpha) = 0",
        });
    }
    let cot = alpha.cos() / alpha.sin();
    let cm = cot.powi(2 * (k as i32 - 1));
    Ok(1.0 / (cm / p1 + (1.0 - cm) * ((p - 1.0) / (p * cos2) + 1.0)))
}

/// `lim_{k -> inf} p_k`.
pub fn p_k_limit(params: &ChainParams) -> Result<f64> {
    let g = geometry(params)?;
    if (g.ratio - 1.0).abs() < SINGULAR_EPS {
        // every step adds 2 (1/p - 1) to the inverse weight
        return Ok(if params.p >= 1.0 { params.p1 } else { 0.0 });
    }
    if g.ratio < 1.0 {
        return Ok(1.0 / (1.0 + g.noise / (1.0 - g.ratio)));
    }
    Ok(if params.p >= 1.0 && params.p1 >= 1.0 {
        1.0
    } else {
        0.0
    })
}

/// Iterates `p_2, p_3, ...` with one power evaluation per step.
pub(crate) struct WeightSequence<'a> {
    params: &'a ChainParams,
    g: Geometry,
    m: u32,
}

impl<'a> WeightSequence<'a> {
    pub(crate) fn new(params: &'a ChainParams) -> Result<Self> {
        Ok(Self {
            params,
            g: geometry(params)?,
            m: 0,
        })
    }

    /// Returns `(k, p_k)` for the next `k >= 2`.
    pub(crate) fn next_weight(&mut self) -> Result<(u32, f64)> {
        self.m += 1;
        let w = inverse_weight(self.m, self.params, &self.g)?;
        Ok((self.m + 1, 1.0 / w))
    }
}

/// `rho_k = p_k |Psi+><Psi+| + (1 - p_k) |00><00|`.
pub fn rho_k_closed(k: u32, params: &ChainParams) -> Result<DensityMatrix> {
    let q = p_k_closed(k, params)?;
    if !in_model(q) {
        return Err(Error::OutOfModel { value: q });
    }
    make_rho_1(q)
}

/// End-to-end state of `n` consecutive `rho_R` links after `n - 1` `Psi`
/// outcomes: `p_rn |Psi_n><Psi_n| + (1 - p_rn)|00><00|`,
/// `Psi_n = sin(alpha_n)|01> + cos(alpha_n)|10>`.
#[derive(Debug, Clone, PartialEq)]
pub struct WingState {
    pub n: u32,
    pub p_rn: f64,
    /// In `[0, pi]`; `cos(alpha_n)` carries the sign of `cos^n(alpha)`.
    pub alpha_n: f64,
    pub sin_n: f64,
    pub cos_n: f64,
    pub state: DensityMatrix,
}

pub fn rho_rn_closed(n: u32, p: f64, alpha: f64) -> Result<WingState> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            range: "n >= 1",
        });
    }
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    check_range("alpha", alpha, 0.0, std::f64::consts::PI, "[0, pi]")?;
    let cos2 = (2.0 * alpha).cos();
    if cos2.abs() < SINGULAR_EPS {
        return Err(Error::Singular {
            alpha,
            reason: "cos(2 alpha) = 0",
        });
    }
    let tan2n = alpha.tan().powi(2 * n as i32);
    let p_rn = -p * cos2 / (1.0 - p - p * cos2 + 2.0 * (p - 1.0) / (1.0 + tan2n));

    let (s, c) = alpha.sin_cos();
    let (sn, cn) = (s.powi(n as i32), c.powi(n as i32));
    let norm = sn.hypot(cn);
    if norm == 0.0 {
        return Err(Error::Singular {
            alpha,
            reason: "sin^n and cos^n both underflow",
        });
    }
    let (sin_n, cos_n) = (sn / norm, cn / norm);
    if !in_model(p_rn) {
        return Err(Error::OutOfModel { value: p_rn });
    }
    Ok(WingState {
        n,
        p_rn,
        alpha_n: sin_n.atan2(cos_n),
        sin_n,
        cos_n,
        state: werner_like_from_amplitudes(p_rn, sin_n, cos_n),
    })
}

/// Weight of `Psi_n` after `P_k` joins `rho_k` to the wing state
/// `rho_{R,n}` with a `Psi` outcome:
///
/// ```text
/// p_rnk = p_rn / (1 + 2 (1/p_k - 1) p_rn cos^2(alpha_n))
/// ```
///
/// An alternative quotient is available as [`p_rnk_uncorrected`]; the two differ
/// and this one agrees with direct simulation.
pub fn p_rnk_closed(n: u32, k: u32, params: &ChainParams) -> Result<f64> {
    let wing = rho_rn_closed(n, params.p, params.alpha)?;
    let pk = p_k_closed(k, params)?;
    Ok(combine_core_and_wing(pk, wing.p_rn, wing.cos_n))
}

fn combine_core_and_wing(pk: f64, p_rn: f64, cos_n: f64) -> f64 {
    let loss = p_rn * cos_n * cos_n;
    if pk == 0.0 {
        return if loss == 0.0 { p_rn } else { 0.0 };
    }
    p_rn / (1.0 + 2.0 * (1.0 / pk - 1.0) * loss)
}

/// `p_rn (sin^{2(n+1)} a + cos^{2(n+1)} a) / (1 + 2 (1/p_k - 1) p_rn cos^{2n} a)`,
/// evaluated literally.
pub fn p_rnk_uncorrected(n: u32, k: u32, params: &ChainParams) -> Result<f64> {
    let wing = rho_rn_closed(n, params.p, params.alpha)?;
    let pk = p_k_closed(k, params)?;
    let (s, c) = params.alpha.sin_cos();
    let e = 2 * (n as i32 + 1);
    let num = wing.p_rn * (s.powi(e) + c.powi(e));
    Ok(num / (1.0 + 2.0 * (1.0 / pk - 1.0) * wing.p_rn * c.powi(2 * n as i32)))
}

/// The state shared by `P_-k` and `P_{k+n}`: weight [`p_rnk_closed`] on `Psi_n`.
pub fn rho_rnk_closed(n: u32, k: u32, params: &ChainParams) -> Result<(f64, DensityMatrix)> {
    let wing = rho_rn_closed(n, params.p, params.alpha)?;
    let pk = p_k_closed(k, params)?;
    let q = combine_core_and_wing(pk, wing.p_rn, wing.cos_n);
    if !in_model(q) {
        return Err(Error::OutOfModel { value: q });
    }
    Ok((q, werner_like_from_amplitudes(q, wing.sin_n, wing.cos_n)))
}
