use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use super::closed::{p_k_limit, werner_violates, WeightSequence};
use crate::criteria::{wings_nonviolating, CHSH_TOL};
use crate::error::{Error, Result};
use crate::qstate::ChainParams;

pub const DEFAULT_K_MAX: u32 = 512;

/// Smallest number of all-`Psi` Bell measurements after which the end-to-end
/// state violates CHSH.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CriticalNumber {
    Activated { n_swaps: u32, p_k: f64 },
    /// The `k -> inf` limit violates but no `k <= k_max` does yet.
    BeyondSearch { k_max: u32, limit: f64 },
    /// Neither any searched `p_k` nor the limit violates.
    Never { limit: f64 },
    /// The closed form is undefined for these parameters.
    Undefined { reason: String },
}

impl CriticalNumber {
    pub fn n_swaps(&self) -> Option<u32> {
        match self {
            CriticalNumber::Activated { n_swaps, .. } => Some(*n_swaps),
            _ => None,
        }
    }
}

pub fn critical_n(params: &ChainParams, k_max: u32) -> Result<CriticalNumber> {
    if k_max < 2 {
        return Err(Error::OutOfRange {
            name: "k_max",
            value: k_max as f64,
            range: "k_max >= 2",
        });
    }
    if params.p == 0.0 {
        // separable wings: nothing entangled survives a swap
        return Ok(CriticalNumber::Never { limit: 0.0 });
    }
    let mut seq = match WeightSequence::new(params) {
        Ok(seq) => seq,
        Err(e) => {
            return Ok(CriticalNumber::Undefined {
                reason: e.to_string(),
            })
        }
    };
    let limit = p_k_limit(params)?;
    let mut first = None;
    for _ in 2..=k_max {
        let (k, pk) = match seq.next_weight() {
            Ok(v) => v,
            Err(e) => {
                return Ok(CriticalNumber::Undefined {
                    reason: e.to_string(),
                })
            }
        };
        if werner_violates(pk) {
            return Ok(CriticalNumber::Activated {
                n_swaps: 2 * (k - 1),
                p_k: pk,
            });
        }
        // p_k is monotone in k, so it lies between p_2 and the limit.
        let p2 = *first.get_or_insert(pk);
        if !werner_violates(limit) || (k > 2 && pk <= p2) {
            return Ok(CriticalNumber::Never { limit });
        }
    }
    if werner_violates(limit) {
        Ok(CriticalNumber::BeyondSearch { k_max, limit })
    } else {
        Ok(CriticalNumber::Never { limit })
    }
}

/// Range of entanglement angles around `pi/2` for which all-`Psi` swapping
/// eventually activates CHSH while the wing states do not violate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaWindow {
    pub lo: f64,
    pub hi: f64,
}

impl AlphaWindow {
    pub fn contains(&self, alpha: f64) -> bool {
        alpha > self.lo && alpha < self.hi
    }

    /// `count` evenly spaced interior angles.
    pub fn interior(&self, count: usize) -> Vec<f64> {
        (1..=count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (count + 1) as f64)
            .collect()
    }
}

fn asymptotically_activating(p: f64, alpha: f64) -> bool {
    let Ok(params) = ChainParams::new(p, alpha, 0.5) else {
        return false;
    };
    if !wings_nonviolating(&params, CHSH_TOL) {
        return false;
    }
    p_k_limit(&params).is_ok_and(werner_violates)
}

/// Locates the activating window by a coarse scan of `(pi/4, pi/2]` followed by
/// bisection of its lower edge. The window is symmetric about `pi/2`.
pub fn activating_window(p: f64) -> Result<Option<AlphaWindow>> {
    crate::error::check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    const SAMPLES: usize = 2000;
    let alpha_at = |i: usize| FRAC_PI_4 + (FRAC_PI_2 - FRAC_PI_4) * i as f64 / SAMPLES as f64;
    let Some(first) = (1..=SAMPLES).find(|&i| asymptotically_activating(p, alpha_at(i))) else {
        return Ok(None);
    };
    let (mut bad, mut good) = (alpha_at(first - 1), alpha_at(first));
    for _ in 0..80 {
        let mid = 0.5 * (bad + good);
        if asymptotically_activating(p, mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(Some(AlphaWindow {
        lo: good,
        hi: PI - good,
    }))
}
