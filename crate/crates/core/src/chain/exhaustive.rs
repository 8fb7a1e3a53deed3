//! Enumeration of every Bell-outcome configuration for contiguous sets of
//! measuring parties.
//!
//! Parties are `..., P_-2, P_-1, P_1, P_2, ...`; `P_-1` and `P_1` share `rho_1`,
//! left-wing neighbours share `rho_L`, right-wing neighbours share `rho_R`. A
//! contiguous set of `m` measuring parties consumes `m + 1` consecutive links
//! and leaves a state between the two parties that bracket it. Only the
//! pattern of links matters, so sets are indexed by where `rho_1` falls.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{chsh_report, ppt_report, CHSH_TOL, PPT_TOL};
use crate::error::{Error, Result};
use crate::qstate::{BellOutcome, ChainParams, DensityMatrix};
use crate::swap::{bell_swap, phase_correct};

pub const MAX_MEASURING_PARTIES: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MeasuringSet {
    /// `P_-left .. P_-1` together with `P_1 .. P_right`; the central link is
    /// inside the window.
    Central { left: u32, right: u32 },
    /// `parties` measuring parties entirely inside the left wing.
    LeftWing { parties: u32 },
    /// `parties` measuring parties entirely inside the right wing.
    RightWing { parties: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Link {
    Left,
    Central,
    Right,
}

impl MeasuringSet {
    /// Every distinct link pattern with `m` measuring parties: the central
    /// placements from all-left to all-right, then the two wing-only sets.
    pub fn all_with(m: u32) -> Vec<MeasuringSet> {
        let mut out: Vec<_> = (0..=m)
            .rev()
            .map(|left| MeasuringSet::Central {
                left,
                right: m - left,
            })
            .collect();
        out.push(MeasuringSet::LeftWing { parties: m });
        out.push(MeasuringSet::RightWing { parties: m });
        out
    }

    pub fn parties(&self) -> u32 {
        match *self {
            MeasuringSet::Central { left, right } => left + right,
            MeasuringSet::LeftWing { parties } | MeasuringSet::RightWing { parties } => parties,
        }
    }

    /// Party indices, left to right.
    pub fn members(&self) -> Vec<i32> {
        match *self {
            MeasuringSet::Central { left, right } => (1..=left as i32)
                .rev()
                .map(|i| -i)
                .chain(1..=right as i32)
                .collect(),
            MeasuringSet::LeftWing { parties } => {
                (2..=parties as i32 + 1).rev().map(|i| -i).collect()
            }
            MeasuringSet::RightWing { parties } => (2..=parties as i32 + 1).collect(),
        }
    }

    /// The two parties that end up sharing the output state.
    pub fn end_parties(&self) -> (i32, i32) {
        match *self {
            MeasuringSet::Central { left, right } => (-(left as i32 + 1), right as i32 + 1),
            MeasuringSet::LeftWing { parties } => (-(parties as i32 + 2), -1),
            MeasuringSet::RightWing { parties } => (1, parties as i32 + 2),
        }
    }

    /// Both end parties sit at the same distance from the centre.
    pub fn is_symmetric(&self) -> bool {
        matches!(*self, MeasuringSet::Central { left, right } if left == right)
    }

    fn links(&self) -> Vec<Link> {
        let m = self.parties() as usize;
        match *self {
            MeasuringSet::Central { left, .. } => (0..=m)
                .map(|i| match i.cmp(&(left as usize)) {
                    std::cmp::Ordering::Less => Link::Left,
                    std::cmp::Ordering::Equal => Link::Central,
                    std::cmp::Ordering::Greater => Link::Right,
                })
                .collect(),
            MeasuringSet::LeftWing { .. } => vec![Link::Left; m + 1],
            MeasuringSet::RightWing { .. } => vec![Link::Right; m + 1],
        }
    }

    pub fn link_states(&self, params: &ChainParams) -> Vec<DensityMatrix> {
        self.links()
            .into_iter()
            .map(|l| match l {
                Link::Left => params.rho_l(),
                Link::Central => params.rho_1(),
                Link::Right => params.rho_r(),
            })
            .collect()
    }
}

impl fmt::Display for MeasuringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members().iter().map(|i| format!("P{i}")).collect();
        f.write_str(&names.join(" "))
    }
}

/// One outcome configuration with a defined post-measurement state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub outcomes: Vec<BellOutcome>,
    pub probability: f64,
    pub m_value: f64,
    pub violates: bool,
}

impl Branch {
    pub fn all_psi(&self) -> bool {
        self.outcomes.iter().all(|o| o.is_psi())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetReport {
    pub set: MeasuringSet,
    pub end_parties: (i32, i32),
    /// `4^m`.
    pub configurations: u64,
    /// Configurations whose probability exceeded the zero threshold at every step.
    pub defined_branches: u64,
    pub probability_sum: f64,
    /// Horodecki value of the all-`Psi+` configuration, if it is defined.
    pub all_psi_m_value: Option<f64>,
    pub all_psi_violates: bool,
    pub violating: Vec<Branch>,
    pub max_m_value: f64,
    /// Largest Horodecki value among configurations containing a `Phi` outcome.
    pub max_m_value_with_phi: f64,
    pub phi_branches: u64,
    /// `Phi`-containing branches whose output passes the PPT test.
    pub phi_branches_separable: u64,
}

impl SetReport {
    /// No configuration activates unless the all-`Psi` one does.
    pub fn rule_holds(&self) -> bool {
        self.all_psi_violates || self.violating.is_empty()
    }

    /// Total probability of the violating configurations.
    pub fn violating_probability(&self) -> f64 {
        self.violating.iter().fold(0.0, |acc, b| acc + b.probability)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustiveReport {
    pub params: ChainParams,
    pub m_parties: u32,
    pub sets: Vec<SetReport>,
}

impl ExhaustiveReport {
    pub fn violating_branches(&self) -> usize {
        self.sets.iter().map(|s| s.violating.len()).sum()
    }

    pub fn any_all_psi_activation(&self) -> bool {
        self.sets.iter().any(|s| s.all_psi_violates)
    }

    pub fn rule_holds(&self) -> bool {
        self.sets.iter().all(SetReport::rule_holds)
    }
}

/// Enumerates all sets of `1..=m_parties` measuring parties and all `4^m`
/// outcome configurations of each.
pub fn exhaustive_search(params: &ChainParams, m_parties: u32) -> Result<ExhaustiveReport> {
    if !(1..=MAX_MEASURING_PARTIES).contains(&m_parties) {
        return Err(Error::OutOfRange {
            name: "m_parties",
            value: m_parties as f64,
            range: "1..=7",
        });
    }
    let sets: Vec<MeasuringSet> = (1..=m_parties).flat_map(MeasuringSet::all_with).collect();
    let sets = sets
        .par_iter()
        .map(|set| enumerate_set(params, *set))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExhaustiveReport {
        params: *params,
        m_parties,
        sets,
    })
}

/// Enumerates the configurations of a single measuring set.
pub fn enumerate_set(params: &ChainParams, set: MeasuringSet) -> Result<SetReport> {
    let links = set.link_states(params);
    let mut report = SetReport {
        set,
        end_parties: set.end_parties(),
        configurations: 4u64.pow(set.parties()),
        defined_branches: 0,
        probability_sum: 0.0,
        all_psi_m_value: None,
        all_psi_violates: false,
        violating: Vec::new(),
        max_m_value: f64::NEG_INFINITY,
        max_m_value_with_phi: f64::NEG_INFINITY,
        phi_branches: 0,
        phi_branches_separable: 0,
    };
    let mut outcomes = Vec::with_capacity(links.len() - 1);
    descend(&links, 1, &links[0], 1.0, &mut outcomes, &mut report)?;
    Ok(report)
}

fn descend(
    links: &[DensityMatrix],
    next: usize,
    state: &DensityMatrix,
    probability: f64,
    outcomes: &mut Vec<BellOutcome>,
    report: &mut SetReport,
) -> Result<()> {
    if next == links.len() {
        return record(state, probability, outcomes, report);
    }
    for outcome in BellOutcome::ALL {
        let r = bell_swap(state, &links[next], outcome)?;
        let Ok(post) = r.state() else {
            continue;
        };
        let post = phase_correct(post, outcome)?;
        outcomes.push(outcome);
        descend(links, next + 1, &post, probability * r.probability, outcomes, report)?;
        outcomes.pop();
    }
    Ok(())
}

fn record(
    state: &DensityMatrix,
    probability: f64,
    outcomes: &[BellOutcome],
    report: &mut SetReport,
) -> Result<()> {
    let chsh = chsh_report(state, CHSH_TOL)?;
    report.defined_branches += 1;
    report.probability_sum += probability;
    report.max_m_value = report.max_m_value.max(chsh.m_value);

    let all_psi = outcomes.iter().all(|o| o.is_psi());
    if all_psi && chsh.violates {
        report.all_psi_violates = true;
    }
    if outcomes.iter().all(|&o| o == BellOutcome::PsiPlus) {
        report.all_psi_m_value = Some(chsh.m_value);
    }
    if !all_psi {
        report.phi_branches += 1;
        report.max_m_value_with_phi = report.max_m_value_with_phi.max(chsh.m_value);
        if ppt_report(state, PPT_TOL)?.separable {
            report.phi_branches_separable += 1;
        }
    }
    if chsh.violates {
        report.violating.push(Branch {
            outcomes: outcomes.to_vec(),
            probability,
            m_value: chsh.m_value,
            violates: true,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn set_geometry() {
        let sets = MeasuringSet::all_with(2);
        assert_eq!(sets.len(), 5);
        let sym = MeasuringSet::Central { left: 1, right: 1 };
        assert!(sets.contains(&sym));
        assert!(sym.is_symmetric());
        assert_eq!(sym.members(), vec![-1, 1]);
        assert_eq!(sym.end_parties(), (-2, 2));
        assert_eq!(
            MeasuringSet::Central { left: 0, right: 1 }.end_parties(),
            (-1, 2)
        );
        assert_eq!(
            MeasuringSet::Central { left: 3, right: 0 }.members(),
            vec![-3, -2, -1]
        );
        assert_eq!(MeasuringSet::RightWing { parties: 2 }.members(), vec![2, 3]);
        assert_eq!(MeasuringSet::RightWing { parties: 2 }.end_parties(), (1, 4));
        assert_eq!(MeasuringSet::LeftWing { parties: 2 }.members(), vec![-3, -2]);
        assert_eq!(sym.to_string(), "P-1 P1");
    }

    #[test]
    fn link_patterns() {
        let pr = ChainParams::new(0.7, 0.4 * PI, 0.2).unwrap();
        let links = MeasuringSet::Central { left: 1, right: 2 }.link_states(&pr);
        assert_eq!(links, vec![pr.rho_l(), pr.rho_1(), pr.rho_r(), pr.rho_r()]);
        let links = MeasuringSet::LeftWing { parties: 1 }.link_states(&pr);
        assert_eq!(links, vec![pr.rho_l(), pr.rho_l()]);
    }

    #[test]
    fn bounds_are_enforced() {
        let pr = ChainParams::new(0.7, 0.4 * PI, 0.2).unwrap();
        assert!(exhaustive_search(&pr, 0).is_err());
        assert!(exhaustive_search(&pr, 8).is_err());
    }

    #[test]
    fn only_symmetric_psi_pairs_activate_at_two_parties() {
        let pr = ChainParams::new(0.75, 0.45 * PI, 0.3).unwrap();
        let report = exhaustive_search(&pr, 2).unwrap();
        for s in &report.sets {
            assert!((s.probability_sum - 1.0).abs() < 1e-9);
            if s.set == (MeasuringSet::Central { left: 1, right: 1 }) {
                assert_eq!(s.violating.len(), 4);
                assert!(s.violating.iter().all(Branch::all_psi));
            } else {
                assert!(s.violating.is_empty(), "{}", s.set);
            }
        }
        assert!(report.rule_holds());
    }
}
