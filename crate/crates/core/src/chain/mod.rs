//! The swapping chain: closed forms for the all-`Psi` branch, direct
//! simulation, exhaustive outcome enumeration and parameter scans.

pub mod closed;
pub mod critical;
pub mod exhaustive;
pub mod oracle;
pub mod scan;
pub mod verify;

pub use closed::{
    in_model, p_k_closed, p_k_limit, p_k_bracket, p_rnk_closed, p_rnk_uncorrected, rho_k_closed,
    rho_rn_closed, rho_rnk_closed, werner_m_value, werner_violates, ChainIndex, WingState,
    ACTIVATION_THRESHOLD,
};
pub use critical::{activating_window, critical_n, AlphaWindow, CriticalNumber, DEFAULT_K_MAX};
pub use exhaustive::{exhaustive_search, Branch, ExhaustiveReport, MeasuringSet, SetReport};
pub use oracle::{simulate_all_psi, simulate_core_with_wing, simulate_right_wing, Simulation};
pub use scan::{
    scan_activation_region, scan_critical_number, scan_initial_region, ActivationScan,
    CriticalRow, InitialRow, PhiPair, ScanGrid,
};
pub use verify::{run_verification, VerifyConfig, VerifyReport};
