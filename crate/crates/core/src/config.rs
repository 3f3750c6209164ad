//! Analysis configuration shared by all engines.

use alloc::boxed::Box;

use crate::symcore::solver::Domain;

/// Cooperative cancellation: engines poll this between steps so callers can
/// impose wall-clock limits without the core depending on a clock.
pub trait StopToken {
    fn should_stop(&self) -> bool;
}

/// Never stops; the default.
pub struct NeverStop;

impl StopToken for NeverStop {
    fn should_stop(&self) -> bool {
        false
    }
}

pub struct AnalysisConfig {
    /// Maximum loop-body executions explored per path.
    pub loop_bound: u32,
    /// Bounded self-application depth for call-graph cycles.
    pub call_depth: u32,
    /// Maximum summary entries per function, and the baseline state budget.
    pub paths_max: usize,
    /// Maximum events per recombined feature path.
    pub trace_max: usize,
    /// Inclusive integer domain the solver searches.
    pub solver_domain: Domain,
    /// Solver gives up (`Unknown`) above this many variables.
    pub solver_vars_max: usize,
    /// Internal search-node budget guarding pathological constraints.
    pub solver_nodes_max: u64,
    pub stop: Box<dyn StopToken>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            loop_bound: 8,
            call_depth: 4,
            paths_max: 4096,
            trace_max: 10_000,
            solver_domain: Domain::default(),
            solver_vars_max: 16,
            solver_nodes_max: 4_000_000,
            stop: Box::new(NeverStop),
        }
    }
}

impl AnalysisConfig {
    pub fn stopped(&self) -> bool {
        self.stop.should_stop()
    }
}
