use crate::error::{FlowError, Result};

pub const ENV_MAX_EDGES: &str = "FLOWMECH_MAX_EDGES";

/// Desk-scale guards for the exponential routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Coalition tables, edge-subset cut enumeration, core checks.
    pub subset_edges: usize,
    /// All-orders Shapley oracle.
    pub permutation_edges: usize,
    /// Core-bound linear programs.
    pub core_bounds_edges: usize,
    /// Node-subset cut enumeration.
    pub cut_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subset_edges: 20,
            permutation_edges: 9,
            core_bounds_edges: 12,
            cut_nodes: 22,
        }
    }
}

impl Limits {
    /// Defaults, with every edge guard replaced by `FLOWMECH_MAX_EDGES` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(ENV_MAX_EDGES)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            // bit masks are u64
            let n = n.min(63);
            limits.subset_edges = n;
            limits.permutation_edges = n;
            limits.core_bounds_edges = n;
        }
        limits
    }
}

pub(crate) fn guard(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(FlowError::SizeGuard {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
