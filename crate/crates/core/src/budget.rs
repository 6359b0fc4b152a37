/// Resource limits shared by every solver and generator.
///
/// Nothing here is consulted implicitly; operations that can blow up take a
/// `&Budget` and fail with [`crate::Error::Budget`] before allocating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Upper bound on bytes for large tables (count tables, n x n matrices).
    pub memory_bytes: u64,
    /// Maximum number of candidates an exhaustive enumeration may visit.
    pub enumeration_cap: u64,
    /// Maximum dimension accepted by the inclusion-exclusion solvers.
    pub d_max: u32,
    /// Maximum value of `n * 2^d` for the inclusion-exclusion sweep.
    pub subset_work_cap: u64,
    /// Maximum size of a materialized balancing family.
    pub family_cap: u64,
    /// Maximum number of strings a SAT gadget may emit (before dedup).
    pub gadget_strings_cap: u64,
}

pub const DEFAULT_MEMORY_MB: u64 = 4096;
pub const BUDGET_ENV: &str = "HAMMCTR_BUDGET_MB";

impl Default for Budget {
    fn default() -> Self {
        Budget {
            memory_bytes: DEFAULT_MEMORY_MB << 20,
            enumeration_cap: 1 << 26,
            d_max: 24,
            subset_work_cap: 1 << 36,
            family_cap: 1_000_000,
            gadget_strings_cap: 1 << 24,
        }
    }
}

impl Budget {
    /// Default budget with the memory cap taken from `HAMMCTR_BUDGET_MB`
    /// when it is set to a positive integer.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        if let Some(mb) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&mb| mb > 0)
        {
            budget.memory_bytes = mb << 20;
        }
        budget
    }

    pub fn with_enumeration_cap(mut self, cap: u64) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn with_memory_mb(mut self, mb: u64) -> Self {
        self.memory_bytes = mb << 20;
        self
    }
}

/// `base^exp`, or `None` on overflow.
pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
