//! Branching numbers and the audit of recorded search trees.
//!
//! A node whose children shrink the measure by `r₁, …, r_k` has branching
//! number `λ`, the root `x ≥ 1` of `Σ x^(−rᵢ) = 1`. A tree whose nodes all
//! have `λ ≤ c` has `O(c^m)` leaves. The audit measure is the number of
//! clauses that still contain a universal literal, since only branching can
//! shrink it.

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::solver::{BranchRecord, SolveStats};

/// Growth rate the audited trees are checked against: `2·BOUND_BASE^m`
/// nodes at most.
pub const BOUND_BASE: f64 = 1.4143;

/// Absolute tolerance of [`branching_number`] and of its residual.
pub const LAMBDA_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TupleError {
    #[error("a branching tuple needs at least one entry")]
    Empty,
    #[error("branching tuple entries must be positive")]
    NonPositive,
}

/// Measure decreases `(r₁, …, r_k)` of one branching node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BranchTuple(Vec<u32>);

impl BranchTuple {
    pub fn new(r: Vec<u32>) -> Result<BranchTuple, TupleError> {
        if r.is_empty() {
            return Err(TupleError::Empty);
        }
        if r.contains(&0) {
            return Err(TupleError::NonPositive);
        }
        Ok(BranchTuple(r))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `Σ x^(−rᵢ) − 1`; strictly decreasing in `x` on `[1, ∞)`.
    pub fn characteristic(&self, x: f64) -> f64 {
        self.0.iter().map(|&r| x.powi(-(r as i32))).sum::<f64>() - 1.0
    }
}

/// The root `x ≥ 1` of `Σ x^(−rᵢ) = 1`, by bisection. A one-entry tuple
/// yields exactly 1.
pub fn branching_number(tuple: &BranchTuple) -> f64 {
    let k = tuple.0.len();
    if k == 1 {
        return 1.0;
    }
    let min_r = *tuple.0.iter().min().expect("nonempty") as f64;
    // Σ x^(−rᵢ) ≤ k·x^(−min r), which is below 1 past k^(1/min r).
    let mut lo = 1.0_f64;
    let mut hi = (k as f64).powf(1.0 / min_r) + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if tuple.characteristic(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `2·BOUND_BASE^m`.
pub fn node_bound(m: usize) -> f64 {
    2.0 * BOUND_BASE.powf(m as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub total_nodes: usize,
    /// Measure decreases per branching node, in record order.
    pub tuples: Vec<(i64, i64)>,
    pub worst_tuple: Option<BranchTuple>,
    pub worst_lambda: Option<f64>,
    pub bound_limit: f64,
    /// `total_nodes ≤ bound_limit`.
    pub bound_holds: bool,
    /// Records where some branch shrank the measure by less than 2.
    pub violations: Vec<BranchRecord>,
}

/// Checks a solver trace of `initial`: every branch must shrink the
/// universal-clause count by at least 2, and the tree must stay within
/// `2·1.4143^m` nodes.
pub fn audit_trace(stats: &SolveStats, initial: &Formula) -> AuditReport {
    let mut tuples = Vec::with_capacity(stats.records.len());
    let mut violations = Vec::new();
    let mut worst: Option<(BranchTuple, f64)> = None;

    for record in &stats.records {
        let (a, b) = record.tuple();
        tuples.push((a, b));
        if a < 2 || b < 2 {
            violations.push(record.clone());
        }
        let Ok(tuple) = BranchTuple::new(vec![a.max(0) as u32, b.max(0) as u32]) else {
            continue;
        };
        let lambda = branching_number(&tuple);
        if worst.as_ref().is_none_or(|(_, w)| lambda > *w) {
            worst = Some((tuple, lambda));
        }
    }

    let bound_limit = node_bound(initial.m());
    let (worst_tuple, worst_lambda) = worst.map_or((None, None), |(t, l)| (Some(t), Some(l)));
    AuditReport {
        total_nodes: stats.nodes,
        tuples,
        worst_tuple,
        worst_lambda,
        bound_limit,
        bound_holds: stats.nodes as f64 <= bound_limit,
        violations,
    }
}
