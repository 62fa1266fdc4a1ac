//! Goldenshluger–Lepski selection over an ordered ladder of estimators.

use crate::real::Real;

/// One rung of the ladder: an estimate and the tolerance other rungs are
/// compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate<T> {
    pub order: i64,
    pub estimate: T,
    pub threshold: T,
}

/// Smallest index `i` with `|est_i - est_j| <= thr_j` for every `j > i`.
///
/// Candidates must be listed by increasing order. The last index always passes.
pub fn select_smallest<T: Real>(ladder: &[Candidate<T>]) -> usize {
    assert!(!ladder.is_empty(), "empty ladder");
    (0..ladder.len())
        .find(|&i| {
            ladder[i + 1..]
                .iter()
                .all(|c| (ladder[i].estimate - c.estimate).abs() <= c.threshold)
        })
        .expect("last candidate passes vacuously")
}

/// Largest index `i` with `|est_i - est_j| <= thr_j` for every `j < i`.
///
/// Candidates must be listed by increasing order. Index 0 always passes.
pub fn select_largest<T: Real>(ladder: &[Candidate<T>]) -> usize {
    assert!(!ladder.is_empty(), "empty ladder");
    (0..ladder.len())
        .rev()
        .find(|&i| {
            ladder[..i]
                .iter()
                .all(|c| (ladder[i].estimate - c.estimate).abs() <= c.threshold)
        })
        .expect("first candidate passes vacuously")
}
