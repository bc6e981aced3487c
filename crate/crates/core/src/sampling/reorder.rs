//! Distance-based reordering of a sampling distribution.
//!
//! The largest probabilities are handed out greedily to a packing of
//! vertices that are pairwise more than `l_hops` apart, so the local sets of
//! the most likely samples do not overlap. Everything left over receives the
//! remaining values in rank order.

use super::distribution::{Provenance, SamplingDistribution};
use crate::error::{Error, Result};
use crate::graph::{ball, Graph};

/// Result of [`reorder_with_packing`].
#[derive(Debug, Clone)]
pub struct Reordering {
    pub distribution: SamplingDistribution,
    /// Vertices of the packing `V_1` in the order they were chosen.
    pub packing: Vec<usize>,
}

pub fn reorder_distribution(g: &Graph, q: &SamplingDistribution, l_hops: usize) -> Result<SamplingDistribution> {
    Ok(reorder_with_packing(g, q, l_hops)?.distribution)
}

pub fn reorder_with_packing(g: &Graph, q: &SamplingDistribution, l_hops: usize) -> Result<Reordering> {
    let n = g.n();
    if q.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: q.len() });
    }
    let qv = q.probabilities();
    // alpha: vertices by descending q, ties by ascending index (stable sort)
    let mut alpha: Vec<usize> = (0..n).collect();
    alpha.sort_by(|&a, &b| qv[b].total_cmp(&qv[a]));

    let mut p = vec![0.0; n];
    // covered[v] <=> d(V_1, v) <= l_hops, i.e. v is not in D_{V_1}
    let mut covered = vec![false; n];
    let mut in_packing = vec![false; n];
    let mut packing = Vec::new();
    let mut next_value = 0;
    let mut cursor = 0;
    loop {
        // smallest rank position whose vertex lies in D_{V_1}; covered only
        // grows, so the cursor never moves back
        while cursor < n && covered[alpha[cursor]] {
            cursor += 1;
        }
        if cursor == n {
            break;
        }
        let v = alpha[cursor];
        p[v] = qv[alpha[next_value]];
        next_value += 1;
        in_packing[v] = true;
        packing.push(v);
        for u in ball(g, v, l_hops) {
            covered[u] = true;
        }
    }
    // remaining vertices in rank order take the remaining values in order
    for &v in alpha.iter().filter(|&&v| !in_packing[v]) {
        p[v] = qv[alpha[next_value]];
        next_value += 1;
    }
    debug_assert_eq!(next_value, n);

    let provenance = Provenance::Reordered(Box::new(q.provenance().clone()));
    // a permutation of a valid distribution is valid as is
    let distribution = SamplingDistribution::from_parts(p, provenance, q.floored());
    Ok(Reordering { distribution, packing })
}
