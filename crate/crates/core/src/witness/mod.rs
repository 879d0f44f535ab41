//! Explicit cycles and cocycles certifying the low-degree homology of both
//! complexes.

mod cocycles;
mod families;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cdp::PartitionTriple;
use crate::chain::ChainError;
use crate::signs::SignError;

pub use cocycles::{
    build_h0_witnesses, build_h1_witnesses, build_h2_witnesses, build_h3_witnesses, cdp_boundary_parity, certify, sweep, CocycleCheck, CycleCheck,
    complete_cdp, planar_path, GroupReport, WitnessContext, WitnessGroup,
};
pub use families::{
    boundary_parity, build_domain_families, build_named_rectangles, build_u, cancellation_audit, expected_u_terms,
    CancellationAudit, CancellationEntry, FamilyMember, NamedRectangle, UConstruction,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("cannot build {name}: {reason}")]
    Construction { name: String, reason: String },
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A mod-2 chain: the sorted set of basis keys with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessChain<K> {
    pub name: String,
    pub grading: usize,
    pub terms: Vec<K>,
}

impl<K: Ord + Clone> WitnessChain<K> {
    pub fn new(name: impl Into<String>, grading: usize, terms: impl IntoIterator<Item = K>) -> Self {
        let mut acc = std::collections::BTreeMap::<K, bool>::new();
        for t in terms {
            let e = acc.entry(t).or_insert(false);
            *e = !*e;
        }
        WitnessChain { name: name.into(), grading, terms: acc.into_iter().filter(|(_, b)| *b).map(|(k, _)| k).collect() }
    }

    /// Symmetric difference with `other`.
    pub fn add(&mut self, other: impl IntoIterator<Item = K>) {
        let terms = std::mem::take(&mut self.terms);
        *self = WitnessChain::new(std::mem::take(&mut self.name), self.grading, terms.into_iter().chain(other));
    }
}

type Rule = dyn Fn(&PartitionTriple) -> bool + Send + Sync;

/// A mod-2 cochain given by a closed-form rule on triples.
#[derive(Clone)]
pub struct WitnessCochain {
    pub name: String,
    pub grading: usize,
    rule: Arc<Rule>,
}

impl WitnessCochain {
    pub fn new(name: impl Into<String>, grading: usize, rule: impl Fn(&PartitionTriple) -> bool + Send + Sync + 'static) -> Self {
        WitnessCochain { name: name.into(), grading, rule: Arc::new(rule) }
    }

    /// Value on a basis triple; zero off its grading.
    pub fn eval(&self, t: &PartitionTriple) -> bool {
        t.grading() == self.grading && (self.rule)(t)
    }

    pub fn pair(&self, chain: &WitnessChain<PartitionTriple>) -> bool {
        chain.terms.iter().filter(|t| self.eval(t)).count() % 2 == 1
    }
}

impl fmt::Debug for WitnessCochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WitnessCochain({}, grading {})", self.name, self.grading)
    }
}

/// Upper bound `Σ_{l ≤ k/2} C(n, k − 2l)` on the rank in grading `k`.
pub fn rank_bound(n: usize, k: usize) -> u64 {
    (0..=k / 2).map(|l| binomial(n, k - 2 * l)).sum()
}

/// Witness counts claimed in gradings 0 to 3.
pub fn claimed_rank(n: usize, k: usize) -> Option<u64> {
    match k {
        0 => Some(1),
        1 => Some(n as u64),
        2 => Some(binomial(n, 2) + 1),
        3 => Some(binomial(n, 3) + n as u64),
        _ => None,
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub grading: usize,
    pub witnesses: usize,
    pub claimed: u64,
    pub bound: u64,
    pub certified: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(rank_bound(4, 2), 7);
        assert_eq!(rank_bound(4, 3), 8);
        for n in 2..8 {
            assert_eq!(rank_bound(n, 0), 1);
            for k in 0..4 {
                assert_eq!(rank_bound(n, k), claimed_rank(n, k).unwrap());
            }
        }
    }

    #[test]
    fn chain_add_is_symmetric_difference() {
        let mut c = WitnessChain::new("c", 0, [1, 2, 2, 3]);
        assert_eq!(c.terms, vec![1, 3]);
        c.add([3, 4]);
        assert_eq!(c.terms, vec![1, 4]);
    }
}
