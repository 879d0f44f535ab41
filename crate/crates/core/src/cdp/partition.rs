use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// An ordered partition of `N` into positive parts. The empty partition is
/// the partition of 0.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OrderedPartition {
    parts: SmallVec<[u8; 6]>,
}

impl OrderedPartition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Panics on a zero part.
    pub fn new(parts: &[u8]) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive: {parts:?}");
        OrderedPartition { parts: SmallVec::from_slice(parts) }
    }

    pub fn single(n: u8) -> Self {
        Self::new(&[n])
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Split bits between consecutive units: `ε_i = 1` means a split after unit `i`.
    pub fn epsilon(&self) -> Vec<bool> {
        let n = self.total();
        let mut eps = vec![false; n.saturating_sub(1)];
        let mut acc = 0;
        for &p in &self.parts[..self.len().saturating_sub(1)] {
            acc += p as usize;
            eps[acc - 1] = true;
        }
        eps
    }

    pub fn from_epsilon(eps: &[bool]) -> Self {
        let mut parts = SmallVec::new();
        let mut cur = 1u8;
        for &e in eps {
            if e {
                parts.push(cur);
                cur = 1;
            } else {
                cur += 1;
            }
        }
        parts.push(cur);
        OrderedPartition { parts }
    }

    /// Unit enlargements, one per insertion position `k = 1..=m+1`
    /// (the new part 1 becomes the `k`-th part). Results may repeat.
    pub fn unit_enlargements(&self) -> Vec<(usize, OrderedPartition)> {
        (0..=self.len())
            .map(|i| {
                let mut p = self.parts.clone();
                p.insert(i, 1);
                (i + 1, OrderedPartition { parts: p })
            })
            .collect()
    }

    /// Elementary coarsenings at `k = 1..m-1` (parts `k` and `k+1` merge).
    pub fn elementary_coarsenings(&self) -> Vec<(usize, OrderedPartition)> {
        (1..self.len())
            .map(|k| {
                let mut p = self.parts.clone();
                let merged = p[k - 1] + p[k];
                p[k - 1] = merged;
                p.remove(k);
                (k, OrderedPartition { parts: p })
            })
            .collect()
    }

    /// Drops the first part; returns it with the remainder.
    pub fn initial_reduction(&self) -> Option<(u8, OrderedPartition)> {
        let (&first, rest) = self.parts.split_first()?;
        Some((first, OrderedPartition { parts: SmallVec::from_slice(rest) }))
    }

    /// Drops the last part; returns it with the remainder.
    pub fn final_reduction(&self) -> Option<(u8, OrderedPartition)> {
        let (&last, rest) = self.parts.split_last()?;
        Some((last, OrderedPartition { parts: SmallVec::from_slice(rest) }))
    }

    /// All partitions of `1..=max_total` with exactly `len` parts
    /// (for `len = 0`, only the empty partition).
    pub fn all_with_length(len: usize, max_total: usize) -> Vec<OrderedPartition> {
        if len == 0 {
            return vec![Self::empty()];
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        fn rec(len: usize, budget: usize, cur: &mut Vec<u8>, out: &mut Vec<OrderedPartition>) {
            if cur.len() == len {
                out.push(OrderedPartition::new(cur));
                return;
            }
            let remaining = len - cur.len() - 1;
            for p in 1..=budget.saturating_sub(remaining) {
                cur.push(p as u8);
                rec(len, budget - p, cur, out);
                cur.pop();
            }
        }
        rec(len, max_total, &mut cur, &mut out);
        out.sort();
        out
    }
}

/// Shorter partitions first, then lexicographic parts; matches the key encoding.
impl Ord for OrderedPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for OrderedPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(u8::to_string).collect();
        write!(f, "({})", body.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u8]) -> OrderedPartition {
        OrderedPartition::new(v)
    }

    #[test]
    fn moves() {
        let ue: Vec<_> = p(&[2]).unit_enlargements().into_iter().map(|x| x.1).collect();
        assert_eq!(ue, vec![p(&[1, 2]), p(&[2, 1])]);
        assert_eq!(p(&[1, 2]).elementary_coarsenings(), vec![(1, p(&[3]))]);
        assert_eq!(p(&[2, 3]).initial_reduction(), Some((2, p(&[3]))));
        assert_eq!(p(&[2, 3]).final_reduction(), Some((3, p(&[2]))));
        assert!(OrderedPartition::empty().initial_reduction().is_none());
        assert!(OrderedPartition::empty().final_reduction().is_none());
        assert_eq!(OrderedPartition::empty().unit_enlargements(), vec![(1, p(&[1]))]);
        assert_eq!(p(&[1, 1]).unit_enlargements().len(), 3);
    }

    #[test]
    fn epsilon_form() {
        assert_eq!(p(&[1, 1, 1]).epsilon(), vec![true, true]);
        assert_eq!(p(&[1, 2]).epsilon(), vec![true, false]);
        assert_eq!(p(&[2, 1]).epsilon(), vec![false, true]);
        assert_eq!(p(&[3]).epsilon(), vec![false, false]);
        for q in [p(&[1, 2]), p(&[3]), p(&[2, 1, 4])] {
            assert_eq!(OrderedPartition::from_epsilon(&q.epsilon()), q);
        }
    }

    #[test]
    fn enumeration_counts() {
        // compositions of N into l parts: C(N-1, l-1); summed over N <= 4
        assert_eq!(OrderedPartition::all_with_length(1, 4).len(), 4);
        assert_eq!(OrderedPartition::all_with_length(2, 4).len(), 1 + 2 + 3);
        assert_eq!(OrderedPartition::all_with_length(4, 4).len(), 1);
        assert_eq!(OrderedPartition::all_with_length(0, 4).len(), 1);
    }
}
