//! Graded chain complexes over F2 or Z with exact homology.

pub mod f2;
pub mod z;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

pub use f2::{F2System, Inconsistency, PivotOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    F2,
    Z,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("boundary of {source_key} in grading {grading} contains {missing}, which is not in the grading {} basis", grading - 1)]
    BasisClosure { grading: usize, source_key: String, missing: String },
    #[error("d^2 != 0 on {witness} (grading {grading})")]
    NotAComplex { grading: usize, witness: String },
    #[error("grading {0} needs gradings {0}-1..={0}+1 assembled (top is {1})")]
    Window(usize, usize),
    #[error("homology over {0:?} requested from a complex over {1:?}")]
    RingMismatch(Ring, Ring),
    #[error("equation system is inconsistent; certificate has {} equations", .0.equations.len())]
    Infeasible(Inconsistency),
}

/// Sparse matrix stored by columns; column `j` is the boundary of basis element `j`.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn rank_f2(&self) -> usize {
        let v: Vec<Vec<u32>> = self
            .cols
            .iter()
            .map(|c| c.iter().filter(|(_, x)| x.rem_euclid(2) == 1).map(|&(r, _)| r).collect())
            .collect();
        f2::rank(self.nrows, &v)
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        z::invariant_factors(&self.cols)
    }
}

/// What to do with boundary terms outside the next basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Reject: the bases must be closed under the boundary.
    Strict,
    /// Drop such terms (windowed assembly of an infinite complex).
    Filter,
}

#[derive(Clone, Copy, Debug)]
pub struct AssembleOptions {
    pub closure: Closure,
    pub check_square: bool,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions { closure: Closure::Strict, check_square: true }
    }
}

/// Chain complex with bases in gradings `0..=top` and differentials
/// `d[k]: C_k -> C_{k-1}` (`d[0]` is the zero map).
#[derive(Clone, Debug)]
pub struct GradedComplex<K> {
    ring: Ring,
    bases: Vec<Vec<K>>,
    index: Vec<HashMap<K, usize>>,
    diff: Vec<SparseMatrix>,
}

/// Combines duplicate keys and reduces coefficients for `ring`.
pub fn normalize<K: Ord + Clone>(ring: Ring, mut v: Vec<(K, i64)>) -> Vec<(K, i64)> {
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(K, i64)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc += c,
            _ => out.push((k, c)),
        }
    }
    if ring == Ring::F2 {
        for e in out.iter_mut() {
            e.1 = e.1.rem_euclid(2);
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

impl<K> GradedComplex<K>
where
    K: Clone + Ord + Hash + Send + Sync + Debug,
{
    /// Sorts each basis, evaluates the boundary on every key and checks d^2 = 0.
    pub fn assemble<F>(ring: Ring, mut bases: Vec<Vec<K>>, boundary: F, opts: AssembleOptions) -> Result<Self, ChainError>
    where
        F: Fn(&K) -> Vec<(K, i64)> + Sync,
    {
        for b in bases.iter_mut() {
            b.sort();
            b.dedup();
        }
        let index: Vec<HashMap<K, usize>> =
            bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        let mut diff = vec![SparseMatrix { nrows: 0, cols: vec![Vec::new(); bases.first().map_or(0, Vec::len)] }];
        for k in 1..bases.len() {
            let below = &index[k - 1];
            let cols: Result<Vec<Vec<(u32, i64)>>, ChainError> = bases[k]
                .par_iter()
                .map(|key| {
                    let mut col = Vec::new();
                    for (t, c) in normalize(ring, boundary(key)) {
                        match below.get(&t) {
                            Some(&i) => col.push((i as u32, c)),
                            None if opts.closure == Closure::Filter => {}
                            None => {
                                return Err(ChainError::BasisClosure {
                                    grading: k,
                                    source_key: format!("{key:?}"),
                                    missing: format!("{t:?}"),
                                })
                            }
                        }
                    }
                    col.sort_unstable();
                    Ok(col)
                })
                .collect();
            diff.push(SparseMatrix { nrows: bases[k - 1].len(), cols: cols? });
        }
        let c = GradedComplex { ring, bases, index, diff };
        if opts.check_square {
            c.check_square()?;
        }
        Ok(c)
    }

    /// Verifies d_{k-1} d_k = 0 column by column, naming the first failing key.
    pub fn check_square(&self) -> Result<(), ChainError> {
        for k in 2..self.bases.len() {
            let upper = &self.diff[k];
            let lower = &self.diff[k - 1];
            let bad = (0..upper.ncols()).into_par_iter().find_first(|&j| {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                for &(i, a) in &upper.cols[j] {
                    for &(r, b) in &lower.cols[i as usize] {
                        *acc.entry(r).or_insert(0) += a * b;
                    }
                }
                acc.values().any(|&v| match self.ring {
                    Ring::F2 => v.rem_euclid(2) != 0,
                    Ring::Z => v != 0,
                })
            });
            if let Some(j) = bad {
                return Err(ChainError::NotAComplex { grading: k, witness: format!("{:?}", self.bases[k][j]) });
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Highest assembled grading.
    pub fn top(&self) -> usize {
        self.bases.len().saturating_sub(1)
    }

    pub fn basis(&self, k: usize) -> &[K] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, k: usize, key: &K) -> Option<usize> {
        self.index.get(k)?.get(key).copied()
    }

    pub fn differential(&self, k: usize) -> &SparseMatrix {
        &self.diff[k]
    }

    fn window(&self, k: usize) -> Result<(), ChainError> {
        if k + 1 > self.top() {
            Err(ChainError::Window(k, self.top()))
        } else {
            Ok(())
        }
    }

    pub fn homology_f2(&self, k: usize) -> Result<usize, ChainError> {
        if self.ring != Ring::F2 {
            return Err(ChainError::RingMismatch(Ring::F2, self.ring));
        }
        self.window(k)?;
        let rk = if k == 0 { 0 } else { self.diff[k].rank_f2() };
        let rk1 = self.diff[k + 1].rank_f2();
        Ok(self.bases[k].len() - rk - rk1)
    }

    /// Free rank and torsion (invariant factors other than 1) of H_k over Z.
    pub fn homology_z(&self, k: usize) -> Result<(usize, Vec<BigInt>), ChainError> {
        if self.ring != Ring::Z {
            return Err(ChainError::RingMismatch(Ring::Z, self.ring));
        }
        self.window(k)?;
        let rk = if k == 0 { 0 } else { self.diff[k].invariant_factors().len() };
        let f1 = self.diff[k + 1].invariant_factors();
        let torsion: Vec<BigInt> = f1.iter().filter(|d| !d.is_one()).cloned().collect();
        Ok((self.bases[k].len() - rk - f1.len(), torsion))
    }

    /// Homology in gradings `0..top` (the top grading only feeds the one below).
    pub fn homology_report(&self) -> Result<HomologyReport, ChainError> {
        let mut entries = Vec::new();
        for k in 0..self.top() {
            let (rank, torsion) = match self.ring {
                Ring::F2 => (self.homology_f2(k)?, Vec::new()),
                Ring::Z => self.homology_z(k)?,
            };
            entries.push(HomologyEntry { grading: k, rank, torsion: torsion.iter().map(ToString::to_string).collect() });
        }
        Ok(HomologyReport { ring: self.ring, entries })
    }

    /// Solves `s(d h) = target(h)` for every basis key `h` of grading `k + 1`,
    /// with unknowns `s` on the grading-`k` basis. Returns the support of `s`.
    pub fn solve_coboundary(
        &self,
        k: usize,
        target: impl Fn(&K) -> bool,
        order: PivotOrder,
    ) -> Result<Vec<bool>, ChainError> {
        self.coboundary_system(k, target).solve(order).map_err(ChainError::Infeasible)
    }

    /// The linear system behind `solve_coboundary`; row `i` is basis key `i` of grading `k + 1`.
    pub fn coboundary_system(&self, k: usize, target: impl Fn(&K) -> bool) -> F2System {
        let mut sys = F2System::new(self.bases[k].len());
        let d = &self.diff[k + 1];
        for (h, col) in self.bases[k + 1].iter().zip(&d.cols) {
            let vars: Vec<usize> = col.iter().filter(|(_, c)| c.rem_euclid(2) == 1).map(|&(i, _)| i as usize).collect();
            sys.push(vars, target(h));
        }
        sys
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    pub grading: usize,
    pub rank: usize,
    pub torsion: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub ring: Ring,
    pub entries: Vec<HomologyEntry>,
}

impl HomologyReport {
    pub fn ranks(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.rank).collect()
    }

    pub fn torsion_free(&self) -> bool {
        self.entries.iter().all(|e| e.torsion.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[allow(clippy::ptr_arg)]
    fn simplex_boundary(k: &Vec<u8>) -> Vec<(Vec<u8>, i64)> {
        if k.len() <= 1 {
            return Vec::new();
        }
        (0..k.len())
            .map(|i| {
                let mut f = k.clone();
                f.remove(i);
                (f, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    fn circle(ring: Ring) -> GradedComplex<Vec<u8>> {
        let bases = vec![vec![vec![0], vec![1], vec![2]], vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![]];
        GradedComplex::assemble(ring, bases, simplex_boundary, AssembleOptions::default()).unwrap()
    }

    #[test]
    fn single_generator() {
        let c = GradedComplex::assemble(Ring::F2, vec![vec![0u8], vec![]], |_| Vec::new(), AssembleOptions::default())
            .unwrap();
        assert_eq!(c.homology_f2(0).unwrap(), 1);
        assert!(matches!(c.homology_f2(1), Err(ChainError::Window(1, 1))));
    }

    #[test]
    fn circle_homology() {
        let f = circle(Ring::F2);
        assert_eq!(f.homology_f2(0).unwrap(), 1);
        assert_eq!(f.homology_f2(1).unwrap(), 1);
        let z = circle(Ring::Z);
        assert_eq!(z.homology_z(0).unwrap(), (1, vec![]));
        assert_eq!(z.homology_z(1).unwrap(), (1, vec![]));
        assert!(f.homology_z(0).is_err());
    }

    #[test]
    fn projective_plane_torsion() {
        // Cellular RP^2: one cell per dimension, d_2 = 2.
        let bases = vec![vec![0u8], vec![1u8], vec![2u8], vec![]];
        let bd = |k: &u8| if *k == 2 { vec![(1u8, 2)] } else { vec![] };
        let z = GradedComplex::assemble(Ring::Z, bases.clone(), bd, AssembleOptions::default()).unwrap();
        assert_eq!(z.homology_z(1).unwrap(), (0, vec![BigInt::from(2)]));
        assert_eq!(z.homology_z(2).unwrap(), (0, vec![]));
        let f = GradedComplex::assemble(Ring::F2, bases, bd, AssembleOptions::default()).unwrap();
        assert_eq!(f.homology_f2(1).unwrap(), 1);
    }

    #[test]
    fn closure_and_square_errors() {
        let bases = vec![vec![0u8], vec![1u8]];
        let err = GradedComplex::assemble(Ring::F2, bases.clone(), |_| vec![(9u8, 1)], AssembleOptions::default());
        assert!(matches!(err, Err(ChainError::BasisClosure { .. })));
        let ok = GradedComplex::assemble(
            Ring::F2,
            bases,
            |_| vec![(9u8, 1)],
            AssembleOptions { closure: Closure::Filter, check_square: true },
        );
        assert!(ok.is_ok());
        let bases = vec![vec![0u8], vec![1u8], vec![2u8]];
        let bad = |k: &u8| match k {
            2 => vec![(1u8, 1)],
            1 => vec![(0u8, 1)],
            _ => vec![],
        };
        let err = GradedComplex::assemble(Ring::Z, bases, bad, AssembleOptions::default()).unwrap_err();
        assert_eq!(err, ChainError::NotAComplex { grading: 2, witness: "2".into() });
    }

    #[test]
    fn coboundary_solve() {
        let f = circle(Ring::F2);
        // target zero on the (empty) grading-2 basis of edges
        let s = f.solve_coboundary(0, |_| false, PivotOrder::Forward).unwrap();
        assert!(s.iter().all(|&b| !b));
        // every edge coboundary target 1: sum of endpoints must be 1 on each edge of a triangle
        let err = f.solve_coboundary(0, |_| true, PivotOrder::Forward).unwrap_err();
        assert!(matches!(err, ChainError::Infeasible(_)));
    }
}
