//! Integer invariant factors: sparse unit-pivot elimination in `i64`, then a
//! dense arbitrary-precision Smith normal form on whatever is left.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

type SparseCol = BTreeMap<u32, i64>;

/// Nonzero invariant factors (absolute values, each dividing the next) of the
/// matrix whose columns are given as `(row, value)` lists.
pub fn invariant_factors(cols: &[Vec<(u32, i64)>]) -> Vec<BigInt> {
    let mut cols: Vec<SparseCol> = cols
        .iter()
        .map(|c| {
            let mut m = SparseCol::new();
            for &(r, v) in c {
                *m.entry(r).or_insert(0) += v;
            }
            m.retain(|_, v| *v != 0);
            m
        })
        .collect();
    let mut units = 0usize;
    let mut alive: Vec<bool> = cols.iter().map(|c| !c.is_empty()).collect();
    let mut row_cols: BTreeMap<u32, BTreeSet<usize>> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for &r in c.keys() {
            row_cols.entry(r).or_default().insert(j);
        }
    }

    let overflowed = loop {
        // Shortest live column that has a unit entry; ties by index.
        let mut best: Option<(usize, usize)> = None;
        for (j, c) in cols.iter().enumerate() {
            if !alive[j] || best.is_some_and(|(len, _)| c.len() >= len) {
                continue;
            }
            if c.values().any(|v| v.abs() == 1) {
                best = Some((c.len(), j));
            }
        }
        let Some((_, pj)) = best else { break false };
        // Unit row in that column touching the fewest other columns.
        let pr = *cols[pj]
            .iter()
            .filter(|(_, v)| v.abs() == 1)
            .min_by_key(|(r, _)| (row_cols[r].len(), **r))
            .map(|(r, _)| r)
            .expect("unit entry");
        let pv = cols[pj][&pr];
        let pivot_col = cols[pj].clone();
        let others: Vec<usize> = row_cols[&pr].iter().copied().filter(|&j| j != pj).collect();
        let mut ok = true;
        for j in others {
            let q = cols[j][&pr] * pv; // pv = ±1, so this is w_r / v_r
            let mut updated = cols[j].clone();
            for (&r, &v) in &pivot_col {
                let cur = updated.get(&r).copied().unwrap_or(0);
                let Some(new) = q.checked_mul(v).and_then(|t| cur.checked_sub(t)) else {
                    ok = false;
                    break;
                };
                if new == 0 {
                    updated.remove(&r);
                } else {
                    updated.insert(r, new);
                }
            }
            if !ok {
                break;
            }
            for r in cols[j].keys() {
                if !updated.contains_key(r) {
                    row_cols.get_mut(r).expect("indexed").remove(&j);
                }
            }
            for r in updated.keys() {
                if !cols[j].contains_key(r) {
                    row_cols.entry(*r).or_default().insert(j);
                }
            }
            cols[j] = updated;
            if cols[j].is_empty() {
                alive[j] = false;
            }
        }
        if !ok {
            break true;
        }
        for r in pivot_col.keys() {
            if let Some(s) = row_cols.get_mut(r) {
                s.remove(&pj);
            }
        }
        alive[pj] = false;
        cols[pj].clear();
        units += 1;
    };

    // Whatever remains goes to the dense exact Smith form. Updates are committed
    // per column, so after an overflow the live columns still form an
    // equivalent matrix.
    let _ = overflowed;
    let rest: Vec<&SparseCol> = cols.iter().zip(&alive).filter(|(c, &a)| a && !c.is_empty()).map(|(c, _)| c).collect();
    let mut out: Vec<BigInt> = vec![BigInt::one(); units];
    if !rest.is_empty() {
        let rows: BTreeSet<u32> = rest.iter().flat_map(|c| c.keys().copied()).collect();
        let rindex: BTreeMap<u32, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); rest.len()]; rows.len()];
        for (j, c) in rest.iter().enumerate() {
            for (r, v) in c.iter() {
                dense[rindex[r]][j] = BigInt::from(*v);
            }
        }
        out.extend(smith_diagonal(dense));
    }
    out.sort();
    out
}

/// Nonzero diagonal of the Smith normal form of a dense integer matrix.
#[allow(clippy::needless_range_loop)]
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = argmin_abs(&a, t, |_, _| true) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..n {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                // Divisibility: fold an offending row into row t and retry.
                let p = a[t][t].clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &p).is_zero()));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..n {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                }
            }
            // Bring the smallest nonzero of row t / column t to the pivot.
            if let Some((pi, pj)) = argmin_abs(&a, t, |i, j| i == t || j == t) {
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn argmin_abs(a: &[Vec<BigInt>], t: usize, keep: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() || !keep(i, j) {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn dense_examples() {
        let m = vec![big(&[2, 4, 4]), big(&[-6, 6, 12]), big(&[10, -4, -16])];
        assert_eq!(smith_diagonal(m), big(&[2, 6, 12]));
        let m = vec![big(&[2, 0]), big(&[0, 3])];
        assert_eq!(smith_diagonal(m), big(&[1, 6]));
        assert!(smith_diagonal(vec![big(&[0, 0])]).is_empty());
    }

    #[test]
    fn sparse_examples() {
        // boundary of a triangle's edges: rank 2, no torsion
        let cols = vec![vec![(0, -1), (1, 1)], vec![(1, -1), (2, 1)], vec![(0, -1), (2, 1)]];
        assert_eq!(invariant_factors(&cols), big(&[1, 1]));
        // multiplication by 2
        assert_eq!(invariant_factors(&[vec![(0, 2)]]), big(&[2]));
        let cols = vec![vec![(0, 2), (1, 4)], vec![(0, 6), (1, 8)]];
        assert_eq!(invariant_factors(&cols), big(&[2, 4]));
    }
}
