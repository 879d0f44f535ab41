//! Independent oracles for domain enumeration and the Maslov index.
//!
//! Nothing here calls the library's corner-defect, rectangle or index code:
//! domains are found by exhaustive search over multiplicity matrices and
//! measured by backtracking decomposition and by the grading formula.

use std::collections::BTreeSet;

use gridob::cd::CdModel;
use gridob::grid::{Domain, Generator, GridDiagram};
use itertools::Itertools;

type Rows = Vec<usize>;

fn perms(n: usize) -> Vec<Rows> {
    (0..n).permutations(n).collect()
}

/// Corner rule: NE - NW - SE + SW at each lattice point equals
/// [point is a start] - [point is an end].
fn corners_ok(n: usize, x: &Rows, y: &Rows, m: &[i64]) -> bool {
    let at = |c: usize, r: usize| m[(r % n) * n + (c % n)];
    (0..n).all(|b| {
        (0..n).all(|a| {
            let ne = at(b, a);
            let nw = at(b + n - 1, a);
            let se = at(b, a + n - 1);
            let sw = at(b + n - 1, a + n - 1);
            ne - nw - se + sw == (x[b] == a) as i64 - (y[b] == a) as i64
        })
    })
}

/// Empty rectangles leaving `x`, as (target, footprint).
fn rectangles(n: usize, x: &Rows) -> Vec<(Rows, Vec<i64>)> {
    let mut out = Vec::new();
    for c1 in 0..n {
        for c2 in 0..n {
            if c1 == c2 {
                continue;
            }
            let w = (c2 + n - c1) % n;
            let h = (x[c2] + n - x[c1]) % n;
            let mut m = vec![0; n * n];
            for dc in 0..w {
                for dr in 0..h {
                    m[((x[c1] + dr) % n) * n + (c1 + dc) % n] = 1;
                }
            }
            // A point of x in a non-corner column of the footprint blocks the rectangle.
            let blocked = (1..w).any(|dc| {
                let c = (c1 + dc) % n;
                (0..h).any(|dr| x[c] == (x[c1] + dr) % n)
            });
            if !blocked {
                let mut y = x.clone();
                y.swap(c1, c2);
                out.push((y, m));
            }
        }
    }
    out
}

/// Lengths of all complete rectangle decompositions of `m` from `x` to `y`.
fn decomposition_lengths(n: usize, x: &Rows, y: &Rows, m: &[i64], acc: &mut BTreeSet<usize>, depth: usize) {
    if m.iter().all(|&v| v == 0) {
        if x == y {
            acc.insert(depth);
        }
        return;
    }
    for (next, r) in rectangles(n, x) {
        if r.iter().zip(m).all(|(a, b)| a <= b) {
            let rest: Vec<i64> = m.iter().zip(&r).map(|(b, a)| b - a).collect();
            decomposition_lengths(n, &next, y, &rest, acc, depth + 1);
        }
    }
}

/// Twice the Maslov grading with respect to the O markings, in doubled coordinates
/// (points at even coordinates, O centres at odd ones).
fn maslov2(x: &Rows, o: &[usize]) -> i64 {
    let pts: Vec<(i64, i64)> = x.iter().enumerate().map(|(c, &r)| (2 * c as i64, 2 * r as i64)).collect();
    let os: Vec<(i64, i64)> = o.iter().enumerate().map(|(c, &r)| (2 * c as i64 + 1, 2 * r as i64 + 1)).collect();
    let i = |a: &[(i64, i64)], b: &[(i64, i64)]| -> i64 {
        a.iter().map(|p| b.iter().filter(|q| p.0 < q.0 && p.1 < q.1).count() as i64).sum()
    };
    // 2J(A,B) = I(A,B) + I(B,A)
    let j2 = |a: &[(i64, i64)], b: &[(i64, i64)]| i(a, b) + i(b, a);
    j2(&pts, &pts) - 2 * j2(&pts, &os) + j2(&os, &os) + 2
}

fn index_by_grading(n: usize, o: &[usize], x: &Rows, y: &Rows, m: &[i64]) -> i64 {
    let n_o: i64 = (0..n).map(|c| m[o[c] * n + c]).sum();
    (maslov2(x, o) - maslov2(y, o)) / 2 + 2 * n_o
}

struct Found {
    by_index: Vec<BTreeSet<(Rows, Rows, Vec<i64>)>>,
}

fn brute_force(n: usize, max_index: usize, max_mult: i64) -> Found {
    let o: Vec<usize> = (0..n).collect();
    let mut by_index = vec![BTreeSet::new(); max_index + 1];
    let cells = n * n;
    let base = (max_mult + 1) as usize;
    let total = base.pow(cells as u32);
    let ps = perms(n);
    for code in 0..total {
        let mut m = vec![0i64; cells];
        let mut c = code;
        for v in m.iter_mut() {
            *v = (c % base) as i64;
            c /= base;
        }
        for x in &ps {
            for y in &ps {
                if !corners_ok(n, x, y, &m) {
                    continue;
                }
                let mu = index_by_grading(n, &o, x, y, &m);
                if (0..=max_index as i64).contains(&mu) {
                    by_index[mu as usize].insert((x.clone(), y.clone(), m.clone()));
                }
            }
        }
    }
    Found { by_index }
}

fn describe(d: &Domain) -> (Rows, Rows, Vec<i64>) {
    let rows = |g: Generator| g.rows().iter().map(|&r| r as usize).collect::<Vec<_>>();
    (rows(d.from()), rows(d.to()), d.mult_vec())
}

fn check_against_library(n: usize, max_index: usize, max_mult: i64) {
    let found = brute_force(n, max_index, max_mult);
    let model = CdModel::new(&GridDiagram::standard(n).unwrap(), max_index);
    for k in 0..=max_index {
        let lib: BTreeSet<_> =
            model.grading(k).iter().filter(|d| d.max_mult() as i64 <= max_mult).map(describe).collect();
        assert_eq!(lib, found.by_index[k], "n={n} index {k}");
        for (x, y, m) in &found.by_index[k] {
            let mut lengths = BTreeSet::new();
            decomposition_lengths(n, x, y, m, &mut lengths, 0);
            assert_eq!(lengths.into_iter().collect::<Vec<_>>(), vec![k], "n={n} {x:?}->{y:?} {m:?}");
        }
    }
}

#[test]
fn n2_domains_match_exhaustive_search() {
    check_against_library(2, 4, 3);
}

#[test]
fn n2_counts() {
    let found = brute_force(2, 3, 3);
    let counts: Vec<usize> = found.by_index.iter().map(BTreeSet::len).collect();
    assert_eq!(counts[0], 2);
    // Two rectangles leave each of the two generators.
    assert_eq!(counts[1], 4);
    let model = CdModel::new(&GridDiagram::standard(2).unwrap(), 3);
    assert_eq!(counts, (0..=3).map(|k| model.grading(k).len()).collect::<Vec<_>>());
}

#[test]
fn n3_domains_match_exhaustive_search() {
    check_against_library(3, 3, 3);
}

#[test]
fn full_torus_index_is_2n() {
    for n in 2..=3 {
        let x: Rows = (0..n).collect();
        let m = vec![1; n * n];
        let mut lengths = BTreeSet::new();
        decomposition_lengths(n, &x, &x, &m, &mut lengths, 0);
        assert_eq!(lengths.into_iter().collect::<Vec<_>>(), vec![2 * n]);
        let d = Domain::new(Generator::from_rows(&x).unwrap(), Generator::from_rows(&x).unwrap(), &m).unwrap();
        assert_eq!(d.maslov_index() as usize, 2 * n);
    }
}
