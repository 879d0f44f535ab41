//! Positive domains decorated with tuples of ordered partitions.

mod partition;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

pub use partition::OrderedPartition;

use crate::cd::{CdModel, PeelSide, SignCoverageError};
use crate::chain::{normalize, AssembleOptions, ChainError, Closure, GradedComplex, Ring};
use crate::grid::{column_squares, row_squares, CanonicalKey, Domain, GridError};
use crate::signs::SignAssignment;

/// `(D, N, λ)` with `N_j` the total of `λ_j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionTriple {
    pub domain: Domain,
    pub lambdas: Vec<OrderedPartition>,
}

impl PartitionTriple {
    pub fn plain(domain: Domain) -> Self {
        PartitionTriple { domain, lambdas: vec![OrderedPartition::empty(); domain.n()] }
    }

    /// `(D, N e_j, (N))` style construction from explicit parts per marking.
    pub fn with(domain: Domain, parts: &[(usize, &[u8])]) -> Self {
        let mut t = Self::plain(domain);
        for &(j, p) in parts {
            t.lambdas[j - 1] = OrderedPartition::new(p);
        }
        t
    }

    pub fn n_vec(&self) -> Vec<usize> {
        self.lambdas.iter().map(OrderedPartition::total).collect()
    }

    pub fn n_j(&self, j: usize) -> usize {
        self.lambdas[j - 1].total()
    }

    pub fn total_length(&self) -> usize {
        self.lambdas.iter().map(OrderedPartition::len).sum()
    }

    pub fn grading(&self) -> usize {
        self.domain.maslov_index() as usize + self.total_length()
    }

    pub fn max_n(&self) -> usize {
        self.lambdas.iter().map(OrderedPartition::total).max().unwrap_or(0)
    }

    pub fn key(&self) -> CanonicalKey {
        let mut v = vec![b'P'];
        self.domain.write_key(&mut v);
        for l in &self.lambdas {
            v.push(l.len() as u8);
            v.extend_from_slice(l.parts());
        }
        CanonicalKey(v)
    }

    pub fn from_key(key: &CanonicalKey) -> Result<Self, GridError> {
        let bad = || GridError::Parse("malformed triple key".into());
        let rest = match key.0.split_first() {
            Some((b'P', rest)) => rest,
            _ => return Err(bad()),
        };
        let (domain, mut rest) = Domain::read_key(rest)?;
        let mut lambdas = Vec::with_capacity(domain.n());
        for _ in 0..domain.n() {
            let (&len, tail) = rest.split_first().ok_or_else(bad)?;
            let len = len as usize;
            if tail.len() < len || tail[..len].contains(&0) {
                return Err(bad());
            }
            lambdas.push(OrderedPartition::new(&tail[..len]));
            rest = &tail[len..];
        }
        if !rest.is_empty() {
            return Err(bad());
        }
        Ok(PartitionTriple { domain, lambdas })
    }

    /// Domain text block followed by `N=[..]` and `L=[(..);..]` lines.
    pub fn to_text(&self) -> String {
        let ns: Vec<String> = self.n_vec().iter().map(usize::to_string).collect();
        let ls: Vec<String> = self
            .lambdas
            .iter()
            .map(|l| format!("({})", l.parts().iter().map(u8::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        format!("{}N=[{}]\nL=[{}]\n", self.domain.to_text(), ns.join(","), ls.join(";"))
    }

    pub fn parse_text(text: &str) -> Result<Self, GridError> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let perr = |m: &str| GridError::Parse(m.to_string());
        let nl = lines.iter().position(|l| l.starts_with("N=")).ok_or_else(|| perr("missing N= line"))?;
        let l_line = lines.get(nl + 1).ok_or_else(|| perr("missing L= line"))?;
        let domain = Domain::parse_text(&lines[..nl].join("\n"))?;
        let inner = |s: &str, pre: &str| -> Result<String, GridError> {
            s.strip_prefix(pre)
                .and_then(|s| s.strip_prefix('['))
                .and_then(|s| s.strip_suffix(']'))
                .map(str::to_string)
                .ok_or_else(|| perr(&format!("bad line {s:?}")))
        };
        let ns: Vec<usize> = inner(lines[nl], "N=")?
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|e| perr(&e.to_string())))
            .collect::<Result<_, _>>()?;
        let mut lambdas = Vec::new();
        for chunk in inner(l_line, "L=")?.split(';') {
            let c = chunk.trim().strip_prefix('(').and_then(|c| c.strip_suffix(')')).ok_or_else(|| perr(chunk))?;
            let parts: Vec<u8> = c
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<u8>().map_err(|e| perr(&e.to_string())))
                .collect::<Result<_, _>>()?;
            if parts.contains(&0) {
                return Err(perr("partition parts must be positive"));
            }
            lambdas.push(OrderedPartition::new(&parts));
        }
        let t = PartitionTriple { domain, lambdas };
        if t.lambdas.len() != domain.n() || t.n_vec() != ns {
            return Err(perr("N vector does not match the partitions"));
        }
        Ok(t)
    }
}

impl fmt::Debug for PartitionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.domain, self.lambdas)
    }
}

/// Enumeration cap: gradings up to `k`, every `N_j` at most `n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Window {
    pub k: usize,
    pub n_max: usize,
}

impl Window {
    pub fn contains(&self, t: &PartitionTriple) -> bool {
        t.grading() <= self.k && t.max_n() <= self.n_max
    }
}

/// All triples in the window, by grading. `model` must be enumerated to `w.k`.
pub fn enumerate_cdp(model: &CdModel, w: Window) -> Vec<Vec<PartitionTriple>> {
    assert!(model.max_grading() >= w.k, "CD enumerated only to grading {}", model.max_grading());
    let n = model.n();
    let by_len: Vec<Vec<OrderedPartition>> = (0..=w.k).map(|l| OrderedPartition::all_with_length(l, w.n_max)).collect();
    let mut levels = vec![Vec::new(); w.k + 1];
    for total in 0..=w.k {
        let tuples = partition_tuples(n, total, &by_len);
        for mu in 0..=w.k - total {
            for d in model.grading(mu) {
                for lam in &tuples {
                    levels[mu + total].push(PartitionTriple { domain: *d, lambdas: lam.clone() });
                }
            }
        }
    }
    for l in levels.iter_mut() {
        l.par_sort_unstable();
    }
    levels
}

fn partition_tuples(n: usize, total: usize, by_len: &[Vec<OrderedPartition>]) -> Vec<Vec<OrderedPartition>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(
        n: usize,
        left: usize,
        by_len: &[Vec<OrderedPartition>],
        cur: &mut Vec<OrderedPartition>,
        out: &mut Vec<Vec<OrderedPartition>>,
    ) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for l in 0..=left {
            for p in &by_len[l] {
                cur.push(p.clone());
                rec(n, left - l, by_len, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, total, by_len, &mut cur, &mut out);
    out
}

/// Which part of the differential produced a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Rectangle { side: PeelSide, rect: Domain },
    Annulus { j: usize, horizontal: bool, position: usize },
    Coarsening { j: usize, position: usize },
    Reduction { j: usize, initial: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub triple: PartitionTriple,
    pub coeff: i64,
    pub kind: TermKind,
}

fn sign(exp: usize) -> i64 {
    if exp.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Every term of the differential of `t`, unreduced. With `signs = None` all
/// coefficients are `+1` (the F2 differential); otherwise the integral signs.
pub fn boundary_terms(model: &CdModel, t: &PartitionTriple, signs: Option<&SignAssignment>) -> Result<Vec<Term>, SignCoverageError> {
    let d = &t.domain;
    let mu = d.maslov_index() as usize;
    let mut out = Vec::new();
    let rect_sign = |r: &Domain| -> Result<usize, SignCoverageError> {
        match signs {
            None => Ok(0),
            Some(s) => s.values.get(r).map(|&b| b as usize).ok_or_else(|| SignCoverageError(r.key().to_hex())),
        }
    };
    let sj = |j: usize| -> Result<usize, SignCoverageError> {
        match signs {
            None => Ok(0),
            Some(s) => s.s_params.get(j - 1).map(|&b| b as usize).ok_or_else(|| SignCoverageError(format!("s_{j}"))),
        }
    };
    let signed = |exp: usize| if signs.is_some() { sign(exp) } else { 1 };

    // type I
    for p in crate::cd::peels(&model.cache, d) {
        let e = rect_sign(&p.rect)? + if p.side == PeelSide::Back { mu } else { 0 };
        out.push(Term {
            triple: PartitionTriple { domain: p.rest, lambdas: t.lambdas.clone() },
            coeff: signed(e),
            kind: TermKind::Rectangle { side: p.side, rect: p.rect },
        });
    }

    let n = d.n();
    let mut len_before = 0;
    for j in 1..=n {
        let lam = &t.lambdas[j - 1];
        let base = mu + len_before;
        // type II
        let annuli = [
            (false, column_squares(n, model.grid.v_column(j)), d.contains_column(model.grid.v_column(j))),
            (true, row_squares(n, model.grid.h_row(j)), d.contains_row(model.grid.h_row(j))),
        ];
        for (horizontal, squares, present) in annuli {
            if !present {
                continue;
            }
            let e = d.minus_squares(&squares).expect("annulus contained");
            for (k, enlarged) in lam.unit_enlargements() {
                let mut lambdas = t.lambdas.clone();
                lambdas[j - 1] = enlarged;
                out.push(Term {
                    triple: PartitionTriple { domain: e, lambdas },
                    coeff: signed(base + horizontal as usize + k + 1),
                    kind: TermKind::Annulus { j, horizontal, position: k },
                });
            }
        }
        // type III
        for (k, coarse) in lam.elementary_coarsenings() {
            let mut lambdas = t.lambdas.clone();
            lambdas[j - 1] = coarse;
            out.push(Term {
                triple: PartitionTriple { domain: *d, lambdas },
                coeff: signed(base + k),
                kind: TermKind::Coarsening { j, position: k },
            });
        }
        // type IV
        if let Some((first, rest)) = lam.initial_reduction() {
            let mut lambdas = t.lambdas.clone();
            lambdas[j - 1] = rest;
            out.push(Term {
                triple: PartitionTriple { domain: *d, lambdas },
                coeff: signed(base + first as usize * sj(j)?),
                kind: TermKind::Reduction { j, initial: true },
            });
        }
        if let Some((last, rest)) = lam.final_reduction() {
            let mut lambdas = t.lambdas.clone();
            lambdas[j - 1] = rest;
            out.push(Term {
                triple: PartitionTriple { domain: *d, lambdas },
                coeff: signed(base + lam.len() + last as usize * sj(j)?),
                kind: TermKind::Reduction { j, initial: false },
            });
        }
        len_before += lam.len();
    }
    Ok(out)
}

pub fn boundary_cdp_f2(model: &CdModel, t: &PartitionTriple) -> Vec<(PartitionTriple, i64)> {
    let terms = boundary_terms(model, t, None).expect("no signs needed");
    normalize(Ring::F2, terms.into_iter().map(|x| (x.triple, x.coeff)).collect())
}

pub fn boundary_cdp_z(
    model: &CdModel,
    t: &PartitionTriple,
    s: &SignAssignment,
) -> Result<Vec<(PartitionTriple, i64)>, SignCoverageError> {
    let terms = boundary_terms(model, t, Some(s))?;
    Ok(normalize(Ring::Z, terms.into_iter().map(|x| (x.triple, x.coeff)).collect()))
}

fn boundary(model: &CdModel, t: &PartitionTriple, s: Option<&SignAssignment>) -> Result<Vec<(PartitionTriple, i64)>, SignCoverageError> {
    match s {
        None => Ok(boundary_cdp_f2(model, t)),
        Some(s) => boundary_cdp_z(model, t, s),
    }
}

/// `∂∂t`, computed without any window.
pub fn boundary_squared(
    model: &CdModel,
    t: &PartitionTriple,
    s: Option<&SignAssignment>,
) -> Result<Vec<(PartitionTriple, i64)>, SignCoverageError> {
    let ring = if s.is_some() { Ring::Z } else { Ring::F2 };
    let mut acc: HashMap<PartitionTriple, i64> = HashMap::new();
    for (u, c) in boundary(model, t, s)? {
        for (v, e) in boundary(model, &u, s)? {
            *acc.entry(v).or_insert(0) += c * e;
        }
    }
    Ok(normalize(ring, acc.into_iter().collect()))
}

/// Triples whose `∂∂` is nonzero.
pub fn square_defects(
    model: &CdModel,
    triples: &[PartitionTriple],
    s: Option<&SignAssignment>,
) -> Result<Vec<PartitionTriple>, SignCoverageError> {
    let res: Result<Vec<Option<PartitionTriple>>, SignCoverageError> = triples
        .par_iter()
        .map(|t| Ok((!boundary_squared(model, t, s)?.is_empty()).then(|| t.clone())))
        .collect();
    Ok(res?.into_iter().flatten().collect())
}

/// Matrix assembly inside a window; boundary terms leaving the window are
/// dropped, so homology of the result is diagnostic only.
pub fn windowed_complex(
    model: &CdModel,
    w: Window,
    s: Option<&SignAssignment>,
) -> Result<GradedComplex<PartitionTriple>, ChainError> {
    let levels = enumerate_cdp(model, w);
    let ring = if s.is_some() { Ring::Z } else { Ring::F2 };
    GradedComplex::assemble(
        ring,
        levels,
        |t| boundary(model, t, s).expect("sign coverage"),
        AssembleOptions { closure: Closure::Filter, check_square: false },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Generator, GridDiagram};

    fn model(n: usize, k: usize) -> CdModel {
        CdModel::new(&GridDiagram::standard(n).unwrap(), k)
    }

    #[test]
    fn census_n2() {
        let m = model(2, 2);
        let lv = enumerate_cdp(&m, Window { k: 2, n_max: 2 });
        assert_eq!(lv[0].len(), 2);
        // 4 rectangles plus (c_x, N e_j, (N)) for 2 generators, 2 markings, N = 1, 2
        assert_eq!(lv[1].len(), 4 + 8);
    }

    #[test]
    fn constant_single_part_is_cycle() {
        let m = model(3, 1);
        let x = Generator::identity(3).unwrap();
        for nn in 1..=3u8 {
            let t = PartitionTriple::with(Domain::constant(x), &[(2, &[nn])]);
            assert!(boundary_cdp_f2(&m, &t).is_empty());
            assert_eq!(boundary_terms(&m, &t, None).unwrap().len(), 2);
        }
    }

    #[test]
    fn rectangle_with_partition() {
        let m = model(3, 1);
        let r = m.rectangles()[3];
        let t = PartitionTriple::with(r, &[(1, &[2])]);
        let mut want = vec![
            (PartitionTriple::with(Domain::constant(r.from()), &[(1, &[2])]), 1),
            (PartitionTriple::with(Domain::constant(r.to()), &[(1, &[2])]), 1),
        ];
        want.sort();
        assert_eq!(boundary_cdp_f2(&m, &t), want);
    }

    #[test]
    fn key_and_text_round_trip() {
        let m = model(3, 2);
        for t in enumerate_cdp(&m, Window { k: 2, n_max: 2 }).concat().iter().step_by(7) {
            assert_eq!(&PartitionTriple::from_key(&t.key()).unwrap(), t);
            assert_eq!(&PartitionTriple::parse_text(&t.to_text()).unwrap(), t);
        }
    }

    #[test]
    fn order_matches_keys() {
        let m = model(3, 2);
        let lv = enumerate_cdp(&m, Window { k: 2, n_max: 2 });
        for l in &lv {
            assert!(l.windows(2).all(|w| w[0].key() < w[1].key()));
        }
    }
}
