//! Sign assignments: the obstruction cochain T, solving `δs = T`, gauge
//! fixing, the cochains `f_j`, and the extension to partition triples.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::cd::{CdModel, RectangleSigns};
use crate::cdp::{boundary_cdp_f2, PartitionTriple, Window};
use crate::chain::{ChainError, GradedComplex, Inconsistency, PivotOrder};
use crate::grid::{AnnulusKind, Domain, Generator, GridDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Solved,
    Loaded,
}

/// F2 signs on rectangles plus the parameters `s_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    pub values: HashMap<Domain, bool>,
    pub s_params: Vec<bool>,
    pub provenance: Provenance,
}

impl RectangleSigns for SignAssignment {
    fn sign(&self, r: &Domain) -> Option<bool> {
        self.values.get(r).copied()
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SignError {
    #[error("no solution; certificate: {0:?}")]
    Infeasible(Vec<String>),
    #[error("rectangle graph is not connected: reached {reached} of {total} generators")]
    Disconnected { reached: usize, total: usize },
    #[error("sign file: {0}")]
    File(String),
    #[error(transparent)]
    Chain(ChainError),
}

/// `T` on index-2 domains: 0 on horizontal annuli, 1 otherwise.
pub fn t_value(grid: &GridDiagram, d: &Domain) -> bool {
    !matches!(grid.annulus_label(d), Some(l) if l.kind == AnnulusKind::Horizontal)
}

pub fn build_t(model: &CdModel) -> HashMap<Domain, bool> {
    model.grading(2).iter().map(|d| (*d, t_value(&model.grid, d))).collect()
}

/// Evaluates an F2 cochain on the boundary of each grading-`k+1` element and
/// returns the first element where `δc` differs from `expected`.
pub fn coboundary_mismatch<'a>(
    complex: &'a GradedComplex<Domain>,
    k: usize,
    c: &dyn Fn(&Domain) -> bool,
    expected: &dyn Fn(&Domain) -> bool,
) -> Option<&'a Domain> {
    let d = complex.differential(k + 1);
    let basis = complex.basis(k);
    complex.basis(k + 1).iter().zip(&d.cols).find_map(|(h, col)| {
        let v = col.iter().filter(|(_, a)| a.rem_euclid(2) == 1).fold(false, |acc, &(i, _)| acc ^ c(&basis[i as usize]));
        (v != expected(h)).then_some(h)
    })
}

fn infeasible(complex: &GradedComplex<Domain>, k: usize, inc: &Inconsistency) -> SignError {
    SignError::Infeasible(inc.equations.iter().map(|&e| format!("{:?}", complex.basis(k + 1)[e])).collect())
}

/// Solves `δs = T` on the grading-2 basis of `complex` (an F2 CD complex).
pub fn solve_sign_cd(model: &CdModel, complex: &GradedComplex<Domain>, order: PivotOrder) -> Result<SignAssignment, SignError> {
    let sol = match complex.solve_coboundary(1, |d| t_value(&model.grid, d), order) {
        Ok(s) => s,
        Err(ChainError::Infeasible(inc)) => return Err(infeasible(complex, 1, &inc)),
        Err(e) => return Err(SignError::Chain(e)),
    };
    let values = complex.basis(1).iter().copied().zip(sol).collect();
    Ok(SignAssignment { values, s_params: vec![false; model.n()], provenance: Provenance::Solved })
}

/// Dimensions behind the uniqueness claim: solutions of `δs = T` form an
/// affine space of dimension `dim C_1 - rank d_2`, coboundaries of 0-cochains
/// have dimension `rank d_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessAudit {
    pub cochain_dim: usize,
    pub rank_d1: usize,
    pub rank_d2: usize,
    pub unique_up_to_gauge: bool,
}

pub fn uniqueness_audit(complex: &GradedComplex<Domain>) -> UniquenessAudit {
    let cochain_dim = complex.basis(1).len();
    let rank_d1 = complex.differential(1).rank_f2();
    let rank_d2 = complex.differential(2).rank_f2();
    UniquenessAudit { cochain_dim, rank_d1, rank_d2, unique_up_to_gauge: cochain_dim - rank_d2 == rank_d1 }
}

/// Adds `δg` to `c`, where `g` vanishes at the identity and is chosen so that
/// `c + δg` vanishes on a BFS spanning tree of the graph whose edges are the
/// rectangles accepted by `edge` (traversed both ways when `undirected`).
fn tree_gauge(
    n: usize,
    rects: &[Domain],
    c: &HashMap<Domain, bool>,
    edge: impl Fn(&Domain) -> bool,
    undirected: bool,
    total: usize,
) -> Result<HashMap<Domain, bool>, SignError> {
    let mut out_edges: HashMap<Generator, Vec<(Generator, Domain)>> = HashMap::new();
    for r in rects.iter().filter(|r| edge(r)) {
        out_edges.entry(r.from()).or_default().push((r.to(), *r));
        if undirected {
            out_edges.entry(r.to()).or_default().push((r.from(), *r));
        }
    }
    for v in out_edges.values_mut() {
        v.sort_by_key(|e| e.1);
    }
    let root = Generator::identity(n).expect("valid n");
    let mut g: HashMap<Generator, bool> = HashMap::from([(root, false)]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let gu = g[&u];
        for (v, r) in out_edges.get(&u).map_or(&[][..], Vec::as_slice) {
            if !g.contains_key(v) {
                g.insert(*v, c.get(r).copied().unwrap_or(false) ^ gu);
                queue.push_back(*v);
            }
        }
    }
    if g.len() != total {
        return Err(SignError::Disconnected { reached: g.len(), total });
    }
    Ok(c.iter().map(|(r, &v)| (*r, v ^ g[&r.from()] ^ g[&r.to()])).collect())
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Representative of the gauge class of `s`: zero on the BFS tree (rooted at
/// the identity, rectangles in sorted order) of the directed rectangle graph.
pub fn gauge_normalize(model: &CdModel, s: &SignAssignment) -> Result<SignAssignment, SignError> {
    let values = tree_gauge(model.n(), model.rectangles(), &s.values, |_| true, false, factorial(model.n()))?;
    Ok(SignAssignment { values, s_params: s.s_params.clone(), provenance: s.provenance })
}

/// Adds `δg` for an arbitrary 0-cochain `g`.
pub fn apply_gauge(s: &HashMap<Domain, bool>, g: &dyn Fn(&Generator) -> bool) -> HashMap<Domain, bool> {
    s.iter().map(|(r, &v)| (*r, v ^ g(&r.from()) ^ g(&r.to()))).collect()
}

/// Rectangles avoiding the top row and the rightmost column.
pub fn is_planar(r: &Domain) -> bool {
    let n = r.n();
    r.support().iter().all(|&(c, row)| c + 1 < n && row + 1 < n)
}

/// Whether an index-2 domain is one of the annuli through `O_j`.
pub fn is_marked_annulus(grid: &GridDiagram, d: &Domain, j: usize) -> bool {
    grid.annulus_label(d).is_some_and(|l| l.marking == j)
}

/// `f_j` with `δf_j` the indicator of `V_j` and `H_j`, gauge-fixed to vanish on
/// a spanning tree of planar rectangles.
pub fn solve_f_j(model: &CdModel, complex: &GradedComplex<Domain>, j: usize) -> Result<HashMap<Domain, bool>, SignError> {
    let sol = match complex.solve_coboundary(1, |d| is_marked_annulus(&model.grid, d, j), PivotOrder::Forward) {
        Ok(s) => s,
        Err(ChainError::Infeasible(inc)) => return Err(infeasible(complex, 1, &inc)),
        Err(e) => return Err(SignError::Chain(e)),
    };
    let raw: HashMap<Domain, bool> = complex.basis(1).iter().copied().zip(sol).collect();
    tree_gauge(model.n(), model.rectangles(), &raw, is_planar, true, factorial(model.n()))
}

/// How rectangle signs are carried over to partition triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    /// Rectangles keep their CD values.
    Plain,
    /// Rectangles get `s(R) + Σ s_j f_j(R)`, which keeps the annulus rules
    /// intact once the type II terms are present.
    Corrected,
}

/// Extends a CD sign assignment to partition triples with parameters `s_j`.
/// Constant domains with a single part get `N s_j` (see [`constant_sign`]).
pub fn extend_sign_cdp(s: &SignAssignment, s_params: &[bool], f: &[HashMap<Domain, bool>], mode: Extension) -> SignAssignment {
    let mut values = s.values.clone();
    if mode == Extension::Corrected {
        for (j, &sj) in s_params.iter().enumerate() {
            if sj {
                for (r, v) in values.iter_mut() {
                    *v ^= f[j].get(r).copied().unwrap_or(false);
                }
            }
        }
    }
    SignAssignment { values, s_params: s_params.to_vec(), provenance: s.provenance }
}

/// Sign of `(c_x, N e_j, (N))`.
pub fn constant_sign(s: &SignAssignment, j: usize, big_n: usize) -> bool {
    s.s_params[j - 1] && big_n % 2 == 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RuleReport {
    pub checked: usize,
    pub violations: Vec<RuleViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleViolation {
    pub rule: String,
    pub witness: String,
}

impl RuleReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the Square Rule and the annulus rules on every index-2 domain,
/// directly from its rectangle decompositions.
pub fn verify_rules_cd(model: &CdModel, s: &SignAssignment) -> RuleReport {
    let mut report = RuleReport::default();
    for d in model.grading(2) {
        report.checked += 1;
        let decs: Vec<(Domain, Domain)> = model
            .cache
            .from(&d.from())
            .iter()
            .filter_map(|r| d.peel_front(r).map(|e| (*r, e)))
            .collect();
        let sv = |r: &Domain| s.values.get(r).copied();
        let pair = |(a, b): &(Domain, Domain)| Some(sv(a)? ^ sv(b)?);
        let (rule, ok) = match model.grid.annulus_label(d) {
            Some(l) => {
                let want = l.kind == AnnulusKind::Vertical;
                let ok = decs.len() == 1 && pair(&decs[0]) == Some(want);
                (if want { "annulus-vertical" } else { "annulus-horizontal" }, ok)
            }
            None => {
                let ok = decs.len() == 2
                    && matches!((pair(&decs[0]), pair(&decs[1])), (Some(a), Some(b)) if a != b);
                ("square", ok)
            }
        };
        if !ok {
            report.violations.push(RuleViolation { rule: rule.into(), witness: d.key().to_hex() });
        }
    }
    report
}

/// Sign of a grading-1 partition triple: a rectangle with no partitions, or
/// `(c_x, N e_j, (N))`.
pub fn triple_sign(s: &SignAssignment, t: &PartitionTriple) -> Option<bool> {
    if t.total_length() == 0 {
        return s.values.get(&t.domain).copied();
    }
    if !t.domain.is_constant() || t.total_length() != 1 {
        return None;
    }
    let j = t.lambdas.iter().position(|l| !l.is_empty())? + 1;
    Some(constant_sign(s, j, t.n_j(j)))
}

/// Value required of `δs` on a grading-2 triple: `T` on plain index-2 domains,
/// 0 on everything carrying partitions.
pub fn t_value_cdp(grid: &GridDiagram, t: &PartitionTriple) -> bool {
    t.total_length() == 0 && t_value(grid, &t.domain)
}

/// Which clause of the CDP sign rules governs a grading-2 triple.
pub fn cdp_clause(grid: &GridDiagram, t: &PartitionTriple) -> &'static str {
    match (t.total_length(), t.domain.maslov_index()) {
        (0, _) if grid.annulus_label(&t.domain).is_some() => "2-annulus",
        (0, _) => "1-non-annulus",
        (1, _) => "3-rectangle-with-partition",
        _ if t.lambdas.iter().filter(|l| !l.is_empty()).count() == 2 => "4-two-markings",
        _ => "5-two-parts",
    }
}

/// Checks `δs = T` on every grading-2 triple of the window.
pub fn verify_rules_cdp(model: &CdModel, s: &SignAssignment, window: Window) -> RuleReport {
    let levels = crate::cdp::enumerate_cdp(model, Window { k: 2, n_max: window.n_max });
    let results: Vec<Option<RuleViolation>> = levels[2]
        .par_iter()
        .map(|t| {
            let mut v = false;
            for (u, _) in boundary_cdp_f2(model, t) {
                match triple_sign(s, &u) {
                    Some(b) => v ^= b,
                    None => {
                        return Some(RuleViolation { rule: "coverage".into(), witness: u.key().to_hex() });
                    }
                }
            }
            (v != t_value_cdp(&model.grid, t))
                .then(|| RuleViolation { rule: cdp_clause(&model.grid, t).into(), witness: t.key().to_hex() })
        })
        .collect();
    RuleReport { checked: levels[2].len(), violations: results.into_iter().flatten().collect() }
}

/// Solves `δs = T` directly on the grading-1 triples of the window, with the
/// extra equations `s(c_{x^Id}, e_j, (1)) = s_j`. Independent of any CD solve.
pub fn solve_sign_cdp(
    model: &CdModel,
    window: Window,
    s_params: &[bool],
    order: PivotOrder,
) -> Result<HashMap<PartitionTriple, bool>, SignError> {
    let levels = crate::cdp::enumerate_cdp(model, Window { k: 2, n_max: window.n_max });
    let unknowns = &levels[1];
    let index: HashMap<&PartitionTriple, usize> = unknowns.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut sys = crate::chain::F2System::new(unknowns.len());
    for t in &levels[2] {
        let vars: Vec<usize> = boundary_cdp_f2(model, t)
            .into_iter()
            .map(|(u, _)| index.get(&u).copied().ok_or_else(|| SignError::File(format!("{u:?} outside window"))))
            .collect::<Result<_, _>>()?;
        sys.push(vars, t_value_cdp(&model.grid, t));
    }
    let id = Domain::constant(Generator::identity(model.n()).expect("valid n"));
    for (j, &sj) in s_params.iter().enumerate() {
        let t = PartitionTriple::with(id, &[(j + 1, &[1])]);
        sys.push(vec![index[&t]], sj);
    }
    let sol = sys
        .solve(order)
        .map_err(|inc| SignError::Infeasible(inc.equations.iter().map(|e| format!("equation {e}")).collect()))?;
    Ok(unknowns.iter().cloned().zip(sol).collect())
}

/// Compares a directly solved CDP assignment with `N s_j` on every
/// `(c_x, N e_j, (N))` of the window; returns the mismatches.
pub fn verify_constant_law(model: &CdModel, solved: &HashMap<PartitionTriple, bool>, s_params: &[bool], n_max: usize) -> Vec<String> {
    let mut bad = Vec::new();
    for x in model.grading(0) {
        for j in 1..=model.n() {
            for big_n in 1..=n_max {
                let t = PartitionTriple::with(*x, &[(j, &[big_n as u8])]);
                if solved.get(&t) != Some(&(s_params[j - 1] && big_n % 2 == 1)) {
                    bad.push(format!("{:?} j={j} N={big_n}", x.from()));
                }
            }
        }
    }
    bad
}

/// Sign file: `s_params=<bits>` then `<key-hex> <0|1>` per rectangle, sorted.
pub fn write_sign_file(s: &SignAssignment) -> String {
    let bits: String = s.s_params.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let mut out = format!("s_params={bits}\n");
    let mut rs: Vec<&Domain> = s.values.keys().collect();
    rs.sort();
    for r in rs {
        out.push_str(&format!("{} {}\n", r.key().to_hex(), u8::from(s.values[r])));
    }
    out
}

pub fn parse_bits(bits: &str) -> Result<Vec<bool>, SignError> {
    bits.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(SignError::File(format!("bad bit {c:?} in {bits:?}"))),
        })
        .collect()
}

pub fn read_sign_file(text: &str) -> Result<SignAssignment, SignError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| SignError::File("empty sign file".into()))?;
    let bits = header.strip_prefix("s_params=").ok_or_else(|| SignError::File(format!("bad header {header:?}")))?;
    let s_params = parse_bits(bits)?;
    let mut values = HashMap::new();
    let mut seen = HashSet::new();
    for line in lines {
        let (k, v) = line.split_once(' ').ok_or_else(|| SignError::File(format!("bad line {line:?}")))?;
        let key = crate::grid::CanonicalKey::from_hex(k).map_err(|e| SignError::File(e.to_string()))?;
        let d = Domain::from_key(&key).map_err(|e| SignError::File(e.to_string()))?;
        if d.maslov_index() != 1 || d.n() != s_params.len() {
            return Err(SignError::File(format!("{k} is not a rectangle of the {}x{} grid", s_params.len(), s_params.len())));
        }
        let bit = match v.trim() {
            "0" => false,
            "1" => true,
            other => return Err(SignError::File(format!("bad sign {other:?}"))),
        };
        if !seen.insert(d) {
            return Err(SignError::File(format!("duplicate key {k}")));
        }
        values.insert(d, bit);
    }
    Ok(SignAssignment { values, s_params, provenance: Provenance::Loaded })
}
