//! Witness cycles and cocycles for the partition complex in gradings 0 to 3.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::cd::{peels, CdModel, PeelSide, RectangleCache};
use crate::cdp::{boundary_terms, OrderedPartition, PartitionTriple};
use crate::chain::{F2System, GradedComplex, PivotOrder};
use crate::grid::{column_squares, vertical_annulus, Domain, Generator};
use crate::signs::{is_planar, solve_f_j};

use super::{build_u, claimed_rank, rank_bound, RankCertificate, UConstruction, WitnessChain, WitnessCochain, WitnessError};

/// Shared inputs: the CD model, the solved `f_j` and the completed `U`.
pub struct WitnessContext<'a> {
    pub model: &'a CdModel,
    pub f: Arc<Vec<HashMap<Domain, bool>>>,
    pub cache: Arc<RectangleCache>,
    pub u: UConstruction,
}

impl<'a> WitnessContext<'a> {
    /// `model` must be enumerated at least to grading 2.
    pub fn new(model: &'a CdModel, complex: &GradedComplex<Domain>) -> Result<Self, WitnessError> {
        let n = model.n();
        let f: Result<Vec<_>, _> = (1..=n).into_par_iter().map(|j| solve_f_j(model, complex, j)).collect();
        let u = build_u(&model.cache, model.grading(2))?;
        Ok(WitnessContext { model, f: Arc::new(f?), cache: Arc::new(model.cache.clone()), u })
    }

    fn n(&self) -> usize {
        self.model.n()
    }

    fn identity(&self) -> Domain {
        Domain::constant(Generator::identity(self.n()).expect("valid n"))
    }

    fn constant_with(&self, js: &[usize]) -> PartitionTriple {
        let parts: Vec<(usize, &[u8])> = js.iter().map(|&j| (j, &[1u8][..])).collect();
        PartitionTriple::with(self.identity(), &parts)
    }
}

/// Cycles and cocycles in one grading, listed so that pairing should be the identity.
#[derive(Clone, Debug)]
pub struct WitnessGroup {
    pub grading: usize,
    pub cycles: Vec<WitnessChain<PartitionTriple>>,
    pub cocycles: Vec<WitnessCochain>,
    /// The closed forms without the cup-product terms; swept but not paired.
    pub literal: Vec<WitnessCochain>,
    pub notes: Vec<String>,
}

/// Triples with odd coefficient in the boundary of a mod-2 chain.
pub fn cdp_boundary_parity(model: &CdModel, chain: &[PartitionTriple]) -> Vec<PartitionTriple> {
    let mut acc: BTreeMap<PartitionTriple, bool> = BTreeMap::new();
    let terms: Vec<PartitionTriple> = chain
        .par_iter()
        .flat_map_iter(|t| boundary_terms(model, t, None).expect("no signs needed").into_iter().map(|x| x.triple))
        .collect();
    for t in terms {
        let e = acc.entry(t).or_insert(false);
        *e = !*e;
    }
    acc.into_iter().filter(|(_, b)| *b).map(|(t, _)| t).collect()
}

/// A subset of `candidates` whose boundary equals `target` mod 2.
pub fn complete_cdp(model: &CdModel, target: &[PartitionTriple], candidates: &[PartitionTriple]) -> Option<Vec<PartitionTriple>> {
    let mut rows: HashMap<PartitionTriple, usize> = target.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let mut eqs: Vec<Vec<usize>> = vec![Vec::new(); target.len()];
    let bds: Vec<Vec<PartitionTriple>> = candidates
        .par_iter()
        .map(|c| boundary_terms(model, c, None).expect("no signs needed").into_iter().map(|x| x.triple).collect())
        .collect();
    for (v, bd) in bds.into_iter().enumerate() {
        for t in bd {
            let next = rows.len();
            let r = *rows.entry(t).or_insert(next);
            if r == eqs.len() {
                eqs.push(Vec::new());
            }
            eqs[r].push(v);
        }
    }
    let mut sys = F2System::new(candidates.len());
    for (r, vars) in eqs.into_iter().enumerate() {
        sys.push(vars, r < target.len());
    }
    let sol = sys.solve(PivotOrder::Forward).ok()?;
    Some(candidates.iter().zip(sol).filter(|(_, b)| *b).map(|(t, _)| t.clone()).collect())
}

/// Shortest path from `x` to `y` along planar rectangles taken in either direction.
pub fn planar_path(model: &CdModel, x: &Generator, y: &Generator) -> Option<Vec<Domain>> {
    let mut prev: HashMap<Generator, (Generator, Domain)> = HashMap::new();
    let mut queue = VecDeque::from([*x]);
    let mut seen = std::collections::HashSet::from([*x]);
    while let Some(v) = queue.pop_front() {
        if v == *y {
            break;
        }
        let edges = model.cache.from(&v).iter().map(|r| (r.to(), r)).chain(model.cache.to(&v).iter().map(|r| (r.from(), r)));
        for (w, r) in edges {
            if is_planar(r) && seen.insert(w) {
                prev.insert(w, (v, *r));
                queue.push_back(w);
            }
        }
    }
    if !seen.contains(y) {
        return None;
    }
    let mut path = Vec::new();
    let mut v = *y;
    while v != *x {
        let (u, r) = prev[&v];
        path.push(r);
        v = u;
    }
    path.reverse();
    Some(path)
}

fn n_value(t: &PartitionTriple, j: usize) -> usize {
    t.n_j(j)
}

fn is_rectangle(t: &PartitionTriple) -> bool {
    t.domain.maslov_index() == 1
}

fn f_value(f: &[HashMap<Domain, bool>], j: usize, r: &Domain) -> bool {
    f[j - 1].get(r).copied().unwrap_or(false)
}

/// `r_j = N_j + f_j`, with `f_j` zero on triples carrying partitions.
fn r_j(f: Arc<Vec<HashMap<Domain, bool>>>, j: usize) -> impl Fn(&PartitionTriple) -> bool + Send + Sync + Clone {
    move |t: &PartitionTriple| {
        let fj = is_rectangle(t) && t.total_length() == 0 && f_value(&f, j, &t.domain);
        (n_value(t, j) % 2 == 1) ^ fj
    }
}

/// The single constant triple at the identity, paired with the cocycle that is 1 on every constant.
pub fn build_h0_witnesses(ctx: &WitnessContext) -> WitnessGroup {
    let c = WitnessChain::new("c_Id", 0, [PartitionTriple::plain(ctx.identity())]);
    let one = WitnessCochain::new("1", 0, |t: &PartitionTriple| t.domain.is_constant() && t.total_length() == 0);
    WitnessGroup { grading: 0, cycles: vec![c], cocycles: vec![one], literal: Vec::new(), notes: Vec::new() }
}

pub fn build_h1_witnesses(ctx: &WitnessContext) -> WitnessGroup {
    let n = ctx.n();
    let cycles = (1..=n).map(|j| WitnessChain::new(format!("g_{j}"), 1, [ctx.constant_with(&[j])])).collect();
    let cocycles = (1..=n).map(|j| WitnessCochain::new(format!("r_{j}"), 1, r_j(ctx.f.clone(), j))).collect();
    WitnessGroup { grading: 1, cycles, cocycles, literal: Vec::new(), notes: Vec::new() }
}

/// `U'`: the plain `U` plus, for each marking, rectangles along a planar path
/// joining the two constants its annuli leave behind.
pub fn build_u_prime(ctx: &WitnessContext) -> Result<WitnessChain<PartitionTriple>, WitnessError> {
    let mut u = WitnessChain::new("U'", 2, ctx.u.completed.terms.iter().map(|d| PartitionTriple::plain(*d)));
    let residue = cdp_boundary_parity(ctx.model, &u.terms);
    let mut ends: BTreeMap<usize, Vec<Generator>> = BTreeMap::new();
    for t in &residue {
        let js: Vec<usize> = (1..=ctx.n()).filter(|&j| !t.lambdas[j - 1].is_empty()).collect();
        if !t.domain.is_constant() || js.len() != 1 || t.lambdas[js[0] - 1] != OrderedPartition::single(1) {
            return Err(WitnessError::Construction { name: "U'".into(), reason: format!("unexpected boundary term {t:?}") });
        }
        ends.entry(js[0]).or_default().push(t.domain.from());
    }
    for (j, gens) in ends {
        if gens.len() % 2 == 1 {
            return Err(WitnessError::Construction { name: "U'".into(), reason: format!("odd endpoint count for marking {j}") });
        }
        for (x, y) in gens.iter().tuples() {
            let path = planar_path(ctx.model, x, y).ok_or_else(|| WitnessError::Construction {
                name: "U'".into(),
                reason: format!("no planar path from {x} to {y}"),
            })?;
            u.add(path.into_iter().map(|r| PartitionTriple::with(r, &[(j, &[1])])));
        }
    }
    Ok(u)
}

/// `N_j N_k + f_j^k + f_k^j` with `f_j^k = N_k f_j(R)` on rectangles with one part.
fn r_jk(f: Arc<Vec<HashMap<Domain, bool>>>, j: usize, k: usize) -> impl Fn(&PartitionTriple) -> bool + Send + Sync {
    move |t: &PartitionTriple| {
        let mut v = (n_value(t, j) * n_value(t, k)) % 2 == 1;
        if is_rectangle(t) && t.total_length() == 1 {
            v ^= n_value(t, k) % 2 == 1 && f_value(&f, j, &t.domain);
            v ^= n_value(t, j) % 2 == 1 && f_value(&f, k, &t.domain);
        }
        v
    }
}

fn rightmost_annulus(t: &PartitionTriple) -> bool {
    let d = &t.domain;
    t.total_length() == 0 && d.from() == d.to() && *d == vertical_annulus(&d.from(), d.n() - 1)
}

pub fn build_h2_witnesses(ctx: &WitnessContext) -> Result<WitnessGroup, WitnessError> {
    let n = ctx.n();
    let mut cycles = vec![build_u_prime(ctx)?];
    let mut cocycles = vec![WitnessCochain::new("r", 2, rightmost_annulus)];
    let mut literal = Vec::new();
    for (j, k) in (1..=n).tuple_combinations() {
        cycles.push(WitnessChain::new(format!("g_{{{j},{k}}}"), 2, [ctx.constant_with(&[j, k])]));
        cocycles.push(WitnessCochain::new(format!("r_{{{j},{k}}}"), 2, r_jk_cup(ctx.f.clone(), ctx.cache.clone(), j, k)));
        literal.push(WitnessCochain::new(format!("r_{{{j},{k}}} without cup"), 2, r_jk(ctx.f.clone(), j, k)));
    }
    Ok(WitnessGroup { grading: 2, cycles, cocycles, literal, notes: Vec::new() })
}

/// Every unit enlargement of `λ_j` applied to every term of `chain`, mod 2.
fn enlarge(chain: &WitnessChain<PartitionTriple>, j: usize, name: String) -> WitnessChain<PartitionTriple> {
    let terms = chain.terms.iter().flat_map(|t| {
        t.lambdas[j - 1].unit_enlargements().into_iter().map(move |(_, p)| {
            let mut lambdas = t.lambdas.clone();
            lambdas[j - 1] = p;
            PartitionTriple { domain: t.domain, lambdas }
        })
    });
    WitnessChain::new(name, chain.grading + 1, terms)
}

/// `rr_j(D, N, λ) = r_j(D − V_(n), N, λ)` when `D` contains the rightmost column, else 0.
fn rr_j(f: Arc<Vec<HashMap<Domain, bool>>>, j: usize) -> impl Fn(&PartitionTriple) -> bool + Send + Sync {
    let r = r_j(f, j);
    move |t: &PartitionTriple| {
        let n = t.domain.n();
        if !t.domain.contains_column(n - 1) {
            return false;
        }
        let e = t.domain.minus_squares(&column_squares(n, n - 1)).expect("column contained");
        let inner = PartitionTriple { domain: e, lambdas: t.lambdas.clone() };
        inner.grading() == 1 && r(&inner)
    }
}

/// `(f_a ∪ f_b)(E)`: sum over splittings `E = R_1 * R_2` of `f_a(R_1) f_b(R_2)`.
fn cup2(cache: &RectangleCache, f: &[HashMap<Domain, bool>], a: usize, b: usize, e: &Domain) -> bool {
    peels(cache, e)
        .iter()
        .filter(|p| p.side == PeelSide::Front && f_value(f, a, &p.rect) && f_value(f, b, &p.rest))
        .count()
        % 2
        == 1
}

/// `(f_a ∪ f_b ∪ f_c)(D)` over splittings into three rectangles.
fn cup3(cache: &RectangleCache, f: &[HashMap<Domain, bool>], a: usize, b: usize, c: usize, d: &Domain) -> bool {
    peels(cache, d)
        .iter()
        .filter(|p| p.side == PeelSide::Front && f_value(f, a, &p.rect) && cup2(cache, f, b, c, &p.rest))
        .count()
        % 2
        == 1
}

/// `r_{j,k}` plus `f_j ∪ f_k` on plain index-2 domains, which cancels the
/// annulus terms of plain index-3 domains.
fn r_jk_cup(
    f: Arc<Vec<HashMap<Domain, bool>>>,
    cache: Arc<RectangleCache>,
    j: usize,
    k: usize,
) -> impl Fn(&PartitionTriple) -> bool + Send + Sync {
    let base = r_jk(f.clone(), j, k);
    move |t: &PartitionTriple| {
        let plain = t.total_length() == 0 && t.domain.maslov_index() == 2;
        base(t) ^ (plain && cup2(&cache, &f, j, k, &t.domain))
    }
}

/// `r_{j,k,l}` plus `N_m (f_a ∪ f_b)` on index-2 domains with one part at
/// `m ∈ {j,k,l}` (`a < b` the other two), plus `f_j ∪ f_k ∪ f_l` on plain
/// index-3 domains.
fn r_jkl_cup(
    f: Arc<Vec<HashMap<Domain, bool>>>,
    cache: Arc<RectangleCache>,
    j: usize,
    k: usize,
    l: usize,
) -> impl Fn(&PartitionTriple) -> bool + Send + Sync {
    let base = r_jkl(f.clone(), j, k, l);
    move |t: &PartitionTriple| {
        let mut v = base(t);
        let mu = t.domain.maslov_index();
        if t.total_length() == 0 && mu == 3 {
            v ^= cup3(&cache, &f, j, k, l, &t.domain);
        } else if t.total_length() == 1 && mu == 2 {
            for (m, a, b) in [(l, j, k), (k, j, l), (j, k, l)] {
                if n_value(t, m) % 2 == 1 {
                    v ^= cup2(&cache, &f, a, b, &t.domain);
                }
            }
        }
        v
    }
}

/// `N_j N_k N_l + f_j^{k,l} + f_k^{j,l} + f_l^{j,k}`.
fn r_jkl(f: Arc<Vec<HashMap<Domain, bool>>>, j: usize, k: usize, l: usize) -> impl Fn(&PartitionTriple) -> bool + Send + Sync {
    move |t: &PartitionTriple| {
        let odd = |a: usize| n_value(t, a) % 2 == 1;
        let mut v = odd(j) && odd(k) && odd(l);
        if is_rectangle(t) {
            let single = |a: usize| t.lambdas[a - 1].len() == 1;
            for (a, b, c) in [(j, k, l), (k, j, l), (l, j, k)] {
                if single(b) && single(c) {
                    v ^= odd(b) && odd(c) && f_value(&f, a, &t.domain);
                }
            }
        }
        v
    }
}

/// `U'_j` are seeded by unit enlargements of `U'` in marking `j`, then
/// completed within `window` by triples whose domain avoids the rightmost
/// column. The cocycles are `rr_j` and `r_{j,k,l}`.
pub fn build_h3_witnesses(
    ctx: &WitnessContext,
    u_prime: &WitnessChain<PartitionTriple>,
    window_level3: &[PartitionTriple],
) -> Result<WitnessGroup, WitnessError> {
    let n = ctx.n();
    let mut notes = Vec::new();
    let triples: Vec<(usize, usize, usize)> = (1..=n).tuple_combinations().collect();
    let mut cocycles: Vec<WitnessCochain> =
        (1..=n).map(|j| WitnessCochain::new(format!("rr_{j}"), 3, rr_j(ctx.f.clone(), j))).collect();
    let mut g_cycles = Vec::new();
    let mut literal = Vec::new();
    for &(j, k, l) in &triples {
        g_cycles.push(WitnessChain::new(format!("g_{{{j},{k},{l}}}"), 3, [ctx.constant_with(&[j, k, l])]));
        cocycles.push(WitnessCochain::new(
            format!("r_{{{j},{k},{l}}}"),
            3,
            r_jkl_cup(ctx.f.clone(), ctx.cache.clone(), j, k, l),
        ));
        literal.push(WitnessCochain::new(format!("r_{{{j},{k},{l}}} without cup"), 3, r_jkl(ctx.f.clone(), j, k, l)));
    }
    let candidates: Vec<PartitionTriple> =
        window_level3.iter().filter(|t| !t.domain.contains_column(n - 1)).cloned().collect();
    let mut cycles = Vec::new();
    for j in 1..=n {
        let name = format!("U'_{j}");
        let mut c = enlarge(u_prime, j, name.clone());
        let residue = cdp_boundary_parity(ctx.model, &c.terms);
        if !residue.is_empty() {
            let fix = complete_cdp(ctx.model, &residue, &candidates).ok_or_else(|| WitnessError::Construction {
                name: name.clone(),
                reason: format!("{} boundary triples not cancellable in the window; enlarge K or Nmax", residue.len()),
            })?;
            notes.push(format!("{name}: {} completion triples", fix.len()));
            c.add(fix);
        }
        for (idx, &(a, b, cc)) in triples.iter().enumerate() {
            if cocycles[n + idx].pair(&c) {
                notes.push(format!("{name}: added g_{{{a},{b},{cc}}}"));
                c.add(g_cycles[idx].terms.iter().cloned());
            }
        }
        cycles.push(c);
    }
    cycles.extend(g_cycles);
    Ok(WitnessGroup { grading: 3, cycles, cocycles, literal, notes })
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleCheck {
    pub name: String,
    pub terms: usize,
    pub is_cycle: bool,
    pub residue: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleCheck {
    pub name: String,
    pub checked: usize,
    pub is_cocycle: bool,
    pub violations: usize,
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub grading: usize,
    pub cycles: Vec<CycleCheck>,
    pub cocycles: Vec<CocycleCheck>,
    pub literal: Vec<CocycleCheck>,
    /// Row `a`, column `b`: cocycle `a` on cycle `b`.
    pub pairing: Vec<Vec<u8>>,
    pub pairing_is_identity: bool,
    pub certificate: RankCertificate,
    pub notes: Vec<String>,
}

impl GroupReport {
    pub fn ok(&self) -> bool {
        self.certificate.certified
    }
}

/// Sweeps each cochain over `level`: `c(∂t)` must vanish for every `t`.
pub fn sweep(model: &CdModel, cochains: &[WitnessCochain], level: &[PartitionTriple]) -> Vec<CocycleCheck> {
    let m = cochains.len();
    let zero = || (vec![0usize; m], vec![None::<String>; m]);
    let (counts, firsts) = level
        .par_iter()
        .fold(zero, |(mut counts, mut firsts), t| {
            let bd: Vec<PartitionTriple> =
                boundary_terms(model, t, None).expect("no signs needed").into_iter().map(|x| x.triple).collect();
            for (i, c) in cochains.iter().enumerate() {
                if bd.iter().filter(|u| c.eval(u)).count() % 2 == 1 {
                    counts[i] += 1;
                    firsts[i].get_or_insert_with(|| t.to_text());
                }
            }
            (counts, firsts)
        })
        .reduce(zero, |(mut a, mut fa), (b, fb)| {
            for i in 0..m {
                a[i] += b[i];
                if fa[i].is_none() {
                    fa[i] = fb[i].clone();
                }
            }
            (a, fa)
        });
    cochains
        .iter()
        .enumerate()
        .map(|(i, c)| CocycleCheck {
            name: c.name.clone(),
            checked: level.len(),
            is_cocycle: counts[i] == 0,
            violations: counts[i],
            first_violation: firsts[i].clone(),
        })
        .collect()
}

/// Checks cycles exactly, sweeps cocycles over `next_level` (the window
/// triples one grading up) and evaluates the pairing matrix.
pub fn certify(model: &CdModel, group: &WitnessGroup, next_level: &[PartitionTriple]) -> GroupReport {
    let cycles: Vec<CycleCheck> = group
        .cycles
        .iter()
        .map(|c| {
            let residue = cdp_boundary_parity(model, &c.terms).len();
            CycleCheck { name: c.name.clone(), terms: c.terms.len(), is_cycle: residue == 0, residue }
        })
        .collect();
    let cocycles = sweep(model, &group.cocycles, next_level);
    let literal = sweep(model, &group.literal, next_level);
    let pairing: Vec<Vec<u8>> =
        group.cocycles.iter().map(|c| group.cycles.iter().map(|z| c.pair(z) as u8).collect()).collect();
    let pairing_is_identity = pairing.len() == group.cycles.len()
        && pairing.iter().enumerate().all(|(a, row)| row.iter().enumerate().all(|(b, &v)| v == (a == b) as u8));
    let n = model.n();
    let claimed = claimed_rank(n, group.grading).unwrap_or(0);
    let bound = rank_bound(n, group.grading);
    let certificate = RankCertificate {
        grading: group.grading,
        witnesses: group.cycles.len(),
        claimed,
        bound,
        certified: pairing_is_identity
            && cycles.iter().all(|c| c.is_cycle)
            && cocycles.iter().all(|c| c.is_cocycle)
            && group.cycles.len() as u64 == claimed
            && claimed == bound,
    };
    GroupReport {
        grading: group.grading,
        cycles,
        cocycles,
        literal,
        pairing,
        pairing_is_identity,
        certificate,
        notes: group.notes.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdp::{enumerate_cdp, Window};
    use crate::grid::GridDiagram;

    #[test]
    fn witnesses_certify_at_n3() {
        let grid = GridDiagram::standard(3).unwrap();
        let model = CdModel::new(&grid, 4);
        let complex = model.f2_complex().unwrap();
        let ctx = WitnessContext::new(&model, &complex).unwrap();
        let w = Window { k: 4, n_max: 3 };
        let levels = enumerate_cdp(&model, w);
        let h2 = build_h2_witnesses(&ctx).unwrap();
        let groups = vec![build_h0_witnesses(&ctx), build_h1_witnesses(&ctx), h2.clone(), build_h3_witnesses(&ctx, &h2.cycles[0], &levels[3]).unwrap()];
        for g in &groups {
            let rep = certify(&model, g, &levels[g.grading + 1]);
            assert!(rep.ok(), "{}", serde_json::to_string_pretty(&rep).unwrap());
        }
    }

    #[test]
    fn planar_path_connects_generators() {
        let grid = GridDiagram::standard(4).unwrap();
        let model = CdModel::new(&grid, 1);
        let x = Generator::identity(4).unwrap();
        let y = Generator::from_sigma(&[2, 1, 4, 3]).unwrap();
        let p = planar_path(&model, &x, &y).unwrap();
        assert!(p.iter().all(is_planar));
        assert_eq!(p.len(), 2);
    }
}
