//! The index-2 families making up `U`, and the named rectangles in `∂U`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::cd::{peels, RectangleCache};
use crate::chain::{F2System, PivotOrder};
use crate::grid::{
    classify_index2, horizontal_annulus, rectangle_at, vertical_annulus, Domain, Generator, Index2Shape,
};

use super::{WitnessChain, WitnessError};

fn rg(a: isize, b: isize) -> Vec<isize> {
    (a..=b).collect()
}

macro_rules! seq {
    ($($p:expr),* $(,)?) => {{
        let mut v: Vec<isize> = Vec::new();
        $( v.extend(Seq::from($p).0); )*
        v
    }};
}

struct Seq(Vec<isize>);

impl From<isize> for Seq {
    fn from(x: isize) -> Self {
        Seq(vec![x])
    }
}

impl From<Vec<isize>> for Seq {
    fn from(v: Vec<isize>) -> Self {
        Seq(v)
    }
}

/// Bracket entries (1-based) to a generator; `None` if not a permutation of `1..=n`.
fn bracket(n: usize, v: &[isize]) -> Result<Generator, String> {
    if v.len() != n {
        return Err(format!("formula has {} entries, expected {n}", v.len()));
    }
    let sigma: Option<Vec<usize>> = v.iter().map(|&e| (e >= 1 && e as usize <= n).then_some(e as usize)).collect();
    let sigma = sigma.ok_or_else(|| format!("entry out of range in {v:?}"))?;
    Generator::from_sigma(&sigma).map_err(|e| e.to_string())
}

/// One named member of a family, with its endpoints.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub name: String,
    pub domain: Domain,
}

fn footprint(d: &Domain) -> BTreeSet<(usize, usize)> {
    d.support().into_iter().collect()
}

/// Positive index-2 domains from `x` to `y`.
fn index2_between(cache: &RectangleCache, x: &Generator, y: &Generator) -> Vec<Domain> {
    let mut out: Vec<Domain> = cache
        .from(x)
        .iter()
        .flat_map(|r1| cache.to(y).iter().filter(move |r2| r2.from() == r1.to()).map(move |r2| r1.compose(r2).expect("endpoints")))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Footprint pinning C, D and E where the endpoints admit several hexagons;
/// indices as in the family listing, coordinates `(column, row)` 0-based.
fn template(n: usize, family: char, i: usize) -> BTreeSet<(usize, usize)> {
    let mut s = BTreeSet::new();
    match family {
        'C' => {
            let a = n - i - 1;
            s.extend((0..=a).map(|c| (c, n - 1)));
            s.extend((a..n).map(|r| (a, r)));
        }
        'D' => {
            let a = n - i - 1;
            s.extend((0..=a).map(|r| (n - 1, r)));
            s.extend((a..n).map(|c| (c, a)));
        }
        _ => {
            let a = n - i - 2;
            s.extend((a..n - 1).map(|r| (a, r)));
            s.extend((a..n - 1).map(|c| (c, a)));
        }
    }
    s
}

fn hexagon(
    cache: &RectangleCache,
    name: String,
    x: Result<Generator, String>,
    y: Result<Generator, String>,
    tmpl: Option<BTreeSet<(usize, usize)>>,
) -> Result<FamilyMember, WitnessError> {
    let err = |reason: String| WitnessError::Construction { name: name.clone(), reason };
    let x = x.map_err(&err)?;
    let y = y.map_err(&err)?;
    let mut cands = index2_between(cache, &x, &y);
    if let Some(t) = tmpl {
        cands.retain(|d| footprint(d) == t);
    }
    if cands.len() != 1 {
        return Err(err(format!("{} index-2 candidates from {x} to {y}", cands.len())));
    }
    let d = cands[0];
    if classify_index2(&d) != Some(Index2Shape::Hexagon) {
        return Err(err(format!("{x} to {y} is not a hexagon")));
    }
    Ok(FamilyMember { name, domain: d })
}

/// Name, footprint formula endpoints and an optional pinned square set.
type HexagonJob = (String, Vec<isize>, Vec<isize>, Option<BTreeSet<(usize, usize)>>);

/// `A_i, B_i` for `0 ≤ i < n`, `C_i, D_i, E_i` for `1 ≤ i ≤ n−2`, and
/// `F_{i,j}, G_{i,j}` for `1 ≤ i ≤ n−3`, `1 ≤ j ≤ n−i−2`, in that order.
pub fn build_domain_families(cache: &RectangleCache) -> Result<Vec<FamilyMember>, WitnessError> {
    let n = cache.n();
    let m = n as isize;
    let id = Generator::identity(n).expect("valid n");
    let mut out = Vec::new();
    let mut a = vec![FamilyMember { name: "A_0".into(), domain: vertical_annulus(&id, n - 1) }];
    let mut b = vec![FamilyMember { name: "B_0".into(), domain: horizontal_annulus(&id, n - 1) }];
    for i in 1..m {
        let err = |name: String| move |reason: String| WitnessError::Construction { name, reason };
        let x = bracket(n, &seq!(m, rg(2, m - i), 1, rg(m - i + 1, m - 1))).map_err(err(format!("A_{i}")))?;
        a.push(FamilyMember { name: format!("A_{i}"), domain: vertical_annulus(&x, (m - 1 - i) as usize) });
        let y = bracket(n, &seq!(m - i + 1, rg(2, m - i), rg(m - i + 2, m), 1)).map_err(err(format!("B_{i}")))?;
        b.push(FamilyMember { name: format!("B_{i}"), domain: horizontal_annulus(&y, (m - 1 - i) as usize) });
    }
    out.extend(a);
    out.extend(b);

    let mut jobs: Vec<HexagonJob> = Vec::new();
    for fam in ['C', 'D', 'E'] {
        for i in 1..m - 1 {
            let (x, y) = match fam {
                'C' => (seq!(m, rg(2, m - i), 1, rg(m - i + 1, m - 1)), seq!(rg(1, m - i - 1), m, rg(m - i, m - 1))),
                'D' => (seq!(m - i + 1, rg(2, m - i), rg(m - i + 2, m), 1), seq!(rg(1, m - i - 1), rg(m - i + 1, m), m - i)),
                _ => (
                    seq!(rg(1, m - i - 1), m, rg(m - i + 1, m - 1), m - i),
                    seq!(rg(1, m - i - 2), m, rg(m - i, m - 1), m - i - 1),
                ),
            };
            jobs.push((format!("{fam}_{i}"), x, y, Some(template(n, fam, i as usize))));
        }
    }
    for fam in ['F', 'G'] {
        for i in 1..m - 2 {
            for j in 1..m - i - 1 {
                let (x, y) = if fam == 'F' {
                    (
                        seq!(rg(1, m - i - j - 2), m - i - j, m - i, rg(m - i - j + 1, m - i - 1), rg(m - i + 1, m), m - i - j - 1),
                        seq!(rg(1, m - i - j - 2), m - i + 1, m - i - j, rg(m - i - j + 1, m - i), rg(m - i + 2, m), m - i - j - 1),
                    )
                } else {
                    (
                        seq!(rg(1, m - i - j - 2), m, m - i - j - 1, rg(m - i - j + 1, m - i - 1), m - i - j, rg(m - i, m - 1)),
                        seq!(rg(1, m - i - j - 2), m, rg(m - i - j, m - i), m - i - j - 1, rg(m - i + 1, m - 1)),
                    )
                };
                jobs.push((format!("{fam}_{{{i},{j}}}"), x, y, None));
            }
        }
    }
    let hexes: Result<Vec<FamilyMember>, WitnessError> = jobs
        .into_par_iter()
        .map(|(name, x, y, t)| hexagon(cache, name, bracket(n, &x), bracket(n, &y), t))
        .collect();
    out.extend(hexes?);
    Ok(out)
}

/// `2n + 3(n−2) + 2·C(n−2, 2)`.
pub fn expected_u_terms(n: usize) -> usize {
    let m = n.saturating_sub(2);
    2 * n + 3 * m + m * m.saturating_sub(1)
}

/// Rectangles with odd multiplicity in the boundary of a chain of domains.
pub fn boundary_parity(cache: &RectangleCache, chain: &[Domain]) -> Vec<Domain> {
    let mut count: BTreeMap<Domain, usize> = BTreeMap::new();
    for d in chain {
        for p in peels(cache, d) {
            *count.entry(p.rest).or_default() += 1;
        }
    }
    count.into_iter().filter(|(_, c)| c % 2 == 1).map(|(d, _)| d).collect()
}

/// The sum of the families as listed, and the same sum completed to a cycle.
#[derive(Clone, Debug)]
pub struct UConstruction {
    pub members: Vec<FamilyMember>,
    pub listed: WitnessChain<Domain>,
    /// Rectangles surviving in the boundary of the listed sum.
    pub listed_defect: Vec<Domain>,
    /// Non-annular index-2 domains added to cancel `listed_defect`.
    pub correction: Vec<Domain>,
    pub completed: WitnessChain<Domain>,
}

/// Builds `U` from the families and, if its boundary does not vanish, adds
/// index-2 domains that are not annuli until it does. Pairs of disjoint
/// rectangles are tried first, then every non-annular shape.
pub fn build_u(cache: &RectangleCache, index2: &[Domain]) -> Result<UConstruction, WitnessError> {
    let members = build_domain_families(cache)?;
    let mut terms: Vec<Domain> = members.iter().map(|m| m.domain).collect();
    terms.sort_unstable();
    let listed = WitnessChain { name: "U".into(), grading: 2, terms };
    let defect = boundary_parity(cache, &listed.terms);
    let mut correction = Vec::new();
    if !defect.is_empty() {
        let disjoint: Vec<Domain> =
            index2.par_iter().filter(|d| classify_index2(d) == Some(Index2Shape::DisjointRectangles)).copied().collect();
        correction = match complete(cache, &defect, &disjoint) {
            Some(c) => c,
            None => {
                let any: Vec<Domain> = index2
                    .par_iter()
                    .filter(|d| classify_index2(d).is_some_and(|s| !s.is_annulus()))
                    .copied()
                    .collect();
                complete(cache, &defect, &any).ok_or_else(|| WitnessError::Construction {
                    name: "U".into(),
                    reason: format!("{} boundary rectangles cannot be cancelled", defect.len()),
                })?
            }
        };
    }
    let mut terms: BTreeSet<Domain> = listed.terms.iter().copied().collect();
    for c in &correction {
        if !terms.remove(c) {
            terms.insert(*c);
        }
    }
    let completed = WitnessChain { name: "U".into(), grading: 2, terms: terms.into_iter().collect() };
    Ok(UConstruction { members, listed, listed_defect: defect, correction, completed })
}

/// Finds a subset of `candidates` whose boundary is `target` mod 2.
fn complete(cache: &RectangleCache, target: &[Domain], candidates: &[Domain]) -> Option<Vec<Domain>> {
    let mut rows: HashMap<Domain, usize> = target.iter().enumerate().map(|(i, d)| (*d, i)).collect();
    let mut eqs: Vec<Vec<usize>> = vec![Vec::new(); target.len()];
    for (v, c) in candidates.iter().enumerate() {
        for p in peels(cache, c) {
            let next = rows.len();
            let r = *rows.entry(p.rest).or_insert(next);
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
    Some(candidates.iter().zip(sol).filter(|(_, b)| *b).map(|(d, _)| *d).collect())
}

/// A named rectangle with the partners the cancellation argument expects.
#[derive(Clone, Debug)]
pub struct NamedRectangle {
    pub name: String,
    pub rect: Result<Domain, String>,
    pub expected: Vec<String>,
}

/// Outcome of auditing one named rectangle against the boundary multiset.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CancellationEntry {
    pub name: String,
    pub built: bool,
    pub error: Option<String>,
    pub occurrences: usize,
    pub partners: Vec<String>,
    pub expected: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CancellationAudit {
    pub entries: Vec<CancellationEntry>,
    /// Rectangles in the boundary multiset matching no named rectangle.
    pub unnamed: Vec<String>,
}

impl CancellationAudit {
    pub fn ok(&self) -> bool {
        self.unnamed.is_empty() && self.entries.iter().all(|e| e.ok)
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.ok).count()
    }
}

/// The `w × h` rectangle from `x` to `y` (`w` columns wide, `h` rows tall).
fn rect_between(x: &Generator, y: &Generator, w: usize, h: usize) -> Result<Domain, String> {
    let n = x.n();
    let diff: Vec<usize> = (0..n).filter(|&c| x.row(c) != y.row(c)).collect();
    if diff.len() != 2 || x.swapped(diff[0], diff[1]) != *y {
        return Err(format!("{x} and {y} do not differ by a transposition"));
    }
    let mut seen = Vec::new();
    for (c1, c2) in [(diff[0], diff[1]), (diff[1], diff[0])] {
        if let Some(r) = rectangle_at(x, c1, c2) {
            let rw = (c2 + n - c1) % n;
            let rh = (x.row(c2) + n - x.row(c1)) % n;
            if (rw, rh) == (w, h) {
                return Ok(r);
            }
            seen.push(format!("{rw}x{rh}"));
        }
    }
    Err(format!("no {w}x{h} rectangle from {x} to {y} (found: {})", seen.join(", ")))
}

/// Every rectangle named in the cancellation argument for `∂U`, with the two
/// family members it is expected to come from.
pub fn build_named_rectangles(n: usize) -> Vec<NamedRectangle> {
    let m = n as isize;
    let mut out = Vec::new();
    let mut push = |name: String, x: Vec<isize>, y: Vec<isize>, w: isize, h: isize, expected: Vec<String>| {
        let rect = bracket(n, &x)
            .and_then(|x| bracket(n, &y).map(|y| (x, y)))
            .and_then(|(x, y)| rect_between(&x, &y, w as usize, h as usize));
        out.push(NamedRectangle { name, rect, expected });
    };
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();

    push("R_{1,1}".into(), rg(1, m), seq!(m, rg(2, m - 1), 1), 1, 1, s(&["A_0", "B_0"]));
    for i in 2..m {
        push(
            format!("R_{{1,{i}}}"),
            seq!(m, rg(2, m - i + 1), 1, rg(m - i + 2, m - 1)),
            seq!(m, rg(2, m - i), 1, rg(m - i + 1, m - 1)),
            1,
            i,
            vec![format!("A_{}", i - 1), format!("C_{}", i - 1)],
        );
    }
    push("R_{2,1}".into(), rg(1, m), seq!(rg(1, m - 2), m, m - 1), 1, 1, s(&["C_1", "D_1"]));
    for i in 2..m {
        let expected = if i == m - 1 {
            vec![format!("A_{}", m - 1), format!("E_{}", m - 2)]
        } else {
            vec![format!("C_{i}"), format!("E_{i}")]
        };
        push(
            format!("R_{{2,{i}}}"),
            seq!(rg(1, m - i), m, rg(m - i + 1, m - 1)),
            seq!(rg(1, m - i - 1), m, rg(m - i, m - 1)),
            1,
            i,
            expected,
        );
    }
    for i in 2..m {
        push(
            format!("R_{{3,{i}}}"),
            seq!(m - i + 1, rg(2, m - i), rg(m - i + 2, m), 1),
            seq!(m - i, rg(2, m - i - 1), rg(m - i + 1, m), 1),
            i,
            1,
            vec![format!("B_{}", i - 1), format!("D_{}", i - 1)],
        );
    }
    for i in 2..m {
        let expected = if i <= m - 2 { vec![format!("D_{i}"), format!("E_{}", i - 1)] } else { Vec::new() };
        push(
            format!("R_{{4,{i}}}"),
            seq!(rg(1, m - i), rg(m - i + 2, m), m - i + 1),
            seq!(rg(1, m - i - 1), rg(m - i + 1, m), m - i),
            i,
            1,
            expected,
        );
    }
    for i in 1..m - 1 {
        let partner = if i == 1 { "{1,1}".to_string() } else { format!("{{1,{}}}", i - 1) };
        push(
            format!("R_{{5,{i}}}"),
            seq!(rg(1, m - i - 2), m - i, m, rg(m - i + 1, m - 1), m - i - 1),
            seq!(rg(1, m - i - 2), m, rg(m - i, m - 1), m - i - 1),
            1,
            i,
            vec![format!("E_{i}"), format!("F_{partner}")],
        );
        push(
            format!("R_{{6,{i}}}"),
            seq!(rg(1, m - i - 2), m, m - i - 1, rg(m - i + 1, m - 1), m - i),
            seq!(rg(1, m - i - 2), m, rg(m - i, m - 1), m - i - 1),
            i,
            1,
            vec![format!("E_{i}"), format!("G_{partner}")],
        );
    }
    for i in 2..m - 1 {
        for j in 1..m - i {
            let (pe, qe) = if i == m - 2 {
                (vec![format!("F_{{{},1}}", m - 3), format!("B_{}", m - 2)], vec![format!("G_{{{},1}}", m - 3), format!("A_{}", m - 2)])
            } else {
                let second = if j >= 2 { j - 1 } else { 1 };
                (
                    vec![format!("F_{{{},{j}}}", i - 1), format!("F_{{{i},{second}}}")],
                    vec![format!("G_{{{},{j}}}", i - 1), format!("G_{{{i},{second}}}")],
                )
            };
            push(
                format!("P_{{{i},{j}}}"),
                seq!(rg(1, m - i - j - 1), m - i - j + 1, m - i + 1, rg(m - i - j + 2, m - i), rg(m - i + 2, m), m - i - j),
                seq!(rg(1, m - i - j - 1), m - i + 1, rg(m - i - j + 1, m - i), rg(m - i + 2, m), m - i - j),
                1,
                j,
                pe,
            );
            push(
                format!("Q_{{{i},{j}}}"),
                seq!(rg(1, m - i - j - 1), m, m - i - j, rg(m - i - j + 2, m - i), m - i - j + 1, rg(m - i + 1, m - 1)),
                seq!(rg(1, m - i - j - 1), m, rg(m - i - j + 1, m - i), m - i - j, rg(m - i + 1, m - 1)),
                j,
                1,
                qe,
            );
        }
    }
    for i in 1..m {
        let (e1, e2) = if i == 1 {
            (s(&["B_0", "C_1"]), s(&["A_0", "D_1"]))
        } else if i == m - 1 {
            (vec![format!("A_{}", m - 1), format!("C_{}", m - 2)], vec![format!("B_{}", m - 1), format!("D_{}", m - 2)])
        } else {
            (vec![format!("C_{}", i - 1), format!("C_{i}")], vec![format!("D_{}", i - 1), format!("D_{i}")])
        };
        push(
            format!("R'_{{1,{i}}}"),
            seq!(m, rg(2, m - i), 1, rg(m - i + 1, m - 1)),
            seq!(rg(1, m - i), m, rg(m - i + 1, m - 1)),
            m - i,
            1,
            e1,
        );
        push(
            format!("R'_{{2,{i}}}"),
            seq!(m - i + 1, rg(2, m - i), rg(m - i + 2, m), 1),
            seq!(rg(1, m - i), rg(m - i + 2, m), m - i + 1),
            1,
            m - i,
            e2,
        );
    }
    for i in 1..m - 2 {
        for j in 2..m - i {
            let (pe, qe) = if j == m - i - 1 {
                (vec![format!("F_{{{i},{}}}", m - i - 2), format!("B_{i}")], vec![format!("G_{{{i},{}}}", m - i - 2), format!("A_{i}")])
            } else {
                (
                    vec![format!("F_{{{i},{}}}", j - 1), format!("F_{{{i},{j}}}")],
                    vec![format!("G_{{{i},{}}}", j - 1), format!("G_{{{i},{j}}}")],
                )
            };
            push(
                format!("P'_{{{i},{j}}}"),
                seq!(rg(1, m - i - j - 1), m - i, rg(m - i - j + 1, m - i - 1), rg(m - i + 1, m), m - i - j),
                seq!(rg(1, m - i - j - 1), m - i + 1, rg(m - i - j + 1, m - i), rg(m - i + 2, m), m - i - j),
                j,
                1,
                pe,
            );
            push(
                format!("Q'_{{{i},{j}}}"),
                seq!(rg(1, m - i - j - 1), m, rg(m - i - j + 1, m - i - 1), m - i - j, rg(m - i, m - 1)),
                seq!(rg(1, m - i - j - 1), m, rg(m - i - j + 1, m - i), m - i - j, rg(m - i + 1, m - 1)),
                1,
                j,
                qe,
            );
        }
    }
    out
}

/// Checks that each named rectangle occurs exactly twice in the boundary
/// multiset of the listed families, coming from the expected members.
pub fn cancellation_audit(cache: &RectangleCache, members: &[FamilyMember], named: &[NamedRectangle]) -> CancellationAudit {
    let mut sources: BTreeMap<Domain, Vec<String>> = BTreeMap::new();
    for m in members {
        for p in peels(cache, &m.domain) {
            sources.entry(p.rest).or_default().push(m.name.clone());
        }
    }
    let mut claimed: BTreeSet<Domain> = BTreeSet::new();
    let entries = named
        .iter()
        .map(|nr| match &nr.rect {
            Ok(r) => {
                claimed.insert(*r);
                let mut partners = sources.get(r).cloned().unwrap_or_default();
                partners.sort();
                let mut expected = nr.expected.clone();
                expected.sort();
                CancellationEntry {
                    name: nr.name.clone(),
                    built: true,
                    error: None,
                    occurrences: partners.len(),
                    ok: partners.len() == 2 && partners == expected,
                    partners,
                    expected,
                }
            }
            Err(e) => CancellationEntry {
                name: nr.name.clone(),
                built: false,
                error: Some(e.clone()),
                occurrences: 0,
                partners: Vec::new(),
                expected: nr.expected.clone(),
                ok: false,
            },
        })
        .collect();
    let unnamed = sources
        .iter()
        .filter(|(r, _)| !claimed.contains(r))
        .map(|(r, from)| format!("{} -> {} from {}", r.from(), r.to(), from.join("+")))
        .collect();
    CancellationAudit { entries, unnamed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cd::enumerate_cd;

    fn setup(n: usize) -> (RectangleCache, Vec<Domain>) {
        let cache = RectangleCache::new(n);
        let levels = enumerate_cd(&cache, 2);
        (cache, levels[2].clone())
    }

    #[test]
    fn family_sizes_and_endpoints() {
        for n in 4..=6 {
            let cache = RectangleCache::new(n);
            let f = build_domain_families(&cache).unwrap();
            assert_eq!(f.len(), expected_u_terms(n));
            for m in &f {
                assert_eq!(m.domain.maslov_index(), 2, "{}", m.name);
            }
        }
    }

    #[test]
    fn six_by_six_examples() {
        let cache = RectangleCache::new(6);
        let f = build_domain_families(&cache).unwrap();
        let get = |s: &str| f.iter().find(|m| m.name == s).unwrap().domain;
        let a1 = get("A_1");
        assert_eq!(a1.from().to_bracket(), "[623451]");
        assert_eq!(a1.from(), a1.to());
        assert!(a1.contains_column(4));
        let c1 = get("C_1");
        assert_eq!((c1.from().to_bracket(), c1.to().to_bracket()), ("[623451]".into(), "[123465]".into()));
    }

    #[test]
    fn completed_u_is_a_cycle() {
        for n in 2..=5 {
            let (cache, idx2) = setup(n);
            let u = build_u(&cache, &idx2).unwrap();
            assert!(boundary_parity(&cache, &u.completed.terms).is_empty(), "n={n}");
            assert_eq!(u.listed.terms.len(), expected_u_terms(n));
        }
    }

    #[test]
    fn first_named_rectangle_pairs_the_identity_annuli() {
        let (cache, _) = setup(4);
        let f = build_domain_families(&cache).unwrap();
        let named = build_named_rectangles(4);
        let audit = cancellation_audit(&cache, &f, &named);
        let e = audit.entries.iter().find(|e| e.name == "R_{1,1}").unwrap();
        assert!(e.ok, "{e:?}");
    }

    #[test]
    fn rect_between_checks_dimensions() {
        let x = Generator::identity(3).unwrap();
        let y = x.swapped(0, 2);
        assert!(rect_between(&x, &y, 1, 1).is_ok());
        assert!(rect_between(&x, &y, 2, 2).is_err());
        assert!(rect_between(&x, &x.swapped(0, 1), 1, 1).is_ok());
    }
}
