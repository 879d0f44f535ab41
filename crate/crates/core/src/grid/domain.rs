use std::fmt;

use super::generator::{Generator, MAX_N};
use super::GridError;

/// A positive domain: a 2-chain of squares with endpoint generators.
///
/// Square `(c, r)` lies between column circles `c`, `c+1` and row circles `r`, `r+1`
/// (0-based, mod n) and is stored at `mult[r * n + c]`.
///
/// Corner-defect convention: at the lattice point `p` on column circle `b` and row
/// circle `a`, `m_NE - m_NW - m_SE + m_SW = [p in from] - [p in to]` where NE is the
/// square `(b, a)`. A rectangle therefore has its `from` points at the bottom-left
/// and top-right corners.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    from: Generator,
    to: Generator,
    mult: [u8; MAX_N * MAX_N],
}

/// Corner defect of a multiplicity function at lattice point (b, a).
fn defect(n: usize, m: impl Fn(usize, usize) -> i64, b: usize, a: usize) -> i64 {
    let bm = (b + n - 1) % n;
    let am = (a + n - 1) % n;
    m(b, a) - m(bm, a) - m(b, am) + m(bm, am)
}

/// Checks the corner-defect condition and positivity. `mult` is row-major with
/// row 0 at the bottom: `mult[r * n + c]`.
pub fn is_domain(from: &Generator, to: &Generator, mult: &[i64]) -> bool {
    let n = from.n();
    if to.n() != n || mult.len() != n * n || mult.iter().any(|&v| v < 0) {
        return false;
    }
    let m = |c: usize, r: usize| mult[r * n + c];
    (0..n).all(|b| {
        (0..n).all(|a| {
            let want = from.contains_point(b, a) as i64 - to.contains_point(b, a) as i64;
            defect(n, m, b, a) == want
        })
    })
}

impl Domain {
    /// Validating constructor; `mult` is row-major, bottom row first.
    pub fn new(from: Generator, to: Generator, mult: &[i64]) -> Result<Self, GridError> {
        let n = from.n();
        if !is_domain(&from, &to, mult) {
            return Err(GridError::InvalidDomain(format!("{from} -> {to}")));
        }
        let mut out = [0u8; MAX_N * MAX_N];
        for (i, &v) in mult.iter().enumerate() {
            out[i] = u8::try_from(v).map_err(|_| GridError::Overflow)?;
        }
        debug_assert_eq!(mult.len(), n * n);
        Ok(Domain { from, to, mult: out })
    }

    pub(crate) fn from_raw(from: Generator, to: Generator, mult: [u8; MAX_N * MAX_N]) -> Self {
        let d = Domain { from, to, mult };
        debug_assert!(is_domain(&from, &to, &d.mult_vec()), "invalid domain {d:?}");
        d
    }

    pub fn constant(x: Generator) -> Self {
        Domain { from: x, to: x, mult: [0; MAX_N * MAX_N] }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.from.n()
    }
    #[inline]
    pub fn from(&self) -> Generator {
        self.from
    }
    #[inline]
    pub fn to(&self) -> Generator {
        self.to
    }

    /// Multiplicity of square (c, r), indices taken mod n.
    #[inline]
    pub fn mult(&self, c: usize, r: usize) -> u8 {
        let n = self.n();
        self.mult[(r % n) * n + (c % n)]
    }

    pub fn mult_slice(&self) -> &[u8] {
        &self.mult[..self.n() * self.n()]
    }

    pub fn mult_vec(&self) -> Vec<i64> {
        self.mult_slice().iter().map(|&v| v as i64).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.from == self.to && self.mult_slice().iter().all(|&v| v == 0)
    }

    pub fn max_mult(&self) -> u8 {
        self.mult_slice().iter().copied().max().unwrap_or(0)
    }

    /// Squares with positive multiplicity, as (column, row).
    pub fn support(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut v = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if self.mult(c, r) > 0 {
                    v.push((c, r));
                }
            }
        }
        v
    }

    /// Sum of the four square multiplicities around lattice point (b, a).
    fn corner_sum(&self, b: usize, a: usize) -> u32 {
        let n = self.n();
        let bm = b + n - 1;
        let am = a + n - 1;
        [(b, a), (bm, a), (b, am), (bm, am)].iter().map(|&(c, r)| self.mult(c, r) as u32).sum()
    }

    /// Maslov index from the point-average formula:
    /// 4μ is the sum of corner sums over the points of `from` and of `to`.
    pub fn maslov_index(&self) -> u32 {
        let n = self.n();
        let total: u32 = (0..n)
            .map(|c| self.corner_sum(c, self.from.row(c)) + self.corner_sum(c, self.to.row(c)))
            .sum();
        debug_assert_eq!(total % 4, 0, "{self:?}");
        total / 4
    }

    /// `self * other` (glue `self` then `other`).
    pub fn compose(&self, other: &Domain) -> Result<Domain, GridError> {
        if self.to != other.from {
            return Err(GridError::Composition { left_to: self.to, right_from: other.from });
        }
        let mut mult = [0u8; MAX_N * MAX_N];
        for (i, slot) in mult.iter_mut().enumerate().take(self.n() * self.n()) {
            *slot = self.mult[i].checked_add(other.mult[i]).ok_or(GridError::Overflow)?;
        }
        Ok(Domain { from: self.from, to: other.to, mult })
    }

    /// Whether `part` fits inside `self` square by square.
    #[inline]
    pub fn dominates(&self, part: &Domain) -> bool {
        self.mult_slice().iter().zip(part.mult_slice()).all(|(a, b)| a >= b)
    }

    /// Front peel: if `self = r * e`, returns `e`.
    pub fn peel_front(&self, r: &Domain) -> Option<Domain> {
        if r.from != self.from || !self.dominates(r) {
            return None;
        }
        Some(Domain { from: r.to, to: self.to, mult: self.diff(r) })
    }

    /// Back peel: if `self = e * r`, returns `e`.
    pub fn peel_back(&self, r: &Domain) -> Option<Domain> {
        if r.to != self.to || !self.dominates(r) {
            return None;
        }
        Some(Domain { from: self.from, to: r.from, mult: self.diff(r) })
    }

    fn diff(&self, other: &Domain) -> [u8; MAX_N * MAX_N] {
        let mut mult = self.mult;
        for (a, b) in mult.iter_mut().zip(other.mult.iter()) {
            *a -= b;
        }
        mult
    }

    /// Removes one copy of the footprint `pattern` (given by squares) keeping
    /// endpoints; used for annuli, whose corner defect vanishes.
    pub(crate) fn minus_squares(&self, squares: &[(usize, usize)]) -> Option<Domain> {
        let n = self.n();
        let mut mult = self.mult;
        for &(c, r) in squares {
            let i = (r % n) * n + (c % n);
            mult[i] = mult[i].checked_sub(1)?;
        }
        Some(Domain { from: self.from, to: self.to, mult })
    }

    pub(crate) fn plus_squares(&self, squares: &[(usize, usize)]) -> Option<Domain> {
        let n = self.n();
        let mut mult = self.mult;
        for &(c, r) in squares {
            let i = (r % n) * n + (c % n);
            mult[i] = mult[i].checked_add(1)?;
        }
        Some(Domain { from: self.from, to: self.to, mult })
    }

    /// Whether every square of column `c` has multiplicity at least 1.
    pub fn contains_column(&self, c: usize) -> bool {
        (0..self.n()).all(|r| self.mult(c, r) >= 1)
    }

    /// Whether every square of row `r` has multiplicity at least 1.
    pub fn contains_row(&self, r: usize) -> bool {
        (0..self.n()).all(|c| self.mult(c, r) >= 1)
    }

    /// Domain text block: header then rows, top row first.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut s = format!("from={} to={}\n", self.from, self.to);
        for r in (0..n).rev() {
            let row: Vec<String> = (0..n).map(|c| self.mult(c, r).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Domain, GridError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| GridError::Parse("empty domain text".into()))?;
        let (from, to) = parse_header(header)?;
        let n = from.n();
        let mut mult = vec![0i64; n * n];
        for i in 0..n {
            let r = n - 1 - i;
            let line = lines
                .next()
                .ok_or_else(|| GridError::Parse(format!("missing multiplicity row {}", i + 1)))?;
            let vals: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|e| GridError::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<_, _>>()?;
            if vals.len() != n {
                return Err(GridError::Parse(format!("row {line:?} has {} entries, want {n}", vals.len())));
            }
            for (c, v) in vals.into_iter().enumerate() {
                mult[r * n + c] = v;
            }
        }
        Domain::new(from, to, &mult)
    }
}

fn parse_header(header: &str) -> Result<(Generator, Generator), GridError> {
    let rest = header
        .strip_prefix("from=")
        .ok_or_else(|| GridError::Parse(format!("bad domain header {header:?}")))?;
    let (a, b) = rest
        .split_once(" to=")
        .ok_or_else(|| GridError::Parse(format!("bad domain header {header:?}")))?;
    let from = Generator::parse_bracket(a)?;
    let to = Generator::parse_bracket(b)?;
    if from.n() != to.n() {
        return Err(GridError::Parse("endpoint sizes differ".into()));
    }
    Ok((from, to))
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {:?}", self.from, self.to, self.support())
    }
}

/// The rectangle with bottom-left corner at the `x` point on column `c1` and
/// top-right corner at the `x` point on column `c2`, if its interior is free of
/// the other points of `x`.
pub fn rectangle_at(x: &Generator, c1: usize, c2: usize) -> Option<Domain> {
    let n = x.n();
    if c1 == c2 {
        return None;
    }
    let r1 = x.row(c1);
    let w = (c2 + n - c1) % n;
    let h = (x.row(c2) + n - r1) % n;
    for dc in 1..w {
        let off = (x.row(c1 + dc) + n - r1) % n;
        if off > 0 && off < h {
            return None;
        }
    }
    let mut mult = [0u8; MAX_N * MAX_N];
    for dc in 0..w {
        for dr in 0..h {
            mult[((r1 + dr) % n) * n + (c1 + dc) % n] = 1;
        }
    }
    Some(Domain::from_raw(*x, x.swapped(c1, c2), mult))
}

/// All empty rectangles starting at `x`, sorted.
pub fn rectangles_from(x: &Generator) -> Vec<Domain> {
    let n = x.n();
    let mut v: Vec<Domain> = (0..n)
        .flat_map(|c1| (0..n).filter_map(move |c2| rectangle_at(x, c1, c2)))
        .collect();
    v.sort_unstable();
    v
}

/// All empty rectangles ending at `y`, sorted.
pub fn rectangles_to(y: &Generator) -> Vec<Domain> {
    let n = y.n();
    let mut v: Vec<Domain> = Vec::new();
    for c1 in 0..n {
        for c2 in 0..n {
            if c1 != c2 {
                if let Some(r) = rectangle_at(&y.swapped(c1, c2), c1, c2) {
                    v.push(r);
                }
            }
        }
    }
    v.sort_unstable();
    v
}

/// Squares of the vertical annulus in column `c` (0-based).
pub fn column_squares(n: usize, c: usize) -> Vec<(usize, usize)> {
    (0..n).map(|r| (c, r)).collect()
}

/// Squares of the horizontal annulus in row `r` (0-based).
pub fn row_squares(n: usize, r: usize) -> Vec<(usize, usize)> {
    (0..n).map(|c| (c, r)).collect()
}

pub fn vertical_annulus(x: &Generator, c: usize) -> Domain {
    Domain::constant(*x).plus_squares(&column_squares(x.n(), c)).expect("fits")
}

pub fn horizontal_annulus(x: &Generator, r: usize) -> Domain {
    Domain::constant(*x).plus_squares(&row_squares(x.n(), r)).expect("fits")
}

#[cfg(test)]
mod tests {
    use super::super::generator::all_generators;
    use super::*;

    #[test]
    fn rectangles_n2() {
        let x = Generator::parse_bracket("[12]").unwrap();
        let rs = rectangles_from(&x);
        assert_eq!(rs.len(), 2);
        assert!(rs.iter().all(|r| r.to().to_bracket() == "[21]" && r.maslov_index() == 1));
    }

    #[test]
    fn rectangle_totals() {
        for (n, want) in [(2, 4), (3, 27), (4, 176)] {
            let total: usize = all_generators(n).unwrap().iter().map(|x| rectangles_from(x).len()).sum();
            assert_eq!(total, want, "n={n}");
        }
    }

    #[test]
    fn rectangles_to_matches_from() {
        let gens = all_generators(4).unwrap();
        let mut a: Vec<Domain> = gens.iter().flat_map(rectangles_from).collect();
        let mut b: Vec<Domain> = gens.iter().flat_map(rectangles_to).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn is_domain_examples() {
        let x = Generator::parse_bracket("[12]").unwrap();
        let y = Generator::parse_bracket("[21]").unwrap();
        assert!(is_domain(&x, &x, &[0, 0, 0, 0]));
        assert!(is_domain(&x, &y, &[1, 0, 0, 0]));
        assert!(!is_domain(&x, &x, &[1, 0, 0, 0]));
        assert!(!is_domain(&x, &y, &[1, 0, 0]));
        assert!(!is_domain(&x, &y, &[-1, 0, 0, 0]));
    }

    #[test]
    fn maslov_examples() {
        for x in all_generators(3).unwrap() {
            assert_eq!(Domain::constant(x).maslov_index(), 0);
            for c in 0..3 {
                assert_eq!(vertical_annulus(&x, c).maslov_index(), 2);
                assert_eq!(horizontal_annulus(&x, c).maslov_index(), 2);
            }
            let torus = Domain::new(x, x, &[1; 9]).unwrap();
            assert_eq!(torus.maslov_index(), 6);
        }
    }

    #[test]
    fn compose_and_peel() {
        let x = Generator::identity(3).unwrap();
        let c = Domain::constant(x);
        assert_eq!(c.compose(&c).unwrap(), c);
        let r = rectangles_from(&x)[0];
        assert_eq!(r.compose(&Domain::constant(r.to())).unwrap(), r);
        assert!(r.compose(&r).is_err());
        let v = vertical_annulus(&x, 2);
        let fronts: Vec<Domain> = rectangles_from(&x).iter().filter_map(|r| v.peel_front(r)).collect();
        assert_eq!(fronts.len(), 1);
        let r1 = v.peel_back(&fronts[0]).unwrap();
        assert_eq!(r1.compose(&fronts[0]).unwrap(), v);
    }

    #[test]
    fn text_round_trip() {
        let x = Generator::parse_bracket("[132]").unwrap();
        for r in rectangles_from(&x) {
            assert_eq!(Domain::parse_text(&r.to_text()).unwrap(), r);
        }
        assert!(Domain::parse_text("from=[12] to=[12]\n1 0\n0 0\n").is_err());
    }
}
