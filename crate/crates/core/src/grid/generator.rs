use std::fmt;

use itertools::Itertools;

use super::GridError;

/// Largest supported grid size. Keeps generators and domains `Copy`.
pub const MAX_N: usize = 8;

/// A generator of the grid complex, stored as the 0-based row of the point
/// on each column circle: `rows[c]` is the row circle meeting column circle `c`.
///
/// In bracket notation `[a1 a2 ... an]` the point on column `j` lies on row `aj`
/// (both 1-based), so `rows[c] = a_{c+1} - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    n: u8,
    rows: [u8; MAX_N],
}

pub(crate) fn check_size(n: usize) -> Result<(), GridError> {
    if n < 2 {
        return Err(GridError::Degenerate(n));
    }
    if n > MAX_N {
        return Err(GridError::TooLarge(n));
    }
    Ok(())
}

impl Generator {
    /// Builds a generator from 0-based rows, one per column.
    pub fn from_rows(rows: &[usize]) -> Result<Self, GridError> {
        let n = rows.len();
        check_size(n)?;
        let mut seen = [false; MAX_N];
        let mut out = [0u8; MAX_N];
        for (c, &r) in rows.iter().enumerate() {
            if r >= n || seen[r] {
                return Err(GridError::InvalidPermutation(format!("{rows:?}")));
            }
            seen[r] = true;
            out[c] = r as u8;
        }
        Ok(Generator { n: n as u8, rows: out })
    }

    /// Builds a generator from its 1-based bracket entries.
    pub fn from_sigma(sigma: &[usize]) -> Result<Self, GridError> {
        if sigma.contains(&0) {
            return Err(GridError::InvalidPermutation(format!("{sigma:?}")));
        }
        let rows: Vec<usize> = sigma.iter().map(|&a| a - 1).collect();
        Self::from_rows(&rows).map_err(|e| match e {
            GridError::InvalidPermutation(_) => GridError::InvalidPermutation(format!("{sigma:?}")),
            other => other,
        })
    }

    pub fn identity(n: usize) -> Result<Self, GridError> {
        Self::from_rows(&(0..n).collect::<Vec<_>>())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// 0-based row of the point on column circle `c` (taken mod n).
    #[inline]
    pub fn row(&self, c: usize) -> usize {
        self.rows[c % self.n()] as usize
    }

    /// 0-based column of the point on row circle `r`.
    pub fn column_of_row(&self, r: usize) -> usize {
        let r = r % self.n();
        (0..self.n()).find(|&c| self.row(c) == r).expect("generator is a permutation")
    }

    pub fn rows(&self) -> &[u8] {
        &self.rows[..self.n()]
    }

    /// 1-based bracket entries.
    pub fn sigma(&self) -> Vec<usize> {
        self.rows().iter().map(|&r| r as usize + 1).collect()
    }

    /// Whether the lattice point (column circle `c`, row circle `r`) belongs to this generator.
    #[inline]
    pub fn contains_point(&self, c: usize, r: usize) -> bool {
        self.row(c) == r % self.n()
    }

    pub fn swapped(&self, c1: usize, c2: usize) -> Self {
        let mut g = *self;
        g.rows.swap(c1, c2);
        g
    }

    pub fn to_bracket(&self) -> String {
        let body: String = self.rows().iter().map(|&r| char::from(b'1' + r)).collect();
        format!("[{body}]")
    }

    /// Parses `[a1...an]`. Entries are single digits, optionally separated by
    /// commas or spaces.
    pub fn parse_bracket(s: &str) -> Result<Self, GridError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| GridError::Parse(format!("expected [..], got {s:?}")))?;
        let mut sigma = Vec::new();
        for ch in inner.chars() {
            match ch {
                ',' | ' ' => continue,
                d if d.is_ascii_digit() => sigma.push(d as usize - '0' as usize),
                _ => return Err(GridError::Parse(format!("bad character {ch:?} in {s:?}"))),
            }
        }
        Self::from_sigma(&sigma)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracket())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracket())
    }
}

/// All n! generators in lexicographic bracket order.
pub fn all_generators(n: usize) -> Result<Vec<Generator>, GridError> {
    check_size(n)?;
    Ok((0..n)
        .permutations(n)
        .map(|p| Generator::from_rows(&p).expect("permutation"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lists() {
        let g2 = all_generators(2).unwrap();
        assert_eq!(g2.iter().map(|g| g.to_bracket()).collect::<Vec<_>>(), ["[12]", "[21]"]);
        assert_eq!(all_generators(3).unwrap().len(), 6);
        let g4 = all_generators(4).unwrap();
        assert_eq!(g4.len(), 24);
        assert_eq!(g4[0].to_bracket(), "[1234]");
        assert!(g4.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn degenerate_sizes() {
        assert!(matches!(all_generators(1), Err(GridError::Degenerate(1))));
        assert!(matches!(all_generators(9), Err(GridError::TooLarge(9))));
    }

    #[test]
    fn bracket_round_trip() {
        for g in all_generators(4).unwrap() {
            assert_eq!(Generator::parse_bracket(&g.to_bracket()).unwrap(), g);
        }
        assert_eq!(Generator::parse_bracket("[6,2,3,4,5,1]").unwrap().to_bracket(), "[623451]");
        assert!(Generator::parse_bracket("[112]").is_err());
        assert!(Generator::parse_bracket("123").is_err());
    }
}
