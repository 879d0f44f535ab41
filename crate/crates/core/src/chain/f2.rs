//! Dense bit-row linear algebra over F2.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(nbits: usize) -> Self {
        BitRow { words: vec![0; nbits.div_ceil(64)] }
    }

    pub fn from_indices(nbits: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::zeros(nbits);
        for i in idx {
            r.flip(i);
        }
        r
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn highest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// Rank of a 0/1 matrix given as sparse vectors of set positions.
/// `width` bounds every index. The caller may pass either rows or columns.
pub fn rank(width: usize, vectors: &[Vec<u32>]) -> usize {
    // Reduce along the shorter side.
    let count = vectors.len();
    if count == 0 || width == 0 {
        return 0;
    }
    let rows: Vec<BitRow> = if width <= count {
        vectors.iter().map(|v| BitRow::from_indices(width, v.iter().map(|&i| i as usize))).collect()
    } else {
        let mut t = vec![BitRow::zeros(count); width];
        for (j, v) in vectors.iter().enumerate() {
            for &i in v {
                t[i as usize].flip(j);
            }
        }
        t
    };
    let bits = width.min(count);
    let mut pivots: Vec<Option<BitRow>> = vec![None; bits];
    let mut rank = 0;
    for mut r in rows {
        while let Some(b) = r.lowest() {
            match &pivots[b] {
                Some(p) => r.xor_assign(p),
                None => {
                    pivots[b] = Some(r);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Pivot preference when solving.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotOrder {
    /// Eliminate the lowest-indexed unknown first.
    #[default]
    Forward,
    /// Eliminate the highest-indexed unknown first.
    Reverse,
}

/// Outcome of an inconsistent system: the listed equations sum to `0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency {
    pub equations: Vec<usize>,
}

/// Linear system `A v = b` over F2 with sparse equations.
#[derive(Clone, Debug, Default)]
pub struct F2System {
    nvars: usize,
    equations: Vec<(Vec<usize>, bool)>,
}

impl F2System {
    pub fn new(nvars: usize) -> Self {
        F2System { nvars, equations: Vec::new() }
    }

    /// Adds `sum of vars = rhs`; repeated variables cancel.
    pub fn push(&mut self, vars: Vec<usize>, rhs: bool) {
        self.equations.push((vars, rhs));
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Rank of the coefficient matrix.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<u32>> = self.equations.iter().map(|(v, _)| odd_vars(v)).collect();
        rank(self.nvars, &rows)
    }

    /// Solves with free unknowns set to 0. On failure returns a set of equations
    /// whose sum is `0 = 1`.
    pub fn solve(&self, order: PivotOrder) -> Result<Vec<bool>, Inconsistency> {
        let nv = self.nvars;
        let ne = self.equations.len();
        // Column permutation implementing the pivot order.
        let perm = |i: usize| match order {
            PivotOrder::Forward => i,
            PivotOrder::Reverse => nv - 1 - i,
        };
        let mut pivots: Vec<Option<(BitRow, bool, BitRow)>> = vec![None; nv];
        for (e, (vars, rhs)) in self.equations.iter().enumerate() {
            let mut row = BitRow::from_indices(nv, odd_vars(vars).into_iter().map(|v| perm(v as usize)));
            let mut b = *rhs;
            let mut combo = BitRow::zeros(ne);
            combo.flip(e);
            loop {
                match row.lowest() {
                    None => {
                        if b {
                            return Err(Inconsistency { equations: combo.ones().collect() });
                        }
                        break;
                    }
                    Some(p) => match &pivots[p] {
                        Some((pr, pb, pc)) => {
                            row.xor_assign(pr);
                            b ^= pb;
                            combo.xor_assign(pc);
                        }
                        None => {
                            pivots[p] = Some((row, b, combo));
                            break;
                        }
                    },
                }
            }
        }
        let mut sol_perm = vec![false; nv];
        for p in (0..nv).rev() {
            if let Some((row, b, _)) = &pivots[p] {
                let mut v = *b;
                for q in row.ones() {
                    if q != p {
                        v ^= sol_perm[q];
                    }
                }
                sol_perm[p] = v;
            }
        }
        let mut sol = vec![false; nv];
        for (i, s) in sol.iter_mut().enumerate() {
            *s = sol_perm[perm(i)];
        }
        debug_assert!(self.check(&sol));
        Ok(sol)
    }

    /// Whether `sol` satisfies every equation.
    pub fn check(&self, sol: &[bool]) -> bool {
        self.equations
            .iter()
            .all(|(vars, rhs)| vars.iter().fold(false, |acc, &v| acc ^ sol[v]) == *rhs)
    }
}

fn odd_vars(vars: &[usize]) -> Vec<u32> {
    let mut v: Vec<u32> = vars.iter().map(|&x| x as u32).collect();
    v.sort_unstable();
    let mut out = Vec::with_capacity(v.len());
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_small() {
        assert_eq!(rank(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]), 2);
        assert_eq!(rank(3, &[vec![0], vec![1], vec![2]]), 3);
        assert_eq!(rank(2, &[vec![], vec![]]), 0);
        // wide input is transposed internally
        assert_eq!(rank(100, &[vec![5, 70], vec![70, 99]]), 2);
    }

    #[test]
    fn solve_and_certificate() {
        let mut s = F2System::new(3);
        s.push(vec![0, 1], true);
        s.push(vec![1, 2], false);
        let a = s.solve(PivotOrder::Forward).unwrap();
        let b = s.solve(PivotOrder::Reverse).unwrap();
        assert!(s.check(&a) && s.check(&b));
        assert_ne!(a, b);
        s.push(vec![0, 2], false);
        let cert = s.solve(PivotOrder::Forward).unwrap_err();
        assert_eq!(cert.equations, vec![0, 1, 2]);
    }

    #[test]
    fn repeated_variables_cancel() {
        let mut s = F2System::new(2);
        s.push(vec![0, 0, 1], true);
        assert_eq!(s.solve(PivotOrder::Forward).unwrap(), vec![false, true]);
    }
}
