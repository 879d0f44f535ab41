use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::domain::{horizontal_annulus, vertical_annulus, Domain};
use super::generator::{all_generators, check_size, Generator};
use super::GridError;

/// Toroidal grid diagram. `o_pos[c]` and `x_pos[c]` are the 0-based rows of the
/// O and X markings in square column `c`.
///
/// Marking labels: `O_j` (1-based `j`) is the O in column `j`, so `V_j` is the
/// vertical annulus `V_(j)` and `H_j` is `H_(o_pos[j-1] + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDiagram {
    n: usize,
    o_pos: Vec<usize>,
    x_pos: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnnulusKind {
    Vertical,
    Horizontal,
}

/// Label of a width-1 annulus: by position (`V_(i)`/`H_(i)`) and by the O it
/// passes through (`V_j`/`H_j`), all 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnulusLabel {
    pub kind: AnnulusKind,
    pub position: usize,
    pub marking: usize,
}

impl AnnulusLabel {
    pub fn name(&self) -> String {
        let k = match self.kind {
            AnnulusKind::Vertical => 'V',
            AnnulusKind::Horizontal => 'H',
        };
        format!("{k}_{} = {k}_({})", self.marking, self.position)
    }
}

impl GridDiagram {
    /// Builds a diagram from 0-based marking rows per column.
    pub fn new(o_pos: Vec<usize>, x_pos: Vec<usize>) -> Result<Self, GridError> {
        let n = o_pos.len();
        check_size(n)?;
        if x_pos.len() != n {
            return Err(GridError::InvalidPermutation(format!("X has {} entries, O has {n}", x_pos.len())));
        }
        Generator::from_rows(&o_pos).map_err(|_| GridError::InvalidPermutation(format!("O={o_pos:?}")))?;
        Generator::from_rows(&x_pos).map_err(|_| GridError::InvalidPermutation(format!("X={x_pos:?}")))?;
        if let Some(c) = (0..n).find(|&c| o_pos[c] == x_pos[c]) {
            return Err(GridError::MarkingCollision { column: c + 1 });
        }
        Ok(GridDiagram { n, o_pos, x_pos })
    }

    /// Builds a diagram from 1-based bracket permutations.
    pub fn from_brackets(o: &str, x: &str) -> Result<Self, GridError> {
        let o = Generator::parse_bracket(o)?;
        let x = Generator::parse_bracket(x)?;
        Self::new(rows_of(&o), rows_of(&x))
    }

    /// O on the diagonal, X one row above.
    pub fn standard(n: usize) -> Result<Self, GridError> {
        check_size(n)?;
        Self::new((0..n).collect(), (0..n).map(|c| (c + 1) % n).collect())
    }

    /// Uniformly random O and X permutations with no shared square.
    pub fn random(n: usize, seed: u64) -> Result<Self, GridError> {
        check_size(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut o: Vec<usize> = (0..n).collect();
            let mut x: Vec<usize> = (0..n).collect();
            o.shuffle(&mut rng);
            x.shuffle(&mut rng);
            if (0..n).all(|c| o[c] != x[c]) {
                return Self::new(o, x);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn o_pos(&self) -> &[usize] {
        &self.o_pos
    }
    pub fn x_pos(&self) -> &[usize] {
        &self.x_pos
    }

    /// 0-based square column of the vertical annulus through `O_j`.
    pub fn v_column(&self, j: usize) -> usize {
        j - 1
    }

    /// 0-based square row of the horizontal annulus through `O_j`.
    pub fn h_row(&self, j: usize) -> usize {
        self.o_pos[j - 1]
    }

    /// 1-based index of the O marking in square row `r`.
    pub fn marking_in_row(&self, r: usize) -> usize {
        self.o_pos.iter().position(|&o| o == r).expect("permutation") + 1
    }

    pub fn label_vertical(&self, c: usize) -> AnnulusLabel {
        AnnulusLabel { kind: AnnulusKind::Vertical, position: c + 1, marking: c + 1 }
    }

    pub fn label_horizontal(&self, r: usize) -> AnnulusLabel {
        AnnulusLabel { kind: AnnulusKind::Horizontal, position: r + 1, marking: self.marking_in_row(r) }
    }

    /// Every width-1 annulus from every generator, with labels.
    pub fn annuli(&self) -> Vec<(Domain, AnnulusLabel)> {
        let gens = all_generators(self.n).expect("valid n");
        let mut out = Vec::with_capacity(gens.len() * 2 * self.n);
        for x in &gens {
            out.extend(self.annuli_at(x));
        }
        out
    }

    /// The 2n width-1 annuli from `x` to itself.
    pub fn annuli_at(&self, x: &Generator) -> Vec<(Domain, AnnulusLabel)> {
        let mut out = Vec::with_capacity(2 * self.n);
        for c in 0..self.n {
            out.push((vertical_annulus(x, c), self.label_vertical(c)));
        }
        for r in 0..self.n {
            out.push((horizontal_annulus(x, r), self.label_horizontal(r)));
        }
        out
    }

    /// Recognizes a width-1 annulus.
    pub fn annulus_label(&self, d: &Domain) -> Option<AnnulusLabel> {
        if d.from() != d.to() {
            return None;
        }
        let supp = d.support();
        if supp.len() != self.n || d.max_mult() != 1 {
            return None;
        }
        let c0 = supp[0].0;
        if supp.iter().all(|&(c, _)| c == c0) {
            return Some(self.label_vertical(c0));
        }
        let r0 = supp[0].1;
        if supp.iter().all(|&(_, r)| r == r0) {
            return Some(self.label_horizontal(r0));
        }
        None
    }

    /// Grid file: `n=`, `O=`, `X=` lines with 1-based brackets.
    pub fn to_grid_file(&self) -> String {
        format!(
            "n={}\nO={}\nX={}\n",
            self.n,
            Generator::from_rows(&self.o_pos).expect("perm").to_bracket(),
            Generator::from_rows(&self.x_pos).expect("perm").to_bracket()
        )
    }

    pub fn parse_grid_file(text: &str) -> Result<Self, GridError> {
        let mut n = None;
        let mut o = None;
        let mut x = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| GridError::Parse(format!("bad grid line {line:?}")))?;
            match k.trim() {
                "n" => n = Some(v.trim().parse::<usize>().map_err(|e| GridError::Parse(e.to_string()))?),
                "O" => o = Some(Generator::parse_bracket(v)?),
                "X" => x = Some(Generator::parse_bracket(v)?),
                other => return Err(GridError::Parse(format!("unknown grid key {other:?}"))),
            }
        }
        let (n, o, x) = match (n, o, x) {
            (Some(n), Some(o), Some(x)) => (n, o, x),
            _ => return Err(GridError::Parse("grid file needs n=, O= and X= lines".into())),
        };
        if o.n() != n || x.n() != n {
            return Err(GridError::Parse(format!("marking permutations do not have size {n}")));
        }
        Self::new(rows_of(&o), rows_of(&x))
    }
}

fn rows_of(g: &Generator) -> Vec<usize> {
    g.rows().iter().map(|&r| r as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity() {
        assert!(GridDiagram::standard(1).is_err());
        assert!(GridDiagram::standard(2).is_ok());
        assert!(matches!(
            GridDiagram::new(vec![0, 1], vec![0, 1]),
            Err(GridError::MarkingCollision { column: 1 })
        ));
        assert!(GridDiagram::new(vec![0, 0], vec![1, 1]).is_err());
    }

    #[test]
    fn annuli_counts_and_labels() {
        let g = GridDiagram::standard(2).unwrap();
        assert_eq!(g.annuli().len(), 2 * 4);
        let g = GridDiagram::random(5, 7).unwrap();
        for (d, l) in g.annuli() {
            assert_eq!(d.maslov_index(), 2);
            assert_eq!(g.annulus_label(&d), Some(l));
            let j = l.marking;
            // the annulus through O_j contains the O_j square
            assert!(d.mult(j - 1, g.o_pos()[j - 1]) == 1 || l.kind == AnnulusKind::Horizontal);
            if l.kind == AnnulusKind::Horizontal {
                assert_eq!(d.mult(j - 1, g.o_pos()[j - 1]), 1);
            }
        }
    }

    #[test]
    fn grid_file_round_trip() {
        let g = GridDiagram::random(6, 3).unwrap();
        assert_eq!(GridDiagram::parse_grid_file(&g.to_grid_file()).unwrap(), g);
        assert!(GridDiagram::parse_grid_file("n=3\nO=[123]\n").is_err());
    }
}
