use super::domain::{rectangles_from, Domain};

/// Every ordered decomposition of `d` into rectangles, found by backtracking
/// front peels. Exponential in the index; intended for small domains.
pub fn decompositions(d: &Domain) -> Vec<Vec<Domain>> {
    if d.is_constant() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for r in rectangles_from(&d.from()) {
        if let Some(rest) = d.peel_front(&r) {
            for mut tail in decompositions(&rest) {
                tail.insert(0, r);
                out.push(tail);
            }
        }
    }
    out
}

/// Shapes of positive index-2 domains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Index2Shape {
    VerticalAnnulus { column: usize },
    HorizontalAnnulus { row: usize },
    DisjointRectangles,
    OverlappingRectangles,
    Hexagon,
}

impl Index2Shape {
    pub fn is_annulus(&self) -> bool {
        matches!(self, Index2Shape::VerticalAnnulus { .. } | Index2Shape::HorizontalAnnulus { .. })
    }
}

fn footprint(d: &Domain) -> Vec<(usize, usize)> {
    d.support()
}

/// Classifies an index-2 positive domain by its rectangle decompositions.
/// Returns `None` when the index is not 2 or the decomposition count is
/// inconsistent with the known classification.
pub fn classify_index2(d: &Domain) -> Option<Index2Shape> {
    if d.maslov_index() != 2 {
        return None;
    }
    let decs = decompositions(d);
    match decs.len() {
        1 => {
            let supp = d.support();
            let n = d.n();
            if supp.len() != n || d.max_mult() != 1 {
                return None;
            }
            if supp.iter().all(|&(c, _)| c == supp[0].0) {
                Some(Index2Shape::VerticalAnnulus { column: supp[0].0 })
            } else if supp.iter().all(|&(_, r)| r == supp[0].1) {
                Some(Index2Shape::HorizontalAnnulus { row: supp[0].1 })
            } else {
                None
            }
        }
        2 => {
            let mut a = [footprint(&decs[0][0]), footprint(&decs[0][1])];
            let mut b = [footprint(&decs[1][0]), footprint(&decs[1][1])];
            a.sort();
            b.sort();
            if a == b {
                if d.max_mult() >= 2 {
                    Some(Index2Shape::OverlappingRectangles)
                } else {
                    Some(Index2Shape::DisjointRectangles)
                }
            } else {
                Some(Index2Shape::Hexagon)
            }
        }
        _ => None,
    }
}
