//! The complex of positive domains, graded by Maslov index.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::chain::{normalize, AssembleOptions, ChainError, GradedComplex, Ring};
use crate::grid::{all_generators, rectangles_from, rectangles_to, Domain, Generator, GridDiagram};

/// A basis element `(x, y, D)`; its grading is the Maslov index.
pub type CdGenerator = Domain;

/// Rectangles out of and into every generator of an n×n grid.
#[derive(Clone, Debug)]
pub struct RectangleCache {
    n: usize,
    from: HashMap<Generator, Vec<Domain>>,
    to: HashMap<Generator, Vec<Domain>>,
}

impl RectangleCache {
    pub fn new(n: usize) -> Self {
        let gens = all_generators(n).expect("valid n");
        let from = gens.par_iter().map(|x| (*x, rectangles_from(x))).collect();
        let to = gens.par_iter().map(|x| (*x, rectangles_to(x))).collect();
        RectangleCache { n, from, to }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn from(&self, x: &Generator) -> &[Domain] {
        &self.from[x]
    }

    pub fn to(&self, y: &Generator) -> &[Domain] {
        &self.to[y]
    }

    /// Every rectangle of the diagram, sorted.
    pub fn all(&self) -> Vec<Domain> {
        let mut v: Vec<Domain> = self.from.values().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

/// Positive domains by grading, each level sorted.
pub fn enumerate_cd(cache: &RectangleCache, max_grading: usize) -> Vec<Vec<Domain>> {
    let mut levels = vec![all_generators(cache.n()).expect("valid n").into_iter().map(Domain::constant).collect::<Vec<_>>()];
    for _ in 0..max_grading {
        let prev = levels.last().expect("nonempty");
        let mut next: Vec<Domain> = prev
            .par_iter()
            .flat_map_iter(|d| cache.to(&d.from()).iter().map(move |r| r.compose(d).expect("endpoints match")))
            .collect();
        next.par_sort_unstable();
        next.dedup();
        levels.push(next);
    }
    levels
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PeelSide {
    /// `D = R * E`
    Front,
    /// `D = E * R`
    Back,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Peel {
    pub side: PeelSide,
    pub rect: Domain,
    pub rest: Domain,
}

/// All ways to split off one rectangle at either end, fronts first.
pub fn peels(cache: &RectangleCache, d: &Domain) -> Vec<Peel> {
    let mut out = Vec::new();
    for r in cache.from(&d.from()) {
        if let Some(rest) = d.peel_front(r) {
            out.push(Peel { side: PeelSide::Front, rect: *r, rest });
        }
    }
    for r in cache.to(&d.to()) {
        if let Some(rest) = d.peel_back(r) {
            out.push(Peel { side: PeelSide::Back, rect: *r, rest });
        }
    }
    out
}

/// Same as [`peels`] without a cache.
pub fn peels_uncached(d: &Domain) -> Vec<Peel> {
    let mut out = Vec::new();
    for r in rectangles_from(&d.from()) {
        if let Some(rest) = d.peel_front(&r) {
            out.push(Peel { side: PeelSide::Front, rect: r, rest });
        }
    }
    for r in rectangles_to(&d.to()) {
        if let Some(rest) = d.peel_back(&r) {
            out.push(Peel { side: PeelSide::Back, rect: r, rest });
        }
    }
    out
}

/// Source of rectangle signs for the integral differential.
pub trait RectangleSigns {
    /// `Some(bit)` where `(-1)^bit` is the sign of `r`; `None` if unknown.
    fn sign(&self, r: &Domain) -> Option<bool>;
}

impl RectangleSigns for HashMap<Domain, bool> {
    fn sign(&self, r: &Domain) -> Option<bool> {
        self.get(r).copied()
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("sign assignment has no value for rectangle {0}")]
pub struct SignCoverageError(pub String);

pub fn boundary_cd_f2(cache: &RectangleCache, d: &Domain) -> Vec<(Domain, i64)> {
    normalize(Ring::F2, peels(cache, d).into_iter().map(|p| (p.rest, 1)).collect())
}

/// Integral boundary: fronts carry `(-1)^s(R)`, backs `(-1)^(k + s(R))`.
pub fn boundary_cd_z(
    cache: &RectangleCache,
    d: &Domain,
    s: &dyn RectangleSigns,
) -> Result<Vec<(Domain, i64)>, SignCoverageError> {
    let k = d.maslov_index() as usize;
    let mut terms = Vec::new();
    for p in peels(cache, d) {
        let bit = s.sign(&p.rect).ok_or_else(|| SignCoverageError(p.rect.key().to_hex()))?;
        let exp = bit as usize + if p.side == PeelSide::Back { k } else { 0 };
        terms.push((p.rest, if exp.is_multiple_of(2) { 1 } else { -1 }));
    }
    Ok(normalize(Ring::Z, terms))
}

/// Enumerated positive domains of a diagram together with the rectangle cache.
#[derive(Clone, Debug)]
pub struct CdModel {
    pub grid: GridDiagram,
    pub cache: RectangleCache,
    pub levels: Vec<Vec<Domain>>,
}

impl CdModel {
    pub fn new(grid: &GridDiagram, max_grading: usize) -> Self {
        let cache = RectangleCache::new(grid.n());
        let levels = enumerate_cd(&cache, max_grading);
        CdModel { grid: grid.clone(), cache, levels }
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn max_grading(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn grading(&self, k: usize) -> &[Domain] {
        self.levels.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn rectangles(&self) -> &[Domain] {
        self.grading(1)
    }

    pub fn boundary_f2(&self, d: &Domain) -> Vec<(Domain, i64)> {
        boundary_cd_f2(&self.cache, d)
    }

    pub fn f2_complex(&self) -> Result<GradedComplex<Domain>, ChainError> {
        GradedComplex::assemble(Ring::F2, self.levels.clone(), |d| self.boundary_f2(d), AssembleOptions::default())
    }

    pub fn z_complex(&self, s: &(dyn RectangleSigns + Sync)) -> Result<GradedComplex<Domain>, CdError> {
        if let Some(r) = self.rectangles().iter().find(|r| s.sign(r).is_none()) {
            return Err(CdError::Coverage(SignCoverageError(r.key().to_hex())));
        }
        let bd = |d: &Domain| boundary_cd_z(&self.cache, d, s).expect("coverage checked");
        Ok(GradedComplex::assemble(Ring::Z, self.levels.clone(), bd, AssembleOptions::default())?)
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CdError {
    #[error(transparent)]
    Coverage(#[from] SignCoverageError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}
