//! Weight-sector complexes of the interaction differential and their exact homology.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{derivative_basis_scale, differential_with_cache, generator_weight, Superpotential};
use crate::linalg::{exact_rank, SparseMatrixQ};
use crate::operators::{GeneratorLabel, OperatorMonomial};

/// Which gamma basis the differential matrices are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Basis {
    #[default]
    Taylor,
    Derivative,
}

/// Sectors computed: `A ≤ a_max`, `B ≤ b_max`, `A + B ≤ total_max`, `Z ≤ z_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyBounds {
    pub a_max: u32,
    pub b_max: u32,
    pub total_max: Option<u32>,
    pub z_max: u32,
}

impl CohomologyBounds {
    /// `A + B ≤ max_weight`, `Z ≤ z_max`.
    pub fn total(max_weight: u32, z_max: u32) -> Self {
        Self { a_max: max_weight, b_max: max_weight, total_max: Some(max_weight), z_max }
    }

    /// `A ≤ a_max`, `B ≤ b_max` independently.
    pub fn rectangle(a_max: u32, b_max: u32, z_max: u32) -> Self {
        Self { a_max, b_max, total_max: None, z_max }
    }

    fn sectors(&self) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for a in 0..=self.a_max {
            for b in 0..=self.b_max {
                if self.total_max.is_some_and(|t| a + b > t) {
                    continue;
                }
                for z in 0..=self.z_max {
                    out.push((a, b, z));
                }
            }
        }
        out
    }
}

/// `(A, B, Z)` plus homological degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorKey {
    pub a: u32,
    pub b: u32,
    pub z: u32,
    pub degree: u32,
}

/// Chain and homology dimensions of one weight sector, indexed by homological degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SectorCohomology {
    pub chain_dims: Vec<usize>,
    pub homology: Vec<usize>,
}

impl SectorCohomology {
    pub fn euler(&self) -> i64 {
        self.homology.iter().enumerate().map(|(k, &h)| if k % 2 == 0 { h as i64 } else { -(h as i64) }).sum()
    }

    /// Same alternating sum from chain dimensions, independent of the differential.
    pub fn chain_euler(&self) -> i64 {
        self.chain_dims.iter().enumerate().map(|(k, &h)| if k % 2 == 0 { h as i64 } else { -(h as i64) }).sum()
    }

    /// Total even and odd homology after collapsing the grading mod 2.
    pub fn z2(&self) -> (usize, usize) {
        let even = self.homology.iter().step_by(2).sum();
        let odd = self.homology.iter().skip(1).step_by(2).sum();
        (even, odd)
    }

    pub fn homology_at(&self, degree: u32) -> usize {
        self.homology.get(degree as usize).copied().unwrap_or(0)
    }
}

/// Homology of every sector within the bounds, in sorted sector order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CohomologyTable {
    pub sectors: BTreeMap<(u32, u32, u32), SectorCohomology>,
}

impl CohomologyTable {
    pub fn dim(&self, a: u32, b: u32, z: u32, degree: u32) -> usize {
        self.sectors.get(&(a, b, z)).map_or(0, |s| s.homology_at(degree))
    }

    pub fn euler(&self, a: u32, b: u32, z: u32) -> i64 {
        self.sectors.get(&(a, b, z)).map_or(0, SectorCohomology::euler)
    }

    /// Nonzero entries keyed by sector and degree.
    pub fn entries(&self) -> impl Iterator<Item = (SectorKey, usize)> + '_ {
        self.sectors.iter().flat_map(|(&(a, b, z), s)| {
            s.homology
                .iter()
                .enumerate()
                .filter(|(_, &h)| h > 0)
                .map(move |(k, &h)| (SectorKey { a, b, z, degree: k as u32 }, h))
        })
    }

    /// Highest degree carrying homology anywhere in the table.
    pub fn max_degree(&self) -> Option<u32> {
        self.entries().map(|(k, _)| k.degree).max()
    }
}

/// Monomials of interacting weight exactly `(a, b, z)`, sorted, grouped by number of betas.
pub fn sector_basis(w: &Superpotential, weight: (u32, u32, u32)) -> Vec<Vec<OperatorMonomial>> {
    let (a, b, _) = weight;
    let mut gens = Vec::new();
    for flavor in 0..w.dim() {
        for n1 in 0..=a {
            for n2 in 0..=b {
                gens.push(GeneratorLabel::gamma(n1, n2, flavor));
                gens.push(GeneratorLabel::beta(n1, n2, flavor));
            }
        }
    }
    gens.sort();
    let gens: Vec<(GeneratorLabel, (u32, u32, u32))> = gens.into_iter().map(|g| (g, generator_weight(w, &g))).collect();
    let mut found = Vec::new();
    let mut word = Vec::new();
    walk(&gens, 0, weight, &mut word, &mut found);
    let mut by_degree: Vec<Vec<OperatorMonomial>> = Vec::new();
    for m in found {
        let k = m.beta_count() as usize;
        if by_degree.len() <= k {
            by_degree.resize(k + 1, Vec::new());
        }
        by_degree[k].push(m);
    }
    for level in &mut by_degree {
        level.sort();
    }
    by_degree
}

fn walk(
    gens: &[(GeneratorLabel, (u32, u32, u32))],
    idx: usize,
    rem: (u32, u32, u32),
    word: &mut Vec<GeneratorLabel>,
    out: &mut Vec<OperatorMonomial>,
) {
    if rem == (0, 0, 0) {
        let (_, m) = OperatorMonomial::from_word(word).expect("betas are used at most once");
        out.push(m);
        return;
    }
    if idx == gens.len() {
        return;
    }
    let (g, (x, y, z)) = gens[idx];
    let max_exp = if g.is_odd() { 1 } else { u32::MAX };
    let depth = word.len();
    let mut r = rem;
    let mut e = 0;
    loop {
        walk(gens, idx + 1, r, word, out);
        if e == max_exp || r.0 < x || r.1 < y || r.2 < z {
            break;
        }
        // every generator has positive Z-weight, so this terminates
        r = (r.0 - x, r.1 - y, r.2 - z);
        word.push(g);
        e += 1;
    }
    word.truncate(depth);
}

/// Differential matrices `d_k : C_k → C_{k−1}` for one sector, rows indexed by `C_{k−1}`.
pub fn sector_differentials(w: &Superpotential, basis: &[Vec<OperatorMonomial>], kind: Basis) -> Vec<SparseMatrixQ> {
    let mut cache = HashMap::new();
    let mut mats = Vec::new();
    for k in 1..basis.len() {
        let index: HashMap<&OperatorMonomial, usize> = basis[k - 1].iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut d = SparseMatrixQ::new(basis[k - 1].len(), basis[k].len());
        for (j, src) in basis[k].iter().enumerate() {
            let image = differential_with_cache(w, src, &mut cache);
            for (tgt, c) in image.terms() {
                let i = *index.get(tgt).expect("the differential preserves the interacting weight");
                let entry = match kind {
                    Basis::Taylor => c.clone(),
                    Basis::Derivative => c * derivative_basis_scale(src) / derivative_basis_scale(tgt),
                };
                d.add_to(i, j, entry);
            }
        }
        mats.push(d);
    }
    mats
}

/// Homology of one sector from exact ranks.
pub fn sector_cohomology(w: &Superpotential, weight: (u32, u32, u32), kind: Basis) -> SectorCohomology {
    let basis = sector_basis(w, weight);
    let mats = sector_differentials(w, &basis, kind);
    let ranks: Vec<usize> = mats.iter().map(exact_rank).collect();
    let chain_dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let homology = (0..chain_dims.len())
        .map(|k| {
            let out_rank = if k == 0 { 0 } else { ranks[k - 1] };
            let in_rank = ranks.get(k).copied().unwrap_or(0);
            chain_dims[k] - out_rank - in_rank
        })
        .collect();
    SectorCohomology { chain_dims, homology }
}

/// Homology of `(Sym(generators), s_int)` in every sector within `bounds`.
///
/// Sectors are independent and computed in parallel; the table is keyed in sorted order.
pub fn cohomology_table(w: &Superpotential, bounds: &CohomologyBounds, kind: Basis) -> CohomologyTable {
    let sectors = bounds.sectors();
    let results: Vec<SectorCohomology> = sectors.par_iter().map(|&s| sector_cohomology(w, s, kind)).collect();
    CohomologyTable { sectors: sectors.into_iter().zip(results).collect() }
}
