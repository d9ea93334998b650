//! Finite polyhedral/simplicial complexes, their augmented F2 cochain
//! complex, cochains and weighted norms.
//!
//! Dimensions run from -1 to d; dimension -1 always holds the single empty
//! cell, incident to every vertex. Cell order is the order of first
//! appearance in the input, and every matrix and bit vector in the crate
//! uses that order, so outputs are reproducible bit for bit.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::gf2::{Gf2Matrix, Gf2Vec, WeightTable};
use crate::Rat;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("empty complex")]
    Empty,
    #[error("duplicate {what} {name:?} in dimension {dim}")]
    Duplicate { what: &'static str, name: String, dim: isize },
    #[error("simplex {simplex:?} repeats vertex {vertex:?}")]
    RepeatedVertex { simplex: String, vertex: String },
    #[error("cell {cell:?} (dim {dim}) lists unknown face {face:?}")]
    DanglingIncidence { dim: isize, cell: String, face: String },
    #[error("cell {cell:?} (dim {dim}) has no incidence entry")]
    MissingIncidence { dim: isize, cell: String },
    #[error("dimension {dim} has no cells but dimension {above} does")]
    DimensionGap { dim: isize, above: isize },
    #[error("coboundary composition is nonzero entering dimension {k} (bad incidence structure)")]
    CoboundarySquared { k: isize },
    #[error("dimension {k} out of range for a {dim}-dimensional complex")]
    DimOutOfRange { k: isize, dim: usize },
    #[error("unknown cell {name:?} in dimension {dim}")]
    UnknownCell { dim: isize, name: String },
    #[error("the empty cell is not a valid argument here")]
    EmptyCellArgument,
    #[error("cochain has dimension {got}, expected {expected}")]
    CochainDimMismatch { expected: isize, got: isize },
    #[error("cochain length {got} does not match {expected} cells")]
    CochainLenMismatch { expected: usize, got: usize },
    #[error("bad norm weights: {0}")]
    BadWeights(String),
}

/// A finite polyhedral cell complex with its incidence structure.
///
/// Immutable after construction; cheap to share across threads.
#[derive(Clone, Debug)]
pub struct ComplexSkeleton {
    dim: usize,
    /// names[k+1] lists the cells of dimension k (index 0 is the empty cell).
    names: Vec<Vec<String>>,
    /// vertex_sets[k+1][i]: vertex indices of cell i in dimension k.
    vertex_sets: Vec<Vec<BTreeSet<usize>>>,
    /// incidence[k+1][i]: indices of the (k-1)-faces of cell i (k >= 1).
    /// Dimension 0 is implicitly incident to the empty cell.
    incidence: Vec<Vec<Vec<usize>>>,
    /// Extra intersection pairs declared by polyhedral input, normalized as
    /// ordered ((dim, idx), (dim, idx)) with the smaller key first.
    extra_intersections: BTreeSet<((isize, usize), (isize, usize))>,
}

fn pair_key(a: (isize, usize), b: (isize, usize)) -> ((isize, usize), (isize, usize)) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Face names per (dimension, cell name), as polyhedral input supplies them.
pub type IncidenceSpec = HashMap<(usize, String), Vec<String>>;

/// A declared intersection between two (dimension, cell name) pairs.
pub type IntersectionPair = ((usize, String), (usize, String));

impl ComplexSkeleton {
    /// Builds the downward closure of a list of maximal simplices.
    ///
    /// Vertices are numbered by first appearance; the k-cells are the
    /// (k+1)-subsets of the maximal vertex sets, enumerated per maximal
    /// simplex in input order and lexicographically within one simplex.
    pub fn from_maximal_simplices(maximal: &[Vec<String>]) -> Result<Self, ComplexError> {
        if maximal.is_empty() || maximal.iter().all(|s| s.is_empty()) {
            return Err(ComplexError::Empty);
        }
        let mut vertex_ids: HashMap<String, usize> = HashMap::new();
        let mut vertex_names: Vec<String> = Vec::new();
        let mut simplices: Vec<Vec<usize>> = Vec::new();
        for simplex in maximal {
            let mut ids = Vec::with_capacity(simplex.len());
            for v in simplex {
                let id = *vertex_ids.entry(v.clone()).or_insert_with(|| {
                    vertex_names.push(v.clone());
                    vertex_names.len() - 1
                });
                if ids.contains(&id) {
                    return Err(ComplexError::RepeatedVertex {
                        simplex: format!("{simplex:?}"),
                        vertex: v.clone(),
                    });
                }
                ids.push(id);
            }
            if !ids.is_empty() {
                ids.sort_unstable();
                simplices.push(ids);
            }
        }
        let dim = simplices.iter().map(|s| s.len() - 1).max().unwrap();

        let mut names: Vec<Vec<String>> = vec![vec!["empty".to_string()]];
        let mut vertex_sets: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new()]];
        let mut incidence: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];

        // index_of[k]: vertex tuple -> cell index in dimension k
        let mut index_of: Vec<BTreeMap<Vec<usize>, usize>> = Vec::new();
        for k in 0..=dim {
            let mut level: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut level_names = Vec::new();
            let mut level_vsets = Vec::new();
            let mut level_inc = Vec::new();
            for simplex in &simplices {
                if simplex.len() < k + 1 {
                    continue;
                }
                for combo in subsets_lex(simplex, k + 1) {
                    if level.contains_key(&combo) {
                        continue;
                    }
                    let name = combo
                        .iter()
                        .map(|&v| vertex_names[v].clone())
                        .collect::<Vec<_>>()
                        .join(",");
                    let faces: Vec<usize> = if k == 0 {
                        vec![0]
                    } else {
                        let mut f = Vec::with_capacity(combo.len());
                        for drop in 0..combo.len() {
                            let mut face = combo.clone();
                            face.remove(drop);
                            f.push(index_of[k - 1][&face]);
                        }
                        f.sort_unstable();
                        f
                    };
                    level.insert(combo.clone(), level_names.len());
                    level_names.push(name);
                    level_vsets.push(combo.iter().copied().collect());
                    level_inc.push(faces);
                }
            }
            index_of.push(level);
            names.push(level_names);
            vertex_sets.push(level_vsets);
            incidence.push(level_inc);
        }

        let skeleton = ComplexSkeleton {
            dim,
            names,
            vertex_sets,
            incidence,
            extra_intersections: BTreeSet::new(),
        };
        skeleton.validate()?;
        Ok(skeleton)
    }

    /// Builds a polyhedral complex from explicit cell lists and incidences.
    ///
    /// `cells[k]` lists the k-cell names; `incidence` maps each cell of
    /// dimension k >= 1 to its (k-1)-face names; `intersections` may declare
    /// extra intersecting pairs beyond shared vertices.
    pub fn from_polyhedral(
        cells: &[Vec<String>],
        incidence_spec: &IncidenceSpec,
        intersections: &[IntersectionPair],
    ) -> Result<Self, ComplexError> {
        if cells.is_empty() || cells[0].is_empty() {
            return Err(ComplexError::Empty);
        }
        let dim = cells.len() - 1;
        for (k, level) in cells.iter().enumerate() {
            if level.is_empty() {
                return Err(ComplexError::DimensionGap { dim: k as isize, above: dim as isize });
            }
            let mut seen = HashSet::new();
            for name in level {
                if !seen.insert(name) {
                    return Err(ComplexError::Duplicate {
                        what: "cell",
                        name: name.clone(),
                        dim: k as isize,
                    });
                }
            }
        }

        let mut names: Vec<Vec<String>> = vec![vec!["empty".to_string()]];
        names.extend(cells.iter().cloned());

        let index: Vec<HashMap<&String, usize>> = cells
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, n)| (n, i)).collect())
            .collect();

        let mut incidence: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        incidence.push(vec![vec![0]; cells[0].len()]); // vertices touch the empty cell
        for k in 1..=dim {
            let mut level = Vec::with_capacity(cells[k].len());
            for name in &cells[k] {
                let faces = incidence_spec.get(&(k, name.clone())).ok_or_else(|| {
                    ComplexError::MissingIncidence { dim: k as isize, cell: name.clone() }
                })?;
                let mut ids = Vec::with_capacity(faces.len());
                for face in faces {
                    let id = index[k - 1].get(face).ok_or_else(|| {
                        ComplexError::DanglingIncidence {
                            dim: k as isize,
                            cell: name.clone(),
                            face: face.clone(),
                        }
                    })?;
                    if ids.contains(id) {
                        return Err(ComplexError::Duplicate {
                            what: "face",
                            name: face.clone(),
                            dim: k as isize - 1,
                        });
                    }
                    ids.push(*id);
                }
                ids.sort_unstable();
                level.push(ids);
            }
            incidence.push(level);
        }

        // Vertex sets by closure: a 0-cell is its own vertex; higher cells
        // take the union over their faces.
        let mut vertex_sets: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new()]];
        vertex_sets.push((0..cells[0].len()).map(|i| BTreeSet::from([i])).collect());
        for k in 1..=dim {
            let mut level = Vec::with_capacity(cells[k].len());
            for faces in &incidence[k + 1] {
                let mut vs = BTreeSet::new();
                for &f in faces {
                    vs.extend(vertex_sets[k][f].iter().copied());
                }
                level.push(vs);
            }
            vertex_sets.push(level);
        }

        let mut extra = BTreeSet::new();
        for ((ka, a), (kb, b)) in intersections {
            let ia = *index
                .get(*ka)
                .and_then(|m| m.get(a))
                .ok_or_else(|| ComplexError::UnknownCell { dim: *ka as isize, name: a.clone() })?;
            let ib = *index
                .get(*kb)
                .and_then(|m| m.get(b))
                .ok_or_else(|| ComplexError::UnknownCell { dim: *kb as isize, name: b.clone() })?;
            extra.insert(pair_key((*ka as isize, ia), (*kb as isize, ib)));
        }

        let skeleton =
            ComplexSkeleton { dim, names, vertex_sets, incidence, extra_intersections: extra };
        skeleton.validate()?;
        Ok(skeleton)
    }

    /// Checks the chain-complex property: consecutive coboundaries compose
    /// to zero, including the augmentation.
    fn validate(&self) -> Result<(), ComplexError> {
        for k in 0..self.dim as isize {
            let lower = self.coboundary(k)?;
            let upper = self.coboundary(k + 1)?;
            if !upper.mul(&lower).is_zero() {
                return Err(ComplexError::CoboundarySquared { k: k + 1 });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of cells of dimension k (0 outside -1..=dim).
    pub fn n_cells(&self, k: isize) -> usize {
        if k < -1 || k > self.dim as isize {
            0
        } else {
            self.names[(k + 1) as usize].len()
        }
    }

    pub fn cell_names(&self, k: isize) -> &[String] {
        &self.names[(k + 1) as usize]
    }

    pub fn cell_name(&self, k: isize, i: usize) -> &str {
        &self.names[(k + 1) as usize][i]
    }

    pub fn cell_index(&self, k: isize, name: &str) -> Result<usize, ComplexError> {
        if k < -1 || k > self.dim as isize {
            return Err(ComplexError::DimOutOfRange { k, dim: self.dim });
        }
        self.names[(k + 1) as usize]
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ComplexError::UnknownCell { dim: k, name: name.to_string() })
    }

    pub fn vertex_set(&self, k: isize, i: usize) -> &BTreeSet<usize> {
        &self.vertex_sets[(k + 1) as usize][i]
    }

    /// Face indices of cell i in dimension k (k >= 1).
    pub fn faces(&self, k: isize, i: usize) -> &[usize] {
        &self.incidence[(k + 1) as usize][i]
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        (0..=self.dim as isize).map(|k| self.n_cells(k)).collect()
    }

    /// The coboundary matrix C^{k-1} -> C^k in the augmented complex.
    ///
    /// k = 0 yields the augmentation column (the empty cell is incident to
    /// every vertex); k = dim + 1 yields the zero map out of the top
    /// dimension, convenient for kernel computations.
    pub fn coboundary(&self, k: isize) -> Result<Gf2Matrix, ComplexError> {
        if k < 0 || k > self.dim as isize + 1 {
            return Err(ComplexError::DimOutOfRange { k, dim: self.dim });
        }
        if k == self.dim as isize + 1 {
            return Ok(Gf2Matrix::zero(0, self.n_cells(self.dim as isize)));
        }
        let rows = self.n_cells(k);
        let cols = self.n_cells(k - 1);
        let mut m = Gf2Matrix::zero(rows, cols);
        for (i, faces) in self.incidence[(k + 1) as usize].iter().enumerate() {
            for &f in faces {
                m.set(i, f, true);
            }
        }
        Ok(m)
    }

    /// Non-augmented variant: for k = 0 the domain C^{-1} is zero.
    pub fn coboundary_nonaug(&self, k: isize) -> Result<Gf2Matrix, ComplexError> {
        if k == 0 {
            Ok(Gf2Matrix::zero(self.n_cells(0), 0))
        } else {
            self.coboundary(k)
        }
    }

    /// Boundary matrix C_k -> C_{k-1} of the (non-augmented) chain complex.
    pub fn boundary(&self, k: usize) -> Result<Gf2Matrix, ComplexError> {
        if k == 0 || k > self.dim {
            return Err(ComplexError::DimOutOfRange { k: k as isize, dim: self.dim });
        }
        Ok(self.coboundary(k as isize)?.transpose())
    }

    /// True if the two cells intersect: they share a vertex, or the pair was
    /// declared explicitly by polyhedral input.
    pub fn intersects(&self, a: (isize, usize), b: (isize, usize)) -> bool {
        let va = self.vertex_set(a.0, a.1);
        let vb = self.vertex_set(b.0, b.1);
        if va.intersection(vb).next().is_some() {
            return true;
        }
        self.extra_intersections.contains(&pair_key(a, b))
    }

    /// The local-sparsity indicator ι^k_τ: k-cells intersecting τ.
    pub fn incidence_cochain(&self, tau: (isize, usize), k: isize) -> Result<Cochain, ComplexError> {
        if tau.0 < 0 {
            return Err(ComplexError::EmptyCellArgument);
        }
        if tau.0 > self.dim as isize || tau.1 >= self.n_cells(tau.0) {
            return Err(ComplexError::DimOutOfRange { k: tau.0, dim: self.dim });
        }
        if k < 0 || k > self.dim as isize {
            return Err(ComplexError::DimOutOfRange { k, dim: self.dim });
        }
        let mut bits = Gf2Vec::zero(self.n_cells(k));
        for i in 0..self.n_cells(k) {
            if self.intersects(tau, (k, i)) {
                bits.set(i, true);
            }
        }
        Ok(Cochain { dim: k, bits })
    }
}

/// An F2 cochain over a fixed complex: a bit per k-cell.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain {
    pub dim: isize,
    pub bits: Gf2Vec,
}

impl Cochain {
    pub fn zero(x: &ComplexSkeleton, k: isize) -> Self {
        Cochain { dim: k, bits: Gf2Vec::zero(x.n_cells(k)) }
    }

    pub fn ones(x: &ComplexSkeleton, k: isize) -> Self {
        Cochain { dim: k, bits: Gf2Vec::ones(x.n_cells(k)) }
    }

    pub fn from_named_support(
        x: &ComplexSkeleton,
        k: isize,
        names: &[&str],
    ) -> Result<Self, ComplexError> {
        let mut bits = Gf2Vec::zero(x.n_cells(k));
        for name in names {
            bits.set(x.cell_index(k, name)?, true);
        }
        Ok(Cochain { dim: k, bits })
    }

    pub fn support_names(&self, x: &ComplexSkeleton) -> Vec<String> {
        self.bits.support().iter().map(|&i| x.cell_name(self.dim, i).to_string()).collect()
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.dim, other.dim);
        Cochain { dim: self.dim, bits: self.bits.xor(&other.bits) }
    }
}

/// Per-cell nonnegative weights for every dimension, normalized so that the
/// all-ones cochain of each dimension has norm 1. The empty cell carries
/// weight 1.
pub struct WeightedNorm {
    /// tables[k+1] covers dimension k, for k in -1..=dim.
    tables: Vec<WeightTable>,
}

impl WeightedNorm {
    /// The normalized Hamming norm: every k-cell weighs 1/|Σ_k|.
    pub fn hamming(x: &ComplexSkeleton) -> Self {
        let mut tables = vec![WeightTable::new(vec![Rat::one()])];
        for k in 0..=x.dim() as isize {
            let n = x.n_cells(k) as i64;
            tables.push(WeightTable::new(vec![crate::rational::rat(1, n); n as usize]));
        }
        WeightedNorm { tables }
    }

    /// Arbitrary nonnegative weights per dimension (k = 0..=dim), normalized
    /// so the all-ones cochain has norm 1 in every dimension.
    pub fn from_weights(
        x: &ComplexSkeleton,
        raw: Vec<Vec<Rat>>,
    ) -> Result<Self, ComplexError> {
        if raw.len() != x.dim() + 1 {
            return Err(ComplexError::BadWeights(format!(
                "expected weights for {} dimensions, got {}",
                x.dim() + 1,
                raw.len()
            )));
        }
        let mut tables = vec![WeightTable::new(vec![Rat::one()])];
        for (k, level) in raw.into_iter().enumerate() {
            if level.len() != x.n_cells(k as isize) {
                return Err(ComplexError::BadWeights(format!(
                    "dimension {k}: expected {} weights, got {}",
                    x.n_cells(k as isize),
                    level.len()
                )));
            }
            if level.iter().any(|w| w.is_negative()) {
                return Err(ComplexError::BadWeights(format!("dimension {k}: negative weight")));
            }
            let total: Rat = level.iter().fold(Rat::zero(), |acc, w| acc + w);
            if total.is_zero() {
                return Err(ComplexError::BadWeights(format!("dimension {k}: all weights zero")));
            }
            tables.push(WeightTable::new(level.into_iter().map(|w| w / &total).collect()));
        }
        Ok(WeightedNorm { tables })
    }

    pub fn table(&self, k: isize) -> &WeightTable {
        &self.tables[(k + 1) as usize]
    }

    pub fn max_dim(&self) -> isize {
        self.tables.len() as isize - 2
    }

    /// ‖α‖: the weighted support size.
    pub fn norm(&self, alpha: &Cochain) -> Result<Rat, ComplexError> {
        if alpha.dim < -1 || alpha.dim > self.max_dim() {
            return Err(ComplexError::DimOutOfRange {
                k: alpha.dim,
                dim: self.max_dim().max(0) as usize,
            });
        }
        let table = self.table(alpha.dim);
        if table.len() != alpha.bits.len() {
            return Err(ComplexError::CochainLenMismatch {
                expected: table.len(),
                got: alpha.bits.len(),
            });
        }
        Ok(table.weigh(&alpha.bits))
    }
}

/// All (size)-subsets of a sorted slice, in lexicographic order.
fn subsets_lex(sorted: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = sorted.len();
    if size == 0 || size > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| sorted[i]).collect());
        // advance
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The triangle graph C_3 on vertices 1, 2, 3 — a small standard fixture.
pub fn triangle() -> ComplexSkeleton {
    let simplices = vec![
        vec!["1".into(), "2".into()],
        vec!["2".into(), "3".into()],
        vec!["1".into(), "3".into()],
    ];
    ComplexSkeleton::from_maximal_simplices(&simplices).unwrap()
}

/// The boundary of the 3-simplex (a triangulated 2-sphere).
pub fn boundary_of_simplex3() -> ComplexSkeleton {
    let simplices = vec![
        vec!["1".into(), "2".into(), "3".into()],
        vec!["1".into(), "2".into(), "4".into()],
        vec!["1".into(), "3".into(), "4".into()],
        vec!["2".into(), "3".into(), "4".into()],
    ];
    ComplexSkeleton::from_maximal_simplices(&simplices).unwrap()
}

/// The n-cycle graph on vertices 1..n.
pub fn cycle(n: usize) -> ComplexSkeleton {
    ComplexSkeleton::from_maximal_simplices(&cycle_simplices(n)).unwrap()
}

/// Maximal simplices of the n-cycle.
pub fn cycle_simplices(n: usize) -> Vec<Vec<String>> {
    assert!(n >= 3);
    let mut simplices = Vec::new();
    for i in 1..=n {
        let j = if i == n { 1 } else { i + 1 };
        simplices.push(vec![i.to_string(), j.to_string()]);
    }
    simplices
}

/// Maximal simplices of the d-skeleton of the n-simplex: all (d+1)-subsets
/// of the n+1 vertices 1..=n+1.
pub fn complete_skeleton_simplices(n: usize, d: usize) -> Vec<Vec<String>> {
    assert!(d <= n && n >= 1);
    let verts: Vec<String> = (1..=n + 1).map(|i| i.to_string()).collect();
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..=d).collect();
    loop {
        out.push(combo.iter().map(|&i| verts[i].clone()).collect());
        let mut i = d + 1;
        let advanced = loop {
            if i == 0 {
                break false;
            }
            i -= 1;
            if combo[i] != i + n - d {
                combo[i] += 1;
                for j in i + 1..=d {
                    combo[j] = combo[j - 1] + 1;
                }
                break true;
            }
        };
        if !advanced {
            return out;
        }
    }
}

/// The d-skeleton of the n-simplex.
pub fn complete_skeleton(n: usize, d: usize) -> ComplexSkeleton {
    ComplexSkeleton::from_maximal_simplices(&complete_skeleton_simplices(n, d)).unwrap()
}

/// Maximal simplices of a Linial–Meshulam random 2-complex: the full
/// 1-skeleton of K_n plus each triangle independently with exact rational
/// probability p, drawn from the seeded generator.
pub fn linial_meshulam_simplices(
    n: usize,
    p_numer: u64,
    p_denom: u64,
    seed: u64,
) -> Vec<Vec<String>> {
    use rand::{Rng, SeedableRng};
    assert!(n >= 3 && p_denom > 0 && p_numer <= p_denom);
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut covered: HashSet<(usize, usize)> = HashSet::new();
    let mut simplices = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                // Exact Bernoulli(p): uniform draw below the numerator.
                if rng.gen_range(0..p_denom) < p_numer {
                    simplices.push(vec![a.to_string(), b.to_string(), c.to_string()]);
                    covered.insert((a, b));
                    covered.insert((a, c));
                    covered.insert((b, c));
                }
            }
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            if !covered.contains(&(a, b)) {
                simplices.push(vec![a.to_string(), b.to_string()]);
            }
        }
    }
    simplices
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};
    use proptest::prelude::*;

    #[test]
    fn triangle_counts() {
        let x = triangle();
        assert_eq!(x.dim(), 1);
        assert_eq!(x.n_cells(-1), 1);
        assert_eq!(x.n_cells(0), 3);
        assert_eq!(x.n_cells(1), 3);
        assert_eq!(x.cell_names(1), &["1,2", "2,3", "1,3"]);
    }

    #[test]
    fn boundary_simplex_counts() {
        let x = boundary_of_simplex3();
        assert_eq!(x.dim(), 2);
        assert_eq!(x.cell_counts(), vec![4, 6, 4]);
        // delta^2 has rank 3 (elimination oracle value).
        assert_eq!(x.coboundary(2).unwrap().rank(), 3);
    }

    #[test]
    fn augmentation_column() {
        let x = triangle();
        let d0 = x.coboundary(0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (3, 1));
        assert_eq!(d0.column(0), Gf2Vec::ones(3));
        let d1 = x.coboundary(1).unwrap();
        for r in 0..3 {
            assert_eq!(d1.row(r).weight(), 2, "every edge has two endpoints");
        }
        assert_eq!(d1.rank(), 2);
    }

    #[test]
    fn coboundary_out_of_range() {
        let x = triangle();
        assert!(x.coboundary(3).is_err());
        assert!(x.coboundary(-1).is_err());
    }

    #[test]
    fn non_augmented_view_has_empty_degree_zero_domain() {
        let x = triangle();
        let d0 = x.coboundary_nonaug(0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (3, 0));
        assert_eq!(d0.image_basis().len(), 0);
        // Above degree zero the two views agree.
        assert_eq!(x.coboundary_nonaug(1).unwrap(), x.coboundary(1).unwrap());
    }

    #[test]
    fn polyhedral_square() {
        let cells = vec![
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec!["ab".into(), "bc".into(), "cd".into(), "da".into()],
            vec!["sq".into()],
        ];
        let mut inc = HashMap::new();
        inc.insert((1usize, "ab".into()), vec!["a".into(), "b".into()]);
        inc.insert((1usize, "bc".into()), vec!["b".into(), "c".into()]);
        inc.insert((1usize, "cd".into()), vec!["c".into(), "d".into()]);
        inc.insert((1usize, "da".into()), vec!["d".into(), "a".into()]);
        inc.insert(
            (2usize, "sq".into()),
            vec!["ab".into(), "bc".into(), "cd".into(), "da".into()],
        );
        let x = ComplexSkeleton::from_polyhedral(&cells, &inc, &[]).unwrap();
        assert_eq!(x.dim(), 2);
        assert_eq!(x.vertex_set(2, 0).len(), 4);
    }

    #[test]
    fn polyhedral_square_missing_edge_fails() {
        let cells = vec![
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec!["ab".into(), "bc".into(), "cd".into(), "da".into()],
            vec!["sq".into()],
        ];
        let mut inc = HashMap::new();
        inc.insert((1usize, "ab".into()), vec!["a".into(), "b".into()]);
        inc.insert((1usize, "bc".into()), vec!["b".into(), "c".into()]);
        inc.insert((1usize, "cd".into()), vec!["c".into(), "d".into()]);
        inc.insert((1usize, "da".into()), vec!["d".into(), "a".into()]);
        // A square listing only 3 of its edges breaks delta∘delta = 0.
        inc.insert((2usize, "sq".into()), vec!["ab".into(), "bc".into(), "cd".into()]);
        let err = ComplexSkeleton::from_polyhedral(&cells, &inc, &[]).unwrap_err();
        assert!(matches!(err, ComplexError::CoboundarySquared { .. }));
    }

    #[test]
    fn dangling_incidence_fails() {
        let cells = vec![vec!["a".into(), "b".into()], vec!["e".into()]];
        let mut inc = HashMap::new();
        inc.insert((1usize, "e".into()), vec!["a".into(), "zz".into()]);
        let err = ComplexSkeleton::from_polyhedral(&cells, &inc, &[]).unwrap_err();
        assert!(matches!(err, ComplexError::DanglingIncidence { .. }));
    }

    #[test]
    fn incidence_cochain_triangle() {
        let x = triangle();
        let n = WeightedNorm::hamming(&x);
        // tau = vertex "1": the two edges at it.
        let v1 = (0isize, x.cell_index(0, "1").unwrap());
        let iota = x.incidence_cochain(v1, 1).unwrap();
        assert_eq!(iota.support_names(&x), vec!["1,2", "1,3"]);
        assert_eq!(n.norm(&iota).unwrap(), rat(2, 3));
        // tau = an edge: every edge shares a vertex with it.
        let e = (1isize, 0);
        let iota_e = x.incidence_cochain(e, 1).unwrap();
        assert_eq!(n.norm(&iota_e).unwrap(), rint(1));
        // Reflexivity: sigma intersects itself.
        assert!(iota_e.bits.get(0));
        // The empty cell is rejected.
        assert!(x.incidence_cochain((-1, 0), 1).is_err());
    }

    #[test]
    fn hamming_norm_values() {
        let x = triangle();
        let n = WeightedNorm::hamming(&x);
        let one_edge = Cochain::from_named_support(&x, 1, &["2,3"]).unwrap();
        assert_eq!(n.norm(&one_edge).unwrap(), rat(1, 3));
        assert_eq!(n.norm(&Cochain::zero(&x, 1)).unwrap(), rint(0));
        assert_eq!(n.norm(&Cochain::ones(&x, 0)).unwrap(), rint(1));
        assert_eq!(n.norm(&Cochain::ones(&x, 1)).unwrap(), rint(1));
    }

    #[test]
    fn weighted_norm_normalizes() {
        let x = triangle();
        let raw = vec![vec![rint(1), rint(1), rint(2)], vec![rint(3), rint(1), rint(1)]];
        let n = WeightedNorm::from_weights(&x, raw).unwrap();
        assert_eq!(n.norm(&Cochain::ones(&x, 0)).unwrap(), rint(1));
        assert_eq!(n.norm(&Cochain::ones(&x, 1)).unwrap(), rint(1));
        let e12 = Cochain::from_named_support(&x, 1, &["1,2"]).unwrap();
        assert_eq!(n.norm(&e12).unwrap(), rat(3, 5));
    }

    #[test]
    fn negative_weight_rejected() {
        let x = triangle();
        let raw = vec![vec![rint(1), rint(1), rint(-1)], vec![rint(1), rint(1), rint(1)]];
        assert!(WeightedNorm::from_weights(&x, raw).is_err());
    }

    fn arb_bits(n: usize) -> impl Strategy<Value = Gf2Vec> {
        proptest::collection::vec(0u8..=1, n).prop_map(move |b| Gf2Vec::from_bits(&b))
    }

    proptest! {
        #[test]
        fn norm_triangle_inequality(a in arb_bits(6), b in arb_bits(6), w in proptest::collection::vec(0u32..10, 6)) {
            // Random nonnegative weights on a 6-edge fixture (the K_4 graph).
            let verts = ["1", "2", "3", "4"];
            let mut edges = Vec::new();
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push(vec![verts[i].to_string(), verts[j].to_string()]);
                }
            }
            let x = ComplexSkeleton::from_maximal_simplices(&edges).unwrap();
            let mut raw1: Vec<Rat> = w.iter().map(|&v| rint(v as i64)).collect();
            if raw1.iter().all(|r| r.is_zero()) {
                raw1[0] = rint(1);
            }
            let n = WeightedNorm::from_weights(&x, vec![vec![rint(1); 4], raw1]).unwrap();
            let ca = Cochain { dim: 1, bits: a.clone() };
            let cb = Cochain { dim: 1, bits: b.clone() };
            let sum = ca.add(&cb);
            let na = n.norm(&ca).unwrap();
            let nb = n.norm(&cb).unwrap();
            let ns = n.norm(&sum).unwrap();
            prop_assert!(ns <= na.clone() + nb.clone());
            // Monotonicity: restrict a to a subset of its own support.
            let mut sub = a.clone();
            if let Some(i) = a.first_one() {
                sub.set(i, false);
            }
            let nsub = n.norm(&Cochain { dim: 1, bits: sub }).unwrap();
            prop_assert!(nsub <= na);
        }

        #[test]
        fn simplicial_cells_are_subsets_of_maximal_faces(pick in proptest::collection::vec(0usize..5, 3)) {
            // Random small simplicial complexes from a fixed vertex pool.
            let pool = ["a", "b", "c", "d", "e"];
            let maximal: Vec<Vec<String>> = pick
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let size = 1 + (p + i) % 3;
                    (0..=size).map(|j| pool[(p + j) % 5].to_string()).collect()
                })
                .collect();
            let x = ComplexSkeleton::from_maximal_simplices(&maximal).unwrap();
            for k in 0..=x.dim() as isize {
                for i in 0..x.n_cells(k) {
                    let vs = x.vertex_set(k, i);
                    prop_assert_eq!(vs.len(), k as usize + 1);
                }
            }
            // delta∘delta = 0 everywhere.
            for k in 0..x.dim() as isize {
                let lower = x.coboundary(k).unwrap();
                let upper = x.coboundary(k + 1).unwrap();
                prop_assert!(upper.mul(&lower).is_zero());
            }
        }
    }
}
