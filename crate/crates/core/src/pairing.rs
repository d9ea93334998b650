//! Intersection-number pairings between a circle triangulation and a graph
//! mapped into the circle, and the chain-cochain bookkeeping shared with the
//! homotopy engine.
//!
//! The geometric construction here covers the fully computable d = 1 case
//! (graph into circle). Higher-dimensional pairings are consumed as
//! externally supplied matrices through [`ChainCochainMap`] and checked with
//! [`verify_chain_cochain`].

use num::Zero;
use thiserror::Error;

use crate::complex::{Cochain, ComplexError, ComplexSkeleton, WeightedNorm};
use crate::geometry::{ccw_gap, mod1, CirclePolyline, GeometryError};
use crate::gf2::{Gf2Matrix, Gf2Vec};
use crate::Rat;

#[derive(Debug, Error)]
pub enum PairingError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("the complex must be 1-dimensional for a circle pairing (got dimension {0})")]
    NotAGraph(usize),
    #[error("1-cell {0:?} does not have exactly two endpoints")]
    BadEdge(String),
    #[error("a circle triangulation needs at least 3 distinct vertices (got {0})")]
    TriangulationTooSmall(usize),
    #[error("not in general position: triangulation vertex {t_vertex} meets {offender}")]
    GeneralPosition { t_vertex: Rat, offender: String },
    #[error(
        "cannot refine: arc ({arc_start}, {arc_end}) carries the single image point {point} \
         with mass {mass} > bound {bound}"
    )]
    CannotRefine { arc_start: Rat, arc_end: Rat, point: Rat, mass: Rat, bound: Rat },
    #[error("pairing block k={k} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    BlockShape { k: usize, rows: usize, cols: usize, want_rows: usize, want_cols: usize },
    #[error("pairing covers dimensions 0..={got}, expected 0..={want}")]
    MissingBlock { got: usize, want: usize },
}

// ---------------------------------------------------------------------------
// Circle triangulations
// ---------------------------------------------------------------------------

/// A triangulation of the circle: >= 3 distinct vertices in [0, 1), sorted
/// increasingly; arc i runs counterclockwise from vertex i to vertex i+1
/// (cyclically).
#[derive(Clone, Debug, PartialEq)]
pub struct CircleTriangulation {
    verts: Vec<Rat>,
}

impl CircleTriangulation {
    pub fn new(mut verts: Vec<Rat>) -> Result<Self, PairingError> {
        for v in &mut verts {
            *v = mod1(v);
        }
        verts.sort();
        let before = verts.len();
        verts.dedup();
        if verts.len() < 3 || verts.len() != before {
            return Err(PairingError::TriangulationTooSmall(verts.len().min(before)));
        }
        Ok(CircleTriangulation { verts })
    }

    pub fn n(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> &[Rat] {
        &self.verts
    }

    /// Arc i as (start, end) going counterclockwise.
    pub fn arc(&self, i: usize) -> (Rat, Rat) {
        let n = self.verts.len();
        (self.verts[i].clone(), self.verts[(i + 1) % n].clone())
    }

    /// Strict interior containment in arc i.
    pub fn arc_contains(&self, i: usize, p: &Rat) -> bool {
        let (a, b) = self.arc(i);
        let p = mod1(p);
        let t = ccw_gap(&a, &p);
        !t.is_zero() && t < ccw_gap(&a, &b)
    }

    /// The arc whose closed interior contains p, when p is not a vertex.
    pub fn arc_of(&self, p: &Rat) -> Option<usize> {
        (0..self.n()).find(|&i| self.arc_contains(i, p))
    }

    /// Boundary matrix C_1 -> C_0: each arc maps to its two endpoints.
    pub fn boundary_matrix(&self) -> Gf2Matrix {
        let n = self.n();
        let mut m = Gf2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
            m.set((i + 1) % n, i, true);
        }
        m
    }

    pub fn with_vertex(&self, v: Rat) -> Result<Self, PairingError> {
        let mut verts = self.verts.clone();
        verts.push(v);
        CircleTriangulation::new(verts)
    }
}

// ---------------------------------------------------------------------------
// The chain side of a pairing
// ---------------------------------------------------------------------------

/// The chain complex of the target triangulation: cells per dimension and
/// boundary matrices, with the fundamental class as the all-ones top chain.
#[derive(Clone, Debug)]
pub struct TargetComplex {
    /// cell_names[k] for k = 0..=d.
    pub cell_names: Vec<Vec<String>>,
    /// boundaries[k-1]: C_k -> C_{k-1}, for k = 1..=d.
    pub boundaries: Vec<Gf2Matrix>,
}

impl TargetComplex {
    pub fn d(&self) -> usize {
        self.cell_names.len() - 1
    }

    pub fn n_cells(&self, k: usize) -> usize {
        self.cell_names.get(k).map_or(0, Vec::len)
    }

    pub fn boundary(&self, k: usize) -> &Gf2Matrix {
        &self.boundaries[k - 1]
    }

    pub fn fundamental_class(&self) -> Gf2Vec {
        Gf2Vec::ones(self.n_cells(self.d()))
    }

    /// A closed target has cycle fundamental class: ∂[M] = 0.
    pub fn is_closed(&self) -> bool {
        let d = self.d();
        if d == 0 {
            return true;
        }
        self.boundary(d).mul_vec(&self.fundamental_class()).is_zero()
    }

    pub fn from_circle(t: &CircleTriangulation) -> Self {
        let vert_names = (0..t.n()).map(|i| format!("t{i}")).collect();
        let arc_names = (0..t.n()).map(|i| format!("a{i}")).collect();
        TargetComplex {
            cell_names: vec![vert_names, arc_names],
            boundaries: vec![t.boundary_matrix()],
        }
    }

    /// Reuses a cell complex as a chain complex (non-augmented boundaries).
    pub fn from_skeleton(x: &ComplexSkeleton) -> Result<Self, ComplexError> {
        let d = x.dim();
        let cell_names = (0..=d as isize).map(|k| x.cell_names(k).to_vec()).collect();
        let mut boundaries = Vec::new();
        for k in 1..=d {
            boundaries.push(x.boundary(k)?);
        }
        Ok(TargetComplex { cell_names, boundaries })
    }
}

// ---------------------------------------------------------------------------
// Chain-cochain maps
// ---------------------------------------------------------------------------

/// A family of matrices M_k : C_k(T) -> C^{d-k}(X), columns indexed by the
/// k-cells of T, rows by the (d-k)-cells of X.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCochainMap {
    pub d: usize,
    /// mats[k] is M_k, for k = 0..=d.
    pub mats: Vec<Gf2Matrix>,
}

impl ChainCochainMap {
    pub fn new(d: usize, mats: Vec<Gf2Matrix>) -> Self {
        assert_eq!(mats.len(), d + 1);
        ChainCochainMap { d, mats }
    }

    /// Validates block shapes against the two complexes.
    pub fn check_shapes(&self, t: &TargetComplex, x: &ComplexSkeleton) -> Result<(), PairingError> {
        if self.mats.len() != t.d() + 1 {
            return Err(PairingError::MissingBlock { got: self.mats.len() - 1, want: t.d() });
        }
        for (k, m) in self.mats.iter().enumerate() {
            let want_rows = x.n_cells(self.d as isize - k as isize);
            let want_cols = t.n_cells(k);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(PairingError::BlockShape {
                    k,
                    rows: m.rows(),
                    cols: m.cols(),
                    want_rows,
                    want_cols,
                });
            }
        }
        Ok(())
    }

    /// Applies M_k to a k-chain.
    pub fn apply(&self, k: usize, chain: &Gf2Vec) -> Cochain {
        Cochain { dim: self.d as isize - k as isize, bits: self.mats[k].mul_vec(chain) }
    }

    /// The image of the fundamental class: M_d applied to the sum of all
    /// d-cells of T.
    pub fn fundamental_class_pairing(&self, t: &TargetComplex) -> Cochain {
        self.apply(self.d, &t.fundamental_class())
    }
}

/// Checks the chain-cochain condition M_{k-1} ∘ ∂_k = δ ∘ M_k for every
/// k = 1..=d, column by column; returns the first violating (k, cell index)
/// or None if the map commutes everywhere.
pub fn verify_chain_cochain(
    f: &ChainCochainMap,
    t: &TargetComplex,
    x: &ComplexSkeleton,
) -> Result<Option<(usize, usize)>, PairingError> {
    f.check_shapes(t, x)?;
    let d = f.d;
    for k in 1..=d {
        let lhs = f.mats[k - 1].mul(t.boundary(k));
        // Above the dimension of X the cochain spaces vanish and the
        // coboundary is the empty map.
        let target_dim = d as isize - k as isize + 1;
        let delta = if target_dim > x.dim() as isize + 1 {
            Gf2Matrix::zero(0, x.n_cells(target_dim - 1))
        } else {
            x.coboundary(target_dim)?
        };
        let rhs = delta.mul(&f.mats[k]);
        for col in 0..lhs.cols() {
            if lhs.column(col) != rhs.column(col) {
                return Ok(Some((k, col)));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Circle maps and the transversal pairing
// ---------------------------------------------------------------------------

/// A simplexwise-PL map from a graph into the circle: one point per vertex
/// and one polyline per edge (running from the image of the first endpoint
/// to the image of the second, legs along shorter arcs).
#[derive(Clone, Debug)]
pub struct CircleMap {
    pub vertex_images: Vec<Rat>,
    /// edge_paths[i] corresponds to the i-th 1-cell of X.
    pub edge_paths: Vec<CirclePolyline>,
}

impl CircleMap {
    /// Builds a map from vertex images and optional per-edge intermediate
    /// points. Edges without intermediates run as single geodesic legs.
    pub fn new(
        x: &ComplexSkeleton,
        vertex_images: Vec<Rat>,
        mut intermediates: std::collections::HashMap<usize, Vec<Rat>>,
    ) -> Result<Self, PairingError> {
        if x.dim() != 1 {
            return Err(PairingError::NotAGraph(x.dim()));
        }
        assert_eq!(vertex_images.len(), x.n_cells(0), "one image per vertex");
        let vertex_images: Vec<Rat> = vertex_images.iter().map(mod1).collect();
        let mut edge_paths = Vec::with_capacity(x.n_cells(1));
        for e in 0..x.n_cells(1) {
            let ends = edge_endpoints(x, e)?;
            let mut points = vec![vertex_images[ends.0].clone()];
            points.extend(intermediates.remove(&e).unwrap_or_default().iter().map(mod1));
            points.push(vertex_images[ends.1].clone());
            edge_paths.push(CirclePolyline::new(points)?);
        }
        Ok(CircleMap { vertex_images, edge_paths })
    }

    /// Every circle point that must avoid triangulation vertices: vertex
    /// images plus polyline breakpoints.
    pub fn special_points(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self.vertex_images.clone();
        for p in &self.edge_paths {
            out.extend(p.points.iter().cloned());
        }
        out.sort();
        out.dedup();
        out
    }

    /// A triangulation in general position with respect to the map: vertices
    /// at circular midpoints between consecutive special points, subdivided
    /// further if fewer than three.
    pub fn default_triangulation(&self) -> Result<CircleTriangulation, PairingError> {
        let special = self.special_points();
        let mut verts = Vec::new();
        let m = special.len();
        for i in 0..m {
            let a = &special[i];
            let b = &special[(i + 1) % m];
            let gap = if m == 1 { Rat::from_integer(1.into()) } else { ccw_gap(a, b) };
            verts.push(mod1(&(a + gap / Rat::from_integer(2.into()))));
        }
        verts.sort();
        verts.dedup();
        // Fewer than three midpoints: split the longest gaps by quarters.
        let mut extra = 2usize;
        while verts.len() < 3 {
            let a = &special[0];
            let q = Rat::new(1.into(), num::BigInt::from(4) * num::BigInt::from(extra));
            let candidate = mod1(&(a + q));
            if !special.contains(&candidate) && !verts.contains(&candidate) {
                verts.push(candidate);
            }
            extra += 1;
            verts.sort();
            verts.dedup();
        }
        CircleTriangulation::new(verts)
    }
}

fn edge_endpoints(x: &ComplexSkeleton, e: usize) -> Result<(usize, usize), PairingError> {
    let faces = x.faces(1, e);
    if faces.len() != 2 {
        return Err(PairingError::BadEdge(x.cell_name(1, e).to_string()));
    }
    Ok((faces[0], faces[1]))
}

/// Checks general position of the map with respect to the triangulation.
pub fn check_general_position(
    f: &CircleMap,
    t: &CircleTriangulation,
    x: &ComplexSkeleton,
) -> Result<(), PairingError> {
    for tv in t.vertices() {
        for (i, img) in f.vertex_images.iter().enumerate() {
            if img == tv {
                return Err(PairingError::GeneralPosition {
                    t_vertex: tv.clone(),
                    offender: format!("image of vertex {}", x.cell_name(0, i)),
                });
            }
        }
        for (e, path) in f.edge_paths.iter().enumerate() {
            if path.points.contains(tv) {
                return Err(PairingError::GeneralPosition {
                    t_vertex: tv.clone(),
                    offender: format!("polyline of edge {}", x.cell_name(1, e)),
                });
            }
        }
    }
    Ok(())
}

/// The intersection-number pairing of a graph-into-circle map:
/// M_0(edge, t-vertex) = crossing parity of the edge path through the
/// vertex; M_1(x-vertex, arc) = 1 iff the vertex image lies in the open arc.
pub fn transversal_pairing(
    f: &CircleMap,
    t: &CircleTriangulation,
    x: &ComplexSkeleton,
) -> Result<ChainCochainMap, PairingError> {
    if x.dim() != 1 {
        return Err(PairingError::NotAGraph(x.dim()));
    }
    check_general_position(f, t, x)?;
    let n_edges = x.n_cells(1);
    let n_xverts = x.n_cells(0);
    let mut m0 = Gf2Matrix::zero(n_edges, t.n());
    for (e, path) in f.edge_paths.iter().enumerate() {
        for (ti, tv) in t.vertices().iter().enumerate() {
            if path.crossing_parity(tv)? == 1 {
                m0.set(e, ti, true);
            }
        }
    }
    let mut m1 = Gf2Matrix::zero(n_xverts, t.n());
    for (v, img) in f.vertex_images.iter().enumerate() {
        for arc in 0..t.n() {
            if t.arc_contains(arc, img) {
                m1.set(v, arc, true);
            }
        }
    }
    Ok(ChainCochainMap::new(1, vec![m0, m1]))
}

/// Refines the triangulation until every arc satisfies the fineness bound
/// ‖{x in Σ_0 : f(x) in arc}‖ <= max_{σ'} ‖ι^0_{σ'}‖ (the d = 1, k = 1
/// case). Subdivision points are circular midpoints between the first two
/// distinct image points of a violating arc; returns the refined
/// triangulation and the number of splits.
pub fn refine_until_fine(
    t: &CircleTriangulation,
    f: &CircleMap,
    x: &ComplexSkeleton,
    n: &WeightedNorm,
) -> Result<(CircleTriangulation, usize), PairingError> {
    let mut bound = Rat::zero();
    for v in 0..x.n_cells(0) {
        let iota = x.incidence_cochain((0, v), 0)?;
        let w = n.norm(&iota)?;
        if w > bound {
            bound = w;
        }
    }
    let forbidden = f.special_points();
    let mut current = t.clone();
    let mut splits = 0usize;
    'outer: loop {
        for arc in 0..current.n() {
            let (a, b) = current.arc(arc);
            let inside: Vec<usize> = (0..x.n_cells(0))
                .filter(|&v| current.arc_contains(arc, &f.vertex_images[v]))
                .collect();
            let mut mass = Rat::zero();
            for &v in &inside {
                mass += n.table(0).weight_rat(v);
            }
            if mass <= bound {
                continue;
            }
            // Distinct image points inside the arc, ordered from the start.
            let mut points: Vec<Rat> = inside.iter().map(|&v| f.vertex_images[v].clone()).collect();
            points.sort_by_key(|p| ccw_gap(&a, p));
            points.dedup();
            if points.len() < 2 {
                return Err(PairingError::CannotRefine {
                    arc_start: a,
                    arc_end: b,
                    point: points[0].clone(),
                    mass,
                    bound,
                });
            }
            // Midpoint between the first two distinct points, nudged by
            // successively smaller offsets if it collides with a special
            // point (it separates the pair either way).
            let gap = ccw_gap(&points[0], &points[1]);
            let mut split = mod1(&(&points[0] + &gap / Rat::from_integer(2.into())));
            let mut j = 2u32;
            while forbidden.contains(&split) || current.vertices().contains(&split) {
                let offset = &gap / Rat::from_integer(num::BigInt::from(2).pow(j));
                split = mod1(&(&points[0] + offset));
                j += 1;
            }
            current = current.with_vertex(split)?;
            splits += 1;
            continue 'outer;
        }
        return Ok((current, splits));
    }
}
