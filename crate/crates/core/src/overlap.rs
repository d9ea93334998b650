//! Exact geometric overlap for simplexwise-affine maps into R^1 and R^2.
//!
//! The overlap value of a map is the largest normed measure of top-cell
//! images through a common point, maximized over generic points — points on
//! the relative interior of the arrangement stratum they inhabit. Counting
//! by relative interiors keeps the maximum attained at rational witnesses
//! while matching the closed count at every generic point.
//! [`overlap_at_point`] evaluates the closed-containment count at an
//! arbitrary given point.

use num::{BigInt, Zero};
use thiserror::Error;

use crate::complex::{ComplexError, ComplexSkeleton, WeightedNorm};
use crate::geometry::{
    segment_intersection, ConvexImage, GeometryError, RationalPoint, SegmentMeet,
};
use crate::Rat;

#[derive(Debug, Error)]
pub enum OverlapError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("map targets R^{map}, complex has dimension {complex}")]
    DimensionMismatch { map: usize, complex: usize },
    #[error("overlap search supports targets R^1 and R^2 (got R^{0})")]
    UnsupportedAmbient(usize),
    #[error("vertex image count {got} does not match {want} vertices")]
    ImageCount { got: usize, want: usize },
}

/// A simplexwise-affine map into R^d given by its vertex images, in the
/// vertex order of the complex.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub ambient: usize,
    pub vertex_images: Vec<RationalPoint>,
}

impl AffineMap {
    pub fn new(
        x: &ComplexSkeleton,
        vertex_images: Vec<RationalPoint>,
    ) -> Result<Self, OverlapError> {
        if vertex_images.len() != x.n_cells(0) {
            return Err(OverlapError::ImageCount {
                got: vertex_images.len(),
                want: x.n_cells(0),
            });
        }
        let ambient = vertex_images.first().map_or(0, Vec::len);
        for p in &vertex_images {
            if p.len() != ambient {
                return Err(GeometryError::MixedDims(ambient, p.len()).into());
            }
        }
        Ok(AffineMap { ambient, vertex_images })
    }

    /// The convex image of one cell: the hull of its vertex images.
    pub fn cell_image(
        &self,
        x: &ComplexSkeleton,
        k: isize,
        i: usize,
    ) -> Result<ConvexImage, GeometryError> {
        let pts: Vec<RationalPoint> =
            x.vertex_set(k, i).iter().map(|&v| self.vertex_images[v].clone()).collect();
        ConvexImage::from_points(&pts)
    }
}

/// The result of an overlap search: an exactly attained maximum.
#[derive(Clone, Debug)]
pub struct OverlapResult {
    pub value: Rat,
    pub witness: RationalPoint,
    /// Indices of top-cells whose image contains the witness.
    pub covering: Vec<usize>,
}

fn top_images(
    x: &ComplexSkeleton,
    f: &AffineMap,
) -> Result<Vec<ConvexImage>, OverlapError> {
    if f.ambient != x.dim() {
        return Err(OverlapError::DimensionMismatch { map: f.ambient, complex: x.dim() });
    }
    let d = x.dim() as isize;
    (0..x.n_cells(d)).map(|i| f.cell_image(x, d, i).map_err(Into::into)).collect()
}

/// Strong general position of the whole map: for every family of pairwise
/// vertex-disjoint cells of X (all dimensions), the images satisfy
/// dim(∩ f(σ_i)) <= max(−1, Σ dim σ_i − d(r−1)).
pub fn strongly_general_position_check(
    x: &ComplexSkeleton,
    f: &AffineMap,
    budget: usize,
) -> Result<bool, OverlapError> {
    let mut cells = Vec::new();
    for k in 0..=x.dim() as isize {
        for i in 0..x.n_cells(k) {
            let verts: Vec<usize> = x.vertex_set(k, i).iter().copied().collect();
            let images: Vec<RationalPoint> =
                verts.iter().map(|&v| f.vertex_images[v].clone()).collect();
            cells.push((k as usize, images, verts));
        }
    }
    crate::geometry::strongly_general_position(f.ambient, &cells, budget).map_err(Into::into)
}

/// Closed-containment count at a given point: the normed measure of top
/// cells whose closed image contains p, with the covering cell list.
pub fn overlap_at_point(
    x: &ComplexSkeleton,
    f: &AffineMap,
    n: &WeightedNorm,
    p: &RationalPoint,
) -> Result<(Rat, Vec<usize>), OverlapError> {
    let images = top_images(x, f)?;
    let d = x.dim() as isize;
    let mut value = Rat::zero();
    let mut covering = Vec::new();
    for (i, im) in images.iter().enumerate() {
        if p.len() == im.ambient && im.contains(p) {
            value += n.table(d).weight_rat(i);
            covering.push(i);
        }
    }
    Ok((value, covering))
}

fn relint_count(
    images: &[ConvexImage],
    n: &WeightedNorm,
    d: isize,
    p: &RationalPoint,
) -> (Rat, Vec<usize>) {
    let mut value = Rat::zero();
    let mut covering = Vec::new();
    for (i, im) in images.iter().enumerate() {
        if im.contains_relint(p) {
            value += n.table(d).weight_rat(i);
            covering.push(i);
        }
    }
    (value, covering)
}

/// The exact geometric overlap value with a rational witness point.
pub fn geometric_overlap(
    x: &ComplexSkeleton,
    f: &AffineMap,
    n: &WeightedNorm,
) -> Result<OverlapResult, OverlapError> {
    let images = top_images(x, f)?;
    let candidates = match f.ambient {
        1 => candidates_1d(&images),
        2 => candidates_2d(&images),
        other => return Err(OverlapError::UnsupportedAmbient(other)),
    };
    let d = x.dim() as isize;
    let mut best: Option<(Rat, RationalPoint, Vec<usize>)> = None;
    for p in candidates {
        let (value, covering) = relint_count(&images, n, d, &p);
        let better = match &best {
            None => true,
            Some((bv, bp, _)) => value > *bv || (value == *bv && p < *bp),
        };
        if better {
            best = Some((value, p, covering));
        }
    }
    let (value, witness, covering) = best.expect("top dimension is never empty");
    // Containment re-check: every reported cell's closed image holds the
    // witness (relative interiors are subsets of the closed cells).
    for &i in &covering {
        assert!(images[i].contains(&witness), "covering cell fails the closed re-check");
    }
    Ok(OverlapResult { value, witness, covering })
}

/// Interval endpoints and midpoints of consecutive distinct endpoints.
fn candidates_1d(images: &[ConvexImage]) -> Vec<RationalPoint> {
    let mut critical: Vec<Rat> = Vec::new();
    for im in images {
        for v in &im.verts {
            critical.push(v[0].clone());
        }
    }
    critical.sort();
    critical.dedup();
    let mut out: Vec<RationalPoint> = critical.iter().map(|c| vec![c.clone()]).collect();
    for w in critical.windows(2) {
        out.push(vec![(&w[0] + &w[1]) / Rat::from_integer(2.into())]);
    }
    out
}

/// Arrangement candidates in the plane: stratum vertices, open sub-segment
/// midpoints, and one sample inside each face adjacent to a sub-segment
/// (tiny exact normal offsets from the midpoints).
fn candidates_2d(images: &[ConvexImage]) -> Vec<RationalPoint> {
    let mut segments: Vec<(RationalPoint, RationalPoint)> = Vec::new();
    let mut vertices: Vec<RationalPoint> = Vec::new();
    for im in images {
        match im.verts.len() {
            1 => vertices.push(im.verts[0].clone()),
            _ => segments.extend(im.edges()),
        }
    }
    for (a, b) in &segments {
        vertices.push(a.clone());
        vertices.push(b.clone());
    }
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            let (a, b) = &segments[i];
            let (c, d) = &segments[j];
            match segment_intersection(a, b, c, d) {
                SegmentMeet::Empty => {}
                SegmentMeet::Point(p) => vertices.push(p),
                SegmentMeet::Overlap(p, q) => {
                    vertices.push(p);
                    vertices.push(q);
                }
            }
        }
    }
    vertices.sort();
    vertices.dedup();

    let mut candidates = vertices.clone();
    for (a, b) in &segments {
        // Split the segment at every stratum vertex lying on it.
        let mut cuts: Vec<RationalPoint> = vertices
            .iter()
            .filter(|v| crate::geometry::on_segment(a, b, v))
            .cloned()
            .collect();
        cuts.sort_by(|p, q| {
            // Order along the segment by the dominant axis.
            let axis = usize::from(a[0] == b[0]);
            let ord = p[axis].cmp(&q[axis]);
            if a[axis] <= b[axis] {
                ord
            } else {
                ord.reverse()
            }
        });
        for w in cuts.windows(2) {
            if w[0] == w[1] {
                continue;
            }
            let mid =
                vec![(&w[0][0] + &w[1][0]) / Rat::from_integer(2.into()),
                     (&w[0][1] + &w[1][1]) / Rat::from_integer(2.into())];
            // Normal direction to reach the two adjacent faces.
            let dir = [&w[1][0] - &w[0][0], &w[1][1] - &w[0][1]];
            let normal = [-dir[1].clone(), dir[0].clone()];
            for sign in [1i64, -1] {
                let mut j = 2u32;
                loop {
                    let scale = Rat::new(BigInt::from(sign), BigInt::from(2).pow(j));
                    let p = vec![&mid[0] + &scale * &normal[0], &mid[1] + &scale * &normal[1]];
                    if face_sample_ok(&mid, &p, &segments, &vertices) {
                        candidates.push(p);
                        break;
                    }
                    j += 1;
                    assert!(j < 256, "face sampling failed to separate from the arrangement");
                }
            }
            candidates.push(mid);
        }
    }
    candidates.sort();
    candidates.dedup();
    candidates
}

/// A face sample must see no arrangement geometry between itself and its
/// base midpoint: the probe segment [mid, p] may touch the arrangement only
/// at mid, and p itself must avoid every segment and stratum vertex.
fn face_sample_ok(
    mid: &RationalPoint,
    p: &RationalPoint,
    segments: &[(RationalPoint, RationalPoint)],
    vertices: &[RationalPoint],
) -> bool {
    if vertices.contains(p) {
        return false;
    }
    for (a, b) in segments {
        match segment_intersection(mid, p, a, b) {
            SegmentMeet::Empty => {}
            SegmentMeet::Point(q) => {
                if q != *mid {
                    return false;
                }
            }
            SegmentMeet::Overlap(..) => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexSkeleton;
    use crate::rational::{rat, rint};

    fn k4_on_line() -> (ComplexSkeleton, AffineMap, WeightedNorm) {
        let verts = ["1", "2", "3", "4"];
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push(vec![verts[i].to_string(), verts[j].to_string()]);
            }
        }
        let x = ComplexSkeleton::from_maximal_simplices(&edges).unwrap();
        let images = (0..4).map(|i| vec![rint(i)]).collect();
        let f = AffineMap::new(&x, images).unwrap();
        let n = WeightedNorm::hamming(&x);
        (x, f, n)
    }

    #[test]
    fn k4_line_fixture() {
        let (x, f, n) = k4_on_line();
        let result = geometric_overlap(&x, &f, &n).unwrap();
        assert_eq!(result.value, rat(2, 3));
        assert_eq!(result.witness, vec![rat(3, 2)]);
        assert_eq!(result.covering.len(), 4);
        // overlap_at_point with closed containment at the same witness.
        let (value, covering) = overlap_at_point(&x, &f, &n, &vec![rat(3, 2)]).unwrap();
        assert_eq!(value, rat(2, 3));
        assert_eq!(covering.len(), 4);
        // Closed containment at a shared endpoint counts all incident cells.
        let (value, covering) = overlap_at_point(&x, &f, &n, &vec![rint(1)]).unwrap();
        assert_eq!(covering.len(), 5);
        assert_eq!(value, rat(5, 6));
        // Outside the image everything vanishes.
        let (value, covering) = overlap_at_point(&x, &f, &n, &vec![rint(10)]).unwrap();
        assert!(value.is_zero());
        assert!(covering.is_empty());
    }

    #[test]
    fn single_edge_covers_itself() {
        let x = ComplexSkeleton::from_maximal_simplices(&[vec!["a".into(), "b".into()]]).unwrap();
        let f = AffineMap::new(&x, vec![vec![rint(0)], vec![rint(1)]]).unwrap();
        let n = WeightedNorm::hamming(&x);
        let result = geometric_overlap(&x, &f, &n).unwrap();
        assert_eq!(result.value, rint(1));
        assert_eq!(result.witness, vec![rat(1, 2)]);
    }

    #[test]
    fn degenerate_edge_image_is_found() {
        // Both endpoints map to the same point; the point itself carries the
        // maximum.
        let x = ComplexSkeleton::from_maximal_simplices(&[vec!["a".into(), "b".into()]]).unwrap();
        let f = AffineMap::new(&x, vec![vec![rint(5)], vec![rint(5)]]).unwrap();
        let n = WeightedNorm::hamming(&x);
        let result = geometric_overlap(&x, &f, &n).unwrap();
        assert_eq!(result.value, rint(1));
        assert_eq!(result.witness, vec![rint(5)]);
    }

    #[test]
    fn two_triangles_overlap_in_plane() {
        // Two triangles sharing a lens-shaped region: value 1 inside it.
        let x = ComplexSkeleton::from_maximal_simplices(&[
            vec!["a".into(), "b".into(), "c".into()],
            vec!["p".into(), "q".into(), "r".into()],
        ])
        .unwrap();
        let images = vec![
            vec![rint(0), rint(0)],
            vec![rint(4), rint(0)],
            vec![rint(0), rint(4)],
            vec![rint(1), rint(1)],
            vec![rint(5), rint(1)],
            vec![rint(1), rint(5)],
        ];
        let f = AffineMap::new(&x, images).unwrap();
        let n = WeightedNorm::hamming(&x);
        let result = geometric_overlap(&x, &f, &n).unwrap();
        assert_eq!(result.value, rint(1));
        let (closed, _) = overlap_at_point(&x, &f, &n, &result.witness).unwrap();
        assert_eq!(closed, rint(1));
    }

    #[test]
    fn affine_invariance_of_value() {
        let (x, f, n) = k4_on_line();
        let base = geometric_overlap(&x, &f, &n).unwrap();
        // t -> -3t + 7 reverses and shifts the line.
        let mapped: Vec<RationalPoint> = f
            .vertex_images
            .iter()
            .map(|p| vec![rint(-3) * &p[0] + rint(7)])
            .collect();
        let g = AffineMap::new(&x, mapped).unwrap();
        let transformed = geometric_overlap(&x, &g, &n).unwrap();
        assert_eq!(base.value, transformed.value);
    }

    #[test]
    fn uniform_value_times_cells_is_integer() {
        let (x, f, n) = k4_on_line();
        let result = geometric_overlap(&x, &f, &n).unwrap();
        let scaled = result.value * rint(x.n_cells(1) as i64);
        assert!(scaled.is_integer());
    }

    #[test]
    fn map_level_strong_general_position() {
        let (x, f, _) = k4_on_line();
        assert!(strongly_general_position_check(&x, &f, 64).unwrap());
        // Collapsing two vertex images breaks it (two disjoint vertices with
        // equal images exceed the r = 2 bound).
        let mut collapsed = f.clone();
        collapsed.vertex_images[1] = collapsed.vertex_images[0].clone();
        assert!(!strongly_general_position_check(&x, &collapsed, 64).unwrap());
    }

    #[test]
    fn random_generic_sample_never_exceeds_value() {
        // Closed counts at generic probes (denominator a fresh prime, so
        // they never hit an endpoint) stay below the reported maximum.
        let (x, f, n) = k4_on_line();
        let result = geometric_overlap(&x, &f, &n).unwrap();
        for i in -40i64..40 {
            let p = vec![rat(i, 1009) + rat(i, 13)];
            let (v, _) = overlap_at_point(&x, &f, &n, &p).unwrap();
            assert!(v <= result.value, "sample at {:?} exceeds the maximum", p);
        }
    }

    #[test]
    fn sweep_matches_independent_oracle_on_lines() {
        // Independent oracle: closed counts at midpoints between consecutive
        // distinct endpoints only (valid for maps with injective images).
        let (x, f, n) = k4_on_line();
        let mut critical: Vec<Rat> = f.vertex_images.iter().map(|p| p[0].clone()).collect();
        critical.sort();
        critical.dedup();
        let mut oracle = Rat::zero();
        for w in critical.windows(2) {
            let mid = vec![(&w[0] + &w[1]) / rint(2)];
            let (v, _) = overlap_at_point(&x, &f, &n, &mid).unwrap();
            if v > oracle {
                oracle = v;
            }
        }
        let result = geometric_overlap(&x, &f, &n).unwrap();
        assert_eq!(result.value, oracle);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let (x, _, n) = k4_on_line();
        let planar = AffineMap::new(
            &x,
            (0..4).map(|i| vec![rint(i), rint(i)]).collect(),
        )
        .unwrap();
        assert!(matches!(
            geometric_overlap(&x, &planar, &n),
            Err(OverlapError::DimensionMismatch { .. })
        ));
    }
}
