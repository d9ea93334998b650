//! Exact rational affine geometry in R^d and on the circle.
//!
//! All predicates here are equality/sign tests on exact rationals — there
//! are no epsilon comparisons anywhere. The circle is represented as
//! R mod 1; arcs between consecutive polyline points always run the short
//! way around, and antipodal pairs are rejected as ambiguous.

use num::{BigInt, One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::Rat;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("points have mixed dimensions: {0} vs {1}")]
    MixedDims(usize, usize),
    #[error("subset enumeration budget exceeded: {count} items > budget {budget}")]
    Budget { count: usize, budget: usize },
    #[error("ambient dimension {0} unsupported here (supported: {1})")]
    UnsupportedDim(usize, &'static str),
    #[error("degenerate circle polyline: consecutive points {0} and {1} coincide")]
    DegeneratePolyline(Rat, Rat),
    #[error("antipodal circle points {0} and {1} have no shorter arc")]
    Antipodal(Rat, Rat),
    #[error("point {0} lies on a polyline vertex: not in general position")]
    OnPolylineVertex(Rat),
}

pub type RationalPoint = Vec<Rat>;

// ---------------------------------------------------------------------------
// Rational linear algebra (dense, exact)
// ---------------------------------------------------------------------------

/// Dense matrix over the rationals with exact Gaussian elimination.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn from_rows(data: Vec<Vec<Rat>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        for r in &data {
            assert_eq!(r.len(), cols);
        }
        RatMatrix { rows, cols, data }
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(row, pr);
            let inv = self.data[row][col].clone();
            for c in col..self.cols {
                let v = std::mem::replace(&mut self.data[row][c], Rat::zero());
                self.data[row][c] = v / &inv;
            }
            for r in 0..self.rows {
                if r != row && !self.data[r][col].is_zero() {
                    let factor = self.data[r][col].clone();
                    for c in col..self.cols {
                        let sub = &factor * &self.data[row][c];
                        self.data[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the (right) kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.data[row][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Rank of the linear system `A x = b`; returns None if inconsistent.
/// (Used for affine intersection dimensions: dim = ambient − rank.)
fn consistent_rank(a: &[Vec<Rat>], b: &[Rat]) -> Option<usize> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(0);
    }
    let mut m = RatMatrix::from_rows(aug);
    let pivots = m.rref();
    if pivots.contains(&cols) {
        None
    } else {
        Some(pivots.len())
    }
}

// ---------------------------------------------------------------------------
// Affine subspaces and general position
// ---------------------------------------------------------------------------

/// An affine subspace of R^d in equation form: { x : A x = b }.
/// dim = d − rank(A); the empty set never arises from a hull.
#[derive(Clone, Debug)]
pub struct AffineSubspace {
    pub ambient: usize,
    pub dim: isize,
    equations: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
}

impl AffineSubspace {
    /// The affine hull of a nonempty point set.
    pub fn hull(points: &[RationalPoint]) -> Result<Self, GeometryError> {
        assert!(!points.is_empty(), "affine hull of an empty set");
        let d = points[0].len();
        for p in points {
            if p.len() != d {
                return Err(GeometryError::MixedDims(d, p.len()));
            }
        }
        let base = &points[0];
        let dirs: Vec<Vec<Rat>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let dim = if dirs.is_empty() { 0 } else { RatMatrix::from_rows(dirs.clone()).rank() };
        // Normal directions: kernel of the direction span (as row space).
        let normals = if dirs.is_empty() {
            (0..d)
                .map(|i| {
                    let mut v = vec![Rat::zero(); d];
                    v[i] = Rat::one();
                    v
                })
                .collect()
        } else {
            RatMatrix::from_rows(dirs).kernel_basis()
        };
        let rhs: Vec<Rat> = normals
            .iter()
            .map(|n| n.iter().zip(base).map(|(a, b)| a * b).fold(Rat::zero(), |s, v| s + v))
            .collect();
        Ok(AffineSubspace { ambient: d, dim: dim as isize, equations: normals, rhs })
    }

    /// Dimension of the common intersection of several subspaces
    /// (−1 for the empty intersection).
    pub fn intersection_dim(subspaces: &[&AffineSubspace]) -> isize {
        assert!(!subspaces.is_empty());
        let d = subspaces[0].ambient;
        let mut eqs = Vec::new();
        let mut rhs = Vec::new();
        for s in subspaces {
            assert_eq!(s.ambient, d, "mixed ambient dimensions");
            eqs.extend(s.equations.iter().cloned());
            rhs.extend(s.rhs.iter().cloned());
        }
        match consistent_rank(&eqs, &rhs) {
            None => -1,
            Some(rank) => d as isize - rank as isize,
        }
    }
}

/// Transversality for a collection of affine subspaces: every sub-collection
/// of size r >= 2 must satisfy dim(∩ A_i) = max(−1, Σ dim A_i − d(r−1)).
pub fn subspaces_in_general_position(subspaces: &[AffineSubspace], ambient: usize) -> bool {
    let n = subspaces.len();
    assert!(n <= 62, "subset enumeration over {n} subspaces is out of reach");
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let picked: Vec<&AffineSubspace> =
            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &subspaces[i]).collect();
        let sum: isize = picked.iter().map(|s| s.dim).sum();
        let expected = (-1isize).max(sum - (ambient as isize) * (picked.len() as isize - 1));
        if AffineSubspace::intersection_dim(&picked) != expected {
            return false;
        }
    }
    true
}

/// Enumerates all unordered families of >= `min_groups` pairwise disjoint
/// nonempty subsets of 0..n and calls `check` on each; stops early when a
/// check returns false. Returns true if every check passed.
fn for_each_disjoint_family<F: FnMut(&[Vec<usize>]) -> bool>(
    n: usize,
    min_groups: usize,
    check: &mut F,
) -> bool {
    fn recurse<F: FnMut(&[Vec<usize>]) -> bool>(
        item: usize,
        n: usize,
        groups: &mut Vec<Vec<usize>>,
        min_groups: usize,
        check: &mut F,
    ) -> bool {
        if item == n {
            return groups.len() < min_groups || check(groups);
        }
        // Leave the item out.
        if !recurse(item + 1, n, groups, min_groups, check) {
            return false;
        }
        // Put it in an existing group.
        for g in 0..groups.len() {
            groups[g].push(item);
            let ok = recurse(item + 1, n, groups, min_groups, check);
            groups[g].pop();
            if !ok {
                return false;
            }
        }
        // Open a new group (canonical labelling keeps families unordered).
        groups.push(vec![item]);
        let ok = recurse(item + 1, n, groups, min_groups, check);
        groups.pop();
        ok
    }
    let mut groups = Vec::new();
    recurse(0, n, &mut groups, min_groups, check)
}

/// Point-set general position: every family of pairwise disjoint subsets has
/// affine hulls satisfying the transversality identity. This is stronger
/// than affine independence of small subsets — a centrally symmetric hexagon
/// fails through its three concurrent long diagonals.
pub fn points_in_general_position(
    points: &[RationalPoint],
    budget: usize,
) -> Result<bool, GeometryError> {
    if points.len() > budget {
        return Err(GeometryError::Budget { count: points.len(), budget });
    }
    if points.is_empty() {
        return Ok(true);
    }
    let d = points[0].len();
    for p in points {
        if p.len() != d {
            return Err(GeometryError::MixedDims(d, p.len()));
        }
    }
    let mut ok = true;
    for_each_disjoint_family(points.len(), 2, &mut |groups| {
        let hulls: Vec<AffineSubspace> = groups
            .iter()
            .map(|g| {
                let pts: Vec<RationalPoint> = g.iter().map(|&i| points[i].clone()).collect();
                AffineSubspace::hull(&pts).expect("dims validated above")
            })
            .collect();
        let refs: Vec<&AffineSubspace> = hulls.iter().collect();
        let sum: isize = refs.iter().map(|s| s.dim).sum();
        let expected = (-1isize).max(sum - (d as isize) * (refs.len() as isize - 1));
        if AffineSubspace::intersection_dim(&refs) != expected {
            ok = false;
            return false;
        }
        true
    });
    Ok(ok)
}

// ---------------------------------------------------------------------------
// Convex images and strong general position (targets R^1, R^2)
// ---------------------------------------------------------------------------

fn cross(o: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Convex hull in R^2 (monotone chain), tolerating collinear and repeated
/// input. Returns hull vertices in counterclockwise order; a segment yields
/// its two endpoints, a single point yields one.
pub fn convex_hull_2d(points: &[RationalPoint]) -> Vec<RationalPoint> {
    let mut pts: Vec<RationalPoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<RationalPoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RationalPoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 2 {
        // All input points collinear: the chains collapse; fall back to the
        // extreme pair.
        return vec![pts[0].clone(), pts[pts.len() - 1].clone()];
    }
    lower
}

/// A convex polytope in R^1 or R^2, stored by its extreme points.
#[derive(Clone, Debug)]
pub struct ConvexImage {
    pub ambient: usize,
    /// 1 point, 2 segment endpoints, or a CCW polygon.
    pub verts: Vec<RationalPoint>,
}

impl ConvexImage {
    pub fn from_points(points: &[RationalPoint]) -> Result<Self, GeometryError> {
        assert!(!points.is_empty());
        let d = points[0].len();
        match d {
            1 => {
                let mut lo = points[0][0].clone();
                let mut hi = points[0][0].clone();
                for p in points {
                    if p.len() != 1 {
                        return Err(GeometryError::MixedDims(1, p.len()));
                    }
                    if p[0] < lo {
                        lo = p[0].clone();
                    }
                    if p[0] > hi {
                        hi = p[0].clone();
                    }
                }
                let verts = if lo == hi { vec![vec![lo]] } else { vec![vec![lo], vec![hi]] };
                Ok(ConvexImage { ambient: 1, verts })
            }
            2 => {
                for p in points {
                    if p.len() != 2 {
                        return Err(GeometryError::MixedDims(2, p.len()));
                    }
                }
                Ok(ConvexImage { ambient: 2, verts: convex_hull_2d(points) })
            }
            _ => Err(GeometryError::UnsupportedDim(d, "1 or 2")),
        }
    }

    /// Geometric dimension: 0 point, 1 segment, 2 polygon.
    pub fn dim(&self) -> isize {
        match self.verts.len() {
            1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    /// Closed containment.
    pub fn contains(&self, p: &RationalPoint) -> bool {
        match self.ambient {
            1 => {
                let x = &p[0];
                match self.verts.len() {
                    1 => *x == self.verts[0][0],
                    _ => self.verts[0][0] <= *x && *x <= self.verts[1][0],
                }
            }
            2 => match self.verts.len() {
                1 => *p == self.verts[0],
                2 => on_segment(&self.verts[0], &self.verts[1], p),
                n => {
                    for i in 0..n {
                        let j = (i + 1) % n;
                        if cross(&self.verts[i], &self.verts[j], p).is_negative() {
                            return false;
                        }
                    }
                    true
                }
            },
            _ => unreachable!(),
        }
    }

    /// Relative-interior containment.
    pub fn contains_relint(&self, p: &RationalPoint) -> bool {
        match self.ambient {
            1 => match self.verts.len() {
                1 => *p == self.verts[0],
                _ => self.verts[0][0] < p[0] && p[0] < self.verts[1][0],
            },
            2 => match self.verts.len() {
                1 => *p == self.verts[0],
                2 => {
                    on_segment(&self.verts[0], &self.verts[1], p)
                        && *p != self.verts[0]
                        && *p != self.verts[1]
                }
                n => {
                    for i in 0..n {
                        let j = (i + 1) % n;
                        if !cross(&self.verts[i], &self.verts[j], p).is_positive() {
                            return false;
                        }
                    }
                    true
                }
            },
            _ => unreachable!(),
        }
    }

    /// Boundary edges of a polygon, or the segment itself.
    pub fn edges(&self) -> Vec<(RationalPoint, RationalPoint)> {
        match (self.ambient, self.verts.len()) {
            (2, 2) => vec![(self.verts[0].clone(), self.verts[1].clone())],
            (2, n) if n >= 3 => {
                (0..n).map(|i| (self.verts[i].clone(), self.verts[(i + 1) % n].clone())).collect()
            }
            _ => Vec::new(),
        }
    }
}

/// True if q lies on the closed segment [a, b] (which may be degenerate).
pub fn on_segment(a: &RationalPoint, b: &RationalPoint, q: &RationalPoint) -> bool {
    if a == b {
        return q == a;
    }
    if !cross(a, b, q).is_zero() {
        return false;
    }
    let within = |s: &Rat, t: &Rat, v: &Rat| {
        if s <= t {
            s <= v && v <= t
        } else {
            t <= v && v <= s
        }
    };
    within(&a[0], &b[0], &q[0]) && within(&a[1], &b[1], &q[1])
}

/// Exact segment-segment intersection in R^2.
#[derive(Clone, Debug, PartialEq)]
pub enum SegmentMeet {
    Empty,
    Point(RationalPoint),
    Overlap(RationalPoint, RationalPoint),
}

pub fn segment_intersection(
    a: &RationalPoint,
    b: &RationalPoint,
    c: &RationalPoint,
    d: &RationalPoint,
) -> SegmentMeet {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    let opposite = |x: &Rat, y: &Rat| {
        (x.is_positive() && y.is_negative()) || (x.is_negative() && y.is_positive())
    };
    if opposite(&d1, &d2) && opposite(&d3, &d4) {
        // Proper crossing: solve for the point along [a, b].
        let t = &d1 / (&d1 - &d2);
        let px = &a[0] + &t * (&b[0] - &a[0]);
        let py = &a[1] + &t * (&b[1] - &a[1]);
        return SegmentMeet::Point(vec![px, py]);
    }
    if d1.is_zero() && d2.is_zero() && d3.is_zero() && d4.is_zero() {
        // Collinear (or degenerate): intersect parameter ranges on the
        // dominant axis.
        let axis = usize::from(a[0] == b[0] && c[0] == d[0]);
        let mut s1 = [a.clone(), b.clone()];
        if s1[0][axis] > s1[1][axis] {
            s1.swap(0, 1);
        }
        let mut s2 = [c.clone(), d.clone()];
        if s2[0][axis] > s2[1][axis] {
            s2.swap(0, 1);
        }
        let lo = if s1[0][axis] >= s2[0][axis] { s1[0].clone() } else { s2[0].clone() };
        let hi = if s1[1][axis] <= s2[1][axis] { s1[1].clone() } else { s2[1].clone() };
        if lo[axis] > hi[axis] {
            return SegmentMeet::Empty;
        }
        if !(on_segment(a, b, &lo) && on_segment(c, d, &lo)) {
            return SegmentMeet::Empty;
        }
        if lo == hi {
            return SegmentMeet::Point(lo);
        }
        return SegmentMeet::Overlap(lo, hi);
    }
    // Touching cases: an endpoint on the other segment.
    for p in [a, b] {
        if on_segment(c, d, p) {
            return SegmentMeet::Point(p.clone());
        }
    }
    for p in [c, d] {
        if on_segment(a, b, p) {
            return SegmentMeet::Point(p.clone());
        }
    }
    SegmentMeet::Empty
}

/// Dimension of the intersection of convex images in R^1/R^2 (−1 if empty).
///
/// For convex polygons every extreme point of the intersection is either a
/// vertex of one polygon lying in all others or a boundary-edge crossing
/// lying in all others, so the intersection is the hull of those candidates.
pub fn convex_intersection_dim(images: &[&ConvexImage]) -> isize {
    assert!(!images.is_empty());
    let ambient = images[0].ambient;
    if ambient == 1 {
        let mut lo = images[0].verts.first().unwrap()[0].clone();
        let mut hi = images[0].verts.last().unwrap()[0].clone();
        for im in &images[1..] {
            let l = im.verts.first().unwrap()[0].clone();
            let h = im.verts.last().unwrap()[0].clone();
            if l > lo {
                lo = l;
            }
            if h < hi {
                hi = h;
            }
        }
        return match lo.cmp(&hi) {
            std::cmp::Ordering::Greater => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => 1,
        };
    }
    let mut candidates: Vec<RationalPoint> = Vec::new();
    let inside_all = |p: &RationalPoint| images.iter().all(|im| im.contains(p));
    for (i, im) in images.iter().enumerate() {
        for v in &im.verts {
            if inside_all(v) {
                candidates.push(v.clone());
            }
        }
        for (j, jm) in images.iter().enumerate() {
            if j <= i {
                continue;
            }
            for (a, b) in im.edges() {
                for (c, d) in jm.edges() {
                    match segment_intersection(&a, &b, &c, &d) {
                        SegmentMeet::Empty => {}
                        SegmentMeet::Point(p) => {
                            if inside_all(&p) {
                                candidates.push(p);
                            }
                        }
                        SegmentMeet::Overlap(p, q) => {
                            if inside_all(&p) {
                                candidates.push(p);
                            }
                            if inside_all(&q) {
                                candidates.push(q);
                            }
                        }
                    }
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    if candidates.is_empty() {
        return -1;
    }
    AffineSubspace::hull(&candidates).expect("consistent dims").dim
}

/// Strong general position of a simplexwise-linear map into R^1 or R^2: for
/// every family of pairwise vertex-disjoint cells,
/// dim(∩ f(σ_i)) <= max(−1, Σ dim σ_i − d(r−1)).
///
/// Each entry of `cells` is (intrinsic dim, vertex images, vertex ids).
pub fn strongly_general_position(
    ambient: usize,
    cells: &[(usize, Vec<RationalPoint>, Vec<usize>)],
    budget: usize,
) -> Result<bool, GeometryError> {
    if !(ambient == 1 || ambient == 2) {
        return Err(GeometryError::UnsupportedDim(ambient, "1 or 2"));
    }
    if cells.len() > budget * 4 {
        return Err(GeometryError::Budget { count: cells.len(), budget: budget * 4 });
    }
    let images: Vec<ConvexImage> =
        cells.iter().map(|(_, pts, _)| ConvexImage::from_points(pts)).collect::<Result<_, _>>()?;
    // r = 1: dim f(σ) <= dim σ, which holds for any affine image; checked
    // anyway since polyhedral vertex sets can exceed dim + 1.
    for ((dim, _, _), im) in cells.iter().zip(&images) {
        if im.dim() > *dim as isize {
            return Ok(false);
        }
    }
    fn recurse(
        start: usize,
        chosen: &mut Vec<usize>,
        cells: &[(usize, Vec<RationalPoint>, Vec<usize>)],
        images: &[ConvexImage],
        ambient: usize,
    ) -> bool {
        if chosen.len() >= 2 {
            let picked: Vec<&ConvexImage> = chosen.iter().map(|&i| &images[i]).collect();
            let sum: isize = chosen.iter().map(|&i| cells[i].0 as isize).sum();
            let cap = (-1isize).max(sum - (ambient as isize) * (chosen.len() as isize - 1));
            if convex_intersection_dim(&picked) > cap {
                return false;
            }
        }
        for next in start..cells.len() {
            let disjoint = chosen
                .iter()
                .all(|&c| cells[c].2.iter().all(|v| !cells[next].2.contains(v)));
            if disjoint {
                chosen.push(next);
                if !recurse(next + 1, chosen, cells, images, ambient) {
                    return false;
                }
                chosen.pop();
            }
        }
        true
    }
    let mut chosen = Vec::new();
    Ok(recurse(0, &mut chosen, cells, &images, ambient))
}

// ---------------------------------------------------------------------------
// The circle R mod 1
// ---------------------------------------------------------------------------

/// Normalizes a rational into [0, 1).
pub fn mod1(r: &Rat) -> Rat {
    r - r.floor()
}

/// Counterclockwise distance from a to b in [0, 1).
pub fn ccw_gap(a: &Rat, b: &Rat) -> Rat {
    mod1(&(b - a))
}

fn half() -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2))
}

/// True if v lies strictly inside the shorter arc between a and b.
/// a and b must be distinct and non-antipodal.
pub fn short_arc_contains(a: &Rat, b: &Rat, v: &Rat) -> Result<bool, GeometryError> {
    let a = mod1(a);
    let b = mod1(b);
    let v = mod1(v);
    if a == b {
        return Err(GeometryError::DegeneratePolyline(a, b));
    }
    let gap = ccw_gap(&a, &b);
    match gap.cmp(&half()) {
        std::cmp::Ordering::Equal => Err(GeometryError::Antipodal(a, b)),
        std::cmp::Ordering::Less => {
            let t = ccw_gap(&a, &v);
            Ok(!t.is_zero() && t < gap)
        }
        std::cmp::Ordering::Greater => {
            // The shorter way runs clockwise from a, i.e. ccw from b to a.
            let t = ccw_gap(&b, &v);
            let len = ccw_gap(&b, &a);
            Ok(!t.is_zero() && t < len)
        }
    }
}

/// A PL path on the circle: consecutive points joined by their shorter arc.
#[derive(Clone, Debug, PartialEq)]
pub struct CirclePolyline {
    pub points: Vec<Rat>,
}

impl CirclePolyline {
    pub fn new(points: Vec<Rat>) -> Result<Self, GeometryError> {
        assert!(points.len() >= 2, "polyline needs at least two points");
        let points: Vec<Rat> = points.iter().map(mod1).collect();
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(GeometryError::DegeneratePolyline(w[0].clone(), w[1].clone()));
            }
            if ccw_gap(&w[0], &w[1]) == half() {
                return Err(GeometryError::Antipodal(w[0].clone(), w[1].clone()));
            }
        }
        Ok(CirclePolyline { points })
    }

    /// Parity of transversal passes through v. v must not be a polyline
    /// vertex (that would not be general position).
    pub fn crossing_parity(&self, v: &Rat) -> Result<u8, GeometryError> {
        let v = mod1(v);
        if self.points.contains(&v) {
            return Err(GeometryError::OnPolylineVertex(v));
        }
        let mut parity = 0u8;
        for w in self.points.windows(2) {
            if short_arc_contains(&w[0], &w[1], &v)? {
                parity ^= 1;
            }
        }
        Ok(parity)
    }

    /// Concatenation (the end of self must equal the start of other).
    pub fn concat(&self, other: &CirclePolyline) -> CirclePolyline {
        assert_eq!(self.points.last(), other.points.first());
        let mut points = self.points.clone();
        points.extend(other.points[1..].iter().cloned());
        CirclePolyline { points }
    }
}

// ---------------------------------------------------------------------------
// Random rational perturbation
// ---------------------------------------------------------------------------

/// Adds an i.i.d. offset m/2^k with m uniform in {−3,…,−1,1,…,3} to every
/// coordinate: a constructive "small perturbation" whose magnitude is
/// controlled by the denominator exponent k.
pub fn perturb_point<R: Rng>(p: &RationalPoint, k: u32, rng: &mut R) -> RationalPoint {
    p.iter()
        .map(|c| {
            let m: i64 = loop {
                let v = rng.gen_range(-3i64..=3);
                if v != 0 {
                    break v;
                }
            };
            c + Rat::new(BigInt::from(m), BigInt::from(2).pow(k))
        })
        .collect()
}
