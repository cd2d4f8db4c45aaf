//! Floating-point predicates over sampled point sets.
//!
//! Everything reduces to one question, answered by a phase-one simplex: is
//! the origin a convex combination of a set of points? A point is a vertex of
//! a hull iff the origin is not in the hull of the other points translated by
//! it; a simplex spanned by selected points is a face iff, after projecting
//! every point onto the orthogonal complement of the simplex's affine hull,
//! the common image of the selected points is not in the hull of the
//! projections of the remaining points.

pub mod linalg;
pub mod lp;

pub use linalg::orthocomplement_basis;
pub use lp::LPReport;

use crate::combinatorics::{binomial, combinations};
use crate::error::{Error, Result};
use linalg::{dot, norm};

/// Default relative feasibility tolerance of the hull predicates.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Largest number of subsets [`count_faces`] will test.
pub const MAX_FACE_SUBSETS: u64 = 1_000_000;

/// An ordered, nonempty list of points in `R^dim`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("point set must be nonempty".into()));
        }
        if let Some(i) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::InvalidArgument(format!(
                "point {i} has length {} but dimension is {dim}",
                points[i].len()
            )));
        }
        Ok(PointSet { dim, coords: points.concat() })
    }

    /// Build from row-major coordinates; `coords.len()` must be a positive
    /// multiple of `dim`.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The first `len` points.
    pub fn prefix(&self, len: usize) -> PointSet {
        assert!(len >= 1 && len <= self.len(), "prefix length out of range");
        PointSet { dim: self.dim, coords: self.coords[..len * self.dim].to_vec() }
    }

    /// Largest Euclidean norm of any point.
    pub fn scale(&self) -> f64 {
        self.points().map(norm).fold(0.0, f64::max)
    }
}

/// Feasibility report for "origin in the convex hull of `points`".
/// Points are rescaled to unit maximum norm, so `eps` is relative to the
/// largest point norm.
fn origin_in_hull_of(points: &[Vec<f64>], dim: usize, eps: f64) -> Result<LPReport> {
    if points.is_empty() {
        return Ok(LPReport { feasible: false, margin: None, iterations: 0, residual: f64::INFINITY });
    }
    let scale = points.iter().map(|p| norm(p)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(LPReport { feasible: true, margin: Some(eps), iterations: 0, residual: 0.0 });
    }
    let cols = points.len();
    let rows = dim + 1;
    let mut a = vec![0.0; rows * cols];
    for (j, p) in points.iter().enumerate() {
        for (r, x) in p.iter().enumerate() {
            a[r * cols + j] = x / scale;
        }
        a[dim * cols + j] = 1.0;
    }
    let mut b = vec![0.0; rows];
    b[dim] = 1.0;
    lp::phase_one(&a, rows, cols, &b, eps)
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")))
    }
}

/// Full LP report behind [`origin_in_hull`].
pub fn origin_in_hull_report(ps: &PointSet, eps: f64) -> Result<LPReport> {
    check_eps(eps)?;
    let points: Vec<Vec<f64>> = ps.points().map(<[f64]>::to_vec).collect();
    origin_in_hull_of(&points, ps.dim, eps)
}

/// Whether some convex combination of the points lies within
/// `eps * ps.scale()` of the origin.
pub fn origin_in_hull(ps: &PointSet, eps: f64) -> Result<bool> {
    Ok(origin_in_hull_report(ps, eps)?.feasible)
}

/// Whether point `idx` is a vertex of `Conv(ps)`.
pub fn is_vertex(idx: usize, ps: &PointSet, eps: f64) -> Result<bool> {
    check_eps(eps)?;
    if idx >= ps.len() {
        return Err(Error::indices(&[idx], format!("point set has {} points", ps.len())));
    }
    let base = ps.point(idx);
    let others: Vec<Vec<f64>> = (0..ps.len())
        .filter(|&j| j != idx)
        .map(|j| ps.point(j).iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    Ok(!origin_in_hull_of(&others, ps.dim, eps)?.feasible)
}

/// Whether the simplex on the selected points is a `k`-face of `Conv(ps)`,
/// `k = indices.len() - 1`.
///
/// Affinely dependent selections return [`Error::Degenerate`], which is
/// distinct from `Ok(false)`.
pub fn is_face(ps: &PointSet, indices: &[usize], eps: f64) -> Result<bool> {
    check_eps(eps)?;
    if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::indices(indices, "indices must be nonempty and strictly increasing"));
    }
    if *indices.last().unwrap() >= ps.len() {
        return Err(Error::indices(indices, format!("point set has {} points", ps.len())));
    }
    if indices.len() > ps.dim {
        return Err(Error::indices(
            indices,
            format!("a proper face in dimension {} has at most {} vertices", ps.dim, ps.dim),
        ));
    }

    let base = ps.point(indices[0]);
    let diff = |j: usize| -> Vec<f64> { ps.point(j).iter().zip(base).map(|(x, y)| x - y).collect() };
    let edges: Vec<Vec<f64>> = indices[1..].iter().map(|&j| diff(j)).collect();
    let complement = orthocomplement_basis(&edges, ps.dim).map_err(|e| match e {
        Error::Degenerate(_) => Error::Degenerate(format!("points {indices:?} are affinely dependent")),
        other => other,
    })?;

    let mut selected = indices.iter().peekable();
    let mut projected = Vec::with_capacity(ps.len() - indices.len());
    for j in 0..ps.len() {
        if selected.peek() == Some(&&j) {
            selected.next();
            continue;
        }
        let v = diff(j);
        projected.push(complement.iter().map(|u| dot(&v, u)).collect::<Vec<f64>>());
    }
    Ok(!origin_in_hull_of(&projected, complement.len(), eps)?.feasible)
}

/// Number of `k`-faces of `Conv(ps)`, by testing every `(k+1)`-subset.
pub fn count_faces(ps: &PointSet, k: usize, eps: f64) -> Result<usize> {
    let subsets = binomial(ps.len(), k + 1);
    if subsets > MAX_FACE_SUBSETS.into() {
        return Err(Error::CapExceeded {
            what: "face subsets",
            size: u128::try_from(subsets).unwrap_or(u128::MAX),
            cap: MAX_FACE_SUBSETS as u128,
        });
    }
    let mut count = 0;
    for idx in combinations(ps.len(), k + 1) {
        if is_face(ps, &idx, eps)? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(dim: usize, pts: &[&[f64]]) -> PointSet {
        PointSet::new(dim, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn point_set_validation() {
        assert!(PointSet::new(2, &[]).is_err());
        assert!(PointSet::new(2, &[vec![1.0]]).is_err());
        assert!(PointSet::from_flat(2, vec![1.0, 2.0, 3.0]).is_err());
        let p = PointSet::from_flat(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.point(1), &[3.0, 4.0]);
        assert_eq!(p.prefix(1).len(), 1);
    }

    #[test]
    fn origin_in_hull_one_dimensional() {
        assert!(origin_in_hull(&ps(1, &[&[1.0], &[-1.0]]), DEFAULT_EPS).unwrap());
        assert!(!origin_in_hull(&ps(1, &[&[1.0], &[2.0]]), DEFAULT_EPS).unwrap());
        assert!(!origin_in_hull(&ps(3, &[&[0.5, -0.2, 1.0]]), DEFAULT_EPS).unwrap());
        assert!(origin_in_hull(&ps(2, &[&[0.0, 0.0]]), DEFAULT_EPS).unwrap());
        assert!(origin_in_hull(&ps(1, &[&[1.0], &[2.0]]), 0.0).is_err());
    }

    #[test]
    fn origin_in_hull_report_carries_margin() {
        let r =
            origin_in_hull_report(&ps(2, &[&[1.0, 0.0], &[-1.0, 1.0], &[-1.0, -1.0]]), DEFAULT_EPS).unwrap();
        assert!(r.feasible);
        assert!(r.margin.is_some());
        let r = origin_in_hull_report(&ps(2, &[&[1.0, 0.0], &[2.0, 1.0]]), DEFAULT_EPS).unwrap();
        assert!(!r.feasible);
        assert!(r.margin.is_none());
    }

    #[test]
    fn vertices_of_a_square() {
        let sq = ps(2, &[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        for i in 0..4 {
            assert!(is_vertex(i, &sq, DEFAULT_EPS).unwrap());
        }
        let with_center = ps(2, &[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0], &[0.5, 0.5]]);
        assert!(!is_vertex(4, &with_center, DEFAULT_EPS).unwrap());
        let collinear = ps(2, &[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]);
        assert!(!is_vertex(1, &collinear, DEFAULT_EPS).unwrap());
        assert!(is_vertex(0, &collinear, DEFAULT_EPS).unwrap());
        assert!(is_vertex(0, &ps(2, &[&[3.0, 1.0]]), DEFAULT_EPS).unwrap());
    }

    #[test]
    fn faces_of_planar_sets() {
        let tri = ps(2, &[&[0.0, 0.0], &[2.0, 0.1], &[0.3, 1.7]]);
        for idx in combinations(3, 2) {
            assert!(is_face(&tri, &idx, DEFAULT_EPS).unwrap());
        }
        let inner = ps(2, &[&[0.0, 0.0], &[2.0, 0.1], &[0.3, 1.7], &[0.6, 0.5]]);
        for idx in [[0, 3], [1, 3], [2, 3]] {
            assert!(!is_face(&inner, &idx, DEFAULT_EPS).unwrap());
        }
        assert!(!is_face(&inner, &[3], DEFAULT_EPS).unwrap());
        assert!(is_face(&inner, &[0, 1], DEFAULT_EPS).unwrap());
    }

    #[test]
    fn faces_on_the_line() {
        let line = ps(1, &[&[0.0], &[-0.4], &[1.3], &[0.8]]);
        assert!(is_face(&line, &[2], DEFAULT_EPS).unwrap());
        assert!(is_face(&line, &[1], DEFAULT_EPS).unwrap());
        assert!(!is_face(&line, &[0], DEFAULT_EPS).unwrap());
        assert_eq!(count_faces(&line, 0, DEFAULT_EPS).unwrap(), 2);
    }

    #[test]
    fn face_errors_are_distinct_from_false() {
        let p = ps(3, &[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[2.0, 0.0, 0.0], &[0.0, 1.0, 1.0]]);
        assert!(matches!(is_face(&p, &[0, 1, 2], DEFAULT_EPS), Err(Error::Degenerate(_))));
        assert!(matches!(is_face(&p, &[1, 0], DEFAULT_EPS), Err(Error::InvalidIndices { .. })));
        assert!(matches!(is_face(&p, &[0, 9], DEFAULT_EPS), Err(Error::InvalidIndices { .. })));
        assert!(matches!(is_face(&p, &[0, 1, 2, 3], DEFAULT_EPS), Err(Error::InvalidIndices { .. })));
    }

    #[test]
    fn convex_quadrilateral_counts() {
        let quad = ps(2, &[&[0.0, 0.0], &[2.0, 0.2], &[2.3, 1.9], &[-0.1, 1.5]]);
        assert_eq!(count_faces(&quad, 0, DEFAULT_EPS).unwrap(), 4);
        assert_eq!(count_faces(&quad, 1, DEFAULT_EPS).unwrap(), 4);
    }

    #[test]
    fn tetrahedron_with_interior_point() {
        let p = ps(
            3,
            &[&[0.0, 0.0, 0.0], &[3.0, 0.1, 0.2], &[0.2, 2.9, 0.1], &[0.1, 0.3, 3.1], &[0.5, 0.6, 0.7]],
        );
        let f0 = count_faces(&p, 0, DEFAULT_EPS).unwrap();
        let f1 = count_faces(&p, 1, DEFAULT_EPS).unwrap();
        let f2 = count_faces(&p, 2, DEFAULT_EPS).unwrap();
        assert_eq!((f0, f1, f2), (4, 6, 4));
    }

    #[test]
    fn subset_cap() {
        let coords: Vec<f64> = (0..200 * 3).map(|i| ((i * 37) % 101) as f64).collect();
        let p = PointSet::from_flat(3, coords).unwrap();
        assert!(matches!(count_faces(&p, 2, DEFAULT_EPS), Err(Error::CapExceeded { .. })));
    }
}
