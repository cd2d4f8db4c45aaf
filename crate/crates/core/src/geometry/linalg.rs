//! Small dense vector helpers and the orthogonal-complement routine.

use crate::error::{Error, Result};

/// Relative norm below which a vector is treated as lying in the span of the
/// vectors already accepted.
pub const RANK_TOL: f64 = 1e-9;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Subtract the projection onto each (orthonormal) `basis` vector, twice.
fn reorthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

/// Orthonormalize `vectors` by modified Gram-Schmidt with one round of
/// re-orthogonalization. Fails if they are linearly dependent at
/// [`RANK_TOL`].
pub fn orthonormalize(vectors: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "vector {i} has length {} but dimension is {dim}",
                v.len()
            )));
        }
        let original = norm(v);
        let mut w = v.clone();
        reorthogonalize(&mut w, &basis);
        let len = norm(&w);
        if len.is_nan() || len <= RANK_TOL * original {
            return Err(Error::Degenerate(format!(
                "vector {i} is dependent on the preceding ones (rank deficiency)"
            )));
        }
        w.iter_mut().for_each(|x| *x /= len);
        basis.push(w);
    }
    Ok(basis)
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in
/// `R^dim`. The input must be linearly independent; the empty span yields
/// the standard basis.
pub fn orthocomplement_basis(vectors: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>> {
    if vectors.len() > dim {
        return Err(Error::Degenerate(format!(
            "{} vectors cannot be independent in dimension {dim}",
            vectors.len()
        )));
    }
    let mut span = orthonormalize(vectors, dim)?;
    let mut out = Vec::with_capacity(dim - vectors.len());
    let mut remaining: Vec<usize> = (0..dim).collect();
    while span.len() < dim {
        // complete with the coordinate axis that keeps the most length, lowest
        // axis on ties
        let (pos, w) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &axis)| {
                let mut e = vec![0.0; dim];
                e[axis] = 1.0;
                reorthogonalize(&mut e, &span);
                (pos, e)
            })
            .reduce(|best, c| if norm(&c.1) > norm(&best.1) { c } else { best })
            .expect("candidate axes remain while the basis is incomplete");
        remaining.remove(pos);
        let len = norm(&w);
        let q: Vec<f64> = w.into_iter().map(|x| x / len).collect();
        span.push(q.clone());
        out.push(q);
    }
    Ok(out)
}
