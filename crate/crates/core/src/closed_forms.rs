//! Distribution-free closed forms, evaluated exactly.
//!
//! Every function here returns a [`BigRational`]; the only floating-point
//! output is [`asymptotic_expected_faces`]. Several quantities have two
//! independent evaluation routes (the Stirling-number form of the expected
//! face count and the sum of face probabilities over all index tuples; walks
//! of length `n` and bridges of length `n + 1`), which the test-suite pins
//! against each other as exact rational identities.
//!
//! Face queries must describe a *proper* face of the hull: besides
//! `k + 1 <= d`, the selected simplex may not be the whole (lower
//! dimensional) hull, so `k + 1 <= n` for walks of length `n` (hull of
//! `n + 1` points) and `k + 1 <= n - 1` for bridges of length `n` (hull of
//! `n` distinct points).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{
    self, b_poly, binomial, bridge_face_poly, combinations, factorial, hat_c, stirling_first,
    stirling_second, walk_face_poly,
};
use crate::error::{Error, Result};

/// Largest length accepted by the tuple-enumerating evaluators.
pub const BIGSUM_MAX_N: usize = 20;

/// The `(n, d, k, indices)` of a face query, validated against one of the
/// two path models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceQuery {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub indices: Option<Vec<usize>>,
}

impl FaceQuery {
    pub fn expected(n: usize, d: usize, k: usize) -> Result<Self> {
        check_expected_faces(n, d, k)?;
        Ok(FaceQuery { n, d, k, indices: None })
    }

    pub fn walk_face(n: usize, d: usize, indices: &[usize]) -> Result<Self> {
        check_walk_face(n, d, indices)?;
        Ok(FaceQuery { n, d, k: indices.len() - 1, indices: Some(indices.to_vec()) })
    }

    pub fn bridge_face(n: usize, d: usize, indices: &[usize]) -> Result<Self> {
        check_bridge_face(n, d, indices)?;
        Ok(FaceQuery { n, d, k: indices.len() - 1, indices: Some(indices.to_vec()) })
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn check_expected_faces(n: usize, d: usize, k: usize) -> Result<()> {
    if d == 0 {
        return Err(invalid("dimension d must be at least 1"));
    }
    if k >= d {
        return Err(invalid(format!("face dimension k = {k} must be below d = {d}")));
    }
    if n < d {
        return Err(invalid(format!("walk length n = {n} must be at least d = {d}")));
    }
    Ok(())
}

pub(crate) fn check_walk_face(n: usize, d: usize, indices: &[usize]) -> Result<()> {
    combinatorics::check_walk_indices(n, indices)?;
    check_proper_face(indices.len(), d, n)
}

pub(crate) fn check_bridge_face(n: usize, d: usize, indices: &[usize]) -> Result<()> {
    combinatorics::check_bridge_indices(n, indices)?;
    check_proper_face(indices.len(), d, n - 1)
}

/// `vertices` selected points must form a proper face of a hull whose
/// affine dimension is at most `hull_dim`, in `R^d`.
fn check_proper_face(vertices: usize, d: usize, hull_dim: usize) -> Result<()> {
    if d == 0 {
        return Err(invalid("dimension d must be at least 1"));
    }
    if vertices > d {
        return Err(invalid(format!("{vertices} points cannot span a proper face in dimension {d}")));
    }
    if vertices > hull_dim {
        return Err(invalid(format!(
            "{vertices} points span the whole hull of dimension {hull_dim}; not a proper face"
        )));
    }
    Ok(())
}

fn two() -> BigInt {
    BigInt::from(2)
}

/// Expected number of `k`-faces of the hull of an exchangeable walk of length
/// `n` in `R^d`: `(2 k!/n!) sum_l c(n+1, d-2l) S(d-2l, k+1)`.
pub fn expected_faces_walk(n: usize, d: usize, k: usize) -> Result<BigRational> {
    expected_faces_walk_with(n, d, k, stirling_first)
}

/// [`expected_faces_walk`] evaluated against a caller-supplied table of
/// first-kind Stirling numbers. Used by harnesses that need to perturb the
/// table and watch an identity check fail.
pub fn expected_faces_walk_with(
    n: usize,
    d: usize,
    k: usize,
    first_kind: impl Fn(usize, i64) -> BigInt,
) -> Result<BigRational> {
    check_expected_faces(n, d, k)?;
    let mut sum = BigInt::zero();
    let mut top = d as i64;
    while top >= 1 {
        sum += first_kind(n + 1, top) * stirling_second(top as usize, k as i64 + 1);
        top -= 2;
    }
    Ok(BigRational::new(two() * factorial(k) * sum, factorial(n)))
}

/// Expected number of `k`-faces obtained by summing the symmetric-walk face
/// probability over every index tuple. Independent of the Stirling form.
pub fn expected_faces_walk_bigsum(n: usize, d: usize, k: usize) -> Result<BigRational> {
    check_expected_faces(n, d, k)?;
    check_bigsum_cap(n)?;
    combinations(n + 1, k + 1).try_fold(BigRational::zero(), |acc, idx| Ok(acc + face_prob_walk(n, d, &idx)?))
}

fn check_bigsum_cap(n: usize) -> Result<()> {
    if n > BIGSUM_MAX_N {
        return Err(Error::CapExceeded {
            what: "index-tuple enumeration length",
            size: n as u128,
            cap: BIGSUM_MAX_N as u128,
        });
    }
    Ok(())
}

/// Probability that `Conv(S_{i_1}, ..., S_{i_{k+1}})` is a `k`-face of the
/// hull of a symmetrically exchangeable walk of length `n` in `R^d`.
pub fn face_prob_walk(n: usize, d: usize, indices: &[usize]) -> Result<BigRational> {
    check_walk_face(n, d, indices)?;
    let k = indices.len() - 1;
    let poly = walk_face_poly(n, indices)?;
    let first = indices[0];
    let last = indices[k];

    let mut denom = (BigInt::one() << (first + n - last)) * factorial(first) * factorial(n - last);
    for w in indices.windows(2) {
        denom *= factorial(w[1] - w[0]);
    }
    let numer = two() * poly.descending_parity_sum((d - k - 1) as i64);
    Ok(BigRational::new(numer, denom))
}

/// Probability that the maximum of a one-dimensional symmetric walk of length
/// `n` sits at position `i`: `C(2i, i) C(2n-2i, n-i) / 4^n`.
pub fn arcsine(n: usize, i: usize) -> Result<BigRational> {
    if i > n {
        return Err(invalid(format!("position {i} exceeds walk length {n}")));
    }
    Ok(BigRational::new(binomial(2 * i, i) * binomial(2 * n - 2 * i, n - i), BigInt::one() << (2 * n)))
}

/// Probability that `S_i` is a vertex of the hull of a symmetric walk.
pub fn vertex_prob_walk(n: usize, d: usize, i: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(invalid("walk length must be at least 1"));
    }
    if d == 0 {
        return Err(invalid("dimension d must be at least 1"));
    }
    if i > n {
        return Err(invalid(format!("position {i} exceeds walk length {n}")));
    }
    let poly = &b_poly(i) * &b_poly(n - i);
    let denom = (BigInt::one() << (n - 1)) * factorial(i) * factorial(n - i);
    Ok(BigRational::new(poly.descending_parity_sum(d as i64 - 1), denom))
}

/// Probability that `Conv(S_{i_1}, ..., S_{i_{k+1}})` is a `k`-face of the
/// hull of an exchangeable bridge of length `n` in `R^d`.
pub fn face_prob_bridge(n: usize, d: usize, indices: &[usize]) -> Result<BigRational> {
    if n < 2 {
        return Err(invalid("bridge length must be at least 2"));
    }
    check_bridge_face(n, d, indices)?;
    let k = indices.len() - 1;
    let poly = bridge_face_poly(n, indices)?;
    let denom = combinatorics::cyclic_gaps(n, indices).fold(BigInt::one(), |acc, g| acc * factorial(g));
    let numer = two() * poly.descending_parity_sum((d - k - 1) as i64);
    Ok(BigRational::new(numer, denom))
}

/// Probability that a given point `S_i`, `0 <= i < n`, is a vertex of the
/// hull of a bridge of length `n`; the same for every `i`.
pub fn vertex_prob_bridge(n: usize, d: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(invalid("bridge length must be at least 2"));
    }
    if d == 0 {
        return Err(invalid("dimension d must be at least 1"));
    }
    let mut sum = BigInt::zero();
    let mut top = d as i64;
    while top >= 0 {
        sum += stirling_first(n, top);
        top -= 2;
    }
    Ok(BigRational::new(two() * sum, factorial(n)))
}

/// Expected number of `k`-faces of a bridge hull of length `n`, as the sum of
/// bridge face probabilities over every index tuple.
pub fn expected_faces_bridge(n: usize, d: usize, k: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(invalid("bridge length must be at least 2"));
    }
    check_proper_face(k + 1, d, n - 1)?;
    check_bigsum_cap(n)?;
    combinations(n, k + 1).try_fold(BigRational::zero(), |acc, idx| Ok(acc + face_prob_bridge(n, d, &idx)?))
}

/// Shift-averaged face probability of an exchangeable (not necessarily
/// symmetric) walk of length `n` for the face pattern `(i, i + l_1, ...,
/// i + l_k)`. Equals the bridge face probability of length `n + 1` at
/// `(0, l_1, ..., l_k)`.
pub fn shift_avg_face_prob(n: usize, d: usize, lags: &[usize]) -> Result<BigRational> {
    if lags.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::indices(lags, "lags must be strictly increasing"));
    }
    if lags.first().is_some_and(|&l| l == 0) || lags.last().is_some_and(|&l| l > n) {
        return Err(Error::indices(lags, format!("lags must lie in 1..={n}")));
    }
    let indices: Vec<usize> = std::iter::once(0).chain(lags.iter().copied()).collect();
    face_prob_bridge(n + 1, d, &indices)
}

fn group_order(walk_lengths: &[usize], bridge_lengths: &[usize]) -> BigInt {
    let walks = walk_lengths.iter().map(|&n| (BigInt::one() << n) * factorial(n));
    let bridges = bridge_lengths.iter().map(|&m| factorial(m));
    walks.chain(bridges).product()
}

/// Probability that the joint hull of the given walks and bridges in `R^d`
/// (starting point excluded) contains the origin.
pub fn absorption_prob(d: usize, walk_lengths: &[usize], bridge_lengths: &[usize]) -> Result<BigRational> {
    if d == 0 {
        return Err(invalid("dimension d must be at least 1"));
    }
    let poly = combinatorics::joint_absorption_poly(walk_lengths, bridge_lengths)?;
    Ok(BigRational::new(
        two() * poly.ascending_parity_sum(d as i64 + 1),
        group_order(walk_lengths, bridge_lengths),
    ))
}

/// Complement of [`absorption_prob`], evaluated from the low-order
/// coefficients instead of by subtraction.
pub fn non_absorption_prob(
    d: usize,
    walk_lengths: &[usize],
    bridge_lengths: &[usize],
) -> Result<BigRational> {
    if d == 0 {
        return Err(invalid("dimension d must be at least 1"));
    }
    let poly = combinatorics::joint_absorption_poly(walk_lengths, bridge_lengths)?;
    Ok(BigRational::new(
        two() * poly.descending_parity_sum(d as i64 - 1),
        group_order(walk_lengths, bridge_lengths),
    ))
}

/// Expected number of faces of all dimensions `0..d` together.
pub fn total_expected_faces(n: usize, d: usize) -> Result<BigRational> {
    check_expected_faces(n, d, 0)?;
    let mut sum = BigInt::zero();
    let mut top = d as i64;
    while top >= 1 {
        sum += stirling_first(n + 1, top) * hat_c(top as usize);
        top -= 2;
    }
    Ok(BigRational::new(two() * sum, factorial(n)))
}

/// Leading-order growth `(2 k!/(d-1)!) S(d, k+1) (ln n)^(d-1)` of the
/// expected `k`-face count.
pub fn asymptotic_expected_faces(n: usize, d: usize, k: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid("asymptotic form needs n >= 2"));
    }
    if d == 0 || k >= d {
        return Err(invalid(format!("need 0 <= k < d, got k = {k}, d = {d}")));
    }
    let coeff = BigRational::new(two() * factorial(k) * stirling_second(d, k as i64 + 1), factorial(d - 1));
    Ok(crate::rational::to_f64(&coeff) * (n as f64).ln().powi(d as i32 - 1))
}
