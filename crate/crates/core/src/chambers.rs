//! Reflection arrangements of products of type B and type A groups, and the
//! count of Weyl chambers met by a linear subspace.
//!
//! Coordinates of `R^n` are laid out block by block: all B-blocks in order,
//! then all A-blocks. A B-block of size `n_i` carries the hyperoctahedral
//! group (signed permutations), an A-block of size `m_j` the symmetric group.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::geometry::linalg::{dot, orthocomplement_basis};
use crate::geometry::lp;
use crate::geometry::PointSet;
use crate::poly::IntPolynomial;
use crate::sampling::JointSpec;

/// Largest arrangement [`char_poly_whitney`] will expand.
pub const WHITNEY_MAX_HYPERPLANES: usize = 22;

/// Default cap on the group order for enumeration.
pub const GROUP_CAP: u64 = 1_000_000;

/// Largest ambient dimension accepted for arrangements.
pub const MAX_AMBIENT_DIM: usize = 24;

/// Fraction of group elements allowed to end in an ill-conditioned LP
/// before [`chamber_intersect_count`] gives up.
pub const MAX_ILL_CONDITIONED_FRACTION: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementSpec {
    pub b_blocks: Vec<usize>,
    pub a_blocks: Vec<usize>,
}

impl ArrangementSpec {
    pub fn new(b_blocks: Vec<usize>, a_blocks: Vec<usize>) -> Result<Self> {
        if b_blocks.is_empty() && a_blocks.is_empty() {
            return Err(Error::InvalidArgument("at least one block is required".into()));
        }
        if b_blocks.contains(&0) {
            return Err(Error::InvalidArgument("type B blocks must have size at least 1".into()));
        }
        if a_blocks.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument("type A blocks must have size at least 2".into()));
        }
        let spec = ArrangementSpec { b_blocks, a_blocks };
        if spec.ambient_dim() > MAX_AMBIENT_DIM {
            return Err(Error::InvalidArgument(format!(
                "ambient dimension {} exceeds {MAX_AMBIENT_DIM}",
                spec.ambient_dim()
            )));
        }
        Ok(spec)
    }

    /// The arrangement whose chambers govern absorption for `joint`: one
    /// B-block per walk and one A-block per bridge.
    pub fn from_joint(joint: &JointSpec) -> Result<Self> {
        Self::new(joint.walks.clone(), joint.bridges.clone())
    }

    pub fn ambient_dim(&self) -> usize {
        self.b_blocks.iter().sum::<usize>() + self.a_blocks.iter().sum::<usize>()
    }

    /// `prod 2^{n_i} n_i! * prod m_j!`.
    pub fn group_order(&self) -> BigInt {
        let b = self.b_blocks.iter().map(|&n| (BigInt::one() << n) * factorial(n));
        let a = self.a_blocks.iter().map(|&m| factorial(m));
        b.chain(a).product()
    }

    /// `(offset, size, is_type_b)` for each block in coordinate order.
    fn blocks(&self) -> Vec<(usize, usize, bool)> {
        let mut out = Vec::new();
        let mut off = 0;
        for &n in &self.b_blocks {
            out.push((off, n, true));
            off += n;
        }
        for &m in &self.a_blocks {
            out.push((off, m, false));
            off += m;
        }
        out
    }
}

/// A hyperplane through the origin, stored by its primitive integer normal
/// with positive first nonzero entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<i64>,
}

impl Hyperplane {
    pub fn new(normal: Vec<i64>) -> Result<Self> {
        let g = normal.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidArgument("hyperplane normal must be nonzero".into()));
        }
        let first = *normal.iter().find(|&&x| x != 0).unwrap();
        let g = if first < 0 { -g } else { g };
        Ok(Hyperplane { normal: normal.into_iter().map(|x| x / g).collect() })
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }
}

/// All reflecting hyperplanes of the product group, embedded in `R^n`:
/// `x_i = x_j`, `x_i = -x_j`, `x_i = 0` within each B-block and `x_i = x_j`
/// within each A-block.
pub fn reflection_hyperplanes(spec: &ArrangementSpec) -> Vec<Hyperplane> {
    let n = spec.ambient_dim();
    let unit = |i: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    let mut out = Vec::new();
    for (off, size, type_b) in spec.blocks() {
        for i in off..off + size {
            for j in i + 1..off + size {
                let mut minus = unit(i);
                minus[j] = -1;
                out.push(Hyperplane::new(minus).unwrap());
                if type_b {
                    let mut plus = unit(i);
                    plus[j] = 1;
                    out.push(Hyperplane::new(plus).unwrap());
                }
            }
            if type_b {
                out.push(Hyperplane::new(unit(i)).unwrap());
            }
        }
    }
    out
}

/// Characteristic polynomial as the product of the block factors
/// `(t-1)(t-3)...(t-(2n_i-1))` and `t(t-1)...(t-(m_j-1))`.
pub fn char_poly_product(spec: &ArrangementSpec) -> IntPolynomial {
    let b =
        spec.b_blocks.iter().map(|&n| IntPolynomial::product_of_linear((0..n as i64).map(|k| -(2 * k + 1))));
    let a = spec.a_blocks.iter().map(|&m| IntPolynomial::product_of_linear((0..m as i64).map(|k| -k)));
    b.chain(a).fold(IntPolynomial::one(), |acc, f| &acc * &f)
}

/// Row-echelon form with exact integer rows, extended one vector at a time.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    /// Reduce `v` against the current rows; `Some(row)` if it is independent.
    fn reduce(&self, v: &[i64]) -> Result<Option<(usize, Vec<i128>)>> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (p, row) in &self.rows {
            let c = w[*p];
            if c == 0 {
                continue;
            }
            let r = row[*p];
            for (x, y) in w.iter_mut().zip(row) {
                let a = x.checked_mul(r).ok_or(Error::Overflow)?;
                let b = c.checked_mul(*y).ok_or(Error::Overflow)?;
                *x = a.checked_sub(b).ok_or(Error::Overflow)?;
            }
            let g = w.iter().fold(0i128, |g, &x| g.gcd(&x));
            if g > 1 {
                w.iter_mut().for_each(|x| *x /= g);
            }
        }
        Ok(w.iter().position(|&x| x != 0).map(|p| (p, w)))
    }
}

/// `sum_{B subset A} (-1)^{|B|} t^{n - rank B}` by depth-first expansion over
/// subsets with exact incremental rank.
pub fn char_poly_whitney(hyperplanes: &[Hyperplane], n: usize) -> Result<IntPolynomial> {
    if hyperplanes.len() > WHITNEY_MAX_HYPERPLANES {
        return Err(Error::CapExceeded {
            what: "Whitney hyperplanes",
            size: hyperplanes.len() as u128,
            cap: WHITNEY_MAX_HYPERPLANES as u128,
        });
    }
    if let Some(h) = hyperplanes.iter().find(|h| h.dim() != n) {
        return Err(Error::InvalidArgument(format!(
            "hyperplane normal has length {} in dimension {n}",
            h.dim()
        )));
    }
    // counts[r] = sum over subsets of rank r of (-1)^{|B|}
    let mut counts = vec![0i64; n + 1];
    fn visit(hs: &[Hyperplane], next: usize, ech: &Echelon, sign: i64, counts: &mut [i64]) -> Result<()> {
        counts[ech.rows.len()] += sign;
        for i in next..hs.len() {
            let mut child = ech.clone();
            if let Some(row) = ech.reduce(hs[i].normal())? {
                child.rows.push(row);
            }
            visit(hs, i + 1, &child, -sign, counts)?;
        }
        Ok(())
    }
    visit(hyperplanes, 0, &Echelon::default(), 1, &mut counts)?;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (r, c) in counts.iter().enumerate() {
        coeffs[n - r] += *c;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Number of regions, `(-1)^n chi(-1)`.
pub fn zaslavsky_regions(chi: &IntPolynomial, n: usize) -> BigInt {
    let v = chi.eval_int(&BigInt::from(-1));
    if n.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Regions met by a subspace of codimension `codim` in general position:
/// writing `chi = sum (-1)^{n-k} a_k t^k`, this is
/// `2 (a_{codim+1} + a_{codim+3} + ...)`.
pub fn predicted_intersect_count(chi: &IntPolynomial, n: usize, codim: usize) -> Result<BigInt> {
    if codim == 0 || codim >= n {
        return Err(Error::InvalidArgument(format!("codimension must lie in 1..{n}, got {codim}")));
    }
    let mut sum = BigInt::zero();
    let mut k = codim + 1;
    while k <= n {
        sum += chi.coeff(k as i64).abs();
        k += 2;
    }
    Ok(sum * 2)
}

/// A group element: per B-block a permutation with signs, per A-block a
/// permutation, each permutation given in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub b_parts: Vec<(Vec<usize>, Vec<i8>)>,
    pub a_parts: Vec<Vec<usize>>,
}

impl GroupElement {
    /// `g^{-1} x` under the convention `(g y)_{sigma(k)} = eps_k y_k` on each
    /// B-block and `(g y)_{sigma(k)} = y_k` on each A-block.
    pub fn apply_inverse(&self, spec: &ArrangementSpec, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        let mut off = 0;
        for (perm, signs) in &self.b_parts {
            for (k, (&s, &e)) in perm.iter().zip(signs).enumerate() {
                y[off + k] = e as f64 * x[off + s];
            }
            off += perm.len();
        }
        for perm in &self.a_parts {
            for (k, &s) in perm.iter().enumerate() {
                y[off + k] = x[off + s];
            }
            off += perm.len();
        }
        debug_assert_eq!(off, spec.ambient_dim());
        y
    }
}

/// The `rank`-th permutation of `0..n` in lexicographic order.
fn nth_permutation(n: usize, mut rank: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact: Vec<u64> = vec![1; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as u64;
    }
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let q = (rank / fact[i]) as usize;
        rank %= fact[i];
        out.push(pool.remove(q));
    }
    out
}

fn u64_factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn checked_group_order(spec: &ArrangementSpec, cap: u64) -> Result<u64> {
    let order = spec.group_order();
    if order > BigInt::from(cap) {
        return Err(Error::CapExceeded {
            what: "group order",
            size: u128::try_from(&order).unwrap_or(u128::MAX),
            cap: cap as u128,
        });
    }
    Ok(u64::try_from(&order).expect("order is below the cap"))
}

/// The element at position `index` of the enumeration order: a mixed-radix
/// number whose most significant digits belong to the first B-block. Within
/// a B-block the sign vector is the more significant digit (bit `k` set
/// means `eps_k = -1`, first coordinate most significant), then the
/// permutation in lexicographic order; A-blocks follow by lexicographic
/// permutation.
pub fn group_element(spec: &ArrangementSpec, index: u64) -> GroupElement {
    let radices: Vec<(u64, u64)> = spec
        .b_blocks
        .iter()
        .map(|&n| (1u64 << n, u64_factorial(n)))
        .chain(spec.a_blocks.iter().map(|&m| (1, u64_factorial(m))))
        .collect();
    let mut digits = vec![(0u64, 0u64); radices.len()];
    let mut rest = index;
    for (slot, &(signs, perms)) in digits.iter_mut().zip(&radices).rev() {
        let p = rest % perms;
        rest /= perms;
        let s = rest % signs;
        rest /= signs;
        *slot = (s, p);
    }
    let nb = spec.b_blocks.len();
    let b_parts = spec
        .b_blocks
        .iter()
        .zip(&digits[..nb])
        .map(|(&n, &(s, p))| {
            let signs = (0..n).map(|k| if s >> (n - 1 - k) & 1 == 1 { -1 } else { 1 }).collect();
            (nth_permutation(n, p), signs)
        })
        .collect();
    let a_parts =
        spec.a_blocks.iter().zip(&digits[nb..]).map(|(&m, &(_, p))| nth_permutation(m, p)).collect();
    GroupElement { b_parts, a_parts }
}

/// Every group element exactly once, in the order of [`group_element`].
pub fn enumerate_group(spec: &ArrangementSpec, cap: u64) -> Result<impl Iterator<Item = GroupElement> + '_> {
    let order = checked_group_order(spec, cap)?;
    Ok((0..order).map(move |i| group_element(spec, i)))
}

/// Orthonormal vectors spanning a subspace of `R^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    pub ambient: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Outcome of testing every chamber against a subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectCount {
    pub intersecting: u64,
    pub ill_conditioned: u64,
    pub group_order: u64,
}

/// Feasibility of a nonzero point of `V` in the fundamental chamber, as an
/// LP in the coefficients `c = c+ - c-` of the basis plus one slack per
/// chamber inequality, with the normalization that is positive on the
/// pointed chamber cone.
fn meets_fundamental_chamber(spec: &ArrangementSpec, basis: &[Vec<f64>], eps: f64) -> Result<bool> {
    let v = basis.len();
    // each inequality and the normalization as a functional on R^n
    let mut ineqs: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut norm_fn: Vec<(usize, f64)> = Vec::new();
    for (off, size, type_b) in spec.blocks() {
        if type_b {
            ineqs.push(vec![(off, 1.0)]);
            norm_fn.extend((off..off + size).map(|i| (i, 1.0)));
        } else {
            norm_fn.push((off + size - 1, 1.0));
            norm_fn.push((off, -1.0));
        }
        for i in off..off + size - 1 {
            ineqs.push(vec![(i + 1, 1.0), (i, -1.0)]);
        }
    }
    let apply = |f: &[(usize, f64)], q: &[f64]| f.iter().map(|&(i, w)| w * q[i]).sum::<f64>();

    let rows = ineqs.len() + 1;
    let cols = 2 * v + ineqs.len();
    let mut a = vec![0.0; rows * cols];
    for (r, f) in ineqs.iter().chain(std::iter::once(&norm_fn)).enumerate() {
        for (j, q) in basis.iter().enumerate() {
            let x = apply(f, q);
            a[r * cols + j] = x;
            a[r * cols + v + j] = -x;
        }
        if r < ineqs.len() {
            a[r * cols + 2 * v + r] = -1.0;
        }
    }
    let mut b = vec![0.0; rows];
    b[rows - 1] = 1.0;
    Ok(lp::phase_one(&a, rows, cols, &b, eps)?.feasible)
}

/// Count the group elements `g` with `V ∩ g C != {0}`, `C` the closed
/// fundamental chamber. Elements whose LP is ill-conditioned are counted
/// separately; the whole call fails if they exceed
/// [`MAX_ILL_CONDITIONED_FRACTION`] of the group.
pub fn chamber_intersect_count(
    spec: &ArrangementSpec,
    subspace: &SubspaceBasis,
    eps: f64,
    cap: u64,
) -> Result<IntersectCount> {
    let n = spec.ambient_dim();
    if subspace.ambient != n || subspace.vectors.iter().any(|q| q.len() != n) {
        return Err(Error::InvalidArgument(format!("subspace must live in R^{n}")));
    }
    let order = checked_group_order(spec, cap)?;
    let outcomes: Vec<Result<Option<bool>>> = (0..order)
        .into_par_iter()
        .map(|i| {
            let g = group_element(spec, i);
            let moved: Vec<Vec<f64>> = subspace.vectors.iter().map(|q| g.apply_inverse(spec, q)).collect();
            match meets_fundamental_chamber(spec, &moved, eps) {
                Ok(hit) => Ok(Some(hit)),
                Err(Error::IllConditioned { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut count = IntersectCount { intersecting: 0, ill_conditioned: 0, group_order: order };
    for o in outcomes {
        match o? {
            Some(true) => count.intersecting += 1,
            Some(false) => {}
            None => count.ill_conditioned += 1,
        }
    }
    if count.ill_conditioned as f64 > MAX_ILL_CONDITIONED_FRACTION * order as f64 {
        return Err(Error::IllConditioned { iterations: count.ill_conditioned as usize });
    }
    Ok(count)
}

/// Orthonormal basis of `Ker(A) ∩ L`, where `L` requires each A-block's
/// coordinates to sum to zero. `a` holds the `d` rows of the `d x n`
/// increment matrix. The result must have dimension `n - d - r`; anything
/// else is reported as a degenerate sample.
pub fn kernel_intersection_basis(a: &[Vec<f64>], spec: &ArrangementSpec) -> Result<SubspaceBasis> {
    let n = spec.ambient_dim();
    let r = spec.a_blocks.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument(format!("increment matrix rows must have length {n}")));
    }
    if a.len() + r >= n {
        return Err(Error::InvalidArgument(format!("d + r = {} leaves no room in R^{n}", a.len() + r)));
    }
    let mut rows: Vec<Vec<f64>> = a.to_vec();
    for (off, size, type_b) in spec.blocks() {
        if !type_b {
            let mut ones = vec![0.0; n];
            ones[off..off + size].iter_mut().for_each(|x| *x = 1.0);
            rows.push(ones);
        }
    }
    let vectors = orthocomplement_basis(&rows, n)?;
    if vectors.len() != n - a.len() - r {
        return Err(Error::Degenerate(format!(
            "kernel has dimension {} instead of {}",
            vectors.len(),
            n - a.len() - r
        )));
    }
    Ok(SubspaceBasis { ambient: n, vectors })
}

/// The `d x n` matrix whose columns are the increments of the sampled paths,
/// walks first then bridges, read off as differences of consecutive points.
pub fn increment_matrix(paths: &[PointSet]) -> Result<Vec<Vec<f64>>> {
    let d = paths
        .first()
        .map(PointSet::dim)
        .ok_or_else(|| Error::InvalidArgument("at least one path is required".into()))?;
    let mut rows = vec![Vec::new(); d];
    for p in paths {
        if p.dim() != d {
            return Err(Error::InvalidArgument("paths must share a dimension".into()));
        }
        for i in 1..p.len() {
            for (j, row) in rows.iter_mut().enumerate() {
                row.push(p.point(i)[j] - p.point(i - 1)[j]);
            }
        }
    }
    Ok(rows)
}

/// Predicted count divided by the group order.
pub fn predicted_fraction(spec: &ArrangementSpec, codim: usize) -> Result<num_rational::BigRational> {
    let chi = char_poly_product(spec);
    let count = predicted_intersect_count(&chi, spec.ambient_dim(), codim)?;
    Ok(num_rational::BigRational::new(count, spec.group_order()))
}

/// Residual `max |<v, q>|` of a unit vector against the rows it should be
/// orthogonal to; for diagnostics.
pub fn max_residual(rows: &[Vec<f64>], basis: &SubspaceBasis) -> f64 {
    basis.vectors.iter().flat_map(|q| rows.iter().map(move |r| dot(r, q).abs())).fold(0.0, f64::max)
}
