//! Exact combinatorial numbers and the coefficient polynomials behind the
//! face-probability and absorption formulas.
//!
//! Stirling tables are memoized behind a read-mostly lock and grown on
//! demand; concurrent callers always observe the same values as sequential
//! ones. Any out-of-range Stirling query is zero.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Rows `0..len` of a triangular recurrence `T(n, m)`, `0 <= m <= n`, kept
/// only for columns `m < width`. Column `m` depends on columns `<= m` of the
/// previous row, so the truncation is exact; the width grows when a wider
/// column is requested.
struct Triangle {
    rows: Vec<Vec<BigInt>>,
    width: usize,
    multiplier: fn(usize, usize) -> usize,
}

impl Triangle {
    /// `T(n, m) = T(n-1, m-1) + multiplier(n, m) T(n-1, m)`.
    fn new(multiplier: fn(usize, usize) -> usize) -> Self {
        Triangle { rows: vec![vec![BigInt::one()]], width: 16, multiplier }
    }

    fn next_row(&self, prev: &[BigInt], n: usize) -> Vec<BigInt> {
        let top = n.min(self.width - 1);
        let mut row = vec![BigInt::zero(); top + 1];
        for m in 1..=top {
            row[m] = prev[m - 1].clone();
            if m < n {
                row[m] += &prev[m] * (self.multiplier)(n, m);
            }
        }
        row
    }

    fn get(&self, n: usize, m: usize) -> Option<BigInt> {
        (m < self.width).then(|| self.rows.get(n).map(|r| r[m].clone())).flatten()
    }

    fn grow_to(&mut self, n: usize, m: usize) {
        if m >= self.width {
            self.width = (2 * self.width).max(m + 1);
            let len = self.rows.len();
            self.rows.truncate(1);
            return self.grow_to(n.max(len - 1), m);
        }
        while self.rows.len() <= n {
            let k = self.rows.len();
            let row = self.next_row(&self.rows[k - 1], k);
            self.rows.push(row);
        }
    }
}

fn lookup(table: &OnceLock<RwLock<Triangle>>, init: fn() -> Triangle, n: usize, m: i64) -> BigInt {
    let Ok(m) = usize::try_from(m) else {
        return BigInt::zero();
    };
    if m > n {
        return BigInt::zero();
    }
    let lock = table.get_or_init(|| RwLock::new(init()));
    if let Some(v) = lock.read().expect("stirling table poisoned").get(n, m) {
        return v;
    }
    let mut t = lock.write().expect("stirling table poisoned");
    t.grow_to(n, m);
    t.get(n, m).expect("table was grown to cover the query")
}

// c(n, m) = c(n-1, m-1) + (n-1) c(n-1, m)
fn first_kind_multiplier(n: usize, _m: usize) -> usize {
    n - 1
}

// S(n, m) = S(n-1, m-1) + m S(n-1, m)
fn second_kind_multiplier(_n: usize, m: usize) -> usize {
    m
}

static FIRST_KIND: OnceLock<RwLock<Triangle>> = OnceLock::new();
static SECOND_KIND: OnceLock<RwLock<Triangle>> = OnceLock::new();

/// Signless Stirling number of the first kind: permutations of `n` letters
/// with exactly `m` cycles.
pub fn stirling_first(n: usize, m: i64) -> BigInt {
    lookup(&FIRST_KIND, || Triangle::new(first_kind_multiplier), n, m)
}

/// Stirling number of the second kind: partitions of an `n`-set into `m`
/// nonempty blocks.
pub fn stirling_second(n: usize, m: i64) -> BigInt {
    lookup(&SECOND_KIND, || Triangle::new(second_kind_multiplier), n, m)
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `t (t+1) ... (t+n-1)`; coefficient of `t^j` is `stirling_first(n, j)`.
pub fn rising_factorial_poly(n: usize) -> IntPolynomial {
    IntPolynomial::product_of_linear(0..n as i64)
}

/// `(t+1)(t+3) ... (t+2n-1)`, the generating polynomial of the B-analogues
/// `B(n, k)`.
pub fn b_poly(n: usize) -> IntPolynomial {
    IntPolynomial::product_of_linear((0..n as i64).map(|a| 2 * a + 1))
}

/// `(t+1)(t+2) ... (t+len-1)`: the factor contributed by a stretch of `len`
/// steps between two consecutive selected indices. Equals
/// `rising_factorial_poly(len) / t`; constant 1 for `len <= 1`.
pub fn gap_poly(len: usize) -> IntPolynomial {
    IntPolynomial::product_of_linear(1..len as i64)
}

fn check_strictly_increasing(indices: &[usize]) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::indices(indices, "at least one index is required"));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::indices(indices, "indices must be strictly increasing"));
    }
    Ok(())
}

/// Validates `0 <= i_1 < ... < i_{k+1} <= n` for a walk of length `n`.
pub fn check_walk_indices(n: usize, indices: &[usize]) -> Result<()> {
    check_strictly_increasing(indices)?;
    if *indices.last().unwrap() > n {
        return Err(Error::indices(indices, format!("indices must not exceed n = {n}")));
    }
    Ok(())
}

/// Validates `0 <= i_1 < ... < i_{k+1} < n` for a bridge of length `n`.
pub fn check_bridge_indices(n: usize, indices: &[usize]) -> Result<()> {
    check_strictly_increasing(indices)?;
    if *indices.last().unwrap() >= n {
        return Err(Error::indices(indices, format!("indices must be below n = {n}")));
    }
    Ok(())
}

/// Face polynomial of a symmetric walk:
/// `b_poly(i_1) * b_poly(n - i_{k+1}) * prod_l gap_poly(i_{l+1} - i_l)`.
pub fn walk_face_poly(n: usize, indices: &[usize]) -> Result<IntPolynomial> {
    check_walk_indices(n, indices)?;
    let first = indices[0];
    let last = *indices.last().unwrap();
    let mut p = &b_poly(first) * &b_poly(n - last);
    for w in indices.windows(2) {
        p = &p * &gap_poly(w[1] - w[0]);
    }
    Ok(p)
}

/// Face polynomial of a bridge: `prod_l gap_poly(i_{l+1} - i_l)` with the
/// cyclic closing gap `n + i_1 - i_{k+1}`.
pub fn bridge_face_poly(n: usize, indices: &[usize]) -> Result<IntPolynomial> {
    check_bridge_indices(n, indices)?;
    Ok(cyclic_gaps(n, indices).map(gap_poly).fold(IntPolynomial::one(), |acc, g| &acc * &g))
}

/// Consecutive gaps of a sorted index tuple on a cycle of length `n`.
pub(crate) fn cyclic_gaps(n: usize, indices: &[usize]) -> impl Iterator<Item = usize> + '_ {
    let closing = n + indices[0] - indices[indices.len() - 1];
    indices.windows(2).map(|w| w[1] - w[0]).chain(std::iter::once(closing))
}

/// Polynomial whose coefficients drive the joint absorption probability:
/// one `b_poly(n_i)` per walk and one `gap_poly(m_j)` per bridge.
pub fn joint_absorption_poly(walk_lengths: &[usize], bridge_lengths: &[usize]) -> Result<IntPolynomial> {
    check_joint_lengths(walk_lengths, bridge_lengths)?;
    let walks = walk_lengths.iter().map(|&n| b_poly(n));
    let bridges = bridge_lengths.iter().map(|&m| gap_poly(m));
    Ok(walks.chain(bridges).fold(IntPolynomial::one(), |acc, f| &acc * &f))
}

pub(crate) fn check_joint_lengths(walk_lengths: &[usize], bridge_lengths: &[usize]) -> Result<()> {
    if walk_lengths.is_empty() && bridge_lengths.is_empty() {
        return Err(Error::InvalidArgument("at least one walk or bridge is required".into()));
    }
    if walk_lengths.contains(&0) {
        return Err(Error::InvalidArgument("walk lengths must be at least 1".into()));
    }
    if let Some(m) = bridge_lengths.iter().find(|&&m| m < 2) {
        return Err(Error::InvalidArgument(format!("bridge lengths must be at least 2, got {m}")));
    }
    Ok(())
}

/// `sum_{k=1}^{N} (k-1)! S(N, k)`.
pub fn hat_c(big_n: usize) -> BigInt {
    (1..=big_n).map(|k| factorial(k - 1) * stirling_second(big_n, k as i64)).sum()
}

/// Number of weak orderings of an `N`-set: `sum_k k! S(N, k)`.
pub fn ordered_bell(big_n: usize) -> BigInt {
    (0..=big_n).map(|k| factorial(k) * stirling_second(big_n, k as i64)).sum()
}

/// Lexicographic `k`-subsets of `0..n`, each as a sorted index vector.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    let current = (k <= n).then(|| (0..k).collect());
    Combinations { n, current }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost position that can still advance
        if let Some(pos) = (0..k).rev().find(|&p| next[p] < self.n - k + p) {
            next[pos] += 1;
            for q in pos + 1..k {
                next[q] = next[q - 1] + 1;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// Permutations of `0..n` in lexicographic order (test oracle).
    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn cycle_count(p: &[usize]) -> usize {
        let mut seen = vec![false; p.len()];
        let mut cycles = 0;
        for s in 0..p.len() {
            if !seen[s] {
                cycles += 1;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = p[x];
                }
            }
        }
        cycles
    }

    /// Restricted-growth strings enumerate set partitions (test oracle).
    fn partitions_by_blocks(n: usize) -> Vec<usize> {
        let mut counts = vec![0usize; n + 1];
        fn rec(pos: usize, n: usize, max_block: usize, counts: &mut [usize]) {
            if pos == n {
                counts[max_block] += 1;
                return;
            }
            for b in 0..=max_block {
                rec(pos + 1, n, max_block.max(b + 1), counts);
            }
        }
        if n == 0 {
            counts[0] = 1;
        } else {
            rec(1, n, 1, &mut counts);
        }
        counts
    }

    #[test]
    fn first_kind_matches_cycle_enumeration() {
        for n in 0..=7 {
            let mut by_cycles = vec![0i64; n + 1];
            for p in all_permutations(n) {
                by_cycles[cycle_count(&p)] += 1;
            }
            for (m, &count) in by_cycles.iter().enumerate() {
                assert_eq!(stirling_first(n, m as i64), big(count), "c({n},{m})");
            }
        }
        assert_eq!(stirling_first(4, 2), big(11));
    }

    #[test]
    fn second_kind_matches_partition_enumeration() {
        for n in 0..=8 {
            let counts = partitions_by_blocks(n);
            for (m, &count) in counts.iter().enumerate().take(n + 1) {
                assert_eq!(stirling_second(n, m as i64), big(count as i64), "S({n},{m})");
            }
        }
        assert_eq!(stirling_second(4, 2), big(7));
    }

    #[test]
    fn stirling_edge_values() {
        for n in 0..=12 {
            assert_eq!(stirling_first(n, n as i64), big(1));
            assert_eq!(stirling_second(n, n as i64), big(1));
            assert_eq!(stirling_first(n + 1, 1), factorial(n));
            assert_eq!(stirling_first(n, -1), big(0));
            assert_eq!(stirling_first(n, n as i64 + 1), big(0));
            assert_eq!(stirling_second(n, n as i64 + 3), big(0));
        }
        for m in 1..=12 {
            assert_eq!(stirling_second(m, 1), big(1));
        }
    }

    #[test]
    fn long_rows_stay_narrow_until_asked() {
        assert_eq!(stirling_first(1500, 1), factorial(1499));
        assert_eq!(stirling_first(300, 299), binomial(300, 2));
        assert_eq!(stirling_second(1200, 2), (BigInt::one() << 1199usize) - 1);
        assert_eq!(stirling_second(40, 40), BigInt::one());
    }

    #[test]
    fn first_kind_row_sums_are_factorials() {
        for n in 0..=20 {
            let s: BigInt = (0..=n as i64).map(|m| stirling_first(n, m)).sum();
            assert_eq!(s, factorial(n));
        }
    }

    #[test]
    fn rising_factorial_coefficients() {
        assert_eq!(rising_factorial_poly(3), IntPolynomial::from_i64s(&[0, 2, 3, 1]));
        assert_eq!(rising_factorial_poly(1), IntPolynomial::from_i64s(&[0, 1]));
        assert_eq!(rising_factorial_poly(0), IntPolynomial::one());
        for n in 0..=15 {
            let p = rising_factorial_poly(n);
            for j in 0..=n as i64 {
                assert_eq!(p.coeff(j), stirling_first(n, j));
            }
        }
    }

    #[test]
    fn b_poly_values() {
        assert_eq!(b_poly(2), IntPolynomial::from_i64s(&[3, 4, 1]));
        assert_eq!(b_poly(1), IntPolynomial::from_i64s(&[1, 1]));
        assert_eq!(b_poly(0), IntPolynomial::one());
        for n in 0..=12 {
            // 2 * 4 * ... * 2n
            let evens = (1..=n).fold(BigInt::one(), |acc, k| acc * (2 * k));
            assert_eq!(b_poly(n).eval_int(&big(1)), evens);
        }
    }

    #[test]
    fn walk_face_poly_examples() {
        assert_eq!(walk_face_poly(2, &[0, 2]).unwrap(), IntPolynomial::from_i64s(&[1, 1]));
        assert_eq!(walk_face_poly(1, &[0, 1]).unwrap(), IntPolynomial::one());
        assert_eq!(walk_face_poly(2, &[1]).unwrap(), IntPolynomial::from_i64s(&[1, 2, 1]));
    }

    #[test]
    fn walk_face_poly_rejects_bad_indices() {
        assert!(walk_face_poly(3, &[2, 1]).is_err());
        assert!(walk_face_poly(3, &[1, 1]).is_err());
        assert!(walk_face_poly(3, &[0, 4]).is_err());
        assert!(walk_face_poly(3, &[]).is_err());
    }

    #[test]
    fn bridge_face_poly_examples() {
        assert_eq!(bridge_face_poly(3, &[0]).unwrap(), IntPolynomial::from_i64s(&[2, 3, 1]));
        assert_eq!(bridge_face_poly(4, &[0, 2]).unwrap(), IntPolynomial::from_i64s(&[1, 2, 1]));
        assert_eq!(bridge_face_poly(2, &[0, 1]).unwrap(), IntPolynomial::one());
        assert!(bridge_face_poly(3, &[0, 3]).is_err());
        assert!(bridge_face_poly(3, &[2, 0]).is_err());
    }

    /// Every nonempty strictly increasing tuple drawn from `0..upper`.
    fn index_tuples(upper: usize, f: &mut impl FnMut(&[usize])) {
        for mask in 1u32..(1u32 << upper) {
            let tuple: Vec<usize> = (0..upper).filter(|i| mask & (1 << i) != 0).collect();
            f(&tuple);
        }
    }

    #[test]
    fn walk_face_poly_at_one_is_the_denominator() {
        for n in 0..=10 {
            index_tuples(n + 1, &mut |idx| {
                let first = idx[0];
                let last = *idx.last().unwrap();
                let mut expect = BigInt::one() << (first + n - last);
                expect *= factorial(first) * factorial(n - last);
                for w in idx.windows(2) {
                    expect *= factorial(w[1] - w[0]);
                }
                assert_eq!(walk_face_poly(n, idx).unwrap().eval_int(&big(1)), expect);
            });
        }
    }

    #[test]
    fn bridge_face_poly_at_one_is_the_denominator() {
        for n in 1..=10 {
            index_tuples(n, &mut |idx| {
                let expect = cyclic_gaps(n, idx).fold(BigInt::one(), |acc, g| acc * factorial(g));
                assert_eq!(bridge_face_poly(n, idx).unwrap().eval_int(&big(1)), expect);
            });
        }
    }

    #[test]
    fn joint_absorption_poly_examples() {
        assert_eq!(joint_absorption_poly(&[2], &[]).unwrap(), IntPolynomial::from_i64s(&[3, 4, 1]));
        assert_eq!(joint_absorption_poly(&[], &[3]).unwrap(), IntPolynomial::from_i64s(&[2, 3, 1]));
        assert!(joint_absorption_poly(&[], &[]).is_err());
        assert!(joint_absorption_poly(&[2], &[1]).is_err());
        assert!(joint_absorption_poly(&[0], &[]).is_err());
    }

    #[test]
    fn joint_absorption_poly_at_plus_and_minus_one() {
        let specs: &[(&[usize], &[usize])] =
            &[(&[1], &[]), (&[2, 3], &[]), (&[1], &[2]), (&[], &[2, 4]), (&[2, 1], &[3, 2])];
        for (walks, bridges) in specs {
            let p = joint_absorption_poly(walks, bridges).unwrap();
            let order = walks
                .iter()
                .map(|&n| (BigInt::one() << n) * factorial(n))
                .chain(bridges.iter().map(|&m| factorial(m)))
                .fold(BigInt::one(), |a, b| a * b);
            assert_eq!(p.eval_int(&big(1)), order);
            assert_eq!(p.eval_int(&big(-1)), big(0));
        }
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(2, 3).count(), 0);
        for n in 0..=9 {
            for k in 0..=n {
                assert_eq!(BigInt::from(combinations(n, k).count()), binomial(n, k));
            }
        }
    }

    #[test]
    fn hat_c_and_ordered_bell() {
        assert_eq!(hat_c(1), big(1));
        assert_eq!(hat_c(2), big(2));
        assert_eq!(hat_c(3), big(6));
        assert_eq!(ordered_bell(0), big(1));
        assert_eq!(ordered_bell(2), big(3));
        assert_eq!(ordered_bell(3), big(13));
        assert_eq!(ordered_bell(4), big(75));
    }

    #[test]
    fn concurrent_lookups_match_sequential() {
        let expected: Vec<BigInt> = (0..40).map(|n| stirling_first(n, (n / 2) as i64)).collect();
        let handles: Vec<_> = (0..8)
            .map(|t| {
                std::thread::spawn(move || {
                    (0..40)
                        .rev()
                        .map(|n| (n, stirling_first(n + t, ((n + t) / 2) as i64)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            for (n, v) in h.join().unwrap() {
                if t == 0 {
                    assert_eq!(v, expected[n]);
                }
            }
        }
    }
}
