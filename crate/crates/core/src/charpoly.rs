//! Exact characteristic polynomial of the normalized Laplacian via the
//! matching expansion, and the exact rational 1-eigenspace.
//!
//! On a tree the characteristic polynomial collapses to a sum over
//! matchings:
//!
//! ```text
//! P(x) = Σ_M (-1)^{|E_M|} (x-1)^{n-|V_M|} Π_{v in M} 1/deg(v)
//! ```
//!
//! so with `y = x - 1` it is `Σ_k (-1)^k c_k y^{n-2k}` where
//! `c_k = Σ_{k-edge matchings M} Π_{v in V_M} 1/deg(v)`. Everything in this
//! module is arbitrary-precision rational; floating point appears only in
//! [`MatchingPolynomial::eval_at`].

use num::traits::ToPrimitive;
use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::tree::{root_at_zero, Tree, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("the given set is not a vertex cover: edge ({0}, {1}) is uncovered")]
    NotACover(usize, usize),
    #[error("kernel dimension {actual} does not match n - 2|C| = {expected}; this would falsify the multiplicity theorem")]
    DimensionMismatch { expected: i64, actual: usize },
}

/// The matching expansion of `det(L - xI)` in the variable `y = x - 1`,
/// with exact rational coefficients `c_k` indexed by matching size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingPolynomial {
    n: usize,
    /// `coeffs[k]` is `c_k`; trailing zeros trimmed, so the last entry is
    /// the maximum matching size coefficient (and `coeffs[0] == 1`).
    coeffs: Vec<BigRational>,
}

impl MatchingPolynomial {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `c_k`, zero beyond the maximum matching size.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Largest `k` with `c_k != 0`, which equals the maximum matching size.
    pub fn max_matching_size(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Multiplicity of the eigenvalue 1: the number of vertices left
    /// unmatched by a maximum matching, `n - 2|M|`.
    pub fn multiplicity_of_one(&self) -> usize {
        self.n - 2 * self.max_matching_size()
    }

    /// Evaluates `P(x)` in floating point from the exact coefficients.
    pub fn eval_at(&self, x: f64) -> f64 {
        let y = x - 1.0;
        let mut sign = 1.0;
        let mut total = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let c = c.to_f64().expect("coefficient fits in f64");
            total += sign * c * y.powi((self.n - 2 * k) as i32);
            sign = -sign;
        }
        total
    }

    /// `Σ_k |c_k|` as a float, for scaling evaluation tolerances.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.abs().to_f64().expect("coefficient fits in f64"))
            .sum()
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_into(acc: &mut Vec<BigRational>, other: &[BigRational]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), BigRational::zero());
    }
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// Computes the matching-expansion coefficients by a rooted DP over
/// (subtree with root unmatched / root matched to a child) states.
pub fn matching_polynomial(t: &Tree) -> MatchingPolynomial {
    let n = t.n();
    let rooted = root_at_zero(t);
    let one = || vec![BigRational::one()];
    // Per vertex: generating polynomials in the matching size.
    let mut unmatched: Vec<Vec<BigRational>> = vec![Vec::new(); n];
    let mut matched: Vec<Vec<BigRational>> = vec![Vec::new(); n];

    for &v in rooted.order.iter().rev() {
        let children = rooted.children(t, v);
        if children.is_empty() {
            unmatched[v] = one();
            matched[v] = vec![BigRational::zero()];
            continue;
        }
        // sums[i] = unmatched + matched for child i; prefix/suffix products
        // give the product over all other children in O(k) polynomial mults.
        let sums: Vec<Vec<BigRational>> = children
            .iter()
            .map(|&c| {
                let mut s = unmatched[c].clone();
                poly_add_into(&mut s, &matched[c]);
                s
            })
            .collect();
        let k = children.len();
        let mut prefix = vec![one()];
        for s in &sums {
            prefix.push(poly_mul(prefix.last().unwrap(), s));
        }
        let mut suffix = vec![one(); k + 1];
        for i in (0..k).rev() {
            suffix[i] = poly_mul(&suffix[i + 1], &sums[i]);
        }
        unmatched[v] = prefix[k].clone();

        let mut acc = vec![BigRational::zero()];
        for (i, &c) in children.iter().enumerate() {
            let weight = BigRational::new(
                BigInt::one(),
                BigInt::from(t.degree(v) * t.degree(c)),
            );
            // One more matched edge: shift the child's unmatched polynomial.
            let mut term = vec![BigRational::zero()];
            term.extend(unmatched[c].iter().map(|x| x * &weight));
            let term = poly_mul(&term, &poly_mul(&prefix[i], &suffix[i + 1]));
            poly_add_into(&mut acc, &term);
        }
        matched[v] = acc;
    }

    let mut coeffs = unmatched[0].clone();
    poly_add_into(&mut coeffs, &matched[0]);
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
        coeffs.pop();
    }
    MatchingPolynomial { n, coeffs }
}

/// An exact rational basis of the 1-eigenspace of the normalized Laplacian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalKernel {
    pub dimension: usize,
    /// Full-length vectors over all vertices; zero on the cover.
    pub basis: Vec<Vec<BigRational>>,
}

/// Solves the 1-eigenvector system exactly: set `f = 0` on the cover and
/// require `Σ_{v ~ c} f(v) = 0` at every cover vertex. The solution space,
/// zero-extended, is the full 1-eigenspace, of dimension `n - 2|C|`.
///
/// `cover` must be a minimum vertex cover; a dimension other than
/// `n - 2|C|` is reported as an error since it would contradict the
/// multiplicity theorem.
pub fn one_eigenspace_exact(t: &Tree, cover: &VertexSet) -> Result<RationalKernel, KernelError> {
    if let Some(&(u, v)) = t
        .edges()
        .iter()
        .find(|&&(u, v)| !cover.contains(u) && !cover.contains(v))
    {
        return Err(KernelError::NotACover(u, v));
    }
    let n = t.n();
    let free: Vec<usize> = (0..n).filter(|&v| !cover.contains(v)).collect();
    let col_of = |v: usize| free.binary_search(&v).expect("free vertex");

    let mut rows: Vec<Vec<BigRational>> = cover
        .iter()
        .map(|c| {
            let mut row = vec![BigRational::zero(); free.len()];
            for &v in t.neighbors(c) {
                if !cover.contains(v) {
                    row[col_of(v)] = BigRational::one();
                }
            }
            row
        })
        .collect();

    let null_basis = nullspace(&mut rows, free.len());
    let expected = n as i64 - 2 * cover.len() as i64;
    if null_basis.len() as i64 != expected {
        return Err(KernelError::DimensionMismatch {
            expected,
            actual: null_basis.len(),
        });
    }

    let basis = null_basis
        .into_iter()
        .map(|compact| {
            let mut full = vec![BigRational::zero(); n];
            for (slot, &v) in free.iter().enumerate() {
                full[v] = compact[slot].clone();
            }
            full
        })
        .collect();
    Ok(RationalKernel {
        dimension: expected as usize,
        basis,
    })
}

/// Reduced row echelon form nullspace basis: one vector per free column,
/// with a 1 in the free column and the negated pivot-row entries above.
#[allow(clippy::needless_range_loop)] // two rows are indexed at once
fn nullspace(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x /= &inv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..cols {
                    let delta = &factor * &rows[rank][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    (0..cols)
        .filter(|&c| pivot_of_col[c].is_none())
        .map(|free_col| {
            let mut v = vec![BigRational::zero(); cols];
            v[free_col] = BigRational::one();
            for col in 0..cols {
                if let Some(r) = pivot_of_col[col] {
                    v[col] = -rows[r][free_col].clone();
                }
            }
            v
        })
        .collect()
}

/// Applies the normalized Laplacian exactly:
/// `(Lf)(u) = f(u) - (1/deg u) Σ_{v ~ u} f(v)`.
pub fn apply_laplacian_exact(t: &Tree, f: &[BigRational]) -> Vec<BigRational> {
    (0..t.n())
        .map(|u| {
            let neighbor_sum: BigRational = t.neighbors(u).iter().map(|&v| f[v].clone()).sum();
            &f[u] - neighbor_sum / BigRational::from_integer(BigInt::from(t.degree(u)))
        })
        .collect()
}

/// Brute-force reference: enumerate every edge subset and keep the
/// pairwise-disjoint ones. Exponential in the edge count.
pub mod oracle {
    use super::*;

    pub fn matching_polynomial_bruteforce(t: &Tree) -> MatchingPolynomial {
        let edges = t.edges();
        let m = edges.len();
        assert!(m <= 20, "oracle is exponential; {m} edges too many");
        let mut coeffs = vec![BigRational::zero(); m / 2 + 2];
        for mask in 0u32..(1 << m) {
            let mut used = 0u64;
            let mut ok = true;
            let mut weight = BigRational::one();
            let mut size = 0usize;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 0 {
                    continue;
                }
                let bits = 1u64 << u | 1u64 << v;
                if used & bits != 0 {
                    ok = false;
                    break;
                }
                used |= bits;
                size += 1;
                weight *= BigRational::new(BigInt::one(), BigInt::from(t.degree(u) * t.degree(v)));
            }
            if ok {
                coeffs[size] += weight;
            }
        }
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        MatchingPolynomial { n: t.n(), coeffs }
    }
}
