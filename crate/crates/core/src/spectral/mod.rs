//! Normalized Laplacian and Dirichlet normalized Laplacian construction,
//! the symmetric eigensolver, eigenvalue clustering, spectral separation,
//! and the two upper bounds on the separation (volume ratio and quotient
//! matrix).
//!
//! All numeric spectral work happens on the symmetrized operator
//! `S = D^{1/2} L D^{-1/2}`; eigenvectors of `L` are recovered by `D^{-1/2}`
//! scaling and renormalization.

mod eigen;

pub use eigen::general_eigenvalues;

use ndarray::{Array1, Array2, ArrayView1};
use serde::Serialize;
use thiserror::Error;

use crate::cover::{enumerate_min_covers, CoverReport, DEFAULT_COVER_CAP};
use crate::tree::{Tree, VertexSet};

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not symmetric: max |S - S^T| = {max_asym}")]
    NotSymmetric { max_asym: f64 },
    #[error("eigensolver did not converge within {budget} sweeps (off-diagonal {off_max})")]
    NoConvergence { budget: usize, off_max: f64 },
    #[error("domain is empty")]
    EmptyDomain,
    #[error("vertex id {id} out of range for {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },
    #[error("the given set is not a vertex cover: edge ({0}, {1}) is uncovered")]
    NotACover(usize, usize),
}

/// Numeric knobs, each surfaced as a CLI flag. The defaults are the values
/// every report and test in this crate is pinned to.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Jacobi off-diagonal convergence threshold.
    pub jacobi_tol: f64,
    /// Jacobi sweep budget.
    pub jacobi_max_sweeps: usize,
    /// Maximum asymmetry accepted by the symmetric eigensolver.
    pub symmetry_tol: f64,
    /// Eigenpair residual bound, relative to `max(1, |lambda|)`.
    pub residual_tol: f64,
    /// Width of an eigenvalue cluster around a target value.
    pub cluster_tol: f64,
    /// Sign-graph zero threshold, relative to the sup norm of the vector.
    pub zero_tol_rel: f64,
    /// Absolute bound on |f| over the cover for numeric 1-eigenvectors.
    pub vanish_tol: f64,
    /// Slack allowed when checking the separation bounds.
    pub bound_slack: f64,
    /// Bound-tightness detection threshold.
    pub tight_tol: f64,
    /// Agreement required between the quotient spectrum and its closed form.
    pub quotient_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            jacobi_tol: 1e-12,
            jacobi_max_sweeps: 64,
            symmetry_tol: 1e-12,
            residual_tol: 1e-9,
            cluster_tol: 1e-8,
            zero_tol_rel: 1e-7,
            vanish_tol: 1e-7,
            bound_slack: 1e-9,
            tight_tol: 1e-9,
            quotient_tol: 1e-8,
        }
    }
}

/// Dense normalized Laplacian: `L(u,u) = 1`, `L(u,v) = -1/deg(u)` for
/// `u ~ v`, zero elsewhere. Rows sum to zero up to one rounding unit.
#[derive(Debug, Clone)]
pub struct NormalizedLaplacian {
    entries: Array2<f64>,
    degrees: Vec<usize>,
}

/// Builds the normalized Laplacian of a tree.
pub fn build_laplacian(t: &Tree) -> NormalizedLaplacian {
    let n = t.n();
    let mut entries = Array2::<f64>::eye(n);
    for u in 0..n {
        let inv_deg = 1.0 / t.degree(u) as f64;
        for &v in t.neighbors(u) {
            entries[[u, v]] = -inv_deg;
        }
    }
    NormalizedLaplacian {
        entries,
        degrees: (0..n).map(|v| t.degree(v)).collect(),
    }
}

impl NormalizedLaplacian {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `S = D^{1/2} L D^{-1/2}`: symmetric, same spectrum, with
    /// `S(u,v) = -1/sqrt(deg u * deg v)` off the diagonal.
    pub fn symmetrize(&self) -> Array2<f64> {
        let n = self.n();
        let sqrt_deg: Vec<f64> = self.degrees.iter().map(|&d| (d as f64).sqrt()).collect();
        let mut s = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                s[[i, j]] = self.entries[[i, j]] * sqrt_deg[i] / sqrt_deg[j];
            }
        }
        // Exact symmetry by construction of the formula; enforce it bitwise
        // so downstream rotations see S(i,j) == S(j,i).
        for i in 0..n {
            for j in i + 1..n {
                let v = -1.0 / (sqrt_deg[i] * sqrt_deg[j]);
                if s[[i, j]] != 0.0 {
                    s[[i, j]] = v;
                    s[[j, i]] = v;
                }
            }
        }
        s
    }

    /// Largest absolute row sum, which is zero in exact arithmetic.
    pub fn max_abs_row_sum(&self) -> f64 {
        (0..self.n())
            .map(|i| self.entries.row(i).sum().abs())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a normalized (or Dirichlet normalized) Laplacian:
/// ascending eigenvalues, the orthonormal eigenvectors of the symmetrized
/// operator, the back-mapped eigenvectors of the operator itself
/// (unit length), and per-pair residuals.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    sym_vectors: Array2<f64>,
    vectors: Array2<f64>,
    pub residuals: Vec<f64>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvector of the (non-symmetric) operator for eigenvalue `i`.
    pub fn vector(&self, i: usize) -> ArrayView1<'_, f64> {
        self.vectors.column(i)
    }

    /// Eigenvector of the symmetrized operator for eigenvalue `i`.
    pub fn sym_vector(&self, i: usize) -> ArrayView1<'_, f64> {
        self.sym_vectors.column(i)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Max mismatch between the sorted spectrum and its reflection about 1;
    /// zero for exact bipartite symmetry.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| (self.eigenvalues[i] - (2.0 - self.eigenvalues[n - 1 - i])).abs())
            .fold(0.0, f64::max)
    }
}

fn solve_operator(
    entries: &Array2<f64>,
    sym: &Array2<f64>,
    degrees: &[usize],
    tol: &Tolerances,
) -> Result<Spectrum, SpectralError> {
    let max_asym = max_asymmetry(sym);
    if max_asym > tol.symmetry_tol {
        return Err(SpectralError::NotSymmetric { max_asym });
    }
    let (eigenvalues, sym_vectors) = eigen::jacobi_eigh(sym, tol.jacobi_tol, tol.jacobi_max_sweeps)?;
    let n = eigenvalues.len();
    let mut vectors = Array2::<f64>::zeros((n, n));
    for col in 0..n {
        let mut v = Array1::<f64>::zeros(n);
        for i in 0..n {
            v[i] = sym_vectors[[i, col]] / (degrees[i] as f64).sqrt();
        }
        let norm = v.dot(&v).sqrt();
        v.mapv_inplace(|x| x / norm);
        vectors.column_mut(col).assign(&v);
    }
    let residuals = (0..n)
        .map(|col| {
            let v = vectors.column(col);
            let lv = entries.dot(&v);
            (0..n)
                .map(|i| (lv[i] - eigenvalues[col] * v[i]).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(Spectrum {
        eigenvalues,
        sym_vectors,
        vectors,
        residuals,
    })
}

/// Full eigendecomposition of the normalized Laplacian via cyclic Jacobi on
/// the symmetrized operator.
pub fn eigensolve(l: &NormalizedLaplacian, tol: &Tolerances) -> Result<Spectrum, SpectralError> {
    solve_operator(&l.entries, &l.symmetrize(), &l.degrees, tol)
}

/// Eigenvalues and orthonormal eigenvectors of an arbitrary symmetric
/// matrix (checked against `symmetry_tol`), ascending.
pub fn eigensolve_sym(
    s: &Array2<f64>,
    tol: &Tolerances,
) -> Result<(Vec<f64>, Array2<f64>), SpectralError> {
    let max_asym = max_asymmetry(s);
    if max_asym > tol.symmetry_tol {
        return Err(SpectralError::NotSymmetric { max_asym });
    }
    eigen::jacobi_eigh(s, tol.jacobi_tol, tol.jacobi_max_sweeps)
}

fn max_asymmetry(s: &Array2<f64>) -> f64 {
    let n = s.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((s[[i, j]] - s[[j, i]]).abs());
        }
    }
    worst
}

/// A run of eigenvalues within `cluster_tol` of a target value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenCluster {
    pub multiplicity: usize,
    /// Index range `start..end` into the ascending eigenvalue list.
    pub start: usize,
    pub end: usize,
    /// Set when some eigenvalue falls between `cluster_tol` and
    /// `10 * cluster_tol` of the target, so the cluster boundary is fragile.
    pub boundary_sensitive: bool,
}

impl EigenCluster {
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

/// Collects the eigenvalues within `cluster_tol` of `target`. A zero
/// multiplicity is a normal outcome, not an error.
pub fn cluster_eigenvalues(eigenvalues: &[f64], target: f64, cluster_tol: f64) -> EigenCluster {
    let start = eigenvalues.partition_point(|&x| x < target - cluster_tol);
    let end = eigenvalues.partition_point(|&x| x <= target + cluster_tol);
    let boundary_sensitive = eigenvalues.iter().any(|&x| {
        let d = (x - target).abs();
        d > cluster_tol && d <= 10.0 * cluster_tol
    });
    EigenCluster {
        multiplicity: end - start,
        start,
        end,
        boundary_sensitive,
    }
}

/// Dirichlet normalized Laplacian on a domain: the principal submatrix of
/// the host Laplacian on the domain rows and columns. Degrees stay those of
/// the host tree, so its symmetrization is the matching principal submatrix
/// of the host's symmetrized operator and Cauchy interlacing applies.
#[derive(Debug, Clone)]
pub struct DirichletLaplacian {
    domain: Vec<usize>,
    entries: Array2<f64>,
    degrees: Vec<usize>,
}

/// Restricts the Laplacian to a nonempty domain.
pub fn dirichlet(
    l: &NormalizedLaplacian,
    omega: &VertexSet,
) -> Result<DirichletLaplacian, SpectralError> {
    if omega.is_empty() {
        return Err(SpectralError::EmptyDomain);
    }
    if let Some(id) = omega.max_id().filter(|&id| id >= l.n()) {
        return Err(SpectralError::VertexOutOfRange { id, n: l.n() });
    }
    let domain: Vec<usize> = omega.iter().collect();
    let k = domain.len();
    let mut entries = Array2::<f64>::zeros((k, k));
    for (i, &u) in domain.iter().enumerate() {
        for (j, &v) in domain.iter().enumerate() {
            entries[[i, j]] = l.entries[[u, v]];
        }
    }
    let degrees = domain.iter().map(|&u| l.degrees[u]).collect();
    Ok(DirichletLaplacian {
        domain,
        entries,
        degrees,
    })
}

impl DirichletLaplacian {
    /// Domain vertices in host labels, ascending; index in this slice is
    /// the local row/column.
    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn symmetrize(&self) -> Array2<f64> {
        let k = self.domain.len();
        let sqrt_deg: Vec<f64> = self.degrees.iter().map(|&d| (d as f64).sqrt()).collect();
        let mut s = Array2::<f64>::zeros((k, k));
        for i in 0..k {
            for j in 0..k {
                s[[i, j]] = self.entries[[i, j]] * sqrt_deg[i] / sqrt_deg[j];
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if s[[i, j]] != 0.0 {
                    let v = -1.0 / (sqrt_deg[i] * sqrt_deg[j]);
                    s[[i, j]] = v;
                    s[[j, i]] = v;
                }
            }
        }
        s
    }

    pub fn eigensolve(&self, tol: &Tolerances) -> Result<Spectrum, SpectralError> {
        solve_operator(&self.entries, &self.symmetrize(), &self.degrees, tol)
    }
}

/// Separation bounds evaluated for one minimum cover.
#[derive(Debug, Clone, Serialize)]
pub struct CoverBounds {
    pub cover: VertexSet,
    pub bound_volume: f64,
    pub bound_quotient: f64,
    pub tight_volume: bool,
    pub tight_quotient: bool,
}

/// Spectral separation and its two upper bounds.
///
/// `bound_volume` and `bound_quotient` are for the witness cover;
/// `per_cover` repeats them for every enumerated minimum cover.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    /// Shortest distance between 1 and the eigenvalues outside its cluster.
    pub lambda_bar: f64,
    /// Largest eigenvalue below the 1-cluster.
    pub lambda_p: f64,
    /// Index of `lambda_p` in the ascending eigenvalue list.
    pub lambda_p_index: usize,
    pub bound_volume: f64,
    pub bound_quotient: f64,
    /// Closed-form quotient eigenvalues `{0, 1^(n-|C|-1), 1+A}`, ascending.
    pub quotient_spectrum: Vec<f64>,
    pub per_cover: Vec<CoverBounds>,
    pub covers_truncated: bool,
}

/// `mu_{V-C} / mu_C` for a cover.
pub fn volume_bound(t: &Tree, cover: &VertexSet) -> f64 {
    let complement = cover.complement(t.n());
    t.measure(&complement) as f64 / t.measure(cover) as f64
}

/// The quotient-matrix corner value
/// `A = 1 - (1/|C|) * sum over cover-internal edges of (1/deg u + 1/deg v)`.
pub fn quotient_bound(t: &Tree, cover: &VertexSet) -> f64 {
    let mut inner = 0.0;
    for (u, v) in t.edges() {
        if cover.contains(u) && cover.contains(v) {
            inner += 1.0 / t.degree(u) as f64 + 1.0 / t.degree(v) as f64;
        }
    }
    1.0 - inner / cover.len() as f64
}

/// The closed-form spectrum of the quotient matrix: 0, then 1 with
/// multiplicity `n - |C| - 1`, then `1 + A`.
pub fn quotient_spectrum_closed_form(n: usize, cover_size: usize, a: f64) -> Vec<f64> {
    let mut out = vec![1.0; n - cover_size];
    out[0] = 0.0;
    out.push(1.0 + a);
    out
}

/// Quotient of the Laplacian under the partition `X_0 = C`,
/// `X_i = {v_i}` for `v_i` in `V - C` (ascending): entry `(i, j)` is the
/// average row sum of the corresponding block. Requires `cover` to be a
/// vertex cover so the lower-right block is the identity.
pub fn quotient_matrix(
    l: &NormalizedLaplacian,
    t: &Tree,
    cover: &VertexSet,
) -> Result<Array2<f64>, SpectralError> {
    if let Some(&(u, v)) = t
        .edges()
        .iter()
        .find(|&&(u, v)| !cover.contains(u) && !cover.contains(v))
    {
        return Err(SpectralError::NotACover(u, v));
    }
    let n = l.n();
    let rest: Vec<usize> = (0..n).filter(|&v| !cover.contains(v)).collect();
    let m = rest.len() + 1;
    let parts: Vec<Vec<usize>> = std::iter::once(cover.iter().collect())
        .chain(rest.iter().map(|&v| vec![v]))
        .collect();
    let mut b = Array2::<f64>::zeros((m, m));
    for (i, part_i) in parts.iter().enumerate() {
        for (j, part_j) in parts.iter().enumerate() {
            let mut total = 0.0;
            for &u in part_i {
                for &v in part_j {
                    total += l.entries[[u, v]];
                }
            }
            b[[i, j]] = total / part_i.len() as f64;
        }
    }
    Ok(b)
}

/// True when the sorted `inner` sequence interlaces the sorted `outer`
/// one: `outer[i] <= inner[i] <= outer[n-m+i]`, up to `tol`. Equal lengths
/// degenerate to elementwise equality (the trivial partition's quotient is
/// the matrix itself).
pub fn interlaces(inner: &[f64], outer: &[f64], tol: f64) -> bool {
    let (m, n) = (inner.len(), outer.len());
    if m > n {
        return false;
    }
    (0..m).all(|i| outer[i] - tol <= inner[i] && inner[i] <= outer[n - m + i] + tol)
}

/// Computes the separation and both bound families for a tree whose
/// spectrum and cover report are already available.
pub fn separation(
    spec: &Spectrum,
    cover: &CoverReport,
    t: &Tree,
    tol: &Tolerances,
) -> SeparationReport {
    let one_cluster = cluster_eigenvalues(&spec.eigenvalues, 1.0, tol.cluster_tol);
    let lambda_bar = spec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(i, _)| !one_cluster.indices().contains(i))
        .map(|(_, &x)| (1.0 - x).abs())
        .fold(f64::INFINITY, f64::min);
    // Everything below the 1-cluster is strictly below 1; the smallest
    // eigenvalue 0 guarantees this index exists.
    let lambda_p_index = one_cluster.start - 1;
    let lambda_p = spec.eigenvalues[lambda_p_index];

    let a = quotient_bound(t, &cover.witness_cover);
    let (covers, covers_truncated) = enumerate_min_covers(t, DEFAULT_COVER_CAP);
    let per_cover = covers
        .into_iter()
        .map(|c| {
            let volume = volume_bound(t, &c);
            let quotient = quotient_bound(t, &c);
            CoverBounds {
                cover: c,
                bound_volume: volume,
                bound_quotient: quotient,
                tight_volume: (volume - lambda_bar).abs() <= tol.tight_tol,
                tight_quotient: (quotient - lambda_bar).abs() <= tol.tight_tol,
            }
        })
        .collect();

    SeparationReport {
        lambda_bar,
        lambda_p,
        lambda_p_index,
        bound_volume: volume_bound(t, &cover.witness_cover),
        bound_quotient: a,
        quotient_spectrum: quotient_spectrum_closed_form(t.n(), cover.cover_size, a),
        per_cover,
        covers_truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::cover_report;

    fn path(n: usize) -> Tree {
        Tree::from_edge_list(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn star(m: usize) -> Tree {
        Tree::from_edge_list(&(1..=m).map(|i| (0, i)).collect::<Vec<_>>()).unwrap()
    }

    fn double_star() -> Tree {
        Tree::from_edge_list(&[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn laplacian_fixtures() {
        let l = build_laplacian(&path(2));
        assert_eq!(l.matrix(), &ndarray::array![[1.0, -1.0], [-1.0, 1.0]]);

        let l = build_laplacian(&path(3));
        assert_eq!(
            l.matrix(),
            &ndarray::array![[1.0, -1.0, 0.0], [-0.5, 1.0, -0.5], [0.0, -1.0, 1.0]]
        );

        let l = build_laplacian(&star(3));
        let row: Vec<f64> = l.matrix().row(0).to_vec();
        assert_close(&row, &[1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0], 1e-15);
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        for seed in 0..40u64 {
            let t = Tree::random(2 + seed as usize % 30, seed).unwrap();
            assert!(build_laplacian(&t).max_abs_row_sum() < 1e-15);
        }
    }

    #[test]
    fn symmetrize_fixtures() {
        let l = build_laplacian(&path(2));
        assert_eq!(l.symmetrize(), ndarray::array![[1.0, -1.0], [-1.0, 1.0]]);

        let s = build_laplacian(&path(3)).symmetrize();
        assert!((s[[0, 1]] + 1.0 / 2.0f64.sqrt()).abs() < 1e-15);

        for seed in 0..20u64 {
            let t = Tree::random(3 + seed as usize % 20, seed).unwrap();
            assert!(max_asymmetry(&build_laplacian(&t).symmetrize()) < 1e-15);
        }
    }

    #[test]
    fn eigensolve_fixtures() {
        let tol = Tolerances::default();
        let spec = eigensolve(&build_laplacian(&path(2)), &tol).unwrap();
        assert_close(&spec.eigenvalues, &[0.0, 2.0], 1e-12);

        // Closed form for paths: 1 - cos(k pi / (n-1)).
        let spec = eigensolve(&build_laplacian(&path(4)), &tol).unwrap();
        assert_close(&spec.eigenvalues, &[0.0, 0.5, 1.5, 2.0], 1e-9);

        // Roots of the exact factorization y^2 (y^2-1)(y^2-4/9).
        let spec = eigensolve(&build_laplacian(&double_star()), &tol).unwrap();
        assert_close(
            &spec.eigenvalues,
            &[0.0, 1.0 / 3.0, 1.0, 1.0, 5.0 / 3.0, 2.0],
            1e-9,
        );
    }

    #[test]
    fn eigensolve_residuals_and_orthonormality() {
        let tol = Tolerances::default();
        for seed in 0..25u64 {
            let t = Tree::random(2 + seed as usize % 24, seed).unwrap();
            let spec = eigensolve(&build_laplacian(&t), &tol).unwrap();
            assert!(spec.max_residual() < 1e-9);
            assert!(spec.symmetry_defect() < 1e-8);
            assert!(spec.eigenvalues[0].abs() < 1e-10);
            assert!((spec.eigenvalues[t.n() - 1] - 2.0).abs() < 1e-10);
            let g = spec.sym_vectors.t().dot(&spec.sym_vectors);
            for i in 0..t.n() {
                for j in 0..t.n() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g[[i, j]] - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn eigensolve_rejects_asymmetric() {
        let s = ndarray::array![[1.0, 0.5], [0.0, 1.0]];
        assert!(matches!(
            eigensolve_sym(&s, &Tolerances::default()),
            Err(SpectralError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn cluster_fixtures() {
        let tol = Tolerances::default();
        let spec = eigensolve(&build_laplacian(&double_star()), &tol).unwrap();
        let c = cluster_eigenvalues(&spec.eigenvalues, 1.0, tol.cluster_tol);
        assert_eq!(c.multiplicity, 2);
        assert!(!c.boundary_sensitive);

        let spec = eigensolve(&build_laplacian(&path(4)), &tol).unwrap();
        let c = cluster_eigenvalues(&spec.eigenvalues, 1.0, tol.cluster_tol);
        assert_eq!(c.multiplicity, 0);

        // 0 is simple on a connected graph.
        for seed in 0..10u64 {
            let t = Tree::random(4 + seed as usize, seed).unwrap();
            let spec = eigensolve(&build_laplacian(&t), &tol).unwrap();
            let c = cluster_eigenvalues(&spec.eigenvalues, 0.0, tol.cluster_tol);
            assert_eq!(c.multiplicity, 1);
        }
    }

    #[test]
    fn cluster_boundary_flag() {
        let c = cluster_eigenvalues(&[0.0, 1.0 + 5e-8, 2.0], 1.0, 1e-8);
        assert_eq!(c.multiplicity, 0);
        assert!(c.boundary_sensitive);
    }

    #[test]
    fn dirichlet_fixtures() {
        let tol = Tolerances::default();
        let p3 = path(3);
        let l = build_laplacian(&p3);
        // Full domain is the Laplacian itself.
        let all: VertexSet = (0..3).collect();
        let d = dirichlet(&l, &all).unwrap();
        assert_eq!(d.matrix(), l.matrix());

        // No domain-internal edges: the restriction is the identity.
        let ends: VertexSet = [0, 2].into_iter().collect();
        let d = dirichlet(&l, &ends).unwrap();
        assert_eq!(d.matrix(), &Array2::<f64>::eye(2));

        assert!(matches!(
            dirichlet(&l, &VertexSet::new()),
            Err(SpectralError::EmptyDomain)
        ));

        // Deleting one endpoint of P4: Cauchy interlacing against the host.
        let p4 = path(4);
        let l4 = build_laplacian(&p4);
        let host = eigensolve(&l4, &tol).unwrap();
        let omega: VertexSet = [0, 1, 2].into_iter().collect();
        let sub = dirichlet(&l4, &omega).unwrap().eigensolve(&tol).unwrap();
        assert!(interlaces(&sub.eigenvalues, &host.eigenvalues, 1e-10));
    }

    #[test]
    fn dirichlet_interlaces_for_every_single_deletion() {
        let tol = Tolerances::default();
        for seed in 0..15u64 {
            let t = Tree::random(4 + seed as usize % 12, seed).unwrap();
            let l = build_laplacian(&t);
            let host = eigensolve(&l, &tol).unwrap();
            for z in 0..t.n() {
                let omega: VertexSet = (0..t.n()).filter(|&v| v != z).collect();
                let sub = dirichlet(&l, &omega).unwrap().eigensolve(&tol).unwrap();
                assert!(interlaces(&sub.eigenvalues, &host.eigenvalues, 1e-10));
            }
        }
    }

    #[test]
    fn separation_double_star_is_tight() {
        let t = double_star();
        let tol = Tolerances::default();
        let spec = eigensolve(&build_laplacian(&t), &tol).unwrap();
        let report = separation(&spec, &cover_report(&t), &t, &tol);
        assert!((report.lambda_bar - 2.0 / 3.0).abs() < 1e-9);
        assert!((report.bound_volume - 2.0 / 3.0).abs() < 1e-9);
        assert!((report.bound_quotient - 2.0 / 3.0).abs() < 1e-9);
        assert!((report.lambda_p - 1.0 / 3.0).abs() < 1e-9);
        assert!(report.per_cover.iter().all(|c| c.tight_volume && c.tight_quotient));
        assert_close(
            &report.quotient_spectrum,
            &[0.0, 1.0, 1.0, 1.0, 5.0 / 3.0],
            1e-12,
        );
    }

    #[test]
    fn separation_p4() {
        let t = path(4);
        let tol = Tolerances::default();
        let spec = eigensolve(&build_laplacian(&t), &tol).unwrap();
        let report = separation(&spec, &cover_report(&t), &t, &tol);
        assert!((report.lambda_bar - 0.5).abs() < 1e-9);
        assert!((report.bound_volume - 0.5).abs() < 1e-9);
        assert!((report.bound_quotient - 0.5).abs() < 1e-9);
        assert_close(&report.quotient_spectrum, &[0.0, 1.0, 1.5], 1e-12);
    }

    #[test]
    fn separation_star() {
        let t = star(3);
        let tol = Tolerances::default();
        let spec = eigensolve(&build_laplacian(&t), &tol).unwrap();
        let report = separation(&spec, &cover_report(&t), &t, &tol);
        assert!((report.lambda_bar - 1.0).abs() < 1e-9);
        assert!((report.bound_volume - 1.0).abs() < 1e-9);
        assert!((report.bound_quotient - 1.0).abs() < 1e-9);
        assert_close(&report.quotient_spectrum, &[0.0, 1.0, 1.0, 2.0], 1e-12);
    }

    #[test]
    fn quotient_matrix_structure_and_spectrum() {
        let t = double_star();
        let l = build_laplacian(&t);
        let cover: VertexSet = [0, 1].into_iter().collect();
        let b = quotient_matrix(&l, &t, &cover).unwrap();
        assert_eq!(b.nrows(), 5);
        // Row sums zero; first column below the corner all -1; lower-right
        // block the identity.
        for i in 0..5 {
            assert!(b.row(i).sum().abs() < 1e-12);
        }
        for i in 1..5 {
            assert!((b[[i, 0]] + 1.0).abs() < 1e-12);
            for j in 1..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((b[[i, j]] - want).abs() < 1e-12);
            }
        }
        assert!((b[[0, 0]] - 2.0 / 3.0).abs() < 1e-12);

        let eig = general_eigenvalues(&b).unwrap();
        let res: Vec<f64> = eig.iter().map(|e| e.0).collect();
        assert!(eig.iter().all(|e| e.1.abs() < 1e-10));
        assert_close(&res, &[0.0, 1.0, 1.0, 1.0, 5.0 / 3.0], 1e-9);
    }

    #[test]
    fn quotient_matrix_p4_and_star() {
        let tol = Tolerances::default();
        let t = path(4);
        let l = build_laplacian(&t);
        let cover: VertexSet = [1, 2].into_iter().collect();
        let b = quotient_matrix(&l, &t, &cover).unwrap();
        let eig = general_eigenvalues(&b).unwrap();
        let res: Vec<f64> = eig.iter().map(|e| e.0).collect();
        assert_close(&res, &[0.0, 1.0, 1.5], 1e-9);
        let spec = eigensolve(&l, &tol).unwrap();
        assert!(interlaces(&res, &spec.eigenvalues, 1e-8));

        let t = star(3);
        let l = build_laplacian(&t);
        let cover: VertexSet = [0].into_iter().collect();
        let b = quotient_matrix(&l, &t, &cover).unwrap();
        let eig = general_eigenvalues(&b).unwrap();
        let res: Vec<f64> = eig.iter().map(|e| e.0).collect();
        assert_close(&res, &[0.0, 1.0, 1.0, 2.0], 1e-9);

        let not_cover: VertexSet = [0, 3].into_iter().collect();
        let t = path(4);
        let l = build_laplacian(&t);
        assert!(matches!(
            quotient_matrix(&l, &t, &not_cover),
            Err(SpectralError::NotACover(1, 2))
        ));
    }

    #[test]
    fn single_edge_separation() {
        // n = 2: spectrum {0, 2}, both bounds 1 and tight.
        let t = path(2);
        let tol = Tolerances::default();
        let spec = eigensolve(&build_laplacian(&t), &tol).unwrap();
        let report = separation(&spec, &cover_report(&t), &t, &tol);
        assert!((report.lambda_bar - 1.0).abs() < 1e-12);
        assert!((report.lambda_p - 0.0).abs() < 1e-12);
        assert!((report.bound_volume - 1.0).abs() < 1e-12);
        assert!((report.bound_quotient - 1.0).abs() < 1e-12);
    }
}
