//! Dense eigensolvers: cyclic Jacobi for symmetric matrices and a
//! Hessenberg + double-shift QR eigenvalue routine for small general real
//! matrices. Both are deterministic: identical input bits give identical
//! output bits.

use ndarray::Array2;

use super::SpectralError;

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi
/// rotations: sweeps visit the strict upper triangle in row-major order and
/// annihilate each entry in turn, until the largest off-diagonal magnitude
/// drops below `off_tol` or the sweep budget runs out.
///
/// Returns eigenvalues in ascending order with the matching orthonormal
/// eigenvector columns. Each column's sign is normalized so its largest
/// entry by magnitude (first such index on ties) is positive.
pub(crate) fn jacobi_eigh(
    a: &Array2<f64>,
    off_tol: f64,
    max_sweeps: usize,
) -> Result<(Vec<f64>, Array2<f64>), SpectralError> {
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = Array2::<f64>::eye(n);

    if n > 1 {
        let mut converged = false;
        for _ in 0..max_sweeps {
            let mut off_max = 0.0f64;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    off_max = off_max.max(m[[p, q]].abs());
                }
            }
            if off_max <= off_tol {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = m[[p, q]];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = m[[p, p]];
                    let aqq = m[[q, q]];
                    let tau = (aqq - app) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    for i in 0..n {
                        if i != p && i != q {
                            let aip = m[[i, p]];
                            let aiq = m[[i, q]];
                            m[[i, p]] = c * aip - s * aiq;
                            m[[p, i]] = m[[i, p]];
                            m[[i, q]] = s * aip + c * aiq;
                            m[[q, i]] = m[[i, q]];
                        }
                    }
                    m[[p, p]] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                    m[[q, q]] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                    m[[p, q]] = 0.0;
                    m[[q, p]] = 0.0;

                    for i in 0..n {
                        let vip = v[[i, p]];
                        let viq = v[[i, q]];
                        v[[i, p]] = c * vip - s * viq;
                        v[[i, q]] = s * vip + c * viq;
                    }
                }
            }
        }
        if !converged {
            // One last check: the final sweep may have finished the job.
            let mut off_max = 0.0f64;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    off_max = off_max.max(m[[p, q]].abs());
                }
            }
            if off_max > off_tol {
                return Err(SpectralError::NoConvergence {
                    budget: max_sweeps,
                    off_max,
                });
            }
        }
    }

    // Sort ascending (index tiebreak keeps this a stable, deterministic
    // permutation) and fix each column's sign.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[i, i]].total_cmp(&m[[j, j]]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[[i, i]]).collect();
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        for i in 0..n {
            if v[[i, src]].abs() > v[[pivot, src]].abs() {
                pivot = i;
            }
        }
        let flip = if v[[pivot, src]] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[[i, col]] = flip * v[[i, src]];
        }
    }
    Ok((eigenvalues, vectors))
}

/// Eigenvalues of a small general real matrix as `(re, im)` pairs, sorted
/// by real part then imaginary part.
///
/// Classic dense path: balance, reduce to upper Hessenberg form by
/// stabilized elimination, then Francis double-shift QR with the usual
/// exceptional shifts. Eigenvalues only; no Schur vectors.
pub fn general_eigenvalues(a: &Array2<f64>) -> Result<Vec<(f64, f64)>, SpectralError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "matrix must be square");
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![(a[[0, 0]], 0.0)]);
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut eig = hqr(&mut h)?;
    eig.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Ok(eig)
}

/// Diagonal similarity scaling by powers of two (exact in floating point)
/// to even out row and column norms.
fn balance(a: &mut Array2<f64>) {
    let n = a.nrows();
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[[j, i]].abs();
                    r += a[[i, j]].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / radix;
                let mut f = 1.0;
                let s = c + r;
                let mut c_scaled = c;
                while c_scaled < g {
                    f *= radix;
                    c_scaled *= sqrdx;
                }
                g = r * radix;
                while c_scaled > g {
                    f /= radix;
                    c_scaled /= sqrdx;
                }
                if (c_scaled + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[[i, j]] *= g;
                    }
                    for j in 0..n {
                        a[[j, i]] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Reduction to upper Hessenberg form by Gaussian elimination with partial
/// pivoting; the lower triangle is explicitly zeroed afterwards.
fn hessenberg(a: &mut Array2<f64>) {
    let n = a.nrows();
    for m in 1..n.saturating_sub(1) {
        let mut x = 0.0f64;
        let mut pivot = m;
        for j in m..n {
            if a[[j, m - 1]].abs() > x.abs() {
                x = a[[j, m - 1]];
                pivot = j;
            }
        }
        if pivot != m {
            for j in m - 1..n {
                let tmp = a[[pivot, j]];
                a[[pivot, j]] = a[[m, j]];
                a[[m, j]] = tmp;
            }
            for j in 0..n {
                let tmp = a[[j, pivot]];
                a[[j, pivot]] = a[[j, m]];
                a[[j, m]] = tmp;
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[[i, m - 1]];
                if y != 0.0 {
                    y /= x;
                    a[[i, m - 1]] = y;
                    for j in m..n {
                        let delta = y * a[[m, j]];
                        a[[i, j]] -= delta;
                    }
                    for j in 0..n {
                        let delta = y * a[[j, i]];
                        a[[j, m]] += delta;
                    }
                }
            }
        }
    }
    // The elimination stores its multipliers below the subdiagonal; QR must
    // see a clean Hessenberg matrix.
    for i in 2..n {
        for j in 0..i - 1 {
            a[[i, j]] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; returns all
/// eigenvalues as `(re, im)` pairs.
fn hqr(a: &mut Array2<f64>) -> Result<Vec<(f64, f64)>, SpectralError> {
    let n = a.nrows() as isize;
    let at = |a: &Array2<f64>, i: isize, j: isize| a[[i as usize, j as usize]];
    let set = |a: &mut Array2<f64>, i: isize, j: isize, v: f64| a[[i as usize, j as usize]] = v;

    let mut anorm = 0.0f64;
    for i in 0..n {
        for j in (i - 1).max(0)..n {
            anorm += at(a, i, j).abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![(0.0, 0.0); n as usize]);
    }

    let eps = f64::EPSILON;
    let mut eig: Vec<(f64, f64)> = Vec::with_capacity(n as usize);
    let mut nn = n - 1;
    let mut t = 0.0f64;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // Look for a single small subdiagonal element to split the matrix.
            let mut l = nn;
            while l >= 1 {
                let mut s = at(a, l - 1, l - 1).abs() + at(a, l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if at(a, l, l - 1).abs() <= eps * s {
                    set(a, l, l - 1, 0.0);
                    break;
                }
                l -= 1;
            }
            let mut x = at(a, nn, nn);
            if l == nn {
                eig.push((x + t, 0.0));
                nn -= 1;
                break;
            }
            let mut y = at(a, nn - 1, nn - 1);
            let mut w = at(a, nn, nn - 1) * at(a, nn - 1, nn);
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    let first = x + z;
                    let second = if z != 0.0 { x - w / z } else { first };
                    eig.push((second, 0.0));
                    eig.push((first, 0.0));
                } else {
                    eig.push((x + p, -z));
                    eig.push((x + p, z));
                }
                nn -= 2;
                break;
            }
            if its == 30 {
                return Err(SpectralError::NoConvergence {
                    budget: 30,
                    off_max: at(a, nn, nn - 1).abs(),
                });
            }
            if its == 10 || its == 20 {
                // Exceptional shift.
                t += x;
                for i in 0..=nn {
                    let d = at(a, i, i) - x;
                    set(a, i, i, d);
                }
                let s = at(a, nn, nn - 1).abs() + at(a, nn - 1, nn - 2).abs();
                y = 0.75 * s;
                x = y;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Form the first column of (H - aI)(H - bI) and look for two
            // consecutive small subdiagonals where the QR step can start.
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = at(a, m, m);
                let rr = x - z;
                let s = y - z;
                p = (rr * s - w) / at(a, m + 1, m) + at(a, m, m + 1);
                q = at(a, m + 1, m + 1) - z - rr - s;
                r = at(a, m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = at(a, m, m - 1).abs() * (q.abs() + r.abs());
                let v =
                    p.abs() * (at(a, m - 1, m - 1).abs() + z.abs() + at(a, m + 1, m + 1).abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                set(a, i, i - 2, 0.0);
                if i != m + 2 {
                    set(a, i, i - 3, 0.0);
                }
            }

            // Double QR step: chase the bulge from row m to nn.
            for k in m..nn {
                if k != m {
                    p = at(a, k, k - 1);
                    q = at(a, k + 1, k - 1);
                    r = if k + 1 != nn { at(a, k + 2, k - 1) } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        set(a, k, k - 1, -at(a, k, k - 1));
                    }
                } else {
                    set(a, k, k - 1, -s * x);
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    let mut pp = at(a, k, j) + q * at(a, k + 1, j);
                    if k + 1 != nn {
                        pp += r * at(a, k + 2, j);
                        set(a, k + 2, j, at(a, k + 2, j) - pp * z);
                    }
                    set(a, k + 1, j, at(a, k + 1, j) - pp * y);
                    set(a, k, j, at(a, k, j) - pp * x);
                }
                let mmin = if nn < k + 3 { nn } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = x * at(a, i, k) + y * at(a, i, k + 1);
                    if k + 1 != nn {
                        pp += z * at(a, i, k + 2);
                        set(a, i, k + 2, at(a, i, k + 2) - pp * r);
                    }
                    set(a, i, k + 1, at(a, i, k + 1) - pp * q);
                    set(a, i, k, at(a, i, k) - pp);
                }
            }
        }
    }
    Ok(eig)
}
