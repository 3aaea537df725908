//! Truncated singular value decomposition via one-sided Jacobi rotations.
//!
//! Column rotations preserve the product `W Vᵀ`, so the reconstruction is
//! exact at any sweep count; convergence only affects how close the kept
//! columns are to true singular directions. Dependency-free and bit-stable
//! across runs.

use crate::error::{Error, Result};
use crate::numerics::matrix::{dot, norm, Matrix};
use crate::numerics::rng::Rng;

/// Rank-r factors: `u * diag(s) * vt` approximates the input.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// m x r, orthonormal columns.
    pub u: Matrix,
    /// r singular values, descending, non-negative.
    pub s: Vec<f64>,
    /// r x n, orthonormal rows.
    pub vt: Matrix,
}

#[derive(Debug, Clone, Copy)]
pub struct SvdOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_sweeps: 500,
        }
    }
}

/// Best rank-r approximation factors of `m` (within iteration tolerance).
pub fn truncated_svd(m: &Matrix, r: usize, rng: &mut Rng) -> Result<SvdFactors> {
    truncated_svd_with(m, r, rng, SvdOptions::default())
}

pub fn truncated_svd_with(
    m: &Matrix,
    r: usize,
    rng: &mut Rng,
    opts: SvdOptions,
) -> Result<SvdFactors> {
    let (rows, cols) = (m.rows(), m.cols());
    if r == 0 || r > rows.min(cols) {
        return Err(Error::RankOutOfRange {
            rank: r,
            rows,
            cols,
        });
    }
    if rows >= cols {
        decompose_tall(m, r, rng, opts)
    } else {
        // Factor the transpose and swap the roles of u and v.
        let f = decompose_tall(&m.transpose(), r, rng, opts)?;
        Ok(SvdFactors {
            u: f.vt.transpose(),
            s: f.s,
            vt: f.u.transpose(),
        })
    }
}

fn decompose_tall(m: &Matrix, r: usize, rng: &mut Rng, opts: SvdOptions) -> Result<SvdFactors> {
    let (rows, cols) = (m.rows(), m.cols());
    // Work on columns: w starts as the input, v accumulates rotations.
    let mut w: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            let mut e = vec![0.0; cols];
            e[j] = 1.0;
            e
        })
        .collect();

    let mut residual = 0.0;
    let mut converged = false;
    for _ in 0..opts.max_sweeps {
        residual = 0.0f64;
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                let scale = (alpha * beta).sqrt();
                if scale == 0.0 {
                    continue;
                }
                residual = residual.max(gamma.abs() / scale);
                if gamma.abs() <= opts.tol * scale {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNonConvergence {
            sweeps: opts.max_sweeps,
            residual,
        });
    }

    // Column norms are the singular values; sort descending, stable on ties.
    let mut order: Vec<(f64, usize)> = w.iter().map(norm).zip(0..cols).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let mut u = Matrix::zeros(rows, r);
    let mut s = Vec::with_capacity(r);
    let mut vt = Matrix::zeros(r, cols);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(r);
    for (slot, &(sigma, j)) in order.iter().take(r).enumerate() {
        let col = if sigma > 1e-300 {
            w[j].iter().map(|x| x / sigma).collect()
        } else {
            // Null direction: fill with any unit vector orthogonal to the
            // columns already kept so u stays orthonormal.
            orthonormal_complement(&u_cols, rows, rng)
        };
        for (i, &x) in col.iter().enumerate() {
            u.set(i, slot, x);
        }
        u_cols.push(col);
        s.push(if sigma > 1e-300 { sigma } else { 0.0 });
        for (jj, &x) in v[j].iter().enumerate() {
            vt.set(slot, jj, x);
        }
    }
    Ok(SvdFactors { u, s, vt })
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

fn orthonormal_complement(existing: &[Vec<f64>], dim: usize, rng: &mut Rng) -> Vec<f64> {
    loop {
        let mut cand: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
        for col in existing {
            let proj = dot(&cand, col);
            for (c, &e) in cand.iter_mut().zip(col) {
                *c -= proj * e;
            }
        }
        let n = norm(&cand);
        if n > 1e-6 {
            for c in &mut cand {
                *c /= n;
            }
            return cand;
        }
    }
}

impl SvdFactors {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `u * diag(s) * vt`.
    pub fn reconstruct(&self) -> Result<Matrix> {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (j, &sv) in self.s.iter().enumerate() {
                us.set(i, j, us.get(i, j) * sv);
            }
        }
        us.matmul(&self.vt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_frob_err(a: &Matrix, b: &Matrix) -> f64 {
        a.sub(b).unwrap().frobenius_norm() / a.frobenius_norm().max(1e-300)
    }

    fn check_orthonormal_cols(m: &Matrix, tol: f64) {
        for j in 0..m.cols() {
            for k in j..m.cols() {
                let mut acc = 0.0;
                for i in 0..m.rows() {
                    acc += m.get(i, j) * m.get(i, k);
                }
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((acc - expect).abs() < tol, "col {j}.{k} dot = {acc}");
            }
        }
    }

    #[test]
    fn identity_full_rank() {
        let mut rng = Rng::new(0);
        let f = truncated_svd(&Matrix::identity(4), 4, &mut rng).unwrap();
        for &sv in &f.s {
            assert!((sv - 1.0).abs() < 1e-10);
        }
        assert!(rel_frob_err(&Matrix::identity(4), &f.reconstruct().unwrap()) < 1e-12);
    }

    #[test]
    fn known_rank_two_matrix() {
        // 5x4 built from two outer products.
        let a = [1.0, -2.0, 0.5, 3.0, 1.5];
        let b = [2.0, 0.0, 1.0, -1.0];
        let c = [0.5, 1.0, -1.0, 0.25, 2.0];
        let d = [0.0, 1.0, 1.0, 0.5];
        let mut m = Matrix::zeros(5, 4);
        for i in 0..5 {
            for j in 0..4 {
                m.set(i, j, a[i] * b[j] + c[i] * d[j]);
            }
        }
        let mut rng = Rng::new(1);
        let f = truncated_svd(&m, 2, &mut rng).unwrap();
        assert!(m.sub(&f.reconstruct().unwrap()).unwrap().frobenius_norm() < 1e-8);
        check_orthonormal_cols(&f.u, 1e-8);
        check_orthonormal_cols(&f.vt.transpose(), 1e-8);
    }

    #[test]
    fn full_rank_matches_gram_eigenvalue_oracle() {
        // Oracle: eigenvalues of MᵀM from a two-sided symmetric Jacobi,
        // compared against squared singular values.
        let mut rng = Rng::new(7);
        let m = Matrix::new(6, 5, (0..30).map(|_| rng.normal()).collect()).unwrap();
        let f = truncated_svd(&m, 5, &mut rng).unwrap();
        assert!(rel_frob_err(&m, &f.reconstruct().unwrap()) < 1e-6);

        let gram = m.transpose().matmul(&m).unwrap();
        let mut eig = symmetric_eigenvalues(&gram);
        eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (sv, ev) in f.s.iter().zip(&eig) {
            assert!((sv * sv - ev).abs() < 1e-7 * ev.max(1.0), "{sv} vs {ev}");
        }
    }

    #[test]
    fn singular_values_sorted_descending() {
        let mut rng = Rng::new(9);
        let m = Matrix::new(8, 6, (0..48).map(|_| rng.normal()).collect()).unwrap();
        let f = truncated_svd(&m, 6, &mut rng).unwrap();
        for pair in f.s.windows(2) {
            assert!(pair[0] >= pair[1] - 1e-12);
        }
        assert!(f.s.iter().all(|&sv| sv >= 0.0));
    }

    #[test]
    fn wide_matrix_handled_by_transpose() {
        let mut rng = Rng::new(21);
        let m = Matrix::new(3, 7, (0..21).map(|_| rng.normal()).collect()).unwrap();
        let f = truncated_svd(&m, 3, &mut rng).unwrap();
        assert!(rel_frob_err(&m, &f.reconstruct().unwrap()) < 1e-6);
        check_orthonormal_cols(&f.u, 1e-8);
        check_orthonormal_cols(&f.vt.transpose(), 1e-8);
    }

    #[test]
    fn rank_out_of_range_rejected() {
        let m = Matrix::zeros(3, 2);
        let mut rng = Rng::new(0);
        assert!(truncated_svd(&m, 0, &mut rng).is_err());
        assert!(truncated_svd(&m, 3, &mut rng).is_err());
    }

    /// Cyclic Jacobi eigenvalue iteration for symmetric matrices (test oracle).
    fn symmetric_eigenvalues(a: &Matrix) -> Vec<f64> {
        let n = a.rows();
        let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
        for _ in 0..200 {
            let mut off = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    off = off.max(m[i][j].abs());
                }
            }
            if off < 1e-13 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if m[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for k in 0..n {
                        let (mkp, mkq) = (m[k][p], m[k][q]);
                        m[k][p] = c * mkp - s * mkq;
                        m[k][q] = s * mkp + c * mkq;
                    }
                    for k in 0..n {
                        let (mpk, mqk) = (m[p][k], m[q][k]);
                        m[p][k] = c * mpk - s * mqk;
                        m[q][k] = s * mpk + c * mqk;
                    }
                }
            }
        }
        (0..n).map(|i| m[i][i]).collect()
    }
}
