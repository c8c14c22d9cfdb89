//! Smallest eigenpairs of a sparse symmetric positive definite matrix:
//! envelope Cholesky factorization and shift-invert Lanczos with full
//! reorthogonalization.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::NumspecError;

/// Matrices up to this size are diagonalized densely.
const DENSE_LIMIT: usize = 400;
/// Target for the relative residual `|Av - lv| / |A|`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Symmetric matrix stored as a diagonal plus off-diagonal rows.
#[derive(Debug, Clone)]
pub struct SymSparse {
    pub diag: Vec<f64>,
    /// `(column, value)` for every off-diagonal entry of each row.
    pub off: Vec<Vec<(usize, f64)>>,
}

impl SymSparse {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.diag[i] * x[i] + self.off[i].iter().map(|&(j, a)| a * x[j]).sum::<f64>())
            .collect()
    }

    /// Largest absolute row sum, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        (0..self.len())
            .map(|i| self.diag[i].abs() + self.off[i].iter().map(|&(_, a)| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let av = self.apply(v);
        let r: f64 = av.iter().zip(v).map(|(a, x)| (a - lambda * x).powi(2)).sum();
        r.sqrt() / norm(v)
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            for &(j, a) in &self.off[i] {
                m[(i, j)] = a;
            }
        }
        m
    }
}

/// Cholesky factor `L` stored row by row from the first nonzero column.
pub struct EnvelopeCholesky {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &SymSparse) -> Result<Self, NumspecError> {
        let n = a.len();
        let first: Vec<usize> = (0..n)
            .map(|i| a.off[i].iter().map(|&(j, _)| j).filter(|&j| j < i).min().unwrap_or(i))
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for i in 0..n {
            start.push(total);
            total += i - first[i] + 1;
        }
        start.push(total);
        let mut data = vec![0.0; total];
        for i in 0..n {
            let fi = first[i];
            let row = start[i];
            data[row + i - fi] = a.diag[i];
            for &(j, v) in &a.off[i] {
                if j < i {
                    data[row + j - fi] = v;
                }
            }
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let (head, tail) = data.split_at_mut(row);
                let rj = &head[start[j] + k0 - fj..start[j] + j - fj];
                let ri = &tail[k0 - fi..j - fi];
                let s: f64 = ri.iter().zip(rj).map(|(x, y)| x * y).sum();
                let ljj = head[start[j] + j - fj];
                tail[j - fi] = (tail[j - fi] - s) / ljj;
            }
            let r = &mut data[row..row + i - fi + 1];
            let s: f64 = r[..i - fi].iter().map(|x| x * x).sum();
            let piv = r[i - fi] - s;
            if piv <= 0.0 {
                return Err(NumspecError::NotPositiveDefinite);
            }
            r[i - fi] = piv.sqrt();
        }
        Ok(EnvelopeCholesky { first, start, data })
    }

    /// Solves `L L^T x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.first.len();
        let mut y = b.to_vec();
        for i in 0..n {
            let (fi, row) = (self.first[i], self.start[i]);
            let s: f64 = self.data[row..row + i - fi]
                .iter()
                .zip(&y[fi..i])
                .map(|(l, v)| l * v)
                .sum();
            y[i] = (y[i] - s) / self.data[row + i - fi];
        }
        for i in (0..n).rev() {
            let (fi, row) = (self.first[i], self.start[i]);
            y[i] /= self.data[row + i - fi];
            let xi = y[i];
            for (k, l) in (fi..i).zip(&self.data[row..row + i - fi]) {
                y[k] -= l * xi;
            }
        }
        y
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            axpy(-c, q, v);
        }
    }
}

/// An eigenpair with unit-norm vector and its relative residual.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// The `count` smallest eigenpairs of a positive definite `a`, ascending.
pub fn smallest_eigenpairs(a: &SymSparse, count: usize, seed: u64) -> Result<Vec<EigenPair>, NumspecError> {
    let n = a.len();
    if count > n {
        return Err(NumspecError::TooManyModes { requested: count, nodes: n });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let anorm = a.norm_bound();
    if n <= DENSE_LIMIT {
        let eig = SymmetricEigen::new(a.to_dense());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        return Ok(order[..count]
            .iter()
            .map(|&i| {
                let vector: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
                let value = eig.eigenvalues[i];
                EigenPair {
                    residual: a.residual(value, &vector) / anorm,
                    value,
                    vector,
                }
            })
            .collect());
    }
    let chol = EnvelopeCholesky::factor(a)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut found: Vec<EigenPair> = Vec::new();
    // fill rounds, then deflated rounds that look for anything missed below
    // the largest accepted value (repeated eigenvalues need a fresh start)
    loop {
        let filling = found.len() < count;
        let want = if filling { count - found.len() } else { 1 };
        let locked: Vec<Vec<f64>> = found.iter().map(|p| p.vector.clone()).collect();
        let new = lanczos_round(a, &chol, &locked, want, anorm, &mut rng)?;
        if new.is_empty() {
            if filling {
                return Err(NumspecError::NotConverged {
                    found: found.len(),
                    requested: count,
                });
            }
            break;
        }
        let largest = found.last().map_or(f64::INFINITY, |p| p.value);
        let before = found.len();
        let mut inserted = false;
        for p in new {
            if filling || p.value < largest * (1.0 - 1e-12) {
                inserted |= !filling;
                found.push(p);
            }
        }
        found.sort_by(|x, y| x.value.total_cmp(&y.value));
        found.truncate(count);
        if !filling && !inserted {
            break;
        }
        if filling && found.len() == before {
            return Err(NumspecError::NotConverged {
                found: found.len(),
                requested: count,
            });
        }
    }
    Ok(found)
}

/// One Lanczos run on `A^{-1}` in the complement of `locked`. Returns the
/// converged pairs among the `want` smallest, in ascending order.
fn lanczos_round(
    a: &SymSparse,
    chol: &EnvelopeCholesky,
    locked: &[Vec<f64>],
    want: usize,
    anorm: f64,
    rng: &mut StdRng,
) -> Result<Vec<EigenPair>, NumspecError> {
    let n = a.len();
    let room = n - locked.len();
    let max_steps = room.min(3 * want + 200);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    orthogonalize(&mut q, locked);
    let qn = norm(&q);
    if qn == 0.0 {
        return Ok(Vec::new());
    }
    q.iter_mut().for_each(|x| *x /= qn);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut next_check = (2 * want + 20).min(max_steps);
    loop {
        let m = basis.len();
        let mut w = chol.solve(&basis[m - 1]);
        let al = dot(&w, &basis[m - 1]);
        alpha.push(al);
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);
        let exhausted = b < 1e-14 * al.abs().max(1e-300) || m >= max_steps;
        if m >= next_check || exhausted {
            let (pairs, all) = ritz(a, &basis, &alpha, &beta, b, want, anorm);
            if all || exhausted {
                return Ok(pairs);
            }
            next_check = (m + m / 2).min(max_steps);
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
    }
}

/// Ritz pairs for the `want` largest eigenvalues of the tridiagonal matrix,
/// i.e. the smallest of `A`. Keeps the converged ones from the bottom up.
fn ritz(
    a: &SymSparse,
    basis: &[Vec<f64>],
    alpha: &[f64],
    beta: &[f64],
    last_beta: f64,
    want: usize,
    anorm: f64,
) -> (Vec<EigenPair>, bool) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let n = a.len();
    let mut out = Vec::new();
    for &i in order.iter().take(want) {
        let theta = eig.eigenvalues[i];
        let s = eig.eigenvectors.column(i);
        // A y - y/theta = -(beta s_m / theta) A q_{m+1}
        if theta <= 0.0 || (last_beta * s[m - 1]).abs() / theta > 0.1 * RESIDUAL_TOL {
            break;
        }
        let mut y = vec![0.0; n];
        for (k, qk) in basis.iter().enumerate() {
            axpy(s[k], qk, &mut y);
        }
        let yn = norm(&y);
        y.iter_mut().for_each(|x| *x /= yn);
        let value = 1.0 / theta;
        let residual = a.residual(value, &y) / anorm;
        if residual > RESIDUAL_TOL {
            break;
        }
        out.push(EigenPair {
            value,
            vector: y,
            residual,
        });
    }
    let all = out.len() == want.min(m);
    (out, all)
}
