//! Mode matching for the half-square pair.
//!
//! Each domain is cut into two squares and three half-squares on which
//! Dirichlet solutions are known in closed form. Continuity of the normal
//! derivative across the four internal cuts gives a `4N x 4N` system
//! `M(E) V = 0` in the sine coefficients `V` on the cuts; eigenvalues are the
//! zeros of `det M(E)` plus the triangular states, on which `V = 0`.
//!
//! Lengths are in units of the square side `d = 1`; energies passed in and
//! returned are over `pi^2`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::numspec::Spectrum;

/// Relative distance from a pole below which the matrix is not assembled.
pub const POLE_RADIUS: f64 = 1e-6;
/// Scan step in `k = sqrt(E)`.
pub const SCAN_STEP: f64 = PI / 40.0;
/// Relative bisection tolerance on `k`.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeMatchError {
    #[error("E = {e} pi^2 is within the exclusion radius of a pole")]
    PoleProximity { e: f64 },
    #[error("truncation must be at least 1")]
    ZeroTruncation,
    #[error("only {found} eigenvalues below {e_max} pi^2, {count} requested")]
    EmaxTooSmall { found: usize, count: usize, e_max: f64 },
    #[error("truncations {n} and {n2} give {a} and {b} roots")]
    RootCountMismatch { n: usize, n2: usize, a: usize, b: usize },
}

/// Which member of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Member {
    First,
    Second,
}

#[derive(Debug, Clone)]
pub struct MatchMatrix {
    pub n: usize,
    /// Energy over `pi^2`.
    pub e: f64,
    pub matrix: DMatrix<f64>,
}

/// `(b cot b, b / sin b)` continued to imaginary `b`.
fn uv(b2: f64) -> (f64, f64) {
    if b2.abs() < 1e-14 {
        (1.0, 1.0)
    } else if b2 > 0.0 {
        let b = b2.sqrt();
        (b / b.tan(), b / b.sin())
    } else {
        let b = (-b2).sqrt();
        (b / b.tanh(), b / b.sinh())
    }
}

/// Energies over `pi^2` where some block entry is singular: `m^2 + k^2`
/// with `m <= n` (the `W` poles are a subset).
pub fn poles(n: usize, e_max: f64) -> Vec<f64> {
    let kmax = e_max.max(0.0).sqrt().ceil() as usize + 1;
    let mut out: Vec<f64> = (1..=n.min(kmax))
        .flat_map(|m| (1..=kmax).map(move |k| (m * m + k * k) as f64))
        .filter(|&p| p <= e_max * (1.0 + 1e-3))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn near_pole(e: f64, n: usize) -> bool {
    poles(n, e * 1.01)
        .iter()
        .any(|&p| (e - p).abs() <= POLE_RADIUS * p)
}

fn build(e: f64, n: usize, which: Member) -> DMatrix<f64> {
    let energy = e * PI * PI;
    let a: Vec<f64> = (1..=n).map(|k| k as f64 * PI).collect();
    let (mut u, mut v) = (vec![0.0; n], vec![0.0; n]);
    for k in 0..n {
        (u[k], v[k]) = uv(energy - a[k] * a[k]);
    }
    let p = |k: usize| if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let w = |i: usize, j: usize| a[i] * a[j] / (energy - a[i] * a[i] - a[j] * a[j]);
    // block entries: U, V and P diagonal, so PWP_ij = p_i p_j W_ij and PV = diag(p v)
    let mut m = DMatrix::zeros(4 * n, 4 * n);
    let mut put = |bi: usize, bj: usize, f: &dyn Fn(usize, usize) -> f64| {
        for i in 0..n {
            for j in 0..n {
                m[(bi * n + i, bj * n + j)] += f(i, j);
            }
        }
    };
    let diag = |x: &Vec<f64>, c: f64| {
        let x = x.clone();
        move |i: usize, j: usize| if i == j { c * x[i] } else { 0.0 }
    };
    let pwp = |i: usize, j: usize| p(i) * p(j) * w(i, j);
    let pv: Vec<f64> = (0..n).map(|k| p(k) * v[k]).collect();
    match which {
        Member::First => {
            put(0, 0, &diag(&u, 1.0));
            put(0, 0, &|i, j| -2.0 * w(i, j));
            put(0, 1, &pwp);
            put(0, 1, &diag(&pv, -0.5));
            put(1, 0, &pwp);
            put(1, 0, &diag(&pv, -0.5));
            put(1, 1, &diag(&u, 1.0));
            put(1, 1, &|i, j| -w(i, j));
            put(1, 2, &diag(&v, -0.5));
            put(2, 1, &diag(&v, -0.5));
            put(2, 2, &diag(&u, 1.0));
            put(2, 3, &w);
            put(3, 2, &w);
            put(3, 3, &diag(&u, 1.0));
            put(3, 3, &|i, j| -pwp(i, j));
        }
        Member::Second => {
            for b in 0..4 {
                put(b, b, &diag(&u, 1.0));
                put(b, b, &|i, j| -w(i, j));
            }
            put(0, 1, &pwp);
            put(0, 1, &diag(&pv, -0.5));
            put(1, 0, &pwp);
            put(1, 0, &diag(&pv, -0.5));
            put(1, 2, &diag(&pv, 0.5));
            put(2, 1, &diag(&pv, 0.5));
            put(1, 3, &w);
            put(3, 1, &w);
            put(2, 3, &pwp);
            put(3, 2, &pwp);
        }
    }
    m
}

/// The matching matrix at energy `e` (over `pi^2`) with `n` modes per cut.
pub fn assemble(e: f64, n: usize, which: Member) -> Result<MatchMatrix, ModeMatchError> {
    if n == 0 {
        return Err(ModeMatchError::ZeroTruncation);
    }
    let a_zero = (1..=n).any(|k| {
        let a2 = (k * k) as f64;
        (e - a2).abs() <= POLE_RADIUS * a2
    });
    if near_pole(e, n) || a_zero {
        return Err(ModeMatchError::PoleProximity { e });
    }
    Ok(MatchMatrix {
        n,
        e,
        matrix: build(e, n, which),
    })
}

/// The `4N x 4N` block matrix `T` with `M = T^t M' T`.
pub fn block_t(n: usize) -> DMatrix<f64> {
    let s = 1.0 / 2f64.sqrt();
    let mut t = DMatrix::zeros(4 * n, 4 * n);
    for i in 0..n {
        let p = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
        // rows: (0 1 0 P), (1 0 P 0), (0 -1 0 P), (-1 0 P 0)
        for (bi, bj, c) in [
            (0, 1, 1.0),
            (0, 3, p),
            (1, 0, 1.0),
            (1, 2, p),
            (2, 1, -1.0),
            (2, 3, p),
            (3, 0, -1.0),
            (3, 2, p),
        ] {
            t[(bi * n + i, bj * n + i)] = s * c;
        }
    }
    t
}

/// `(sign, ln|det|)` from an LU factorization.
pub fn log_det(m: &DMatrix<f64>) -> (f64, f64) {
    let lu = m.clone().lu();
    let mut sign: f64 = lu.p().determinant();
    let mut log = 0.0;
    for x in lu.u().diagonal().iter() {
        if *x == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        sign *= x.signum();
        log += x.abs().ln();
    }
    (sign, log)
}

fn det_sign(k: f64, n: usize, which: Member) -> f64 {
    log_det(&build(k * k / (PI * PI), n, which)).0
}

/// Zeros of `det M(E)` below `e_max` (both over `pi^2`), for one truncation.
///
/// `k = pi sqrt(E)` is scanned in steps of `pi/40` between consecutive poles,
/// staying `POLE_RADIUS` away from them, and each sign change is bisected.
pub fn determinant_roots(n: usize, e_max: f64, which: Member) -> Vec<f64> {
    let mut edges = vec![0.5];
    edges.extend(poles(n, e_max).iter().map(|p| PI * p.sqrt()));
    edges.push(PI * e_max.sqrt());
    let mut roots = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0] * (1.0 + POLE_RADIUS), w[1] * (1.0 - POLE_RADIUS));
        if hi <= lo {
            continue;
        }
        let steps = ((hi - lo) / SCAN_STEP).ceil().max(1.0) as usize;
        let ks: Vec<f64> = (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect();
        let signs: Vec<f64> = ks.iter().map(|&k| det_sign(k, n, which)).collect();
        for i in 0..steps {
            if signs[i] == signs[i + 1] || signs[i] == 0.0 {
                continue;
            }
            let (mut a, mut b, sa) = (ks[i], ks[i + 1], signs[i]);
            while b - a > ROOT_TOL * b {
                let mid = 0.5 * (a + b);
                if det_sign(mid, n, which) == sa {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let k = 0.5 * (a + b);
            roots.push(k * k / (PI * PI));
        }
    }
    roots
}

/// Triangular-state energies `m^2 + n^2`, `m > n >= 1`, up to `e_max`.
pub fn triangular_energies(e_max: f64) -> Vec<f64> {
    let top = e_max.max(0.0).sqrt() as u64 + 1;
    let mut out: Vec<f64> = (1..=top)
        .flat_map(|n| (n + 1..=top).map(move |m| (m * m + n * n) as f64))
        .filter(|&e| e <= e_max)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Mode-matching spectrum with the triangular states marked.
#[derive(Debug, Clone)]
pub struct MatchSpectrum {
    pub spectrum: Spectrum,
    pub triangular: Vec<bool>,
}

/// The lowest `count` eigenvalues: determinant roots extrapolated linearly
/// in `1/N` from truncations `n` and `2n`, merged with the triangular states.
pub fn eigenvalues_mm(n: usize, count: usize, e_max: f64) -> Result<MatchSpectrum, ModeMatchError> {
    if n == 0 {
        return Err(ModeMatchError::ZeroTruncation);
    }
    let coarse = determinant_roots(n, e_max, Member::First);
    let fine = determinant_roots(2 * n, e_max, Member::First);
    if coarse.len() != fine.len() {
        return Err(ModeMatchError::RootCountMismatch {
            n,
            n2: 2 * n,
            a: coarse.len(),
            b: fine.len(),
        });
    }
    let mut all: Vec<(f64, bool)> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (2.0 * f - c, false))
        .chain(triangular_energies(e_max).into_iter().map(|e| (e, true)))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    if all.len() < count {
        return Err(ModeMatchError::EmaxTooSmall {
            found: all.len(),
            count,
            e_max,
        });
    }
    all.truncate(count);
    Ok(MatchSpectrum {
        spectrum: Spectrum {
            eigenvalues: all.iter().map(|x| x.0).collect(),
            eigenvectors: None,
            residuals: Vec::new(),
        },
        triangular: all.iter().map(|x| x.1).collect(),
    })
}

/// Largest relative distance between matched roots of `det M` and `det M'`.
pub fn zero_set_gap(n: usize, e_max: f64) -> Option<f64> {
    let a = determinant_roots(n, e_max, Member::First);
    let b = determinant_roots(n, e_max, Member::Second);
    (a.len() == b.len()).then(|| {
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs() / x)
            .fold(0.0, f64::max)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn congruence_identity() {
        for (e, n) in [(0.74, 3), (1.31, 5), (3.37, 8)] {
            let m = assemble(e, n, Member::First).unwrap().matrix;
            let m2 = assemble(e, n, Member::Second).unwrap().matrix;
            let t = block_t(n);
            let diff = (&m - t.transpose() * &m2 * &t).abs().max();
            assert!(diff < 1e-10 * m.abs().max(), "{diff}");
        }
    }

    #[test]
    fn single_mode_blocks() {
        // E below a_1^2: b_1 = i beta, beta^2 = pi^2 (1 - e)
        let e = 0.5;
        let m = assemble(e, 1, Member::First).unwrap().matrix;
        let beta = (PI * PI * (1.0 - e)).sqrt();
        let (u, v) = (beta / beta.tanh(), beta / beta.sinh());
        let w = PI * PI / (e * PI * PI - 2.0 * PI * PI);
        // P = -1 for n = 1, so PWP = W and PV = -V
        let expect = [
            [u - 2.0 * w, w + v / 2.0, 0.0, 0.0],
            [w + v / 2.0, u - w, -v / 2.0, 0.0],
            [0.0, -v / 2.0, u, w],
            [0.0, 0.0, w, u - w],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((m[(i, j)] - expect[i][j]).abs() < 1e-12, "{i} {j}");
            }
        }
        assert!(m.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(assemble(2.0, 4, Member::First), Err(ModeMatchError::PoleProximity { .. })));
        assert!(matches!(assemble(5.0 + 1e-7, 4, Member::Second), Err(ModeMatchError::PoleProximity { .. })));
        assert!(assemble(5.1, 4, Member::First).is_ok());
        assert_eq!(triangular_energies(10.0), vec![5.0, 10.0]);
    }

    #[test]
    fn both_members_share_roots() {
        let gap = zero_set_gap(6, 3.0).unwrap();
        assert!(gap < 1e-9, "{gap}");
    }
}
