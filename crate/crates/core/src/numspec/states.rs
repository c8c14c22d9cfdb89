use std::collections::VecDeque;
use std::f64::consts::PI;

use super::grid::GridDomain;
use super::NumspecError;
use crate::matrix::IntMatrix;

/// `t_{m,n}` sampled at the nodes, and its eigenvalue over `pi^2/d^2`.
///
/// `t_{m,n}(x,y) = sin(m pi x/d) sin(n pi y/d) - sin(n pi x/d) sin(m pi y/d)`
/// vanishes on the grid lines `x, y in dZ` and on the diagonals `y = +-x + 2dZ`,
/// so it is an eigenfunction of any domain made of half-squares whose edges
/// lie on those lines.
pub fn triangular_state(m: u32, n: u32, grid: &GridDomain) -> Result<(Vec<f64>, f64), NumspecError> {
    if m <= n || n == 0 {
        return Err(NumspecError::InvalidState { m, n });
    }
    let (m, n) = (m as f64, n as f64);
    let k = PI / grid.d;
    let values = (0..grid.len())
        .map(|i| {
            let [x, y] = grid.position(i);
            (m * k * x).sin() * (n * k * y).sin() - (n * k * x).sin() * (m * k * y).sin()
        })
        .collect();
    Ok((values, m * m + n * n))
}

/// `|(Delta_h + E) v| / |v|` with `E` given over `pi^2/d^2`.
pub fn fd_residual(grid: &GridDomain, v: &[f64], e: f64) -> f64 {
    let lambda = e * PI * PI / (grid.d * grid.d);
    grid.laplacian().residual(lambda, v)
}

/// Moves a grid function from `a` to `b`: the value at a node of tile `i` of
/// `b` is `sum_j T_ij phi` at the same base-tile point in tile `j` of `a`.
pub fn transplant_eigenvector(
    t: &IntMatrix,
    phi: &[f64],
    a: &GridDomain,
    b: &GridDomain,
) -> Result<Vec<f64>, NumspecError> {
    let d = a.domain.d();
    if b.domain.d() != d || t.rows() != d || t.cols() != d || phi.len() != a.len() {
        return Err(NumspecError::SizeMismatch {
            a: a.domain.d(),
            b: b.domain.d(),
        });
    }
    if (a.h - b.h).abs() > 1e-12 * a.h {
        return Err(NumspecError::GridMismatch);
    }
    let mut psi = vec![0.0; b.len()];
    for (k, out) in psi.iter_mut().enumerate() {
        let i = b.tile_of[k];
        let local = b.local[k];
        for j in 0..d {
            let c = t[(i, j)];
            if c == 0 {
                continue;
            }
            let p = a.domain.tiles[j].isometry.apply(local);
            let g = [p[0] / a.h, p[1] / a.h];
            if (g[0] - g[0].round()).abs() > 1e-6 || (g[1] - g[1].round()).abs() > 1e-6 {
                return Err(NumspecError::GridMismatch);
            }
            if let Some(node) = a.node_at([g[0].round() as i64, g[1].round() as i64]) {
                *out += c as f64 * phi[node];
            }
        }
    }
    let max = psi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = phi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max <= 1e-12 * scale {
        return Err(NumspecError::ZeroTransplant);
    }
    Ok(psi)
}

/// Fraction of `psi`'s norm inside the span of `vectors` (orthonormal).
pub fn eigenspace_overlap(psi: &[f64], vectors: &[&[f64]]) -> f64 {
    let n2: f64 = psi.iter().map(|x| x * x).sum();
    let proj: f64 = vectors
        .iter()
        .map(|v| {
            let c: f64 = v.iter().zip(psi).map(|(a, b)| a * b).sum();
            c * c / v.iter().map(|x| x * x).sum::<f64>()
        })
        .sum();
    (proj / n2).sqrt()
}

/// Connected regions of constant sign, over 4-neighbour links; nodes below
/// `1e-8` of the maximum are treated as zero.
pub fn nodal_count(v: &[f64], grid: &GridDomain) -> usize {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cut = 1e-8 * max;
    let sign = |k: usize| {
        if v[k] > cut {
            1
        } else if v[k] < -cut {
            -1
        } else {
            0
        }
    };
    let mut seen = vec![false; v.len()];
    let mut count = 0;
    for s in 0..v.len() {
        if seen[s] || sign(s) == 0 {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(k) = queue.pop_front() {
            for &j in &grid.neighbors[k] {
                if !seen[j] && sign(j) == sign(s) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    count
}
