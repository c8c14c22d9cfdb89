use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{Signed, ToPrimitive, Zero};

use super::lattice::{inverse, Lattice, Q};
use super::ToriError;

/// Default cap on enumeration tree nodes.
pub const NODE_BUDGET: u64 = 100_000_000;

/// Vector counts by norm, norms multiplied by `scale` to make them integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCoeffs {
    pub scale: i128,
    /// Largest scaled norm enumerated.
    pub bound: i128,
    pub counts: BTreeMap<i128, u64>,
}

impl ThetaCoeffs {
    pub fn count(&self, scaled_norm: i128) -> u64 {
        self.counts.get(&scaled_norm).copied().unwrap_or(0)
    }

    /// `(norm, count)` pairs with exact rational norms.
    pub fn shells(&self) -> Vec<(Q, u64)> {
        self.counts
            .iter()
            .map(|(&m, &c)| (Q::new(m, self.scale), c))
            .collect()
    }

    /// Whether both series agree for every norm up to `bound`.
    pub fn agree_up_to(&self, other: &ThetaCoeffs, bound: Q) -> bool {
        let keep = |t: &ThetaCoeffs| -> Vec<(Q, u64)> { t.shells().into_iter().filter(|s| s.0 <= bound).collect() };
        keep(self) == keep(other)
    }
}

/// LLL-reduced integer Gram matrix (scaled) and the unimodular change of basis.
pub fn lll(gram: &[Vec<i128>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let n = gram.len();
    let mut g = gram.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    let delta = 0.99;
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let r = mu[k][j].round() as i128;
            if r != 0 {
                for c in 0..n {
                    g[k][c] -= r * g[j][c];
                }
                for row in g.iter_mut() {
                    row[k] -= r * row[j];
                }
                for c in 0..n {
                    u[k][c] -= r * u[j][c];
                }
            }
        }
        let (mu, b) = gso(&g);
        if b[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    (g, u)
}

/// Gram-Schmidt coefficients `mu[i][j]` and squared lengths from a Gram matrix.
fn gso(g: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j] as f64;
            for l in 0..j {
                s -= mu[j][l] * mu[i][l] * b[l];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i] as f64;
        for l in 0..i {
            s -= mu[i][l] * mu[i][l] * b[l];
        }
        b[i] = s;
    }
    (mu, b)
}

/// Calls `visit(x, scaled norm)` for every nonzero `x` (coordinates in the
/// reduced basis) with `x^T G x <= bound`, `G` the reduced scaled Gram.
fn enumerate(
    g: &[Vec<i128>],
    bound: i128,
    budget: u64,
    mut visit: impl FnMut(&[i128], i128),
) -> Result<(), ToriError> {
    let n = g.len();
    let (mu, b) = gso(g);
    let limit = bound as f64 * (1.0 + 1e-9) + 1e-9;
    let mut x = vec![0i128; n];
    let mut partial = vec![0.0f64; n + 1];
    let mut nodes = 0u64;
    // depth-first over levels n-1 .. 0 with an explicit stack of ranges
    let mut hi = vec![0i128; n];
    let center = |x: &[i128], i: usize| -> f64 { -(i + 1..n).map(|j| mu[j][i] * x[j] as f64).sum::<f64>() };
    let mut i = n - 1;
    let init = |i: usize, x: &mut [i128], hi: &mut [i128], partial: &[f64]| -> bool {
        let c = center(x, i);
        let room = (limit - partial[i + 1]) / b[i];
        if room < 0.0 {
            return false;
        }
        let r = room.sqrt();
        x[i] = (c - r).ceil() as i128;
        hi[i] = (c + r).floor() as i128;
        x[i] <= hi[i]
    };
    if !init(i, &mut x, &mut hi, &partial) {
        return Ok(());
    }
    loop {
        nodes += 1;
        if nodes > budget {
            return Err(ToriError::Budget(budget));
        }
        if x[i] > hi[i] {
            // level exhausted: go up
            i += 1;
            if i == n {
                return Ok(());
            }
            x[i] += 1;
            continue;
        }
        let c = center(&x, i);
        let t = x[i] as f64 - c;
        partial[i] = partial[i + 1] + b[i] * t * t;
        if partial[i] > limit {
            x[i] += 1;
            continue;
        }
        if i == 0 {
            if x.iter().any(|&v| v != 0) {
                let norm = quad(g, &x);
                if norm <= bound {
                    visit(&x, norm);
                }
            }
            x[0] += 1;
            continue;
        }
        i -= 1;
        if !init(i, &mut x, &mut hi, &partial) {
            i += 1;
            x[i] += 1;
        }
    }
}

fn quad(g: &[Vec<i128>], x: &[i128]) -> i128 {
    let n = x.len();
    let mut s = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut r = 0;
        for j in 0..n {
            r += g[i][j] * x[j];
        }
        s += x[i] * r;
    }
    s
}

fn bilinear(g: &[Vec<i128>], x: &[i128], y: &[i128]) -> i128 {
    let mut s = 0;
    for i in 0..x.len() {
        if x[i] != 0 {
            s += x[i] * (0..y.len()).map(|j| g[i][j] * y[j]).sum::<i128>();
        }
    }
    s
}

fn reduced(lattice: &Lattice) -> (i128, Vec<Vec<i128>>) {
    let (s, g) = lattice.scaled_gram();
    (s, lll(&g).0)
}

fn scaled_bound(s: i128, max_norm: Q) -> i128 {
    (max_norm * Q::from_integer(s)).floor().to_integer()
}

/// Theta coefficients up to `max_norm`, with the default node budget.
pub fn theta(lattice: &Lattice, max_norm: Q) -> Result<ThetaCoeffs, ToriError> {
    theta_with_budget(lattice, max_norm, NODE_BUDGET)
}

pub fn theta_with_budget(lattice: &Lattice, max_norm: Q, budget: u64) -> Result<ThetaCoeffs, ToriError> {
    if !max_norm.is_positive() {
        return Err(ToriError::Bound);
    }
    let (s, g) = reduced(lattice);
    let bound = scaled_bound(s, max_norm);
    let mut counts = BTreeMap::from([(0, 1u64)]);
    enumerate(&g, bound, budget, |_, m| *counts.entry(m).or_insert(0) += 1)?;
    Ok(ThetaCoeffs { scale: s, bound, counts })
}

/// Smallest nonzero norm.
pub fn minimum(lattice: &Lattice) -> Result<Q, ToriError> {
    let (s, g) = reduced(lattice);
    let bound = (0..g.len()).map(|i| g[i][i]).min().unwrap_or(0);
    let mut best = bound;
    enumerate(&g, bound, NODE_BUDGET, |_, m| best = best.min(m))?;
    Ok(Q::new(best, s))
}

/// Same number of points in every ball of radius `r <= radius` about 0.
pub fn milnor_ball_check(a: &Lattice, b: &Lattice, radius: Q) -> Result<bool, ToriError> {
    if a.rank() != b.rank() {
        return Err(ToriError::RankMismatch(a.rank(), b.rank()));
    }
    let r2 = radius * radius;
    Ok(theta(a, r2)?.agree_up_to(&theta(b, r2)?, r2))
}

/// Outcome of the best-effort isometry test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsometryVerdict {
    /// Inner-product multisets among vectors of the first `shells` shells differ.
    Nonisometric { shells: usize },
    /// Every invariant tried agrees.
    Undecided,
}

/// Sorted scaled inner products among all vectors of the first `shells`
/// nonzero shells. Isometric lattices give equal lists.
pub fn shell_invariant(lattice: &Lattice, shells: usize) -> Result<Vec<i128>, ToriError> {
    let (s, g) = reduced(lattice);
    // enough norm for the requested number of shells
    let mut bound = (0..g.len()).map(|i| g[i][i]).max().unwrap_or(1);
    let vectors = loop {
        let mut found: Vec<(Vec<i128>, i128)> = Vec::new();
        enumerate(&g, bound, NODE_BUDGET, |x, m| found.push((x.to_vec(), m)))?;
        let mut norms: Vec<i128> = found.iter().map(|f| f.1).collect();
        norms.sort();
        norms.dedup();
        if norms.len() >= shells {
            let top = norms[shells - 1];
            break found.into_iter().filter(|f| f.1 <= top).collect::<Vec<_>>();
        }
        bound *= 2;
    };
    let _ = s;
    let mut ips: Vec<i128> = Vec::with_capacity(vectors.len() * vectors.len());
    for a in &vectors {
        for b in &vectors {
            ips.push(bilinear(&g, &a.0, &b.0));
        }
    }
    ips.sort_unstable();
    Ok(ips)
}

/// Sorted entries of the LLL-reduced scaled Gram matrix.
pub fn reduced_gram_entries(lattice: &Lattice) -> Vec<i128> {
    let mut e: Vec<i128> = reduced(lattice).1.into_iter().flatten().map(|x| x.abs()).collect();
    e.sort_unstable();
    e
}

pub fn compare_isometry(a: &Lattice, b: &Lattice, max_shells: usize) -> Result<IsometryVerdict, ToriError> {
    if a.scale() != b.scale() || a.rank() != b.rank() {
        return Ok(IsometryVerdict::Nonisometric { shells: 0 });
    }
    for shells in 1..=max_shells {
        if shell_invariant(a, shells)? != shell_invariant(b, shells)? {
            return Ok(IsometryVerdict::Nonisometric { shells });
        }
    }
    Ok(IsometryVerdict::Undecided)
}

/// `|LHS - RHS|` of Jacobi inversion for the torus with Gram `Q`:
/// `sum exp(-4 pi^2 tau N^T Q^-1 N) = vol / (4 pi tau)^(n/2) sum exp(-M^T Q M / (4 tau))`,
/// both sums over the box `|N|_inf <= truncation`.
pub fn jacobi_check(lattice: &Lattice, tau: f64, truncation: i64) -> Result<f64, ToriError> {
    if tau <= 0.0 {
        return Err(ToriError::Bound);
    }
    let to_f = |m: &[Vec<Q>]| -> Vec<Vec<f64>> {
        m.iter()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    };
    let g = to_f(&lattice.gram);
    let gi = to_f(&inverse(&lattice.gram).ok_or(ToriError::NotPositiveDefinite)?);
    let n = lattice.rank();
    let vol = lattice.determinant().to_f64().unwrap_or(f64::NAN).sqrt();
    let (mut lhs, mut rhs) = (0.0, 0.0);
    let mut v = vec![-truncation; n];
    loop {
        let form = |m: &[Vec<f64>]| -> f64 {
            (0..n)
                .map(|i| (0..n).map(|j| m[i][j] * v[i] as f64 * v[j] as f64).sum::<f64>())
                .sum()
        };
        lhs += (-4.0 * PI * PI * tau * form(&gi)).exp();
        rhs += (-form(&g) / (4.0 * tau)).exp();
        let mut k = 0;
        while k < n && v[k] == truncation {
            v[k] = -truncation;
            k += 1;
        }
        if k == n {
            break;
        }
        v[k] += 1;
    }
    rhs *= vol / (4.0 * PI * tau).powf(n as f64 / 2.0);
    Ok((lhs - rhs).abs())
}

/// Whether the first nonzero shell has an even count.
pub fn first_shell_even(t: &ThetaCoeffs) -> bool {
    t.counts
        .iter()
        .find(|(m, _)| !m.is_zero())
        .is_none_or(|(_, &c)| c % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn z2_counts() {
        let t = theta(&Lattice::integer(2), q(5, 1)).unwrap();
        let counts: Vec<u64> = (0..=5).map(|m| t.count(m)).collect();
        assert_eq!(counts, vec![1, 4, 4, 0, 4, 8]);
        assert!(first_shell_even(&t));
    }

    #[test]
    fn brute_force_agrees_on_a_skew_form() {
        let l = Lattice::from_int_gram("g", &[vec![3, 1, -1], vec![1, 4, 2], vec![-1, 2, 5]], 2).unwrap();
        let t = theta(&l, q(12, 1)).unwrap();
        let (s, g) = l.scaled_gram();
        let mut brute: BTreeMap<i128, u64> = BTreeMap::new();
        let r = 8;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    let m = quad(&g, &[a, b, c]);
                    if m <= 12 * s {
                        *brute.entry(m).or_insert(0) += 1;
                    }
                }
            }
        }
        assert_eq!(t.counts, brute);
    }

    #[test]
    fn scaling_shifts_norms() {
        let l = Lattice::hexagonal();
        let t = theta(&l, q(3, 1)).unwrap();
        let t2 = theta(&l.scaled(q(2, 1)), q(12, 1)).unwrap();
        let a: Vec<(Q, u64)> = t.shells().into_iter().map(|(m, c)| (m * q(4, 1), c)).collect();
        assert_eq!(a, t2.shells());
    }

    #[test]
    fn z2_versus_hexagonal() {
        assert!(!milnor_ball_check(&Lattice::integer(2), &Lattice::hexagonal(), q(1, 1)).unwrap());
        assert!(milnor_ball_check(&Lattice::hexagonal(), &Lattice::hexagonal(), q(3, 1)).unwrap());
        let hex = theta(&Lattice::hexagonal(), q(1, 1)).unwrap();
        assert_eq!((hex.scale, hex.count(2)), (2, 6));
    }

    #[test]
    fn extension_and_minimum() {
        let l = Lattice::integer(1).extend(q(1, 2)).unwrap();
        assert_eq!(minimum(&l).unwrap(), q(1, 4));
        assert!(Lattice::integer(1).extend(q(0, 1)).is_err());
        assert!(Lattice::integer(1).extend(q(1, 1)).is_err());
    }

    #[test]
    fn jacobi_inversion() {
        assert!(jacobi_check(&Lattice::integer(2), 0.7, 20).unwrap() < 1e-12);
        let g = Lattice::from_int_gram("A2", &[vec![2, 1], vec![1, 2]], 1).unwrap();
        assert!(jacobi_check(&g, 0.5, 20).unwrap() < 1e-10);
        assert!(jacobi_check(&g, 5.0, 20).unwrap() < 1e-12);
    }

    #[test]
    fn conway_sloane_pair() {
        let (a, b) = Lattice::conway_sloane(7, 13, 19, 49).unwrap();
        let ta = theta(&a, q(60, 1)).unwrap();
        let tb = theta(&b, q(60, 1)).unwrap();
        assert_eq!(ta, tb);
        // the twelfths cancel for these weights
        assert_eq!(ta.scale, 1);
        assert_eq!(minimum(&a).unwrap(), q(12, 1));
        assert_eq!(
            compare_isometry(&a, &b, 4).unwrap(),
            IsometryVerdict::Nonisometric { shells: 2 }
        );
        assert_ne!(reduced_gram_entries(&a), reduced_gram_entries(&b));
    }

    fn signed_permutation_conjugate(a: &[Vec<i128>], b: &[Vec<i128>]) -> bool {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            for signs in 0..(1u32 << n) {
                let sg = |i: usize| if signs >> i & 1 == 1 { -1 } else { 1 };
                if (0..n).all(|i| (0..n).all(|j| a[perm[i]][perm[j]] * sg(i) * sg(j) == b[i][j])) {
                    return true;
                }
            }
            // next permutation
            let Some(k) = (0..n - 1).rev().find(|&k| perm[k] < perm[k + 1]) else { return false };
            let l = (k + 1..n).rev().find(|&l| perm[l] > perm[k]).unwrap();
            perm.swap(k, l);
            perm[k + 1..].reverse();
        }
    }

    #[test]
    fn equal_weights_give_isometric_pair() {
        let (a, b) = Lattice::conway_sloane(5, 5, 5, 5).unwrap();
        assert!(signed_permutation_conjugate(&a.scaled_gram().1, &b.scaled_gram().1));
        let (c, d) = Lattice::conway_sloane(7, 13, 19, 49).unwrap();
        assert!(!signed_permutation_conjugate(&c.scaled_gram().1, &d.scaled_gram().1));
        assert!(theta(&a, q(40, 1)).unwrap().agree_up_to(&theta(&b, q(40, 1)).unwrap(), q(40, 1)));
    }

    #[test]
    fn conway_sloane_family_agrees() {
        for w in [(1, 2, 3, 4), (2, 3, 5, 7), (1, 1, 2, 3)] {
            let (a, b) = Lattice::conway_sloane(w.0, w.1, w.2, w.3).unwrap();
            let ta = theta(&a, q(5, 1)).unwrap();
            assert_eq!(ta, theta(&b, q(5, 1)).unwrap(), "{w:?}");
        }
    }
}
