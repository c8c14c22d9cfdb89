use std::collections::HashMap;

use num_rational::Rational64;
use thiserror::Error;

use super::field::{FieldError, FiniteField};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("projective dimension must be at least 1")]
    Dimension,
    #[error("PG({n},{q}) has too many points for dense matrices")]
    TooLarge { n: usize, q: u32 },
}

/// The projective space `PG(n, q)` with a fixed canonical labeling.
///
/// Points and hyperplanes are homogeneous vectors of length `n + 1` whose first
/// nonzero coordinate is 1, listed in lexicographic order. Hyperplane `h`
/// contains point `x` when `h . x = 0`.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    pub n: usize,
    pub q: u32,
    field: FiniteField,
    points: Vec<Vec<u8>>,
    point_index: HashMap<Vec<u8>, usize>,
    hyperplane_points: Vec<Vec<usize>>,
}

const MAX_POINTS: usize = 5000;

pub fn build_pg(n: usize, q: u32) -> Result<ProjectiveSpace, SpaceError> {
    let field = FiniteField::new(q)?;
    if n == 0 {
        return Err(SpaceError::Dimension);
    }
    let qq = q as usize;
    let count = (0..=n).try_fold(0usize, |acc, _| acc.checked_mul(qq)?.checked_add(1));
    // count here is 1 + q + ... + q^n
    match count {
        Some(c) if c <= MAX_POINTS => {}
        _ => return Err(SpaceError::TooLarge { n, q }),
    }
    let mut points = Vec::new();
    let len = n + 1;
    let total = qq.pow(len as u32);
    for code in 0..total {
        // most significant coordinate first so numeric order is lexicographic
        let v: Vec<u8> = (0..len)
            .map(|i| ((code / qq.pow((len - 1 - i) as u32)) % qq) as u8)
            .collect();
        if v.iter().find(|&&c| c != 0) == Some(&1) {
            points.push(v);
        }
    }
    let point_index: HashMap<Vec<u8>, usize> =
        points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let hyperplane_points = points
        .iter()
        .map(|h| {
            (0..points.len())
                .filter(|&j| dot(&field, h, &points[j]) == 0)
                .collect()
        })
        .collect();
    Ok(ProjectiveSpace {
        n,
        q,
        field,
        points,
        point_index,
        hyperplane_points,
    })
}

fn dot(f: &FiniteField, a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

impl ProjectiveSpace {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Vec<u8>] {
        &self.points
    }

    /// Coefficient vectors of the hyperplanes; same canonical list as the points.
    pub fn hyperplanes(&self) -> &[Vec<u8>] {
        &self.points
    }

    /// Indices of the points lying on hyperplane `h`.
    pub fn hyperplane_points(&self, h: usize) -> &[usize] {
        &self.hyperplane_points[h]
    }

    pub fn points_per_hyperplane(&self) -> usize {
        self.hyperplane_points[0].len()
    }

    /// Scales `v` so its first nonzero coordinate is 1; `None` for the zero vector.
    pub fn normalize(&self, v: &[u8]) -> Option<Vec<u8>> {
        let lead = *v.iter().find(|&&c| c != 0)?;
        let s = self.field.inv(lead);
        Some(v.iter().map(|&c| self.field.mul(c, s)).collect())
    }

    pub fn point_of(&self, v: &[u8]) -> Option<usize> {
        let w = self.normalize(v)?;
        self.point_index.get(&w).copied()
    }

    pub fn contains(&self, h: usize, x: usize) -> bool {
        dot(&self.field, &self.points[h], &self.points[x]) == 0
    }

    /// Hyperplane whose coefficient vector is proportional to `v`.
    pub fn hyperplane_of(&self, v: &[u8]) -> Option<usize> {
        self.point_of(v)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let n = self.point_count();
        let t = IntMatrix::from_fn(n, n, |h, x| self.contains(h, x) as i128);
        let q = self.q as i128;
        let k = (q.pow(self.n as u32) - 1) / (q - 1);
        let lambda = (q.pow(self.n as u32 - 1) - 1) / (q - 1);
        IncidenceMatrix {
            t,
            n: n as i128,
            k,
            lambda,
        }
    }
}

/// A square 0/1 incidence matrix of a symmetric design with parameters
/// `(N, k, lambda)`. Rows are blocks (hyperplanes), columns are points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub t: IntMatrix,
    pub n: i128,
    pub k: i128,
    pub lambda: i128,
}

impl IncidenceMatrix {
    /// Wraps a 0/1 matrix if it has constant row sums and `T T^t = lambda J + (k - lambda) I`.
    pub fn from_matrix(t: IntMatrix) -> Option<Self> {
        if !t.is_square() || !t.is_zero_one() || t.rows() < 2 {
            return None;
        }
        let k = t.row_sums()[0];
        let lambda = t.mul(&t.transpose())[(0, 1)];
        let m = IncidenceMatrix {
            n: t.rows() as i128,
            t,
            k,
            lambda,
        };
        m.satisfies_design_identity().then_some(m)
    }

    /// `T T^t = lambda J + (k - lambda) I` with all row and column sums `k`.
    pub fn satisfies_design_identity(&self) -> bool {
        let n = self.t.rows();
        let expected = IntMatrix::ones(n)
            .scale(self.lambda)
            .add(&IntMatrix::identity(n).scale(self.k - self.lambda));
        self.t.mul(&self.t.transpose()) == expected
            && self.t.row_sums().iter().all(|&s| s == self.k)
            && self.t.col_sums().iter().all(|&s| s == self.k)
    }

    /// `(T^t - (lambda / k) J) / (k - lambda)`, exact.
    pub fn inverse(&self) -> Vec<Vec<Rational64>> {
        let n = self.t.rows();
        let scale = Rational64::from_integer((self.k - self.lambda) as i64);
        let shift = Rational64::new(self.lambda as i64, self.k as i64);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (Rational64::from_integer(self.t[(j, i)] as i64) - shift) / scale)
                    .collect()
            })
            .collect()
    }

    /// Whether `T * inverse()` is exactly the identity.
    pub fn verify_inverse(&self) -> bool {
        let inv = self.inverse();
        let n = self.t.rows();
        let t = self.t.to_rational();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s: Rational64 = (0..n).map(|l| t[i][l] * inv[l][j]).sum();
                s == Rational64::from_integer((i == j) as i64)
            })
        })
    }
}
