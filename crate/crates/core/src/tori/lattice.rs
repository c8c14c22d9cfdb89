use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::ToriError;

pub type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

/// A full-rank lattice given by its Gram matrix, with the basis kept when
/// it has rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub name: String,
    /// Basis vectors as rows.
    pub basis: Option<Vec<Vec<Q>>>,
    pub gram: Vec<Vec<Q>>,
}

impl Lattice {
    pub fn from_gram(name: &str, gram: Vec<Vec<Q>>) -> Result<Self, ToriError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(ToriError::Shape);
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(ToriError::NotPositiveDefinite);
                }
            }
        }
        // leading minors positive, by exact elimination
        let mut m = gram.clone();
        for k in 0..n {
            if !m[k][k].is_positive() {
                return Err(ToriError::NotPositiveDefinite);
            }
            for i in k + 1..n {
                let f = m[i][k] / m[k][k];
                for j in k..n {
                    let t = m[k][j];
                    m[i][j] -= f * t;
                }
            }
        }
        Ok(Lattice {
            name: name.to_string(),
            basis: None,
            gram,
        })
    }

    pub fn from_basis(name: &str, basis: Vec<Vec<Q>>) -> Result<Self, ToriError> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|r| r.len() != n) {
            return Err(ToriError::Shape);
        }
        let gram = (0..n)
            .map(|i| (0..n).map(|j| dot(&basis[i], &basis[j])).collect())
            .collect();
        let mut l = Self::from_gram(name, gram)?;
        l.basis = Some(basis);
        Ok(l)
    }

    pub fn from_int_gram(name: &str, gram: &[Vec<i128>], scale: i128) -> Result<Self, ToriError> {
        Self::from_gram(
            name,
            gram.iter().map(|r| r.iter().map(|&x| q(x, scale)).collect()).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn determinant(&self) -> Q {
        determinant(&self.gram)
    }

    /// Smallest `s > 0` with `s * gram` integral.
    pub fn scale(&self) -> i128 {
        self.gram
            .iter()
            .flatten()
            .fold(1i128, |acc, x| num_integer::lcm(acc, *x.denom()))
    }

    /// Integer Gram matrix `scale * gram`.
    pub fn scaled_gram(&self) -> (i128, Vec<Vec<i128>>) {
        let s = self.scale();
        let g = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| (x * Q::from_integer(s)).to_integer()).collect())
            .collect();
        (s, g)
    }

    /// Dual lattice: Gram `Q^-1`, basis `B^-T` when the basis is known.
    pub fn dual(&self) -> Result<Lattice, ToriError> {
        let gram = inverse(&self.gram).ok_or(ToriError::NotPositiveDefinite)?;
        let basis = match &self.basis {
            Some(b) => {
                let inv = inverse(b).ok_or(ToriError::NotPositiveDefinite)?;
                // rows of B^-T are the columns of B^-1
                Some((0..b.len()).map(|i| inv.iter().map(|r| r[i]).collect()).collect())
            }
            None => None,
        };
        Ok(Lattice {
            name: format!("{}*", self.name),
            basis,
            gram,
        })
    }

    /// Lattice scaled by `c`: norms scale by `c^2`.
    pub fn scaled(&self, c: Q) -> Lattice {
        Lattice {
            name: format!("{c}{}", self.name),
            basis: self
                .basis
                .as_ref()
                .map(|b| b.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()),
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|x| x * c * c).collect())
                .collect(),
        }
    }

    /// Orthogonal extension by one vector of length `eps`, which must be
    /// shorter than every nonzero lattice vector.
    pub fn extend(&self, eps: Q) -> Result<Lattice, ToriError> {
        let min = super::theta::minimum(self)?;
        let e2 = eps * eps;
        if !eps.is_positive() || e2 >= min {
            return Err(ToriError::ExtensionTooLong { eps2: e2.to_string(), min: min.to_string() });
        }
        let n = self.rank();
        let mut gram: Vec<Vec<Q>> = self
            .gram
            .iter()
            .map(|r| r.iter().copied().chain([Q::zero()]).collect())
            .collect();
        let mut last = vec![Q::zero(); n + 1];
        last[n] = e2;
        gram.push(last);
        let basis = self.basis.as_ref().map(|b| {
            let mut rows: Vec<Vec<Q>> = b.iter().map(|r| r.iter().copied().chain([Q::zero()]).collect()).collect();
            let mut l = vec![Q::zero(); n + 1];
            l[n] = eps;
            rows.push(l);
            rows
        });
        Ok(Lattice {
            name: format!("{}+", self.name),
            basis,
            gram,
        })
    }

    /// `Z^n`.
    pub fn integer(n: usize) -> Lattice {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        Self::from_basis(&format!("Z{n}"), basis).expect("identity basis")
    }

    /// Hexagonal lattice with minimal norm 1.
    pub fn hexagonal() -> Lattice {
        Self::from_gram("A2", vec![vec![q(1, 1), q(1, 2)], vec![q(1, 2), q(1, 1)]]).expect("positive")
    }

    /// `E8 + E8` from two copies of the `E8` Cartan matrix.
    pub fn e8_e8() -> Lattice {
        let e8 = e8_cartan();
        let mut g = vec![vec![0i128; 16]; 16];
        for b in 0..2 {
            for i in 0..8 {
                for j in 0..8 {
                    g[8 * b + i][8 * b + j] = e8[i][j];
                }
            }
        }
        Self::from_int_gram("E8+E8", &g, 1).expect("positive")
    }

    /// `D16+`: `D16` together with `(1/2, ..., 1/2)`.
    pub fn d16_plus() -> Lattice {
        let n = 16;
        let mut rows = Vec::with_capacity(n);
        rows.push(vec![q(1, 2); n]);
        for i in 1..n - 1 {
            let mut r = vec![Q::zero(); n];
            r[i] = Q::one();
            r[i + 1] = -Q::one();
            rows.push(r);
        }
        let mut r = vec![Q::zero(); n];
        r[n - 2] = Q::one();
        r[n - 1] = Q::one();
        rows.push(r);
        Self::from_basis("D16+", rows).expect("independent rows")
    }

    /// The pair `L+(a,b,c,d)`, `L-(a,b,c,d)`.
    pub fn conway_sloane(a: i128, b: i128, c: i128, d: i128) -> Result<(Lattice, Lattice), ToriError> {
        if a <= 0 || b <= 0 || c <= 0 || d <= 0 {
            return Err(ToriError::Parameters);
        }
        let w = [a, b, c, d];
        let vecs = |s: i128| {
            [
                [3 * s, -1, -1, -1],
                [1, 3 * s, 1, -1],
                [1, -1, 3 * s, 1],
                [1, 1, -1, 3 * s],
            ]
        };
        let build = |s: i128, name: String| {
            let v = vecs(s);
            let g: Vec<Vec<i128>> = (0..4)
                .map(|i| (0..4).map(|j| (0..4).map(|k| v[i][k] * v[j][k] * w[k]).sum()).collect())
                .collect();
            Self::from_int_gram(&name, &g, 12)
        };
        Ok((
            build(1, format!("L+({a},{b},{c},{d})"))?,
            build(-1, format!("L-({a},{b},{c},{d})"))?,
        ))
    }

    /// Parses a named lattice: `Z<n>`, `A2`, `E8+E8`, `D16+`, `L+:a,b,c,d`,
    /// `L-:a,b,c,d`.
    pub fn named(name: &str) -> Result<Lattice, ToriError> {
        let unknown = || ToriError::UnknownLattice(name.to_string());
        match name {
            "A2" | "hex" => return Ok(Self::hexagonal()),
            "E8+E8" | "e8e8" => return Ok(Self::e8_e8()),
            "D16+" | "d16p" => return Ok(Self::d16_plus()),
            _ => {}
        }
        if let Some(n) = name.strip_prefix('Z') {
            let n: usize = n.parse().map_err(|_| unknown())?;
            return if (1..=32).contains(&n) { Ok(Self::integer(n)) } else { Err(unknown()) };
        }
        if let Some((kind, args)) = name.split_once(':') {
            let p: Vec<i128> = args
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| unknown())?;
            if let [a, b, c, d] = p[..] {
                let (plus, minus) = Self::conway_sloane(a, b, c, d)?;
                return match kind {
                    "L+" => Ok(plus),
                    "L-" => Ok(minus),
                    _ => Err(unknown()),
                };
            }
        }
        Err(unknown())
    }

    /// Lattice file: rank, scale, then one basis row of integers per line;
    /// the basis is the rows divided by the scale.
    pub fn parse_file(text: &str, name: &str) -> Result<Lattice, ToriError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |msg: &str| ToriError::Format(msg.to_string());
        let rank: usize = lines.next().and_then(|l| l.parse().ok()).ok_or_else(|| bad("rank"))?;
        let scale: i128 = lines.next().and_then(|l| l.parse().ok()).ok_or_else(|| bad("scale"))?;
        if scale <= 0 {
            return Err(bad("scale must be positive"));
        }
        let rows = lines
            .map(|l| {
                l.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<i128>().map(|x| q(x, scale)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad("basis entry"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if rows.len() != rank {
            return Err(bad("row count differs from rank"));
        }
        Self::from_basis(name, rows)
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn e8_cartan() -> Vec<Vec<i128>> {
    // Dynkin diagram 1-2-3-4-5-6-7 with 8 attached to 5
    let mut g = vec![vec![0i128; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)] {
        g[i][j] = -1;
        g[j][i] = -1;
    }
    g
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Q::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    det
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let piv = a[k][k];
        for x in a[k].iter_mut() {
            *x /= piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k];
                for j in 0..2 * n {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
