//! Finite fields `F_q` by table lookup.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of a polynomial in `x` (lowest degree first). Extension fields
//! reduce modulo a fixed irreducible polynomial; for `F_4` that is
//! `x^2 = x + 1`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} is too large for table arithmetic")]
    TooLarge(u32),
}

/// Largest order supported by the lookup tables.
pub const MAX_ORDER: u32 = 256;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    q: usize,
    p: usize,
    k: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl std::fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Splits `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl FiniteField {
    pub fn new(q: u32) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        let (q, p) = (q as usize, p as usize);
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            irreducible_monic(p, k as usize)
        };
        let digits = |x: usize| -> Vec<usize> {
            let mut v = Vec::with_capacity(k as usize);
            let mut r = x;
            for _ in 0..k {
                v.push(r % p);
                r /= p;
            }
            v
        };
        let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum) as u8;
                let prod = if k == 1 {
                    vec![(a * b) % p]
                } else {
                    poly_mulmod(&da, &db, &modulus, p)
                };
                mul[a * q + b] = encode(&prod) as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field") as u8;
            }
        }
        Ok(FiniteField {
            q,
            p,
            k,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u8, e: usize) -> u8 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// The automorphism `x -> x^(p^e)`.
    pub fn frobenius(&self, a: u8, e: u32) -> u8 {
        (0..e).fold(a, |x, _| self.pow(x, self.p))
    }

    /// Whether `q` is a perfect square, i.e. the field has an involutory automorphism.
    pub fn is_square_order(&self) -> bool {
        self.k % 2 == 0
    }
}

fn poly_mulmod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let k = modulus.len() - 1;
    let mut prod = vec![0usize; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce: modulus is monic of degree k
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + p * p - c * m % p) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// Smallest monic irreducible polynomial of degree `k` over `F_p`, coefficients
/// lowest degree first. For `p = 2, k = 2` this is `x^2 + x + 1`.
fn irreducible_monic(p: usize, k: usize) -> Vec<usize> {
    let total = p.pow(k as u32);
    'candidates: for code in 0..total {
        let mut poly: Vec<usize> = (0..k).map(|i| (code / p.pow(i as u32)) % p).collect();
        poly.push(1);
        if poly[0] == 0 {
            continue;
        }
        // no monic factor of degree 1..=k/2
        for deg in 1..=k / 2 {
            for fcode in 0..p.pow(deg as u32) {
                let mut f: Vec<usize> = (0..deg).map(|i| (fcode / p.pow(i as u32)) % p).collect();
                f.push(1);
                if poly_rem(&poly, &f, p).iter().all(|&c| c == 0) {
                    continue 'candidates;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = (1..p).find(|&x| x * m[dm] % p == 1).unwrap();
    while r.len() > dm {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * mi % p) % p;
        }
        r.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(FiniteField::new(12), Err(FieldError::NotPrimePower(12)));
    }

    #[test]
    fn f4_uses_x_squared_equals_x_plus_one() {
        let f = FiniteField::new(4).unwrap();
        // x is encoded as 2, x + 1 as 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.add(2, 3), 1);
        assert_eq!(f.frobenius(2, 1), 3);
        assert!(f.is_square_order());
    }

    #[test]
    fn field_axioms_small_orders() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            let q = q as u8;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                // Frobenius is additive and multiplicative
                let e = f.degree();
                assert_eq!(f.frobenius(a, e), a);
            }
        }
    }
}
