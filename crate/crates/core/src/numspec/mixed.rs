use num_rational::Rational64;

/// Eigenvalues over `pi^2/d^2`, up to `cutoff`, of the square and the
/// half-square that share a spectrum under mixed conditions.
///
/// Square: `(m + 1/2)^2 + n^2`, `n >= 1, m >= 0`.
/// Triangle: `((m + 1/2)^2 + (n + 1/2)^2) / 2`, `m > n >= 0`.
pub fn mixed_bc_pair_spectra(cutoff: f64) -> (Vec<Rational64>, Vec<Rational64>) {
    if !(cutoff > 0.0) {
        return (Vec::new(), Vec::new());
    }
    // scaled by 4: (2m+1)^2 + 4n^2 and ((2m+1)^2 + (2n+1)^2) / 2
    let top = (4.0 * cutoff).floor() as i64;
    let top8 = (8.0 * cutoff).floor() as i64;
    let odd = |m: i64| (2 * m + 1) * (2 * m + 1);
    let mut square = Vec::new();
    let mut m = 0;
    while odd(m) + 4 <= top {
        let mut n = 1;
        while odd(m) + 4 * n * n <= top {
            square.push(Rational64::new(odd(m) + 4 * n * n, 4));
            n += 1;
        }
        m += 1;
    }
    let mut triangle = Vec::new();
    let mut n = 0;
    while odd(n + 1) + odd(n) <= top8 {
        let mut m = n + 1;
        while odd(m) + odd(n) <= top8 {
            triangle.push(Rational64::new(odd(m) + odd(n), 8));
            m += 1;
        }
        n += 1;
    }
    square.sort();
    triangle.sort();
    (square, triangle)
}
