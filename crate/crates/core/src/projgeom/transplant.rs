use num_rational::Rational64;
use thiserror::Error;

use super::space::IncidenceMatrix;
use crate::matrix::{rational_rank, IntMatrix};
use crate::permcat::{AdjacencySet, Permutation, COLORS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransplantError {
    #[error("adjacency sets act on {0} and {1} tiles")]
    SizeMismatch(usize, usize),
    #[error("not transplantable: the commutant has no invertible element")]
    NotTransplantable,
    #[error("only permutation solutions: the domains are congruent")]
    Congruent { witness: IntMatrix },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Neumann,
    Dirichlet,
}

/// A matrix `T` with `T M^(mu) = N^(mu) T` for every color.
///
/// Rows are indexed by the tiles of the second domain, columns by those of
/// the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transplantation {
    pub matrix: IntMatrix,
    pub boundary: Boundary,
    /// Dimension of the solution space of the commutation equations.
    pub commutant_dim: usize,
    /// Nonzero entries per row.
    pub row_weight: usize,
    /// Present when `|T|` is the incidence matrix of a symmetric design.
    pub design: Option<IncidenceMatrix>,
}

impl Transplantation {
    /// `(T^2)_{ij} = 1 + 2 delta_ij`.
    pub fn square_is_j_plus_2i(&self) -> bool {
        let n = self.matrix.rows();
        self.matrix.mul(&self.matrix) == IntMatrix::ones(n).add(&IntMatrix::identity(n).scale(2))
    }
}

/// Gluing matrix of one color: the permutation matrix, with `-1` on the
/// diagonal at boundary tiles in the Dirichlet case.
pub fn gluing_matrix(adj: &AdjacencySet, color: usize, bc: Boundary) -> IntMatrix {
    match bc {
        Boundary::Neumann => adj.matrix(color).clone(),
        Boundary::Dirichlet => adj.dirichlet_matrix(color),
    }
}

/// Signed orbits of the pair action `(i, j) -> (tau(i), sigma(j))`.
///
/// The commutation equations say `T[tau(i)][sigma(j)] = s T[i][j]`, with
/// `s = -1` for each of `i`, `j` that is a boundary tile in the Dirichlet
/// case. Each orbit either carries a consistent sign pattern, giving one
/// basis vector of the commutant, or forces its entries to vanish.
pub fn commutant_basis(m: &AdjacencySet, n: &AdjacencySet, bc: Boundary) -> Vec<Vec<(usize, i128)>> {
    let d = m.d();
    let total = d * d;
    let mut parent: Vec<usize> = (0..total).collect();
    let mut parity = vec![1i128; total]; // sign relative to parent
    let mut broken = vec![false; total];

    fn find(parent: &mut [usize], parity: &mut [i128], x: usize) -> (usize, i128) {
        let mut path = Vec::new();
        let mut r = x;
        while parent[r] != r {
            path.push(r);
            r = parent[r];
        }
        // compress, accumulating signs from the top down
        let mut acc = 1;
        for &v in path.iter().rev() {
            acc *= parity[v];
            parity[v] = acc;
            parent[v] = r;
        }
        (r, if path.is_empty() { 1 } else { parity[x] })
    }

    let sign = |p: &Permutation, x: usize| -> i128 {
        if bc == Boundary::Dirichlet && p.apply(x) == x {
            -1
        } else {
            1
        }
    };
    for mu in 0..COLORS {
        let (sigma, tau) = (m.generator(mu), n.generator(mu));
        for i in 0..d {
            for j in 0..d {
                let a = i * d + j;
                let b = tau.apply(i) * d + sigma.apply(j);
                let s = sign(tau, i) * sign(sigma, j);
                let (ra, pa) = find(&mut parent, &mut parity, a);
                let (rb, pb) = find(&mut parent, &mut parity, b);
                // T_b = s T_a, T_a = pa T_ra, T_b = pb T_rb
                if ra == rb {
                    if pb != s * pa {
                        broken[ra] = true;
                    }
                } else {
                    parent[rb] = ra;
                    parity[rb] = s * pa * pb;
                    broken[ra] |= broken[rb];
                }
            }
        }
    }
    let mut basis: Vec<Vec<(usize, i128)>> = Vec::new();
    let mut slot = vec![usize::MAX; total];
    for x in 0..total {
        let (r, p) = find(&mut parent, &mut parity, x);
        if broken[r] {
            continue;
        }
        if slot[r] == usize::MAX {
            slot[r] = basis.len();
            basis.push(Vec::new());
        }
        basis[slot[r]].push((x, p));
    }
    basis
}

/// Dimension of `{T : T M^(mu) = N^(mu) T}` by exact elimination on the
/// `3 d^2` linear equations. Independent of the orbit construction.
pub fn commutant_dimension(m: &AdjacencySet, n: &AdjacencySet, bc: Boundary) -> usize {
    let d = m.d();
    let unknowns = d * d;
    let mut rows = Vec::new();
    for mu in 0..COLORS {
        let (a, b) = (gluing_matrix(m, mu, bc), gluing_matrix(n, mu, bc));
        for i in 0..d {
            for j in 0..d {
                // (T A)_ij - (B T)_ij = 0
                let mut row = vec![Rational64::from_integer(0); unknowns];
                for k in 0..d {
                    row[i * d + k] += Rational64::from_integer(a[(k, j)] as i64);
                    row[k * d + j] -= Rational64::from_integer(b[(i, k)] as i64);
                }
                rows.push(row);
            }
        }
    }
    let nrows = rows.len();
    unknowns - rational_rank(nrows, unknowns, rows.into_iter().flatten().collect())
}

/// Largest commutant dimension searched exhaustively; above it only
/// combinations of at most two basis vectors are tried.
pub const EXHAUSTIVE_DIM: usize = 8;

/// Neumann transplantation between two gluing patterns.
pub fn solve_transplantation(m: &AdjacencySet, n: &AdjacencySet) -> Result<Transplantation, TransplantError> {
    solve_transplantation_with(m, n, Boundary::Neumann)
}

/// Finds an invertible `T` with entries in `{0, 1}` (Neumann) or
/// `{0, 1, -1}` (Dirichlet), constant row weight and as few nonzeros per row
/// as possible. Reports congruence when a signed permutation solves the
/// equations.
pub fn solve_transplantation_with(
    m: &AdjacencySet,
    n: &AdjacencySet,
    bc: Boundary,
) -> Result<Transplantation, TransplantError> {
    let d = m.d();
    if n.d() != d {
        return Err(TransplantError::SizeMismatch(d, n.d()));
    }
    let basis = commutant_basis(m, n, bc);
    let k = basis.len();
    let coeffs: &[i128] = match bc {
        Boundary::Neumann => &[0, 1],
        Boundary::Dirichlet => &[0, 1, -1],
    };
    let mut best: Option<(usize, IntMatrix)> = None;
    let mut congruent: Option<IntMatrix> = None;
    let mut consider = |c: &[i128]| {
        // fix the global sign
        if c.iter().find(|&&x| x != 0) != Some(&1) {
            return;
        }
        let mut t = IntMatrix::zeros(d, d);
        for (b, &cb) in basis.iter().zip(c) {
            if cb != 0 {
                for &(x, s) in b {
                    t[(x / d, x % d)] = cb * s;
                }
            }
        }
        let weights: Vec<usize> = (0..d)
            .map(|i| t.row(i).iter().filter(|&&v| v != 0).count())
            .collect();
        if weights.iter().any(|&w| w != weights[0]) {
            return;
        }
        if bc == Boundary::Neumann && t.row_sums().iter().any(|&s| s != weights[0] as i128) {
            return;
        }
        if !matches!(t.determinant(), Ok(det) if det != 0) {
            return;
        }
        if weights[0] == 1 {
            congruent.get_or_insert(t);
            return;
        }
        if best.as_ref().is_none_or(|(w, _)| weights[0] < *w) {
            best = Some((weights[0], t));
        }
    };
    if k <= EXHAUSTIVE_DIM {
        let base = coeffs.len();
        let mut c = vec![0i128; k];
        for code in 1..base.pow(k as u32) {
            let mut r = code;
            for slot in c.iter_mut() {
                *slot = coeffs[r % base];
                r /= base;
            }
            consider(&c);
        }
    } else {
        let mut c = vec![0i128; k];
        for a in 0..k {
            for &ca in &coeffs[1..] {
                c[a] = ca;
                consider(&c);
                for b in a + 1..k {
                    for &cb in &coeffs[1..] {
                        c[b] = cb;
                        consider(&c);
                        c[b] = 0;
                    }
                }
                c[a] = 0;
            }
        }
    }
    if let Some(witness) = congruent {
        return Err(TransplantError::Congruent { witness });
    }
    let (row_weight, matrix) = best.ok_or(TransplantError::NotTransplantable)?;
    let magnitude = IntMatrix::from_fn(d, d, |i, j| matrix[(i, j)].abs());
    Ok(Transplantation {
        design: IncidenceMatrix::from_matrix(magnitude),
        matrix,
        boundary: bc,
        commutant_dim: k,
        row_weight,
    })
}

/// Checks `T M_w T^t = J + 2 N_w` for every word `w` of length at most
/// `max_len` in the gluing matrices, `M_w` and `N_w` being the products
/// along `w` on each side.
pub fn word_identity_holds(t: &IntMatrix, m: &AdjacencySet, n: &AdjacencySet, max_len: usize) -> bool {
    let d = m.d();
    let j = IntMatrix::ones(d);
    let tt = t.transpose();
    let mut frontier = vec![(IntMatrix::identity(d), IntMatrix::identity(d))];
    for _ in 0..=max_len {
        for (mw, nw) in &frontier {
            if t.mul(mw).mul(&tt) != j.add(&nw.scale(2)) {
                return false;
            }
        }
        frontier = frontier
            .iter()
            .flat_map(|(mw, nw)| (0..COLORS).map(move |mu| (mw.mul(m.matrix(mu)), nw.mul(n.matrix(mu)))))
            .collect();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcat::{catalog, find_pair};

    fn adj(name: &str) -> (AdjacencySet, AdjacencySet) {
        let cat = catalog();
        find_pair(&cat, name).unwrap().adjacency().unwrap()
    }

    #[test]
    fn pair_7_3_transplants_through_a_fano_incidence_matrix() {
        let (m, n) = adj("7_3");
        let t = solve_transplantation(&m, &n).unwrap();
        assert_eq!(t.row_weight, 3);
        let design = t.design.as_ref().unwrap();
        assert_eq!((design.k, design.lambda), (3, 1));
        assert_eq!(
            t.matrix.mul(&t.matrix.transpose()),
            IntMatrix::ones(7).add(&IntMatrix::identity(7).scale(2))
        );
        for mu in 0..COLORS {
            assert_eq!(t.matrix.mul(m.matrix(mu)), n.matrix(mu).mul(&t.matrix));
        }
        assert!(word_identity_holds(&t.matrix, &m, &n, 5));
    }

    #[test]
    fn orbit_basis_matches_elimination() {
        for name in ["7_1", "7_3", "13_1", "15_1"] {
            let (m, n) = adj(name);
            for bc in [Boundary::Neumann, Boundary::Dirichlet] {
                assert_eq!(
                    commutant_basis(&m, &n, bc).len(),
                    commutant_dimension(&m, &n, bc),
                    "{name} {bc:?}"
                );
            }
        }
    }

    #[test]
    fn identical_gluings_are_congruent() {
        let (m, _) = adj("7_3");
        let err = solve_transplantation(&m, &m).unwrap_err();
        let TransplantError::Congruent { witness } = err else {
            panic!("expected congruence, got {err:?}");
        };
        assert!(witness.is_permutation_matrix());
    }

    #[test]
    fn dirichlet_solution_commutes_with_signed_gluings() {
        let (m, n) = adj("7_3");
        let t = solve_transplantation_with(&m, &n, Boundary::Dirichlet).unwrap();
        for mu in 0..COLORS {
            assert_eq!(
                t.matrix.mul(&m.dirichlet_matrix(mu)),
                n.dirichlet_matrix(mu).mul(&t.matrix)
            );
        }
        assert!(t.matrix.determinant().unwrap() != 0);
    }

    #[test]
    fn every_valid_catalog_pair_transplants() {
        for p in catalog() {
            let Some((m, n)) = p.adjacency() else {
                continue;
            };
            for bc in [Boundary::Neumann, Boundary::Dirichlet] {
                let t = solve_transplantation_with(&m, &n, bc).unwrap();
                for mu in 0..COLORS {
                    let (a, b) = (gluing_matrix(&m, mu, bc), gluing_matrix(&n, mu, bc));
                    assert_eq!(t.matrix.mul(&a), b.mul(&t.matrix), "{} {bc:?}", p.name);
                }
                assert!(t.design.is_some(), "{}", p.name);
            }
            if p.d == 7 {
                assert!(solve_transplantation(&m, &n).unwrap().square_is_j_plus_2i());
            }
        }
    }

    #[test]
    fn periodic_matrix_is_a_relabeled_fano_incidence() {
        let rows = [
            [1, 0, 0, 1, 0, 0, 1],
            [0, 1, 0, 0, 1, 0, 1],
            [0, 0, 1, 0, 0, 1, 1],
            [1, 0, 0, 0, 1, 1, 0],
            [0, 1, 0, 1, 0, 1, 0],
            [0, 0, 1, 1, 1, 0, 0],
            [1, 1, 1, 0, 0, 0, 0],
        ];
        let t = IntMatrix::from_rows(&rows);
        let design = IncidenceMatrix::from_matrix(t.clone()).unwrap();
        assert_eq!((design.k, design.lambda), (3, 1));
        // find a column permutation taking its blocks onto the canonical lines
        let fano = crate::projgeom::build_pg(2, 2).unwrap().incidence_matrix().t;
        let mut canonical: Vec<Vec<i128>> = (0..7).map(|i| fano.row(i).to_vec()).collect();
        canonical.sort();
        let found = permutations(7).into_iter().any(|perm| {
            let mut blocks: Vec<Vec<i128>> = (0..7)
                .map(|i| (0..7).map(|j| t[(i, perm[j])]).collect())
                .collect();
            blocks.sort();
            blocks == canonical
        });
        assert!(found);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn pair_21_1_has_row_weight_five() {
        let (m, n) = adj("21_1");
        let t = solve_transplantation(&m, &n).unwrap();
        assert_eq!(t.row_weight, 5);
        assert_eq!(t.design.map(|d| (d.k, d.lambda)), Some((5, 1)));
    }
}
