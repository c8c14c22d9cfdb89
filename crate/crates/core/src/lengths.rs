//! Closed-lift counts of billiard words.
//!
//! A periodic orbit of the base tile bouncing off sides `g_1, ..., g_m` lifts
//! to closed orbits of the unfolded domain, one for each tile fixed by the
//! product of the corresponding gluing permutations. Equal counts for every
//! word mean equal length spectra.

use thiserror::Error;

use crate::permcat::{AdjacencySet, PairSpec, Permutation, COLORS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LengthsError {
    #[error("invalid letter {0}: words use sides 1, 2, 3")]
    InvalidLetter(u8),
    #[error("empty word")]
    EmptyWord,
    #[error("pair {0} has no usable generators")]
    Corrupt(String),
}

/// `Tr(M^(w_m) ... M^(w_1))`: tiles fixed by the product of the gluings.
pub fn lift_count(adj: &AdjacencySet, word: &[u8]) -> Result<usize, LengthsError> {
    if word.is_empty() {
        return Err(LengthsError::EmptyWord);
    }
    let mut p = Permutation::identity(adj.d());
    for &letter in word {
        if !(1..=COLORS as u8).contains(&letter) {
            return Err(LengthsError::InvalidLetter(letter));
        }
        p = p.then(adj.generator(letter as usize - 1));
    }
    Ok(p.fixed_count())
}

/// Outcome of comparing lift counts over all words up to some length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolengthReport {
    pub max_len: usize,
    /// `(length, words, total count on the first domain, on the second)`.
    pub per_length: Vec<(usize, usize, u64, u64)>,
    /// First word, in shortlex order, whose counts differ.
    pub witness: Option<Vec<u8>>,
}

impl IsolengthReport {
    pub fn isolength(&self) -> bool {
        self.witness.is_none()
    }
}

/// Compares lift counts of every word of length `1..=max_len`.
///
/// Words are walked breadth-first so the witness is a shortest one; each
/// product is obtained from its prefix by one composition.
pub fn compare_lift_counts(a: &AdjacencySet, b: &AdjacencySet, max_len: usize) -> IsolengthReport {
    let mut per_length = Vec::new();
    let mut witness = None;
    let id = (Permutation::identity(a.d()), Permutation::identity(b.d()));
    let mut level: Vec<(Vec<u8>, Permutation, Permutation)> = vec![(Vec::new(), id.0, id.1)];
    for len in 1..=max_len {
        let mut next = Vec::with_capacity(level.len() * COLORS);
        let (mut sa, mut sb) = (0u64, 0u64);
        for (word, pa, pb) in &level {
            for mu in 0..COLORS {
                let qa = pa.then(a.generator(mu));
                let qb = pb.then(b.generator(mu));
                let (ca, cb) = (qa.fixed_count(), qb.fixed_count());
                sa += ca as u64;
                sb += cb as u64;
                let mut w = word.clone();
                w.push(mu as u8 + 1);
                if ca != cb && witness.is_none() {
                    witness = Some(w.clone());
                }
                next.push((w, qa, qb));
            }
        }
        per_length.push((len, next.len(), sa, sb));
        if witness.is_some() {
            break;
        }
        level = next;
    }
    IsolengthReport {
        max_len,
        per_length,
        witness,
    }
}

/// Isolength comparison of a catalog pair.
pub fn isolength_check(pair: &PairSpec, max_len: usize) -> Result<IsolengthReport, LengthsError> {
    let (a, b) = pair
        .adjacency()
        .ok_or_else(|| LengthsError::Corrupt(pair.name.clone()))?;
    Ok(compare_lift_counts(&a, &b, max_len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcat::{catalog, find_pair, involution_from_cycles};

    fn adj_7_3() -> (AdjacencySet, AdjacencySet) {
        let cat = catalog();
        find_pair(&cat, "7_3").unwrap().adjacency().unwrap()
    }

    #[test]
    fn single_letters_count_boundary_tiles() {
        let (a, _) = adj_7_3();
        assert_eq!(lift_count(&a, &[1]).unwrap(), 3);
        for mu in 1..=3 {
            assert_eq!(lift_count(&a, &[mu, mu]).unwrap(), 7);
        }
        assert_eq!(lift_count(&a, &[4]), Err(LengthsError::InvalidLetter(4)));
        assert_eq!(lift_count(&a, &[]), Err(LengthsError::EmptyWord));
    }

    #[test]
    fn counts_are_cyclic_and_bounded() {
        let (a, _) = adj_7_3();
        let word = [1, 2, 3, 2, 1, 3];
        let c = lift_count(&a, &word).unwrap();
        for r in 0..word.len() {
            let mut w = word.to_vec();
            w.rotate_left(r);
            assert_eq!(lift_count(&a, &w).unwrap(), c);
        }
        assert!(c <= 7);
    }

    #[test]
    fn pair_7_3_is_isolength_to_length_8() {
        let report = isolength_check(find_pair(&catalog(), "7_3").unwrap(), 8).unwrap();
        assert!(report.isolength());
        assert_eq!(report.per_length.len(), 8);
        assert_eq!(report.per_length[7].1, 6561);
    }

    #[test]
    fn perturbed_pair_has_short_witness() {
        let (a, b) = adj_7_3();
        // b2 = (0 6)(1 4) becomes (0 6)(1 3)
        let gens = b.generators();
        let bad = [
            gens[0].clone(),
            involution_from_cycles("(0 6)(1 3)", 7).unwrap(),
            gens[2].clone(),
        ];
        let b_bad = AdjacencySet::new(&bad).unwrap();
        let report = compare_lift_counts(&a, &b_bad, 8);
        let w = report.witness.expect("perturbation detected");
        assert!(w.len() <= 4, "{w:?}");
    }
}
