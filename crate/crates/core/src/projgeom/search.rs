use std::collections::HashSet;

use super::collineation::Collineation;
use super::space::ProjectiveSpace;
use crate::permcat::{AdjacencySet, ColoredGraph, PairSpec, Permutation, COLORS};

/// A pair of involution graphs built from one triple of collineations:
/// the action on points and the action on hyperplanes.
#[derive(Debug, Clone)]
pub struct IsospectralData {
    pub points: [Permutation; COLORS],
    pub hyperplanes: [Permutation; COLORS],
    pub cycle_rank: usize,
}

impl IsospectralData {
    pub fn d(&self) -> usize {
        self.points[0].len()
    }

    pub fn graphs(&self) -> (ColoredGraph, ColoredGraph) {
        let g = |gens: &[Permutation; COLORS]| {
            ColoredGraph::from_adjacency(&AdjacencySet::new(gens).expect("involutions"))
        };
        (g(&self.points), g(&self.hyperplanes))
    }

    /// Catalog record for this pair, so search output round-trips through the parser.
    pub fn to_pair_spec(&self, name: &str, group_label: &str) -> PairSpec {
        let text = |gens: &[Permutation; COLORS]| -> [String; COLORS] {
            std::array::from_fn(|i| gens[i].to_cycle_string())
        };
        PairSpec::from_cycles(
            name,
            group_label,
            self.d(),
            [text(&self.points), text(&self.hyperplanes)],
        )
    }
}

const COLOR_PERMS: [[usize; COLORS]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

type Code = Vec<(usize, usize, usize)>;

/// Key identifying a pair up to vertex relabeling of each graph, a global
/// color permutation and swapping the two members.
pub fn pair_key(g1: &ColoredGraph, g2: &ColoredGraph) -> (Code, Code) {
    COLOR_PERMS
        .iter()
        .map(|&perm| {
            let a = g1.recolored(perm).canonical_code();
            let b = g2.recolored(perm).canonical_code();
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .min()
        .expect("six color permutations")
}

/// Triples of nontrivial involutions whose point graphs are connected with
/// cycle rank at most `max_cycle_rank`, keeping only non-isomorphic pairs,
/// one per equivalence class.
///
/// A closed circuit is only admitted when it alternates between two colors,
/// i.e. it winds around a single corner of the base tile; any other circuit
/// would stack unfolded copies on top of each other.
///
/// Conjugating a whole triple relabels both graphs consistently, so the first
/// involution is pinned to one representative of its conjugacy class.
pub fn search_isospectral_data(
    space: &ProjectiveSpace,
    involutions: &[Collineation],
    max_cycle_rank: usize,
) -> Vec<IsospectralData> {
    let d = space.point_count();
    let invs: Vec<&Collineation> = involutions.iter().filter(|c| !c.is_identity()).collect();
    let moved: Vec<usize> = invs.iter().map(|c| c.points.moved_count()).collect();
    let class = conjugacy_classes(&invs);
    let targets: Vec<usize> = (0..=max_cycle_rank).map(|c| 2 * (d - 1 + c)).collect();
    let max_target = *targets.last().expect("at least the tree case");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut uf = vec![0usize; d];
    let reps: Vec<usize> = (0..invs.len()).filter(|&i| class[i] == i).collect();
    for &i in &reps {
        // the other two come from classes not below that of i
        let rest: Vec<usize> = (0..invs.len())
            .filter(|&j| j != i && class[j] >= class[i])
            .collect();
        for (a, &j) in rest.iter().enumerate() {
            if moved[i] + moved[j] >= max_target {
                continue;
            }
            for &k in &rest[a + 1..] {
                let total = moved[i] + moved[j] + moved[k];
                let Some(rank) = targets.iter().position(|&t| t == total) else {
                    continue;
                };
                let triple = [invs[i], invs[j], invs[k]];
                if !connected(&mut uf, triple.map(|c| &c.points))
                    || !connected(&mut uf, triple.map(|c| &c.hyperplanes))
                {
                    continue;
                }
                let data = IsospectralData {
                    points: triple.map(|c| c.points.clone()),
                    hyperplanes: triple.map(|c| c.hyperplanes.clone()),
                    cycle_rank: rank,
                };
                let (g1, g2) = data.graphs();
                if rank > 0
                    && !(circuits_wind_around_corners(&g1)
                        && circuits_wind_around_corners(&g2)
                        && planar_corner_angles(&data.points)
                        && planar_corner_angles(&data.hyperplanes))
                {
                    continue;
                }
                if g1.is_isomorphic(&g2) {
                    continue;
                }
                if seen.insert(pair_key(&g1, &g2)) {
                    out.push(data);
                }
            }
        }
    }
    out
}

/// Every closed circuit uses exactly two colors and has at least four edges.
pub fn circuits_wind_around_corners(g: &ColoredGraph) -> bool {
    let edges = g.cycle_edges();
    if edges.is_empty() {
        return true;
    }
    let mut colors: Vec<usize> = edges.iter().map(|e| e.color).collect();
    colors.sort_unstable();
    colors.dedup();
    colors.len() == 2 && edges.len() >= 4
}

/// Whether a triangle can carry the unfolding without overlap.
///
/// Around the corner between sides `a` and `b`, an orbit of `<g_a, g_b>` of
/// `k` tiles turns through `k` times the corner angle. A closed orbit fixes
/// the angle at `2 pi / k`; an open one needs it strictly below `2 pi / k`.
/// The three angles must then be able to sum to `pi`.
pub fn planar_corner_angles(gens: &[Permutation; COLORS]) -> bool {
    use num_rational::Rational64;
    // angles in units of a full turn; the triangle sums to 1/2
    let mut fixed = Rational64::from_integer(0);
    let mut open_bound = Rational64::from_integer(0);
    let mut open_corners = 0;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let mut closed: Option<usize> = None;
        let mut longest_open = 1;
        let d = gens[a].len();
        let mut seen = vec![false; d];
        for start in 0..d {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let (mut tiles, mut glued) = (vec![start], 0);
            let mut i = 0;
            while i < tiles.len() {
                let x = tiles[i];
                for g in [&gens[a], &gens[b]] {
                    let y = g.apply(x);
                    if y != x {
                        glued += 1;
                        if !seen[y] {
                            seen[y] = true;
                            tiles.push(y);
                        }
                    }
                }
                i += 1;
            }
            // each gluing was seen from both ends
            if glued / 2 == tiles.len() {
                if closed.is_some_and(|k| k != tiles.len()) {
                    return false;
                }
                closed = Some(tiles.len());
            } else {
                longest_open = longest_open.max(tiles.len());
            }
        }
        match closed {
            Some(k) if longest_open >= k => return false,
            Some(k) => fixed += Rational64::new(1, k as i64),
            None => {
                open_corners += 1;
                open_bound += Rational64::new(1, longest_open as i64);
            }
        }
    }
    let half = Rational64::new(1, 2);
    if open_corners == 0 {
        fixed == half
    } else {
        fixed < half && fixed + open_bound > half
    }
}

/// Labels each involution with the smallest index in its conjugacy class
/// under the group generated by all of them.
fn conjugacy_classes(invs: &[&Collineation]) -> Vec<usize> {
    use std::collections::HashMap;
    let index: HashMap<&Permutation, usize> =
        invs.iter().enumerate().map(|(i, c)| (&c.points, i)).collect();
    let mut class = vec![usize::MAX; invs.len()];
    for start in 0..invs.len() {
        if class[start] != usize::MAX {
            continue;
        }
        class[start] = start;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for g in invs {
                let conj = g.points.then(&invs[x].points).then(&g.points);
                let y = index[&conj];
                if class[y] == usize::MAX {
                    class[y] = start;
                    stack.push(y);
                }
            }
        }
    }
    class
}

fn connected(uf: &mut [usize], gens: [&Permutation; COLORS]) -> bool {
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for (i, slot) in uf.iter_mut().enumerate() {
        *slot = i;
    }
    let mut components = uf.len();
    for g in gens {
        for x in 0..uf.len() {
            let (a, b) = (find(uf, x), find(uf, g.apply(x)));
            if a != b {
                uf[a] = b;
                components -= 1;
            }
        }
    }
    components == 1
}

/// Catalog entries whose graph pair matches no search result, and search
/// results matching no valid catalog entry (candidates for repairing a
/// flagged record).
pub fn unmatched(catalog: &[PairSpec], found: &[IsospectralData]) -> (Vec<String>, Vec<usize>) {
    let found_keys: Vec<_> = found
        .iter()
        .map(|f| {
            let (a, b) = f.graphs();
            pair_key(&a, &b)
        })
        .collect();
    let catalog_keys: Vec<_> = catalog
        .iter()
        .filter_map(|p| p.graphs().map(|(a, b)| (p.name.clone(), pair_key(&a, &b))))
        .collect();
    let missing = catalog_keys
        .iter()
        .filter(|(_, k)| !found_keys.contains(k))
        .map(|(n, _)| n.clone())
        .collect();
    let extra = found_keys
        .iter()
        .enumerate()
        .filter(|(_, k)| !catalog_keys.iter().any(|(_, c)| c == *k))
        .map(|(i, _)| i)
        .collect();
    (missing, extra)
}

/// Which counting equation a constraint solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintCase {
    /// `r q^2 / 2 = q^2 + q`, `q` even and not a square.
    EvenNonSquareTree,
    /// `r (q^2 - 1) / 2 = q^2 + q`, `q` odd and not a square.
    OddNonSquareTree,
    /// `r (p^4 - p) / 2 = p^4 + p^2` with `q = p^2`.
    SquareTree,
    /// `r (p^4 - p) / 2 = p^4 + p^2 + 1` with `q = p^2`.
    SquareOneCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintSolution {
    pub case: ConstraintCase,
    pub r: u64,
    pub q: u64,
    /// `sqrt(q)` in the square cases.
    pub p: Option<u64>,
}

/// Integer solutions with `r <= max_r` and `q <= max_q` of the counting
/// equations for planes built from `r` involutions of a single type.
pub fn constraint_table(max_r: u64, max_q: u64) -> Vec<ConstraintSolution> {
    use super::field::prime_power;
    let mut out = Vec::new();
    for q in 2..=max_q {
        let Some((_, k)) = prime_power(q as u32) else {
            continue;
        };
        let square = k % 2 == 0;
        let p = square.then(|| (1..=q).find(|p| p * p == q).unwrap());
        for r in 1..=max_r {
            let mut push = |case| out.push(ConstraintSolution { case, r, q, p });
            if !square && q % 2 == 0 && r * q * q == 2 * (q * q + q) {
                push(ConstraintCase::EvenNonSquareTree);
            }
            if !square && q % 2 == 1 && r * (q * q - 1) == 2 * (q * q + q) {
                push(ConstraintCase::OddNonSquareTree);
            }
            if let Some(p) = p {
                let lhs = r * (p.pow(4) - p);
                if lhs == 2 * (p.pow(4) + p * p) {
                    push(ConstraintCase::SquareTree);
                }
                if lhs == 2 * (p.pow(4) + p * p + 1) {
                    push(ConstraintCase::SquareOneCycle);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::{build_pg, enumerate_involutions};

    fn count(n: usize, q: u32, rank: usize) -> usize {
        let s = build_pg(n, q).unwrap();
        let invs = enumerate_involutions(&s).unwrap();
        search_isospectral_data(&s, &invs, rank).len()
    }

    #[test]
    fn fano_plane_gives_three_pairs() {
        assert_eq!(count(2, 2, 0), 3);
    }

    #[test]
    fn pg23_gives_nine_pairs() {
        assert_eq!(count(2, 3, 0), 9);
    }

    #[test]
    fn pg32_gives_four_pairs() {
        assert_eq!(count(3, 2, 0), 4);
    }

    #[test]
    fn pg24_gives_one_pair_with_a_circuit() {
        assert_eq!(count(2, 4, 1), 1);
    }

    #[test]
    fn constraint_solutions() {
        let t = constraint_table(12, 64);
        let of = |case| -> Vec<(u64, u64)> {
            t.iter().filter(|s| s.case == case).map(|s| (s.r, s.q)).collect()
        };
        assert_eq!(of(ConstraintCase::EvenNonSquareTree), vec![(3, 2)]);
        assert_eq!(of(ConstraintCase::OddNonSquareTree), vec![(3, 3)]);
        assert!(of(ConstraintCase::SquareTree).is_empty());
        assert_eq!(of(ConstraintCase::SquareOneCycle), vec![(3, 4)]);
    }

    #[test]
    fn results_round_trip_as_catalog_records() {
        let s = build_pg(2, 2).unwrap();
        let invs = enumerate_involutions(&s).unwrap();
        for (i, data) in search_isospectral_data(&s, &invs, 0).iter().enumerate() {
            let spec = data.to_pair_spec(&format!("pg22_{i}"), "PSL(3,2)");
            assert!(!spec.is_corrupt(), "{:?}", spec.flags);
            assert_eq!(spec.graphs().unwrap().0.cycle_rank(), 0);
        }
    }
}
