use isodrum::billiards::{unfold, weyl_data, BaseTile, PlanarDomain};
use isodrum::numspec::{
    eigenspace_overlap, fd_residual, fd_spectrum, nodal_count, richardson, transplant_eigenvector,
    triangular_state, weyl_remainder, GridDomain,
};
use isodrum::permcat::{catalog, find_pair};
use isodrum::projgeom::{solve_transplantation_with, Boundary};

fn domains(name: &str, tile: &BaseTile) -> Option<(PlanarDomain, PlanarDomain)> {
    let (g1, g2) = find_pair(&catalog(), name).unwrap().graphs()?;
    Some((unfold(tile, &g1, 0).ok()?, unfold(tile, &g2, 0).ok()?))
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / y).fold(0.0, f64::max)
}

#[test]
fn planar_pairs_are_isospectral_on_the_grid() {
    let tiles = [BaseTile::half_square(1.0).unwrap(), BaseTile::rectangle(1.0, 0.5).unwrap()];
    let mut checked = 0;
    for p in catalog().iter().filter(|p| !p.is_corrupt()) {
        for tile in &tiles {
            let Some((a, b)) = domains(&p.name, tile) else { continue };
            let mut gaps = Vec::new();
            for n in [40, 80] {
                let ea = fd_spectrum(&GridDomain::new(&a, 1.0, n).unwrap(), 10).unwrap().eigenvalues;
                let eb = fd_spectrum(&GridDomain::new(&b, 1.0, n).unwrap(), 10).unwrap().eigenvalues;
                gaps.push(max_gap(&ea, &eb));
            }
            // the discrete operators are transplantable too, so the gap is
            // rounding noise on both grids rather than an O(h^2) error
            assert!(gaps.iter().all(|&g| g < 1e-9), "{} {}: {gaps:?}", p.name, tile.label);
            checked += 1;
        }
    }
    assert_eq!(checked, 12);
}

#[test]
fn triangular_states_sit_at_modes_9_and_21() {
    let (a, _) = domains("7_3", &BaseTile::half_square(1.0).unwrap()).unwrap();
    let grid = GridDomain::new(&a, 1.0, 40).unwrap();
    let s = fd_spectrum(&grid, 25).unwrap();
    let vectors = s.eigenvectors.as_ref().unwrap();
    for (m, n, mode) in [(2, 1, 9), (3, 1, 21)] {
        let (t, e) = triangular_state(m, n, &grid).unwrap();
        assert!((s.eigenvalues[mode - 1] / e - 1.0).abs() < 5e-3, "{:?}", s.eigenvalues);
        let overlap = eigenspace_overlap(&t, &[&vectors[mode - 1]]);
        assert!(overlap > 0.999, "mode {mode}: {overlap}");
    }
    assert_eq!(nodal_count(&triangular_state(2, 1, &grid).unwrap().0, &grid), 7);
    // at most n nodal domains for the n-th mode
    for (k, v) in vectors.iter().enumerate() {
        assert!(nodal_count(v, &grid) <= k + 1, "mode {}", k + 1);
    }
    assert_eq!(nodal_count(&vectors[0], &grid), 1);
}

#[test]
fn triangular_residual_is_second_order() {
    let (a, _) = domains("7_3", &BaseTile::half_square(1.0).unwrap()).unwrap();
    let res: Vec<f64> = [20, 40, 80]
        .iter()
        .map(|&n| {
            let g = GridDomain::new(&a, 1.0, n).unwrap();
            let (v, e) = triangular_state(2, 1, &g).unwrap();
            fd_residual(&g, &v, e)
        })
        .collect();
    for w in res.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{res:?}");
    }
}

#[test]
fn dirichlet_transplant_keeps_the_triangular_state() {
    let cat = catalog();
    let pair = find_pair(&cat, "7_3").unwrap();
    let (m, n) = pair.adjacency().unwrap();
    let t = solve_transplantation_with(&m, &n, Boundary::Dirichlet).unwrap();
    let (da, db) = domains("7_3", &BaseTile::half_square(1.0).unwrap()).unwrap();
    let a = GridDomain::new(&da, 1.0, 40).unwrap();
    let b = GridDomain::new(&db, 1.0, 40).unwrap();
    let (ta, _) = triangular_state(2, 1, &a).unwrap();
    let (tb, _) = triangular_state(2, 1, &b).unwrap();
    let psi = transplant_eigenvector(&t.matrix, &ta, &a, &b).unwrap();
    assert!(eigenspace_overlap(&psi, &[&tb]) > 0.999);

    // and the ground state goes to the partner's ground state
    let sa = fd_spectrum(&a, 1).unwrap();
    let sb = fd_spectrum(&b, 1).unwrap();
    let psi = transplant_eigenvector(&t.matrix, &sa.eigenvectors.as_ref().unwrap()[0], &a, &b).unwrap();
    assert!(eigenspace_overlap(&psi, &[&sb.eigenvectors.as_ref().unwrap()[0]]) > 0.999);
    assert!(fd_residual(&b, &psi, sb.eigenvalues[0]) < 1e-8 * sb.eigenvalues[0]);
}

#[test]
fn counting_function_remainder_stays_bounded() {
    let (a, _) = domains("7_3", &BaseTile::half_square(1.0).unwrap()).unwrap();
    let w = weyl_data(&a).unwrap();
    let coarse = fd_spectrum(&GridDomain::new(&a, 1.0, 40).unwrap(), 200).unwrap();
    let fine = fd_spectrum(&GridDomain::new(&a, 1.0, 80).unwrap(), 200).unwrap();
    let r = weyl_remainder(&richardson(&coarse.eigenvalues, &fine.eigenvalues), 1.0, w.area, w.perimeter, w.k);
    // no drift: window averages stay near zero and the spread does not grow
    let windows: Vec<(f64, f64)> = r
        .chunks(50)
        .map(|c| {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            (mean, c.iter().fold(0.0f64, |m, x| m.max(x.abs())))
        })
        .collect();
    for (mean, max) in &windows {
        assert!(mean.abs() < 0.5 && *max < 3.0, "{windows:?}");
    }
}
