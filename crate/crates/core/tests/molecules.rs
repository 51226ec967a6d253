//! Molecular checks on the shipped geometries and the built-in library.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unigroup::molsym::{
    find_symmetry_permutations, initial_group_guess, invariance_residual, library, load_xyz, perturb,
    symmetrize_geometry, vector_pairs_from_permutations, MolecularGeometry,
};
use unigroup::{lsf_group_correction, validate_table, FitConfig, Geometry64, Target};

fn data(name: &str) -> Geometry64 {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    load_xyz(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn shipped_geometries_have_expected_orders() {
    for (file, order) in [("CH4.xyz", 24), ("SF6.xyz", 48), ("C2H6.xyz", 12), ("C20.xyz", 120)] {
        let s = find_symmetry_permutations(&data(file), 1e-6).unwrap();
        assert_eq!(s.order(), order, "{file}");
        assert!(validate_table(&s.table().unwrap().rows()).is_valid(), "{file}");
    }
}

#[test]
fn exact_operators_map_atoms_onto_their_images() {
    for geom in [library::methane(), library::sulfur_hexafluoride(), library::ethane(), library::fullerene_c20()] {
        let s = find_symmetry_permutations(&geom, 1e-6).unwrap();
        let g = initial_group_guess(&geom, &s).unwrap();
        assert!(invariance_residual(&geom, &g, &s).unwrap() <= 1e-10);
    }
}

fn max_distance_change(a: &Geometry64, b: &Geometry64) -> f64 {
    let n = a.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((a.distance(i, j) - b.distance(i, j)).abs());
        }
    }
    worst
}

fn recovered_order(geom: &Geometry64, sigma: f64, seed: u64, tol_factor: f64) -> Option<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let distorted = perturb::distort(geom, sigma, &mut rng);
    let tol = tol_factor * max_distance_change(geom, &distorted);
    find_symmetry_permutations(&distorted, tol).ok().map(|s| s.order())
}

/// A true symmetry permutation compares two distorted distances, each off by
/// up to the maximal change δ, so only `tol ≥ 2δ` is guaranteed to keep it.
#[test]
fn order_recovered_with_tolerance_twice_the_distance_change() {
    for (geom, order, sigmas) in [
        (library::methane(), 24, &[0.05, 0.1, 0.2, 0.3][..]),
        (library::sulfur_hexafluoride(), 48, &[0.05, 0.1][..]),
        (library::fullerene_c20(), 120, &[0.05, 0.1][..]),
    ] {
        for &sigma in sigmas {
            for seed in 0..10 {
                assert_eq!(recovered_order(&geom, sigma, seed, 2.0), Some(order), "sigma {sigma}, seed {seed}");
            }
        }
    }
}

/// The 1.5× rule up to 0.3 Å does not hold: genuine permutations can need up
/// to 2δ, and at 0.3 Å a 2δ window also admits spurious ones for SF₆ and
/// C₂₀. Kept runnable with `--ignored`.
#[test]
#[ignore = "1.5x tolerance is below the 2x bound a distance-only search needs"]
fn order_recovered_with_tolerance_one_and_a_half_times_the_distance_change() {
    for (geom, order) in [
        (library::methane(), 24),
        (library::sulfur_hexafluoride(), 48),
        (library::fullerene_c20(), 120),
    ] {
        for sigma in [0.1, 0.2, 0.3] {
            for seed in 0..10 {
                assert_eq!(recovered_order(&geom, sigma, seed, 1.5), Some(order), "sigma {sigma}, seed {seed}");
            }
        }
    }
}

/// Converged flag, `‖R‖` per iteration, and final `S_ab / Σ‖b‖²`.
fn ethane_run(angle_deg: f64, seed: u64) -> (bool, Vec<f64>, f64) {
    let geom = library::ethane();
    let s = find_symmetry_permutations(&geom, 1e-6).unwrap();
    let g0 = initial_group_guess(&geom, &s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axis = perturb::random_axis(&mut rng);
    let target = perturb::rotate(&geom, &perturb::rotation_matrix(&axis, angle_deg));
    let (pairs, _) = vector_pairs_from_permutations(&target, &s).unwrap().normalized().unwrap();
    let scale = pairs.target_norm_squared();
    let out = lsf_group_correction(&g0, &Target::Pairs(pairs), &FitConfig::default()).unwrap();
    let norms = out.trace.rows.iter().map(|r| r.norm_r).collect();
    (out.converged, norms, out.trace.rows.last().unwrap().s_q / scale)
}

#[test]
fn ethane_rotated_86_degrees_is_recovered() {
    let (converged, norms, rel) = ethane_run(86.47, 1);
    assert!(converged);
    assert!(rel <= 1e-16, "relative S_ab = {rel}");
    // Exponential decay of the step: one order of magnitude per few iterations.
    let k = norms.iter().position(|&r| r < 1e-2).unwrap();
    assert!(norms[k..].windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-12));
}

#[test]
fn distorted_rotated_methane_reaches_table_consistency_quickly() {
    let geom = library::methane();
    let s = find_symmetry_permutations(&geom, 1e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5693);
    let distorted = perturb::distort(&geom, 0.5, &mut rng);
    let g0 = initial_group_guess(&distorted, &s).unwrap();
    let axis = perturb::random_axis(&mut rng);
    let target = perturb::rotate(&distorted, &perturb::rotation_matrix(&axis, 56.93));
    let (pairs, _) = vector_pairs_from_permutations(&target, &s).unwrap().normalized().unwrap();
    let cfg = FitConfig {
        eps_m: 1e-12,
        ..FitConfig::default()
    };
    let out = lsf_group_correction(&g0, &Target::Pairs(pairs), &cfg).unwrap();
    assert!(out.converged);
    let first = out.trace.rows.iter().position(|r| r.s_m <= 1e-12).unwrap() + 1;
    assert!(first <= 6, "S_M small only at iteration {first}");
    assert!(out.trace.len() <= 60);

    let sym = symmetrize_geometry(&target, &out.group, &s).unwrap();
    assert!(invariance_residual(&sym, &out.group, &s).unwrap() <= 1e-10);
    let again = symmetrize_geometry(&sym, &out.group, &s).unwrap();
    assert!(sym.max_displacement(&again) <= 1e-10);
}

#[test]
fn geometry_types_are_generic() {
    let g: MolecularGeometry<f32> = load_xyz("1\n\nH 0 0 0\n").unwrap();
    assert_eq!(g.len(), 1);
}
