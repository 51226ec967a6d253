//! The whole pipeline in `f32`, at single-precision thresholds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unigroup::molsym::{find_symmetry_permutations, initial_group_guess, library, perturb, vector_pairs_from_permutations};
use unigroup::{lsf_group_correction, multab_group_correction, FitConfig, Group32, MultabConfig, Target};

fn methane32() -> unigroup::molsym::MolecularGeometry<f32> {
    let g = library::methane();
    unigroup::molsym::load_xyz(&unigroup::molsym::save_xyz(&g, "methane")).unwrap()
}

#[test]
fn reconstruction_in_single_precision() {
    let geom = methane32();
    let s = find_symmetry_permutations(&geom, 1e-3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let distorted = perturb::distort(&geom, 0.3, &mut rng);
    let g0: Group32 = initial_group_guess(&distorted, &s).unwrap();
    let out = multab_group_correction(&g0, &MultabConfig { eps: 1e-4, max_iter: 20 }).unwrap();
    assert!(out.converged, "{:?}", out.trace);
    assert!(out.trace.len() <= 6);
}

#[test]
fn rotation_fit_in_single_precision() {
    let geom = methane32();
    let s = find_symmetry_permutations(&geom, 1e-3).unwrap();
    let g0: Group32 = initial_group_guess(&geom, &s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let axis = perturb::random_axis(&mut rng);
    let target = perturb::rotate(&geom, &perturb::rotation_matrix(&axis, 40.0));
    let (pairs, _) = vector_pairs_from_permutations(&target, &s).unwrap().normalized().unwrap();
    let cfg = FitConfig {
        eps_m: 1e-4,
        eps_q: 1e-5,
        eps_r: 1e-4,
        ..FitConfig::default()
    };
    let out = lsf_group_correction(&g0, &Target::Pairs(pairs), &cfg).unwrap();
    assert!(out.converged, "{:?}", &out.trace.rows[out.trace.len().saturating_sub(4)..]);
    assert!(out.trace.rows.last().unwrap().s_q <= 1e-6);
}
