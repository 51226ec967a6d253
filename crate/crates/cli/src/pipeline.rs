//! The molecular end-to-end run shared by `molsym` and the tests.
//!
//! Random draws come from one `ChaCha8Rng` seeded with `seed`, in this
//! order: distortion (3 per atom, if σ > 0), rotation axis, rotation angle
//! (if random). The same seed therefore reproduces a run on any platform.

use anyhow::{anyhow, Context};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unigroup::molsym::{
    find_symmetry_permutations, initial_group_guess, invariance_residual, operation_report, perturb,
    symmetrize_geometry, vector_pairs_from_permutations, OperationReport, SymmetryPermutations,
};
use unigroup::{lsf_group_correction, ConvergenceTrace, Error, FitConfig, Geometry64, Group64, Target};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rotation {
    None,
    Fixed(f64),
    /// Uniform angle in `(0, limit_deg]`.
    Random { limit_deg: f64 },
}

#[derive(Clone, Debug)]
pub struct MolsymOptions {
    pub tol: f64,
    pub distort: f64,
    pub rotation: Rotation,
    pub seed: u64,
    pub fit: FitConfig,
}

#[derive(Clone, Debug)]
pub struct MolsymOutcome {
    /// Permutations found on the input geometry.
    pub perms: SymmetryPermutations,
    /// Distorted geometry (before rotation).
    pub distorted: Geometry64,
    /// Geometry the fit targets: distorted, then rotated.
    pub target: Geometry64,
    /// Axis and angle (degrees) of the applied rotation.
    pub rotation: Option<([f64; 3], f64)>,
    pub initial: Group64,
    pub group: Group64,
    /// Fit trace with `S_Q` in Å².
    pub trace: ConvergenceTrace,
    pub converged: bool,
    /// Symmetrized target geometry; absent if the group never became
    /// table-consistent.
    pub symmetrized: Option<Geometry64>,
    /// `max |G_i·r_j − r_{p_i(j)}|` of the symmetrized geometry (Å).
    pub invariance: Option<f64>,
    /// Empty when a non-converged fit left operators unclassifiable.
    pub operations: Vec<OperationReport>,
}

/// Detect on `geom`, distort, guess, rotate, fit, symmetrize.
///
/// The permutation group is taken from the input geometry before it is
/// distorted, so `tol` only has to absorb the input's own imperfection.
pub fn run_molsym(geom: &Geometry64, opts: &MolsymOptions) -> Result<MolsymOutcome, Failure> {
    if !(opts.distort >= 0.0) {
        return Err(Failure::Input(anyhow!("--distort must be non-negative")));
    }
    let perms = find_symmetry_permutations(geom, opts.tol).map_err(|e| match e {
        Error::SymmetryClosure { .. } | Error::SearchLimit { .. } => Failure::Symmetry(
            anyhow::Error::from(e).context(format!("at tol = {} Å; try adjusting --tol", opts.tol)),
        ),
        other => Failure::Input(other.into()),
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let distorted = if opts.distort > 0.0 {
        perturb::distort(geom, opts.distort, &mut rng)
    } else {
        geom.clone()
    };
    let initial = initial_group_guess(&distorted, &perms).map_err(|e| match e {
        // Distance-compatible but non-geometric permutations give rank-deficient guesses.
        Error::Singular { .. } => Failure::Symmetry(anyhow::Error::from(e).context(format!(
            "{} permutations at tol = {} Å include non-geometric ones; try a smaller --tol",
            perms.order(),
            opts.tol
        ))),
        other => Failure::Input(anyhow::Error::from(other).context("building the initial group")),
    })?;

    let angle = match opts.rotation {
        Rotation::None => None,
        Rotation::Fixed(deg) => Some((perturb::random_axis(&mut rng), deg)),
        Rotation::Random { limit_deg } => {
            if !(limit_deg > 0.0) {
                return Err(Failure::Input(anyhow!("rotation limit must be positive")));
            }
            let axis = perturb::random_axis(&mut rng);
            Some((axis, perturb::random_angle_deg(&mut rng, limit_deg)))
        }
    };
    let target = match angle {
        Some((axis, deg)) => perturb::rotate(&distorted, &perturb::rotation_matrix(&axis, deg)),
        None => distorted.clone(),
    };

    let pairs = vector_pairs_from_permutations(&target, &perms).context("building vector pairs")?;
    let (pairs, scale) = pairs.normalized().context("normalizing vector pairs")?;
    let out = lsf_group_correction(&initial, &Target::Pairs(pairs), &opts.fit).context("fitting")?;
    let mut trace = out.trace;
    trace.scale_s_q(scale * scale);

    let (symmetrized, invariance) = match symmetrize_geometry(&target, &out.group, &perms) {
        Ok(sym) => {
            let r = invariance_residual(&sym, &out.group, &perms).context("checking invariance")?;
            (Some(sym), Some(r))
        }
        Err(_) if !out.converged => (None, None),
        Err(e) => return Err(Failure::Input(anyhow::Error::from(e).context("symmetrizing"))),
    };
    let operations = match operation_report(&out.group) {
        Ok(ops) => ops,
        Err(_) if !out.converged => Vec::new(),
        Err(e) => return Err(Failure::Input(anyhow::Error::from(e).context("classifying operations"))),
    };

    Ok(MolsymOutcome {
        perms,
        distorted,
        target,
        rotation: angle.map(|(a, d)| ([a.x, a.y, a.z], d)),
        initial,
        group: out.group,
        trace,
        converged: out.converged,
        symmetrized,
        invariance,
        operations,
    })
}
