//! Seeded distortions and rotations of geometries.
//!
//! Callers supply the generator; the CLI uses `ChaCha8Rng::seed_from_u64`
//! so traces are reproducible across platforms.

use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use rand::Rng;

use crate::molsym::MolecularGeometry;
use crate::scalar::Real;

/// Adds an independent uniform displacement in `[−sigma, sigma]` (Å) to
/// every coordinate.
pub fn distort<T: Real, R: Rng + ?Sized>(geom: &MolecularGeometry<T>, sigma: f64, rng: &mut R) -> MolecularGeometry<T> {
    if sigma <= 0.0 {
        return geom.clone();
    }
    geom.map_positions(|p| p.map(|c| c + T::lit(rng.random_range(-sigma..=sigma))))
}

/// Uniform direction on the unit sphere.
pub fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
}

/// Angle uniform in `(0, limit_deg]`.
pub fn random_angle_deg<R: Rng + ?Sized>(rng: &mut R, limit_deg: f64) -> f64 {
    limit_deg * (1.0 - rng.random::<f64>())
}

pub fn rotation_matrix(axis: &Vector3<f64>, angle_deg: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle_deg.to_radians()).into_inner()
}

/// Rotates the geometry about its centroid.
pub fn rotate<T: Real>(geom: &MolecularGeometry<T>, rot: &Matrix3<f64>) -> MolecularGeometry<T> {
    let c = geom.centroid();
    let rot: Matrix3<T> = rot.map(T::lit);
    geom.map_positions(|p| rot * (p - c) + c)
}
