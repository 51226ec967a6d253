//! Helpers shared by unit tests. Oracles here avoid the code paths they check.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{MultiplicationTable, Permutation};
use crate::linalg::AntiHermitian;
use crate::scalar::{CMatrix, CVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_c(r: &mut impl Rng) -> Complex<f64> {
    Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn random_matrix(r: &mut impl Rng, n: usize) -> CMatrix<f64> {
    CMatrix::from_fn(n, n, |_, _| random_c(r))
}

/// Haar-ish unitary from the QR factor of a random complex matrix.
pub fn random_unitary(r: &mut impl Rng, n: usize) -> CMatrix<f64> {
    random_matrix(r, n).qr().q()
}

pub fn random_anti_hermitian(r: &mut impl Rng, n: usize, norm: f64) -> AntiHermitian<f64> {
    let m = random_matrix(r, n);
    let a = (&m - m.adjoint()).map(|z| z * 0.5);
    let s = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    AntiHermitian::from_matrix(&a.map(|z| z * (norm / s))).unwrap()
}

pub fn taylor_exp(m: &CMatrix<f64>, terms: usize) -> CMatrix<f64> {
    let n = m.nrows();
    let mut acc = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..terms {
        term = &term * m / Complex::new(k as f64, 0.0);
        acc += &term;
    }
    acc
}

pub fn lstsq_min_norm(l: &CMatrix<f64>, p: &CVector<f64>) -> CVector<f64> {
    let pinv = l.clone().pseudo_inverse(1e-10 * l.norm()).unwrap();
    pinv * p
}

/// S₃ acting on three points, as permutations.
pub fn s3_perms() -> Vec<Permutation> {
    [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
    ]
    .iter()
    .map(|p| Permutation::new(p.to_vec()).unwrap())
    .collect()
}

/// Two-dimensional irreducible representation of S₃ (symmetries of a
/// triangle), aligned with [`s3_perms`], and its table.
pub fn s3_rep() -> (MultiplicationTable, Vec<CMatrix<f64>>) {
    let perms = s3_perms();
    let (table, _) = crate::group::table_from_permutations(&perms).unwrap();
    // Vertices of a triangle at angles 90°, 210°, 330°.
    let verts: Vec<[f64; 2]> = (0..3)
        .map(|k| {
            let a = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            [a.cos(), a.sin()]
        })
        .collect();
    // Solve G·[v0 v1] = [v_p(0) v_p(1)].
    let a = nalgebra::Matrix2::new(verts[0][0], verts[1][0], verts[0][1], verts[1][1]);
    let a_inv = a.try_inverse().unwrap();
    let mats = perms
        .iter()
        .map(|p| {
            let b = nalgebra::Matrix2::new(
                verts[p.image(0)][0],
                verts[p.image(1)][0],
                verts[p.image(0)][1],
                verts[p.image(1)][1],
            );
            let g = b * a_inv;
            CMatrix::from_fn(2, 2, |i, j| Complex::new(g[(i, j)], 0.0))
        })
        .collect();
    (table, mats)
}

/// Rotations by k·90° in the plane: an exact representation of Z₄.
pub fn z4_rep() -> (MultiplicationTable, Vec<CMatrix<f64>>) {
    let rows = (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect();
    let table = MultiplicationTable::new(rows).unwrap();
    let mats = (0..4)
        .map(|k| {
            let a = std::f64::consts::FRAC_PI_2 * k as f64;
            let (s, c) = a.sin_cos();
            let (s, c) = (s.round(), c.round());
            CMatrix::from_fn(2, 2, |i, j| {
                Complex::new([[c, -s], [s, c]][i][j], 0.0)
            })
        })
        .collect();
    (table, mats)
}

pub fn perturb(r: &mut impl Rng, mats: &[CMatrix<f64>], sigma: f64) -> Vec<CMatrix<f64>> {
    mats.iter()
        .map(|m| m.map(|z| z + Complex::new(r.random_range(-sigma..sigma), r.random_range(-sigma..sigma))))
        .collect()
}
