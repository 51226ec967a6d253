//! Dense complex matrix primitives.
//!
//! Everything here works on [`CMatrix`] (column-major `DMatrix<Complex<T>>`).
//! The vectorization convention is column-major throughout: `vec(M)` stacks
//! the columns of `M`, and `vec(B·X·Aᵀ) = (A ⊗ B)·vec(X)`.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{CMatrix, CVector, Real};

/// A square matrix known to be unitary within [`Real::UNITARITY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T: Real>(CMatrix<T>);

impl<T: Real> Unitary<T> {
    /// Wraps `m` after checking `‖m·m⁺ − I‖_F ≤ tol`.
    pub fn new_checked(m: CMatrix<T>, tol: T) -> Result<Self> {
        ensure_square(&m)?;
        let defect = unitarity_defect(&m);
        if defect > tol {
            return Err(Error::NotUnitary {
                index: 0,
                defect: defect.as_f64(),
            });
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix<T> {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix<T> {
        self.0
    }

    /// The inverse, which for a unitary matrix is the adjoint.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }
}

/// Generator `R` of a unitary rotation `e^R`, with `R⁺ = −R`.
///
/// Only the anti-hermitian part of the input is ever stored.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiHermitian<T: Real>(CMatrix<T>);

impl<T: Real> AntiHermitian<T> {
    /// Projects `m` onto its anti-hermitian part `(m − m⁺)/2`.
    pub fn from_matrix(m: &CMatrix<T>) -> Result<Self> {
        ensure_square(m)?;
        Ok(Self(anti_hermitian_part(m)))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix<T> {
        &self.0
    }

    pub fn norm(&self) -> T {
        frobenius_norm(&self.0)
    }

    pub fn neg(&self) -> Self {
        Self(-&self.0)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|z| z * s))
    }
}

pub(crate) fn ensure_square<T: Real>(m: &CMatrix<T>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub(crate) fn ensure_same_dim<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<()> {
    ensure_square(a)?;
    ensure_square(b)?;
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(())
}

/// `‖A‖_F = sqrt(Tr(A⁺A)) = sqrt(Σ|A_αβ|²)`.
pub fn frobenius_norm<T: Real>(m: &CMatrix<T>) -> T {
    frobenius_norm_squared(m).sqrt()
}

pub fn frobenius_norm_squared<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// `[A, B] = AB − BA`.
pub fn commutator<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    ensure_same_dim(a, b)?;
    Ok(a * b - b * a)
}

pub fn hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()).map(|z| z * T::lit(0.5))
}

pub fn anti_hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m - m.adjoint()).map(|z| z * T::lit(0.5))
}

/// `‖M·M⁺ − I‖_F`.
pub fn unitarity_defect<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    frobenius_norm(&(m * m.adjoint() - CMatrix::<T>::identity(n, n)))
}

/// Nearest unitary matrix in the Frobenius norm, `(MM⁺)^{-1/2}·M`.
///
/// Computed as `U·V⁺` from the singular value decomposition `M = UΣV⁺`.
/// Fails when the smallest singular value is below
/// [`Real::RANK_TOL`] times the largest.
pub fn reunitarize<T: Real>(m: &CMatrix<T>) -> Result<Unitary<T>> {
    reunitarize_with_tol(m, T::lit(T::RANK_TOL))
}

pub fn reunitarize_with_tol<T: Real>(m: &CMatrix<T>, rank_tol: T) -> Result<Unitary<T>> {
    ensure_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Unitary(m.clone()));
    }
    let svd = m.clone().svd(true, true);
    let (max, min) = svd
        .singular_values
        .iter()
        .fold((T::zero(), T::max_value().unwrap()), |(hi, lo), &s| {
            (hi.max(s), lo.min(s))
        });
    if !(max > T::zero()) || min <= rank_tol * max {
        let ratio = if max > T::zero() { min / max } else { T::zero() };
        return Err(Error::Singular {
            ratio: ratio.as_f64(),
        });
    }
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    Ok(Unitary(u * v_t))
}

/// Exact `e^R` for anti-hermitian `R`.
///
/// `iR` is hermitian, so `e^R = V·diag(e^{−iλ})·V⁺` with `iR = V·diag(λ)·V⁺`.
pub fn exp_antihermitian<T: Real>(r: &AntiHermitian<T>) -> Unitary<T> {
    let n = r.dim();
    if n == 0 {
        return Unitary(r.0.clone());
    }
    let i = Complex::new(T::zero(), T::one());
    let h = hermitian_part(&r.0.map(|z| z * i));
    let eig = h.symmetric_eigen();
    let phases = DVector::from_iterator(
        n,
        eig.eigenvalues
            .iter()
            .map(|&l| Complex::new(l.cos(), -l.sin())),
    );
    let v = eig.eigenvectors;
    let scaled = DMatrix::from_fn(n, n, |a, b| v[(a, b)] * phases[b]);
    Unitary(scaled * v.adjoint())
}

/// Column-major stacking of the columns of `m`.
pub fn vec<T: Real>(m: &CMatrix<T>) -> CVector<T> {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec`] for an `n×n` matrix.
pub fn unvec<T: Real>(v: &CVector<T>, n: usize) -> Result<CMatrix<T>> {
    if v.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: v.len(),
        });
    }
    Ok(CMatrix::from_column_slice(n, n, v.as_slice()))
}

/// Kronecker product; block `(α, β)` of the result is `A_αβ·B`.
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

/// Minimum-norm least-squares solution of `L·x = p` for hermitian `L`.
///
/// Eigenvalues with `|λ| ≤ null_threshold·max|λ|` are treated as exact zeros.
pub fn solve_pinv<T: Real>(l: &CMatrix<T>, p: &CVector<T>, null_threshold: T) -> Result<CVector<T>> {
    let eig = hermitian_eigen(l)?;
    if p.len() != l.nrows() {
        return Err(Error::DimensionMismatch {
            expected: l.nrows(),
            found: p.len(),
        });
    }
    let max = eig
        .eigenvalues
        .iter()
        .fold(T::zero(), |acc, &x| acc.max(x.abs()));
    if !(max > T::zero()) {
        return Err(Error::DegenerateFit);
    }
    let cutoff = null_threshold * max;
    let v = &eig.eigenvectors;
    let coeffs = v.adjoint() * p;
    let mut x = CVector::zeros(l.nrows());
    let mut kept = 0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > cutoff {
            kept += 1;
            let w = coeffs[k] / Complex::from(lambda);
            x += v.column(k) * w;
        }
    }
    if kept == 0 {
        return Err(Error::DegenerateFit);
    }
    Ok(x)
}

/// Eigen-decomposition of a hermitian matrix; rejects inputs with
/// `‖L − L⁺‖_F > CHECK_TOL·max(1, ‖L‖_F)` (1e-8 in `f64`).
pub fn hermitian_eigen<T: Real>(
    l: &CMatrix<T>,
) -> Result<nalgebra::SymmetricEigen<Complex<T>, nalgebra::Dyn>> {
    ensure_square(l)?;
    let scale = frobenius_norm(l).max(T::one());
    let defect = frobenius_norm(&(l - l.adjoint()));
    if defect > T::lit(T::CHECK_TOL) * scale {
        return Err(Error::NotHermitian {
            defect: defect.as_f64(),
        });
    }
    Ok(hermitian_part(l).symmetric_eigen())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn cm(rows: &[&[(f64, f64)]]) -> CMatrix<f64> {
        let n = rows.len();
        CMatrix::from_fn(n, rows[0].len(), |i, j| {
            Complex::new(rows[i][j].0, rows[i][j].1)
        })
    }

    #[test]
    fn norm_cases() {
        assert_eq!(frobenius_norm(&CMatrix::<f64>::zeros(3, 3)), 0.0);
        let i3 = CMatrix::<f64>::identity(3, 3);
        assert!((frobenius_norm(&i3) - 3f64.sqrt()).abs() < 1e-15);
        let m = cm(&[&[(3.0, 0.0), (4.0, 0.0)], &[(0.0, 0.0), (0.0, 0.0)]]);
        assert!((frobenius_norm(&m) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_commutator() {
        let sx = cm(&[&[(0., 0.), (1., 0.)], &[(1., 0.), (0., 0.)]]);
        let sy = cm(&[&[(0., 0.), (0., -1.)], &[(0., 1.), (0., 0.)]]);
        let sz = cm(&[&[(1., 0.), (0., 0.)], &[(0., 0.), (-1., 0.)]]);
        let got = commutator(&sx, &sy).unwrap();
        let want = sz.map(|z| z * Complex::new(0.0, 2.0));
        assert!(frobenius_norm(&(got - want)) < 1e-15);

        let mut rng = rng(1);
        let a = random_matrix(&mut rng, 4);
        assert!(frobenius_norm(&commutator(&a, &a).unwrap()) < 1e-14);
        let i = CMatrix::identity(4, 4);
        assert!(frobenius_norm(&commutator(&a, &i).unwrap()) < 1e-14);
        assert!(matches!(
            commutator(&a, &CMatrix::identity(3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reunitarize_simple_cases() {
        let i = CMatrix::<f64>::identity(3, 3);
        let u = reunitarize(&i).unwrap();
        assert!(frobenius_norm(&(u.as_matrix() - &i)) < 1e-14);

        let d = cm(&[&[(2.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (0.5, 0.0)]]);
        let u = reunitarize(&d).unwrap();
        assert!(frobenius_norm(&(u.as_matrix() - CMatrix::identity(2, 2))) < 1e-14);
    }

    #[test]
    fn reunitarize_rejects_singular() {
        let m = cm(&[&[(1.0, 0.0), (2.0, 0.0)], &[(2.0, 0.0), (4.0, 0.0)]]);
        assert!(matches!(reunitarize(&m), Err(Error::Singular { .. })));
        assert!(matches!(
            reunitarize(&CMatrix::<f64>::zeros(2, 2)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn reunitarize_matches_svd_polar_oracle() {
        let mut r = rng(7);
        for _ in 0..10 {
            // M = U0·diag(s)·V0⁺ with s in [0.5, 2] has polar factor U0·V0⁺.
            let u0 = random_unitary(&mut r, 3);
            let v0 = random_unitary(&mut r, 3);
            let s = [0.5, 1.3, 2.0];
            let sigma = CMatrix::from_fn(3, 3, |i, j| {
                if i == j {
                    Complex::new(s[i], 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            });
            let m = &u0 * sigma * v0.adjoint();
            let want = &u0 * v0.adjoint();
            let got = reunitarize(&m).unwrap();
            assert!(frobenius_norm(&(got.as_matrix() - want)) < 1e-12);
            assert!(unitarity_defect(got.as_matrix()) < 1e-12);
        }
    }

    #[test]
    fn exp_cases() {
        let z = AntiHermitian::<f64>::zeros(3);
        assert!(frobenius_norm(&(exp_antihermitian(&z).into_inner() - CMatrix::identity(3, 3))) < 1e-15);

        let t = std::f64::consts::FRAC_PI_2;
        let r = AntiHermitian::from_matrix(&cm(&[&[(0., 0.), (-t, 0.)], &[(t, 0.), (0., 0.)]])).unwrap();
        let want = cm(&[&[(0., 0.), (-1., 0.)], &[(1., 0.), (0., 0.)]]);
        assert!(frobenius_norm(&(exp_antihermitian(&r).into_inner() - want)) < 1e-14);
    }

    #[test]
    fn exp_matches_taylor_oracle() {
        let mut r = rng(3);
        for _ in 0..5 {
            let gen = random_anti_hermitian(&mut r, 4, 1.0);
            let got = exp_antihermitian(&gen).into_inner();
            let want = taylor_exp(gen.as_matrix(), 30);
            assert!(frobenius_norm(&(got - want)) < 1e-10);
        }
    }

    #[test]
    fn vec_is_column_major() {
        let m = cm(&[&[(1., 0.), (3., 0.)], &[(2., 0.), (4., 0.)]]);
        let v = vec(&m);
        let want: Vec<f64> = v.iter().map(|z| z.re).collect();
        assert_eq!(want, vec![1.0, 2.0, 3.0, 4.0]);
        assert!(vec(&CMatrix::<f64>::zeros(3, 3)).iter().all(|z| z.norm() == 0.0));
        assert!(unvec(&v, 3).is_err());
    }

    #[test]
    fn kron_block_cases() {
        let i2 = CMatrix::<f64>::identity(2, 2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4, 4));
        let x = cm(&[&[(0., 0.), (1., 0.)], &[(1., 0.), (0., 0.)]]);
        let k = kron(&x, &i2);
        for r in 0..4 {
            for col in 0..4 {
                let want = if (r < 2) != (col < 2) && r % 2 == col % 2 { 1.0 } else { 0.0 };
                assert_eq!(k[(r, col)], Complex::new(want, 0.0));
            }
        }
    }

    #[test]
    fn pinv_cases() {
        let i = CMatrix::<f64>::identity(3, 3);
        let p = CVector::from_vec(vec![Complex::new(1.0, 2.0), Complex::new(-3.0, 0.5), Complex::new(0.0, 1.0)]);
        let x = solve_pinv(&i, &p, 1e-8).unwrap();
        assert!((x - &p).norm() < 1e-14);

        let l = cm(&[&[(2., 0.), (0., 0.)], &[(0., 0.), (0., 0.)]]);
        let p = CVector::from_vec(vec![Complex::new(4.0, 0.0), Complex::new(7.0, 0.0)]);
        let x = solve_pinv(&l, &p, 1e-8).unwrap();
        assert!((x[0] - Complex::new(2.0, 0.0)).norm() < 1e-14);
        assert!(x[1].norm() < 1e-14);

        assert!(matches!(
            solve_pinv(&CMatrix::<f64>::zeros(2, 2), &p, 1e-8),
            Err(Error::DegenerateFit)
        ));
        let nonherm = cm(&[&[(1., 0.), (1., 0.)], &[(0., 0.), (1., 0.)]]);
        assert!(matches!(solve_pinv(&nonherm, &p, 1e-8), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn pinv_matches_least_squares_oracle() {
        let mut r = rng(11);
        let n = 6;
        // PSD with a 2-dimensional null space.
        let b = CMatrix::from_fn(n, n - 2, |_, _| random_c(&mut r));
        let l = &b * b.adjoint();
        let p = CVector::from_fn(n, |_, _| random_c(&mut r));
        let got = solve_pinv(&l, &p, 1e-10).unwrap();
        let want = lstsq_min_norm(&l, &p);
        assert!((got - want).norm() < 1e-10);
    }
}
