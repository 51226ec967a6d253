//! Least-squares fit of a global unitary rotation `G_i → e^{−R}·G_i·e^{R}`.
//!
//! Targets are either matrices `Q_i` (minimize `Σ‖G_i − Q_i‖²`) or vector
//! pairs `(a_ij, b_ij)` (minimize `Σ‖G_i·a_ij − b_ij‖²`). The latter reduces
//! to the former with `Q_i = Σ_j |b_ij⟩⟨a_ij|`, since only the cross terms
//! depend on the rotation.
//!
//! The generator solves the generalized Sylvester equation
//!
//! ```text
//! Σ_i { R·H_i + H_i·R − (G_i·R·Q_i⁺ + Q_i⁺·R·G_i + G_i⁺·R·Q_i + Q_i·R·G_i⁺) } = P
//! H_i = ½(G_i·Q_i⁺ + Q_i⁺·G_i + Q_i·G_i⁺ + G_i⁺·Q_i)
//! P   = Σ_i [G_i, Q_i⁺] + [G_i⁺, Q_i]
//! ```
//!
//! either through the `n²×n²` supermatrix or, for `Q_i ≈ G_i`, through the
//! explicit `R = P/(4N)`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::ApproxGroup;
use crate::linalg::{
    anti_hermitian_part, exp_antihermitian, frobenius_norm, frobenius_norm_squared, kron, solve_pinv,
    unvec, vec, AntiHermitian,
};
use crate::multab::{correction_step, ensure_unitary, multab_error, reunitarize_group, violation_matrices};
use crate::scalar::{CMatrix, CVector, Real};
use crate::trace::{ConvergenceTrace, FitRow};

/// Target matrices `Q_i`, one per group element.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetMatrices<T: Real>(pub Vec<CMatrix<T>>);

/// Per element `i`, the pairs `(a_ij, b_ij)` with `G_i·a_ij ≈ b_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorPairs<T: Real> {
    dim: usize,
    pairs: Vec<Vec<(CVector<T>, CVector<T>)>>,
}

impl<T: Real> VectorPairs<T> {
    pub fn new(dim: usize, pairs: Vec<Vec<(CVector<T>, CVector<T>)>>) -> Result<Self> {
        for (a, b) in pairs.iter().flatten() {
            for v in [a, b] {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: v.len(),
                    });
                }
            }
        }
        Ok(Self { dim, pairs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn element(&self, i: usize) -> &[(CVector<T>, CVector<T>)] {
        &self.pairs[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[(CVector<T>, CVector<T>)]> {
        self.pairs.iter().map(Vec::as_slice)
    }

    /// Copy with every vector divided by `s = sqrt(Σ_ij ‖a_ij‖² / (N·n))`,
    /// so that `Σ_j a_ij·a_ij⁺` has trace `n` on average and `Q_i` lives on
    /// the scale of a unitary matrix. Returns the copy and `s`; misfits of
    /// the copy are those of the original divided by `s²`. The minimizing
    /// rotation is unchanged.
    pub fn normalized(&self) -> Result<(Self, T)> {
        let count = T::lit((self.order() * self.dim) as f64);
        let total = self
            .pairs
            .iter()
            .flatten()
            .fold(T::zero(), |acc, (a, _)| acc + a.norm_squared());
        if !(total > T::zero()) || count == T::zero() {
            return Err(Error::Invalid("cannot normalize empty or zero vector pairs".into()));
        }
        let s = (total / count).sqrt();
        let pairs = self
            .pairs
            .iter()
            .map(|e| e.iter().map(|(a, b)| (a.unscale(s), b.unscale(s))).collect())
            .collect();
        Ok((Self { dim: self.dim, pairs }, s))
    }

    /// `Σ_ij ‖b_ij‖²`, a natural scale for `S_ab`.
    pub fn target_norm_squared(&self) -> T {
        self.pairs
            .iter()
            .flatten()
            .fold(T::zero(), |acc, (_, b)| acc + b.norm_squared())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Target<T: Real> {
    Matrices(TargetMatrices<T>),
    Pairs(VectorPairs<T>),
}

impl<T: Real> Target<T> {
    fn order(&self) -> usize {
        match self {
            Target::Matrices(q) => q.0.len(),
            Target::Pairs(v) => v.order(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    /// Full generalized Sylvester solve through the supermatrix. This is a
    /// Newton step on `S_Q`: quadratic near the minimum, but it follows any
    /// stationary point (saddles included) when started far away.
    Supermatrix,
    /// `R = P/(4N)`, first order in `Q − G`. A fixed-length gradient step;
    /// linear convergence, and it needs `Q_i` on the scale of `G_i` (see
    /// [`VectorPairs::normalized`]).
    #[default]
    Simplified,
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "supermatrix" | "1" => Ok(Algo::Supermatrix),
            "simplified" | "2" => Ok(Algo::Simplified),
            other => Err(Error::Invalid(format!("unknown algo {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Table-violation threshold `ε_M`.
    pub eps_m: f64,
    /// Threshold `ε_Q` on `ΔS_Q`.
    pub eps_q: f64,
    /// Threshold `ε_R` on `‖R‖`.
    pub eps_r: f64,
    pub max_iter: usize,
    pub algo: Algo,
    /// Relative eigenvalue cutoff for the supermatrix solve.
    pub null_threshold: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            eps_m: 1e-10,
            eps_q: 1e-10,
            eps_r: 1e-8,
            max_iter: 200,
            algo: Algo::Simplified,
            null_threshold: 1e-8,
        }
    }
}

impl FitConfig {
    fn check(&self) -> Result<()> {
        let positive = [self.eps_m, self.eps_q, self.eps_r, self.null_threshold]
            .iter()
            .all(|&x| x > 0.0);
        if !positive || self.max_iter == 0 {
            return Err(Error::Invalid(
                "fit thresholds must be positive and max_iter at least 1".into(),
            ));
        }
        Ok(())
    }
}

fn check_targets<T: Real>(g: &ApproxGroup<T>, q: &TargetMatrices<T>) -> Result<()> {
    if q.0.len() != g.order() {
        return Err(Error::OrderMismatch {
            elements: q.0.len(),
            order: g.order(),
        });
    }
    for m in &q.0 {
        if m.nrows() != g.dim() || m.ncols() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                found: m.nrows(),
            });
        }
    }
    Ok(())
}

/// `Q_i = Σ_j b_ij·a_ij⁺`.
pub fn q_from_vector_pairs<T: Real>(v: &VectorPairs<T>) -> TargetMatrices<T> {
    let n = v.dim();
    TargetMatrices(
        v.iter()
            .map(|pairs| {
                pairs
                    .iter()
                    .fold(CMatrix::zeros(n, n), |acc, (a, b)| acc + b * a.adjoint())
            })
            .collect(),
    )
}

/// Right-hand side `P = Σ_i [G_i, Q_i⁺] + [G_i⁺, Q_i]`, anti-hermitian.
pub fn rhs_p<T: Real>(g: &ApproxGroup<T>, q: &TargetMatrices<T>) -> Result<CMatrix<T>> {
    check_targets(g, q)?;
    let n = g.dim();
    let mut p = CMatrix::<T>::zeros(n, n);
    for (gi, qi) in g.elements().iter().zip(&q.0) {
        let gh = gi.adjoint();
        let qh = qi.adjoint();
        p += gi * &qh - &qh * gi;
        p += &gh * qi - qi * &gh;
    }
    debug_assert!(
        frobenius_norm(&(&p + p.adjoint())) <= T::lit(T::UNITARITY_TOL) * frobenius_norm(&p).max(T::one())
    );
    Ok(p)
}

/// `H_i = ½(G_i·Q_i⁺ + Q_i⁺·G_i + Q_i·G_i⁺ + G_i⁺·Q_i)`.
pub fn h_matrix<T: Real>(gi: &CMatrix<T>, qi: &CMatrix<T>) -> CMatrix<T> {
    let gh = gi.adjoint();
    let qh = qi.adjoint();
    (gi * &qh + &qh * gi + qi * &gh + &gh * qi).map(|z| z * T::lit(0.5))
}

/// Supermatrix `L` with `L·vec(R)` equal to `vec` of the Sylvester left-hand side.
pub fn supermatrix_l<T: Real>(g: &ApproxGroup<T>, q: &TargetMatrices<T>) -> Result<CMatrix<T>> {
    check_targets(g, q)?;
    let n = g.dim();
    let id = CMatrix::<T>::identity(n, n);
    let mut l = CMatrix::<T>::zeros(n * n, n * n);
    for (gi, qi) in g.elements().iter().zip(&q.0) {
        let h = h_matrix(gi, qi);
        l += kron(&h.transpose(), &id) + kron(&id, &h);
        l -= kron(&qi.conjugate(), gi);
        l -= kron(&gi.transpose(), &qi.adjoint());
        l -= kron(&qi.transpose(), &gi.adjoint());
        l -= kron(&gi.conjugate(), qi);
    }
    Ok(l)
}

/// Solves `L·vec(R) = vec(P)` by a truncated eigen-decomposition and keeps
/// the anti-hermitian part; the hermitian null space of `L` drops out.
pub fn solve_r_supermatrix<T: Real>(
    g: &ApproxGroup<T>,
    q: &TargetMatrices<T>,
    null_threshold: T,
) -> Result<AntiHermitian<T>> {
    let p = rhs_p(g, q)?;
    if frobenius_norm(&p) == T::zero() {
        return Ok(AntiHermitian::zeros(g.dim()));
    }
    let l = supermatrix_l(g, q)?;
    let mut x = solve_pinv(&l, &vec(&p), null_threshold)?;
    // Real G and Q give a real system; near-null eigenvalues would otherwise
    // amplify rounding-level imaginary parts into the step.
    let is_real = |m: &CMatrix<T>| m.iter().all(|z| z.im.abs() <= T::lit(T::RANK_TOL));
    if g.elements().iter().all(is_real) && q.0.iter().all(is_real) {
        x.iter_mut().for_each(|z| z.im = T::zero());
    }
    AntiHermitian::from_matrix(&anti_hermitian_part(&unvec(&x, g.dim())?))
}

/// `R = (1/4N)·Σ_i ([G_i, Q_i⁺] + [G_i⁺, Q_i])`; requires unitary `G_i`.
pub fn solve_r_simplified<T: Real>(g: &ApproxGroup<T>, q: &TargetMatrices<T>) -> Result<AntiHermitian<T>> {
    ensure_unitary(g, T::lit(T::UNITARITY_TOL))?;
    let p = rhs_p(g, q)?;
    let scale = T::one() / T::lit(4.0 * g.order() as f64);
    AntiHermitian::from_matrix(&p.map(|z| z * scale))
}

/// `G_i → e^{−R}·G_i·e^{R}` with the exact exponential.
pub fn rotate_group<T: Real>(g: &ApproxGroup<T>, r: &AntiHermitian<T>) -> Result<ApproxGroup<T>> {
    if r.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: r.dim(),
        });
    }
    let u = exp_antihermitian(r).into_inner();
    let uh = u.adjoint();
    Ok(g.with_elements(g.elements().iter().map(|m| &uh * m * &u).collect()))
}

/// `S_Q = Σ_i ‖G_i − Q_i‖²`.
pub fn fit_error<T: Real>(g: &ApproxGroup<T>, q: &TargetMatrices<T>) -> Result<T> {
    check_targets(g, q)?;
    Ok(g.elements()
        .iter()
        .zip(&q.0)
        .fold(T::zero(), |acc, (gi, qi)| acc + frobenius_norm_squared(&(gi - qi))))
}

/// `S_ab = Σ_ij ‖G_i·a_ij − b_ij‖²`.
pub fn fit_error_ab<T: Real>(g: &ApproxGroup<T>, v: &VectorPairs<T>) -> Result<T> {
    if v.order() != g.order() {
        return Err(Error::OrderMismatch {
            elements: v.order(),
            order: g.order(),
        });
    }
    if v.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: v.dim(),
        });
    }
    Ok(g.elements()
        .iter()
        .zip(v.iter())
        .fold(T::zero(), |acc, (gi, pairs)| {
            pairs
                .iter()
                .fold(acc, |acc, (a, b)| acc + (gi * a - b).norm_squared())
        }))
}

pub fn solve_r<T: Real>(g: &ApproxGroup<T>, q: &TargetMatrices<T>, cfg: &FitConfig) -> Result<AntiHermitian<T>> {
    match cfg.algo {
        Algo::Supermatrix => solve_r_supermatrix(g, q, T::lit(cfg.null_threshold)),
        Algo::Simplified => solve_r_simplified(g, q),
    }
}

#[derive(Clone, Debug)]
pub struct FitOutcome<T: Real> {
    pub group: ApproxGroup<T>,
    /// Generators applied, in order; the total rotation is their product
    /// of exponentials.
    pub generators: Vec<AntiHermitian<T>>,
    pub trace: ConvergenceTrace,
    pub converged: bool,
}

/// Iterative fit with interleaved multiplication-table correction.
///
/// Per iteration: re-unitarize; if `S_M ≥ ε_M`, apply one table correction
/// (then re-unitarize) and clear the convergence flag; solve for `R` with
/// the configured algorithm; rotate; evaluate `S_Q` and `ΔS_Q`; clear the
/// flag if `ΔS_Q > ε_Q` or `‖R‖ > ε_R`. Stops when the flag survives.
pub fn lsf_group_correction<T: Real>(
    g: &ApproxGroup<T>,
    target: &Target<T>,
    cfg: &FitConfig,
) -> Result<FitOutcome<T>> {
    cfg.check()?;
    if target.order() != g.order() {
        return Err(Error::OrderMismatch {
            elements: target.order(),
            order: g.order(),
        });
    }
    let q = match target {
        Target::Matrices(q) => q.clone(),
        Target::Pairs(v) => q_from_vector_pairs(v),
    };
    check_targets(g, &q)?;
    let error = |g: &ApproxGroup<T>| match target {
        Target::Matrices(q) => fit_error(g, q),
        Target::Pairs(v) => fit_error_ab(g, v),
    };

    let mut current = g.clone();
    let mut trace = ConvergenceTrace::default();
    let mut generators = Vec::new();
    let mut prev_s_q: Option<T> = None;
    for iteration in 1..=cfg.max_iter {
        let mut converged = true;
        current = reunitarize_group(&current)?;
        let s_m = multab_error(&violation_matrices(&current));
        if !(s_m < T::lit(cfg.eps_m)) {
            converged = false;
            current = correction_step(&current)?.subtract_from(&current);
            current = reunitarize_group(&current)?;
        }
        let r = solve_r(&current, &q, cfg)?;
        current = rotate_group(&current, &r)?;
        let s_q = error(&current)?;
        let delta = prev_s_q.map_or(f64::INFINITY, |p| (p - s_q).as_f64());
        let norm_r = r.norm();
        if delta > cfg.eps_q || norm_r.as_f64() > cfg.eps_r {
            converged = false;
        }
        trace.rows.push(FitRow {
            iteration,
            s_m: s_m.as_f64(),
            s_q: s_q.as_f64(),
            delta_s_q: delta,
            norm_r: norm_r.as_f64(),
        });
        generators.push(r);
        prev_s_q = Some(s_q);
        if converged {
            return Ok(FitOutcome {
                group: current,
                generators,
                trace,
                converged: true,
            });
        }
    }
    Ok(FitOutcome {
        group: current,
        generators,
        trace,
        converged: false,
    })
}
