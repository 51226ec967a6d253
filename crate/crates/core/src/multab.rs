//! Reconstruction of a group from approximate unitary matrices so that the
//! matrices obey their multiplication table exactly.
//!
//! With `F_ij = G'_i·G'_j − G'_(ij)`, the first-order deviation of element
//! `i` is
//!
//! ```text
//! δG_i = 1/(2N) · Σ_j ( F_ij·G'_j⁻¹ + G'_j⁻¹·F_ji )
//! ```
//!
//! and the driver iterates re-unitarization, `S_M` evaluation and
//! `G_i ← G_i − δG_i`. The part of the deviation generated by a global
//! unitary rotation is invisible to the table and is left untouched.

use crate::error::{Error, Result};
use crate::group::ApproxGroup;
use crate::linalg::{frobenius_norm_squared, reunitarize, unitarity_defect};
use crate::scalar::{CMatrix, Real};
use crate::trace::{MultabRow, MultabTrace};

/// The `N×N` blocks `F_ij`, row-major over `(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationMatrices<T: Real> {
    order: usize,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> ViolationMatrices<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CMatrix<T> {
        &self.blocks[i * self.order + j]
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }
}

/// Deviations `δG_i`; the corrected group is `G'_i − δG_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationSet<T: Real>(pub Vec<CMatrix<T>>);

impl<T: Real> DeviationSet<T> {
    pub fn norm(&self) -> T {
        self.0
            .iter()
            .fold(T::zero(), |acc, d| acc + frobenius_norm_squared(d))
            .sqrt()
    }

    /// `G_i ← G_i − δG_i`.
    pub fn subtract_from(&self, g: &ApproxGroup<T>) -> ApproxGroup<T> {
        let elements = g.elements().iter().zip(&self.0).map(|(m, d)| m - d).collect();
        g.with_elements(elements)
    }
}

pub fn violation_matrices<T: Real>(g: &ApproxGroup<T>) -> ViolationMatrices<T> {
    let n = g.order();
    let t = g.table();
    let e = g.elements();
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            blocks.push(&e[i] * &e[j] - &e[t.product(i, j)]);
        }
    }
    ViolationMatrices { order: n, blocks }
}

/// `S_M = sqrt(Σ_ij ‖F_ij‖²)`.
pub fn multab_error<T: Real>(f: &ViolationMatrices<T>) -> T {
    f.blocks
        .iter()
        .fold(T::zero(), |acc, b| acc + frobenius_norm_squared(b))
        .sqrt()
}

/// First-order deviations for a group of unitary matrices.
///
/// Inverses are taken as adjoints, so every element must be unitary to
/// [`Real::UNITARITY_TOL`]; re-unitarize first.
pub fn correction_step<T: Real>(g: &ApproxGroup<T>) -> Result<DeviationSet<T>> {
    ensure_unitary(g, T::lit(T::UNITARITY_TOL))?;
    Ok(deviations(g, &violation_matrices(g)))
}

pub(crate) fn ensure_unitary<T: Real>(g: &ApproxGroup<T>, tol: T) -> Result<()> {
    for (index, m) in g.elements().iter().enumerate() {
        let defect = unitarity_defect(m);
        if !(defect <= tol) {
            return Err(Error::NotUnitary {
                index,
                defect: defect.as_f64(),
            });
        }
    }
    Ok(())
}

fn deviations<T: Real>(g: &ApproxGroup<T>, f: &ViolationMatrices<T>) -> DeviationSet<T> {
    let n = g.order();
    let dim = g.dim();
    let inv: Vec<CMatrix<T>> = g.elements().iter().map(|m| m.adjoint()).collect();
    let scale = T::one() / T::lit(2.0 * n as f64);
    let devs = (0..n)
        .map(|i| {
            let mut acc = CMatrix::<T>::zeros(dim, dim);
            for j in 0..n {
                acc += f.get(i, j) * &inv[j];
                acc += &inv[j] * f.get(j, i);
            }
            acc.map(|z| z * scale)
        })
        .collect();
    DeviationSet(devs)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultabConfig {
    /// Convergence threshold on `S_M`.
    pub eps: f64,
    pub max_iter: usize,
}

impl Default for MultabConfig {
    fn default() -> Self {
        Self {
            eps: 1e-12,
            max_iter: 50,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultabOutcome<T: Real> {
    /// Converged group, or the iterate with the smallest `S_M` otherwise.
    pub group: ApproxGroup<T>,
    pub trace: MultabTrace,
    pub converged: bool,
}

/// Iterated table-based reconstruction.
///
/// Each iteration re-unitarizes, records `S_M`, stops when `S_M < eps`, and
/// otherwise subtracts the first-order deviations.
pub fn multab_group_correction<T: Real>(
    g: &ApproxGroup<T>,
    cfg: &MultabConfig,
) -> Result<MultabOutcome<T>> {
    if !(cfg.eps > 0.0) || cfg.max_iter == 0 {
        return Err(Error::Invalid("eps must be positive and max_iter at least 1".into()));
    }
    let eps = T::lit(cfg.eps);
    let mut current = g.clone();
    let mut trace = MultabTrace::default();
    let mut best: Option<(T, ApproxGroup<T>)> = None;
    for iteration in 1..=cfg.max_iter {
        current = reunitarize_group(&current)?;
        let f = violation_matrices(&current);
        let s_m = multab_error(&f);
        trace.rows.push(MultabRow {
            iteration,
            s_m: s_m.as_f64(),
        });
        if s_m < eps {
            return Ok(MultabOutcome {
                group: current,
                trace,
                converged: true,
            });
        }
        if best.as_ref().is_none_or(|(b, _)| s_m < *b) {
            best = Some((s_m, current.clone()));
        }
        current = deviations(&current, &f).subtract_from(&current);
    }
    let (_, group) = best.expect("at least one iteration ran");
    Ok(MultabOutcome {
        group,
        trace,
        converged: false,
    })
}

/// Replaces every element by its nearest unitary matrix.
pub fn reunitarize_group<T: Real>(g: &ApproxGroup<T>) -> Result<ApproxGroup<T>> {
    let elements = g
        .elements()
        .iter()
        .map(|m| reunitarize(m).map(|u| u.into_inner()))
        .collect::<Result<Vec<_>>>()?;
    Ok(g.with_elements(elements))
}
