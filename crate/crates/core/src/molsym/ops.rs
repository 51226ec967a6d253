//! Operators built from atom permutations, group averaging, and the
//! classification of 3×3 orthogonal operations.

use nalgebra::{Complex, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{q_from_vector_pairs, VectorPairs};
use crate::group::{group_closure_error, ApproxGroup};
use crate::linalg::reunitarize;
use crate::molsym::{MolecularGeometry, SymmetryPermutations};
use crate::scalar::{CMatrix, CVector, Real};

fn to_cvector<T: Real>(v: &Vector3<T>) -> CVector<T> {
    CVector::from_iterator(3, v.iter().map(|&x| Complex::new(x, T::zero())))
}

/// For element `i` and atom `j`: `a_ij = r_j`, `b_ij = r_{p_i(j)}` on the
/// centered geometry, so the exact operator satisfies `G_i·a_ij = b_ij`.
pub fn vector_pairs_from_permutations<T: Real>(
    geom: &MolecularGeometry<T>,
    s: &SymmetryPermutations,
) -> Result<VectorPairs<T>> {
    let centered = geom.centered();
    let r: Vec<CVector<T>> = centered.positions().map(to_cvector).collect();
    let mut pairs = Vec::with_capacity(s.order());
    for p in &s.perms {
        if p.len() != r.len() {
            return Err(Error::DimensionMismatch {
                expected: r.len(),
                found: p.len(),
            });
        }
        pairs.push((0..r.len()).map(|j| (r[j].clone(), r[p.image(j)].clone())).collect());
    }
    VectorPairs::new(3, pairs)
}

/// Rank of `Σ_j r_j·r_jᵀ` on the centered geometry.
pub fn moment_rank<T: Real>(geom: &MolecularGeometry<T>) -> usize {
    let centered = geom.centered();
    let m = centered
        .positions()
        .fold(Matrix3::<T>::zeros(), |acc, r| acc + r * r.transpose());
    let sv = m.singular_values();
    let max = sv.max();
    sv.iter().filter(|&&s| s > T::lit(T::CHECK_TOL) * max).count()
}

/// Initial operators: `Q_i = Σ_j |b_ij⟩⟨a_ij|` re-unitarized, bound to the
/// permutation table.
pub fn initial_group_guess<T: Real>(
    geom: &MolecularGeometry<T>,
    s: &SymmetryPermutations,
) -> Result<ApproxGroup<T>> {
    let rank = moment_rank(geom);
    if rank < 3 {
        return Err(Error::DegenerateGeometry { rank });
    }
    let q = q_from_vector_pairs(&vector_pairs_from_permutations(geom, s)?);
    let elements = q
        .0
        .iter()
        .map(|m| reunitarize(m).map(|u| u.into_inner()))
        .collect::<Result<Vec<_>>>()?;
    ApproxGroup::new(s.table()?, elements)
}

/// Group average `r_j ← (1/N)·Σ_i G_i⁻¹·r_{p_i(j)}` about the centroid.
pub fn symmetrize_geometry<T: Real>(
    geom: &MolecularGeometry<T>,
    g: &ApproxGroup<T>,
    s: &SymmetryPermutations,
) -> Result<MolecularGeometry<T>> {
    check_operators(geom, g, s)?;
    let s_m = group_closure_error(g);
    if s_m > T::lit(T::CHECK_TOL) {
        return Err(Error::Invalid(format!(
            "group is not table-consistent (S_M = {:e})",
            s_m.as_f64()
        )));
    }
    let c = geom.centroid();
    let r: Vec<CVector<T>> = geom.positions().map(|p| to_cvector(&(p - c))).collect();
    let inv: Vec<CMatrix<T>> = g.elements().iter().map(|m| m.adjoint()).collect();
    let scale = T::one() / T::lit(g.order() as f64);
    let positions = (0..r.len())
        .map(|j| {
            let avg = inv
                .iter()
                .zip(&s.perms)
                .fold(CVector::<T>::zeros(3), |acc, (gi, p)| acc + gi * &r[p.image(j)]);
            Vector3::new(avg[0].re, avg[1].re, avg[2].re) * scale + c
        })
        .collect();
    geom.with_positions(positions)
}

/// `max_{i,j} |G_i·r_j − r_{p_i(j)}|` on the centered geometry (Å).
pub fn invariance_residual<T: Real>(
    geom: &MolecularGeometry<T>,
    g: &ApproxGroup<T>,
    s: &SymmetryPermutations,
) -> Result<T> {
    check_operators(geom, g, s)?;
    let centered = geom.centered();
    let r: Vec<CVector<T>> = centered.positions().map(to_cvector).collect();
    let mut worst = T::zero();
    for (gi, p) in g.elements().iter().zip(&s.perms) {
        for (j, rj) in r.iter().enumerate() {
            worst = worst.max((gi * rj - &r[p.image(j)]).norm());
        }
    }
    Ok(worst)
}

fn check_operators<T: Real>(
    geom: &MolecularGeometry<T>,
    g: &ApproxGroup<T>,
    s: &SymmetryPermutations,
) -> Result<()> {
    if g.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: g.dim() });
    }
    if g.order() != s.order() {
        return Err(Error::OrderMismatch {
            elements: g.order(),
            order: s.order(),
        });
    }
    if let Some(p) = s.perms.iter().find(|p| p.len() != geom.len()) {
        return Err(Error::DimensionMismatch {
            expected: geom.len(),
            found: p.len(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperationKind {
    Proper,
    Improper,
}

/// A proper rotation, or an improper one written as `−1` times a rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operation<T: Real> {
    pub kind: OperationKind,
    /// Unit axis with its first non-negligible component positive; `None`
    /// for the identity and the inversion.
    pub axis: Option<Vector3<T>>,
    /// Rotation angle in degrees, in `[0, 180]`.
    pub angle_deg: T,
}

/// Classifies an orthogonal matrix. For improper `M` the axis and angle
/// describe the rotation `−M` (so a mirror plane reports its normal with
/// 180°).
pub fn classify_operation<T: Real>(m: &Matrix3<T>) -> Result<Operation<T>> {
    let defect = (m * m.transpose() - Matrix3::identity()).norm();
    if defect > T::lit(T::CHECK_TOL) {
        return Err(Error::NotOrthogonal {
            defect: defect.as_f64(),
        });
    }
    let (kind, rot) = if m.determinant() > T::zero() {
        (OperationKind::Proper, *m)
    } else {
        (OperationKind::Improper, -m)
    };
    let cos = ((rot.trace() - T::one()) * T::lit(0.5)).clamp(-T::one(), T::one());
    let angle = cos.acos();
    if angle < T::lit(1e-6) {
        return Ok(Operation {
            kind,
            axis: None,
            angle_deg: T::zero(),
        });
    }
    let svd = (rot - Matrix3::identity()).svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let k = svd.singular_values.imin();
    let mut axis: Vector3<T> = v_t.row(k).transpose().normalize();
    if let Some(first) = axis.iter().find(|c| c.abs() > T::lit(T::CHECK_TOL)) {
        if *first < T::zero() {
            axis = -axis;
        }
    }
    Ok(Operation {
        kind,
        axis: Some(axis),
        angle_deg: angle * T::lit(180.0) / T::pi(),
    })
}

/// Real part of a 3×3 complex operator; fails when the imaginary part is
/// not negligible.
pub fn real_operator<T: Real>(m: &CMatrix<T>) -> Result<Matrix3<T>> {
    if m.nrows() != 3 || m.ncols() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: m.nrows() });
    }
    let imag = m.iter().fold(T::zero(), |acc, z| acc.max(z.im.abs()));
    if imag > T::lit(T::CHECK_TOL) {
        return Err(Error::Invalid(format!("operator has imaginary part {:e}", imag.as_f64())));
    }
    Ok(Matrix3::from_fn(|i, j| m[(i, j)].re))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperationReport {
    pub kind: OperationKind,
    pub axis: Option<[f64; 3]>,
    pub angle_deg: f64,
    pub order_of_element: usize,
}

/// One entry per group element, in group order.
pub fn operation_report<T: Real>(g: &ApproxGroup<T>) -> Result<Vec<OperationReport>> {
    g.elements()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let op = classify_operation(&real_operator(m)?)?;
            Ok(OperationReport {
                kind: op.kind,
                axis: op.axis.map(|a| [a.x.as_f64(), a.y.as_f64(), a.z.as_f64()]),
                angle_deg: op.angle_deg.as_f64(),
                order_of_element: g.table().element_order(i),
            })
        })
        .collect()
}
