//! Ideal geometries of the reference molecules (Å), centered at the origin.

use crate::molsym::{Atom, MolecularGeometry};

const GOLDEN: f64 = 1.618_033_988_749_895;

fn build(atoms: Vec<(&str, [f64; 3])>) -> MolecularGeometry<f64> {
    MolecularGeometry::new(
        atoms
            .into_iter()
            .map(|(l, p)| Atom::new(l, p[0], p[1], p[2]))
            .collect(),
    )
    .expect("static geometry is valid")
}

/// CH₄, point group T_d (order 24).
pub fn methane() -> MolecularGeometry<f64> {
    let d = 1.087 / 3f64.sqrt();
    build(vec![
        ("C", [0.0, 0.0, 0.0]),
        ("H", [d, d, d]),
        ("H", [d, -d, -d]),
        ("H", [-d, d, -d]),
        ("H", [-d, -d, d]),
    ])
}

/// SF₆, point group O_h (order 48).
pub fn sulfur_hexafluoride() -> MolecularGeometry<f64> {
    let d = 1.561;
    build(vec![
        ("S", [0.0, 0.0, 0.0]),
        ("F", [d, 0.0, 0.0]),
        ("F", [-d, 0.0, 0.0]),
        ("F", [0.0, d, 0.0]),
        ("F", [0.0, -d, 0.0]),
        ("F", [0.0, 0.0, d]),
        ("F", [0.0, 0.0, -d]),
    ])
}

/// Staggered C₂H₆, point group D_3d (order 12).
pub fn ethane() -> MolecularGeometry<f64> {
    let cc = 1.535;
    let ch = 1.094;
    let hcc = 111.2f64.to_radians();
    let zc = cc / 2.0;
    let dz = -ch * hcc.cos();
    let rho = ch * hcc.sin();
    let mut atoms = vec![("C", [0.0, 0.0, zc]), ("C", [0.0, 0.0, -zc])];
    for k in 0..3 {
        let phi = (120.0 * k as f64).to_radians();
        atoms.push(("H", [rho * phi.cos(), rho * phi.sin(), zc + dz]));
    }
    for k in 0..3 {
        let phi = (60.0 + 120.0 * k as f64).to_radians();
        atoms.push(("H", [rho * phi.cos(), rho * phi.sin(), -zc - dz]));
    }
    build(atoms)
}

/// C₂₀ as a regular dodecahedron with 1.45 Å edges, point group I_h
/// (order 120).
pub fn fullerene_c20() -> MolecularGeometry<f64> {
    let s = 1.45 * GOLDEN / 2.0;
    let (a, b) = (1.0 / GOLDEN, GOLDEN);
    let mut pts = Vec::with_capacity(20);
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                pts.push([x, y, z]);
            }
        }
    }
    for u in [-1.0, 1.0] {
        for v in [-1.0, 1.0] {
            pts.push([0.0, u * a, v * b]);
            pts.push([u * a, v * b, 0.0]);
            pts.push([u * b, 0.0, v * a]);
        }
    }
    build(
        pts.into_iter()
            .map(|p| ("C", [p[0] * s, p[1] * s, p[2] * s]))
            .collect(),
    )
}

/// Looks up a reference molecule by formula (`CH4`, `SF6`, `C2H6`, `C20`).
pub fn by_name(name: &str) -> Option<MolecularGeometry<f64>> {
    match name.to_ascii_uppercase().as_str() {
        "CH4" => Some(methane()),
        "SF6" => Some(sulfur_hexafluoride()),
        "C2H6" => Some(ethane()),
        "C20" => Some(fullerene_c20()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c20_edges() {
        let g = fullerene_c20();
        assert_eq!(g.len(), 20);
        for i in 0..20 {
            let mut d: Vec<f64> = (0..20).filter(|&j| j != i).map(|j| g.distance(i, j)).collect();
            d.sort_by(f64::total_cmp);
            // Three neighbours at the edge length.
            assert!(d[..3].iter().all(|x| (x - 1.45).abs() < 1e-12));
            assert!(d[3] > 2.0);
        }
    }

    #[test]
    fn centered() {
        for g in [methane(), sulfur_hexafluoride(), ethane(), fullerene_c20()] {
            assert!(g.centroid().norm() < 1e-14);
        }
    }

    #[test]
    fn ethane_bonds() {
        let g = ethane();
        assert!((g.distance(0, 1) - 1.535).abs() < 1e-12);
        for h in 2..5 {
            assert!((g.distance(0, h) - 1.094).abs() < 1e-12);
        }
        for h in 5..8 {
            assert!((g.distance(1, h) - 1.094).abs() < 1e-12);
        }
    }
}
