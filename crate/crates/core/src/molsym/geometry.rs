use std::fmt::Write as _;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<T: Real> {
    pub label: String,
    /// Cartesian position in Ångström.
    pub position: Vector3<T>,
}

impl<T: Real> Atom<T> {
    pub fn new(label: impl Into<String>, x: T, y: T, z: T) -> Self {
        Self {
            label: label.into(),
            position: Vector3::new(x, y, z),
        }
    }
}

/// Element labels with Cartesian coordinates (Å).
#[derive(Clone, Debug, PartialEq)]
pub struct MolecularGeometry<T: Real> {
    atoms: Vec<Atom<T>>,
}

impl<T: Real> MolecularGeometry<T> {
    pub fn new(atoms: Vec<Atom<T>>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Invalid("geometry has no atoms".into()));
        }
        if atoms
            .iter()
            .any(|a| a.position.iter().any(|c| !c.as_f64().is_finite()))
        {
            return Err(Error::Invalid("non-finite coordinate".into()));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = &Vector3<T>> {
        self.atoms.iter().map(|a| &a.position)
    }

    pub fn centroid(&self) -> Vector3<T> {
        let sum = self.positions().fold(Vector3::zeros(), |acc, p| acc + p);
        sum / T::lit(self.atoms.len() as f64)
    }

    /// Copy translated so the centroid sits at the origin.
    pub fn centered(&self) -> Self {
        let c = self.centroid();
        self.map_positions(|p| p - c)
    }

    pub fn map_positions<F: FnMut(&Vector3<T>) -> Vector3<T>>(&self, mut f: F) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    label: a.label.clone(),
                    position: f(&a.position),
                })
                .collect(),
        }
    }

    pub fn with_positions(&self, positions: Vec<Vector3<T>>) -> Result<Self> {
        if positions.len() != self.atoms.len() {
            return Err(Error::DimensionMismatch {
                expected: self.atoms.len(),
                found: positions.len(),
            });
        }
        let atoms = self
            .atoms
            .iter()
            .zip(positions)
            .map(|(a, position)| Atom {
                label: a.label.clone(),
                position,
            })
            .collect();
        Self::new(atoms)
    }

    pub fn distance(&self, i: usize, j: usize) -> T {
        (self.atoms[i].position - self.atoms[j].position).norm()
    }

    /// Largest displacement between corresponding atoms.
    pub fn max_displacement(&self, other: &Self) -> T {
        self.positions()
            .zip(other.positions())
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }
}

/// Parses the standard XYZ layout: atom count, comment line, then
/// `label x y z` per atom.
pub fn load_xyz<T: Real>(text: &str) -> Result<MolecularGeometry<T>> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| Error::Xyz {
        line: 1,
        message: "empty input".into(),
    })?;
    let count: usize = first.trim().parse().map_err(|_| Error::Xyz {
        line: 1,
        message: format!("malformed atom count {:?}", first.trim()),
    })?;
    if count == 0 {
        return Err(Error::Xyz {
            line: 1,
            message: "atom count is zero".into(),
        });
    }
    if lines.next().is_none() {
        return Err(Error::Xyz {
            line: 2,
            message: format!("count mismatch: expected {count} atoms, found 0"),
        });
    }
    let mut atoms = Vec::with_capacity(count);
    for (idx, line) in lines.by_ref() {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            if atoms.len() < count {
                return Err(Error::Xyz {
                    line: lineno,
                    message: format!("count mismatch: expected {count} atoms, found {}", atoms.len()),
                });
            }
            continue;
        }
        if atoms.len() == count {
            return Err(Error::Xyz {
                line: lineno,
                message: format!("count mismatch: more than {count} atom lines"),
            });
        }
        if fields.len() < 4 {
            return Err(Error::Xyz {
                line: lineno,
                message: format!("expected `label x y z`, got {:?}", line.trim()),
            });
        }
        let mut xyz = [T::zero(); 3];
        for (k, field) in fields[1..4].iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Xyz {
                line: lineno,
                message: format!("bad float {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Xyz {
                    line: lineno,
                    message: format!("non-finite coordinate {field:?}"),
                });
            }
            xyz[k] = T::lit(v);
        }
        atoms.push(Atom::new(fields[0], xyz[0], xyz[1], xyz[2]));
    }
    if atoms.len() != count {
        return Err(Error::Xyz {
            line: text.lines().count() + 1,
            message: format!("count mismatch: expected {count} atoms, found {}", atoms.len()),
        });
    }
    MolecularGeometry::new(atoms)
}

pub fn save_xyz<T: Real>(geom: &MolecularGeometry<T>, comment: &str) -> String {
    let mut out = format!("{}\n{}\n", geom.len(), comment.replace('\n', " "));
    for a in geom.atoms() {
        let p = a.position.map(|c| c.as_f64());
        let _ = writeln!(out, "{:<3} {:>18.12} {:>18.12} {:>18.12}", a.label, p.x, p.y, p.z);
    }
    out
}
