//! Distance-preserving atom permutations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{table_from_permutations, MultiplicationTable, Permutation};
use crate::molsym::MolecularGeometry;
use crate::scalar::Real;

/// Label-respecting permutations that preserve all interatomic distances
/// within `tol` (Å), sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryPermutations {
    pub perms: Vec<Permutation>,
    pub tol: f64,
}

impl SymmetryPermutations {
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Table with `(ij)` the index of `perms[i] ∘ perms[j]`.
    pub fn table(&self) -> Result<MultiplicationTable> {
        table_from_permutations(&self.perms).map(|(t, _)| t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub tol: f64,
    /// Backtracking nodes visited before giving up.
    pub node_limit: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            tol: 1.0,
            node_limit: 5_000_000,
        }
    }
}

pub fn find_symmetry_permutations<T: Real>(geom: &MolecularGeometry<T>, tol: f64) -> Result<SymmetryPermutations> {
    find_symmetry_permutations_with(
        geom,
        &SearchOptions {
            tol,
            ..SearchOptions::default()
        },
    )
}

/// Backtracking search over images atom by atom. Candidate images are
/// pruned by label and by the sorted per-atom distance fingerprint; each
/// partial assignment is checked against all previously placed atoms.
pub fn find_symmetry_permutations_with<T: Real>(
    geom: &MolecularGeometry<T>,
    opts: &SearchOptions,
) -> Result<SymmetryPermutations> {
    if !(opts.tol > 0.0) {
        return Err(Error::Invalid("symmetry tolerance must be positive".into()));
    }
    let tol = opts.tol;
    let m = geom.len();
    let dist: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| geom.distance(i, j).as_f64()).collect())
        .collect();
    let fingerprints: Vec<Vec<f64>> = dist
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.sort_by(f64::total_cmp);
            r
        })
        .collect();
    let labels: Vec<&str> = geom.atoms().iter().map(|a| a.label.as_str()).collect();
    let candidates: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| {
                    labels[i] == labels[j]
                        && fingerprints[i]
                            .iter()
                            .zip(&fingerprints[j])
                            .all(|(a, b)| (a - b).abs() <= tol)
                })
                .collect()
        })
        .collect();

    let mut search = Search {
        dist: &dist,
        candidates: &candidates,
        tol,
        image: vec![usize::MAX; m],
        used: vec![false; m],
        found: Vec::new(),
        nodes: 0,
        node_limit: opts.node_limit,
    };
    search.extend(0)?;
    let mut perms = search
        .found
        .into_iter()
        .map(Permutation::new)
        .collect::<Result<Vec<_>>>()?;
    perms.sort();
    let found = perms.len();
    if table_from_permutations(&perms).is_err() {
        return Err(Error::SymmetryClosure { tol, found });
    }
    Ok(SymmetryPermutations { perms, tol })
}

struct Search<'a> {
    dist: &'a [Vec<f64>],
    candidates: &'a [Vec<usize>],
    tol: f64,
    image: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    nodes: usize,
    node_limit: usize,
}

impl Search<'_> {
    fn extend(&mut self, atom: usize) -> Result<()> {
        if atom == self.image.len() {
            self.found.push(self.image.clone());
            return Ok(());
        }
        for &target in &self.candidates[atom] {
            if self.used[target] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return Err(Error::SearchLimit { limit: self.node_limit });
            }
            let consistent = (0..atom).all(|prev| {
                (self.dist[atom][prev] - self.dist[target][self.image[prev]]).abs() <= self.tol
            });
            if !consistent {
                continue;
            }
            self.image[atom] = target;
            self.used[target] = true;
            self.extend(atom + 1)?;
            self.used[target] = false;
        }
        self.image[atom] = usize::MAX;
        Ok(())
    }
}
