//! Finite groups: the abstract multiplication table and matrices bound to it.
//!
//! Composition convention: `(ij)` is the index of "apply element `j`, then
//! element `i`", i.e. the operator product `G_i·G_j`. Indices are 0-based.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ensure_square;
use crate::scalar::{CMatrix, Real};

/// Above this order associativity is only checked on request.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 512;

/// A permutation of `0..m`; `image(k)` is where point `k` goes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &k in &images {
            if k >= images.len() || seen[k] {
                return Err(Error::Permutations(format!(
                    "{images:?} is not a permutation of 0..{}",
                    images.len()
                )));
            }
            seen[k] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        Permutation(inv)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// A violated group axiom together with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    /// Row `row` holds `value` at two columns.
    RowRepeat { row: usize, cols: (usize, usize), value: usize },
    /// Column `col` holds `value` at two rows.
    ColumnRepeat { col: usize, rows: (usize, usize), value: usize },
    NoIdentity,
    NoInverse { element: usize },
    /// `((ij)k) ≠ (i(jk))`.
    NotAssociative { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "malformed table: {s}"),
            Violation::RowRepeat { row, cols, value } => write!(
                f,
                "Latin square violated: row {row} has {value} at columns {} and {}",
                cols.0, cols.1
            ),
            Violation::ColumnRepeat { col, rows, value } => write!(
                f,
                "Latin square violated: column {col} has {value} at rows {} and {}",
                rows.0, rows.1
            ),
            Violation::NoIdentity => write!(f, "no identity element"),
            Violation::NoInverse { element } => write!(f, "element {element} has no inverse"),
            Violation::NotAssociative { i, j, k } => {
                write!(f, "associativity violated for ({i}, {j}, {k})")
            }
        }
    }
}

/// Result of checking a raw table against the group axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableReport {
    pub violations: Vec<Violation>,
    pub identity: Option<usize>,
    pub associativity_checked: bool,
}

impl TableReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Checks a raw `N×N` table for the Latin square property, identity,
/// inverses and associativity. One witness is reported per violated axiom.
pub fn validate_table(rows: &[Vec<usize>]) -> TableReport {
    validate_table_with(rows, true)
}

pub fn validate_table_with(rows: &[Vec<usize>], check_associativity: bool) -> TableReport {
    let mut report = TableReport::default();
    let n = rows.len();
    if n == 0 {
        report.violations.push(Violation::Shape("empty table".into()));
        return report;
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            report
                .violations
                .push(Violation::Shape(format!("row {i} has length {} != {n}", row.len())));
            return report;
        }
        if let Some(&v) = row.iter().find(|&&v| v >= n) {
            report
                .violations
                .push(Violation::Shape(format!("row {i} has out-of-range entry {v}")));
            return report;
        }
    }

    'rows: for (i, row) in rows.iter().enumerate() {
        let mut seen = vec![usize::MAX; n];
        for (j, &v) in row.iter().enumerate() {
            if seen[v] != usize::MAX {
                report.violations.push(Violation::RowRepeat { row: i, cols: (seen[v], j), value: v });
                break 'rows;
            }
            seen[v] = j;
        }
    }
    'cols: for j in 0..n {
        let mut seen = vec![usize::MAX; n];
        for (i, row) in rows.iter().enumerate() {
            let v = row[j];
            if seen[v] != usize::MAX {
                report.violations.push(Violation::ColumnRepeat { col: j, rows: (seen[v], i), value: v });
                break 'cols;
            }
            seen[v] = i;
        }
    }

    let identity = (0..n).find(|&e| (0..n).all(|j| rows[e][j] == j && rows[j][e] == j));
    report.identity = identity;
    match identity {
        None => report.violations.push(Violation::NoIdentity),
        Some(e) => {
            if let Some(i) = (0..n).find(|&i| !(0..n).any(|k| rows[i][k] == e && rows[k][i] == e)) {
                report.violations.push(Violation::NoInverse { element: i });
            }
        }
    }

    if check_associativity {
        report.associativity_checked = true;
        'assoc: for i in 0..n {
            for j in 0..n {
                let ij = rows[i][j];
                for k in 0..n {
                    if rows[ij][k] != rows[i][rows[j][k]] {
                        report.violations.push(Violation::NotAssociative { i, j, k });
                        break 'assoc;
                    }
                }
            }
        }
    }
    report
}

/// A validated group multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl MultiplicationTable {
    /// Validates and wraps `rows`. Associativity is checked when the order
    /// is at most [`ASSOCIATIVITY_CHECK_LIMIT`].
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let check = rows.len() <= ASSOCIATIVITY_CHECK_LIMIT;
        Self::with_options(rows, check)
    }

    pub fn with_options(rows: Vec<Vec<usize>>, check_associativity: bool) -> Result<Self> {
        let report = validate_table_with(&rows, check_associativity);
        if !report.is_valid() {
            return Err(Error::InvalidTable(report.to_string()));
        }
        let order = rows.len();
        let identity = report.identity.expect("valid table has identity");
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let inverses = (0..order)
            .map(|i| (0..order).find(|&k| table[i * order + k] == identity).unwrap())
            .collect();
        Ok(Self {
            order,
            table,
            identity,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Index of `G_i·G_j`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Smallest `k ≥ 1` with `g_i^k = e`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.product(i, x);
            k += 1;
        }
        k
    }

    pub fn validate(&self) -> TableReport {
        validate_table(&self.rows())
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            order: self.order,
            table: self.rows(),
            identity: self.identity,
        }
    }
}

/// JSON layout: `{"order": N, "table": [[...], ...], "identity": e}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl TryFrom<TableFile> for MultiplicationTable {
    type Error = Error;

    fn try_from(f: TableFile) -> Result<Self> {
        if f.table.len() != f.order {
            return Err(Error::InvalidTable(format!(
                "declared order {} but table has {} rows",
                f.order,
                f.table.len()
            )));
        }
        let t = MultiplicationTable::new(f.table)?;
        if t.identity != f.identity {
            return Err(Error::InvalidTable(format!(
                "declared identity {} but element {} acts as identity",
                f.identity, t.identity
            )));
        }
        Ok(t)
    }
}

/// Builds the table of a permutation group: `(ij)` is the index of
/// `perms[i] ∘ perms[j]`. Returns the table and the identity index.
pub fn table_from_permutations(perms: &[Permutation]) -> Result<(MultiplicationTable, usize)> {
    if perms.is_empty() {
        return Err(Error::Permutations("empty permutation list".into()));
    }
    let m = perms[0].len();
    if let Some(p) = perms.iter().find(|p| p.len() != m) {
        return Err(Error::Permutations(format!(
            "permutation of {} points among permutations of {m}",
            p.len()
        )));
    }
    let mut index = HashMap::with_capacity(perms.len());
    for (i, p) in perms.iter().enumerate() {
        if let Some(first) = index.insert(p.clone(), i) {
            return Err(Error::Permutations(format!("permutations {first} and {i} are equal")));
        }
    }
    if !perms.iter().any(Permutation::is_identity) {
        return Err(Error::Permutations("identity permutation missing".into()));
    }
    let mut rows = Vec::with_capacity(perms.len());
    for (i, pi) in perms.iter().enumerate() {
        let mut row = Vec::with_capacity(perms.len());
        for (j, pj) in perms.iter().enumerate() {
            match index.get(&pi.compose(pj)) {
                Some(&k) => row.push(k),
                None => {
                    return Err(Error::Permutations(format!(
                        "not closed: composition of {i} and {j} is not in the set"
                    )))
                }
            }
        }
        rows.push(row);
    }
    let table = MultiplicationTable::new(rows)?;
    let e = table.identity();
    Ok((table, e))
}

/// Approximate matrices `G'_i` bound to a multiplication table.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxGroup<T: Real> {
    table: MultiplicationTable,
    elements: Vec<CMatrix<T>>,
}

impl<T: Real> ApproxGroup<T> {
    pub fn new(table: MultiplicationTable, elements: Vec<CMatrix<T>>) -> Result<Self> {
        if elements.len() != table.order() {
            return Err(Error::OrderMismatch {
                elements: elements.len(),
                order: table.order(),
            });
        }
        let n = elements[0].nrows();
        for m in &elements {
            ensure_square(m)?;
            if m.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.nrows(),
                });
            }
            if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::Invalid("non-finite matrix entry".into()));
            }
        }
        Ok(Self { table, elements })
    }

    pub fn table(&self) -> &MultiplicationTable {
        &self.table
    }

    pub fn elements(&self) -> &[CMatrix<T>] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<CMatrix<T>> {
        self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Matrix dimension `n`.
    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    /// Same table, new matrices; used internally where shapes are preserved.
    pub(crate) fn with_elements(&self, elements: Vec<CMatrix<T>>) -> Self {
        debug_assert_eq!(elements.len(), self.elements.len());
        Self {
            table: self.table.clone(),
            elements,
        }
    }

    pub fn map_elements<F>(&self, f: F) -> Result<Self>
    where
        F: FnMut(&CMatrix<T>) -> Result<CMatrix<T>>,
    {
        let elements = self.elements.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(self.table.clone(), elements)
    }
}

/// Table-violation error `S_M` of the group; zero iff the matrices obey
/// the table exactly.
pub fn group_closure_error<T: Real>(g: &ApproxGroup<T>) -> T {
    crate::multab::multab_error(&crate::multab::violation_matrices(g))
}
