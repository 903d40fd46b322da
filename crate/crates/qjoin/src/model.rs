//! Shared value types: clique-order tuples, multiplicity matrices, eigenvalue
//! lists, dense symmetric matrices and decision reports.
//!
//! Everything combinatorial here is exact integer arithmetic; floating point
//! only enters through [`EigenvalueList`] and [`DenseSymMatrix`], which the
//! realization layer consumes. All types are immutable values and safe to
//! share between threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("size tuple must be nonempty")]
    EmptyTuple,
    #[error("size tuple entries must be >= 1, got {0}")]
    NonPositiveOrder(usize),
    #[error("matrix rows must all have the same length")]
    RaggedRows,
    #[error("matrix must be nonempty")]
    EmptyMatrix,
    #[error("multiplicity matrix needs at least 3 rows, got {0}")]
    TooFewRows(usize),
    #[error("multiplicity matrix column {0} is all zero")]
    ZeroColumn(usize),
    #[error("eigenvalue list must be strictly increasing and finite")]
    NotIncreasing,
    #[error("realization eigenvalue list must run from -1 to 1 with interior values in (-1, 1)")]
    BadRealizationList,
    #[error("matrix data has {got} entries, expected {expected}")]
    BadDataLength { got: usize, expected: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
}

/// Ordered tuple of component orders `m = (m_1, ..., m_k)`, describing the
/// union of complete graphs with those orders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SizeTuple {
    entries: Vec<usize>,
}

impl SizeTuple {
    pub fn new(entries: Vec<usize>) -> Result<Self, ModelError> {
        if entries.is_empty() {
            return Err(ModelError::EmptyTuple);
        }
        if let Some(&bad) = entries.iter().find(|&&e| e == 0) {
            return Err(ModelError::NonPositiveOrder(bad));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Number of components `k`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one entry
    }

    /// Total order `|m|`.
    pub fn total(&self) -> usize {
        self.entries.iter().sum()
    }

    /// Number of isolated vertices, i.e. entries equal to 1.
    pub fn iso(&self) -> usize {
        self.entries.iter().filter(|&&e| e == 1).count()
    }

    /// Canonical form: entries sorted descending. `q` and related quantities
    /// are invariant under permutation of components, so this is the form
    /// used for hashing and caching.
    pub fn sorted_desc(&self) -> SizeTuple {
        let mut entries = self.entries.clone();
        entries.sort_unstable_by(|a, b| b.cmp(a));
        SizeTuple { entries }
    }
}

impl TryFrom<Vec<usize>> for SizeTuple {
    type Error = ModelError;
    fn try_from(v: Vec<usize>) -> Result<Self, ModelError> {
        SizeTuple::new(v)
    }
}

impl From<SizeTuple> for Vec<usize> {
    fn from(t: SizeTuple) -> Vec<usize> {
        t.entries
    }
}

impl std::fmt::Display for SizeTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Rectangular grid of nonnegative integers with no further invariants.
/// Used for middles of multiplicity matrices and two-row contingency fills.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<usize>, // row-major
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(ModelError::RaggedRows);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: usize) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.row(i).iter().sum()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        (0..self.rows).map(|i| self.get(i, j)).sum()
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn total(&self) -> usize {
        self.data.iter().sum()
    }

    /// Column-wise concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> Result<IntMatrix, ModelError> {
        if self.rows != other.rows {
            return Err(ModelError::RaggedRows);
        }
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }
}

/// An `r x k` matrix of nonnegative integers with `r >= 3` whose columns are
/// candidate ordered multiplicity lists, one per connected component.
///
/// The row index is a shared position in one global eigenvalue ordering.
/// Whether the matrix actually is a multiplicity matrix *for* a given union
/// of cliques is a predicate, not a type invariant; see
/// [`crate::combinatorics::is_multiplicity_matrix_for`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityMatrix {
    inner: IntMatrix,
}

impl MultiplicityMatrix {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        Self::from_grid(IntMatrix::from_rows(rows)?)
    }

    pub fn from_grid(grid: IntMatrix) -> Result<Self, ModelError> {
        if grid.rows() < 3 {
            return Err(ModelError::TooFewRows(grid.rows()));
        }
        if grid.cols() == 0 {
            return Err(ModelError::EmptyMatrix);
        }
        for j in 0..grid.cols() {
            if grid.col_sum(j) == 0 {
                return Err(ModelError::ZeroColumn(j));
            }
        }
        Ok(Self { inner: grid })
    }

    pub fn rows(&self) -> usize {
        self.inner.rows()
    }

    pub fn cols(&self) -> usize {
        self.inner.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.inner.get(i, j)
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        self.inner.column(j)
    }

    pub fn column_sum(&self, j: usize) -> usize {
        self.inner.col_sum(j)
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.inner.row_sum(i)
    }

    pub fn total(&self) -> usize {
        self.inner.total()
    }

    pub fn as_grid(&self) -> &IntMatrix {
        &self.inner
    }

    /// The matrix with its first and last rows deleted. Well defined since
    /// `rows >= 3` by construction; the result may be all zero.
    pub fn middle(&self) -> IntMatrix {
        let rows: Vec<Vec<usize>> = (1..self.rows() - 1)
            .map(|i| self.inner.row(i).to_vec())
            .collect();
        IntMatrix::from_rows(rows).expect("rows of a valid matrix are rectangular")
    }

    /// Row sums of the middle, i.e. total multiplicity per interior
    /// eigenvalue position. This is the hash-join key for pair search.
    pub fn middle_row_sums(&self) -> Vec<usize> {
        (1..self.rows() - 1).map(|i| self.inner.row_sum(i)).collect()
    }

    /// Total middle mass: sum of all middle entries.
    pub fn middle_mass(&self) -> usize {
        self.middle_row_sums().iter().sum()
    }
}

impl std::fmt::Display for MultiplicityMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // right-align within each column so witnesses read like matrices
        let width = (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| format!("{:>width$}", self.get(i, j)))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MultiplicityMatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<usize>>,
}

impl Serialize for MultiplicityMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = MultiplicityMatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: (0..self.rows()).map(|i| self.inner.row(i).to_vec()).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiplicityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MultiplicityMatrixRepr::deserialize(deserializer)?;
        if repr.data.len() != repr.rows || repr.data.iter().any(|r| r.len() != repr.cols) {
            return Err(serde::de::Error::custom("matrix data does not match rows/cols"));
        }
        MultiplicityMatrix::from_rows(repr.data).map_err(serde::de::Error::custom)
    }
}

/// Strictly increasing list of eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EigenvalueList {
    values: Vec<f64>,
}

impl EigenvalueList {
    pub fn new(values: Vec<f64>) -> Result<Self, ModelError> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NotIncreasing);
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::NotIncreasing);
        }
        Ok(Self { values })
    }

    /// A list usable for an orthogonal symmetric realization: first value -1,
    /// last value +1, interior values strictly inside (-1, 1).
    pub fn realization(values: Vec<f64>) -> Result<Self, ModelError> {
        let list = Self::new(values)?;
        if !list.is_realization_list() {
            return Err(ModelError::BadRealizationList);
        }
        Ok(list)
    }

    pub fn is_realization_list(&self) -> bool {
        let n = self.values.len();
        n >= 2
            && self.values[0] == -1.0
            && self.values[n - 1] == 1.0
            && self.values[1..n - 1].iter().all(|&v| -1.0 < v && v < 1.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, s: usize) -> f64 {
        self.values[s]
    }
}

impl TryFrom<Vec<f64>> for EigenvalueList {
    type Error = ModelError;
    fn try_from(v: Vec<f64>) -> Result<Self, ModelError> {
        EigenvalueList::new(v)
    }
}

impl From<EigenvalueList> for Vec<f64> {
    fn from(l: EigenvalueList) -> Vec<f64> {
        l.values
    }
}

/// Square real matrix with an exact-symmetry storage contract.
///
/// Constructors either place each off-diagonal value at both `(i, j)` and
/// `(j, i)` or reject input that is not bitwise symmetric, so
/// `x.get(i, j) == x.get(j, i)` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>, // row-major, kept exactly symmetric
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Build from row-major data, rejecting anything not exactly symmetric.
    pub fn from_raw(n: usize, data: Vec<f64>) -> Result<Self, ModelError> {
        if data.len() != n * n {
            return Err(ModelError::BadDataLength {
                got: data.len(),
                expected: n * n,
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(ModelError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Build from an arbitrary square matrix by averaging with its transpose.
    /// Used where floating-point products (e.g. `U D U^T`) are symmetric only
    /// up to rounding.
    pub fn symmetrized(m: &nalgebra::DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "symmetrized needs a square matrix");
        let n = m.nrows();
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.data[i * n + i] = m[(i, i)];
            for j in (i + 1)..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                out.data[i * n + j] = v;
                out.data[j * n + i] = v;
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n);
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.n && j < self.n);
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dmatrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

#[derive(Serialize, Deserialize)]
struct DenseSymMatrixRepr {
    n: usize,
    data: Vec<f64>,
}

impl Serialize for DenseSymMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DenseSymMatrixRepr {
            n: self.n,
            data: self.data.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DenseSymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DenseSymMatrixRepr::deserialize(deserializer)?;
        DenseSymMatrix::from_raw(repr.n, repr.data).map_err(serde::de::Error::custom)
    }
}

/// Which closed-form condition decided `q = 2`, with the inputs oriented so
/// the first tuple has at most as many components as the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// No isolated vertices on either side and `l <= |m|`.
    G1,
    /// Isolated vertices on the small side and `k + l <= |m| + iso(m)`.
    G2,
    /// Isolated vertices only on the large side, with one of the three
    /// cross conditions.
    G3,
    /// No condition triggered: `q = 3`.
    None,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Rule::G1 => "g1",
            Rule::G2 => "g2",
            Rule::G3 => "g3",
            Rule::None => "none",
        };
        write!(f, "{s}")
    }
}

/// Witness pair `(V, W)` of compatible multiplicity matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub v: MultiplicityMatrix,
    pub w: MultiplicityMatrix,
}

/// Outcome of the closed-form decision for one pair of tuples.
///
/// Invariants: `q == 2` iff `witness` is present iff `mu` is present; a
/// present witness satisfies the validity and compatibility predicates, in
/// the caller's orientation. `swapped` records whether the inputs were
/// exchanged internally to enforce `k <= l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub q: u8,
    pub rule: Rule,
    pub witness: Option<WitnessPair>,
    pub mu: Option<usize>,
    pub iplus_range: Option<(usize, usize)>,
    pub swapped: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_types_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<SizeTuple>();
        assert_send_sync::<IntMatrix>();
        assert_send_sync::<MultiplicityMatrix>();
        assert_send_sync::<EigenvalueList>();
        assert_send_sync::<DenseSymMatrix>();
        assert_send_sync::<DecisionReport>();
    }

    #[test]
    fn size_tuple_rejects_zero_and_empty() {
        assert!(SizeTuple::new(vec![]).is_err());
        assert!(SizeTuple::new(vec![2, 0]).is_err());
        let t = SizeTuple::new(vec![2, 1, 3]).unwrap();
        assert_eq!(t.total(), 6);
        assert_eq!(t.iso(), 1);
        assert_eq!(t.sorted_desc().entries(), &[3, 2, 1]);
    }

    #[test]
    fn size_tuple_total_plus_iso_dominates_twice_len() {
        // |m| + iso(m) >= 2k for every constructible tuple
        for entries in [vec![1], vec![1, 1, 1], vec![2, 2], vec![5, 1, 3]] {
            let t = SizeTuple::new(entries).unwrap();
            assert!(t.total() + t.iso() >= 2 * t.len());
        }
    }

    #[test]
    fn middle_deletes_first_and_last_rows() {
        let v = MultiplicityMatrix::from_rows(vec![vec![1, 0], vec![2, 3], vec![0, 1]]).unwrap();
        assert_eq!(v.middle(), IntMatrix::from_rows(vec![vec![2, 3]]).unwrap());

        let v = MultiplicityMatrix::from_rows(vec![vec![1], vec![1], vec![1], vec![0]]).unwrap();
        assert_eq!(v.middle(), IntMatrix::from_rows(vec![vec![1], vec![1]]).unwrap());

        let v = MultiplicityMatrix::from_rows(vec![
            vec![1, 1],
            vec![0, 0],
            vec![0, 0],
            vec![0, 0],
            vec![1, 1],
        ])
        .unwrap();
        assert_eq!(v.middle(), IntMatrix::zeros(3, 2));
    }

    #[test]
    fn multiplicity_matrix_rejects_short_or_zero_column() {
        assert_eq!(
            MultiplicityMatrix::from_rows(vec![vec![1], vec![1]]).unwrap_err(),
            ModelError::TooFewRows(2)
        );
        assert_eq!(
            MultiplicityMatrix::from_rows(vec![vec![1, 0], vec![1, 0], vec![1, 0]]).unwrap_err(),
            ModelError::ZeroColumn(1)
        );
    }

    #[test]
    fn middle_is_linear_under_column_concatenation() {
        let a = MultiplicityMatrix::from_rows(vec![vec![1], vec![2], vec![0]]).unwrap();
        let b = MultiplicityMatrix::from_rows(vec![vec![0, 1], vec![3, 1], vec![1, 0]]).unwrap();
        let cat =
            MultiplicityMatrix::from_grid(a.as_grid().hcat(b.as_grid()).unwrap()).unwrap();
        assert_eq!(cat.middle(), a.middle().hcat(&b.middle()).unwrap());
    }

    #[test]
    fn eigenvalue_list_validation() {
        assert!(EigenvalueList::new(vec![0.0, 0.0]).is_err());
        assert!(EigenvalueList::new(vec![1.0, -1.0]).is_err());
        let l = EigenvalueList::new(vec![-1.0, 0.0, 1.0]).unwrap();
        assert!(l.is_realization_list());
        assert!(!EigenvalueList::new(vec![-1.0, 0.5]).unwrap().is_realization_list());
        assert!(EigenvalueList::realization(vec![-1.0, -1.5, 1.0]).is_err());
    }

    #[test]
    fn dense_sym_matrix_contract() {
        let mut x = DenseSymMatrix::zeros(3);
        x.set(0, 2, 1.5);
        assert_eq!(x.get(2, 0), 1.5);
        assert!(DenseSymMatrix::from_raw(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DenseSymMatrix::from_raw(2, vec![0.0, 1.0, 1.0]).is_err());
        let ok = DenseSymMatrix::from_raw(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(ok.max_abs(), 1.0);
    }

    #[test]
    fn json_shapes_match_interface() {
        let t = SizeTuple::new(vec![2, 2]).unwrap();
        assert_eq!(serde_json::to_string(&t).unwrap(), "[2,2]");

        let v = MultiplicityMatrix::from_rows(vec![vec![1, 0], vec![2, 3], vec![0, 1]]).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["rows"], 3);
        assert_eq!(json["cols"], 2);
        assert_eq!(json["data"][1][1], 3);
        let back: MultiplicityMatrix = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);

        let report = DecisionReport {
            q: 3,
            rule: Rule::None,
            witness: None,
            mu: None,
            iplus_range: None,
            swapped: false,
        };
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["q"], 3);
        assert_eq!(json["rule"], "none");
        assert!(json["witness"].is_null());
        assert!(json["mu"].is_null());
    }
}
