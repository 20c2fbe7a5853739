//! Exact linear algebra over the rationals.
//!
//! Everything downstream (cohomology, model construction, holonomy
//! matrices) reduces to reduced row echelon form, kernels, and solves on
//! sparse matrices of arbitrary-precision rationals. The conventions are
//! deterministic on purpose: pivots are the first nonzero entries scanned
//! in column order, free variables are set to zero, and complements are
//! the non-pivot coordinates in ascending order. Golden outputs depend on
//! these choices staying fixed.

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Exact scalar: arbitrary-precision fraction, always in lowest terms with
/// a positive denominator.
pub type Rational = num_rational::BigRational;

/// 0 as a `Rational`.
pub fn qzero() -> Rational {
    Rational::zero()
}

/// 1 as a `Rational`.
pub fn qone() -> Rational {
    Rational::one()
}

/// Integer as a `Rational`.
pub fn qint(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `n/d` as a `Rational`. Panics if `d == 0`.
pub fn qfrac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Sparse matrix over the rationals. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, qone());
        }
        m
    }

    /// Build from dense row-major data; zeros are dropped.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = QMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Build from columns (each a coordinate vector).
    pub fn from_columns(cols: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = QMatrix::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(qzero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but vector has length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![qzero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += a * &v[c];
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mul_mat(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zero(self.rows, other.cols);
        // group other's entries by row for sparse traversal
        let mut by_row: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    let e = acc.entry((i, j)).or_insert_with(qzero);
                    *e += a * b;
                }
            }
        }
        for ((i, j), v) in acc {
            out.set(i, j, v);
        }
        Ok(out)
    }

    /// Rows as sparse maps, for elimination.
    fn sparse_rows(&self) -> Vec<BTreeMap<usize, Rational>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows
    }

    fn from_sparse_rows(rows: Vec<BTreeMap<usize, Rational>>, cols: usize) -> Self {
        let mut m = QMatrix::zero(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row {
                if !v.is_zero() {
                    m.entries.insert((i, j), v);
                }
            }
        }
        m
    }
}

/// Result of row reduction: the reduced matrix plus the ascending list of
/// pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row echelon form by exact Gauss-Jordan elimination.
///
/// The pivot in each column is the first remaining row with a nonzero
/// entry; rows end up ordered by pivot column, pivots normalized to 1 and
/// cleared above and below.
pub fn rref(m: &QMatrix) -> Rref {
    let mut rows = m.sparse_rows();
    let ncols = m.cols();
    let mut pivots = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(pr) = (next_row..rows.len()).find(|&r| {
            rows[r]
                .get(&col)
                .map(|v| !v.is_zero())
                .unwrap_or(false)
        }) else {
            continue;
        };
        rows.swap(pr, next_row);
        // normalize pivot row
        let inv = {
            let p = rows[next_row].get(&col).unwrap().clone();
            qone() / p
        };
        if !inv.is_one() {
            for v in rows[next_row].values_mut() {
                *v *= &inv;
            }
        }
        // eliminate the column everywhere else
        let pivot_row = rows[next_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next_row {
                continue;
            }
            let Some(f) = row.get(&col).cloned() else {
                continue;
            };
            if f.is_zero() {
                continue;
            }
            for (&j, pv) in &pivot_row {
                let delta = &f * pv;
                let entry = row.entry(j).or_insert_with(qzero);
                *entry -= delta;
                if entry.is_zero() {
                    row.remove(&j);
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    Rref {
        matrix: QMatrix::from_sparse_rows(rows, ncols),
        pivots,
    }
}

/// Rank of a matrix.
pub fn rank(m: &QMatrix) -> usize {
    rref(m).rank()
}

/// Basis of the kernel `{ v : m v = 0 }`.
///
/// One vector per free column, free columns ascending; the free coordinate
/// is 1 and pivot coordinates are read off the reduced form.
pub fn nullspace_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    let red = rref(m);
    let pivot_set: BTreeMap<usize, usize> = red
        .pivots
        .iter()
        .enumerate()
        .map(|(row, &col)| (col, row))
        .collect();
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if pivot_set.contains_key(&free) {
            continue;
        }
        let mut v = vec![qzero(); m.cols()];
        v[free] = qone();
        for (&pc, &pr) in &pivot_set {
            let a = red.matrix.get(pr, free);
            if !a.is_zero() {
                v[pc] = -a;
            }
        }
        basis.push(v);
    }
    basis
}

/// Solve `m x = b`, returning `None` when inconsistent.
///
/// Free variables are set to zero, so the answer is unique and stable.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows but right-hand side has length {}",
            m.rows(),
            b.len()
        )));
    }
    // eliminate on the augmented matrix
    let mut aug = QMatrix::zero(m.rows(), m.cols() + 1);
    for (r, c, v) in m.iter() {
        aug.set(r, c, v.clone());
    }
    for (r, v) in b.iter().enumerate() {
        aug.set(r, m.cols(), v.clone());
    }
    let red = rref(&aug);
    if red.pivots.contains(&m.cols()) {
        return Ok(None); // a pivot in the augmented column: inconsistent
    }
    let mut x = vec![qzero(); m.cols()];
    for (row, &col) in red.pivots.iter().enumerate() {
        x[col] = red.matrix.get(row, m.cols());
    }
    Ok(Some(x))
}

/// Indices of standard basis vectors completing `subspace` to the ambient
/// space: the non-pivot coordinates of the subspace's row reduction,
/// ascending.
pub fn complement_basis(subspace: &[Vec<Rational>], ambient_dim: usize) -> Result<Vec<usize>> {
    for v in subspace {
        if v.len() != ambient_dim {
            return Err(Error::Dimension(format!(
                "subspace vector has length {} in ambient dimension {}",
                v.len(),
                ambient_dim
            )));
        }
    }
    let m = QMatrix::from_rows(subspace);
    let red = if subspace.is_empty() {
        Rref {
            matrix: QMatrix::zero(0, ambient_dim),
            pivots: Vec::new(),
        }
    } else {
        rref(&m)
    };
    Ok((0..ambient_dim)
        .filter(|c| !red.pivots.contains(c))
        .collect())
}

/// Smallest `k >= 1` with `m^k = 0`, or `None` if `m` is not nilpotent.
/// Only powers up to the dimension are tried.
pub fn nilpotency_index(m: &QMatrix) -> Result<Option<usize>> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension("nilpotency needs a square matrix".into()));
    }
    if m.rows() == 0 {
        return Ok(Some(1));
    }
    let mut power = m.clone();
    for k in 1..=m.rows() {
        if power.is_zero() {
            return Ok(Some(k));
        }
        power = power.mul_mat(m)?;
    }
    Ok(if power.is_zero() {
        Some(m.rows() + 1)
    } else {
        None
    })
}

impl std::fmt::Display for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        let data: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| qint(x)).collect()).collect();
        QMatrix::from_rows(&data)
    }

    #[test]
    fn rref_zero_matrix() {
        let red = rref(&m(&[&[0]]));
        assert!(red.matrix.is_zero());
        assert!(red.pivots.is_empty());
    }

    #[test]
    fn rref_identity() {
        let red = rref(&QMatrix::identity(3));
        assert_eq!(red.matrix, QMatrix::identity(3));
        assert_eq!(red.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one() {
        let red = rref(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(red.matrix, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(red.pivots, vec![0]);
    }

    #[test]
    fn rref_idempotent() {
        let a = m(&[&[1, 2, 3], &[2, 4, 7], &[0, 1, 1]]);
        let once = rref(&a);
        let twice = rref(&once.matrix);
        assert_eq!(once.matrix, twice.matrix);
        assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn nullspace_of_injective_map_is_empty() {
        assert!(nullspace_basis(&QMatrix::identity(2)).is_empty());
    }

    #[test]
    fn nullspace_of_zero_map_is_standard_basis() {
        let basis = nullspace_basis(&m(&[&[0, 0, 0]]));
        assert_eq!(basis.len(), 3);
        for (i, v) in basis.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, if i == j { qone() } else { qzero() });
            }
        }
    }

    #[test]
    fn nullspace_hand_example() {
        let basis = nullspace_basis(&m(&[&[1, 1, 0], &[0, 0, 1]]));
        assert_eq!(basis.len(), 1);
        // (1,-1,0) up to scalar; the free-column convention scales it this way
        assert_eq!(basis[0], vec![qint(-1), qint(1), qint(0)]);
    }

    #[test]
    fn solve_identity() {
        let x = solve(&QMatrix::identity(2), &[qint(3), qint(5)]).unwrap().unwrap();
        assert_eq!(x, vec![qint(3), qint(5)]);
    }

    #[test]
    fn solve_free_variable_zero() {
        let x = solve(&m(&[&[1, 1]]), &[qint(2)]).unwrap().unwrap();
        assert_eq!(x, vec![qint(2), qint(0)]);
    }

    #[test]
    fn solve_inconsistent() {
        assert!(solve(&m(&[&[0]]), &[qint(1)]).unwrap().is_none());
    }

    #[test]
    fn complement_of_zero_subspace() {
        assert_eq!(complement_basis(&[], 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn complement_of_coordinate_line() {
        assert_eq!(
            complement_basis(&[vec![qint(1), qint(0)]], 2).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn complement_hand_example() {
        let sub = vec![
            vec![qint(1), qint(1), qint(0)],
            vec![qint(0), qint(1), qint(1)],
        ];
        assert_eq!(complement_basis(&sub, 3).unwrap(), vec![2]);
    }

    #[test]
    fn nilpotency_of_shift_block() {
        let mut n = QMatrix::zero(3, 3);
        n.set(0, 1, qone());
        n.set(1, 2, qone());
        assert_eq!(nilpotency_index(&n).unwrap(), Some(3));
        assert_eq!(nilpotency_index(&QMatrix::identity(2)).unwrap(), None);
        assert_eq!(nilpotency_index(&QMatrix::zero(2, 2)).unwrap(), Some(1));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = QMatrix> {
            (1usize..=5, 1usize..=5)
                .prop_flat_map(|(r, c)| {
                    (
                        Just((r, c)),
                        proptest::collection::vec(-4i64..=4, r * c),
                    )
                })
                .prop_map(|((r, c), data)| {
                    let mut m = QMatrix::zero(r, c);
                    for (k, v) in data.into_iter().enumerate() {
                        m.set(k / c, k % c, qint(v));
                    }
                    m
                })
        }

        proptest! {
            #[test]
            fn rank_plus_nullity_is_the_column_count(m in arb_matrix()) {
                let red = rref(&m);
                let kernel = nullspace_basis(&m);
                prop_assert_eq!(red.rank() + kernel.len(), m.cols());
                for v in &kernel {
                    let image = m.mul_vec(v).unwrap();
                    prop_assert!(image.iter().all(|c| c.is_zero()));
                }
            }

            #[test]
            fn rref_is_idempotent(m in arb_matrix()) {
                let once = rref(&m);
                let twice = rref(&once.matrix);
                prop_assert_eq!(&once.matrix, &twice.matrix);
                prop_assert_eq!(&once.pivots, &twice.pivots);
            }

            #[test]
            fn consistent_systems_solve_exactly(
                (m, x) in arb_matrix().prop_flat_map(|m| {
                    let cols = m.cols();
                    (Just(m), proptest::collection::vec(-3i64..=3, cols))
                })
            ) {
                let x: Vec<Rational> = x.into_iter().map(qint).collect();
                let b = m.mul_vec(&x).unwrap();
                let solved = solve(&m, &b).unwrap().expect("consistent by construction");
                prop_assert_eq!(m.mul_vec(&solved).unwrap(), b);
            }
        }
    }
}
