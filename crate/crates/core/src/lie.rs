//! Homotopy invariants of a minimal presentation: generator dimensions
//! per degree, and the fundamental Lie algebra dual to the degree-1 part.
//!
//! The bracket is read off the quadratic differential: writing
//! `d v_k = sum_{i<j} a_{ij}^k v_i v_j` on degree-1 generators, the dual
//! basis `x_i` carries `[x_i, x_j] = -sum_k a_{ij}^k x_k` for `i < j`,
//! extended antisymmetrically. Any consistent sign works; this one is
//! pinned once so every reported bracket, lower-central-series table, and
//! holonomy matrix agrees across runs. `d^2 = 0` on the degree-1 part is
//! exactly the Jacobi identity for this bracket.

use num_traits::Zero;
use std::collections::BTreeMap;

use crate::cdga::CdgaPresentation;
use crate::error::{Error, Result};
use crate::linalg::{qzero, rank, rref, QMatrix, Rational};

/// Finite-dimensional Lie algebra given by structure constants on a
/// fixed basis.
#[derive(Debug, Clone)]
pub struct LieAlgebraData {
    pub basis_names: Vec<String>,
    /// `brackets[i][j]` = coordinates of `[x_i, x_j]`.
    brackets: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebraData {
    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    /// Build from the brackets of basis pairs `i < j`; the rest follows
    /// by antisymmetry.
    pub fn from_upper_brackets(
        basis_names: Vec<String>,
        upper: &BTreeMap<(usize, usize), Vec<Rational>>,
    ) -> Result<Self> {
        let dim = basis_names.len();
        let mut brackets = vec![vec![vec![qzero(); dim]; dim]; dim];
        for (&(i, j), v) in upper {
            if i >= j || j >= dim {
                return Err(Error::Domain(format!(
                    "bracket indices ({i},{j}) out of order or range"
                )));
            }
            if v.len() != dim {
                return Err(Error::Dimension("bracket vector has wrong length".into()));
            }
            brackets[i][j] = v.clone();
            brackets[j][i] = v.iter().map(|c| -c).collect();
        }
        Ok(LieAlgebraData {
            basis_names,
            brackets,
        })
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Rational] {
        &self.brackets[i][j]
    }

    /// Bilinear bracket of coordinate vectors.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        let dim = self.dim();
        if u.len() != dim || v.len() != dim {
            return Err(Error::Dimension("vector length mismatch".into()));
        }
        let mut out = vec![qzero(); dim];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() || i == j {
                    continue;
                }
                for (k, c) in self.brackets[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += a * b * c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Basis triples violating the Jacobi identity (empty when the
    /// source differential squared to zero).
    pub fn jacobi_violations(&self) -> Result<Vec<(usize, usize, usize)>> {
        let dim = self.dim();
        let e = |i: usize| {
            let mut v = vec![qzero(); dim];
            v[i] = crate::linalg::qone();
            v
        };
        let mut bad = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let a = self.bracket(&self.bracket(&e(i), &e(j))?, &e(k))?;
                    let b = self.bracket(&self.bracket(&e(j), &e(k))?, &e(i))?;
                    let c = self.bracket(&self.bracket(&e(k), &e(i))?, &e(j))?;
                    let sum: Vec<Rational> = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .map(|((x, y), z)| x + y + z)
                        .collect();
                    if sum.iter().any(|c| !c.is_zero()) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        Ok(bad)
    }
}

/// Lower central series table: `rows[n-1] = (n, dim L^n / L^{n+1})`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LcsTable {
    pub rows: Vec<(usize, usize)>,
    pub nilpotency_index: Option<usize>,
}

/// Generator dimensions of a minimal presentation, read as homotopy data.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HomotopyDims {
    /// `dim V^n` for `2 <= n <= max`; the dual spaces in these degrees.
    pub higher: Vec<(usize, usize)>,
    /// Size of the degree-1 part (the fundamental data lives in the Lie
    /// algebra, not here).
    pub degree1_dim: usize,
    /// Cumulative degree-1 dimensions per construction stage, when the
    /// generators carry stage tags.
    pub degree1_stages: Option<Vec<(usize, usize)>>,
}

/// Count generators per degree. Errors on non-minimal input: generator
/// counts only read off homotopy for minimal presentations.
pub fn homotopy_dims(p: &CdgaPresentation, max_degree: usize) -> Result<HomotopyDims> {
    if !p.is_minimal() {
        return Err(Error::NotMinimal(
            "homotopy dimensions are generator counts of a minimal presentation".into(),
        ));
    }
    let mut higher = Vec::new();
    for n in 2..=max_degree {
        let dim = p.gens().iter().filter(|(_, g)| g.degree == n).count();
        higher.push((n, dim));
    }
    let degree1: Vec<_> = p
        .gens()
        .iter()
        .filter(|(_, g)| g.degree == 1)
        .map(|(_, g)| g.stage)
        .collect();
    let degree1_dim = degree1.len();
    let degree1_stages = if degree1.iter().any(|s| s.is_some()) {
        let mut by_stage: BTreeMap<usize, usize> = BTreeMap::new();
        for s in degree1.iter() {
            *by_stage.entry(s.unwrap_or(0)).or_insert(0) += 1;
        }
        let mut cumulative = 0;
        Some(
            by_stage
                .into_iter()
                .map(|(stage, count)| {
                    cumulative += count;
                    (stage, cumulative)
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(HomotopyDims {
        higher,
        degree1_dim,
        degree1_stages,
    })
}

/// The fundamental Lie algebra: dual basis of the degree-1 generators
/// with the bracket dual to the quadratic differential.
pub fn fundamental_lie(p: &CdgaPresentation) -> Result<LieAlgebraData> {
    if !p.is_minimal() {
        return Err(Error::NotMinimal(
            "the fundamental Lie algebra needs a minimal presentation".into(),
        ));
    }
    let deg1: Vec<usize> = p.gens().in_degree(1);
    let dim = deg1.len();
    let position: BTreeMap<usize, usize> = deg1
        .iter()
        .enumerate()
        .map(|(pos, &idx)| (idx, pos))
        .collect();
    let names = deg1
        .iter()
        .map(|&i| format!("x_{}", p.gens().name(i)))
        .collect();
    let mut upper: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
    for (k, &gen_idx) in deg1.iter().enumerate() {
        let d = p.differential(gen_idx);
        for (m, coeff) in d.terms() {
            let factors = m.factors();
            // degree-2 monomials over a minimal algebra whose generator
            // has degree 1: exactly two degree-1 factors
            if factors.len() != 2
                || factors.iter().any(|&(g, e)| e != 1 || p.gens().degree(g) != 1)
            {
                return Err(Error::Domain(format!(
                    "diff {} has a non-quadratic degree-1 term {}",
                    p.gens().name(gen_idx),
                    m.render(p.gens())
                )));
            }
            let i = position[&factors[0].0];
            let j = position[&factors[1].0];
            let entry = upper.entry((i, j)).or_insert_with(|| vec![qzero(); dim]);
            entry[k] -= coeff;
        }
    }
    LieAlgebraData::from_upper_brackets(names, &upper)
}

/// Lower central series dimensions: `L^1 = L`, `L^{n+1} = [L, L^n]`,
/// computed by rank on the structure-constant model.
pub fn lcs_quotients(lie: &LieAlgebraData, depth: usize) -> Result<LcsTable> {
    let dim = lie.dim();
    // current term of the series, as a row-space basis
    let mut current: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut v = vec![qzero(); dim];
            v[i] = crate::linalg::qone();
            v
        })
        .collect();
    let mut dims = vec![current.len()];
    for _ in 1..=depth {
        let mut spanned = Vec::new();
        for i in 0..dim {
            let mut e = vec![qzero(); dim];
            e[i] = crate::linalg::qone();
            for w in &current {
                let b = lie.bracket(&e, w)?;
                if b.iter().any(|c| !c.is_zero()) {
                    spanned.push(b);
                }
            }
        }
        current = row_space_basis(&spanned, dim);
        dims.push(current.len());
        if current.is_empty() {
            break;
        }
    }
    while dims.len() < depth + 1 {
        dims.push(0);
    }
    let rows: Vec<(usize, usize)> = (1..=depth).map(|n| (n, dims[n - 1] - dims[n])).collect();
    // dims[n] is dim L^{n+1}; the first zero position is the index
    let nilpotency_index = (0..=depth).find(|&n| dims[n] == 0);
    Ok(LcsTable {
        rows,
        nilpotency_index,
    })
}

fn row_space_basis(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = QMatrix::from_rows(rows);
    let red = rref(&m);
    (0..red.pivots.len())
        .map(|r| (0..width).map(|c| red.matrix.get(r, c)).collect())
        .collect()
}

/// Dimension of `L / [L, L]`.
pub fn abelianization_dim(lie: &LieAlgebraData) -> usize {
    let dim = lie.dim();
    let mut commutators = Vec::new();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let b = lie.basis_bracket(i, j);
            if b.iter().any(|c| !c.is_zero()) {
                commutators.push(b.to_vec());
            }
        }
    }
    if commutators.is_empty() {
        return dim;
    }
    dim - rank(&QMatrix::from_rows(&commutators))
}
