//! Relative Sullivan algebras and the algebraic holonomy action.
//!
//! A relative presentation is a total algebra on base generators followed
//! by fiber generators, whose differential restricts to the base and
//! admits a fiber filtration: `W(-1) = 0` and `W(r)` collects the fiber
//! generators whose differentials only involve fiber generators of lower
//! filtration. The dual of a degree-1 base generator acts on fiber
//! cohomology by extracting the terms of `d(phi)` with exactly one base
//! factor, evaluating the dual there, and taking the class of what
//! remains. Exponentiating gives a unipotent action; the filtration
//! forces every exponential series to terminate.
//!
//! Matrix conventions differ by audience: the reported holonomy matrices
//! put the action of the `j`-th basis class in row `j`, while the
//! internal generator-level operator uses columns so that composition is
//! matrix product.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cdga::CdgaPresentation;
use crate::cohomology::CohomologySpace;
use crate::error::{Error, Result};
use crate::graded::{GeneratorTable, Monomial, Poly};
use crate::linalg::{qint, qone, qzero, QMatrix, Rational};

/// A total algebra split into base and fiber generators. Base generators
/// occupy the low indices, so any monomial's base factors form a prefix.
#[derive(Debug, Clone)]
pub struct RelativeSullivan {
    total: CdgaPresentation,
    base_len: usize,
}

/// Filtration stage of each fiber generator, keyed by name.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FiberFiltration {
    pub assignment: BTreeMap<String, usize>,
    pub max_stage: usize,
}

/// A fiber cohomology class in representative coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberClass {
    pub degree: usize,
    pub coords: Vec<Rational>,
}

impl FiberClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl RelativeSullivan {
    /// Wrap a parsed presentation that declared `fiber` generators.
    pub fn new(total: CdgaPresentation) -> Result<Self> {
        if !total.has_fiber() {
            return Err(Error::Domain(
                "presentation declares no fiber generators".into(),
            ));
        }
        let base_len = total.base_indices().len();
        for (i, idx) in total.fiber_indices().iter().enumerate() {
            if *idx != base_len + i {
                return Err(Error::Domain(
                    "fiber generators must follow all base generators".into(),
                ));
            }
        }
        Ok(RelativeSullivan { total, base_len })
    }

    pub fn parse(text: &str) -> Result<Self> {
        RelativeSullivan::new(CdgaPresentation::parse(text)?)
    }

    pub fn total(&self) -> &CdgaPresentation {
        &self.total
    }

    pub fn base_len(&self) -> usize {
        self.base_len
    }

    pub fn fiber_len(&self) -> usize {
        self.total.gens().len() - self.base_len
    }

    pub fn set_max_degree(&mut self, cap: usize) {
        self.total.set_max_degree(cap);
    }

    /// Indices (into the total table) of degree-1 base generators: the
    /// basis whose duals act.
    pub fn dual_basis_indices(&self) -> Vec<usize> {
        (0..self.base_len)
            .filter(|&i| self.total.gens().degree(i) == 1)
            .collect()
    }

    /// The base presentation on the leading generators.
    pub fn base_presentation(&self) -> Result<CdgaPresentation> {
        let mut table = GeneratorTable::new();
        for i in 0..self.base_len {
            let g = self.total.gens().get(i);
            table.push_staged(&g.name, g.degree, g.stage)?;
        }
        let arc = Arc::new(table);
        let mut diffs = Vec::new();
        for i in 0..self.base_len {
            let d = self.total.differential(i);
            let mut p = Poly::zero(arc.clone());
            for (m, c) in d.terms() {
                p.add_term(Monomial::new(&arc, m.factors().to_vec())?, c.clone());
            }
            diffs.push((i, p));
        }
        CdgaPresentation::new(arc, diffs, self.total.max_degree())
    }

    /// The fiber presentation `(ΛW, d̄)`: the quotient by the ideal of
    /// positive-degree base elements, i.e. drop every monomial with a
    /// base factor.
    pub fn fiber_presentation(&self) -> Result<CdgaPresentation> {
        let mut table = GeneratorTable::new();
        for i in self.base_len..self.total.gens().len() {
            let g = self.total.gens().get(i);
            table.push_staged(&g.name, g.degree, g.stage)?;
        }
        let arc = Arc::new(table);
        let mut diffs = Vec::new();
        for (pos, i) in (self.base_len..self.total.gens().len()).enumerate() {
            let d = self.total.differential(i);
            let mut p = Poly::zero(arc.clone());
            for (m, c) in d.terms() {
                if m.factors().iter().any(|&(g, _)| g < self.base_len) {
                    continue;
                }
                let shifted: Vec<(usize, u32)> = m
                    .factors()
                    .iter()
                    .map(|&(g, e)| (g - self.base_len, e))
                    .collect();
                p.add_term(Monomial::new(&arc, shifted)?, c.clone());
            }
            diffs.push((pos, p));
        }
        CdgaPresentation::new(arc, diffs, self.total.max_degree())
    }

    /// Lift a fiber polynomial into the total algebra.
    pub fn inject_fiber(&self, p: &Poly) -> Result<Poly> {
        if p.table().len() != self.fiber_len() {
            return Err(Error::MixedTables);
        }
        for (i, g) in p.table().iter() {
            if g.name != self.total.gens().name(self.base_len + i) {
                return Err(Error::MixedTables);
            }
        }
        let mut out = self.total.zero();
        for (m, c) in p.terms() {
            let shifted: Vec<(usize, u32)> = m
                .factors()
                .iter()
                .map(|&(g, e)| (g + self.base_len, e))
                .collect();
            out.add_term(Monomial::new(self.total.gens(), shifted)?, c.clone());
        }
        Ok(out)
    }

    /// Least fixed point of the filtration condition, or an error if some
    /// generator never stabilizes.
    pub fn fiber_filtration(&self) -> Result<FiberFiltration> {
        let fiber = self.total.fiber_indices();
        let mut stage: BTreeMap<usize, usize> = BTreeMap::new();
        loop {
            let mut progressed = false;
            for &w in &fiber {
                if stage.contains_key(&w) {
                    continue;
                }
                let d = self.total.differential(w);
                let mut level: Option<usize> = Some(0);
                'terms: for (m, _) in d.terms() {
                    for &(g, _) in m.factors() {
                        if g >= self.base_len {
                            match stage.get(&g) {
                                Some(&r) => level = level.map(|l| l.max(r + 1)),
                                None => {
                                    level = None;
                                    break 'terms;
                                }
                            }
                        }
                    }
                }
                if let Some(r) = level {
                    stage.insert(w, r);
                    progressed = true;
                }
            }
            if stage.len() == fiber.len() {
                break;
            }
            if !progressed {
                let stuck: Vec<&str> = fiber
                    .iter()
                    .filter(|w| !stage.contains_key(w))
                    .map(|&w| self.total.gens().name(w))
                    .collect();
                return Err(Error::Domain(format!(
                    "not a relative Sullivan algebra: no fiber filtration reaches {}",
                    stuck.join(", ")
                )));
            }
        }
        let max_stage = stage.values().max().copied().unwrap_or(0);
        let assignment = stage
            .into_iter()
            .map(|(i, r)| (self.total.gens().name(i).to_string(), r))
            .collect();
        Ok(FiberFiltration {
            assignment,
            max_stage,
        })
    }

    /// Structural report: filtration existence, fiber minimality (the
    /// induced fiber differential has no linear part), and validity of
    /// the base and total differentials.
    pub fn validate(&self) -> Result<RelativeReport> {
        let filtration = self.fiber_filtration();
        let fiber_minimal = self.fiber_presentation()?.is_minimal();
        let base_report = self.base_presentation()?.validate();
        let total_report = self.total.validate();
        Ok(RelativeReport {
            filtration_exists: filtration.is_ok(),
            filtration: filtration.ok(),
            fiber_minimal,
            base_d_squared_zero: base_report.d_squared_zero,
            total_d_squared_zero: total_report.d_squared_zero,
        })
    }

    fn fiber_h(&self, n: usize) -> Result<CohomologySpace> {
        CohomologySpace::compute(&self.fiber_presentation()?, n)
    }

    /// Decompose `d(phi)` and evaluate the dual element `sx` (coordinates
    /// over the degree-1 base generators) on the single-base-factor part,
    /// returning the surviving fiber element.
    fn action_element(&self, sx: &[Rational], phi: &Poly) -> Result<Poly> {
        let duals = self.dual_basis_indices();
        if sx.len() != duals.len() {
            return Err(Error::Dimension(format!(
                "dual element needs {} coordinates",
                duals.len()
            )));
        }
        let lifted = self.inject_fiber(phi)?;
        let d_total = self.total.apply_d(&lifted)?;
        let fiber_table = self.fiber_presentation()?.gens().clone();
        let mut out = Poly::zero(fiber_table.clone());
        for (m, c) in d_total.terms() {
            let base_factors: Vec<(usize, u32)> = m
                .factors()
                .iter()
                .copied()
                .filter(|&(g, _)| g < self.base_len)
                .collect();
            // sx vanishes except on single degree-1 base factors
            if base_factors.len() != 1 || base_factors[0].1 != 1 {
                continue;
            }
            let z = base_factors[0].0;
            if self.total.gens().degree(z) != 1 {
                continue;
            }
            let Some(pos) = duals.iter().position(|&i| i == z) else {
                continue;
            };
            if sx[pos].is_zero() {
                continue;
            }
            let fiber_part: Vec<(usize, u32)> = m
                .factors()
                .iter()
                .copied()
                .filter(|&(g, _)| g >= self.base_len)
                .map(|(g, e)| (g - self.base_len, e))
                .collect();
            out.add_term(Monomial::new(&fiber_table, fiber_part)?, c * &sx[pos]);
        }
        Ok(out)
    }

    /// Action of a dual element on a fiber cocycle, as a class.
    pub fn l0_action(&self, sx: &[Rational], phi: &Poly) -> Result<FiberClass> {
        let fiber = self.fiber_presentation()?;
        let degree = phi
            .homogeneous_degree()
            .ok_or_else(|| Error::Domain("the action needs a homogeneous fiber element".into()))?;
        let d_bar = fiber.apply_d(phi)?;
        if !d_bar.is_zero() {
            return Err(Error::NotCocycle(format!(
                "{} is not a fiber cocycle",
                phi.render()
            )));
        }
        let element = self.action_element(sx, phi)?;
        let h = self.fiber_h(degree)?;
        let coords = element.coords(&fiber.basis(degree)?)?;
        Ok(FiberClass {
            degree,
            coords: h.reduce(&coords)?,
        })
    }

    /// Representative cocycle of a fiber cohomology class.
    pub fn class_representative(&self, class: &FiberClass) -> Result<Poly> {
        let fiber = self.fiber_presentation()?;
        let h = self.fiber_h(class.degree)?;
        let basis = fiber.basis(class.degree)?;
        if class.coords.len() != h.dim {
            return Err(Error::Dimension("class coordinate length mismatch".into()));
        }
        let mut coords = vec![qzero(); basis.len()];
        for (i, c) in class.coords.iter().enumerate() {
            for (k, r) in h.representatives[i].iter().enumerate() {
                coords[k] += c * r;
            }
        }
        Ok(Poly::from_coords(fiber.gens().clone(), &basis, &coords))
    }

    /// The exponentiated action `sum_i (1/i!) x^i . [phi]`. The fiber
    /// filtration bounds the number of terms; running past it means the
    /// input was not a relative Sullivan algebra.
    pub fn exp_action(&self, sx: &[Rational], class: &FiberClass) -> Result<FiberClass> {
        if class.is_zero() {
            return Ok(class.clone());
        }
        let filtration = self.fiber_filtration()?;
        let guard = filtration.max_stage + 1;
        let mut total = class.clone();
        let mut current = class.clone();
        let mut factorial = qone();
        for i in 1..=guard {
            let rep = self.class_representative(&current)?;
            current = self.l0_action(sx, &rep)?;
            if current.is_zero() {
                return Ok(total);
            }
            factorial = factorial * qint(i as i64);
            total = FiberClass {
                degree: total.degree,
                coords: total
                    .coords
                    .iter()
                    .zip(&current.coords)
                    .map(|(a, b)| a + b / &factorial)
                    .collect(),
            };
        }
        let rep = self.class_representative(&current)?;
        if self.l0_action(sx, &rep)?.is_zero() {
            Ok(total)
        } else {
            Err(Error::Domain(
                "exponential did not terminate within the filtration bound".into(),
            ))
        }
    }

    /// Matrices of every dual basis element acting on `H^n(fiber)`. Row
    /// `j` holds the class coordinates of the action on the `j`-th
    /// representative. Includes per-matrix nilpotency indices.
    pub fn holonomy_matrices(&self, n: usize) -> Result<HolonomyMatrices> {
        let h = self.fiber_h(n)?;
        let fiber = self.fiber_presentation()?;
        let basis = fiber.basis(n)?;
        let class_labels: Vec<String> = h
            .representatives
            .iter()
            .map(|r| format!("[{}]", Poly::from_coords(fiber.gens().clone(), &basis, r).render()))
            .collect();
        let duals = self.dual_basis_indices();
        let mut matrices = BTreeMap::new();
        let mut nilpotency = BTreeMap::new();
        let mut all_nilpotent = true;
        for (pos, &z) in duals.iter().enumerate() {
            let name = self.total.gens().name(z).to_string();
            let mut sx = vec![qzero(); duals.len()];
            sx[pos] = qone();
            let mut m = QMatrix::zero(h.dim, h.dim);
            for (j, rep) in h.representatives.iter().enumerate() {
                let rep_poly = Poly::from_coords(fiber.gens().clone(), &basis, rep);
                let image = self.l0_action(&sx, &rep_poly)?;
                for (k, c) in image.coords.into_iter().enumerate() {
                    m.set(j, k, c);
                }
            }
            let index = crate::linalg::nilpotency_index(&m)?;
            if index.is_none() {
                all_nilpotent = false;
            }
            nilpotency.insert(name.clone(), index);
            matrices.insert(name, m);
        }
        Ok(HolonomyMatrices {
            degree: n,
            class_labels,
            matrices,
            nilpotency,
            nilpotent: all_nilpotent,
        })
    }

    /// Generator-level action of `sx` on the span of the fiber
    /// generators, read from the base-linear, fiber-linear part of each
    /// differential. Column `j` is the image of the `j`-th fiber
    /// generator, so composition is matrix product.
    pub fn w_action_matrix(&self, sx: &[Rational]) -> Result<QMatrix> {
        let duals = self.dual_basis_indices();
        if sx.len() != duals.len() {
            return Err(Error::Dimension(format!(
                "dual element needs {} coordinates",
                duals.len()
            )));
        }
        let fiber = self.total.fiber_indices();
        let mut m = QMatrix::zero(fiber.len(), fiber.len());
        for (j, &w) in fiber.iter().enumerate() {
            let d = self.total.differential(w);
            for (mono, c) in d.terms() {
                let factors = mono.factors();
                if factors.len() != 2 {
                    continue;
                }
                let (z, ez) = factors[0];
                let (wf, ew) = factors[1];
                if z >= self.base_len || wf < self.base_len || ez != 1 || ew != 1 {
                    continue;
                }
                if self.total.gens().degree(z) != 1 {
                    continue;
                }
                let Some(pos) = duals.iter().position(|&i| i == z) else {
                    continue;
                };
                if sx[pos].is_zero() {
                    continue;
                }
                let i = wf - self.base_len;
                let prev = m.get(i, j);
                m.set(i, j, prev + c * &sx[pos]);
            }
        }
        Ok(m)
    }

    /// Exponential of the generator-level action; errors when the matrix
    /// is not nilpotent (no filtration exists).
    pub fn w_exp_matrix(&self, sx: &[Rational]) -> Result<QMatrix> {
        let m = self.w_action_matrix(sx)?;
        let n = m.rows();
        let index = crate::linalg::nilpotency_index(&m)?
            .ok_or_else(|| Error::Domain("generator-level action is not nilpotent".into()))?;
        let mut out = QMatrix::identity(n);
        let mut power = QMatrix::identity(n);
        let mut factorial = qone();
        for i in 1..index {
            power = power.mul_mat(&m)?;
            factorial = factorial * qint(i as i64);
            for (r, c, v) in power.iter() {
                let prev = out.get(r, c);
                out.set(r, c, prev + v / &factorial);
            }
        }
        Ok(out)
    }
}

/// Structural report for a relative presentation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RelativeReport {
    pub filtration_exists: bool,
    pub filtration: Option<FiberFiltration>,
    pub fiber_minimal: bool,
    pub base_d_squared_zero: bool,
    pub total_d_squared_zero: bool,
}

/// Per-dual-element action matrices on one cohomology degree.
#[derive(Debug, Clone)]
pub struct HolonomyMatrices {
    pub degree: usize,
    pub class_labels: Vec<String>,
    pub matrices: BTreeMap<String, QMatrix>,
    pub nilpotency: BTreeMap<String, Option<usize>>,
    pub nilpotent: bool,
}

/// Outcome of the random functional-sum property suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FunctionalSumReport {
    pub trials: usize,
    pub passed: usize,
    /// Trials where the vanishing hypothesis was actually hit.
    pub nonvacuous: usize,
    pub violations: Vec<String>,
    pub witness: Option<WitnessTrace>,
}

/// The directed construction backing the property: the minimal filtration
/// stage seen by the functional and the generator witnessing it.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WitnessTrace {
    pub r0: usize,
    pub generator: String,
    pub fixed_by_all_alphas: bool,
}

fn random_rational<R: Rng>(rng: &mut R, max_abs: i64) -> Rational {
    qint(rng.gen_range(-max_abs..=max_abs))
}

/// Seeded random suite for the functional-sum property: whenever rational
/// weights `c_i` and exponentiated dual elements `alpha_i` satisfy
/// `sum_i c_i (f . alpha_i) = 0` for a nonzero functional `f` on the
/// fiber generators, the weights themselves sum to zero. Each trial also
/// replays the directed argument: `f` is evaluated on a witness generator
/// of minimal filtration, where every `alpha_i` acts as the identity plus
/// strictly lower-filtration noise, so the evaluation returns the plain
/// weight sum.
pub fn lemma31_check(
    rs: &RelativeSullivan,
    trials: usize,
    seed: u64,
) -> Result<FunctionalSumReport> {
    let filtration = rs.fiber_filtration()?;
    let fiber = rs.total().fiber_indices();
    let w_len = fiber.len();
    let dual_len = rs.dual_basis_indices().len();
    if w_len == 0 {
        return Ok(FunctionalSumReport {
            trials,
            passed: trials,
            nonvacuous: 0,
            violations: Vec::new(),
            witness: None,
        });
    }
    let stages: Vec<usize> = fiber
        .iter()
        .map(|&w| filtration.assignment[rs.total().gens().name(w)])
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut nonvacuous = 0usize;
    let mut witness = None;

    for trial in 0..trials {
        let k = rng.gen_range(1..=3usize);
        let mut cs: Vec<Rational> = (0..k).map(|_| random_rational(&mut rng, 3)).collect();
        let mut alphas = Vec::with_capacity(k);
        for _ in 0..k {
            let sx: Vec<Rational> = (0..dual_len)
                .map(|_| random_rational(&mut rng, 2))
                .collect();
            alphas.push(rs.w_exp_matrix(&sx)?);
        }
        // mix in exact cancellations so the vanishing hypothesis is hit
        if trial % 4 == 0 && k >= 2 {
            alphas[1] = alphas[0].clone();
            cs[1] = -cs[0].clone();
            for c in cs.iter_mut().skip(2) {
                *c = qzero();
            }
        }
        let mut f: Vec<Rational> = (0..w_len).map(|_| random_rational(&mut rng, 3)).collect();
        if f.iter().all(|c| c.is_zero()) {
            f[0] = qone();
        }

        // F = sum_i c_i (f . alpha_i), with (f . alpha)(w) = f(alpha w)
        let mut functional = vec![qzero(); w_len];
        for (c, a) in cs.iter().zip(&alphas) {
            if c.is_zero() {
                continue;
            }
            for col in 0..w_len {
                let mut acc = qzero();
                for row in 0..w_len {
                    let entry = a.get(row, col);
                    if !entry.is_zero() {
                        acc += &f[row] * entry;
                    }
                }
                functional[col] += c * acc;
            }
        }
        let c_sum: Rational = cs.iter().fold(qzero(), |acc, c| acc + c);

        if functional.iter().all(|c| c.is_zero()) {
            nonvacuous += 1;
            if !c_sum.is_zero() {
                violations.push(format!(
                    "trial {trial}: functional vanished but weights sum to {c_sum}"
                ));
                continue;
            }
        }

        // directed construction: minimal r0 with f nonvanishing on W(r0)
        let r0 = stages
            .iter()
            .zip(&f)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&r, _)| r)
            .min()
            .expect("f is nonzero");
        let w_pos = (0..w_len)
            .find(|&i| stages[i] == r0 && !f[i].is_zero())
            .expect("witness generator exists");
        let scale = qone() / f[w_pos].clone();
        let mut fixed = true;
        let mut eval_sum = qzero();
        for (c, a) in cs.iter().zip(&alphas) {
            let mut image = vec![qzero(); w_len];
            for row in 0..w_len {
                let entry = a.get(row, w_pos);
                if !entry.is_zero() {
                    image[row] = entry * &scale;
                }
            }
            // alpha . w - w must live strictly below filtration r0
            for (i, v) in image.iter().enumerate() {
                let expected = if i == w_pos { scale.clone() } else { qzero() };
                if *v != expected && stages[i] >= r0 {
                    fixed = false;
                }
            }
            let pairing: Rational = f
                .iter()
                .zip(&image)
                .fold(qzero(), |acc, (fc, ic)| acc + fc * ic);
            if pairing != qone() {
                fixed = false;
            }
            eval_sum += c * pairing;
        }
        if eval_sum != c_sum {
            violations.push(format!(
                "trial {trial}: witness evaluation {eval_sum} differs from weight sum {c_sum}"
            ));
        }
        if !fixed {
            violations.push(format!(
                "trial {trial}: an exponential moved the witness within filtration {r0}"
            ));
        }
        if witness.is_none() {
            witness = Some(WitnessTrace {
                r0,
                generator: rs.total().gens().name(fiber[w_pos]).to_string(),
                fixed_by_all_alphas: fixed,
            });
        }
    }

    Ok(FunctionalSumReport {
        passed: trials - violations.len(),
        trials,
        nonvacuous,
        violations,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_step() -> RelativeSullivan {
        RelativeSullivan::parse("gen z 1\nfiber w1 2\nfiber w2 2\nmaxdeg 5\ndiff w2 = z*w1\n")
            .unwrap()
    }

    fn three_step() -> RelativeSullivan {
        RelativeSullivan::parse(
            "gen z 1\nfiber w1 2\nfiber w2 2\nfiber w3 2\nmaxdeg 5\ndiff w2 = z*w1\ndiff w3 = z*w2\n",
        )
        .unwrap()
    }

    #[test]
    fn filtration_one_step_chase() {
        let rs = two_step();
        let filt = rs.fiber_filtration().unwrap();
        assert_eq!(filt.assignment["w1"], 0);
        assert_eq!(filt.assignment["w2"], 1);
        assert_eq!(filt.max_stage, 1);
    }

    #[test]
    fn filtration_all_zero_when_diffs_vanish() {
        let rs = RelativeSullivan::parse("gen z 1\nfiber w1 2\nfiber w2 3\nmaxdeg 5\n").unwrap();
        let filt = rs.fiber_filtration().unwrap();
        assert!(filt.assignment.values().all(|&r| r == 0));
    }

    #[test]
    fn self_reference_never_stabilizes() {
        let rs =
            RelativeSullivan::parse("gen z 1\nfiber w2 2\nmaxdeg 5\ndiff w2 = z*w2\n").unwrap();
        let err = rs.fiber_filtration().unwrap_err();
        assert!(err.to_string().contains("filtration"), "{err}");
    }

    #[test]
    fn action_moves_down_the_tower() {
        let rs = two_step();
        let fiber = rs.fiber_presentation().unwrap();
        let w2 = Poly::generator(fiber.gens().clone(), 1);
        let class = rs.l0_action(&[qone()], &w2).unwrap();
        // classes are ([w1], [w2]); the action lands on [w1]
        assert_eq!(class.coords, vec![qint(1), qint(0)]);

        let one = Poly::one(fiber.gens().clone());
        let from_unit = rs.l0_action(&[qone()], &one).unwrap();
        assert!(from_unit.is_zero());

        let zero_dual = rs.l0_action(&[qzero()], &w2).unwrap();
        assert!(zero_dual.is_zero());
    }

    #[test]
    fn action_rejects_non_cocycles() {
        let rs = RelativeSullivan::parse(
            "gen z 1\nfiber w1 2\nfiber u 3\nmaxdeg 6\ndiff w1 = 0\ndiff u = w1^2\n",
        )
        .unwrap();
        let fiber = rs.fiber_presentation().unwrap();
        let u = Poly::generator(fiber.gens().clone(), 1);
        assert!(matches!(
            rs.l0_action(&[qone()], &u),
            Err(Error::NotCocycle(_))
        ));
    }

    #[test]
    fn exp_action_on_the_worked_example() {
        let rs = two_step();
        let w2_class = FiberClass {
            degree: 2,
            coords: vec![qzero(), qone()],
        };
        let moved = rs.exp_action(&[qone()], &w2_class).unwrap();
        assert_eq!(moved.coords, vec![qint(1), qint(1)]);

        let w1_class = FiberClass {
            degree: 2,
            coords: vec![qone(), qzero()],
        };
        let fixed = rs.exp_action(&[qone()], &w1_class).unwrap();
        assert_eq!(fixed.coords, vec![qint(1), qint(0)]);

        let scaled = rs.exp_action(&[qint(2)], &w2_class).unwrap();
        assert_eq!(scaled.coords, vec![qint(2), qint(1)]);
    }

    #[test]
    fn holonomy_matrix_shape_and_nilpotency() {
        let rs = two_step();
        let hm = rs.holonomy_matrices(2).unwrap();
        let m = &hm.matrices["z"];
        // rows are images: w1 -> 0, w2 -> w1
        assert_eq!(m.get(0, 0), qint(0));
        assert_eq!(m.get(0, 1), qint(0));
        assert_eq!(m.get(1, 0), qint(1));
        assert_eq!(m.get(1, 1), qint(0));
        assert_eq!(hm.nilpotency["z"], Some(2));
        assert!(hm.nilpotent);
    }

    #[test]
    fn three_step_tower_has_index_three() {
        let rs = three_step();
        let hm = rs.holonomy_matrices(2).unwrap();
        assert_eq!(hm.nilpotency["z"], Some(3));
        assert!(hm.nilpotent);
    }

    #[test]
    fn zero_differential_gives_zero_matrices() {
        let rs = RelativeSullivan::parse("gen z 1\nfiber w1 2\nfiber w2 2\nmaxdeg 5\n").unwrap();
        let hm = rs.holonomy_matrices(2).unwrap();
        assert!(hm.matrices["z"].is_zero());
        assert_eq!(hm.nilpotency["z"], Some(1));
    }

    #[test]
    fn functional_sum_suite_on_the_worked_examples() {
        for rs in [two_step(), three_step()] {
            let report = lemma31_check(&rs, 200, 0).unwrap();
            assert_eq!(report.passed, report.trials);
            assert!(report.violations.is_empty());
            assert!(report.nonvacuous > 0);
            assert!(report.witness.is_some());
        }
    }

    #[test]
    fn relative_validate_reports() {
        let rs = two_step();
        let report = rs.validate().unwrap();
        assert!(report.filtration_exists);
        assert!(report.fiber_minimal);
        assert!(report.base_d_squared_zero);
        assert!(report.total_d_squared_zero);
    }

    #[test]
    fn generator_action_lowers_the_filtration() {
        for rs in [two_step(), three_step()] {
            let filt = rs.fiber_filtration().unwrap();
            let fiber = rs.total().fiber_indices();
            let stages: Vec<usize> = fiber
                .iter()
                .map(|&w| filt.assignment[rs.total().gens().name(w)])
                .collect();
            for (pos, _) in rs.dual_basis_indices().iter().enumerate() {
                let mut sx = vec![qzero(); rs.dual_basis_indices().len()];
                sx[pos] = qone();
                let m = rs.w_action_matrix(&sx).unwrap();
                for (out, input, v) in m.iter() {
                    assert!(!v.is_zero());
                    assert!(
                        stages[out] + 1 <= stages[input],
                        "action did not lower the filtration: {} -> {}",
                        stages[input],
                        stages[out]
                    );
                }
            }
        }
    }
}
