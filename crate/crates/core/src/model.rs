//! Minimal Sullivan model construction.
//!
//! Two builders cover the corpus: the inductive simply-connected
//! construction (degree by degree, cokernel generators before kernel
//! killers), and the degree-1 stage construction that grows the
//! fundamental tower one filtration stage at a time. Both drive the same
//! cohomology machinery against either kind of target and record a stage
//! log so runs are reproducible and auditable.

use num_traits::Zero;

use crate::cdga::CdgaPresentation;
use crate::cohomology::{CohomologySpace, DgAlgebra, GradedElement};
use crate::error::{Error, Result};
use crate::graded::{GeneratorTable, Poly};
use crate::linalg::{complement_basis, nullspace_basis, qzero, solve, QMatrix, Rational};
use crate::target::Target;

use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    SimplyConnected,
    Degree1Stages,
}

/// One line of the build log: for the simply-connected builder `stage` is
/// the degree being processed, for the tower it is the filtration stage.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StageEntry {
    pub stage: usize,
    pub added: usize,
    pub cumulative_dim: usize,
}

/// Row of the finite-type report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub dim: usize,
    pub stabilized: bool,
}

/// A constructed model together with the morphism to the target
/// (generator images as target coordinates) and the build log.
#[derive(Debug, Clone)]
pub struct ModelBuild {
    pub model: CdgaPresentation,
    pub images: Vec<GradedElement>,
    pub target: Target,
    pub stage_log: Vec<StageEntry>,
    pub construction: Construction,
    pub stabilized: bool,
    pub built_to: usize,
}

/// Growing model state. Generators only ever get appended, so existing
/// polynomials lift to each extended table unchanged.
struct Builder {
    table: Arc<GeneratorTable>,
    diffs: Vec<Poly>,
    images: Vec<GradedElement>,
    cap: usize,
}

struct NewGenerator {
    name: String,
    degree: usize,
    stage: Option<usize>,
    diff: Poly,
    image: GradedElement,
}

impl Builder {
    fn new(cap: usize) -> Self {
        Builder {
            table: Arc::new(GeneratorTable::new()),
            diffs: Vec::new(),
            images: Vec::new(),
            cap,
        }
    }

    fn len(&self) -> usize {
        self.table.len()
    }

    fn add_batch(&mut self, batch: Vec<NewGenerator>) -> Result<()> {
        if batch.is_empty() {
            return Ok(());
        }
        let mut t = (*self.table).clone();
        for g in &batch {
            t.push_staged(&g.name, g.degree, g.stage)?;
        }
        let arc = Arc::new(t);
        self.diffs = self
            .diffs
            .iter()
            .map(|d| d.lift_to(arc.clone()))
            .collect::<Result<_>>()?;
        for g in batch {
            self.diffs.push(g.diff.lift_to(arc.clone())?);
            self.images.push(g.image);
        }
        self.table = arc;
        Ok(())
    }

    fn snapshot(&self) -> Result<CdgaPresentation> {
        CdgaPresentation::new(
            self.table.clone(),
            self.diffs.iter().cloned().enumerate().collect(),
            self.cap,
        )
    }
}

/// Evaluate a morphism (given by generator images) on a homogeneous
/// polynomial of the stated degree.
pub fn apply_images<T: DgAlgebra + ?Sized>(
    target: &T,
    images: &[GradedElement],
    p: &Poly,
    degree: usize,
) -> Result<GradedElement> {
    let mut acc = GradedElement::zero(degree, target.space_dim(degree)?);
    for (m, c) in p.terms() {
        let mut prod = target.unit_element();
        for &(g, e) in m.factors() {
            let img = images.get(g).ok_or_else(|| {
                Error::Domain(format!("no image recorded for generator index {g}"))
            })?;
            for _ in 0..e {
                prod = target.mul_elements(&prod, img)?;
            }
        }
        if prod.degree != degree {
            return Err(Error::Dimension(format!(
                "image degree {} does not match expected degree {}",
                prod.degree, degree
            )));
        }
        acc = acc.add(&prod.scale(c))?;
    }
    Ok(acc)
}

/// Matrix of `H^n` of the morphism, plus both cohomology spaces.
fn induced_matrix<T: DgAlgebra + ?Sized>(
    model: &CdgaPresentation,
    images: &[GradedElement],
    target: &T,
    n: usize,
) -> Result<(QMatrix, CohomologySpace, CohomologySpace)> {
    let model_h = CohomologySpace::compute(model, n)?;
    let target_h = CohomologySpace::compute(target, n)?;
    let basis = model.basis(n)?;
    let mut m = QMatrix::zero(target_h.dim, model_h.dim);
    for (j, rep) in model_h.representatives.iter().enumerate() {
        let rep_poly = Poly::from_coords(model.gens().clone(), &basis, rep);
        let image = apply_images(target, images, &rep_poly, n)?;
        let class = target_h.reduce(&image.coords)?;
        for (i, c) in class.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok((m, model_h, target_h))
}

fn check_connected<T: DgAlgebra + ?Sized>(target: &T) -> Result<()> {
    let h0 = CohomologySpace::compute(target, 0)?;
    if h0.dim != 1 {
        return Err(Error::Domain(format!(
            "target is not connected: dim H^0 = {}",
            h0.dim
        )));
    }
    Ok(())
}

/// Inductive minimal model of a simply connected target, up to degree
/// `max_degree`. At each degree the builder first adds closed generators
/// surjecting onto the cokernel of `H^n`, then generators whose
/// differentials span the kernel of `H^{n+1}`.
pub fn minimal_model_sc(target: &Target, max_degree: usize) -> Result<ModelBuild> {
    check_connected(target)?;
    let h1 = CohomologySpace::compute(target, 1)?;
    if h1.dim != 0 {
        return Err(Error::Domain(format!(
            "target is not simply connected (dim H^1 = {}); use the degree-1 stage construction",
            h1.dim
        )));
    }
    if max_degree < 2 {
        return Err(Error::Domain("max degree must be at least 2".into()));
    }
    if target.degree_cap() < max_degree + 2 {
        return Err(Error::CapExceeded {
            needed: max_degree + 2,
            cap: target.degree_cap(),
        });
    }

    let mut b = Builder::new(max_degree + 2);
    let mut stage_log = Vec::new();

    for n in 2..=max_degree {
        let mut added = 0usize;

        // cokernel of H^n(phi): new closed generators hitting the missing
        // target classes
        let model = b.snapshot()?;
        let (h_phi, _, target_h) = induced_matrix(&model, &b.images, target, n)?;
        let image_cols: Vec<Vec<Rational>> =
            (0..h_phi.cols()).map(|j| h_phi.column(j)).collect();
        let coker = complement_basis(&image_cols, target_h.dim)?;
        let mut batch = Vec::new();
        for &idx in &coker {
            batch.push(NewGenerator {
                name: format!("v{}_{}", n, added),
                degree: n,
                stage: None,
                diff: Poly::zero(b.table.clone()),
                image: GradedElement {
                    degree: n,
                    coords: target_h.representatives[idx].clone(),
                },
            });
            added += 1;
        }
        b.add_batch(batch)?;

        // kernel of H^{n+1}(phi): generators killing the excess classes
        let model = b.snapshot()?;
        let (h_phi_next, model_h_next, _) = induced_matrix(&model, &b.images, target, n + 1)?;
        let kernel = nullspace_basis(&h_phi_next);
        let basis_next = model.basis(n + 1)?;
        let mut batch = Vec::new();
        for kvec in kernel {
            // z: the cocycle representing the kernel class
            let mut z_coords = vec![qzero(); basis_next.len()];
            for (i, c) in kvec.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (k, r) in model_h_next.representatives[i].iter().enumerate() {
                    z_coords[k] += c * r;
                }
            }
            let z = Poly::from_coords(model.gens().clone(), &basis_next, &z_coords);
            let phi_z = apply_images(target, &b.images, &z, n + 1)?;
            let u = solve(&target.d_matrix(n)?, &phi_z.coords)?.ok_or_else(|| {
                Error::Domain(
                    "image of a kernel cocycle is not a coboundary in the target".into(),
                )
            })?;
            batch.push(NewGenerator {
                name: format!("v{}_{}", n, added),
                degree: n,
                stage: None,
                diff: z,
                image: GradedElement {
                    degree: n,
                    coords: u,
                },
            });
            added += 1;
        }
        b.add_batch(batch)?;

        stage_log.push(StageEntry {
            stage: n,
            added,
            cumulative_dim: b.len(),
        });
    }

    Ok(ModelBuild {
        model: b.snapshot()?,
        images: b.images,
        target: target.clone(),
        stage_log,
        construction: Construction::SimplyConnected,
        stabilized: true,
        built_to: max_degree,
    })
}

/// Degree-1 tower: stage 0 realizes `H^1` of the target with closed
/// generators; each later stage adds one generator per kernel class of
/// `H^2(model) -> H^2(target)`, with the representative cocycle as its
/// differential. Stops at `max_stage` or when the kernel vanishes.
pub fn degree1_stages(target: &Target, max_stage: usize) -> Result<ModelBuild> {
    check_connected(target)?;
    if target.degree_cap() < 3 {
        return Err(Error::CapExceeded {
            needed: 3,
            cap: target.degree_cap(),
        });
    }
    let mut b = Builder::new(3);
    let mut stage_log = Vec::new();

    let h1 = CohomologySpace::compute(target, 1)?;
    let mut batch = Vec::new();
    for i in 0..h1.dim {
        batch.push(NewGenerator {
            name: format!("v0_{i}"),
            degree: 1,
            stage: Some(0),
            diff: Poly::zero(b.table.clone()),
            image: GradedElement {
                degree: 1,
                coords: h1.representatives[i].clone(),
            },
        });
    }
    b.add_batch(batch)?;
    stage_log.push(StageEntry {
        stage: 0,
        added: h1.dim,
        cumulative_dim: b.len(),
    });

    let mut stabilized = false;
    let mut last_stage = 0;
    for k in 1..=max_stage {
        let model = b.snapshot()?;
        let (h_phi, model_h2, _) = induced_matrix(&model, &b.images, target, 2)?;
        let kernel = nullspace_basis(&h_phi);
        if kernel.is_empty() {
            stabilized = true;
            break;
        }
        let basis2 = model.basis(2)?;
        let mut batch = Vec::new();
        for (i, kvec) in kernel.iter().enumerate() {
            let mut z_coords = vec![qzero(); basis2.len()];
            for (j, c) in kvec.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (t, r) in model_h2.representatives[j].iter().enumerate() {
                    z_coords[t] += c * r;
                }
            }
            let z = Poly::from_coords(model.gens().clone(), &basis2, &z_coords);
            let phi_z = apply_images(target, &b.images, &z, 2)?;
            let u = solve(&target.d_matrix(1)?, &phi_z.coords)?.ok_or_else(|| {
                Error::Domain(
                    "image of a kernel cocycle is not a coboundary in the target".into(),
                )
            })?;
            batch.push(NewGenerator {
                name: format!("v{k}_{i}"),
                degree: 1,
                stage: Some(k),
                diff: z,
                image: GradedElement {
                    degree: 1,
                    coords: u,
                },
            });
        }
        let added = batch.len();
        b.add_batch(batch)?;
        last_stage = k;
        stage_log.push(StageEntry {
            stage: k,
            added,
            cumulative_dim: b.len(),
        });
    }
    if max_stage == 0 {
        // a zero-stage build never checks the kernel; report stabilized
        // only when there was nothing to extend
        stabilized = h1.dim == 0;
    }

    Ok(ModelBuild {
        model: b.snapshot()?,
        images: b.images,
        target: target.clone(),
        stage_log,
        construction: Construction::Degree1Stages,
        stabilized,
        built_to: last_stage,
    })
}

/// Commutation violations of a generator assignment into any target:
/// `phi(dv) = d(phi(v))` per generator, within caps. Empty means the
/// assignment is a morphism.
pub fn check_images<T: DgAlgebra + ?Sized>(
    model: &CdgaPresentation,
    target: &T,
    images: &[GradedElement],
) -> Result<Vec<String>> {
    let mut violations = Vec::new();
    for (i, g) in model.gens().iter() {
        if images[i].degree != g.degree {
            violations.push(format!(
                "image of {} lives in degree {}, expected {}",
                g.name, images[i].degree, g.degree
            ));
            continue;
        }
        let lhs = apply_images(target, images, model.differential(i), g.degree + 1)?;
        let d_img = target.d_matrix(g.degree)?.mul_vec(&images[i].coords)?;
        if lhs.coords != d_img {
            violations.push(format!("phi(d {}) != d(phi {})", g.name, g.name));
        }
    }
    Ok(violations)
}

impl ModelBuild {
    /// Evaluate the structure morphism on a homogeneous polynomial.
    pub fn apply_phi(&self, p: &Poly, degree: usize) -> Result<GradedElement> {
        apply_images(&self.target, &self.images, p, degree)
    }

    /// Matrix of `H^n(phi)` in the deterministic representative bases.
    pub fn induced_on_h(&self, n: usize) -> Result<QMatrix> {
        Ok(induced_matrix(&self.model, &self.images, &self.target, n)?.0)
    }

    /// Commutation violations of the structure morphism.
    pub fn check_phi(&self) -> Result<Vec<String>> {
        check_images(&self.model, &self.target, &self.images)
    }

    /// Per-degree generator counts with stabilization flags.
    pub fn finite_type_report(&self) -> Vec<DegreeRow> {
        match self.construction {
            Construction::SimplyConnected => {
                let mut rows = vec![DegreeRow {
                    degree: 1,
                    dim: 0,
                    stabilized: true,
                }];
                for n in 2..=self.built_to {
                    let dim = self
                        .model
                        .gens()
                        .iter()
                        .filter(|(_, g)| g.degree == n)
                        .count();
                    rows.push(DegreeRow {
                        degree: n,
                        dim,
                        stabilized: true,
                    });
                }
                rows
            }
            Construction::Degree1Stages => vec![DegreeRow {
                degree: 1,
                dim: self.model.gens().len(),
                stabilized: self.stabilized,
            }],
        }
    }

    /// Generator images rendered against the target's basis labels.
    pub fn rendered_images(&self) -> Result<Vec<String>> {
        self.images
            .iter()
            .map(|e| self.target.render_element(e))
            .collect()
    }

    /// The structure morphism as a polynomial-level morphism, available
    /// when the target is itself a presentation.
    pub fn phi_as_morphism(&self) -> Result<crate::cdga::CdgaMorphism> {
        let Target::Cdga(target) = &self.target else {
            return Err(Error::Domain(
                "the target is a formal ring; images only exist in coordinates".into(),
            ));
        };
        let images = self
            .images
            .iter()
            .map(|e| {
                Ok(Poly::from_coords(
                    target.gens().clone(),
                    &target.basis(e.degree)?,
                    &e.coords,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        crate::cdga::CdgaMorphism::new(self.model.clone(), target.clone(), images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology_dims;
    use crate::target::FormalTarget;

    fn formal(text: &str) -> Target {
        Target::Formal(FormalTarget::parse(text).unwrap())
    }

    #[test]
    fn sphere2_model_rebuilt_from_formal_target() {
        let target = formal("h 2 1\n");
        let build = minimal_model_sc(&target, 7).unwrap();
        let dims: Vec<usize> = (1..=7)
            .map(|n| {
                build
                    .model
                    .gens()
                    .iter()
                    .filter(|(_, g)| g.degree == n)
                    .count()
            })
            .collect();
        assert_eq!(dims, vec![0, 1, 1, 0, 0, 0, 0]);
        let report = build.model.validate();
        assert!(report.d_squared_zero && report.minimal);
        assert!(build.check_phi().unwrap().is_empty());
        // the built model has the sphere cohomology
        assert_eq!(
            cohomology_dims(&build.model, 6).unwrap(),
            vec![1, 0, 1, 0, 0, 0, 0]
        );
    }

    #[test]
    fn odd_sphere_is_free() {
        let target = formal("h 3 1\n");
        let build = minimal_model_sc(&target, 7).unwrap();
        let dims: Vec<usize> = (1..=7)
            .map(|n| {
                build
                    .model
                    .gens()
                    .iter()
                    .filter(|(_, g)| g.degree == n)
                    .count()
            })
            .collect();
        assert_eq!(dims, vec![0, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn trivial_target_gives_trivial_model() {
        let target = formal("h 0 1\n");
        let build = minimal_model_sc(&target, 6).unwrap();
        assert_eq!(build.model.gens().len(), 0);
        assert!(build.finite_type_report().iter().all(|r| r.dim == 0 && r.stabilized));
    }

    #[test]
    fn sc_builder_rejects_non_simply_connected() {
        let target = formal("h 1 2\n");
        let err = minimal_model_sc(&target, 4).unwrap_err();
        assert!(err.to_string().contains("degree-1 stage"), "{err}");
    }

    #[test]
    fn rebuilding_a_minimal_presentation_reproduces_generator_dims() {
        let sphere = crate::cdga::sphere2_model(10);
        let target = Target::Cdga(sphere);
        let build = minimal_model_sc(&target, 7).unwrap();
        let dims: Vec<usize> = (2..=7)
            .map(|n| {
                build
                    .model
                    .gens()
                    .iter()
                    .filter(|(_, g)| g.degree == n)
                    .count()
            })
            .collect();
        assert_eq!(dims, vec![1, 1, 0, 0, 0, 0]);
        assert!(build.check_phi().unwrap().is_empty());
    }

    #[test]
    fn wedge_tower_first_steps() {
        let target = formal("h 1 2\n");
        let build = degree1_stages(&target, 2).unwrap();
        let cum: Vec<usize> = build.stage_log.iter().map(|e| e.cumulative_dim).collect();
        assert_eq!(cum, vec![2, 3, 5]);
        // the first added generator kills the product of the stage-0 pair
        assert_eq!(build.model.differential(2).render(), "v0_0*v0_1");
        assert!(!build.stabilized);
        let report = build.model.validate();
        assert!(report.d_squared_zero && report.minimal);
    }

    #[test]
    fn torus_tower_stabilizes_immediately() {
        let target = formal("h 1 2\nh 2 1\ncup h1_0 h1_1 = h2_0\n");
        let build = degree1_stages(&target, 3).unwrap();
        assert!(build.stabilized);
        assert_eq!(build.model.gens().len(), 2);
        assert_eq!(build.stage_log.len(), 1);
        let rows = build.finite_type_report();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].degree, rows[0].dim, rows[0].stabilized), (1, 2, true));
    }

    #[test]
    fn empty_h1_stabilizes_with_no_generators() {
        let target = formal("h 0 1\n");
        let build = degree1_stages(&target, 3).unwrap();
        assert!(build.stabilized);
        assert_eq!(build.model.gens().len(), 0);
    }

    #[test]
    fn sc_build_induces_isomorphisms_below_the_cap() {
        let target = formal("h 2 1\n");
        let n = 6;
        let build = minimal_model_sc(&target, n).unwrap();
        for k in 0..n {
            let m = build.induced_on_h(k).unwrap();
            // square and full rank: an isomorphism on H^k
            assert_eq!(m.rows(), m.cols(), "H^{k}");
            assert_eq!(crate::linalg::rank(&m), m.rows(), "H^{k}");
        }
        // injective at the cap
        let m = build.induced_on_h(n).unwrap();
        assert_eq!(crate::linalg::rank(&m), m.cols());
    }

    #[test]
    fn stabilized_tower_has_injective_h2() {
        let target = formal("h 1 2\nh 2 1\ncup h1_0 h1_1 = h2_0\n");
        let build = degree1_stages(&target, 3).unwrap();
        assert!(build.stabilized);
        let m = build.induced_on_h(2).unwrap();
        assert_eq!(crate::linalg::rank(&m), m.cols());
    }

    #[test]
    fn phi_as_morphism_checks_for_presentation_targets() {
        let sphere = crate::cdga::sphere2_model(10);
        let build = minimal_model_sc(&Target::Cdga(sphere), 6).unwrap();
        let phi = build.phi_as_morphism().unwrap();
        assert!(phi.check().is_valid());
    }

    #[test]
    fn images_into_formal_rings_are_checked() {
        // from the sphere model into its cohomology ring: e2 to the
        // degree-2 class, e3 to zero; valid because the class squares
        // to zero there
        let sphere = crate::cdga::sphere2_model(10);
        let ring = formal("h 2 1\n");
        let images = vec![
            GradedElement {
                degree: 2,
                coords: vec![crate::linalg::qone()],
            },
            GradedElement::zero(3, 0),
        ];
        assert!(check_images(&sphere, &ring, &images).unwrap().is_empty());

        // against a ring where the square survives, the same assignment
        // stops being a morphism
        let bad_ring = formal("h 2 1\nh 4 1\ncup h2_0 h2_0 = h4_0\n");
        let violations = check_images(&sphere, &bad_ring, &images).unwrap();
        assert!(violations.iter().any(|v| v.contains("e3")), "{violations:?}");
    }
}
