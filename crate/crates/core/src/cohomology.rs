//! Truncated cohomology with deterministic representatives.
//!
//! The machinery is generic over anything that exposes degreewise bases,
//! differential matrices, and coordinate-level products: free CDGA
//! presentations and formal (zero-differential) targets go through the
//! same kernel/image computation, as do induced maps on cohomology.
//!
//! Representative choice is pinned: the kernel basis of `d^n` comes from
//! the deterministic nullspace convention, and the representatives are
//! the kernel vectors at the complement indices against the image of
//! `d^{n-1}`. Reduction of an arbitrary cocycle solves against
//! `[representatives | image basis]` with free variables zero.

use crate::cdga::{CdgaMorphism, CdgaPresentation};
use crate::error::{Error, Result};
use crate::graded::Poly;
use crate::linalg::{complement_basis, nullspace_basis, qone, qzero, rref, solve, QMatrix, Rational};

use num_traits::{One, Zero};

/// Homogeneous element of a graded algebra, as coordinates against the
/// canonical basis of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedElement {
    pub degree: usize,
    pub coords: Vec<Rational>,
}

impl GradedElement {
    pub fn zero(degree: usize, dim: usize) -> Self {
        GradedElement {
            degree,
            coords: vec![qzero(); dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &GradedElement) -> Result<GradedElement> {
        if self.degree != other.degree || self.coords.len() != other.coords.len() {
            return Err(Error::Dimension(
                "graded elements live in different degrees".into(),
            ));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(GradedElement {
            degree: self.degree,
            coords,
        })
    }

    pub fn scale(&self, c: &Rational) -> GradedElement {
        GradedElement {
            degree: self.degree,
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }
}

/// Coordinate-level view of a graded algebra with differential: enough
/// structure to compute cohomology and push morphisms through it.
pub trait DgAlgebra {
    /// Largest degree the object can answer questions about.
    fn degree_cap(&self) -> usize;
    /// Dimension of the degree-`n` piece.
    fn space_dim(&self, n: usize) -> Result<usize>;
    /// Matrix of `d` from degree `n` to `n+1` in the canonical bases.
    fn d_matrix(&self, n: usize) -> Result<QMatrix>;
    /// Human-readable basis labels for degree `n`.
    fn basis_labels(&self, n: usize) -> Result<Vec<String>>;
    /// Product of homogeneous elements.
    fn mul_elements(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement>;
    /// The unit, in degree 0.
    fn unit_element(&self) -> GradedElement;

    /// Render an element as a combination of basis labels.
    fn render_element(&self, e: &GradedElement) -> Result<String> {
        let labels = self.basis_labels(e.degree)?;
        let mut parts = Vec::new();
        for (c, l) in e.coords.iter().zip(&labels) {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(l.clone());
            } else {
                parts.push(format!("{c}*{l}"));
            }
        }
        Ok(if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        })
    }
}

impl DgAlgebra for CdgaPresentation {
    fn degree_cap(&self) -> usize {
        self.max_degree()
    }

    fn space_dim(&self, n: usize) -> Result<usize> {
        self.dim(n)
    }

    fn d_matrix(&self, n: usize) -> Result<QMatrix> {
        self.differential_matrix(n)
    }

    fn basis_labels(&self, n: usize) -> Result<Vec<String>> {
        Ok(self
            .basis(n)?
            .iter()
            .map(|m| m.render(self.gens()))
            .collect())
    }

    fn mul_elements(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        let pa = Poly::from_coords(self.gens().clone(), &self.basis(a.degree)?, &a.coords);
        let pb = Poly::from_coords(self.gens().clone(), &self.basis(b.degree)?, &b.coords);
        let prod = pa.mul(&pb)?;
        let degree = a.degree + b.degree;
        let coords = prod.coords(&self.basis(degree)?)?;
        Ok(GradedElement { degree, coords })
    }

    fn unit_element(&self) -> GradedElement {
        GradedElement {
            degree: 0,
            coords: vec![qone()],
        }
    }
}

/// Cohomology of one degree, with the data needed to reduce arbitrary
/// cocycles to class coordinates.
#[derive(Debug, Clone)]
pub struct CohomologySpace {
    pub degree: usize,
    pub dim: usize,
    pub coboundary_dim: usize,
    /// Representative cocycles, as coordinates in the degree-`n` basis.
    pub representatives: Vec<Vec<Rational>>,
    /// Columns: representatives then an image basis of `d^{n-1}`.
    reduce_columns: QMatrix,
    d_here: QMatrix,
}

impl CohomologySpace {
    pub fn compute<A: DgAlgebra + ?Sized>(alg: &A, n: usize) -> Result<Self> {
        let dim_n = alg.space_dim(n)?;
        let d_here = alg.d_matrix(n)?;
        let d_prev = if n == 0 {
            QMatrix::zero(dim_n, 0)
        } else {
            alg.d_matrix(n - 1)?
        };
        let kernel = nullspace_basis(&d_here);

        // deterministic basis of the image: pivot columns of d^{n-1}
        let image_basis: Vec<Vec<Rational>> = rref(&d_prev)
            .pivots
            .iter()
            .map(|&j| d_prev.column(j))
            .collect();

        // express the image inside the kernel to pick complement indices
        let kernel_matrix = QMatrix::from_columns(&kernel, dim_n);
        let mut image_in_kernel = Vec::new();
        for img in &image_basis {
            match solve(&kernel_matrix, img)? {
                Some(c) => image_in_kernel.push(c),
                None => {
                    return Err(Error::Domain(format!(
                        "image of d^{} is not contained in the kernel of d^{}: d^2 != 0",
                        n.saturating_sub(1),
                        n
                    )))
                }
            }
        }
        let rep_indices = complement_basis(&image_in_kernel, kernel.len())?;
        let representatives: Vec<Vec<Rational>> =
            rep_indices.iter().map(|&i| kernel[i].clone()).collect();

        let mut columns = representatives.clone();
        columns.extend(image_basis.iter().cloned());
        let reduce_columns = QMatrix::from_columns(&columns, dim_n);

        Ok(CohomologySpace {
            degree: n,
            dim: representatives.len(),
            coboundary_dim: image_basis.len(),
            representatives,
            reduce_columns,
            d_here,
        })
    }

    /// Class coordinates of a cocycle in the representative basis.
    pub fn reduce(&self, cocycle: &[Rational]) -> Result<Vec<Rational>> {
        let image = self.d_here.mul_vec(cocycle)?;
        if image.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotCocycle(format!(
                "element of degree {} has nonzero differential",
                self.degree
            )));
        }
        match solve(&self.reduce_columns, cocycle)? {
            Some(y) => Ok(y[..self.dim].to_vec()),
            None => Err(Error::Domain(
                "cocycle does not lie in the kernel span".into(),
            )),
        }
    }
}

/// Cohomology of a presentation in one degree, with polynomial
/// representatives.
#[derive(Debug, Clone)]
pub struct CohomologyResult {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<Poly>,
    pub coboundary_dim: usize,
}

/// Compute `H^n` of a presentation. Needs `n + 1 <= max_degree`.
pub fn cohomology(p: &CdgaPresentation, n: usize) -> Result<CohomologyResult> {
    let space = CohomologySpace::compute(p, n)?;
    let basis = p.basis(n)?;
    let representatives = space
        .representatives
        .iter()
        .map(|coords| Poly::from_coords(p.gens().clone(), &basis, coords))
        .collect();
    Ok(CohomologyResult {
        degree: n,
        dim: space.dim,
        representatives,
        coboundary_dim: space.coboundary_dim,
    })
}

/// Cohomology dimensions for degrees `0..=max`.
pub fn cohomology_dims(p: &CdgaPresentation, max: usize) -> Result<Vec<usize>> {
    (0..=max).map(|n| Ok(cohomology(p, n)?.dim)).collect()
}

/// Word-length-1 part of a cocycle of a minimal presentation: the
/// projection of its class to generator space. Coboundaries of a minimal
/// algebra have word length at least 2, so the value only depends on the
/// class.
pub fn xi_cocycle(p: &CdgaPresentation, z: &Poly) -> Result<Poly> {
    if !p.is_minimal() {
        return Err(Error::NotMinimal(
            "the generator-space projection needs a minimal presentation".into(),
        ));
    }
    if !z.is_zero() {
        let dz = p.apply_d(z)?;
        if !dz.is_zero() {
            return Err(Error::NotCocycle(format!("d({}) != 0", z.render())));
        }
    }
    Ok(z.wordlength_component(1))
}

/// The projection applied to the `idx`-th representative of `H^n`.
pub fn xi_class(p: &CdgaPresentation, n: usize, idx: usize) -> Result<Poly> {
    let h = cohomology(p, n)?;
    let rep = h.representatives.get(idx).ok_or_else(|| {
        Error::Domain(format!(
            "class index {idx} out of range: H^{n} has dimension {}",
            h.dim
        ))
    })?;
    xi_cocycle(p, rep)
}

/// Matrix of `H^n(f)` in the deterministic representative bases. Columns
/// are indexed by source classes, rows by target classes. The images of
/// the source representatives must be cocycles in the target.
pub fn induced_on_h(f: &CdgaMorphism, n: usize) -> Result<QMatrix> {
    let source_h = CohomologySpace::compute(&f.source, n)?;
    let target_h = CohomologySpace::compute(&f.target, n)?;
    let source_basis = f.source.basis(n)?;
    let target_basis = f.target.basis(n)?;
    let mut m = QMatrix::zero(target_h.dim, source_h.dim);
    for (j, rep) in source_h.representatives.iter().enumerate() {
        let rep_poly = Poly::from_coords(f.source.gens().clone(), &source_basis, rep);
        let image = f.apply(&rep_poly)?;
        let coords = image.coords(&target_basis)?;
        let class = target_h.reduce(&coords)?;
        for (i, c) in class.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::{heisenberg, sphere2_model, CdgaPresentation};
    use crate::graded::Poly;
    use crate::linalg::qint;

    #[test]
    fn heisenberg_dims() {
        let h = heisenberg(4);
        assert_eq!(cohomology_dims(&h, 3).unwrap(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn sphere_dims() {
        let s = sphere2_model(8);
        assert_eq!(cohomology_dims(&s, 6).unwrap(), vec![1, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn torus_dims() {
        let t = CdgaPresentation::parse("gen v1 1\ngen v2 1\nmaxdeg 3\n").unwrap();
        assert_eq!(cohomology_dims(&t, 2).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn xi_on_generator_classes() {
        let h = heisenberg(4);
        let v1 = Poly::generator(h.gens().clone(), 0);
        assert_eq!(xi_cocycle(&h, &v1).unwrap().render(), "v1");

        // v1*v2 = d(v3), so the zero class projects to zero
        let v1v2 = h.differential(2).clone();
        let dv3 = h.apply_d(&Poly::generator(h.gens().clone(), 2)).unwrap();
        let diff = v1v2.sub(&dv3).unwrap();
        assert!(xi_cocycle(&h, &diff).unwrap().is_zero());

        let s = sphere2_model(8);
        let e2 = Poly::generator(s.gens().clone(), 0);
        assert_eq!(xi_cocycle(&s, &e2).unwrap().render(), "e2");
    }

    #[test]
    fn xi_rejects_non_minimal() {
        let p = CdgaPresentation::parse("gen a 1\ngen b 2\ndiff a = b\n").unwrap();
        let z = Poly::zero(p.gens().clone());
        assert!(matches!(xi_cocycle(&p, &z), Err(Error::NotMinimal(_))));
    }

    #[test]
    fn induced_identity_is_identity() {
        let h = heisenberg(4);
        let id = CdgaMorphism::identity(&h);
        for n in 0..=2 {
            let m = induced_on_h(&id, n).unwrap();
            let dim = cohomology(&h, n).unwrap().dim;
            assert_eq!(m, QMatrix::identity(dim));
        }
    }

    #[test]
    fn induced_from_torus_model_into_heisenberg() {
        let torus = CdgaPresentation::parse("gen v1 1\ngen v2 1\nmaxdeg 4\n").unwrap();
        let h = heisenberg(4);
        let images = vec![
            Poly::generator(h.gens().clone(), 0),
            Poly::generator(h.gens().clone(), 1),
        ];
        let f = CdgaMorphism::new(torus, h, images).unwrap();
        assert!(f.check().is_valid());
        let m = induced_on_h(&f, 1).unwrap();
        assert_eq!(m, QMatrix::identity(2));
    }

    #[test]
    fn induced_on_h_with_dropped_generator() {
        // degree-1 classes survive sending v3 to zero: H^1 is the identity
        // on span{[v1],[v2]}
        let h = heisenberg(4);
        let torus = CdgaPresentation::parse("gen v1 1\ngen v2 1\nmaxdeg 4\n").unwrap();
        let images = vec![
            Poly::generator(torus.gens().clone(), 0),
            Poly::generator(torus.gens().clone(), 1),
            Poly::zero(torus.gens().clone()),
        ];
        let f = CdgaMorphism::new(h, torus, images).unwrap();
        let m = induced_on_h(&f, 1).unwrap();
        assert_eq!(m, QMatrix::identity(2));
    }

    #[test]
    fn zero_cohomology_gives_empty_matrix() {
        let s = sphere2_model(8);
        let id = CdgaMorphism::identity(&s);
        let m = induced_on_h(&id, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 0));
    }

    #[test]
    fn euler_characteristic_matches_on_full_truncation() {
        // exterior algebra on 3 odd generators fits entirely below the cap
        let h = heisenberg(5);
        let mut chi_space = 0i64;
        let mut chi_h = 0i64;
        for n in 0..=3 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            chi_space += sign * h.dim(n).unwrap() as i64;
            chi_h += sign * cohomology(&h, n).unwrap().dim as i64;
        }
        assert_eq!(chi_space, chi_h);
        assert_eq!(chi_space, 0);
    }

    #[test]
    fn induced_respects_composition() {
        // automorphisms of the Heisenberg algebra: a linear change of
        // (v1, v2) with v3 scaled by the determinant
        let h = heisenberg(4);
        let auto = |a: i64, b: i64, c: i64, e: i64| -> CdgaMorphism {
            let gens = h.gens().clone();
            let v1 = Poly::generator(gens.clone(), 0);
            let v2 = Poly::generator(gens.clone(), 1);
            let v3 = Poly::generator(gens.clone(), 2);
            let images = vec![
                v1.scale(&qint(a)).add(&v2.scale(&qint(b))).unwrap(),
                v1.scale(&qint(c)).add(&v2.scale(&qint(e))).unwrap(),
                v3.scale(&qint(a * e - b * c)),
            ];
            CdgaMorphism::new(h.clone(), h.clone(), images).unwrap()
        };
        let f = auto(1, 2, 0, 1);
        let g = auto(3, 0, 1, 1);
        assert!(f.check().is_valid());
        assert!(g.check().is_valid());
        let composed_images: Vec<Poly> = f
            .images
            .iter()
            .map(|p| g.apply(p).unwrap())
            .collect();
        let gf = CdgaMorphism::new(h.clone(), h.clone(), composed_images).unwrap();
        assert!(gf.check().is_valid());
        for n in 0..=3 {
            let lhs = induced_on_h(&gf, n).unwrap();
            let rhs = induced_on_h(&g, n)
                .unwrap()
                .mul_mat(&induced_on_h(&f, n).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "degree {n}");
        }
    }

    #[test]
    fn representatives_reduce_to_unit_vectors() {
        let h = heisenberg(4);
        for n in 0..=3 {
            let space = CohomologySpace::compute(&h, n).unwrap();
            for (i, rep) in space.representatives.iter().enumerate() {
                let class = space.reduce(rep).unwrap();
                for (j, c) in class.iter().enumerate() {
                    assert_eq!(*c, if i == j { qint(1) } else { qint(0) });
                }
            }
        }
    }
}
