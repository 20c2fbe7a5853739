//! CDGA presentations: a generator table together with a differential
//! given on generators and extended as a degree-+1 derivation.
//!
//! Presentations are always truncated: `max_degree` bounds every basis
//! enumeration and validity check, and operations refuse to reach past
//! it. Parsing follows the line-oriented `.cdga` grammar
//!
//! ```text
//! gen <name> <degree> [stage <k>]
//! fiber <name> <degree>
//! diff <name> = <poly>
//! maxdeg <n>
//! ```
//!
//! with `#` comments. `fiber` lines mark generators of the fiber of a
//! relative presentation; plain presentations use only `gen`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{basis_of_degree, GeneratorTable, Monomial, Poly};
use crate::linalg::{qint, QMatrix};

/// A free graded algebra with a differential on generators.
#[derive(Debug, Clone)]
pub struct CdgaPresentation {
    gens: Arc<GeneratorTable>,
    diffs: Vec<Poly>,
    max_degree: usize,
    /// Fiber flags (all false for a plain presentation).
    fiber: Vec<bool>,
}

impl CdgaPresentation {
    /// Build from a table and a differential on generators. Differentials
    /// default to zero where `diffs` has no entry for a generator.
    pub fn new(
        gens: Arc<GeneratorTable>,
        diffs: Vec<(usize, Poly)>,
        max_degree: usize,
    ) -> Result<Self> {
        let mut all = vec![Poly::zero(gens.clone()); gens.len()];
        for (i, d) in diffs {
            if i >= gens.len() {
                return Err(Error::Domain(format!("generator index {i} out of range")));
            }
            all[i] = d;
        }
        let fiber = vec![false; gens.len()];
        let p = CdgaPresentation {
            gens,
            diffs: all,
            max_degree,
            fiber,
        };
        p.check_diff_degrees()?;
        Ok(p)
    }

    fn check_diff_degrees(&self) -> Result<()> {
        for (i, d) in self.diffs.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let expected = self.gens.degree(i) + 1;
            match d.homogeneous_degree() {
                Some(deg) if deg == expected => {}
                Some(deg) => {
                    return Err(Error::Domain(format!(
                        "diff {} has degree {} but must raise degree by 1 (expected {})",
                        self.gens.name(i),
                        deg,
                        expected
                    )))
                }
                None => {
                    return Err(Error::Domain(format!(
                        "diff {} is not homogeneous",
                        self.gens.name(i)
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn gens(&self) -> &Arc<GeneratorTable> {
        &self.gens
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn set_max_degree(&mut self, cap: usize) {
        self.max_degree = cap;
    }

    pub fn differential(&self, i: usize) -> &Poly {
        &self.diffs[i]
    }

    pub fn is_fiber(&self, i: usize) -> bool {
        self.fiber[i]
    }

    pub fn fiber_indices(&self) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| self.fiber[i]).collect()
    }

    pub fn base_indices(&self) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| !self.fiber[i]).collect()
    }

    pub fn has_fiber(&self) -> bool {
        self.fiber.iter().any(|&b| b)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.gens.clone())
    }

    /// Monomial basis of the algebra in degree `n`, guarded by the cap.
    pub fn basis(&self, n: usize) -> Result<Vec<Monomial>> {
        if n > self.max_degree {
            return Err(Error::CapExceeded {
                needed: n,
                cap: self.max_degree,
            });
        }
        basis_of_degree(&self.gens, n, None)
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.basis(n)?.len())
    }

    /// The differential extended to arbitrary elements by the graded
    /// Leibniz rule `d(ab) = (da)b + (-1)^{|a|} a (db)`.
    pub fn apply_d(&self, x: &Poly) -> Result<Poly> {
        if !Arc::ptr_eq(x.table(), &self.gens) && **x.table() != *self.gens {
            return Err(Error::MixedTables);
        }
        let mut out = self.zero();
        for (m, c) in x.terms() {
            out = out.add(&self.d_monomial(m)?.scale(c))?;
        }
        Ok(out)
    }

    fn d_monomial(&self, m: &Monomial) -> Result<Poly> {
        let mut acc = self.zero();
        let factors = m.factors();
        let mut prefix_parity = 0usize;
        for (pos, &(g, e)) in factors.iter().enumerate() {
            let dg = &self.diffs[g];
            let deg_g = self.gens.degree(g);
            if !dg.is_zero() {
                // prefix * e * g^{e-1} * dg * suffix, with the Leibniz sign
                let prefix = Monomial::new(&self.gens, factors[..pos].to_vec())?;
                let suffix = Monomial::new(&self.gens, factors[pos + 1..].to_vec())?;
                let mut coeff = qint(e as i64);
                if prefix_parity % 2 == 1 {
                    coeff = -coeff;
                }
                let mut term = Poly::from_monomial(self.gens.clone(), prefix, coeff);
                if e > 1 {
                    let gpow = Monomial::new(&self.gens, vec![(g, e - 1)])?;
                    term = term.mul(&Poly::from_monomial(self.gens.clone(), gpow, qint(1)))?;
                }
                term = term.mul(dg)?;
                term = term.mul(&Poly::from_monomial(self.gens.clone(), suffix, qint(1)))?;
                acc = acc.add(&term)?;
            }
            prefix_parity += deg_g * e as usize;
        }
        Ok(acc)
    }

    /// Matrix of `d` from degree `n` to degree `n+1` in the canonical
    /// monomial bases; column `j` holds the coordinates of the image of
    /// the `j`-th basis monomial.
    pub fn differential_matrix(&self, n: usize) -> Result<QMatrix> {
        if n + 1 > self.max_degree {
            return Err(Error::CapExceeded {
                needed: n + 1,
                cap: self.max_degree,
            });
        }
        let domain = self.basis(n)?;
        let codomain = self.basis(n + 1)?;
        let mut m = QMatrix::zero(codomain.len(), domain.len());
        for (j, mono) in domain.iter().enumerate() {
            let image = self.d_monomial(mono)?;
            let coords = image.coords(&codomain)?;
            for (i, c) in coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }

    /// Check `d^2 = 0` and minimality, reporting offenders by name.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport {
            d_squared_zero: true,
            minimal: true,
            violations: Vec::new(),
            checked_up_to: self.max_degree,
        };
        for (i, g) in self.gens.iter() {
            let d = &self.diffs[i];
            if !d.wordlength_component(1).is_zero() || !d.wordlength_component(0).is_zero() {
                report.minimal = false;
                report
                    .violations
                    .push(format!("diff {} has a linear part", g.name));
            }
            if g.degree + 2 <= self.max_degree {
                match self.apply_d(d) {
                    Ok(dd) if dd.is_zero() => {}
                    Ok(dd) => {
                        report.d_squared_zero = false;
                        report
                            .violations
                            .push(format!("d(d {}) = {} is nonzero", g.name, dd.render()));
                    }
                    Err(e) => {
                        report.d_squared_zero = false;
                        report
                            .violations
                            .push(format!("d(d {}) failed: {e}", g.name));
                    }
                }
            }
        }
        report
    }

    /// Minimality alone (no linear part in any differential).
    pub fn is_minimal(&self) -> bool {
        self.diffs
            .iter()
            .all(|d| d.wordlength_component(1).is_zero() && d.wordlength_component(0).is_zero())
    }

    /// Render in the `.cdga` grammar. Parsing the result reproduces the
    /// presentation.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, g) in self.gens.iter() {
            let kind = if self.fiber[i] { "fiber" } else { "gen" };
            let _ = write!(s, "{} {} {}", kind, g.name, g.degree);
            if let Some(k) = g.stage {
                let _ = write!(s, " stage {k}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "maxdeg {}", self.max_degree);
        for (i, g) in self.gens.iter() {
            if !self.diffs[i].is_zero() {
                let _ = writeln!(s, "diff {} = {}", g.name, self.diffs[i].render());
            }
        }
        s
    }

    /// Parse the `.cdga` grammar. Errors carry the 1-based line number.
    pub fn parse(text: &str) -> Result<CdgaPresentation> {
        let at = |line: usize, msg: String| Error::Parse { line, msg };

        let mut table = GeneratorTable::new();
        let mut fiber_names: Vec<String> = Vec::new();
        let mut diff_lines: Vec<(usize, String, String)> = Vec::new();
        let mut maxdeg: Option<usize> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let stripped = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            let toks: Vec<&str> = stripped.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            match toks[0] {
                "gen" | "fiber" => {
                    if toks.len() != 3 && !(toks.len() == 5 && toks[3] == "stage") {
                        return Err(at(
                            line,
                            format!("expected `{} <name> <degree> [stage <k>]`", toks[0]),
                        ));
                    }
                    let degree: usize = toks[2]
                        .parse()
                        .map_err(|_| at(line, format!("malformed degree `{}`", toks[2])))?;
                    let stage = if toks.len() == 5 {
                        Some(
                            toks[4]
                                .parse()
                                .map_err(|_| at(line, format!("malformed stage `{}`", toks[4])))?,
                        )
                    } else {
                        None
                    };
                    table
                        .push_staged(toks[1], degree, stage)
                        .map_err(|e| at(line, e.to_string()))?;
                    if toks[0] == "fiber" {
                        fiber_names.push(toks[1].to_string());
                    }
                }
                "diff" => {
                    let rest = stripped.trim_start();
                    let rest = rest.strip_prefix("diff").unwrap_or(rest).trim_start();
                    let Some((name, rhs)) = rest.split_once('=') else {
                        return Err(at(line, "expected `diff <name> = <poly>`".into()));
                    };
                    diff_lines.push((line, name.trim().to_string(), rhs.trim().to_string()));
                }
                "maxdeg" => {
                    if toks.len() != 2 {
                        return Err(at(line, "expected `maxdeg <n>`".into()));
                    }
                    maxdeg = Some(
                        toks[1]
                            .parse()
                            .map_err(|_| at(line, format!("malformed maxdeg `{}`", toks[1])))?,
                    );
                }
                other => {
                    return Err(at(line, format!("unknown directive `{other}`")));
                }
            }
        }

        // Base generators first, fiber generators after, declaration order
        // preserved within each block; the holonomy decomposition relies on
        // base factors sorting in front of fiber factors.
        let mut reordered = GeneratorTable::new();
        let mut fiber_flags = Vec::new();
        for (_, g) in table.iter() {
            if !fiber_names.contains(&g.name) {
                reordered.push_staged(&g.name, g.degree, g.stage)?;
                fiber_flags.push(false);
            }
        }
        for (_, g) in table.iter() {
            if fiber_names.contains(&g.name) {
                reordered.push_staged(&g.name, g.degree, g.stage)?;
                fiber_flags.push(true);
            }
        }
        let max_gen_degree = reordered.iter().map(|(_, g)| g.degree).max().unwrap_or(0);
        let gens = Arc::new(reordered);
        let max_degree = maxdeg.unwrap_or(max_gen_degree + 1);

        let mut diffs = vec![Poly::zero(gens.clone()); gens.len()];
        for (line, name, rhs) in diff_lines {
            let idx = gens
                .index_of(&name)
                .ok_or_else(|| at(line, format!("unknown generator `{name}`")))?;
            let p = Poly::parse(gens.clone(), &rhs).map_err(|e| at(line, e.to_string()))?;
            if !p.is_zero() {
                let expected = gens.degree(idx) + 1;
                match p.homogeneous_degree() {
                    Some(d) if d == expected => {}
                    Some(d) => {
                        return Err(at(
                            line,
                            format!(
                                "diff {name} has degree {d}, expected {expected} (d raises degree by 1)"
                            ),
                        ))
                    }
                    None => {
                        return Err(at(line, format!("diff {name} is not homogeneous")));
                    }
                }
            }
            diffs[idx] = p;
        }

        let p = CdgaPresentation {
            gens,
            diffs,
            max_degree,
            fiber: fiber_flags,
        };
        if p.has_fiber() {
            // base differentials must stay inside the base subalgebra
            for i in p.base_indices() {
                for (m, _) in p.diffs[i].terms() {
                    if m.factors().iter().any(|&(g, _)| p.fiber[g]) {
                        return Err(Error::Domain(format!(
                            "base generator `{}` has a differential with fiber factors",
                            p.gens.name(i)
                        )));
                    }
                }
            }
        }
        Ok(p)
    }
}

/// Outcome of `validate`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ValidationReport {
    pub d_squared_zero: bool,
    pub minimal: bool,
    pub violations: Vec<String>,
    /// Degree cap within which `d^2 = 0` was actually verified.
    pub checked_up_to: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.d_squared_zero
    }
}

/// A morphism of presentations, given by generator images.
#[derive(Debug, Clone)]
pub struct CdgaMorphism {
    pub source: CdgaPresentation,
    pub target: CdgaPresentation,
    /// Image of each source generator, as a polynomial over the target.
    pub images: Vec<Poly>,
}

impl CdgaMorphism {
    pub fn new(
        source: CdgaPresentation,
        target: CdgaPresentation,
        images: Vec<Poly>,
    ) -> Result<Self> {
        if images.len() != source.gens().len() {
            return Err(Error::Dimension(format!(
                "need {} generator images, got {}",
                source.gens().len(),
                images.len()
            )));
        }
        Ok(CdgaMorphism {
            source,
            target,
            images,
        })
    }

    pub fn identity(p: &CdgaPresentation) -> Self {
        let images = (0..p.gens().len())
            .map(|i| Poly::generator(p.gens().clone(), i))
            .collect();
        CdgaMorphism {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    /// Apply to an arbitrary element by multiplicativity.
    pub fn apply(&self, x: &Poly) -> Result<Poly> {
        let mut out = self.target.zero();
        for (m, c) in x.terms() {
            let mut prod = Poly::one(self.target.gens().clone());
            for &(g, e) in m.factors() {
                for _ in 0..e {
                    prod = prod.mul(&self.images[g])?;
                }
            }
            out = out.add(&prod.scale(c))?;
        }
        Ok(out)
    }

    /// Verify degree preservation and commutation with the differentials
    /// on every generator, within the common caps.
    pub fn check(&self) -> MorphismReport {
        let mut report = MorphismReport {
            degree_preserving: true,
            commutes: true,
            violations: Vec::new(),
        };
        for (i, g) in self.source.gens().iter() {
            let img = &self.images[i];
            if !img.is_zero() {
                match img.homogeneous_degree() {
                    Some(d) if d == g.degree => {}
                    got => {
                        report.degree_preserving = false;
                        report.violations.push(format!(
                            "image of {} has degree {:?}, expected {}",
                            g.name, got, g.degree
                        ));
                        continue;
                    }
                }
            }
            // f(dv) = d(f(v)), when both sides stay under the caps
            if g.degree + 1 > self.target.max_degree() {
                continue;
            }
            let lhs = match self.apply(self.source.differential(i)) {
                Ok(p) => p,
                Err(e) => {
                    report.commutes = false;
                    report
                        .violations
                        .push(format!("f(d {}) failed: {e}", g.name));
                    continue;
                }
            };
            let rhs = match self.target.apply_d(img) {
                Ok(p) => p,
                Err(e) => {
                    report.commutes = false;
                    report
                        .violations
                        .push(format!("d(f {}) failed: {e}", g.name));
                    continue;
                }
            };
            if lhs != rhs {
                report.commutes = false;
                report.violations.push(format!(
                    "f(d {}) = {} but d(f {}) = {}",
                    g.name,
                    lhs.render(),
                    g.name,
                    rhs.render()
                ));
            }
        }
        report
    }
}

/// Outcome of `CdgaMorphism::check`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MorphismReport {
    pub degree_preserving: bool,
    pub commutes: bool,
    pub violations: Vec<String>,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.degree_preserving && self.commutes
    }
}

/// The Heisenberg presentation used throughout the tests: three degree-1
/// generators with `d v3 = v1 v2`.
pub fn heisenberg(max_degree: usize) -> CdgaPresentation {
    CdgaPresentation::parse(&format!(
        "gen v1 1\ngen v2 1\ngen v3 1\nmaxdeg {max_degree}\ndiff v3 = v1*v2\n"
    ))
    .expect("heisenberg presentation parses")
}

/// The even-sphere model: `Λ(e2, e3)` with `d e3 = e2^2`.
pub fn sphere2_model(max_degree: usize) -> CdgaPresentation {
    CdgaPresentation::parse(&format!(
        "gen e2 2\ngen e3 3\nmaxdeg {max_degree}\ndiff e3 = e2^2\n"
    ))
    .expect("sphere model parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Poly;

    #[test]
    fn parse_heisenberg() {
        let p = heisenberg(4);
        assert_eq!(p.gens().len(), 3);
        assert_eq!(p.differential(2).render(), "v1*v2");
        assert!(p.differential(0).is_zero());
        let report = p.validate();
        assert!(report.d_squared_zero);
        assert!(report.minimal);
    }

    #[test]
    fn parse_rejects_degree_mismatch() {
        let err = CdgaPresentation::parse("gen v1 1\ngen v2 1\ndiff v1 = v2\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("degree"), "{msg}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn parse_reports_unknown_generator_line() {
        let err = CdgaPresentation::parse("gen v1 1\ndiff v9 = v1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn leibniz_hand_examples() {
        let h = heisenberg(4);
        let v1 = Poly::generator(h.gens().clone(), 0);
        let v3 = Poly::generator(h.gens().clone(), 2);
        let v1v3 = v1.mul(&v3).unwrap();
        assert!(h.apply_d(&v1v3).unwrap().is_zero()); // -v1*(v1*v2) = 0

        let s = sphere2_model(8);
        let e2 = Poly::generator(s.gens().clone(), 0);
        let e3 = Poly::generator(s.gens().clone(), 1);
        let e2e3 = e2.mul(&e3).unwrap();
        assert_eq!(s.apply_d(&e2e3).unwrap().render(), "e2^3");

        assert!(h.apply_d(&Poly::one(h.gens().clone())).unwrap().is_zero());
    }

    #[test]
    fn validate_flags_linear_part() {
        let p = CdgaPresentation::parse("gen a 1\ngen b 2\ndiff a = b\n").unwrap();
        let report = p.validate();
        assert!(!report.minimal);
        assert!(report.d_squared_zero);
    }

    #[test]
    fn validate_flags_broken_d_squared() {
        let p = CdgaPresentation::parse(
            "gen a 2\ngen b 3\ngen c 4\nmaxdeg 7\ndiff b = a^2\ndiff c = a*b\n",
        )
        .unwrap();
        let report = p.validate();
        assert!(!report.d_squared_zero);
        assert!(report.violations.iter().any(|v| v.contains('c')));
        assert!(report.minimal);
    }

    #[test]
    fn differential_matrix_heisenberg_degree_one() {
        let h = heisenberg(4);
        let m = h.differential_matrix(1).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        // bases: deg 1 = v1,v2,v3; deg 2 = v1v2,v1v3,v2v3; only d(v3) = v1v2
        assert_eq!(m.get(0, 2), qint(1));
        assert_eq!(m.iter().count(), 1);
    }

    #[test]
    fn differential_matrix_squares_to_zero() {
        let s = sphere2_model(8);
        for n in 1..=6 {
            let d1 = s.differential_matrix(n).unwrap();
            let d2 = s.differential_matrix(n + 1).unwrap();
            assert!(d2.mul_mat(&d1).unwrap().is_zero(), "degree {n}");
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let h = heisenberg(4);
        let text = h.render();
        let p = CdgaPresentation::parse(&text).unwrap();
        assert_eq!(p.render(), text);
        assert_eq!(p.max_degree(), 4);
    }

    #[test]
    fn identity_morphism_checks() {
        let h = heisenberg(4);
        let id = CdgaMorphism::identity(&h);
        assert!(id.check().is_valid());
    }

    #[test]
    fn degree_violation_detected() {
        let h = heisenberg(4);
        let s = sphere2_model(8);
        // send a degree-1 generator to a degree-2 class
        let images = vec![
            Poly::generator(s.gens().clone(), 0),
            Poly::zero(s.gens().clone()),
            Poly::zero(s.gens().clone()),
        ];
        let f = CdgaMorphism::new(h, s, images).unwrap();
        let report = f.check();
        assert!(!report.degree_preserving);
    }

    #[test]
    fn cap_exceeded_is_reported() {
        let h = heisenberg(2);
        assert!(matches!(
            h.differential_matrix(2),
            Err(Error::CapExceeded { .. })
        ));
    }
}
