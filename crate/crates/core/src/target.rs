//! Model-construction targets.
//!
//! A target is either an honest CDGA presentation or a "formal" one: a
//! graded ring described purely by its degreewise dimensions and cup
//! products, carrying the zero differential. Formal targets capture the
//! common situation where only the cohomology ring of a space is known.
//!
//! The `.target` grammar declares basis dimensions and products:
//!
//! ```text
//! h <degree> <dim>
//! cup <a> <b> = <combination of h-basis names>   # e.g. cup h1_0 h1_1 = h2_0
//! ```
//!
//! Basis elements are named `h<degree>_<index>`. Degree 0 is always the
//! one-dimensional span of the unit. Products not listed are zero;
//! graded commutativity fills in the transposed entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::cdga::CdgaPresentation;
use crate::cohomology::{DgAlgebra, GradedElement};
use crate::error::{Error, Result};
use crate::linalg::{qone, qzero, QMatrix, Rational};

/// A graded ring with zero differential, given by dimensions and a cup
/// product table on basis elements.
#[derive(Debug, Clone)]
pub struct FormalTarget {
    /// Dimensions of the positive degrees (degree 0 is implicit).
    dims: BTreeMap<usize, usize>,
    /// `(deg_a, idx_a, deg_b, idx_b) -> coordinates in degree a+b`.
    cup: BTreeMap<(usize, usize, usize, usize), Vec<Rational>>,
}

/// Basis label of a formal target.
pub fn h_label(degree: usize, index: usize) -> String {
    format!("h{degree}_{index}")
}

impl FormalTarget {
    pub fn new(dims: BTreeMap<usize, usize>) -> Self {
        let dims = dims.into_iter().filter(|&(d, n)| d > 0 && n > 0).collect();
        FormalTarget {
            dims,
            cup: BTreeMap::new(),
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        if n == 0 {
            1
        } else {
            self.dims.get(&n).copied().unwrap_or(0)
        }
    }

    /// Largest degree with a nonzero basis.
    pub fn top_degree(&self) -> usize {
        self.dims.keys().max().copied().unwrap_or(0)
    }

    /// Install `cup(a, b) = value` and its graded-commutative transpose.
    pub fn set_cup(
        &mut self,
        a: (usize, usize),
        b: (usize, usize),
        value: Vec<Rational>,
    ) -> Result<()> {
        let (da, ia) = a;
        let (db, ib) = b;
        if ia >= self.dim(da) || ib >= self.dim(db) {
            return Err(Error::Domain("cup product of unknown basis element".into()));
        }
        if da == 0 || db == 0 {
            return Err(Error::Domain(
                "the unit multiplies trivially; do not tabulate it".into(),
            ));
        }
        let out_dim = self.dim(da + db);
        if value.len() != out_dim {
            return Err(Error::Dimension(format!(
                "cup value must have {} coordinates in degree {}",
                out_dim,
                da + db
            )));
        }
        if da % 2 == 1 && (da, ia) == (db, ib) && value.iter().any(|c| !c.is_zero()) {
            return Err(Error::Domain(format!(
                "odd class {} squares to zero",
                h_label(da, ia)
            )));
        }
        let transposed: Vec<Rational> = if da * db % 2 == 1 {
            value.iter().map(|c| -c).collect()
        } else {
            value.clone()
        };
        let check_conflict = |existing: &Vec<Rational>, new: &Vec<Rational>| {
            if existing != new {
                Err(Error::Domain(format!(
                    "conflicting cup products for {} and {}",
                    h_label(da, ia),
                    h_label(db, ib)
                )))
            } else {
                Ok(())
            }
        };
        if let Some(old) = self.cup.get(&(da, ia, db, ib)) {
            check_conflict(old, &value)?;
        }
        if let Some(old) = self.cup.get(&(db, ib, da, ia)) {
            check_conflict(old, &transposed)?;
        }
        self.cup.insert((da, ia, db, ib), value);
        self.cup.insert((db, ib, da, ia), transposed);
        Ok(())
    }

    fn cup_basis(&self, a: (usize, usize), b: (usize, usize)) -> Vec<Rational> {
        let out_dim = self.dim(a.0 + b.0);
        if a.0 % 2 == 1 && a == b {
            return vec![qzero(); out_dim];
        }
        self.cup
            .get(&(a.0, a.1, b.0, b.1))
            .cloned()
            .unwrap_or_else(|| vec![qzero(); out_dim])
    }

    /// Parse the `.target` grammar.
    pub fn parse(text: &str) -> Result<FormalTarget> {
        let at = |line: usize, msg: String| Error::Parse { line, msg };
        let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cup_lines: Vec<(usize, String, String, String)> = Vec::new();
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
                "h" => {
                    if toks.len() != 3 {
                        return Err(at(line, "expected `h <degree> <dim>`".into()));
                    }
                    let degree: usize = toks[1]
                        .parse()
                        .map_err(|_| at(line, format!("malformed degree `{}`", toks[1])))?;
                    let dim: usize = toks[2]
                        .parse()
                        .map_err(|_| at(line, format!("malformed dimension `{}`", toks[2])))?;
                    if degree == 0 && dim != 1 {
                        return Err(at(line, "degree 0 must have dimension 1".into()));
                    }
                    if degree > 0 {
                        dims.insert(degree, dim);
                    }
                }
                "cup" => {
                    let rest = stripped.trim_start().strip_prefix("cup").unwrap().trim();
                    let Some((lhs, rhs)) = rest.split_once('=') else {
                        return Err(at(line, "expected `cup <a> <b> = <value>`".into()));
                    };
                    let names: Vec<&str> = lhs.split_whitespace().collect();
                    if names.len() != 2 {
                        return Err(at(line, "expected two basis names before `=`".into()));
                    }
                    cup_lines.push((
                        line,
                        names[0].to_string(),
                        names[1].to_string(),
                        rhs.trim().to_string(),
                    ));
                }
                other => return Err(at(line, format!("unknown directive `{other}`"))),
            }
        }
        let mut target = FormalTarget::new(dims);
        for (line, a, b, rhs) in cup_lines {
            let pa = target
                .parse_label(&a)
                .map_err(|e| at(line, e.to_string()))?;
            let pb = target
                .parse_label(&b)
                .map_err(|e| at(line, e.to_string()))?;
            let value = target
                .parse_combination(pa.0 + pb.0, &rhs)
                .map_err(|e| at(line, e.to_string()))?;
            target.set_cup(pa, pb, value).map_err(|e| at(line, e.to_string()))?;
        }
        Ok(target)
    }

    fn parse_label(&self, name: &str) -> Result<(usize, usize)> {
        let body = name
            .strip_prefix('h')
            .ok_or_else(|| Error::Domain(format!("unknown basis element `{name}`")))?;
        let (d, i) = body
            .split_once('_')
            .ok_or_else(|| Error::Domain(format!("unknown basis element `{name}`")))?;
        let degree: usize = d
            .parse()
            .map_err(|_| Error::Domain(format!("unknown basis element `{name}`")))?;
        let index: usize = i
            .parse()
            .map_err(|_| Error::Domain(format!("unknown basis element `{name}`")))?;
        if index >= self.dim(degree) || degree == 0 {
            return Err(Error::Domain(format!(
                "basis element `{name}` not declared"
            )));
        }
        Ok((degree, index))
    }

    /// Parse `0` or `c*h<d>_<i> + ...` into degree-`degree` coordinates.
    fn parse_combination(&self, degree: usize, text: &str) -> Result<Vec<Rational>> {
        let mut out = vec![qzero(); self.dim(degree)];
        let src = text.trim();
        if src == "0" {
            return Ok(out);
        }
        for raw in src.split('+') {
            let term = raw.trim();
            let (coeff, name) = match term.rsplit_once('*') {
                Some((c, n)) => (
                    c.trim()
                        .parse::<Rational>()
                        .map_err(|_| Error::Domain(format!("malformed rational `{c}`")))?,
                    n.trim(),
                ),
                None => {
                    if let Some(stripped) = term.strip_prefix('-') {
                        (-qone(), stripped.trim())
                    } else {
                        (qone(), term)
                    }
                }
            };
            let (d, i) = self.parse_label(name)?;
            if d != degree {
                return Err(Error::Domain(format!(
                    "`{name}` has degree {d}, expected {degree}"
                )));
            }
            out[i] += coeff;
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (&d, &n) in &self.dims {
            let _ = writeln!(s, "h {d} {n}");
        }
        for (&(da, ia, db, ib), v) in &self.cup {
            // emit each unordered pair once
            if (da, ia) > (db, ib) {
                continue;
            }
            let parts: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    if c.is_one() {
                        h_label(da + db, i)
                    } else {
                        format!("{}*{}", c, h_label(da + db, i))
                    }
                })
                .collect();
            let rhs = if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            };
            let _ = writeln!(s, "cup {} {} = {}", h_label(da, ia), h_label(db, ib), rhs);
        }
        s
    }
}

impl DgAlgebra for FormalTarget {
    fn degree_cap(&self) -> usize {
        usize::MAX
    }

    fn space_dim(&self, n: usize) -> Result<usize> {
        Ok(self.dim(n))
    }

    fn d_matrix(&self, n: usize) -> Result<QMatrix> {
        Ok(QMatrix::zero(self.dim(n + 1), self.dim(n)))
    }

    fn basis_labels(&self, n: usize) -> Result<Vec<String>> {
        if n == 0 {
            return Ok(vec!["1".to_string()]);
        }
        Ok((0..self.dim(n)).map(|i| h_label(n, i)).collect())
    }

    fn mul_elements(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        if a.coords.len() != self.dim(a.degree) || b.coords.len() != self.dim(b.degree) {
            return Err(Error::Dimension("element does not match target basis".into()));
        }
        if a.degree == 0 {
            return Ok(b.scale(&a.coords[0]));
        }
        if b.degree == 0 {
            return Ok(a.scale(&b.coords[0]));
        }
        let degree = a.degree + b.degree;
        let mut out = GradedElement::zero(degree, self.dim(degree));
        for (ia, ca) in a.coords.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (ib, cb) in b.coords.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let table = self.cup_basis((a.degree, ia), (b.degree, ib));
                for (k, t) in table.iter().enumerate() {
                    if !t.is_zero() {
                        out.coords[k] += ca * cb * t;
                    }
                }
            }
        }
        Ok(out)
    }

    fn unit_element(&self) -> GradedElement {
        GradedElement {
            degree: 0,
            coords: vec![qone()],
        }
    }
}

/// Either kind of model-construction target.
#[derive(Debug, Clone)]
pub enum Target {
    Cdga(CdgaPresentation),
    Formal(FormalTarget),
}

impl Target {
    /// Parse by file content and extension: `.cdga` presentations or
    /// `.target` formal rings.
    pub fn parse(path_hint: &str, text: &str) -> Result<Target> {
        if path_hint.ends_with(".target") {
            Ok(Target::Formal(FormalTarget::parse(text)?))
        } else {
            Ok(Target::Cdga(CdgaPresentation::parse(text)?))
        }
    }
}

impl DgAlgebra for Target {
    fn degree_cap(&self) -> usize {
        match self {
            Target::Cdga(p) => p.degree_cap(),
            Target::Formal(t) => t.degree_cap(),
        }
    }

    fn space_dim(&self, n: usize) -> Result<usize> {
        match self {
            Target::Cdga(p) => p.space_dim(n),
            Target::Formal(t) => t.space_dim(n),
        }
    }

    fn d_matrix(&self, n: usize) -> Result<QMatrix> {
        match self {
            Target::Cdga(p) => p.d_matrix(n),
            Target::Formal(t) => t.d_matrix(n),
        }
    }

    fn basis_labels(&self, n: usize) -> Result<Vec<String>> {
        match self {
            Target::Cdga(p) => p.basis_labels(n),
            Target::Formal(t) => t.basis_labels(n),
        }
    }

    fn mul_elements(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
        match self {
            Target::Cdga(p) => p.mul_elements(a, b),
            Target::Formal(t) => t.mul_elements(a, b),
        }
    }

    fn unit_element(&self) -> GradedElement {
        match self {
            Target::Cdga(p) => p.unit_element(),
            Target::Formal(t) => t.unit_element(),
        }
    }
}
