//! Polynomial differential forms on standard simplices.
//!
//! Degree-0 variables `t1..tn` describe the n-simplex with `t0`
//! eliminated through `t0 = 1 - t1 - ... - tn` (and `dt0 = -dt1 - ...`),
//! so every form has a canonical representation. Face and degeneracy
//! operators substitute the simplicial formulas
//!
//! ```text
//! face i:       t_k -> t_k (k<i), 0 (k=i), t_{k-1} (k>i)
//! degeneracy j: t_k -> t_k (k<j), t_k + t_{k+1} (k=j), t_{k+1} (k>j)
//! ```
//!
//! and renormalize. Integration over the n-simplex is exact through
//! `∫ t1^{k1}..tn^{kn} dt1..dtn = (Π ki!)/(n + Σ ki)!`, carried with the
//! sign `(-1)^{n(n+1)/2}`; the sign sequence starts at `-1` on the
//! 1-simplex and is pinned in concert with the simplicial coboundary
//! `(δc)(σ) = (-1)^{k+1} c(∂σ)` so that integration is a cochain map
//! (exercised by the corpus tests rather than assumed).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cdga::CdgaPresentation;
use crate::error::{Error, Result};
use crate::graded::Poly;
use crate::linalg::{qone, qzero, Rational};

/// A polynomial differential form on the `n`-simplex: rational
/// combination of `t`-monomials (exponents of `t1..tn`) wedged with
/// ascending `dt` subsets (bitmask, bit `i-1` for `dt_i`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyForm {
    n: usize,
    terms: BTreeMap<(Vec<u32>, u64), Rational>,
}

fn wedge_sign(s: u64, t: u64) -> i32 {
    // parity of pairs (a in s, b in t) with a > b
    let mut sign = 1;
    let mut b = t;
    while b != 0 {
        let low = b.trailing_zeros() as u64;
        let higher_in_s = (s >> (low + 1)).count_ones();
        if higher_in_s % 2 == 1 {
            sign = -sign;
        }
        b &= b - 1;
    }
    sign
}

impl PolyForm {
    pub fn zero(n: usize) -> Self {
        PolyForm {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut f = PolyForm::zero(n);
        f.add_term(vec![0; n], 0, c);
        f
    }

    pub fn one(n: usize) -> Self {
        PolyForm::constant(n, qone())
    }

    /// The coordinate `t_i`, `1 <= i <= n`.
    pub fn t(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Domain(format!(
                "t{i} does not live on the {n}-simplex"
            )));
        }
        let mut exp = vec![0; n];
        exp[i - 1] = 1;
        let mut f = PolyForm::zero(n);
        f.add_term(exp, 0, qone());
        Ok(f)
    }

    /// The one-form `dt_i`, `1 <= i <= n`.
    pub fn dt(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Domain(format!(
                "dt{i} does not live on the {n}-simplex"
            )));
        }
        let mut f = PolyForm::zero(n);
        f.add_term(vec![0; n], 1 << (i - 1), qone());
        Ok(f)
    }

    pub fn simplex_dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: Vec<u32>, mask: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exp.len(), self.n);
        match self.terms.entry((exp, mask)) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &PolyForm) -> Result<PolyForm> {
        if self.n != other.n {
            return Err(Error::Dimension("forms live on different simplices".into()));
        }
        let mut out = self.clone();
        for ((exp, mask), c) in &other.terms {
            out.add_term(exp.clone(), *mask, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> PolyForm {
        PolyForm {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyForm) -> Result<PolyForm> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        if c.is_zero() {
            return PolyForm::zero(self.n);
        }
        PolyForm {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &PolyForm) -> Result<PolyForm> {
        if self.n != other.n {
            return Err(Error::Dimension("forms live on different simplices".into()));
        }
        let mut out = PolyForm::zero(self.n);
        for ((ea, sa), ca) in &self.terms {
            for ((eb, sb), cb) in &other.terms {
                if sa & sb != 0 {
                    continue; // repeated dt factor
                }
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let mut c = ca * cb;
                if wedge_sign(*sa, *sb) < 0 {
                    c = -c;
                }
                out.add_term(exp, sa | sb, c);
            }
        }
        Ok(out)
    }

    /// Homogeneous form degree (number of `dt` factors), `None` for zero
    /// or mixed forms.
    pub fn form_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|(_, m)| m.count_ones() as usize);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Sub-sum of terms with exactly `k` `dt` factors.
    pub fn degree_component(&self, k: usize) -> PolyForm {
        PolyForm {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|((_, m), _)| m.count_ones() as usize == k)
                .map(|(key, c)| (key.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exterior derivative.
    pub fn d(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for ((exp, mask), c) in &self.terms {
            for i in 0..self.n {
                if exp[i] == 0 {
                    continue;
                }
                let bit = 1u64 << i;
                if mask & bit != 0 {
                    continue; // dt_i wedge dt_i
                }
                let mut e = exp.clone();
                e[i] -= 1;
                let below = (mask & (bit - 1)).count_ones();
                let mut coeff = c * Rational::from_integer(BigInt::from(exp[i]));
                if below % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_term(e, mask | bit, coeff);
            }
        }
        out
    }

    /// Substitute images for every `t_i`; `dt_i` goes to the derivative
    /// of the image. Images must be 0-forms on the target simplex.
    fn substitute(&self, t_images: &[PolyForm], target_n: usize) -> Result<PolyForm> {
        if t_images.len() != self.n {
            return Err(Error::Dimension("need one image per coordinate".into()));
        }
        let dt_images: Vec<PolyForm> = t_images.iter().map(|f| f.d()).collect();
        let mut out = PolyForm::zero(target_n);
        for ((exp, mask), c) in &self.terms {
            let mut acc = PolyForm::constant(target_n, c.clone());
            for (i, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&t_images[i])?;
                }
            }
            for i in 0..self.n {
                if mask & (1 << i) != 0 {
                    acc = acc.mul(&dt_images[i])?;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Face operator `∂_i: (A_PL)_n -> (A_PL)_{n-1}`, `0 <= i <= n`.
    pub fn face(&self, i: usize) -> Result<PolyForm> {
        if self.n == 0 {
            return Err(Error::Domain("the 0-simplex has no faces".into()));
        }
        if i > self.n {
            return Err(Error::Domain(format!(
                "face index {i} out of range for the {}-simplex",
                self.n
            )));
        }
        let m = self.n - 1;
        // image of t_0 in the target: 1 - t_1 - ... - t_m
        let t0 = {
            let mut f = PolyForm::one(m);
            for j in 1..=m {
                f = f.sub(&PolyForm::t(m, j)?)?;
            }
            f
        };
        let mut images = Vec::with_capacity(self.n);
        for k in 1..=self.n {
            let img = if k < i {
                PolyForm::t(m, k)?
            } else if k == i {
                PolyForm::zero(m)
            } else if k - 1 == 0 {
                t0.clone()
            } else {
                PolyForm::t(m, k - 1)?
            };
            images.push(img);
        }
        self.substitute(&images, m)
    }

    /// Degeneracy operator `s_j: (A_PL)_n -> (A_PL)_{n+1}`, `0 <= j <= n`.
    pub fn degeneracy(&self, j: usize) -> Result<PolyForm> {
        if j > self.n {
            return Err(Error::Domain(format!(
                "degeneracy index {j} out of range for the {}-simplex",
                self.n
            )));
        }
        let m = self.n + 1;
        let mut images = Vec::with_capacity(self.n);
        for k in 1..=self.n {
            let img = if k < j {
                PolyForm::t(m, k)?
            } else if k == j {
                PolyForm::t(m, k)?.add(&PolyForm::t(m, k + 1)?)?
            } else {
                PolyForm::t(m, k + 1)?
            };
            images.push(img);
        }
        self.substitute(&images, m)
    }

    /// Exact integral of a top-degree form over the standard simplex,
    /// with the pinned sign.
    pub fn integrate(&self) -> Result<Rational> {
        match self.form_degree() {
            None if self.is_zero() => return Ok(qzero()),
            Some(k) if k == self.n => {}
            other => {
                return Err(Error::Dimension(format!(
                    "integration needs a top-degree form: degree {:?} on the {}-simplex",
                    other, self.n
                )))
            }
        }
        let mut total = qzero();
        for ((exp, _), c) in &self.terms {
            total += c * dirichlet(self.n, exp);
        }
        Ok(total * integration_sign(self.n))
    }

    /// Integration extended by zero to non-top degrees: the value the
    /// cochain map assigns.
    pub fn cochain_value(&self) -> Result<Rational> {
        self.degree_component(self.n).integrate()
    }

    /// Render in the form-literal grammar, e.g. `t1^2*t2 dt1^dt3`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((exp, mask), c) in &self.terms {
            let mut mono = String::new();
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                let _ = write!(mono, "t{}", i + 1);
                if e > 1 {
                    let _ = write!(mono, "^{e}");
                }
            }
            let mut head = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else {
                format!("{c}*{mono}")
            };
            if *mask != 0 {
                let dts: Vec<String> = (0..self.n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| format!("dt{}", i + 1))
                    .collect();
                let _ = write!(head, " {}", dts.join("^"));
            }
            parts.push(head);
        }
        parts.join(" + ")
    }

    /// Parse the form-literal grammar on the `n`-simplex.
    pub fn parse(n: usize, text: &str) -> Result<PolyForm> {
        let src = text.trim();
        if src.is_empty() {
            return Err(Error::Domain("empty form".into()));
        }
        if src == "0" {
            return Ok(PolyForm::zero(n));
        }
        let mut out = PolyForm::zero(n);
        for raw in src.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::Domain(format!("empty term in `{src}`")));
            }
            let (mono_part, dt_part) = match term.split_once(char::is_whitespace) {
                Some((a, b)) => (a.trim(), Some(b.trim())),
                None => {
                    if term.starts_with("dt") || term.starts_with("-dt") {
                        ("", Some(term))
                    } else {
                        (term, None)
                    }
                }
            };
            let mut coeff = qone();
            let mut exp = vec![0u32; n];
            let mut mono_src = mono_part;
            if let Some(stripped) = mono_src.strip_prefix('-') {
                if stripped.starts_with('t') || stripped.is_empty() {
                    coeff = -coeff;
                    mono_src = stripped;
                }
            }
            if !mono_src.is_empty() {
                for chunk in mono_src.split('*') {
                    let chunk = chunk.trim();
                    if chunk.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
                        coeff = &coeff
                            * chunk.parse::<Rational>().map_err(|_| {
                                Error::Domain(format!("malformed rational `{chunk}`"))
                            })?;
                        continue;
                    }
                    let (idx, e) = parse_t_factor(chunk, n)?;
                    exp[idx - 1] += e;
                }
            }
            let mut dt_list: Vec<usize> = Vec::new();
            if let Some(dts) = dt_part {
                let mut dt_src = dts;
                if let Some(stripped) = dt_src.strip_prefix('-') {
                    coeff = -coeff;
                    dt_src = stripped;
                }
                for chunk in dt_src.split('^') {
                    let chunk = chunk.trim();
                    let idx: usize = chunk
                        .strip_prefix("dt")
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Domain(format!("malformed dt factor `{chunk}`")))?;
                    if idx == 0 || idx > n {
                        return Err(Error::Domain(format!(
                            "dt{idx} does not live on the {n}-simplex"
                        )));
                    }
                    dt_list.push(idx - 1);
                }
            }
            // resolve the written wedge order to the ascending normal form
            let mut mask = 0u64;
            let mut sign = 1;
            for &i in &dt_list {
                let bit = 1u64 << i;
                if mask & bit != 0 {
                    sign = 0;
                    break;
                }
                if (mask >> (i + 1)).count_ones() % 2 == 1 {
                    sign = -sign;
                }
                mask |= bit;
            }
            if sign == 0 {
                continue;
            }
            if sign < 0 {
                coeff = -coeff;
            }
            out.add_term(exp, mask, coeff);
        }
        Ok(out)
    }
}

fn parse_t_factor(chunk: &str, n: usize) -> Result<(usize, u32)> {
    let (name, exp) = match chunk.split_once('^') {
        Some((a, b)) => (
            a.trim(),
            b.trim()
                .parse::<u32>()
                .map_err(|_| Error::Domain(format!("malformed exponent in `{chunk}`")))?,
        ),
        None => (chunk, 1),
    };
    let idx: usize = name
        .strip_prefix('t')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Domain(format!("malformed coordinate `{name}`")))?;
    if idx == 0 || idx > n {
        return Err(Error::Domain(format!(
            "t{idx} does not live on the {n}-simplex"
        )));
    }
    Ok((idx, exp))
}

fn factorial(k: u64) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=k {
        out *= BigInt::from(i);
    }
    out
}

/// `∫ t1^{k1}..tn^{kn} dt1..dtn` over the standard simplex.
fn dirichlet(n: usize, exp: &[u32]) -> Rational {
    let mut numer = BigInt::one();
    let mut total = n as u64;
    for &e in exp {
        numer *= factorial(e as u64);
        total += e as u64;
    }
    Rational::new(numer, factorial(total))
}

/// Sign carried by integration over the `n`-simplex: starts at `-1` for
/// `n = 1` and alternates in pairs so the coboundary identity holds.
pub fn integration_sign(n: usize) -> Rational {
    if (n * (n + 1) / 2) % 2 == 0 {
        qone()
    } else {
        -qone()
    }
}

/// A finite simplicial set: nondegenerate simplices with explicit faces.
#[derive(Debug, Clone)]
pub struct FiniteSimplicialSet {
    by_dim: BTreeMap<usize, Vec<String>>,
    dims: BTreeMap<String, usize>,
    faces: BTreeMap<String, Vec<String>>,
}

#[derive(serde::Deserialize, serde::Serialize)]
struct SimplicialSetJson {
    simplices: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    faces: BTreeMap<String, Vec<String>>,
}

impl FiniteSimplicialSet {
    pub fn new(
        by_dim: BTreeMap<usize, Vec<String>>,
        faces: BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let mut dims = BTreeMap::new();
        for (&d, names) in &by_dim {
            for name in names {
                if dims.insert(name.clone(), d).is_some() {
                    return Err(Error::Domain(format!("duplicate simplex `{name}`")));
                }
            }
        }
        let k = FiniteSimplicialSet {
            by_dim,
            dims,
            faces,
        };
        k.validate()?;
        Ok(k)
    }

    fn validate(&self) -> Result<()> {
        for (name, &d) in &self.dims {
            if d == 0 {
                continue;
            }
            let fs = self
                .faces
                .get(name)
                .ok_or_else(|| Error::Domain(format!("simplex `{name}` lists no faces")))?;
            if fs.len() != d + 1 {
                return Err(Error::Domain(format!(
                    "simplex `{name}` of dimension {d} needs {} faces",
                    d + 1
                )));
            }
            for f in fs {
                match self.dims.get(f) {
                    Some(&fd) if fd + 1 == d => {}
                    _ => {
                        return Err(Error::Domain(format!(
                            "face `{f}` of `{name}` is not a stored simplex of dimension {}",
                            d - 1
                        )))
                    }
                }
            }
        }
        // simplicial identity: faces of faces commute
        for (name, &d) in &self.dims {
            if d < 2 {
                continue;
            }
            let fs = &self.faces[name];
            for j in 0..=d {
                for i in 0..j {
                    let a = &self.faces[&fs[j]][i];
                    let b = &self.faces[&fs[i]][j - 1];
                    if a != b {
                        return Err(Error::Domain(format!(
                            "face identity fails on `{name}`: d{i} d{j} != d{} d{i}",
                            j - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SimplicialSetJson =
            serde_json::from_str(text).map_err(|e| Error::Domain(format!("bad JSON: {e}")))?;
        let mut by_dim = BTreeMap::new();
        for (d, names) in raw.simplices {
            let dim: usize = d
                .parse()
                .map_err(|_| Error::Domain(format!("bad dimension key `{d}`")))?;
            by_dim.insert(dim, names);
        }
        FiniteSimplicialSet::new(by_dim, raw.faces)
    }

    pub fn simplices(&self, dim: usize) -> &[String] {
        self.by_dim.get(&dim).map_or(&[], |v| v.as_slice())
    }

    pub fn max_dim(&self) -> usize {
        self.by_dim.keys().max().copied().unwrap_or(0)
    }

    pub fn dim_of(&self, name: &str) -> Option<usize> {
        self.dims.get(name).copied()
    }

    pub fn faces_of(&self, name: &str) -> &[String] {
        self.faces.get(name).map_or(&[], |v| v.as_slice())
    }

    /// The circle as `Δ[1]/∂Δ[1]`: one vertex, one edge.
    pub fn circle() -> Self {
        let mut by_dim = BTreeMap::new();
        by_dim.insert(0, vec!["c0".to_string()]);
        by_dim.insert(1, vec!["c1".to_string()]);
        let mut faces = BTreeMap::new();
        faces.insert("c1".to_string(), vec!["c0".to_string(), "c0".to_string()]);
        FiniteSimplicialSet::new(by_dim, faces).expect("circle is valid")
    }

    /// The standard simplex `Δ[n]` on vertices `0..=n`, simplices named
    /// by their vertex strings (`s02` is the edge from 0 to 2).
    pub fn standard(n: usize) -> Self {
        let mut by_dim: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        let mut faces = BTreeMap::new();
        let name = |vs: &[usize]| {
            let digits: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            format!("s{}", digits.join(""))
        };
        for mask in 1u32..(1 << (n + 1)) {
            let vs: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
            let d = vs.len() - 1;
            by_dim.entry(d).or_default().push(name(&vs));
            if d > 0 {
                let fs: Vec<String> = (0..=d)
                    .map(|i| {
                        let mut sub = vs.clone();
                        sub.remove(i);
                        name(&sub)
                    })
                    .collect();
                faces.insert(name(&vs), fs);
            }
        }
        for v in by_dim.values_mut() {
            v.sort();
        }
        FiniteSimplicialSet::new(by_dim, faces).expect("standard simplex is valid")
    }

    /// The boundary `∂Δ[n]`: the standard simplex without its top cell.
    pub fn boundary(n: usize) -> Self {
        let full = FiniteSimplicialSet::standard(n);
        let mut by_dim = full.by_dim.clone();
        by_dim.remove(&n);
        let mut faces = full.faces.clone();
        for name in full.simplices(n) {
            faces.remove(name);
        }
        FiniteSimplicialSet::new(by_dim, faces).expect("boundary is valid")
    }
}

/// A simplexwise family of forms of one cochain degree. Missing entries
/// are zero.
#[derive(Debug, Clone)]
pub struct FormFamily {
    pub degree: usize,
    pub forms: BTreeMap<String, PolyForm>,
}

impl FormFamily {
    pub fn form_for(&self, name: &str, simplex_dim: usize) -> PolyForm {
        self.forms
            .get(name)
            .cloned()
            .unwrap_or_else(|| PolyForm::zero(simplex_dim))
    }
}

/// Report of the cochain comparison.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CochainCompareReport {
    pub compatible: bool,
    /// Integration values on the simplices of the family degree.
    pub cochain: BTreeMap<String, String>,
    pub coboundary_identity: bool,
    pub violations: Vec<String>,
}

/// Evaluate the integration cochain of a compatible family and verify
/// that integration intertwines `d` with the simplicial coboundary.
pub fn apl_cochain_compare(
    k: &FiniteSimplicialSet,
    family: &FormFamily,
    degree: usize,
) -> Result<CochainCompareReport> {
    let mut violations = Vec::new();

    // restriction of the family must match the family on faces
    for (&dim, names) in &k.by_dim {
        if dim == 0 {
            continue;
        }
        for name in names {
            let form = family.form_for(name, dim);
            if form.is_zero() {
                continue;
            }
            if form.simplex_dim() != dim {
                return Err(Error::Dimension(format!(
                    "form on `{name}` lives on the {}-simplex, expected {dim}",
                    form.simplex_dim()
                )));
            }
            for (i, face_name) in k.faces_of(name).iter().enumerate() {
                let expected = family.form_for(face_name, dim - 1);
                let restricted = form.face(i)?;
                if restricted != expected {
                    violations.push(format!(
                        "face {i} of the form on `{name}` differs from the form on `{face_name}`"
                    ));
                }
            }
        }
    }
    let compatible = violations.is_empty();

    // the integration cochain in the family degree
    let mut cochain = BTreeMap::new();
    let mut values: BTreeMap<String, Rational> = BTreeMap::new();
    for name in k.simplices(degree) {
        let v = family.form_for(name, degree).cochain_value()?;
        cochain.insert(name.clone(), v.to_string());
        values.insert(name.clone(), v);
    }

    // coboundary identity on every stored simplex one dimension up:
    // ∮(dΦ) = (-1)^{degree+1} Σ_i (-1)^i ∮(Φ on face i)
    let mut identity_ok = true;
    for name in k.simplices(degree + 1) {
        let form = family.form_for(name, degree + 1);
        let lhs = form.d().cochain_value()?;
        let mut rhs = qzero();
        for (i, face_name) in k.faces_of(name).iter().enumerate() {
            let v = match values.get(face_name) {
                Some(v) => v.clone(),
                None => family.form_for(face_name, degree).cochain_value()?,
            };
            if i % 2 == 0 {
                rhs += v;
            } else {
                rhs -= v;
            }
        }
        if (degree + 1) % 2 == 1 {
            rhs = -rhs;
        }
        if lhs != rhs {
            identity_ok = false;
            violations.push(format!(
                "coboundary identity fails on `{name}`: {lhs} != {rhs}"
            ));
        }
    }

    Ok(CochainCompareReport {
        compatible,
        cochain,
        coboundary_identity: identity_ok,
        violations,
    })
}

/// Report of a simplex-validity check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SimplexCheckReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Verify that a generator assignment `v -> form` defines a CDGA morphism
/// into the forms on the `n`-simplex: degrees match and `σ(dv) = d(σv)`.
pub fn check_simplex(
    p: &CdgaPresentation,
    images: &BTreeMap<String, PolyForm>,
    n: usize,
) -> Result<SimplexCheckReport> {
    let mut violations = Vec::new();
    let mut by_index: Vec<PolyForm> = Vec::with_capacity(p.gens().len());
    for (_, g) in p.gens().iter() {
        let img = images
            .get(&g.name)
            .cloned()
            .unwrap_or_else(|| PolyForm::zero(n));
        if img.simplex_dim() != n {
            return Err(Error::Dimension(format!(
                "image of {} lives on the wrong simplex",
                g.name
            )));
        }
        if !img.is_zero() {
            match img.form_degree() {
                Some(d) if d == g.degree => {}
                got => violations.push(format!(
                    "image of {} has form degree {:?}, expected {}",
                    g.name, got, g.degree
                )),
            }
        }
        by_index.push(img);
    }
    let evaluate = |poly: &Poly| -> Result<PolyForm> {
        let mut out = PolyForm::zero(n);
        for (m, c) in poly.terms() {
            let mut acc = PolyForm::constant(n, c.clone());
            for &(g, e) in m.factors() {
                for _ in 0..e {
                    acc = acc.mul(&by_index[g])?;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    };
    if violations.is_empty() {
        for (i, g) in p.gens().iter() {
            let lhs = evaluate(p.differential(i))?;
            let rhs = by_index[i].d();
            if lhs != rhs {
                violations.push(format!(
                    "σ(d {}) = {} but d(σ {}) = {}",
                    g.name,
                    lhs.render(),
                    g.name,
                    rhs.render()
                ));
            }
        }
    }
    Ok(SimplexCheckReport {
        valid: violations.is_empty(),
        violations,
    })
}
