//! Free graded-commutative algebras on a finite generator set.
//!
//! Generators carry positive degrees; odd-degree generators square to
//! zero and anticommute, even-degree generators commute. Monomials are
//! kept in a canonical normal form (factor indices strictly ascending)
//! and every product is resolved to that form with the Koszul sign
//! counted by the odd-odd transpositions of the merge.

use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::budget;
use crate::error::{Error, Result};
use crate::linalg::{qone, qzero, Rational};

/// A single generator: name, positive degree, and the optional
/// construction stage it was introduced at (used by the degree-1 tower).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub stage: Option<usize>,
}

/// Ordered set of generators. The entry order is the canonical total
/// order on generators; every monomial and basis listing refers to it.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct GeneratorTable {
    entries: Vec<Generator>,
}

impl GeneratorTable {
    pub fn new() -> Self {
        GeneratorTable::default()
    }

    pub fn push(&mut self, name: &str, degree: usize) -> Result<usize> {
        self.push_staged(name, degree, None)
    }

    pub fn push_staged(&mut self, name: &str, degree: usize, stage: Option<usize>) -> Result<usize> {
        if degree == 0 {
            return Err(Error::Domain(format!(
                "generator `{name}` must have positive degree"
            )));
        }
        if self.index_of(name).is_some() {
            return Err(Error::Domain(format!("duplicate generator `{name}`")));
        }
        self.entries.push(Generator {
            name: name.to_string(),
            degree,
            stage,
        });
        Ok(self.entries.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.entries[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.entries[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.entries[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|g| g.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Generator)> {
        self.entries.iter().enumerate()
    }

    /// Indices of generators in the given degree, ascending.
    pub fn in_degree(&self, degree: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == degree).collect()
    }

    fn is_odd(&self, i: usize) -> bool {
        self.degree(i) % 2 == 1
    }
}

/// Normal-form monomial: factors `(generator index, exponent)` with
/// indices strictly ascending and exponents at least 1. Odd generators
/// never carry an exponent above 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial::default()
    }

    pub fn generator(i: usize) -> Self {
        Monomial {
            factors: vec![(i, 1)],
        }
    }

    /// Build from factors, validating the normal form against the table.
    pub fn new(table: &GeneratorTable, factors: Vec<(usize, u32)>) -> Result<Self> {
        let mut prev: Option<usize> = None;
        for &(i, e) in &factors {
            if i >= table.len() {
                return Err(Error::Domain(format!("generator index {i} out of range")));
            }
            if e == 0 {
                return Err(Error::Domain("zero exponent in monomial".into()));
            }
            if table.is_odd(i) && e > 1 {
                return Err(Error::Domain(format!(
                    "odd generator `{}` squared",
                    table.name(i)
                )));
            }
            if let Some(p) = prev {
                if i <= p {
                    return Err(Error::Domain("monomial factors not ascending".into()));
                }
            }
            prev = Some(i);
        }
        Ok(Monomial { factors })
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self, table: &GeneratorTable) -> usize {
        self.factors
            .iter()
            .map(|&(i, e)| table.degree(i) * e as usize)
            .sum()
    }

    pub fn word_length(&self) -> usize {
        self.factors.iter().map(|&(_, e)| e as usize).sum()
    }

    /// Merge two normal-form monomials, returning the normal form and the
    /// Koszul sign, or `None` when an odd generator gets squared.
    ///
    /// The sign counts, for every factor of `rhs` that moves left past a
    /// remaining factor of `lhs`, one transposition per odd-odd pair.
    pub fn mul(&self, rhs: &Monomial, table: &GeneratorTable) -> Option<(Monomial, i32)> {
        let mut out = Vec::with_capacity(self.factors.len() + rhs.factors.len());
        let mut sign = 1i32;
        // parity of the degree of the not-yet-consumed part of `self`
        let mut remaining: usize = self
            .factors
            .iter()
            .map(|&(i, e)| table.degree(i) * e as usize)
            .sum();
        let mut a = self.factors.iter().peekable();
        let mut b = rhs.factors.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ia, ea)), Some(&&(ib, eb))) => {
                    if ia < ib {
                        out.push((ia, ea));
                        remaining -= table.degree(ia) * ea as usize;
                        a.next();
                    } else if ia > ib {
                        // move rhs factor past everything left in `self`
                        let pb = table.degree(ib) * eb as usize;
                        if pb % 2 == 1 && remaining % 2 == 1 {
                            sign = -sign;
                        }
                        out.push((ib, eb));
                        b.next();
                    } else {
                        if table.is_odd(ia) {
                            return None; // odd square
                        }
                        // even generator: passing it costs no sign, but the
                        // rhs factor still crosses the rest of `self`
                        remaining -= table.degree(ia) * ea as usize;
                        if (table.degree(ib) * eb as usize) % 2 == 1 && remaining % 2 == 1 {
                            sign = -sign;
                        }
                        out.push((ia, ea + eb));
                        a.next();
                        b.next();
                    }
                }
                (Some(_), None) => {
                    out.extend(a.by_ref().cloned());
                }
                (None, Some(&&(ib, eb))) => {
                    out.push((ib, eb));
                    b.next();
                }
                (None, None) => break,
            }
            if a.peek().is_none() && b.peek().is_none() {
                break;
            }
        }
        Some((Monomial { factors: out }, sign))
    }

    /// Render against the table, without a coefficient.
    pub fn render(&self, table: &GeneratorTable) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (k, &(i, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                s.push('*');
            }
            s.push_str(table.name(i));
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }
}

/// Element of the free graded algebra: finite rational combination of
/// normal-form monomials over a shared table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(table: Arc<GeneratorTable>) -> Self {
        Poly {
            table,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: Arc<GeneratorTable>) -> Self {
        Poly::from_monomial(table, Monomial::unit(), qone())
    }

    pub fn generator(table: Arc<GeneratorTable>, i: usize) -> Self {
        Poly::from_monomial(table, Monomial::generator(i), qone())
    }

    pub fn from_monomial(table: Arc<GeneratorTable>, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { table, terms }
    }

    pub fn from_terms(
        table: Arc<GeneratorTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Poly::zero(table);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(qzero)
    }

    fn same_table(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.table, &other.table) || *self.table == *other.table {
            Ok(())
        } else {
            Err(Error::MixedTables)
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly {
            table: self.table.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.table.clone());
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        Poly {
            table: self.table.clone(),
            terms,
        }
    }

    /// Graded-commutative product.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_table(other)?;
        let mut out = Poly::zero(self.table.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb, &self.table) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    /// Total degree if every term agrees, `None` for 0 or mixed input.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|m| m.degree(&self.table));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Sub-sum of terms with word length exactly `k`.
    pub fn wordlength_component(&self, k: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.word_length() == k)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly {
            table: self.table.clone(),
            terms,
        }
    }

    /// Sub-sum of terms of total degree `n`.
    pub fn degree_component(&self, n: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree(&self.table) == n)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly {
            table: self.table.clone(),
            terms,
        }
    }

    /// Coordinates against an explicit monomial basis. Errors when a term
    /// falls outside the basis.
    pub fn coords(&self, basis: &[Monomial]) -> Result<Vec<Rational>> {
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = vec![qzero(); basis.len()];
        for (m, c) in &self.terms {
            match index.get(m) {
                Some(&i) => out[i] = c.clone(),
                None => {
                    return Err(Error::Domain(format!(
                        "monomial {} outside the requested basis",
                        m.render(&self.table)
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn from_coords(
        table: Arc<GeneratorTable>,
        basis: &[Monomial],
        coords: &[Rational],
    ) -> Poly {
        let terms = basis
            .iter()
            .zip(coords.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { table, terms }
    }

    /// Reinterpret over a table that extends this one by appending
    /// generators; indices stay valid because the old table is a prefix.
    pub fn lift_to(&self, bigger: Arc<GeneratorTable>) -> Result<Poly> {
        if bigger.len() < self.table.len() {
            return Err(Error::MixedTables);
        }
        for (i, g) in self.table.iter() {
            let h = bigger.get(i);
            if h.name != g.name || h.degree != g.degree {
                return Err(Error::MixedTables);
            }
        }
        Ok(Poly {
            table: bigger,
            terms: self.terms.clone(),
        })
    }

    /// Canonical rendering: terms joined by " + ", unit coefficients and
    /// `^1` elided, e.g. `v1*v2 + -1/2*v3^2`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.is_unit() {
                parts.push(c.to_string());
            } else if c.is_one() {
                parts.push(m.render(&self.table));
            } else {
                parts.push(format!("{}*{}", c, m.render(&self.table)));
            }
        }
        parts.join(" + ")
    }

    /// Parse a polynomial in the term grammar against `table`:
    /// `0` or terms joined by `+`, each
    /// `[<int>[/<int>]*]<name>[^<int>][*<name>[^<int>]]...`.
    pub fn parse(table: Arc<GeneratorTable>, text: &str) -> Result<Poly> {
        let src = text.trim();
        if src.is_empty() {
            return Err(Error::Domain("empty polynomial".into()));
        }
        if src == "0" {
            return Ok(Poly::zero(table));
        }
        let mut out = Poly::zero(table.clone());
        for raw in src.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::Domain(format!("empty term in `{src}`")));
            }
            let (m, c) = parse_term(&table, term)?;
            out.add_term(m, c);
        }
        Ok(out)
    }
}

fn parse_rational(tok: &str) -> Result<Rational> {
    tok.parse::<Rational>()
        .map_err(|_| Error::Domain(format!("malformed rational `{tok}`")))
}

fn parse_term(table: &GeneratorTable, term: &str) -> Result<(Monomial, Rational)> {
    let mut coeff = qone();
    let mut rest = term;
    // a leading bare minus negates the term
    if let Some(stripped) = rest.strip_prefix('-') {
        let s = stripped.trim_start();
        if s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            coeff = -coeff;
            rest = s;
        }
    }
    let chunks: Vec<&str> = rest.split('*').map(str::trim).collect();
    let mut factors: BTreeMap<usize, u32> = BTreeMap::new();
    for (k, chunk) in chunks.iter().enumerate() {
        if chunk.is_empty() {
            return Err(Error::Domain(format!("empty factor in `{term}`")));
        }
        let leading_numeric = chunk.starts_with(|c: char| c.is_ascii_digit() || c == '-');
        if leading_numeric {
            if k != 0 {
                return Err(Error::Domain(format!(
                    "coefficient must lead the term in `{term}`"
                )));
            }
            coeff = &coeff * parse_rational(chunk)?;
            continue;
        }
        let (name, exp) = match chunk.split_once('^') {
            Some((n, e)) => {
                let exp: u32 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("malformed exponent in `{chunk}`")))?;
                (n.trim(), exp)
            }
            None => (*chunk, 1),
        };
        if exp == 0 {
            return Err(Error::Domain(format!("zero exponent in `{chunk}`")));
        }
        let idx = table
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        *factors.entry(idx).or_insert(0) += exp;
    }
    // collapse via normal-form validation; odd squares are an error here
    // rather than silently zero, since written input should be in normal form
    let factor_list: Vec<(usize, u32)> = factors.into_iter().collect();
    let m = Monomial::new(table, factor_list)?;
    Ok((m, coeff))
}

/// All normal-form monomials of total degree `n` over `table`, optionally
/// word-length capped, in the canonical (factor-list lexicographic) order.
pub fn basis_of_degree(
    table: &GeneratorTable,
    n: usize,
    max_wordlength: Option<usize>,
) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    let cap = budget::max_cells();
    let mut stack: Vec<(usize, u32)> = Vec::new();
    enumerate(table, 0, n, max_wordlength, &mut stack, &mut out, cap)?;
    out.sort();
    Ok(out)
}

fn enumerate(
    table: &GeneratorTable,
    from: usize,
    remaining: usize,
    max_wl: Option<usize>,
    stack: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
    cap: usize,
) -> Result<()> {
    if remaining == 0 {
        if out.len() >= cap {
            return Err(Error::CellBudget { budget: cap });
        }
        out.push(Monomial {
            factors: stack.clone(),
        });
        return Ok(());
    }
    if from >= table.len() {
        return Ok(());
    }
    let wl_used: usize = stack.iter().map(|&(_, e)| e as usize).sum();
    for i in from..table.len() {
        let d = table.degree(i);
        if d > remaining {
            continue;
        }
        let max_exp = if table.is_odd(i) { 1 } else { (remaining / d) as u32 };
        for e in 1..=max_exp {
            if let Some(wl) = max_wl {
                if wl_used + e as usize > wl {
                    break;
                }
            }
            let used = d * e as usize;
            if used > remaining {
                break;
            }
            stack.push((i, e));
            enumerate(table, i + 1, remaining - used, max_wl, stack, out, cap)?;
            stack.pop();
        }
    }
    Ok(())
}

/// Total dimension of the algebra in degree `n`.
pub fn dim_of_degree(table: &GeneratorTable, n: usize) -> Result<usize> {
    Ok(basis_of_degree(table, n, None)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::qint;

    fn table(degrees: &[(&str, usize)]) -> Arc<GeneratorTable> {
        let mut t = GeneratorTable::new();
        for &(n, d) in degrees {
            t.push(n, d).unwrap();
        }
        Arc::new(t)
    }

    #[test]
    fn odd_generators_anticommute() {
        let t = table(&[("v1", 1), ("v2", 1)]);
        let v1 = Poly::generator(t.clone(), 0);
        let v2 = Poly::generator(t.clone(), 1);
        let ab = v1.mul(&v2).unwrap();
        let ba = v2.mul(&v1).unwrap();
        assert_eq!(ab.render(), "v1*v2");
        assert_eq!(ba.render(), "-1*v1*v2");
        assert_eq!(ba, ab.neg());
    }

    #[test]
    fn odd_square_is_zero() {
        let t = table(&[("v1", 1)]);
        let v1 = Poly::generator(t.clone(), 0);
        assert!(v1.mul(&v1).unwrap().is_zero());
    }

    #[test]
    fn even_generators_commute() {
        let t = table(&[("e2", 2), ("e3", 3)]);
        let e2 = Poly::generator(t.clone(), 0);
        let e3 = Poly::generator(t.clone(), 1);
        let sq = e2.mul(&e2).unwrap();
        assert_eq!(sq.render(), "e2^2");
        assert_eq!(e2.mul(&e3).unwrap(), e3.mul(&e2).unwrap());
    }

    #[test]
    fn mixed_tables_error() {
        let t1 = table(&[("v1", 1)]);
        let t2 = table(&[("w1", 1)]);
        let a = Poly::generator(t1, 0);
        let b = Poly::generator(t2, 0);
        assert!(matches!(a.mul(&b), Err(Error::MixedTables)));
    }

    #[test]
    fn basis_exterior_degree_two() {
        let t = table(&[("v1", 1), ("v2", 1), ("v3", 1)]);
        let basis = basis_of_degree(&t, 2, None).unwrap();
        let names: Vec<String> = basis.iter().map(|m| m.render(&t)).collect();
        assert_eq!(names, vec!["v1*v2", "v1*v3", "v2*v3"]);
    }

    #[test]
    fn basis_respects_odd_squares() {
        let t = table(&[("e2", 2), ("e3", 3)]);
        let basis = basis_of_degree(&t, 6, None).unwrap();
        let names: Vec<String> = basis.iter().map(|m| m.render(&t)).collect();
        assert_eq!(names, vec!["e2^3"]); // e3^2 = 0
    }

    #[test]
    fn basis_degree_zero_is_unit() {
        let t = table(&[("v1", 1)]);
        let basis = basis_of_degree(&t, 0, None).unwrap();
        assert_eq!(basis, vec![Monomial::unit()]);
    }

    #[test]
    fn wordlength_components_decompose() {
        let t = table(&[("v1", 1), ("v2", 1)]);
        let v1 = Poly::generator(t.clone(), 0);
        let v2 = Poly::generator(t.clone(), 1);
        let p = v1.add(&v1.mul(&v2).unwrap().scale(&qint(2))).unwrap();
        assert_eq!(p.wordlength_component(1).render(), "v1");
        assert_eq!(p.wordlength_component(2).render(), "2*v1*v2");
        let back = p.wordlength_component(1).add(&p.wordlength_component(2)).unwrap();
        assert_eq!(back, p);
        assert!(Poly::zero(t).wordlength_component(5).is_zero());
    }

    #[test]
    fn render_parse_round_trip() {
        let t = table(&[("v1", 1), ("v2", 1), ("v3", 2)]);
        let v1 = Poly::generator(t.clone(), 0);
        let v2 = Poly::generator(t.clone(), 1);
        let v3 = Poly::generator(t.clone(), 2);
        let p = v1
            .mul(&v2)
            .unwrap()
            .add(&v3.mul(&v3).unwrap().scale(&crate::linalg::qfrac(-1, 2)))
            .unwrap();
        assert_eq!(p.render(), "v1*v2 + -1/2*v3^2");
        let q = Poly::parse(t, &p.render()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_rejects_unknown_generator() {
        let t = table(&[("v1", 1)]);
        assert!(matches!(
            Poly::parse(t, "v9"),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn exterior_basis_dims_are_binomial() {
        let t = table(&[("a", 1), ("b", 1), ("c", 1), ("d", 1), ("e", 1)]);
        let binomial = [1usize, 5, 10, 10, 5, 1];
        for (k, &expected) in binomial.iter().enumerate() {
            assert_eq!(basis_of_degree(&t, k, None).unwrap().len(), expected);
        }
    }

    #[test]
    fn wordlength_cap_prunes_the_basis() {
        let t = table(&[("e2", 2), ("f2", 2)]);
        let full = basis_of_degree(&t, 4, None).unwrap();
        assert_eq!(full.len(), 3); // e2^2, e2 f2, f2^2
        let capped = basis_of_degree(&t, 4, Some(1)).unwrap();
        assert!(capped.is_empty());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_table() -> impl Strategy<Value = Arc<GeneratorTable>> {
            proptest::collection::vec(1usize..=3, 1..=4).prop_map(|degrees| {
                let mut t = GeneratorTable::new();
                for (i, d) in degrees.into_iter().enumerate() {
                    t.push(&format!("g{i}"), d).unwrap();
                }
                Arc::new(t)
            })
        }

        fn arb_monomial(table: Arc<GeneratorTable>) -> impl Strategy<Value = Monomial> {
            let len = table.len();
            proptest::collection::vec(0u32..=2, len).prop_map(move |exps| {
                let factors: Vec<(usize, u32)> = exps
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, e)| e > 0)
                    .map(|(i, e)| {
                        let e = if table.degree(i) % 2 == 1 { 1 } else { e };
                        (i, e)
                    })
                    .collect();
                Monomial::new(&table, factors).unwrap()
            })
        }

        proptest! {
            #[test]
            fn monomial_multiplication_is_associative(
                (table, a, b, c) in arb_table().prop_flat_map(|t| {
                    (
                        Just(t.clone()),
                        arb_monomial(t.clone()),
                        arb_monomial(t.clone()),
                        arb_monomial(t),
                    )
                })
            ) {
                let pa = Poly::from_monomial(table.clone(), a, qint(1));
                let pb = Poly::from_monomial(table.clone(), b, qint(1));
                let pc = Poly::from_monomial(table, c, qint(1));
                let left = pa.mul(&pb).unwrap().mul(&pc).unwrap();
                let right = pa.mul(&pb.mul(&pc).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn graded_commutativity(
                (table, a, b) in arb_table().prop_flat_map(|t| {
                    (Just(t.clone()), arb_monomial(t.clone()), arb_monomial(t))
                })
            ) {
                let da = a.degree(&table);
                let db = b.degree(&table);
                let pa = Poly::from_monomial(table.clone(), a, qint(1));
                let pb = Poly::from_monomial(table, b, qint(1));
                let ab = pa.mul(&pb).unwrap();
                let ba = pb.mul(&pa).unwrap();
                let expected = if da * db % 2 == 1 { ba.neg() } else { ba };
                prop_assert_eq!(ab, expected);
            }

            #[test]
            fn wordlength_components_sum_back(
                (table, a, b) in arb_table().prop_flat_map(|t| {
                    (Just(t.clone()), arb_monomial(t.clone()), arb_monomial(t))
                })
            ) {
                let mut p = Poly::from_monomial(table.clone(), a, qint(2));
                p.add_term(b, qint(-3));
                let mut sum = Poly::zero(table);
                for k in 0..=p.terms().map(|(m, _)| m.word_length()).max().unwrap_or(0) {
                    sum = sum.add(&p.wordlength_component(k)).unwrap();
                }
                prop_assert_eq!(sum, p);
            }
        }
    }
}
