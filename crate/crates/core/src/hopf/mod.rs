//! Truncation windows of connected graded bialgebras with a filtration.
//!
//! A [`ModuleWindow`] fixes the finite basis (degree and filtration value of
//! each element); a [`BialgebraInstance`] adds sparse product and coproduct
//! tables. Product lookups follow one rule: an explicit table entry wins; an
//! absent pair is zero when its degree sum and value sum both fit the window,
//! and [`Error::OutOfWindow`] otherwise.

mod checks;
mod pbw;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::CoordVec;

pub use checks::{check_action_spicy, CheckReport, Counterexample};
pub use pbw::{sigma_sign, PbwBlock, PbwReport};

pub type BasisIndex = usize;

/// Id reserved for the unit in degree 0.
pub const UNIT_ID: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub id: String,
    pub degree: u32,
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub max_degree: u32,
    pub max_value: BigRational,
}

impl Window {
    pub fn contains(&self, degree: u64, value: &BigRational) -> bool {
        degree <= u64::from(self.max_degree) && value <= &self.max_value
    }
}

fn add_to<K: Ord + Copy>(terms: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    let sum = match terms.remove(&key) {
        Some(old) => &old + &c,
        None => c,
    };
    if !sum.is_zero() {
        terms.insert(key, sum);
    }
}

/// Sparse vector in the window, keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<BasisIndex, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn monomial(index: BasisIndex, coefficient: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(index, coefficient);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisIndex, Scalar)>) -> Self {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    pub fn add_term(&mut self, index: BasisIndex, coefficient: Scalar) {
        add_to(&mut self.terms, index, coefficient);
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (BasisIndex, &Scalar)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn coefficient(&self, index: BasisIndex) -> Option<&Scalar> {
        self.terms.get(&index)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &Scalar) -> Element {
        Element::from_terms(self.terms().map(|(i, x)| (i, x * c)))
    }

    pub fn plus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, -c);
        }
        out
    }

    pub fn linear_combination<'a>(
        pairs: impl IntoIterator<Item = (&'a Scalar, &'a Element)>,
    ) -> Element {
        let mut out = Element::zero();
        for (c, e) in pairs {
            for (i, x) in e.terms() {
                out.add_term(i, c * x);
            }
        }
        out
    }
}

/// Sparse element of `V ⊗ V`, keyed by pairs of basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(BasisIndex, BasisIndex), Scalar>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn pure(left: BasisIndex, right: BasisIndex, c: Scalar) -> Self {
        let mut t = TensorElement::zero();
        t.add_term(left, right, c);
        t
    }

    pub fn add_term(&mut self, left: BasisIndex, right: BasisIndex, c: Scalar) {
        add_to(&mut self.terms, (left, right), c);
    }

    /// Adds `c * (a ⊗ b)` expanded bilinearly.
    pub fn add_product(&mut self, c: &Scalar, a: &Element, b: &Element) {
        for (i, x) in a.terms() {
            let cx = c * x;
            for (j, y) in b.terms() {
                self.add_term(i, j, &cx * y);
            }
        }
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = ((BasisIndex, BasisIndex), &Scalar)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coefficient(&self, left: BasisIndex, right: BasisIndex) -> Option<&Scalar> {
        self.terms.get(&(left, right))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn minus(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, -c);
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((a, b), x) in self.terms() {
            out.add_term(a, b, x * c);
        }
        out
    }
}

/// The basis of a finite window together with its grading and filtration.
#[derive(Debug, Clone)]
pub struct ModuleWindow {
    field: FieldSpec,
    basis: Vec<BasisElement>,
    window: Window,
    index: HashMap<String, BasisIndex>,
}

impl PartialEq for ModuleWindow {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis && self.window == other.window
    }
}

impl ModuleWindow {
    pub fn new(field: FieldSpec, basis: Vec<BasisElement>, window: Window) -> Result<Self> {
        if window.max_value.is_negative() {
            return Err(Error::schema("window max_value is negative"));
        }
        let mut index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if !valid_id(&b.id) {
                return Err(Error::schema(format!("invalid basis id {:?}", b.id)));
            }
            if index.insert(b.id.clone(), i).is_some() {
                return Err(Error::schema(format!("duplicate basis id `{}`", b.id)));
            }
            if b.value.is_negative() {
                return Err(Error::schema(format!("`{}` has a negative value", b.id)));
            }
            if !window.contains(u64::from(b.degree), &b.value) {
                return Err(Error::schema(format!("`{}` lies outside the window", b.id)));
            }
        }
        Ok(ModuleWindow {
            field,
            basis,
            window,
            index,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<BasisIndex> {
        self.index.get(id).copied()
    }

    pub fn lookup(&self, id: &str) -> Result<BasisIndex> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownBasis(id.chars().take(64).collect()))
    }

    pub fn id(&self, i: BasisIndex) -> &str {
        &self.basis[i].id
    }

    pub fn degree(&self, i: BasisIndex) -> u32 {
        self.basis[i].degree
    }

    pub fn basis_value(&self, i: BasisIndex) -> &BigRational {
        &self.basis[i].value
    }

    pub fn basis_vector(&self, i: BasisIndex) -> Element {
        Element::monomial(i, self.field.one())
    }

    /// Shorthand for the basis vector with the given id.
    pub fn vector(&self, id: &str) -> Result<Element> {
        Ok(self.basis_vector(self.lookup(id)?))
    }

    /// The filtration value: the largest basis value in the support, 0 for
    /// the zero element.
    pub fn value(&self, e: &Element) -> BigRational {
        e.terms()
            .map(|(i, _)| &self.basis[i].value)
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn tensor_value(&self, t: &TensorElement) -> BigRational {
        t.terms()
            .map(|((a, b), _)| &self.basis[a].value + &self.basis[b].value)
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, e: &Element) -> Result<u32> {
        let mut degrees = e.terms().map(|(i, _)| self.basis[i].degree);
        let first = degrees.next().ok_or(Error::ZeroVector)?;
        if degrees.all(|d| d == first) {
            Ok(first)
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn coords(&self, e: &Element) -> CoordVec {
        CoordVec::from_entries(self.len(), e.terms().map(|(i, c)| (i, c.clone())))
            .expect("element indices lie in the basis")
    }

    pub fn element_from_coords(&self, v: &CoordVec) -> Element {
        Element::from_terms(v.entries().map(|(i, c)| (i, c.clone())))
    }

    /// Renders `2*x1 - x2` style text; the zero element renders as `0`.
    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in e.terms().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if magnitude != "1" {
                let _ = write!(out, "{magnitude}*");
            }
            out.push_str(self.id(i));
        }
        out
    }

    pub fn format_tensor(&self, t: &TensorElement) -> String {
        if t.is_zero() {
            return "0".to_string();
        }
        t.terms()
            .map(|((a, b), c)| format!("{c}*{}⊗{}", self.id(a), self.id(b)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Basis ids are non-empty and avoid the characters used by the element
/// expression syntax.
pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 256
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | '.' | '{' | '}' | ','))
}

/// A graded connected bialgebra truncated to a window.
#[derive(Debug, Clone, PartialEq)]
pub struct BialgebraInstance {
    module: ModuleWindow,
    unit: BasisIndex,
    product: BTreeMap<(BasisIndex, BasisIndex), Element>,
    coproduct: Vec<TensorElement>,
}

impl BialgebraInstance {
    /// Validates table shape: a degree-0 unit named `1` with value 0, indices
    /// in range, degree preservation, and a coproduct entry for every basis
    /// element. Algebraic axioms are left to the checkers.
    pub fn new(
        module: ModuleWindow,
        product: BTreeMap<(BasisIndex, BasisIndex), Element>,
        coproduct: Vec<TensorElement>,
    ) -> Result<Self> {
        let unit = module
            .index_of(UNIT_ID)
            .ok_or_else(|| Error::schema("basis has no unit `1`"))?;
        if module.degree(unit) != 0 || !module.basis_value(unit).is_zero() {
            return Err(Error::schema("unit `1` must have degree 0 and value 0"));
        }
        let n = module.len();
        if coproduct.len() != n {
            return Err(Error::schema(format!(
                "coproduct table has {} entries for {} basis elements",
                coproduct.len(),
                n
            )));
        }
        for (&(a, b), e) in &product {
            if a >= n || b >= n {
                return Err(Error::schema("product entry index out of range"));
            }
            let degree = u64::from(module.degree(a)) + u64::from(module.degree(b));
            for (i, _) in e.terms() {
                if i >= n || u64::from(module.degree(i)) != degree {
                    return Err(Error::schema(format!(
                        "product {}·{} does not preserve degree",
                        module.id(a),
                        module.id(b)
                    )));
                }
            }
        }
        for (x, t) in coproduct.iter().enumerate() {
            for ((a, b), _) in t.terms() {
                if a >= n
                    || b >= n
                    || u64::from(module.degree(a)) + u64::from(module.degree(b))
                        != u64::from(module.degree(x))
                {
                    return Err(Error::schema(format!(
                        "coproduct of `{}` does not preserve degree",
                        module.id(x)
                    )));
                }
            }
        }
        Ok(BialgebraInstance {
            module,
            unit,
            product,
            coproduct,
        })
    }

    pub fn module(&self) -> &ModuleWindow {
        &self.module
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field
    }

    pub fn unit_index(&self) -> BasisIndex {
        self.unit
    }

    pub fn unit(&self) -> Element {
        self.module.basis_vector(self.unit)
    }

    pub fn product_table(&self) -> &BTreeMap<(BasisIndex, BasisIndex), Element> {
        &self.product
    }

    pub fn coproduct_table(&self) -> &[TensorElement] {
        &self.coproduct
    }

    /// Product of two basis vectors under the window rule.
    pub fn basis_product(&self, a: BasisIndex, b: BasisIndex) -> Result<Element> {
        if let Some(e) = self.product.get(&(a, b)) {
            return Ok(e.clone());
        }
        if a == self.unit {
            return Ok(self.module.basis_vector(b));
        }
        if b == self.unit {
            return Ok(self.module.basis_vector(a));
        }
        let degree = u64::from(self.module.degree(a)) + u64::from(self.module.degree(b));
        let value = self.module.basis_value(a) + self.module.basis_value(b);
        if self.module.window.contains(degree, &value) {
            Ok(Element::zero())
        } else {
            Err(Error::OutOfWindow { degree, value })
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let mut out = Element::zero();
        for (i, x) in a.terms() {
            for (j, y) in b.terms() {
                let p = self.basis_product(i, j)?;
                let xy = x * y;
                for (k, z) in p.terms() {
                    out.add_term(k, &xy * z);
                }
            }
        }
        Ok(out)
    }

    /// Product on `V ⊗ V`: `(v⊗w)(x⊗y) = (-1)^{deg w · deg x} vx ⊗ wy`.
    pub fn tensor_multiply(&self, s: &TensorElement, t: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for ((v, w), c) in s.terms() {
            for ((x, y), d) in t.terms() {
                let odd = (self.module.degree(w) % 2 == 1) && (self.module.degree(x) % 2 == 1);
                let vx = self.basis_product(v, x)?;
                let wy = self.basis_product(w, y)?;
                let mut coefficient = c * d;
                if odd {
                    coefficient = -coefficient;
                }
                out.add_product(&coefficient, &vx, &wy);
            }
        }
        Ok(out)
    }

    pub fn coproduct(&self, a: &Element) -> TensorElement {
        let mut out = TensorElement::zero();
        for (i, c) in a.terms() {
            for ((l, r), x) in self.coproduct[i].terms() {
                out.add_term(l, r, c * x);
            }
        }
        out
    }

    /// The map `A(v) = Δv − 1⊗v − v⊗1` on homogeneous elements of positive
    /// degree.
    pub fn reduced_coproduct(&self, v: &Element) -> Result<TensorElement> {
        if self.module.homogeneous_degree(v)? == 0 {
            return Err(Error::DegreeZero);
        }
        let mut out = self.coproduct(v);
        for (i, c) in v.terms() {
            out.add_term(self.unit, i, -c);
            out.add_term(i, self.unit, -c);
        }
        Ok(out)
    }

    pub fn is_primitive(&self, v: &Element) -> Result<bool> {
        Ok(self.reduced_coproduct(v)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_exterior_model, build_polynomial_model, ModelSpec};

    fn exterior(field: FieldSpec, n: usize) -> BialgebraInstance {
        build_exterior_model(&ModelSpec::exterior(n, field)).unwrap().0
    }

    fn polynomial(field: FieldSpec, n: usize, max_degree: u32) -> BialgebraInstance {
        let mut spec = ModelSpec::polynomial(n, 2, field);
        spec.window.max_degree = max_degree;
        spec.window.max_value = BigRational::from_integer((n * max_degree as usize).into());
        build_polynomial_model(&spec).unwrap().0
    }

    #[test]
    fn unit_is_two_sided() {
        let inst = exterior(FieldSpec::Rationals, 3);
        for i in 0..inst.module().len() {
            let b = inst.module().basis_vector(i);
            assert_eq!(inst.multiply(&inst.unit(), &b).unwrap(), b);
            assert_eq!(inst.multiply(&b, &inst.unit()).unwrap(), b);
        }
    }

    #[test]
    fn exterior_signs() {
        let inst = exterior(FieldSpec::Rationals, 2);
        let m = inst.module();
        let (x1, x2, x12) = (
            m.vector("x1").unwrap(),
            m.vector("x2").unwrap(),
            m.vector("x1x2").unwrap(),
        );
        assert_eq!(inst.multiply(&x1, &x2).unwrap(), x12);
        assert_eq!(
            inst.multiply(&x2, &x1).unwrap(),
            x12.scaled(&FieldSpec::Rationals.from_i64(-1))
        );
        assert!(inst.multiply(&x1, &x1).unwrap().is_zero());
    }

    #[test]
    fn tensor_multiply_examples() {
        let f = FieldSpec::Rationals;
        let inst = exterior(f, 2);
        let m = inst.module();
        let (one, x1, x2) = (
            inst.unit_index(),
            m.lookup("x1").unwrap(),
            m.lookup("x2").unwrap(),
        );
        let unit = TensorElement::pure(one, one, f.one());
        let ab = TensorElement::pure(x1, x2, f.one());
        assert_eq!(inst.tensor_multiply(&unit, &ab).unwrap(), ab);

        let left = TensorElement::pure(x1, one, f.one());
        let right = TensorElement::pure(one, x2, f.one());
        assert_eq!(
            inst.tensor_multiply(&left, &right).unwrap(),
            TensorElement::pure(x1, x2, f.one())
        );

        let left = TensorElement::pure(one, x1, f.one());
        let right = TensorElement::pure(x2, one, f.one());
        assert_eq!(
            inst.tensor_multiply(&left, &right).unwrap(),
            TensorElement::pure(x2, x1, f.from_i64(-1))
        );
    }

    #[test]
    fn coproduct_examples() {
        let f = FieldSpec::Rationals;
        let inst = polynomial(f, 1, 4);
        let m = inst.module();
        let (one, x, xx) = (
            inst.unit_index(),
            m.lookup("x1").unwrap(),
            m.lookup("x1^2").unwrap(),
        );
        assert_eq!(
            inst.coproduct(&inst.unit()),
            TensorElement::pure(one, one, f.one())
        );
        let mut expected = TensorElement::pure(one, x, f.one());
        expected.add_term(x, one, f.one());
        assert_eq!(inst.coproduct(&m.basis_vector(x)), expected);

        let mut expected = TensorElement::pure(xx, one, f.one());
        expected.add_term(x, x, f.from_i64(2));
        expected.add_term(one, xx, f.one());
        assert_eq!(inst.coproduct(&m.basis_vector(xx)), expected);
    }

    #[test]
    fn reduced_coproduct_examples() {
        let q = FieldSpec::Rationals;
        let inst = polynomial(q, 1, 4);
        let m = inst.module();
        let x = m.lookup("x1").unwrap();
        assert!(inst.reduced_coproduct(&m.basis_vector(x)).unwrap().is_zero());
        assert_eq!(
            inst.reduced_coproduct(&m.vector("x1^2").unwrap()).unwrap(),
            TensorElement::pure(x, x, q.from_i64(2))
        );

        let f2 = FieldSpec::Prime(2);
        let inst = polynomial(f2, 1, 4);
        assert!(inst
            .is_primitive(&inst.module().vector("x1^2").unwrap())
            .unwrap());
    }

    #[test]
    fn is_primitive_examples() {
        let f = FieldSpec::Rationals;
        let inst = exterior(f, 3);
        let m = inst.module();
        for id in ["x1", "x2", "x3"] {
            assert!(inst.is_primitive(&m.vector(id).unwrap()).unwrap());
        }
        assert!(!inst.is_primitive(&m.vector("x1x2").unwrap()).unwrap());
        assert_eq!(
            inst.is_primitive(&Element::zero()),
            Err(Error::ZeroVector)
        );
        assert_eq!(inst.is_primitive(&inst.unit()), Err(Error::DegreeZero));
        let mixed = m.vector("x1").unwrap().plus(&m.vector("x1x2").unwrap());
        assert_eq!(inst.is_primitive(&mixed), Err(Error::NotHomogeneous));

        // graded-commutative with even generators: x1x2 - x2x1 vanishes
        let inst = polynomial(f, 2, 4);
        let m = inst.module();
        let (a, b) = (m.vector("x1").unwrap(), m.vector("x2").unwrap());
        let commutator = inst
            .multiply(&a, &b)
            .unwrap()
            .minus(&inst.multiply(&b, &a).unwrap());
        assert_eq!(inst.is_primitive(&commutator), Err(Error::ZeroVector));
    }

    #[test]
    fn multiply_reports_window_overflow() {
        let inst = polynomial(FieldSpec::Rationals, 1, 4);
        let xx = inst.module().vector("x1^2").unwrap();
        match inst.multiply(&xx, &xx) {
            Err(Error::OutOfWindow { degree, .. }) => assert_eq!(degree, 8),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn format_element_text() {
        let f = FieldSpec::Rationals;
        let inst = exterior(f, 2);
        let m = inst.module();
        let e = Element::from_terms([
            (m.lookup("x1").unwrap(), f.from_i64(-1)),
            (m.lookup("x2").unwrap(), f.parse_scalar("3/2").unwrap()),
        ]);
        assert_eq!(m.format_element(&e), "-x1 + 3/2*x2");
        assert_eq!(m.format_element(&Element::zero()), "0");
    }
}
