//! Groups presented by generator operators on a window: words, length
//! functions, orbit spans, the orbit dimension `d_v(g)`, healthy-vector
//! search, and the dimension bound for orbits of an extension `⟨H, g⟩`.
//!
//! A word acts by applying its letters in the order they are written, so
//! `act("g h", v)` applies `g` first. Sickness is only ever certified up to
//! the probe bound; [`OrbitVerdict`] keeps that caveat in the type.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::hopf::{BasisIndex, Element, ModuleWindow};
use crate::linalg::{Insertion, SpanBasis};

const MAX_WORD_LETTERS: usize = 1 << 16;

/// A freely reduced word in named generators; each letter has exponent ±1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupWord {
    letters: Vec<(String, i8)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn generator(name: &str) -> Self {
        GroupWord {
            letters: vec![(name.to_string(), 1)],
        }
    }

    /// Builds and freely reduces a word. Exponents other than ±1 are
    /// rejected.
    pub fn from_letters(letters: impl IntoIterator<Item = (String, i8)>) -> Result<Self> {
        let mut w = GroupWord::identity();
        for (g, e) in letters {
            if e != 1 && e != -1 {
                return Err(Error::schema(format!("letter exponent {e} is not ±1")));
            }
            w.push(g, e);
        }
        Ok(w)
    }

    fn push(&mut self, g: String, e: i8) {
        match self.letters.last() {
            Some((h, f)) if *h == g && *f == -e => {
                self.letters.pop();
            }
            _ => self.letters.push((g, e)),
        }
    }

    pub fn letters(&self) -> &[(String, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|(g, e)| (g.clone(), -e))
                .collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut w = self.clone();
        for (g, e) in &other.letters {
            w.push(g.clone(), *e);
        }
        w
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Parses `e`, `t`, `t^-1`, `t^3*s^-1` and similar. Factors are joined by
    /// `*` or whitespace.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "e" || trimmed == "1" {
            return Ok(GroupWord::identity());
        }
        let mut word = GroupWord::identity();
        let mut offset = text.len() - text.trim_start().len();
        for factor in trimmed.split(|c: char| c == '*' || c.is_whitespace()) {
            let here = offset;
            offset += factor.len() + 1;
            if factor.is_empty() {
                continue;
            }
            let err = |reason: &str| Error::Parse {
                offset: here,
                reason: reason.to_string(),
            };
            let (name, exponent) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| err("exponent must be an integer"))?;
                    (n, e)
                }
                None => (factor, 1),
            };
            if !valid_generator_name(name) {
                return Err(err("invalid generator name"));
            }
            if word.len() as u64 + exponent.unsigned_abs() > MAX_WORD_LETTERS as u64 {
                return Err(err("word too long"));
            }
            let e = if exponent < 0 { -1 } else { 1 };
            for _ in 0..exponent.unsigned_abs() {
                word.push(name.to_string(), e);
            }
        }
        Ok(word)
    }
}

pub fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && name.len() <= 64
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "e"
}

impl fmt::Display for GroupWord {
    /// Run-length form, e.g. `t^2*s^-1`; the identity prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let mut runs: Vec<(&str, i64)> = Vec::new();
        for (g, e) in &self.letters {
            match runs.last_mut() {
                Some((h, k)) if *h == g.as_str() && (*k > 0) == (*e > 0) => *k += i64::from(*e),
                _ => runs.push((g, i64::from(*e))),
            }
        }
        let parts: Vec<String> = runs
            .iter()
            .map(|(g, k)| if *k == 1 { g.to_string() } else { format!("{g}^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Weighted word length. Symmetry and subadditivity hold because the weight
/// is summed over the letters of the freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LengthFunction {
    weights: BTreeMap<String, BigRational>,
}

impl LengthFunction {
    pub fn new(weights: BTreeMap<String, BigRational>) -> Result<Self> {
        for (g, w) in &weights {
            if !w.is_positive() {
                return Err(Error::schema(format!("weight of `{g}` must be positive")));
            }
        }
        Ok(LengthFunction { weights })
    }

    pub fn weights(&self) -> &BTreeMap<String, BigRational> {
        &self.weights
    }

    pub fn weight(&self, generator: &str) -> Option<&BigRational> {
        self.weights.get(generator)
    }

    pub fn length(&self, w: &GroupWord) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (g, _) in w.letters() {
            total += self
                .weights
                .get(g)
                .ok_or_else(|| Error::schema(format!("no weight for generator `{g}`")))?;
        }
        Ok(total)
    }
}

/// A generator operator and its inverse, each a partial basis-indexed map.
/// Basis vectors missing from a map lie outside that operator's domain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Operator {
    forward: BTreeMap<BasisIndex, Element>,
    inverse: BTreeMap<BasisIndex, Element>,
}

impl Operator {
    pub fn new(forward: BTreeMap<BasisIndex, Element>, inverse: BTreeMap<BasisIndex, Element>) -> Self {
        Operator { forward, inverse }
    }

    pub fn forward(&self) -> &BTreeMap<BasisIndex, Element> {
        &self.forward
    }

    pub fn inverse(&self) -> &BTreeMap<BasisIndex, Element> {
        &self.inverse
    }

    fn map(&self, exponent: i8) -> &BTreeMap<BasisIndex, Element> {
        if exponent > 0 {
            &self.forward
        } else {
            &self.inverse
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupActionWindow {
    field: FieldSpec,
    generators: BTreeMap<String, Operator>,
    lengths: LengthFunction,
}

impl GroupActionWindow {
    pub fn new(
        field: FieldSpec,
        generators: BTreeMap<String, Operator>,
        lengths: LengthFunction,
    ) -> Result<Self> {
        for g in generators.keys() {
            if !valid_generator_name(g) {
                return Err(Error::schema(format!("invalid generator name {g:?}")));
            }
            if lengths.weight(g).is_none() {
                return Err(Error::schema(format!("generator `{g}` has no length weight")));
            }
        }
        if let Some(extra) = lengths.weights.keys().find(|g| !generators.contains_key(*g)) {
            return Err(Error::schema(format!("weight given for unknown generator `{extra}`")));
        }
        Ok(GroupActionWindow {
            field,
            generators,
            lengths,
        })
    }

    /// The trivial group: no generators.
    pub fn trivial(field: FieldSpec) -> Self {
        GroupActionWindow {
            field,
            generators: BTreeMap::new(),
            lengths: LengthFunction::default(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &BTreeMap<String, Operator> {
        &self.generators
    }

    pub fn lengths(&self) -> &LengthFunction {
        &self.lengths
    }

    /// Checks that operators are degree preserving and that each operator and
    /// its inverse compose to the identity wherever both are defined.
    pub fn validate(&self, module: &ModuleWindow) -> Result<()> {
        let n = module.len();
        for (g, op) in &self.generators {
            for map in [&op.forward, &op.inverse] {
                for (&b, image) in map {
                    if b >= n || image.terms().any(|(i, _)| i >= n) {
                        return Err(Error::schema(format!("operator `{g}` index out of range")));
                    }
                    if image.terms().any(|(i, _)| module.degree(i) != module.degree(b)) {
                        return Err(Error::schema(format!(
                            "operator `{g}` does not preserve the degree of `{}`",
                            module.id(b)
                        )));
                    }
                }
            }
            for (there, back) in [(&op.forward, &op.inverse), (&op.inverse, &op.forward)] {
                for (&b, image) in there {
                    if let Ok(round_trip) = apply_map(back, image) {
                        if round_trip != module.basis_vector(b) {
                            return Err(Error::schema(format!(
                                "operator `{g}` and its inverse do not compose to the identity on `{}`",
                                module.id(b)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn act(&self, module: &ModuleWindow, w: &GroupWord, v: &Element) -> Result<Element> {
        let mut current = v.clone();
        for (k, (g, e)) in w.letters().iter().enumerate() {
            let op = self
                .generators
                .get(g)
                .ok_or_else(|| Error::schema(format!("unknown generator `{g}`")))?;
            current = apply_map(op.map(*e), &current).map_err(|b| Error::ActionOutOfWindow {
                letter: k,
                generator: if *e > 0 { g.clone() } else { format!("{g}^-1") },
                basis: module.id(b).to_string(),
            })?;
        }
        Ok(current)
    }
}

fn apply_map(map: &BTreeMap<BasisIndex, Element>, v: &Element) -> std::result::Result<Element, BasisIndex> {
    let mut out = Element::zero();
    for (i, c) in v.terms() {
        let image = map.get(&i).ok_or(i)?;
        for (j, x) in image.terms() {
            out.add_term(j, c * x);
        }
    }
    Ok(out)
}

/// Finite formal combination of group words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupWord, Scalar>,
}

impl GroupRingElement {
    pub fn from_terms(terms: impl IntoIterator<Item = (GroupWord, Scalar)>) -> Self {
        let mut out = GroupRingElement::default();
        for (w, c) in terms {
            let sum = match out.terms.remove(&w) {
                Some(old) => &old + &c,
                None => c,
            };
            if !sum.is_zero() {
                out.terms.insert(w, sum);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupWord, &Scalar)> {
        self.terms.iter()
    }
}

/// Smallest `r` with `ξ ∈ FG^r`: the largest length in the support, 0 for
/// the zero element.
pub fn group_ring_value(xi: &GroupRingElement, lengths: &LengthFunction) -> Result<BigRational> {
    let mut best = BigRational::zero();
    for (w, _) in xi.terms() {
        let l = lengths.length(w)?;
        if l > best {
            best = l;
        }
    }
    Ok(best)
}

/// Result of probing the cyclic orbit `g^i v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitDim {
    /// `g^d v = Σ_{i<d} a_i g^i v` for the first such `d`; `recurrence`
    /// holds `a_0..a_{d-1}`.
    Finite { d: usize, recurrence: Vec<Scalar> },
    /// `v, gv, …, g^bound v` are independent; `ranks` is `1..=bound+1`.
    Independent { ranks: Vec<usize> },
}

pub fn orbit_dim(
    module: &ModuleWindow,
    action: &GroupActionWindow,
    v: &Element,
    g: &GroupWord,
    bound: usize,
) -> Result<OrbitDim> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut span = SpanBasis::with_tracking(module.field(), module.len());
    let mut ranks = Vec::with_capacity(bound + 1);
    let mut current = v.clone();
    for i in 0..=bound {
        if i > 0 {
            current = action.act(module, g, &current)?;
        }
        let coords = module.coords(&current);
        match span.insert(&coords)? {
            Insertion::Added { rank } => ranks.push(rank),
            Insertion::InSpan { .. } => {
                let recurrence = span
                    .express(&coords)?
                    .expect("vector reported in span");
                return Ok(OrbitDim::Finite { d: i, recurrence });
            }
        }
    }
    Ok(OrbitDim::Independent { ranks })
}

/// Span of all `w v` for words `w` of length at most `bound` in the listed
/// elements and their inverses, built breadth first in list order. Only
/// vectors that enlarged the span are expanded further, which loses nothing
/// by linearity.
pub fn orbit_span_subgroup(
    module: &ModuleWindow,
    action: &GroupActionWindow,
    v: &Element,
    subgroup: &[GroupWord],
    bound: usize,
) -> Result<SpanBasis> {
    let mut span = SpanBasis::new(module.field(), module.len());
    if v.is_zero() {
        return Ok(span);
    }
    span.insert(&module.coords(v))?;
    let moves: Vec<GroupWord> = subgroup
        .iter()
        .flat_map(|h| [h.clone(), h.inverse()])
        .collect();
    let mut frontier = vec![v.clone()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for u in &frontier {
            for h in &moves {
                let image = action.act(module, h, u)?;
                if let Insertion::Added { .. } = span.insert(&module.coords(&image))? {
                    next.push(image);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(span)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// `g^d v` fell into the span of its predecessors.
    Sick { d: usize },
    /// The probe left the window before reaching a verdict.
    Exhausted { reason: String },
    ZeroVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    /// Index into the candidate vector list.
    pub vector: usize,
    /// Index into the candidate word list.
    pub word: usize,
    pub outcome: ProbeOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitVerdict {
    /// `g^i v` independent for `0 <= i <= bound`; ranks strictly increase.
    HealthyWitness {
        vector: Element,
        word: GroupWord,
        ranks: Vec<usize>,
    },
    /// Every completed probe found a finite `d`. This is a statement about
    /// the probed window only.
    SickUpToWindow { bound: usize, probes: Vec<Probe> },
    /// Every probe left the window.
    WindowExhausted { bound: usize, probes: Vec<Probe> },
}

/// Scans vectors (outer) and words (inner) in the given order and returns the
/// first healthy pair.
pub fn find_healthy(
    module: &ModuleWindow,
    action: &GroupActionWindow,
    candidates_v: &[Element],
    candidates_g: &[GroupWord],
    bound: usize,
) -> OrbitVerdict {
    let mut probes = Vec::new();
    for (vi, v) in candidates_v.iter().enumerate() {
        for (wi, g) in candidates_g.iter().enumerate() {
            let outcome = match orbit_dim(module, action, v, g, bound) {
                Ok(OrbitDim::Independent { ranks }) => {
                    return OrbitVerdict::HealthyWitness {
                        vector: v.clone(),
                        word: g.clone(),
                        ranks,
                    }
                }
                Ok(OrbitDim::Finite { d, .. }) => ProbeOutcome::Sick { d },
                Err(Error::ZeroVector) => ProbeOutcome::ZeroVector,
                Err(e) => ProbeOutcome::Exhausted {
                    reason: e.to_string(),
                },
            };
            probes.push(Probe {
                vector: vi,
                word: wi,
                outcome,
            });
        }
    }
    let all_exhausted = !probes.is_empty()
        && probes
            .iter()
            .all(|p| matches!(p.outcome, ProbeOutcome::Exhausted { .. }));
    if all_exhausted {
        OrbitVerdict::WindowExhausted { bound, probes }
    } else {
        OrbitVerdict::SickUpToWindow { bound, probes }
    }
}

/// Default search grid in one degree: basis vectors of that degree, then
/// pairwise sums; words of one or two letters ordered by weighted length and
/// then by their text.
pub fn default_candidates(
    module: &ModuleWindow,
    action: &GroupActionWindow,
    degree: u32,
) -> (Vec<Element>, Vec<GroupWord>) {
    let block: Vec<BasisIndex> = (0..module.len())
        .filter(|&i| module.degree(i) == degree)
        .collect();
    let mut vectors: Vec<Element> = block.iter().map(|&i| module.basis_vector(i)).collect();
    for (k, &a) in block.iter().enumerate() {
        for &b in &block[k + 1..] {
            vectors.push(module.basis_vector(a).plus(&module.basis_vector(b)));
        }
    }

    let letters: Vec<GroupWord> = action
        .generators()
        .keys()
        .flat_map(|g| {
            let w = GroupWord::generator(g);
            [w.inverse(), w]
        })
        .collect();
    let mut words: Vec<GroupWord> = letters.clone();
    for a in &letters {
        for b in &letters {
            let w = a.concat(b);
            if w.len() == 2 {
                words.push(w);
            }
        }
    }
    let mut keyed: Vec<(BigRational, String, GroupWord)> = words
        .into_iter()
        .map(|w| {
            let l = action.lengths().length(&w).unwrap_or_else(|_| BigRational::zero());
            (l, w.to_string(), w)
        })
        .collect();
    keyed.sort();
    keyed.dedup_by(|a, b| a.2 == b.2);
    (vectors, keyed.into_iter().map(|(_, _, w)| w).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prep2Report {
    /// `d_v(g)`.
    pub d: usize,
    /// `dim W_v^H`.
    pub dim_h: usize,
    /// `dim W_v^{⟨H, g⟩}` within the probe bound.
    pub dim_g: usize,
}

impl Prep2Report {
    pub fn holds(&self) -> bool {
        self.dim_g <= self.d * self.dim_h
    }
}

/// Computes `d_v(g)`, `dim W_v^H` and `dim W_v^{⟨H,g⟩}` and reports whether
/// `dim W_v^{⟨H,g⟩} <= d_v(g) · dim W_v^H`. Requires `v` to be sick for `g`
/// within `bound`.
pub fn check_prep2_bound(
    module: &ModuleWindow,
    action: &GroupActionWindow,
    v: &Element,
    g: &GroupWord,
    subgroup: &[GroupWord],
    bound: usize,
) -> Result<Prep2Report> {
    let d = match orbit_dim(module, action, v, g, bound)? {
        OrbitDim::Finite { d, .. } => d,
        OrbitDim::Independent { .. } => return Err(Error::OrbitNotFinite),
    };
    let dim_h = orbit_span_subgroup(module, action, v, subgroup, bound)?.rank();
    let mut extended = subgroup.to_vec();
    extended.push(g.clone());
    let dim_g = orbit_span_subgroup(module, action, v, &extended, bound)?.rank();
    Ok(Prep2Report { d, dim_h, dim_g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_exterior_model, build_swap_model, build_telescope_model, ModelSpec};

    fn q(n: i64) -> Scalar {
        FieldSpec::Rationals.from_i64(n)
    }

    #[test]
    fn word_parsing_and_reduction() {
        let w = GroupWord::parse("t^2 * s^-1 s t").unwrap();
        assert_eq!(w.to_string(), "t^3");
        assert_eq!(GroupWord::parse("e").unwrap(), GroupWord::identity());
        assert_eq!(GroupWord::parse("t t^-1").unwrap(), GroupWord::identity());
        assert_eq!(GroupWord::parse("t^-2").unwrap().to_string(), "t^-2");
        assert!(GroupWord::parse("t^x").is_err());
        assert!(GroupWord::parse("3t").is_err());
        assert!(GroupWord::parse("t^99999999").is_err());
        let w = GroupWord::parse("a*b^-1").unwrap();
        assert_eq!(w.concat(&w.inverse()), GroupWord::identity());
    }

    #[test]
    fn group_ring_value_examples() {
        let lengths = LengthFunction::new(BTreeMap::from([(
            "t".to_string(),
            BigRational::from_integer(1.into()),
        )]))
        .unwrap();
        let one = GroupRingElement::from_terms([(GroupWord::identity(), q(1))]);
        assert_eq!(group_ring_value(&one, &lengths).unwrap(), BigRational::zero());
        let xi = GroupRingElement::from_terms([(GroupWord::parse("t^2").unwrap(), q(3))]);
        assert_eq!(
            group_ring_value(&xi, &lengths).unwrap(),
            BigRational::from_integer(2.into())
        );

        let half = LengthFunction::new(BTreeMap::from([(
            "t".to_string(),
            BigRational::new(1.into(), 2.into()),
        )]))
        .unwrap();
        let xi = GroupRingElement::from_terms([
            (GroupWord::parse("t").unwrap(), q(1)),
            (GroupWord::parse("t^-3").unwrap(), q(1)),
        ]);
        assert_eq!(
            group_ring_value(&xi, &half).unwrap(),
            BigRational::new(3.into(), 2.into())
        );
        assert_eq!(
            group_ring_value(&GroupRingElement::default(), &half).unwrap(),
            BigRational::zero()
        );
    }

    #[test]
    fn act_examples() {
        let mut spec = ModelSpec::exterior(4, FieldSpec::Rationals);
        spec.window.max_degree = 1;
        let (inst, action) = build_exterior_model(&spec).unwrap();
        let m = inst.module();
        let x1 = m.vector("x1").unwrap();
        assert_eq!(action.act(m, &GroupWord::identity(), &x1).unwrap(), x1);
        let t = GroupWord::generator("t");
        assert_eq!(action.act(m, &t, &x1).unwrap(), m.vector("x2").unwrap());
        let x4 = m.vector("x4").unwrap();
        assert!(matches!(
            action.act(m, &t, &x4),
            Err(Error::ActionOutOfWindow { letter: 0, .. })
        ));
    }

    #[test]
    fn orbit_dim_examples() {
        let (module, action) = build_swap_model(FieldSpec::Rationals);
        let e1 = module.vector("e1").unwrap();
        assert_eq!(
            orbit_dim(&module, &action, &e1, &GroupWord::identity(), 5).unwrap(),
            OrbitDim::Finite {
                d: 1,
                recurrence: vec![q(1)]
            }
        );
        assert_eq!(
            orbit_dim(&module, &action, &e1, &GroupWord::generator("g"), 5).unwrap(),
            OrbitDim::Finite {
                d: 2,
                recurrence: vec![q(1), q(0)]
            }
        );
        assert_eq!(
            orbit_dim(&module, &action, &Element::zero(), &GroupWord::generator("g"), 5),
            Err(Error::ZeroVector)
        );

        let mut spec = ModelSpec::exterior(6, FieldSpec::Rationals);
        spec.window.max_degree = 1;
        let (inst, action) = build_exterior_model(&spec).unwrap();
        let x1 = inst.module().vector("x1").unwrap();
        assert_eq!(
            orbit_dim(inst.module(), &action, &x1, &GroupWord::generator("t"), 5).unwrap(),
            OrbitDim::Independent {
                ranks: vec![1, 2, 3, 4, 5, 6]
            }
        );
    }

    #[test]
    fn orbit_span_examples() {
        let (module, action) = build_swap_model(FieldSpec::Rationals);
        let e1 = module.vector("e1").unwrap();
        assert_eq!(orbit_span_subgroup(&module, &action, &e1, &[], 4).unwrap().rank(), 1);
        let g = GroupWord::generator("g");
        assert_eq!(
            orbit_span_subgroup(&module, &action, &e1, &[g], 4).unwrap().rank(),
            2
        );

        let tele = build_telescope_model(FieldSpec::Rationals, 20).unwrap();
        let v = tele.module.vector("e").unwrap();
        for bound in [0, 1, 5, 20] {
            let span = orbit_span_subgroup(
                &tele.module,
                &tele.action,
                &v,
                &[GroupWord::generator("t")],
                bound,
            )
            .unwrap();
            assert_eq!(span.rank(), 1);
        }
    }

    #[test]
    fn find_healthy_examples() {
        let mut spec = ModelSpec::exterior(8, FieldSpec::Rationals);
        spec.window.max_degree = 1;
        let (inst, action) = build_exterior_model(&spec).unwrap();
        let x1 = inst.module().vector("x1").unwrap();
        match find_healthy(inst.module(), &action, std::slice::from_ref(&x1), &[GroupWord::generator("t")], 7) {
            OrbitVerdict::HealthyWitness { vector, ranks, .. } => {
                assert_eq!(vector, x1);
                assert_eq!(ranks, (1..=8).collect::<Vec<_>>());
            }
            other => panic!("unexpected verdict {other:?}"),
        }

        let (module, action) = build_swap_model(FieldSpec::Rationals);
        let e1 = module.vector("e1").unwrap();
        match find_healthy(&module, &action, &[e1], &[GroupWord::generator("g")], 10) {
            OrbitVerdict::SickUpToWindow { probes, .. } => {
                assert_eq!(probes[0].outcome, ProbeOutcome::Sick { d: 2 });
            }
            other => panic!("unexpected verdict {other:?}"),
        }

        // probing past the window edge exhausts every probe
        let (inst, action) = build_exterior_model(&spec).unwrap();
        let x8 = inst.module().vector("x8").unwrap();
        assert!(matches!(
            find_healthy(inst.module(), &action, &[x8], &[GroupWord::generator("t")], 3),
            OrbitVerdict::WindowExhausted { .. }
        ));
    }

    #[test]
    fn default_candidate_order() {
        let mut spec = ModelSpec::exterior(3, FieldSpec::Rationals);
        spec.window.max_degree = 1;
        let (inst, action) = build_exterior_model(&spec).unwrap();
        let (vectors, words) = default_candidates(inst.module(), &action, 1);
        let m = inst.module();
        let shown: Vec<String> = vectors.iter().map(|v| m.format_element(v)).collect();
        assert_eq!(shown, ["x1", "x2", "x3", "x1 + x2", "x1 + x3", "x2 + x3"]);
        let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["t", "t^-1", "t^-2", "t^2"]);
    }

    #[test]
    fn prep2_examples() {
        let (module, action) = build_swap_model(FieldSpec::Rationals);
        let e1 = module.vector("e1").unwrap();
        let g = GroupWord::generator("g");
        let h = GroupWord::generator("h");
        let report = check_prep2_bound(&module, &action, &e1, &g, &[], 8).unwrap();
        assert_eq!((report.d, report.dim_h, report.dim_g), (2, 1, 2));
        assert!(report.holds());
        let report = check_prep2_bound(&module, &action, &e1, &g, &[h], 8).unwrap();
        assert_eq!((report.d, report.dim_h, report.dim_g), (2, 1, 2));
        assert!(report.holds());

        let tele = build_telescope_model(FieldSpec::Rationals, 5).unwrap();
        let v = tele.module.vector("e").unwrap();
        let report =
            check_prep2_bound(&tele.module, &tele.action, &v, &GroupWord::generator("t"), &[], 5)
                .unwrap();
        assert_eq!((report.d, report.dim_h, report.dim_g), (1, 1, 1));
    }

    #[test]
    fn validate_catches_broken_inverse() {
        let (module, action) = build_swap_model(FieldSpec::Rationals);
        assert!(action.validate(&module).is_ok());
        let mut generators = action.generators().clone();
        let op = generators.get_mut("g").unwrap();
        let mut inverse = op.inverse().clone();
        inverse.insert(0, module.vector("e1").unwrap());
        *op = Operator::new(op.forward().clone(), inverse);
        let broken = GroupActionWindow::new(action.field(), generators, action.lengths().clone())
            .unwrap();
        assert!(broken.validate(&module).is_err());
    }
}
