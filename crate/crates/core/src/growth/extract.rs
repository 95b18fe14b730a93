use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::hopf::{BialgebraInstance, Element};
use crate::linalg::{CoordVec, Insertion, Matrix, SpanBasis};

/// Independent primitive vectors of one positive degree `m` whose values
/// grow at most linearly: `|v_i| <= c·i` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveSequence {
    vectors: Vec<Element>,
    c: BigRational,
    m: u32,
}

impl PrimitiveSequence {
    /// Validates every invariant against `inst`.
    pub fn new(inst: &BialgebraInstance, vectors: Vec<Element>, c: BigRational) -> Result<Self> {
        let m = check_family(inst, &vectors, &c)?;
        for (i, v) in vectors.iter().enumerate() {
            if !inst.is_primitive(v)? {
                return Err(Error::NotPrimitive { index: i + 1 });
            }
        }
        Ok(PrimitiveSequence { vectors, c, m })
    }

    pub fn vectors(&self) -> &[Element] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn degree(&self) -> u32 {
        self.m
    }
}

/// Common checks for extraction input and primitive sequences: nonzero
/// homogeneous vectors of one positive degree, linearly independent, with
/// `|v_i| <= c·i`. Returns the degree, or 0 for an empty family.
fn check_family(inst: &BialgebraInstance, vectors: &[Element], c: &BigRational) -> Result<u32> {
    if !c.is_positive() {
        return Err(Error::schema("value slope c must be positive"));
    }
    let module = inst.module();
    let mut degree = None;
    for (i, v) in vectors.iter().enumerate() {
        let d = module.homogeneous_degree(v)?;
        if d == 0 {
            return Err(Error::DegreeZero);
        }
        match degree {
            None => degree = Some(d),
            Some(expected) if expected != d => {
                return Err(Error::MixedDegree {
                    index: i + 1,
                    expected,
                    found: d,
                })
            }
            Some(_) => {}
        }
        let bound = c * BigRational::from_integer(BigInt::from(i + 1));
        let value = module.value(v);
        if value > bound {
            return Err(Error::ValueBound {
                index: i + 1,
                value: Box::new(value),
                bound: Box::new(bound),
            });
        }
    }
    let mut span = SpanBasis::new(module.field(), module.len());
    for v in vectors {
        if let Insertion::InSpan { .. } = span.insert(&module.coords(v))? {
            return Err(Error::NotIndependent);
        }
    }
    Ok(degree.unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    /// Rank of the reduced coproduct on the span of the input.
    pub k: usize,
    /// For each output vector, its coefficients on the input block it came
    /// from (block `j` covers inputs `j(k+1)+1 ..= (j+1)(k+1)`).
    pub combinations: Vec<Vec<crate::field::Scalar>>,
    pub sequence: PrimitiveSequence,
}

/// Turns independent vectors of one degree with `|v_i| <= c·i` into a
/// primitive sequence with slope `c·(k+1)`, where `k` is the rank of the
/// reduced coproduct on their span. Each consecutive block of `k+1` inputs
/// contributes the first reduced-echelon kernel vector of that map.
pub fn extract_primitive_sequence(
    inst: &BialgebraInstance,
    vectors: &[Element],
    c: &BigRational,
) -> Result<Extraction> {
    check_family(inst, vectors, c)?;
    let field = inst.field();

    let mut slots = BTreeMap::new();
    let images: Vec<Vec<(usize, crate::field::Scalar)>> = vectors
        .iter()
        .map(|v| {
            let a = inst.reduced_coproduct(v)?;
            Ok(a.terms()
                .map(|(pair, s)| {
                    let next = slots.len();
                    (*slots.entry(pair).or_insert(next), s.clone())
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let rows = slots.len();
    let columns: Vec<CoordVec> = images
        .iter()
        .map(|img| CoordVec::from_entries(rows, img.iter().cloned()))
        .collect::<Result<_>>()?;
    let k = Matrix::from_columns(field, rows, &columns)?.rank();

    let block = k + 1;
    if vectors.len() < block {
        return Err(Error::InsufficientVectors { k });
    }
    let mut outputs = Vec::new();
    let mut combinations = Vec::new();
    for chunk in 0..vectors.len() / block {
        let range = chunk * block..(chunk + 1) * block;
        let kernel = Matrix::from_columns(field, rows, &columns[range.clone()])?.kernel_basis();
        let coefficients = kernel
            .first()
            .expect("k+1 vectors in a rank-k image leave a kernel")
            .to_dense(field);
        let w = Element::linear_combination(coefficients.iter().zip(&vectors[range]));
        outputs.push(w);
        combinations.push(coefficients);
    }

    let slope = c * BigRational::from_integer(BigInt::from(block));
    let module = inst.module();
    for (j, w) in outputs.iter().enumerate() {
        if !inst.reduced_coproduct(w)?.is_zero() {
            return Err(Error::NotPrimitive { index: j + 1 });
        }
        let bound = &slope * BigRational::from_integer(BigInt::from(j + 1));
        if module.value(w) > bound {
            return Err(Error::ValueBound {
                index: j + 1,
                value: Box::new(module.value(w)),
                bound: Box::new(bound),
            });
        }
    }
    let sequence = PrimitiveSequence::new(inst, outputs, slope)?;
    Ok(Extraction {
        k,
        combinations,
        sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::models::{build_exterior_model, build_mixed_model, ModelSpec};

    fn one() -> BigRational {
        BigRational::from_integer(1.into())
    }

    #[test]
    fn primitive_input_is_returned_unchanged() {
        let (inst, _) = build_exterior_model(&ModelSpec::exterior(4, FieldSpec::Rationals)).unwrap();
        let m = inst.module();
        let xs: Vec<Element> = ["x1", "x2", "x3"].iter().map(|id| m.vector(id).unwrap()).collect();
        let out = extract_primitive_sequence(&inst, &xs, &one()).unwrap();
        assert_eq!(out.k, 0);
        assert_eq!(out.sequence.vectors(), xs.as_slice());
        assert_eq!(out.sequence.c(), &one());
    }

    #[test]
    fn perturbed_pair_gives_difference() {
        let f = FieldSpec::Rationals;
        let (inst, _) = build_mixed_model(&ModelSpec::mixed(2, 4, f)).unwrap();
        let m = inst.module();
        let u = m.vector("y1y2").unwrap();
        let v: Vec<Element> = ["x1", "x2"]
            .iter()
            .map(|id| m.vector(id).unwrap().plus(&u))
            .collect();
        let out = extract_primitive_sequence(&inst, &v, &BigRational::from_integer(3.into())).unwrap();
        assert_eq!(out.k, 1);
        let w = &out.sequence.vectors()[0];
        assert_eq!(*w, m.vector("x2").unwrap().minus(&m.vector("x1").unwrap()));
        assert!(inst.is_primitive(w).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let (inst, _) = build_exterior_model(&ModelSpec::exterior(3, FieldSpec::Rationals)).unwrap();
        let m = inst.module();
        let x1 = m.vector("x1").unwrap();
        assert_eq!(
            extract_primitive_sequence(&inst, &[x1.clone(), x1.clone()], &one()),
            Err(Error::NotIndependent)
        );
        let x12 = m.vector("x1x2").unwrap();
        assert!(matches!(
            extract_primitive_sequence(&inst, &[x1.clone(), x12], &BigRational::from_integer(5.into())),
            Err(Error::MixedDegree { index: 2, .. })
        ));
        let x3 = m.vector("x3").unwrap();
        assert!(matches!(
            extract_primitive_sequence(&inst, &[x3], &one()),
            Err(Error::ValueBound { index: 1, .. })
        ));
        assert_eq!(
            extract_primitive_sequence(&inst, &[], &one()),
            Err(Error::InsufficientVectors { k: 0 })
        );
    }
}
