//! Ordered products `v_I` of primitives, shuffle signs, and the
//! linear-independence check for the `v_I`.

use super::{BialgebraInstance, Element, TensorElement};
use crate::error::{Error, Result};
use crate::linalg::SpanBasis;

/// Sign of the permutation `(1..n) ↦ (i_1..i_l, j_1..j_{n-l})` that lists
/// `subset` in increasing order followed by its complement in increasing
/// order. Returns `+1` or `-1`.
pub fn sigma_sign(subset: &[usize], n: usize) -> Result<i8> {
    let mut member = vec![false; n + 1];
    for &i in subset {
        if i == 0 || i > n {
            return Err(Error::SubsetOutOfRange { element: i, n });
        }
        if member[i] {
            return Err(Error::SubsetDuplicate(i));
        }
        member[i] = true;
    }
    // inversions: pairs (i in I, j in complement) with j < i
    let mut complement_seen = 0usize;
    let mut inversions = 0usize;
    for (k, &inside) in member.iter().enumerate().skip(1) {
        if inside {
            inversions += complement_seen;
        } else if k <= n {
            complement_seen += 1;
        }
    }
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

fn check_increasing(subset: &[usize], n: usize) -> Result<()> {
    for (k, &i) in subset.iter().enumerate() {
        if i == 0 || i > n {
            return Err(Error::SubsetOutOfRange { element: i, n });
        }
        if k > 0 && subset[k - 1] >= i {
            return Err(Error::SubsetDuplicate(i));
        }
    }
    Ok(())
}

/// Degree-block summary in a [`PbwReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwBlock {
    /// `|I|` for the subsets in this block.
    pub size: usize,
    pub degree: u64,
    /// `C(N, |I|)`.
    pub expected: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwReport {
    pub n: usize,
    pub degree: u32,
    pub blocks: Vec<PbwBlock>,
}

impl PbwReport {
    pub fn passed(&self) -> bool {
        self.blocks.iter().all(|b| b.rank == b.expected)
    }

    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank).sum()
    }

    /// First block whose rank falls short, if any.
    pub fn dependent_block(&self) -> Option<&PbwBlock> {
        self.blocks.iter().find(|b| b.rank != b.expected)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl BialgebraInstance {
    /// `v_I = v_{i_1} ⋯ v_{i_l}` for strictly increasing 1-based `subset`;
    /// `v_∅ = 1`.
    pub fn product_vi(&self, primitives: &[Element], subset: &[usize]) -> Result<Element> {
        check_increasing(subset, primitives.len())?;
        let mut acc = self.unit();
        for &i in subset {
            acc = self.multiply(&acc, &primitives[i - 1])?;
        }
        Ok(acc)
    }

    /// Closed formula `Σ_{J ⊆ I} σ_I(J)^m v_J ⊗ v_{I∖J}`, where `σ_I` is the
    /// shuffle sign relative to the ordered set `I`. Every `v_i` with `i ∈ I`
    /// must be primitive of degree `m`.
    pub fn coproduct_vi_formula(
        &self,
        primitives: &[Element],
        subset: &[usize],
        m: u32,
    ) -> Result<TensorElement> {
        check_increasing(subset, primitives.len())?;
        for &i in subset {
            let v = &primitives[i - 1];
            let degree = self.module.homogeneous_degree(v)?;
            if degree != m {
                return Err(Error::MixedDegree {
                    index: i,
                    expected: m,
                    found: degree,
                });
            }
            if !self.is_primitive(v)? {
                return Err(Error::NotPrimitive { index: i });
            }
        }
        let l = subset.len();
        let mut out = TensorElement::zero();
        for mask in 0u64..(1u64 << l) {
            let positions: Vec<usize> = (0..l).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect();
            let chosen: Vec<usize> = positions.iter().map(|&k| subset[k - 1]).collect();
            let rest: Vec<usize> = (0..l)
                .filter(|k| mask >> k & 1 == 0)
                .map(|k| subset[k])
                .collect();
            let sign = if m.is_multiple_of(2) { 1 } else { sigma_sign(&positions, l)? };
            let left = self.product_vi(primitives, &chosen)?;
            let right = self.product_vi(primitives, &rest)?;
            out.add_product(&self.field().from_i64(sign.into()), &left, &right);
        }
        Ok(out)
    }

    /// Checks that the `2^N` products `v_I`, `I ⊆ {1..N}` with `N = n_max`,
    /// are linearly independent, block by block in degree `m·|I|`.
    ///
    /// Preconditions on the inputs (independent, primitive, equal positive
    /// degree) are verified and reported as errors.
    pub fn pbw_independence_check(&self, primitives: &[Element], n_max: usize) -> Result<PbwReport> {
        if n_max > primitives.len() {
            return Err(Error::DimensionMismatch {
                expected: n_max,
                found: primitives.len(),
            });
        }
        if n_max > 24 {
            return Err(Error::InvalidModel(format!("n_max = {n_max} exceeds 24")));
        }
        let primitives = &primitives[..n_max];
        let mut degree = None;
        for (k, v) in primitives.iter().enumerate() {
            let d = self.module.homogeneous_degree(v)?;
            if d == 0 {
                return Err(Error::DegreeZero);
            }
            match degree {
                None => degree = Some(d),
                Some(m) if m != d => {
                    return Err(Error::MixedDegree {
                        index: k + 1,
                        expected: m,
                        found: d,
                    })
                }
                _ => {}
            }
        }
        let mut span = SpanBasis::new(self.field(), self.module.len());
        for v in primitives {
            if matches!(span.insert(&self.module.coords(v))?, crate::linalg::Insertion::InSpan { .. }) {
                return Err(Error::NotIndependent);
            }
        }
        for (k, v) in primitives.iter().enumerate() {
            if !self.is_primitive(v)? {
                return Err(Error::NotPrimitive { index: k + 1 });
            }
        }
        let m = degree.unwrap_or(0);

        // v_mask = v_{mask without its top bit} · v_top
        let count = 1usize << n_max;
        let mut products: Vec<Element> = Vec::with_capacity(count);
        products.push(self.unit());
        for mask in 1..count {
            let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
            let prev = &products[mask & !(1 << top)];
            products.push(self.multiply(prev, &primitives[top])?);
        }

        let mut blocks: Vec<SpanBasis> =
            (0..=n_max).map(|_| SpanBasis::new(self.field(), self.module.len())).collect();
        for (mask, p) in products.iter().enumerate() {
            let size = mask.count_ones() as usize;
            blocks[size].insert(&self.module.coords(p))?;
        }
        Ok(PbwReport {
            n: n_max,
            degree: m,
            blocks: blocks
                .iter()
                .enumerate()
                .map(|(size, b)| PbwBlock {
                    size,
                    degree: u64::from(m) * size as u64,
                    expected: binomial(n_max, size),
                    rank: b.rank(),
                })
                .collect(),
        })
    }
}
