use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use super::extract::PrimitiveSequence;
use super::partitions::PartitionTable;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::hopf::{BialgebraInstance, Element};
use crate::linalg::SpanBasis;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: usize,
    pub q: BigUint,
    /// Rank of `{v_I : ΣI <= n}`, summed over degree blocks. This is a lower
    /// bound for the dimension of filtration level `n`.
    pub rank: usize,
    /// Rank of `{v_I : ΣI = n}` alone.
    pub rank_exact_sum: usize,
    /// Subsets `I` with `ΣI = n`, each increasing, in enumeration order.
    pub subsets: Vec<Vec<usize>>,
}

impl GrowthRow {
    pub fn passed(&self) -> bool {
        BigUint::from(self.rank) >= self.q
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCertificate {
    pub field: FieldSpec,
    /// Slope `c` of the input sequence; values are checked after rescaling
    /// by `1/c`.
    pub slope: BigRational,
    pub degree: u32,
    pub n_max_requested: usize,
    pub n_max_certified: usize,
    /// Why certification stopped before `n_max_requested`.
    pub truncation: Option<String>,
    pub vectors: Vec<String>,
    pub rows: Vec<GrowthRow>,
}

impl GrowthCertificate {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(GrowthRow::passed)
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }
}

/// Increasing subsets of `1..=limit` with sum exactly `n`, ordered by
/// largest element and then recursively.
pub fn distinct_part_subsets(n: usize, limit: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, below: usize, tail: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(tail.iter().rev().copied().collect());
            return;
        }
        for top in 1..=below.min(n) {
            tail.push(top);
            go(n - top, top - 1, tail, out);
            tail.pop();
        }
    }
    let mut out = Vec::new();
    go(n, limit, &mut Vec::new(), &mut out);
    out
}

/// Certifies `rank{v_I : ΣI <= n} >= q(n)` for `n = 1..=n_max`, where `v_I`
/// is the ordered product of the sequence entries indexed by `I`. Each
/// product is also checked against `|v_I| <= c·ΣI`. When a product leaves the
/// window, or the sequence is too short to supply `v_n`, the certificate
/// stops at the last fully checked `n` and says why.
pub fn certify_growth(
    inst: &BialgebraInstance,
    seq: &PrimitiveSequence,
    n_max: usize,
) -> Result<GrowthCertificate> {
    let module = inst.module();
    let table = PartitionTable::new(n_max);
    let mut products: HashMap<Vec<usize>, Element> = HashMap::new();
    products.insert(Vec::new(), inst.unit());

    let mut levels: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
    let mut truncation = None;
    'levels: for n in 1..=n_max {
        if n > seq.len() {
            truncation = Some(format!(
                "sequence has {} vectors; level {n} needs v_{n}",
                seq.len()
            ));
            break;
        }
        let subsets = distinct_part_subsets(n, seq.len());
        let mut fresh = Vec::with_capacity(subsets.len());
        for subset in &subsets {
            let (&top, rest) = subset.split_last().expect("n >= 1");
            let prefix = &products[rest];
            let v = match inst.multiply(prefix, &seq.vectors()[top - 1]) {
                Ok(v) => v,
                Err(e @ Error::OutOfWindow { .. }) => {
                    truncation = Some(format!("level {n}, subset {subset:?}: {e}"));
                    break 'levels;
                }
                Err(e) => return Err(e),
            };
            let bound = seq.c() * BigRational::from_integer(BigInt::from(n));
            let value = module.value(&v);
            if value > bound {
                return Err(Error::ValueBound {
                    index: n,
                    value: Box::new(value),
                    bound: Box::new(bound),
                });
            }
            fresh.push((subset.clone(), v));
        }
        products.extend(fresh);
        levels.push((n, subsets));
    }

    // exact-sum ranks are independent per level
    let exact: Vec<usize> = levels
        .par_iter()
        .map(|(_, subsets)| block_rank(inst, subsets.iter().map(|s| &products[s])))
        .collect::<Result<_>>()?;

    let mut cumulative: BTreeMap<u32, SpanBasis> = BTreeMap::new();
    let mut rows = Vec::with_capacity(levels.len());
    for ((n, subsets), rank_exact_sum) in levels.into_iter().zip(exact) {
        for s in &subsets {
            let v = &products[s];
            if v.is_zero() {
                continue;
            }
            let degree = module.homogeneous_degree(v)?;
            cumulative
                .entry(degree)
                .or_insert_with(|| SpanBasis::new(module.field(), module.len()))
                .insert(&module.coords(v))?;
        }
        rows.push(GrowthRow {
            n,
            q: table.q(n).clone(),
            rank: cumulative.values().map(SpanBasis::rank).sum(),
            rank_exact_sum,
            subsets,
        });
    }

    Ok(GrowthCertificate {
        field: inst.field(),
        slope: seq.c().clone(),
        degree: seq.degree(),
        n_max_requested: n_max,
        n_max_certified: rows.last().map_or(0, |r| r.n),
        truncation,
        vectors: seq.vectors().iter().map(|v| module.format_element(v)).collect(),
        rows,
    })
}

fn block_rank<'a>(
    inst: &BialgebraInstance,
    vectors: impl Iterator<Item = &'a Element>,
) -> Result<usize> {
    let module = inst.module();
    let mut blocks: BTreeMap<u32, SpanBasis> = BTreeMap::new();
    for v in vectors {
        if v.is_zero() {
            continue;
        }
        blocks
            .entry(module.homogeneous_degree(v)?)
            .or_insert_with(|| SpanBasis::new(module.field(), module.len()))
            .insert(&module.coords(v))?;
    }
    Ok(blocks.values().map(SpanBasis::rank).sum())
}
