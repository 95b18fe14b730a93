//! Partition counts, primitive-sequence extraction and growth certificates,
//! plus the end-to-end pipeline from a healthy orbit to a certificate.

mod certify;
mod extract;
mod partitions;

pub use certify::{certify_growth, distinct_part_subsets, GrowthCertificate, GrowthRow};
pub use extract::{extract_primitive_sequence, Extraction, PrimitiveSequence};
pub use partitions::{euler_check, hr_ratio, p_odd, q_distinct, EulerReport, PartitionTable};

use num_rational::BigRational;

use crate::action::{
    default_candidates, find_healthy, GroupActionWindow, GroupWord, OrbitVerdict, ProbeOutcome,
};
use crate::error::{Error, ErrorKind, Result};
use crate::hopf::{BialgebraInstance, Element};
use crate::linalg::{Insertion, SpanBasis};

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub vector: Element,
    pub word: GroupWord,
    /// Orbit vectors `g^{i-1} v`, `i = 1..=n_max`, cut short where the
    /// window ends.
    pub orbit: Vec<Element>,
    /// Slope of the orbit sequence: `max(|g|, |v|)`.
    pub orbit_slope: BigRational,
    pub extraction: Option<Extraction>,
    pub certificate: GrowthCertificate,
}

/// Healthy search in the lowest positive degree, then extraction on
/// `v_i = g^{i-1} v`, then certification up to `n_max`.
pub fn pipeline_certify(
    inst: &BialgebraInstance,
    action: &GroupActionWindow,
    n_max: usize,
) -> Result<PipelineOutcome> {
    let module = inst.module();
    let degree = (0..module.len())
        .map(|i| module.degree(i))
        .filter(|&d| d > 0)
        .min()
        .ok_or(Error::DegreeZero)?;
    let (vectors, words) = default_candidates(module, action, degree);
    let bound = n_max.saturating_sub(1);
    let (vector, word) = match find_healthy(module, action, &vectors, &words, bound) {
        OrbitVerdict::HealthyWitness { vector, word, .. } => (vector, word),
        OrbitVerdict::SickUpToWindow { probes, .. } | OrbitVerdict::WindowExhausted { probes, .. } => {
            // fall back to the first orbit that stayed independent until the
            // window ran out; the certificate is truncated to its length
            let probe = probes
                .iter()
                .find(|p| matches!(p.outcome, ProbeOutcome::Exhausted { .. }))
                .ok_or(Error::NoHealthyWitness { bound })?;
            (vectors[probe.vector].clone(), words[probe.word].clone())
        }
    };

    let mut orbit = Vec::with_capacity(n_max);
    let mut span = SpanBasis::new(module.field(), module.len());
    let mut current = vector.clone();
    for i in 0..n_max {
        if i > 0 {
            match action.act(module, &word, &current) {
                Ok(next) => current = next,
                Err(e) if e.kind() == ErrorKind::Window => break,
                Err(e) => return Err(e),
            }
        }
        if let Insertion::InSpan { .. } = span.insert(&module.coords(&current))? {
            break;
        }
        orbit.push(current.clone());
    }
    let slope = action.lengths().length(&word)?.max(module.value(&vector));
    let slope = if slope > BigRational::from_integer(0.into()) {
        slope
    } else {
        BigRational::from_integer(1.into())
    };

    let (extraction, sequence) = if n_max == 0 {
        (None, PrimitiveSequence::new(inst, Vec::new(), slope.clone())?)
    } else {
        let e = extract_primitive_sequence(inst, &orbit, &slope)?;
        let seq = e.sequence.clone();
        (Some(e), seq)
    };
    let certificate = certify_growth(inst, &sequence, n_max)?;
    Ok(PipelineOutcome {
        vector,
        word,
        orbit,
        orbit_slope: slope,
        extraction,
        certificate,
    })
}
