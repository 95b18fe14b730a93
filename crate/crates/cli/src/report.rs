//! Machine-readable JSON and human-readable text for each command.

use std::fmt::Write as _;

use serde_json::{json, Value};

use spicy_core::action::{default_candidates, find_healthy as search, GroupWord, OrbitVerdict, ProbeOutcome};
use spicy_core::format::{self, Instance};
use spicy_core::growth::{euler_check, Extraction, PartitionTable, PipelineOutcome};
use spicy_core::hopf::{check_action_spicy, BialgebraInstance, CheckReport, Element, PbwReport};

use crate::{pretty, CmdResult, Failure, Outcome};

fn check_json(r: &CheckReport) -> Value {
    json!({
        "name": r.name,
        "checked": r.checked,
        "passed": r.passed(),
        "counterexample": r.failure.as_ref().map(|f| json!({
            "witness": f.witness,
            "detail": f.detail,
        })),
    })
}

pub fn verify(instance: &Instance) -> Outcome {
    let reports = match instance.bialgebra() {
        Some(b) => vec![
            b.check_bialgebra(),
            b.check_hopf_shape(),
            b.check_spicy(&instance.action),
        ],
        None => vec![check_action_spicy(instance.module(), &instance.action)],
    };
    let passed = reports.iter().all(CheckReport::passed);
    let mut human = String::new();
    for r in &reports {
        match &r.failure {
            None => writeln!(human, "{:<12} pass ({} cases)", r.name, r.checked),
            Some(f) => writeln!(
                human,
                "{:<12} FAIL at [{}]: {}",
                r.name,
                f.witness.join(", "),
                f.detail
            ),
        }
        .expect("write to string");
    }
    let machine = json!({
        "format": format::FORMAT_VERSION,
        "kind": "verify-report",
        "field": instance.module().field().to_string(),
        "basis_size": instance.module().len(),
        "checks": reports.iter().map(check_json).collect::<Vec<_>>(),
        "passed": passed,
    });
    Outcome {
        machine: pretty(&machine),
        human,
        passed,
    }
}

/// Basis vectors of the lowest positive degree that are primitive.
pub fn default_primitives(inst: &BialgebraInstance) -> Result<Vec<Element>, Failure> {
    let m = inst.module();
    let Some(degree) = (0..m.len()).map(|i| m.degree(i)).filter(|&d| d > 0).min() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for i in (0..m.len()).filter(|&i| m.degree(i) == degree) {
        let v = m.basis_vector(i);
        if inst.is_primitive(&v)? {
            out.push(v);
        }
    }
    Ok(out)
}

pub fn pbw(report: &PbwReport) -> Outcome {
    let mut human = format!("N = {}, degree {}\n", report.n, report.degree);
    for b in &report.blocks {
        writeln!(
            human,
            "  |I| = {:<3} degree {:<5} rank {:>8} / {:<8} {}",
            b.size,
            b.degree,
            b.rank,
            b.expected,
            if b.rank == b.expected { "ok" } else { "DEPENDENT" }
        )
        .expect("write to string");
    }
    writeln!(human, "total rank {}", report.total_rank()).expect("write to string");
    let machine = json!({
        "format": format::FORMAT_VERSION,
        "kind": "pbw-report",
        "n": report.n,
        "degree": report.degree,
        "blocks": report.blocks.iter().map(|b| json!({
            "size": b.size,
            "degree": b.degree,
            "expected": b.expected,
            "rank": b.rank,
        })).collect::<Vec<_>>(),
        "total_rank": report.total_rank(),
        "passed": report.passed(),
    });
    Outcome {
        machine: pretty(&machine),
        human,
        passed: report.passed(),
    }
}

fn outcome_json(o: &ProbeOutcome) -> Value {
    match o {
        ProbeOutcome::Sick { d } => json!({"status": "sick", "d": d}),
        ProbeOutcome::Exhausted { reason } => json!({"status": "window-exhausted", "reason": reason}),
        ProbeOutcome::ZeroVector => json!({"status": "zero-vector"}),
    }
}

pub fn find_healthy(
    instance: &Instance,
    vector_texts: &[String],
    word_texts: &[String],
    bound: usize,
) -> CmdResult {
    let module = instance.module();
    let action = &instance.action;
    let degree = (0..module.len()).map(|i| module.degree(i)).filter(|&d| d > 0).min();
    let (default_v, default_w) = match degree {
        Some(d) => default_candidates(module, action, d),
        None => (Vec::new(), default_candidates(module, action, 0).1),
    };
    let vectors = if vector_texts.is_empty() {
        default_v
    } else {
        vector_texts
            .iter()
            .map(|t| format::parse_element(module, t))
            .collect::<Result<_, _>>()?
    };
    let words = if word_texts.is_empty() {
        default_w
    } else {
        word_texts
            .iter()
            .map(|t| GroupWord::parse(t))
            .collect::<Result<_, _>>()?
    };
    let verdict = search(module, action, &vectors, &words, bound);
    let show = |v: &Element| module.format_element(v);
    let (machine, human) = match &verdict {
        OrbitVerdict::HealthyWitness { vector, word, ranks } => (
            json!({
                "verdict": "healthy-witness",
                "vector": show(vector),
                "word": word.to_string(),
                "ranks": ranks,
            }),
            format!(
                "healthy witness: v = {}, g = {}, ranks {:?}\n",
                show(vector),
                word,
                ranks
            ),
        ),
        OrbitVerdict::SickUpToWindow { probes, .. } | OrbitVerdict::WindowExhausted { probes, .. } => {
            let label = if matches!(verdict, OrbitVerdict::SickUpToWindow { .. }) {
                "sick-up-to-window"
            } else {
                "window-exhausted"
            };
            let mut human = format!(
                "{label} (bound {bound}, {} probes); sickness is certified only inside the window\n",
                probes.len()
            );
            for p in probes {
                let detail = match &p.outcome {
                    ProbeOutcome::Sick { d } => format!("d = {d}"),
                    ProbeOutcome::Exhausted { reason } => format!("exhausted: {reason}"),
                    ProbeOutcome::ZeroVector => "zero vector".to_string(),
                };
                writeln!(human, "  v = {}, g = {}: {detail}", show(&vectors[p.vector]), words[p.word])
                    .expect("write to string");
            }
            let probes: Vec<Value> = probes
                .iter()
                .map(|p| {
                    json!({
                        "vector": show(&vectors[p.vector]),
                        "word": words[p.word].to_string(),
                        "outcome": outcome_json(&p.outcome),
                    })
                })
                .collect();
            (json!({"verdict": label, "probes": probes}), human)
        }
    };
    let mut machine = machine;
    machine["format"] = json!(format::FORMAT_VERSION);
    machine["kind"] = json!("orbit-verdict");
    machine["bound"] = json!(bound);
    Ok(Outcome {
        machine: pretty(&machine),
        human,
        passed: true,
    })
}

pub fn extraction(inst: &BialgebraInstance, e: &Extraction) -> Outcome {
    let module = inst.module();
    let vectors: Vec<String> = e
        .sequence
        .vectors()
        .iter()
        .map(|v| module.format_element(v))
        .collect();
    let mut human = format!(
        "k = {}, {} primitive vectors, slope {}\n",
        e.k,
        vectors.len(),
        e.sequence.c()
    );
    for (j, v) in vectors.iter().enumerate() {
        writeln!(human, "  w_{} = {v}", j + 1).expect("write to string");
    }
    let machine = json!({
        "format": format::FORMAT_VERSION,
        "kind": "extraction",
        "k": e.k,
        "slope": e.sequence.c().to_string(),
        "degree": e.sequence.degree(),
        "vectors": vectors,
        "combinations": e.combinations.iter()
            .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Outcome {
        machine: pretty(&machine),
        human,
        passed: true,
    }
}

pub fn certificate(inst: &BialgebraInstance, outcome: &PipelineOutcome, terse: bool) -> Outcome {
    let cert = &outcome.certificate;
    let mut human = format!(
        "witness v = {}, g = {}; k = {}\n",
        inst.module().format_element(&outcome.vector),
        outcome.word,
        outcome.extraction.as_ref().map_or(0, |e| e.k)
    );
    writeln!(human, "{:>4} {:>10} {:>8} {:>10}", "n", "q(n)", "rank", "rank(=n)").expect("write");
    for r in &cert.rows {
        writeln!(
            human,
            "{:>4} {:>10} {:>8} {:>10} {}",
            r.n,
            r.q,
            r.rank,
            r.rank_exact_sum,
            if r.passed() { "ok" } else { "FAIL" }
        )
        .expect("write");
    }
    if let Some(t) = &cert.truncation {
        writeln!(human, "truncated at n = {}: {t}", cert.n_max_certified).expect("write");
    }
    Outcome {
        machine: format::write_certificate(cert, terse),
        human,
        passed: cert.passed(),
    }
}

pub fn partitions(n_max: usize) -> Outcome {
    let table = PartitionTable::new(n_max);
    let euler = euler_check(n_max);
    let rows: Vec<Value> = (0..=n_max)
        .map(|n| {
            json!({
                "n": n,
                "q": table.q(n).to_string(),
                "p_odd": table.p_odd(n).to_string(),
            })
        })
        .collect();
    let mut human = String::new();
    for n in 0..=n_max {
        writeln!(human, "{n:>5} {}", table.q(n)).expect("write");
    }
    writeln!(human, "euler: {}", if euler.passed() { "pass" } else { "FAIL" }).expect("write");
    let machine = json!({
        "format": format::FORMAT_VERSION,
        "kind": "partition-table",
        "n_max": n_max,
        "rows": rows,
        "euler": {
            "passed": euler.passed(),
            "first_mismatch": euler.mismatch.as_ref().map(|(n, _, _)| n),
        },
    });
    Outcome {
        machine: pretty(&machine),
        human,
        passed: euler.passed(),
    }
}
