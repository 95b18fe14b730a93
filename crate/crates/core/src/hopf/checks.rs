use num_traits::Zero;

use super::{BialgebraInstance, ModuleWindow, TensorElement};
use crate::action::GroupActionWindow;

/// A minimal reproducer for a failed axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// Basis ids (or generator ids) that exhibit the failure, in order.
    pub witness: Vec<String>,
    pub detail: String,
}

/// Result of one axiom check: how many cases were examined and the first
/// failure in deterministic scan order, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub checked: usize,
    pub failure: Option<Counterexample>,
}

impl CheckReport {
    fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            checked: 0,
            failure: None,
        }
    }

    fn fail(mut self, witness: &[&str], detail: impl Into<String>) -> Self {
        self.failure = Some(Counterexample {
            witness: witness.iter().map(|s| s.to_string()).collect(),
            detail: detail.into(),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl BialgebraInstance {
    /// Connectedness, unit, `Δ(ab) = Δ(a)Δ(b)` on every basis pair whose
    /// product stays in the window, and associativity on in-window triples.
    pub fn check_bialgebra(&self) -> CheckReport {
        let mut report = CheckReport::new("bialgebra");
        let m = &self.module;
        let n = m.len();

        let degree_zero: Vec<_> = (0..n).filter(|&i| m.degree(i) == 0).collect();
        report.checked += 1;
        if degree_zero != [self.unit] {
            let extra = degree_zero
                .iter()
                .find(|&&i| i != self.unit)
                .map_or("1", |&i| m.id(i));
            return report.fail(&[extra], "degree 0 is not spanned by the unit alone");
        }

        for b in 0..n {
            report.checked += 1;
            let bv = m.basis_vector(b);
            let left = self.multiply(&self.unit(), &bv);
            let right = self.multiply(&bv, &self.unit());
            if left.as_ref() != Ok(&bv) || right.as_ref() != Ok(&bv) {
                return report.fail(&[m.id(b)], "1 is not a two-sided unit");
            }
        }

        for a in 0..n {
            for b in 0..n {
                let Ok(ab) = self.basis_product(a, b) else {
                    continue;
                };
                report.checked += 1;
                let lhs = self.coproduct(&ab);
                let rhs = match self.tensor_multiply(&self.coproduct[a], &self.coproduct[b]) {
                    Ok(t) => t,
                    Err(e) => {
                        return report.fail(
                            &[m.id(a), m.id(b)],
                            format!("Δ(a)Δ(b) leaves the window: {e}"),
                        )
                    }
                };
                if lhs != rhs {
                    return report.fail(
                        &[m.id(a), m.id(b)],
                        format!(
                            "Δ(ab) = {} but Δ(a)Δ(b) = {}",
                            m.format_tensor(&lhs),
                            m.format_tensor(&rhs)
                        ),
                    );
                }
            }
        }

        let max_degree = u64::from(m.window().max_degree);
        for a in 0..n {
            for b in 0..n {
                let ab_degree = u64::from(m.degree(a)) + u64::from(m.degree(b));
                if ab_degree > max_degree {
                    continue;
                }
                let ab_value = m.basis_value(a) + m.basis_value(b);
                for c in 0..n {
                    if ab_degree + u64::from(m.degree(c)) > max_degree
                        || &ab_value + m.basis_value(c) > m.window().max_value
                    {
                        continue;
                    }
                    let (av, bv, cv) = (m.basis_vector(a), m.basis_vector(b), m.basis_vector(c));
                    let left = self
                        .multiply(&av, &bv)
                        .and_then(|ab| self.multiply(&ab, &cv));
                    let right = self
                        .multiply(&bv, &cv)
                        .and_then(|bc| self.multiply(&av, &bc));
                    let (Ok(left), Ok(right)) = (left, right) else {
                        continue;
                    };
                    report.checked += 1;
                    if left != right {
                        return report.fail(
                            &[m.id(a), m.id(b), m.id(c)],
                            format!(
                                "(ab)c = {} but a(bc) = {}",
                                m.format_element(&left),
                                m.format_element(&right)
                            ),
                        );
                    }
                }
            }
        }
        report
    }

    /// `Δ1 = 1⊗1`, and for positive degree `Δv = 1⊗v + v⊗1 + Σ v_i⊗v_i'`
    /// with every remaining factor of positive degree.
    pub fn check_hopf_shape(&self) -> CheckReport {
        let mut report = CheckReport::new("hopf-shape");
        let m = &self.module;
        let one = self.field().one();
        for b in 0..m.len() {
            report.checked += 1;
            let delta = &self.coproduct[b];
            if b == self.unit {
                if *delta != TensorElement::pure(b, b, one.clone()) {
                    return report.fail(&[m.id(b)], "Δ1 differs from 1⊗1");
                }
                continue;
            }
            if delta.coefficient(self.unit, b) != Some(&one)
                || delta.coefficient(b, self.unit) != Some(&one)
            {
                return report.fail(&[m.id(b)], "missing 1⊗v or v⊗1 with coefficient 1");
            }
            let stray = delta.terms().find(|&((l, r), _)| {
                !((l == self.unit && r == b) || (l == b && r == self.unit))
                    && (m.degree(l) == 0 || m.degree(r) == 0)
            });
            if let Some(((l, r), _)) = stray {
                return report.fail(
                    &[m.id(b), m.id(l), m.id(r)],
                    "coproduct has a term with a degree-0 factor beyond 1⊗v and v⊗1",
                );
            }
        }
        report
    }

    /// `|vw| <= |v| + |w|` on the product table, then the action clause
    /// `|gv| <= |g| + |v|` through [`check_action_spicy`].
    pub fn check_spicy(&self, action: &GroupActionWindow) -> CheckReport {
        let mut report = CheckReport::new("spicy");
        let m = &self.module;
        for (&(a, b), e) in &self.product {
            report.checked += 1;
            let value = m.value(e);
            let bound = m.basis_value(a) + m.basis_value(b);
            if value > bound {
                return report.fail(
                    &[m.id(a), m.id(b)],
                    format!("|{}·{}| = {value} exceeds {bound}", m.id(a), m.id(b)),
                );
            }
        }
        let action_report = check_action_spicy(m, action);
        report.checked += action_report.checked;
        report.failure = action_report.failure;
        report
    }
}

/// `|gv| <= |g| + |v|` for every generator, its inverse, and every basis
/// vector in the operator's domain.
pub fn check_action_spicy(module: &ModuleWindow, action: &GroupActionWindow) -> CheckReport {
    let mut report = CheckReport::new("spicy-action");
    for (name, op) in action.generators() {
        let weight = action.lengths().weight(name).cloned().unwrap_or_else(Zero::zero);
        for (label, map) in [(name.clone(), op.forward()), (format!("{name}^-1"), op.inverse())] {
            for (&b, image) in map {
                report.checked += 1;
                let value = module.value(image);
                let bound = &weight + module.basis_value(b);
                if value > bound {
                    return report.fail(
                        &[label.as_str(), module.id(b)],
                        format!("|{label}·{}| = {value} exceeds {bound}", module.id(b)),
                    );
                }
            }
        }
    }
    report
}
