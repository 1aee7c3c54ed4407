//! Flat recursive set equations and their unique solutions.
//!
//! A system binds each variable to the aggregation of a finite list of
//! terms, where a term is another variable or an embedded canonical set.
//! Under bisimulation equality every valid system has exactly one solution:
//! build one graph node per variable, splice in the embedded sets, and
//! canonicalize from each variable in turn.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::canon::CanonSet;
use crate::graph::GraphBuilder;

/// Right-hand-side term of an equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetTerm {
    Var(String),
    Lit(CanonSet),
}

/// A system of equations `v = {t1, ..., tk}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquationSystem {
    bindings: Vec<(String, Vec<SetTerm>)>,
}

/// A problem found by [`EquationSystem::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("variable `{var}` used in the binding of `{binding}` is not bound")]
    UnboundVariable { binding: String, var: String },
    #[error("variable `{name}` is bound more than once")]
    DuplicateBinding { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid equation system: {}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn format_diagnostics(ds: &[Diagnostic]) -> String {
    ds.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Solution of a system, in binding order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    entries: Vec<(String, CanonSet)>,
}

impl Solution {
    pub fn get(&self, name: &str) -> Option<&CanonSet> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CanonSet)> {
        self.entries.iter().map(|(n, s)| (n.as_str(), s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl EquationSystem {
    pub fn new(bindings: Vec<(String, Vec<SetTerm>)>) -> Self {
        EquationSystem { bindings }
    }

    pub fn bindings(&self) -> &[(String, Vec<SetTerm>)] {
        &self.bindings
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Reports duplicate bindings and unbound variables. An empty report
    /// means [`EquationSystem::solve`] will succeed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut names = BTreeSet::new();
        for (name, _) in &self.bindings {
            if !names.insert(name.as_str()) {
                out.push(Diagnostic::DuplicateBinding { name: name.clone() });
            }
        }
        for (binding, terms) in &self.bindings {
            for t in terms {
                if let SetTerm::Var(v) = t {
                    if !names.contains(v.as_str()) {
                        out.push(Diagnostic::UnboundVariable {
                            binding: binding.clone(),
                            var: v.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Solves the system. The result is unique up to bisimulation and does
    /// not depend on binding order or variable names.
    pub fn solve(&self) -> Result<Solution, SolveError> {
        let problems = self.validate();
        if !problems.is_empty() {
            return Err(SolveError::Invalid(problems));
        }
        let mut b = GraphBuilder::new();
        let var_node: Vec<u32> = self.bindings.iter().map(|_| b.add_node()).collect();
        let index_of = |name: &str| {
            self.bindings
                .iter()
                .position(|(n, _)| n == name)
                .expect("validated")
        };
        for (i, (_, terms)) in self.bindings.iter().enumerate() {
            for t in terms {
                let child = match t {
                    SetTerm::Var(v) => var_node[index_of(v)],
                    SetTerm::Lit(s) => b.embed(s.apg()),
                };
                b.add_edge(var_node[i], child);
            }
        }
        let entries = self
            .bindings
            .iter()
            .enumerate()
            .map(|(i, (name, _))| {
                let g = b.clone_into_apg(var_node[i]);
                (name.clone(), CanonSet::canonicalize(&g))
            })
            .collect();
        Ok(Solution { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{empty, ordinal, quine_atom};

    fn var(s: &str) -> SetTerm {
        SetTerm::Var(s.to_string())
    }

    #[test]
    fn self_loop_solves_to_quine_atom() {
        let sys = EquationSystem::new(vec![("a".into(), vec![var("a")])]);
        assert!(sys.validate().is_empty());
        let sol = sys.solve().unwrap();
        assert_eq!(sol.get("a"), Some(&quine_atom()));
    }

    #[test]
    fn empty_binding_solves_to_empty_set() {
        let sys = EquationSystem::new(vec![("a".into(), vec![])]);
        assert_eq!(sys.solve().unwrap().get("a"), Some(&empty()));
    }

    #[test]
    fn empty_system_solves_to_empty_solution() {
        let sys = EquationSystem::new(vec![]);
        assert!(sys.validate().is_empty());
        assert!(sys.solve().unwrap().is_empty());
    }

    #[test]
    fn flattened_nesting_collapses_to_quine_atom() {
        // w1 = {w2, w3}, w2 = {{w2}}, w3 = {w2}, nested braces flattened
        // through the auxiliary t = {w2}.
        let sys = EquationSystem::new(vec![
            ("w1".into(), vec![var("w2"), var("w3")]),
            ("w2".into(), vec![var("t")]),
            ("t".into(), vec![var("w2")]),
            ("w3".into(), vec![var("w2")]),
        ]);
        let sol = sys.solve().unwrap();
        let omega = quine_atom();
        for name in ["w1", "w2", "w3", "t"] {
            assert_eq!(sol.get(name), Some(&omega), "{name}");
        }
    }

    #[test]
    fn unbound_variable_is_reported() {
        let sys = EquationSystem::new(vec![("a".into(), vec![var("b")])]);
        let problems = sys.validate();
        assert_eq!(problems.len(), 1);
        assert!(matches!(
            &problems[0],
            Diagnostic::UnboundVariable { binding, var } if binding == "a" && var == "b"
        ));
        assert!(sys.solve().is_err());
    }

    #[test]
    fn duplicate_binding_is_reported() {
        let sys = EquationSystem::new(vec![
            ("a".into(), vec![]),
            ("a".into(), vec![var("a")]),
        ]);
        assert!(sys
            .validate()
            .iter()
            .any(|d| matches!(d, Diagnostic::DuplicateBinding { name } if name == "a")));
    }

    #[test]
    fn embedded_sets_participate() {
        let sys = EquationSystem::new(vec![(
            "a".into(),
            vec![SetTerm::Lit(empty()), SetTerm::Lit(ordinal(1))],
        )]);
        assert_eq!(sys.solve().unwrap().get("a"), Some(&ordinal(2)));
    }

    #[test]
    fn binding_elements_match_solution_elements() {
        let sys = EquationSystem::new(vec![
            ("a".into(), vec![var("b"), SetTerm::Lit(empty())]),
            ("b".into(), vec![var("a")]),
        ]);
        let sol = sys.solve().unwrap();
        let a = sol.get("a").unwrap();
        let b = sol.get("b").unwrap();
        let elems = a.elements();
        assert_eq!(elems.len(), 2);
        assert!(elems.contains(&empty()));
        assert!(elems.contains(b));
    }
}
