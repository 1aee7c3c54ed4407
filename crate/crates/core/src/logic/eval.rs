//! Formula evaluation over a finite universe of canonical sets.
//!
//! Quantifiers range over the supplied universe only. Environment values may
//! lie outside it, which is what the totality engine relies on when it tests
//! predicates on aggregates bigger than the universe bound; quantified
//! subclaims about such values are faithful only for members inside the
//! universe.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::canon::CanonSet;

use super::ast::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound free variable `{name}`")]
    Unbound { name: String },
}

/// Evaluates `f` with free names bound by `env` and quantifiers ranging over
/// `universe`.
pub fn evaluate(
    f: &Formula,
    env: &BTreeMap<String, CanonSet>,
    universe: &[CanonSet],
) -> Result<bool, EvalError> {
    let mut scope: Vec<(String, CanonSet)> = Vec::new();
    eval(f, env, universe, &mut scope)
}

fn lookup<'a>(
    name: &str,
    env: &'a BTreeMap<String, CanonSet>,
    scope: &'a [(String, CanonSet)],
) -> Result<&'a CanonSet, EvalError> {
    scope
        .iter()
        .rev()
        .find(|(n, _)| n == name)
        .map(|(_, s)| s)
        .or_else(|| env.get(name))
        .ok_or_else(|| EvalError::Unbound { name: name.to_string() })
}

fn eval(
    f: &Formula,
    env: &BTreeMap<String, CanonSet>,
    universe: &[CanonSet],
    scope: &mut Vec<(String, CanonSet)>,
) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Member(a, b) => {
            let (x, y) = (lookup(a, env, scope)?, lookup(b, env, scope)?);
            y.has_member(x)
        }
        Formula::Equal(a, b) => lookup(a, env, scope)? == lookup(b, env, scope)?,
        Formula::Not(p) => !eval(p, env, universe, scope)?,
        Formula::And(p, q) => eval(p, env, universe, scope)? && eval(q, env, universe, scope)?,
        Formula::Or(p, q) => eval(p, env, universe, scope)? || eval(q, env, universe, scope)?,
        Formula::Implies(p, q) => !eval(p, env, universe, scope)? || eval(q, env, universe, scope)?,
        Formula::Iff(p, q) => eval(p, env, universe, scope)? == eval(q, env, universe, scope)?,
        Formula::Forall(v, p) => {
            let mut all = true;
            for u in universe {
                scope.push((v.clone(), u.clone()));
                let ok = eval(p, env, universe, scope)?;
                scope.pop();
                if !ok {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::Exists(v, p) => {
            let mut any = false;
            for u in universe {
                scope.push((v.clone(), u.clone()));
                let ok = eval(p, env, universe, scope)?;
                scope.pop();
                if ok {
                    any = true;
                    break;
                }
            }
            any
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::set::{empty, from_elements, ordinal, quine_atom};

    fn env(pairs: &[(&str, CanonSet)]) -> BTreeMap<String, CanonSet> {
        pairs
            .iter()
            .map(|(n, s)| (n.to_string(), s.clone()))
            .collect()
    }

    #[test]
    fn membership_atom() {
        let f = parse_formula("x in y").unwrap();
        let e = env(&[("x", empty()), ("y", from_elements(&[empty()]))]);
        assert!(evaluate(&f, &e, &[]).unwrap());
    }

    #[test]
    fn emptiness_via_quantifier() {
        let f = parse_formula("forall z. ~(z in x)").unwrap();
        let e = env(&[("x", empty())]);
        let universe = vec![empty(), quine_atom(), ordinal(1)];
        assert!(evaluate(&f, &e, &universe).unwrap());
        let e2 = env(&[("x", ordinal(1))]);
        assert!(!evaluate(&f, &e2, &universe).unwrap());
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let f = parse_formula("x in y").unwrap();
        let e = env(&[("x", empty())]);
        assert_eq!(
            evaluate(&f, &e, &[]),
            Err(EvalError::Unbound { name: "y".into() })
        );
    }

    #[test]
    fn quine_atom_is_self_membered() {
        let f = parse_formula("x in x").unwrap();
        assert!(evaluate(&f, &env(&[("x", quine_atom())]), &[]).unwrap());
        assert!(!evaluate(&f, &env(&[("x", ordinal(2))]), &[]).unwrap());
    }

    #[test]
    fn env_values_outside_the_universe_are_fine() {
        // The universe lacks ordinal 3, yet it can be tested as a value.
        let f = parse_formula("exists z. z in x").unwrap();
        let e = env(&[("x", ordinal(3))]);
        let universe = vec![empty(), ordinal(1)];
        assert!(evaluate(&f, &e, &universe).unwrap());
    }
}
