//! First-order set-theory formulas over membership and equality.

use std::collections::BTreeSet;
use std::fmt;

/// Formula AST. Atoms relate names; a name is a variable unless the caller
/// supplies a value for it, in which case it acts as a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Member(String, String),
    Equal(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    /// Names that occur outside the scope of any quantifier binding them.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    /// Every atom in the formula as (lhs, rhs, membership?) triples, in
    /// syntactic order.
    pub fn atoms(&self) -> Vec<(String, String, bool)> {
        let mut out = Vec::new();
        walk_atoms(self, &mut out);
        out
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Member(a, b) | Formula::Equal(a, b) => {
            for name in [a, b] {
                if !bound.iter().any(|x| x == name) {
                    out.insert(name.clone());
                }
            }
        }
        Formula::Not(p) => collect_free(p, bound, out),
        Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
            collect_free(p, bound, out);
            collect_free(q, bound, out);
        }
        Formula::Forall(v, p) | Formula::Exists(v, p) => {
            bound.push(v.clone());
            collect_free(p, bound, out);
            bound.pop();
        }
    }
}

fn walk_atoms(f: &Formula, out: &mut Vec<(String, String, bool)>) {
    match f {
        Formula::Member(a, b) => out.push((a.clone(), b.clone(), true)),
        Formula::Equal(a, b) => out.push((a.clone(), b.clone(), false)),
        Formula::Not(p) => walk_atoms(p, out),
        Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
            walk_atoms(p, out);
            walk_atoms(q, out);
        }
        Formula::Forall(_, p) | Formula::Exists(_, p) => walk_atoms(p, out),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Member(a, b) => write!(f, "{a} in {b}"),
            Formula::Equal(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(p) => write!(f, "~({p})"),
            Formula::And(p, q) => write!(f, "({p} & {q})"),
            Formula::Or(p, q) => write!(f, "({p} | {q})"),
            Formula::Implies(p, q) => write!(f, "({p} -> {q})"),
            Formula::Iff(p, q) => write!(f, "({p} <-> {q})"),
            Formula::Forall(v, p) => write!(f, "forall {v}. ({p})"),
            Formula::Exists(v, p) => write!(f, "exists {v}. ({p})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_skip_bound_names() {
        let f = Formula::Forall(
            "z".into(),
            Box::new(Formula::Not(Box::new(Formula::Member("z".into(), "x".into())))),
        );
        let free: Vec<String> = f.free_vars().into_iter().collect();
        assert_eq!(free, vec!["x".to_string()]);
    }

    #[test]
    fn atoms_in_syntactic_order() {
        let f = Formula::And(
            Box::new(Formula::Member("x".into(), "y".into())),
            Box::new(Formula::Equal("y".into(), "z".into())),
        );
        assert_eq!(
            f.atoms(),
            vec![
                ("x".into(), "y".into(), true),
                ("y".into(), "z".into(), false)
            ]
        );
    }
}
