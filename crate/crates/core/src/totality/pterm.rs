//! Placeholder terms: finite term trees standing for hypothetical objects
//! built from an aggregate that does not exist yet.
//!
//! A term's leaves are either the placeholder `@I` or concrete sets;
//! internal nodes aggregate. Instantiating a term plugs a concrete set into
//! the placeholder leaves; binding them to an equation variable instead is
//! how a term ends up defining a circular set.

use std::fmt;

use thiserror::Error;

use crate::canon::CanonSet;
use crate::parse::{lex, ParseError, Token, Tokens};
use crate::render;
use crate::set::from_elements;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PTerm {
    /// The placeholder leaf `@I`.
    Placeholder,
    /// A concrete set leaf.
    Set(CanonSet),
    /// An aggregation of sub-terms.
    Agg(Vec<PTerm>),
}

impl PTerm {
    pub fn contains_placeholder(&self) -> bool {
        match self {
            PTerm::Placeholder => true,
            PTerm::Set(_) => false,
            PTerm::Agg(ts) => ts.iter().any(PTerm::contains_placeholder),
        }
    }

    /// Plugs `value` into every placeholder leaf and aggregates.
    pub fn instantiate(&self, value: &CanonSet) -> CanonSet {
        match self {
            PTerm::Placeholder => value.clone(),
            PTerm::Set(s) => s.clone(),
            PTerm::Agg(ts) => {
                let elems: Vec<CanonSet> = ts.iter().map(|t| t.instantiate(value)).collect();
                from_elements(&elems)
            }
        }
    }
}

impl fmt::Display for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PTerm::Placeholder => write!(f, "@I"),
            PTerm::Set(s) => {
                let text = render::to_literal(s);
                if text.contains("let ") {
                    write!(f, "({text})")
                } else {
                    write!(f, "{text}")
                }
            }
            PTerm::Agg(ts) => {
                write!(f, "{{")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PTermError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("term literal must contain the placeholder `@I`")]
    NoPlaceholder,
}

/// Parses a brace literal with `@I` leaves, e.g. `{@I, {}}`. Placeholder-free
/// subtrees collapse into concrete set leaves.
pub fn parse_pterm(text: &str) -> Result<PTerm, PTermError> {
    let mut t = Tokens::new(lex(text)?);
    let term = parse_inner(&mut t)?;
    t.expect(&Token::End, "end of input")?;
    if !term.contains_placeholder() {
        return Err(PTermError::NoPlaceholder);
    }
    Ok(collapse(term))
}

fn parse_inner(t: &mut Tokens) -> Result<PTerm, ParseError> {
    match t.peek() {
        Token::Placeholder => {
            t.bump();
            Ok(PTerm::Placeholder)
        }
        Token::LBrace => {
            t.bump();
            let mut elems = Vec::new();
            if *t.peek() != Token::RBrace {
                loop {
                    elems.push(parse_inner(t)?);
                    match t.peek() {
                        Token::Comma => {
                            t.bump();
                        }
                        Token::RBrace => break,
                        _ => return Err(t.unexpected("`,` or `}`")),
                    }
                }
            }
            t.expect(&Token::RBrace, "`}`")?;
            Ok(PTerm::Agg(elems))
        }
        _ => Err(t.unexpected("`@I` or `{`")),
    }
}

fn collapse(t: PTerm) -> PTerm {
    match t {
        PTerm::Agg(ts) if !ts.iter().any(PTerm::contains_placeholder) => {
            let elems: Vec<CanonSet> = ts
                .into_iter()
                .map(|t| match collapse(t) {
                    PTerm::Set(s) => s,
                    _ => unreachable!("no placeholder below"),
                })
                .collect();
            PTerm::Set(from_elements(&elems))
        }
        PTerm::Agg(ts) => PTerm::Agg(ts.into_iter().map(collapse).collect()),
        leaf => leaf,
    }
}

/// A named way of producing placeholder terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// The bare placeholder `@I`.
    Bare,
    /// The singleton `{@I}`.
    Singleton,
    /// The aggregate of the ideal elements together with `@I`.
    Successor,
    /// The pair `{@I, u}` for a chosen set `u`.
    PairWith(CanonSet),
    /// A user-supplied term literal.
    Literal(PTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("unknown strategy name `{0}`")]
    Unknown(String),
}

impl std::str::FromStr for Strategy {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, StrategyError> {
        match s {
            "bare" => Ok(Strategy::Bare),
            "singleton" => Ok(Strategy::Singleton),
            "successor" => Ok(Strategy::Successor),
            other => Err(StrategyError::Unknown(other.to_string())),
        }
    }
}

/// Expands strategies into terms, one each, in order, capped at `budget`.
/// `ideal` supplies the elements the successor strategy aggregates.
pub fn placeholder_terms(
    strategies: &[Strategy],
    ideal: &[CanonSet],
    budget: usize,
) -> Vec<PTerm> {
    let mut out = Vec::new();
    for s in strategies {
        if out.len() >= budget {
            break;
        }
        let term = match s {
            Strategy::Bare => PTerm::Placeholder,
            Strategy::Singleton => PTerm::Agg(vec![PTerm::Placeholder]),
            Strategy::Successor => {
                let mut elems: Vec<PTerm> =
                    ideal.iter().map(|e| PTerm::Set(e.clone())).collect();
                elems.push(PTerm::Placeholder);
                PTerm::Agg(elems)
            }
            Strategy::PairWith(u) => {
                PTerm::Agg(vec![PTerm::Placeholder, PTerm::Set(u.clone())])
            }
            Strategy::Literal(t) => t.clone(),
        };
        out.push(term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{empty, ordinal, quine_atom};

    #[test]
    fn bare_strategy() {
        let ts = placeholder_terms(&[Strategy::Bare], &[], 8);
        assert_eq!(ts, vec![PTerm::Placeholder]);
    }

    #[test]
    fn bare_and_singleton() {
        let ts = placeholder_terms(&[Strategy::Bare, Strategy::Singleton], &[], 8);
        assert_eq!(
            ts,
            vec![
                PTerm::Placeholder,
                PTerm::Agg(vec![PTerm::Placeholder]),
            ]
        );
        assert_eq!(format!("{}", ts[1]), "{@I}");
    }

    #[test]
    fn successor_aggregates_the_ideal_elements() {
        let ideal = [empty(), ordinal(1)];
        let ts = placeholder_terms(&[Strategy::Successor], &ideal, 8);
        assert_eq!(ts.len(), 1);
        let PTerm::Agg(elems) = &ts[0] else { panic!() };
        assert_eq!(elems.len(), 3);
        assert_eq!(elems[2], PTerm::Placeholder);
        // Instantiating with ordinal 2 gives ordinal 3.
        assert_eq!(ts[0].instantiate(&ordinal(2)), ordinal(3));
    }

    #[test]
    fn budget_caps_output() {
        let ts = placeholder_terms(&[Strategy::Bare, Strategy::Singleton], &[], 1);
        assert_eq!(ts.len(), 1);
    }

    #[test]
    fn unknown_strategy_name() {
        let err = "frobnicate".parse::<Strategy>().unwrap_err();
        assert_eq!(err, StrategyError::Unknown("frobnicate".into()));
    }

    #[test]
    fn parse_and_collapse() {
        let t = parse_pterm("{@I, {{}, {{}}}}").unwrap();
        let PTerm::Agg(elems) = &t else { panic!() };
        assert_eq!(elems.len(), 2);
        assert_eq!(elems[1], PTerm::Set(ordinal(2)));
    }

    #[test]
    fn placeholder_required() {
        assert_eq!(parse_pterm("{{}}").unwrap_err(), PTermError::NoPlaceholder);
    }

    #[test]
    fn instantiation_plugs_every_leaf() {
        let t = parse_pterm("{@I, {@I}}").unwrap();
        let got = t.instantiate(&empty());
        assert_eq!(got, from_elements(&[empty(), ordinal(1)]));
    }

    #[test]
    fn cyclic_set_leaves_display_with_bindings() {
        let t = PTerm::Agg(vec![PTerm::Placeholder, PTerm::Set(quine_atom())]);
        assert_eq!(format!("{t}"), "{@I, (let s0 = {s0}; s0)}");
    }
}
