//! Parser for the set-literal grammar.
//!
//! ```text
//! program := ('let' NAME '=' set ';')* set
//! set     := '{' [set (',' set)*] '}' | NAME
//! ```
//!
//! `let` bindings may be mutually recursive; `let a = {a}; a` denotes the
//! self-membered singleton. [`parse_set`] reads a full program into a graph;
//! [`parse_system`] reads a bindings-only program as an equation system,
//! flattening nested braces into fresh variables.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Apg, GraphBuilder};
use crate::solver::{EquationSystem, SetTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: unexpected {found}, expected {expected}")]
    Unexpected {
        line: u32,
        col: u32,
        found: String,
        expected: String,
    },
    #[error("{line}:{col}: invalid character `{ch}`")]
    InvalidChar { line: u32, col: u32, ch: char },
    #[error("{line}:{col}: unbound name `{name}`")]
    Unbound { line: u32, col: u32, name: String },
    #[error("{line}:{col}: duplicate binding `{name}`")]
    DuplicateBinding { line: u32, col: u32, name: String },
    #[error("{line}:{col}: `{name}` is defined only through a cycle of aliases")]
    AliasCycle { line: u32, col: u32, name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    LBrace,
    RBrace,
    Comma,
    Semi,
    Equals,
    Let,
    Placeholder,
    Name(String),
    End,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::LBrace => "`{`".into(),
            Token::RBrace => "`}`".into(),
            Token::Comma => "`,`".into(),
            Token::Semi => "`;`".into(),
            Token::Equals => "`=`".into(),
            Token::Let => "`let`".into(),
            Token::Placeholder => "`@I`".into(),
            Token::Name(n) => format!("name `{n}`"),
            Token::End => "end of input".into(),
        }
    }
}

/// Tokenizes a set-literal or placeholder-term source string.
pub(crate) fn lex(text: &str) -> Result<Vec<(Token, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let pos = Pos { line, col };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '{' | '}' | ',' | ';' | '=' => {
                chars.next();
                col += 1;
                let t = match ch {
                    '{' => Token::LBrace,
                    '}' => Token::RBrace,
                    ',' => Token::Comma,
                    ';' => Token::Semi,
                    _ => Token::Equals,
                };
                out.push((t, pos));
            }
            '@' => {
                chars.next();
                col += 1;
                match chars.peek() {
                    Some('I') => {
                        chars.next();
                        col += 1;
                        out.push((Token::Placeholder, pos));
                    }
                    _ => {
                        return Err(ParseError::InvalidChar {
                            line: pos.line,
                            col: pos.col,
                            ch: '@',
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let t = if name == "let" { Token::Let } else { Token::Name(name) };
                out.push((t, pos));
            }
            c => {
                return Err(ParseError::InvalidChar { line, col, ch: c });
            }
        }
    }
    out.push((
        Token::End,
        Pos { line, col },
    ));
    Ok(out)
}

pub(crate) struct Tokens {
    toks: Vec<(Token, Pos)>,
    at: usize,
}

impl Tokens {
    pub(crate) fn new(toks: Vec<(Token, Pos)>) -> Self {
        Tokens { toks, at: 0 }
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub(crate) fn bump(&mut self) -> (Token, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, want: &Token, expected: &str) -> Result<Pos, ParseError> {
        if self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(expected))
        }
    }

    pub(crate) fn unexpected(&self, expected: &str) -> ParseError {
        let (t, p) = &self.toks[self.at];
        ParseError::Unexpected {
            line: p.line,
            col: p.col,
            found: t.describe(),
            expected: expected.into(),
        }
    }
}

// Surface syntax before name resolution.
#[derive(Debug, Clone)]
enum Expr {
    Braces(Vec<Expr>),
    Name(String, Pos),
}

struct Program {
    bindings: Vec<(String, Pos, Expr)>,
    body: Option<Expr>,
}

fn parse_expr(t: &mut Tokens) -> Result<Expr, ParseError> {
    match t.peek() {
        Token::LBrace => {
            t.bump();
            let mut elems = Vec::new();
            if *t.peek() != Token::RBrace {
                loop {
                    elems.push(parse_expr(t)?);
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
            Ok(Expr::Braces(elems))
        }
        Token::Name(_) => {
            let (tok, pos) = t.bump();
            let Token::Name(n) = tok else { unreachable!() };
            Ok(Expr::Name(n, pos))
        }
        _ => Err(t.unexpected("`{` or a name")),
    }
}

fn parse_program(text: &str, need_body: bool) -> Result<Program, ParseError> {
    let mut t = Tokens::new(lex(text)?);
    let mut bindings: Vec<(String, Pos, Expr)> = Vec::new();
    while *t.peek() == Token::Let {
        t.bump();
        let (tok, pos) = t.bump();
        let name = match tok {
            Token::Name(n) => n,
            other => {
                return Err(ParseError::Unexpected {
                    line: pos.line,
                    col: pos.col,
                    found: other.describe(),
                    expected: "a name after `let`".into(),
                })
            }
        };
        if bindings.iter().any(|(n, _, _)| *n == name) {
            return Err(ParseError::DuplicateBinding {
                line: pos.line,
                col: pos.col,
                name,
            });
        }
        t.expect(&Token::Equals, "`=`")?;
        let rhs = parse_expr(&mut t)?;
        t.expect(&Token::Semi, "`;`")?;
        bindings.push((name, pos, rhs));
    }
    let body = if need_body {
        Some(parse_expr(&mut t)?)
    } else {
        None
    };
    t.expect(&Token::End, "end of input")?;
    Ok(Program { bindings, body })
}

/// Parses a full program (bindings plus a final expression) into the graph
/// it denotes. Bindings not reachable from the final expression are dropped.
pub fn parse_set(text: &str) -> Result<Apg, ParseError> {
    let prog = parse_program(text, true)?;
    let mut b = GraphBuilder::new();
    // A node per non-alias binding.
    let mut node: BTreeMap<&str, Option<u32>> = BTreeMap::new();
    for (name, _, rhs) in &prog.bindings {
        let id = match rhs {
            Expr::Braces(_) => Some(b.add_node()),
            Expr::Name(..) => None, // alias, resolved below
        };
        node.insert(name.as_str(), id);
    }
    // Chase aliases to their defining binding.
    let mut resolved: BTreeMap<&str, u32> = BTreeMap::new();
    for (name, pos, _) in &prog.bindings {
        let mut seen = vec![name.as_str()];
        let mut cur = name.as_str();
        loop {
            match node.get(cur) {
                Some(Some(id)) => {
                    resolved.insert(name.as_str(), *id);
                    break;
                }
                Some(None) => {
                    let (_, _, rhs) = prog
                        .bindings
                        .iter()
                        .find(|(n, _, _)| n == cur)
                        .expect("binding exists");
                    let Expr::Name(next, npos) = rhs else { unreachable!() };
                    if seen.contains(&next.as_str()) {
                        return Err(ParseError::AliasCycle {
                            line: pos.line,
                            col: pos.col,
                            name: name.clone(),
                        });
                    }
                    if !node.contains_key(next.as_str()) {
                        return Err(ParseError::Unbound {
                            line: npos.line,
                            col: npos.col,
                            name: next.clone(),
                        });
                    }
                    seen.push(next.as_str());
                    cur = next.as_str();
                }
                None => unreachable!("alias chain stays within bindings"),
            }
        }
    }
    // Edges.
    fn node_of(
        e: &Expr,
        b: &mut GraphBuilder,
        resolved: &BTreeMap<&str, u32>,
    ) -> Result<u32, ParseError> {
        match e {
            Expr::Name(n, pos) => resolved.get(n.as_str()).copied().ok_or(ParseError::Unbound {
                line: pos.line,
                col: pos.col,
                name: n.clone(),
            }),
            Expr::Braces(elems) => {
                let v = b.add_node();
                for el in elems {
                    let c = node_of(el, b, resolved)?;
                    b.add_edge(v, c);
                }
                Ok(v)
            }
        }
    }
    for (name, _, rhs) in &prog.bindings {
        if let Expr::Braces(elems) = rhs {
            let v = resolved[name.as_str()];
            for el in elems {
                let c = node_of(el, &mut b, &resolved)?;
                b.add_edge(v, c);
            }
        }
    }
    let root = node_of(prog.body.as_ref().expect("body required"), &mut b, &resolved)?;
    Ok(b.into_apg(root))
}

/// Parses a bindings-only program as an equation system. Nested braces are
/// flattened into fresh `__k` variables; alias bindings copy the terms of
/// their target.
pub fn parse_system(text: &str) -> Result<EquationSystem, ParseError> {
    let prog = parse_program(text, false)?;
    let user: Vec<&str> = prog.bindings.iter().map(|(n, _, _)| n.as_str()).collect();
    let mut fresh_counter = 0usize;
    let mut fresh = |user: &[&str]| loop {
        fresh_counter += 1;
        let cand = format!("__{fresh_counter}");
        if !user.contains(&cand.as_str()) {
            return cand;
        }
    };

    let mut extra: Vec<(String, Vec<SetTerm>)> = Vec::new();
    fn term_of(
        e: &Expr,
        user: &[&str],
        extra: &mut Vec<(String, Vec<SetTerm>)>,
        fresh: &mut dyn FnMut(&[&str]) -> String,
    ) -> Result<SetTerm, ParseError> {
        match e {
            Expr::Name(n, pos) => {
                if user.contains(&n.as_str()) {
                    Ok(SetTerm::Var(n.clone()))
                } else {
                    Err(ParseError::Unbound {
                        line: pos.line,
                        col: pos.col,
                        name: n.clone(),
                    })
                }
            }
            Expr::Braces(elems) => {
                let name = fresh(user);
                let slot = extra.len();
                extra.push((name.clone(), Vec::new()));
                let mut terms = Vec::with_capacity(elems.len());
                for el in elems {
                    terms.push(term_of(el, user, extra, fresh)?);
                }
                extra[slot].1 = terms;
                Ok(SetTerm::Var(name))
            }
        }
    }

    // First pass: braces bindings become term lists directly.
    let mut main: Vec<(String, Option<Vec<SetTerm>>)> = Vec::new();
    for (name, _, rhs) in &prog.bindings {
        match rhs {
            Expr::Braces(elems) => {
                let mut terms = Vec::with_capacity(elems.len());
                for el in elems {
                    terms.push(term_of(el, &user, &mut extra, &mut fresh)?);
                }
                main.push((name.clone(), Some(terms)));
            }
            Expr::Name(..) => main.push((name.clone(), None)),
        }
    }
    // Second pass: aliases copy the terms of their (chased) target.
    let mut out: Vec<(String, Vec<SetTerm>)> = Vec::new();
    for (i, (name, terms)) in main.iter().enumerate() {
        match terms {
            Some(t) => out.push((name.clone(), t.clone())),
            None => {
                let (_, pos, _) = &prog.bindings[i];
                let mut seen = vec![name.as_str()];
                let mut cur = i;
                let copied = loop {
                    let (_, _, rhs) = &prog.bindings[cur];
                    let Expr::Name(next, npos) = rhs else { unreachable!() };
                    let Some(j) = prog.bindings.iter().position(|(n, _, _)| n == next) else {
                        return Err(ParseError::Unbound {
                            line: npos.line,
                            col: npos.col,
                            name: next.clone(),
                        });
                    };
                    if let (_, Some(t)) = &main[j] {
                        break t.clone();
                    }
                    if seen.contains(&next.as_str()) {
                        return Err(ParseError::AliasCycle {
                            line: pos.line,
                            col: pos.col,
                            name: name.clone(),
                        });
                    }
                    seen.push(next.as_str());
                    cur = j;
                };
                out.push((name.clone(), copied));
            }
        }
    }
    out.extend(extra);
    Ok(EquationSystem::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::CanonSet;
    use crate::set::{empty, ordinal, quine_atom};

    fn canon(text: &str) -> CanonSet {
        CanonSet::canonicalize(&parse_set(text).unwrap())
    }

    #[test]
    fn empty_braces() {
        assert_eq!(canon("{}"), empty());
    }

    #[test]
    fn self_loop_binding() {
        assert_eq!(canon("let a = {a}; a"), quine_atom());
    }

    #[test]
    fn ordinal_two_literal() {
        assert_eq!(canon("{{}, {{}}}"), ordinal(2));
    }

    #[test]
    fn unused_bindings_are_dropped() {
        assert_eq!(canon("let a = {a}; {}"), empty());
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(canon("let a = b; let b = {}; {a, b}"), ordinal(1));
    }

    #[test]
    fn alias_cycle_is_rejected() {
        let err = parse_set("let a = b; let b = a; a").unwrap_err();
        assert!(matches!(err, ParseError::AliasCycle { .. }), "{err}");
    }

    #[test]
    fn unbound_name_has_position() {
        let err = parse_set("{x}").unwrap_err();
        assert_eq!(
            err,
            ParseError::Unbound {
                line: 1,
                col: 2,
                name: "x".into()
            }
        );
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_set("{,}").unwrap_err();
        assert!(matches!(err, ParseError::Unexpected { line: 1, col: 2, .. }), "{err}");
    }

    #[test]
    fn duplicate_binding_rejected() {
        let err = parse_set("let a = {}; let a = {}; a").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateBinding { .. }), "{err}");
    }

    #[test]
    fn placeholder_rejected_in_plain_sets() {
        let err = parse_set("{@I}").unwrap_err();
        assert!(matches!(err, ParseError::Unexpected { .. }), "{err}");
    }

    #[test]
    fn system_flattens_nested_braces() {
        let sys = parse_system("let w2 = {{w2}};").unwrap();
        let names: Vec<&str> = sys.bindings().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["w2", "__1"]);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.get("w2"), Some(&quine_atom()));
    }

    #[test]
    fn system_supports_aliases() {
        let sys = parse_system("let a = b; let b = {b};").unwrap();
        let sol = sys.solve().unwrap();
        assert_eq!(sol.get("a"), Some(&quine_atom()));
        assert_eq!(sol.get("b"), Some(&quine_atom()));
    }

    #[test]
    fn system_rejects_trailing_expression() {
        assert!(parse_system("let a = {}; a").is_err());
    }

    #[test]
    fn fresh_names_avoid_user_names() {
        let sys = parse_system("let __1 = {}; let a = {{__1}};").unwrap();
        let names: Vec<&str> = sys.bindings().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["__1", "a", "__2"]);
        assert!(sys.validate().is_empty());
    }
}
