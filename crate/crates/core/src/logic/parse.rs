//! Formula parser.
//!
//! ```text
//! f    := atom | '~' f | f '&' f | f '|' f | f '->' f | f '<->' f
//!       | ('forall'|'exists') NAME '.' f | '(' f ')'
//! atom := NAME 'in' NAME | NAME '=' NAME
//! ```
//!
//! Precedence `~ > & > | > -> > <->`; a quantifier body extends as far right
//! as possible. After parsing, bound variables are renamed apart whenever
//! they shadow a free name or another binder, so no variable is both bound
//! and free in the same scope.

use std::collections::{BTreeMap, BTreeSet};

use crate::parse::ParseError;

use super::ast::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    In,
    Equals,
    Not,
    And,
    Or,
    Arrow,
    Iff,
    Forall,
    Exists,
    Dot,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("name `{n}`"),
            Tok::In => "`in`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, u32, u32)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut it = text.chars().peekable();
    while let Some(&c) = it.peek() {
        let (l0, c0) = (line, col);
        match c {
            '\n' => {
                it.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                it.next();
                col += 1;
            }
            '~' | '&' | '|' | '.' | '(' | ')' | '=' => {
                it.next();
                col += 1;
                out.push((
                    match c {
                        '~' => Tok::Not,
                        '&' => Tok::And,
                        '|' => Tok::Or,
                        '.' => Tok::Dot,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        _ => Tok::Equals,
                    },
                    l0,
                    c0,
                ));
            }
            '-' => {
                it.next();
                col += 1;
                if it.peek() == Some(&'>') {
                    it.next();
                    col += 1;
                    out.push((Tok::Arrow, l0, c0));
                } else {
                    return Err(ParseError::InvalidChar { line: l0, col: c0, ch: '-' });
                }
            }
            '<' => {
                it.next();
                col += 1;
                if it.peek() == Some(&'-') {
                    it.next();
                    col += 1;
                    if it.peek() == Some(&'>') {
                        it.next();
                        col += 1;
                        out.push((Tok::Iff, l0, c0));
                        continue;
                    }
                }
                return Err(ParseError::InvalidChar { line: l0, col: c0, ch: '<' });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let t = match name.as_str() {
                    "in" => Tok::In,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Name(name),
                };
                out.push((t, l0, c0));
            }
            c => return Err(ParseError::InvalidChar { line, col, ch: c }),
        }
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

struct P {
    toks: Vec<(Tok, u32, u32)>,
    at: usize,
}

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        let (t, line, col) = &self.toks[self.at];
        ParseError::Unexpected {
            line: *line,
            col: *col,
            found: t.describe(),
            expected: expected.into(),
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    // Lowest precedence level; quantifier bodies restart here.
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?; // right-associative
            Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::Forall | Tok::Exists => {
                let q = self.bump();
                let name = self.name("a variable name after the quantifier")?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.formula()?; // extends right
                Ok(if q == Tok::Forall {
                    Formula::Forall(name, Box::new(body))
                } else {
                    Formula::Exists(name, Box::new(body))
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Name(_) => self.atom(),
            _ => Err(self.err("a formula")),
        }
    }

    fn name(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Name(_) => {
                let Tok::Name(n) = self.bump() else { unreachable!() };
                Ok(n)
            }
            _ => Err(self.err(expected)),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.name("a name")?;
        match self.peek() {
            Tok::In => {
                self.bump();
                let rhs = self.name("a name after `in`")?;
                Ok(Formula::Member(lhs, rhs))
            }
            Tok::Equals => {
                self.bump();
                let rhs = self.name("a name after `=`")?;
                Ok(Formula::Equal(lhs, rhs))
            }
            _ => Err(self.err("`in` or `=`")),
        }
    }
}

/// Parses a formula and renames bound variables apart.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = P {
        toks: lex(text)?,
        at: 0,
    };
    let raw = p.formula()?;
    p.expect(Tok::End, "end of input")?;
    Ok(rename_apart(raw))
}

/// Makes binders unique: a binder keeps its name only when that name is
/// neither free in the whole formula nor used by any other binder.
fn rename_apart(f: Formula) -> Formula {
    let free = f.free_vars();
    let mut binder_count: BTreeMap<String, usize> = BTreeMap::new();
    count_binders(&f, &mut binder_count);
    let mut used: BTreeSet<String> = free.clone();
    used.extend(binder_count.keys().cloned());
    let needs_rename = |name: &str| {
        free.contains(name) || binder_count.get(name).copied().unwrap_or(0) > 1
    };
    let mut scope: Vec<(String, String)> = Vec::new();
    rewrite(&f, &needs_rename, &mut used, &mut scope)
}

fn count_binders(f: &Formula, out: &mut BTreeMap<String, usize>) {
    match f {
        Formula::Member(..) | Formula::Equal(..) => {}
        Formula::Not(p) => count_binders(p, out),
        Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
            count_binders(p, out);
            count_binders(q, out);
        }
        Formula::Forall(v, p) | Formula::Exists(v, p) => {
            *out.entry(v.clone()).or_insert(0) += 1;
            count_binders(p, out);
        }
    }
}

fn rewrite(
    f: &Formula,
    needs_rename: &dyn Fn(&str) -> bool,
    used: &mut BTreeSet<String>,
    scope: &mut Vec<(String, String)>,
) -> Formula {
    let resolve = |name: &str, scope: &[(String, String)]| {
        scope
            .iter()
            .rev()
            .find(|(orig, _)| orig == name)
            .map(|(_, now)| now.clone())
            .unwrap_or_else(|| name.to_string())
    };
    match f {
        Formula::Member(a, b) => Formula::Member(resolve(a, scope), resolve(b, scope)),
        Formula::Equal(a, b) => Formula::Equal(resolve(a, scope), resolve(b, scope)),
        Formula::Not(p) => Formula::Not(Box::new(rewrite(p, needs_rename, used, scope))),
        Formula::And(p, q) => Formula::And(
            Box::new(rewrite(p, needs_rename, used, scope)),
            Box::new(rewrite(q, needs_rename, used, scope)),
        ),
        Formula::Or(p, q) => Formula::Or(
            Box::new(rewrite(p, needs_rename, used, scope)),
            Box::new(rewrite(q, needs_rename, used, scope)),
        ),
        Formula::Implies(p, q) => Formula::Implies(
            Box::new(rewrite(p, needs_rename, used, scope)),
            Box::new(rewrite(q, needs_rename, used, scope)),
        ),
        Formula::Iff(p, q) => Formula::Iff(
            Box::new(rewrite(p, needs_rename, used, scope)),
            Box::new(rewrite(q, needs_rename, used, scope)),
        ),
        Formula::Forall(v, p) | Formula::Exists(v, p) => {
            let fresh = if needs_rename(v) {
                let mut k = 1usize;
                loop {
                    let cand = format!("{v}#{k}");
                    if !used.contains(&cand) {
                        used.insert(cand.clone());
                        break cand;
                    }
                    k += 1;
                }
            } else {
                v.clone()
            };
            scope.push((v.clone(), fresh.clone()));
            let body = rewrite(p, needs_rename, used, scope);
            scope.pop();
            match f {
                Formula::Forall(..) => Formula::Forall(fresh, Box::new(body)),
                _ => Formula::Exists(fresh, Box::new(body)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(f: &Formula) -> Vec<String> {
        f.free_vars().into_iter().collect()
    }

    #[test]
    fn member_atom() {
        let f = parse_formula("x in y").unwrap();
        assert_eq!(f, Formula::Member("x".into(), "y".into()));
        assert_eq!(free(&f), vec!["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn quantifier_hides_its_variable() {
        let f = parse_formula("forall z. ~(z in x)").unwrap();
        assert_eq!(free(&f), vec!["x".to_string()]);
    }

    #[test]
    fn conjunction_with_negation() {
        let f = parse_formula("x in y & ~(x in x)").unwrap();
        assert_eq!(free(&f), vec!["x".to_string(), "y".to_string()]);
        assert_eq!(
            f,
            Formula::And(
                Box::new(Formula::Member("x".into(), "y".into())),
                Box::new(Formula::Not(Box::new(Formula::Member(
                    "x".into(),
                    "x".into()
                ))))
            )
        );
    }

    #[test]
    fn precedence_not_binds_tighter_than_and() {
        let f = parse_formula("~x = x & y = y").unwrap();
        assert!(matches!(f, Formula::And(..)));
    }

    #[test]
    fn precedence_and_over_or_over_implies_over_iff() {
        let f = parse_formula("a = a | b = b & c = c -> d = d <-> e = e").unwrap();
        // ((a=a | (b=b & c=c)) -> d=d) <-> e=e
        let Formula::Iff(lhs, _) = f else { panic!("expected iff at top") };
        assert!(matches!(*lhs, Formula::Implies(..)));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse_formula("forall x. x in y & y in z").unwrap();
        let Formula::Forall(_, body) = f else { panic!("expected forall at top") };
        assert!(matches!(*body, Formula::And(..)));
    }

    #[test]
    fn arrow_is_right_associative() {
        let f = parse_formula("a = a -> b = b -> c = c").unwrap();
        let Formula::Implies(_, rhs) = f else { panic!() };
        assert!(matches!(*rhs, Formula::Implies(..)));
    }

    #[test]
    fn shadowing_binder_is_renamed() {
        let f = parse_formula("x in x & forall x. x = x").unwrap();
        let Formula::And(_, q) = f else { panic!() };
        let Formula::Forall(v, body) = *q else { panic!() };
        assert_eq!(v, "x#1");
        assert_eq!(*body, Formula::Equal("x#1".into(), "x#1".into()));
    }

    #[test]
    fn sibling_binders_with_same_name_are_split() {
        let f = parse_formula("(forall x. x in y) & (forall x. y in x)").unwrap();
        let atoms = f.atoms();
        assert_eq!(atoms[0].0, "x#1");
        assert_eq!(atoms[1].1, "x#2");
    }

    #[test]
    fn lone_binder_keeps_its_name() {
        let f = parse_formula("exists y. (x in y & y in z)").unwrap();
        let Formula::Exists(v, _) = &f else { panic!() };
        assert_eq!(v, "y");
    }

    #[test]
    fn error_reports_position() {
        let err = parse_formula("x in & y").unwrap_err();
        assert!(matches!(err, ParseError::Unexpected { line: 1, col: 6, .. }), "{err}");
    }
}
