//! The constraint file language.
//!
//! ```text
//! file        := schema-decl stmt*
//! schema-decl := "schema" IDENT ":" IDENT+ ";"
//! stmt        := "key" "(" IDENT* ")" ";"  |  "ind" "(" IDENT* ";" IDENT* ")" ";"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::fmt::Write as _;

use crate::attrs::{is_identifier, AttrSet, Schema, MAX_ATTRIBUTES};
use crate::constraint::{Constraint, ConstraintSet};
use crate::error::{ParseError, ParseErrorKind, Position};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Semi,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Colon => "':'".into(),
            Tok::Semi => "';'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
            }
            ':' | ';' | '(' | ')' => {
                chars.next();
                column += 1;
                let t = match c {
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push((t, pos));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), pos));
            }
            other => {
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        }
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &(Tok, Position) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, position) = self.peek();
        ParseError {
            position: *position,
            kind: ParseErrorKind::Unexpected {
                expected: expected.into(),
                found: tok.describe(),
            },
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<Position, ParseError> {
        if self.peek().0 == want {
            Ok(self.bump().1)
        } else {
            Err(self.error(expected))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Position, ParseError> {
        match &self.peek().0 {
            Tok::Ident(s) if s == kw => Ok(self.bump().1),
            _ => Err(self.error(&format!("'{kw}'"))),
        }
    }

    fn ident(&mut self) -> Result<(String, Position), ParseError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            _ => {
                self.at -= 1;
                Err(self.error("identifier"))
            }
        }
    }

    fn idents(&mut self) -> Vec<(String, Position)> {
        let mut v = Vec::new();
        while let Tok::Ident(_) = self.peek().0 {
            let (t, p) = self.bump();
            if let Tok::Ident(s) = t {
                v.push((s, p));
            }
        }
        v
    }

    fn schema(&mut self) -> Result<Schema, ParseError> {
        let start = self.keyword("schema")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon, "':'")?;
        let attrs = self.idents();
        let end = self.expect(Tok::Semi, "attribute or ';'")?;
        if attrs.is_empty() {
            return Err(ParseError {
                position: end,
                kind: ParseErrorKind::EmptySchema,
            });
        }
        if attrs.len() > MAX_ATTRIBUTES {
            return Err(ParseError {
                position: start,
                kind: ParseErrorKind::TooManyAttributes(attrs.len()),
            });
        }
        for (i, (a, p)) in attrs.iter().enumerate() {
            if attrs[..i].iter().any(|(b, _)| a == b) {
                return Err(ParseError {
                    position: *p,
                    kind: ParseErrorKind::DuplicateAttribute(a.clone()),
                });
            }
        }
        Ok(Schema::new(name, attrs.into_iter().map(|(a, _)| a))
            .expect("validated schema declaration"))
    }

    fn attr_list(&mut self, schema: &Schema) -> Result<AttrSet, ParseError> {
        let mut set = AttrSet::EMPTY;
        for (a, p) in self.idents() {
            match schema.position(&a) {
                Some(i) => set.insert(i),
                None => {
                    return Err(ParseError {
                        position: p,
                        kind: ParseErrorKind::UnknownAttribute(a),
                    })
                }
            }
        }
        Ok(set)
    }

    /// A statement without its terminating `;`.
    fn statement(&mut self, schema: &Schema) -> Result<Constraint, ParseError> {
        let kw = match &self.peek().0 {
            Tok::Ident(s) if s == "key" || s == "ind" => s.clone(),
            _ => return Err(self.error("'key' or 'ind'")),
        };
        self.bump();
        self.expect(Tok::LParen, "'('")?;
        let c = if kw == "key" {
            let x = self.attr_list(schema)?;
            Constraint::Key(x)
        } else {
            let x = self.attr_list(schema)?;
            self.expect(Tok::Semi, "attribute or ';'")?;
            let y = self.attr_list(schema)?;
            Constraint::Ind(x, y)
        };
        self.expect(Tok::RParen, "attribute or ')'")?;
        Ok(c)
    }
}

/// Parses a constraint file into its schema and normalized constraint set.
pub fn parse_constraint_file(text: &str) -> Result<(Schema, ConstraintSet), ParseError> {
    let mut p = Parser::new(text)?;
    let schema = p.schema()?;
    let mut set = ConstraintSet::new();
    while p.peek().0 != Tok::Eof {
        let c = p.statement(&schema)?;
        p.expect(Tok::Semi, "';'")?;
        set.insert(c);
    }
    Ok((schema, set))
}

/// Parses a single `key(...)` or `ind(... ; ...)` query. A trailing `;` is
/// tolerated. The orientation of an independence atom is preserved.
pub fn parse_constraint(text: &str, schema: &Schema) -> Result<Constraint, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.statement(schema)?;
    if p.peek().0 == Tok::Semi {
        p.bump();
    }
    if p.peek().0 != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(c)
}

/// Renders a schema and constraint set in the file syntax; the output parses
/// back to the same pair.
pub fn print_constraint_file(schema: &Schema, constraints: &ConstraintSet) -> String {
    debug_assert!(schema.attributes().iter().all(|a| is_identifier(a)));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "schema {}: {};",
        schema.name(),
        schema.attributes().join(" ")
    );
    for c in constraints {
        let _ = writeln!(out, "{};", c.display(schema));
    }
    out
}
