//! Text syntax for S5 formulas.
//!
//! Native grammar, binding tightest to loosest: prefix `~`, `box`/`dia`
//! (also written `[]`/`<>`), `&`, `|`, `->` (right associative), `<->`.
//! Atoms match `[a-zA-Z_][a-zA-Z0-9_]*` and must not be keywords or use the
//! reserved `aux<digits>` scheme. The InToHyLo reader accepts the usual
//! `begin ... end` wrapper with indexed modalities (`[r1]`/`[1]`/`#1` for
//! box, `<r1>`/`<1>` for diamond); S5 is mono-modal, so any index other
//! than 1 is rejected.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{is_reserved_name, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceFormat {
    Native,
    Intohylo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    BoxOp,          // `box`, `[]`, `[r1]`, `#1`
    DiamondOp,      // `dia`, `<>`, `<r1>`
    Begin,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
    fmt: SourceFormat,
}

struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, fmt: SourceFormat) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1, fmt }
    }

    fn err(&self, line: u32, col: u32, message: String) -> ParseError {
        ParseError { line, col, message }
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    /// Validates an index such as `r1` or `1`; only 1 is allowed.
    fn check_index(&self, body: &str, line: u32, col: u32) -> Result<(), ParseError> {
        let digits = body.strip_prefix('r').unwrap_or(body);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(line, col, format!("malformed modality index `{body}`")));
        }
        if digits.trim_start_matches('0') != "1" {
            return Err(self.err(
                line,
                col,
                format!("modality index `{body}` is not 1; S5 is mono-modal"),
            ));
        }
        Ok(())
    }

    fn next(&mut self) -> Result<Option<Spanned>, ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let Some(b) = self.peek() else { return Ok(None) };
        let tok = match b {
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'~' => {
                self.bump();
                Tok::Not
            }
            b'!' if self.fmt == SourceFormat::Intohylo => {
                self.bump();
                Tok::Not
            }
            b'&' => {
                self.bump();
                Tok::And
            }
            b'|' => {
                self.bump();
                Tok::Or
            }
            b'-' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Tok::Implies
                } else if self.fmt == SourceFormat::Intohylo {
                    Tok::Not
                } else {
                    return Err(self.err(line, col, "expected `->`".to_string()));
                }
            }
            b'[' => {
                self.bump();
                let mut body = String::new();
                while let Some(c) = self.peek() {
                    if c == b']' {
                        break;
                    }
                    body.push(self.bump() as char);
                }
                if self.peek() != Some(b']') {
                    return Err(self.err(line, col, "unterminated `[`".to_string()));
                }
                self.bump();
                if !body.is_empty() {
                    self.check_index(&body, line, col)?;
                }
                Tok::BoxOp
            }
            b'<' => {
                self.bump();
                if self.peek() == Some(b'-') && self.peek2() == Some(b'>') {
                    self.bump();
                    self.bump();
                    Tok::Iff
                } else {
                    let mut body = String::new();
                    while let Some(c) = self.peek() {
                        if c == b'>' {
                            break;
                        }
                        body.push(self.bump() as char);
                    }
                    if self.peek() != Some(b'>') {
                        return Err(self.err(line, col, "unterminated `<`".to_string()));
                    }
                    self.bump();
                    if !body.is_empty() {
                        self.check_index(&body, line, col)?;
                    }
                    Tok::DiamondOp
                }
            }
            b'#' if self.fmt == SourceFormat::Intohylo => {
                self.bump();
                let mut body = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    body.push(self.bump() as char);
                }
                self.check_index(&body, line, col)?;
                Tok::BoxOp
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut name = String::new();
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    name.push(self.bump() as char);
                }
                match name.as_str() {
                    "box" => Tok::BoxOp,
                    "dia" => Tok::DiamondOp,
                    "begin" => Tok::Begin,
                    "end" => Tok::End,
                    _ => {
                        if is_reserved_name(&name) {
                            return Err(self.err(
                                line,
                                col,
                                format!("atom name `{name}` uses the reserved aux prefix"),
                            ));
                        }
                        Tok::Ident(name)
                    }
                }
            }
            other => {
                return Err(self.err(line, col, format!("unexpected character `{}`", other as char)))
            }
        };
        Ok(Some(Spanned { tok, line, col }))
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn at(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, message: String) -> ParseError {
        let (line, col) = self.at();
        ParseError { line, col, message }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    // iff := imp ('<->' iff)?
    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.iff()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    // imp := or ('->' imp)?
    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.imp()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = alloc::vec![self.conj()?];
        while self.eat(&Tok::Or) {
            parts.push(self.conj()?);
        }
        Ok(Formula::or(parts))
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = alloc::vec![self.unary()?];
        while self.eat(&Tok::And) {
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::BoxOp) => {
                self.pos += 1;
                Ok(Formula::bx(self.unary()?))
            }
            Some(Tok::DiamondOp) => {
                self.pos += 1;
                Ok(Formula::dia(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::atom(&name))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(other) => Err(self.err(format!("unexpected token {other:?}"))),
            None => Err(self.err("unexpected end of input".to_string())),
        }
    }
}

/// Parses a formula. The AST is returned as written: `->`/`<->` survive as
/// nodes (run [`Formula::desugar`] to remove them) and double negations are
/// kept.
pub fn parse(text: &str, fmt: SourceFormat) -> Result<Formula, ParseError> {
    let mut lx = Lexer::new(text, fmt);
    let mut toks = Vec::new();
    while let Some(t) = lx.next()? {
        toks.push(t);
    }
    let mut p = Parser { toks, pos: 0 };
    let f = match fmt {
        SourceFormat::Native => p.iff()?,
        SourceFormat::Intohylo => {
            p.expect(Tok::Begin, "`begin`")?;
            let f = p.iff()?;
            p.expect(Tok::End, "`end`")?;
            f
        }
    };
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after formula".to_string()));
    }
    Ok(f)
}

// Precedence levels used when printing; higher binds tighter.
const PREC_IFF: u8 = 0;
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => PREC_IFF,
        Formula::Implies(..) => PREC_IMP,
        Formula::Or(_) => PREC_OR,
        Formula::And(_) => PREC_AND,
        _ => PREC_UNARY,
    }
}

fn render_at(f: &Formula, min: u8, out: &mut String) {
    let wrap = prec(f) < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Atom(a) => out.push_str(&a.name),
        Formula::Not(inner) => {
            out.push('~');
            render_at(inner, PREC_UNARY, out);
        }
        Formula::Box(inner) => {
            out.push_str("box(");
            render_at(inner, PREC_IFF, out);
            out.push(')');
        }
        Formula::Diamond(inner) => {
            out.push_str("dia(");
            render_at(inner, PREC_IFF, out);
            out.push(')');
        }
        Formula::And(parts) => {
            for (k, p) in parts.iter().enumerate() {
                if k > 0 {
                    out.push_str(" & ");
                }
                render_at(p, PREC_UNARY, out);
            }
        }
        Formula::Or(parts) => {
            for (k, p) in parts.iter().enumerate() {
                if k > 0 {
                    out.push_str(" | ");
                }
                render_at(p, PREC_AND, out);
            }
        }
        Formula::Implies(a, b) => {
            render_at(a, PREC_OR, out);
            out.push_str(" -> ");
            render_at(b, PREC_IMP, out);
        }
        Formula::Iff(a, b) => {
            render_at(a, PREC_IMP, out);
            out.push_str(" <-> ");
            render_at(b, PREC_IFF, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Prints a formula in the native syntax; `parse(render(f), Native)` gives
/// back a structurally equal tree.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    render_at(f, PREC_IFF, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    fn native(s: &str) -> Formula {
        parse(s, SourceFormat::Native).unwrap()
    }

    #[test]
    fn example_formula_shape() {
        let f = native("p & box(p | q) & (dia(p & q) | dia(~p & ~q))");
        let expect = F::and(alloc::vec![
            F::atom("p"),
            F::bx(F::or(alloc::vec![F::atom("p"), F::atom("q")])),
            F::or(alloc::vec![
                F::dia(F::and(alloc::vec![F::atom("p"), F::atom("q")])),
                F::dia(F::and(alloc::vec![
                    F::not(F::atom("p")),
                    F::not(F::atom("q")),
                ])),
            ]),
        ]);
        assert_eq!(f, expect);
    }

    #[test]
    fn double_negation_is_kept() {
        assert_eq!(native("~~p"), F::not(F::not(F::atom("p"))));
    }

    #[test]
    fn arrows_parse_and_desugar() {
        let f = native("p -> q");
        assert_eq!(f, F::implies(F::atom("p"), F::atom("q")));
        assert_eq!(
            f.desugar(),
            F::or(alloc::vec![F::not(F::atom("p")), F::atom("q")])
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = native("a -> b -> c");
        assert_eq!(
            f,
            F::implies(F::atom("a"), F::implies(F::atom("b"), F::atom("c")))
        );
    }

    #[test]
    fn bracket_modalities() {
        assert_eq!(native("[] p"), F::bx(F::atom("p")));
        assert_eq!(native("<> p"), F::dia(F::atom("p")));
        assert_eq!(native("~dia(p)"), F::not(F::dia(F::atom("p"))));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            native("box p | q"),
            F::or(alloc::vec![F::bx(F::atom("p")), F::atom("q")])
        );
        assert_eq!(
            native("a & b | c"),
            F::or(alloc::vec![
                F::and(alloc::vec![F::atom("a"), F::atom("b")]),
                F::atom("c")
            ])
        );
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            render(&F::bx(F::or(alloc::vec![F::atom("p"), F::atom("q")]))),
            "box(p | q)"
        );
        assert_eq!(render(&F::not(F::dia(F::atom("p")))), "~dia(p)");
        let f = native("(a -> b) -> c");
        assert_eq!(render(&f), "(a -> b) -> c");
    }

    #[test]
    fn reserved_prefix_rejected() {
        let e = parse("aux1 & p", SourceFormat::Native).unwrap_err();
        assert!(e.message.contains("reserved"));
        assert!(parse("auxiliary", SourceFormat::Native).is_ok());
    }

    #[test]
    fn error_position() {
        let e = parse("p &\n& q", SourceFormat::Native).unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
    }

    #[test]
    fn intohylo_basics() {
        let f = parse("begin ([r1](p1 | p2) & <r1> ~p1) end", SourceFormat::Intohylo).unwrap();
        assert_eq!(
            f,
            F::and(alloc::vec![
                F::bx(F::or(alloc::vec![F::atom("p1"), F::atom("p2")])),
                F::dia(F::not(F::atom("p1"))),
            ])
        );
        let g = parse("begin #1 p1 end", SourceFormat::Intohylo).unwrap();
        assert_eq!(g, F::bx(F::atom("p1")));
    }

    #[test]
    fn intohylo_rejects_other_indices() {
        let e = parse("begin [r2] p1 end", SourceFormat::Intohylo).unwrap_err();
        assert!(e.message.contains("mono-modal"));
        let e2 = parse("begin <2> p1 end", SourceFormat::Intohylo).unwrap_err();
        assert!(e2.message.contains("mono-modal"));
    }
}
