//! Text format for presentations, trees and linear combinations.
//!
//! ```text
//! operad Ass
//! field Q
//! gen mu arity=2 degree=0 symmetry=none
//! rel mu(mu(1,2),3) - mu(1,mu(2,3))
//! diff smu -> mu
//! ```
//!
//! Further directives: `planar`, `integral`, and `class NAME = expr` for
//! named elements. `#` starts a comment.

use std::fmt::Write as _;

use crate::dgoperad::Presentation;
use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar};
use crate::symtree::{GeneratorSymbol, OperadElement, Signature, Symmetry, Tree};

fn perr(line: usize, column: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        token: token.to_string(),
        message: message.into(),
    }
}

/// Parses a presentation file.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut pres = Presentation::new("unnamed", Field::Rational, false);
    let mut seen_gen = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let (kw, rest) = match trimmed.find(char::is_whitespace) {
            Some(p) => (&trimmed[..p], &trimmed[p..]),
            None => (trimmed.trim_end(), ""),
        };
        let rest_col = indent + kw.len() + 1 + (rest.len() - rest.trim_start().len());
        let rest = rest.trim();
        let col = |offset: usize| rest_col + offset;
        match kw {
            "operad" => {
                if rest.is_empty() {
                    return Err(perr(lineno, col(0), kw, "missing operad name"));
                }
                pres.name = rest.to_string();
            }
            "field" => {
                if seen_gen {
                    return Err(perr(lineno, indent + 1, kw, "field must be declared before generators"));
                }
                let f = parse_field(rest).ok_or_else(|| perr(lineno, col(0), rest, "unknown field"))?;
                pres.field = f;
            }
            "planar" => {
                if seen_gen {
                    return Err(perr(lineno, indent + 1, kw, "planar must be declared before generators"));
                }
                pres.planar = true;
            }
            "integral" => pres.integral = true,
            "gen" => {
                seen_gen = true;
                let g = parse_gen(rest, lineno, rest_col)?;
                pres.add_generator(g).map_err(|e| perr(lineno, col(0), rest, e.to_string()))?;
            }
            "rel" => {
                let e = parse_element_at(rest, pres.signature(), pres.field, lineno, rest_col)?;
                pres.add_relation(e).map_err(|e| perr(lineno, col(0), rest, e.to_string()))?;
            }
            "diff" => {
                let Some(arrow) = rest.find("->") else {
                    return Err(perr(lineno, col(0), rest, "expected `g -> expr`"));
                };
                let name = rest[..arrow].trim();
                let g = pres
                    .generator(name)
                    .map_err(|_| perr(lineno, col(0), name, "unknown generator"))?;
                let expr = &rest[arrow + 2..];
                let off = arrow + 2 + (expr.len() - expr.trim_start().len());
                let e = parse_element_at(expr.trim(), pres.signature(), pres.field, lineno, col(off))?;
                pres.set_differential(g, e).map_err(|e| perr(lineno, col(0), rest, e.to_string()))?;
            }
            "class" => {
                let Some(eq) = rest.find('=') else {
                    return Err(perr(lineno, col(0), rest, "expected `NAME = expr`"));
                };
                let name = rest[..eq].trim();
                if name.is_empty() || !name.chars().all(is_ident_char) {
                    return Err(perr(lineno, col(0), name, "bad class name"));
                }
                pres.add_class(name, rest[eq + 1..].trim());
            }
            _ => return Err(perr(lineno, indent + 1, kw, "unknown directive")),
        }
    }
    Ok(pres)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

/// `Q`, `F5`, `Fp:5`, `GF(5)`.
pub fn parse_field(s: &str) -> Option<Field> {
    let s = s.trim();
    if s == "Q" || s == "QQ" {
        return Some(Field::Rational);
    }
    let digits = s
        .strip_prefix("Fp:")
        .or_else(|| s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
        .or_else(|| s.strip_prefix('F'))?;
    Field::prime(digits.trim().parse().ok()?).ok()
}

fn parse_gen(rest: &str, line: usize, col0: usize) -> Result<GeneratorSymbol> {
    let mut words = rest.split_whitespace();
    let name = words.next().ok_or_else(|| perr(line, col0, "", "missing generator name"))?;
    if !name.chars().all(is_ident_char) || name.starts_with(|c: char| c.is_ascii_digit()) {
        return Err(perr(line, col0, name, "bad generator name"));
    }
    let (mut arity, mut degree, mut symmetry) = (None, 0i32, Symmetry::None);
    for w in words {
        let col = col0 + rest.find(w).unwrap_or(0);
        let (k, v) = w.split_once('=').ok_or_else(|| perr(line, col, w, "expected key=value"))?;
        match k {
            "arity" => arity = Some(v.parse::<usize>().map_err(|_| perr(line, col, w, "bad arity"))?),
            "degree" => degree = v.parse().map_err(|_| perr(line, col, w, "bad degree"))?,
            "symmetry" => symmetry = v.parse().map_err(|_| perr(line, col, w, "bad symmetry"))?,
            _ => return Err(perr(line, col, k, "unknown generator attribute")),
        }
    }
    let arity = arity.ok_or_else(|| perr(line, col0, name, "missing arity"))?;
    Ok(GeneratorSymbol::new(name, arity, degree, symmetry))
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '\''
}

/// Parses a linear combination such as `mu(mu(1,2),3) - 1/2*mu(1,mu(2,3))`.
pub fn parse_element(text: &str, sig: &Signature, field: Field) -> Result<OperadElement> {
    parse_element_at(text, sig, field, 1, 1)
}

/// Parses a single tree such as `mu(mu(1,2),3)`.
pub fn parse_tree(text: &str, sig: &Signature) -> Result<Tree> {
    let mut p = Parser::new(text, 1, 1);
    p.skip_ws();
    let t = p.tree(sig)?;
    p.skip_ws();
    if !p.done() {
        return Err(p.error("trailing input"));
    }
    t.validate(sig)?;
    Ok(t)
}

fn parse_element_at(text: &str, sig: &Signature, field: Field, line: usize, col: usize) -> Result<OperadElement> {
    let mut p = Parser::new(text, line, col);
    let mut terms: Vec<(Scalar, Tree, usize)> = Vec::new();
    p.skip_ws();
    if p.peek() == Some('0') && text.trim() == "0" {
        return Err(p.error("zero has no arity; omit the line instead"));
    }
    let mut first = true;
    loop {
        p.skip_ws();
        if p.done() {
            if first {
                return Err(p.error("empty expression"));
            }
            break;
        }
        let mut sign = 1;
        match p.peek() {
            Some('+') if !first => {
                p.bump();
            }
            Some('-') => {
                p.bump();
                sign = -1;
            }
            _ if !first => return Err(p.error("expected `+` or `-`")),
            _ => {}
        }
        p.skip_ws();
        let start = p.pos;
        let coef = if p.peek().is_some_and(|c| c.is_ascii_digit()) && p.looks_like_coefficient() {
            let c = p.coefficient(field)?;
            p.skip_ws();
            if p.peek() == Some('*') {
                p.bump();
                p.skip_ws();
            }
            c
        } else {
            field.one()
        };
        let t = p.tree(sig)?;
        terms.push((coef.signed(sign), t, start));
        first = false;
    }
    let arity = terms[0].1.arity();
    let mut out = OperadElement::zero(field, arity);
    for (c, t, start) in terms {
        if t.arity() != arity {
            return Err(perr(line, col + start, &text[start..], "terms have different arities"));
        }
        t.validate(sig)
            .map_err(|e| perr(line, col + start, &text[start..], e.to_string()))?;
        out.add_tree(&t, &c, sig);
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str, line: usize, col: usize) -> Self {
        Parser { s, pos: 0, line, col }
    }

    fn done(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn error(&self, msg: &str) -> Error {
        let rest = &self.s[self.pos.min(self.s.len())..];
        let token: String = rest.chars().take_while(|c| !c.is_whitespace()).take(24).collect();
        perr(self.line, self.col + self.pos, &token, msg)
    }

    /// A leading number is a coefficient unless the whole term is a leaf.
    fn looks_like_coefficient(&self) -> bool {
        let rest = &self.s[self.pos..];
        let end = rest
            .find(|c: char| !(c.is_ascii_digit() || c == '/'))
            .unwrap_or(rest.len());
        let after = rest[end..].trim_start();
        after.starts_with('*') || after.starts_with(|c: char| c.is_alphabetic() || c == '_')
    }

    fn coefficient(&mut self, field: Field) -> Result<Scalar> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
            self.bump();
        }
        let text = &self.s[start..self.pos];
        field.parse(text).ok_or_else(|| {
            perr(self.line, self.col + start, text, "bad coefficient")
        })
    }

    fn tree(&mut self, sig: &Signature) -> Result<Tree> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                let text = &self.s[start..self.pos];
                let l: usize = text.parse().map_err(|_| perr(self.line, self.col + start, text, "bad leaf"))?;
                if l == 0 || l > u16::MAX as usize {
                    return Err(perr(self.line, self.col + start, text, "leaf labels start at 1"));
                }
                Ok(Tree::leaf(l))
            }
            Some(c) if is_ident_char(c) => {
                while self.peek().is_some_and(is_ident_char) {
                    self.bump();
                }
                let name = &self.s[start..self.pos];
                let g = sig
                    .find(name)
                    .filter(|g| !sig.is_marker(*g))
                    .ok_or_else(|| perr(self.line, self.col + start, name, "unknown generator"))?;
                self.skip_ws();
                if self.peek() != Some('(') {
                    // a bare name is the corolla
                    return Ok(Tree::corolla(g, sig.arity(g)));
                }
                self.bump();
                let mut kids = Vec::new();
                loop {
                    kids.push(self.tree(sig)?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.bump(),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        _ => return Err(self.error("expected `,` or `)`")),
                    }
                }
                if kids.len() != sig.arity(g) {
                    return Err(perr(
                        self.line,
                        self.col + start,
                        name,
                        format!("`{name}` takes {} inputs, got {}", sig.arity(g), kids.len()),
                    ));
                }
                Ok(Tree::node(g, kids))
            }
            _ => Err(self.error("expected a tree")),
        }
    }
}

/// Prints a presentation in the file format; parsing the output returns an
/// equal presentation.
pub fn format_presentation(p: &Presentation) -> String {
    let sig = p.signature();
    let mut s = String::new();
    let _ = writeln!(s, "operad {}", p.name);
    let _ = writeln!(s, "field {}", p.field);
    if p.planar {
        s.push_str("planar\n");
    }
    if p.integral {
        s.push_str("integral\n");
    }
    for (_, g) in sig.generators() {
        let _ = writeln!(
            s,
            "gen {} arity={} degree={} symmetry={}",
            g.name, g.arity, g.degree, g.symmetry
        );
    }
    for r in p.relations() {
        let _ = writeln!(s, "rel {}", r.format(sig));
    }
    for (g, e) in p.differential_map() {
        let _ = writeln!(s, "diff {} -> {}", sig.get(*g).name, e.format(sig));
    }
    for (name, expr) in p.classes() {
        let _ = writeln!(s, "class {name} = {expr}");
    }
    s
}

/// Presentations shipped with the crate, by file stem.
pub const BUNDLED: &[(&str, &str)] = &[
    ("ass", include_str!("../data/ass.op")),
    ("comm", include_str!("../data/comm.op")),
    ("lie", include_str!("../data/lie.op")),
    ("free_mu", include_str!("../data/free_mu.op")),
    ("lu_ass", include_str!("../data/lu_ass.op")),
    ("comm_free", include_str!("../data/comm_free.op")),
];

/// Parses a bundled presentation.
pub fn bundled(name: &str) -> Result<Presentation> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Invalid(format!("no bundled presentation `{name}`")))?;
    parse_presentation(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ASS: &str = "operad Ass\nfield Q\ngen mu arity=2 degree=0 symmetry=none\nrel mu(mu(1,2),3) - mu(1,mu(2,3))\n";

    #[test]
    fn parses_and_round_trips() {
        let p = parse_presentation(ASS).unwrap();
        assert_eq!(p.signature().len(), 1);
        assert_eq!(p.relations().len(), 1);
        let again = parse_presentation(&format_presentation(&p)).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn coefficients_and_leaves() {
        let p = parse_presentation(ASS).unwrap();
        let e = parse_element("1/2*mu(2,1) - 3 mu(1,2)", p.signature(), Field::Rational).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.format(p.signature()), "-3*mu(1,2) + 1/2*mu(2,1)");
    }

    #[test]
    fn reports_position() {
        let err = parse_presentation("field Q\ngen mu arity=2\nrel mu(1,2,3)\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 5);
            }
            e => panic!("unexpected {e}"),
        }
        let err = parse_presentation("gen mu arity=2\nrel nu(1,2)\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, ref token, .. } if token == "nu"));
    }

    #[test]
    fn planar_rejects_symmetric_generators() {
        assert!(parse_presentation("planar\ngen c arity=2 symmetry=symmetric\n").is_err());
    }
}
