//! Tower documents and matrix files.
//!
//! ```text
//! # comment
//! base p3                      # or p2xp1, p1cubed, ci(5;2,2), custom ... end
//! blowup point
//! alias D12 = l - L1 - L2
//! blowup curve class = D12 genus = 0 normal=decomposable tau0=1 surface=h;mu=1;kappa=1 movable disjoint=F1
//! ```
//!
//! A custom base is a block:
//!
//! ```text
//! base custom
//! label P2xP1
//! divisors A B
//! curves f1 f2
//! product A B = f1
//! product B B = f2
//! pairing A f2 = 1
//! pairing B f1 = 1
//! c1 = 2A + 3B
//! c2 = 6f1 + 3f2
//! euler 6
//! flag c2-movable-positive
//! end
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use threefold_core::blowup::apply_step;
use threefold_core::dynamics::IntMatrix;
use threefold_core::rational::parse_rational;
use threefold_core::ring::make_base;
use threefold_core::{
    BaseFlag, BaseSpec, BlowupStep, BlowupTower, CurveCenterSpec, CurveClass, CustomTables,
    DivisorClass, SurfaceData, ThreefoldModel, Q,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Divisor,
    Curve,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Divisor => "divisor",
            Kind::Curve => "curve",
        }
    }
}

/// A named class, stored with the coefficients it had when defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alias {
    pub kind: Kind,
    pub coefficients: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TowerDocument {
    pub tower: BlowupTower,
    pub aliases: BTreeMap<String, Alias>,
    /// The base followed by the model after each step.
    pub models: Vec<ThreefoldModel>,
}

impl TowerDocument {
    pub fn final_model(&self) -> &ThreefoldModel {
        self.models.last().expect("a document always has a base")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

const KEYWORDS: [&str; 10] = [
    "class", "genus", "normal", "tau0", "surface", "mu", "kappa", "movable", "disjoint", "end",
];

fn lex(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Token {
                tok: Tok::Number(chars[start..i].iter().collect()),
                column,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else if "=+-*;,()".contains(c) {
            out.push(Token { tok: Tok::Sym(c), column });
            i += 1;
        } else {
            return Err(ParseError {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Cursor over the tokens of one line.
struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [Token], line: usize, text: &str) -> Self {
        Self {
            tokens,
            pos: 0,
            line,
            end_column: text.trim_end().chars().count() + 1,
        }
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            column: self.column(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn peek_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(w)) if w == word)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn expect_ident(&mut self, word: &str) -> Result<(), ParseError> {
        if self.peek_ident(word) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected `{word}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    fn signed_integer(&mut self, what: &str) -> Result<i64, ParseError> {
        let column = self.column();
        let negative = self.eat_sym('-');
        match self.next() {
            Some(Tok::Number(n)) if !n.contains('/') => {
                let v: i64 = n.parse().map_err(|_| ParseError {
                    line: self.line,
                    column,
                    message: format!("{what} is out of range"),
                })?;
                Ok(if negative { -v } else { v })
            }
            _ => Err(ParseError {
                line: self.line,
                column,
                message: format!("expected integer {what}"),
            }),
        }
    }

    fn unsigned(&mut self, what: &str) -> Result<u32, ParseError> {
        let column = self.column();
        let v = self.signed_integer(what)?;
        u32::try_from(v).map_err(|_| ParseError {
            line: self.line,
            column,
            message: format!("{what} must be a non-negative integer"),
        })
    }

    fn rational(&mut self, what: &str) -> Result<Q, ParseError> {
        let column = self.column();
        let negative = self.eat_sym('-');
        match self.next() {
            Some(Tok::Number(n)) => match parse_rational(&n) {
                Some(v) => Ok(if negative { -v } else { v }),
                None => Err(ParseError {
                    line: self.line,
                    column,
                    message: format!("malformed rational `{n}`"),
                }),
            },
            _ => Err(ParseError {
                line: self.line,
                column,
                message: format!("expected rational {what}"),
            }),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }
}

/// Names visible to an expression: basis elements of one kind plus aliases.
struct Scope<'a> {
    names: &'a [String],
    aliases: &'a BTreeMap<String, Alias>,
    kind: Kind,
}

impl Scope<'_> {
    fn lookup(&self, name: &str) -> Option<Result<Vec<Q>, String>> {
        let n = self.names.len();
        if let Some(i) = self.names.iter().position(|x| x == name) {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::from_integer(1.into());
            return Some(Ok(v));
        }
        let alias = self.aliases.get(name)?;
        if alias.kind != self.kind {
            return Some(Err(format!(
                "`{name}` is a {} alias, expected a {} class",
                alias.kind.as_str(),
                self.kind.as_str()
            )));
        }
        let mut v = alias.coefficients.clone();
        v.resize(n, Q::zero());
        Some(Ok(v))
    }
}

/// `expr := term (('+' | '-') term)*`, `term := [number ['*']] name`.
fn expression(cur: &mut Cursor, scope: &Scope) -> Result<Vec<Q>, ParseError> {
    let mut total = vec![Q::zero(); scope.names.len()];
    let mut sign = Q::from_integer(1.into());
    if cur.eat_sym('-') {
        sign = -sign;
    } else {
        cur.eat_sym('+');
    }
    loop {
        let mut coefficient = Q::from_integer(1.into());
        if let Some(Tok::Number(n)) = cur.peek().cloned() {
            coefficient = match parse_rational(&n) {
                Some(v) => v,
                None => return cur.error(format!("malformed rational `{n}`")),
            };
            cur.pos += 1;
            cur.eat_sym('*');
        }
        let name = match cur.peek() {
            Some(Tok::Ident(w)) => w.clone(),
            _ => return cur.error(format!("expected a {} basis name", scope.kind.as_str())),
        };
        let unit = match scope.lookup(&name) {
            Some(Ok(v)) => v,
            Some(Err(message)) => return cur.error(message),
            None => {
                return cur.error(format!(
                    "unknown {} basis name `{name}` (available: {})",
                    scope.kind.as_str(),
                    scope.names.join(", ")
                ))
            }
        };
        cur.pos += 1;
        let factor = &sign * &coefficient;
        for (t, u) in total.iter_mut().zip(unit) {
            *t += &factor * u;
        }
        if cur.eat_sym('+') {
            sign = Q::from_integer(1.into());
        } else if cur.eat_sym('-') {
            sign = Q::from_integer((-1).into());
        } else {
            return Ok(total);
        }
    }
}

fn check_name(cur: &Cursor, name: &str) -> Result<(), ParseError> {
    if KEYWORDS.contains(&name) {
        return cur.error(format!("`{name}` is reserved"));
    }
    Ok(())
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    tokens: Vec<Token>,
}

fn lines(text: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        // `label` and `flag` take the raw rest of the line
        let first = raw.split_whitespace().next().unwrap_or("");
        let tokens = if first == "label" || first == "flag" {
            lex(first, i + 1)?
        } else {
            lex(raw, i + 1)?
        };
        if !tokens.is_empty() {
            out.push(Line {
                number: i + 1,
                text: raw,
                tokens,
            });
        }
    }
    Ok(out)
}

/// Text after the first word of a line, without comments.
fn rest_of_line(text: &str) -> &str {
    let text = text.split('#').next().unwrap_or("").trim();
    text.split_once(char::is_whitespace).map_or("", |(_, r)| r.trim())
}

fn parse_base(cur: &mut Cursor) -> Result<Option<BaseSpec>, ParseError> {
    let name = cur.ident("a base name (p3, p2xp1, p1cubed, ci(n;d,...), custom)")?;
    let spec = match name.as_str() {
        "p3" => BaseSpec::P3,
        "p2xp1" => BaseSpec::P2xP1,
        "p1cubed" => BaseSpec::P1Cubed,
        "ci" => {
            cur.expect_sym('(')?;
            let n = cur.unsigned("ambient dimension")?;
            cur.expect_sym(';')?;
            let mut degrees = vec![cur.unsigned("degree")?];
            while cur.eat_sym(',') {
                degrees.push(cur.unsigned("degree")?);
            }
            cur.expect_sym(')')?;
            BaseSpec::CompleteIntersection { n, degrees }
        }
        "custom" => {
            cur.finish()?;
            return Ok(None);
        }
        other => {
            cur.pos -= 1;
            return cur.error(format!("unknown base `{other}`"));
        }
    };
    cur.finish()?;
    Ok(Some(spec))
}

/// Parses a `base custom` block starting after its header; returns the tables and the
/// index of the line after `end`.
fn parse_custom(lines: &[Line], start: usize, header_line: usize) -> Result<(CustomTables, usize), ParseError> {
    let mut label = String::from("custom");
    let mut divisors: Option<Vec<String>> = None;
    let mut curves: Option<Vec<String>> = None;
    let mut products: Vec<(usize, usize, Vec<Q>)> = Vec::new();
    let mut pairing: Vec<(usize, usize, Q)> = Vec::new();
    let mut c1: Option<Vec<Q>> = None;
    let mut c2: Option<Vec<Q>> = None;
    let mut euler: Option<i64> = None;
    let mut flags = BTreeSet::new();
    let no_aliases = BTreeMap::new();
    let mut i = start;
    while i < lines.len() {
        let line = &lines[i];
        let mut cur = Cursor::new(&line.tokens, line.number, line.text);
        let keyword = cur.ident("a custom-base directive")?;
        let need = |cur: &Cursor, what: &Option<Vec<String>>, name: &str| -> Result<Vec<String>, ParseError> {
            what.clone().map_or_else(|| cur.error(format!("`{name}` must come first")), Ok)
        };
        match keyword.as_str() {
            "end" => {
                cur.finish()?;
                let divisor_names = need(&cur, &divisors, "divisors")?;
                let curve_names = need(&cur, &curves, "curves")?;
                let n = divisor_names.len();
                let mut mul2 = vec![vec![CurveClass::zero(n); n]; n];
                for (a, b, v) in products {
                    mul2[a][b] = CurveClass::new(v.clone());
                    mul2[b][a] = CurveClass::new(v);
                }
                let mut table = vec![vec![Q::zero(); n]; n];
                for (a, b, v) in pairing {
                    table[a][b] = v;
                }
                let tables = CustomTables {
                    label,
                    divisor_names,
                    curve_names,
                    mul2,
                    pairing: table,
                    c1: DivisorClass::new(c1.unwrap_or_else(|| vec![Q::zero(); n])),
                    c2: CurveClass::new(c2.unwrap_or_else(|| vec![Q::zero(); n])),
                    euler: match euler {
                        Some(e) => e,
                        None => return cur.error("missing `euler`"),
                    },
                    flags,
                };
                return Ok((tables, i + 1));
            }
            "label" => label = rest_of_line(line.text).to_string(),
            "divisors" | "curves" => {
                let mut names = Vec::new();
                while !cur.at_end() {
                    let name = cur.ident("a basis name")?;
                    check_name(&cur, &name)?;
                    if names.contains(&name) {
                        return cur.error(format!("duplicate name `{name}`"));
                    }
                    names.push(name);
                }
                if names.is_empty() {
                    return cur.error("expected at least one basis name");
                }
                if keyword == "divisors" {
                    divisors = Some(names);
                } else {
                    curves = Some(names);
                }
            }
            "product" => {
                let d = need(&cur, &divisors, "divisors")?;
                let c = need(&cur, &curves, "curves")?;
                let index = |cur: &mut Cursor| -> Result<usize, ParseError> {
                    let name = cur.ident("a divisor name")?;
                    match d.iter().position(|x| *x == name) {
                        Some(k) => Ok(k),
                        None => {
                            cur.pos -= 1;
                            cur.error(format!("unknown divisor `{name}`"))
                        }
                    }
                };
                let a = index(&mut cur)?;
                let b = index(&mut cur)?;
                cur.expect_sym('=')?;
                let scope = Scope { names: &c, aliases: &no_aliases, kind: Kind::Curve };
                let v = expression(&mut cur, &scope)?;
                cur.finish()?;
                products.retain(|(x, y, _)| !((*x == a && *y == b) || (*x == b && *y == a)));
                products.push((a, b, v));
            }
            "pairing" => {
                let d = need(&cur, &divisors, "divisors")?;
                let c = need(&cur, &curves, "curves")?;
                let dn = cur.ident("a divisor name")?;
                let Some(a) = d.iter().position(|x| *x == dn) else {
                    cur.pos -= 1;
                    return cur.error(format!("unknown divisor `{dn}`"));
                };
                let cn = cur.ident("a curve name")?;
                let Some(b) = c.iter().position(|x| *x == cn) else {
                    cur.pos -= 1;
                    return cur.error(format!("unknown curve `{cn}`"));
                };
                cur.expect_sym('=')?;
                let v = cur.rational("pairing value")?;
                cur.finish()?;
                pairing.push((a, b, v));
            }
            "c1" | "c2" => {
                let (names, kind) = if keyword == "c1" {
                    (need(&cur, &divisors, "divisors")?, Kind::Divisor)
                } else {
                    (need(&cur, &curves, "curves")?, Kind::Curve)
                };
                cur.expect_sym('=')?;
                let v = if cur.peek() == Some(&Tok::Number("0".into())) && cur.tokens.len() == cur.pos + 1 {
                    cur.pos += 1;
                    vec![Q::zero(); names.len()]
                } else {
                    expression(&mut cur, &Scope { names: &names, aliases: &no_aliases, kind })?
                };
                cur.finish()?;
                if keyword == "c1" {
                    c1 = Some(v);
                } else {
                    c2 = Some(v);
                }
            }
            "euler" => {
                euler = Some(cur.signed_integer("Euler characteristic")?);
                cur.finish()?;
            }
            "flag" => {
                let name = rest_of_line(line.text);
                match BaseFlag::parse(name) {
                    Some(f) => {
                        flags.insert(f);
                    }
                    None => return cur.error(format!("unknown flag `{name}`")),
                }
            }
            other => {
                cur.pos -= 1;
                return cur.error(format!("unknown custom-base directive `{other}`"));
            }
        }
        i += 1;
    }
    Err(ParseError {
        line: header_line,
        column: 1,
        message: "custom base block is missing `end`".into(),
    })
}

fn parse_curve_step(
    cur: &mut Cursor,
    model: &ThreefoldModel,
    aliases: &BTreeMap<String, Alias>,
) -> Result<CurveCenterSpec, ParseError> {
    let curve_names = model.curve_names();
    let divisor_names = model.divisor_names();
    cur.expect_ident("class")?;
    cur.expect_sym('=')?;
    let class = expression(cur, &Scope { names: &curve_names, aliases, kind: Kind::Curve })?;
    if !cur.peek_ident("genus") {
        return cur.error("missing `genus = <int>` on curve step");
    }
    cur.pos += 1;
    cur.expect_sym('=')?;
    let genus = cur.unsigned("genus")?;
    let mut center = CurveCenterSpec::new(CurveClass::new(class), genus);
    while !cur.at_end() {
        let option = cur.ident("a curve option")?;
        match option.as_str() {
            "movable" => center = center.movable(true),
            "normal" => {
                cur.expect_sym('=')?;
                let value = cur.ident("decomposable or indecomposable")?;
                center = match value.as_str() {
                    "decomposable" => center.decomposable(true),
                    "indecomposable" => center.decomposable(false),
                    _ => {
                        cur.pos -= 1;
                        return cur.error("expected decomposable or indecomposable");
                    }
                };
            }
            "tau0" => {
                cur.expect_sym('=')?;
                let t = cur.signed_integer("tau0")?;
                center = center.with_tau0(t);
            }
            "surface" => {
                cur.expect_sym('=')?;
                let s = expression(cur, &Scope { names: &divisor_names, aliases, kind: Kind::Divisor })?;
                cur.expect_sym(';')?;
                cur.expect_ident("mu")?;
                cur.expect_sym('=')?;
                let multiplicity = cur.unsigned("mu")?;
                cur.expect_sym(';')?;
                cur.expect_ident("kappa")?;
                cur.expect_sym('=')?;
                let kappa = cur.rational("kappa")?;
                center = center.with_surface(SurfaceData {
                    surface: DivisorClass::new(s),
                    multiplicity,
                    kappa,
                });
            }
            "disjoint" => {
                cur.expect_sym('=')?;
                let mut labels = vec![cur.ident("an exceptional divisor name")?];
                while cur.eat_sym(',') {
                    labels.push(cur.ident("an exceptional divisor name")?);
                }
                center = center.with_disjoint_from(labels);
            }
            other => {
                cur.pos -= 1;
                return cur.error(format!("unknown curve option `{other}`"));
            }
        }
    }
    Ok(center)
}

pub fn parse_tower(text: &str) -> Result<TowerDocument, ParseError> {
    let lines = lines(text)?;
    let Some(first) = lines.first() else {
        return Err(ParseError { line: 1, column: 1, message: "empty document: expected `base`".into() });
    };
    let mut cur = Cursor::new(&first.tokens, first.number, first.text);
    if !cur.peek_ident("base") {
        return cur.error("expected `base` as the first directive");
    }
    cur.pos += 1;
    let (spec, mut i) = match parse_base(&mut cur)? {
        Some(spec) => (spec, 1),
        None => {
            let (tables, next) = parse_custom(&lines, 1, first.number)?;
            (BaseSpec::Custom(tables), next)
        }
    };
    let base = make_base(&spec).map_err(|e| ParseError {
        line: first.number,
        column: 1,
        message: e.to_string(),
    })?;
    let mut models = vec![base];
    let mut tower = BlowupTower::new(spec);
    let mut aliases = BTreeMap::new();
    while i < lines.len() {
        let line = &lines[i];
        let mut cur = Cursor::new(&line.tokens, line.number, line.text);
        let model = models.last().expect("non-empty").clone();
        match cur.ident("a directive")?.as_str() {
            "base" => {
                cur.pos -= 1;
                return cur.error("`base` may appear only once");
            }
            "alias" => {
                let name = cur.ident("an alias name")?;
                check_name(&cur, &name)?;
                if model.divisor_index(&name).is_some() || model.curve_index(&name).is_some() {
                    cur.pos -= 1;
                    return cur.error(format!("`{name}` is already a basis name"));
                }
                cur.expect_sym('=')?;
                let save = cur.pos;
                // the kind follows from the first name in the expression
                let first_name = cur.tokens[save..].iter().find_map(|t| match &t.tok {
                    Tok::Ident(w) => Some(w.clone()),
                    _ => None,
                });
                let kind = match first_name {
                    Some(w) if model.divisor_index(&w).is_some() => Kind::Divisor,
                    Some(w) if model.curve_index(&w).is_some() => Kind::Curve,
                    Some(w) => aliases.get(&w).map_or(Kind::Curve, |a: &Alias| a.kind),
                    None => Kind::Curve,
                };
                let names = match kind {
                    Kind::Divisor => model.divisor_names(),
                    Kind::Curve => model.curve_names(),
                };
                let coefficients = expression(&mut cur, &Scope { names: &names, aliases: &aliases, kind })?;
                cur.finish()?;
                aliases.insert(name, Alias { kind, coefficients });
            }
            "blowup" => {
                let step = match cur.ident("`point` or `curve`")?.as_str() {
                    "point" => {
                        cur.finish()?;
                        BlowupStep::Point
                    }
                    "curve" => BlowupStep::Curve(parse_curve_step(&mut cur, &model, &aliases)?),
                    other => {
                        cur.pos -= 1;
                        return cur.error(format!("expected `point` or `curve`, found `{other}`"));
                    }
                };
                let next = apply_step(&model, &step).map_err(|e| ParseError {
                    line: line.number,
                    column: 1,
                    message: e.to_string(),
                })?;
                models.push(next);
                tower.steps.push(step);
            }
            other => {
                cur.pos -= 1;
                return cur.error(format!("unknown directive `{other}`"));
            }
        }
        i += 1;
    }
    Ok(TowerDocument { tower, aliases, models })
}

/// Serializes a model as a custom base block that [`parse_tower`] reads back.
pub fn render_custom(model: &ThreefoldModel) -> String {
    let t = model.to_custom_tables();
    let dn = &t.divisor_names;
    let cn = &t.curve_names;
    let mut out = String::new();
    let mut push = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push("base custom".into());
    push(format!("label {}", t.label));
    push(format!("divisors {}", dn.join(" ")));
    push(format!("curves {}", cn.join(" ")));
    for i in 0..dn.len() {
        for j in i..dn.len() {
            if !t.mul2[i][j].is_zero() {
                push(format!("product {} {} = {}", dn[i], dn[j], t.mul2[i][j].display_with(cn)));
            }
        }
    }
    for (i, row) in t.pairing.iter().enumerate() {
        for (a, v) in row.iter().enumerate() {
            if !v.is_zero() {
                push(format!("pairing {} {} = {v}", dn[i], cn[a]));
            }
        }
    }
    push(format!("c1 = {}", t.c1.display_with(dn)));
    push(format!("c2 = {}", t.c2.display_with(cn)));
    push(format!("euler {}", t.euler));
    for f in &t.flags {
        push(format!("flag {f}"));
    }
    push("end".into());
    out
}

/// Integer matrix: one row per line, whitespace-separated, `#` comments.
pub fn parse_matrix(text: &str) -> Result<IntMatrix, ParseError> {
    let mut rows: IntMatrix = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut row = Vec::new();
        let mut column = 1;
        for piece in body.split(char::is_whitespace) {
            if !piece.is_empty() {
                let v: i64 = piece.parse().map_err(|_| ParseError {
                    line: i + 1,
                    column,
                    message: format!("expected an integer, found `{piece}`"),
                })?;
                row.push(v);
            }
            column += piece.chars().count() + 1;
        }
        if row.is_empty() {
            continue;
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ParseError {
                    line: i + 1,
                    column: 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError { line: 1, column: 1, message: "empty matrix".into() });
    }
    if rows.len() != rows[0].len() {
        return Err(ParseError {
            line: rows.len(),
            column: 1,
            message: format!("matrix is {}x{}, expected square", rows.len(), rows[0].len()),
        });
    }
    Ok(rows)
}
