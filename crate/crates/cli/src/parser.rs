//! Recursive-descent parser for workspace scripts.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

use crate::lexer::{tokenize, Span, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigUint),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

/// A polynomial expression with its source text, whitespace normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExpr {
    pub expr: Expr,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDecl {
    Rationals,
    Prime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDecl {
    pub name: Spanned<String>,
    pub generators: Vec<PolyExpr>,
    pub maximal: bool,
    pub point: Option<Vec<Spanned<BigUint>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: Spanned<String>,
    pub maps: Vec<(Spanned<String>, PolyExpr)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Jet { order: usize },
    Ram { action: Spanned<String>, prime: Spanned<String>, upto: usize },
    Taylor { poly: PolyExpr, prime: Spanned<String>, order: usize },
    Kernel { poly: PolyExpr, prime: Spanned<String>, order: usize },
    Verify { action: Spanned<String>, prime: Spanned<String>, order: usize, depth: usize },
    Fiber { prime: Spanned<String> },
}

impl Query {
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Jet { .. } => "jet",
            Query::Ram { .. } => "ram",
            Query::Taylor { .. } => "taylor",
            Query::Kernel { .. } => "kernel",
            Query::Verify { .. } => "verify",
            Query::Fiber { .. } => "fiber",
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Jet { order } => write!(f, "jet {order}"),
            Query::Ram { action, prime, upto } => write!(f, "ram {} at {} upto {upto}", action.node, prime.node),
            Query::Taylor { poly, prime, order } => write!(f, "taylor {} at {} order {order}", poly.text, prime.node),
            Query::Kernel { poly, prime, order } => write!(f, "kernel {} at {} order {order}", poly.text, prime.node),
            Query::Verify { action, prime, order, depth } => {
                write!(f, "verify {} at {} order {order} depth {depth}", action.node, prime.node)
            }
            Query::Fiber { prime } => write!(f, "fiber at {}", prime.node),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Ideal(Vec<PolyExpr>),
    Prime(PrimeDecl),
    Action(ActionDecl),
    Query(Query),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkspaceScript {
    pub field: Spanned<FieldDecl>,
    pub ring: Vec<Spanned<String>>,
    /// Everything after the ring declaration, in source order.
    pub items: Vec<Spanned<Item>>,
}

impl WorkspaceScript {
    pub fn ideal(&self) -> Option<&[PolyExpr]> {
        self.items.iter().find_map(|i| match &i.node {
            Item::Ideal(g) => Some(g.as_slice()),
            _ => None,
        })
    }

    pub fn primes(&self) -> impl Iterator<Item = &PrimeDecl> {
        self.items.iter().filter_map(|i| match &i.node {
            Item::Prime(p) => Some(p),
            _ => None,
        })
    }

    pub fn actions(&self) -> impl Iterator<Item = &ActionDecl> {
        self.items.iter().filter_map(|i| match &i.node {
            Item::Action(a) => Some(a),
            _ => None,
        })
    }

    pub fn queries(&self) -> Vec<(&Query, Span)> {
        self.items
            .iter()
            .filter_map(|i| match &i.node {
                Item::Query(q) => Some((q, i.span)),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{span}: unexpected character {found:?}")]
    Lex { span: Span, found: char },
    #[error("{span}: {}, found {found}", expected_list(.expected))]
    Syntax { span: Span, expected: Vec<String>, found: String },
    #[error("{span}: unknown {kind} `{name}`")]
    UnknownName { span: Span, kind: &'static str, name: String },
    #[error("{span}: {message}")]
    Invalid { span: Span, message: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Lex { span, .. }
            | ParseError::Syntax { span, .. }
            | ParseError::UnknownName { span, .. }
            | ParseError::Invalid { span, .. } => *span,
        }
    }
}

fn expected_list(expected: &[String]) -> String {
    match expected {
        [one] => format!("expected {one}"),
        many => format!("expected one of {}", many.join(", ")),
    }
}

pub fn parse_script(text: &str) -> Result<WorkspaceScript, ParseError> {
    let mut p = Parser::new(text, false)?;
    p.script()
}

/// Parses one polynomial over the given variable names. Dotted jet names
/// such as `x.0.1` are accepted.
pub fn parse_poly_expr(text: &str, names: &[String]) -> Result<PolyExpr, ParseError> {
    let mut p = Parser::new(text, true)?;
    p.vars = names.to_vec();
    let e = p.poly()?;
    if !p.check(Tok::Eof, "end of input") {
        return Err(p.error());
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    expected: BTreeSet<String>,
    dotted: bool,
    vars: Vec<String>,
    primes: Vec<String>,
    actions: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, dotted: bool) -> Result<Self, ParseError> {
        let toks = tokenize(src).map_err(|e| ParseError::Lex { span: e.span, found: e.found })?;
        Ok(Parser {
            src,
            toks,
            pos: 0,
            expected: BTreeSet::new(),
            dotted,
            vars: Vec::new(),
            primes: Vec::new(),
            actions: Vec::new(),
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn span(&self) -> Span {
        self.peek().span
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    /// Tests the lookahead and records `label` as expected on a miss.
    fn check(&mut self, tok: Tok, label: &str) -> bool {
        if self.peek().tok == tok {
            true
        } else {
            self.expected.insert(label.to_string());
            false
        }
    }

    fn check_kw(&mut self, kw: &'static str) -> bool {
        self.check(Tok::Keyword(kw), &format!("'{kw}'"))
    }

    fn check_sym(&mut self, sym: &'static str) -> bool {
        self.check(Tok::Sym(sym), &format!("'{sym}'"))
    }

    fn eat_kw(&mut self, kw: &'static str) -> bool {
        let hit = self.check_kw(kw);
        if hit {
            self.advance();
        }
        hit
    }

    fn eat_sym(&mut self, sym: &'static str) -> bool {
        let hit = self.check_sym(sym);
        if hit {
            self.advance();
        }
        hit
    }

    fn error(&self) -> ParseError {
        ParseError::Syntax {
            span: self.span(),
            expected: self.expected.iter().cloned().collect(),
            found: self.peek().tok.to_string(),
        }
    }

    fn expect_kw(&mut self, kw: &'static str) -> Result<Span, ParseError> {
        let span = self.span();
        if self.eat_kw(kw) {
            Ok(span)
        } else {
            Err(self.error())
        }
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<Span, ParseError> {
        let span = self.span();
        if self.eat_sym(sym) {
            Ok(span)
        } else {
            Err(self.error())
        }
    }

    fn ident(&mut self) -> Result<Spanned<String>, ParseError> {
        if let Tok::Ident(name) = &self.peek().tok {
            let node = name.clone();
            let span = self.span();
            self.advance();
            Ok(Spanned { node, span })
        } else {
            self.expected.insert("identifier".into());
            Err(self.error())
        }
    }

    fn int(&mut self) -> Result<Spanned<BigUint>, ParseError> {
        if let Tok::Int(digits) = &self.peek().tok {
            let node: BigUint = digits.parse().expect("lexer yields decimal digits");
            let span = self.span();
            self.advance();
            Ok(Spanned { node, span })
        } else {
            self.expected.insert("integer".into());
            Err(self.error())
        }
    }

    fn small<T: TryFrom<u64>>(&mut self) -> Result<T, ParseError> {
        let n = self.int()?;
        u64::try_from(&n.node)
            .ok()
            .and_then(|v| T::try_from(v).ok())
            .ok_or(ParseError::Invalid { span: n.span, message: format!("integer {} is too large", n.node) })
    }

    fn script(&mut self) -> Result<WorkspaceScript, ParseError> {
        let field_span = self.expect_kw("field")?;
        let field = if self.eat_kw("QQ") {
            FieldDecl::Rationals
        } else if self.check_kw("GF") {
            self.advance();
            self.expect_sym("(")?;
            let p = self.int()?;
            self.expect_sym(")")?;
            let modulus = u64::try_from(&p.node).ok().filter(|&v| jetram_core::Field::prime(v).is_ok());
            match modulus {
                Some(v) => FieldDecl::Prime(v),
                None => {
                    return Err(ParseError::Invalid {
                        span: p.span,
                        message: format!("GF({}) is not a supported prime field", p.node),
                    })
                }
            }
        } else {
            return Err(self.error());
        };
        let field = Spanned { node: field, span: field_span };

        self.expect_kw("ring")?;
        let mut ring = vec![self.ident()?];
        while self.eat_sym(",") {
            ring.push(self.ident()?);
        }
        for (k, v) in ring.iter().enumerate() {
            if ring[..k].iter().any(|w| w.node == v.node) {
                return Err(ParseError::Invalid { span: v.span, message: format!("variable `{}` declared twice", v.node) });
            }
        }
        self.vars = ring.iter().map(|v| v.node.clone()).collect();

        let mut items: Vec<Spanned<Item>> = Vec::new();
        loop {
            let span = self.span();
            if self.check(Tok::Eof, "end of input") {
                break;
            }
            let item = if self.eat_kw("ideal") {
                if !items.is_empty() {
                    let message = if items.iter().any(|i| matches!(i.node, Item::Ideal(_))) {
                        "only one ideal declaration is allowed"
                    } else {
                        "the ideal must be declared before primes, actions and queries"
                    };
                    return Err(ParseError::Invalid { span, message: message.into() });
                }
                let mut gens = vec![self.poly()?];
                while self.eat_sym(",") {
                    gens.push(self.poly()?);
                }
                Item::Ideal(gens)
            } else if self.eat_kw("prime") {
                Item::Prime(self.prime_decl()?)
            } else if self.eat_kw("action") {
                Item::Action(self.action_decl()?)
            } else if let Some(q) = self.query()? {
                Item::Query(q)
            } else if let Tok::Keyword(what @ ("field" | "ring")) = self.peek().tok {
                return Err(ParseError::Invalid { span, message: format!("only one {what} declaration is allowed") });
            } else {
                return Err(self.error());
            };
            items.push(Spanned { node: item, span });
        }
        Ok(WorkspaceScript { field, ring, items })
    }

    fn prime_decl(&mut self) -> Result<PrimeDecl, ParseError> {
        let name = self.ident()?;
        if self.primes.contains(&name.node) {
            return Err(ParseError::Invalid { span: name.span, message: format!("prime `{}` declared twice", name.node) });
        }
        self.expect_sym("=")?;
        self.expect_sym("(")?;
        let mut generators = vec![self.poly()?];
        while self.eat_sym(",") {
            generators.push(self.poly()?);
        }
        self.expect_sym(")")?;
        let maximal = self.eat_kw("maximal");
        let point = if self.eat_kw("point") {
            self.expect_sym("(")?;
            let mut coords = vec![self.int()?];
            while self.eat_sym(",") {
                coords.push(self.int()?);
            }
            self.expect_sym(")")?;
            Some(coords)
        } else {
            None
        };
        self.primes.push(name.node.clone());
        Ok(PrimeDecl { name, generators, maximal, point })
    }

    fn action_decl(&mut self) -> Result<ActionDecl, ParseError> {
        let name = self.ident()?;
        if self.actions.contains(&name.node) {
            return Err(ParseError::Invalid { span: name.span, message: format!("action `{}` declared twice", name.node) });
        }
        self.expect_sym("{")?;
        let mut maps: Vec<(Spanned<String>, PolyExpr)> = Vec::new();
        loop {
            let var = self.ident()?;
            if !self.vars.contains(&var.node) {
                return Err(ParseError::UnknownName { span: var.span, kind: "variable", name: var.node });
            }
            if maps.iter().any(|(v, _)| v.node == var.node) {
                return Err(ParseError::Invalid { span: var.span, message: format!("`{}` is mapped twice", var.node) });
            }
            self.expect_sym("->")?;
            let image = self.poly()?;
            maps.push((var, image));
            if !self.eat_sym(";") {
                break;
            }
        }
        self.expect_sym("}")?;
        self.actions.push(name.node.clone());
        Ok(ActionDecl { name, maps })
    }

    fn prime_ref(&mut self) -> Result<Spanned<String>, ParseError> {
        let name = self.ident()?;
        if !self.primes.contains(&name.node) {
            return Err(ParseError::UnknownName { span: name.span, kind: "prime", name: name.node });
        }
        Ok(name)
    }

    fn action_ref(&mut self) -> Result<Spanned<String>, ParseError> {
        let name = self.ident()?;
        if !self.actions.contains(&name.node) {
            return Err(ParseError::UnknownName { span: name.span, kind: "action", name: name.node });
        }
        Ok(name)
    }

    fn query(&mut self) -> Result<Option<Query>, ParseError> {
        let q = if self.eat_kw("jet") {
            Query::Jet { order: self.small()? }
        } else if self.eat_kw("ram") {
            let action = self.action_ref()?;
            self.expect_kw("at")?;
            let prime = self.prime_ref()?;
            self.expect_kw("upto")?;
            Query::Ram { action, prime, upto: self.small()? }
        } else if self.check_kw("taylor") || self.check_kw("kernel") {
            let taylor = self.advance().tok == Tok::Keyword("taylor");
            let poly = self.poly()?;
            self.expect_kw("at")?;
            let prime = self.prime_ref()?;
            self.expect_kw("order")?;
            let order = self.small()?;
            if taylor {
                Query::Taylor { poly, prime, order }
            } else {
                Query::Kernel { poly, prime, order }
            }
        } else if self.eat_kw("verify") {
            let action = self.action_ref()?;
            self.expect_kw("at")?;
            let prime = self.prime_ref()?;
            self.expect_kw("order")?;
            let order = self.small()?;
            self.expect_kw("depth")?;
            Query::Verify { action, prime, order, depth: self.small()? }
        } else if self.eat_kw("fiber") {
            self.expect_kw("at")?;
            Query::Fiber { prime: self.prime_ref()? }
        } else {
            return Ok(None);
        };
        Ok(Some(q))
    }

    fn poly(&mut self) -> Result<PolyExpr, ParseError> {
        let start = self.pos;
        let expr = self.sum()?;
        let mut text = String::new();
        for (k, t) in self.toks[start..self.pos].iter().enumerate() {
            if k > 0 && self.toks[start + k - 1].end != t.offset {
                text.push(' ');
            }
            text.push_str(&self.src[t.offset..t.end]);
        }
        Ok(PolyExpr { expr, text })
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        let mut acc = if self.eat_sym("-") {
            let t = self.term()?;
            Expr { kind: ExprKind::Neg(Box::new(t)), span }
        } else {
            self.eat_sym("+");
            self.term()?
        };
        loop {
            let span = self.span();
            if self.eat_sym("+") {
                let t = self.term()?;
                acc = Expr { kind: ExprKind::Add(Box::new(acc), Box::new(t)), span };
            } else if self.eat_sym("-") {
                let t = self.term()?;
                acc = Expr { kind: ExprKind::Sub(Box::new(acc), Box::new(t)), span };
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let span = self.span();
            if !self.eat_sym("*") {
                return Ok(acc);
            }
            let f = self.factor()?;
            acc = Expr { kind: ExprKind::Mul(Box::new(acc), Box::new(f)), span };
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        let span = self.span();
        if self.eat_sym("^") {
            let e: u32 = self.small()?;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), span });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        if self.eat_sym("(") {
            let inner = self.sum()?;
            self.expect_sym(")")?;
            return Ok(inner);
        }
        match self.peek().tok.clone() {
            Tok::Int(_) => {
                let n = self.int()?;
                Ok(Expr { kind: ExprKind::Int(n.node), span })
            }
            Tok::Ident(_) => {
                let mut name = self.ident()?.node;
                if self.dotted {
                    while self.eat_sym(".") {
                        let k = self.int()?;
                        name = format!("{name}.{}", k.node);
                    }
                }
                if !self.vars.contains(&name) {
                    return Err(ParseError::UnknownName { span, kind: "variable", name });
                }
                Ok(Expr { kind: ExprKind::Var(name), span })
            }
            _ => {
                self.expected.insert("'('".into());
                self.expected.insert("identifier".into());
                self.expected.insert("integer".into());
                Err(self.error())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = "field GF(3)\nring x, y\nprime p = (x, y) maximal point (0,0)\naction s { x -> x + y^2; y -> y }\nram s at p upto 2";

    #[test]
    fn parses_the_intro_script() {
        let s = parse_script(PLANE).unwrap();
        assert_eq!(s.field.node, FieldDecl::Prime(3));
        assert_eq!(s.ring.len(), 2);
        assert_eq!(s.primes().count(), 1);
        assert_eq!(s.actions().count(), 1);
        let qs = s.queries();
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].0.to_string(), "ram s at p upto 2");
        assert_eq!(qs[0].1, Span { line: 5, col: 1 });
        let a = s.actions().next().unwrap();
        assert_eq!(a.maps[0].1.text, "x + y^2");
    }

    #[test]
    fn empty_input_expects_field() {
        let e = parse_script("").unwrap_err();
        assert_eq!(e.to_string(), "1:1: expected 'field', found end of input");
        let e = parse_script("  # only a comment\n").unwrap_err();
        assert!(e.to_string().contains("expected 'field'"));
    }

    #[test]
    fn missing_operator_is_reported_at_the_second_operand() {
        let e = parse_script("field QQ\nring x, q\nprime p = (x q)").unwrap_err();
        match &e {
            ParseError::Syntax { span, expected, found } => {
                assert_eq!(*span, Span { line: 3, col: 14 });
                assert_eq!(found, "identifier `q`");
                for tok in ["','", "')'", "'+'", "'*'", "'^'"] {
                    assert!(expected.iter().any(|x| x == tok), "{tok} missing from {expected:?}");
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_names_carry_spans() {
        let e = parse_script("field QQ\nring x, y\nprime p = (x, w)").unwrap_err();
        assert_eq!(e, ParseError::UnknownName { span: Span { line: 3, col: 15 }, kind: "variable", name: "w".into() });
        let e = parse_script("field QQ\nring x\nfiber at p").unwrap_err();
        assert!(matches!(e, ParseError::UnknownName { kind: "prime", .. }));
        let e = parse_script("field QQ\nring x\nprime p = (x)\nram t at p upto 1").unwrap_err();
        assert!(matches!(e, ParseError::UnknownName { kind: "action", span: Span { line: 4, col: 5 }, .. }));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let e = parse_poly_expr("-x^2 + 3*(x - y)*y", &["x".into(), "y".into()]).unwrap();
        match e.expr.kind {
            ExprKind::Add(l, _) => assert!(matches!(l.kind, ExprKind::Neg(ref inner) if matches!(inner.kind, ExprKind::Pow(_, 2)))),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly_expr("x*-y", &["x".into(), "y".into()]).is_err());
        assert!(parse_poly_expr("2 x", &["x".into()]).is_err());
    }

    #[test]
    fn dotted_names_only_in_polynomial_mode() {
        let names = vec!["x.0.1".to_string()];
        assert!(parse_poly_expr("x.0.1^2", &names).is_ok());
        assert!(parse_script("field QQ\nring x\nideal x.0").is_err());
    }

    #[test]
    fn structural_errors() {
        assert!(parse_script("field GF(4)\nring x").is_err());
        assert!(parse_script("field QQ\nring x, x").is_err());
        assert!(parse_script("field QQ\nring x\nfield QQ").is_err());
        assert!(parse_script("field QQ\nring x\nprime p = (x)\nideal x").is_err());
        assert!(parse_script("field QQ\nring x\naction s { x -> x; x -> x }").is_err());
        assert!(parse_script("field QQ\nring x\njet 99999999999999999999999").is_err());
    }
}
