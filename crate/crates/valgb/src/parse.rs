//! Text syntax for scalars, module elements and problem files, plus the
//! canonical printer.
//!
//! Elements come in two equivalent shapes: a bracketed vector of polynomial
//! components `[5*x^3, 7*y^3]`, or a sum of terms with explicit basis markers
//! `5*x^3*e1 + 7*y^3*e2`. Printing sorts terms ascending in the active term
//! order, so output is deterministic and re-parses to an equal value.

use crate::freemod::{
    compare_terms, Ambient, CoeffRing, Convention, ModElement, ModMonomial, MonomialOrder,
    ResidueElement, Term, WeightedTermOrder,
};
use crate::valfield::{Domain, IntPoly, RatFunc, ValuedScalar};
use crate::zmod::{ZmodParams, ZmodScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

impl ParseError {
    fn new(line: u32, col: u32, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Sym(c) => write!(f, "{c}"),
        }
    }
}

/// Token stream with source positions; the coefficient grammar hooks consume
/// from it.
pub struct Tokens {
    toks: Vec<(Tok, u32, u32)>,
    i: usize,
    end: (u32, u32),
}

impl Tokens {
    fn lex(s: &str, line0: u32, col0: u32) -> Result<Tokens, ParseError> {
        let mut toks = Vec::new();
        let mut line = line0;
        let mut col = col0;
        let mut chars = s.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c == '\n' {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            if c.is_whitespace() {
                chars.next();
                col += 1;
                continue;
            }
            let start = (line, col);
            if c.is_ascii_digit() {
                let mut num = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        num.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Int(num.parse().unwrap()), start.0, start.1));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut id = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        id.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(id), start.0, start.1));
            } else if "+-*/^()[],=".contains(c) {
                chars.next();
                col += 1;
                toks.push((Tok::Sym(c), start.0, start.1));
            } else {
                return Err(ParseError::new(line, col, format!("unexpected character '{c}'")));
            }
        }
        Ok(Tokens {
            toks,
            i: 0,
            end: (line, col),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _, _)| t)
    }

    fn pos(&self) -> (u32, u32) {
        self.toks
            .get(self.i)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        let (l, co) = self.pos();
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(ParseError::new(l, co, format!("expected '{c}'")))
        }
    }

    fn expect_int(&mut self) -> Result<BigInt, ParseError> {
        let (l, c) = self.pos();
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            other => Err(ParseError::new(
                l,
                c,
                match other {
                    Some(t) => format!("expected integer, found '{t}'"),
                    None => "expected integer, found end of input".to_string(),
                },
            )),
        }
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.pos();
        ParseError::new(l, c, msg)
    }
}

/// Coefficient-level grammar for a ring: how to recognize and parse one
/// coefficient factor.
pub trait CoeffSyntax: CoeffRing {
    /// Parse a coefficient atom if the stream starts with one; `Ok(None)`
    /// means the next token is not a coefficient.
    fn parse_atom(&self, toks: &mut Tokens) -> Result<Option<Self::Elem>, ParseError>;
}

fn parse_uint(n: &BigInt, toks: &Tokens) -> Result<usize, ParseError> {
    n.to_usize()
        .ok_or_else(|| toks.err_here("integer out of range"))
}

/// Polynomial in `t` with integer coefficients: `3+6*t^2`, `-t`, `7`.
fn parse_tpoly(toks: &mut Tokens) -> Result<IntPoly, ParseError> {
    let mut acc = IntPoly::zero();
    let mut sign = if toks.eat_sym('-') {
        -1
    } else {
        toks.eat_sym('+');
        1
    };
    loop {
        // one term: INT ('*' t-power)? | t-power
        let coeff;
        let mut exp = 0usize;
        match toks.peek() {
            Some(Tok::Int(_)) => {
                let n = toks.expect_int()?;
                coeff = if sign < 0 { -n } else { n };
                if toks.eat_sym('*') {
                    let (l, c) = toks.pos();
                    match toks.next() {
                        Some(Tok::Ident(id)) if id == "t" => {}
                        _ => return Err(ParseError::new(l, c, "expected 't'")),
                    }
                    exp = 1;
                    if toks.eat_sym('^') {
                        exp = parse_uint(&toks.expect_int()?, toks)?;
                    }
                }
            }
            Some(Tok::Ident(id)) if id == "t" => {
                toks.next();
                coeff = BigInt::from(sign);
                exp = 1;
                if toks.eat_sym('^') {
                    exp = parse_uint(&toks.expect_int()?, toks)?;
                }
            }
            _ => return Err(toks.err_here("expected polynomial in t")),
        }
        acc = acc.add(&IntPoly::term(coeff, exp));
        if toks.eat_sym('+') {
            sign = 1;
        } else if toks.eat_sym('-') {
            sign = -1;
        } else {
            return Ok(acc);
        }
    }
}

impl CoeffSyntax for Domain {
    fn parse_atom(&self, toks: &mut Tokens) -> Result<Option<ValuedScalar>, ParseError> {
        match toks.peek() {
            Some(Tok::Int(_)) => {
                let n = toks.expect_int()?;
                if toks.eat_sym('/') {
                    let d = toks.expect_int()?;
                    if d.is_zero() {
                        return Err(toks.err_here("zero denominator"));
                    }
                    Ok(Some(self.scalar_from_rational(BigRational::new(n, d))))
                } else {
                    Ok(Some(self.scalar_from_rational(BigRational::from(n))))
                }
            }
            Some(Tok::Ident(id)) if id == "t" && *self == Domain::TAdic => {
                toks.next();
                let mut exp = 1usize;
                if toks.eat_sym('^') {
                    exp = parse_uint(&toks.expect_int()?, toks)?;
                }
                Ok(Some(ValuedScalar::TAdic(RatFunc::t_power(exp as i64))))
            }
            Some(Tok::Sym('(')) if *self == Domain::TAdic => {
                toks.next();
                let num = parse_tpoly(toks)?;
                toks.expect_sym(')')?;
                let den = if toks.eat_sym('/') {
                    toks.expect_sym('(')?;
                    let d = parse_tpoly(toks)?;
                    toks.expect_sym(')')?;
                    if d.is_zero() {
                        return Err(toks.err_here("zero denominator"));
                    }
                    d
                } else {
                    IntPoly::one()
                };
                Ok(Some(ValuedScalar::TAdic(RatFunc::new(num, den))))
            }
            _ => Ok(None),
        }
    }
}

impl CoeffSyntax for ZmodParams {
    fn parse_atom(&self, toks: &mut Tokens) -> Result<Option<ZmodScalar>, ParseError> {
        match toks.peek() {
            Some(Tok::Int(_)) => {
                let n = toks.expect_int()?;
                if toks.peek() == Some(&Tok::Sym('/')) {
                    return Err(toks.err_here("fractional coefficients are not valid over Z/p^l"));
                }
                Ok(Some(self.scalar_from_bigint(&n)))
            }
            _ => Ok(None),
        }
    }
}

struct TermParts<R: CoeffRing> {
    coeff: R::Elem,
    exps: Vec<u32>,
    pos: Option<usize>,
    explicit_zero: bool,
}

/// One term: product of coefficient atoms, variable powers and at most one
/// basis marker.
fn parse_term<R: CoeffSyntax>(
    ambient: &Ambient<R>,
    toks: &mut Tokens,
    negate: bool,
    allow_basis: bool,
) -> Result<TermParts<R>, ParseError> {
    let ring = &ambient.ring;
    let mut coeff = ring.one();
    let mut exps = vec![0u32; ambient.nvars()];
    let mut pos: Option<usize> = None;
    let mut saw_zero = false;
    let mut first = true;
    loop {
        let (l, c) = toks.pos();
        if let Some(s) = ambient.ring.parse_atom(toks)? {
            if ring.is_zero(&s) {
                saw_zero = true;
            }
            coeff = ring.mul(&coeff, &s);
        } else {
            match toks.peek() {
                Some(Tok::Ident(id)) => {
                    let id = id.clone();
                    if let Some(vi) = ambient.vars.iter().position(|v| *v == id) {
                        toks.next();
                        let mut e = 1u32;
                        if toks.eat_sym('^') {
                            e = parse_uint(&toks.expect_int()?, toks)? as u32;
                        }
                        exps[vi] += e;
                    } else if let Some(k) = basis_index(&id) {
                        toks.next();
                        if !allow_basis {
                            return Err(ParseError::new(
                                l,
                                c,
                                "basis marker not allowed inside bracketed component",
                            ));
                        }
                        if pos.is_some() {
                            return Err(ParseError::new(l, c, "repeated basis marker"));
                        }
                        if k == 0 || k > ambient.rank {
                            return Err(ParseError::new(
                                l,
                                c,
                                format!("basis index e{k} out of range for rank {}", ambient.rank),
                            ));
                        }
                        pos = Some(k - 1);
                    } else {
                        return Err(ParseError::new(l, c, format!("unknown variable '{id}'")));
                    }
                }
                _ if first => return Err(toks.err_here("expected term")),
                _ => break,
            }
        }
        first = false;
        if !toks.eat_sym('*') {
            break;
        }
    }
    if negate {
        coeff = ring.neg(&coeff);
    }
    Ok(TermParts {
        coeff,
        exps,
        pos,
        explicit_zero: saw_zero,
    })
}

fn basis_index(id: &str) -> Option<usize> {
    let rest = id.strip_prefix('e')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// Sum of terms; `default_pos` fixes the position of terms without a basis
/// marker (bracket components and rank-1 elements).
fn parse_poly_into<R: CoeffSyntax>(
    ambient: &Ambient<R>,
    toks: &mut Tokens,
    f: &mut ModElement<R>,
    default_pos: Option<usize>,
    allow_basis: bool,
) -> Result<(), ParseError> {
    let mut negate = if toks.eat_sym('-') {
        true
    } else {
        toks.eat_sym('+');
        false
    };
    loop {
        let (l, c) = toks.pos();
        let part = parse_term(ambient, toks, negate, allow_basis)?;
        let pos = match part.pos.or(default_pos) {
            Some(p) => p,
            None => {
                if ambient.rank == 1 {
                    0
                } else {
                    return Err(ParseError::new(
                        l,
                        c,
                        "term needs a basis marker e<k> in a module of rank > 1",
                    ));
                }
            }
        };
        if !ambient.ring.is_zero(&part.coeff) {
            f.add_term(
                &ModMonomial::new(crate::freemod::Monomial(part.exps), pos),
                &part.coeff,
            );
        } else if !part.explicit_zero {
            // cancelling coefficient like 0/1 written explicitly is fine;
            // anything else reaching zero here is a literal zero term too
        }
        if toks.eat_sym('+') {
            negate = false;
        } else if toks.eat_sym('-') {
            negate = true;
        } else {
            return Ok(());
        }
    }
}

/// Parse an element in either bracket-vector or sum-of-terms syntax.
pub fn parse_element<R: CoeffSyntax>(
    ambient: &Ambient<R>,
    s: &str,
) -> Result<ModElement<R>, ParseError> {
    parse_element_at(ambient, s, 1, 1)
}

/// As [`parse_element`], reporting positions relative to a source location.
pub fn parse_element_at<R: CoeffSyntax>(
    ambient: &Ambient<R>,
    s: &str,
    line0: u32,
    col0: u32,
) -> Result<ModElement<R>, ParseError> {
    let mut toks = Tokens::lex(s, line0, col0)?;
    let mut f = ModElement::zero(ambient);
    if toks.eat_sym('[') {
        for k in 0..ambient.rank {
            if k > 0 {
                toks.expect_sym(',')?;
            }
            parse_poly_into(ambient, &mut toks, &mut f, Some(k), false)?;
        }
        toks.expect_sym(']')?;
    } else {
        parse_poly_into(ambient, &mut toks, &mut f, None, true)?;
    }
    if !toks.at_end() {
        return Err(toks.err_here("trailing input after element"));
    }
    Ok(f)
}

/// Parse a standalone scalar (sums and products of coefficient atoms).
pub fn parse_scalar<R: CoeffSyntax>(ring: &R, s: &str) -> Result<R::Elem, ParseError> {
    let mut toks = Tokens::lex(s, 1, 1)?;
    let mut acc = ring.zero();
    let mut negate = if toks.eat_sym('-') {
        true
    } else {
        toks.eat_sym('+');
        false
    };
    loop {
        let mut prod = ring.one();
        loop {
            match ring.parse_atom(&mut toks)? {
                Some(a) => prod = ring.mul(&prod, &a),
                None => return Err(toks.err_here("expected scalar")),
            }
            if !toks.eat_sym('*') {
                break;
            }
        }
        if negate {
            prod = ring.neg(&prod);
        }
        acc = ring.add(&acc, &prod);
        if toks.eat_sym('+') {
            negate = false;
        } else if toks.eat_sym('-') {
            negate = true;
        } else {
            break;
        }
    }
    if !toks.at_end() {
        return Err(toks.err_here("trailing input after scalar"));
    }
    Ok(acc)
}

/// Parse a rational like `-3/2` or `5` (used for weight vectors).
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let mut toks = Tokens::lex(s, 1, 1)?;
    let neg = toks.eat_sym('-');
    let n = toks.expect_int()?;
    let r = if toks.eat_sym('/') {
        let d = toks.expect_int()?;
        if d.is_zero() {
            return Err(toks.err_here("zero denominator"));
        }
        BigRational::new(n, d)
    } else {
        BigRational::from(n)
    };
    if !toks.at_end() {
        return Err(toks.err_here("trailing input after rational"));
    }
    Ok(if neg { -r } else { r })
}

// ---------------------------------------------------------------------------
// canonical printing

fn render_monomial(vars: &[String], mono: &crate::freemod::Monomial) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(&mono.0) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

fn render_term_body(
    vars: &[String],
    rank: usize,
    coeff_str: Option<String>,
    mono: &ModMonomial,
) -> String {
    let mut parts = Vec::new();
    if let Some(c) = coeff_str {
        parts.push(c);
    }
    let m = render_monomial(vars, &mono.mono);
    if !m.is_empty() {
        parts.push(m);
    }
    if rank > 1 {
        parts.push(format!("e{}", mono.pos + 1));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Canonical rendering: terms ascending in the active term order, joined
/// with ` + ` / ` - ` (the sign is pulled out of the coefficient).
pub fn render_element<R: CoeffRing>(f: &ModElement<R>, o: &WeightedTermOrder) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let ring = f.ring().clone();
    let mut terms: Vec<Term<R>> = f
        .terms()
        .map(|(m, c)| Term {
            coeff: c.clone(),
            mono: m.clone(),
        })
        .collect();
    terms.sort_by(|a, b| compare_terms(&ring, a, b, o));
    let vars = &f.ambient().vars;
    let rank = f.ambient().rank;
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let negative = ring.is_negative(&t.coeff);
        let coeff = if negative { ring.neg(&t.coeff) } else { t.coeff.clone() };
        let coeff_str = if ring.is_one(&coeff) {
            None
        } else {
            Some(coeff.to_string())
        };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&render_term_body(vars, rank, coeff_str, &t.mono));
    }
    out
}

/// Render an initial form; terms sorted with the order-greater monomial
/// first, matching how the initial term is selected among equal weights.
pub fn render_residue_element(
    re: &ResidueElement,
    ambient: &Ambient<Domain>,
    o: &WeightedTermOrder,
) -> String {
    if re.is_zero() {
        return "0".to_string();
    }
    let mut keys: Vec<&ModMonomial> = re.terms.keys().collect();
    keys.sort_by(|a, b| o.order.cmp_modmono(b, a));
    let mut out = String::new();
    for (i, m) in keys.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let c = &re.terms[*m];
        let coeff_str = if c.is_one() { None } else { Some(c.to_string()) };
        out.push_str(&render_term_body(&ambient.vars, ambient.rank, coeff_str, m));
    }
    out
}

/// Render a single term (coefficient kept in the ring).
pub fn render_term<R: CoeffRing>(ambient: &Ambient<R>, t: &Term<R>) -> String {
    let ring = &ambient.ring;
    let negative = ring.is_negative(&t.coeff);
    let coeff = if negative { ring.neg(&t.coeff) } else { t.coeff.clone() };
    let coeff_str = if ring.is_one(&coeff) {
        None
    } else {
        Some(coeff.to_string())
    };
    let body = render_term_body(&ambient.vars, ambient.rank, coeff_str, &t.mono);
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

// ---------------------------------------------------------------------------
// problem files

/// A parsed problem file, dispatched on the coefficient ring.
#[derive(Debug)]
pub enum Problem {
    Field(ProblemData<Domain>),
    Zmod(ProblemData<ZmodParams>),
}

#[derive(Debug)]
pub struct ProblemData<R: CoeffRing> {
    pub ambient: Ambient<R>,
    pub order: WeightedTermOrder,
    pub generators: Vec<ModElement<R>>,
    pub target: Option<ModElement<R>>,
}

impl Problem {
    pub fn header(&self) -> String {
        match self {
            Problem::Field(p) => header_line(&p.ambient.ring.to_string(), p),
            Problem::Zmod(p) => header_line(&p.ambient.ring.to_string(), p),
        }
    }
}

fn header_line<R: CoeffRing>(field: &str, p: &ProblemData<R>) -> String {
    let weights: Vec<String> = p.order.weights.iter().map(|w| w.to_string()).collect();
    format!(
        "# field: {field} | vars: {} | rank: {} | weight: ({}) | order: {} | convention: {}",
        p.ambient.vars.join(" "),
        p.ambient.rank,
        weights.join(", "),
        p.order.order.name(),
        p.order.convention.name(),
    )
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum FieldSpec {
    Field(Domain),
    Zmod { p: u64, l: u32 },
}

fn parse_field_spec(rest: &str, line: u32) -> Result<FieldSpec, ParseError> {
    let mut it = rest.split_whitespace();
    let kind = it
        .next()
        .ok_or_else(|| ParseError::new(line, 1, "missing field kind"))?;
    let kv = |key: &str| -> Result<u64, ParseError> {
        for part in rest.split_whitespace().skip(1) {
            if let Some(v) = part.strip_prefix(&format!("{key}=")) {
                return v
                    .parse()
                    .map_err(|_| ParseError::new(line, 1, format!("bad value for {key}")));
            }
        }
        Err(ParseError::new(line, 1, format!("missing {key}=<value>")))
    };
    match kind {
        "Qp" => {
            let p = kv("p")?;
            if !is_prime(p) {
                return Err(ParseError::new(line, 1, format!("{p} is not prime")));
            }
            Ok(FieldSpec::Field(Domain::PAdic(p)))
        }
        "Qt" => Ok(FieldSpec::Field(Domain::TAdic)),
        "trivial" => Ok(FieldSpec::Field(Domain::Trivial)),
        "Zmod" => {
            let p = kv("p")?;
            let l = kv("l")? as u32;
            Ok(FieldSpec::Zmod { p, l })
        }
        other => Err(ParseError::new(
            line,
            1,
            format!("unknown field '{other}' (expected Qp, Qt, trivial or Zmod)"),
        )),
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn reserved_var(name: &str) -> bool {
    name == "t" || basis_index(name).is_some()
}

/// Parse a problem file. Layout is line-oriented: `field`, `vars`, `rank`,
/// `weight`, `order` are required, `convention` defaults to `min`, `gen`
/// lines list generators and `target` is optional. `#` starts a comment.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut field: Option<(FieldSpec, u32)> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut rank: Option<usize> = None;
    let mut weight: Option<Vec<BigRational>> = None;
    let mut order: Option<MonomialOrder> = None;
    let mut convention: Option<Convention> = None;
    let mut gens: Vec<(u32, u32, String)> = Vec::new();
    let mut target: Option<(u32, u32, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i as u32 + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (key, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (trimmed, ""),
        };
        let col_of_rest = (raw.find(rest).unwrap_or(0) + 1) as u32;
        let dup = |name: &str| ParseError::new(line_no, 1, format!("duplicate '{name}' line"));
        match key {
            "field" => {
                if field.is_some() {
                    return Err(dup("field"));
                }
                field = Some((parse_field_spec(rest, line_no)?, line_no));
            }
            "vars" => {
                if vars.is_some() {
                    return Err(dup("vars"));
                }
                let names: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
                if names.is_empty() {
                    return Err(ParseError::new(line_no, 1, "vars line needs at least one name"));
                }
                for n in &names {
                    if reserved_var(n) {
                        return Err(ParseError::new(
                            line_no,
                            1,
                            format!("variable name '{n}' is reserved"),
                        ));
                    }
                    if !n.chars().next().unwrap().is_ascii_alphabetic() {
                        return Err(ParseError::new(
                            line_no,
                            1,
                            format!("invalid variable name '{n}'"),
                        ));
                    }
                }
                let mut uniq = names.clone();
                uniq.sort();
                uniq.dedup();
                if uniq.len() != names.len() {
                    return Err(ParseError::new(line_no, 1, "duplicate variable name"));
                }
                vars = Some(names);
            }
            "rank" => {
                if rank.is_some() {
                    return Err(dup("rank"));
                }
                let r: usize = rest
                    .parse()
                    .map_err(|_| ParseError::new(line_no, 1, "bad rank"))?;
                if r == 0 {
                    return Err(ParseError::new(line_no, 1, "rank must be at least 1"));
                }
                rank = Some(r);
            }
            "weight" => {
                if weight.is_some() {
                    return Err(dup("weight"));
                }
                let mut ws = Vec::new();
                for part in rest.split_whitespace() {
                    ws.push(parse_rational(part).map_err(|e| {
                        ParseError::new(line_no, 1, format!("bad weight '{part}': {}", e.msg))
                    })?);
                }
                weight = Some(ws);
            }
            "order" => {
                if order.is_some() {
                    return Err(dup("order"));
                }
                order = Some(match rest {
                    "lex" => MonomialOrder::Lex,
                    "deglex" => MonomialOrder::DegLex,
                    "degrevlex" => MonomialOrder::DegRevLex,
                    other => {
                        return Err(ParseError::new(
                            line_no,
                            1,
                            format!("unknown order '{other}'"),
                        ))
                    }
                });
            }
            "convention" => {
                if convention.is_some() {
                    return Err(dup("convention"));
                }
                convention = Some(match rest {
                    "min" => Convention::Min,
                    "max" => Convention::Max,
                    other => {
                        return Err(ParseError::new(
                            line_no,
                            1,
                            format!("unknown convention '{other}'"),
                        ))
                    }
                });
            }
            "gen" => gens.push((line_no, col_of_rest, rest.to_string())),
            "target" => {
                if target.is_some() {
                    return Err(dup("target"));
                }
                target = Some((line_no, col_of_rest, rest.to_string()));
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    1,
                    format!("unknown directive '{other}'"),
                ))
            }
        }
    }

    let (field, _) = field.ok_or_else(|| ParseError::new(1, 1, "missing 'field' line"))?;
    let vars = vars.ok_or_else(|| ParseError::new(1, 1, "missing 'vars' line"))?;
    let rank = rank.ok_or_else(|| ParseError::new(1, 1, "missing 'rank' line"))?;
    let weight = weight.ok_or_else(|| ParseError::new(1, 1, "missing 'weight' line"))?;
    let order = order.ok_or_else(|| ParseError::new(1, 1, "missing 'order' line"))?;
    let convention = convention.unwrap_or(Convention::Min);
    if weight.len() != vars.len() {
        return Err(ParseError::new(
            1,
            1,
            format!(
                "weight vector has {} entries but there are {} variables",
                weight.len(),
                vars.len()
            ),
        ));
    }
    if matches!(field, FieldSpec::Zmod { .. }) && matches!(field, FieldSpec::Zmod { .. }) {
        // Zmod problems run the min convention only; the ring order has no
        // max analogue (coefficient valuations are non-negative).
        if convention == Convention::Max {
            return Err(ParseError::new(
                1,
                1,
                "convention max is not supported over Zmod",
            ));
        }
    }
    if field == FieldSpec::Field(Domain::TAdic) && vars.iter().any(|v| v == "t") {
        return Err(ParseError::new(1, 1, "variable 't' clashes with the uniformizer"));
    }

    let wto = WeightedTermOrder::new(weight, order, convention);
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();

    match field {
        FieldSpec::Field(domain) => {
            let ambient = Ambient::new(&var_refs, rank, domain);
            let mut generators = Vec::new();
            for (idx, (line, col, src)) in gens.iter().enumerate() {
                let g = parse_element_at(&ambient, src, *line, *col)?;
                check_generator(g.is_zero(), idx, *line)?;
                generators.push(g);
            }
            let target = match &target {
                Some((line, col, src)) => Some(parse_element_at(&ambient, src, *line, *col)?),
                None => None,
            };
            Ok(Problem::Field(ProblemData {
                ambient,
                order: wto,
                generators,
                target,
            }))
        }
        FieldSpec::Zmod { p, l } => {
            let params = ZmodParams::new(p, l)
                .map_err(|e| ParseError::new(1, 1, format!("bad Zmod parameters: {e}")))?;
            let ambient = Ambient::new(&var_refs, rank, params);
            let mut generators = Vec::new();
            for (idx, (line, col, src)) in gens.iter().enumerate() {
                let g = parse_element_at(&ambient, src, *line, *col)?;
                check_generator(g.is_zero(), idx, *line)?;
                generators.push(g);
            }
            let target = match &target {
                Some((line, col, src)) => Some(parse_element_at(&ambient, src, *line, *col)?),
                None => None,
            };
            Ok(Problem::Zmod(ProblemData {
                ambient,
                order: wto,
                generators,
                target,
            }))
        }
    }
}

/// Zero generators are rejected at load; homogeneity is enforced by the
/// operations that need it (division and completion), since initial forms
/// and valuations are well-defined without it.
fn check_generator(is_zero: bool, idx: usize, line: u32) -> Result<(), ParseError> {
    if is_zero {
        return Err(ParseError::new(
            line,
            1,
            format!("generator {} is zero", idx + 1),
        ));
    }
    Ok(())
}
