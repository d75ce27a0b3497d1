//! Sparse multivariate polynomials with rational coefficients and an infix parser.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_q, Q};

/// Polynomial in `nvars` ordered variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Q) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Q) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(self.nvars, Q::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// The constant value, if the polynomial has no variable-dependent terms.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    /// Render with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [&'a str]) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, names }
    }
}

struct PolyDisplay<'a> {
    p: &'a Polynomial,
    names: &'a [&'a str],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.p.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { self.names[i].to_string() } else { format!("{}^{x}", self.names[i]) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_q(c))?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_q(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Q),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(Q::from_integer(text.parse().map_err(|_| Error::Parse(text.clone()))?)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat('-') { self.term()?.scale(&-Q::one()) } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.scale(&-Q::one()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?.as_constant().ok_or_else(|| Error::Parse("division by a non-constant".into()))?;
                if d.is_zero() {
                    return Err(Error::Parse("division by zero".into()));
                }
                acc = acc.scale(&d.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: u32 = n.to_integer().try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("exponent must be a nonnegative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let n = self.vars.len();
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(q)) => {
                self.pos += 1;
                Ok(Polynomial::constant(n, q))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                Ok(Polynomial::var(n, i))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(self.atom()?.scale(&-Q::one()))
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an infix polynomial over the named variables: integers, `+ - * / ^`, parentheses.
/// Division is only by constants.
pub fn parse_polynomial(text: &str, vars: &[&str]) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { tokens, pos: 0, vars };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(out)
}

/// Variable names used by `text`: `["x"]` if it mentions a bare `x`, else `x1..xn` with `n` the
/// largest index that occurs.
pub fn flavor_variables(text: &str) -> Result<Vec<String>> {
    let mut bare = false;
    let mut max_index = 0usize;
    for t in tokenize(text)? {
        if let Token::Ident(name) = t {
            if name == "x" {
                bare = true;
            } else if let Some(i) = name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()).filter(|&i| i >= 1) {
                max_index = max_index.max(i);
            } else {
                return Err(Error::Parse(format!("unknown variable `{name}`; use x or x1, x2, ...")));
            }
        }
    }
    match (bare, max_index) {
        (true, 0) => Ok(vec!["x".into()]),
        (true, _) => Err(Error::Parse("mixes `x` with indexed variables".into())),
        (false, 0) => Ok(vec!["x".into()]),
        (false, n) => Ok((1..=n).map(|i| format!("x{i}")).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    #[test]
    fn parses_rational_polynomials() {
        let p = parse_polynomial("x^3/3", &["x"]).unwrap();
        assert_eq!(p, Polynomial::monomial(vec![3], q_frac(1, 3)));
        let q = parse_polynomial("(x1 + x2)^2 - 2*x1*x2", &["x1", "x2"]).unwrap();
        let expected = parse_polynomial("x1^2 + x2^2", &["x1", "x2"]).unwrap();
        assert_eq!(q, expected);
        assert_eq!(parse_polynomial("-x + 1/2", &["x"]).unwrap().terms().len(), 2);
        assert!(parse_polynomial("x/x", &["x"]).is_err());
        assert!(parse_polynomial("y", &["x"]).is_err());
        assert!(parse_polynomial("x^", &["x"]).is_err());
        assert!(parse_polynomial("x)", &["x"]).is_err());
    }

    #[test]
    fn detects_flavor_variables() {
        assert_eq!(flavor_variables("x^3/3").unwrap(), vec!["x"]);
        assert_eq!(flavor_variables("x1^3 + x3").unwrap(), vec!["x1", "x2", "x3"]);
        assert!(flavor_variables("x + x1").is_err());
        assert!(flavor_variables("y^2").is_err());
    }

    #[test]
    fn derivative_and_display() {
        let p = parse_polynomial("x1^3/3 + x1*x2^2", &["x1", "x2"]).unwrap();
        let d = p.derivative(0);
        assert_eq!(d, parse_polynomial("x1^2 + x2^2", &["x1", "x2"]).unwrap());
        assert_eq!(d.display(&["x1", "x2"]).to_string(), "x1^2 + x2^2");
        assert_eq!(p.degree(), Some(3));
    }
}
