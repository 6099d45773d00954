use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A real polynomial in `n` variables `x1, ..., xn`.
///
/// Terms are keyed by their exponent vector; zero coefficients are never
/// stored, so the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: f64) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// The coordinate `x_{i+1}` (zero-based `i`).
    pub fn variable(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::from_terms(vars, [(e, 1.0)])
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent vector length must equal the variable count");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        let slot = self.terms.entry(exps).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.retain(|_, v| *v != 0.0);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.vars, "argument length must equal the variable count");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// `∂/∂x_{i+1}`, by exact coefficient manipulation.
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * f64::from(e[i]));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.vars).map(|i| self.partial(i)).collect()
    }

    /// Coefficients `c_k` of `p(x) = Σ c_k x^k` for a univariate polynomial.
    pub fn univariate_coefficients(&self) -> Option<Vec<f64>> {
        if self.vars != 1 {
            return None;
        }
        let mut coeffs = vec![0.0; self.degree() as usize + 1];
        for (e, &c) in &self.terms {
            coeffs[e[0] as usize] = c;
        }
        Some(coeffs)
    }

    fn add(&mut self, other: Polynomial, sign: f64) {
        for (e, c) in other.terms {
            self.add_term(e, sign * c);
        }
    }

    fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " {} ", if *c < 0.0 { '-' } else { '+' })?;
            } else if *c < 0.0 {
                write!(f, "-")?;
            }
            let mag = c.abs();
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, k)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{mag}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses sums of products such as `x1^2 - 3*x1*x2 + 0.5`.
///
/// The variable count is the largest index that appears (at least 1).
impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let vars = tokens
            .iter()
            .filter_map(|t| match t {
                Token::Var(i) => Some(*i),
                _ => None,
            })
            .max()
            .unwrap_or(1);
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            vars,
        };
        let p = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in `{s}`")));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '(' => {
                out.push(Token::Open);
                i += 1
            }
            ')' => {
                out.push(Token::Close);
                i += 1
            }
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("variable without index at {i} in `{s}`")))?;
                if idx == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                out.push(Token::Var(idx));
                i = j;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_digit()
                        || chars[j] == '.'
                        || chars[j] == 'e'
                        || chars[j] == 'E'
                        || ((chars[j] == '-' || chars[j] == '+')
                            && j > i
                            && (chars[j - 1] == 'e' || chars[j - 1] == 'E')))
                {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let v = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
                out.push(Token::Num(v));
                i = j;
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    vars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut sign = 1.0;
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            sign = -1.0;
        }
        let mut acc = Polynomial::zero(self.vars);
        acc.add(self.term()?, sign);
        loop {
            let sign = match self.peek() {
                Some(Token::Plus) => 1.0,
                Some(Token::Minus) => -1.0,
                _ => break,
            };
            self.pos += 1;
            acc.add(self.term()?, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let k = match self.peek() {
                Some(Token::Num(v)) if v.fract() == 0.0 && *v >= 0.0 => *v as u32,
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            };
            self.pos += 1;
            let mut out = Polynomial::constant(self.vars, 1.0);
            for _ in 0..k {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.vars, v))
            }
            Some(Token::Var(i)) => {
                self.pos += 1;
                Ok(Polynomial::variable(self.vars, i - 1))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_eval() {
        let p: Polynomial = "x1^2 - 3*x1*x2 + 0.5".parse().unwrap();
        assert_eq!(p.vars(), 2);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&[2.0, 1.0]), 4.0 - 6.0 + 0.5);
        let q: Polynomial = "-(x1 + 1)^3".parse().unwrap();
        assert_eq!(q.eval(&[1.0]), -8.0);
        let c: Polynomial = "1".parse().unwrap();
        assert_eq!(c.vars(), 1);
        assert_eq!(c.eval(&[123.0]), 1.0);
    }

    #[test]
    fn parse_errors() {
        assert!("x0".parse::<Polynomial>().is_err());
        assert!("x1^".parse::<Polynomial>().is_err());
        assert!("x1 $ 2".parse::<Polynomial>().is_err());
        assert!("(x1".parse::<Polynomial>().is_err());
        assert!("x1^0.5".parse::<Polynomial>().is_err());
    }

    #[test]
    fn partials() {
        let p: Polynomial = "x1*x2 + x1^3".parse().unwrap();
        let dx1 = p.partial(0);
        let dx2 = p.partial(1);
        assert_eq!(dx1, "x2 + 3*x1^2".parse().unwrap());
        assert_eq!(dx2, Polynomial::from_terms(2, [(vec![1, 0], 1.0)]));
        assert!(Polynomial::constant(1, 4.0).partial(0).is_zero());
    }

    #[test]
    fn display_round_trips_through_parse() {
        let p: Polynomial = "2*x1^2*x3 - x2 + 0.25".parse().unwrap();
        let q: Polynomial = p.to_string().parse().unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn cancellation_removes_terms() {
        let p: Polynomial = "x1 - x1".parse().unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    proptest! {
        #[test]
        fn partial_matches_central_difference(
            c in prop::collection::vec(-2.0f64..2.0, 4), x in -2.0f64..2.0, y in -2.0f64..2.0
        ) {
            let p = Polynomial::from_terms(2, [
                (vec![3, 0], c[0]), (vec![1, 2], c[1]), (vec![0, 1], c[2]), (vec![0, 0], c[3]),
            ]);
            let h = 1e-5;
            let fd = (p.eval(&[x + h, y]) - p.eval(&[x - h, y])) / (2.0 * h);
            prop_assert!((p.partial(0).eval(&[x, y]) - fd).abs() < 1e-6);
        }
    }
}
