//! Exact bivariate polynomials in `s` and `t` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::PolyParseError;

/// Polynomial `sum c * s^a * t^b`, keyed by `(a, b)`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), i64>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: i64, deg_s: u32, deg_t: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((deg_s, deg_t), c);
        }
        Self { terms }
    }

    pub fn s() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, deg_s: u32, deg_t: u32) -> i64 {
        self.terms.get(&(deg_s, deg_t)).copied().unwrap_or(0)
    }

    /// Iterates `((deg_s, deg_t), coefficient)` in ascending degree order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    fn add_term(&mut self, key: (u32, u32), c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(key).or_insert(0);
        *entry = entry.checked_add(c).expect("polynomial coefficient overflow");
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// Evaluates at integer `(s, t)`, panicking on overflow.
    pub fn eval(&self, s: i64, t: i64) -> i64 {
        self.terms.iter().fold(0i64, |acc, (&(a, b), &c)| {
            let term = s
                .checked_pow(a)
                .and_then(|x| t.checked_pow(b).and_then(|y| x.checked_mul(y)))
                .and_then(|x| x.checked_mul(c))
                .expect("polynomial evaluation overflow");
            acc.checked_add(term).expect("polynomial evaluation overflow")
        })
    }

    /// Interchanges the roles of `s` and `t`.
    pub fn swap_st(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.terms {
            out.add_term((b, a), c);
        }
        out
    }

    /// Substitutes `t := s`; the result has no `t`.
    pub fn with_t_eq_s(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.terms {
            out.add_term((a + b, 0), c);
        }
        out
    }

    /// Substitutes `t := value`.
    pub fn with_t(&self, value: i64) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.terms {
            let f = value.checked_pow(b).and_then(|v| v.checked_mul(c));
            out.add_term((a, 0), f.expect("polynomial substitution overflow"));
        }
        out
    }

    /// Substitutes `s := value`.
    pub fn with_s(&self, value: i64) -> Self {
        self.swap_st().with_t(value).swap_st()
    }
}

impl fmt::Display for BivariatePoly {
    /// Canonical form: terms by `(deg_s, deg_t)` descending, e.g. `s^2*t - 2*s + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(a, b), &c)) in self.terms.iter().rev().enumerate() {
            let magnitude = c.unsigned_abs();
            if n == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if magnitude != 1 || (a == 0 && b == 0) {
                factors.push(magnitude.to_string());
            }
            for (var, deg) in [("s", a), ("t", b)] {
                match deg {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    d => factors.push(format!("{var}^{d}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            out.add_term(k, c.checked_neg().expect("polynomial coefficient overflow"));
        }
        out
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &rhs.terms {
                let c = c1.checked_mul(c2).expect("polynomial coefficient overflow");
                out.add_term((a1 + a2, b1 + b2), c);
            }
        }
        out
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        &BivariatePoly::zero() - self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BivariatePoly {
            type Output = BivariatePoly;
            fn $m(self, rhs: BivariatePoly) -> BivariatePoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for BivariatePoly {
    fn sum<I: Iterator<Item = BivariatePoly>>(iter: I) -> Self {
        iter.fold(BivariatePoly::zero(), |acc, p| &acc + &p)
    }
}

impl<'a> std::iter::Sum<&'a BivariatePoly> for BivariatePoly {
    fn sum<I: Iterator<Item = &'a BivariatePoly>>(iter: I) -> Self {
        iter.fold(BivariatePoly::zero(), |acc, p| &acc + p)
    }
}

/// Parses expressions such as `st(s-1)`, `s^2 t - 3*t + 1` or `(s-1)(t^2-t+1)`.
///
/// Juxtaposition (including `st`) and `*` both multiply; `^` takes a
/// non-negative integer exponent.
impl FromStr for BivariatePoly {
    type Err = PolyParseError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { chars: input.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        if parser.chars.is_empty() {
            return Err(PolyParseError { input: input.to_string(), position: 0 });
        }
        let value = parser.expr().map_err(|position| PolyParseError { input: input.to_string(), position })?;
        if parser.pos != parser.chars.len() {
            return Err(PolyParseError { input: input.to_string(), position: parser.pos });
        }
        Ok(value)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BivariatePoly, usize> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op) = self.peek() {
            match op {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BivariatePoly, usize> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if c == '(' || c == 's' || c == 't' || c.is_ascii_digit() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<BivariatePoly, usize> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exp = self.number()?;
            let exp = u32::try_from(exp).map_err(|_| self.pos)?;
            Ok(base.pow(exp))
        } else {
            Ok(base)
        }
    }

    fn number(&mut self) -> Result<i64, usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(start);
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| start)
    }

    fn atom(&mut self) -> Result<BivariatePoly, usize> {
        match self.peek() {
            Some('s') => {
                self.pos += 1;
                Ok(BivariatePoly::s())
            }
            Some('t') => {
                self.pos += 1;
                Ok(BivariatePoly::t())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.pos);
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(BivariatePoly::constant(self.number()?)),
            _ => Err(self.pos),
        }
    }
}
