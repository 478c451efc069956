use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Exponent vector of a monomial, one entry per variable.
pub type Monomial = Vec<u32>;

/// Largest exponent accepted by the text parser.
pub const MAX_PARSED_EXPONENT: u32 = 64;

/// A polynomial in `x₁, …, x_N` with exact rational coefficients.
///
/// Terms are merged and zero coefficients are never stored, so structural
/// equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_i` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponents: Monomial, c: Rational) -> Self {
        assert_eq!(exponents.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exponents, c);
        p
    }

    /// `Σ cᵢ xᵢ` for integer coefficients.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.add_term(e, Rational::from_integer(c.into()));
            }
        }
        p
    }

    fn add_term(&mut self, exponents: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponents) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&exponents);
                }
            }
            None => {
                self.terms.insert(exponents, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rational::from_integer(e[i].into()));
        }
        out
    }

    /// `p(q₁, …, q_N)` where every `qᵢ` shares one variable count.
    pub fn substitute(&self, subs: &[Polynomial]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::ShapeMismatch {
                rows: subs.len(),
                cols: self.nvars,
            });
        }
        let m = subs.first().map_or(0, |q| q.nvars);
        if subs.iter().any(|q| q.nvars != m) {
            return Err(Error::InvalidConfig("substituted polynomials disagree on variable count".into()));
        }
        // Cache powers per variable.
        let mut powers: Vec<Vec<Polynomial>> = subs.iter().map(|q| vec![Polynomial::one(m), q.clone()]).collect();
        let mut out = Self::zero(m);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &subs[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Exact or floating evaluation.
    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.nvars);
        let mut total = S::zero();
        for (e, c) in &self.terms {
            let mut t = S::from_rational(c);
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t * xi.clone();
                }
            }
            total = total + t;
        }
        total
    }

    /// Rewrites modulo `x₁² + … + x_N² − 1` so that `x_N` has degree ≤ 1.
    pub fn reduce_mod_sphere(&self) -> Self {
        let n = self.nvars;
        if n == 0 {
            return self.clone();
        }
        let last = n - 1;
        let mut out = Self::zero(n);
        // x_N^{2k+r} = (1 − Σ_{i<N} x_i²)^k x_N^r
        let mut rest = Polynomial::one(n);
        for i in 0..last {
            rest = &rest - &Polynomial::var(n, i).pow(2);
        }
        let mut rest_powers = vec![Polynomial::one(n)];
        for (e, c) in &self.terms {
            let k = (e[last] / 2) as usize;
            while rest_powers.len() <= k {
                let next = &rest_powers[rest_powers.len() - 1] * &rest;
                rest_powers.push(next);
            }
            let mut base = e.clone();
            base[last] %= 2;
            let term = &Polynomial::monomial(n, base, c.clone()) * &rest_powers[k];
            out = &out + &term;
        }
        out
    }

    pub fn compile(&self) -> CompiledPolynomial {
        CompiledPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let factors = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k)).collect();
                    (c.to_f64(), factors)
                })
                .collect(),
        }
    }

    /// Parses text in the format written by `Display`, e.g.
    /// `2*x1^2*x3 - 1/3*x4 + 5`.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        Parser::new(text, nvars).polynomial()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Lexicographic order with `x₁` most significant, highest terms first.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = *c < Rational::zero();
            let magnitude = if negative { -c } else { c.clone() };
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                .collect();
            if vars.is_empty() {
                f.write_str(&format_rational(&magnitude))?;
            } else if magnitude.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&magnitude), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// A polynomial flattened for fast `f64` evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPolynomial {
    nvars: usize,
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPolynomial {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, factors)| factors.iter().fold(*c, |acc, &(i, k)| acc * x[i].powi(k as i32)))
            .sum()
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, nvars: usize) -> Self {
        Self { src, pos: 0, nvars }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, format!("{} at column {} in `{}`", msg.into(), self.pos + 1, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn polynomial(mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.nvars);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
            let negative = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                return Err(self.err("expected `+` or `-`"));
            };
            let (e, c) = self.term()?;
            out.add_term(e, if negative { -c } else { c });
            first = false;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        self.skip_ws();
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.nvars];
        let mut need_factor = true;
        if self.peek().is_some_and(|c| c.is_ascii_digit() || c == b'.') {
            coeff = self.number()?;
            need_factor = false;
            if !self.eat(b'*') {
                return Ok((exps, coeff));
            }
        }
        loop {
            self.skip_ws();
            if self.peek() != Some(b'x') {
                if need_factor {
                    return Err(self.err("expected a coefficient or variable"));
                }
                return Err(self.err("expected a variable after `*`"));
            }
            self.pos += 1;
            let index = self.digits()?;
            let index: usize = index.parse().map_err(|_| self.err("invalid variable index"))?;
            if index == 0 || index > self.nvars {
                return Err(self.err(format!("variable x{index} outside x1..x{}", self.nvars)));
            }
            let mut power = 1u32;
            if self.eat(b'^') {
                self.skip_ws();
                power = self
                    .digits()?
                    .parse()
                    .ok()
                    .filter(|&k| k <= MAX_PARSED_EXPONENT)
                    .ok_or_else(|| self.err(format!("exponent must be at most {MAX_PARSED_EXPONENT}")))?;
            }
            let slot = &mut exps[index - 1];
            *slot = slot
                .checked_add(power)
                .filter(|&k| k <= MAX_PARSED_EXPONENT)
                .ok_or_else(|| self.err("exponent too large"))?;
            need_factor = false;
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((exps, coeff))
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn number(&mut self) -> Result<Rational> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == b'.' || c == b'/') {
            self.pos += 1;
        }
        parse_rational(&self.src[start..self.pos])
            .map(|(q, _)| q)
            .map_err(|_| self.err("invalid coefficient"))
    }
}
