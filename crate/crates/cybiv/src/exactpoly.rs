//! Sparse exact Laurent-polynomial arithmetic in the chart coordinates.
//!
//! A [`Poly`] is a finite map from monomials `z^r u1^s u2^t` to nonzero
//! rational coefficients. The base variable `z` may carry negative
//! exponents; the fiber variables `u1`, `u2` may not. All arithmetic is
//! exact. The same representation serves both charts: slot 0 is `z` or
//! `xi`, slot 1 is `u1` or `v1`, slot 2 is `u2` or `v2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Arbitrary-precision rational. Always in lowest terms with positive
/// denominator (maintained by `num_rational`).
pub type Scalar = num_rational::BigRational;

/// Shorthand for an integer-valued [`Scalar`].
pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Rational `p/q` as a [`Scalar`].
pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// The three chart variables.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// Base coordinate: `z` on U, `xi` on V.
    Z,
    /// First fiber coordinate: `u1` on U, `v1` on V.
    U1,
    /// Second fiber coordinate: `u2` on U, `v2` on V.
    U2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::Z, Var::U1, Var::U2];

    pub fn index(self) -> usize {
        match self {
            Var::Z => 0,
            Var::U1 => 1,
            Var::U2 => 2,
        }
    }
}

/// Exponent triple `z^z u1^u1 u2^u2`; `z` may be negative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub z: i64,
    pub u1: u64,
    pub u2: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { z: 0, u1: 0, u2: 0 };

    pub fn new(z: i64, u1: u64, u2: u64) -> Self {
        Monomial { z, u1, u2 }
    }

    /// Total degree counting the (possibly negative) `z` exponent.
    pub fn degree(&self) -> i64 {
        self.z + self.u1 as i64 + self.u2 as i64
    }

    /// Degree in the fiber directions only.
    pub fn fiber_degree(&self) -> u64 {
        self.u1 + self.u2
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            z: self.z + other.z,
            u1: self.u1 + other.u1,
            u2: self.u2 + other.u2,
        }
    }

    pub fn exponent(&self, v: Var) -> i64 {
        match v {
            Var::Z => self.z,
            Var::U1 => self.u1 as i64,
            Var::U2 => self.u2 as i64,
        }
    }
}

/// Graded-lexicographic order, variables ordered `z < u1 < u2`: compare
/// total degree first, then exponents lexicographically from the largest
/// variable down.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.u2, self.u1).cmp(&(other.degree(), other.u2, other.u1))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial in canonical form: no stored coefficient is
/// zero, so equal polynomials have equal term maps.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(scalar(1))
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::ONE, c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        Poly::from_monomial(
            match v {
                Var::Z => Monomial::new(1, 0, 0),
                Var::U1 => Monomial::new(0, 1, 0),
                Var::U2 => Monomial::new(0, 0, 1),
            },
            scalar(1),
        )
    }

    pub fn from_monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Integer-coefficient monomial `c * z^r u1^s u2^t`.
    pub fn term(c: i64, r: i64, s: u64, t: u64) -> Self {
        Poly::from_monomial(Monomial::new(r, s, t), scalar(c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Leading (largest) monomial in the canonical order.
    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c.clone());
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::default();
        if c.is_zero() {
            return out;
        }
        for (m, k) in &self.terms {
            out.terms.insert(*m, k.clone() * c.clone());
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        let mut out = Poly::default();
        if c.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            out.terms.insert(m1.mul(m), c1.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, n: u64) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative; the Laurent rule `d/dz z^r = r z^{r-1}`
    /// applies for every integer `r`.
    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let (e, next) = match v {
                Var::Z => (m.z, Monomial::new(m.z - 1, m.u1, m.u2)),
                Var::U1 => {
                    if m.u1 == 0 {
                        continue;
                    }
                    (m.u1 as i64, Monomial::new(m.z, m.u1 - 1, m.u2))
                }
                Var::U2 => {
                    if m.u2 == 0 {
                        continue;
                    }
                    (m.u2 as i64, Monomial::new(m.z, m.u1, m.u2 - 1))
                }
            };
            if e != 0 {
                out.add_term(next, c.clone() * scalar(e));
            }
        }
        out
    }

    /// Ring substitution `z -> images[0], u1 -> images[1], u2 -> images[2]`.
    ///
    /// Negative powers (they arise only through the `z` slot) require the
    /// corresponding image to be a single invertible term.
    pub fn substitute(&self, images: [&Poly; 3]) -> Result<Poly, SubstituteError> {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (img, e) in images.iter().zip([m.z, m.u1 as i64, m.u2 as i64]) {
                term = term.mul(&pow_signed(img, e)?);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Smallest `z`-exponent appearing, if any term does.
    pub fn min_z_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.z).min()
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|m| m.z < 0)
    }

    /// Largest fiber degree `s + t` over the terms; zero for the zero
    /// polynomial.
    pub fn fiber_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.fiber_degree()).max().unwrap_or(0)
    }

    /// True when every term has fiber degree exactly `d` (vacuously for 0).
    pub fn is_fiber_homogeneous(&self, d: u64) -> bool {
        self.terms.keys().all(|m| m.fiber_degree() == d)
    }

    /// The terms of fiber degree exactly `d`.
    pub fn fiber_component(&self, d: u64) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            if m.fiber_degree() == d {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Render with the given variable names (e.g. U-chart or V-chart).
    pub fn render(&self, names: [&str; 3]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        // Leading term first.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || *m == Monomial::ONE {
                factors.push(format_scalar(&abs));
            }
            for (name, e) in names.iter().zip([m.z, m.u1 as i64, m.u2 as i64]) {
                match e {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{}^{}", name, e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

fn format_scalar(c: &Scalar) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn pow_signed(p: &Poly, e: i64) -> Result<Poly, SubstituteError> {
    if e >= 0 {
        return Ok(p.pow(e as u64));
    }
    if p.num_terms() != 1 {
        return Err(SubstituteError::NonInvertibleImage);
    }
    let (m, c) = p.terms().next().unwrap();
    if m.u1 != 0 || m.u2 != 0 {
        // Inverting a fiber variable never arises in a chart transition.
        return Err(SubstituteError::NonInvertibleImage);
    }
    let inv = Poly::from_monomial(Monomial::new(-m.z, 0, 0), c.recip());
    Ok(inv.pow((-e) as u64))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstituteError {
    #[error("substitution raises a non-invertible polynomial to a negative power")]
    NonInvertibleImage,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(["z", "u1", "u2"]))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(["z", "u1", "u2"]))
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// Parse error with a byte position into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// Parses the polynomial grammar used by the CLI: terms joined by `+`/`-`,
/// `*` for products, `^` for (possibly negative) powers, integer or `p/q`
/// coefficients, and the variable names given in `names`.
pub fn parse_poly(input: &str, names: [&str; 3]) -> Result<Poly, ParseError> {
    let mut p = Parser {
        input,
        bytes: input.as_bytes(),
        pos: 0,
        names,
    };
    p.skip_ws();
    let poly = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

/// Parses in U-chart names `z, u1, u2`.
pub fn parse_u(input: &str) -> Result<Poly, ParseError> {
    parse_poly(input, ["z", "u1", "u2"])
}

/// Parses in V-chart names `xi, v1, v2`.
pub fn parse_v(input: &str) -> Result<Poly, ParseError> {
    parse_poly(input, ["xi", "v1", "v2"])
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
    names: [&'a str; 3],
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse_expr(&mut self) -> Result<Poly, ParseError> {
        let mut sign = 1i64;
        self.skip_ws();
        if let Some(b'-') = self.peek() {
            self.pos += 1;
            sign = -1;
        } else if let Some(b'+') = self.peek() {
            self.pos += 1;
        }
        let mut acc = self.parse_term()?.scale(&scalar(sign));
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                // Juxtaposition like `2z` or `z u1` is accepted too.
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.parse_atom()?;
        self.skip_ws();
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            let e = self.parse_int()?;
            return pow_signed(&base, e).map_err(|_| self.err("negative power of a non-monomial"));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.parse_factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_int()?;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.parse_int()?;
                    if d == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Poly::constant(ratio(n, d)))
                } else {
                    Ok(Poly::constant(scalar(n)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|c| c.is_ascii_alphanumeric())
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let name = &self.input[start..self.pos];
                for (i, v) in Var::ALL.iter().enumerate() {
                    if name == self.names[i] {
                        return Ok(Poly::var(*v));
                    }
                }
                self.pos = start;
                Err(self.err(&format!("unknown variable `{name}`")))
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn parse_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        }
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        self.input[start..self.pos]
            .parse::<i64>()
            .map(|n| sign * n)
            .map_err(|_| self.err("integer out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        parse_u(s).unwrap()
    }

    #[test]
    fn like_terms_collect() {
        let u1 = Poly::var(Var::U1);
        assert_eq!(u1.add(&u1), p("2*u1"));
    }

    #[test]
    fn laurent_cancellation() {
        let zinv = Poly::term(1, -1, 0, 0);
        let z = Poly::var(Var::Z);
        assert_eq!(zinv.mul(&z), Poly::one());
        assert_eq!(p("z*u2").mul(&zinv), p("u2"));
    }

    #[test]
    fn derivative_power_rule() {
        assert_eq!(p("z^2*u1").derivative(Var::Z), p("2*z*u1"));
        assert_eq!(p("u1*u2").derivative(Var::U2), p("u1"));
        // Laurent rule at a pole.
        assert_eq!(
            Poly::term(1, -1, 0, 0).derivative(Var::Z),
            Poly::term(-1, -2, 0, 0)
        );
    }

    #[test]
    fn substitution_examples() {
        // u2 under (z,u1,u2) -> (z^-1, z*u1, z*u2) is z*u2; constants are fixed.
        let img_z = Poly::term(1, -1, 0, 0);
        let img_u1 = p("z*u1");
        let img_u2 = p("z*u2");
        assert_eq!(
            p("u2").substitute([&img_z, &img_u1, &img_u2]).unwrap(),
            p("z*u2")
        );
        assert_eq!(
            Poly::one().substitute([&img_z, &img_u1, &img_u2]).unwrap(),
            Poly::one()
        );
        // z^2*u1 under z -> xi^-1, u1 -> xi^2 v1 collapses to v1.
        let xi_inv = Poly::term(1, -1, 0, 0);
        let v1_img = p("z^2*u1"); // xi^2*v1 in slot names
        let out = p("z^2*u1")
            .substitute([&xi_inv, &v1_img, &Poly::var(Var::U2)])
            .unwrap();
        assert_eq!(out, Poly::var(Var::U1));
    }

    #[test]
    fn substitute_rejects_negative_power_of_sum() {
        let sum = p("z + u1");
        let err = Poly::term(1, -1, 0, 0)
            .substitute([&sum, &Poly::var(Var::U1), &Poly::var(Var::U2)])
            .unwrap_err();
        assert_eq!(err, SubstituteError::NonInvertibleImage);
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let u1 = Monomial::new(0, 1, 0);
        let z = Monomial::new(1, 0, 0);
        let u2 = Monomial::new(0, 0, 1);
        assert!(u2 > u1, "within a degree, u2 dominates");
        assert!(u1 > z, "then u1 beats z");
        assert!(Monomial::new(2, 0, 0) > Monomial::new(0, 1, 0));
        assert!(Monomial::new(-1, 0, 0) < Monomial::ONE);
    }

    #[test]
    fn render_and_reparse_round_trip() {
        let q = p("3*z^2*u1 - u2 + 1/2 - z^-1*u1^3");
        let s = q.render(["z", "u1", "u2"]);
        assert_eq!(parse_u(&s).unwrap(), q);
        assert_eq!(p("0").render(["z", "u1", "u2"]), "0");
    }

    #[test]
    fn parse_error_positions() {
        let err = parse_u("z + ").unwrap_err();
        assert_eq!(err.position, 4);
        assert!(parse_u("w1").is_err());
        assert!(parse_u("").is_err());
    }

    #[test]
    fn fiber_degree_and_components() {
        let q = p("z^3 + u1*u2 + z*u1");
        assert_eq!(q.fiber_degree(), 2);
        assert_eq!(q.fiber_component(1), p("z*u1"));
        assert!(!q.is_fiber_homogeneous(2));
        assert!(p("u1*u2 + u1^2").is_fiber_homogeneous(2));
    }
}
