//! Sparse multivariate polynomials, dense univariate polynomials, and the
//! Smith normal form of matrices over k[s].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fields::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials belong to different rings")]
    ContextMismatch,
    #[error("point has {found} coordinates, ring has {expected} variables")]
    PointArity { expected: usize, found: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("squarefree part of the zero polynomial is undefined")]
    SquarefreeOfZero,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient field plus variable names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyRing {
    field: Field,
    vars: Arc<[String]>,
}

impl PolyRing {
    pub fn new(field: &Field, names: &[&str]) -> Self {
        PolyRing { field: field.clone(), vars: names.iter().map(|s| s.to_string()).collect() }
    }

    /// k[t1, …, td].
    pub fn t_ring(field: &Field, d: usize) -> Self {
        let names: Vec<String> = (1..=d).map(|i| format!("t{i}")).collect();
        PolyRing { field: field.clone(), vars: names.into() }
    }

    /// k[t1, …, td, s1, …, sc], t-variables first.
    pub fn ts_ring(field: &Field, d: usize, c: usize) -> Self {
        let names: Vec<String> =
            (1..=d).map(|i| format!("t{i}")).chain((1..=c).map(|i| format!("s{i}"))).collect();
        PolyRing { field: field.clone(), vars: names.into() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn zero(&self) -> MPoly {
        MPoly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(&self, c: u32) -> MPoly {
        self.monomial(vec![0; self.nvars()], c)
    }

    pub fn one(&self) -> MPoly {
        self.constant(1)
    }

    pub fn var(&self, i: usize) -> MPoly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial(e, 1)
    }

    pub fn monomial(&self, exps: Vec<u32>, c: u32) -> MPoly {
        assert_eq!(exps.len(), self.nvars());
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial(exps), c);
        }
        MPoly { ring: self.clone(), terms }
    }

    pub fn parse(&self, input: &str) -> Result<MPoly, PolyError> {
        let mut parser = Parser { ring: self, input, chars: input.char_indices().peekable() };
        let poly = parser.expr()?;
        parser.skip_ws();
        if let Some(&(_, ch)) = parser.chars.peek() {
            return Err(parser.error(&format!("unexpected {ch:?}")));
        }
        Ok(poly)
    }
}

/// A polynomial in the variables of its [`PolyRing`]. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: PolyRing,
    terms: BTreeMap<Monomial, u32>,
}

impl MPoly {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        &self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u32)> {
        self.terms.iter().map(|(m, &c)| (m.0.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> u32 {
        self.terms.get(&Monomial(exps.to_vec())).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coefficient(&vec![0; self.nvars()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Lowest total degree among the terms (the order of vanishing at 0).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    fn check(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.ring.field.clone();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check(other)?;
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let m = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
                out.add_term(m, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> MPoly {
        let f = &self.ring.field;
        MPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect() }
    }

    pub fn scale(&self, c: u32) -> MPoly {
        let f = &self.ring.field;
        let mut out = self.ring.zero();
        for (m, &x) in &self.terms {
            out.add_term(m.clone(), f.mul(c, x));
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by the monomial with exponent vector `exps`.
    pub fn shift(&self, exps: &[u32]) -> MPoly {
        MPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (Monomial(m.0.iter().zip(exps).map(|(a, b)| a + b).collect()), c))
                .collect(),
        }
    }

    pub fn evaluate(&self, point: &[u32]) -> Result<u32, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::PointArity { expected: self.nvars(), found: point.len() });
        }
        let f = &self.ring.field;
        Ok(self.terms.iter().fold(0, |acc, (m, &c)| {
            let v = m.0.iter().zip(point).fold(c, |v, (&e, &x)| f.mul(v, f.pow(x, e as u64)));
            f.add(acc, v)
        }))
    }

    /// The same polynomial viewed in a ring with more variables: variable i
    /// of `self` becomes variable `positions[i]` of `target`.
    pub fn embed(&self, target: &PolyRing, positions: &[usize]) -> MPoly {
        assert_eq!(positions.len(), self.nvars());
        let mut out = target.zero();
        for (m, &c) in &self.terms {
            let mut e = vec![0; target.nvars()];
            for (i, &x) in m.0.iter().enumerate() {
                e[positions[i]] += x;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Quotient and remainder on division by one polynomial, graded-lex
    /// leading terms. The remainder is zero exactly when `divisor` divides
    /// `self`.
    pub fn div_rem(&self, divisor: &MPoly) -> Result<(MPoly, MPoly), PolyError> {
        self.check(divisor)?;
        let f = self.ring.field.clone();
        let (lm, &lc) = divisor.terms.iter().next_back().ok_or(PolyError::DivisionByZero)?;
        let lc_inv = f.inv(lc).expect("leading coefficient is nonzero");
        let mut rest = self.clone();
        let mut quot = self.ring.zero();
        let mut rem = self.ring.zero();
        while let Some((m, &c)) = rest.terms.iter().next_back() {
            let m = m.clone();
            if lm.divides(&m) {
                let e: Vec<u32> = m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
                let factor = f.mul(c, lc_inv);
                quot.add_term(Monomial(e.clone()), factor);
                rest = &rest - &divisor.shift(&e).scale(factor);
            } else {
                rest.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        Ok((quot, rem))
    }
}

impl std::ops::Add for &MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        self.try_add(rhs).expect("polynomials from different rings")
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        self.try_sub(rhs).expect("polynomials from different rings")
    }
}

impl std::ops::Mul for &MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        self.try_mul(rhs).expect("polynomials from different rings")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = &self.ring.field;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut factors: Vec<String> = Vec::new();
                for (i, &e) in m.0.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(self.ring.vars[i].clone()),
                        _ => factors.push(format!("{}^{e}", self.ring.vars[i])),
                    }
                }
                let coeff = field.format(c);
                let coeff = if field.is_prime_field() { coeff } else { format!("({coeff})") };
                if factors.is_empty() {
                    coeff
                } else if c == 1 {
                    factors.join("*")
                } else {
                    format!("{coeff}*{}", factors.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// In a polynomial ring (a domain) an element is regular iff it is nonzero.
pub fn is_regular(f: &MPoly) -> bool {
    !f.is_zero()
}

/// (g₁(0), …, g_c(0)).
pub fn constant_term_vector(gs: &[MPoly]) -> Vec<u32> {
    gs.iter().map(MPoly::constant_term).collect()
}

/// Whether two coefficient tuples agree at the origin, i.e. define the same
/// class in I/𝔫I.
pub fn coeffs_congruent(g: &[MPoly], h: &[MPoly]) -> bool {
    g.len() == h.len() && constant_term_vector(g) == constant_term_vector(h)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    input: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> PolyError {
        PolyError::Parse { input: self.input.to_string(), reason: reason.to_string() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.ring.zero();
        let mut sign = match self.peek() {
            Some('-') => {
                self.chars.next();
                -1
            }
            Some('+') => {
                self.chars.next();
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                _ => return Ok(acc),
            }
            self.chars.next();
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.chars.next();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.chars.next();
            self.skip_ws();
            let n = self.number()?;
            let n = u32::try_from(n).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64, PolyError> {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s.parse().map_err(|_| self.error("expected a number"))
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.peek() {
            Some('(') => {
                self.chars.next();
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("missing ')'"));
                }
                self.chars.next();
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let p = self.ring.field.characteristic() as u64;
                Ok(self.ring.constant((n % p) as u32))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, c)) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        self.chars.next();
                    } else {
                        break;
                    }
                }
                if let Some(i) = self.ring.vars.iter().position(|v| *v == name) {
                    Ok(self.ring.var(i))
                } else if name == "z" && !self.ring.field.is_prime_field() {
                    Ok(self.ring.constant(self.ring.field.generator()))
                } else {
                    Err(self.error(&format!("unknown variable {name}")))
                }
            }
            Some(c) => Err(self.error(&format!("unexpected {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Dense univariate polynomial over a field, coefficients low-to-high with
/// no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    field: Field,
    coeffs: Vec<u32>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let c = self.field.format(c);
                match i {
                    0 => c,
                    1 if c == "1" => "s".into(),
                    1 => format!("{c}*s"),
                    _ if c == "1" => format!("s^{i}"),
                    _ => format!("{c}*s^{i}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl UPoly {
    pub fn new(field: &Field, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        UPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: u32) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1)
    }

    /// The variable s.
    pub fn x(field: &Field) -> Self {
        Self::new(field, vec![0, 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    pub fn scale(&self, c: u32) -> UPoly {
        UPoly::new(&self.field, self.coeffs.iter().map(|&x| self.field.mul(c, x)).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(&self.field, self.coeffs.iter().map(|&x| self.field.neg(x)).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()).expect("nonzero leading coefficient"))
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &self.field;
        let c = (0..n)
            .map(|i| f.add(self.coeffs.get(i).copied().unwrap_or(0), other.coeffs.get(i).copied().unwrap_or(0)))
            .collect();
        UPoly::new(f, c)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        UPoly::new(f, c)
    }

    pub fn pow(&self, n: u32) -> UPoly {
        (0..n).fold(UPoly::one(&self.field), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, divisor: &UPoly) -> Result<(UPoly, UPoly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let f = &self.field;
        let inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = f.mul(rem[k], inv);
            quot[k - dd] = c;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] = f.sub(rem[k - dd + j], f.mul(c, dj));
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        Ok((UPoly::new(f, quot), UPoly::new(f, rem)))
    }

    /// Whether `self` divides `other` (zero divides only zero).
    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    pub fn derivative(&self) -> UPoly {
        let f = &self.field;
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, &a)| f.mul(f.from_int(i as i64), a)).collect();
        UPoly::new(f, c)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// The b with b^p = self, when every exponent is a multiple of p.
    fn pth_root(&self) -> Option<UPoly> {
        let p = self.field.characteristic() as usize;
        if self.coeffs.iter().enumerate().any(|(i, &c)| c != 0 && i % p != 0) {
            return None;
        }
        let c = self.coeffs.iter().step_by(p).map(|&c| self.field.frobenius_inv(c)).collect();
        Some(UPoly::new(&self.field, c))
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Result<UPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::SquarefreeOfZero);
        }
        Ok(radical(&self.monic()))
    }
}

fn radical(a: &UPoly) -> UPoly {
    if a.degree() == Some(0) {
        return UPoly::one(&a.field);
    }
    let da = a.derivative();
    if da.is_zero() {
        let root = a.pth_root().expect("vanishing derivative means a p-th power");
        return radical(&root.monic());
    }
    let g = upoly_gcd(a, &da);
    // a / gcd(a, a') carries every factor whose multiplicity is prime to p
    let w = a.div_rem(&g).expect("gcd is nonzero").0.monic();
    let rg = radical(&g);
    let common = upoly_gcd(&w, &rg);
    w.mul(&rg).div_rem(&common).expect("gcd is nonzero").0.monic()
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn upoly_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.div_rem(&b).expect("nonzero divisor").1;
        a = b;
        b = r;
    }
    a.monic()
}

pub fn squarefree_part(a: &UPoly) -> Result<UPoly, PolyError> {
    a.squarefree_part()
}

/// Dense matrix with entries in k[s].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<UPoly>,
}

impl UPolyMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        UPolyMatrix { field: field.clone(), rows, cols, entries: vec![UPoly::zero(field); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, UPoly::one(field));
        }
        m
    }

    /// Builds a matrix from coefficient lists (low-to-high) over the prime
    /// subfield.
    pub fn from_coeff_rows(field: &Field, rows: &[Vec<Vec<i64>>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols, "ragged rows");
            for (j, c) in r.iter().enumerate() {
                m.set(i, j, UPoly::new(field, c.iter().map(|&x| field.from_int(x)).collect()));
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &UPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: UPoly) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(UPoly::degree).max()
    }

    pub fn mul(&self, other: &UPolyMatrix) -> UPolyMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = UPolyMatrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(UPoly::is_zero)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> UPolyMatrix {
        let mut m = UPolyMatrix::zeros(&self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> UPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let f = &self.field;
        if n == 0 {
            return UPoly::one(f);
        }
        let mut m = self.entries.clone();
        let mut negate = false;
        let mut prev = UPoly::one(f);
        for k in 0..n {
            if m[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return UPoly::zero(f);
                };
                for c in 0..n {
                    m.swap(k * n + c, swap * n + c);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k * n + k].mul(&m[i * n + j]).sub(&m[i * n + k].mul(&m[k * n + j]));
                    m[i * n + j] = num.div_rem(&prev).expect("nonzero pivot").0;
                }
            }
            prev = m[k * n + k].clone();
        }
        let det = m[n * n - 1].clone();
        if negate {
            det.neg()
        } else {
            det
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row_dst += c · row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &UPoly) {
        for k in 0..self.cols {
            let v = self.get(dst, k).add(&c.mul(self.get(src, k)));
            self.set(dst, k, v);
        }
    }

    /// col_dst += c · col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &UPoly) {
        for k in 0..self.rows {
            let v = self.get(k, dst).add(&c.mul(self.get(k, src)));
            self.set(k, dst, v);
        }
    }

    fn scale_row(&mut self, r: usize, c: u32) {
        for k in 0..self.cols {
            let v = self.get(r, k).scale(c);
            self.set(r, k, v);
        }
    }

    fn scale_col(&mut self, col: usize, c: u32) {
        for k in 0..self.rows {
            let v = self.get(k, col).scale(c);
            self.set(k, col, v);
        }
    }
}

/// `input = u · diag · v` with `u`, `v` invertible over k[s];
/// `u_inv`, `v_inv` are their inverses.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub invariant_factors: Vec<UPoly>,
    pub diagonal: UPolyMatrix,
    pub u: UPolyMatrix,
    pub v: UPolyMatrix,
    pub u_inv: UPolyMatrix,
    pub v_inv: UPolyMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by Euclidean row and column reduction.
pub fn smith_normal_form(input: &UPolyMatrix) -> SmithForm {
    let f = input.field.clone();
    let (rows, cols) = (input.rows, input.cols);
    let mut d = input.clone();
    let mut u = UPolyMatrix::identity(&f, rows);
    let mut u_inv = UPolyMatrix::identity(&f, rows);
    let mut v = UPolyMatrix::identity(&f, cols);
    let mut v_inv = UPolyMatrix::identity(&f, cols);

    // Row operation E on d: d ← E d, u_inv ← E u_inv, u ← u E⁻¹.
    // Column operation F on d: d ← d F, v_inv ← v_inv F, v ← F⁻¹ v.
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if let Some(deg) = d.get(i, j).degree() {
                        if best.is_none_or(|(_, _, b)| deg < b) {
                            best = Some((i, j, deg));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            if pi != t {
                d.swap_rows(pi, t);
                u_inv.swap_rows(pi, t);
                u.swap_cols(pi, t);
            }
            if pj != t {
                d.swap_cols(pj, t);
                v_inv.swap_cols(pj, t);
                v.swap_rows(pj, t);
            }
            let pivot = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = d.get(i, t).div_rem(&pivot).expect("nonzero pivot");
                let mq = q.neg();
                d.add_row(i, t, &mq);
                u_inv.add_row(i, t, &mq);
                u.add_col(t, i, &q);
                dirty |= !r.is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = d.get(t, j).div_rem(&pivot).expect("nonzero pivot");
                let mq = q.neg();
                d.add_col(j, t, &mq);
                v_inv.add_col(j, t, &mq);
                v.add_row(t, j, &q);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !pivot.divides(d.get(i, j)));
            match offender {
                Some((i, _)) => {
                    let one = UPoly::one(&f);
                    d.add_row(t, i, &one);
                    u_inv.add_row(t, i, &one);
                    u.add_col(i, t, &one.neg());
                }
                None => break,
            }
        }
        let lead = d.get(t, t).leading();
        if lead != 0 && lead != 1 {
            let inv = f.inv(lead).expect("nonzero");
            d.scale_row(t, inv);
            u_inv.scale_row(t, inv);
            u.scale_col(t, lead);
        }
    }
    let invariant_factors = (0..steps).map(|i| d.get(i, i).clone()).collect();
    SmithForm { invariant_factors, diagonal: d, u, v, u_inv, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn up(field: &Field, c: &[i64]) -> UPoly {
        UPoly::new(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    #[test]
    fn mpoly_basics() {
        let f2 = f(2);
        let r = PolyRing::t_ring(&f2, 2);
        let sum = r.parse("(t1 + t2)^2").unwrap();
        assert_eq!(sum, r.parse("t1^2 + t2^2").unwrap());
        assert!((&sum * &r.zero()).is_zero());
        let f7 = f(7);
        let r7 = PolyRing::t_ring(&f7, 2);
        assert_eq!(r7.parse("t1^2*t2 + 1").unwrap().evaluate(&[2, 3]).unwrap(), 6);
        assert!(r7.one().evaluate(&[1]).is_err());
    }

    #[test]
    fn regularity_is_nonvanishing() {
        let f3 = f(3);
        let r = PolyRing::t_ring(&f3, 2);
        assert!(!is_regular(&r.zero()));
        assert!(is_regular(&r.parse("t1^3").unwrap()));
        let cancel = r.parse("(t1+t2)^2 - t1^2 - 2*t1*t2 - t2^2").unwrap();
        assert!(!is_regular(&cancel));
    }

    #[test]
    fn congruence_of_coefficients() {
        let f5 = f(5);
        let r = PolyRing::t_ring(&f5, 2);
        let p = |s: &str| r.parse(s).unwrap();
        assert_eq!(constant_term_vector(&[p("1"), p("0")]), vec![1, 0]);
        assert!(coeffs_congruent(&[p("1 + t2"), p("t1")], &[p("1"), p("t1 + t1*t2^2")]));
        assert!(!coeffs_congruent(&[p("1"), p("0")], &[p("0"), p("1")]));
    }

    #[test]
    fn display_is_graded_lex() {
        let f5 = f(5);
        let r = PolyRing::t_ring(&f5, 2);
        let g = r.parse("2*t1*t2^3 + 1 + t1").unwrap();
        assert_eq!(g.to_string(), "1 + t1 + 2*t1*t2^3");
    }

    #[test]
    fn parse_errors() {
        let r = PolyRing::t_ring(&f(3), 2);
        assert!(r.parse("t3").is_err());
        assert!(r.parse("(t1").is_err());
        assert!(r.parse("t1 +").is_err());
        assert!(r.parse("t1 t2").is_err());
    }

    #[test]
    fn single_divisor_division() {
        let r = PolyRing::t_ring(&f(3), 2);
        let g = r.parse("t1^2 + 2*t2^3").unwrap();
        let h = r.parse("t1*t2 + 1").unwrap();
        let (q, rem) = (&g * &h).div_rem(&g).unwrap();
        assert!(rem.is_zero());
        assert_eq!(q, h);
        let (_, rem) = r.parse("t1").unwrap().div_rem(&g).unwrap();
        assert!(!rem.is_zero());
    }

    #[test]
    fn gcd_and_squarefree() {
        let f5 = f(5);
        assert_eq!(upoly_gcd(&up(&f5, &[-1, 0, 1]), &up(&f5, &[-1, 1])), up(&f5, &[-1, 1]));
        assert_eq!(up(&f5, &[0, 0, 1]).squarefree_part().unwrap(), up(&f5, &[0, 1]));
        for p in [2u32, 3, 5] {
            let fp = f(p);
            let mut c = vec![0i64; p as usize + 1];
            c[p as usize] = 1;
            assert_eq!(up(&fp, &c).squarefree_part().unwrap(), up(&fp, &[0, 1]));
        }
        assert_eq!(UPoly::zero(&f5).squarefree_part(), Err(PolyError::SquarefreeOfZero));
    }

    #[test]
    fn squarefree_mixed_multiplicities() {
        // (s+1)^2 (s+2)^3 s^4 over F_3: multiplicity 3 is the p-th power case
        let f3 = f(3);
        let a = up(&f3, &[1, 1]).pow(2).mul(&up(&f3, &[2, 1]).pow(3)).mul(&up(&f3, &[0, 1]).pow(4));
        let expected = up(&f3, &[1, 1]).mul(&up(&f3, &[2, 1])).mul(&up(&f3, &[0, 1]));
        assert_eq!(a.squarefree_part().unwrap(), expected);
    }

    fn check_smith(m: &UPolyMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&s.u.mul(&s.diagonal).mul(&s.v), m);
        let n = m.rows();
        assert_eq!(s.u.mul(&s.u_inv), UPolyMatrix::identity(m.field(), n));
        assert_eq!(s.v.mul(&s.v_inv), UPolyMatrix::identity(m.field(), m.cols()));
        for w in s.invariant_factors.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
        s
    }

    #[test]
    fn smith_examples() {
        let f2 = f(2);
        let s = check_smith(&UPolyMatrix::from_coeff_rows(&f2, &[vec![vec![0, 1], vec![]], vec![vec![], vec![0, 0, 1]]]));
        assert_eq!(s.invariant_factors, vec![up(&f2, &[0, 1]), up(&f2, &[0, 0, 1])]);
        let s = check_smith(&UPolyMatrix::from_coeff_rows(&f2, &[vec![vec![0, 1], vec![]], vec![vec![], vec![1]]]));
        assert_eq!(s.invariant_factors, vec![up(&f2, &[1]), up(&f2, &[0, 1])]);
        let s = check_smith(&UPolyMatrix::from_coeff_rows(&f2, &[vec![vec![], vec![0, 1]], vec![vec![], vec![]]]));
        assert_eq!(s.invariant_factors, vec![up(&f2, &[0, 1]), UPoly::zero(&f2)]);
    }

    #[test]
    fn smith_needs_divisibility_fix() {
        // diag(s, s+1) has invariant factors 1, s(s+1)
        let f3 = f(3);
        let s = check_smith(&UPolyMatrix::from_coeff_rows(&f3, &[vec![vec![0, 1], vec![]], vec![vec![], vec![1, 1]]]));
        assert_eq!(s.invariant_factors, vec![up(&f3, &[1]), up(&f3, &[0, 1, 1])]);
    }

    #[test]
    fn determinant_matches_expansion() {
        let f5 = f(5);
        let m = UPolyMatrix::from_coeff_rows(
            &f5,
            &[
                vec![vec![0, 1], vec![1], vec![2]],
                vec![vec![1], vec![0, 0, 1], vec![]],
                vec![vec![3], vec![1, 1], vec![0, 1]],
            ],
        );
        let g = |r: usize, c: usize| m.get(r, c).clone();
        let expansion = g(0, 0)
            .mul(&g(1, 1).mul(&g(2, 2)).sub(&g(1, 2).mul(&g(2, 1))))
            .sub(&g(0, 1).mul(&g(1, 0).mul(&g(2, 2)).sub(&g(1, 2).mul(&g(2, 0)))))
            .add(&g(0, 2).mul(&g(1, 0).mul(&g(2, 1)).sub(&g(1, 1).mul(&g(2, 0)))));
        assert_eq!(m.determinant(), expansion);
    }
}
