//! Exact arithmetic in prime fields F_p and extension fields F_{p^e}.
//!
//! Field elements are plain `u32` codes. The base-p digits of a code, least
//! significant first, are the coefficients of the element in the power basis
//! 1, z, z², … of F_p[z]/(modulus). Codes 0..p are the prime subfield, so a
//! matrix over F_p is also a matrix over any F_{p^e} without re-encoding.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted anywhere in the crate.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const MAX_DEGREE: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the bound 2^20")]
    OrderTooLarge(u64),
    #[error("ext_poly must be present exactly when ext_degree > 1")]
    ModulusPresence,
    #[error("ext_poly has {found} coefficients, expected {expected}")]
    ModulusLength { expected: usize, found: usize },
    #[error("coefficient {0} is not reduced mod p")]
    Unreduced(u64),
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("scalars belong to different fields")]
    FieldMismatch,
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("element code {0} is outside the field")]
    OutOfRange(u64),
}

/// Description of a finite field as it appears in module files.
///
/// `modulus` holds the low-to-high coefficients of the defining polynomial
/// with its leading 1 omitted; it is absent for prime fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(rename = "p")]
    pub characteristic: u32,
    #[serde(rename = "ext_degree", default = "one_u32")]
    pub degree: u32,
    #[serde(rename = "ext_poly", default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one_u32() -> u32 {
    1
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { characteristic: p, degree: 1, modulus: None }
    }

    /// F_{p^e} with the canonical modulus chosen by [`find_irreducible`].
    pub fn galois(p: u32, e: u32) -> Result<Self, FieldError> {
        check_prime(p as u64)?;
        match e {
            0 => Err(FieldError::ZeroDegree),
            1 => Ok(FieldSpec::prime(p)),
            _ => {
                check_order(p, e)?;
                let full = find_irreducible(p, e as usize);
                Ok(FieldSpec { characteristic: p, degree: e, modulus: Some(full[..e as usize].to_vec()) })
            }
        }
    }

    pub fn order(&self) -> u64 {
        (self.characteristic as u64).saturating_pow(self.degree)
    }
}

fn check_prime(p: u64) -> Result<(), FieldError> {
    if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(())
}

fn check_order(p: u32, e: u32) -> Result<u64, FieldError> {
    let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
    if q > MAX_FIELD_ORDER {
        return Err(FieldError::OrderTooLarge(q));
    }
    Ok(q)
}

struct Inner {
    spec: FieldSpec,
    p: u32,
    e: usize,
    q: u32,
    /// Tail of the monic modulus, low-to-high, length `e`.
    tail: Vec<u32>,
}

/// A validated finite field. Cheap to clone; all arithmetic goes through it.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.e)
        }
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        let p = spec.characteristic;
        check_prime(p as u64)?;
        if spec.degree == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = check_order(p, spec.degree)? as u32;
        let e = spec.degree as usize;
        let tail = match (&spec.modulus, e) {
            (None, 1) => vec![0],
            (Some(t), e) if e > 1 => {
                if t.len() != e {
                    return Err(FieldError::ModulusLength { expected: e, found: t.len() });
                }
                if let Some(&c) = t.iter().find(|&&c| c >= p) {
                    return Err(FieldError::Unreduced(c as u64));
                }
                let mut full = t.clone();
                full.push(1);
                if !is_irreducible(&full, p) {
                    return Err(FieldError::ReducibleModulus);
                }
                t.clone()
            }
            _ => return Err(FieldError::ModulusPresence),
        };
        Ok(Field(Arc::new(Inner { spec, p, e, q, tail })))
    }

    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Field::new(FieldSpec::prime(p))
    }

    pub fn galois(p: u32, e: u32) -> Result<Self, FieldError> {
        Field::new(FieldSpec::galois(p, e)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.e
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// True if every element of `sub` is an element of `self` under the
    /// shared encoding (the prime field, or the field itself).
    pub fn contains_subfield(&self, sub: &Field) -> bool {
        self == sub || (sub.is_prime_field() && sub.characteristic() == self.characteristic())
    }

    pub fn check(&self, x: u32) -> Result<u32, FieldError> {
        if x < self.0.q {
            Ok(x)
        } else {
            Err(FieldError::OutOfRange(x as u64))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.e == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b, mut w, mut r) = (a, b, 1u32, 0u32);
        for _ in 0..self.0.e {
            r += ((a % p + b % p) % p) * w;
            a /= p;
            b /= p;
            w *= p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.e == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let (mut a, mut w, mut r) = (a, 1u32, 0u32);
        for _ in 0..self.0.e {
            r += ((p - a % p) % p) * w;
            a /= p;
            w *= p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.0.e == 1 {
            return ((a as u64 * b as u64) % self.0.p as u64) as u32;
        }
        self.mul_ext(a, b)
    }

    fn mul_ext(&self, a: u32, b: u32) -> u32 {
        let (p, e) = (self.0.p as u64, self.0.e);
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if da[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..e {
                let t = self.0.tail[j] as u64;
                prod[k - e + j] = (prod[k - e + j] + (p - c) * t) % p;
            }
        }
        let mut r = 0u32;
        for k in (0..e).rev() {
            r = r * self.0.p + prod[k] as u32;
        }
        r
    }

    fn digits(&self, mut a: u32) -> [u32; MAX_DEGREE] {
        let mut d = [0u32; MAX_DEGREE];
        for slot in d.iter_mut().take(self.0.e) {
            *slot = a % self.0.p;
            a /= self.0.p;
        }
        d
    }

    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if self.0.e == 1 {
            // extended Euclid on integers
            let (mut r0, mut r1) = (self.0.p as i64, a as i64);
            let (mut s0, mut s1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (s0, s1) = (s1, s0 - qt * s1);
            }
            return Ok(self.from_int(s0));
        }
        Ok(self.pow(a, self.0.q as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// x ↦ x^p, the Frobenius automorphism.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.0.p as u64)
    }

    /// Inverse of the Frobenius automorphism, x ↦ x^{p^{e-1}}.
    pub fn frobenius_inv(&self, a: u32) -> u32 {
        self.pow(a, (self.0.p as u64).pow(self.0.e as u32 - 1))
    }

    /// Coefficients of `a` in the power basis, low-to-high, length e.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        self.digits(a)[..self.0.e].to_vec()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<u32, FieldError> {
        if coeffs.len() > self.0.e {
            return Err(FieldError::ModulusLength { expected: self.0.e, found: coeffs.len() });
        }
        let mut r = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.0.p {
                return Err(FieldError::Unreduced(c as u64));
            }
            r = r * self.0.p + c;
        }
        Ok(r)
    }

    /// All q elements: 0, 1, then the remaining codes in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }

    pub fn scalar(&self, value: u32) -> Result<Scalar, FieldError> {
        Ok(Scalar { field: self.clone(), value: self.check(value)? })
    }

    /// The generator z of F_p[z]/(modulus) (equal to 0 in a prime field).
    pub fn generator(&self) -> u32 {
        if self.0.e == 1 {
            0
        } else {
            self.0.p
        }
    }

    pub fn format(&self, a: u32) -> String {
        if self.0.e == 1 {
            return a.to_string();
        }
        let c = self.coefficients(a);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            parts.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// A field element bundled with its field, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    field: Field,
    value: u32,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.field.coefficients(self.value)
    }

    fn same(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> Scalar {
        Scalar { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.same(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Scalar {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn frobenius(&self) -> Scalar {
        self.with(self.field.frobenius(self.value))
    }
}

/// Every element of the field described by `spec`, 0 first and 1 second.
pub fn enumerate_field(spec: &FieldSpec) -> Result<Vec<Scalar>, FieldError> {
    let field = Field::new(spec.clone())?;
    Ok(field.elements().map(|v| Scalar { field: field.clone(), value: v }).collect())
}

// Dense polynomials over F_p as coefficient vectors, low-to-high, trimmed.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = (r[k] as u64 * lead_inv as u64 % p as u64) as u32;
        for (j, &mj) in m.iter().enumerate() {
            let idx = k - dm + j;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * mj as u64) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        n >>= 1;
    }
    acc as u32
}

/// Ben-Or test: a monic polynomial of degree e over F_p is irreducible iff it
/// shares no factor with z^{p^i} - z for 1 <= i <= e/2.
pub(crate) fn is_irreducible(monic: &[u32], p: u32) -> bool {
    let e = monic.len() - 1;
    if e == 0 {
        return false;
    }
    let mut h = vec![0, 1];
    for _ in 0..e / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u32];
        for _ in 0..p {
            acc = poly_mulmod(&acc, &h, monic, p);
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if poly_gcd(monic, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

/// The first monic irreducible polynomial of degree `e` over F_p, scanning
/// tails in increasing order of their base-p code. Returns all e + 1
/// coefficients low-to-high (the last one is 1).
pub fn find_irreducible(p: u32, e: usize) -> Vec<u32> {
    assert!(e >= 1, "degree must be positive");
    let mut code: u64 = 0;
    loop {
        let mut poly = Vec::with_capacity(e + 1);
        let mut c = code;
        for _ in 0..e {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
        code += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Field {
        Field::new(FieldSpec { characteristic: 2, degree: 3, modulus: Some(vec![1, 1, 0]) }).unwrap()
    }

    #[test]
    fn inverse_of_two_mod_five() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.inv(2).unwrap(), 3);
        assert_eq!(f.inv(0), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn inverse_of_generator_in_f8() {
        // z^{-1} = z^2 + 1 modulo z^3 + z + 1
        let f = f8();
        let z = f.generator();
        let expected = f.from_coefficients(&[1, 0, 1]).unwrap();
        assert_eq!(f.inv(z).unwrap(), expected);
        assert_eq!(f.mul(z, expected), 1);
    }

    #[test]
    fn frobenius_on_f4() {
        let f = Field::galois(2, 2).unwrap();
        assert_eq!(f.spec().modulus, Some(vec![1, 1]));
        let z = f.generator();
        assert_eq!(f.frobenius(z), f.from_coefficients(&[1, 1]).unwrap());
        for x in f.elements() {
            assert_eq!(f.frobenius(f.frobenius(x)), x);
            assert_eq!(f.frobenius_inv(f.frobenius(x)), x);
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        for p in [2, 3, 5, 7, 13] {
            let f = Field::prime(p).unwrap();
            assert!(f.elements().all(|a| f.frobenius(a) == a));
        }
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(find_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(find_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(find_irreducible(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn irreducible_output_has_no_small_factor() {
        // brute force: no monic factor of degree 1..=e/2 divides it
        for (p, e) in [(2u32, 4usize), (3, 3), (5, 2), (2, 6), (3, 4)] {
            let f = find_irreducible(p, e);
            assert_eq!(f.len(), e + 1);
            assert_eq!(f[e], 1);
            for deg in 1..=e / 2 {
                for code in 0..(p as u64).pow(deg as u32) {
                    let mut g = Vec::new();
                    let mut c = code;
                    for _ in 0..deg {
                        g.push((c % p as u64) as u32);
                        c /= p as u64;
                    }
                    g.push(1);
                    assert!(!poly_rem(&f, &g, p).is_empty(), "{g:?} divides {f:?}");
                }
            }
        }
    }

    #[test]
    fn enumeration_f3_and_f4() {
        let e3: Vec<u32> = enumerate_field(&FieldSpec::prime(3)).unwrap().iter().map(Scalar::value).collect();
        assert_eq!(e3, vec![0, 1, 2]);
        let e4 = enumerate_field(&FieldSpec::galois(2, 2).unwrap()).unwrap();
        assert_eq!(e4.len(), 4);
        assert_eq!(e4[0].value(), 0);
        assert_eq!(e4[1].value(), 1);
    }

    #[test]
    fn product_of_units_in_f8_is_one() {
        let f = f8();
        let prod = f.elements().skip(1).fold(1, |acc, x| f.mul(acc, x));
        assert_eq!(prod, 1);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(Field::prime(4).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(Field::galois(2, 21).unwrap_err(), FieldError::OrderTooLarge(1 << 21));
        let reducible = FieldSpec { characteristic: 2, degree: 2, modulus: Some(vec![1, 0]) };
        assert_eq!(Field::new(reducible).unwrap_err(), FieldError::ReducibleModulus);
        let missing = FieldSpec { characteristic: 3, degree: 2, modulus: None };
        assert_eq!(Field::new(missing).unwrap_err(), FieldError::ModulusPresence);
    }

    #[test]
    fn scalar_mismatch() {
        let a = Field::prime(3).unwrap().scalar(1).unwrap();
        let b = Field::prime(5).unwrap().scalar(1).unwrap();
        assert_eq!(a.add(&b).unwrap_err(), FieldError::FieldMismatch);
        let z = Field::prime(3).unwrap().scalar(0).unwrap();
        assert_eq!(z.inv().unwrap_err(), FieldError::DivisionByZero);
    }

    #[test]
    fn spec_json_shape() {
        let s = FieldSpec::galois(3, 2).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"p":3,"ext_degree":2,"ext_poly":[1,0]}"#);
        let s = FieldSpec::prime(5);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"p":5,"ext_degree":1}"#);
    }
}
