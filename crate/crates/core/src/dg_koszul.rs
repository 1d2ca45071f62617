//! Symbolic Koszul complex over a polynomial ring, divided powers of
//! degree-two elements, and the adjunction of one divided-power variable y
//! of degree two that kills a degree-one cycle z.
//!
//! Sign convention: a basis monomial x_S has S in ascending order; the
//! product x_S ∧ x_T carries the sign of the permutation sorting S ∪ T, and
//! the Leibniz rule is ∂(ab) = ∂(a)b + (−1)^{|a|} a∂(b).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::polynomials::{MPoly, PolyError, PolyRing};

/// Largest number of exterior generators handled symbolically.
pub const MAX_EXTERIOR_VARS: usize = 6;
/// Largest total degree handled by [`TateShiftIso`].
pub const MAX_TATE_DEGREE: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("divided powers need a homogeneous element of degree 2")]
    NotDegreeTwo,
    #[error("z is not a cycle")]
    NotACycle,
    #[error("at most {MAX_EXTERIOR_VARS} exterior generators are supported, got {0}")]
    TooManyVariables(usize),
    #[error("degree bound {0} exceeds {MAX_TATE_DEGREE}")]
    DegreeTooLarge(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Sign of x_S ∧ x_T for disjoint S, T: the parity of pairs s > t.
pub(crate) fn merge_sign(s: u32, t: u32) -> bool {
    let mut odd = false;
    for i in bits(t) {
        odd ^= (s >> (i + 1)).count_ones() % 2 == 1;
    }
    odd
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// ∂(x_i) = τ_i, optionally working modulo one polynomial relation (so that
/// "cycle" means ∂z lies in the ideal it generates).
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulData {
    ring: PolyRing,
    targets: Vec<MPoly>,
    modulus: Option<MPoly>,
}

impl KoszulData {
    pub fn new(targets: Vec<MPoly>) -> Result<Self, KoszulError> {
        let ring = targets.first().ok_or(KoszulError::TooManyVariables(0))?.ring().clone();
        if targets.len() > MAX_EXTERIOR_VARS {
            return Err(KoszulError::TooManyVariables(targets.len()));
        }
        if targets.iter().any(|t| t.ring() != &ring) {
            return Err(KoszulError::ContextMismatch);
        }
        Ok(KoszulData { ring, targets, modulus: None })
    }

    /// The Koszul complex on the variables of `ring` numbered by `indices`.
    pub fn on_variables(ring: &PolyRing, indices: &[usize]) -> Result<Self, KoszulError> {
        Self::new(indices.iter().map(|&i| ring.var(i)).collect())
    }

    pub fn with_modulus(mut self, modulus: MPoly) -> Result<Self, KoszulError> {
        if modulus.ring() != &self.ring {
            return Err(KoszulError::ContextMismatch);
        }
        self.modulus = Some(modulus);
        Ok(self)
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[MPoly] {
        &self.targets
    }

    /// Normal form modulo the relation; a single polynomial is a Gröbner
    /// basis of the ideal it generates, so the remainder is canonical.
    pub fn reduce(&self, a: &MPoly) -> Result<MPoly, KoszulError> {
        match &self.modulus {
            Some(m) if !a.is_zero() => Ok(a.div_rem(m)?.1),
            _ => Ok(a.clone()),
        }
    }

    fn vanishes(&self, a: &MPoly) -> Result<bool, KoszulError> {
        Ok(self.reduce(a)?.is_zero())
    }

    pub fn is_cycle(&self, z: &ExteriorElement) -> Result<bool, KoszulError> {
        Ok(koszul_boundary(z, self)?.is_zero())
    }
}

/// Element of the exterior algebra ⋀(x₁,…,x_d) with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExteriorElement {
    d: usize,
    ring: PolyRing,
    terms: BTreeMap<u32, MPoly>,
}

impl ExteriorElement {
    pub fn zero(ring: &PolyRing, d: usize) -> Self {
        ExteriorElement { d, ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &PolyRing, d: usize) -> Self {
        Self::monomial(ring, d, 0, ring.one())
    }

    /// coeff · x_S with S given as a bitmask (bit i ↔ x_{i+1}).
    pub fn monomial(ring: &PolyRing, d: usize, mask: u32, coeff: MPoly) -> Self {
        let mut e = Self::zero(ring, d);
        e.add_term(mask, coeff);
        e
    }

    /// x_{i+1}.
    pub fn generator(ring: &PolyRing, d: usize, i: usize) -> Self {
        Self::monomial(ring, d, 1 << i, ring.one())
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &MPoly)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coefficient(&self, mask: u32) -> MPoly {
        self.terms.get(&mask).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Degree if homogeneous; `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = degs.next()?;
        degs.all(|x| x == first).then_some(first)
    }

    fn add_term(&mut self, mask: u32, c: MPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    fn check(&self, other: &ExteriorElement) -> Result<(), KoszulError> {
        if self.d != other.d || self.ring != other.ring {
            return Err(KoszulError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &ExteriorElement) -> Result<Self, KoszulError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExteriorElement) -> Result<Self, KoszulError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(MPoly::neg)
    }

    pub fn scale(&self, c: &MPoly) -> Self {
        self.map_coeffs(|x| x * c)
    }

    fn map_coeffs(&self, f: impl Fn(&MPoly) -> MPoly) -> Self {
        let mut out = Self::zero(&self.ring, self.d);
        for (&m, c) in &self.terms {
            out.add_term(m, f(c));
        }
        out
    }

    fn reduce_by(self, data: &KoszulData) -> Result<Self, KoszulError> {
        if data.modulus.is_none() {
            return Ok(self);
        }
        let mut out = Self::zero(&self.ring, self.d);
        for (m, c) in self.terms {
            out.add_term(m, data.reduce(&c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &ExteriorElement) -> Result<Self, KoszulError> {
        self.check(other)?;
        let mut out = Self::zero(&self.ring, self.d);
        for (&s, a) in &self.terms {
            for (&t, b) in &other.terms {
                if s & t != 0 {
                    continue;
                }
                let c = a * b;
                out.add_term(s | t, if merge_sign(s, t) { c.neg() } else { c });
            }
        }
        Ok(out)
    }

    /// Iterated wedge product self ∧ … ∧ self.
    pub fn power(&self, n: u32) -> Self {
        (0..n).fold(Self::one(&self.ring, self.d), |acc, _| acc.wedge(self).expect("same algebra"))
    }
}

pub fn wedge(a: &ExteriorElement, b: &ExteriorElement) -> Result<ExteriorElement, KoszulError> {
    a.wedge(b)
}

/// ∂(x_{i₁}…x_{i_k}) = Σ_j (−1)^{j+1} τ_{i_j} x_{i₁}…x̂_{i_j}…x_{i_k}.
pub fn koszul_boundary(a: &ExteriorElement, data: &KoszulData) -> Result<ExteriorElement, KoszulError> {
    if a.d != data.rank() || a.ring != data.ring {
        return Err(KoszulError::ContextMismatch);
    }
    let mut out = ExteriorElement::zero(&a.ring, a.d);
    for (&s, c) in &a.terms {
        for (pos, i) in bits(s).enumerate() {
            let term = c * &data.targets[i];
            out.add_term(s & !(1 << i), if pos % 2 == 1 { term.neg() } else { term });
        }
    }
    out.reduce_by(data)
}

/// w^{(i)} for w homogeneous of degree two: the sum, over all i-element sets
/// of distinct terms r_{ab} x_a x_b of w, of the product of those terms.
pub fn divided_power(w: &ExteriorElement, i: u32) -> Result<ExteriorElement, KoszulError> {
    if !w.is_zero() && w.degree() != Some(2) {
        return Err(KoszulError::NotDegreeTwo);
    }
    let terms: Vec<ExteriorElement> =
        w.terms.iter().map(|(&m, c)| ExteriorElement::monomial(&w.ring, w.d, m, c.clone())).collect();
    let mut out = ExteriorElement::zero(&w.ring, w.d);
    let mut stack: Vec<(usize, u32, ExteriorElement)> = vec![(0, 0, ExteriorElement::one(&w.ring, w.d))];
    // depth-first over increasing index sequences
    while let Some((start, taken, prod)) = stack.pop() {
        if taken == i {
            out = out.add(&prod)?;
            continue;
        }
        for k in start..terms.len() {
            let next = prod.wedge(&terms[k])?;
            if !next.is_zero() {
                stack.push((k + 1, taken + 1, next));
            }
        }
    }
    Ok(out)
}

/// Element of K⟨y⟩: polynomial combination of x_S · y^{(i)}, of degree |S| + 2i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TateElement {
    d: usize,
    ring: PolyRing,
    terms: BTreeMap<(u32, u32), MPoly>,
}

impl TateElement {
    pub fn zero(ring: &PolyRing, d: usize) -> Self {
        TateElement { d, ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// a · y^{(i)}.
    pub fn from_exterior(a: &ExteriorElement, i: u32) -> Self {
        let mut out = Self::zero(&a.ring, a.d);
        for (&m, c) in &a.terms {
            out.add_term((m, i), c.clone());
        }
        out
    }

    /// coeff · x_S y^{(i)}.
    pub fn basis(ring: &PolyRing, d: usize, mask: u32, i: u32, coeff: MPoly) -> Self {
        let mut out = Self::zero(ring, d);
        out.add_term((mask, i), coeff);
        out
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &MPoly)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coefficient(&self, mask: u32, i: u32) -> MPoly {
        self.terms.get(&(mask, i)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// The part of `self` carrying y^{(i)}, as an exterior element.
    pub fn component(&self, i: u32) -> ExteriorElement {
        let mut out = ExteriorElement::zero(&self.ring, self.d);
        for (&(m, j), c) in &self.terms {
            if j == i {
                out.add_term(m, c.clone());
            }
        }
        out
    }

    fn add_term(&mut self, key: (u32, u32), c: MPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    fn check(&self, other: &TateElement) -> Result<(), KoszulError> {
        if self.d != other.d || self.ring != other.ring {
            return Err(KoszulError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TateElement) -> Result<Self, KoszulError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TateElement) -> Result<Self, KoszulError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.neg());
        }
        Ok(out)
    }

    /// Product with y^{(i)} y^{(j)} = C(i+j, i) y^{(i+j)}; y-powers are even
    /// so no Koszul sign arises when moving them past exterior factors.
    pub fn mul(&self, other: &TateElement) -> Result<Self, KoszulError> {
        self.check(other)?;
        let field = self.ring.field().clone();
        let mut out = Self::zero(&self.ring, self.d);
        for (&(s, i), a) in &self.terms {
            for (&(t, j), b) in &other.terms {
                if s & t != 0 {
                    continue;
                }
                let binom = field.from_int((binomial((i + j) as u64, i as u64) % field.characteristic() as u64) as i64);
                let mut c = (a * b).scale(binom);
                if merge_sign(s, t) {
                    c = c.neg();
                }
                out.add_term((s | t, i + j), c);
            }
        }
        Ok(out)
    }

    pub fn degree_bound(&self) -> usize {
        self.terms.keys().map(|&(m, i)| m.count_ones() as usize + 2 * i as usize).max().unwrap_or(0)
    }
}

/// ∂(a·y^{(i)}) = ∂(a)·y^{(i)} + (−1)^{|a|} (a∧z)·y^{(i−1)}, with
/// coefficients in normal form when `data` carries a relation.
pub fn tate_boundary(e: &TateElement, z: &ExteriorElement, data: &KoszulData) -> Result<TateElement, KoszulError> {
    if !data.is_cycle(z)? {
        return Err(KoszulError::NotACycle);
    }
    if z.degree().is_some_and(|deg| deg != 1) {
        return Err(KoszulError::NotACycle);
    }
    if e.d != data.rank() || e.ring != data.ring || z.d != e.d || z.ring != e.ring {
        return Err(KoszulError::ContextMismatch);
    }
    let mut out = TateElement::zero(&e.ring, e.d);
    for (&(s, i), c) in &e.terms {
        let a = ExteriorElement::monomial(&e.ring, e.d, s, c.clone());
        for (m, coeff) in koszul_boundary(&a, data)?.terms() {
            out.add_term((m, i), coeff.clone());
        }
        if i >= 1 {
            let mut az = a.wedge(z)?;
            if s.count_ones() % 2 == 1 {
                az = az.neg();
            }
            for (m, coeff) in az.terms() {
                out.add_term((m, i - 1), data.reduce(coeff)?);
            }
        }
    }
    Ok(out)
}

/// Basis labels (S, i) of K⟨y⟩ in degree n, |S| + 2i = n, in
/// [`subset_key`] order.
pub fn tate_basis(d: usize, n: usize) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = (0u32..1 << d)
        .filter(|m| {
            let k = m.count_ones() as usize;
            k <= n && (n - k).is_multiple_of(2)
        })
        .map(|m| (m, ((n - m.count_ones() as usize) / 2) as u32))
        .collect();
    out.sort_by_key(|&(m, _)| subset_key(m));
    out
}

/// Weight first, then the ascending element lists compared
/// lexicographically: {1} < {2} < {1,2} < {1,3} < {2,3}.
pub fn subset_key(mask: u32) -> (u32, Vec<usize>) {
    (mask.count_ones(), bits(mask).collect())
}

/// All subsets of {1..d} of the given size parity, in [`subset_key`] order.
pub fn subsets_of_parity(d: usize, odd: bool) -> Vec<u32> {
    let mut out: Vec<u32> = (0u32..1 << d).filter(|m| (m.count_ones() % 2 == 1) == odd).collect();
    out.sort_by_key(|&m| subset_key(m));
    out
}

/// The isomorphism K⟨y | ∂y = z + ∂w⟩ → K⟨y | ∂y = z⟩ sending y^{(i)} to
/// (y + w)^{(i)}, truncated at a degree bound.
#[derive(Clone, Debug)]
pub struct TateShiftIso {
    data: KoszulData,
    z: ExteriorElement,
    w: ExteriorElement,
    shifted: ExteriorElement,
    max_degree: usize,
    /// (±w)^{(k)} for k ≤ max_degree / 2.
    w_powers: Vec<ExteriorElement>,
}

/// Outcome of checking a [`TateShiftIso`] through its degree bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub degrees_checked: usize,
    pub basis_elements: usize,
    /// Basis elements where forward ∘ ∂ ≠ ∂' ∘ forward.
    pub chain_map_failures: usize,
    /// Basis elements where backward ∘ forward or forward ∘ backward ≠ id.
    pub inverse_failures: usize,
}

impl IsoReport {
    pub fn is_isomorphism(&self) -> bool {
        self.chain_map_failures == 0 && self.inverse_failures == 0
    }
}

impl TateShiftIso {
    pub fn new(w: &ExteriorElement, z: &ExteriorElement, data: &KoszulData, max_degree: usize) -> Result<Self, KoszulError> {
        if max_degree > MAX_TATE_DEGREE {
            return Err(KoszulError::DegreeTooLarge(max_degree));
        }
        if !w.is_zero() && w.degree() != Some(2) {
            return Err(KoszulError::NotDegreeTwo);
        }
        if !data.is_cycle(z)? {
            return Err(KoszulError::NotACycle);
        }
        let shifted = z.add(&koszul_boundary(w, data)?)?;
        let w_powers = (0..=max_degree as u32 / 2).map(|k| divided_power(w, k)).collect::<Result<_, _>>()?;
        Ok(TateShiftIso { data: data.clone(), z: z.clone(), w: w.clone(), shifted, max_degree, w_powers })
    }

    pub fn source_cycle(&self) -> &ExteriorElement {
        &self.z
    }

    /// z + ∂w.
    pub fn target_cycle(&self) -> &ExteriorElement {
        &self.shifted
    }

    pub fn shift(&self) -> &ExteriorElement {
        &self.w
    }

    fn apply(&self, e: &TateElement, sign: bool) -> Result<TateElement, KoszulError> {
        let mut out = TateElement::zero(&e.ring, e.d);
        for (&(s, i), c) in &e.terms {
            let a = ExteriorElement::monomial(&e.ring, e.d, s, c.clone());
            for j in 0..=i {
                let k = (i - j) as usize;
                let mut wk = self.w_powers.get(k).cloned().unwrap_or_else(|| {
                    divided_power(&self.w, k as u32).expect("w has degree two")
                });
                if sign && k % 2 == 1 {
                    wk = wk.neg();
                }
                out = out.add(&TateElement::from_exterior(&a.wedge(&wk)?, j))?;
            }
        }
        Ok(out)
    }

    /// a·y^{(i)} ↦ a·Σ_j w^{(i−j)} y^{(j)}.
    pub fn forward(&self, e: &TateElement) -> Result<TateElement, KoszulError> {
        self.apply(e, false)
    }

    /// a·y^{(i)} ↦ a·Σ_j (−w)^{(i−j)} y^{(j)}.
    pub fn backward(&self, e: &TateElement) -> Result<TateElement, KoszulError> {
        self.apply(e, true)
    }

    /// Checks the chain-map identity and both inverse identities on every
    /// basis element x_S y^{(i)} of degree at most the bound.
    pub fn verify(&self) -> Result<IsoReport, KoszulError> {
        let ring = &self.data.ring;
        let d = self.data.rank();
        let mut report = IsoReport { degrees_checked: self.max_degree + 1, basis_elements: 0, chain_map_failures: 0, inverse_failures: 0 };
        for n in 0..=self.max_degree {
            for (mask, i) in tate_basis(d, n) {
                report.basis_elements += 1;
                let e = TateElement::basis(ring, d, mask, i, ring.one());
                let lhs = self.forward(&tate_boundary(&e, &self.shifted, &self.data)?)?;
                let rhs = tate_boundary(&self.forward(&e)?, &self.z, &self.data)?;
                if !self.equal_mod(&lhs, &rhs)? {
                    report.chain_map_failures += 1;
                }
                let there_and_back = self.backward(&self.forward(&e)?)?;
                let back_and_there = self.forward(&self.backward(&e)?)?;
                if there_and_back != e || back_and_there != e {
                    report.inverse_failures += 1;
                }
            }
        }
        Ok(report)
    }

    fn equal_mod(&self, a: &TateElement, b: &TateElement) -> Result<bool, KoszulError> {
        for (_, c) in a.sub(b)?.terms() {
            if !self.data.vanishes(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn tate_shift_iso(
    w: &ExteriorElement,
    z: &ExteriorElement,
    data: &KoszulData,
    max_degree: usize,
) -> Result<TateShiftIso, KoszulError> {
    TateShiftIso::new(w, z, data, max_degree)
}

/// Checks the divided-power identities for w (and v + w) through index `max`:
/// w^{(i)}w^{(j)} = C(i+j,i) w^{(i+j)}, ∂(w^{(i)}) = ∂(w) w^{(i−1)},
/// w^i = i! w^{(i)}, (v+w)^{(h)} = Σ v^{(i)} w^{(h−i)}. Returns the names of
/// the identities that failed.
pub fn divided_power_identities(
    v: &ExteriorElement,
    w: &ExteriorElement,
    data: &KoszulData,
    max: u32,
) -> Result<Vec<String>, KoszulError> {
    let field = w.ring.field().clone();
    let p = field.characteristic() as u64;
    let mut failures = Vec::new();
    let wp: Vec<ExteriorElement> = (0..=2 * max).map(|i| divided_power(w, i)).collect::<Result<_, _>>()?;
    let vp: Vec<ExteriorElement> = (0..=max).map(|i| divided_power(v, i)).collect::<Result<_, _>>()?;
    let dw = koszul_boundary(w, data)?;
    for i in 0..=max {
        for j in 0..=max {
            let lhs = wp[i as usize].wedge(&wp[j as usize])?;
            let c = field.from_int((binomial((i + j) as u64, i as u64) % p) as i64);
            if lhs != wp[(i + j) as usize].scale(&w.ring.constant(c)) {
                failures.push(format!("product w^({i}) w^({j})"));
            }
        }
        if i >= 1 && koszul_boundary(&wp[i as usize], data)? != dw.wedge(&wp[i as usize - 1])? {
            failures.push(format!("boundary of w^({i})"));
        }
        let fact = field.from_int((factorial(i as u64) % p) as i64);
        if w.power(i) != wp[i as usize].scale(&w.ring.constant(fact)) {
            failures.push(format!("w^{i} = {i}! w^({i})"));
        }
        let sum = v.add(w)?;
        let mut expansion = ExteriorElement::zero(&w.ring, w.d);
        for a in 0..=i {
            expansion = expansion.add(&vp[a as usize].wedge(&wp[(i - a) as usize])?)?;
        }
        if divided_power(&sum, i)? != expansion {
            failures.push(format!("(v+w)^({i})"));
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;

    fn setup(p: u32, d: usize) -> (PolyRing, KoszulData) {
        let f = Field::prime(p).unwrap();
        let ring = PolyRing::t_ring(&f, d);
        let data = KoszulData::on_variables(&ring, &(0..d).collect::<Vec<_>>()).unwrap();
        (ring, data)
    }

    fn x(ring: &PolyRing, d: usize, i: usize) -> ExteriorElement {
        ExteriorElement::generator(ring, d, i)
    }

    #[test]
    fn wedge_signs() {
        let (ring, _) = setup(5, 3);
        let x1 = x(&ring, 3, 0);
        let x2 = x(&ring, 3, 1);
        assert!(x1.wedge(&x1).unwrap().is_zero());
        assert_eq!(x1.wedge(&x2).unwrap(), x2.wedge(&x1).unwrap().neg());
        let lhs = x1.add(&x2).unwrap().wedge(&x1.sub(&x2).unwrap()).unwrap();
        let x12 = ExteriorElement::monomial(&ring, 3, 0b11, ring.constant(5 - 2));
        assert_eq!(lhs, x12);
    }

    #[test]
    fn boundary_rules() {
        let (ring, data) = setup(3, 3);
        let x1 = x(&ring, 3, 0);
        let x2 = x(&ring, 3, 1);
        let t = |i| ring.var(i);
        assert_eq!(koszul_boundary(&x1, &data).unwrap(), ExteriorElement::monomial(&ring, 3, 0, t(0)));
        let expected = ExteriorElement::monomial(&ring, 3, 0b10, t(0))
            .sub(&ExteriorElement::monomial(&ring, 3, 0b01, t(1)))
            .unwrap();
        assert_eq!(koszul_boundary(&x1.wedge(&x2).unwrap(), &data).unwrap(), expected);
        let top = ExteriorElement::monomial(&ring, 3, 0b111, ring.one());
        let dd = koszul_boundary(&koszul_boundary(&top, &data).unwrap(), &data).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn divided_power_low_indices() {
        let (ring, data) = setup(3, 4);
        let w = ExteriorElement::monomial(&ring, 4, 0b0011, ring.parse("t1 + 2").unwrap())
            .add(&ExteriorElement::monomial(&ring, 4, 0b1100, ring.parse("t2*t3").unwrap()))
            .unwrap();
        assert_eq!(divided_power(&w, 0).unwrap(), ExteriorElement::one(&ring, 4));
        assert_eq!(divided_power(&w, 1).unwrap(), w);
        // w^(2) = r12 r34 x1x2x3x4 while w^2 = 2 r12 r34 x1x2x3x4
        let w2 = divided_power(&w, 2).unwrap();
        assert_eq!(w2, ExteriorElement::monomial(&ring, 4, 0b1111, ring.parse("(t1+2)*t2*t3").unwrap()));
        let v = ExteriorElement::monomial(&ring, 4, 0b0101, ring.parse("t4").unwrap());
        assert!(divided_power_identities(&v, &w, &data, 4).unwrap().is_empty());
        assert_eq!(divided_power(&x(&ring, 4, 0), 2).unwrap_err(), KoszulError::NotDegreeTwo);
    }

    #[test]
    fn tate_boundary_rules() {
        let (ring, data) = setup(2, 2);
        // z = ∂(x1x2) = t1 x2 - t2 x1 is a cycle
        let z = koszul_boundary(&ExteriorElement::monomial(&ring, 2, 0b11, ring.one()), &data).unwrap();
        let y = TateElement::basis(&ring, 2, 0, 1, ring.one());
        assert_eq!(tate_boundary(&y, &z, &data).unwrap(), TateElement::from_exterior(&z, 0));
        let y2 = TateElement::basis(&ring, 2, 0, 2, ring.one());
        let dy2 = tate_boundary(&y2, &z, &data).unwrap();
        assert!(tate_boundary(&dy2, &z, &data).unwrap().is_zero());
        let x1y = TateElement::basis(&ring, 2, 0b01, 1, ring.one());
        let expected = TateElement::basis(&ring, 2, 0, 1, ring.var(0))
            .sub(&TateElement::from_exterior(&x(&ring, 2, 0).wedge(&z).unwrap(), 0))
            .unwrap();
        assert_eq!(tate_boundary(&x1y, &z, &data).unwrap(), expected);
        let not_cycle = x(&ring, 2, 0);
        assert_eq!(tate_boundary(&y, &not_cycle, &data).unwrap_err(), KoszulError::NotACycle);
    }

    #[test]
    fn cycle_modulo_relation() {
        // z = s1 t1 x1 + s2 t2 x2 has ∂z = s1 t1² + s2 t2², a cycle modulo that element
        let f = Field::prime(2).unwrap();
        let ring = PolyRing::ts_ring(&f, 2, 2);
        let data = KoszulData::on_variables(&ring, &[0, 1]).unwrap();
        let z = ExteriorElement::monomial(&ring, 2, 0b01, ring.parse("s1*t1").unwrap())
            .add(&ExteriorElement::monomial(&ring, 2, 0b10, ring.parse("s2*t2").unwrap()))
            .unwrap();
        assert!(!data.is_cycle(&z).unwrap());
        let data = data.with_modulus(ring.parse("s1*t1^2 + s2*t2^2").unwrap()).unwrap();
        assert!(data.is_cycle(&z).unwrap());
        let y2 = TateElement::basis(&ring, 2, 0, 2, ring.one());
        let dd = tate_boundary(&tate_boundary(&y2, &z, &data).unwrap(), &z, &data).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn shift_iso_trivial_and_degree_zero() {
        let (ring, data) = setup(2, 3);
        let z = koszul_boundary(&ExteriorElement::monomial(&ring, 3, 0b011, ring.var(2)), &data).unwrap();
        let zero = ExteriorElement::zero(&ring, 3);
        let iso = tate_shift_iso(&zero, &z, &data, 6).unwrap();
        for n in 0..=6 {
            for (m, i) in tate_basis(3, n) {
                let e = TateElement::basis(&ring, 3, m, i, ring.one());
                assert_eq!(iso.forward(&e).unwrap(), e);
            }
        }
        let w = ExteriorElement::monomial(&ring, 3, 0b110, ring.parse("t1 + 1").unwrap());
        let iso = tate_shift_iso(&w, &z, &data, 6).unwrap();
        let one = TateElement::basis(&ring, 3, 0, 0, ring.one());
        assert_eq!(iso.forward(&one).unwrap(), one);
        assert!(iso.verify().unwrap().is_isomorphism());
    }

    #[test]
    fn basis_counts() {
        assert_eq!(tate_basis(3, 0), vec![(0, 0)]);
        assert_eq!(tate_basis(3, 1).len(), 3);
        assert_eq!(tate_basis(3, 5).len(), 4);
        assert_eq!(tate_basis(2, 4), vec![(0, 2), (0b11, 1)]);
    }
}
