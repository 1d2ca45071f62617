//! Finite-dimensional modules over R = k[t₁..t_d]/(t₁^{u₁},…,t_c^{u_c}),
//! held as tuples of commuting nilpotent matrices acting on column vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fields::{Field, FieldError, FieldSpec};
use crate::linalg::{LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("{relations} relations exceed {vars} variables")]
    TooManyRelations { vars: usize, relations: usize },
    #[error("exponent {exponent} of t{index} is below 2")]
    SmallExponent { index: usize, exponent: u32 },
    #[error("the ring must have at least one variable")]
    NoVariables,
    #[error("this construction needs every variable truncated (c = d)")]
    NotArtinian,
    #[error("expected {expected} operators, found {found}")]
    OperatorCount { expected: usize, found: usize },
    #[error("operator {index} is {rows}x{cols}, expected {dim}x{dim}")]
    OperatorShape { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("relation vector has length {found}, expected {expected}")]
    RelationLength { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The ring k[t₁..t_d]/(t₁^{u₁},…,t_c^{u_c}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    field: Field,
    num_vars: usize,
    exponents: Vec<u32>,
}

impl RingSpec {
    pub fn new(field: &Field, num_vars: usize, exponents: Vec<u32>) -> Result<Self, ModuleError> {
        if num_vars == 0 {
            return Err(ModuleError::NoVariables);
        }
        if exponents.len() > num_vars {
            return Err(ModuleError::TooManyRelations { vars: num_vars, relations: exponents.len() });
        }
        if let Some((i, &u)) = exponents.iter().enumerate().find(|(_, &u)| u < 2) {
            return Err(ModuleError::SmallExponent { index: i + 1, exponent: u });
        }
        Ok(RingSpec { field: field.clone(), num_vars, exponents })
    }

    pub fn from_spec(spec: FieldSpec, num_vars: usize, exponents: Vec<u32>) -> Result<Self, ModuleError> {
        Self::new(&Field::new(spec)?, num_vars, exponents)
    }

    /// k[t₁..t_d]/(t₁^p,…,t_d^p), the group algebra of (Z/p)^d.
    pub fn elementary_abelian(field: &Field, rank: usize) -> Result<Self, ModuleError> {
        Self::new(field, rank, vec![field.characteristic(); rank])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_relations(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_artinian(&self) -> bool {
        self.exponents.len() == self.num_vars
    }

    pub fn is_elementary_abelian(&self) -> bool {
        self.is_artinian() && self.exponents.iter().all(|&u| u == self.field.characteristic())
    }

    /// dim_k R when c = d.
    pub fn dimension(&self) -> Option<usize> {
        self.is_artinian().then(|| self.exponents.iter().map(|&u| u as usize).product())
    }

    /// Same ring over a larger field.
    pub fn over(&self, field: &Field) -> Result<Self, ModuleError> {
        if !field.contains_subfield(&self.field) {
            return Err(ModuleError::Field(FieldError::FieldMismatch));
        }
        Ok(RingSpec { field: field.clone(), ..self.clone() })
    }

    /// Exponent vectors e with e_q < u_q, t₁ varying fastest.
    pub fn standard_monomials(&self) -> Result<Vec<Vec<u32>>, ModuleError> {
        if !self.is_artinian() {
            return Err(ModuleError::NotArtinian);
        }
        let total: u32 = self.exponents.iter().product();
        let out = (0..total)
            .map(|mut idx| {
                self.exponents
                    .iter()
                    .map(|&u| {
                        let e = idx % u;
                        idx /= u;
                        e
                    })
                    .collect()
            })
            .collect();
        Ok(out)
    }
}

/// A failed module invariant.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("operators T{0} and T{1} do not commute")]
    NotCommuting(usize, usize),
    #[error("T{index}^{exponent} is nonzero")]
    RelationFails { index: usize, exponent: u32 },
    #[error("T{index} is not nilpotent")]
    NotNilpotent { index: usize },
}

/// An R-module of dimension `dim` over k: operator T_i is multiplication by t_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleRep {
    ring: RingSpec,
    dim: usize,
    operators: Vec<Matrix>,
}

impl ModuleRep {
    /// Checks shapes and fields only; see [`validate_module`] for the
    /// algebraic invariants.
    pub fn new(ring: RingSpec, dim: usize, operators: Vec<Matrix>) -> Result<Self, ModuleError> {
        if operators.len() != ring.num_vars() {
            return Err(ModuleError::OperatorCount { expected: ring.num_vars(), found: operators.len() });
        }
        for (i, t) in operators.iter().enumerate() {
            if t.rows() != dim || t.cols() != dim {
                return Err(ModuleError::OperatorShape { index: i + 1, rows: t.rows(), cols: t.cols(), dim });
            }
            if t.field() != ring.field() {
                return Err(ModuleError::Linalg(LinalgError::FieldMismatch));
            }
        }
        Ok(ModuleRep { ring, dim, operators })
    }

    /// The residue field k, all operators zero.
    pub fn residue_field(ring: &RingSpec) -> Self {
        let zero = Matrix::zeros(ring.field(), 1, 1);
        ModuleRep { ring: ring.clone(), dim: 1, operators: vec![zero; ring.num_vars()] }
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    pub fn operator(&self, i: usize) -> &Matrix {
        &self.operators[i]
    }

    /// All invariant failures in a fixed order: commutation pairs (i < j),
    /// then relation powers, then nilpotency.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let ops = &self.operators;
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if &ops[i] * &ops[j] != &ops[j] * &ops[i] {
                    out.push(Violation::NotCommuting(i + 1, j + 1));
                }
            }
        }
        for (q, &u) in self.ring.exponents().iter().enumerate() {
            if !ops[q].pow(u).is_zero() {
                out.push(Violation::RelationFails { index: q + 1, exponent: u });
            }
        }
        for (i, t) in ops.iter().enumerate() {
            if self.dim > 0 && !t.pow(self.dim as u32).is_zero() {
                out.push(Violation::NotNilpotent { index: i + 1 });
            }
        }
        out
    }

    pub fn extend_scalars(&self, field: &Field) -> Result<Self, ModuleError> {
        let ring = self.ring.over(field)?;
        let operators = self.operators.iter().map(|t| t.over(field)).collect();
        Ok(ModuleRep { ring, dim: self.dim, operators })
    }

    pub fn direct_sum(&self, other: &ModuleRep) -> Result<Self, ModuleError> {
        if self.ring != other.ring {
            return Err(ModuleError::Linalg(LinalgError::FieldMismatch));
        }
        let n = self.dim + other.dim;
        let operators = self
            .operators
            .iter()
            .zip(&other.operators)
            .map(|(a, b)| {
                let mut t = Matrix::zeros(self.field(), n, n);
                t.put_block(0, 0, a, 1);
                t.put_block(self.dim, self.dim, b, 1);
                t
            })
            .collect();
        Ok(ModuleRep { ring: self.ring.clone(), dim: n, operators })
    }
}

/// The first failing invariant, if any.
pub fn validate_module(module: &ModuleRep) -> Result<(), Violation> {
    match module.violations().into_iter().next() {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

fn monomial_index(monomials: &[Vec<u32>], e: &[u32]) -> Option<usize> {
    monomials.iter().position(|m| m == e)
}

fn multiplication_operators(ring: &RingSpec, basis: &[Vec<u32>]) -> Vec<Matrix> {
    let n = basis.len();
    (0..ring.num_vars())
        .map(|q| {
            let mut t = Matrix::zeros(ring.field(), n, n);
            for (col, e) in basis.iter().enumerate() {
                let mut next = e.clone();
                next[q] += 1;
                if let Some(row) = monomial_index(basis, &next) {
                    t.set(row, col, 1);
                }
            }
            t
        })
        .collect()
}

/// R itself, on the basis of standard monomials.
pub fn regular_module(ring: &RingSpec) -> Result<ModuleRep, ModuleError> {
    let basis = ring.standard_monomials()?;
    let operators = multiplication_operators(ring, &basis);
    Ok(ModuleRep { ring: ring.clone(), dim: basis.len(), operators })
}

/// R/J for the monomial ideal J generated by the given exponent vectors.
pub fn cyclic_module(ring: &RingSpec, generators: &[Vec<u32>]) -> Result<ModuleRep, ModuleError> {
    let divides = |g: &Vec<u32>, e: &Vec<u32>| g.iter().zip(e).all(|(a, b)| a <= b);
    let basis: Vec<Vec<u32>> = ring
        .standard_monomials()?
        .into_iter()
        .filter(|e| !generators.iter().any(|g| divides(g, e)))
        .collect();
    let operators = multiplication_operators(ring, &basis);
    Ok(ModuleRep { ring: ring.clone(), dim: basis.len(), operators })
}

/// Cokernel of R^b → R^a; each relation is a vector of R^a in coordinates
/// (generator, standard monomial), generator-major.
pub fn presented_module(ring: &RingSpec, generators: usize, relations: &[Vec<u32>]) -> Result<ModuleRep, ModuleError> {
    let free = regular_module(ring)?;
    let n = free.dim;
    let total = generators * n;
    let field = ring.field();
    let act = |q: usize, v: &[u32]| -> Vec<u32> {
        (0..generators).flat_map(|g| free.operators[q].apply(&v[g * n..(g + 1) * n])).collect()
    };
    // the R-submodule generated by the relations is the k-span of all t^e·r
    let mut span: Vec<Vec<u32>> = Vec::new();
    for r in relations {
        if r.len() != total {
            return Err(ModuleError::RelationLength { expected: total, found: r.len() });
        }
        let mut layer = vec![r.clone()];
        for q in 0..ring.num_vars() {
            let mut next = Vec::new();
            for v in &layer {
                let mut w = v.clone();
                for _ in 0..ring.exponents()[q] {
                    next.push(w.clone());
                    w = act(q, &w);
                }
            }
            layer = next;
        }
        span.extend(layer);
    }
    let mut rows = Matrix::zeros(field, span.len(), total);
    for (i, v) in span.iter().enumerate() {
        for (j, &x) in v.iter().enumerate() {
            rows.set(i, j, x);
        }
    }
    let (red, pivots) = rows.rref();
    let free_coords: Vec<usize> = (0..total).filter(|c| !pivots.contains(c)).collect();
    let reduce = |mut v: Vec<u32>| -> Vec<u32> {
        for (r, &p) in pivots.iter().enumerate() {
            let c = v[p];
            if c != 0 {
                for j in 0..total {
                    v[j] = field.sub(v[j], field.mul(c, red.get(r, j)));
                }
            }
        }
        free_coords.iter().map(|&j| v[j]).collect()
    };
    let m = free_coords.len();
    let operators = (0..ring.num_vars())
        .map(|q| {
            let cols: Vec<Vec<u32>> = free_coords
                .iter()
                .map(|&k| {
                    let mut e = vec![0; total];
                    e[k] = 1;
                    reduce(act(q, &e))
                })
                .collect();
            Matrix::from_columns(field, m, &cols)
        })
        .collect();
    Ok(ModuleRep { ring: ring.clone(), dim: m, operators })
}

/// Cokernel of a seeded random map R^b → R^a with nonzero columns.
pub fn random_module(ring: &RingSpec, generators: usize, relations: usize, seed: u64) -> Result<ModuleRep, ModuleError> {
    let n = ring.dimension().ok_or(ModuleError::NotArtinian)?;
    let q = ring.field().order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = generators * n;
    let rels: Vec<Vec<u32>> = (0..relations)
        .map(|_| loop {
            let v: Vec<u32> = (0..total).map(|_| rng.gen_range(0..q)).collect();
            if total == 0 || v.iter().any(|&x| x != 0) {
                break v;
            }
        })
        .collect();
    presented_module(ring, generators, &rels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, u: &[u32]) -> RingSpec {
        RingSpec::new(&Field::prime(p).unwrap(), u.len(), u.to_vec()).unwrap()
    }

    #[test]
    fn validation_reports() {
        let r = ring(2, &[2, 2]);
        assert_eq!(validate_module(&ModuleRep::residue_field(&r)), Ok(()));
        let f = r.field().clone();
        let t1 = Matrix::from_rows(&f, &[vec![0, 1], vec![0, 0]]).unwrap();
        let t2 = Matrix::from_rows(&f, &[vec![0, 0], vec![1, 0]]).unwrap();
        let m = ModuleRep::new(r.clone(), 2, vec![t1, t2]).unwrap();
        assert_eq!(validate_module(&m), Err(Violation::NotCommuting(1, 2)));
        let r3 = ring(3, &[2]);
        let mut j = Matrix::zeros(r3.field(), 3, 3);
        j.set(1, 0, 1);
        j.set(2, 1, 1);
        let m = ModuleRep::new(r3, 3, vec![j]).unwrap();
        assert_eq!(validate_module(&m), Err(Violation::RelationFails { index: 1, exponent: 2 }));
    }

    #[test]
    fn bad_rings() {
        let f = Field::prime(2).unwrap();
        assert!(matches!(RingSpec::new(&f, 1, vec![2, 2]), Err(ModuleError::TooManyRelations { .. })));
        assert!(matches!(RingSpec::new(&f, 2, vec![1]), Err(ModuleError::SmallExponent { index: 1, .. })));
        let partial = RingSpec::new(&f, 2, vec![2]).unwrap();
        assert_eq!(regular_module(&partial).unwrap_err(), ModuleError::NotArtinian);
        assert!(ring(3, &[3, 3]).is_elementary_abelian());
        assert!(!ring(3, &[3, 2]).is_elementary_abelian());
    }

    #[test]
    fn regular_modules() {
        let r = ring(5, &[3]);
        let m = regular_module(&r).unwrap();
        let shift = Matrix::from_rows(r.field(), &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(m.operator(0), &shift);
        let r = ring(2, &[2, 2]);
        let m = regular_module(&r).unwrap();
        assert_eq!(m.dim(), 4);
        assert!(m.operator(0).pow(2).is_zero());
        assert!(!(m.operator(0) * m.operator(1)).is_zero());
        assert_eq!(validate_module(&m), Ok(()));
        assert_eq!(regular_module(&ring(3, &[2, 3, 4])).unwrap().dim(), 24);
    }

    #[test]
    fn cyclic_modules() {
        let r = ring(2, &[2, 2]);
        assert_eq!(cyclic_module(&r, &[vec![0, 0]]).unwrap().dim(), 0);
        assert_eq!(cyclic_module(&r, &[]).unwrap(), regular_module(&r).unwrap());
        let m = cyclic_module(&r, &[vec![1, 0]]).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.operator(0).is_zero());
        assert_eq!(m.operator(1), &Matrix::from_rows(r.field(), &[vec![0, 0], vec![1, 0]]).unwrap());
        // brute-force standard monomial count for J = (t1 t2, t2^2) in u = (3, 3)
        let r = ring(3, &[3, 3]);
        let m = cyclic_module(&r, &[vec![1, 1], vec![0, 2]]).unwrap();
        let count = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|&(a, b)| !(a >= 1 && b >= 1) && b < 2).count();
        assert_eq!(m.dim(), count);
        assert_eq!(validate_module(&m), Ok(()));
    }

    #[test]
    fn presented_and_random_modules() {
        let r = ring(2, &[2, 2]);
        let free = random_module(&r, 2, 0, 1).unwrap();
        assert_eq!(free.dim(), 8);
        let identity: Vec<Vec<u32>> = (0..2).map(|g| (0..8).map(|k| u32::from(k == 4 * g)).collect()).collect();
        assert_eq!(presented_module(&r, 2, &identity).unwrap().dim(), 0);
        let m = random_module(&r, 2, 1, 42).unwrap();
        assert_eq!(validate_module(&m), Ok(()));
        assert!(m.dim() > 0 && m.dim() < 8);
        assert_eq!(random_module(&r, 2, 1, 42).unwrap(), m);
        // relation t1 in R: cokernel is R/(t1)
        let rel = vec![vec![0, 1, 0, 0]];
        let q = presented_module(&r, 1, &rel).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.operator(0).is_zero());
    }

    #[test]
    fn scalar_extension_keeps_invariants() {
        let r = ring(2, &[2, 2]);
        let m = random_module(&r, 1, 1, 7).unwrap();
        let f4 = Field::galois(2, 2).unwrap();
        let big = m.extend_scalars(&f4).unwrap();
        assert_eq!(big.field(), &f4);
        assert_eq!(validate_module(&big), Ok(()));
        let sum = m.direct_sum(&ModuleRep::residue_field(&r)).unwrap();
        assert_eq!(sum.dim(), m.dim() + 1);
        assert_eq!(validate_module(&sum), Ok(()));
    }
}
