//! Complexes computing Tor over P = k[t₁..t_d] and over hypersurfaces
//! P/(f), f = Σ g_q t_q^{u_q}, with coefficients in a module M.
//!
//! Over P/(f) the residue field is resolved by the Koszul complex on t with
//! one divided-power variable y adjoined, ∂y = Σ g_q t_q^{u_q−1} x_q. Tensored
//! with M the basis of degree n is {x_S y^{(i)} : |S| + 2i = n}, each label
//! carrying a copy of M, and the differential is
//!   x_S y^{(i)} ↦ Σ_{p∈S} ε(S,p) T_p · x_{S∖p} y^{(i)}
//!               + Σ_{q∉S, q≤c} ε(S,q) g_q(T)T_q^{u_q−1} · x_{S∪q} y^{(i−1)}
//! with ε(S,p) = (−1)^{#{s∈S : s<p}}.

use rayon::prelude::*;
use thiserror::Error;

use crate::dg_koszul::{self, ExteriorElement, KoszulData, KoszulError, TateElement};
use crate::fields::Field;
use crate::linalg::{evaluate_poly_at_operators, LinalgError, Matrix};
use crate::module_rep::{validate_module, ModuleRep, RingSpec, Violation};
use crate::polynomials::{MPoly, PolyError, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("invalid module: {0}")]
    InvalidModule(Violation),
    #[error("f = Σ g_q t_q^u_q is zero")]
    ZeroHypersurface,
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("coefficients must live in k[t1..t{0}] over the module's field")]
    CoefficientRing(usize),
    #[error("every coefficient needs zero constant term")]
    NonzeroConstantTerm,
    #[error("this construction needs every variable truncated (c = d)")]
    NotArtinian,
    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { max: usize, got: usize },
    #[error("differentials fail to compose to zero at degree {0}")]
    NotAComplex(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
}

/// Degree bound used when a caller gives none: two periods past d.
pub fn default_max_degree(d: usize) -> usize {
    2 * d + 4
}

fn sign_before(mask: u32, p: usize) -> bool {
    (mask & ((1u32 << p) - 1)).count_ones() % 2 == 1
}

/// Label x_S y^{(i)} of a block of a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub subset: u32,
    pub divided: u32,
}

impl BasisLabel {
    pub fn degree(&self) -> usize {
        self.subset.count_ones() as usize + 2 * self.divided as usize
    }
}

/// A finite complex of k-spaces C_0..C_top built from blocks of size
/// `block`; `differential(n)` maps C_n → C_{n−1}.
#[derive(Clone, Debug)]
pub struct VectorComplex {
    field: Field,
    block: usize,
    labels: Vec<Vec<BasisLabel>>,
    differentials: Vec<Matrix>,
}

impl VectorComplex {
    /// Checks D_n ∘ D_{n+1} = 0 for every n.
    pub fn new(field: &Field, block: usize, labels: Vec<Vec<BasisLabel>>, differentials: Vec<Matrix>) -> Result<Self, ResolutionError> {
        assert_eq!(labels.len(), differentials.len(), "one differential per degree");
        for n in 1..differentials.len() {
            let comp = differentials[n - 1].try_mul(&differentials[n])?;
            if !comp.is_zero() {
                return Err(ResolutionError::NotAComplex(n - 1));
            }
        }
        Ok(VectorComplex { field: field.clone(), block, labels, differentials })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Highest degree present.
    pub fn top(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, |l| l.len() * self.block)
    }

    pub fn labels(&self, n: usize) -> &[BasisLabel] {
        &self.labels[n]
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn differential(&self, n: usize) -> &Matrix {
        &self.differentials[n]
    }

    /// Ranks of D_0..D_top, computed concurrently.
    pub fn ranks(&self) -> Vec<usize> {
        self.differentials.par_iter().map(Matrix::rank).collect()
    }

    /// dim H_n for n < top (the last degree has no incoming differential).
    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks = self.ranks();
        (0..self.top()).map(|n| self.dim(n) - ranks[n] - ranks[n + 1]).collect()
    }
}

/// Betti numbers β₀..β_N with the eventual 2-periodicity, if observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub betti: Vec<usize>,
    /// Degree from which periodicity is checked.
    pub threshold: usize,
    pub stable_pair: Option<(usize, usize)>,
}

impl BettiTable {
    pub fn new(betti: Vec<usize>, threshold: usize) -> Self {
        let mut table = BettiTable { betti, threshold, stable_pair: None };
        let enough = table.betti.len() >= threshold + 2;
        if enough && table.periodicity_violations().is_empty() {
            let at = |parity: usize| table.betti[threshold + (threshold + parity) % 2];
            table.stable_pair = Some((at(0), at(1)));
        }
        table
    }

    pub fn stable_period_detected(&self) -> bool {
        self.stable_pair.is_some()
    }

    /// Degrees i ≥ threshold with β_{i+2} ≠ β_i.
    pub fn periodicity_violations(&self) -> Vec<usize> {
        (self.threshold..self.betti.len().saturating_sub(2)).filter(|&i| self.betti[i + 2] != self.betti[i]).collect()
    }
}

/// g₁..g_c in k[t₁..t_d] defining f = Σ g_q t_q^{u_q}.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceCoeffs {
    ring: RingSpec,
    poly_ring: PolyRing,
    coeffs: Vec<MPoly>,
    f: MPoly,
}

impl HypersurfaceCoeffs {
    pub fn new(ring: &RingSpec, coeffs: Vec<MPoly>) -> Result<Self, ResolutionError> {
        let c = ring.num_relations();
        if coeffs.len() != c {
            return Err(ResolutionError::CoefficientCount { expected: c, found: coeffs.len() });
        }
        let poly_ring = PolyRing::t_ring(ring.field(), ring.num_vars());
        if coeffs.iter().any(|g| g.ring() != &poly_ring) {
            return Err(ResolutionError::CoefficientRing(ring.num_vars()));
        }
        let mut f = poly_ring.zero();
        for (q, g) in coeffs.iter().enumerate() {
            f = &f + &(g * &poly_ring.var(q).pow(ring.exponents()[q]));
        }
        if f.is_zero() {
            return Err(ResolutionError::ZeroHypersurface);
        }
        Ok(HypersurfaceCoeffs { ring: ring.clone(), poly_ring, coeffs, f })
    }

    /// Constant coefficients g_q = a_q.
    pub fn from_point(ring: &RingSpec, point: &[u32]) -> Result<Self, ResolutionError> {
        let pr = PolyRing::t_ring(ring.field(), ring.num_vars());
        Self::new(ring, point.iter().map(|&a| pr.constant(a)).collect())
    }

    /// Parses "g1;g2;…" with polynomials in t1..td.
    pub fn parse(ring: &RingSpec, input: &str) -> Result<Self, ResolutionError> {
        let pr = PolyRing::t_ring(ring.field(), ring.num_vars());
        let coeffs = input.split(';').map(|s| pr.parse(s.trim())).collect::<Result<Vec<_>, _>>()?;
        Self::new(ring, coeffs)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.poly_ring
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn f(&self) -> &MPoly {
        &self.f
    }

    /// (g₁(0),…,g_c(0)).
    pub fn constant_terms(&self) -> Vec<u32> {
        crate::polynomials::constant_term_vector(&self.coeffs)
    }
}

fn check_module(module: &ModuleRep) -> Result<(), ResolutionError> {
    validate_module(module).map_err(ResolutionError::InvalidModule)
}

fn block_index(labels: &[BasisLabel], target: BasisLabel) -> usize {
    labels.iter().position(|&l| l == target).expect("label present in adjacent degree")
}

/// Koszul complex on t₁..t_d with coefficients in M, degrees 0..=d.
pub fn koszul_on_module(module: &ModuleRep) -> Result<VectorComplex, ResolutionError> {
    check_module(module)?;
    let d = module.ring().num_vars();
    let m = module.dim();
    let field = module.field();
    let labels: Vec<Vec<BasisLabel>> = (0..=d)
        .map(|n| {
            dg_koszul::tate_basis(d, n)
                .into_iter()
                .filter(|&(_, i)| i == 0)
                .map(|(subset, _)| BasisLabel { subset, divided: 0 })
                .collect()
        })
        .collect();
    let mut diffs = vec![Matrix::zeros(field, 0, m)];
    for n in 1..=d {
        let mut dn = Matrix::zeros(field, labels[n - 1].len() * m, labels[n].len() * m);
        for (col, l) in labels[n].iter().enumerate() {
            for p in (0..d).filter(|&p| l.subset >> p & 1 == 1) {
                let row = block_index(&labels[n - 1], BasisLabel { subset: l.subset & !(1 << p), divided: 0 });
                let sign = if sign_before(l.subset, p) { field.neg(1) } else { 1 };
                dn.put_block(row * m, col * m, module.operator(p), sign);
            }
        }
        diffs.push(dn);
    }
    VectorComplex::new(field, m, labels, diffs)
}

/// dim Tor_i^P(k, M) for i ≤ max_degree.
pub fn betti_over_p(module: &ModuleRep, max_degree: usize) -> Result<BettiTable, ResolutionError> {
    let complex = koszul_on_module(module)?;
    let ranks = complex.ranks();
    let d = complex.top();
    let betti = (0..=max_degree)
        .map(|n| if n > d { 0 } else { complex.dim(n) - ranks[n] - ranks.get(n + 1).copied().unwrap_or(0) })
        .collect();
    Ok(BettiTable::new(betti, d + 1))
}

/// The y-term blocks g_q(T)·T_q^{u_q−1}.
fn relation_blocks(module: &ModuleRep, coeffs: &HypersurfaceCoeffs) -> Result<Vec<Matrix>, ResolutionError> {
    let ops = module.operators();
    coeffs
        .coeffs()
        .iter()
        .enumerate()
        .map(|(q, g)| {
            let gq = evaluate_poly_at_operators(g, ops)?;
            Ok(gq.try_mul(&ops[q].pow(coeffs.ring().exponents()[q] - 1))?)
        })
        .collect()
}

/// The resolution of k over P/(f) tensored with M, degrees 0..=top.
pub fn hypersurface_complex(module: &ModuleRep, coeffs: &HypersurfaceCoeffs, top: usize) -> Result<VectorComplex, ResolutionError> {
    check_module(module)?;
    if coeffs.ring() != module.ring() {
        return Err(ResolutionError::CoefficientRing(module.ring().num_vars()));
    }
    let d = module.ring().num_vars();
    let c = module.ring().num_relations();
    let m = module.dim();
    let field = module.field();
    let g_blocks = relation_blocks(module, coeffs)?;
    let labels: Vec<Vec<BasisLabel>> = (0..=top)
        .map(|n| dg_koszul::tate_basis(d, n).into_iter().map(|(subset, divided)| BasisLabel { subset, divided }).collect())
        .collect();
    let mut diffs = vec![Matrix::zeros(field, 0, m)];
    for n in 1..=top {
        let mut dn = Matrix::zeros(field, labels[n - 1].len() * m, labels[n].len() * m);
        for (col, l) in labels[n].iter().enumerate() {
            for p in 0..d {
                let sign = if sign_before(l.subset, p) { field.neg(1) } else { 1 };
                if l.subset >> p & 1 == 1 {
                    let row = block_index(&labels[n - 1], BasisLabel { subset: l.subset & !(1 << p), divided: l.divided });
                    dn.put_block(row * m, col * m, module.operator(p), sign);
                } else if p < c && l.divided >= 1 {
                    let row = block_index(&labels[n - 1], BasisLabel { subset: l.subset | 1 << p, divided: l.divided - 1 });
                    dn.put_block(row * m, col * m, &g_blocks[p], sign);
                }
            }
        }
        diffs.push(dn);
    }
    VectorComplex::new(field, m, labels, diffs)
}

/// dim Tor_i^{P/(f)}(k, M) for i ≤ max_degree.
pub fn betti_over_hypersurface(module: &ModuleRep, coeffs: &HypersurfaceCoeffs, max_degree: usize) -> Result<BettiTable, ResolutionError> {
    let complex = hypersurface_complex(module, coeffs, max_degree + 1)?;
    Ok(BettiTable::new(complex.homology_dims(), module.ring().num_vars()))
}

/// β^P together with β^{P/(f)} and the prediction Σ_j β^P_{i−2j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorFormula {
    pub over_p: BettiTable,
    pub over_hypersurface: BettiTable,
    pub predicted: Vec<usize>,
}

impl TensorFormula {
    pub fn holds(&self) -> bool {
        self.predicted == self.over_hypersurface.betti
    }
}

/// Compares both sides of Tor^{P/(f)}(k,M) ≅ Tor^P(k,M) ⊗ k⟨y⟩ when every
/// g_q has zero constant term.
pub fn tensor_formula(module: &ModuleRep, coeffs: &HypersurfaceCoeffs, max_degree: usize) -> Result<TensorFormula, ResolutionError> {
    if coeffs.constant_terms().iter().any(|&a| a != 0) {
        return Err(ResolutionError::NonzeroConstantTerm);
    }
    let over_p = betti_over_p(module, max_degree)?;
    let over_hypersurface = betti_over_hypersurface(module, coeffs, max_degree)?;
    let predicted = (0..=max_degree).map(|i| (0..=i / 2).map(|j| over_p.betti[i - 2 * j]).sum()).collect();
    Ok(TensorFormula { over_p, over_hypersurface, predicted })
}

pub fn betti_tensor_formula_check(module: &ModuleRep, coeffs: &HypersurfaceCoeffs, max_degree: usize) -> Result<bool, ResolutionError> {
    Ok(tensor_formula(module, coeffs, max_degree)?.holds())
}

/// The stable differentials: `a` maps even-size labels to odd-size ones,
/// `b` the reverse. Label order is [`dg_koszul::subset_key`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePair {
    pub a: Matrix,
    pub b: Matrix,
    pub even: Vec<u32>,
    pub odd: Vec<u32>,
    pub block: usize,
}

impl StablePair {
    /// r = m·2^{d−1}.
    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// C = [[0, A], [B, 0]].
    pub fn c_matrix(&self) -> Matrix {
        let r = self.size();
        let mut c = Matrix::zeros(self.a.field(), 2 * r, 2 * r);
        c.put_block(0, r, &self.a, 1);
        c.put_block(r, 0, &self.b, 1);
        c
    }

    /// rank C = rank A + rank B.
    pub fn rank_c(&self) -> usize {
        let (ra, rb) = rayon::join(|| self.a.rank(), || self.b.rank());
        ra + rb
    }
}

/// Stable differentials read from the degrees d+1 and d+2, where every
/// subset S of the right parity labels exactly one block.
pub fn stable_matrices(module: &ModuleRep, coeffs: &HypersurfaceCoeffs) -> Result<StablePair, ResolutionError> {
    let d = module.ring().num_vars();
    if d > dg_koszul::MAX_EXTERIOR_VARS {
        return Err(ResolutionError::TooManyVariables { max: dg_koszul::MAX_EXTERIOR_VARS, got: d });
    }
    let complex = hypersurface_complex(module, coeffs, d + 2)?;
    let m = module.dim();
    let even = dg_koszul::subsets_of_parity(d, false);
    let odd = dg_koszul::subsets_of_parity(d, true);
    let reorder = |n: usize, rows: &[u32], cols: &[u32]| {
        let dn = complex.differential(n);
        let row_pos: Vec<usize> = rows.iter().map(|&s| complex.labels(n - 1).iter().position(|l| l.subset == s).unwrap()).collect();
        let col_pos: Vec<usize> = cols.iter().map(|&s| complex.labels(n).iter().position(|l| l.subset == s).unwrap()).collect();
        let mut out = Matrix::zeros(module.field(), rows.len() * m, cols.len() * m);
        for (i, &ri) in row_pos.iter().enumerate() {
            for (j, &cj) in col_pos.iter().enumerate() {
                out.put_block(i * m, j * m, &dn.block(ri * m, cj * m, m, m), 1);
            }
        }
        out
    };
    let (n_even, n_odd) = if d.is_multiple_of(2) { (d + 2, d + 1) } else { (d + 1, d + 2) };
    Ok(StablePair { a: reorder(n_even, &odd, &even), b: reorder(n_odd, &even, &odd), even, odd, block: m })
}

pub fn c_matrix(module: &ModuleRep, coeffs: &HypersurfaceCoeffs) -> Result<Matrix, ResolutionError> {
    Ok(stable_matrices(module, coeffs)?.c_matrix())
}

/// A and B with entries in k[t, s], rows and columns labelled by subsets
/// of {1..c} of the appropriate size parity.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPair {
    pub ring: PolyRing,
    pub a: Vec<Vec<MPoly>>,
    pub b: Vec<Vec<MPoly>>,
    pub even: Vec<u32>,
    pub odd: Vec<u32>,
}

/// Entry at (row h, column j): zero unless h and j differ in one place p;
/// then (−1)^n s_p t_p^{u_p−1} if p ∈ h, else (−1)^n t_p, n = #{i<p : i ∈ j}.
fn closed_form_entry(ring: &PolyRing, exps: &[u32], h: u32, j: u32) -> MPoly {
    let diff = h ^ j;
    if diff.count_ones() != 1 {
        return ring.zero();
    }
    let p = diff.trailing_zeros() as usize;
    let d = exps.len();
    let entry = if h >> p & 1 == 1 {
        &ring.var(d + p) * &ring.var(p).pow(exps[p] - 1)
    } else {
        ring.var(p)
    };
    if sign_before(j, p) {
        entry.neg()
    } else {
        entry
    }
}

/// The closed-form stable matrices for f̃ = Σ s_q t_q^{u_q} when c = d.
pub fn example_matrices(ring: &RingSpec) -> Result<SymbolicPair, ResolutionError> {
    if !ring.is_artinian() {
        return Err(ResolutionError::NotArtinian);
    }
    let d = ring.num_vars();
    if d > dg_koszul::MAX_EXTERIOR_VARS {
        return Err(ResolutionError::TooManyVariables { max: dg_koszul::MAX_EXTERIOR_VARS, got: d });
    }
    let pr = PolyRing::ts_ring(ring.field(), d, d);
    let even = dg_koszul::subsets_of_parity(d, false);
    let odd = dg_koszul::subsets_of_parity(d, true);
    let grid = |rows: &[u32], cols: &[u32]| -> Vec<Vec<MPoly>> {
        rows.iter().map(|&h| cols.iter().map(|&j| closed_form_entry(&pr, ring.exponents(), h, j)).collect()).collect()
    };
    Ok(SymbolicPair { a: grid(&odd, &even), b: grid(&even, &odd), even, odd, ring: pr })
}

/// The stable differentials of K⟨y | ∂y = Σ s_q t_q^{u_q−1} x_q⟩ over k[t, s],
/// computed by the symbolic Tate boundary.
pub fn symbolic_stable_pair(ring: &RingSpec) -> Result<SymbolicPair, ResolutionError> {
    if !ring.is_artinian() {
        return Err(ResolutionError::NotArtinian);
    }
    let d = ring.num_vars();
    let pr = PolyRing::ts_ring(ring.field(), d, d);
    let mut z = ExteriorElement::zero(&pr, d);
    let mut f = pr.zero();
    for q in 0..d {
        let coeff = &pr.var(d + q) * &pr.var(q).pow(ring.exponents()[q] - 1);
        f = &f + &(&coeff * &pr.var(q));
        z = z.add(&ExteriorElement::monomial(&pr, d, 1 << q, coeff))?;
    }
    // z is a cycle only modulo f̃ = Σ s_q t_q^{u_q}
    let data = KoszulData::on_variables(&pr, &(0..d).collect::<Vec<_>>())?.with_modulus(f)?;
    let even = dg_koszul::subsets_of_parity(d, false);
    let odd = dg_koszul::subsets_of_parity(d, true);
    let grid = |n: usize, rows: &[u32], cols: &[u32]| -> Result<Vec<Vec<MPoly>>, ResolutionError> {
        let mut out = vec![vec![pr.zero(); cols.len()]; rows.len()];
        for (jc, &j) in cols.iter().enumerate() {
            let i = ((n - j.count_ones() as usize) / 2) as u32;
            let e = TateElement::basis(&pr, d, j, i, pr.one());
            let image = dg_koszul::tate_boundary(&e, &z, &data)?;
            for ((s, k), coeff) in image.terms() {
                let row = rows.iter().position(|&h| h == s).expect("stable image label");
                debug_assert_eq!(s.count_ones() as usize + 2 * k as usize, n - 1);
                out[row][jc] = coeff.clone();
            }
        }
        Ok(out)
    };
    let (n_even, n_odd) = if d.is_multiple_of(2) { (d + 2, d + 1) } else { (d + 1, d + 2) };
    Ok(SymbolicPair { a: grid(n_even, &odd, &even)?, b: grid(n_odd, &even, &odd)?, even, odd, ring: pr })
}

/// Diagonal signs ε with closed[h][j] = ε_h ε_j tate[h][j] in both matrices,
/// labels matched by subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleMatch {
    /// ε_S for each subset, indexed by the bitmask.
    pub signs: Option<Vec<bool>>,
    /// Whether the numeric stable pair of a test module equals the closed
    /// form evaluated at t = T, s = a.
    pub numeric_agrees: bool,
}

impl ExampleMatch {
    pub fn agrees(&self) -> bool {
        self.signs.is_some() && self.numeric_agrees
    }
}

fn match_signs(d: usize, closed: &SymbolicPair, tate: &SymbolicPair) -> Option<Vec<bool>> {
    let mut sign: Vec<Option<bool>> = vec![None; 1 << d];
    let mut edges = Vec::new();
    for (grid_c, grid_t, rows, cols) in [(&closed.a, &tate.a, &closed.odd, &closed.even), (&closed.b, &tate.b, &closed.even, &closed.odd)] {
        for (i, &h) in rows.iter().enumerate() {
            for (j, &s) in cols.iter().enumerate() {
                let (x, y) = (&grid_c[i][j], &grid_t[i][j]);
                if x.is_zero() != y.is_zero() {
                    return None;
                }
                if x.is_zero() {
                    continue;
                }
                if *x == *y {
                    edges.push((h, s, false));
                } else if *x == y.neg() {
                    edges.push((h, s, true));
                } else {
                    return None;
                }
            }
        }
    }
    // propagate ε over the hypercube of labels, starting from ε_∅ = +
    sign[0] = Some(false);
    let mut changed = true;
    while changed {
        changed = false;
        for &(h, s, flip) in &edges {
            match (sign[h as usize], sign[s as usize]) {
                (Some(a), None) => {
                    sign[s as usize] = Some(a ^ flip);
                    changed = true;
                }
                (None, Some(b)) => {
                    sign[h as usize] = Some(b ^ flip);
                    changed = true;
                }
                (Some(a), Some(b)) if a ^ b != flip => return None,
                _ => {}
            }
        }
    }
    sign.into_iter().map(|s| s.or(Some(false))).collect()
}

fn evaluate_symbolic(grid: &[Vec<MPoly>], module: &ModuleRep, point: &[u32]) -> Result<Matrix, ResolutionError> {
    let m = module.dim();
    let field = module.field();
    let mut ops: Vec<Matrix> = module.operators().to_vec();
    ops.extend(point.iter().map(|&a| Matrix::scalar(field, m, a)));
    let cols = grid.first().map_or(0, Vec::len);
    let mut out = Matrix::zeros(field, grid.len() * m, cols * m);
    for (i, row) in grid.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            out.put_block(i * m, j * m, &evaluate_poly_at_operators(entry, &ops)?, 1);
        }
    }
    Ok(out)
}

/// Compares the closed-form matrices with the symbolic Tate differential
/// and with the numeric stable pair of `module` at the constant point.
pub fn example_fidelity(module: &ModuleRep, point: &[u32]) -> Result<ExampleMatch, ResolutionError> {
    let ring = module.ring();
    let closed = example_matrices(ring)?;
    let tate = symbolic_stable_pair(ring)?;
    let signs = match_signs(ring.num_vars(), &closed, &tate);
    let coeffs = HypersurfaceCoeffs::from_point(ring, point)?;
    let numeric = stable_matrices(module, &coeffs)?;
    let numeric_agrees = evaluate_symbolic(&closed.a, module, point)? == numeric.a
        && evaluate_symbolic(&closed.b, module, point)? == numeric.b;
    Ok(ExampleMatch { signs, numeric_agrees })
}
