//! Support sets over hypersurface liftings, rank varieties, and the
//! freeness tests for nilpotent operators that connect them.

use rayon::prelude::*;
use thiserror::Error;

use crate::fields::{Field, FieldError};
use crate::linalg::{evaluate_poly_at_operators, subspace_equal, LinalgError, Matrix};
use crate::module_rep::{validate_module, ModuleError, ModuleRep, RingSpec, Violation};
use crate::polynomials::{smith_normal_form, squarefree_part, upoly_gcd, MPoly, PolyError, PolyRing, UPoly, UPolyMatrix};
use crate::resolutions::{self, betti_over_hypersurface, hypersurface_complex, HypersurfaceCoeffs, ResolutionError};

/// Default limit on the number of enumerated points.
pub const DEFAULT_MAX_POINTS: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error("invalid module: {0}")]
    InvalidModule(Violation),
    #[error("point has {found} coordinates, expected {expected}")]
    PointArity { expected: usize, found: usize },
    #[error("{0} is not a field element")]
    PointCoordinate(u32),
    #[error("the ring is not k[t1..td]/(t1^p,…,td^p)")]
    NotElementaryAbelian,
    #[error("the rank method needs c = d")]
    RankMethodNeedsArtinian,
    #[error("polynomial must have zero constant term")]
    NonzeroConstantTerm,
    #[error("u − w must lie in the square of the maximal ideal")]
    NotCongruent,
    #[error("u must be nonzero")]
    ZeroElement,
    #[error("operator is not nilpotent of the given order {0}")]
    NotNilpotent(u32),
    #[error("{points} points exceed the enumeration bound {bound}")]
    BoundExceeded { points: u64, bound: u64 },
    #[error("no field of order {0} over the module's field")]
    FieldOrder(u64),
    #[error("operators do not commute")]
    NotCommuting,
    #[error("δ² ≠ 0")]
    NotDifferential,
    #[error("differential module has odd size {0}")]
    OddSize(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

/// Rank test for freeness over k[x]/(x^n): rank α + rank α^{n−1} = m.
pub fn is_free_nilpotent(alpha: &Matrix, n: u32) -> bool {
    alpha.rank() + alpha.pow(n - 1).rank() == alpha.rows()
}

/// Whether M restricted along t ↦ u(T) is free over k[t]/(t^p).
pub fn is_free_over_cyclic(module: &ModuleRep, u: &MPoly) -> Result<bool, VarietyError> {
    if !module.ring().is_elementary_abelian() {
        return Err(VarietyError::NotElementaryAbelian);
    }
    if u.constant_term() != 0 {
        return Err(VarietyError::NonzeroConstantTerm);
    }
    let alpha = evaluate_poly_at_operators(u, module.operators())?;
    let p = module.field().characteristic();
    debug_assert!(alpha.pow(p).is_zero());
    Ok(is_free_nilpotent(&alpha, p))
}

/// The equivalent characterizations of freeness over k[x]/(x^n) for α
/// with α^n = 0 acting on V.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NilpotentConditions {
    /// αV = Ker α^{n−1}.
    pub image_is_kernel: bool,
    /// α^{n−1}V = Ker α.
    pub socle_is_top: bool,
    /// α^iV = Ker α^{n−i} for 0 ≤ i ≤ n.
    pub tower: bool,
    /// rank α + rank α^{n−1} = dim V.
    pub rank_count: bool,
}

impl NilpotentConditions {
    pub fn agree(&self) -> bool {
        let all = [self.image_is_kernel, self.socle_is_top, self.tower, self.rank_count];
        all.iter().all(|&b| b == all[0])
    }
}

pub fn nilpotent_conditions(alpha: &Matrix, n: u32) -> Result<NilpotentConditions, VarietyError> {
    if n == 0 || !alpha.pow(n).is_zero() {
        return Err(VarietyError::NotNilpotent(n));
    }
    let image_eq_kernel = |i: u32| -> Result<bool, VarietyError> {
        Ok(subspace_equal(&alpha.pow(i).image_basis(), &alpha.pow(n - i).kernel_basis())?)
    };
    let mut tower = true;
    for i in 0..=n {
        tower &= image_eq_kernel(i)?;
    }
    Ok(NilpotentConditions {
        image_is_kernel: image_eq_kernel(1.min(n))?,
        socle_is_top: image_eq_kernel(n - 1)?,
        tower,
        rank_count: is_free_nilpotent(alpha, n),
    })
}

pub fn nilpotent_conditions_agree(alpha: &Matrix, n: u32) -> Result<bool, VarietyError> {
    Ok(nilpotent_conditions(alpha, n)?.agree())
}

/// How membership in the support set is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Stable homology of the resolution over P/(f_a).
    Homology,
    /// Rank of C(M) evaluated at the point.
    Rank,
    Both,
}

/// Membership of one point with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub point: Vec<u32>,
    pub member: bool,
    /// (β_d, β_{d+1}) over P/(f_a).
    pub betti: Option<(usize, usize)>,
    /// (rank C(M)(a), r).
    pub rank: Option<(usize, usize)>,
}

impl PointRecord {
    /// The two methods reached different verdicts.
    pub fn disagreement(&self) -> bool {
        match (self.betti, self.rank) {
            (Some((bd, bd1)), Some((rc, r))) => (bd + bd1 > 0) != (rc < r),
            _ => false,
        }
    }
}

/// Coefficients realizing the point: constants a_q, or the lifting
/// (t₁, 0, …, 0) of the origin.
fn point_coeffs(ring: &RingSpec, point: &[u32]) -> Result<HypersurfaceCoeffs, VarietyError> {
    if ring.num_relations() == 0 {
        return Err(ResolutionError::ZeroHypersurface.into());
    }
    if point.iter().all(|&a| a == 0) {
        let pr = PolyRing::t_ring(ring.field(), ring.num_vars());
        let mut gs = vec![pr.zero(); ring.num_relations()];
        gs[0] = pr.var(0);
        return Ok(HypersurfaceCoeffs::new(ring, gs)?);
    }
    Ok(HypersurfaceCoeffs::from_point(ring, point)?)
}

/// (β_d, β_{d+1}) of M over P/(f) for the given coefficients.
pub fn stable_betti(module: &ModuleRep, coeffs: &HypersurfaceCoeffs) -> Result<(usize, usize), VarietyError> {
    let d = module.ring().num_vars();
    let h = hypersurface_complex(module, coeffs, d + 2)?.homology_dims();
    Ok((h[d], h[d + 1]))
}

/// The closed-form C(M)(a): A and B with t ↦ T and s ↦ a.
fn closed_form_rank(module: &ModuleRep, point: &[u32]) -> Result<(usize, usize), VarietyError> {
    let ring = module.ring();
    let ex = resolutions::example_matrices(ring)?;
    let m = module.dim();
    let field = module.field();
    let mut ops: Vec<Matrix> = module.operators().to_vec();
    ops.extend(point.iter().map(|&a| Matrix::scalar(field, m, a)));
    let eval = |grid: &[Vec<MPoly>]| -> Result<Matrix, VarietyError> {
        let cols = grid.first().map_or(0, Vec::len);
        let mut out = Matrix::zeros(field, grid.len() * m, cols * m);
        for (i, row) in grid.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    out.put_block(i * m, j * m, &evaluate_poly_at_operators(e, &ops)?, 1);
                }
            }
        }
        Ok(out)
    };
    let (a, b) = (eval(&ex.a)?, eval(&ex.b)?);
    let r = m << (ring.num_vars() - 1);
    Ok((a.rank() + b.rank(), r))
}

/// Membership of `point` ∈ k^c in the support set of M. The origin is a
/// member exactly when M ≠ 0; its evidence uses the lifting (t₁, 0, …, 0)
/// for homology and s = 0 for the rank.
pub fn support_membership(module: &ModuleRep, point: &[u32], method: Method) -> Result<PointRecord, VarietyError> {
    validate_module(module).map_err(VarietyError::InvalidModule)?;
    let ring = module.ring();
    if point.len() != ring.num_relations() {
        return Err(VarietyError::PointArity { expected: ring.num_relations(), found: point.len() });
    }
    if let Some(&bad) = point.iter().find(|&&a| module.field().check(a).is_err()) {
        return Err(VarietyError::PointCoordinate(bad));
    }
    if method != Method::Homology && !ring.is_artinian() {
        return Err(VarietyError::RankMethodNeedsArtinian);
    }
    let betti = match method {
        Method::Rank => None,
        _ => Some(stable_betti(module, &point_coeffs(ring, point)?)?),
    };
    let rank = match method {
        Method::Homology => None,
        _ => Some(closed_form_rank(module, point)?),
    };
    let member = if point.iter().all(|&a| a == 0) {
        module.dim() > 0
    } else if let Some((bd, bd1)) = betti {
        bd + bd1 > 0
    } else {
        let (rc, r) = rank.expect("rank evidence present");
        rc < r
    };
    Ok(PointRecord { point: point.to_vec(), member, betti, rank })
}

/// The i-th point of F_q^n with the first coordinate most significant.
pub fn point_at(index: u64, q: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = (rest % q as u64) as u32;
        rest /= q as u64;
    }
    out
}

fn check_bound(q: u32, n: usize, bound: u64) -> Result<u64, VarietyError> {
    let points = (q as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if points > bound {
        return Err(VarietyError::BoundExceeded { points, bound });
    }
    Ok(points)
}

/// M over the field of order q: unchanged if it already lives there,
/// otherwise extended from its prime field.
pub fn module_over_order(module: &ModuleRep, q: u64) -> Result<ModuleRep, VarietyError> {
    let field = module.field();
    if field.order() as u64 == q {
        return Ok(module.clone());
    }
    let p = field.characteristic() as u64;
    let mut e = 0;
    let mut acc = 1u64;
    while acc < q {
        acc *= p;
        e += 1;
    }
    if acc != q || !field.is_prime_field() {
        return Err(VarietyError::FieldOrder(q));
    }
    Ok(module.extend_scalars(&Field::galois(p as u32, e)?)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportReport {
    pub field_order: u32,
    pub num_relations: usize,
    pub stable_rank: usize,
    pub points: Vec<PointRecord>,
}

impl SupportReport {
    pub fn member_count(&self) -> usize {
        self.points.iter().filter(|p| p.member).count()
    }

    pub fn members(&self) -> Vec<Vec<u32>> {
        self.points.iter().filter(|p| p.member).map(|p| p.point.clone()).collect()
    }

    pub fn disagreements(&self) -> Vec<Vec<u32>> {
        self.points.iter().filter(|p| p.disagreement()).map(|p| p.point.clone()).collect()
    }
}

/// Membership at every point of F_q^c, evaluated in parallel and reported
/// in point order.
pub fn support_enumerate(module: &ModuleRep, q: u64, method: Method, bound: u64) -> Result<SupportReport, VarietyError> {
    let c = module.ring().num_relations();
    let big = module_over_order(module, q)?;
    let q = big.field().order();
    let total = check_bound(q, c, bound)?;
    let points = (0..total)
        .into_par_iter()
        .map(|i| support_membership(&big, &point_at(i, q, c), method))
        .collect::<Result<Vec<_>, _>>()?;
    let stable_rank = big.dim() << (big.ring().num_vars() - 1);
    Ok(SupportReport { field_order: q, num_relations: c, stable_rank, points })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub field_order: u32,
    /// (point, free) in point order.
    pub points: Vec<(Vec<u32>, bool)>,
}

impl RankReport {
    pub fn non_free(&self) -> Vec<Vec<u32>> {
        self.points.iter().filter(|(_, free)| !free).map(|(p, _)| p.clone()).collect()
    }

    pub fn non_free_count(&self) -> usize {
        self.points.iter().filter(|(_, free)| !free).count()
    }
}

/// u = Σ a_i t_i.
pub fn linear_form(ring: &PolyRing, point: &[u32]) -> MPoly {
    let mut u = ring.zero();
    for (i, &a) in point.iter().enumerate() {
        u = &u + &ring.var(i).scale(a);
    }
    u
}

/// Points a ∈ F_q^d where M is not free along u = Σ a_i t_i.
pub fn rank_variety_enumerate(module: &ModuleRep, q: u64, bound: u64) -> Result<RankReport, VarietyError> {
    if !module.ring().is_elementary_abelian() {
        return Err(VarietyError::NotElementaryAbelian);
    }
    validate_module(module).map_err(VarietyError::InvalidModule)?;
    let big = module_over_order(module, q)?;
    let q = big.field().order();
    let d = big.ring().num_vars();
    let total = check_bound(q, d, bound)?;
    let pr = PolyRing::t_ring(big.field(), d);
    let points = (0..total)
        .into_par_iter()
        .map(|i| {
            let a = point_at(i, q, d);
            let free = is_free_over_cyclic(&big, &linear_form(&pr, &a))?;
            Ok((a, free))
        })
        .collect::<Result<Vec<_>, VarietyError>>()?;
    Ok(RankReport { field_order: q, points })
}

/// Outcome of comparing the rank variety with the support set through the
/// coordinatewise Frobenius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusComparison {
    pub points_checked: usize,
    /// First a where "not free along Σ a_i t_i" and "a^p in the support set"
    /// differ.
    pub witness: Option<Vec<u32>>,
}

impl FrobeniusComparison {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn frobenius_compare(module: &ModuleRep, q: u64, bound: u64) -> Result<FrobeniusComparison, VarietyError> {
    let ranks = rank_variety_enumerate(module, q, bound)?;
    let big = module_over_order(module, q)?;
    let field = big.field().clone();
    let witnesses: Vec<Option<Vec<u32>>> = ranks
        .points
        .par_iter()
        .map(|(a, free)| {
            let image: Vec<u32> = a.iter().map(|&x| field.frobenius(x)).collect();
            let member = support_membership(&big, &image, Method::Homology)?.member;
            Ok(if member == !free { None } else { Some(a.clone()) })
        })
        .collect::<Result<_, VarietyError>>()?;
    Ok(FrobeniusComparison { points_checked: ranks.points.len(), witness: witnesses.into_iter().flatten().next() })
}

/// Freeness along u and along w agree when u ≡ w modulo 𝔫².
pub fn freeness_invariance_check(module: &ModuleRep, u: &MPoly, w: &MPoly) -> Result<bool, VarietyError> {
    if u.constant_term() != 0 || w.constant_term() != 0 {
        return Err(VarietyError::NonzeroConstantTerm);
    }
    let diff = u - w;
    if diff.min_degree().is_some_and(|deg| deg < 2) {
        return Err(VarietyError::NotCongruent);
    }
    Ok(is_free_over_cyclic(module, u)? == is_free_over_cyclic(module, w)?)
}

/// u^p computed by raising coefficients to the p-th power and multiplying
/// exponents by p.
pub fn frobenius_power(u: &MPoly) -> MPoly {
    let ring = u.ring();
    let field = ring.field();
    let p = field.characteristic();
    let mut out = ring.zero();
    for (exps, c) in u.terms() {
        let e: Vec<u32> = exps.iter().map(|&x| x * p).collect();
        out = &out + &ring.monomial(e, field.pow(c, p as u64));
    }
    out
}

/// Which t_q^p absorbs a monomial t^{pE} when splitting u^p = Σ h_q t_q^p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assignment {
    /// q = min{q : E_q ≥ 1}.
    Lowest,
    /// q = max{q : E_q ≥ 1}.
    Highest,
}

/// (h₁,…,h_d) with u^p = Σ h_q t_q^p.
pub fn decompose_frobenius_power(u: &MPoly, rule: Assignment) -> Result<Vec<MPoly>, VarietyError> {
    if u.constant_term() != 0 {
        return Err(VarietyError::NonzeroConstantTerm);
    }
    let ring = u.ring();
    let p = ring.field().characteristic();
    let mut hs = vec![ring.zero(); ring.nvars()];
    for (exps, c) in frobenius_power(u).terms() {
        let mut positive = exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(q, _)| q);
        let q = match rule {
            Assignment::Lowest => positive.next(),
            Assignment::Highest => positive.next_back(),
        }
        .expect("constant term is zero");
        let mut e = exps.to_vec();
        e[q] -= p;
        hs[q] = &hs[q] + &ring.monomial(e, c);
    }
    Ok(hs)
}

/// Freeness along u next to the stable Betti numbers of M over P/(u^p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatDimCheck {
    pub free: bool,
    pub stable_betti: (usize, usize),
}

impl FlatDimCheck {
    /// Free ⟺ β_d = β_{d+1} = 0.
    pub fn agrees(&self) -> bool {
        self.free == (self.stable_betti == (0, 0))
    }
}

pub fn flatdim_check(module: &ModuleRep, u: &MPoly, rule: Assignment) -> Result<FlatDimCheck, VarietyError> {
    if u.is_zero() {
        return Err(VarietyError::ZeroElement);
    }
    let free = is_free_over_cyclic(module, u)?;
    let hs = decompose_frobenius_power(u, rule)?;
    let coeffs = HypersurfaceCoeffs::new(module.ring(), hs)?;
    let d = module.ring().num_vars();
    let table = betti_over_hypersurface(module, &coeffs, d + 1)?;
    Ok(FlatDimCheck { free, stable_betti: (table.betti[d], table.betti[d + 1]) })
}

pub fn flatdim_equiv_check(module: &ModuleRep, u: &MPoly) -> Result<bool, VarietyError> {
    Ok(flatdim_check(module, u, Assignment::Lowest)?.agrees())
}

/// αV = Ker α^{p−1}, read literally even when α^{p−1} = 0.
pub fn maximal_image(alpha: &Matrix, p: u32) -> Result<bool, VarietyError> {
    if !alpha.pow(p).is_zero() {
        return Err(VarietyError::NotNilpotent(p));
    }
    Ok(subspace_equal(&alpha.image_basis(), &alpha.pow(p - 1).kernel_basis())?)
}

/// Commuting α, β, γ with α^p = β^p = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTriple {
    alpha: Matrix,
    beta: Matrix,
    gamma: Matrix,
    p: u32,
}

impl OperatorTriple {
    pub fn new(alpha: Matrix, beta: Matrix, gamma: Matrix, p: u32) -> Result<Self, VarietyError> {
        crate::linalg::check_commuting(&[alpha.clone(), beta.clone(), gamma.clone()]).map_err(|e| match e {
            LinalgError::NotCommuting(..) => VarietyError::NotCommuting,
            other => VarietyError::Linalg(other),
        })?;
        if !alpha.pow(p).is_zero() || !beta.pow(p).is_zero() {
            return Err(VarietyError::NotNilpotent(p));
        }
        Ok(OperatorTriple { alpha, beta, gamma, p })
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    pub fn beta(&self) -> &Matrix {
        &self.beta
    }

    pub fn gamma(&self) -> &Matrix {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.alpha.rows()
    }
}

/// maximal_image(α) = maximal_image(α + βγ).
///
/// Guaranteed only when γ is nilpotent as well; a scalar γ can cancel the
/// linear part of α (α = T, β = −T, γ = 1 on k[T]/(T^p)).
pub fn operators_theorem_check(triple: &OperatorTriple) -> Result<bool, VarietyError> {
    let shifted = &triple.alpha + &(&triple.beta * &triple.gamma);
    Ok(maximal_image(&triple.alpha, triple.p)? == maximal_image(&shifted, triple.p)?)
}

/// A square matrix δ over k[s] of size 2r with δ² = 0.
#[derive(Clone, Debug)]
pub struct DiffModule {
    delta: UPolyMatrix,
    r: usize,
}

impl DiffModule {
    pub fn new(delta: UPolyMatrix) -> Result<Self, VarietyError> {
        let n = delta.rows();
        if n != delta.cols() || n % 2 == 1 {
            return Err(VarietyError::OddSize(n));
        }
        if !delta.mul(&delta).is_zero() {
            return Err(VarietyError::NotDifferential);
        }
        Ok(DiffModule { delta, r: n / 2 })
    }

    /// [[0, A], [B, 0]].
    pub fn from_pair(a: &UPolyMatrix, b: &UPolyMatrix) -> Result<Self, VarietyError> {
        let r = a.rows();
        let mut delta = UPolyMatrix::zeros(a.field(), 2 * r, 2 * r);
        for i in 0..r {
            for j in 0..r {
                delta.set(i, r + j, a.get(i, j).clone());
                delta.set(r + i, j, b.get(i, j).clone());
            }
        }
        Self::new(delta)
    }

    pub fn delta(&self) -> &UPolyMatrix {
        &self.delta
    }

    pub fn half_size(&self) -> usize {
        self.r
    }
}

/// Generator of ann(Ker δ / Im δ) (zero when a free summand survives)
/// beside the gcd of the r×r minors of δ, both monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalCheck {
    pub annihilator: UPoly,
    pub minors_gcd: UPoly,
    pub annihilator_radical: UPoly,
    pub minors_radical: UPoly,
}

impl RadicalCheck {
    pub fn agree(&self) -> bool {
        self.annihilator_radical == self.minors_radical
    }
}

fn radical(a: &UPoly) -> Result<UPoly, VarietyError> {
    if a.is_zero() {
        return Ok(a.clone());
    }
    Ok(squarefree_part(a)?)
}

/// Annihilator of the homology of δ via Smith normal forms.
pub fn homology_annihilator(delta: &UPolyMatrix) -> UPoly {
    let field = delta.field().clone();
    let n = delta.cols();
    let form = smith_normal_form(delta);
    let rho = form.rank();
    let free_rank = n - rho;
    if free_rank == 0 {
        return UPoly::one(&field);
    }
    // δ = U D V: Ker δ is spanned by columns ρ.. of V⁻¹, and Vδ expresses
    // the image in those coordinates (its first ρ rows vanish as δ² = 0).
    let coords = form.v.mul(delta);
    let rows: Vec<usize> = (rho..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    let image = coords.submatrix(&rows, &cols);
    let h = smith_normal_form(&image);
    if h.rank() < free_rank {
        return UPoly::zero(&field);
    }
    h.invariant_factors.iter().rfind(|d| !d.is_zero()).map_or_else(|| UPoly::one(&field), UPoly::monic)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all k×k minors, monic (zero if all vanish).
pub fn minors_gcd(m: &UPolyMatrix, k: usize) -> UPoly {
    let rows = k_subsets(m.rows(), k);
    let cols = k_subsets(m.cols(), k);
    let dets: Vec<UPoly> = rows.par_iter().flat_map_iter(|r| cols.iter().map(move |c| m.submatrix(r, c).determinant())).collect();
    dets.iter().fold(UPoly::zero(m.field()), |acc, d| upoly_gcd(&acc, d))
}

pub fn dmodule_radical_check(module: &DiffModule) -> Result<RadicalCheck, VarietyError> {
    let annihilator = homology_annihilator(&module.delta);
    let minors = minors_gcd(&module.delta, module.r);
    Ok(RadicalCheck {
        annihilator_radical: radical(&annihilator)?,
        minors_radical: radical(&minors)?,
        annihilator,
        minors_gcd: minors,
    })
}
