//! Seeded randomized verification suites.
//!
//! Trial `i` of a run with seed `s` draws everything from a ChaCha8 stream
//! seeded by [`trial_seed`]`(s, i)`, so any failure can be replayed alone
//! with [`run_trial`]. Trials run in parallel; results are collected in
//! trial order.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dg_koszul::{self, ExteriorElement, KoszulData, TateElement};
use crate::fields::Field;
use crate::io::module_to_json;
use crate::linalg::{evaluate_poly_at_operators, Matrix};
use crate::module_rep::{cyclic_module, random_module, validate_module, ModuleRep, RingSpec};
use crate::polynomials::{MPoly, PolyRing, UPoly, UPolyMatrix};
use crate::resolutions::{
    betti_over_hypersurface, default_max_degree, example_fidelity, example_matrices, tensor_formula, BettiTable,
    HypersurfaceCoeffs, ResolutionError,
};
use crate::varieties::{
    dmodule_radical_check, flatdim_check, freeness_invariance_check, frobenius_compare, is_free_over_cyclic,
    nilpotent_conditions, operators_theorem_check, stable_betti, support_enumerate, Assignment, DiffModule, Method,
    OperatorTriple,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("trials must be positive")]
    NoTrials,
    #[error("no primes given")]
    NoPrimes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Invariance,
    TensorFormula,
    Periodicity,
    Frobenius,
    FreenessInvariance,
    Flatdim,
    Operators,
    DividedPowers,
    TateIso,
    Dmodule,
    Nilpotent,
    Support,
    Example,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Invariance,
        Suite::TensorFormula,
        Suite::Periodicity,
        Suite::Frobenius,
        Suite::FreenessInvariance,
        Suite::Flatdim,
        Suite::Operators,
        Suite::DividedPowers,
        Suite::TateIso,
        Suite::Dmodule,
        Suite::Nilpotent,
        Suite::Support,
        Suite::Example,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Invariance => "invariance",
            Suite::TensorFormula => "tensor-formula",
            Suite::Periodicity => "periodicity",
            Suite::Frobenius => "frobenius",
            Suite::FreenessInvariance => "freeness-invariance",
            Suite::Flatdim => "flatdim",
            Suite::Operators => "operators",
            Suite::DividedPowers => "divided-powers",
            Suite::TateIso => "tate-iso",
            Suite::Dmodule => "dmodule",
            Suite::Nilpotent => "nilpotent",
            Suite::Support => "support",
            Suite::Example => "example",
        }
    }

    pub fn default_primes(self) -> Vec<u32> {
        match self {
            Suite::Operators => vec![2, 3, 5],
            _ => vec![2, 3],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, SuiteError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// Characteristics cycled through by trial index; suite default if empty.
    pub primes: Vec<u32>,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        SuiteConfig { seed, trials, primes: Vec::new() }
    }

    pub fn with_primes(mut self, primes: &[u32]) -> Self {
        self.primes = primes.to_vec();
        self
    }
}

/// Everything needed to replay a failing trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub prime: u32,
    pub parameters: String,
    pub reason: String,
    /// Canonical JSON of the module involved, if any.
    pub module: Option<String>,
}

#[derive(Clone, Debug)]
pub struct VerificationOutcome {
    pub suite: Suite,
    pub trials: usize,
    pub failures: Vec<Failure>,
    /// Every Betti table over a hypersurface computed during the run.
    pub betti_tables: Vec<BettiTable>,
    /// Support points evaluated by both methods.
    pub points_compared: usize,
    pub disagreements: usize,
    pub elapsed: Duration,
}

impl VerificationOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Tables with some β_{i+2} ≠ β_i in the periodic range.
    pub fn periodicity_violations(&self) -> usize {
        self.betti_tables.iter().filter(|t| !t.periodicity_violations().is_empty()).count()
    }
}

/// Result of a single trial.
#[derive(Clone, Debug, Default)]
pub struct TrialResult {
    pub failure: Option<(String, String, Option<String>)>,
    pub betti_tables: Vec<BettiTable>,
    pub points_compared: usize,
    pub disagreements: usize,
}

impl TrialResult {
    fn fail(&mut self, parameters: String, reason: impl Into<String>, module: Option<&ModuleRep>) {
        if self.failure.is_none() {
            self.failure = Some((parameters, reason.into(), module.map(module_to_json)));
        }
    }
}

/// SplitMix64 of the run seed combined with the trial index.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut z = seed ^ (trial as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<VerificationOutcome, SuiteError> {
    if config.trials == 0 {
        return Err(SuiteError::NoTrials);
    }
    let primes = if config.primes.is_empty() { suite.default_primes() } else { config.primes.clone() };
    let start = Instant::now();
    let results: Vec<(usize, u64, u32, TrialResult)> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(config.seed, i);
            let p = primes[i % primes.len()];
            (i, seed, p, run_trial(suite, p, seed))
        })
        .collect();
    let mut outcome = VerificationOutcome {
        suite,
        trials: config.trials,
        failures: Vec::new(),
        betti_tables: Vec::new(),
        points_compared: 0,
        disagreements: 0,
        elapsed: Duration::ZERO,
    };
    for (trial, seed, prime, r) in results {
        if let Some((parameters, reason, module)) = r.failure {
            outcome.failures.push(Failure { trial, seed, prime, parameters, reason, module });
        }
        outcome.betti_tables.extend(r.betti_tables);
        outcome.points_compared += r.points_compared;
        outcome.disagreements += r.disagreements;
    }
    outcome.elapsed = start.elapsed();
    Ok(outcome)
}

/// Runs one trial of `suite` in characteristic `p` from its own seed.
pub fn run_trial(suite: Suite, p: u32, seed: u64) -> TrialResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TrialResult::default();
    let field = match Field::prime(p) {
        Ok(f) => f,
        Err(e) => {
            out.fail(format!("p={p}"), e.to_string(), None);
            return out;
        }
    };
    let run = match suite {
        Suite::Invariance => invariance_trial(&field, &mut rng, &mut out),
        Suite::TensorFormula => tensor_trial(&field, &mut rng, &mut out),
        Suite::Periodicity => periodicity_trial(&field, &mut rng, &mut out),
        Suite::Frobenius => frobenius_trial(&field, &mut rng, &mut out),
        Suite::FreenessInvariance => freeness_trial(&field, &mut rng, &mut out),
        Suite::Flatdim => flatdim_trial(&field, &mut rng, &mut out),
        Suite::Operators => operators_trial(&field, &mut rng, &mut out),
        Suite::DividedPowers => divided_trial(&field, &mut rng, &mut out),
        Suite::TateIso => tate_trial(&field, &mut rng, &mut out),
        Suite::Dmodule => dmodule_trial(&field, &mut rng, &mut out),
        Suite::Nilpotent => nilpotent_trial(&field, &mut rng, &mut out),
        Suite::Support => support_trial(&field, &mut rng, &mut out),
        Suite::Example => example_trial(&field, &mut rng, &mut out),
    };
    if let Err(e) = run {
        out.fail(format!("p={p}"), format!("error: {e}"), None);
    }
    out
}

type Step = Result<(), Box<dyn std::error::Error + Send + Sync>>;

/// Exponent vectors of total degree in lo..=hi.
fn monomials(nvars: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=hi - used).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| (lo..=hi).contains(&v.iter().sum()));
    out
}

/// Sparse random polynomial with terms of degree in lo..=hi.
fn random_poly(ring: &PolyRing, rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> MPoly {
    let q = ring.field().order();
    let mut g = ring.zero();
    for e in monomials(ring.nvars(), lo, hi) {
        if rng.gen_bool(0.5) {
            g = &g + &ring.monomial(e, rng.gen_range(1..q));
        }
    }
    g
}

/// A nonzero module of dimension at most `max_dim`: a random cokernel, or
/// occasionally a monomial quotient R/J.
fn random_small_module(ring: &RingSpec, rng: &mut ChaCha8Rng, max_dim: usize) -> Result<ModuleRep, ResolutionError> {
    loop {
        let module = if rng.gen_bool(0.2) {
            let gens: Vec<Vec<u32>> = (0..rng.gen_range(1..=2))
                .map(|_| ring.exponents().iter().map(|&u| rng.gen_range(0..u)).collect())
                .collect();
            cyclic_module(ring, &gens).map_err(|_| ResolutionError::NotArtinian)?
        } else {
            let a = rng.gen_range(1..=2);
            let b = rng.gen_range(0..=3);
            random_module(ring, a, b, rng.gen()).map_err(|_| ResolutionError::NotArtinian)?
        };
        if module.dim() > 0 && module.dim() <= max_dim {
            debug_assert!(validate_module(&module).is_ok());
            return Ok(module);
        }
    }
}

fn random_coeffs(ring: &RingSpec, rng: &mut ChaCha8Rng, constant: bool) -> HypersurfaceCoeffs {
    let pr = PolyRing::t_ring(ring.field(), ring.num_vars());
    loop {
        let gs = (0..ring.num_relations()).map(|_| random_poly(&pr, rng, if constant { 0 } else { 1 }, 2)).collect();
        if let Ok(c) = HypersurfaceCoeffs::new(ring, gs) {
            return c;
        }
    }
}

fn show(coeffs: &HypersurfaceCoeffs) -> String {
    coeffs.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn ea2(field: &Field) -> RingSpec {
    RingSpec::elementary_abelian(field, 2).expect("valid ring")
}

fn invariance_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let ring = ea2(field);
    let module = random_small_module(&ring, rng, 12)?;
    let g = random_coeffs(&ring, rng, true);
    let pr = g.poly_ring().clone();
    let h = loop {
        let hs: Vec<MPoly> = g.coeffs().iter().map(|gq| gq + &random_poly(&pr, rng, 1, 2)).collect();
        if let Ok(h) = HypersurfaceCoeffs::new(&ring, hs) {
            break h;
        }
    };
    let n = default_max_degree(2);
    let (bg, bh) = (betti_over_hypersurface(&module, &g, n)?, betti_over_hypersurface(&module, &h, n)?);
    if bg.betti != bh.betti {
        let params = format!("g = [{}], h = [{}]", show(&g), show(&h));
        out.fail(params, format!("betti {:?} vs {:?}", bg.betti, bh.betti), Some(&module));
    }
    out.betti_tables.extend([bg, bh]);
    Ok(())
}

fn tensor_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let ring = ea2(field);
    let module = random_small_module(&ring, rng, 12)?;
    let coeffs = random_coeffs(&ring, rng, false);
    let tf = tensor_formula(&module, &coeffs, default_max_degree(2))?;
    if !tf.holds() {
        let reason = format!("predicted {:?}, computed {:?}", tf.predicted, tf.over_hypersurface.betti);
        out.fail(format!("g = [{}]", show(&coeffs)), reason, Some(&module));
    }
    out.betti_tables.push(tf.over_hypersurface);
    Ok(())
}

fn periodicity_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let p = field.characteristic();
    let exps = if rng.gen_bool(0.5) { vec![p, p] } else { vec![2, 3] };
    let ring = RingSpec::new(field, 2, exps)?;
    let module = random_small_module(&ring, rng, 12)?;
    let constant = rng.gen_bool(0.7);
    let coeffs = random_coeffs(&ring, rng, constant);
    let table = betti_over_hypersurface(&module, &coeffs, default_max_degree(2))?;
    let bad = table.periodicity_violations();
    if !bad.is_empty() {
        let params = format!("u = {:?}, g = [{}]", ring.exponents(), show(&coeffs));
        out.fail(params, format!("β_{{i+2}} ≠ β_i at i = {bad:?} in {:?}", table.betti), Some(&module));
    }
    out.betti_tables.push(table);
    Ok(())
}

fn frobenius_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let p = field.characteristic() as u64;
    let ring = ea2(field);
    let module = random_small_module(&ring, rng, 6)?;
    let q = *[p, p * p].choose(rng).expect("nonempty");
    let cmp = frobenius_compare(&module, q, u64::MAX)?;
    if let Some(w) = cmp.witness {
        out.fail(format!("q = {q}"), format!("rank variety and Frobenius image of support differ at {w:?}"), Some(&module));
    }
    Ok(())
}

fn freeness_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let ring = ea2(field);
    let module = random_small_module(&ring, rng, 12)?;
    let pr = PolyRing::t_ring(field, 2);
    let u = &random_poly(&pr, rng, 1, 1) + &random_poly(&pr, rng, 2, 3);
    let w = &u + &random_poly(&pr, rng, 2, 3);
    if !freeness_invariance_check(&module, &u, &w)? {
        out.fail(format!("u = {u}, w = {w}"), "freeness differs", Some(&module));
    }
    Ok(())
}

fn flatdim_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let ring = ea2(field);
    let module = random_small_module(&ring, rng, 12)?;
    let pr = PolyRing::t_ring(field, 2);
    let u = loop {
        let lo = if rng.gen_bool(0.25) { 2 } else { 1 };
        let u = random_poly(&pr, rng, lo, 2);
        if !u.is_zero() {
            break u;
        }
    };
    let low = flatdim_check(&module, &u, Assignment::Lowest)?;
    let high = flatdim_check(&module, &u, Assignment::Highest)?;
    if !low.agrees() {
        out.fail(format!("u = {u}"), format!("free = {}, stable betti {:?}", low.free, low.stable_betti), Some(&module));
    } else if low != high {
        out.fail(format!("u = {u}"), "decomposition of u^p changed the Betti numbers", Some(&module));
    }
    Ok(())
}

fn operators_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let p = field.characteristic();
    let ring = ea2(field);
    let module = random_small_module(&ring, rng, 24)?;
    let pr = PolyRing::t_ring(field, 2);
    let ops = module.operators();
    let alpha_poly = random_poly(&pr, rng, 1, 2);
    let beta_poly = random_poly(&pr, rng, 1, 2);
    // γ ∈ 𝔫: a scalar part can cancel the linear term of α
    let gamma_poly = random_poly(&pr, rng, 1, 2);
    let triple = OperatorTriple::new(
        evaluate_poly_at_operators(&alpha_poly, ops)?,
        evaluate_poly_at_operators(&beta_poly, ops)?,
        evaluate_poly_at_operators(&gamma_poly, ops)?,
        p,
    )?;
    if !operators_theorem_check(&triple)? {
        let params = format!("α = {alpha_poly}, β = {beta_poly}, γ = {gamma_poly}");
        out.fail(params, "maximal image changed under α ↦ α + βγ", Some(&module));
    }
    Ok(())
}

fn random_exterior(ring: &PolyRing, d: usize, degree: u32, rng: &mut ChaCha8Rng) -> ExteriorElement {
    let mut e = ExteriorElement::zero(ring, d);
    for mask in (0u32..1 << d).filter(|m| m.count_ones() == degree) {
        if rng.gen_bool(0.6) {
            let c = random_poly(ring, rng, 0, 2);
            e = e.add(&ExteriorElement::monomial(ring, d, mask, c)).expect("same algebra");
        }
    }
    e
}

fn divided_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let d = rng.gen_range(2..=4);
    let ring = PolyRing::t_ring(field, d);
    let targets = (0..d).map(|i| if rng.gen_bool(0.5) { ring.var(i) } else { random_poly(&ring, rng, 1, 2) }).collect();
    let data = KoszulData::new(targets)?;
    let v = random_exterior(&ring, d, 2, rng);
    let w = random_exterior(&ring, d, 2, rng);
    let failures = dg_koszul::divided_power_identities(&v, &w, &data, 4)?;
    if let Some(first) = failures.first() {
        out.fail(format!("d = {d}, v = {v:?}, w = {w:?}"), format!("identity failed: {first}"), None);
        return Ok(());
    }
    let deg = rng.gen_range(0..=d as u32);
    let a = random_exterior(&ring, d, deg, rng);
    let b = random_exterior(&ring, d, rng.gen_range(0..=d as u32), rng);
    let da = dg_koszul::koszul_boundary(&a, &data)?;
    if !dg_koszul::koszul_boundary(&da, &data)?.is_zero() {
        out.fail(format!("d = {d}, a = {a:?}"), "∂∂ ≠ 0", None);
    }
    let lhs = dg_koszul::koszul_boundary(&a.wedge(&b)?, &data)?;
    let mut second = a.wedge(&dg_koszul::koszul_boundary(&b, &data)?)?;
    if deg % 2 == 1 {
        second = second.neg();
    }
    if lhs != da.wedge(&b)?.add(&second)? {
        out.fail(format!("d = {d}, a = {a:?}, b = {b:?}"), "Leibniz rule fails", None);
    }
    Ok(())
}

fn tate_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let degree = 6;
    let (ring, data, z, d) = if rng.gen_bool(0.5) {
        let d = 3;
        let ring = PolyRing::t_ring(field, d);
        let data = KoszulData::on_variables(&ring, &[0, 1, 2])?;
        let z = dg_koszul::koszul_boundary(&random_exterior(&ring, d, 2, rng), &data)?;
        (ring, data, z, d)
    } else {
        // z = Σ s_q t_q^{u_q−1} x_q, a cycle modulo f̃
        let d = 2;
        let ring = PolyRing::ts_ring(field, d, d);
        let exps: Vec<u32> = (0..d).map(|_| rng.gen_range(2..=3)).collect();
        let mut z = ExteriorElement::zero(&ring, d);
        let mut f = ring.zero();
        for q in 0..d {
            let c = &ring.var(d + q) * &ring.var(q).pow(exps[q] - 1);
            f = &f + &(&c * &ring.var(q));
            z = z.add(&ExteriorElement::monomial(&ring, d, 1 << q, c))?;
        }
        let data = KoszulData::on_variables(&ring, &[0, 1])?.with_modulus(f)?;
        (ring, data, z, d)
    };
    let w = random_exterior(&ring, d, 2, rng);
    let report = dg_koszul::tate_shift_iso(&w, &z, &data, degree)?.verify()?;
    if !report.is_isomorphism() {
        out.fail(format!("d = {d}, z = {z:?}, w = {w:?}"), format!("{report:?}"), None);
        return Ok(());
    }
    for n in 0..=degree {
        for (mask, i) in dg_koszul::tate_basis(d, n) {
            let e = TateElement::basis(&ring, d, mask, i, ring.one());
            let dd = dg_koszul::tate_boundary(&dg_koszul::tate_boundary(&e, &z, &data)?, &z, &data)?;
            if !dd.is_zero() {
                out.fail(format!("d = {d}, z = {z:?}"), format!("∂∂ ≠ 0 on x_S y^({i}), S = {mask:#b}"), None);
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Closed-form δ = [[0, A], [B, 0]] over k[s] along s_q = λ_q s + μ_q.
fn line_differential(module: &ModuleRep, lambda: &[u32], mu: &[u32]) -> Result<UPolyMatrix, ResolutionError> {
    let ring = module.ring();
    let d = ring.num_vars();
    let field = module.field();
    let m = module.dim();
    let ex = example_matrices(ring)?;
    let r = ex.even.len() * m;
    let mut delta = UPolyMatrix::zeros(field, 2 * r, 2 * r);
    let lines: Vec<UPoly> = (0..d).map(|q| UPoly::new(field, vec![mu[q], lambda[q]])).collect();
    let mut place = |grid: &[Vec<MPoly>], r0: usize, c0: usize| -> Result<(), ResolutionError> {
        for (i, row) in grid.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                for (exps, c) in entry.terms() {
                    let mono = ring_monomial_matrix(module, &exps[..d]);
                    let mut sp = UPoly::constant(field, c);
                    for q in 0..d {
                        sp = sp.mul(&lines[q].pow(exps[d + q]));
                    }
                    for a in 0..m {
                        for b in 0..m {
                            let x = mono.get(a, b);
                            if x != 0 {
                                let (rr, cc) = (r0 + i * m + a, c0 + j * m + b);
                                let v = delta.get(rr, cc).add(&sp.scale(x));
                                delta.set(rr, cc, v);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    };
    place(&ex.a, 0, r)?;
    place(&ex.b, r, 0)?;
    Ok(delta)
}

fn ring_monomial_matrix(module: &ModuleRep, exps: &[u32]) -> Matrix {
    let mut acc = Matrix::identity(module.field(), module.dim());
    for (i, &e) in exps.iter().enumerate() {
        acc = &acc * &module.operator(i).pow(e);
    }
    acc
}

/// E = I + c·s^k·e_{ij} and its inverse, i ≠ j.
fn elementary_pair(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> (UPolyMatrix, UPolyMatrix) {
    let i = rng.gen_range(0..n);
    let j = (i + rng.gen_range(1..n)) % n;
    let k = rng.gen_range(0..=1);
    let c = rng.gen_range(1..field.order());
    let mut coeffs = vec![0; k + 1];
    coeffs[k] = c;
    let entry = UPoly::new(field, coeffs);
    let mut e = UPolyMatrix::identity(field, n);
    let mut inv = UPolyMatrix::identity(field, n);
    e.set(i, j, entry.clone());
    inv.set(i, j, entry.neg());
    (e, inv)
}

fn dmodule_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let d = rng.gen_range(1..=2);
    let exps: Vec<u32> = (0..d).map(|_| rng.gen_range(2..=3)).collect();
    let ring = RingSpec::new(field, d, exps)?;
    let max_m = 4 >> (d - 1);
    let module = random_small_module(&ring, rng, max_m)?;
    let p = field.characteristic();
    let lambda: Vec<u32> = loop {
        let l: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        if l.iter().any(|&x| x != 0) {
            break l;
        }
    };
    let mu: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
    let mut delta = line_differential(&module, &lambda, &mu)?;
    let n = delta.rows();
    for _ in 0..2 {
        let (e, inv) = elementary_pair(field, n, rng);
        delta = inv.mul(&delta).mul(&e);
    }
    let check = dmodule_radical_check(&DiffModule::new(delta)?)?;
    if !check.agree() {
        let params = format!("λ = {lambda:?}, μ = {mu:?}");
        let reason = format!("radical of ann H = {}, radical of minors = {}", check.annihilator_radical, check.minors_radical);
        out.fail(params, reason, Some(&module));
    }
    Ok(())
}

/// dim Ker α^j for j = 0..=n by counting vectors of F_p^m.
fn kernel_dims_by_enumeration(alpha: &Matrix, n: u32) -> Vec<usize> {
    let p = alpha.field().order() as u64;
    let m = alpha.rows();
    let powers: Vec<Matrix> = (0..=n).map(|j| alpha.pow(j)).collect();
    let mut counts = vec![0u64; n as usize + 1];
    let mut v = vec![0u32; m];
    for idx in 0..p.pow(m as u32) {
        let mut rest = idx;
        for slot in v.iter_mut() {
            *slot = (rest % p) as u32;
            rest /= p;
        }
        for (j, pw) in powers.iter().enumerate() {
            if pw.apply(&v).iter().all(|&x| x == 0) {
                counts[j] += 1;
            }
        }
    }
    counts.iter().map(|&c| (c as f64).log(p as f64).round() as usize).collect()
}

fn nilpotent_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let max_m = if field.characteristic() == 2 { 8 } else { 6 };
    let n = rng.gen_range(1..=4u32);
    let mut sizes = Vec::new();
    let all_full = rng.gen_bool(0.5);
    while sizes.iter().sum::<u32>() + n <= max_m {
        sizes.push(if all_full { n } else { rng.gen_range(1..=n) });
        if rng.gen_bool(0.3) {
            break;
        }
    }
    let m = sizes.iter().sum::<u32>() as usize;
    let mut jordan = Matrix::zeros(field, m, m);
    let mut start = 0;
    for &s in &sizes {
        for i in 1..s as usize {
            jordan.set(start + i - 1, start + i, 1);
        }
        start += s as usize;
    }
    let (conj, conj_inv) = loop {
        let data: Vec<u32> = (0..m * m).map(|_| rng.gen_range(0..field.order())).collect();
        let c = Matrix::from_vec(field, m, m, data)?;
        if let Some(inv) = c.inverse() {
            break (c, inv);
        }
    };
    let alpha = &(&conj * &jordan) * &conj_inv;
    let cond = nilpotent_conditions(&alpha, n)?;
    let kernels = kernel_dims_by_enumeration(&alpha, n);
    // blocks of size ≥ j number dim Ker α^j − dim Ker α^{j−1}
    let at_least = |j: usize| kernels[j] - kernels[j - 1];
    let oracle_free = m == 0 || at_least(1) == at_least(n as usize);
    let expected_free = sizes.iter().all(|&s| s == n);
    let params = format!("n = {n}, blocks = {sizes:?}");
    if !cond.agree() {
        out.fail(params, format!("conditions disagree: {cond:?}"), None);
    } else if cond.rank_count != oracle_free || oracle_free != expected_free {
        out.fail(params, format!("rank test {} vs enumeration oracle {oracle_free}", cond.rank_count), None);
    }
    Ok(())
}

fn support_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let ring = ea2(field);
    let module = random_small_module(&ring, rng, 8)?;
    let q = field.order() as u64;
    let report = support_enumerate(&module, q, Method::Both, u64::MAX)?;
    out.points_compared += report.points.len();
    let bad = report.disagreements();
    out.disagreements += bad.len();
    if let Some(first) = bad.first() {
        out.fail(format!("q = {q}"), format!("methods disagree at {first:?}"), Some(&module));
        return Ok(());
    }
    let members = report.members();
    for a in &members {
        for lambda in 1..field.order() {
            let scaled: Vec<u32> = a.iter().map(|&x| field.mul(lambda, x)).collect();
            if !members.contains(&scaled) {
                out.fail(format!("q = {q}"), format!("{a:?} is a member but {scaled:?} is not"), Some(&module));
                return Ok(());
            }
        }
    }
    // another lifting of a nonzero point: g_q = a_q + (element of 𝔫)
    let pr = PolyRing::t_ring(field, 2);
    for rec in report.points.iter().filter(|r| r.point.iter().any(|&x| x != 0)) {
        let gs: Vec<MPoly> = rec.point.iter().map(|&a| &pr.constant(a) + &random_poly(&pr, rng, 1, 2)).collect();
        let coeffs = HypersurfaceCoeffs::new(&ring, gs)?;
        let (bd, bd1) = stable_betti(&module, &coeffs)?;
        if (bd + bd1 > 0) != rec.member {
            out.fail(format!("point {:?}, lifting [{}]", rec.point, show(&coeffs)), "membership depends on the lifting", Some(&module));
            return Ok(());
        }
    }
    Ok(())
}

fn example_trial(field: &Field, rng: &mut ChaCha8Rng, out: &mut TrialResult) -> Step {
    let d = rng.gen_range(1..=3);
    let exps: Vec<u32> = (0..d).map(|_| rng.gen_range(2..=3)).collect();
    let ring = RingSpec::new(field, d, exps)?;
    let module = random_small_module(&ring, rng, 6)?;
    let point: Vec<u32> = loop {
        let a: Vec<u32> = (0..d).map(|_| rng.gen_range(0..field.order())).collect();
        if a.iter().any(|&x| x != 0) {
            break a;
        }
    };
    let found = example_fidelity(&module, &point)?;
    if !found.agrees() {
        out.fail(format!("u = {:?}, point = {point:?}", ring.exponents()), format!("{found:?}"), Some(&module));
    }
    Ok(())
}

/// Freeness of M along every nonzero linear form; used by fixtures.
pub fn free_along_all_lines(module: &ModuleRep) -> Result<bool, crate::varieties::VarietyError> {
    let d = module.ring().num_vars();
    let q = module.field().order();
    let pr = PolyRing::t_ring(module.field(), d);
    for i in 1..(q as u64).pow(d as u32) {
        let a = crate::varieties::point_at(i, q, d);
        if !is_free_over_cyclic(module, &crate::varieties::linear_form(&pr, &a))? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("nope".parse::<Suite>(), Err(SuiteError::UnknownSuite("nope".into())));
    }

    #[test]
    fn deterministic_and_small_runs_pass() {
        for suite in Suite::ALL {
            let cfg = SuiteConfig::new(11, 3);
            let a = run_suite(suite, &cfg).unwrap();
            assert!(a.passed(), "{suite}: {:?}", a.failures);
            let b = run_suite(suite, &cfg).unwrap();
            assert_eq!(a.betti_tables, b.betti_tables);
        }
    }

    #[test]
    fn zero_trials_rejected() {
        assert_eq!(run_suite(Suite::Periodicity, &SuiteConfig::new(1, 0)).unwrap_err(), SuiteError::NoTrials);
    }

    #[test]
    fn enumeration_oracle_counts_kernels() {
        let f = Field::prime(2).unwrap();
        let mut j = Matrix::zeros(&f, 3, 3);
        j.set(0, 1, 1);
        j.set(1, 2, 1);
        assert_eq!(kernel_dims_by_enumeration(&j, 3), vec![0, 1, 2, 3]);
    }

    #[test]
    fn regular_module_free_along_lines() {
        let ring = RingSpec::elementary_abelian(&Field::prime(3).unwrap(), 2).unwrap();
        assert!(free_along_all_lines(&crate::module_rep::regular_module(&ring).unwrap()).unwrap());
        assert!(!free_along_all_lines(&ModuleRep::residue_field(&ring)).unwrap());
    }
}
