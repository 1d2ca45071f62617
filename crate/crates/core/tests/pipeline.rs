//! End-to-end checks on small modules with known answers.

use hypervar_core::fields::Field;
use hypervar_core::module_rep::{cyclic_module, regular_module, ModuleRep, RingSpec};
use hypervar_core::resolutions::{betti_over_hypersurface, betti_over_p, tensor_formula, HypersurfaceCoeffs};
use hypervar_core::suites::{run_suite, run_trial, trial_seed, Suite, SuiteConfig};
use hypervar_core::varieties::{rank_variety_enumerate, support_enumerate, support_membership, Method};

fn ea(p: u32, d: usize) -> RingSpec {
    RingSpec::elementary_abelian(&Field::prime(p).unwrap(), d).unwrap()
}

#[test]
fn residue_field_betti_over_p_is_binomial() {
    let ring = ea(2, 3);
    let table = betti_over_p(&ModuleRep::residue_field(&ring), 5).unwrap();
    assert_eq!(&table.betti[..5], &[1, 3, 3, 1, 0]);
}

#[test]
fn residue_field_over_hypersurface_grows_then_stabilises() {
    let ring = ea(3, 2);
    let k = ModuleRep::residue_field(&ring);
    let coeffs = HypersurfaceCoeffs::from_point(&ring, &[1, 2]).unwrap();
    let table = betti_over_hypersurface(&k, &coeffs, 8).unwrap();
    // Σ_j β^P_{i−2j}(k) with β^P = (1,2,1)
    assert_eq!(&table.betti[..9], &[1, 2, 2, 2, 2, 2, 2, 2, 2]);
    assert!(table.periodicity_violations().is_empty());
    let tf = tensor_formula(&k, &HypersurfaceCoeffs::parse(&ring, "t1;t2").unwrap(), 8).unwrap();
    assert!(tf.holds());
}

#[test]
fn support_of_line_module_over_f3() {
    let ring = ea(3, 2);
    let m = cyclic_module(&ring, &[vec![1, 0]]).unwrap();
    let report = support_enumerate(&m, 3, Method::Both, 100).unwrap();
    assert!(report.disagreements().is_empty());
    let members = report.members();
    assert_eq!(members, vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
}

#[test]
fn rank_variety_of_regular_module_is_origin_only() {
    let ring = ea(2, 2);
    let r = regular_module(&ring).unwrap();
    let report = rank_variety_enumerate(&r, 4, 100).unwrap();
    assert_eq!(report.non_free(), vec![vec![0, 0]]);
}

#[test]
fn origin_is_always_a_member_of_nonzero_modules() {
    let ring = ea(2, 2);
    let r = regular_module(&ring).unwrap();
    for method in [Method::Homology, Method::Rank, Method::Both] {
        assert!(support_membership(&r, &[0, 0], method).unwrap().member);
    }
}

#[test]
fn suites_replay_single_trials() {
    let cfg = SuiteConfig::new(7, 6).with_primes(&[3]);
    let out = run_suite(Suite::Periodicity, &cfg).unwrap();
    assert!(out.passed());
    let replay: Vec<_> = (0..6).flat_map(|i| run_trial(Suite::Periodicity, 3, trial_seed(7, i)).betti_tables).collect();
    assert_eq!(replay, out.betti_tables);
}

#[test]
fn periodicity_example_from_the_contract() {
    let out = run_suite(Suite::Periodicity, &SuiteConfig::new(1, 25).with_primes(&[2])).unwrap();
    assert!(out.passed(), "{:?}", out.failures);
    assert_eq!(out.periodicity_violations(), 0);
}
