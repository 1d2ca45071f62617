//! Exact computation of Betti sequences, homological support sets and rank
//! varieties for finite-dimensional modules over truncated polynomial rings
//! k[t₁,…,t_d]/(t₁^{u₁},…,t_c^{u_c}) with k a finite field.

pub mod fields;
pub mod linalg;
pub mod polynomials;
pub mod dg_koszul;
pub mod module_rep;
pub mod resolutions;
pub mod varieties;
pub mod io;
pub mod suites;
