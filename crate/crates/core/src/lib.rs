//! Exact arithmetic for checking quantum invariants of rational homology
//! spheres against their perturbative expansion at odd primes.

pub mod cyclotomic;
pub mod error;
pub mod gauss;
pub mod hseries;
pub mod invariants;
pub mod numtheory;
pub mod selftest;
pub mod tcc;
pub mod verify;

pub use cyclotomic::{gauss_element, half_power, quarter_power, CycInt, GaussElement};
pub use error::{Error, Result};
pub use hseries::{congruent_to_order, qpow_series, wedge, HSeries, LaurentSeries};
pub use invariants::{so3_zprime, wrt_z_numeric, SurgeryPresentation};
pub use numtheory::{kappa, legendre, mod_inverse, padic_valuation, remainder_mod, PrimeK, Rational};
pub use tcc::{ohtsuki_series, DTable, OhtsukiSeries};
pub use verify::{check_lawrence, check_ohtsuki, VerificationReport};
