//! Exact algebra behind the Frobenius direct-image stability bounds.
//!
//! Everything in this crate is `no_std` (with `alloc`) and works over a prime
//! field 𝔽ₚ or over exact rationals:
//!
//! - [`fp`]: dense linear algebra over 𝔽ₚ.
//! - [`monomial_box`]: capped multi-index boxes `M^ℓₙ(a)`, the recursive
//!   dominance matching and an independent augmenting-path oracle.
//! - [`trunc_algebra`]: the truncated polynomial algebra `R = K[y]/(yᵢᵖ)` with
//!   the derivation algebra `D` acting on it, and the dimension inequality for
//!   `D`-orbits of subspaces.
//! - [`t_rep`]: truncated symmetric powers `Tˡ(V) ⊂ V^{⊗ℓ}` and their Koszul
//!   resolution by symmetric and exterior powers.
//! - [`filtration`]: the local model of the canonical filtration of
//!   `F*(F_*W)` through α-monomials and the connection ∇.
//! - [`slopes`]: slope, degree and instability formulas in exact rationals.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinat;
mod error;
pub mod filtration;
pub mod fp;
pub mod monomial_box;
pub mod slopes;
pub mod t_rep;
pub mod trunc_algebra;

pub use error::{Error, Result};
pub use fp::{Fp, FpMatrix, Prime};
pub use monomial_box::{Matching, MonomialBox, MultiIndex};
pub use slopes::Rational;
