//! Special functions and quadrature rules for the outage analysis.

mod gamma;
mod hyper;
mod quadrature;

pub use gamma::{beta, binomial, gamma, ln_gamma, rgamma};
pub use hyper::{hyp2f1_half, incomplete_beta_generalized, meijer_g_0110};
pub use quadrature::{
    gauss_hermite, gauss_legendre, integrate, integrate_adaptive, QuadratureRule, RuleKind,
};
