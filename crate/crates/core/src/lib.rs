//! Exact computation of `#Hom(G, GL_n(F_q))` for finite Abelian p-groups `G`,
//! the p-adic lower bounds on it, and the series/polynomial machinery behind
//! those bounds.
//!
//! Module map:
//! - [`exact`]: rationals, p-adic valuations, Möbius, cyclotomic polynomials.
//! - [`qseries`]: truncated power series, Laurent polynomials in `q`, the
//!   series `f`, `h`, `g` and the polynomial families `C_n`, `P_n`, `R_n`, `Q_n`.
//! - [`groups`]: Abelian p-group descriptors, λ-profiles, irreducible dimensions.
//! - [`nonmodular`]: the generating function `F(G,q;z)`, exact counts and bounds.
//! - [`modular`]: nilpotent matrix counts `a_{n,k}` and the quadratic bound.
//! - [`oracle`]: brute-force enumeration over small finite fields.
//! - [`app`]: verification suites, reports and the CLI.

pub mod app;
pub mod error;
pub mod exact;
pub mod exec;
pub mod groups;
pub mod modular;
pub mod nonmodular;
pub mod oracle;
pub mod qseries;

pub use error::{Error, Result};
pub use exact::{Rational, Valuation};
pub use exec::Exec;
pub use groups::{AbelianPGroup, LambdaProfile};
pub use qseries::{QPolynomial, TruncatedSeries};
