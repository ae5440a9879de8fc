//! Exact computer algebra for jet algebras of finitely presented algebras.
//!
//! The crate is organised bottom-up:
//!
//! - [`polyring`]: coefficient fields, variable tables, sparse polynomials and
//!   truncated power series in a formal parameter `t`.
//! - [`groebner`]: Buchberger bases, normal forms and ideal arithmetic.
//! - [`localmem`]: membership in localized powers of a prime, by ideal
//!   quotients and by the derivation recursion.
//! - [`jets`]: presented algebras, their jet algebras and induced morphisms.
//! - [`taylor`]: thickened quotients, jet fibers and the Taylor morphism.
//! - [`ramify`]: finite group actions and higher ramification filtrations.

pub mod error;
pub mod groebner;
pub mod jets;
pub mod localmem;
pub mod polyring;
pub mod ramify;
pub mod taylor;

pub use error::{CapKind, Error, Result};
pub use polyring::{Config, Field, FieldElement, Monomial, PolyRing, Polynomial, TruncatedSeries};
