//! Exact coefficient fields and canonical sparse multivariate polynomials.

mod field;
mod monomial;
mod poly;
mod ring;
mod series;

pub use field::{Field, FieldElement};
pub use monomial::{grevlex_cmp, lex_cmp, Monomial};
pub use poly::Polynomial;
pub use ring::{Config, PolyRing, Variable, VariableTable};
pub use series::TruncatedSeries;
pub(crate) use poly::merge_terms;
