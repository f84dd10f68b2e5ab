//! Surnatural numbers in normal form: finite sums of terms
//! `c * w^y * (log w)^z`, with an optional remainder order.

pub mod birthday;
pub mod constant;
mod ops;
mod parse;
mod render;
pub mod series;
pub mod value;

pub use birthday::{dyadic_birthday, Birthday, Day};
pub use constant::{BaseConst, Constant, ExactConst, Exp, Monomial};
pub use parse::parse_surnat;
pub use render::render_key;
pub use value::{Comparison, Exactness, InfSign, Key, SurnatValue, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurnatError {
    #[error("floor undetermined: integer standard part with unknown infinitesimal sign")]
    UndeterminedFloor,
    #[error("value carries infinitesimal terms")]
    InfinitesimalTerms,
    #[error("unsupported expansion: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}
