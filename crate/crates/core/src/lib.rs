//! Counting measures on sets of naturals and their surreal magnitudes.

pub mod counting;
pub mod enclose;
pub mod fenestration;
pub mod funexpr;
pub mod interval;
pub mod magnum;
pub mod setexpr;
pub mod scalar;
pub mod surnat;
pub mod verify;

pub use funexpr::{FnError, FnForm};
pub use counting::{derive_counting, CountingForm};
pub use fenestration::Fenestration;
pub use interval::{Endpoint, Interval};
pub use magnum::{magnum, MagnumError, MagnumResult, RefContext};
pub use setexpr::{canonicalize, Elem, SetError, SetExpr};
pub use scalar::Scalar;
pub use surnat::{parse_surnat, Birthday, Comparison, Day, Exactness, InfSign, SurnatError, SurnatValue};

/// Exact surnatural with rational coefficients.
pub type Surnat = SurnatValue<num_rational::BigRational>;
/// Surnatural with machine-rational coefficients.
pub type SurnatR64 = SurnatValue<num_rational::Ratio<i64>>;
pub type SurnatF64 = SurnatValue<f64>;
pub type SurnatF32 = SurnatValue<f32>;
