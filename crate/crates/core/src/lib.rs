//! Exact calculus of Hankel determinants, Jacobi continued fractions, and
//! algebraic equation guessing for truncated power series.

pub mod algebraic;
pub mod error;
pub mod expr;
pub mod hankel;
pub mod jfraction;
pub mod modular;
pub mod par;
pub mod ring;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{expand, parse, Generator, SeriesExpr};
pub use ring::{Coeff, Modulus, Ring};
pub use series::Series;
