//! Numerical toolkit for the univalent function class U(lambda): normalized maps
//! `f` with `|(z/f)^2 f' - 1| < lambda` on the unit disk.

pub mod bounds;
pub mod catalog;
pub mod error;
pub mod lab;
pub mod limacon;
pub mod map;
pub mod membership;
pub mod optimize;
pub mod quadrature;
pub mod schwarz;
pub mod series;
pub mod spec_file;
pub mod transforms;
pub mod zeros;

pub use error::{Error, Result};
pub use map::{AnalyticMap, Backing, ClassParameter};
pub use num_complex::Complex64;
pub use schwarz::SchwarzGenerator;
pub use series::TruncatedSeries;
