//! Nonclassicality witnesses for click-counting detectors.
//!
//! The crate evaluates count and moment matrices for three detection
//! models (photoelectric, multiplexed on-off, multiplexed with a partial
//! intrinsic photon-number resolution), built over integer and half-integer
//! index sets. A negative eigenvalue certifies nonclassical light; integer
//! sets are sensitive to odd photon-number parity, half-integer sets to
//! even parity.
//!
//! ```
//! use clickstat::detectors::{Detector, DetectorConfig};
//! use clickstat::states::{Parity, StateSpec};
//! use clickstat::witnesses::{count_matrix, enumerate_index_sets, MatrixKind};
//!
//! let detector = Detector::new(DetectorConfig::on_off(5, 0.5)).unwrap();
//! let state = StateSpec::cat_real(1.0, Parity::Odd).unwrap();
//! let sets = enumerate_index_sets(detector.config().model, MatrixKind::Counts).unwrap();
//! let report = count_matrix(&state, &detector, &sets[0]).unwrap();
//! assert!(report.is_negative());
//! ```

pub mod detectors;
pub mod error;
pub mod multimode;
pub mod numerics;
pub mod sampler;
pub mod states;
pub mod witnesses;

pub use error::{Error, Result};
pub use numerics::{HalfInt, SymMatrix};
