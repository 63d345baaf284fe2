//! Rate regions for the compound multiple-access channel with a relay
//! (cMACr): two source terminals multicast independent messages to two
//! receivers with the help of a relay that also has a message of its own.
//!
//! The crate provides
//!
//! * exact information measures over small discrete joint distributions
//!   ([`infomeasure`]),
//! * a small algebra of three-dimensional rate regions, both polyhedral and
//!   point-cloud based ([`region`]),
//! * closed-form achievable regions and outer bounds for the Gaussian model
//!   — decode-and-forward, compress-and-forward, and the cut-set style outer
//!   bound — together with the experiment drivers that reproduce the
//!   frontier and symmetric-rate comparisons ([`gaussian`]),
//! * single-letter regions for the discrete memoryless model (cognitiveMAC
//!   variants, decode-and-forward, compress-and-forward, outer bound) and a
//!   randomized search over input distributions ([`dmc`]),
//! * a self-check suite wiring the analytical invariants into one runnable
//!   report ([`verify`]).
//!
//! All rates are in bits per channel use; logarithms are base 2 throughout.

pub mod dmc;
pub mod error;
pub mod gaussian;
pub mod infomeasure;
pub mod region;
pub mod verify;

pub use error::{Error, Result};
