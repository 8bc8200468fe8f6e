//! Classical entanglement in scalar paraxial Gaussian optics.
//!
//! * [`beams`]: closed-form propagation of coherent and Gaussian Schell-model
//!   beams in one and two transverse dimensions.
//! * [`witness`]: the projected-width witness that detects the
//!   non-separability of a rotated elliptic beam from width measurements.
//! * [`family`]: AGSM beams on optical phase space, the TGSM and curvature
//!   subfamilies, physicality and partial-transpose separability.
//! * [`oracle`]: grid-based numerical twins of all of the above.
//! * [`cli`]: the `beamlab` command-line front end.

pub mod beams;
pub mod cli;
mod error;
pub mod extended;
pub mod family;
pub mod oracle;
pub mod witness;

pub use error::ParamError;
pub use extended::{parse_extended, Extended};
