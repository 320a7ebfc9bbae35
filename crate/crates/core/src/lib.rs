//! Statistical distance between probabilistic preparations.
//!
//! The crate measures how many finite-sample-distinguishable preparations fit
//! between two orientations of a response law, and shows that this count,
//! scaled by `1/√n`, converges to the angle between the orientations under
//! the `cos²` law. The same quantity appears as the Bhattacharyya angle of
//! the outcome distributions, as the `√I / 2` line element of the Fisher
//! information, and as the angle between rays in Hilbert space.
//!
//! Modules:
//! - [`law`]: response laws `p(θ)`.
//! - [`finite`]: sampling uncertainty, distinguishability and counting.
//! - [`distance`]: quadrature and closed-form distance, Wootters measure,
//!   Fisher information.
//! - [`hilbert`]: pure states, analyzer bases and basis optimization.
//! - [`sim`]: seeded Monte Carlo of yes/no trials and column sheets.
//! - [`channels`]: `cos²` channel banks.
//! - [`cli`]: the `statdist` command-line front end.

pub mod channels;
pub mod cli;
pub mod distance;
pub mod error;
pub mod finite;
pub mod hilbert;
pub mod law;
pub mod quad;
pub mod sim;

pub use error::{Error, Result};
pub use law::{OrientationAngle, ResponseLaw};
pub use num_complex;
