//! Wavelet pursuit over the affine group with spline windows.
//!
//! Signals live on a uniform grid of positive frequencies. The search for the
//! largest wavelet coefficient runs on spline sequences, the tensor product of
//! a piecewise-linear window with the signal, which are bisected in time by
//! trigonometric filters and in scale by restriction to slope bands.

pub mod bench;
pub mod dense;
pub mod error;
pub mod filter;
pub mod format;
pub mod pursuit;
pub mod pwl;
pub mod search;
pub mod sequence;
pub mod signal;
pub mod transform;
pub mod vocoder;
pub mod window;

pub use error::{Result, Wp4Error};
pub use pursuit::{matching_pursuit, orthogonal_matching_pursuit, Decomposition, PursuitConfig};
pub use search::{find_atom, search_coefficient, SearchConfig};
pub use sequence::{SlopeBand, SplineSequence};
pub use signal::{FrequencyGrid, FrequencySignal};
pub use transform::{Atom, PhasePoint};
pub use window::SplineWindow;
