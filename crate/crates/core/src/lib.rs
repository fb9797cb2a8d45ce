//! Complete-positivity tests for diagonal affine maps on generalized Bloch
//! vectors of qudits, built on the Weyl-Heisenberg (generalized Pauli) basis.

pub mod channel;
pub mod cp;
pub mod error;
pub mod io;
pub mod linalg;
pub mod pauli;
pub mod sdp;
pub mod state;

pub use channel::{apply, choi, kraus_from_choi, validate, AffineChannel, ChoiMatrix, KrausDecomposition};
pub use cp::{check_cp_choi, check_cp_qft, mu_vector, CpReport, Method, Verdict};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use pauli::{PauliIndex, PauliString};
pub use state::{DensityMatrix, GeneralizedBlochVector};
