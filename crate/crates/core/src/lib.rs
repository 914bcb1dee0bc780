//! Ekedahl–Oort classification of 1-truncated Barsotti–Tate groups through
//! their Dieudonné modules, together with the type `C_g` Weyl group
//! combinatorics behind generalized Hasse invariants.
//!
//! Module map:
//!
//! * [`weyl`]: `W(C_g)` inside `S_{2g}`, length, Bruhat order, cosets.
//! * [`parabolic`]: jump sequences and admissible pairs `(w, J)`.
//! * [`hasse`]: Hasse exponents, descendants, vanishing orders, positivity.
//! * [`schubert`]: symplectic flags over `F_p` and Schubert cells.
//! * [`dieudonne`]: Dieudonné modules, canonical filtration, classification.
//! * [`verify`]: exhaustive verification sweeps used by the CLI.

pub mod dieudonne;
pub mod error;
pub mod field;
pub mod hasse;
pub mod linalg;
pub mod parabolic;
pub mod schubert;
pub mod verify;
pub mod weyl;

pub use dieudonne::{CanonicalChain, DieudonneModule, ModuleFile};
pub use error::{Error, Result};
pub use field::{FieldSpec, GaloisField};
pub use hasse::{DescendantKind, DescendantRecord, HasseExponents, WeightVector};
pub use parabolic::{AdmissiblePair, ParabolicDatum};
pub use schubert::{FlagFile, SymplecticFlag, SymplecticSpace};
pub use verify::{Check, CheckReport};
pub use weyl::{Side, SignedPermutation, SubsetJ};
