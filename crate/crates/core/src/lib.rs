//! Exact-rational computations with truncated completed tensor algebras, group-like
//! expansions of free groups of surfaces with boundary, the Goldman Lie algebra in
//! cyclic-tensor coordinates, Dehn twist logarithms, filtered groupoid algebras and
//! a truncated Johnson homomorphism.

pub mod cli;
pub mod derivation;
pub mod error;
pub mod expansion;
pub mod goldman;
pub mod group;
pub mod lie;
pub mod linalg;
pub mod sac;
pub mod scalar;
pub mod tensor;
pub mod twists;

pub use derivation::{Automorphism, Derivation};
pub use error::{Error, Result};
pub use expansion::{CurveCase, Expansion, ExpansionKind, Filtration};
pub use goldman::{FreeLoop, GoldmanElement, LieMembership};
pub use group::{Alphabet, GroupRingElement, GroupWord, Letter};
pub use sac::{FreeGroupoidSpec, SacAutomorphism, SacDerivation, SacElement};
pub use scalar::Rational;
pub use tensor::{DoubleTensor, Homology, SurfaceSignature, TruncatedTensor, Word};
pub use twists::{MappingClassAction, StandardCurve, TwistOperator};
