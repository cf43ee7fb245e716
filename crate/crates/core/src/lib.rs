//! Finite models for torsors of elliptic curves and their derived
//! equivalences: cyclic pieces of the Weil-Chatelet group, brute-force group
//! cohomology, curves over finite fields and over the reals, congruence-group
//! orbits and split Brauer groups.

pub mod brauer_fibration;
pub mod cohomology;
pub mod elliptic_ff;
pub mod error;
pub mod guards;
pub mod modarith;
pub mod real_curves;
pub mod torsor_model;
pub mod unitary_orbits;

pub use brauer_fibration::{BrauerClass, SplitBrauerModel};
pub use cohomology::{Cocycle, FiniteGroup, GModule, TwistedAction, H1};
pub use elliptic_ff::{PlaneCubic, WeierstrassCurve, WeierstrassReduction};
pub use error::{Error, Result};
pub use guards::Guards;
pub use modarith::{FiniteAbelianGroup, ZModElement};
pub use real_curves::{RationalCurve, RationalPolynomial, RealH1};
pub use torsor_model::{Classification, TorsorClass, WCModel};
pub use unitary_orbits::{CongruenceImage, PairClass, PolarizationModel, SymplecticImage};
