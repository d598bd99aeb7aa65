//! Simulation of symmetric-subspace measurement protocols on Dicke states.
//!
//! States live in the symmetric subspace and are stored as `n + 1`
//! Dicke-basis amplitudes ([`SymmetricState`]). Two single-step protocols
//! act on them: Protocol 1 measures one qubit out after a gate and a
//! symmetry test, Protocol 2 appends a fresh qubit and tests symmetry.
//! Their success branches are the ladder-type operators `P1` and `P2` of
//! [`algebra`], whose compositions close onto su(2).
//!
//! ```
//! use dicke::{algebra, DickeIndex, GateParams, SymmetricState};
//!
//! let d21 = SymmetricState::dicke(DickeIndex::new(2, 1).unwrap());
//! let out = algebra::apply_p1(&GateParams::hadamard(), &d21).unwrap();
//! assert_eq!(out.n(), 1);
//! assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
//! ```

pub mod algebra;
mod combinatorics;
pub mod dicke_space;
pub mod error;
mod extended;
pub mod format;
pub mod krawtchouk;
pub mod oracle;
pub mod preparation;
pub mod protocols;
pub mod rng;
pub mod spectral;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dicke-states.md")]
    mod dicke_states {}
    #[doc = include_str!("../../../book/src/protocols.md")]
    mod protocols {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/fixed-points.md")]
    mod fixed_points {}
    #[doc = include_str!("../../../book/src/preparation.md")]
    mod preparation {}
    #[doc = include_str!("../../../book/src/hadamard.md")]
    mod hadamard {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}

pub use algebra::{GateParams, ProtocolOrder, SymmetryCoeffs};
pub use dicke_space::{DickeIndex, SymmetricState};
pub use error::{Error, Result};
pub use krawtchouk::KrawtchoukParams;
pub use rng::ProtocolRng;
pub use spectral::FixedPointBasis;
