//! torsionlab: an exterior-calculus workbench for G2- and SU(3)-structures
//! with skew-symmetric torsion on homogeneous coframes.
//!
//! The crate works entirely at the frame level: a geometry is an orthonormal
//! coframe with declared structure equations ([`frame::FrameAlgebra`]),
//! possibly warped by one parameter. On top of that sit
//!
//! * an exact exterior-algebra kernel ([`form::Form`], [`scalar::Scalar`]),
//! * G2-structures with intrinsic-torsion extraction, module projections and
//!   the full set of closed-form curvature identities ([`g2`]),
//! * SU(3)-structures, the Nijenhuis tensor and Bismut curvature ([`su3`]),
//! * metric connections via Cartan structure equations ([`connection`]),
//! * S¹ reduction and Gibbons–Hawking reconstruction ([`reduction`]),
//! * the SU(2)³ cohomogeneity-one ODE system and invariant flow reductions
//!   ([`coh1`]),
//! * a catalog of explicit homogeneous examples ([`catalog`]) and a
//!   registry of verifiable identities ([`verify`]).
//!
//! Computations on constant-coefficient frames are exact (rational numbers
//! extended by square roots); parametric frames are evaluated through
//! truncated Taylor jets at deterministic sample points.

pub mod catalog;
pub mod cli;
pub mod coh1;
pub mod connection;
pub mod form;
pub mod g2;
pub mod frame;
pub mod linalg;
pub mod parse;
pub mod reduction;
pub mod scalar;
pub mod su3;
pub mod verify;
pub mod tensor;

pub use form::Form;
pub use frame::FrameAlgebra;
pub use scalar::Scalar;
