//! Exact intersection calculus on iterated blowups of projective threefolds.
//!
//! The crate models the divisor and curve classes of a smooth projective threefold with
//! exact rational arithmetic, transforms them under blowups at points and along smooth
//! curves, and builds several decision procedures on top: sufficient criteria for the
//! nef-class conditions A and B, dynamical degrees of lattice actions, and the Euler /
//! Picard bookkeeping of a few worked examples.

pub mod blowup;
pub mod cases;
pub mod classes;
pub mod conditions;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod rational;
pub mod ring;
pub mod ruled;

pub use blowup::{BlowupStep, BlowupTower, CurveCenterSpec, SurfaceData};
pub use classes::{CurveClass, DivisorClass};
pub use conditions::{Condition, ConditionVerdict, VerdictStatus};
pub use error::{Error, Result};
pub use rational::Q;
pub use ring::{BaseFlag, BaseSpec, CustomTables, ThreefoldModel};
