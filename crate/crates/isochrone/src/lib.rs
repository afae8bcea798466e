//! Numerical toolkit for isochronous potentials: potentials with an
//! energy-independent classical period, built from odd shear functions
//! S(X) with |S| < 1. The crate covers the closed-form families, WKB
//! corrections to the harmonic spectrum, asymptotic (Mellin) expansions,
//! the inverse problem recovering a shear from a prescribed correction,
//! a Sturm-Liouville eigensolver, and the exactly solvable split-harmonic
//! oscillator.

pub mod abel;
pub mod eigen;
pub mod error;
pub mod jet;
pub mod potential;
pub mod quad;
pub mod shear;
pub mod special;
pub mod splitharm;
pub mod wkb;

pub use error::{Error, Result};
