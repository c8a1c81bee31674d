//! Exact evaluation of a numerical regularity criterion for Severi varieties
//! of nodal curves on smooth projective surfaces.
//!
//! Surfaces are modelled by an integer intersection lattice and a canonical
//! class ([`lattice`]). The criterion ([`criterion`]) checks four
//! inequalities on intersection numbers and, when they hold, returns the
//! largest node count `δ` for which the Severi variety `V_{|C|,δ}` is smooth
//! of codimension `δ`. All bounds are decided without floating point
//! ([`exactnum`]). [`families`] specializes to degree-`d` surfaces in P³
//! containing a line, and [`cli`] holds the command-line front end.

pub mod cli;
pub mod criterion;
pub mod exactnum;
pub mod families;
pub mod lattice;

pub use criterion::{delta_max, RegularityReport};
pub use exactnum::{Rational, SurdExpr};
pub use lattice::{DivisorClass, IntersectionLattice, NumericalInvariants, SurfaceModel};
