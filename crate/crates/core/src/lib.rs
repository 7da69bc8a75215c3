//! Delaunay triangulations with exact predicates, graph dilation, and point
//! sets whose Delaunay triangulation has dilation above `pi / 2`.
//!
//! The guide in `book/` walks through the pieces. Its code blocks are
//! compiled as doc-tests of this crate.

pub mod constructions;
pub mod dilation;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod io;
pub mod numeric;
pub mod svg;
pub mod triangulation;

pub use error::{Error, Result};
pub use geom::{Circle, Point2, PredicateSign};
pub use triangulation::{PointSet, Triangulation};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/predicates.md")]
    mod predicates {}
    #[doc = include_str!("../../../book/src/triangulation.md")]
    mod triangulation {}
    #[doc = include_str!("../../../book/src/dilation.md")]
    mod dilation {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/random.md")]
    mod random {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
