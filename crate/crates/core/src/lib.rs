//! Sign assignments for grid diagrams, the signed grid chain complexes they
//! define over `Z[u_1..u_n, v_1..v_m]`, and their bigraded integer homology.

pub mod catalog;
pub mod complex;
pub mod error;
pub mod gf2;
pub mod grading;
pub mod grid;
pub mod homology;
pub mod rect;
pub mod signs;
pub mod snf;
pub mod state;

pub use catalog::RectCatalog;
pub use complex::{build_complex, d_squared, specialize, BigradedComplex, Monomial, Poly, Version};
pub use error::{Error, Result};
pub use grading::{alexander2, grading, maslov, Grading};
pub use grid::{link_components, parse_grid, GridDiagram, GridFile};
pub use homology::{
    bigraded_homology, compare_signs, compare_true_false, euler_characteristic, Coefficients,
    CompareReport, EulerPolynomial, HomologyEntry, HomologyTable,
};
pub use rect::{compose, empty_rectangles, index2_classes, marking_counts, ClassKind, Domain, EmptyRect};
pub use signs::{Convention, Sign, SignAssignment};
pub use state::{grid_states, GridState, Limits};
