//! Exact combinatorics of 2-edge-colored graphs and {2,3}-hypergraphs:
//! Turán-density classification by homomorphism certificates, exact
//! extremal numbers for forbidden colored patterns at small n, blow-up /
//! product / apex constructions, and blow-up density maximization over the
//! simplex.
//!
//! Start from the runnable examples (`cargo run --example classify_graphs`
//! and friends) or the `turan2c` binary.

pub mod classify;
pub mod extremal;
pub mod hom;
pub mod model;
pub mod nonuniform;
pub mod optimize;

pub use classify::{
    classify, classify_allow_improper, monochromatic_odd_cycle, t1_coloring_auto, two_coloring,
    Certificate, Classification, ClassifyError, DensityClass,
};
pub use extremal::{
    extremal_number, extremal_table, witness_is_valid, ExtremalError, ExtremalOptions,
    ExtremalResult, ExtremalTable, Mode,
};
pub use hom::{
    blow_up, contains_copy, contains_copy_mixed, enumerate_homs, find_hom, product, t1_coloring,
    verify_hom, HomError, HomVerdict, VertexAssignment,
};
pub use model::{
    builtin, builtin_names, density, named_homs, parse, serialize, ClassLabel, Color,
    ColoredGraph, GraphValue, MixedGraph, PatternGraph, Rat,
};
