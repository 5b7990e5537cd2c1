//! Core data types for 2-edge-colored graphs, {2,3}-hypergraphs and pattern
//! graphs, plus the text/JSON formats and the registry of named graphs.

mod builtins;
mod graph;
mod parse;

pub use builtins::{builtin, builtin_names, named_homs};
pub use graph::{serialize_rat, serialize_rats, 
    binom, density, ClassLabel, Color, ColoredGraph, GraphError, GraphValue, MixedGraph,
    PatternGraph, Rat,
};
pub use parse::{from_json, parse, serialize, to_json, ParseError};
