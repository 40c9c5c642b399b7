//! File formats, simplicial input, random complexes and DOT output.

pub mod dot;
pub mod format;
pub mod random;
pub mod simplicial;

pub use dot::export_dot;
pub use format::{
    parse_block_map, parse_complex, parse_matching, write_block_map, write_complex, write_maps, write_matching,
};
pub use random::{gen_random, RandomParams};
pub use simplicial::{complex_from_facets, from_simplicial, parse_facets};
