//! Distributed coloring of planar graphs in the LOCAL model.
//!
//! The crate contains a synchronous round simulator ([`engine`]), graph
//! generators, and an O(log n)-round pipeline that 4-colors triangle-free
//! planar graphs and 6-colors planar graphs ([`pipeline`]). Supporting modules
//! cover removable cycles, the edge-charging argument behind the 6-coloring
//! bound, and the lower-bound gadget families.

pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod final_color;
pub mod generators;
pub mod graph;
pub mod io;
pub mod lowerbound;
pub mod partition;
pub mod pipeline;
pub mod preset;
pub mod removable;
pub mod structure;
pub mod sync_color;

pub use error::{Error, Result};
pub use graph::{check_proper, Color, ColorAssignment, Cycle, Graph, Key, VertexId, Violation};
pub use preset::{PartitionParams, Preset};
