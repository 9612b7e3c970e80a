//! Text serialization: the tree format and schemas for the crate's types.

pub mod schema;
pub mod sexpr;

pub use schema::{
    angle_from_node, angle_to_node, measure_from_node, measure_to_node, operator_from_node,
    operator_from_str, operator_to_node, operator_to_string, scalar_from_node, scalar_to_node,
    vector_from_node, vector_from_str, vector_to_node, vector_to_string,
};
pub use sexpr::{parse_document, parse_node, write_document, write_node, Node};
