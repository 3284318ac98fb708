//! Message sequence charts, weakly synchronous communication and the
//! treewidth and reduction constructions built on them.

pub mod cfm;
pub mod corpus;
pub mod msc;
pub mod graph;
pub mod par;
pub mod reduction;
pub mod text;
pub mod universal;
