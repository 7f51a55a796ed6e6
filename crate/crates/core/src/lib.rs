//! Exact weighted graph homomorphisms, connection matrices, and reconstruction
//! of a weighted target graph from a reflection-positive, rank-bounded
//! parameter.

pub mod algebra;
pub mod canon;
pub mod claims;
pub mod connmat;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod hom;
pub mod params;
pub mod rational;
pub mod reconstruct;
pub mod target;

pub use error::{Error, Result};
pub use graph::{glue, restrict_labels, LabeledGraph, MultiGraph};
pub use rational::Rational;
pub use target::WeightedTarget;
