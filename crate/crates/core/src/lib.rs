//! Multimodal interaction scenarios and the episodic knowledge graph built
//! from their annotations.

pub mod convert;
pub mod ekg;
pub mod ids;
pub mod model;
pub mod ns;
pub mod segmentation;
pub mod storage;
