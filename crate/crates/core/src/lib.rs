pub mod analysis;
pub mod catalog;
pub mod exact;
pub mod hardy;
pub mod hypergraph;
pub mod mmp;
pub mod reproduce;
pub mod search;
pub mod states;
