//! Finite-category engine for lifting properties, model structures and
//! Grothendieck bifibrations whose fibers carry model structures.

pub mod bifib;
pub mod class;
pub mod corpus;
pub mod fincat;
pub mod lifting;
pub mod model;
pub mod quillen;
pub mod reedy;
pub mod verdict;
