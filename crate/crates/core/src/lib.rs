//! Composite loop agreement tasks.
//!
//! Simplicial complexes and their products and subdivisions, triangle loops,
//! loop agreement tasks with their composition and exhaustive verification
//! of decision maps, abelianized algebraic signatures and the category of
//! tasks with its signature functor.

pub mod complex;
pub mod loops;
pub mod task;
pub mod group;
pub mod category;
pub mod cli;
