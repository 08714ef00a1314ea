//! Exact arithmetic for equivariant line bundles on the semistable model of the
//! p-adic upper half plane: the Bruhat–Tits tree, order and weight calculus of
//! the bundle generators, Cartier modules at points of the special fiber, the
//! gluing complex computing mod-p cohomology on finite subtrees, and compactly
//! induced mod-p representations with their Hecke operator.

pub mod acceptance;
pub mod arith;
pub mod bt_tree;
pub mod bundles;
pub mod cartier;
pub mod error;
pub mod mod_p_reps;
pub mod special_fiber;

pub use error::{Error, Result};
