//! Relational semantics for orthologic, fundamental logic and their
//! neighbours: formulas, frames and models, Sorites models, a sequent
//! checker combining rule saturation with countermodel search, and the
//! prime-filter representation of finite lattices.

pub mod dot;
pub mod engine;
pub mod formula;
pub mod frame;
pub mod io;
pub mod lattice;
pub mod semantics;
pub mod sorites;
