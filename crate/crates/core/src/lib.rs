pub mod arith;
pub mod json;
pub mod model;
pub mod lattice;
pub mod hull;
pub mod bounds;
pub mod families;
pub mod census;
pub mod oracle;
pub mod random;
pub mod checks;
