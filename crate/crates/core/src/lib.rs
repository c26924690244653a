pub mod arith;
pub mod linprog;
pub mod model;
pub mod gauge;
pub mod adjust;
pub mod oracle;
pub mod ascent;
pub mod instance;
pub mod trace;
