pub mod eval;
pub mod gen;
pub mod inspect;
pub mod score;
