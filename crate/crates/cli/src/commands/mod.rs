pub mod eval;
pub mod normal;
pub mod special;
pub mod spectrum;
pub mod tangent;
