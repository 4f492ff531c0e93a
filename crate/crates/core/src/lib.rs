pub mod expr;
pub mod kepler;
pub mod monotone;
pub mod numerics;
pub mod volume;
