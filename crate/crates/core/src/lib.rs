pub mod complexes;
pub mod counting;
pub mod error;
pub mod euler;
pub mod expoly;
pub mod io;
pub mod matrix;
pub mod novikov;
pub mod numeric;
pub mod poly;
pub mod sampling;
pub mod scalar;
pub mod suspension;
pub mod tail;
pub mod tolerances;
pub mod torsion;
pub mod weights;
