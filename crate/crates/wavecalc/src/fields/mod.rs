//! Field representations: packet parameters, exact closed-form term sums,
//! sampled ray-grid fields, and Cartesian boxes for FFT propagation.

pub mod cartesian;
pub mod closed;
pub mod params;
pub mod ray;
