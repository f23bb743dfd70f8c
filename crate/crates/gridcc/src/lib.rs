//! p-centered colorings of the planar grid with O(p) colors, plus the
//! machinery to check them: exhaustive and randomized violator search,
//! treedepth certificates, structural property checks, and figure output.

pub mod colorings;
pub mod grid;
pub mod render;
pub mod verifier;
