pub mod domain;
pub mod faces;
pub mod flats;
pub mod group;
pub mod io;
pub mod linalg;
pub mod neighborhood;
pub mod optimize;
pub mod projective;
pub mod sampling;
pub mod scalar;
pub mod slice;
pub mod verify;
