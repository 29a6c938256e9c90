pub mod baseflow;
pub mod cli;
pub mod critical;
pub mod error;
pub mod linalg;
pub mod orr_evp;
pub mod params;
pub mod spectral;
pub mod verify;
