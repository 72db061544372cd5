//! Design and characterization of spectrally pure photon-pair sources from
//! parametric downconversion.

pub mod characterize;
pub mod dispersion;
pub mod error;
pub mod hom;
pub mod jsa;
pub mod linalg;
pub mod poling;
pub mod schmidt;
pub mod spectral;

pub use characterize::{Model, PurityPoint, SweepResult};
pub use dispersion::{Axis, GroupData, Material, MaterialLibrary, ThreeWave};
pub use error::{Error, Result};
pub use hom::{hom_pattern, HomPattern};
pub use jsa::{
    build_jsa, build_jsa_unnormalized, JointAmplitude, JointIntensity, PhotonAxis, SpectralGrid,
};
pub use linalg::{CMatrix, Matrix, RMatrix};
pub use poling::{AmplitudeProfile, DomainStructure, PolingMethod, QpmConfig};
pub use schmidt::{
    heralded_density, purity, purity_like, schmidt_decompose, DensityMatrix, SchmidtResult,
};
pub use spectral::{PefShape, PmfShape, PmfSpec, PulseSpec};
