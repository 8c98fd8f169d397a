//! Tree towers, frontier covers and equicontinuity certificates for minimal
//! sets, plus a contraction diagnostic for measures.

mod certificate;
mod cover;
mod proximal;
mod tower;

pub use certificate::{
    equicontinuity_certificate, equicontinuity_certificate_with, CertificateOptions, DeltaEntry, EmpiricalModulus,
    EquicontinuityCertificate, LevelStatus, Verdict,
};
pub use cover::{
    frontier_cover, verify_cover_equivariance, verify_word_equivariance, EquivarianceFailure, EquivarianceReport,
    EquivarianceWitness, FrontierCover,
};
pub use proximal::{spread, spread_mass, strong_proximality_scan, ProximalStep, ProximalityTrace};
pub use tower::{build_tree_tower, build_tree_tower_with, TowerLevel, TowerOptions, TreeTower};
