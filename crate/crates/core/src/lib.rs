//! Continuous harmonic functions on the unit ball with irregular boundary
//! behaviour: spherical harmonics, lacunary ball series, regularity
//! diagnostics and explicit nonlinear transmission problems.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod field;
pub mod harmonics;
pub mod regularity;
pub mod schedule;
pub mod series;
pub mod special;
pub mod sphere;
pub mod transmission;
pub mod weierstrass;

pub use error::{Error, Result};
pub use field::{Field, FnField};
pub use harmonics::{
    estimate_sup_norm, harmonic_dimension, highest_weight_eval, highest_weight_l2_norm,
    laplace_beltrami_eigenvalue, orthonormal_basis, random_unit_harmonic, zonal_eval,
    HarmonicFunction, HarmonicKind, SupEstimate,
};
pub use regularity::{
    block_increments, classify_sobolev, dirichlet_energy_2d, dyadic_scales, fourier_decay_certificate,
    holder_modulus, holder_modulus_with, sobolev_partial_sum, spectral_coefficients,
    ClassifierSettings, DecayCertificate, DecayVerdict, DegreeEnergies, EnergyMode,
    FourierCoefficients, ModulusTable, SobolevScan, SobolevVerdict, SpectralCoefficients,
};
pub use schedule::{CoefficientSchedule, ScheduleVariant};
pub use series::{
    build_series, check_harmonic_fd, mean_value_check, BallSeries, RadialMap, SeriesValue,
    SeriesVariant, TailBound,
};
pub use sphere::{
    build_annulus_rule, build_sphere_quadrature, sphere_area, unit_ball_volume, AnnulusRule,
    Grading, QuadratureMode, QuadratureRule, RadialRule, SpherePoint,
};
pub use transmission::{
    certify_growth, condition3_check, invert_id_plus_psi, psi, standard_bumps, verify_instance,
    weak_jump_pairing, BumpTestFunction, GrowthCertificate, PairingRules, TransmissionInstance,
    TransmissionVariant, VerificationReport, VerifyTolerances,
};
pub use weierstrass::{circle_lift, holder_bound_constant, AmplitudeLaw, LacunaryCosineSeries};
