//! Physical constants in the crate's unit system (meV, ps, nm).

/// Reduced Planck constant in meV·ps.
pub const HBAR_MEV_PS: f64 = 0.658_211_956_9;

/// e²/(4πε₀) in meV·nm.
pub const COULOMB_MEV_NM: f64 = 1_439.964_5;

/// ħ²/(2m₀) in meV·nm², with m₀ the free electron mass.
pub const HBAR2_OVER_2M0_MEV_NM2: f64 = 38.099_821;
