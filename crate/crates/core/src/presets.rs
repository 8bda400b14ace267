//! Parameter sets for the two gate regimes and the dressed spectrum.

use crate::drive::{PhysicalParams, PulseSchedule};
use crate::foerster::ForsterCouplings;
use crate::luttinger::{LuttingerParams, TrapFrequencies};

/// Zeeman splitting, Förster couplings and biexcitonic shift of the regime
/// where the shift does most of the work: δ = 1, M = 0.5, V_XX = 2 meV,
/// ε = 0.1.
pub fn biexcitonic_params() -> PhysicalParams {
    PhysicalParams::new(1.0, 0.1, ForsterCouplings::consistent(0.5, 0.5), 2.0)
}

/// Ω₀ = 8 meV, τ_Ω = 3.55 ps, Δ₀ = 4.5 meV, τ_Δ = 2.55 ps.
pub fn biexcitonic_pulse() -> PulseSchedule {
    PulseSchedule::new(8.0, 3.55, 4.5, 2.55)
}

/// As [`biexcitonic_params`] with `V_XX = 0`: the phase comes from Förster
/// transfer alone.
pub fn forster_params() -> PhysicalParams {
    PhysicalParams {
        vxx: 0.0,
        ..biexcitonic_params()
    }
}

/// Ω₀ = 8 meV, τ_Ω = 4.2 ps, Δ₀ = 3 meV, τ_Δ = 3 ps.
pub fn forster_pulse() -> PulseSchedule {
    PulseSchedule::new(8.0, 4.2, 3.0, 3.0)
}

/// Dimensionless spectrum set scaled by `omega`: δ/Ω = 1, M/Ω = 0.5,
/// V_XX/Ω = 2, ε = 0.1.
pub fn spectrum_params(omega: f64) -> PhysicalParams {
    PhysicalParams::new(
        omega,
        0.1,
        ForsterCouplings::consistent(0.5 * omega, 0.5 * omega),
        2.0 * omega,
    )
}

pub fn gaas_luttinger() -> LuttingerParams {
    LuttingerParams::gaas()
}

/// ħω = (10, 11, 45) meV.
pub fn gaas_trap() -> TrapFrequencies {
    TrapFrequencies::anisotropic_dot()
}
