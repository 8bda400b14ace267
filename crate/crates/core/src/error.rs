use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed its validity constraint.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// Heavy and light hole sub-bands are degenerate, so ε is undefined.
    DegenerateSubbands,
    /// A projector was requested onto an empty set of states.
    EmptyProjector,
    /// `dt·E_max/ħ` exceeds the allowed phase per step.
    StepTooLarge {
        dt_ps: f64,
        e_max_mev: f64,
        phase_per_step: f64,
    },
    /// The survival amplitude of a computational state vanished, so its
    /// phase cannot be followed.
    PhaseUndefined {
        state: &'static str,
        time_ps: f64,
        population: f64,
    },
    /// A computational state leaked too much population for a phase gate
    /// to be assembled.
    LeakageTooLarge {
        state: &'static str,
        leakage: f64,
        limit: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::DegenerateSubbands => {
                write!(f, "heavy and light hole sub-bands are degenerate (ΔE_h = 0)")
            }
            Error::EmptyProjector => write!(f, "projector requested onto an empty state set"),
            Error::StepTooLarge {
                dt_ps,
                e_max_mev,
                phase_per_step,
            } => write!(
                f,
                "time step too large: dt = {dt_ps} ps with spectral radius {e_max_mev} meV \
                 gives {phase_per_step} rad per step (limit 0.1)"
            ),
            Error::PhaseUndefined {
                state,
                time_ps,
                population,
            } => write!(
                f,
                "phase of |{state}> undefined at t = {time_ps} ps (survival population {population:e})"
            ),
            Error::LeakageTooLarge {
                state,
                leakage,
                limit,
            } => write!(f, "leakage of |{state}> is {leakage} (limit {limit})"),
        }
    }
}

impl core::error::Error for Error {}
