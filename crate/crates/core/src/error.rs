use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The requested Hilbert space exceeds the configured spin cap.
    Capacity {
        spins: usize,
        max_spins: usize,
    },
    /// Operand dimensions do not fit together.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// An operator that must be Hermitian is not (max-abs deviation given).
    NotHermitian {
        deviation: f64,
    },
    /// The state carries weight `weight` where a normalized state was required.
    NotNormalized {
        weight: f64,
    },
    /// A pure state was required.
    MixedState,
    SiteOutOfRange {
        site: usize,
        n_spins: usize,
    },
    DuplicateSite(usize),
    EmptySiteSet,
    OddSpinCount(usize),
    InvalidPairIndex {
        index: usize,
        n_pairs: usize,
    },
    /// A parameter lies outside its admissible range.
    InvalidParameter {
        name: &'static str,
        value: f64,
    },
    /// The input cannot be processed by the requested operation.
    Degenerate(&'static str),
    /// BBPSSW-type recurrences need `F > 1/2`.
    NoPurificationRegime {
        fidelity: f64,
    },
    /// The target fidelity was not reached within the round cap.
    Unreachable {
        target: f64,
        max_rounds: usize,
    },
    /// The check only applies to Hamiltonians without DM coupling.
    NotApplicable(&'static str),
    /// A time window or grid contains no points.
    EmptyWindow,
    /// Jacobi sweeps did not converge.
    NoConvergence {
        sweeps: usize,
        off_diagonal: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capacity { spins, max_spins } => {
                write!(f, "{spins} spins exceed the configured maximum of {max_spins}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "operator is not Hermitian (max deviation {deviation:e})")
            }
            Error::NotNormalized { weight } => {
                write!(f, "state is not normalized (weight {weight})")
            }
            Error::MixedState => write!(f, "operation requires a pure state"),
            Error::SiteOutOfRange { site, n_spins } => {
                write!(f, "site {site} is outside 1..={n_spins}")
            }
            Error::DuplicateSite(site) => write!(f, "site {site} listed more than once"),
            Error::EmptySiteSet => write!(f, "site set is empty"),
            Error::OddSpinCount(n) => write!(f, "{n} spins cannot be grouped into pairs"),
            Error::InvalidPairIndex { index, n_pairs } => {
                write!(f, "pair index {index} is outside 0..{n_pairs}")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter {name} = {value} is out of range")
            }
            Error::Degenerate(what) => write!(f, "degenerate input: {what}"),
            Error::NoPurificationRegime { fidelity } => {
                write!(f, "fidelity {fidelity} is not above 1/2, nothing to purify")
            }
            Error::Unreachable { target, max_rounds } => {
                write!(f, "fidelity {target} not reached within {max_rounds} rounds")
            }
            Error::NotApplicable(why) => write!(f, "check not applicable: {why}"),
            Error::EmptyWindow => write!(f, "time window contains no points"),
            Error::NoConvergence {
                sweeps,
                off_diagonal,
            } => write!(
                f,
                "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
