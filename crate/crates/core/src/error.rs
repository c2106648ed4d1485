use alloc::string::String;
use core::fmt;

/// Errors raised by the simulator, the classical oracle and the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Requested qubit count is zero or above the configured cap.
    Capacity {
        requested: usize,
        cap: usize,
    },
    QubitOutOfRange {
        qubit: usize,
        num_qubits: usize,
    },
    DuplicateQubit(usize),
    /// `‖U†U − I‖_max` exceeded tolerance.
    NonUnitary {
        deviation: f64,
    },
    /// Block unitaries are limited to 12 qubits.
    BlockTooLarge(usize),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Amplitude vector does not have unit norm.
    NotNormalized {
        norm_sqr: f64,
    },
    /// The requested measurement branch has (numerically) zero probability.
    DegenerateBranch {
        probability: f64,
    },
    EmptySubset,
    ZeroShots,
    /// A subset dump was requested across an entangled cut.
    Entangled {
        purity: f64,
    },
    /// Grid resolution M must be a power of two ≥ 2.
    InvalidGrid(usize),
    InvalidDimension(usize),
    EigenIndexOutOfRange {
        index: usize,
        grid: usize,
    },
    GridIndexOutOfRange {
        index: usize,
        grid: usize,
    },
    /// A register C basis state with an all-zero block.
    InvalidEncoding(usize),
    RhsLength {
        expected: usize,
        found: usize,
    },
    ZeroRhs,
    InvalidAlpha(f64),
    /// Dense classical routines are restricted to desk-scale systems.
    SizeGuard {
        size: usize,
        limit: usize,
    },
    InvalidRegisterSize(usize),
    /// Post-selection on the rotation ancilla failed.
    NoSuccess {
        probability: f64,
    },
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capacity { requested, cap } => {
                write!(f, "{requested} qubits requested, capacity is {cap}")
            }
            Error::QubitOutOfRange { qubit, num_qubits } => {
                write!(f, "qubit {qubit} out of range for {num_qubits}-qubit state")
            }
            Error::DuplicateQubit(q) => write!(f, "qubit {q} referenced more than once"),
            Error::NonUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:e})")
            }
            Error::BlockTooLarge(k) => write!(f, "block unitary on {k} qubits exceeds 12"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotNormalized { norm_sqr } => {
                write!(f, "amplitudes are not normalized (norm² = {norm_sqr})")
            }
            Error::DegenerateBranch { probability } => {
                write!(f, "measurement branch has probability {probability:e}")
            }
            Error::EmptySubset => f.write_str("qubit subset is empty"),
            Error::ZeroShots => f.write_str("shot count must be at least 1"),
            Error::Entangled { purity } => {
                write!(f, "subset is entangled with the rest (purity {purity})")
            }
            Error::InvalidGrid(m) => write!(f, "grid size {m} is not a power of two >= 2"),
            Error::InvalidDimension(d) => write!(f, "dimension {d} must be >= 1"),
            Error::EigenIndexOutOfRange { index, grid } => {
                write!(f, "eigen index {index} outside 1..{}", grid - 1)
            }
            Error::GridIndexOutOfRange { index, grid } => {
                write!(f, "grid coordinate {index} outside 1..{}", grid - 1)
            }
            Error::InvalidEncoding(i) => {
                write!(f, "basis state {i} has an all-zero register block")
            }
            Error::RhsLength { expected, found } => {
                write!(f, "right-hand side has {found} entries, expected {expected}")
            }
            Error::ZeroRhs => f.write_str("right-hand side has zero norm"),
            Error::InvalidAlpha(a) => write!(f, "amplitude factor {a} must be positive"),
            Error::SizeGuard { size, limit } => {
                write!(f, "system size {size} exceeds dense limit {limit}")
            }
            Error::InvalidRegisterSize(n) => write!(f, "invalid register size {n}"),
            Error::NoSuccess { probability } => {
                write!(f, "post-selection failed (probability {probability:e})")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
