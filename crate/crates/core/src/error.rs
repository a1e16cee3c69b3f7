use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the numerical pipeline.
///
/// Domain errors (bad input) and numerical diagnostics (poles, failed
/// convergence) share one enum so sweeps can classify a failed point with a
/// single match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// `ka⊥` outside the single-open-channel window `(0, 2)`.
    OutOfBand {
        ka_perp: f64,
    },
    NegativeSeparation {
        a_half_sep: f64,
    },
    NonFinite {
        field: &'static str,
    },
    /// Argument outside the domain of a special function.
    DomainError {
        what: &'static str,
        value: f64,
    },
    /// A truncated series failed to reach the requested tolerance.
    NonConvergence {
        what: &'static str,
        x: f64,
        eps: f64,
    },
    /// The two-center formulas need `a > 0`; use the single-center path.
    SingleCenterInput,
    /// A linear system or amplitude denominator sits on a pole.
    IllConditioned {
        magnitude: f64,
    },
    /// `|f|² + Re f` departed from zero; something upstream is broken.
    UnitarityViolation {
        residual: f64,
    },
    /// Effective 1D coupling diverges: the parameters sit on a resonance.
    AtResonance {
        denominator: f64,
    },
    SingularMatrix {
        magnitude: f64,
    },
    /// `cos(2ka) − 2ka·sin(2ka)` vanishes, so the dual position is undefined.
    DegeneratePrefactor {
        value: f64,
    },
    NotBracketed {
        lo: f64,
        hi: f64,
    },
    /// Two computation routes for the same quantity disagree.
    RouteMismatch {
        what: &'static str,
        relative: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::OutOfBand { ka_perp } => write!(
                f,
                "ka_perp = {ka_perp} is outside the single-open-channel window (0, 2)"
            ),
            Error::NegativeSeparation { a_half_sep } => {
                write!(f, "negative impurity half-separation a = {a_half_sep}")
            }
            Error::NonFinite { field } => write!(f, "{field} is not a finite real number"),
            Error::DomainError { what, value } => {
                write!(f, "{what}: argument {value} outside the domain")
            }
            Error::NonConvergence { what, x, eps } => {
                write!(f, "{what} did not converge at x = {x}, eps = {eps}")
            }
            Error::SingleCenterInput => {
                f.write_str("two-center formula called with a = 0; use the single-center path")
            }
            Error::IllConditioned { magnitude } => {
                write!(f, "ill-conditioned system (|det| = {magnitude:e})")
            }
            Error::UnitarityViolation { residual } => {
                write!(f, "unitarity violated: |f|^2 + Re f = {residual:e}")
            }
            Error::AtResonance { denominator } => write!(
                f,
                "effective coupling diverges (|denominator| = {denominator:e})"
            ),
            Error::SingularMatrix { magnitude } => {
                write!(f, "singular transfer matrix (|M22| = {magnitude:e})")
            }
            Error::DegeneratePrefactor { value } => {
                write!(f, "dual-resonance prefactor vanishes ({value:e})")
            }
            Error::NotBracketed { lo, hi } => {
                write!(f, "no extremum bracketed in [{lo}, {hi}]")
            }
            Error::RouteMismatch { what, relative } => {
                write!(f, "{what}: computation routes disagree (rel. {relative:e})")
            }
        }
    }
}

impl core::error::Error for Error {}
