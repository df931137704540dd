//! Cochain complexes over ℚ, chain maps, mapping cones, long exact
//! sequences, and spectral sequences of filtered complexes.

mod cochain;
mod cone;
mod spectral;

pub use cochain::{euler_of, sign, ChainMap, CochainComplex};
pub use cone::{long_exact_sequence, mapping_cone, LesNode, LesTerm, LongExactSequence};
pub use spectral::{
    degeneration_check, spectral_sequence, totals, DegenerationReport, FilteredComplex, SpectralSequence,
    SpectralSequencePage,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("a complex needs at least one degree")]
    Empty,
    #[error("expected {expected} maps, found {found}")]
    DifferentialCount { expected: usize, found: usize },
    #[error("map in degree {degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("d∘d is nonzero starting in degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("source degrees {source_range:?} differ from target degrees {target_range:?}")]
    DegreeRangeMismatch {
        source_range: (i64, i64),
        target_range: (i64, i64),
    },
    #[error("map does not commute with the differential in degree {degree}")]
    NotAChainMap { degree: i64 },
    #[error("filtration has no levels")]
    EmptyFiltration,
    #[error("filtration level {level} lists {found} degrees, expected {expected}")]
    FiltrationDegreeCount {
        level: i64,
        expected: usize,
        found: usize,
    },
    #[error("filtration level {level} in degree {degree} has the wrong ambient dimension")]
    FiltrationAmbient { level: i64, degree: i64 },
    #[error("first filtration level is not everything in degree {degree}")]
    NotExhaustive { degree: i64 },
    #[error("filtration level {level} is not contained in the previous level in degree {degree}")]
    NotNested { level: i64, degree: i64 },
    #[error("filtration level {level} is not a subcomplex: d leaves it from degree {degree}")]
    NotSubcomplex { level: i64, degree: i64 },
}
