use thiserror::Error;

use crate::complex::{Edge, Triangle};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("instance needs at least 3 cities, got {0}")]
    TooFewCities(usize),
    #[error("non-positive length {length} on edge {{{i},{j}}}")]
    NonPositiveLength { i: usize, j: usize, length: i64 },
    #[error("asymmetric lengths on edge {{{i},{j}}}")]
    Asymmetric { i: usize, j: usize },
    #[error("city index {city} out of range for n={n}")]
    CityOutOfRange { city: usize, n: usize },
    #[error("degenerate simplex: repeated city {0}")]
    RepeatedCity(usize),
    #[error("coordinate {0} exceeds the supported magnitude")]
    CoordinateRange(i64),
    #[error("tsplib: {0}")]
    Tsplib(String),
    #[error("unsupported EDGE_WEIGHT_TYPE {0}")]
    UnsupportedWeightType(String),
    #[error("instance has no coordinates")]
    MissingCoordinates,
    #[error("cocircular points {points:?}: Delaunay triangulation is not unique")]
    Cocircular { points: [usize; 4] },
    #[error("triangle {0} is not a candidate of the complex")]
    NotCandidate(Triangle),
    #[error("edge {0} is not an edge of any candidate triangle")]
    NotComplexEdge(Edge),
    #[error("incidence ({0}, {1}) is not a triangle-edge incidence of the complex")]
    NotIncidence(Triangle, Edge),
    #[error("complex has {complex} cities, instance has {instance}")]
    SizeMismatch { complex: usize, instance: usize },
    #[error("invalid tour: {0}")]
    InvalidTour(String),
    #[error("fan triangles missing from the candidate set: {0:?}")]
    FanNotContained(Vec<Triangle>),
    #[error("boundary is not a Hamiltonian cycle: {0}")]
    NotHamiltonian(String),
    #[error("boundary identity precondition fails: {0}")]
    IdentityPrecondition(String),
    #[error("integer overflow while summing the objective")]
    Overflow,
    #[error("{what} supports {min} <= n <= {max}, got {n}")]
    UnsupportedSize { what: &'static str, n: usize, min: usize, max: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable {0} has no value in the assignment")]
    MissingVariable(String),
    #[error("variable {name} has non-binary value {value}")]
    NonBinary { name: String, value: String },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
