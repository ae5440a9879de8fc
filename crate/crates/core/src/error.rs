use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which resource limit was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapKind {
    Pairs(usize),
    Degree(u32),
    GroupOrder(usize),
    Variables(usize),
}

impl fmt::Display for CapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapKind::Pairs(n) => write!(f, "more than {n} S-pairs"),
            CapKind::Degree(d) => write!(f, "total degree above {d}"),
            CapKind::GroupOrder(n) => write!(f, "group closure larger than {n} elements"),
            CapKind::Variables(n) => write!(f, "more than {n} variables"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("truncation bound mismatch: expected {expected}, found {found}")]
    BoundMismatch { expected: usize, found: usize },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(CapKind),
    #[error("characteristic {characteristic} is too small for order {order}")]
    CharTooSmall { characteristic: u32, order: u32 },
    #[error("no invertible Jacobian minor: {0}")]
    NoInvertibleMinor(String),
    #[error("non-maximal site: {0}")]
    NonMaximalSite(String),
    #[error("missing rational point: {0}")]
    MissingRationalPoint(String),
    #[error("invalid site `{site}`: {reason}")]
    InvalidSite { site: String, reason: String },
    #[error("ill-formed morphism: {0}")]
    IllFormedMorphism(String),
    #[error("element `{element}` does not stabilize site `{site}`")]
    NotStabilized { element: String, site: String },
    #[error("membership routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::ResourceCap(_))
    }

    pub fn is_hypothesis(&self) -> bool {
        matches!(self, Error::CharTooSmall { .. })
    }
}
