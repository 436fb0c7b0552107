use alloc::string::String;

/// Every failure mode of the library. Variants are grouped by how a caller
/// should react: bad input, refused hypotheses, or an internal inconsistency.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    // -- invalid input
    #[error("discriminant {0} is not a negative fundamental discriminant")]
    NonFundamentalDiscriminant(i64),
    #[error("real quadratic fields are not supported (discriminant {0})")]
    RealQuadraticUnsupported(i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("lattice is not integral")]
    NotIntegral,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is degenerate")]
    Degenerate,
    #[error("lattices live over different coefficient rings or ambient spaces")]
    RingMismatch,
    #[error("basis is not closed under multiplication by the ring generator")]
    NotRingModule,
    #[error("lattices differ at primes other than {0}")]
    LatticesDifferAwayFromP(i64),
    #[error("subspace dimension {k} is too large for rank {n} at a non-split prime")]
    KTooLarge { k: usize, n: usize },
    #[error("subspace is not isotropic modulo q")]
    NotIsotropic,
    #[error("{0} is not a prime")]
    NotPrime(i64),

    // -- refused: hypotheses we cannot certify
    #[error("dyadic prime above 2 is not supported here")]
    DyadicUnsupported,
    #[error("bad prime {0}: it divides 2 or the discriminant, or is ramified")]
    BadPrime(i64),
    #[error("no principal generator of norm {0} exists")]
    NoGeneratorFound(i64),
    #[error("traversal prime above {0} is not principal")]
    NonPrincipalTraversalPrime(i64),
    #[error("genus enumeration hypotheses cannot be verified: {0}")]
    HypothesesUnverifiable(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    // -- internal consistency
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
    #[error("lattice is not isometric to any registered class")]
    NotInRegistry,
    #[error("genus is incomplete: a neighbor matched no class")]
    IncompleteGenus,
    #[error("Hecke operators do not commute")]
    NonCommuting,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFundamentalDiscriminant(_) => "non_fundamental_discriminant",
            Error::RealQuadraticUnsupported(_) => "real_quadratic_unsupported",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotIntegral => "not_integral",
            Error::NotPositiveDefinite => "not_positive_definite",
            Error::Degenerate => "degenerate",
            Error::RingMismatch => "ring_mismatch",
            Error::NotRingModule => "not_ring_module",
            Error::LatticesDifferAwayFromP(_) => "lattices_differ_away_from_p",
            Error::KTooLarge { .. } => "k_too_large",
            Error::NotIsotropic => "not_isotropic",
            Error::NotPrime(_) => "not_prime",
            Error::DyadicUnsupported => "dyadic_unsupported",
            Error::BadPrime(_) => "bad_prime",
            Error::NoGeneratorFound(_) => "no_generator_found",
            Error::NonPrincipalTraversalPrime(_) => "non_principal_traversal_prime",
            Error::HypothesesUnverifiable(_) => "hypotheses_unverifiable",
            Error::UnsupportedCase(_) => "unsupported_case",
            Error::VerificationFailed(_) => "verification_failed",
            Error::NotInRegistry => "not_in_registry",
            Error::IncompleteGenus => "incomplete_genus",
            Error::NonCommuting => "non_commuting",
            Error::Overflow => "overflow",
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DyadicUnsupported
            | Error::BadPrime(_)
            | Error::NoGeneratorFound(_)
            | Error::NonPrincipalTraversalPrime(_)
            | Error::HypothesesUnverifiable(_)
            | Error::UnsupportedCase(_) => ErrorKind::Refused,
            Error::VerificationFailed(_)
            | Error::NotInRegistry
            | Error::IncompleteGenus
            | Error::NonCommuting
            | Error::Overflow => ErrorKind::Internal,
            _ => ErrorKind::Invalid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Invalid,
    Refused,
    Internal,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
