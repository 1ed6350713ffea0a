//! Restriction multiplicities from `GL_n` to `GL_{n-1}` for principal series
//! over a non-archimedean field, computed symbolically from Zelevinsky
//! segments.
//!
//! Cuspidal representations live on abstract cuspidal lines; everything is
//! exact rational arithmetic on exponents of `ν = |det|`.

pub mod calculus;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod oracle;
pub mod segment;
pub mod series;

pub use calculus::{
    bz_bound_detail, bz_hom_upper_bound, csupp, derivative_factor, derivative_q, derivative_z,
    euler_poincare_check, jacquet_shadow, product_rule, whittaker_dim, BzBound, CuspidalSupport,
    Derivative, FormalSum, JacquetShadow, JacquetSide, Support, Term, WhittakerDim,
};
pub use error::{Error, Result};
pub use expr::{
    parse_cuspidal, parse_factor, parse_generic, parse_multisegment, parse_segment, parse_series,
    ParseError, ParseErrorKind,
};
pub use geometry::{
    flag_embedding_exists, levi_ss_rank, partition_to_multisegment, segment_partition_count,
    segment_partitions, Partition,
};
pub use oracle::{
    generic_length2_screen, multiplicity, multiplicity_z, nongeneric_quotient_test,
    normalize_common_twist, steinberg_subquotients, xi, AnswerKind, EmbeddingParams,
    MultiplicityAnswer, Provenance, SubquotientDescriptor,
};
pub use segment::{
    centre, is_linked, normalize_multisegment, parse_rational, precedes, Cuspidal, CuspidalLine,
    Multisegment, Rational, Segment, Side,
};
pub use series::{
    bad_pattern, bad_subsequence, commutation_equivalent, cuspidals_linked, is_bad_to,
    is_good_pair, rearrange_good, theta, word_contains_pattern, EndCondition, Factor, GenericRep,
    GoodPairVerdict, MissingStepVariant, PrincipalSeries, RearrangementCase,
    RearrangementCertificate,
};
