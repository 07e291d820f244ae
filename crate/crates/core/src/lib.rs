//! Exact-arithmetic Iwasawa decomposition of special linear matrices over
//! the p-adic numbers and the reals.
//!
//! Everything that can stay rational does: p-adic data is carried as
//! integer valuations, the real case keeps axions and squared dilatons
//! exact and converts to binary64 only for the final square roots.

pub mod error;
pub mod identities;
pub mod io;
pub mod matrix;
pub mod padic;
pub mod pluecker;
pub mod real;
pub mod sample;
pub mod scalar;
pub mod triangular;

pub use error::{Error, Result};
pub use identities::{
    lemma1_check, lemma2_check, speciallemma1_check, telescope_check, IdentityKind,
    IdentityReport,
};
pub use matrix::{epsilon_product, IndexSubset, RatMatrix, SignedPermutation};
pub use padic::{
    apply_family, decompose_padic, dilaton_valuations, verify_membership, FamilyParams,
    MembershipReport, PadicIwasawa,
};
pub use pluecker::{dilaton_norm_unified, place_norm, pluecker, DilatonNorm, PlaceNorm, PlueckerVector};
pub use real::{real_axions_dilatons, real_decompose, RealIwasawa};
pub use scalar::{
    classify_padic, padic_valuation, parse_rational, rational_to_string, PadicClass, Place,
    Rational, Valuation,
};
pub use triangular::{
    find_anti_leading_permutation, find_leading_permutation, lu_decompose, lu_decompose_unpivoted,
    strong_ul_decompose, ul_decompose_unpivoted, LUResult, ULResult,
};
