//! Construction, verification, and certification of mutually unbiased and
//! quasi-unbiased weighing matrices, through three interchangeable
//! representations: matrix families, antipodal spherical codes with
//! cross-polytope decompositions, and binary/Z4 linear codes or root-lattice
//! 2-frame decompositions. Upper bounds come with exact-arithmetic
//! certificates.
//!
//! All arithmetic is exact (integers, or arbitrary-precision rationals in
//! [`bounds`]); lattices with half-integer roots use doubled coordinates.

pub mod binary;
pub mod bounds;
pub mod cert;
pub mod construct;
pub mod error;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod search;
pub mod spherical;
pub mod z4;

pub use error::{Error, Result};
pub use matrix::{
    derive_muwm, derive_muwm_with_transpose, quasi_unbiased_check, screen_parameters,
    FamilyParams, MatrixFamily, Screening, ScreenRule, WeighingMatrix,
};
pub use spherical::{
    code_to_family, family_to_code, find_decomposition, inner_product_set, muwm_code_conversion,
    muwm_family_to_code, CrossPolytopeDecomposition, InnerProductSet, SphericalCode,
};
