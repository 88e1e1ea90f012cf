//! Few-weight binary linear codes from defining sets over GF(2^m).
//!
//! Three families of defining sets `D1`, `D2`, `D3` in GF(2^m)* x GF(2^m)
//! give codes `{ (Tr(a x^d y + b x))_(x,y) : a, b }` of dimension `2m` with
//! three or four nonzero weights. The crate builds them, enumerates every
//! codeword and checks the closed-form weight tables, the character sums
//! used to derive them, and the structural claims (projectivity,
//! minimality, Griesmer optimality).
//!
//! ```
//! use fewweight::codes::{weight_distribution, weight_enumerator, DefiningSet, Enumeration, Family};
//! use fewweight::field::Field;
//!
//! let f = Field::new(3)?;
//! let set = DefiningSet::new(Family::D1, &f, 1)?;
//! let w = weight_distribution(&set, &Enumeration::default())?;
//! assert_eq!(weight_enumerator(&w), "1+24z^10+12z^12+24z^14+3z^16");
//! # Ok::<(), fewweight::Error>(())
//! ```

pub mod analysis;
pub mod bits;
pub mod charsum;
pub mod cli;
pub mod codes;
pub mod error;
pub mod field;
pub mod report;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/character-sums.md")]
    mod character_sums {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
