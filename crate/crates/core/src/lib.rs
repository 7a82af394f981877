//! Kei counting invariants and their kei-module enhancements.
//!
//! The crate covers the whole pipeline from a link diagram to a polynomial
//! invariant:
//!
//! - [`kei`]: finite kei given by operation tables, with axiom checks and the
//!   Takasaki and Alexander families;
//! - [`diagram`]: PD codes and (virtual) braid closures reduced to arcs and
//!   signed crossings;
//! - [`labeling`]: kei labelings of a diagram and the integral counting
//!   invariant;
//! - [`keialg`]: module structures `[T|S]` on `Z_m`, their verification and
//!   enumeration;
//! - [`invariant`]: bead presentation matrices and the enhanced invariant;
//! - [`modarith`]: row reduction, Smith normal form and solution counting
//!   over `Z_m`;
//! - [`cli`]: the `keikit` command-line front end.
//!
//! ```
//! use keikit::diagram::parse_pd;
//! use keikit::kei::takasaki_kei;
//! use keikit::labeling::counting_invariant;
//!
//! let trefoil = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
//! let x = takasaki_kei(3).unwrap();
//! assert_eq!(counting_invariant(&trefoil, &x), 9);
//! ```

pub mod cli;
pub mod diagram;
pub mod invariant;
pub mod kei;
pub mod keialg;
pub mod labeling;
pub mod modarith;

/// Directory of the bundled fixtures shipped with the crate.
pub fn bundled_fixture_dir() -> std::path::PathBuf {
    std::path::PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

// Book chapters compiled as doctests so their snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/kei.md")]
    mod kei {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/labelings.md")]
    mod labelings {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/invariant.md")]
    mod invariant {}
    #[doc = include_str!("../../../book/src/linear_algebra.md")]
    mod linear_algebra {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
