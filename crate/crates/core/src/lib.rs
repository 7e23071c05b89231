pub mod bigreal;
pub mod error;
pub mod gammawords;
pub mod jacobi;
pub mod report;
pub mod rootkit;
pub mod selberg;
pub mod specialfn;
pub mod spectra;

pub use bigreal::{BigReal, PrecisionContext};
pub use error::{Error, Result};
pub use report::{Residual, VerificationReport};
pub use rootkit::{build_root_system, Family, RootSystem, RootSystemLabel};
pub use gammawords::{word_of_root_system, GammaWord, MembershipVerdict};
