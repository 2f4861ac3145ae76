//! Gap-creating reductions for parameterized maximum likelihood decoding
//! (MLD) over prime fields, with exhaustive oracles that certify each
//! construction at small sizes.
//!
//! Pipeline pieces:
//! - [`field`]: `F_p` arithmetic, elimination, span membership.
//! - [`instances`]: colored/flat MLD, NCP, witnesses and generators.
//! - [`codes`]: codes with large collision number and their exact analysis.
//! - [`gap`]: the bipartite gap construction, duplication, full reduction.
//! - [`amplify`]: composition-based gap amplification.
//! - [`bridges`]: MLD/NCP reductions and the unit-coefficient gadget.
//! - [`oracles`]: exact solvers and gap certification.
//! - [`io`], [`report`]: JSON artifacts and run reports.

pub mod amplify;
pub mod bridges;
pub mod codes;
pub mod error;
pub mod field;
pub mod gap;
pub mod instances;
pub mod io;
pub mod oracles;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
pub use field::{FpMatrix, FpVector, PrimeField};
pub use instances::{ColoredMldInstance, MldInstance, NcpInstance, Pick, Witness};
pub use codes::Code;
pub use io::Artifact;
