//! Condensed detachment proofs as D-terms.

pub mod bank;
pub mod calc;
pub mod compact;
pub mod dterm;
pub mod error;
pub mod fixtures;
pub mod formula;
pub mod lemmas;
pub mod organic;
pub mod position;
pub mod proof_file;
pub mod properties;
pub mod reduction;
pub mod search;
pub mod subst;
pub mod table;

pub use dterm::{DTerm, PrimSym};
pub use error::{Error, NotUnifiable, ParseError, Result};
pub use formula::{Formula, VarId};
pub use position::Position;
pub use subst::Substitution;
