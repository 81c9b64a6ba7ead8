//! Exact combinatorics of symbols for unipotent characters of symplectic and
//! even orthogonal groups, and the symbol relations describing the Howe
//! correspondence for the dual pairs `(Sp_{2n}, O^±_{2n'})`.

pub mod branching;
pub mod cells;
pub mod correspondence;
pub mod derivative;
pub mod error;
pub mod relations;
pub mod scalar;
pub mod special;
pub mod symbol;
pub mod theta;
pub mod uniform;

pub use error::{Error, Result};
pub use special::{enumerate_special, pairing, Entry, Family, Mask, Pair, SpecialSymbol};
pub use symbol::{Bipartition, Row, Symbol};
