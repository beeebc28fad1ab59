//! Decision procedures for odd dihedral Artin groups G(m) = <x, y | x^2 = y^m>.
//!
//! Words are parsed from the grammar `x`, `y`, `X` (= x⁻¹), `Y` (= y⁻¹) with optional
//! caret exponents. Equality goes through [`central_form`], geodesics through
//! [`geodesic`], φ-twisted conjugacy through [`tcp_phi`] and general automorphisms
//! through [`conjugacy::tcp`].

pub mod conjugacy;
mod cyclic;
pub mod normal_form;
pub mod oracle;
pub mod twisted;
pub mod words;

use serde::{Deserialize, Serialize};

pub use conjugacy::{conjugate, find_inner_part, orbit_decidable, scp, tcp, AutomorphismSpec, InnerDecomposition};
pub use normal_form::{
    central_form, classify, garside_normal_form, geodesic, geodesic_length, word_equals, CentralForm, DeltaWord,
    GarsideForm, GeodesicType,
};
pub use twisted::{enumerate_minimal_class, tcp_phi, CycGeoWord, TwistedWitness};
pub use words::{
    apply_phi, chi, concat, format_word, free_reduce, invert, parse_word, rev, Gen, GroupParams, Letter, ParseError,
    Syllable, Word,
};

/// A verdict with an optional certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: bool,
    pub witness: Option<Word>,
}

impl Decision {
    pub fn yes(witness: Word) -> Self {
        Self { verdict: true, witness: Some(witness) }
    }

    pub fn no() -> Self {
        Self { verdict: false, witness: None }
    }
}
