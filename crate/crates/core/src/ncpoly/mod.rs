//! The free algebra Q<X,Y> with the word-reversal involution.

mod polynomial;
mod text;
mod word;

pub use polynomial::{commutator, rat, s_poly, Polynomial};
pub use word::{Letter, Word};
