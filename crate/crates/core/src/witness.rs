//! Witness records shared by both engines, the certificate and the verifier.

use crate::countable::Point;
use crate::free_product::Word;

/// A word mapping `xbar[i]` to `ybar[i]` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityWitness {
    pub k: usize,
    pub xbar: Vec<Point>,
    pub ybar: Vec<Point>,
    pub word: Word,
}

/// A point moved by a nontrivial word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaithfulnessWitness {
    pub word: Word,
    pub basepoint: Point,
    pub image: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Transitivity(TransitivityWitness),
    Faithfulness(FaithfulnessWitness),
}

impl Witness {
    pub fn word(&self) -> &Word {
        match self {
            Witness::Transitivity(t) => &t.word,
            Witness::Faithfulness(f) => &f.word,
        }
    }
}
