use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_rational::BigRational;

use super::IdealError;
use crate::freeseries::{AlgebraElement, Alphabet, Element, Substitution, Word};
use crate::scalar::{Scalar, C64};

/// Generators `t_ij` (i<j) of `𝒯_n` and its homogeneous quadratic relations.
#[derive(Clone, Debug)]
pub struct BraidPresentation {
    n: usize,
    alphabet: Arc<Alphabet>,
    pairs: Vec<(usize, usize)>,
    relations: Vec<AlgebraElement<BigRational>>,
}

pub fn build_presentation(n: usize) -> Result<BraidPresentation, IdealError> {
    if n < 2 {
        return Err(IdealError::TooFewStrands(n));
    }
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            pairs.push((i, j));
        }
    }
    let names: Vec<String> = pairs.iter().map(|&(i, j)| pair_name(n, i, j)).collect();
    let alphabet = Alphabet::new(names)?;
    let mut p = BraidPresentation { n, alphabet, pairs, relations: Vec::new() };

    let id = |p: &BraidPresentation, a: usize, b: usize| p.generator(a, b).expect("valid pair");
    let mut relations = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                // [t_ca + t_cb, t_ab] for each distinguished pair {a,b}
                for (a, b, c) in [(j, k, i), (i, k, j), (i, j, k)] {
                    let left = [id(&p, c, a), id(&p, c, b)];
                    let right = id(&p, a, b);
                    relations.push(commutator_relation(&left, right));
                }
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    for ((a, b), (c, d)) in [((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))] {
                        relations.push(commutator_relation(&[id(&p, a, b)], id(&p, c, d)));
                    }
                }
            }
        }
    }
    p.relations = relations;
    Ok(p)
}

fn pair_name(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("t{i}{j}")
    } else {
        format!("t{i}_{j}")
    }
}

fn commutator_relation(left: &[u8], right: u8) -> AlgebraElement<BigRational> {
    let one = BigRational::from_ratio(1, 1);
    let mut out = AlgebraElement::zero();
    for &l in left {
        out.add_term(Word::from_letters(&[l, right]), one.clone());
        out.add_term(Word::from_letters(&[right, l]), -one.clone());
    }
    out
}

impl BraidPresentation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relations(&self) -> &[AlgebraElement<BigRational>] {
        &self.relations
    }

    /// Strand pair of a generator id.
    pub fn pair(&self, id: u8) -> (usize, usize) {
        self.pairs[id as usize]
    }

    /// Id of `t_ij` with 1-based strands; `(j, i)` names the same generator.
    pub fn generator(&self, i: usize, j: usize) -> Result<u8, IdealError> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        if a == b || a == 0 || b > self.n {
            return Err(IdealError::BadPair(i, j));
        }
        Ok(self.pairs.iter().position(|&p| p == (a, b)).expect("enumerated") as u8)
    }

    /// `t_ij` as a complex algebra element.
    pub fn t(&self, i: usize, j: usize) -> Result<Element, IdealError> {
        Ok(AlgebraElement::generator(self.generator(i, j)?))
    }

    /// Morphism `t_ij ↦ t_{σ(i)σ(j)}`; `sigma[i-1]` is the image of strand `i`.
    pub fn permutation(&self, sigma: &[usize]) -> Result<Substitution<C64>, IdealError> {
        if sigma.len() != self.n {
            return Err(IdealError::BadPair(sigma.len(), self.n));
        }
        let mut out = Substitution::new(self.alphabet.clone(), self.alphabet.clone());
        for (id, &(i, j)) in self.pairs.iter().enumerate() {
            let img = self.generator(sigma[i - 1], sigma[j - 1])?;
            out.set(id as u8, AlgebraElement::generator(img));
        }
        Ok(out)
    }

    /// `Λ = Σ_{i<j} t_ij`, central in `𝒯_n`.
    pub fn total(&self) -> Element {
        AlgebraElement::from_terms((0..self.pairs.len()).map(|i| (Word::letter(i as u8), C64::from_ratio(1, 1))))
    }
}
