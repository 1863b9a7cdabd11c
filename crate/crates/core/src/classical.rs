//! The operads `T(V)`, `S(V)` and `Λ(V)` on words of basis vectors.
//!
//! `P(m) = V^{⊗(m-1)}`, so an element of arity `m` is a combination of
//! words of length `m - 1`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::laws::{random_lincomb, split_terms, LawRng, Operad};
use crate::tensor::{bilinear, coeff, BasisIndex, Coeff, LinComb};

pub type Word = Vec<BasisIndex>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordElement {
    arity: usize,
    terms: LinComb<Word>,
}

impl WordElement {
    pub fn zero(arity: usize) -> Self {
        assert!(arity >= 1);
        WordElement {
            arity,
            terms: LinComb::zero(),
        }
    }

    /// The unit `1 ∈ P(1)`.
    pub fn unit() -> Self {
        WordElement::from_word(Vec::new())
    }

    pub fn from_word(w: Word) -> Self {
        WordElement {
            arity: w.len() + 1,
            terms: LinComb::monomial(w),
        }
    }

    pub fn from_values(values: &[u8]) -> Self {
        Self::from_word(values.iter().map(|&v| BasisIndex::of(v)).collect())
    }

    pub fn from_terms(arity: usize, terms: LinComb<Word>) -> Result<Self> {
        if let Some(w) = terms.monomials().find(|w| w.len() + 1 != arity) {
            return Err(Error::ShapeMismatch(format!(
                "word of length {} in arity {arity}",
                w.len()
            )));
        }
        Ok(WordElement { arity, terms })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
    pub fn terms(&self) -> &LinComb<Word> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        WordElement {
            arity: self.arity,
            terms: self.terms.scale(c),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ShapeMismatch(format!(
                "cannot add arities {} and {}",
                self.arity, other.arity
            )));
        }
        Ok(WordElement {
            arity: self.arity,
            terms: self.terms.add(&other.terms),
        })
    }
}

fn check_position(i: usize, arity: usize) -> Result<()> {
    if i == 0 || i > arity {
        return Err(Error::BadPosition {
            position: i,
            max: arity,
        });
    }
    Ok(())
}

fn insert_word(x: &Word, i: usize, y: &Word) -> Word {
    let mut out = Vec::with_capacity(x.len() + y.len());
    out.extend_from_slice(&x[..i - 1]);
    out.extend_from_slice(y);
    out.extend_from_slice(&x[i - 1..]);
    out
}

/// Insertion of `y` between letters `i-1` and `i` of `x`.
pub fn tensor_circ(x: &WordElement, i: usize, y: &WordElement) -> Result<WordElement> {
    check_position(i, x.arity)?;
    let terms = bilinear(&x.terms, &y.terms, |a, b| Ok::<_, Error>(insert_word(a, i, b)))?;
    Ok(WordElement {
        arity: x.arity + y.arity - 1,
        terms,
    })
}

/// Sorts a word with the sign of the permutation; `None` if a letter repeats.
pub fn canonical_wedge(w: &Word) -> Option<(Word, bool)> {
    let mut v = w.clone();
    let mut odd = false;
    for a in 1..v.len() {
        let mut b = a;
        while b > 0 && v[b - 1] > v[b] {
            v.swap(b - 1, b);
            odd = !odd;
            b -= 1;
        }
    }
    if v.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((v, odd))
}

/// An element of `Λ(V)`: combinations of strictly increasing words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedWordElement(WordElement);

impl SignedWordElement {
    /// Image of a tensor element in the exterior algebra.
    pub fn from_tensor(x: &WordElement) -> Self {
        let terms = x.terms.map_signed(|w| {
            canonical_wedge(w).map(|(v, odd)| (v, coeff(if odd { -1 } else { 1 })))
        });
        SignedWordElement(WordElement {
            arity: x.arity,
            terms,
        })
    }

    pub fn from_values(values: &[u8]) -> Self {
        Self::from_tensor(&WordElement::from_values(values))
    }

    pub fn unit() -> Self {
        SignedWordElement(WordElement::unit())
    }

    pub fn inner(&self) -> &WordElement {
        &self.0
    }
    pub fn arity(&self) -> usize {
        self.0.arity
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// `x ∘_i y = (-1)^{(n-1)(m-i)} x ∧ y` for `x` of arity `m`, `y` of arity `n`.
pub fn exterior_circ(x: &SignedWordElement, i: usize, y: &SignedWordElement) -> Result<SignedWordElement> {
    exterior_circ_with(x, i, y, true)
}

fn exterior_circ_with(
    x: &SignedWordElement,
    i: usize,
    y: &SignedWordElement,
    signed: bool,
) -> Result<SignedWordElement> {
    let (m, n) = (x.arity(), y.arity());
    check_position(i, m)?;
    let flip = signed && ((n - 1) * (m - i)) % 2 == 1;
    let joined = bilinear(&x.0.terms, &y.0.terms, |a, b| {
        let mut w = a.clone();
        w.extend_from_slice(b);
        Ok::<_, Error>(w)
    })?;
    let joined = WordElement {
        arity: m + n - 1,
        terms: if flip { joined.scale(&coeff(-1)) } else { joined },
    };
    Ok(SignedWordElement::from_tensor(&joined))
}

/// Image of a tensor element in the symmetric algebra.
pub fn symmetrize(x: &WordElement) -> WordElement {
    WordElement {
        arity: x.arity,
        terms: x.terms.map(|w| {
            let mut v = w.clone();
            v.sort();
            v
        }),
    }
}

pub fn symmetric_circ(x: &WordElement, i: usize, y: &WordElement) -> Result<WordElement> {
    Ok(symmetrize(&tensor_circ(x, i, y)?))
}

fn random_word(rng: &mut LawRng, len: usize, d: usize) -> Word {
    (0..len)
        .map(|_| BasisIndex::of(rng.gen_range(1..=d as u8)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct TensorWords {
    pub d: usize,
}

impl Operad for TensorWords {
    type Elem = WordElement;
    fn name(&self) -> String {
        format!("T(V), d={}", self.d)
    }
    fn arity(&self, x: &WordElement) -> usize {
        x.arity
    }
    fn compose(&self, x: &WordElement, i: usize, y: &WordElement) -> Result<WordElement> {
        tensor_circ(x, i, y)
    }
    fn unit(&self) -> WordElement {
        WordElement::unit()
    }
    fn random_element(&self, rng: &mut LawRng, arity: usize) -> WordElement {
        WordElement {
            arity,
            terms: random_lincomb(rng, |r| random_word(r, arity - 1, self.d)),
        }
    }
    fn split(&self, x: &WordElement) -> Vec<WordElement> {
        split_terms(&x.terms)
            .into_iter()
            .map(|terms| WordElement { arity: x.arity, terms })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SymmetricWords {
    pub d: usize,
}

impl Operad for SymmetricWords {
    type Elem = WordElement;
    fn name(&self) -> String {
        format!("S(V), d={}", self.d)
    }
    fn arity(&self, x: &WordElement) -> usize {
        x.arity
    }
    fn compose(&self, x: &WordElement, i: usize, y: &WordElement) -> Result<WordElement> {
        symmetric_circ(x, i, y)
    }
    fn unit(&self) -> WordElement {
        WordElement::unit()
    }
    fn random_element(&self, rng: &mut LawRng, arity: usize) -> WordElement {
        symmetrize(&TensorWords { d: self.d }.random_element(rng, arity))
    }
    fn split(&self, x: &WordElement) -> Vec<WordElement> {
        TensorWords { d: self.d }.split(x)
    }
}

/// `Λ(V)`; with `signed = false` the sign factor is dropped, which breaks
/// law (1) and serves as a control for the checker.
#[derive(Clone, Debug)]
pub struct ExteriorWords {
    pub d: usize,
    pub signed: bool,
}

impl ExteriorWords {
    pub fn new(d: usize) -> Self {
        ExteriorWords { d, signed: true }
    }

    pub fn without_sign(d: usize) -> Self {
        ExteriorWords { d, signed: false }
    }
}

impl Operad for ExteriorWords {
    type Elem = SignedWordElement;
    fn name(&self) -> String {
        if self.signed {
            format!("Λ(V), d={}", self.d)
        } else {
            format!("Λ(V) without sign, d={}", self.d)
        }
    }
    fn arity(&self, x: &SignedWordElement) -> usize {
        x.arity()
    }
    fn compose(&self, x: &SignedWordElement, i: usize, y: &SignedWordElement) -> Result<SignedWordElement> {
        exterior_circ_with(x, i, y, self.signed)
    }
    fn unit(&self) -> SignedWordElement {
        SignedWordElement::unit()
    }
    fn random_element(&self, rng: &mut LawRng, arity: usize) -> SignedWordElement {
        // repetition-free where the length allows, so samples are rarely zero
        let d = self.d;
        let x = WordElement {
            arity,
            terms: random_lincomb(rng, |r| {
                let mut letters: Vec<u8> = (1..=d as u8).collect();
                for a in (1..letters.len()).rev() {
                    letters.swap(a, r.gen_range(0..=a));
                }
                while letters.len() < arity - 1 {
                    letters.push(r.gen_range(1..=d as u8));
                }
                letters
                    .into_iter()
                    .take(arity - 1)
                    .map(BasisIndex::of)
                    .collect()
            }),
        };
        SignedWordElement::from_tensor(&x)
    }
    fn split(&self, x: &SignedWordElement) -> Vec<SignedWordElement> {
        split_terms(&x.0.terms)
            .into_iter()
            .map(|terms| SignedWordElement(WordElement { arity: x.arity(), terms }))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{check_operad_axioms, law_rng, LAW_SEQUENTIAL};
    use proptest::prelude::*;

    #[test]
    fn insertion_instance() {
        let x = WordElement::from_values(&[1, 2]);
        let y = WordElement::from_values(&[3]);
        assert_eq!(tensor_circ(&x, 2, &y).unwrap(), WordElement::from_values(&[1, 3, 2]));
        assert_eq!(tensor_circ(&x, 3, &y).unwrap(), WordElement::from_values(&[1, 2, 3]));
        assert!(matches!(
            tensor_circ(&x, 4, &y),
            Err(Error::BadPosition { position: 4, max: 3 })
        ));
    }

    #[test]
    fn units_and_associativity_instance() {
        let x = WordElement::from_values(&[1, 2]);
        let one = WordElement::unit();
        for i in 1..=3 {
            assert_eq!(tensor_circ(&x, i, &one).unwrap(), x);
        }
        assert_eq!(tensor_circ(&one, 1, &x).unwrap(), x);
        let (e1, e2, e3) = (
            WordElement::from_values(&[1]),
            WordElement::from_values(&[2]),
            WordElement::from_values(&[3]),
        );
        let lhs = tensor_circ(&tensor_circ(&e1, 1, &e2).unwrap(), 1, &e3).unwrap();
        let rhs = tensor_circ(&e1, 1, &tensor_circ(&e2, 1, &e3).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, WordElement::from_values(&[3, 2, 1]));
    }

    #[test]
    fn exterior_instances() {
        let e1 = SignedWordElement::from_values(&[1]);
        let e2 = SignedWordElement::from_values(&[2]);
        let r = exterior_circ(&e1, 1, &e2).unwrap();
        let expected = SignedWordElement::from_values(&[1, 2]);
        assert_eq!(r.inner().terms(), &expected.inner().terms().scale(&coeff(-1)));
        assert!(exterior_circ(&e1, 1, &e1).unwrap().is_zero());
        let one = SignedWordElement::unit();
        let x = SignedWordElement::from_values(&[1, 3]);
        for i in 1..=3 {
            assert_eq!(exterior_circ(&x, i, &one).unwrap(), x);
        }
    }

    #[test]
    fn canonical_wedge_signs() {
        let w: Word = [3, 1, 2].iter().map(|&v| BasisIndex::of(v)).collect();
        let (v, odd) = canonical_wedge(&w).unwrap();
        assert_eq!(v, [1, 2, 3].map(BasisIndex::of).to_vec());
        assert!(!odd);
        let w: Word = [2, 1].iter().map(|&v| BasisIndex::of(v)).collect();
        assert!(canonical_wedge(&w).unwrap().1);
        let w: Word = [2, 1, 2].iter().map(|&v| BasisIndex::of(v)).collect();
        assert!(canonical_wedge(&w).is_none());
    }

    #[test]
    fn axiom_suites_pass() {
        for d in 1..=3 {
            let r = check_operad_axioms(&TensorWords { d }, 150, d as u64);
            assert!(r.passed(), "{r}");
            let r = check_operad_axioms(&ExteriorWords::new(d), 150, d as u64);
            assert!(r.passed(), "{r}");
            let r = check_operad_axioms(&SymmetricWords { d }, 150, d as u64);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn dropping_the_sign_breaks_law_one() {
        let r = check_operad_axioms(&ExteriorWords::without_sign(3), 300, 5);
        let law = r.law(LAW_SEQUENTIAL).unwrap();
        assert!(law.failures > 0, "{r}");
        assert!(law.witness.as_ref().unwrap().contains("i="));
    }

    proptest! {
        #[test]
        fn exterior_factors_through_tensor(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, pick in 0usize..100) {
            let mut rng = law_rng(seed);
            let t = TensorWords { d: 3 };
            let x = t.random_element(&mut rng, m);
            let y = t.random_element(&mut rng, n);
            let i = 1 + pick % m;
            let lhs = SignedWordElement::from_tensor(&tensor_circ(&x, i, &y).unwrap());
            let rhs = exterior_circ(
                &SignedWordElement::from_tensor(&x),
                i,
                &SignedWordElement::from_tensor(&y),
            ).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn symmetric_factors_through_tensor(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, pick in 0usize..100) {
            let mut rng = law_rng(seed);
            let t = TensorWords { d: 3 };
            let x = t.random_element(&mut rng, m);
            let y = t.random_element(&mut rng, n);
            let i = 1 + pick % m;
            let lhs = symmetrize(&tensor_circ(&x, i, &y).unwrap());
            let rhs = symmetric_circ(&symmetrize(&x), i, &symmetrize(&y)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
