use std::collections::btree_map::{self, BTreeMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact coefficient type of all tensor elements.
pub type Coeff = BigRational;

pub fn coeff(v: i64) -> Coeff {
    Coeff::from_integer(v.into())
}

/// A finite formal linear combination of monomials with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<M: Ord> {
    terms: BTreeMap<M, Coeff>,
}

impl<M: Ord> Default for LinComb<M> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<M: Ord + Clone> LinComb<M> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: M) -> Self {
        let mut c = Self::zero();
        c.add_term(m, Coeff::one());
        c
    }

    pub fn add_term(&mut self, m: M, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&M, &Coeff)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &M> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &M) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    /// Applies a monomial map linearly; repeated images have their
    /// coefficients collected.
    pub fn map<N: Ord + Clone>(&self, f: impl Fn(&M) -> N) -> LinComb<N> {
        let mut out = LinComb::zero();
        for (m, c) in self.iter() {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Like [`LinComb::map`], with a sign or scalar attached to each image
    /// (`None` sends the monomial to zero).
    pub fn map_signed<N: Ord + Clone>(&self, f: impl Fn(&M) -> Option<(N, Coeff)>) -> LinComb<N> {
        let mut out = LinComb::zero();
        for (m, c) in self.iter() {
            if let Some((n, s)) = f(m) {
                out.add_term(n, c * s);
            }
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<M, Coeff> {
        self.terms
    }
}

impl<M: Ord + Clone> FromIterator<(M, Coeff)> for LinComb<M> {
    fn from_iter<I: IntoIterator<Item = (M, Coeff)>>(iter: I) -> Self {
        let mut out = LinComb::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }
}

/// Bilinear extension of a monomial-level operation.
pub fn bilinear<A, B, C, E>(
    x: &LinComb<A>,
    y: &LinComb<B>,
    mut f: impl FnMut(&A, &B) -> Result<C, E>,
) -> Result<LinComb<C>, E>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
{
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_term(f(a, b)?, ca * cb);
        }
    }
    Ok(out)
}

/// Trilinear extension of a monomial-level operation.
pub fn trilinear<A, B, C, D, E>(
    x: &LinComb<A>,
    y: &LinComb<B>,
    z: &LinComb<C>,
    mut f: impl FnMut(&A, &B, &C) -> Result<D, E>,
) -> Result<LinComb<D>, E>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
    D: Ord + Clone,
{
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let cab = ca * cb;
            for (c, cc) in z.iter() {
                out.add_term(f(a, b, c)?, &cab * cc);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let mut c: LinComb<u8> = LinComb::zero();
        c.add_term(1, coeff(2));
        c.add_term(1, coeff(-2));
        assert!(c.is_zero());
        c.add_term(2, coeff(0));
        assert!(c.is_empty());
    }

    #[test]
    fn bilinear_products() {
        let x: LinComb<u8> = [(1, coeff(2)), (2, coeff(3))].into_iter().collect();
        let y: LinComb<u8> = [(10, coeff(1)), (20, coeff(-1))].into_iter().collect();
        let p = bilinear(&x, &y, |a, b| Ok::<_, ()>(a + b)).unwrap();
        assert_eq!(p.coefficient(&11), coeff(2));
        assert_eq!(p.coefficient(&22), coeff(-3));
        assert_eq!(p.len(), 4);
    }
}
