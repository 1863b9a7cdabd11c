//! The GSC operad `T^{S²}_V` and its `⋄_i` insertion.
//!
//! For `x` of size `m-1`, `y` of size `n-1` and an `(m-1) x (n-1)` grid `A`,
//! `⟨x, A, ⋄_i, y⟩` has size `m+n-2`. In block form the result is
//!
//! ```text
//! X[1..i)        A[1..i)        X[1..i) x X[i..m)
//!                y              tr(A[i..m))
//!                               X[i..m)
//! ```

use std::fmt::Debug;

use rand::Rng;

use crate::bioperad::{random_rect, split_rect, Bioperad, TensorBioperad};
use crate::classical::{tensor_circ, TensorWords, WordElement};
use crate::error::{Error, Result};
use crate::laws::{law_rng, random_lincomb, small_coeff, split_terms, LawRng, LawTally, Operad, SuiteReport};
use crate::tensor::{
    num_positions, position_index, positions, trilinear, BasisIndex, Coeff, RectElement, RectMonomial,
    TriElement, TriMonomial,
};

pub fn diamond_monomial(x: &TriMonomial, a: &RectMonomial, i: usize, y: &TriMonomial) -> Result<TriMonomial> {
    let (m, n) = (x.arity(), y.arity());
    if a.rows() + 1 != m || a.cols() + 1 != n {
        return Err(Error::ShapeMismatch(format!(
            "grid {}x{} does not fit arities {m} and {n}",
            a.rows(),
            a.cols()
        )));
    }
    if i == 0 || i > m {
        return Err(Error::BadPosition { position: i, max: m });
    }
    let size = m + n - 2;
    let mut slots: Vec<Option<BasisIndex>> = vec![None; num_positions(size)];
    let mut put = |r: usize, s: usize, b: BasisIndex| {
        let slot = &mut slots[position_index(size, r, s)];
        debug_assert!(slot.is_none());
        *slot = Some(b);
    };
    let xi = |a: usize| if a < i { a } else { a + n - 1 };
    for (a1, a2) in positions(m - 1) {
        put(xi(a1), xi(a2), x.get(a1, a2));
    }
    for (b1, b2) in positions(n - 1) {
        put(i - 1 + b1, i - 1 + b2, y.get(b1, b2));
    }
    for k in 1..m {
        for l in 1..n {
            if k < i {
                put(k, i - 1 + l, a.get(k, l));
            } else {
                put(i - 1 + l, k + n - 1, a.get(k, l));
            }
        }
    }
    let entries = slots
        .into_iter()
        .map(|b| b.expect("blocks cover every position"))
        .collect();
    TriMonomial::new(size, entries)
}

/// `⟨x, A, ⋄_i, y⟩`, extended trilinearly.
pub fn diamond(x: &TriElement, a: &RectElement, i: usize, y: &TriElement) -> Result<TriElement> {
    let (m, n) = (x.arity(), y.arity());
    if a.rows() + 1 != m || a.cols() + 1 != n {
        return Err(Error::ShapeMismatch(format!(
            "grid {}x{} does not fit arities {m} and {n}",
            a.rows(),
            a.cols()
        )));
    }
    if i == 0 || i > m {
        return Err(Error::BadPosition { position: i, max: m });
    }
    let terms = trilinear(x.terms(), a.terms(), y.terms(), |p, q, r| diamond_monomial(p, q, i, r))?;
    TriElement::from_terms(m + n - 2, terms)
}

/// A GSC operad together with its bioperad, as seen by the checker.
pub trait GscOperad {
    type Elem: Clone + PartialEq + Debug;
    type Grid: Clone + PartialEq + Debug;

    fn name(&self) -> String;
    fn diamond(&self, x: &Self::Elem, a: &Self::Grid, i: usize, y: &Self::Elem) -> Result<Self::Elem>;
    fn row_compose(&self, a: &Self::Grid, i: usize, c: &Self::Grid) -> Result<Self::Grid>;
    fn col_compose(&self, a: &Self::Grid, i: usize, b: &Self::Grid) -> Result<Self::Grid>;
    fn transpose(&self, a: &Self::Grid) -> Self::Grid;
    fn unit(&self) -> Self::Elem;
    /// The unit of `B(m, n)` where `m = 1` or `n = 1`.
    fn grid_unit(&self, m: usize, n: usize) -> Self::Grid;
    fn random_elem(&self, rng: &mut LawRng, arity: usize) -> Self::Elem;
    fn random_grid(&self, rng: &mut LawRng, m: usize, n: usize) -> Self::Grid;
    fn split_elem(&self, _x: &Self::Elem) -> Vec<Self::Elem> {
        Vec::new()
    }
    fn split_grid(&self, _a: &Self::Grid) -> Vec<Self::Grid> {
        Vec::new()
    }
}

/// `T^{S²}_V` over a bioperad, normally [`TensorBioperad`].
#[derive(Clone, Debug)]
pub struct TensorGsc<B = TensorBioperad> {
    pub d: usize,
    pub bioperad: B,
}

impl TensorGsc {
    pub fn new(d: usize) -> Self {
        TensorGsc {
            d,
            bioperad: TensorBioperad,
        }
    }
}

pub fn random_tri(rng: &mut LawRng, size: usize, d: usize) -> TriElement {
    let terms = random_lincomb(rng, |r| TriMonomial::from_fn(size, |_, _| BasisIndex::of(r.gen_range(1..=d as u8))));
    TriElement::from_terms(size, terms).expect("sampled terms share a size")
}

pub fn split_tri(x: &TriElement) -> Vec<TriElement> {
    split_terms(x.terms())
        .into_iter()
        .map(|t| TriElement::from_terms(x.size(), t).expect("same size"))
        .collect()
}

impl<B: Bioperad> GscOperad for TensorGsc<B> {
    type Elem = TriElement;
    type Grid = RectElement;

    fn name(&self) -> String {
        format!("T^S2_V over {}, d={}", self.bioperad.name(), self.d)
    }
    fn diamond(&self, x: &TriElement, a: &RectElement, i: usize, y: &TriElement) -> Result<TriElement> {
        diamond(x, a, i, y)
    }
    fn row_compose(&self, a: &RectElement, i: usize, c: &RectElement) -> Result<RectElement> {
        self.bioperad.row_compose(a, i, c)
    }
    fn col_compose(&self, a: &RectElement, i: usize, b: &RectElement) -> Result<RectElement> {
        self.bioperad.col_compose(a, i, b)
    }
    fn transpose(&self, a: &RectElement) -> RectElement {
        self.bioperad.transpose(a)
    }
    fn unit(&self) -> TriElement {
        TriElement::unit()
    }
    fn grid_unit(&self, m: usize, n: usize) -> RectElement {
        RectElement::unit(m - 1, n - 1)
    }
    fn random_elem(&self, rng: &mut LawRng, arity: usize) -> TriElement {
        random_tri(rng, arity - 1, self.d)
    }
    fn random_grid(&self, rng: &mut LawRng, m: usize, n: usize) -> RectElement {
        random_rect(rng, m - 1, n - 1, self.d)
    }
    fn split_elem(&self, x: &TriElement) -> Vec<TriElement> {
        split_tri(x)
    }
    fn split_grid(&self, a: &RectElement) -> Vec<RectElement> {
        split_rect(a)
    }
}

/// The word operad `T(V)` as a GSC operad over the trivial bioperad
/// `B(m, n) = k`, where `⟨x, λ, ⋄_i, y⟩ = λ (x ∘_i y)`.
#[derive(Clone, Debug)]
pub struct TrivialGsc {
    pub d: usize,
}

impl GscOperad for TrivialGsc {
    type Elem = WordElement;
    type Grid = Coeff;

    fn name(&self) -> String {
        format!("T(V) over the trivial bioperad, d={}", self.d)
    }
    fn diamond(&self, x: &WordElement, a: &Coeff, i: usize, y: &WordElement) -> Result<WordElement> {
        Ok(tensor_circ(x, i, y)?.scale(a))
    }
    fn row_compose(&self, a: &Coeff, _i: usize, c: &Coeff) -> Result<Coeff> {
        Ok(a * c)
    }
    fn col_compose(&self, a: &Coeff, _i: usize, b: &Coeff) -> Result<Coeff> {
        Ok(a * b)
    }
    fn transpose(&self, a: &Coeff) -> Coeff {
        a.clone()
    }
    fn unit(&self) -> WordElement {
        WordElement::unit()
    }
    fn grid_unit(&self, _m: usize, _n: usize) -> Coeff {
        crate::tensor::coeff(1)
    }
    fn random_elem(&self, rng: &mut LawRng, arity: usize) -> WordElement {
        TensorWords { d: self.d }.random_element(rng, arity)
    }
    fn random_grid(&self, rng: &mut LawRng, _m: usize, _n: usize) -> Coeff {
        small_coeff(rng)
    }
    fn split_elem(&self, x: &WordElement) -> Vec<WordElement> {
        TensorWords { d: self.d }.split(x)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GscCheckOptions {
    /// Replace `C^tr` by `C` in identity (I); a control that must fail.
    pub omit_transpose: bool,
}

#[derive(Clone, Debug)]
pub enum GscInput<E, G> {
    Elem(E),
    Grid(G),
}

impl<E, G> GscInput<E, G> {
    fn elem(&self) -> &E {
        match self {
            GscInput::Elem(e) => e,
            GscInput::Grid(_) => unreachable!("input slots are fixed"),
        }
    }
    fn grid(&self) -> &G {
        match self {
            GscInput::Grid(g) => g,
            GscInput::Elem(_) => unreachable!("input slots are fixed"),
        }
    }
}

pub const LAW_GSC_ONE: &str = "identity (I)";
pub const LAW_GSC_TWO: &str = "identity (II)";
pub const LAW_GSC_RIGHT_UNIT: &str = "right unit";
pub const LAW_GSC_LEFT_UNIT: &str = "left unit";

/// Checks both coherence identities and both unit laws on elements of
/// arity `<= 4` (size `<= 3`).
pub fn check_gsc_axioms<G: GscOperad>(g: &G, trials: usize, seed: u64, opts: GscCheckOptions) -> SuiteReport {
    let mut rng = law_rng(seed);
    let mut one = LawTally::new(LAW_GSC_ONE);
    let mut two = LawTally::new(LAW_GSC_TWO);
    let mut right = LawTally::new(LAW_GSC_RIGHT_UNIT);
    let mut left = LawTally::new(LAW_GSC_LEFT_UNIT);
    let split = |v: &GscInput<G::Elem, G::Grid>| match v {
        GscInput::Elem(e) => g.split_elem(e).into_iter().map(GscInput::Elem).collect(),
        GscInput::Grid(a) => g.split_grid(a).into_iter().map(GscInput::Grid).collect(),
    };
    for _ in 0..trials {
        // identity (I): i < j <= m
        let m = rng.gen_range(2..=4usize);
        let n = rng.gen_range(1..=4usize);
        let p = if opts.omit_transpose { n } else { rng.gen_range(1..=4usize) };
        let j = rng.gen_range(2..=m);
        let i = rng.gen_range(1..j);
        let inputs = vec![
            GscInput::Elem(g.random_elem(&mut rng, m)),
            GscInput::Elem(g.random_elem(&mut rng, n)),
            GscInput::Elem(g.random_elem(&mut rng, p)),
            GscInput::Grid(g.random_grid(&mut rng, m, n)),
            GscInput::Grid(g.random_grid(&mut rng, m, p)),
            GscInput::Grid(g.random_grid(&mut rng, n, p)),
        ];
        one.check(
            m + n + p,
            inputs,
            &format!("i={i}, j={j}, (m,n,p)=({m},{n},{p})"),
            |v| {
                let (x, y, z) = (v[0].elem(), v[1].elem(), v[2].elem());
                let (a, b, c) = (v[3].grid(), v[4].grid(), v[5].grid());
                let ct = if opts.omit_transpose { c.clone() } else { g.transpose(c) };
                let lhs = g.diamond(&g.diamond(x, b, j, z)?, &g.row_compose(a, j, &ct)?, i, y)?;
                let rhs = g.diamond(&g.diamond(x, a, i, y)?, &g.row_compose(b, i, c)?, j + n - 1, z)?;
                Ok((lhs, rhs))
            },
            split,
        );

        // identity (II): i <= m, j <= n
        let m = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=4usize);
        let p = rng.gen_range(1..=4usize);
        let i = rng.gen_range(1..=m);
        let j = rng.gen_range(1..=n);
        let inputs = vec![
            GscInput::Elem(g.random_elem(&mut rng, m)),
            GscInput::Elem(g.random_elem(&mut rng, n)),
            GscInput::Elem(g.random_elem(&mut rng, p)),
            GscInput::Grid(g.random_grid(&mut rng, m, n)),
            GscInput::Grid(g.random_grid(&mut rng, m, p)),
            GscInput::Grid(g.random_grid(&mut rng, n, p)),
        ];
        two.check(
            m + n + p,
            inputs,
            &format!("i={i}, j={j}, (m,n,p)=({m},{n},{p})"),
            |v| {
                let (x, y, z) = (v[0].elem(), v[1].elem(), v[2].elem());
                let (a, b, c) = (v[3].grid(), v[4].grid(), v[5].grid());
                let lhs = g.diamond(&g.diamond(x, a, i, y)?, &g.row_compose(b, i, c)?, j + i - 1, z)?;
                let rhs = g.diamond(x, &g.col_compose(a, j, b)?, i, &g.diamond(y, c, j, z)?)?;
                Ok((lhs, rhs))
            },
            split,
        );

        let m = rng.gen_range(1..=4usize);
        let i = rng.gen_range(1..=m);
        let x = g.random_elem(&mut rng, m);
        right.check(
            m,
            vec![GscInput::Elem(x.clone())],
            &format!("i={i}, m={m}"),
            |v| Ok((g.diamond(v[0].elem(), &g.grid_unit(m, 1), i, &g.unit())?, v[0].elem().clone())),
            split,
        );
        left.check(
            m,
            vec![GscInput::Elem(x)],
            &format!("m={m}"),
            |v| Ok((g.diamond(&g.unit(), &g.grid_unit(1, m), 1, v[0].elem())?, v[0].elem().clone())),
            split,
        );
    }
    let mut report = SuiteReport::new(g.name());
    for t in [one, two, right, left] {
        report.push(t);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{multidegree_of, MultiDegree};
    use proptest::prelude::{any, prop_assert_eq, proptest};

    fn tri(size: usize, v: &[u8]) -> TriMonomial {
        TriMonomial::from_values(size, v).unwrap()
    }

    #[test]
    fn smallest_case() {
        let one = TriMonomial::generator();
        let a = RectMonomial::from_values(1, 1, &[2]).unwrap();
        assert_eq!(diamond_monomial(&one, &a, 1, &one).unwrap(), tri(2, &[2]));
        assert_eq!(diamond_monomial(&one, &a, 2, &one).unwrap(), tri(2, &[2]));
    }

    #[test]
    fn column_into_last_slot() {
        // x = {12:a, 13:a, 23:b}, A = (b; a; b), i = 4, y = (1)
        let x = tri(3, &[1, 1, 2]);
        let a = RectMonomial::from_values(3, 1, &[2, 1, 2]).unwrap();
        let r = diamond_monomial(&x, &a, 4, &TriMonomial::generator()).unwrap();
        // order 12, 13, 14, 23, 24, 34
        assert_eq!(r, tri(4, &[1, 1, 2, 2, 1, 2]));
    }

    #[test]
    fn unit_instances() {
        let x = TriElement::from_monomial(tri(3, &[1, 2, 3]));
        for i in 1..=4 {
            let r = diamond(&x, &RectElement::unit(3, 0), i, &TriElement::unit()).unwrap();
            assert_eq!(r, x);
        }
        let r = diamond(&TriElement::unit(), &RectElement::unit(0, 3), 1, &x).unwrap();
        assert_eq!(r, x);
    }

    #[test]
    fn shape_errors() {
        let x = TriElement::from_monomial(tri(2, &[1]));
        let a = RectElement::from_monomial(RectMonomial::from_values(1, 1, &[1]).unwrap());
        assert!(matches!(diamond(&x, &a, 1, &x), Err(Error::ShapeMismatch(_))));
        let a = RectElement::from_monomial(RectMonomial::from_values(2, 2, &[1; 4]).unwrap());
        assert!(matches!(diamond(&x, &a, 4, &x), Err(Error::BadPosition { .. })));
    }

    #[test]
    fn tensor_gsc_axioms() {
        for d in 1..=3 {
            let r = check_gsc_axioms(&TensorGsc::new(d), 120, d as u64, GscCheckOptions::default());
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn trivial_bioperad_degeneration() {
        let r = check_gsc_axioms(&TrivialGsc { d: 2 }, 200, 9, GscCheckOptions::default());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn omitting_transpose_fails() {
        let opts = GscCheckOptions { omit_transpose: true };
        let r = check_gsc_axioms(&TensorGsc::new(3), 200, 4, opts);
        let law = r.law(LAW_GSC_ONE).unwrap();
        assert!(law.failures > 0, "{r}");
        assert!(law.witness.is_some());
        assert!(r.law(LAW_GSC_TWO).unwrap().passed());
    }

    proptest! {
        #[test]
        fn entries_are_conserved(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, pick in 0usize..10) {
            let mut rng = law_rng(seed);
            let d = 3;
            let x = TriMonomial::from_fn(m - 1, |_, _| BasisIndex::of(rng.gen_range(1..=3)));
            let y = TriMonomial::from_fn(n - 1, |_, _| BasisIndex::of(rng.gen_range(1..=3)));
            let a = RectMonomial::from_fn(m - 1, n - 1, |_, _| BasisIndex::of(rng.gen_range(1..=3)));
            let i = 1 + pick % m;
            let r = diamond_monomial(&x, &a, i, &y).unwrap();
            prop_assert_eq!(r.size(), x.size() + y.size());
            let mut expected = multidegree_of(&x, d).counts().to_vec();
            for (e, v) in expected.iter_mut().zip(multidegree_of(&y, d).counts()) {
                *e += v;
            }
            for b in a.entries() {
                expected[b.slot()] += 1;
            }
            prop_assert_eq!(multidegree_of(&r, d), MultiDegree::new(expected));
        }
    }
}
