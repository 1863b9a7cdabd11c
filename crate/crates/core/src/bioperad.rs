//! The bioperad `B_V(m, n)` of rectangular tensor matrices.

use rand::Rng;

use crate::error::{Error, Result};
use crate::laws::{
    check_operad_axioms, law_rng, random_lincomb, split_terms, LawRng, LawTally, Operad, SuiteReport,
};
use crate::tensor::{bilinear, BasisIndex, RectElement, RectMonomial};

pub trait Bioperad {
    fn name(&self) -> String;
    /// `A ∘_i^n C`: the rows of `C` spliced in before row `i` of `A`.
    fn row_compose(&self, a: &RectElement, i: usize, c: &RectElement) -> Result<RectElement>;
    /// `A •_i^m B`: the columns of `B` spliced in before column `i` of `A`.
    fn col_compose(&self, a: &RectElement, i: usize, b: &RectElement) -> Result<RectElement>;
    fn transpose(&self, a: &RectElement) -> RectElement;
}

pub fn row_compose_monomial(a: &RectMonomial, i: usize, c: &RectMonomial) -> Result<RectMonomial> {
    if a.cols() != c.cols() {
        return Err(Error::ShapeMismatch(format!(
            "row insertion needs equal column counts, got {} and {}",
            a.cols(),
            c.cols()
        )));
    }
    let (m, _) = a.arity();
    if i == 0 || i > m {
        return Err(Error::BadPosition { position: i, max: m });
    }
    let p1 = c.rows();
    Ok(RectMonomial::from_fn(a.rows() + p1, a.cols(), |k, l| {
        if k < i {
            a.get(k, l)
        } else if k < i + p1 {
            c.get(k - i + 1, l)
        } else {
            a.get(k - p1, l)
        }
    }))
}

pub fn col_compose_monomial(a: &RectMonomial, i: usize, b: &RectMonomial) -> Result<RectMonomial> {
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "column insertion needs equal row counts, got {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    let (_, n) = a.arity();
    if i == 0 || i > n {
        return Err(Error::BadPosition { position: i, max: n });
    }
    let q1 = b.cols();
    Ok(RectMonomial::from_fn(a.rows(), a.cols() + q1, |k, l| {
        if l < i {
            a.get(k, l)
        } else if l < i + q1 {
            b.get(k, l - i + 1)
        } else {
            a.get(k, l - q1)
        }
    }))
}

fn lift(
    a: &RectElement,
    c: &RectElement,
    rows: usize,
    cols: usize,
    f: impl Fn(&RectMonomial, &RectMonomial) -> Result<RectMonomial>,
) -> Result<RectElement> {
    let terms = bilinear(a.terms(), c.terms(), f)?;
    RectElement::from_terms(rows, cols, terms)
}

pub fn row_compose(a: &RectElement, i: usize, c: &RectElement) -> Result<RectElement> {
    // shape errors must surface even when an argument is zero
    row_compose_monomial(
        &RectMonomial::from_fn(a.rows(), a.cols(), |_, _| BasisIndex::of(1)),
        i,
        &RectMonomial::from_fn(c.rows(), c.cols(), |_, _| BasisIndex::of(1)),
    )?;
    lift(a, c, a.rows() + c.rows(), a.cols(), |x, y| row_compose_monomial(x, i, y))
}

pub fn col_compose(a: &RectElement, i: usize, b: &RectElement) -> Result<RectElement> {
    col_compose_monomial(
        &RectMonomial::from_fn(a.rows(), a.cols(), |_, _| BasisIndex::of(1)),
        i,
        &RectMonomial::from_fn(b.rows(), b.cols(), |_, _| BasisIndex::of(1)),
    )?;
    lift(a, b, a.rows(), a.cols() + b.cols(), |x, y| col_compose_monomial(x, i, y))
}

pub fn transpose(a: &RectElement) -> RectElement {
    RectElement::from_terms(a.cols(), a.rows(), a.terms().map(RectMonomial::transpose))
        .expect("transposed terms share a shape")
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TensorBioperad;

impl Bioperad for TensorBioperad {
    fn name(&self) -> String {
        "B_V".into()
    }
    fn row_compose(&self, a: &RectElement, i: usize, c: &RectElement) -> Result<RectElement> {
        row_compose(a, i, c)
    }
    fn col_compose(&self, a: &RectElement, i: usize, b: &RectElement) -> Result<RectElement> {
        col_compose(a, i, b)
    }
    fn transpose(&self, a: &RectElement) -> RectElement {
        transpose(a)
    }
}

/// A broken column insertion: below the first row the inserted block lands
/// one column to the right. Used to show the checker can fail.
#[derive(Clone, Copy, Debug, Default)]
pub struct SkewedColumnBioperad;

impl Bioperad for SkewedColumnBioperad {
    fn name(&self) -> String {
        "B_V with skewed columns".into()
    }
    fn row_compose(&self, a: &RectElement, i: usize, c: &RectElement) -> Result<RectElement> {
        row_compose(a, i, c)
    }
    fn col_compose(&self, a: &RectElement, i: usize, b: &RectElement) -> Result<RectElement> {
        col_compose(a, i, b)?;
        lift(a, b, a.rows(), a.cols() + b.cols(), |x, y| {
            let n = x.cols() + 1;
            let rows: Vec<RectMonomial> = (1..=x.rows())
                .map(|k| {
                    let at = if k == 1 { i } else { (i + 1).min(n) };
                    let xr = RectMonomial::from_fn(1, x.cols(), |_, l| x.get(k, l));
                    let yr = RectMonomial::from_fn(1, y.cols(), |_, l| y.get(k, l));
                    col_compose_monomial(&xr, at, &yr)
                })
                .collect::<Result<_>>()?;
            Ok(RectMonomial::from_fn(x.rows(), x.cols() + y.cols(), |k, l| rows[k - 1].get(1, l)))
        })
    }
    fn transpose(&self, a: &RectElement) -> RectElement {
        transpose(a)
    }
}

pub fn random_rect(rng: &mut LawRng, rows: usize, cols: usize, d: usize) -> RectElement {
    let terms = random_lincomb(rng, |r| {
        RectMonomial::from_fn(rows, cols, |_, _| BasisIndex::of(r.gen_range(1..=d as u8)))
    });
    RectElement::from_terms(rows, cols, terms).expect("sampled terms share a shape")
}

pub fn split_rect(a: &RectElement) -> Vec<RectElement> {
    split_terms(a.terms())
        .into_iter()
        .map(|t| RectElement::from_terms(a.rows(), a.cols(), t).expect("same shape"))
        .collect()
}

/// `(B(·, n), ∘^n)` for a fixed `n`.
pub struct RowOperad<'a, B: Bioperad> {
    pub bioperad: &'a B,
    pub n: usize,
    pub d: usize,
}

impl<B: Bioperad> Operad for RowOperad<'_, B> {
    type Elem = RectElement;
    fn name(&self) -> String {
        format!("{} rows, n={}", self.bioperad.name(), self.n)
    }
    fn arity(&self, x: &RectElement) -> usize {
        x.rows() + 1
    }
    fn compose(&self, x: &RectElement, i: usize, y: &RectElement) -> Result<RectElement> {
        self.bioperad.row_compose(x, i, y)
    }
    fn unit(&self) -> RectElement {
        RectElement::unit(0, self.n - 1)
    }
    fn random_element(&self, rng: &mut LawRng, arity: usize) -> RectElement {
        random_rect(rng, arity - 1, self.n - 1, self.d)
    }
    fn max_arity(&self) -> usize {
        4
    }
    fn split(&self, x: &RectElement) -> Vec<RectElement> {
        split_rect(x)
    }
}

/// `(B(m, ·), •^m)` for a fixed `m`.
pub struct ColOperad<'a, B: Bioperad> {
    pub bioperad: &'a B,
    pub m: usize,
    pub d: usize,
}

impl<B: Bioperad> Operad for ColOperad<'_, B> {
    type Elem = RectElement;
    fn name(&self) -> String {
        format!("{} columns, m={}", self.bioperad.name(), self.m)
    }
    fn arity(&self, x: &RectElement) -> usize {
        x.cols() + 1
    }
    fn compose(&self, x: &RectElement, i: usize, y: &RectElement) -> Result<RectElement> {
        self.bioperad.col_compose(x, i, y)
    }
    fn unit(&self) -> RectElement {
        RectElement::unit(self.m - 1, 0)
    }
    fn random_element(&self, rng: &mut LawRng, arity: usize) -> RectElement {
        random_rect(rng, self.m - 1, arity - 1, self.d)
    }
    fn max_arity(&self) -> usize {
        4
    }
    fn split(&self, x: &RectElement) -> Vec<RectElement> {
        split_rect(x)
    }
}

pub const LAW_INTERCHANGE: &str = "interchange";
pub const LAW_TR_INVOLUTION: &str = "transpose involution";
pub const LAW_TR_EXCHANGE: &str = "transpose exchange";

/// Checks both operad structures, the interchange law and the two transpose
/// laws on shapes with `m, n, p, q <= 4`.
pub fn check_bioperad_laws<B: Bioperad>(bio: &B, d: usize, trials: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new(bio.name());
    for k in 1..=4 {
        let row_seed = seed.wrapping_add(k as u64);
        let mut rows = check_operad_axioms(&RowOperad { bioperad: bio, n: k, d }, trials, row_seed);
        for l in &mut rows.laws {
            l.law = format!("row operad {}", l.law);
        }
        report.absorb(rows);
        let col_seed = seed.wrapping_add(100 + k as u64);
        let mut cols = check_operad_axioms(&ColOperad { bioperad: bio, m: k, d }, trials, col_seed);
        for l in &mut cols.laws {
            l.law = format!("column operad {}", l.law);
        }
        report.absorb(cols);
    }

    let mut rng = law_rng(seed);
    let mut interchange = LawTally::new(LAW_INTERCHANGE);
    let mut involution = LawTally::new(LAW_TR_INVOLUTION);
    let mut exchange = LawTally::new(LAW_TR_EXCHANGE);
    for _ in 0..trials {
        let [m, n, p, q] = [(); 4].map(|_| rng.gen_range(1..=4usize));
        let a = random_rect(&mut rng, m - 1, n - 1, d);
        let b = random_rect(&mut rng, m - 1, q - 1, d);
        let c = random_rect(&mut rng, p - 1, n - 1, d);
        let dd = random_rect(&mut rng, p - 1, q - 1, d);
        let i = rng.gen_range(1..=m);
        let j = rng.gen_range(1..=n);
        interchange.check(
            m + n + p + q,
            vec![a.clone(), b, c.clone(), dd],
            &format!("i={i}, j={j}, (m,n,p,q)=({m},{n},{p},{q})"),
            |v| {
                let lhs = bio.col_compose(&bio.row_compose(&v[0], i, &v[2])?, j, &bio.row_compose(&v[1], i, &v[3])?)?;
                let rhs = bio.row_compose(&bio.col_compose(&v[0], j, &v[1])?, i, &bio.col_compose(&v[2], j, &v[3])?)?;
                Ok((lhs, rhs))
            },
            split_rect,
        );
        involution.check(
            m + n,
            vec![a.clone()],
            &format!("(m,n)=({m},{n})"),
            |v| Ok((bio.transpose(&bio.transpose(&v[0])), v[0].clone())),
            split_rect,
        );
        exchange.check(
            m + n + p,
            vec![a, c],
            &format!("i={i}, (m,n,p)=({m},{n},{p})"),
            |v| {
                let lhs = bio.transpose(&bio.row_compose(&v[0], i, &v[1])?);
                let rhs = bio.col_compose(&bio.transpose(&v[0]), i, &bio.transpose(&v[1]))?;
                Ok((lhs, rhs))
            },
            split_rect,
        );
    }
    for t in [interchange, involution, exchange] {
        report.push(t);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(rows: usize, cols: usize, v: &[u8]) -> RectElement {
        RectElement::from_monomial(RectMonomial::from_values(rows, cols, v).unwrap())
    }

    #[test]
    fn row_and_column_instances() {
        let (u, v, w) = (mono(1, 1, &[1]), mono(1, 1, &[2]), mono(1, 1, &[3]));
        assert_eq!(row_compose(&u, 1, &v).unwrap(), mono(2, 1, &[2, 1]));
        assert_eq!(col_compose(&u, 1, &w).unwrap(), mono(1, 2, &[3, 1]));
        let lhs = row_compose(&row_compose(&u, 1, &v).unwrap(), 1, &w).unwrap();
        let rhs = row_compose(&u, 1, &row_compose(&v, 1, &w).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, mono(3, 1, &[3, 2, 1]));
    }

    #[test]
    fn units_are_identities() {
        let a = mono(2, 3, &[1, 2, 3, 3, 2, 1]);
        for i in 1..=3 {
            assert_eq!(row_compose(&a, i, &RectElement::unit(0, 3)).unwrap(), a);
        }
        for i in 1..=4 {
            assert_eq!(col_compose(&a, i, &RectElement::unit(2, 0)).unwrap(), a);
        }
        assert_eq!(transpose(&RectElement::unit(0, 0)), RectElement::unit(0, 0));
    }

    #[test]
    fn shape_errors() {
        let a = mono(2, 3, &[1, 2, 3, 3, 2, 1]);
        assert!(matches!(row_compose(&a, 1, &mono(1, 2, &[1, 1])), Err(Error::ShapeMismatch(_))));
        assert!(matches!(row_compose(&a, 4, &mono(1, 3, &[1, 1, 1])), Err(Error::BadPosition { .. })));
        assert!(matches!(col_compose(&a, 1, &mono(1, 1, &[1])), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            row_compose(&RectElement::zero(2, 3), 1, &RectElement::zero(1, 2)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn laws_hold() {
        for d in 1..=3 {
            let r = check_bioperad_laws(&TensorBioperad, d, 120, 11 * d as u64);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn skewed_columns_break_interchange() {
        let r = check_bioperad_laws(&SkewedColumnBioperad, 3, 200, 3);
        let law = r.law(LAW_INTERCHANGE).unwrap();
        assert!(law.failures > 0, "{r}");
        assert!(law.witness.is_some());
    }

    proptest! {
        #[test]
        fn transpose_duality(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, p in 1usize..5, pick in 0usize..10) {
            let mut rng = law_rng(seed);
            let a = random_rect(&mut rng, m - 1, n - 1, 3);
            let c = random_rect(&mut rng, p - 1, n - 1, 3);
            let i = 1 + pick % m;
            let r = row_compose(&a, i, &c).unwrap();
            prop_assert_eq!(r.rows(), m + p - 2);
            prop_assert_eq!(transpose(&r), col_compose(&transpose(&a), i, &transpose(&c)).unwrap());
            prop_assert_eq!(transpose(&transpose(&a)), a);
        }
    }
}
