//! Randomized checking of algebraic laws with exact equality.
//!
//! A [`LawTally`] evaluates both sides of one law on sampled inputs and keeps
//! the smallest failing instance, shrunk term by term while it still fails.

use std::fmt::{self, Debug};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::tensor::{coeff, Coeff, LinComb};

pub type LawRng = ChaCha8Rng;

pub fn law_rng(seed: u64) -> LawRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero coefficient in `{-2, ..., 2}`.
pub fn small_coeff<R: Rng + ?Sized>(rng: &mut R) -> Coeff {
    let v = [-2, -1, 1, 2][rng.gen_range(0..4)];
    coeff(v)
}

/// A combination of 1 to 3 sampled monomials with small coefficients.
pub fn random_lincomb<M: Ord + Clone, R: Rng + ?Sized>(
    rng: &mut R,
    mut monomial: impl FnMut(&mut R) -> M,
) -> LinComb<M> {
    loop {
        let terms = rng.gen_range(1..=3);
        let mut out = LinComb::zero();
        for _ in 0..terms {
            let m = monomial(rng);
            let c = small_coeff(rng);
            out.add_term(m, c);
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// Single-term pieces of a combination, used to shrink witnesses.
pub fn split_terms<M: Ord + Clone>(x: &LinComb<M>) -> Vec<LinComb<M>> {
    if x.len() <= 1 {
        return Vec::new();
    }
    x.iter()
        .map(|(m, _)| LinComb::monomial(m.clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub suite: String,
    pub law: String,
    pub trials: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.trials > 0
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} / {}: {} trials, {} failures",
            self.suite, self.law, self.trials, self.failures
        )?;
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub laws: Vec<LawReport>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            laws: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        !self.laws.is_empty() && self.laws.iter().all(LawReport::passed)
    }

    pub fn failures(&self) -> usize {
        self.laws.iter().map(|l| l.failures).sum()
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn push(&mut self, tally: LawTally) {
        self.laws.push(tally.into_report(&self.suite));
    }

    /// Adds the laws of `other`, summing counts of laws with the same name
    /// and keeping the first witness.
    pub fn absorb(&mut self, other: SuiteReport) {
        for law in other.laws {
            match self.laws.iter_mut().find(|l| l.law == law.law) {
                Some(mine) => {
                    mine.trials += law.trials;
                    mine.failures += law.failures;
                    if mine.witness.is_none() {
                        mine.witness = law.witness;
                    }
                }
                None => self.laws.push(LawReport {
                    suite: self.suite.clone(),
                    ..law
                }),
            }
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, law) in self.laws.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{law}")?;
        }
        Ok(())
    }
}

/// Pass/fail counter for one law.
pub struct LawTally {
    law: String,
    trials: usize,
    failures: usize,
    witness: Option<(usize, String)>,
}

impl LawTally {
    pub fn new(law: impl Into<String>) -> Self {
        LawTally {
            law: law.into(),
            trials: 0,
            failures: 0,
            witness: None,
        }
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    /// Evaluates one instance. `size` orders witnesses (smaller is kept);
    /// `split` proposes simpler replacements for a single input.
    pub fn check<I, O>(
        &mut self,
        size: usize,
        inputs: Vec<I>,
        context: &str,
        eval: impl Fn(&[I]) -> Result<(O, O)>,
        split: impl Fn(&I) -> Vec<I>,
    ) where
        I: Clone + Debug,
        O: PartialEq + Debug,
    {
        self.trials += 1;
        let fails = |inp: &[I]| match eval(inp) {
            Ok((l, r)) => l != r,
            Err(_) => true,
        };
        if !fails(&inputs) {
            return;
        }
        self.failures += 1;
        if matches!(&self.witness, Some((s, _)) if *s <= size) {
            return;
        }
        let mut inputs = inputs;
        let mut changed = true;
        while changed {
            changed = false;
            for slot in 0..inputs.len() {
                for candidate in split(&inputs[slot]) {
                    let mut trial = inputs.clone();
                    trial[slot] = candidate;
                    if fails(&trial) {
                        inputs = trial;
                        changed = true;
                        break;
                    }
                }
            }
        }
        let outcome = match eval(&inputs) {
            Ok((l, r)) => format!("lhs = {l:?}, rhs = {r:?}"),
            Err(e) => format!("error: {e}"),
        };
        self.witness = Some((size, format!("{context}; inputs {inputs:?}; {outcome}")));
    }

    pub fn into_report(self, suite: &str) -> LawReport {
        LawReport {
            suite: suite.to_string(),
            law: self.law,
            trials: self.trials,
            failures: self.failures,
            witness: self.witness.map(|(_, w)| w),
        }
    }
}

/// A non-symmetric operad with random sampling, as seen by the checker.
pub trait Operad {
    type Elem: Clone + PartialEq + Debug;

    fn name(&self) -> String;
    fn arity(&self, x: &Self::Elem) -> usize;
    fn compose(&self, x: &Self::Elem, i: usize, y: &Self::Elem) -> Result<Self::Elem>;
    fn unit(&self) -> Self::Elem;
    fn random_element(&self, rng: &mut LawRng, arity: usize) -> Self::Elem;

    /// Largest arity sampled by the checker.
    fn max_arity(&self) -> usize {
        5
    }

    fn split(&self, _x: &Self::Elem) -> Vec<Self::Elem> {
        Vec::new()
    }
}

pub const LAW_SEQUENTIAL: &str = "law (1) sequential composition";
pub const LAW_PARALLEL: &str = "law (2) nested composition";
pub const LAW_RIGHT_UNIT: &str = "law (3) right unit";
pub const LAW_LEFT_UNIT: &str = "law (4) left unit";

/// Checks the two associativity laws and both unit laws on `trials` sampled
/// triples `x, y, z` of arities `1..=op.max_arity()`.
pub fn check_operad_axioms<O: Operad>(op: &O, trials: usize, seed: u64) -> SuiteReport {
    let mut rng = law_rng(seed);
    let mut seq = LawTally::new(LAW_SEQUENTIAL);
    let mut par = LawTally::new(LAW_PARALLEL);
    let mut right = LawTally::new(LAW_RIGHT_UNIT);
    let mut left = LawTally::new(LAW_LEFT_UNIT);
    let top = op.max_arity();
    let split = |x: &O::Elem| op.split(x);
    for _ in 0..trials {
        let m = rng.gen_range(1..=top);
        let n = rng.gen_range(1..=top);
        let p = rng.gen_range(1..=top);
        let x = op.random_element(&mut rng, m);
        let y = op.random_element(&mut rng, n);
        let z = op.random_element(&mut rng, p);
        let size = m + n + p;

        // law (1) needs two positions; arity 1 forces a resample of m
        let m1 = if m >= 2 { m } else { rng.gen_range(2..=top.max(2)) };
        let x1 = if m >= 2 {
            x.clone()
        } else {
            op.random_element(&mut rng, m1)
        };
        let j = rng.gen_range(2..=m1);
        let i = rng.gen_range(1..j);
        seq.check(
            m1 + n + p,
            vec![x1, y.clone(), z.clone()],
            &format!("i={i}, j={j}, arities ({m1},{n},{p})"),
            |v| {
                let lhs = op.compose(&op.compose(&v[0], j, &v[2])?, i, &v[1])?;
                let rhs = op.compose(&op.compose(&v[0], i, &v[1])?, n + j - 1, &v[2])?;
                Ok((lhs, rhs))
            },
            split,
        );

        let i = rng.gen_range(1..=m);
        let j = rng.gen_range(1..=n);
        par.check(
            size,
            vec![x.clone(), y.clone(), z.clone()],
            &format!("i={i}, j={j}, arities ({m},{n},{p})"),
            |v| {
                let lhs = op.compose(&op.compose(&v[0], i, &v[1])?, i + j - 1, &v[2])?;
                let rhs = op.compose(&v[0], i, &op.compose(&v[1], j, &v[2])?)?;
                Ok((lhs, rhs))
            },
            split,
        );

        let i = rng.gen_range(1..=m);
        let unit = op.unit();
        right.check(
            m,
            vec![x.clone()],
            &format!("i={i}, arity {m}"),
            |v| Ok((op.compose(&v[0], i, &unit)?, v[0].clone())),
            split,
        );
        left.check(
            m,
            vec![x],
            &format!("arity {m}"),
            |v| Ok((op.compose(&unit, 1, &v[0])?, v[0].clone())),
            split,
        );
    }
    let mut report = SuiteReport::new(op.name());
    for t in [seq, par, right, left] {
        report.push(t);
    }
    report
}
