//! The determinant-like functional for `dim V = 2` in arity 5.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::{law_rng, LawRng};
use crate::linalg::Rationals;
use crate::quotient::{lift_two_alternating, quotient_reduce, Engine, LiftedFunctional};
use crate::tensor::{coeff, expand_multilinear, position_index, Coeff, GeneralVector, TriElement, TriMonomial};

/// Positions of a pair matrix in storage order.
pub const PAIR_POSITIONS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// Factor order of every term in [`DET_S2_TERMS`].
pub const TERM_FACTORS: [(usize, usize); 6] = [(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)];

/// Sign and coordinate choice per factor: `a` picks α, `b` picks β.
pub const DET_S2_TERMS: [(i8, &str); 12] = [
    (1, "aaabbb"),
    (1, "ababba"),
    (1, "abbaab"),
    (1, "bbaaab"),
    (1, "babbaa"),
    (1, "bababa"),
    (-1, "bbbaaa"),
    (-1, "babaab"),
    (-1, "baabba"),
    (-1, "aabbba"),
    (-1, "abaabb"),
    (-1, "ababab"),
];

/// The four index triangles of a size-4 array.
pub const TRIANGLES: [[(usize, usize); 3]; 4] = [
    [(1, 2), (1, 3), (2, 3)],
    [(1, 2), (1, 4), (2, 4)],
    [(1, 3), (1, 4), (3, 4)],
    [(2, 3), (2, 4), (3, 4)],
];

/// Six vectors of a 2-dimensional space, one per position `(i, j)`, `1 <= i < j <= 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMatrix {
    entries: [GeneralVector; 6],
}

impl PairMatrix {
    /// Entries in the order of [`PAIR_POSITIONS`].
    pub fn new(entries: [GeneralVector; 6]) -> Result<Self> {
        if let Some(v) = entries.iter().find(|v| v.dim() != 2) {
            return Err(Error::ShapeMismatch(format!("pair matrix entries need 2 coordinates, got {}", v.dim())));
        }
        Ok(PairMatrix { entries })
    }

    pub fn from_pairs(pairs: [(i64, i64); 6]) -> Self {
        PairMatrix {
            entries: pairs.map(|(a, b)| GeneralVector::from_ints(&[a, b])),
        }
    }

    /// The basis vectors of a size-4 monomial over two letters.
    pub fn from_monomial(m: &TriMonomial) -> Result<Self> {
        if m.size() != 4 {
            return Err(Error::ShapeMismatch(format!("pair matrix needs a size-4 monomial, got size {}", m.size())));
        }
        m.check_dim(2)?;
        let entries = PAIR_POSITIONS.map(|(i, j)| GeneralVector::basis(m.get(i, j), 2));
        Ok(PairMatrix { entries })
    }

    pub fn get(&self, i: usize, j: usize) -> &GeneralVector {
        &self.entries[position_index(4, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GeneralVector) {
        self.entries[position_index(4, i, j)] = v;
    }

    pub fn entries(&self) -> &[GeneralVector; 6] {
        &self.entries
    }

    /// Applies `t` to every entry.
    pub fn map(&self, t: &[[Coeff; 2]; 2]) -> PairMatrix {
        PairMatrix {
            entries: self.entries.clone().map(|v| apply(t, &v)),
        }
    }
}

fn apply(t: &[[Coeff; 2]; 2], v: &GeneralVector) -> GeneralVector {
    let c = v.coords();
    GeneralVector::new(vec![&t[0][0] * &c[0] + &t[0][1] * &c[1], &t[1][0] * &c[0] + &t[1][1] * &c[1]])
}

/// Evaluates the 12-term multilinear form.
pub fn det_s2_raw(x: &PairMatrix) -> Coeff {
    let mut total = Coeff::zero();
    for (sign, pattern) in DET_S2_TERMS {
        let mut term = coeff(sign as i64);
        for (&(i, j), pick) in TERM_FACTORS.iter().zip(pattern.bytes()) {
            let slot = if pick == b'a' { 0 } else { 1 };
            term *= &x.get(i, j).coords()[slot];
        }
        total += term;
    }
    total
}

fn random_vector(rng: &mut LawRng) -> GeneralVector {
    GeneralVector::from_ints(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9)])
}

fn random_pair_matrix(rng: &mut LawRng) -> PairMatrix {
    PairMatrix {
        entries: std::array::from_fn(|_| random_vector(rng)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternatingReport {
    pub samples: usize,
    /// Nonzero values per triangle family.
    pub triangle_failures: [usize; 4],
    pub linearity_checks: usize,
    pub linearity_failures: usize,
    /// A coincidence outside every triangle with a nonzero value.
    pub nonzero_witness: Option<String>,
}

impl AlternatingReport {
    pub fn passed(&self) -> bool {
        self.triangle_failures.iter().all(|&f| f == 0) && self.linearity_failures == 0 && self.nonzero_witness.is_some()
    }
}

/// Random checks of vanishing on each triangle family and linearity in each slot.
pub fn check_two_alternating(samples: usize, seed: u64) -> AlternatingReport {
    let mut rng = law_rng(seed);
    let mut triangle_failures = [0; 4];
    for _ in 0..samples {
        for (t, tri) in TRIANGLES.iter().enumerate() {
            let mut x = random_pair_matrix(&mut rng);
            let v = random_vector(&mut rng);
            for &(i, j) in tri {
                x.set(i, j, v.clone());
            }
            if !det_s2_raw(&x).is_zero() {
                triangle_failures[t] += 1;
            }
        }
    }
    let mut linearity_failures = 0;
    for s in 0..samples {
        let (i, j) = PAIR_POSITIONS[s % 6];
        let base = random_pair_matrix(&mut rng);
        let (u, w) = (random_vector(&mut rng), random_vector(&mut rng));
        let (lambda, mu) = (coeff(rng.gen_range(-5..=5)), coeff(rng.gen_range(-5..=5)));
        let with = |v: GeneralVector| {
            let mut x = base.clone();
            x.set(i, j, v);
            det_s2_raw(&x)
        };
        let lhs = with(u.combine(&lambda, &w, &mu));
        let rhs = &lambda * with(u) + &mu * with(w);
        if lhs != rhs {
            linearity_failures += 1;
        }
    }
    let mut nonzero_witness = None;
    for attempt in 0..64 {
        let mut x = random_pair_matrix(&mut rng);
        let v = x.get(1, 2).clone();
        x.set(3, 4, v);
        let value = det_s2_raw(&x);
        if !value.is_zero() {
            nonzero_witness = Some(format!("seed {seed}, attempt {attempt}: (1,2) = (3,4) gives {value}"));
            break;
        }
    }
    AlternatingReport {
        samples,
        triangle_failures,
        linearity_checks: samples,
        linearity_failures,
        nonzero_witness,
    }
}

/// The monomial with `a` at (1,2), (2,3), (3,4) and `b` elsewhere.
pub fn top_monomial() -> TriMonomial {
    TriMonomial::from_values(4, &[1, 2, 2, 1, 2, 1]).expect("valid size-4 monomial")
}

/// The induced functional on arity 5 for two letters.
#[derive(Clone, Debug)]
pub struct DetFunctional {
    lift: LiftedFunctional<Rationals>,
}

impl DetFunctional {
    pub fn lift(&self) -> &LiftedFunctional<Rationals> {
        &self.lift
    }

    pub fn evaluate(&self, engine: &Engine, x: &TriElement) -> Result<Coeff> {
        let nf = quotient_reduce(engine, x, 2, &Rationals)?;
        Ok(self.lift.evaluate(&Rationals, &nf))
    }
}

/// Lifts the 12-term form through the quotient.
pub fn det_s2_functional(engine: &Engine) -> Result<DetFunctional> {
    let phi = |m: &TriMonomial| det_s2_raw(&PairMatrix::from_monomial(m).expect("size-4 monomial over two letters"));
    let lift = lift_two_alternating(engine, phi, 4, 2, &Rationals)?;
    if lift.is_zero(&Rationals) {
        return Err(Error::NotTwoAlternating {
            row: "every quotient coordinate".into(),
            value: "0".into(),
        });
    }
    Ok(DetFunctional { lift })
}

pub fn det2(t: &[[Coeff; 2]; 2]) -> Coeff {
    &t[0][0] * &t[1][1] - &t[0][1] * &t[1][0]
}

/// The scalar by which `t` acts on arity 5, read off the image of the top monomial.
pub fn induced_map_scalar(engine: &Engine, functional: &DetFunctional, t: &[[Coeff; 2]; 2]) -> Result<Coeff> {
    let image = PairMatrix::from_monomial(&top_monomial())?.map(t);
    let x = expand_multilinear(4, image.entries())?;
    let value = functional.evaluate(engine, &x)?;
    let unit = functional.evaluate(engine, &TriElement::from_monomial(top_monomial()))?;
    debug_assert!(unit.is_one());
    Ok(value / unit)
}
