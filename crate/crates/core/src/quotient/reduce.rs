//! Normal forms in the quotient and the checks built on them.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::law_rng;
use crate::linalg::{rank_sparse, Field, FieldSpec, SparseMatrix};
use crate::quotient::block::{assemble_relation_block, pruned_by_repetition};
use crate::quotient::engine::{CachedField, Engine};
use crate::quotient::relations::Variant;
use crate::tensor::{multidegree_of, num_positions, BasisIndex, BlockIndexer, MultiDegree, TriElement, TriMonomial};

/// Coordinates of one multidegree component over the block's free monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentForm<F: Field> {
    pub k: MultiDegree,
    pub coords: Vec<(TriMonomial, F::Elem)>,
    /// Zero by the repetition rule, without elimination.
    pub pruned: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<F: Field> {
    pub size: usize,
    pub components: Vec<ComponentForm<F>>,
    pub is_zero: bool,
}

impl<F: Field> NormalForm<F> {
    /// The coordinate of a free monomial, zero if absent.
    pub fn coordinate(&self, field: &F, m: &TriMonomial) -> F::Elem {
        self.components
            .iter()
            .flat_map(|c| c.coords.iter())
            .find(|(x, _)| x == m)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| field.zero())
    }

    pub fn render(&self, field: &F) -> String {
        if self.is_zero {
            return "zero".into();
        }
        let mut out = Vec::new();
        for c in &self.components {
            for (m, v) in &c.coords {
                out.push(format!("{} {:?} {}", c.k, m, field.format(v)));
            }
        }
        out.join("\n")
    }
}

/// Splits `x` by multidegree and reduces each part against its block.
pub fn quotient_reduce<F: CachedField>(engine: &Engine, x: &TriElement, d: usize, field: &F) -> Result<NormalForm<F>> {
    if x.max_index() > d {
        return Err(Error::BasisIndexOutOfRange {
            index: x.max_index() as u32,
            d,
        });
    }
    let n = x.size();
    let mut parts: BTreeMap<MultiDegree, Vec<(TriMonomial, F::Elem)>> = BTreeMap::new();
    for (m, c) in x.terms().iter() {
        parts
            .entry(multidegree_of(m, d))
            .or_default()
            .push((m.clone(), field.from_rational(c)?));
    }
    let mut components = Vec::new();
    for (k, terms) in parts {
        if engine.config().shortcut && pruned_by_repetition(n, &k) {
            components.push(ComponentForm {
                k,
                coords: Vec::new(),
                pruned: true,
            });
            continue;
        }
        let indexer = BlockIndexer::new(n, &k)?;
        let v: Vec<(usize, F::Elem)> = terms
            .into_iter()
            .map(|(m, c)| (indexer.rank(&m).expect("monomial lies in its block"), c))
            .collect();
        let e = engine.echelon(field, n, &k)?;
        let coords = e
            .reduce(field, &v)
            .into_iter()
            .map(|(c, val)| (indexer.unrank(c), val))
            .collect();
        components.push(ComponentForm {
            k,
            coords,
            pruned: false,
        });
    }
    let is_zero = components.iter().all(|c| c.coords.is_empty());
    Ok(NormalForm {
        size: n,
        components,
        is_zero,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma5Report {
    pub n: usize,
    pub d: usize,
    pub samples: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl Lemma5Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// A random monomial of size `n` in which some letter fills at least `n` positions.
pub fn repeated_letter_monomial<R: Rng>(rng: &mut R, n: usize, d: usize) -> TriMonomial {
    let len = num_positions(n);
    let w = rng.gen_range(1..=d as u32);
    let reps = rng.gen_range(n.min(len)..=len);
    let mut slots: Vec<usize> = (0..len).collect();
    slots.shuffle(rng);
    let mut entries: Vec<BasisIndex> = (0..len)
        .map(|_| BasisIndex::new(rng.gen_range(1..=d as u32), d).expect("letter in range"))
        .collect();
    for &s in &slots[..reps] {
        entries[s] = BasisIndex::new(w, d).expect("letter in range");
    }
    TriMonomial::new(n, entries).expect("entry count matches size")
}

/// Samples monomials with a letter repeated at least `n` times and checks
/// that each reduces to zero, with pruning disabled.
pub fn lemma5_vanishing_check<F: CachedField>(
    engine: &Engine,
    n: usize,
    d: usize,
    samples: usize,
    seed: u64,
    field: &F,
) -> Result<Lemma5Report> {
    if n < 3 {
        return Err(Error::ShapeMismatch(format!("the vanishing check needs n >= 3, got {n}")));
    }
    let strict = engine.with_shortcut(false);
    let mut rng = law_rng(seed);
    let mut failures = 0;
    let mut witness = None;
    for _ in 0..samples {
        let m = repeated_letter_monomial(&mut rng, n, d);
        let nf = quotient_reduce(&strict, &TriElement::from_monomial(m.clone()), d, field)?;
        if !nf.is_zero {
            failures += 1;
            witness.get_or_insert_with(|| format!("{m:?}"));
        }
    }
    Ok(Lemma5Report {
        n,
        d,
        samples,
        failures,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantRow {
    pub k: MultiDegree,
    pub ranks: [usize; 3],
    /// Rank of all three row sets together.
    pub union_rank: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantReport {
    pub n: usize,
    pub d: usize,
    pub field: FieldSpec,
    pub rows: Vec<VariantRow>,
}

impl VariantReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(|r| r.equal)
    }
}

/// Compares the row spaces of the three relation variants block by block.
pub fn variant_span_equal<F: Field>(n: usize, d: usize, field: &F) -> Result<VariantReport> {
    for v in Variant::ALL {
        v.check_characteristic(field.characteristic())?;
    }
    let mut rows = Vec::new();
    for k in MultiDegree::all_with_total(d, num_positions(n) as u32) {
        let mut ranks = [0; 3];
        let mut all = Vec::new();
        let mut n_cols = 0;
        for (slot, v) in Variant::ALL.into_iter().enumerate() {
            let b = assemble_relation_block(n, &k, field.clone(), v)?;
            ranks[slot] = rank_sparse(&b.matrix)?;
            n_cols = b.n_monomials();
            all.extend(b.matrix.into_rows());
        }
        let union_rank = rank_sparse(&SparseMatrix::from_rows(field.clone(), n_cols, all)?)?;
        rows.push(VariantRow {
            equal: ranks.iter().all(|&r| r == union_rank),
            k,
            ranks,
            union_rank,
        });
    }
    Ok(VariantReport {
        n,
        d,
        field: field.spec(),
        rows,
    })
}

/// A functional on the quotient, given by its values on free monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedFunctional<F: Field> {
    pub n: usize,
    pub d: usize,
    pub values: BTreeMap<MultiDegree, Vec<(TriMonomial, F::Elem)>>,
}

impl<F: Field> LiftedFunctional<F> {
    pub fn evaluate(&self, field: &F, x: &NormalForm<F>) -> F::Elem {
        let mut acc = field.zero();
        for c in &x.components {
            let Some(vals) = self.values.get(&c.k) else { continue };
            for (m, v) in &c.coords {
                if let Some((_, phi)) = vals.iter().find(|(f, _)| f == m) {
                    acc = field.add(&acc, &field.mul(v, phi));
                }
            }
        }
        acc
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.values.values().flatten().all(|(_, v)| field.is_zero(v))
    }
}

/// Factors a functional on size-`n` monomials through the quotient.
///
/// Fails with the first relation row on which `phi` does not vanish.
pub fn lift_two_alternating<F: CachedField>(
    engine: &Engine,
    phi: impl Fn(&TriMonomial) -> F::Elem,
    n: usize,
    d: usize,
    field: &F,
) -> Result<LiftedFunctional<F>> {
    let mut values = BTreeMap::new();
    for k in MultiDegree::all_with_total(d, num_positions(n) as u32) {
        let block = assemble_relation_block(n, &k, field.clone(), engine.variant())?;
        let order = block.monomial_order();
        let phis: Vec<F::Elem> = order.iter().map(&phi).collect();
        for row in block.matrix.rows() {
            let mut value = field.zero();
            for (c, v) in row {
                value = field.add(&value, &field.mul(v, &phis[*c]));
            }
            if !field.is_zero(&value) {
                let terms: Vec<String> = row
                    .iter()
                    .map(|(c, v)| format!("{}*{:?}", field.format(v), order[*c]))
                    .collect();
                return Err(Error::NotTwoAlternating {
                    row: terms.join(" + "),
                    value: field.format(&value),
                });
            }
        }
        let e = engine.echelon(field, n, &k)?;
        let free: Vec<(usize, F::Elem)> = e.free_cols().into_iter().map(|c| (c, phis[c].clone())).collect();
        for (c, want) in phis.iter().enumerate() {
            let coords = e.reduce(field, &[(c, field.one())]);
            let mut got = field.zero();
            for (fc, v) in coords {
                let (_, p) = free.iter().find(|(x, _)| *x == fc).expect("reduced vectors live on free columns");
                got = field.add(&got, &field.mul(&v, p));
            }
            if got != *want {
                return Err(Error::NotTwoAlternating {
                    row: format!("projection of {:?}", order[c]),
                    value: field.format(&field.sub(want, &got)),
                });
            }
        }
        values.insert(k, free.into_iter().map(|(c, v)| (order[c].clone(), v)).collect());
    }
    Ok(LiftedFunctional { n, d, values })
}
