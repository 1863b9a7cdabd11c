//! JSON documents for monomials and elements.
//!
//! ```json
//! {"size": 3, "entries": {"1,2": 1, "1,3": 1, "2,3": 2}}
//! {"size": 3, "terms": [{"monomial": {...}, "coeff": "1/2"}, {"monomial": {...}, "coeff": -3}]}
//! ```
//!
//! Rectangular grids use `{"rows": r, "cols": c, "entries": {"k,l": b}}` with
//! 1-based `k <= r`, `l <= c`.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::field::{format_rational, parse_rational};
use crate::tensor::basis::BasisIndex;
use crate::tensor::lincomb::{Coeff, LinComb};
use crate::tensor::rect::{RectElement, RectMonomial};
use crate::tensor::tri::{num_positions, position_index, positions, TriElement, TriMonomial};

struct OrderedEntries<'a>(Vec<(String, &'a BasisIndex)>);

impl Serialize for OrderedEntries<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &v.value())?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TriMonomialOut<'a> {
    size: usize,
    entries: OrderedEntries<'a>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TriMonomialIn {
    size: usize,
    entries: BTreeMap<String, u32>,
}

impl Serialize for TriMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = positions(self.size())
            .zip(self.entries())
            .map(|((i, j), b)| (format!("{i},{j}"), b))
            .collect();
        TriMonomialOut {
            size: self.size(),
            entries: OrderedEntries(entries),
        }
        .serialize(s)
    }
}

fn parse_key(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn basis(v: u32) -> std::result::Result<BasisIndex, String> {
    BasisIndex::new(v, BasisIndex::MAX_DIM).map_err(|e| e.to_string())
}

impl<'de> Deserialize<'de> for TriMonomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = TriMonomialIn::deserialize(d)?;
        let n = doc.size;
        let mut slots: Vec<Option<BasisIndex>> = vec![None; num_positions(n)];
        for (key, v) in &doc.entries {
            let (i, j) = parse_key(key)
                .filter(|&(i, j)| 1 <= i && i < j && j <= n)
                .ok_or_else(|| de::Error::custom(format!("bad position '{key}' for size {n}")))?;
            let slot = &mut slots[position_index(n, i, j)];
            if slot.is_some() {
                return Err(de::Error::custom(format!("position '{key}' given twice")));
            }
            *slot = Some(basis(*v).map_err(de::Error::custom)?);
        }
        let entries = slots
            .into_iter()
            .zip(positions(n))
            .map(|(b, (i, j))| b.ok_or_else(|| de::Error::custom(format!("missing position '{i},{j}'"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        TriMonomial::new(n, entries).map_err(de::Error::custom)
    }
}

#[derive(Serialize)]
struct RectMonomialOut<'a> {
    rows: usize,
    cols: usize,
    entries: OrderedEntries<'a>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RectMonomialIn {
    rows: usize,
    cols: usize,
    entries: BTreeMap<String, u32>,
}

impl Serialize for RectMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::with_capacity(self.entries().len());
        for k in 1..=self.rows() {
            for l in 1..=self.cols() {
                entries.push((format!("{k},{l}"), &self.entries()[(k - 1) * self.cols() + l - 1]));
            }
        }
        RectMonomialOut {
            rows: self.rows(),
            cols: self.cols(),
            entries: OrderedEntries(entries),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RectMonomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = RectMonomialIn::deserialize(d)?;
        let (r, c) = (doc.rows, doc.cols);
        let mut slots: Vec<Option<BasisIndex>> = vec![None; r * c];
        for (key, v) in &doc.entries {
            let (k, l) = parse_key(key)
                .filter(|&(k, l)| 1 <= k && k <= r && 1 <= l && l <= c)
                .ok_or_else(|| de::Error::custom(format!("bad grid position '{key}'")))?;
            let slot = &mut slots[(k - 1) * c + l - 1];
            if slot.is_some() {
                return Err(de::Error::custom(format!("position '{key}' given twice")));
            }
            *slot = Some(basis(*v).map_err(de::Error::custom)?);
        }
        let entries = slots
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| de::Error::custom("grid is not fully populated"))?;
        RectMonomial::new(r, c, entries).map_err(de::Error::custom)
    }
}

/// Coefficients are written as JSON integers when they fit in `i64`, and as
/// `"a/b"` strings otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffDoc {
    Int(i64),
    Text(String),
}

impl CoeffDoc {
    fn from_coeff(c: &Coeff) -> Self {
        match (c.is_integer(), c.numer().to_i64()) {
            (true, Some(v)) => CoeffDoc::Int(v),
            _ => CoeffDoc::Text(format_rational(c)),
        }
    }

    fn to_coeff(&self) -> Result<Coeff> {
        match self {
            CoeffDoc::Int(v) => Ok(crate::tensor::coeff(*v)),
            CoeffDoc::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc<M> {
    monomial: M,
    coeff: CoeffDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriElementDoc {
    size: usize,
    terms: Vec<TermDoc<TriMonomial>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RectElementDoc {
    rows: usize,
    cols: usize,
    terms: Vec<TermDoc<RectMonomial>>,
}

fn collect_terms<M: Ord + Clone, E: de::Error>(terms: Vec<TermDoc<M>>) -> std::result::Result<LinComb<M>, E> {
    let mut comb = LinComb::zero();
    for t in terms {
        let c = t.coeff.to_coeff().map_err(E::custom)?;
        comb.add_term(t.monomial, c);
    }
    Ok(comb)
}

impl Serialize for TriElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TriElementDoc {
            size: self.size(),
            terms: self
                .terms()
                .iter()
                .map(|(m, c)| TermDoc {
                    monomial: m.clone(),
                    coeff: CoeffDoc::from_coeff(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TriElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = TriElementDoc::deserialize(d)?;
        let terms = collect_terms(doc.terms)?;
        TriElement::from_terms(doc.size, terms).map_err(de::Error::custom)
    }
}

impl Serialize for RectElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RectElementDoc {
            rows: self.rows(),
            cols: self.cols(),
            terms: self
                .terms()
                .iter()
                .map(|(m, c)| TermDoc {
                    monomial: m.clone(),
                    coeff: CoeffDoc::from_coeff(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RectElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = RectElementDoc::deserialize(d)?;
        let terms = collect_terms(doc.terms)?;
        RectElement::from_terms(doc.rows, doc.cols, terms).map_err(de::Error::custom)
    }
}

/// Parses a triangular element document, checking entries against `d`.
///
/// Errors carry serde's line/column diagnostics.
pub fn parse_tri_element(text: &str, d: usize) -> Result<TriElement> {
    let x: TriElement = serde_json::from_str(text).map_err(|e| Error::Json {
        message: format!("malformed element document: {e}"),
        source: e,
    })?;
    for m in x.terms().monomials() {
        m.check_dim(d)?;
    }
    Ok(x)
}

pub fn tri_element_to_json(x: &TriElement) -> String {
    serde_json::to_string(x).expect("element serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::coeff;

    #[test]
    fn monomial_schema() {
        let m = TriMonomial::from_values(3, &[1, 1, 2]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"size":3,"entries":{"1,2":1,"1,3":1,"2,3":2}}"#);
        let back: TriMonomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let unit: TriMonomial = serde_json::from_str(r#"{"size":0,"entries":{}}"#).unwrap();
        assert_eq!(unit, TriMonomial::unit());
    }

    #[test]
    fn element_schema_with_fractions() {
        let text = r#"{"size":2,"terms":[{"monomial":{"size":2,"entries":{"1,2":1}},"coeff":"1/2"},
            {"monomial":{"size":2,"entries":{"1,2":2}},"coeff":-3}]}"#;
        let x = parse_tri_element(text, 2).unwrap();
        assert_eq!(
            x.terms().coefficient(&TriMonomial::from_values(2, &[1]).unwrap()),
            parse_rational("1/2").unwrap()
        );
        assert_eq!(
            x.terms().coefficient(&TriMonomial::from_values(2, &[2]).unwrap()),
            coeff(-3)
        );
        let again = parse_tri_element(&tri_element_to_json(&x), 2).unwrap();
        assert_eq!(again, x);
    }

    #[test]
    fn malformed_documents() {
        // entry beyond d
        let text = r#"{"size":2,"terms":[{"monomial":{"size":2,"entries":{"1,2":3}},"coeff":1}]}"#;
        assert!(matches!(parse_tri_element(text, 2), Err(Error::BasisIndexOutOfRange { .. })));
        // missing position
        let text = r#"{"size":3,"terms":[{"monomial":{"size":3,"entries":{"1,2":1}},"coeff":1}]}"#;
        assert!(parse_tri_element(text, 2).is_err());
        // bad position
        let text = r#"{"size":2,"terms":[{"monomial":{"size":2,"entries":{"2,1":1}},"coeff":1}]}"#;
        assert!(parse_tri_element(text, 2).is_err());
        // broken JSON reports a line
        let err = parse_tri_element("{\n\"size\": 2,\n\"terms\": [\n", 2).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn rect_schema() {
        let m = RectMonomial::from_values(2, 1, &[2, 1]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":1,"entries":{"1,1":2,"2,1":1}}"#);
        let back: RectMonomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
