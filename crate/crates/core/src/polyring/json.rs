//! JSON form of a polynomial: a list of `{"coeff": "p/q", "exps": {var: n}}`
//! terms in canonical (descending graded-lex) order.

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;

use super::{parse::parse_rational, Monomial, MultiPoly, VariableId};
use crate::error::{Error, Result};

struct Exps<'a>(&'a Monomial);

impl Serialize for Exps<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.factors().len()))?;
        for (v, e) in self.0.factors() {
            map.serialize_entry(&v.to_string(), e)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TermOut<'a> {
    coeff: String,
    exps: Exps<'a>,
}

#[derive(Deserialize)]
struct TermIn {
    coeff: String,
    exps: BTreeMap<String, u32>,
}

impl MultiPoly {
    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<TermOut> = self
            .terms()
            .rev()
            .map(|(m, c)| TermOut {
                coeff: c.to_string(),
                exps: Exps(m),
            })
            .collect();
        serde_json::to_value(terms).expect("polynomial terms serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("json value serializes")
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let terms: Vec<TermIn> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let c = parse_rational(&t.coeff)?;
            let mut pairs = Vec::with_capacity(t.exps.len());
            for (name, e) in t.exps {
                let v = VariableId::parse(&name).ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
                pairs.push((v, e));
            }
            out.push((Monomial::from_pairs(pairs), c));
        }
        Ok(MultiPoly::from_terms(out))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&value)
    }
}
