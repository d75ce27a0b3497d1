//! JSON form of a series: exponents and coefficients as exact `"p/q"` strings.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{FugacitySpec, ModeBound, TruncatedSeries, Variable};
use crate::error::{Error, Result};
use crate::rational::{format_q, format_r64, parse_q, parse_r64};

/// Serde mirror of a [`TruncatedSeries`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub spec: SpecJson,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub variables: Vec<VariableJson>,
    pub mode_bound: Option<ModeBoundJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableJson {
    pub name: String,
    pub denominator: i64,
    pub min: String,
    pub max: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeBoundJson {
    pub variables: Vec<String>,
    pub max: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: IndexMap<String, String>,
    pub coeff: String,
}

impl SpecJson {
    pub fn from_spec(spec: &FugacitySpec) -> Self {
        Self {
            variables: spec
                .variables()
                .iter()
                .map(|v| VariableJson {
                    name: v.name().to_string(),
                    denominator: v.denominator(),
                    min: format_r64(&v.min_exponent()),
                    max: format_r64(&v.max_exponent()),
                })
                .collect(),
            mode_bound: spec
                .mode_bound()
                .map(|m| ModeBoundJson { variables: m.variables.clone(), max: format_r64(&m.max) }),
        }
    }

    pub fn to_spec(&self) -> Result<FugacitySpec> {
        let vars = self
            .variables
            .iter()
            .map(|v| Variable::with_denominator(&v.name, v.denominator, parse_r64(&v.min)?, parse_r64(&v.max)?))
            .collect::<Result<Vec<_>>>()?;
        let mode = match &self.mode_bound {
            Some(m) => Some(ModeBound { variables: m.variables.clone(), max: parse_r64(&m.max)? }),
            None => None,
        };
        FugacitySpec::new(vars, mode)
    }
}

impl From<&TruncatedSeries> for SeriesJson {
    fn from(s: &TruncatedSeries) -> Self {
        let names: Vec<&str> = s.spec().variables().iter().map(|v| v.name()).collect();
        let terms = s
            .terms()
            .map(|(exps, c)| TermJson {
                exp: names.iter().zip(&exps).map(|(n, e)| (n.to_string(), format_r64(e))).collect(),
                coeff: format_q(c),
            })
            .collect();
        Self { spec: SpecJson::from_spec(s.spec()), terms }
    }
}

impl SeriesJson {
    pub fn to_series(&self) -> Result<TruncatedSeries> {
        let spec = self.spec.to_spec()?;
        let mut out = TruncatedSeries::zero(&spec);
        for t in &self.terms {
            let exps = t
                .exp
                .iter()
                .map(|(n, e)| Ok((n.as_str(), parse_r64(e)?)))
                .collect::<Result<Vec<_>>>()?;
            let scaled = spec.scaled_exponents(&exps)?;
            if !spec.contains(&scaled) {
                return Err(Error::Parse(format!("term {:?} lies outside the box", t.exp)));
            }
            out.add_term(scaled, parse_q(&t.coeff)?);
        }
        Ok(out)
    }
}

impl TruncatedSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesJson::from(self)).expect("series JSON is always serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&SeriesJson::from(self)).expect("series JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        parsed.to_series()
    }
}
