//! JSON documents for algebras, measures and knowledge bases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::conditional_algebra::{CElement, ConditionalAlgebra};
use crate::error::{Error, Result};
use crate::event_algebra::{Event, EventAlgebra, Limits};
use crate::logic::{parse, CondFormula, KnowledgeBase};
use crate::probability::{CMeasure, EventMeasure};
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
}

impl AlgebraDoc {
    pub fn of(alg: &EventAlgebra) -> Self {
        match alg.variables() {
            Some(vars) => AlgebraDoc { atoms: None, variables: Some(vars.to_vec()) },
            None => AlgebraDoc { atoms: Some(alg.labels().to_vec()), variables: None },
        }
    }

    pub fn build(&self, limits: &Limits) -> Result<EventAlgebra> {
        language(self.atoms.as_ref(), self.variables.as_ref(), limits)
    }
}

fn language(atoms: Option<&Vec<String>>, variables: Option<&Vec<String>>, limits: &Limits) -> Result<EventAlgebra> {
    match (atoms, variables) {
        (Some(a), None) => EventAlgebra::with_limits(a.len(), Some(a.clone()), limits),
        (None, Some(v)) => EventAlgebra::lindenbaum_with_limits(v, limits),
        (Some(_), Some(_)) => Err(Error::Document("give either `atoms` or `variables`, not both".into())),
        (None, None) => Err(Error::Document("missing `atoms` or `variables`".into())),
    }
}

pub fn read_algebra(json: &str) -> Result<EventAlgebra> {
    parse_doc::<AlgebraDoc>(json)?.build(&Limits::from_env())
}

/// Weights keyed by atom label, or listed in atom order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsDoc {
    ByLabel(BTreeMap<String, String>),
    Positional(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub weights: WeightsDoc,
}

impl MeasureDoc {
    pub fn of(p: &EventMeasure) -> Self {
        let alg = p.algebra();
        let map = p
            .weights()
            .iter()
            .enumerate()
            .map(|(i, w)| (alg.label(i).to_string(), format_rational(w)))
            .collect();
        MeasureDoc { weights: WeightsDoc::ByLabel(map) }
    }

    pub fn build(&self, alg: &EventAlgebra) -> Result<EventMeasure> {
        let weights = match &self.weights {
            WeightsDoc::Positional(list) => {
                if list.len() != alg.n() {
                    return Err(Error::WeightCount { expected: alg.n(), got: list.len() });
                }
                list.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?
            }
            WeightsDoc::ByLabel(map) => {
                if map.len() != alg.n() {
                    return Err(Error::WeightCount { expected: alg.n(), got: map.len() });
                }
                let mut out = Vec::with_capacity(alg.n());
                for label in alg.labels() {
                    let s = map.get(label).ok_or_else(|| Error::UnknownSymbol(label.clone()))?;
                    out.push(parse_rational(s)?);
                }
                out
            }
        };
        EventMeasure::new(alg, weights)
    }
}

pub fn read_measure(json: &str, alg: &EventAlgebra) -> Result<EventMeasure> {
    parse_doc::<MeasureDoc>(json)?.build(alg)
}

/// Atom weights of a measure on the conditional algebra, by atom rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CMeasureDoc {
    pub atom_weights: Vec<String>,
}

impl CMeasureDoc {
    pub fn of(mu: &CMeasure) -> Self {
        CMeasureDoc { atom_weights: mu.weights().iter().map(format_rational).collect() }
    }

    pub fn build(&self, calg: &ConditionalAlgebra) -> Result<CMeasure> {
        let w = self.atom_weights.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        CMeasure::new(calg, w)
    }
}

pub fn read_cmeasure(json: &str, calg: &ConditionalAlgebra) -> Result<CMeasure> {
    parse_doc::<CMeasureDoc>(json)?.build(calg)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KbDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default)]
    pub conditionals: Vec<String>,
}

impl KbDoc {
    pub fn of(alg: &EventAlgebra, kb: &KnowledgeBase) -> Self {
        let lang = AlgebraDoc::of(alg);
        KbDoc {
            atoms: lang.atoms,
            variables: lang.variables,
            conditionals: kb.formulas().iter().map(CondFormula::to_string).collect(),
        }
    }

    pub fn build(&self, limits: &Limits) -> Result<(EventAlgebra, KnowledgeBase)> {
        let alg = language(self.atoms.as_ref(), self.variables.as_ref(), limits)?;
        let formulas = self.conditionals.iter().map(|s| parse(s, &alg)).collect::<Result<Vec<_>>>()?;
        Ok((alg, KnowledgeBase::new(formulas)))
    }
}

pub fn read_kb(json: &str) -> Result<(EventAlgebra, KnowledgeBase)> {
    parse_doc::<KbDoc>(json)?.build(&Limits::from_env())
}

/// Sorted atom labels.
pub fn event_to_json(alg: &EventAlgebra, e: &Event) -> serde_json::Value {
    serde_json::Value::from(alg.event_labels(e))
}

pub fn element_to_json(t: &CElement) -> serde_json::Value {
    serde_json::Value::from(t.ranks().collect::<Vec<u64>>())
}

fn parse_doc<T: for<'de> Deserialize<'de>>(json: &str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::Document(e.to_string()))
}
