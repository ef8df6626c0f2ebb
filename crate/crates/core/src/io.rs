//! JSON forms of spaces and elements.
//!
//! An element is `{"terms":[{"k":1,"values":{"a":[re,im]},"limits":{"pos":[re,im]}}]}`.
//! Window points left out of `values` take the limit value on the infinite
//! backends and zero on finite spaces. The limit value comes from the limit
//! point's entry in `values`, else from `limits`, else it is zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::space::{Loc, RawFunction, Space};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub k: i64,
    #[serde(default)]
    pub values: BTreeMap<String, [f64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub limits: BTreeMap<String, [f64; 2]>,
}

pub fn to_pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn from_pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn parse_space(text: &str) -> Result<Space> {
    Space::from_json(text)
}

fn term_raw(space: &Space, term: &TermJson) -> Result<RawFunction> {
    let zero = Complex64::new(0.0, 0.0);
    let mut explicit: Vec<Option<Complex64>> = vec![None; space.rep_count()];
    for (label, &v) in &term.values {
        let p = space.parse_point(label)?;
        match space.locate(&p)? {
            Loc::Rep(i) => explicit[i] = Some(from_pair(v)),
            Loc::Tail(_) => {
                return Err(Error::WindowOverflow { shift: 0, window: space.window().unwrap_or(0) })
            }
        }
    }
    let mut tail_limits: Vec<Option<Complex64>> = vec![None; space.tail_count()];
    for (name, &v) in &term.limits {
        let t = space
            .tail_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown tail {name:?} in term k={}", term.k)))?;
        tail_limits[t] = Some(from_pair(v));
    }
    let limit = match space.limit_index() {
        Some(l) => explicit[l].or_else(|| tail_limits.iter().flatten().next().copied()).unwrap_or(zero),
        None => zero,
    };
    let fill = if space.limit_index().is_some() { limit } else { zero };
    let mut values: Vec<Complex64> = explicit.into_iter().map(|v| v.unwrap_or(fill)).collect();
    if let Some(l) = space.limit_index() {
        values[l] = limit;
    }
    Ok(RawFunction { values, tail_limits: tail_limits.into_iter().map(|v| v.unwrap_or(limit)).collect() })
}

pub fn element_from_json(space: &Arc<Space>, json: &ElementJson) -> Result<Element> {
    let mut terms = Vec::with_capacity(json.terms.len());
    for term in &json.terms {
        let raw = term_raw(space, term)?;
        let f = space.function(raw).map_err(|e| match e {
            Error::Discontinuous(msg) => Error::Discontinuous(format!("term k={}: {msg}", term.k)),
            other => other,
        })?;
        terms.push((term.k, f));
    }
    Ok(Element::from_terms(space, terms))
}

pub fn parse_element(space: &Arc<Space>, text: &str) -> Result<Element> {
    let json: ElementJson = serde_json::from_str(text)?;
    element_from_json(space, &json)
}

pub fn element_to_json(e: &Element) -> ElementJson {
    let sp = e.space();
    let terms = e
        .terms()
        .map(|(k, f)| {
            let values = sp.rep_points().zip(f.values()).map(|(p, &v)| (sp.label(&p), to_pair(v))).collect();
            let limits = match sp.limit_index() {
                Some(l) => (0..sp.tail_count()).map(|t| (sp.tail_name(t).to_string(), to_pair(f.values()[l]))).collect(),
                None => BTreeMap::new(),
            };
            TermJson { k, values, limits }
        })
        .collect();
    ElementJson { terms }
}
