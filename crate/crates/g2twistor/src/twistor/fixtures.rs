//! Fixture files: named forms, tensors, vector fields and chart maps in the
//! literal syntax, parametrized by exact bindings.
//!
//! The compiled-in fixtures can be overridden by pointing the environment
//! variable `G2TWISTOR_FIXTURES` at a directory of `*.fix` files.

use std::collections::BTreeMap;

use crate::geomcalc::{parse_one_form, parse_sym_tensor, parse_vector_field, ChartMap, DiffForm, SymTensor, VectorField};
use crate::scalar::{charts, Bindings, Chart, RatExpr};
use crate::twistor::TwistorError;

#[derive(Clone, Debug)]
enum Kind {
    Form,
    Tensor,
    Vf,
}

#[derive(Clone, Debug)]
struct Entry {
    kind: Kind,
    chart: String,
    text: String,
}

#[derive(Clone, Debug)]
struct MapEntry {
    source: String,
    target: String,
    /// target variable -> source expression text
    lines: Vec<(String, String)>,
}

/// Raw fixture database (text, parsed sections).
pub struct FixtureSet {
    entries: BTreeMap<String, Entry>,
    maps: BTreeMap<String, MapEntry>,
}

const EMBEDDED: &[(&str, &str)] = &[
    ("theta.fix", include_str!("../../fixtures/theta.fix")),
    ("contact.fix", include_str!("../../fixtures/contact.fix")),
    ("symmetries5.fix", include_str!("../../fixtures/symmetries5.fix")),
    ("symmetries7.fix", include_str!("../../fixtures/symmetries7.fix")),
    ("g2contact.fix", include_str!("../../fixtures/g2contact.fix")),
];

/// Expand the h-derivative macros of the power-law backend: hh0..hh5 are h
/// and its derivatives, r13..r163 are the rational powers of h'' appearing
/// in the coframe. Everything is an exact power of q once k is bound.
pub fn expand_h_macros(text: &str) -> String {
    // Longest names first so that prefixes never clobber longer tokens.
    const TABLE: &[(&str, &str)] = &[
        ("r103", "(q^(10*(k-2)/3))"),
        ("r163", "(q^(16*(k-2)/3))"),
        ("r13", "(q^((k-2)/3))"),
        ("r43", "(q^(4*(k-2)/3))"),
        ("r53", "(q^(5*(k-2)/3))"),
        ("r83", "(q^(8*(k-2)/3))"),
        ("hh0", "(q^k/(k*(k-1)))"),
        ("hh1", "(q^(k-1)/(k-1))"),
        ("hh2", "(q^(k-2))"),
        ("hh3", "((k-2)*q^(k-3))"),
        ("hh4", "((k-2)*(k-3)*q^(k-4))"),
        ("hh5", "((k-2)*(k-3)*(k-4)*q^(k-5))"),
    ];
    let mut s = text.to_string();
    for (from, to) in TABLE {
        s = s.replace(from, to);
    }
    s
}

fn chart_by_name(name: &str) -> Result<Chart, TwistorError> {
    match name {
        "m5" => Ok(charts::m5()),
        "m7" => Ok(charts::m7()),
        "b6" => Ok(charts::b6()),
        "a6" => Ok(charts::a6()),
        "a5" => Ok(charts::a5()),
        other => Err(TwistorError::FixtureError(format!(
            "unknown chart `{other}`"
        ))),
    }
}

impl FixtureSet {
    fn parse(sources: &[(String, String)]) -> Result<FixtureSet, TwistorError> {
        let mut entries = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for (fname, text) in sources {
            let mut current: Option<(String, Entry)> = None;
            let mut current_map: Option<(String, MapEntry)> = None;
            let mut flush =
                |cur: &mut Option<(String, Entry)>,
                 curm: &mut Option<(String, MapEntry)>,
                 entries: &mut BTreeMap<String, Entry>,
                 maps: &mut BTreeMap<String, MapEntry>| {
                    if let Some((name, e)) = cur.take() {
                        entries.insert(name, e);
                    }
                    if let Some((name, m)) = curm.take() {
                        maps.insert(name, m);
                    }
                };
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                if line == "param k" || line.starts_with("param ") {
                    // Parameter declarations are informational; bindings are
                    // supplied at materialization time.
                    continue;
                }
                if line.starts_with('[') {
                    flush(&mut current, &mut current_map, &mut entries, &mut maps);
                    let inner = line.trim_matches(|c| c == '[' || c == ']');
                    let parts: Vec<&str> = inner.split_whitespace().collect();
                    match parts.as_slice() {
                        [kind @ ("form" | "tensor" | "vf"), name, "on", chart] => {
                            current = Some((
                                name.to_string(),
                                Entry {
                                    kind: match *kind {
                                        "form" => Kind::Form,
                                        "tensor" => Kind::Tensor,
                                        _ => Kind::Vf,
                                    },
                                    chart: chart.to_string(),
                                    text: String::new(),
                                },
                            ));
                        }
                        ["map", name, "from", source, "to", target] => {
                            current_map = Some((
                                name.to_string(),
                                MapEntry {
                                    source: source.to_string(),
                                    target: target.to_string(),
                                    lines: Vec::new(),
                                },
                            ));
                        }
                        _ => {
                            return Err(TwistorError::FixtureError(format!(
                                "{fname}:{}: bad section header `{line}`",
                                lineno + 1
                            )))
                        }
                    }
                    continue;
                }
                if let Some((_, e)) = current.as_mut() {
                    e.text.push(' ');
                    e.text.push_str(line);
                } else if let Some((_, m)) = current_map.as_mut() {
                    let Some((var, expr)) = line.split_once('=') else {
                        return Err(TwistorError::FixtureError(format!(
                            "{fname}:{}: map lines are `var = expr`",
                            lineno + 1
                        )));
                    };
                    m.lines.push((var.trim().to_string(), expr.trim().to_string()));
                } else {
                    return Err(TwistorError::FixtureError(format!(
                        "{fname}:{}: content outside a section",
                        lineno + 1
                    )));
                }
            }
            flush(&mut current, &mut current_map, &mut entries, &mut maps);
        }
        Ok(FixtureSet { entries, maps })
    }

    fn load() -> Result<FixtureSet, TwistorError> {
        if let Ok(dir) = std::env::var("G2TWISTOR_FIXTURES") {
            let mut sources = Vec::new();
            let rd = std::fs::read_dir(&dir).map_err(|e| {
                TwistorError::FixtureError(format!("cannot read fixture dir {dir}: {e}"))
            })?;
            let mut paths: Vec<_> = rd
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().map(|x| x == "fix").unwrap_or(false))
                .collect();
            paths.sort();
            for p in paths {
                let text = std::fs::read_to_string(&p).map_err(|e| {
                    TwistorError::FixtureError(format!("cannot read {}: {e}", p.display()))
                })?;
                sources.push((p.display().to_string(), text));
            }
            if sources.is_empty() {
                return Err(TwistorError::FixtureError(format!(
                    "no *.fix files in {dir}"
                )));
            }
            return Self::parse(&sources);
        }
        let sources: Vec<(String, String)> = EMBEDDED
            .iter()
            .map(|(n, t)| (n.to_string(), t.to_string()))
            .collect();
        Self::parse(&sources)
    }

    fn entry(&self, name: &str) -> Result<&Entry, TwistorError> {
        self.entries
            .get(name)
            .ok_or_else(|| TwistorError::FixtureError(format!("no fixture named `{name}`")))
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn chart_of(&self, name: &str) -> Result<Chart, TwistorError> {
        chart_by_name(&self.entry(name)?.chart)
    }

    pub fn one_form(&self, name: &str, bindings: &Bindings) -> Result<DiffForm, TwistorError> {
        let e = self.entry(name)?;
        let chart = chart_by_name(&e.chart)?;
        let text = expand_h_macros(&e.text);
        parse_one_form(&text, &chart, bindings)
            .map_err(|err| TwistorError::FixtureError(format!("fixture `{name}`: {err}")))
    }

    pub fn sym_tensor(&self, name: &str, bindings: &Bindings) -> Result<SymTensor, TwistorError> {
        let e = self.entry(name)?;
        let chart = chart_by_name(&e.chart)?;
        let text = expand_h_macros(&e.text);
        parse_sym_tensor(&text, &chart, bindings)
            .map_err(|err| TwistorError::FixtureError(format!("fixture `{name}`: {err}")))
    }

    pub fn vector_field(
        &self,
        name: &str,
        bindings: &Bindings,
    ) -> Result<VectorField, TwistorError> {
        let e = self.entry(name)?;
        let chart = chart_by_name(&e.chart)?;
        let text = expand_h_macros(&e.text);
        parse_vector_field(&text, &chart, bindings)
            .map_err(|err| TwistorError::FixtureError(format!("fixture `{name}`: {err}")))
    }

    pub fn chart_map(&self, name: &str, bindings: &Bindings) -> Result<ChartMap, TwistorError> {
        let m = self
            .maps
            .get(name)
            .ok_or_else(|| TwistorError::FixtureError(format!("no map fixture `{name}`")))?;
        let source = chart_by_name(&m.source)?;
        let target = chart_by_name(&m.target)?;
        let mut assignment = vec![RatExpr::zero(&source); target.dim()];
        let mut seen = vec![false; target.dim()];
        for (var, expr) in &m.lines {
            let j = target.index_of(var).ok_or_else(|| {
                TwistorError::FixtureError(format!(
                    "map `{name}`: `{var}` is not a variable of {}",
                    m.target
                ))
            })?;
            assignment[j] = crate::scalar::parse_scalar(expr, &source, bindings)
                .map_err(|e| TwistorError::FixtureError(format!("map `{name}` ({var}): {e}")))?;
            seen[j] = true;
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(TwistorError::FixtureError(format!(
                "map `{name}`: missing assignment for `{}`",
                target.var_name(j)
            )));
        }
        Ok(ChartMap::new(&source, &target, assignment))
    }
}

/// The process-wide fixture set.
pub fn fixtures() -> &'static FixtureSet {
    static SET: std::sync::OnceLock<FixtureSet> = std::sync::OnceLock::new();
    SET.get_or_init(|| FixtureSet::load().expect("fixture files parse"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{bindings, rint};

    #[test]
    fn fixtures_load_and_parse() {
        let f = fixtures();
        let b = bindings(&[("k", rint(2))]);
        let lam = f.one_form("lambda", &b).unwrap();
        assert!(lam.coeff_of("z").is_one());
        let x5 = f.vector_field("X5", &b).unwrap();
        assert!(!x5.is_zero());
        let map = f.chart_map("adapted", &Bindings::new()).unwrap();
        assert_eq!(map.target.dim(), 6);
        let up1 = f.sym_tensor("up1", &Bindings::new()).unwrap();
        assert_eq!(up1.terms.len(), 5);
    }

    #[test]
    fn theta_fixtures_parse_for_fractional_k() {
        let f = fixtures();
        let b = bindings(&[("k", crate::scalar::rat(1, 2))]);
        for name in ["theta0", "theta1", "theta2", "theta3", "theta4", "theta5", "theta6"] {
            let t = f.one_form(name, &b).unwrap();
            assert!(!t.is_zero(), "{name} is zero");
        }
    }
}
