//! Coordinate charts: an ordered list of variable names, with at most one
//! distinguished variable that is allowed rational exponents.

use std::fmt;
use std::sync::Arc;

use crate::scalar::ScalarError;

#[derive(Debug, PartialEq, Eq, Hash)]
struct ChartData {
    vars: Vec<String>,
    fractional: Option<usize>,
}

/// An ordered coordinate chart. Cheap to clone and share.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart(Arc<ChartData>);

impl Chart {
    /// Build a chart from variable names; `fractional` names the variable
    /// permitted rational exponents (`q` throughout this crate).
    pub fn new(vars: &[&str], fractional: Option<&str>) -> Result<Chart, ScalarError> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for (i, v) in names.iter().enumerate() {
            if names[..i].contains(v) {
                return Err(ScalarError::InvalidChart(format!(
                    "duplicate variable `{v}`"
                )));
            }
        }
        let fractional = match fractional {
            None => None,
            Some(f) => Some(
                names
                    .iter()
                    .position(|v| v == f)
                    .ok_or_else(|| {
                        ScalarError::InvalidChart(format!(
                            "fractional variable `{f}` is not a chart variable"
                        ))
                    })?,
            ),
        };
        Ok(Chart(Arc::new(ChartData {
            vars: names,
            fractional,
        })))
    }

    pub fn dim(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.0.vars[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Index of the distinguished fractional-exponent variable, if any.
    pub fn fractional(&self) -> Option<usize> {
        self.0.fractional
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({})", self.0.vars.join(","))?;
        if let Some(i) = self.0.fractional {
            write!(f, "[frac={}]", self.0.vars[i])?;
        }
        Ok(())
    }
}

/// Charts used throughout the twistor constructions.
pub mod charts {
    use super::Chart;
    use std::sync::OnceLock;

    fn cached(cell: &'static OnceLock<Chart>, vars: &[&str], frac: Option<&str>) -> Chart {
        cell.get_or_init(|| Chart::new(vars, frac).expect("static chart"))
            .clone()
    }

    /// Base 5-manifold chart (x, y, p, q, z).
    pub fn m5() -> Chart {
        static C: OnceLock<Chart> = OnceLock::new();
        cached(&C, &["x", "y", "p", "q", "z"], Some("q"))
    }

    /// Twistor 7-manifold chart (x, y, p, q, z, v, w).
    pub fn m7() -> Chart {
        static C: OnceLock<Chart> = OnceLock::new();
        cached(&C, &["x", "y", "p", "q", "z", "v", "w"], Some("q"))
    }

    /// Boundary chart (x, y, p, q, z, v) at w = 0.
    pub fn b6() -> Chart {
        static C: OnceLock<Chart> = OnceLock::new();
        cached(&C, &["x", "y", "p", "q", "z", "v"], Some("q"))
    }

    /// Adapted coordinates (x0..x5) of the boundary reduction.
    pub fn a6() -> Chart {
        static C: OnceLock<Chart> = OnceLock::new();
        cached(&C, &["x0", "x1", "x2", "x3", "x4", "x5"], None)
    }

    /// Contact 5-manifold chart (x0..x4) carrying the flat contact data.
    pub fn a5() -> Chart {
        static C: OnceLock<Chart> = OnceLock::new();
        cached(&C, &["x0", "x1", "x2", "x3", "x4"], None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_fractional() {
        assert!(Chart::new(&["x", "x"], None).is_err());
        assert!(Chart::new(&["x", "y"], Some("q")).is_err());
        let c = Chart::new(&["x", "q"], Some("q")).unwrap();
        assert_eq!(c.fractional(), Some(1));
    }
}
