//! Run configuration: grid description, sample source, named candidate
//! neighbourhoods, coefficient field and output paths, all read from one
//! JSON file.
//!
//! Neighbourhood literals are unions of dyadic boxes, e.g.
//! `"[15/16, 17/16]"` or `"[17/64, 27/64] u [37/64, 47/64]"`; in higher
//! dimension boxes are products of intervals joined with `x`, e.g.
//! `"[0, 1/4] x [1/2, 3/4]"`. The string `"auto:{\"seed\": 3, \"max_k\": 5}"`
//! asks the pipeline to grow an isolating neighbourhood from a randomly
//! chosen cell instead.

use crate::dyadic::Dyadic;
use crate::error::{ConleyError, Result};
use crate::grid::{box_set, Axis, CubicalSet, GridSpec, UnitBox};
use crate::homology::FieldSpec;
use crate::sampling::SampleFormat;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub periodic: bool,
    #[serde(default)]
    pub period: Option<Dyadic>,
    #[serde(default)]
    pub lo: Option<Dyadic>,
    #[serde(default)]
    pub hi: Option<Dyadic>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dimension: usize,
    pub axes: Vec<AxisConfig>,
    pub cell_width: Dyadic,
    pub offset: Dyadic,
    pub refinement: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplesConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    /// Random systems for the invariant-part oracle comparison.
    #[serde(default = "default_oracle_systems")]
    pub oracle_systems: u32,
    /// Random systems for the pair-algebra suite.
    #[serde(default = "default_pair_systems")]
    pub pair_systems: u32,
    /// Random trials per fixture for the dynamics axioms.
    #[serde(default = "default_dmds_trials")]
    pub dmds_trials: u32,
}

fn default_oracle_systems() -> u32 {
    200
}
fn default_pair_systems() -> u32 {
    50
}
fn default_dmds_trials() -> u32 {
    100
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub samples: SamplesConfig,
    #[serde(default)]
    pub neighbourhoods: BTreeMap<String, String>,
    #[serde(default)]
    pub coefficients: Option<String>,
    #[serde(default)]
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub figure: Option<PathBuf>,
    #[serde(default)]
    pub audit: Option<AuditConfig>,
    /// Optional figure color overrides (keys: samples, grid, boxes, n, s, fs).
    #[serde(default)]
    pub figure_colors: Option<BTreeMap<String, String>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| ConleyError::Config(format!("bad config {}: {e}", path.display())))?;
        // a relative samples path is taken relative to the config file, so a
        // config works no matter where the tool is invoked from
        if cfg.samples.path.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.samples.path = dir.join(&cfg.samples.path);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.dimension == 0 || self.grid.dimension != self.grid.axes.len() {
            return Err(ConleyError::Config(format!(
                "grid dimension {} does not match {} axes",
                self.grid.dimension,
                self.grid.axes.len()
            )));
        }
        for (i, a) in self.grid.axes.iter().enumerate() {
            match (a.periodic, &a.period, &a.lo, &a.hi) {
                (true, Some(_), None, None) | (false, None, Some(_), Some(_)) => {}
                _ => {
                    return Err(ConleyError::Config(format!(
                        "axis {i}: periodic axes need `period`, bounded axes need `lo` and `hi`"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<Arc<GridSpec>> {
        let axes = self
            .grid
            .axes
            .iter()
            .map(|a| {
                if a.periodic {
                    Axis::Periodic { period: a.period.unwrap() }
                } else {
                    Axis::Bounded { lo: a.lo.unwrap(), hi: a.hi.unwrap() }
                }
            })
            .collect();
        let spec = GridSpec {
            axes,
            cell_width: self.grid.cell_width,
            offset: self.grid.offset,
            refinement: self.grid.refinement,
        };
        spec.validate().map_err(|e| ConleyError::Config(e.to_string()))?;
        Ok(Arc::new(spec))
    }

    pub fn sample_format(&self) -> Result<SampleFormat> {
        match self.samples.format.as_deref() {
            Some("csv") => Ok(SampleFormat::Csv),
            Some("json") => Ok(SampleFormat::Json),
            Some(other) => Err(ConleyError::Config(format!("unknown sample format {other:?}"))),
            None => match self.samples.path.extension().and_then(|e| e.to_str()) {
                Some("json") => Ok(SampleFormat::Json),
                _ => Ok(SampleFormat::Csv),
            },
        }
    }

    pub fn field(&self, override_spec: Option<&str>) -> Result<FieldSpec> {
        let s = override_spec.or(self.coefficients.as_deref()).unwrap_or("q");
        parse_coefficients(s)
    }
}

/// Parse a coefficient spec: `q` for the rationals, `zp:P` for a prime field.
pub fn parse_coefficients(s: &str) -> Result<FieldSpec> {
    let s = s.trim().to_ascii_lowercase();
    if s == "q" {
        return Ok(FieldSpec::Rational);
    }
    if let Some(p) = s.strip_prefix("zp:") {
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| ConleyError::Config(format!("bad prime in coefficients {s:?}")))?;
        let f = FieldSpec::Prime(p);
        f.validate()?;
        return Ok(f);
    }
    Err(ConleyError::Config(format!(
        "coefficients must be \"q\" or \"zp:P\", got {s:?}"
    )))
}

/// A named candidate neighbourhood: either an explicit cubical set, or a
/// request to grow one automatically.
#[derive(Debug, Clone)]
pub enum NeighbourhoodSpec {
    Explicit(CubicalSet),
    Auto { seed: u64, max_k: u32 },
}

#[derive(Debug, Clone, Deserialize)]
struct AutoSpec {
    seed: u64,
    max_k: u32,
}

/// Parse a neighbourhood literal against a grid.
pub fn parse_neighbourhood(grid: &Arc<GridSpec>, literal: &str) -> Result<NeighbourhoodSpec> {
    let literal = literal.trim();
    if let Some(rest) = literal.strip_prefix("auto:") {
        let auto: AutoSpec = serde_json::from_str(rest)
            .map_err(|e| ConleyError::Config(format!("bad auto neighbourhood {literal:?}: {e}")))?;
        return Ok(NeighbourhoodSpec::Auto { seed: auto.seed, max_k: auto.max_k });
    }
    let d = grid.dim();
    let mut set = CubicalSet::empty(grid.clone());
    for box_lit in literal.split(" u ") {
        let intervals: Vec<&str> = box_lit.split(" x ").collect();
        if intervals.len() != d {
            return Err(ConleyError::Config(format!(
                "box {box_lit:?} has {} intervals, grid dimension is {d}",
                intervals.len()
            )));
        }
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        for (axis, iv) in intervals.iter().enumerate() {
            let (a, b) = parse_interval(iv)?;
            let (ua, ub) = (coord_to_unit(grid, axis, a)?, coord_to_unit(grid, axis, b)?);
            if ub < ua {
                return Err(ConleyError::Config(format!("empty interval {iv:?}")));
            }
            match grid.period_units(axis) {
                Some(p) => {
                    let span = ub - ua;
                    if span > p {
                        return Err(ConleyError::Config(format!(
                            "interval {iv:?} longer than the period"
                        )));
                    }
                    let ua_n = ua.rem_euclid(p);
                    lo.push(ua_n);
                    hi.push(ua_n + span);
                }
                None => {
                    let (blo, bhi) = grid.bounds_units(axis).unwrap();
                    if ua < blo || ub > bhi {
                        return Err(ConleyError::Config(format!(
                            "interval {iv:?} leaves the bounded domain"
                        )));
                    }
                    lo.push(ua);
                    hi.push(ub);
                }
            }
        }
        set = set.union(&box_set(grid.clone(), &UnitBox { lo, hi }))?;
    }
    if set.is_empty() {
        return Err(ConleyError::Config(format!("empty neighbourhood literal {literal:?}")));
    }
    Ok(NeighbourhoodSpec::Explicit(set))
}

fn parse_interval(s: &str) -> Result<(Dyadic, Dyadic)> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ConleyError::Config(format!("interval {s:?} must look like [a, b]")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| ConleyError::Config(format!("interval {s:?} must look like [a, b]")))?;
    Ok((
        Dyadic::parse(a).map_err(|e| ConleyError::Config(e.to_string()))?,
        Dyadic::parse(b).map_err(|e| ConleyError::Config(e.to_string()))?,
    ))
}

/// Exact conversion of a coordinate to grid units; errors when the
/// coordinate does not lie on the unit lattice.
fn coord_to_unit(grid: &Arc<GridSpec>, axis: usize, x: Dyadic) -> Result<i64> {
    let rel = x - grid.base();
    rel.div_exact_int(&grid.unit()).ok_or_else(|| {
        ConleyError::Config(format!(
            "coordinate {x} on axis {axis} is not a grid-unit multiple"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen;

    #[test]
    fn literal_round_trip_on_circle() {
        let grid = testgen::circle_grid();
        let n = parse_neighbourhood(&grid, "[15/16, 17/16]").unwrap();
        let NeighbourhoodSpec::Explicit(set) = n else { panic!() };
        let expected = testgen::doubling_fixed_point_neighbourhood(&grid);
        assert_eq!(set.cells, expected.cells);

        let n2 = parse_neighbourhood(&grid, "[17/64, 27/64] u [37/64, 47/64]").unwrap();
        let NeighbourhoodSpec::Explicit(set2) = n2 else { panic!() };
        let expected2 = testgen::doubling_period_two_neighbourhood(&grid);
        assert_eq!(set2.cells, expected2.cells);
    }

    #[test]
    fn auto_literal() {
        let grid = testgen::circle_grid();
        match parse_neighbourhood(&grid, "auto:{\"seed\": 3, \"max_k\": 5}").unwrap() {
            NeighbourhoodSpec::Auto { seed: 3, max_k: 5 } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coefficient_specs() {
        assert_eq!(parse_coefficients("q").unwrap(), FieldSpec::Rational);
        assert_eq!(parse_coefficients("zp:5").unwrap(), FieldSpec::Prime(5));
        assert!(parse_coefficients("zp:6").is_err());
        assert!(parse_coefficients("z").is_err());
    }

    #[test]
    fn bad_literals_rejected() {
        let grid = testgen::circle_grid();
        assert!(parse_neighbourhood(&grid, "[1/3, 1/2]").is_err()); // not dyadic
        assert!(parse_neighbourhood(&grid, "[0, 1/128]").is_err()); // off-lattice
        assert!(parse_neighbourhood(&grid, "(0, 1)").is_err());
        assert!(parse_neighbourhood(&grid, "[0,1/4] x [0,1/4]").is_err()); // wrong dim
    }
}
