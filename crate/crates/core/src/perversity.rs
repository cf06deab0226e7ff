//! Perverse t-structure conditions on declared strata, and weights.
//!
//! A complex `F` lies in `pD^{<=0}` when `i_x^* F` is concentrated in
//! degrees `<= -δ(x)` for every point, and in `pD^{>=0}` when `i_x^! F` is
//! concentrated in degrees `>= -δ(x)`. Strata are supplied with their `δ`
//! and the degrees where the stalk and costalk complexes are nonzero; the
//! conditions are checked, not derived.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumProfile {
    pub label: String,
    pub delta: i64,
    #[serde(rename = "stalk")]
    pub stalk_degrees: BTreeSet<i64>,
    #[serde(rename = "costalk")]
    pub costalk_degrees: BTreeSet<i64>,
}

/// `δ(x) = 2 - dim O_{X,x}` for the three kinds of points on a surface.
pub fn surface_delta(label: &str) -> Option<i64> {
    match label {
        "generic" => Some(2),
        "curve" => Some(1),
        "point" => Some(0),
        _ => None,
    }
}

impl StratumProfile {
    pub fn new<S, C>(label: impl Into<String>, delta: i64, stalk: S, costalk: C) -> Self
    where
        S: IntoIterator<Item = i64>,
        C: IntoIterator<Item = i64>,
    {
        StratumProfile {
            label: label.into(),
            delta,
            stalk_degrees: stalk.into_iter().collect(),
            costalk_degrees: costalk.into_iter().collect(),
        }
    }

    /// A stratum whose `δ` comes from [`surface_delta`].
    pub fn surface(label: &str, stalk: &[i64], costalk: &[i64]) -> Option<Self> {
        surface_delta(label)
            .map(|d| Self::new(label, d, stalk.iter().copied(), costalk.iter().copied()))
    }

    pub fn support_ok(&self) -> bool {
        self.stalk_degrees
            .last()
            .is_none_or(|&top| top <= -self.delta)
    }

    pub fn cosupport_ok(&self) -> bool {
        self.costalk_degrees
            .first()
            .is_none_or(|&bottom| bottom >= -self.delta)
    }

    /// The profile of `F[k]`: every nonzero degree moves down by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        StratumProfile {
            label: self.label.clone(),
            delta: self.delta,
            stalk_degrees: self.stalk_degrees.iter().map(|d| d - k).collect(),
            costalk_degrees: self.costalk_degrees.iter().map(|d| d - k).collect(),
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StrataFile {
    pub strata: Vec<StratumProfile>,
}

/// Parses `{"strata": [...]}`. On a surface `δ` must lie in `{0, 1, 2}`.
pub fn parse_strata(text: &str) -> Result<Vec<StratumProfile>> {
    let file: StrataFile = serde_json::from_str(text)?;
    if let Some(s) = file.strata.iter().find(|s| !(0..=2).contains(&s.delta)) {
        return Err(Error::InvalidDelta {
            label: s.label.clone(),
            delta: s.delta,
        });
    }
    Ok(file.strata)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerversityVerdict {
    pub left_ok: bool,
    pub right_ok: bool,
    pub perverse: bool,
}

pub fn check_perverse(strata: &[StratumProfile]) -> Result<PerversityVerdict> {
    if strata.is_empty() {
        return Err(Error::EmptyInput);
    }
    let left_ok = strata.iter().all(StratumProfile::support_ok);
    let right_ok = strata.iter().all(StratumProfile::cosupport_ok);
    Ok(PerversityVerdict {
        left_ok,
        right_ok,
        perverse: left_ok && right_ok,
    })
}

/// Weight of `H^n(X̄, F̄)` for `F` smooth and punctually pure of weight `w`.
pub fn weight_of_cohomology(n: i64, w: i64) -> i64 {
    n + w
}
