//! Tunable constants of the randomized construction.
//!
//! The published analysis fixes one set of constants and proves it works for
//! max degree beyond 1e20. Nothing about the *procedure* depends on those
//! exact values, so they are all data here: [`PipelineParams::published`] gives
//! the published profile, [`PipelineParams::scaled`] shrinks it to sizes a
//! desk machine can run while keeping the same slack ratios.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Fraction;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    /// Expected uncolored degree at a max-degree vertex: phase 1 uncolors
    /// each eligible edge with probability `a / Δ`.
    pub uncolor_numerator: f64,
    /// Unused degree above which a vertex gets all its edges restored.
    pub recovery_threshold: u32,
    /// Vertices with fewer than this many phase-1 uncolored edges form Q.
    pub sparse_threshold: u32,
    /// High vertices with unused degree below this form L, the phase-2
    /// targets.
    pub low_unused_threshold: u32,
    /// Edges each L vertex uncolors in phase 2.
    pub phase2_uncolor_count: u32,
    /// Required color-set symmetric difference between adjacent equal-degree
    /// high vertices after phase 1.
    pub min_symdiff: u32,
    /// Cap on |N(v) ∩ L| as a fraction of Δ.
    pub neighborhood_cap: Fraction,
    /// Degree below `Δ * degree_split` counts as low.
    pub degree_split: Fraction,
    /// Palette size for coloring the unused graph after phase 2.
    pub fresh_colors: u32,
    /// Repair slack: lists have `r + list_slack` colors drawn from
    /// `1..=Δ + list_slack`.
    pub list_slack: u32,
    /// Resample attempts per phase before giving up on the randomized path.
    pub max_attempts: u32,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("unknown parameter {0:?}")]
    UnknownField(String),
    #[error("cannot parse {value:?} for parameter {field:?}")]
    BadValue { field: String, value: String },
}

impl PipelineParams {
    /// The published constants: only meaningful for astronomically large
    /// max degree, but exactly what the analysis uses.
    pub fn published() -> Self {
        PipelineParams {
            uncolor_numerator: 180.0,
            recovery_threshold: 290,
            sparse_threshold: 20,
            low_unused_threshold: 20,
            phase2_uncolor_count: 5,
            min_symdiff: 10,
            neighborhood_cap: Fraction::new(1, 100),
            degree_split: Fraction::new(1, 3),
            fresh_colors: 296,
            list_slack: 300,
            max_attempts: 50,
        }
    }

    /// Desk-scale profile for a graph of max degree `delta_ref`, keeping the
    /// published slack ratios: a = 0.18 Δ, ρ ≈ 1.611 a, q = ℓ ≈ a/9,
    /// d ≈ a/18, fresh = ρ + s + 1, β = fresh + 4. The symdiff target and
    /// the neighborhood cap are loosened (d at least 1, cap 1/20) because
    /// their published values are unsatisfiable below roughly Δ = 100 and
    /// Δ = 2000 respectively.
    pub fn scaled(delta_ref: u32) -> Self {
        let a = 0.18 * delta_ref as f64;
        let rho = (1.611 * a).round() as u32;
        let q = (a / 9.0).round() as u32;
        let s = 5;
        let fresh = rho + s + 1;
        PipelineParams {
            uncolor_numerator: a,
            recovery_threshold: rho,
            sparse_threshold: q,
            low_unused_threshold: q,
            phase2_uncolor_count: s,
            min_symdiff: ((a / 18.0).round() as u32).max(1),
            neighborhood_cap: Fraction::new(1, 20),
            degree_split: Fraction::new(1, 3),
            fresh_colors: fresh,
            list_slack: fresh + 4,
            max_attempts: 50,
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let err = |m: &str| Err(ParamsError::Invalid(m.to_string()));
        if !(self.uncolor_numerator >= 0.0) {
            return err("uncolor_numerator must be nonnegative");
        }
        if self.low_unused_threshold > self.sparse_threshold {
            return err("low_unused_threshold must be <= sparse_threshold");
        }
        if self.sparse_threshold > self.recovery_threshold {
            return err("sparse_threshold must be <= recovery_threshold");
        }
        if self.phase2_uncolor_count < 1 {
            return err("phase2_uncolor_count must be >= 1");
        }
        if self.fresh_colors < 1 || self.list_slack < 1 {
            return err("fresh_colors and list_slack must be >= 1");
        }
        if self.max_attempts < 1 {
            return err("max_attempts must be >= 1");
        }
        Ok(())
    }

    /// The phase-1 uncolor probability for a graph of max degree `delta`,
    /// clamped into [0, 1].
    pub fn uncolor_probability(&self, delta: u32) -> f64 {
        if delta == 0 {
            0.0
        } else {
            (self.uncolor_numerator / delta as f64).clamp(0.0, 1.0)
        }
    }

    /// Sets one field by name, accepting integers, reals, or "num/den"
    /// fractions as the field requires. This is the `--params key=value`
    /// surface.
    pub fn set_field(&mut self, field: &str, value: &str) -> Result<(), ParamsError> {
        let bad = || ParamsError::BadValue { field: field.to_string(), value: value.to_string() };
        let parse_u32 = |v: &str| v.parse::<u32>().map_err(|_| bad());
        let parse_fraction = |v: &str| -> Result<Fraction, ParamsError> {
            let (num, den) = v.split_once('/').ok_or_else(bad)?;
            let num = num.trim().parse::<u64>().map_err(|_| bad())?;
            let den = den.trim().parse::<u64>().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(Fraction::new(num, den))
        };
        match field {
            "uncolor_numerator" => {
                self.uncolor_numerator = value.parse::<f64>().map_err(|_| bad())?;
            }
            "recovery_threshold" => self.recovery_threshold = parse_u32(value)?,
            "sparse_threshold" => self.sparse_threshold = parse_u32(value)?,
            "low_unused_threshold" => self.low_unused_threshold = parse_u32(value)?,
            "phase2_uncolor_count" => self.phase2_uncolor_count = parse_u32(value)?,
            "min_symdiff" => self.min_symdiff = parse_u32(value)?,
            "neighborhood_cap" => self.neighborhood_cap = parse_fraction(value)?,
            "degree_split" => self.degree_split = parse_fraction(value)?,
            "fresh_colors" => self.fresh_colors = parse_u32(value)?,
            "list_slack" => self.list_slack = parse_u32(value)?,
            "max_attempts" => self.max_attempts = parse_u32(value)?,
            other => return Err(ParamsError::UnknownField(other.to_string())),
        }
        Ok(())
    }
}
