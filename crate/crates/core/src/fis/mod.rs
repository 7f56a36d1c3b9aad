//! Fuzzy inference engines and their default parameterization.

pub mod membership;
pub mod tables;
pub mod type1;
pub mod type2;

use thiserror::Error;

pub use membership::{LinguisticVariable, MembershipFunction};
pub use type1::{defuzz_coa, AggregatedFuzzySet, Mamdani, Rule1, RuleBase1, DEFAULT_RESOLUTION};
pub use type2::{
    km_type_reduce, make_fou, FiringInterval, IntervalMf, ReducedInterval, Rule2, RuleBase2,
    Type2Fis,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FisError {
    #[error("membership breakpoints must be finite and nondecreasing, got {0:?}")]
    Breakpoints(Vec<f64>),
    #[error("cannot parse membership function `{0}` (expected tri:a,b,c or trap:a,b,c,d)")]
    BadShape(String),
    #[error("variable `{var}`: {msg}")]
    Variable { var: String, msg: String },
    #[error("rule {rule}: {msg}")]
    Rule { rule: usize, msg: String },
    #[error("missing input `{0}`")]
    MissingInput(String),
    #[error("input `{var}` = {value} outside [{lo}, {hi}]")]
    OutOfDomain {
        var: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("aggregated output is identically zero")]
    Degenerate,
    #[error("invalid fuzzy set: {0}")]
    BadSet(String),
    #[error("blur must lie in [0, 1), got {0}")]
    Blur(f64),
    #[error("invalid firing interval [{0}, {1}]")]
    Firing(f64, f64),
    #[error("{firings} firing intervals but {weights} weights")]
    Arity { firings: usize, weights: usize },
}

/// Term shapes for one variable, in term order.
pub type TermSet = Vec<(String, MembershipFunction)>;

/// Every tunable of both engines. `Default` is the shipped configuration;
/// the config file can override any field.
#[derive(Debug, Clone, PartialEq)]
pub struct FisConfig {
    pub t1_distance: TermSet,
    pub t1_energy: TermSet,
    pub t1_concentration: TermSet,
    pub t1_radius: TermSet,
    pub t1_chance: TermSet,
    /// `[distance, energy, concentration, radius, chance]` label rows.
    pub t1_rules: Vec<Vec<String>>,
    pub resolution: usize,

    pub t2_distance: TermSet,
    pub t2_energy: TermSet,
    pub t2_radius_weights: Vec<(String, f64)>,
    pub t2_chance_weights: Vec<(String, f64)>,
    /// `[distance, energy, radius, chance]` label rows.
    pub t2_rules: Vec<Vec<String>>,
    pub blur_distance: f64,
    pub blur_energy: f64,
}

pub const DEFAULT_BLUR: f64 = 0.2;

/// Centroid weights of an evenly spaced partition of `[0, 1]`.
fn partition_weights(labels: &[&str]) -> Vec<(String, f64)> {
    membership::even_partition(labels)
        .into_iter()
        .map(|(l, mf)| (l, mf.centroid()))
        .collect()
}

fn owned_rows(table: &str) -> Vec<Vec<String>> {
    tables::rows(table)
        .into_iter()
        .map(|r| r.into_iter().map(String::from).collect())
        .collect()
}

impl Default for FisConfig {
    fn default() -> Self {
        use membership::{even_partition, three_term_input};
        use tables::*;
        Self {
            t1_distance: three_term_input(T1_DISTANCE),
            t1_energy: three_term_input(T1_ENERGY),
            t1_concentration: three_term_input(T1_CONCENTRATION),
            t1_radius: even_partition(&T1_RADIUS),
            t1_chance: even_partition(&T1_CHANCE),
            t1_rules: owned_rows(TYPE1_RULES),
            resolution: DEFAULT_RESOLUTION,
            t2_distance: three_term_input(T2_DISTANCE),
            t2_energy: three_term_input(T2_ENERGY),
            t2_radius_weights: partition_weights(&T2_RADIUS),
            t2_chance_weights: partition_weights(&T2_CHANCE),
            t2_rules: owned_rows(TYPE2_RULES),
            blur_distance: DEFAULT_BLUR,
            blur_energy: DEFAULT_BLUR,
        }
    }
}

impl FisConfig {
    pub fn type1_rule_base(&self) -> Result<RuleBase1, FisError> {
        let var =
            |name: &str, terms: &TermSet| LinguisticVariable::new(name, (0.0, 1.0), terms.clone());
        RuleBase1::from_labels(
            vec![
                var("distance", &self.t1_distance)?,
                var("energy", &self.t1_energy)?,
                var("concentration", &self.t1_concentration)?,
            ],
            vec![
                var("radius", &self.t1_radius)?,
                var("chance", &self.t1_chance)?,
            ],
            &self.t1_rules,
        )
    }

    pub fn type1(&self) -> Result<Mamdani, FisError> {
        Mamdani::new(self.type1_rule_base()?, self.resolution)
    }

    pub fn type2_rule_base(&self) -> Result<RuleBase2, FisError> {
        let split = |w: &[(String, f64)]| -> (Vec<String>, Vec<f64>) { w.iter().cloned().unzip() };
        RuleBase2::from_labels(
            LinguisticVariable::new("distance", (0.0, 1.0), self.t2_distance.clone())?,
            LinguisticVariable::new("energy", (0.0, 1.0), self.t2_energy.clone())?,
            split(&self.t2_radius_weights),
            split(&self.t2_chance_weights),
            &self.t2_rules,
        )
    }

    pub fn type2(&self) -> Result<Type2Fis, FisError> {
        Type2Fis::new(
            self.type2_rule_base()?,
            self.blur_distance,
            self.blur_energy,
        )
    }

    /// Mutable access to a term set by `(engine, variable)` key, as used by
    /// the config file (`t1.distance`, `t2.energy`, ...).
    pub fn term_set_mut(&mut self, engine: &str, variable: &str) -> Option<&mut TermSet> {
        Some(match (engine, variable) {
            ("t1", "distance") => &mut self.t1_distance,
            ("t1", "energy") => &mut self.t1_energy,
            ("t1", "concentration") => &mut self.t1_concentration,
            ("t1", "radius") => &mut self.t1_radius,
            ("t1", "chance") => &mut self.t1_chance,
            ("t2", "distance") => &mut self.t2_distance,
            ("t2", "energy") => &mut self.t2_energy,
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_both_engines() {
        let cfg = FisConfig::default();
        let t1 = cfg.type1().unwrap();
        assert_eq!(t1.rule_base().rules().len(), 27);
        let t2 = cfg.type2().unwrap();
        assert_eq!(t2.rule_base().rules().len(), 9);
    }

    #[test]
    fn six_term_weights_are_centroids() {
        let cfg = FisConfig::default();
        let w: Vec<f64> = cfg.t2_radius_weights.iter().map(|p| p.1).collect();
        // interior triangles are symmetric about (i + 0.5)/6
        for (i, x) in w.iter().enumerate().take(5).skip(1) {
            assert!((x - (i as f64 + 0.5) / 6.0).abs() < 1e-12);
        }
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert!((w[0] + w[5] - 1.0).abs() < 1e-12);
    }
}
