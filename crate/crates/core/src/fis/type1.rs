//! Mamdani inference: min for AND and implication, max for aggregation,
//! centroid defuzzification over a sampled output curve.

use std::collections::BTreeMap;

use super::membership::LinguisticVariable;
use super::FisError;

/// Default number of uniform samples per output domain.
pub const DEFAULT_RESOLUTION: usize = 1001;

/// One rule: a term index per input variable and per output variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule1 {
    pub antecedents: Vec<usize>,
    pub consequents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase1 {
    inputs: Vec<LinguisticVariable>,
    outputs: Vec<LinguisticVariable>,
    rules: Vec<Rule1>,
}

impl RuleBase1 {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        outputs: Vec<LinguisticVariable>,
        rules: Vec<Rule1>,
    ) -> Result<Self, FisError> {
        if inputs.is_empty() || outputs.is_empty() {
            return Err(FisError::Rule {
                rule: 0,
                msg: "rule base needs inputs and outputs".into(),
            });
        }
        for (i, r) in rules.iter().enumerate() {
            let bad = |msg: String| FisError::Rule { rule: i, msg };
            if r.antecedents.len() != inputs.len() || r.consequents.len() != outputs.len() {
                return Err(bad("arity does not match the bound variables".into()));
            }
            for (v, &t) in inputs
                .iter()
                .zip(&r.antecedents)
                .chain(outputs.iter().zip(&r.consequents))
            {
                if t >= v.terms().len() {
                    return Err(bad(format!("term #{t} does not exist in `{}`", v.name())));
                }
            }
            if rules[..i].iter().any(|o| o.antecedents == r.antecedents) {
                return Err(bad("duplicate antecedent combination".into()));
            }
        }
        Ok(Self {
            inputs,
            outputs,
            rules,
        })
    }

    /// Builds rules from label rows: input labels followed by output labels.
    /// Labels go through the printed-table abbreviation list of each variable.
    pub fn from_labels<S: AsRef<str>>(
        inputs: Vec<LinguisticVariable>,
        outputs: Vec<LinguisticVariable>,
        rows: &[Vec<S>],
    ) -> Result<Self, FisError> {
        let width = inputs.len() + outputs.len();
        let mut rules = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(FisError::Rule {
                    rule: i,
                    msg: format!("expected {width} labels, got {}", row.len()),
                });
            }
            let idx = inputs
                .iter()
                .chain(&outputs)
                .zip(row)
                .map(|(v, label)| {
                    super::tables::resolve(
                        v.name(),
                        label.as_ref(),
                        v.terms().iter().map(|(t, _)| t.as_str()),
                    )
                    .ok_or_else(|| FisError::Rule {
                        rule: i,
                        msg: format!("unknown term `{}` for `{}`", label.as_ref(), v.name()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (a, c) = idx.split_at(inputs.len());
            rules.push(Rule1 {
                antecedents: a.to_vec(),
                consequents: c.to_vec(),
            });
        }
        Self::new(inputs, outputs, rules)
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[LinguisticVariable] {
        &self.outputs
    }

    pub fn rules(&self) -> &[Rule1] {
        &self.rules
    }

    /// Each rule rendered as its term labels, inputs then outputs.
    pub fn label_rows(&self) -> Vec<Vec<&str>> {
        self.rules
            .iter()
            .map(|r| {
                self.inputs
                    .iter()
                    .zip(&r.antecedents)
                    .chain(self.outputs.iter().zip(&r.consequents))
                    .map(|(v, &t)| v.terms()[t].0.as_str())
                    .collect()
            })
            .collect()
    }
}

/// Output membership curve sampled uniformly over its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedFuzzySet {
    lo: f64,
    hi: f64,
    samples: Vec<f64>,
}

impl AggregatedFuzzySet {
    pub fn new((lo, hi): (f64, f64), samples: Vec<f64>) -> Result<Self, FisError> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || samples.len() < 2 {
            return Err(FisError::BadSet(
                "need a nonempty domain and at least two samples".into(),
            ));
        }
        if let Some(s) = samples.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return Err(FisError::BadSet(format!("sample {s} outside [0, 1]")));
        }
        Ok(Self { lo, hi, samples })
    }

    /// Samples `f` at `n` uniform points of `[lo, hi]`.
    pub fn from_fn(domain: (f64, f64), n: usize, f: impl Fn(f64) -> f64) -> Result<Self, FisError> {
        let samples = (0..n).map(|i| f(grid_point(domain, n, i))).collect();
        Self::new(domain, samples)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn x_at(&self, i: usize) -> f64 {
        grid_point((self.lo, self.hi), self.samples.len(), i)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|&s| s == 0.0)
    }
}

fn grid_point((lo, hi): (f64, f64), n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Centre of area by the midpoint rule on each sampling interval, with the
/// membership at a midpoint taken as the mean of its two end samples.
pub fn defuzz_coa(set: &AggregatedFuzzySet) -> Result<f64, FisError> {
    let s = &set.samples;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..s.len() - 1 {
        let m = 0.5 * (s[i] + s[i + 1]);
        if m > 0.0 {
            num += m * 0.5 * (set.x_at(i) + set.x_at(i + 1));
            den += m;
        }
    }
    if den == 0.0 {
        return Err(FisError::Degenerate);
    }
    Ok((num / den).clamp(set.lo, set.hi))
}

/// Mamdani engine over a rule base, with consequent curves pre-sampled.
#[derive(Debug, Clone)]
pub struct Mamdani {
    rb: RuleBase1,
    resolution: usize,
    // [output][term][sample]
    curves: Vec<Vec<Vec<f64>>>,
}

impl Mamdani {
    pub fn new(rb: RuleBase1, resolution: usize) -> Result<Self, FisError> {
        if resolution < 2 {
            return Err(FisError::BadSet("resolution must be at least 2".into()));
        }
        let curves = rb
            .outputs
            .iter()
            .map(|v| {
                v.terms()
                    .iter()
                    .map(|(_, mf)| {
                        (0..resolution)
                            .map(|i| mf.eval(grid_point(v.domain(), resolution, i)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            rb,
            resolution,
            curves,
        })
    }

    pub fn rule_base(&self) -> &RuleBase1 {
        &self.rb
    }

    /// Positional inputs, in the rule base's input order, checked against
    /// each variable's domain.
    fn check(&self, crisp: &[f64]) -> Result<(), FisError> {
        if crisp.len() != self.rb.inputs.len() {
            return Err(FisError::MissingInput(format!(
                "expected {} inputs, got {}",
                self.rb.inputs.len(),
                crisp.len()
            )));
        }
        for (v, &x) in self.rb.inputs.iter().zip(crisp) {
            if !v.contains(x) {
                let (lo, hi) = v.domain();
                return Err(FisError::OutOfDomain {
                    var: v.name().to_string(),
                    value: x,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    fn positional(&self, inputs: &[(&str, f64)]) -> Result<Vec<f64>, FisError> {
        self.rb
            .inputs
            .iter()
            .map(|v| {
                inputs
                    .iter()
                    .find(|(n, _)| *n == v.name())
                    .map(|&(_, x)| x)
                    .ok_or_else(|| FisError::MissingInput(v.name().to_string()))
            })
            .collect()
    }

    /// Rule firing strengths (min over antecedent memberships).
    pub fn firing_strengths(&self, crisp: &[f64]) -> Result<Vec<f64>, FisError> {
        self.check(crisp)?;
        Ok(self
            .rb
            .rules
            .iter()
            .map(|r| {
                self.rb
                    .inputs
                    .iter()
                    .zip(&r.antecedents)
                    .zip(crisp)
                    .map(|((v, &t), &x)| v.mf(t).eval(x))
                    .fold(1.0, f64::min)
            })
            .collect())
    }

    /// Clipped consequents aggregated by pointwise max, one set per output.
    pub fn infer_positional(&self, crisp: &[f64]) -> Result<Vec<AggregatedFuzzySet>, FisError> {
        let strengths = self.firing_strengths(crisp)?;
        Ok(self
            .rb
            .outputs
            .iter()
            .enumerate()
            .map(|(o, v)| {
                let mut agg = vec![0.0; self.resolution];
                for (r, &w) in self.rb.rules.iter().zip(&strengths) {
                    if w <= 0.0 {
                        continue;
                    }
                    for (a, &m) in agg.iter_mut().zip(&self.curves[o][r.consequents[o]]) {
                        *a = f64::max(*a, m.min(w));
                    }
                }
                let (lo, hi) = v.domain();
                AggregatedFuzzySet {
                    lo,
                    hi,
                    samples: agg,
                }
            })
            .collect())
    }

    pub fn infer(
        &self,
        inputs: &[(&str, f64)],
    ) -> Result<BTreeMap<String, AggregatedFuzzySet>, FisError> {
        let sets = self.infer_positional(&self.positional(inputs)?)?;
        Ok(self
            .rb
            .outputs
            .iter()
            .map(|v| v.name().to_string())
            .zip(sets)
            .collect())
    }

    /// Crisp outputs in the rule base's output order.
    pub fn evaluate_positional(&self, crisp: &[f64]) -> Result<Vec<f64>, FisError> {
        self.infer_positional(crisp)?
            .iter()
            .map(defuzz_coa)
            .collect()
    }

    pub fn evaluate(&self, inputs: &[(&str, f64)]) -> Result<BTreeMap<String, f64>, FisError> {
        self.infer(inputs)?
            .into_iter()
            .map(|(k, s)| defuzz_coa(&s).map(|x| (k, x)))
            .collect()
    }
}
