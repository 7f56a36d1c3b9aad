//! Interval type-2 inference: interval fuzzification, product firing
//! intervals, Karnik–Mendel type reduction and midpoint defuzzification.

use super::membership::{LinguisticVariable, MembershipFunction};
use super::FisError;

/// Interval membership: an upper function and a lower function scaled by
/// `lower_height`, with `lower <= upper` everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMf {
    upper: MembershipFunction,
    lower: MembershipFunction,
    lower_height: f64,
}

impl IntervalMf {
    pub fn upper(&self) -> &MembershipFunction {
        &self.upper
    }

    pub fn lower(&self) -> &MembershipFunction {
        &self.lower
    }

    pub fn lower_height(&self) -> f64 {
        self.lower_height
    }

    /// `(lower, upper)` membership at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        (self.lower_height * self.lower.eval(x), self.upper.eval(x))
    }
}

/// Footprint of uncertainty around `base`.
///
/// The upper function keeps the plateau and moves each sloped foot outward
/// by `blur * (hi - lo)`, clamped to the domain; the lower function is the
/// base scaled by `1 - blur`.
pub fn make_fou(
    base: &MembershipFunction,
    blur: f64,
    (lo, hi): (f64, f64),
) -> Result<IntervalMf, FisError> {
    if !(0.0..1.0).contains(&blur) {
        return Err(FisError::Blur(blur));
    }
    let widen = blur * (hi - lo);
    let (a, b, c, d) = base.corners();
    let a2 = if a < b { (a - widen).max(lo) } else { a };
    let d2 = if c < d { (d + widen).min(hi) } else { d };
    let upper = match base {
        MembershipFunction::Triangular { .. } => MembershipFunction::Triangular { a: a2, b, c: d2 },
        MembershipFunction::Trapezoidal { .. } => {
            MembershipFunction::Trapezoidal { a: a2, b, c, d: d2 }
        }
    };
    Ok(IntervalMf {
        upper,
        lower: *base,
        lower_height: 1.0 - blur,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiringInterval {
    pub lower: f64,
    pub upper: f64,
}

impl FiringInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self, FisError> {
        if !(0.0 <= lower && lower <= upper && upper <= 1.0) {
            return Err(FisError::Firing(lower, upper));
        }
        Ok(Self { lower, upper })
    }

    /// Product t-norm of two antecedent membership intervals.
    pub fn product((l1, u1): (f64, f64), (l2, u2): (f64, f64)) -> Self {
        Self {
            lower: l1 * l2,
            upper: u1 * u2,
        }
    }
}

/// Left and right end of the type-reduced interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedInterval {
    pub left: f64,
    pub right: f64,
    /// Switch-point updates taken for the left and right end.
    pub iterations: (usize, usize),
}

impl ReducedInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum End {
    Left,
    Right,
}

/// Karnik–Mendel type reduction of `K` firing intervals with consequent
/// weights `weights` (any order; sorted internally, ties by rule index).
pub fn km_type_reduce(
    firings: &[FiringInterval],
    weights: &[f64],
) -> Result<ReducedInterval, FisError> {
    if firings.is_empty() || firings.len() != weights.len() {
        return Err(FisError::Arity {
            firings: firings.len(),
            weights: weights.len(),
        });
    }
    if firings.iter().all(|f| f.upper == 0.0) {
        return Err(FisError::Degenerate);
    }
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| weights[i].total_cmp(&weights[j]));
    let w: Vec<f64> = order.iter().map(|&i| weights[i]).collect();
    let lo: Vec<f64> = order.iter().map(|&i| firings[i].lower).collect();
    let up: Vec<f64> = order.iter().map(|&i| firings[i].upper).collect();

    let (wmin, wmax) = (w[0], w[w.len() - 1]);
    let (mut left, il) = km_end(&w, &lo, &up, End::Left);
    let (mut right, ir) = km_end(&w, &lo, &up, End::Right);
    left = left.clamp(wmin, wmax);
    right = right.clamp(wmin, wmax);
    if left > right {
        // only reachable through rounding when the interval has zero width
        let m = 0.5 * (left + right);
        (left, right) = (m, m);
    }
    Ok(ReducedInterval {
        left,
        right,
        iterations: (il, ir),
    })
}

fn ratio(w: &[f64], f: impl Fn(usize) -> f64) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for (t, &wt) in w.iter().enumerate() {
        let ft = f(t);
        num += ft * wt;
        den += ft;
    }
    (den > 0.0).then(|| num / den)
}

/// One end of the reduced interval. With weights ascending, the left end
/// takes upper firings below the switch point and lower ones above it; the
/// right end does the opposite.
fn km_end(w: &[f64], lo: &[f64], up: &[f64], end: End) -> (f64, usize) {
    let k = w.len();
    let mut y = ratio(w, |t| 0.5 * (lo[t] + up[t])).expect("some upper firing is positive");
    let mut best = None::<f64>;
    let mut switch = usize::MAX;
    let mut iterations = 0;
    // exact arithmetic converges within K updates; the cap guards rounding ties
    while iterations <= k + 1 {
        // rules [0, s) sit at or below y (left) / strictly below y (right)
        let s = match end {
            End::Left => w.partition_point(|&x| x <= y),
            End::Right => w.partition_point(|&x| x < y),
        };
        if s == switch {
            return (y, iterations);
        }
        switch = s;
        iterations += 1;
        let Some(next) = ratio(w, |t| {
            if (t < s) == (end == End::Left) {
                up[t]
            } else {
                lo[t]
            }
        }) else {
            break;
        };
        // a change at rounding level only flips rules whose weight equals y
        let settled = (next - y).abs() <= 4.0 * f64::EPSILON * y.abs().max(1.0);
        y = next;
        if settled {
            return (y, iterations);
        }
        best = Some(match (best, end) {
            (None, _) => y,
            (Some(b), End::Left) => b.min(y),
            (Some(b), End::Right) => b.max(y),
        });
    }
    (best.unwrap_or(y), iterations)
}

/// A type-2 rule over (distance, energy) with radius and chance consequents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule2 {
    pub distance: usize,
    pub energy: usize,
    pub radius: usize,
    pub chance: usize,
}

/// Type-2 rule base: two base input variables, six-term output label sets
/// with one centroid weight per output term, and the rules.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase2 {
    distance: LinguisticVariable,
    energy: LinguisticVariable,
    radius_terms: Vec<String>,
    chance_terms: Vec<String>,
    radius_weights: Vec<f64>,
    chance_weights: Vec<f64>,
    rules: Vec<Rule2>,
}

impl RuleBase2 {
    pub fn new(
        distance: LinguisticVariable,
        energy: LinguisticVariable,
        radius: (Vec<String>, Vec<f64>),
        chance: (Vec<String>, Vec<f64>),
        rules: Vec<Rule2>,
    ) -> Result<Self, FisError> {
        for (name, (terms, w)) in [("radius", &radius), ("chance", &chance)] {
            if terms.len() != w.len() || terms.is_empty() {
                return Err(FisError::Variable {
                    var: name.into(),
                    msg: "one weight per term required".into(),
                });
            }
            if let Some(x) = w.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(FisError::Variable {
                    var: name.into(),
                    msg: format!("weight {x} outside [0, 1]"),
                });
            }
        }
        let (nd, ne) = (distance.terms().len(), energy.terms().len());
        let mut seen = vec![false; nd * ne];
        for (i, r) in rules.iter().enumerate() {
            if r.distance >= nd
                || r.energy >= ne
                || r.radius >= radius.0.len()
                || r.chance >= chance.0.len()
            {
                return Err(FisError::Rule {
                    rule: i,
                    msg: "term index out of range".into(),
                });
            }
            let cell = &mut seen[r.distance * ne + r.energy];
            if *cell {
                return Err(FisError::Rule {
                    rule: i,
                    msg: "duplicate antecedent pair".into(),
                });
            }
            *cell = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(FisError::Rule {
                rule: rules.len(),
                msg: "rules must cover every antecedent pair".into(),
            });
        }
        Ok(Self {
            distance,
            energy,
            radius_terms: radius.0,
            chance_terms: chance.0,
            radius_weights: radius.1,
            chance_weights: chance.1,
            rules,
        })
    }

    /// Rules from `[distance, energy, radius, chance]` label rows.
    pub fn from_labels<S: AsRef<str>>(
        distance: LinguisticVariable,
        energy: LinguisticVariable,
        radius: (Vec<String>, Vec<f64>),
        chance: (Vec<String>, Vec<f64>),
        rows: &[Vec<S>],
    ) -> Result<Self, FisError> {
        use super::tables::resolve;
        let names =
            |v: &LinguisticVariable| v.terms().iter().map(|(t, _)| t.clone()).collect::<Vec<_>>();
        let (dn, en) = (names(&distance), names(&energy));
        let mut rules = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != 4 {
                return Err(FisError::Rule {
                    rule: i,
                    msg: format!("expected 4 labels, got {}", row.len()),
                });
            }
            let look = |var: &str, terms: &[String], label: &str| {
                resolve(var, label, terms.iter().map(String::as_str)).ok_or_else(|| {
                    FisError::Rule {
                        rule: i,
                        msg: format!("unknown term `{label}` for `{var}`"),
                    }
                })
            };
            rules.push(Rule2 {
                distance: look("distance", &dn, row[0].as_ref())?,
                energy: look("energy", &en, row[1].as_ref())?,
                radius: look("radius", &radius.0, row[2].as_ref())?,
                chance: look("chance", &chance.0, row[3].as_ref())?,
            });
        }
        Self::new(distance, energy, radius, chance, rules)
    }

    pub fn distance(&self) -> &LinguisticVariable {
        &self.distance
    }

    pub fn energy(&self) -> &LinguisticVariable {
        &self.energy
    }

    pub fn rules(&self) -> &[Rule2] {
        &self.rules
    }

    pub fn radius_weights(&self) -> &[f64] {
        &self.radius_weights
    }

    pub fn chance_weights(&self) -> &[f64] {
        &self.chance_weights
    }

    pub fn radius_terms(&self) -> &[String] {
        &self.radius_terms
    }

    pub fn chance_terms(&self) -> &[String] {
        &self.chance_terms
    }

    pub fn label_rows(&self) -> Vec<[&str; 4]> {
        self.rules
            .iter()
            .map(|r| {
                [
                    self.distance.terms()[r.distance].0.as_str(),
                    self.energy.terms()[r.energy].0.as_str(),
                    self.radius_terms[r.radius].as_str(),
                    self.chance_terms[r.chance].as_str(),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Type2Output {
    pub radius: f64,
    pub chance: f64,
    pub radius_interval: ReducedInterval,
    pub chance_interval: ReducedInterval,
}

/// Interval type-2 engine: a rule base with footprints built around its
/// input terms.
#[derive(Debug, Clone)]
pub struct Type2Fis {
    rb: RuleBase2,
    distance_fou: Vec<IntervalMf>,
    energy_fou: Vec<IntervalMf>,
}

impl Type2Fis {
    pub fn new(rb: RuleBase2, distance_blur: f64, energy_blur: f64) -> Result<Self, FisError> {
        let fou = |v: &LinguisticVariable, blur| {
            v.terms()
                .iter()
                .map(|(_, mf)| make_fou(mf, blur, v.domain()))
                .collect::<Result<Vec<_>, _>>()
        };
        let distance_fou = fou(&rb.distance, distance_blur)?;
        let energy_fou = fou(&rb.energy, energy_blur)?;
        Ok(Self {
            rb,
            distance_fou,
            energy_fou,
        })
    }

    pub fn rule_base(&self) -> &RuleBase2 {
        &self.rb
    }

    pub fn distance_fou(&self) -> &[IntervalMf] {
        &self.distance_fou
    }

    pub fn energy_fou(&self) -> &[IntervalMf] {
        &self.energy_fou
    }

    fn check(&self, var: &LinguisticVariable, x: f64) -> Result<(), FisError> {
        if var.contains(x) {
            Ok(())
        } else {
            let (lo, hi) = var.domain();
            Err(FisError::OutOfDomain {
                var: var.name().to_string(),
                value: x,
                lo,
                hi,
            })
        }
    }

    /// Firing interval of every rule, in rule order.
    pub fn firing_intervals(&self, db: f64, re: f64) -> Result<Vec<FiringInterval>, FisError> {
        self.check(&self.rb.distance, db)?;
        self.check(&self.rb.energy, re)?;
        Ok(self
            .rb
            .rules
            .iter()
            .map(|r| {
                FiringInterval::product(
                    self.distance_fou[r.distance].eval(db),
                    self.energy_fou[r.energy].eval(re),
                )
            })
            .collect())
    }

    pub fn evaluate(&self, db: f64, re: f64) -> Result<Type2Output, FisError> {
        let firings = self.firing_intervals(db, re)?;
        let rw: Vec<f64> = self
            .rb
            .rules
            .iter()
            .map(|r| self.rb.radius_weights[r.radius])
            .collect();
        let cw: Vec<f64> = self
            .rb
            .rules
            .iter()
            .map(|r| self.rb.chance_weights[r.chance])
            .collect();
        let radius_interval = km_type_reduce(&firings, &rw)?;
        let chance_interval = km_type_reduce(&firings, &cw)?;
        Ok(Type2Output {
            radius: radius_interval.midpoint(),
            chance: chance_interval.midpoint(),
            radius_interval,
            chance_interval,
        })
    }
}
