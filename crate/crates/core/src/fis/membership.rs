//! Piecewise-linear membership functions and linguistic variables.

use std::fmt;

use super::FisError;

/// Triangular or trapezoidal membership function.
///
/// Shoulders are allowed: a trapezoid with `a == b` is flat from its left
/// edge, which is how the outermost terms of a partition are expressed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipFunction {
    Triangular { a: f64, b: f64, c: f64 },
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FisError> {
        check_breakpoints(&[a, b, c])?;
        Ok(Self::Triangular { a, b, c })
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FisError> {
        check_breakpoints(&[a, b, c, d])?;
        Ok(Self::Trapezoidal { a, b, c, d })
    }

    /// Breakpoints as a trapezoid `(a, b, c, d)`; a triangle has `b == c`.
    pub fn corners(&self) -> (f64, f64, f64, f64) {
        match *self {
            Self::Triangular { a, b, c } => (a, b, b, c),
            Self::Trapezoidal { a, b, c, d } => (a, b, c, d),
        }
    }

    /// Membership degree at `x`, always in `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b, c, d) = self.corners();
        if x < a || x > d {
            0.0
        } else if x >= b && x <= c {
            1.0
        } else if x < b {
            (x - a) / (b - a)
        } else {
            (d - x) / (d - c)
        }
    }

    /// Closed support `[a, d]`.
    pub fn support(&self) -> (f64, f64) {
        let (a, _, _, d) = self.corners();
        (a, d)
    }

    /// Centre of the plateau (the apex for a triangle).
    pub fn peak(&self) -> f64 {
        let (_, b, c, _) = self.corners();
        0.5 * (b + c)
    }

    /// Centroid of the area under the function, in closed form.
    pub fn centroid(&self) -> f64 {
        let (a, b, c, d) = self.corners();
        // left ramp, plateau, right ramp
        let parts = [
            (0.5 * (b - a), a + 2.0 * (b - a) / 3.0),
            (c - b, 0.5 * (b + c)),
            (0.5 * (d - c), c + (d - c) / 3.0),
        ];
        let area: f64 = parts.iter().map(|p| p.0).sum();
        if area == 0.0 {
            return b;
        }
        parts.iter().map(|p| p.0 * p.1).sum::<f64>() / area
    }
}

impl fmt::Display for MembershipFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Triangular { a, b, c } => write!(f, "tri:{a},{b},{c}"),
            Self::Trapezoidal { a, b, c, d } => write!(f, "trap:{a},{b},{c},{d}"),
        }
    }
}

impl std::str::FromStr for MembershipFunction {
    type Err = FisError;

    /// Parses `tri:a,b,c` or `trap:a,b,c,d`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FisError::BadShape(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let pts = rest
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        match (kind.trim(), pts.as_slice()) {
            ("tri", &[a, b, c]) => Self::triangular(a, b, c),
            ("trap", &[a, b, c, d]) => Self::trapezoidal(a, b, c, d),
            _ => Err(bad()),
        }
    }
}

fn check_breakpoints(pts: &[f64]) -> Result<(), FisError> {
    if pts.iter().any(|p| !p.is_finite()) || pts.windows(2).any(|w| w[0] > w[1]) {
        return Err(FisError::Breakpoints(pts.to_vec()));
    }
    Ok(())
}

/// A named input or output of a fuzzy system with its ordered term set.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<(String, MembershipFunction)>,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        (lo, hi): (f64, f64),
        terms: Vec<(String, MembershipFunction)>,
    ) -> Result<Self, FisError> {
        let name = name.into();
        if lo.is_nan() || hi.is_nan() || lo >= hi || terms.is_empty() {
            return Err(FisError::Variable {
                var: name,
                msg: "empty domain or no terms".into(),
            });
        }
        for (i, (t, mf)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(o, _)| o == t) {
                return Err(FisError::Variable {
                    var: name,
                    msg: format!("duplicate term `{t}`"),
                });
            }
            let (s0, s1) = mf.support();
            if s0 < lo || s1 > hi {
                return Err(FisError::Variable {
                    var: name,
                    msg: format!("term `{t}` support [{s0}, {s1}] leaves domain [{lo}, {hi}]"),
                });
            }
        }
        let var = Self {
            name,
            lo,
            hi,
            terms,
        };
        if let Some(x) = var.coverage_hole() {
            return Err(FisError::Variable {
                var: var.name,
                msg: format!("no term covers x = {x}"),
            });
        }
        Ok(var)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn terms(&self) -> &[(String, MembershipFunction)] {
        &self.terms
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|(t, _)| t == label)
    }

    pub fn mf(&self, term: usize) -> &MembershipFunction {
        &self.terms[term].1
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Some point of the domain where every term is zero, if one exists.
    ///
    /// Membership is piecewise linear, so checking every breakpoint and
    /// every midpoint between consecutive breakpoints is exhaustive.
    fn coverage_hole(&self) -> Option<f64> {
        let mut pts: Vec<f64> = vec![self.lo, self.hi];
        for (_, mf) in &self.terms {
            let (a, b, c, d) = mf.corners();
            pts.extend([a, b, c, d]);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mids: Vec<f64> = pts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        pts.into_iter()
            .chain(mids)
            .find(|&x| self.terms.iter().all(|(_, mf)| mf.eval(x) == 0.0))
    }
}

/// Three-term input partition over `[0, 1]`: shoulder, triangle, shoulder.
pub fn three_term_input(labels: [&str; 3]) -> Vec<(String, MembershipFunction)> {
    let shapes = [
        MembershipFunction::Trapezoidal {
            a: 0.0,
            b: 0.0,
            c: 0.2,
            d: 0.4,
        },
        MembershipFunction::Triangular {
            a: 0.2,
            b: 0.5,
            c: 0.8,
        },
        MembershipFunction::Trapezoidal {
            a: 0.6,
            b: 0.8,
            c: 1.0,
            d: 1.0,
        },
    ];
    labels.iter().map(|l| l.to_string()).zip(shapes).collect()
}

/// Evenly spaced partition of `[0, 1]` into `labels.len()` terms.
///
/// With `u = 1/n`, interior term `i` peaks at `(i + 0.5)·u` with feet one
/// `u` either side; the two end terms are shoulders flat over the outer
/// half-cell. Adjacent terms sum to one everywhere.
pub fn even_partition(labels: &[&str]) -> Vec<(String, MembershipFunction)> {
    let n = labels.len();
    assert!(n >= 2, "a partition needs at least two terms");
    let u = 1.0 / n as f64;
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let centre = (i as f64 + 0.5) * u;
            let mf = if i == 0 {
                MembershipFunction::Trapezoidal {
                    a: 0.0,
                    b: 0.0,
                    c: 0.5 * u,
                    d: 1.5 * u,
                }
            } else if i == n - 1 {
                MembershipFunction::Trapezoidal {
                    a: 1.0 - 1.5 * u,
                    b: 1.0 - 0.5 * u,
                    c: 1.0,
                    d: 1.0,
                }
            } else {
                MembershipFunction::Triangular {
                    a: centre - u,
                    b: centre,
                    c: centre + u,
                }
            };
            (l.to_string(), mf)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_values() {
        let t = MembershipFunction::triangular(0.2, 0.5, 0.8).unwrap();
        assert_eq!(t.eval(0.5), 1.0);
        assert!((t.eval(0.35) - 0.5).abs() < 1e-12);
        assert_eq!(t.eval(0.2), 0.0);
        assert_eq!(t.eval(0.8), 0.0);
        assert_eq!(t.eval(0.9), 0.0);
    }

    #[test]
    fn trapezoid_values() {
        let t = MembershipFunction::trapezoidal(0.6, 0.8, 1.0, 1.0).unwrap();
        assert_eq!(t.eval(0.1), 0.0);
        assert_eq!(t.eval(1.0), 1.0);
        assert!((t.eval(0.7) - 0.5).abs() < 1e-12);
        let left = MembershipFunction::trapezoidal(0.0, 0.0, 0.2, 0.4).unwrap();
        assert_eq!(left.eval(0.0), 1.0);
        assert!((left.eval(0.3) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn malformed_breakpoints_rejected() {
        assert!(MembershipFunction::triangular(0.5, 0.2, 0.8).is_err());
        assert!(MembershipFunction::trapezoidal(0.0, 0.3, 0.2, 0.4).is_err());
        assert!(MembershipFunction::triangular(0.0, f64::NAN, 0.8).is_err());
    }

    #[test]
    fn parse_round_trips() {
        let t: MembershipFunction = "trap:0,0,0.2,0.4".parse().unwrap();
        assert_eq!(
            t,
            MembershipFunction::Trapezoidal {
                a: 0.0,
                b: 0.0,
                c: 0.2,
                d: 0.4
            }
        );
        assert_eq!(t.to_string().parse::<MembershipFunction>().unwrap(), t);
        assert!("tri:0,1".parse::<MembershipFunction>().is_err());
        assert!("gauss:0,1,2".parse::<MembershipFunction>().is_err());
    }

    #[test]
    fn centroid_closed_form() {
        let t = MembershipFunction::triangular(0.2, 0.5, 0.8).unwrap();
        assert!((t.centroid() - 0.5).abs() < 1e-12);
        // right triangle on [0, 3] with apex at 0: centroid at 1
        let r = MembershipFunction::trapezoidal(0.0, 0.0, 0.0, 3.0).unwrap();
        assert!((r.centroid() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn even_partition_sums_to_one() {
        for n in [3, 6, 7, 9] {
            let labels: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let p = even_partition(&refs);
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let s: f64 = p.iter().map(|(_, mf)| mf.eval(x)).sum();
                assert!((s - 1.0).abs() < 1e-12, "n={n} x={x} sum={s}");
            }
        }
    }

    #[test]
    fn variable_validation() {
        let ok = LinguisticVariable::new("d", (0.0, 1.0), three_term_input(["a", "b", "c"]));
        assert!(ok.is_ok());
        let mut dup = three_term_input(["a", "b", "c"]);
        dup[2].0 = "a".into();
        assert!(LinguisticVariable::new("d", (0.0, 1.0), dup).is_err());
        let hole = vec![
            (
                "lo".to_string(),
                MembershipFunction::triangular(0.0, 0.1, 0.3).unwrap(),
            ),
            (
                "hi".to_string(),
                MembershipFunction::triangular(0.5, 0.9, 1.0).unwrap(),
            ),
        ];
        assert!(LinguisticVariable::new("d", (0.0, 1.0), hole).is_err());
        let outside = vec![(
            "x".to_string(),
            MembershipFunction::triangular(-0.5, 0.5, 1.0).unwrap(),
        )];
        assert!(LinguisticVariable::new("d", (0.0, 1.0), outside).is_err());
    }
}
