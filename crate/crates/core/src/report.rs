//! CSV output: per-round metrics, run summaries, cluster and deployment
//! dumps, fuzzy surfaces, and the positions file reader.
//!
//! Every file is comma separated with a header row and LF line endings.
//! Floats are written in shortest round-trip scientific form; absent values
//! are empty fields.

use std::fmt::Write as _;
use std::path::Path;

use crate::fis::{FisError, Mamdani, Type2Fis};
use crate::network::{Network, Point};
use crate::protocols::{NextHop, ProtocolKind, RoundPlan};
use crate::simulator::{RoundMetrics, SimResult};

pub const METRICS_HEADER: &str = "round,alive,dead,total_J,avg_J,ch_count";
pub const SUMMARY_HEADER: &str =
    "seed,protocol,fnd,hnd,lnd,fnd_dissipation,hnd_dissipation,orphans,fis_fallbacks";
pub const CLUSTERS_HEADER: &str = "round,ch_id,member_id,radius,next_hop";
pub const DEPLOYMENT_HEADER: &str = "id,x,y,energy_J";

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f(v: Option<f64>) -> String {
    v.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn metrics_csv(rounds: &[RoundMetrics]) -> String {
    let mut s = String::with_capacity(48 * (rounds.len() + 1));
    s.push_str(METRICS_HEADER);
    s.push('\n');
    for m in rounds {
        let _ = writeln!(
            s,
            "{},{},{},{:e},{:e},{}",
            m.round, m.alive, m.dead, m.total_energy, m.avg_energy, m.ch_count
        );
    }
    s
}

/// Writes `contents` to `path`, mapping failures to a path-naming error.
pub fn write_file(path: &Path, contents: &str) -> Result<(), crate::Error> {
    std::fs::write(path, contents).map_err(|source| crate::Error::Io {
        path: path.into(),
        source,
    })
}

pub fn write_metrics_csv(result: &SimResult, path: &Path) -> Result<(), crate::Error> {
    write_file(path, &metrics_csv(&result.rounds))
}

/// One row of the metrics file as read back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRow {
    pub round: u64,
    pub alive: usize,
    pub dead: usize,
    pub total_energy: f64,
    pub avg_energy: f64,
    pub ch_count: usize,
}

impl From<&RoundMetrics> for MetricsRow {
    fn from(m: &RoundMetrics) -> Self {
        Self {
            round: m.round,
            alive: m.alive,
            dead: m.dead,
            total_energy: m.total_energy,
            avg_energy: m.avg_energy,
            ch_count: m.ch_count,
        }
    }
}

/// Error text for a malformed CSV line (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct CsvError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for CsvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

fn field<T: std::str::FromStr>(cols: &[&str], i: usize, line: usize) -> Result<T, CsvError> {
    let raw = cols.get(i).ok_or(CsvError {
        line,
        msg: format!("missing column {}", i + 1),
    })?;
    raw.trim().parse().map_err(|_| CsvError {
        line,
        msg: format!("cannot parse `{raw}`"),
    })
}

fn opt_field<T: std::str::FromStr>(
    cols: &[&str],
    i: usize,
    line: usize,
) -> Result<Option<T>, CsvError> {
    match cols.get(i).map(|s| s.trim()) {
        None | Some("") => Ok(None),
        Some(_) => field(cols, i, line).map(Some),
    }
}

/// Data lines after a header that must equal `header`.
fn body<'a>(
    text: &'a str,
    header: &str,
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)>, CsvError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(header) {
        return Err(CsvError {
            line: 1,
            msg: format!("expected header `{header}`"),
        });
    }
    Ok(lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 2, l.split(',').collect())))
}

pub fn read_metrics_csv(text: &str) -> Result<Vec<MetricsRow>, CsvError> {
    body(text, METRICS_HEADER)?
        .map(|(n, c)| {
            Ok(MetricsRow {
                round: field(&c, 0, n)?,
                alive: field(&c, 1, n)?,
                dead: field(&c, 2, n)?,
                total_energy: field(&c, 3, n)?,
                avg_energy: field(&c, 4, n)?,
                ch_count: field(&c, 5, n)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub seed: u64,
    pub protocol: ProtocolKind,
    pub fnd: Option<u64>,
    pub hnd: Option<u64>,
    pub lnd: Option<u64>,
    pub fnd_dissipation: Option<f64>,
    pub hnd_dissipation: Option<f64>,
    pub orphans: usize,
    pub fis_fallbacks: usize,
}

impl SummaryRow {
    pub fn from_result(protocol: ProtocolKind, r: &SimResult) -> Self {
        Self {
            seed: r.seed,
            protocol,
            fnd: r.lifetime.fnd,
            hnd: r.lifetime.hnd,
            lnd: r.lifetime.lnd,
            fnd_dissipation: r.fnd_dissipation,
            hnd_dissipation: r.hnd_dissipation,
            orphans: r.rounds.iter().map(|m| m.orphans).sum(),
            fis_fallbacks: r.rounds.iter().map(|m| m.fis_fallbacks).sum(),
        }
    }
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.seed,
            r.protocol,
            opt(r.fnd),
            opt(r.hnd),
            opt(r.lnd),
            opt_f(r.fnd_dissipation),
            opt_f(r.hnd_dissipation),
            r.orphans,
            r.fis_fallbacks
        );
    }
    s
}

pub fn write_summary_csv(rows: &[SummaryRow], path: &Path) -> Result<(), crate::Error> {
    write_file(path, &summary_csv(rows))
}

pub fn read_summary_csv(text: &str) -> Result<Vec<SummaryRow>, CsvError> {
    body(text, SUMMARY_HEADER)?
        .map(|(n, c)| {
            Ok(SummaryRow {
                seed: field(&c, 0, n)?,
                protocol: field(&c, 1, n)?,
                fnd: opt_field(&c, 2, n)?,
                hnd: opt_field(&c, 3, n)?,
                lnd: opt_field(&c, 4, n)?,
                fnd_dissipation: opt_field(&c, 5, n)?,
                hnd_dissipation: opt_field(&c, 6, n)?,
                orphans: field(&c, 7, n)?,
                fis_fallbacks: field(&c, 8, n)?,
            })
        })
        .collect()
}

/// Appends one round's clusters: a row per member, or a single row with an
/// empty member for a head that has none. Radius is in metres; next hop is
/// `bs` or a head id.
pub fn append_clusters(s: &mut String, round: u64, plan: &RoundPlan) {
    for c in &plan.clusters {
        let hop = match plan.routes.next_hop(c.head) {
            Some(NextHop::Ch(id)) => id.to_string(),
            _ => "bs".to_string(),
        };
        if c.members.is_empty() {
            let _ = writeln!(s, "{round},{},,{:e},{hop}", c.head, c.radius);
        }
        for m in &c.members {
            let _ = writeln!(s, "{round},{},{m},{:e},{hop}", c.head, c.radius);
        }
    }
}

pub fn deployment_csv(net: &Network) -> String {
    let mut s = String::from(DEPLOYMENT_HEADER);
    s.push('\n');
    for n in net.nodes() {
        let _ = writeln!(s, "{},{:e},{:e},{:e}", n.id, n.pos.x, n.pos.y, n.energy());
    }
    s
}

/// Reads `id,x,y[,energy_J]` rows (header optional). Ids must be exactly
/// `0..n` in some order; the result is in id order.
pub fn read_positions(text: &str) -> Result<Vec<(Point, Option<f64>)>, CsvError> {
    let mut rows: Vec<(usize, Point, Option<f64>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let c: Vec<&str> = line.split(',').collect();
        if i == 0 && c[0].trim().parse::<usize>().is_err() {
            continue;
        }
        if !(3..=4).contains(&c.len()) {
            return Err(CsvError {
                line: n,
                msg: "expected id,x,y[,energy_J]".into(),
            });
        }
        rows.push((
            field(&c, 0, n)?,
            Point::new(field(&c, 1, n)?, field(&c, 2, n)?),
            opt_field(&c, 3, n)?,
        ));
    }
    rows.sort_by_key(|r| r.0);
    for (want, r) in rows.iter().enumerate() {
        if r.0 != want {
            return Err(CsvError {
                line: 0,
                msg: format!(
                    "node ids must be 0..{} without gaps; found {}",
                    rows.len(),
                    r.0
                ),
            });
        }
    }
    Ok(rows.into_iter().map(|(_, p, e)| (p, e)).collect())
}

/// Normalized radius and chance of the type-2 engine over a `steps`×`steps`
/// grid of distance and residual energy.
pub fn type2_surface_csv(fis: &Type2Fis, steps: usize) -> Result<String, FisError> {
    let mut s = String::from("db,re,radius,chance\n");
    let at = |i: usize| i as f64 / (steps - 1) as f64;
    for i in 0..steps {
        for j in 0..steps {
            let o = fis.evaluate(at(i), at(j))?;
            let _ = writeln!(s, "{:e},{:e},{:e},{:e}", at(i), at(j), o.radius, o.chance);
        }
    }
    Ok(s)
}

/// Type-1 outputs over a `steps`³ grid; points where no rule fires leave
/// both outputs empty.
pub fn type1_surface_csv(fis: &Mamdani, steps: usize) -> Result<String, FisError> {
    let mut s = String::from("db,re,conc,radius,chance\n");
    let at = |i: usize| i as f64 / (steps - 1) as f64;
    for i in 0..steps {
        for j in 0..steps {
            for k in 0..steps {
                let (d, e, c) = (at(i), at(j), at(k));
                match fis.evaluate_positional(&[d, e, c]) {
                    Ok(v) => {
                        let _ = writeln!(s, "{d:e},{e:e},{c:e},{:e},{:e}", v[0], v[1]);
                    }
                    Err(FisError::Degenerate) => {
                        let _ = writeln!(s, "{d:e},{e:e},{c:e},,");
                    }
                    Err(err) => return Err(err),
                }
            }
        }
    }
    Ok(s)
}
