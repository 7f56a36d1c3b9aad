//! Scenario presets and the flat `key = value` configuration format.
//!
//! Lines are `key = value`; `#` starts a comment. A `preset = <name>` line
//! loads a shipped scenario first, whatever its position, and the remaining
//! keys override it. Energy constants carry their unit in the key and are
//! converted to SI on load.
//!
//! | key | unit / values |
//! |-----|---------------|
//! | `nodes`, `area_side_m`, `bs_x_m`, `bs_y_m`, `initial_energy_j` | scenario |
//! | `e_elec_nj`, `eps_fs_pj`, `eps_mp_pj`, `e_da_nj` | nJ/bit, pJ/bit/m², pJ/bit/m⁴, nJ/bit/signal |
//! | `packet_bits`, `ctrl_bits` | bits |
//! | `protocol` | `leach`, `fuzzy-unequal`, `type2fl` |
//! | `p`, `r_min_m`, `r_max_m`, `nbr_radius_m`, `threshold_direction` | protocol |
//! | `max_rounds`, `seed`, `control_traffic` | run |
//! | `fis.resolution` | output samples of the type-1 engine |
//! | `t1.<variable>.<term>`, `t2.<variable>.<term>` | `tri:a,b,c` or `trap:a,b,c,d` |
//! | `t2.blur`, `t2.blur.distance`, `t2.blur.energy` | footprint width in `[0, 1)` |
//! | `t2.weight.radius.<term>`, `t2.weight.chance.<term>` | consequent centroid |
//! | `t1.rule`, `t2.rule` | `in, in, in -> out, out`; the first one replaces the shipped table |
//!
//! Term names in keys are lower case with `_` for spaces (`t1.radius.very_small`).
//! Unset `r_min_m`/`r_max_m` default to 0.1·M and 0.4·M, `nbr_radius_m` to the
//! radio threshold distance, and `threshold_direction` to the protocol's own.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::energy::RadioParams;
use crate::fis::{FisConfig, MembershipFunction};
use crate::network::Point;
use crate::protocols::{ProtocolKind, ProtocolParams, ThresholdDirection};
use crate::simulator::{SimConfig, DEFAULT_MAX_ROUNDS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown preset `{0}` (known: ch2-scenario1, ch2-scenario2, ch3)")]
    UnknownPreset(String),
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("`{field}`: cannot parse `{value}`")]
    Invalid { field: String, value: String },
    #[error("`{field}` out of range: {msg}")]
    OutOfRange { field: String, msg: String },
    #[error("fuzzy system: {0}")]
    Fis(String),
}

fn out_of_range(field: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::OutOfRange {
        field: field.to_string(),
        msg: msg.into(),
    }
}

pub const PRESETS: [&str; 3] = ["ch2-scenario1", "ch2-scenario2", "ch3"];

/// Text of a shipped preset.
pub fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "ch2-scenario1" => {
            "nodes = 100\narea_side_m = 100\nbs_x_m = 50\nbs_y_m = 175\ninitial_energy_j = 0.5\n\
             e_elec_nj = 50\neps_fs_pj = 10\neps_mp_pj = 0.0013\ne_da_nj = 5\n\
             packet_bits = 4000\nctrl_bits = 200\nprotocol = fuzzy-unequal\np = 0.05\n"
        }
        "ch2-scenario2" => {
            "nodes = 1000\narea_side_m = 1000\nbs_x_m = 500\nbs_y_m = 1750\ninitial_energy_j = 0.5\n\
             e_elec_nj = 50\neps_fs_pj = 10\neps_mp_pj = 0.0013\ne_da_nj = 5\n\
             packet_bits = 4000\nctrl_bits = 200\nprotocol = fuzzy-unequal\np = 0.05\n"
        }
        "ch3" => {
            "nodes = 100\narea_side_m = 100\nbs_x_m = 50\nbs_y_m = 50\ninitial_energy_j = 1\n\
             e_elec_nj = 50\neps_fs_pj = 10\neps_mp_pj = 0.0010\ne_da_nj = 5\n\
             packet_bits = 4000\nctrl_bits = 200\nprotocol = type2fl\np = 0.05\n"
        }
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<SimConfig, ConfigError> {
    build_config(Some(name), "", &[])
}

/// A shipped preset by name, otherwise a config file at that path.
pub fn load_config(name_or_path: &str) -> Result<SimConfig, crate::Error> {
    if preset_text(name_or_path).is_some() {
        return Ok(preset(name_or_path)?);
    }
    let path = std::path::Path::new(name_or_path);
    let text = std::fs::read_to_string(path).map_err(|source| crate::Error::Io {
        path: path.into(),
        source,
    })?;
    Ok(parse_config(&text)?)
}

/// Parses a config file body (which may name a preset).
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    build_config(None, text, &[])
}

/// Loads a config from a preset `base`, then `text`, then `overrides`
/// (later keys win).
pub fn build_config(
    base: Option<&str>,
    text: &str,
    overrides: &[(String, String)],
) -> Result<SimConfig, ConfigError> {
    let mut lines = Vec::new();
    let mut presets: Vec<String> = base.map(String::from).into_iter().collect();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or(ConfigError::Syntax { line: i + 1 })?;
        let (k, v) = (k.trim(), v.trim());
        if k == "preset" {
            presets.push(v.to_string());
        } else {
            lines.push((i + 1, k.to_string(), v.to_string()));
        }
    }
    let mut draft = Draft::default();
    for name in presets {
        let body = preset_text(&name).ok_or(ConfigError::UnknownPreset(name))?;
        for (i, l) in body.lines().enumerate() {
            let (k, v) = l.split_once('=').expect("preset lines are well formed");
            draft.apply(i + 1, k.trim(), v.trim())?;
        }
    }
    for (line, k, v) in &lines {
        draft.apply(*line, k, v)?;
    }
    for (k, v) in overrides {
        draft.apply(0, k, v)?;
    }
    let cfg = draft.finish()?;
    validate(&cfg)?;
    Ok(cfg)
}

/// Range checks shared by every way of building a config.
pub fn validate(cfg: &SimConfig) -> Result<(), ConfigError> {
    if cfg.nodes == 0 {
        return Err(out_of_range("nodes", "need at least one node"));
    }
    if !(cfg.area_side > 0.0 && cfg.area_side.is_finite()) {
        return Err(out_of_range("area_side_m", "must be positive"));
    }
    if !(cfg.initial_energy > 0.0 && cfg.initial_energy.is_finite()) {
        return Err(out_of_range("initial_energy_j", "must be positive"));
    }
    if let Some(f) = cfg.radio.invalid_field() {
        let key = match f {
            "e_elec" => "e_elec_nj",
            "eps_fs" => "eps_fs_pj",
            "eps_mp" => "eps_mp_pj",
            "e_da" => "e_da_nj",
            other => other,
        };
        return Err(out_of_range(key, "must be positive"));
    }
    let p = &cfg.protocol;
    if !(p.p > 0.0 && p.p < 1.0) {
        return Err(out_of_range("p", format!("{} not in (0, 1)", p.p)));
    }
    if p.r_min.is_nan() || p.r_min <= 0.0 {
        return Err(out_of_range("r_min_m", "must be positive"));
    }
    if p.r_max.is_nan() || p.r_min >= p.r_max {
        return Err(out_of_range(
            "r_max_m",
            format!("{} must exceed r_min_m = {}", p.r_max, p.r_min),
        ));
    }
    if p.nbr_radius.is_nan() || p.nbr_radius <= 0.0 {
        return Err(out_of_range("nbr_radius_m", "must be positive"));
    }
    if cfg.max_rounds == 0 {
        return Err(out_of_range("max_rounds", "must be at least 1"));
    }
    if let Some(pos) = &cfg.positions {
        if pos.len() != cfg.nodes {
            return Err(out_of_range(
                "nodes",
                format!("{} but the positions file has {}", cfg.nodes, pos.len()),
            ));
        }
    }
    Ok(())
}

#[derive(Default)]
struct Draft {
    nodes: Option<usize>,
    area_side: Option<f64>,
    bs_x: Option<f64>,
    bs_y: Option<f64>,
    initial_energy: Option<f64>,
    e_elec: Option<f64>,
    eps_fs: Option<f64>,
    eps_mp: Option<f64>,
    e_da: Option<f64>,
    packet_bits: Option<f64>,
    ctrl_bits: Option<f64>,
    protocol: Option<ProtocolKind>,
    p: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    nbr_radius: Option<f64>,
    direction: Option<ThresholdDirection>,
    max_rounds: Option<u64>,
    seed: Option<u64>,
    control_traffic: Option<bool>,
    fis: FisConfig,
    t1_rules_replaced: bool,
    t2_rules_replaced: bool,
}

fn parse<T: FromStr>(field: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Invalid {
        field: field.to_string(),
        value: value.to_string(),
    })
}

fn key_name(term: &str) -> String {
    term.to_ascii_lowercase().replace(' ', "_")
}

/// `a, b, c -> d, e` into five labels.
fn parse_rule(field: &str, value: &str) -> Result<Vec<String>, ConfigError> {
    let (lhs, rhs) = value.split_once("->").ok_or_else(|| ConfigError::Invalid {
        field: field.to_string(),
        value: value.to_string(),
    })?;
    Ok(lhs
        .split(',')
        .chain(rhs.split(','))
        .map(|s| s.trim().to_string())
        .collect())
}

impl Draft {
    fn apply(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let nano = |v: &str, k: &str| parse::<f64>(k, v).map(|x| x / 1e9);
        let pico = |v: &str, k: &str| parse::<f64>(k, v).map(|x| x / 1e12);
        match key {
            "nodes" => self.nodes = Some(parse(key, value)?),
            "area_side_m" => self.area_side = Some(parse(key, value)?),
            "bs_x_m" => self.bs_x = Some(parse(key, value)?),
            "bs_y_m" => self.bs_y = Some(parse(key, value)?),
            "initial_energy_j" => self.initial_energy = Some(parse(key, value)?),
            "e_elec_nj" => self.e_elec = Some(nano(value, key)?),
            "eps_fs_pj" => self.eps_fs = Some(pico(value, key)?),
            "eps_mp_pj" => self.eps_mp = Some(pico(value, key)?),
            "e_da_nj" => self.e_da = Some(nano(value, key)?),
            "packet_bits" => self.packet_bits = Some(parse(key, value)?),
            "ctrl_bits" => self.ctrl_bits = Some(parse(key, value)?),
            "protocol" => self.protocol = Some(parse(key, value)?),
            "p" => self.p = Some(parse(key, value)?),
            "r_min_m" => self.r_min = Some(parse(key, value)?),
            "r_max_m" => self.r_max = Some(parse(key, value)?),
            "nbr_radius_m" => self.nbr_radius = Some(parse(key, value)?),
            "threshold_direction" => self.direction = Some(parse(key, value)?),
            "max_rounds" => self.max_rounds = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "control_traffic" => self.control_traffic = Some(parse(key, value)?),
            "fis.resolution" => self.fis.resolution = parse(key, value)?,
            "t2.blur" => {
                let b = parse(key, value)?;
                self.fis.blur_distance = b;
                self.fis.blur_energy = b;
            }
            "t2.blur.distance" => self.fis.blur_distance = parse(key, value)?,
            "t2.blur.energy" => self.fis.blur_energy = parse(key, value)?,
            "t1.rule" => {
                if !self.t1_rules_replaced {
                    self.fis.t1_rules.clear();
                    self.t1_rules_replaced = true;
                }
                self.fis.t1_rules.push(parse_rule(key, value)?);
            }
            "t2.rule" => {
                if !self.t2_rules_replaced {
                    self.fis.t2_rules.clear();
                    self.t2_rules_replaced = true;
                }
                self.fis.t2_rules.push(parse_rule(key, value)?);
            }
            _ => return self.apply_term(line, key, value),
        }
        Ok(())
    }

    /// `t1.<var>.<term>`, `t2.<var>.<term>` and `t2.weight.<output>.<term>`.
    fn apply_term(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let unknown = || ConfigError::UnknownKey {
            line,
            key: key.to_string(),
        };
        let parts: Vec<&str> = key.splitn(4, '.').collect();
        match parts.as_slice() {
            ["t2", "weight", output, term] => {
                let weights = match *output {
                    "radius" => &mut self.fis.t2_radius_weights,
                    "chance" => &mut self.fis.t2_chance_weights,
                    _ => return Err(unknown()),
                };
                let slot = weights
                    .iter_mut()
                    .find(|(t, _)| key_name(t) == *term)
                    .ok_or_else(unknown)?;
                slot.1 = parse(key, value)?;
            }
            [engine, var, term] => {
                let set = self.fis.term_set_mut(engine, var).ok_or_else(unknown)?;
                let slot = set
                    .iter_mut()
                    .find(|(t, _)| key_name(t) == *term)
                    .ok_or_else(unknown)?;
                slot.1 = value
                    .parse::<MembershipFunction>()
                    .map_err(|_| ConfigError::Invalid {
                        field: key.to_string(),
                        value: value.to_string(),
                    })?;
            }
            _ => return Err(unknown()),
        }
        Ok(())
    }

    fn finish(self) -> Result<SimConfig, ConfigError> {
        use ConfigError::MissingKey;
        let area_side = self.area_side.ok_or(MissingKey("area_side_m"))?;
        let radio = RadioParams {
            e_elec: self.e_elec.ok_or(MissingKey("e_elec_nj"))?,
            eps_fs: self.eps_fs.ok_or(MissingKey("eps_fs_pj"))?,
            eps_mp: self.eps_mp.ok_or(MissingKey("eps_mp_pj"))?,
            e_da: self.e_da.ok_or(MissingKey("e_da_nj"))?,
            packet_bits: self.packet_bits.ok_or(MissingKey("packet_bits"))?,
            ctrl_bits: self.ctrl_bits.ok_or(MissingKey("ctrl_bits"))?,
        };
        let kind = self.protocol.ok_or(MissingKey("protocol"))?;
        let nbr_radius = match self.nbr_radius {
            Some(r) => r,
            None => {
                if radio.invalid_field().is_some() {
                    return Err(out_of_range(
                        "eps_fs_pj",
                        "radio constants must be positive",
                    ));
                }
                radio.threshold_distance()
            }
        };
        if !(0.0..1.0).contains(&self.fis.blur_distance) {
            return Err(out_of_range("t2.blur.distance", "must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.fis.blur_energy) {
            return Err(out_of_range("t2.blur.energy", "must lie in [0, 1)"));
        }
        if self.fis.resolution < 2 {
            return Err(out_of_range("fis.resolution", "need at least 2 samples"));
        }
        // both engines must build from the configured shapes and rules
        self.fis
            .type1_rule_base()
            .map_err(|e| ConfigError::Fis(format!("type-1: {e}")))?;
        self.fis
            .type2_rule_base()
            .map_err(|e| ConfigError::Fis(format!("type-2: {e}")))?;
        Ok(SimConfig {
            nodes: self.nodes.ok_or(MissingKey("nodes"))?,
            area_side,
            bs: Point::new(
                self.bs_x.ok_or(MissingKey("bs_x_m"))?,
                self.bs_y.ok_or(MissingKey("bs_y_m"))?,
            ),
            initial_energy: self.initial_energy.ok_or(MissingKey("initial_energy_j"))?,
            radio,
            protocol: ProtocolParams {
                kind,
                p: self.p.unwrap_or(0.05),
                r_min: self.r_min.unwrap_or(0.1 * area_side),
                r_max: self.r_max.unwrap_or(0.4 * area_side),
                nbr_radius,
                threshold_direction: self.direction.unwrap_or(kind.default_direction()),
            },
            max_rounds: self.max_rounds.unwrap_or(DEFAULT_MAX_ROUNDS),
            seed: self.seed.unwrap_or(1),
            control_traffic: self.control_traffic.unwrap_or(true),
            fis: self.fis,
            positions: None,
        })
    }
}

/// Writes `cfg` back out in the config format; `parse_config` of the result
/// reproduces it (positions excepted).
pub fn render_config(cfg: &SimConfig) -> String {
    let mut s = String::new();
    let r = &cfg.radio;
    let p = &cfg.protocol;
    let _ = writeln!(s, "nodes = {}", cfg.nodes);
    let _ = writeln!(s, "area_side_m = {:?}", cfg.area_side);
    let _ = writeln!(s, "bs_x_m = {:?}", cfg.bs.x);
    let _ = writeln!(s, "bs_y_m = {:?}", cfg.bs.y);
    let _ = writeln!(s, "initial_energy_j = {:?}", cfg.initial_energy);
    let _ = writeln!(s, "e_elec_nj = {}", scaled(r.e_elec, 1e9));
    let _ = writeln!(s, "eps_fs_pj = {}", scaled(r.eps_fs, 1e12));
    let _ = writeln!(s, "eps_mp_pj = {}", scaled(r.eps_mp, 1e12));
    let _ = writeln!(s, "e_da_nj = {}", scaled(r.e_da, 1e9));
    let _ = writeln!(s, "packet_bits = {:?}", r.packet_bits);
    let _ = writeln!(s, "ctrl_bits = {:?}", r.ctrl_bits);
    let _ = writeln!(s, "protocol = {}", p.kind);
    let _ = writeln!(s, "p = {:?}", p.p);
    let _ = writeln!(s, "r_min_m = {:?}", p.r_min);
    let _ = writeln!(s, "r_max_m = {:?}", p.r_max);
    let _ = writeln!(s, "nbr_radius_m = {:?}", p.nbr_radius);
    let _ = writeln!(s, "threshold_direction = {}", p.threshold_direction);
    let _ = writeln!(s, "max_rounds = {}", cfg.max_rounds);
    let _ = writeln!(s, "seed = {}", cfg.seed);
    let _ = writeln!(s, "control_traffic = {}", cfg.control_traffic);
    let f = &cfg.fis;
    let _ = writeln!(s, "fis.resolution = {}", f.resolution);
    let _ = writeln!(s, "t2.blur.distance = {:?}", f.blur_distance);
    let _ = writeln!(s, "t2.blur.energy = {:?}", f.blur_energy);
    let sets = [
        ("t1.distance", &f.t1_distance),
        ("t1.energy", &f.t1_energy),
        ("t1.concentration", &f.t1_concentration),
        ("t1.radius", &f.t1_radius),
        ("t1.chance", &f.t1_chance),
        ("t2.distance", &f.t2_distance),
        ("t2.energy", &f.t2_energy),
    ];
    for (prefix, set) in sets {
        for (term, mf) in set {
            let _ = writeln!(s, "{prefix}.{} = {}", key_name(term), render_mf(mf));
        }
    }
    for (out, w) in [
        ("radius", &f.t2_radius_weights),
        ("chance", &f.t2_chance_weights),
    ] {
        for (term, x) in w {
            let _ = writeln!(s, "t2.weight.{out}.{} = {x:?}", key_name(term));
        }
    }
    for (key, rules, split) in [("t1.rule", &f.t1_rules, 3), ("t2.rule", &f.t2_rules, 2)] {
        for row in rules {
            let _ = writeln!(
                s,
                "{key} = {} -> {}",
                row[..split].join(", "),
                row[split..].join(", ")
            );
        }
    }
    s
}

/// Shortest decimal `v` with `v / scale == x`, so rendering round-trips.
fn scaled(x: f64, scale: f64) -> String {
    let v = x * scale;
    (0..17)
        .map(|prec| format!("{v:.prec$e}"))
        .find(|t| t.parse::<f64>().map(|t| t / scale) == Ok(x))
        .unwrap_or_else(|| format!("{v:e}"))
}

fn render_mf(mf: &MembershipFunction) -> String {
    match *mf {
        MembershipFunction::Triangular { a, b, c } => format!("tri:{a:?},{b:?},{c:?}"),
        MembershipFunction::Trapezoidal { a, b, c, d } => format!("trap:{a:?},{b:?},{c:?},{d:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario1_matches_table() {
        let c = preset("ch2-scenario1").unwrap();
        assert_eq!((c.nodes, c.area_side, c.initial_energy), (100, 100.0, 0.5));
        assert_eq!(c.bs, Point::new(50.0, 175.0));
        assert_eq!(c.radio.e_elec, 50e-9);
        assert_eq!(c.radio.eps_fs, 10e-12);
        assert!((c.radio.eps_mp / 0.0013e-12 - 1.0).abs() < 1e-15);
        assert_eq!((c.radio.packet_bits, c.radio.ctrl_bits), (4000.0, 200.0));
        assert_eq!(c.protocol.kind, ProtocolKind::FuzzyUnequal);
        assert_eq!((c.protocol.r_min, c.protocol.r_max), (10.0, 40.0));
        assert!((c.protocol.nbr_radius - 87.7058).abs() < 1e-3);
    }

    #[test]
    fn ch3_matches_table() {
        let c = preset("ch3").unwrap();
        assert_eq!((c.nodes, c.area_side, c.initial_energy), (100, 100.0, 1.0));
        assert_eq!(c.bs, Point::new(50.0, 50.0));
        assert!((c.radio.eps_mp / 0.0010e-12 - 1.0).abs() < 1e-15);
        assert_eq!(c.radio.e_da, 5e-9);
        assert_eq!(c.protocol.threshold_direction, ThresholdDirection::Above);
    }

    #[test]
    fn errors_name_the_field() {
        let e = build_config(Some("ch3"), "p = 1.5", &[]).unwrap_err();
        assert_eq!(e, out_of_range("p", "1.5 not in (0, 1)"));
        assert!(e.to_string().contains("`p`"));
        assert_eq!(
            preset("nope").unwrap_err(),
            ConfigError::UnknownPreset("nope".into())
        );
        assert_eq!(
            parse_config("nodes = 10").unwrap_err(),
            ConfigError::MissingKey("area_side_m")
        );
        assert!(matches!(
            parse_config("bogus = 1").unwrap_err(),
            ConfigError::UnknownKey { line: 1, .. }
        ));
        assert!(matches!(
            parse_config("nodes 10").unwrap_err(),
            ConfigError::Syntax { line: 1 }
        ));
        assert!(matches!(
            build_config(Some("ch3"), "nodes = many", &[]).unwrap_err(),
            ConfigError::Invalid { field, .. } if field == "nodes"
        ));
        assert!(matches!(
            build_config(Some("ch3"), "r_min_m = 50\nr_max_m = 20", &[]).unwrap_err(),
            ConfigError::OutOfRange { field, .. } if field == "r_max_m"
        ));
    }

    #[test]
    fn overrides_and_preset_lines() {
        let c = build_config(
            None,
            "# base\npreset = ch2-scenario1\nseed = 9 # trailing",
            &[("protocol".into(), "type2fl".into())],
        )
        .unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.protocol.kind, ProtocolKind::Type2Fl);
        assert_eq!(c.protocol.threshold_direction, ThresholdDirection::Above);
    }

    #[test]
    fn fis_overrides() {
        let text = "preset = ch3\nt1.distance.close = trap:0,0,0.1,0.3\nt2.blur = 0\nt2.weight.chance.strong = 0.7\n\
                    t2.rule = Proximate, Low -> VS, VW\n";
        let c = parse_config(text).unwrap_err();
        // a single type-2 rule cannot cover every antecedent pair
        assert!(matches!(c, ConfigError::Fis(_)));
        let text = "preset = ch3\nt1.distance.close = trap:0,0,0.1,0.3\nt2.blur = 0\nt2.weight.chance.strong = 0.7\n";
        let c = parse_config(text).unwrap();
        assert_eq!(
            c.fis.t1_distance[0].1,
            MembershipFunction::Trapezoidal {
                a: 0.0,
                b: 0.0,
                c: 0.1,
                d: 0.3
            }
        );
        assert_eq!((c.fis.blur_distance, c.fis.blur_energy), (0.0, 0.0));
        assert_eq!(c.fis.t2_chance_weights[4], ("Strong".to_string(), 0.7));
        assert!(parse_config("preset = ch3\nt1.radius.gigantic = tri:0,0.5,1").is_err());
        assert!(parse_config("preset = ch3\nt2.blur = 1.0").is_err());
    }

    #[test]
    fn render_round_trips() {
        for name in PRESETS {
            let mut c = preset(name).unwrap();
            c.seed = 123;
            c.fis.blur_energy = 0.35;
            assert_eq!(parse_config(&render_config(&c)).unwrap(), c, "{name}");
        }
    }
}
