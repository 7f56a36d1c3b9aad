//! Cluster-head election, cluster formation and routing for one round.
//!
//! Three protocols share the building blocks here:
//! - `Leach`: thresholded random heads, nearest-head joining, heads send
//!   straight to the sink.
//! - `FuzzyUnequal`: thresholded provisional heads get a competition radius
//!   and a chance from the type-1 engine, compete, and route multi-hop.
//! - `Type2Fl`: the same pipeline with the interval type-2 engine, heads
//!   advertising over the communication range and orphans self-promoting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::fis::{FisConfig, FisError, Mamdani, Type2Fis};
use crate::network::{FisInputs, Network, NodeId, Role, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    Leach,
    FuzzyUnequal,
    Type2Fl,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 3] = [Self::Leach, Self::FuzzyUnequal, Self::Type2Fl];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Leach => "leach",
            Self::FuzzyUnequal => "fuzzy-unequal",
            Self::Type2Fl => "type2fl",
        }
    }

    /// Provisional-head selection sense each protocol uses by default.
    pub fn default_direction(&self) -> ThresholdDirection {
        match self {
            Self::Leach | Self::FuzzyUnequal => ThresholdDirection::Below,
            Self::Type2Fl => ThresholdDirection::Above,
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "leach" => Ok(Self::Leach),
            "fuzzy-unequal" => Ok(Self::FuzzyUnequal),
            "type2fl" | "type2-fl" => Ok(Self::Type2Fl),
            other => Err(format!(
                "unknown protocol `{other}` (leach, fuzzy-unequal, type2fl)"
            )),
        }
    }
}

/// Whether a node becomes a provisional head when its draw is below or
/// above the round threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdDirection {
    Below,
    Above,
}

impl FromStr for ThresholdDirection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "below" => Ok(Self::Below),
            "above" => Ok(Self::Above),
            other => Err(format!(
                "unknown threshold direction `{other}` (below, above)"
            )),
        }
    }
}

impl fmt::Display for ThresholdDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Below => "below",
            Self::Above => "above",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub kind: ProtocolKind,
    /// Desired head fraction.
    pub p: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Radius for the concentration input.
    pub nbr_radius: f64,
    pub threshold_direction: ThresholdDirection,
}

/// Round threshold `p / (1 - p·(r mod ⌊1/p⌋))`, evaluated as
/// `1 / (1/p - r mod ⌊1/p⌋)` so that hand values come out exact.
pub fn ch_threshold(p: f64, round: u64) -> f64 {
    let period = ((1.0 / p).floor() as u64).max(1);
    let m = (round % period) as f64;
    1.0 / (1.0 / p - m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub ids: Vec<NodeId>,
    /// Nobody passed the threshold and the richest node was promoted.
    pub fallback: bool,
}

/// Every alive node draws once, in id order.
pub fn select_provisional(
    net: &Network,
    params: &ProtocolParams,
    round: u64,
    rng: &mut SimRng,
) -> Selection {
    let th = ch_threshold(params.p, round);
    select_with_draws(net, th, params.threshold_direction, || rng.random::<f64>())
}

pub fn select_with_draws(
    net: &Network,
    threshold: f64,
    direction: ThresholdDirection,
    mut draw: impl FnMut() -> f64,
) -> Selection {
    let ids: Vec<NodeId> = net
        .alive_ids()
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|_| {
            let u = draw();
            match direction {
                ThresholdDirection::Below => u < threshold,
                ThresholdDirection::Above => u > threshold,
            }
        })
        .collect();
    if !ids.is_empty() {
        return Selection {
            ids,
            fallback: false,
        };
    }
    let richest = net.nodes().iter().filter(|n| n.is_alive()).fold(
        None::<(NodeId, f64)>,
        |best, n| match best {
            Some((_, e)) if e >= n.energy() => best,
            _ => Some((n.id, n.energy())),
        },
    );
    Selection {
        ids: richest.map(|(id, _)| vec![id]).unwrap_or_default(),
        fallback: true,
    }
}

/// Both fuzzy engines, built once per run.
#[derive(Debug, Clone)]
pub struct Engines {
    pub type1: Mamdani,
    pub type2: Type2Fis,
}

impl Engines {
    pub fn new(cfg: &FisConfig) -> Result<Self, FisError> {
        Ok(Self {
            type1: cfg.type1()?,
            type2: cfg.type2()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusChance {
    pub radius: f64,
    pub chance: f64,
    /// The engine produced no output and both values fell back to 0.5.
    pub fallback: bool,
}

/// Competition radius in metres and head chance for one node.
pub fn compute_radius_chance(
    inputs: FisInputs,
    engine: EngineKind,
    engines: &Engines,
    params: &ProtocolParams,
) -> Result<RadiusChance, FisError> {
    let out = match engine {
        EngineKind::Type1 => engines
            .type1
            .evaluate_positional(&[inputs.distance, inputs.energy, inputs.concentration])
            .map(|v| (v[0], v[1])),
        EngineKind::Type2 => engines
            .type2
            .evaluate(inputs.distance, inputs.energy)
            .map(|o| (o.radius, o.chance)),
    };
    let (norm, chance, fallback) = match out {
        Ok((r, c)) => (r, c, false),
        Err(FisError::Degenerate) => (0.5, 0.5, true),
        Err(e) => return Err(e),
    };
    Ok(RadiusChance {
        radius: scale_radius(norm, params),
        chance,
        fallback,
    })
}

pub fn scale_radius(norm: f64, params: &ProtocolParams) -> f64 {
    params.r_min + norm.clamp(0.0, 1.0) * (params.r_max - params.r_min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub id: NodeId,
    pub radius: f64,
    pub chance: f64,
}

/// Candidates in descending chance (ascending id on ties) become final
/// unless an already-final head lies within either one's radius.
pub fn compete_final_chs(net: &Network, candidates: &[Candidate]) -> Vec<Candidate> {
    let mut order = candidates.to_vec();
    order.sort_by(|a, b| b.chance.total_cmp(&a.chance).then(a.id.cmp(&b.id)));
    let mut finals: Vec<Candidate> = Vec::new();
    for c in order {
        let clear = finals
            .iter()
            .all(|f| net.dist(f.id, c.id) > f.radius.max(c.radius));
        if clear {
            finals.push(c);
        }
    }
    finals
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub head: NodeId,
    pub members: Vec<NodeId>,
    pub radius: f64,
    pub chance: f64,
    /// Head promoted itself because no advertisement reached it.
    pub orphan: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JoinRule {
    /// Join the nearest head wherever it is.
    Nearest,
    /// Join the nearest head within range; otherwise become a head.
    WithinRange(f64),
}

/// Every alive non-head node joins exactly one cluster; ties in distance
/// go to the lower head id. Clusters come back ordered by head id.
pub fn assign_members(net: &Network, finals: &[Candidate], rule: JoinRule) -> Vec<Cluster> {
    let mut clusters: Vec<Cluster> = finals
        .iter()
        .map(|c| Cluster {
            head: c.id,
            members: Vec::new(),
            radius: c.radius,
            chance: c.chance,
            orphan: false,
        })
        .collect();
    clusters.sort_by_key(|c| c.head);
    let heads: Vec<NodeId> = clusters.iter().map(|c| c.head).collect();
    let mut orphans = Vec::new();
    for id in net.alive_ids() {
        if heads.binary_search(&id).is_ok() {
            continue;
        }
        let nearest = heads
            .iter()
            .enumerate()
            .map(|(i, &h)| (i, net.dist(id, h)))
            .filter(|&(_, d)| match rule {
                JoinRule::Nearest => true,
                JoinRule::WithinRange(r) => d <= r,
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((i, _)) => clusters[i].members.push(id),
            None => orphans.push(id),
        }
    }
    clusters.extend(orphans.into_iter().map(|id| Cluster {
        head: id,
        members: Vec::new(),
        radius: 0.0,
        chance: 0.0,
        orphan: true,
    }));
    clusters.sort_by_key(|c| c.head);
    clusters
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NextHop {
    Bs,
    Ch(NodeId),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoutePlan {
    hops: BTreeMap<NodeId, NextHop>,
}

impl RoutePlan {
    pub fn next_hop(&self, head: NodeId) -> Option<NextHop> {
        self.hops.get(&head).copied()
    }

    pub fn heads(&self) -> impl Iterator<Item = (NodeId, NextHop)> + '_ {
        self.hops.iter().map(|(&h, &n)| (h, n))
    }

    /// Relay heads visited from `head` until the sink, excluding `head`.
    /// `None` if the route loops or leaves the plan.
    pub fn relays(&self, head: NodeId) -> Option<Vec<NodeId>> {
        let mut path = Vec::new();
        let mut at = head;
        loop {
            match self.hops.get(&at)? {
                NextHop::Bs => return Some(path),
                NextHop::Ch(next) => {
                    if path.len() >= self.hops.len() {
                        return None;
                    }
                    path.push(*next);
                    at = *next;
                }
            }
        }
    }
}

/// Every head sends straight to the sink.
pub fn direct_routes(heads: &[NodeId]) -> RoutePlan {
    RoutePlan {
        hops: heads.iter().map(|&h| (h, NextHop::Bs)).collect(),
    }
}

/// Heads within `d0` of the sink send directly; the rest relay through the
/// nearest other head strictly closer to the sink, or go direct if none is.
pub fn build_routes(net: &Network, heads: &[NodeId], d0: f64) -> RoutePlan {
    let hops = heads
        .iter()
        .map(|&h| {
            let own = net.dist_to_bs(h);
            if own <= d0 {
                return (h, NextHop::Bs);
            }
            let relay = heads
                .iter()
                .filter(|&&o| o != h && net.dist_to_bs(o) < own)
                .map(|&o| (o, net.dist(h, o)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            (h, relay.map_or(NextHop::Bs, |(o, _)| NextHop::Ch(o)))
        })
        .collect();
    RoutePlan { hops }
}

/// A control packet: sent once over `range`, received by every listed node.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlMessage {
    pub sender: NodeId,
    pub range: f64,
    pub receivers: Vec<NodeId>,
}

impl ControlMessage {
    fn broadcast(net: &Network, sender: NodeId, range: f64) -> Self {
        Self {
            sender,
            range,
            receivers: net.neighbors(sender, range).collect(),
        }
    }

    fn unicast(net: &Network, sender: NodeId, receiver: NodeId) -> Self {
        Self {
            sender,
            range: net.dist(sender, receiver),
            receivers: vec![receiver],
        }
    }
}

/// Everything a round decided, before any energy is charged.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundPlan {
    pub clusters: Vec<Cluster>,
    pub routes: RoutePlan,
    pub control: Vec<ControlMessage>,
    pub provisional: usize,
    pub selection_fallback: bool,
    pub fis_fallbacks: usize,
}

impl RoundPlan {
    pub fn orphans(&self) -> usize {
        self.clusters.iter().filter(|c| c.orphan).count()
    }
}

/// Runs one round of `params.kind` on the alive nodes of `net`, updating
/// node roles. `round` is zero-based.
pub fn run_protocol_round(
    net: &mut Network,
    params: &ProtocolParams,
    engines: &Engines,
    d0: f64,
    round: u64,
    rng: &mut SimRng,
) -> Result<RoundPlan, FisError> {
    net.reset_roles();
    let selection = select_provisional(net, params, round, rng);
    for &id in &selection.ids {
        net.set_role(id, Role::ProvisionalCh);
    }
    let mut control = Vec::new();
    let mut fis_fallbacks = 0;

    let (clusters, routes) = match params.kind {
        ProtocolKind::Leach => {
            let finals: Vec<Candidate> = selection
                .ids
                .iter()
                .map(|&id| Candidate {
                    id,
                    radius: 0.0,
                    chance: 0.0,
                })
                .collect();
            let mut clusters = assign_members(net, &finals, JoinRule::Nearest);
            for c in &mut clusters {
                c.radius = c
                    .members
                    .iter()
                    .map(|&m| net.dist(c.head, m))
                    .fold(0.0, f64::max);
            }
            let heads: Vec<NodeId> = clusters.iter().map(|c| c.head).collect();
            (clusters, direct_routes(&heads))
        }
        ProtocolKind::FuzzyUnequal | ProtocolKind::Type2Fl => {
            let engine = if params.kind == ProtocolKind::FuzzyUnequal {
                EngineKind::Type1
            } else {
                EngineKind::Type2
            };
            let mut candidates = Vec::with_capacity(selection.ids.len());
            for &id in &selection.ids {
                let rc = compute_radius_chance(
                    net.normalize_inputs(id, params.nbr_radius),
                    engine,
                    engines,
                    params,
                )?;
                fis_fallbacks += rc.fallback as usize;
                candidates.push(Candidate {
                    id,
                    radius: rc.radius,
                    chance: rc.chance,
                });
                // competition message carrying (id, chance)
                control.push(ControlMessage::broadcast(net, id, rc.radius));
            }
            let finals = compete_final_chs(net, &candidates);
            let rule = match params.kind {
                ProtocolKind::Type2Fl => JoinRule::WithinRange(params.r_max),
                _ => JoinRule::Nearest,
            };
            let clusters = assign_members(net, &finals, rule);
            let heads: Vec<NodeId> = clusters.iter().map(|c| c.head).collect();
            (clusters, build_routes(net, &heads, d0))
        }
    };

    for c in &clusters {
        net.set_role(c.head, Role::FinalCh);
    }
    for c in &clusters {
        for &m in &c.members {
            if net.node(m).role == Role::ProvisionalCh {
                net.set_role(m, Role::Member);
            }
        }
    }

    // advertisement, joins, then the slot schedule; orphans advertise nothing
    let advert_range = |c: &Cluster| match params.kind {
        ProtocolKind::Type2Fl => params.r_max,
        _ => c.radius,
    };
    for c in clusters.iter().filter(|c| !c.orphan) {
        control.push(ControlMessage::broadcast(net, c.head, advert_range(c)));
    }
    for c in &clusters {
        for &m in &c.members {
            control.push(ControlMessage::unicast(net, m, c.head));
        }
    }
    for c in clusters.iter().filter(|c| !c.orphan) {
        control.push(ControlMessage::broadcast(net, c.head, advert_range(c)));
    }

    Ok(RoundPlan {
        provisional: selection.ids.len(),
        selection_fallback: selection.fallback,
        clusters,
        routes,
        control,
        fis_fallbacks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{seeded_rng, Point};

    fn net_at(points: &[(f64, f64)], bs: (f64, f64)) -> Network {
        let placed = points
            .iter()
            .map(|&(x, y)| (Point::new(x, y), None))
            .collect();
        Network::from_positions(placed, 1000.0, Point::new(bs.0, bs.1), 0.5).unwrap()
    }

    fn params(kind: ProtocolKind) -> ProtocolParams {
        ProtocolParams {
            kind,
            p: 0.05,
            r_min: 10.0,
            r_max: 40.0,
            nbr_radius: 87.7,
            threshold_direction: kind.default_direction(),
        }
    }

    #[test]
    fn threshold_hand_values() {
        assert_eq!(ch_threshold(0.05, 0), 0.05);
        assert_eq!(ch_threshold(0.05, 7), 0.05 / 0.65);
        assert_eq!(ch_threshold(0.05, 19), 1.0);
        assert_eq!(ch_threshold(0.05, 20), 0.05);
    }

    #[test]
    fn selection_is_strict() {
        let net = net_at(&[(1.0, 1.0)], (0.0, 0.0));
        let s = select_with_draws(&net, 0.05, ThresholdDirection::Below, || 0.03);
        assert_eq!(
            s,
            Selection {
                ids: vec![0],
                fallback: false
            }
        );
        let net2 = net_at(&[(1.0, 1.0), (2.0, 2.0)], (0.0, 0.0));
        let mut draws = [0.05, 0.5].into_iter();
        let s = select_with_draws(&net2, 0.05, ThresholdDirection::Below, || {
            draws.next().unwrap()
        });
        assert!(s.fallback);
        assert_eq!(s.ids.len(), 1);
        let s = select_with_draws(&net2, 0.05, ThresholdDirection::Above, || 0.5);
        assert_eq!(s.ids, vec![0, 1]);
    }

    #[test]
    fn fallback_promotes_richest() {
        let placed = vec![
            (Point::new(1.0, 1.0), Some(0.2)),
            (Point::new(2.0, 2.0), Some(0.4)),
            (Point::new(3.0, 3.0), Some(0.4)),
        ];
        let net = Network::from_positions(placed, 10.0, Point::new(0.0, 0.0), 0.5).unwrap();
        let s = select_with_draws(&net, 0.0, ThresholdDirection::Below, || 0.5);
        assert_eq!(
            s,
            Selection {
                ids: vec![1],
                fallback: true
            }
        );
    }

    #[test]
    fn radius_scaling() {
        let p = params(ProtocolKind::FuzzyUnequal);
        assert_eq!(scale_radius(0.0, &p), 10.0);
        assert_eq!(scale_radius(1.0, &p), 40.0);
    }

    #[test]
    fn competition_rules() {
        let net = net_at(&[(0.0, 0.0), (10.0, 0.0), (100.0, 0.0)], (0.0, 500.0));
        let c = |id, chance| Candidate {
            id,
            radius: 30.0,
            chance,
        };
        let finals = compete_final_chs(&net, &[c(0, 0.5), c(1, 0.7)]);
        assert_eq!(finals.iter().map(|f| f.id).collect::<Vec<_>>(), vec![1]);
        let finals = compete_final_chs(&net, &[c(0, 0.5), c(2, 0.7)]);
        assert_eq!(finals.len(), 2);
        let finals = compete_final_chs(&net, &[c(1, 0.6), c(0, 0.6)]);
        assert_eq!(finals.iter().map(|f| f.id).collect::<Vec<_>>(), vec![0]);
        // the larger radius decides the conflict
        let wide = [
            Candidate {
                id: 0,
                radius: 5.0,
                chance: 0.9,
            },
            Candidate {
                id: 1,
                radius: 12.0,
                chance: 0.1,
            },
        ];
        assert_eq!(compete_final_chs(&net, &wide).len(), 1);
    }

    #[test]
    fn joining() {
        let net = net_at(
            &[(0.0, 0.0), (20.0, 0.0), (10.0, 0.0), (500.0, 0.0)],
            (0.0, 500.0),
        );
        let f = |id| Candidate {
            id,
            radius: 30.0,
            chance: 0.5,
        };
        let one = assign_members(&net, &[f(0)], JoinRule::Nearest);
        assert_eq!(one[0].members, vec![1, 2, 3]);
        let two = assign_members(&net, &[f(1), f(0)], JoinRule::Nearest);
        assert_eq!(two[0].head, 0);
        // node 2 ties between both heads and goes to the lower id
        assert_eq!(two[0].members, vec![2]);
        assert_eq!(two[1].members, vec![3]);
        let ranged = assign_members(&net, &[f(0)], JoinRule::WithinRange(40.0));
        assert_eq!(ranged.len(), 2);
        assert_eq!(ranged[0].members, vec![1, 2]);
        assert!(ranged[1].orphan && ranged[1].head == 3 && ranged[1].members.is_empty());
    }

    #[test]
    fn routing_rules() {
        // BS at origin; head 0 at 40 m, head 1 at 150 m, head 2 at 100 m and 60 m from head 1
        let net = net_at(&[(40.0, 0.0), (150.0, 0.0), (90.0, 0.0)], (0.0, 0.0));
        let plan = build_routes(&net, &[0], 87.7);
        assert_eq!(plan.next_hop(0), Some(NextHop::Bs));
        let plan = build_routes(&net, &[1, 2], 87.7);
        assert_eq!(plan.next_hop(1), Some(NextHop::Ch(2)));
        assert_eq!(plan.next_hop(2), Some(NextHop::Bs));
        assert_eq!(plan.relays(1), Some(vec![2]));
        let plan = build_routes(&net, &[1], 87.7);
        assert_eq!(plan.next_hop(1), Some(NextHop::Bs));
    }

    #[test]
    fn leach_minimal_network() {
        let mut net = net_at(&[(0.0, 0.0), (3.0, 4.0)], (0.0, 100.0));
        let engines = Engines::new(&FisConfig::default()).unwrap();
        let mut p = params(ProtocolKind::Leach);
        p.p = 0.5;
        // round 1 of a period of 2: threshold 1, so both draws select
        let plan = run_protocol_round(&mut net, &p, &engines, 87.7, 1, &mut seeded_rng(1)).unwrap();
        assert_eq!(plan.clusters.len(), 2);
        let mut p = params(ProtocolKind::Leach);
        p.p = 0.999;
        let plan = run_protocol_round(&mut net, &p, &engines, 87.7, 0, &mut seeded_rng(1)).unwrap();
        assert!(plan.routes.heads().all(|(_, n)| n == NextHop::Bs));
        let total: usize = plan.clusters.iter().map(|c| 1 + c.members.len()).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn partition_and_route_soundness() {
        let engines = Engines::new(&FisConfig::default()).unwrap();
        for kind in ProtocolKind::ALL {
            let mut rng = seeded_rng(11);
            let mut net = Network::deploy(100, 100.0, Point::new(50.0, 175.0), 0.5, &mut rng);
            let p = params(kind);
            for r in 0..40 {
                let plan = run_protocol_round(&mut net, &p, &engines, 87.7, r, &mut rng).unwrap();
                let mut seen: Vec<NodeId> = plan
                    .clusters
                    .iter()
                    .flat_map(|c| std::iter::once(c.head).chain(c.members.iter().copied()))
                    .collect();
                seen.sort();
                assert_eq!(seen, (0..100).collect::<Vec<_>>(), "{kind} round {r}");
                for c in &plan.clusters {
                    let relays = plan.routes.relays(c.head).expect("route reaches the sink");
                    assert!(relays.len() <= plan.clusters.len());
                    let mut last = net.dist_to_bs(c.head);
                    for h in relays {
                        assert!(net.dist_to_bs(h) < last);
                        last = net.dist_to_bs(h);
                    }
                }
            }
        }
    }
}
