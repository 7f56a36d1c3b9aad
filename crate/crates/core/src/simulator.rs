//! Round loop, energy accounting and lifetime metrics.

use crate::energy::RadioParams;
use crate::fis::FisConfig;
use crate::network::{seeded_rng, Network, NodeId, Point, SimRng};
use crate::protocols::{run_protocol_round, Engines, NextHop, ProtocolParams, RoundPlan};
use crate::Error;

pub const DEFAULT_MAX_ROUNDS: u64 = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub nodes: usize,
    pub area_side: f64,
    pub bs: Point,
    pub initial_energy: f64,
    pub radio: RadioParams,
    pub protocol: ProtocolParams,
    pub max_rounds: u64,
    pub seed: u64,
    /// Charge election and join messages as well as data.
    pub control_traffic: bool,
    pub fis: FisConfig,
    /// Fixed topology replacing the random deployment.
    pub positions: Option<Vec<(Point, Option<f64>)>>,
}

/// State of the network after one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundMetrics {
    /// One-based round index.
    pub round: u64,
    pub alive: usize,
    pub dead: usize,
    pub total_energy: f64,
    /// Residual energy averaged over all deployed nodes.
    pub avg_energy: f64,
    pub ch_count: usize,
    /// Self-promoted orphan heads plus empty-selection promotions.
    pub orphans: usize,
    pub fis_fallbacks: usize,
    /// Energy charged this round.
    pub spent: f64,
    pub alive_at_start: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Lifetime {
    pub fnd: Option<u64>,
    pub hnd: Option<u64>,
    pub lnd: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub seed: u64,
    pub nodes: usize,
    pub rounds: Vec<RoundMetrics>,
    pub lifetime: Lifetime,
    /// Mean energy spent per alive node per round up to FND and HND.
    pub fnd_dissipation: Option<f64>,
    pub hnd_dissipation: Option<f64>,
}

/// First round with a death, with half the nodes dead, and with none alive.
pub fn lifetime_metrics(rounds: &[RoundMetrics], n: usize) -> Lifetime {
    let half = n.div_ceil(2);
    let first =
        |pred: &dyn Fn(&RoundMetrics) -> bool| rounds.iter().find(|m| pred(m)).map(|m| m.round);
    Lifetime {
        fnd: first(&|m| m.dead >= 1),
        hnd: first(&|m| m.dead >= half),
        lnd: first(&|m| m.alive == 0),
    }
}

fn dissipation_until(rounds: &[RoundMetrics], event: Option<u64>) -> Option<f64> {
    let event = event?;
    let upto = &rounds[..event as usize];
    let sum: f64 = upto
        .iter()
        .map(|m| m.spent / m.alive_at_start.max(1) as f64)
        .sum();
    Some(sum / upto.len() as f64)
}

/// Charges one round of traffic. Members send one packet to their head;
/// heads receive, fuse their members' packets with their own and send one
/// packet to their next hop; relay heads receive and forward each passing
/// packet unchanged; control messages cost one transmission over their
/// range plus one reception per receiver. Returns what each node actually
/// paid, which is less than its bill only when its battery ran out.
pub fn apply_round_energy(
    net: &mut Network,
    plan: &RoundPlan,
    radio: &RadioParams,
    control: bool,
) -> Vec<f64> {
    let mut bill = vec![0.0; net.len()];
    let l = radio.packet_bits;
    let hop_distance = |net: &Network, head: NodeId| match plan.routes.next_hop(head) {
        Some(NextHop::Ch(next)) => net.dist(head, next),
        _ => net.dist_to_bs(head),
    };

    for c in &plan.clusters {
        for &m in &c.members {
            bill[m] += radio.tx_energy(l, net.dist(m, c.head));
        }
        bill[c.head] += radio.rx_energy(l) * c.members.len() as f64
            + radio.agg_energy(l, c.members.len() + 1)
            + radio.tx_energy(l, hop_distance(net, c.head));
        for relay in plan.routes.relays(c.head).unwrap_or_default() {
            bill[relay] += radio.rx_energy(l) + radio.tx_energy(l, hop_distance(net, relay));
        }
    }

    if control {
        let k = radio.ctrl_bits;
        for msg in &plan.control {
            bill[msg.sender] += radio.tx_energy(k, msg.range);
            for &r in &msg.receivers {
                bill[r] += radio.rx_energy(k);
            }
        }
    }

    bill.iter()
        .enumerate()
        .map(|(id, &b)| if b > 0.0 { net.drain(id, b) } else { 0.0 })
        .collect()
}

/// One run: a network, its random stream and the engines, advanced a round
/// at a time.
pub struct Simulation {
    cfg: SimConfig,
    net: Network,
    rng: SimRng,
    engines: Engines,
    rounds: Vec<RoundMetrics>,
}

/// What a single step produced, for callers that inspect rounds.
#[derive(Debug, Clone)]
pub struct Step {
    pub plan: RoundPlan,
    pub spent: Vec<f64>,
    pub energy_before: f64,
    pub metrics: RoundMetrics,
}

impl Simulation {
    pub fn new(cfg: SimConfig) -> Result<Self, Error> {
        crate::config::validate(&cfg)?;
        let engines = Engines::new(&cfg.fis)?;
        let mut rng = seeded_rng(cfg.seed);
        let net = match &cfg.positions {
            Some(p) => {
                Network::from_positions(p.clone(), cfg.area_side, cfg.bs, cfg.initial_energy)?
            }
            None => Network::deploy(
                cfg.nodes,
                cfg.area_side,
                cfg.bs,
                cfg.initial_energy,
                &mut rng,
            ),
        };
        Ok(Self {
            cfg,
            net,
            rng,
            engines,
            rounds: Vec::new(),
        })
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn rounds(&self) -> &[RoundMetrics] {
        &self.rounds
    }

    pub fn finished(&self) -> bool {
        self.net.alive_count() == 0 || self.rounds.len() as u64 >= self.cfg.max_rounds
    }

    /// Plays one round; `None` once the run is over.
    pub fn step(&mut self) -> Result<Option<Step>, Error> {
        if self.finished() {
            return Ok(None);
        }
        let round = self.rounds.len() as u64;
        let alive_at_start = self.net.alive_count();
        let energy_before = self.net.total_energy();
        let d0 = self.cfg.radio.threshold_distance();
        let plan = run_protocol_round(
            &mut self.net,
            &self.cfg.protocol,
            &self.engines,
            d0,
            round,
            &mut self.rng,
        )?;
        let spent = apply_round_energy(
            &mut self.net,
            &plan,
            &self.cfg.radio,
            self.cfg.control_traffic,
        );
        self.net.settle_deaths();

        let n = self.net.len();
        let alive = self.net.alive_count();
        let total = self.net.total_energy();
        let metrics = RoundMetrics {
            round: round + 1,
            alive,
            dead: n - alive,
            total_energy: total,
            avg_energy: total / n as f64,
            ch_count: plan.clusters.len(),
            orphans: plan.orphans() + plan.selection_fallback as usize,
            fis_fallbacks: plan.fis_fallbacks,
            spent: spent.iter().sum(),
            alive_at_start,
        };
        self.rounds.push(metrics.clone());
        Ok(Some(Step {
            plan,
            spent,
            energy_before,
            metrics,
        }))
    }

    pub fn finish(self) -> SimResult {
        let n = self.net.len();
        let lifetime = lifetime_metrics(&self.rounds, n);
        SimResult {
            seed: self.cfg.seed,
            nodes: n,
            fnd_dissipation: dissipation_until(&self.rounds, lifetime.fnd),
            hnd_dissipation: dissipation_until(&self.rounds, lifetime.hnd),
            rounds: self.rounds,
            lifetime,
        }
    }
}

pub fn run_simulation(cfg: &SimConfig) -> Result<SimResult, Error> {
    let mut sim = Simulation::new(cfg.clone())?;
    while sim.step()?.is_some() {}
    Ok(sim.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::preset;
    use crate::protocols::{Cluster, ProtocolKind, RoutePlan};

    fn radio() -> RadioParams {
        preset("ch2-scenario1").unwrap().radio
    }

    fn two_node_net() -> Network {
        // member 50 m from the head, head 40 m from the sink
        let placed = vec![(Point::new(0.0, 0.0), None), (Point::new(50.0, 0.0), None)];
        Network::from_positions(placed, 100.0, Point::new(0.0, 40.0), 0.5).unwrap()
    }

    fn plan(clusters: Vec<Cluster>, routes: RoutePlan) -> RoundPlan {
        RoundPlan {
            clusters,
            routes,
            control: vec![],
            provisional: 1,
            selection_fallback: false,
            fis_fallbacks: 0,
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn one_member_one_head() {
        let mut net = two_node_net();
        let c = Cluster {
            head: 0,
            members: vec![1],
            radius: 60.0,
            chance: 0.5,
            orphan: false,
        };
        let spent = apply_round_energy(
            &mut net,
            &plan(vec![c], crate::protocols::direct_routes(&[0])),
            &radio(),
            false,
        );
        assert!(rel(spent[1], 3.0e-4) < 1e-12);
        assert!(rel(spent[0], 5.04e-4) < 1e-12, "{}", spent[0]);
    }

    #[test]
    fn lone_head_pays_aggregation_and_uplink() {
        let mut net = two_node_net();
        let c = Cluster {
            head: 0,
            members: vec![],
            radius: 0.0,
            chance: 0.0,
            orphan: false,
        };
        let r = radio();
        let spent = apply_round_energy(
            &mut net,
            &plan(vec![c], crate::protocols::direct_routes(&[0])),
            &r,
            false,
        );
        assert!(
            rel(
                spent[0],
                r.agg_energy(4000.0, 1) + r.tx_energy(4000.0, 40.0)
            ) < 1e-12
        );
        assert_eq!(spent[1], 0.0);
    }

    #[test]
    fn nearly_empty_node_spends_what_it_has() {
        let placed = vec![
            (Point::new(0.0, 0.0), None),
            (Point::new(50.0, 0.0), Some(1e-9)),
        ];
        let mut net = Network::from_positions(placed, 100.0, Point::new(0.0, 40.0), 0.5).unwrap();
        let c = Cluster {
            head: 0,
            members: vec![1],
            radius: 60.0,
            chance: 0.5,
            orphan: false,
        };
        let spent = apply_round_energy(
            &mut net,
            &plan(vec![c], crate::protocols::direct_routes(&[0])),
            &radio(),
            false,
        );
        assert_eq!(spent[1], 1e-9);
        assert_eq!(net.node(1).energy(), 0.0);
        assert!(net.node(1).is_alive());
        net.settle_deaths();
        assert!(!net.node(1).is_alive());
    }

    fn metrics(round: u64, dead: usize, n: usize) -> RoundMetrics {
        RoundMetrics {
            round,
            alive: n - dead,
            dead,
            total_energy: 0.0,
            avg_energy: 0.0,
            ch_count: 0,
            orphans: 0,
            fis_fallbacks: 0,
            spent: 0.0,
            alive_at_start: n,
        }
    }

    #[test]
    fn lifetime_definitions() {
        let series: Vec<_> = [0, 0, 1, 1, 3]
            .iter()
            .enumerate()
            .map(|(i, &d)| metrics(i as u64 + 1, d, 100))
            .collect();
        assert_eq!(lifetime_metrics(&series, 100).fnd, Some(3));
        let series: Vec<_> = (1..=700)
            .map(|r| metrics(r, if r >= 610 { 50 } else { 10 }, 100))
            .collect();
        assert_eq!(lifetime_metrics(&series, 100).hnd, Some(610));
        let calm: Vec<_> = (1..=5).map(|r| metrics(r, 0, 100)).collect();
        assert_eq!(lifetime_metrics(&calm, 100), Lifetime::default());
        let odd: Vec<_> = (1..=3).map(|r| metrics(r, r as usize, 5)).collect();
        assert_eq!(lifetime_metrics(&odd, 5).hnd, Some(3));
    }

    #[test]
    fn runs_are_deterministic() {
        let mut cfg = preset("ch2-scenario1").unwrap();
        cfg.max_rounds = 50;
        cfg.seed = 3;
        assert_eq!(run_simulation(&cfg).unwrap(), run_simulation(&cfg).unwrap());
    }

    #[test]
    fn forced_first_round_death() {
        let mut cfg = preset("ch2-scenario1").unwrap();
        let mut rng = seeded_rng(5);
        let net = Network::deploy(100, 100.0, cfg.bs, 0.5, &mut rng);
        let mut placed: Vec<_> = net.nodes().iter().map(|n| (n.pos, None)).collect();
        placed[17].1 = Some(1e-6);
        cfg.positions = Some(placed);
        cfg.max_rounds = 5;
        for kind in ProtocolKind::ALL {
            cfg.protocol.kind = kind;
            cfg.protocol.threshold_direction = kind.default_direction();
            assert_eq!(
                run_simulation(&cfg).unwrap().lifetime.fnd,
                Some(1),
                "{kind}"
            );
        }
    }

    #[test]
    fn doubling_packet_doubles_data_spend() {
        let mut sim = Simulation::new(preset("ch2-scenario1").unwrap()).unwrap();
        let step = sim.step().unwrap().unwrap();
        let r = radio();
        let doubled = RadioParams {
            packet_bits: 2.0 * r.packet_bits,
            ..r
        };
        let fresh = Simulation::new(preset("ch2-scenario1").unwrap()).unwrap();
        let mut a = fresh.network().clone();
        let mut b = fresh.network().clone();
        let sa = apply_round_energy(&mut a, &step.plan, &r, false);
        let sb = apply_round_energy(&mut b, &step.plan, &doubled, false);
        for (x, y) in sa.iter().zip(&sb) {
            assert!(
                (2.0 * x - y).abs() <= 1e-15 * y.abs().max(1e-300),
                "{x} {y}"
            );
        }
    }
}
