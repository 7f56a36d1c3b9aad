//! Node state, seeded deployment and the normalized fuzzy inputs.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::Error;

/// Per-run random stream: xoshiro256++ seeded through SplitMix64.
pub type SimRng = Xoshiro256PlusPlus;

pub fn seeded_rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Member,
    ProvisionalCh,
    FinalCh,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub pos: Point,
    energy: f64,
    alive: bool,
    pub role: Role,
}

impl Node {
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn is_alive(&self) -> bool {
        self.alive
    }
}

/// Normalized fuzzy inputs of one node, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisInputs {
    pub distance: f64,
    pub energy: f64,
    pub concentration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    nodes: Vec<Node>,
    bs: Point,
    area_side: f64,
    initial_energy: f64,
    d_max: f64,
}

impl Network {
    /// `n` nodes uniform on `[0, m]²`, drawing `x` then `y` per node in id order.
    pub fn deploy(n: usize, m: f64, bs: Point, initial_energy: f64, rng: &mut SimRng) -> Self {
        let placed = (0..n)
            .map(|_| {
                let x = rng.random::<f64>() * m;
                let y = rng.random::<f64>() * m;
                (Point::new(x, y), None)
            })
            .collect();
        Self::build(placed, m, bs, initial_energy)
    }

    /// Replays a fixed topology; an optional per-node energy overrides the
    /// initial energy for that node.
    pub fn from_positions(
        placed: Vec<(Point, Option<f64>)>,
        m: f64,
        bs: Point,
        initial_energy: f64,
    ) -> Result<Self, Error> {
        if placed.is_empty() {
            return Err(Error::Positions("no nodes".into()));
        }
        for (i, (p, e)) in placed.iter().enumerate() {
            if !(0.0..=m).contains(&p.x) || !(0.0..=m).contains(&p.y) {
                return Err(Error::Positions(format!(
                    "node {i} at ({}, {}) lies outside [0, {m}]²",
                    p.x, p.y
                )));
            }
            if let Some(e) = e {
                if !(*e >= 0.0 && *e <= initial_energy) {
                    return Err(Error::Positions(format!(
                        "node {i} energy {e} outside [0, {initial_energy}]"
                    )));
                }
            }
        }
        Ok(Self::build(placed, m, bs, initial_energy))
    }

    fn build(placed: Vec<(Point, Option<f64>)>, m: f64, bs: Point, initial_energy: f64) -> Self {
        let nodes: Vec<Node> = placed
            .into_iter()
            .enumerate()
            .map(|(id, (pos, e))| {
                let energy = e.unwrap_or(initial_energy);
                Node {
                    id,
                    pos,
                    energy,
                    alive: energy > 0.0,
                    role: Role::Member,
                }
            })
            .collect();
        let d_max = nodes.iter().map(|n| n.pos.dist(&bs)).fold(0.0, f64::max);
        Self {
            nodes,
            bs,
            area_side: m,
            initial_energy,
            d_max,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bs(&self) -> Point {
        self.bs
    }

    pub fn area_side(&self) -> f64 {
        self.area_side
    }

    pub fn initial_energy(&self) -> f64 {
        self.initial_energy
    }

    /// Largest node-to-sink distance at deployment.
    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> f64 {
        self.nodes[a].pos.dist(&self.nodes[b].pos)
    }

    pub fn dist_to_bs(&self, id: NodeId) -> f64 {
        self.nodes[id].pos.dist(&self.bs)
    }

    pub fn alive_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| n.alive).map(|n| n.id)
    }

    pub fn alive_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    pub fn total_energy(&self) -> f64 {
        self.nodes.iter().map(|n| n.energy).sum()
    }

    /// Alive nodes other than `id` within `radius` (inclusive).
    pub fn neighbor_count(&self, id: NodeId, radius: f64) -> usize {
        let p = self.nodes[id].pos;
        self.nodes
            .iter()
            .filter(|n| n.alive && n.id != id && n.pos.dist(&p) <= radius)
            .count()
    }

    /// Alive nodes other than `id` within `radius`, in id order.
    pub fn neighbors(&self, id: NodeId, radius: f64) -> impl Iterator<Item = NodeId> + '_ {
        let p = self.nodes[id].pos;
        self.nodes
            .iter()
            .filter(move |n| n.alive && n.id != id && n.pos.dist(&p) <= radius)
            .map(|n| n.id)
    }

    /// Distance to the sink over `d_max`, residual over initial energy, and
    /// neighbour count over the count expected at uniform density, clamped.
    pub fn normalize_inputs(&self, id: NodeId, nbr_radius: f64) -> FisInputs {
        let distance = if self.d_max > 0.0 {
            (self.dist_to_bs(id) / self.d_max).min(1.0)
        } else {
            0.0
        };
        let energy = (self.nodes[id].energy / self.initial_energy).clamp(0.0, 1.0);
        let density = self.nodes.len() as f64 / (self.area_side * self.area_side);
        let expected = density * std::f64::consts::PI * nbr_radius * nbr_radius;
        let concentration = if expected > 0.0 {
            (self.neighbor_count(id, nbr_radius) as f64 / expected).min(1.0)
        } else {
            0.0
        };
        FisInputs {
            distance,
            energy,
            concentration,
        }
    }

    pub fn set_role(&mut self, id: NodeId, role: Role) {
        debug_assert!(self.nodes[id].alive || role == Role::Member);
        self.nodes[id].role = role;
    }

    pub fn reset_roles(&mut self) {
        for n in &mut self.nodes {
            n.role = Role::Member;
        }
    }

    /// Debits up to `joules` from a node and returns the amount actually
    /// taken; energy never drops below zero.
    pub fn drain(&mut self, id: NodeId, joules: f64) -> f64 {
        let n = &mut self.nodes[id];
        let taken = joules.min(n.energy);
        n.energy -= taken;
        taken
    }

    /// Marks nodes with no energy left as dead; returns how many died.
    pub fn settle_deaths(&mut self) -> usize {
        let mut died = 0;
        for n in self.nodes.iter_mut().filter(|n| n.alive && n.energy <= 0.0) {
            n.alive = false;
            n.role = Role::Member;
            died += 1;
        }
        died
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Network {
        let placed = [0.0, 10.0, 25.0]
            .iter()
            .map(|&x| (Point::new(x, 0.0), None))
            .collect();
        Network::from_positions(placed, 100.0, Point::new(50.0, 150.0), 0.5).unwrap()
    }

    #[test]
    fn same_seed_same_positions() {
        let bs = Point::new(50.0, 175.0);
        let a = Network::deploy(100, 100.0, bs, 0.5, &mut seeded_rng(7));
        let b = Network::deploy(100, 100.0, bs, 0.5, &mut seeded_rng(7));
        assert_eq!(a, b);
        let c = Network::deploy(100, 100.0, bs, 0.5, &mut seeded_rng(8));
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_deployment_sanity() {
        let net = Network::deploy(
            100,
            100.0,
            Point::new(50.0, 175.0),
            0.5,
            &mut seeded_rng(42),
        );
        let mean_x = net.nodes().iter().map(|n| n.pos.x).sum::<f64>() / 100.0;
        assert!((35.0..=65.0).contains(&mean_x), "{mean_x}");
        assert!(net
            .nodes()
            .iter()
            .all(|n| (0.0..=100.0).contains(&n.pos.x) && (0.0..=100.0).contains(&n.pos.y)));
    }

    #[test]
    fn single_node_d_max() {
        let net = Network::deploy(1, 100.0, Point::new(50.0, 175.0), 0.5, &mut seeded_rng(1));
        assert_eq!(net.d_max(), net.dist_to_bs(0));
        assert_eq!(net.normalize_inputs(0, 10.0).distance, 1.0);
    }

    #[test]
    fn neighbor_counts() {
        let net = line();
        assert_eq!(net.neighbor_count(1, 15.0), 2);
        assert_eq!(net.neighbor_count(1, 5.0), 0);
        assert_eq!(net.neighbor_count(0, 100.0 * 2f64.sqrt()), 2);
    }

    #[test]
    fn normalized_inputs() {
        let net = Network::deploy(100, 100.0, Point::new(50.0, 175.0), 0.5, &mut seeded_rng(3));
        let far = (0..100)
            .max_by(|&a, &b| net.dist_to_bs(a).total_cmp(&net.dist_to_bs(b)))
            .unwrap();
        let f = net.normalize_inputs(far, 87.7);
        assert_eq!(f.distance, 1.0);
        assert_eq!(f.energy, 1.0);
        for id in 0..100 {
            let f = net.normalize_inputs(id, 30.0);
            for v in [f.distance, f.energy, f.concentration] {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn concentration_clamps_at_expected_count() {
        // 3 nodes on a 10 m field: density 0.03/m²; radius r with 2 expected neighbours
        let placed = vec![
            (Point::new(5.0, 5.0), None),
            (Point::new(5.0, 6.0), None),
            (Point::new(6.0, 5.0), None),
        ];
        let net = Network::from_positions(placed, 10.0, Point::new(5.0, 20.0), 1.0).unwrap();
        let r = (2.0 / (0.03 * std::f64::consts::PI)).sqrt();
        assert!(r > 1.0);
        assert!((net.normalize_inputs(0, r).concentration - 1.0).abs() < 1e-12);
    }

    #[test]
    fn drain_clamps_and_death_is_deferred() {
        let placed = vec![(Point::new(1.0, 1.0), Some(1e-9))];
        let mut net = Network::from_positions(placed, 10.0, Point::new(5.0, 20.0), 1.0).unwrap();
        assert_eq!(net.drain(0, 3e-4), 1e-9);
        assert_eq!(net.node(0).energy(), 0.0);
        assert!(net.node(0).is_alive());
        assert_eq!(net.settle_deaths(), 1);
        assert!(!net.node(0).is_alive());
        assert_eq!(net.drain(0, 1.0), 0.0);
    }

    #[test]
    fn positions_validated() {
        let bad = vec![(Point::new(-1.0, 1.0), None)];
        assert!(Network::from_positions(bad, 10.0, Point::new(5.0, 5.0), 1.0).is_err());
        let rich = vec![(Point::new(1.0, 1.0), Some(2.0))];
        assert!(Network::from_positions(rich, 10.0, Point::new(5.0, 5.0), 1.0).is_err());
    }
}
