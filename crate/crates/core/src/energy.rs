//! First-order radio model and the analytic cluster-geometry formulas.

/// Radio constants, all in SI units (J/bit, J/bit/m², J/bit/m⁴, bits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    pub e_elec: f64,
    pub eps_fs: f64,
    pub eps_mp: f64,
    pub e_da: f64,
    pub packet_bits: f64,
    pub ctrl_bits: f64,
}

impl RadioParams {
    /// Name of the first field that is not strictly positive and finite.
    pub fn invalid_field(&self) -> Option<&'static str> {
        [
            ("e_elec", self.e_elec),
            ("eps_fs", self.eps_fs),
            ("eps_mp", self.eps_mp),
            ("e_da", self.e_da),
            ("packet_bits", self.packet_bits),
            ("ctrl_bits", self.ctrl_bits),
        ]
        .into_iter()
        .find(|(_, v)| !(v.is_finite() && *v > 0.0))
        .map(|(n, _)| n)
    }

    /// Crossover distance between the free-space and multipath regimes.
    pub fn threshold_distance(&self) -> f64 {
        (self.eps_fs / self.eps_mp).sqrt()
    }

    /// Energy to transmit `bits` over `d` metres. The free-space branch
    /// applies up to and including the threshold distance.
    pub fn tx_energy(&self, bits: f64, d: f64) -> f64 {
        let amp = if d <= self.threshold_distance() {
            self.eps_fs * d * d
        } else {
            self.eps_mp * d.powi(4)
        };
        bits * (self.e_elec + amp)
    }

    pub fn rx_energy(&self, bits: f64) -> f64 {
        bits * self.e_elec
    }

    /// Aggregation cost of fusing `signals` packets of `bits` each.
    pub fn agg_energy(&self, bits: f64, signals: usize) -> f64 {
        self.e_da * bits * signals as f64
    }

    /// Optimal cluster count for `n_sensors` nodes on an `m`×`m` field whose
    /// cluster heads sit `d_to_bs` from the sink on average.
    pub fn optimal_cluster_count(&self, m: f64, n_sensors: usize, d_to_bs: f64) -> f64 {
        m / (d_to_bs * d_to_bs)
            * (n_sensors as f64 / (2.0 * std::f64::consts::PI)).sqrt()
            * (self.eps_fs / self.eps_mp).sqrt()
    }
}

/// Expected geometry of `k` equal circular clusters on an `m`×`m` field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterGeometry {
    /// Mean squared member-to-head distance, m².
    pub mean_sq_dist_to_ch: f64,
    /// Mean head-to-sink distance, m.
    pub dist_to_bs: f64,
    /// Cluster diameter, i.e. spacing between neighbouring heads, m.
    pub ch_spacing: f64,
}

/// Mean distance from a uniform point of the field to the sink, as a
/// fraction of half the side.
pub const MEAN_BS_DISTANCE_FACTOR: f64 = 0.765;

pub fn analytic_cluster_stats(m: f64, k: usize) -> ClusterGeometry {
    use std::f64::consts::PI;
    let k = k as f64;
    ClusterGeometry {
        mean_sq_dist_to_ch: m * m / (2.0 * PI * k),
        dist_to_bs: MEAN_BS_DISTANCE_FACTOR * m / 2.0,
        ch_spacing: 2.0 * m / (PI * k).sqrt(),
    }
}
