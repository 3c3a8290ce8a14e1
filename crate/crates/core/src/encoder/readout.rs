use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Configuration, WeightedGraph};
use crate::lattice::{GridLayout, LatticeKind};
use crate::mwis::{solve_layout, solve_mwis_one};

use super::crossing::SourceProblem;
use super::place::Placement;

/// A compiled instance. Weights are the gadget weights scaled by `scale`
/// plus an integer shift `epsilon[v]·scale` on the readout site of each
/// source vertex. A source independent set `S` corresponds to encoded
/// optima of weight `energy_offset + weight_scale·w(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingResult {
    pub layout: GridLayout,
    /// Layout vertices carrying each source vertex, in wire order.
    pub pin_map: Vec<Vec<usize>>,
    /// The shifted vertex of each wire, always `pin_map[v][0]`.
    pub readout: Vec<usize>,
    pub epsilon: Vec<Rational64>,
    pub scale: i64,
    pub weight_scale: i64,
    pub energy_offset: i64,
    pub source: WeightedGraph,
}

/// `1 / (4·Σw)`, which keeps every readout shift combined below one gadget
/// weight unit.
pub fn default_epsilon(p: &SourceProblem) -> Rational64 {
    Rational64::new(1, 4 * p.weights().iter().sum::<i64>())
}

/// Scales the gadget weights and adds `ε·w_v` at the readout site of
/// every vertex. Requires `0 ≤ ε·max(w) < 1`; the decoded optimum is
/// guaranteed to be a maximum-weight set when also `ε·Σw < 1`.
pub fn apply_weights(placement: &Placement, p: &SourceProblem, epsilon: Rational64) -> Result<EncodingResult> {
    if placement.n != p.n() {
        return Err(Error::Precondition(format!(
            "placement has {} wires but the source has {} vertices",
            placement.n,
            p.n()
        )));
    }
    let wmax = *p.weights().iter().max().expect("n >= 2");
    if epsilon < Rational64::from(0) || epsilon * wmax >= Rational64::from(1) {
        return Err(Error::Precondition(format!(
            "detuning shift {epsilon} times the largest weight {wmax} must lie in [0, 1)"
        )));
    }
    let scale = *epsilon.denom();
    let weight_scale = *epsilon.numer();
    let mut weights = placement.site_weights();
    for w in weights.values_mut() {
        *w *= scale;
    }
    let mut readout_coords = Vec::with_capacity(p.n());
    let mut value_coords = Vec::with_capacity(p.n());
    for wire in &placement.wires {
        let sites = wire.value_sites();
        let r = *sites.first().ok_or_else(|| Error::Geometry(format!("wire of vertex {} is empty", wire.vertex)))?;
        *weights.get_mut(&r).expect("wire sites are placed") += weight_scale * p.weights()[wire.vertex];
        readout_coords.push(r);
        value_coords.push(sites);
    }
    let layout = GridLayout::from_weighted_coords(placement.family, weights)?;
    let index = |c| layout.index_of(c).expect("wire sites are placed");
    Ok(EncodingResult {
        pin_map: value_coords.iter().map(|cs| cs.iter().map(|&c| index(c)).collect()).collect(),
        readout: readout_coords.into_iter().map(index).collect(),
        epsilon: p.weights().iter().map(|&w| epsilon * w).collect(),
        scale,
        weight_scale,
        energy_offset: scale * placement.energy(),
        source: p.graph.clone(),
        layout,
    })
}

/// Majority vote over the sites of each wire, ties to 0.
pub fn decode(result: &EncodingResult, c: &Configuration) -> Configuration {
    Configuration::from_bits(
        result
            .pin_map
            .iter()
            .map(|sites| {
                let ones = sites.iter().filter(|&&i| c.get(i)).count();
                2 * ones > sites.len()
            })
            .collect(),
    )
}

/// Whether all sites of every wire agree.
pub fn wires_consistent(result: &EncodingResult, c: &Configuration) -> bool {
    result
        .pin_map
        .iter()
        .all(|sites| sites.iter().all(|&i| c.get(i) == c.get(sites[0])))
}

/// Coarse site-count bound: `8n² − 6n − 3m` on the triangular lattice and
/// `4n²` on the king lattice.
pub fn overhead_estimate(n: usize, m: usize, family: LatticeKind) -> i64 {
    let (n, m) = (n as i64, m as i64);
    match family {
        LatticeKind::Triangular => 8 * n * n - 6 * n - 3 * m,
        LatticeKind::King => 4 * n * n,
    }
}

/// Cell-by-cell count with the boundary edges separated: `m_top` edges on
/// the first row of cells and `m_right` on the last column.
pub fn overhead_slot_aware(n: usize, m: usize, m_top: usize, m_right: usize) -> i64 {
    let (n, m, t, r) = (n as i64, m as i64, m_top as i64, m_right as i64);
    6 * n * (n - 1) + 4 * r + (m - t - r) + 4 * (n * (n - 1) / 2 - m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub source_optimum: i64,
    pub encoded_optimum: i64,
    pub energy_offset: i64,
    pub decoded: Configuration,
    pub decoded_weight: i64,
    pub decoded_independent: bool,
    pub wires_consistent: bool,
    pub offset_consistent: bool,
    pub pass: bool,
}

/// Solves the encoded instance exactly, decodes it and compares with the
/// exact optimum of the source graph.
pub fn verify(result: &EncodingResult) -> Result<VerifyReport> {
    let (source_optimum, _) = solve_mwis_one(&result.source)?;
    let (encoded_optimum, c) = match solve_layout(&result.layout) {
        Ok(s) => (s.weight, s.config),
        Err(Error::Budget(_)) => solve_mwis_one(&result.layout.to_graph())?,
        Err(e) => return Err(e),
    };
    let decoded = decode(result, &c);
    let decoded_weight = result.source.config_weight(&decoded);
    let decoded_independent = result.source.is_independent(&decoded);
    let consistent = wires_consistent(result, &c);
    let offset_consistent = encoded_optimum == result.energy_offset + result.weight_scale * decoded_weight;
    let pass = decoded_independent && decoded_weight == source_optimum && consistent && offset_consistent;
    Ok(VerifyReport {
        source_optimum,
        encoded_optimum,
        energy_offset: result.energy_offset,
        decoded,
        decoded_weight,
        decoded_independent,
        wires_consistent: consistent,
        offset_consistent,
        pass,
    })
}

impl EncodingResult {
    pub fn family(&self) -> LatticeKind {
        self.layout.family.kind
    }

    /// SVG of the layout with every wire site framed.
    pub fn to_svg(&self) -> String {
        let framed: Vec<usize> = self.pin_map.iter().flatten().copied().collect();
        self.layout.to_svg(&framed)
    }
}

#[derive(Serialize, Deserialize)]
struct SourceRecord {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct ResultRecord {
    layout: GridLayout,
    pin_map: Vec<Vec<usize>>,
    readout: Vec<usize>,
    epsilon: Vec<String>,
    scale: i64,
    weight_scale: i64,
    energy_offset: i64,
    source: SourceRecord,
}

impl Serialize for EncodingResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ResultRecord {
            layout: self.layout.clone(),
            pin_map: self.pin_map.clone(),
            readout: self.readout.clone(),
            epsilon: self.epsilon.iter().map(|e| e.to_string()).collect(),
            scale: self.scale,
            weight_scale: self.weight_scale,
            energy_offset: self.energy_offset,
            source: SourceRecord {
                n: self.source.n(),
                edges: self.source.edges().to_vec(),
                weights: self.source.weights().to_vec(),
            },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EncodingResult {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ResultRecord::deserialize(deserializer)?;
        let source = WeightedGraph::new(r.source.weights, r.source.edges).map_err(D::Error::custom)?;
        if source.n() != r.source.n || r.pin_map.len() != source.n() || r.readout.len() != source.n() {
            return Err(D::Error::custom("vertex counts disagree"));
        }
        let len = r.layout.len();
        if r.pin_map.iter().flatten().chain(&r.readout).any(|&i| i >= len) {
            return Err(D::Error::custom("site index out of range"));
        }
        let epsilon = r
            .epsilon
            .iter()
            .map(|s| s.parse::<Rational64>().map_err(D::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self {
            layout: r.layout,
            pin_map: r.pin_map,
            readout: r.readout,
            epsilon,
            scale: r.scale,
            weight_scale: r.weight_scale,
            energy_offset: r.energy_offset,
            source,
        })
    }
}
