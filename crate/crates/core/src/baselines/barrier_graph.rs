//! Weighted weak-barrier graph and the K vertex-disjoint shortest path benchmark.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::algorithms::{augment_with_gap_sensors, SelectionBuilder, SelectionResult, SelectionStep};
use crate::error::{Error, Result};
use crate::model::{Domain, ProjectedInterval, SensorField, SensorId, TargetSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Left,
    Sensor(SensorId),
    Right,
}

/// Which non-overlapping pairs a single gap sensor may join.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapPolicy {
    /// Any two non-overlapping nodes, at weight 1.
    #[default]
    AnyGap,
    /// Only when no node still in the graph reaches into the stretch between
    /// them. The stretches are recomputed each round, after the previous
    /// paths are removed.
    UncoveredOnly,
}

/// Graph over the intervals of a field plus the two domain terminals.
///
/// An edge weighs the number of gap sensors needed to join its endpoints:
/// 0 when the projected intervals overlap (or the terminal's coordinate is
/// contained), 1 otherwise, since one gap sensor can span any gap. Under
/// [`GapPolicy::UncoveredOnly`] some weight-1 edges are absent.
#[derive(Debug, Clone)]
pub struct BarrierGraph {
    domain: Domain,
    sensors: Vec<ProjectedInterval>,
    next_id: u32,
    policy: GapPolicy,
    /// Uncovered stretches with every node present, for `UncoveredOnly`.
    zones: Option<Vec<(f64, f64)>>,
}

/// Complete barrier graph over the sensors of `field`.
pub fn build_barrier_graph(field: &SensorField, domain: &Domain) -> BarrierGraph {
    build_barrier_graph_with(field, domain, GapPolicy::AnyGap)
}

pub fn build_barrier_graph_with(field: &SensorField, domain: &Domain, policy: GapPolicy) -> BarrierGraph {
    let sensors = field.intervals().to_vec();
    let zones = match policy {
        GapPolicy::AnyGap => None,
        GapPolicy::UncoveredOnly => Some(uncovered_zones(sensors.iter(), domain)),
    };
    BarrierGraph { domain: *domain, sensors, next_id: field.next_id(), policy, zones }
}

/// Benchmark graph for a `k`-barrier over `[field.domain()]`.
///
/// The field is first augmented with the same gap sensors K-OGA works with,
/// which join the graph as ordinary (virtual) nodes. Extra gap sensors are
/// then only placed over stretches that no remaining node covers, which
/// happens when earlier paths have used up the sensors there.
pub fn build_k_barrier_graph(field: &SensorField, targets: &TargetSet, k: usize) -> Result<BarrierGraph> {
    let augmented = augment_with_gap_sensors(field, targets, k)?;
    Ok(build_barrier_graph_with(&augmented, &field.domain(), GapPolicy::UncoveredOnly))
}

/// Maximal stretches of `domain` that none of `sensors` reaches into.
fn uncovered_zones<'a>(
    sensors: impl Iterator<Item = &'a ProjectedInterval>,
    domain: &Domain,
) -> Vec<(f64, f64)> {
    let mut ivs: Vec<(f64, f64)> = sensors.map(|iv| (iv.u, iv.v)).collect();
    ivs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut zones = Vec::new();
    let mut reach = domain.start;
    for (u, v) in ivs {
        if u > reach {
            zones.push((reach, u));
        }
        reach = reach.max(v);
    }
    if reach < domain.end {
        zones.push((reach, domain.end));
    }
    zones
}

fn inside_zone(zones: &[(f64, f64)], u: f64, v: f64) -> bool {
    let i = zones.partition_point(|z| z.0 <= u);
    i > 0 && zones[i - 1].1 >= v
}

impl BarrierGraph {
    /// Number of nodes, terminals included.
    pub fn node_count(&self) -> usize {
        self.sensors.len() + 2
    }

    pub fn nodes(&self) -> Vec<Node> {
        let mut nodes = vec![Node::Left];
        nodes.extend(self.sensors.iter().map(|iv| Node::Sensor(iv.sensor_id)));
        nodes.push(Node::Right);
        nodes
    }

    fn node(&self, idx: usize) -> Node {
        match idx {
            0 => Node::Left,
            i if i == self.sensors.len() + 1 => Node::Right,
            i => Node::Sensor(self.sensors[i - 1].sensor_id),
        }
    }

    fn index(&self, node: Node) -> Option<usize> {
        match node {
            Node::Left => Some(0),
            Node::Right => Some(self.sensors.len() + 1),
            Node::Sensor(id) => self.sensors.iter().position(|iv| iv.sensor_id == id).map(|i| i + 1),
        }
    }

    fn weight_idx(&self, a: usize, b: usize) -> Option<u32> {
        self.weight_within(a, b, self.zones.as_deref())
    }

    /// Edge weight; with `zones`, gap edges must bridge a stretch inside one.
    fn weight_within(&self, a: usize, b: usize, zones: Option<&[(f64, f64)]>) -> Option<u32> {
        let right = self.sensors.len() + 1;
        let (a, b) = (a.min(b), a.max(b));
        let covered = match (a, b) {
            (0, r) if r == right => false,
            (0, s) => self.sensors[s - 1].u <= self.domain.start,
            (s, r) if r == right => self.sensors[s - 1].v >= self.domain.end,
            (s, t) => self.sensors[s - 1].overlaps(&self.sensors[t - 1]),
        };
        if covered {
            return Some(0);
        }
        match zones {
            None => Some(1),
            Some(zones) => {
                let (u, v) = self.gap_span(a, b);
                (u >= v || inside_zone(zones, u, v)).then_some(1)
            }
        }
    }

    /// Weight of the edge between two nodes, `None` if either is unknown,
    /// both are the same node, or no edge joins them.
    pub fn weight(&self, a: Node, b: Node) -> Option<u32> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        if i == j {
            return None;
        }
        self.weight_idx(i, j)
    }

    /// All edges `(a, b, weight)` with `a < b` in node order.
    pub fn edges(&self) -> Vec<(Node, Node, u32)> {
        let n = self.node_count();
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                if let Some(w) = self.weight_idx(i, j) {
                    edges.push((self.node(i), self.node(j), w));
                }
            }
        }
        edges
    }

    /// Span of the gap sensor that joins nodes `a` and `b`.
    fn gap_span(&self, a: usize, b: usize) -> (f64, f64) {
        let right = self.sensors.len() + 1;
        let (a, b) = (a.min(b), a.max(b));
        let d = &self.domain;
        match (a, b) {
            (0, r) if r == right => (d.start, d.end),
            (0, s) => (d.start, self.sensors[s - 1].u),
            (s, r) if r == right => (self.sensors[s - 1].v, d.end),
            (s, t) => {
                let (x, y) = (&self.sensors[s - 1], &self.sensors[t - 1]);
                if x.v < y.u {
                    (x.v, y.u)
                } else {
                    (y.v, x.u)
                }
            }
        }
    }
}

/// Dijkstra label: total gap sensors, then hops, then the id sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Label {
    weight: u64,
    path: Vec<usize>,
}

impl Label {
    fn rank(&self, graph: &BarrierGraph, other: &Label) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then(self.path.len().cmp(&other.path.len()))
            .then_with(|| {
                let ids = |p: &[usize]| p.iter().map(|&i| graph.node(i)).collect::<Vec<_>>();
                ids(&self.path).cmp(&ids(&other.path))
            })
    }
}

/// One shortest LEFT to RIGHT path avoiding `removed` nodes.
fn shortest_path(
    graph: &BarrierGraph,
    removed: &[bool],
    zones: Option<&[(f64, f64)]>,
    work: &mut u64,
) -> Option<Label> {
    let n = graph.node_count();
    let right = n - 1;
    let mut best: Vec<Option<Label>> = vec![None; n];
    let mut done = vec![false; n];
    best[0] = Some(Label { weight: 0, path: vec![0] });
    loop {
        let mut pick: Option<usize> = None;
        for i in 0..n {
            if done[i] || removed[i] {
                continue;
            }
            if let Some(l) = &best[i] {
                let better = match pick {
                    None => true,
                    Some(p) => l.rank(graph, best[p].as_ref().unwrap()) == Ordering::Less,
                };
                if better {
                    pick = Some(i);
                }
            }
        }
        let u = pick?;
        if u == right {
            return best[right].take();
        }
        done[u] = true;
        let base = best[u].clone().unwrap();
        for v in 1..n {
            if done[v] || removed[v] {
                continue;
            }
            *work += 1;
            let Some(w) = graph.weight_within(u, v, zones) else {
                continue;
            };
            let mut path = base.path.clone();
            path.push(v);
            let cand = Label { weight: base.weight + u64::from(w), path };
            let replace = match &best[v] {
                None => true,
                Some(cur) => cand.rank(graph, cur) == Ordering::Less,
            };
            if replace {
                best[v] = Some(cand);
            }
        }
    }
}

/// Greedy K-barrier benchmark: K rounds of shortest LEFT to RIGHT paths,
/// removing the sensors of each path before the next round. Every weight-1
/// edge on a path becomes one gap sensor in the result.
pub fn k_disjoint_paths(graph: &BarrierGraph, k: usize) -> Result<SelectionResult> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    let n = graph.node_count();
    let mut removed = vec![false; n];
    let mut out = SelectionBuilder::default();
    let mut next_id = graph.next_id;
    let mut complete = true;
    for round in 1..=k {
        let zones = match graph.policy {
            GapPolicy::AnyGap => None,
            GapPolicy::UncoveredOnly => Some(uncovered_zones(
                graph.sensors.iter().enumerate().filter(|(i, _)| !removed[i + 1]).map(|(_, iv)| iv),
                &graph.domain,
            )),
        };
        let mut work = 0;
        let Some(label) = shortest_path(graph, &removed, zones.as_deref(), &mut work) else {
            complete = false;
            break;
        };
        out.comparisons += work;
        for pair in label.path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if graph.weight_within(a, b, zones.as_deref()) == Some(1) {
                let (u, v) = graph.gap_span(a, b);
                let gap = ProjectedInterval::gap(SensorId(next_id), u.min(v), u.max(v));
                next_id += 1;
                out.select(&gap, step(&gap, round, true));
            }
            if let Node::Sensor(_) = graph.node(b) {
                let iv = graph.sensors[b - 1];
                removed[b] = true;
                out.select(&iv, step(&iv, round, false));
            }
        }
    }
    let mut result = out.finish();
    result.fully_covered = complete && result.virtual_ids.is_empty();
    Ok(result)
}

fn step(iv: &ProjectedInterval, round: usize, gap: bool) -> SelectionStep {
    SelectionStep {
        current: iv.u,
        current_target: None,
        candidate_ids: if gap { Vec::new() } else { vec![iv.sensor_id] },
        chosen_id: iv.sensor_id,
        reach: iv.v,
        reach_target: None,
        round: Some(round),
        gap,
    }
}
