//! Potential graph of a (channel, GDoF target) pair.
//!
//! Vertices are one per receiver state plus a source `u`. Edge lengths encode
//! the difference constraints on the power exponents, so a target is
//! achievable by the polyhedral TIN scheme iff no directed circuit has
//! negative length, and shortest-path lengths from `u` form a valid power
//! allocation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::channel::CompoundChannel;
use crate::gdof::{GdofError, GdofTuple};
use crate::rational::{render, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertex {
    /// State `state` of receiver `user` (both 0-based).
    State { user: usize, state: usize },
    /// The distinguished source `u`.
    Source,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub length: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialGraph {
    users: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    reduced: bool,
}

impl PotentialGraph {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn user_count(&self) -> usize {
        self.users
    }

    pub fn source(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&Edge> {
        self.edges.iter().find(|e| e.from == from && e.to == to)
    }

    /// Index of the first vertex belonging to `user`.
    pub fn user_vertex(&self, user: usize) -> usize {
        self.vertices
            .iter()
            .position(|v| matches!(v, Vertex::State { user: u, .. } if *u == user))
            .expect("every user has a vertex")
    }

    pub fn label(&self, vertex: usize) -> String {
        match self.vertices[vertex] {
            Vertex::Source => String::from("u"),
            Vertex::State { user, .. } if self.reduced => alloc::format!("v{}", user + 1),
            Vertex::State { user, state } => alloc::format!("v{}_{}", user + 1, state + 1),
        }
    }

    /// Edge list, one `src dst length` line per edge.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", self.label(e.from), self.label(e.to), render(&e.length));
        }
        out
    }

    pub fn cycle_length(&self, cycle: &[usize]) -> Option<Q> {
        let mut total = Q::zero();
        for (i, &from) in cycle.iter().enumerate() {
            let to = cycle[(i + 1) % cycle.len()];
            total += &self.edge(from, to)?.length;
        }
        Some(total)
    }
}

fn check(channel: &CompoundChannel, d: &GdofTuple) -> Result<(), GdofError> {
    d.check_users(channel.user_count())
}

/// Builds the potential graph with one vertex per receiver state.
pub fn build_full(channel: &CompoundChannel, d: &GdofTuple) -> Result<PotentialGraph, GdofError> {
    check(channel, d)?;
    let users = channel.user_count();
    let mut vertices: Vec<Vertex> = (0..users)
        .flat_map(|user| (0..channel.state_count(user)).map(move |state| Vertex::State { user, state }))
        .collect();
    vertices.push(Vertex::Source);
    let source = vertices.len() - 1;

    let mut edges = Vec::with_capacity(vertices.len() * (vertices.len() - 1));
    for (from, &v) in vertices.iter().enumerate() {
        for (to, &w) in vertices.iter().enumerate() {
            if from == to {
                continue;
            }
            let length = match (v, w) {
                (Vertex::Source, _) => Q::zero(),
                (Vertex::State { user, state }, Vertex::Source) => {
                    channel.level(user, state, user) - &d[user]
                }
                (Vertex::State { user: k, .. }, Vertex::State { user: j, .. }) if k == j => Q::zero(),
                (Vertex::State { user: k, state }, Vertex::State { user: j, .. }) => {
                    channel.level(k, state, k) - channel.level(k, state, j) - &d[k]
                }
            };
            edges.push(Edge { from, to, length });
        }
    }
    debug_assert_eq!(source, channel.total_states());
    Ok(PotentialGraph {
        users,
        vertices,
        edges,
        reduced: false,
    })
}

/// Builds the `K + 1`-vertex graph whose lengths take the per-receiver minimum
/// over states; it is the potential graph of the regular counterpart.
pub fn build_reduced(channel: &CompoundChannel, d: &GdofTuple) -> Result<PotentialGraph, GdofError> {
    check(channel, d)?;
    let users = channel.user_count();
    let mut vertices: Vec<Vertex> = (0..users).map(|user| Vertex::State { user, state: 0 }).collect();
    vertices.push(Vertex::Source);
    let source = users;

    let mut edges = Vec::with_capacity((users + 1) * users);
    for k in 0..=users {
        for j in (0..=users).filter(|&j| j != k) {
            let length = if k == source {
                Q::zero()
            } else if j == source {
                channel.min_direct(k) - &d[k]
            } else {
                channel.min_gain(k, j) - &d[k]
            };
            edges.push(Edge { from: k, to: j, length });
        }
    }
    Ok(PotentialGraph {
        users,
        vertices,
        edges,
        reduced: true,
    })
}

/// Result of single-source shortest paths from `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShortestPathResult {
    /// No negative circuit; `l_dst[k]` is the shortest `u -> v_k` length.
    Feasible { l_dst: Vec<Q> },
    /// A directed circuit (vertex indices, in order) of negative length.
    Infeasible { cycle: Vec<usize>, length: Q },
}

impl ShortestPathResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, ShortestPathResult::Feasible { .. })
    }

    pub fn l_dst(&self) -> Option<&[Q]> {
        match self {
            ShortestPathResult::Feasible { l_dst } => Some(l_dst),
            ShortestPathResult::Infeasible { .. } => None,
        }
    }
}

/// Bellman-Ford from `u`: `|V| - 1` relaxation rounds and one detection round.
pub fn shortest_paths(graph: &PotentialGraph) -> ShortestPathResult {
    let n = graph.vertices.len();
    let source = graph.source();
    let mut dist: Vec<Option<Q>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[source] = Some(Q::zero());

    let relax = |dist: &mut Vec<Option<Q>>, pred: &mut Vec<Option<usize>>| -> Option<usize> {
        let mut last = None;
        for e in &graph.edges {
            let Some(base) = &dist[e.from] else { continue };
            let candidate = base + &e.length;
            if dist[e.to].as_ref().is_none_or(|cur| &candidate < cur) {
                dist[e.to] = Some(candidate);
                pred[e.to] = Some(e.from);
                last = Some(e.to);
            }
        }
        last
    };

    for _ in 1..n {
        if relax(&mut dist, &mut pred).is_none() {
            break;
        }
    }
    if let Some(updated) = relax(&mut dist, &mut pred) {
        // walking n predecessors from a vertex relaxed in round n lands on the circuit
        let mut v = updated;
        for _ in 0..n {
            v = pred[v].expect("relaxed vertex has a predecessor");
        }
        let start = v;
        let mut cycle = vec![start];
        let mut w = pred[start].expect("cycle vertex has a predecessor");
        while w != start {
            cycle.push(w);
            w = pred[w].expect("cycle vertex has a predecessor");
        }
        cycle.reverse();
        let length = graph.cycle_length(&cycle).expect("complete digraph");
        debug_assert!(length.is_negative());
        return ShortestPathResult::Infeasible { cycle, length };
    }

    let l_dst = (0..graph.users)
        .map(|user| {
            dist[graph.user_vertex(user)]
                .clone()
                .expect("every vertex is reachable from u")
        })
        .collect();
    ShortestPathResult::Feasible { l_dst }
}
