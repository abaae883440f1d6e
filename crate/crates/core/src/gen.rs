//! Synthetic maps: random geometric graphs, grids and bug traps.
//!
//! Everything is laid out in a small box of latitude/longitude so edge
//! weights are plain haversine lengths.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DisjointSet, GeoPoint, GraphBuilder, NodeId, RoutingGraph};
use crate::ingest::{PseudoSpec, ScenarioSpec};

const BASE_LAT: f64 = 47.60;
const BASE_LON: f64 = -122.33;
/// Side of the unit square in degrees.
const SPAN_DEG: f64 = 0.02;

fn unit_point(x: f64, y: f64) -> GeoPoint {
    GeoPoint::new(BASE_LAT + y * SPAN_DEG, BASE_LON + x * SPAN_DEG).expect("inside the box")
}

/// `n` uniform points in the unit square, joined when closer than `radius`
/// (unit-square distance). Components are then stitched together by their
/// closest cross pair until the graph is connected.
pub fn random_geometric<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> RoutingGraph {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    let mut b = GraphBuilder::with_capacity(n);
    let ids: Vec<NodeId> = pts.iter().map(|&(x, y)| b.add_node(unit_point(x, y))).collect();
    let d2 = |i: usize, j: usize| (pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2);
    let mut ds = DisjointSet::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if d2(i, j) < radius * radius {
                b.add_edge(ids[i], ids[j], None).expect("distinct nodes");
                ds.union(i, j).expect("in range");
            }
        }
    }
    while ds.components() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            for j in i + 1..n {
                if !ds.same(i, j).expect("in range") && best.is_none_or(|(bd, _, _)| d2(i, j) < bd) {
                    best = Some((d2(i, j), i, j));
                }
            }
        }
        let (_, i, j) = best.expect("more than one component");
        b.add_edge(ids[i], ids[j], None).expect("distinct nodes");
        ds.union(i, j).expect("in range");
    }
    b.build()
}

/// 4-connected `rows x cols` grid, `spacing` degrees apart; node id is
/// `row * cols + col`.
pub fn grid_graph(rows: usize, cols: usize, spacing: f64) -> RoutingGraph {
    let mut b = GraphBuilder::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            b.add_node(GeoPoint::new(BASE_LAT - r as f64 * spacing, BASE_LON + c as f64 * spacing).unwrap());
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            let v = NodeId::from(r * cols + c);
            if c + 1 < cols {
                b.add_edge(v, NodeId::from(r * cols + c + 1), None).unwrap();
            }
            if r + 1 < rows {
                b.add_edge(v, NodeId::from((r + 1) * cols + c), None).unwrap();
            }
        }
    }
    b.build()
}

/// Uniformly drawn scenario over distinct nodes: source, target and
/// `objectives` objectives. External ids equal internal indices.
pub fn random_scenario<R: Rng + ?Sized>(graph: &RoutingGraph, objectives: usize, rng: &mut R) -> Result<ScenarioSpec> {
    let n = graph.node_count();
    if objectives + 2 > n {
        return Err(Error::Config(format!("{} destinations do not fit in {n} nodes", objectives + 2)));
    }
    let picks: Vec<i64> = sample(rng, n, objectives + 2).into_iter().map(|i| i as i64).collect();
    Ok(ScenarioSpec {
        source: picks[0],
        target: picks[1],
        objectives: picks[2..].to_vec(),
        pseudo: Vec::new(),
    })
}

/// Grid map with a walled chamber whose only exit is a corridor on the side
/// facing away from the target. A ring road of single nodes runs around the
/// walls.
///
/// The source sits inside the chamber next to the wall that separates it
/// from the target, so the straight-line guidance points the wrong way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BugTrapSpec {
    /// Side of the square chamber, in nodes.
    pub chamber: usize,
    /// Corridor length, in nodes.
    pub corridor: usize,
    /// Corridor width, in nodes.
    pub entry_width: usize,
    /// Replace the corridor by a single edge spanning a gap.
    pub water_gap: bool,
}

impl Default for BugTrapSpec {
    fn default() -> Self {
        Self { chamber: 40, corridor: 5, entry_width: 1, water_gap: false }
    }
}

#[derive(Debug, Clone)]
pub struct BugTrap {
    pub graph: RoutingGraph,
    pub source: NodeId,
    pub target: NodeId,
    /// Outer end of the corridor (or the outside end of the gap edge); every
    /// source-target path passes through it.
    pub entry: NodeId,
    /// The gap edge of the water variant.
    pub bridge: Option<(NodeId, NodeId)>,
}

impl BugTrap {
    pub fn scenario(&self, with_entry_pseudo: bool) -> ScenarioSpec {
        ScenarioSpec {
            source: self.source.index() as i64,
            target: self.target.index() as i64,
            objectives: Vec::new(),
            pseudo: if with_entry_pseudo {
                vec![PseudoSpec { id: self.entry.index() as i64, must_visit: false }]
            } else {
                Vec::new()
            },
        }
    }
}

const TRAP_SPACING_DEG: f64 = 0.0005;

impl BugTrapSpec {
    pub fn validate(&self) -> Result<()> {
        if self.chamber < 2 {
            return Err(Error::Config("bug trap chamber must be at least 2 nodes wide".into()));
        }
        if self.entry_width == 0 || self.entry_width > self.chamber {
            return Err(Error::Config("entry width must be between 1 and the chamber size".into()));
        }
        if self.water_gap && self.corridor == 0 {
            return Err(Error::Config("the water gap needs a corridor length to span".into()));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<BugTrap> {
        self.validate()?;
        let (c, l, w) = (self.chamber, self.corridor, self.entry_width);
        // one-node ring road around the walled box
        let m = 1;
        let rows = 2 * m + l + c + 2;
        let cols = 2 * m + c + 2;
        // row bands, top to bottom: margin, corridor, top wall, chamber, bottom wall, margin
        let top_wall = m + l;
        let chamber_rows = top_wall + 1..top_wall + 1 + c;
        let bottom_wall = top_wall + 1 + c;
        let box_cols = m..m + c + 2;
        let chamber_cols = m + 1..m + 1 + c;
        let cs = m + 1 + (c - w) / 2;
        let corridor_cols = cs..cs + w;
        let mid = cs + (w - 1) / 2;

        #[derive(Clone, Copy, PartialEq)]
        enum Cell {
            Free,
            Blocked,
        }
        let mut cell = vec![Cell::Free; rows * cols];
        for r in m..rows {
            for col in 0..cols {
                let in_corridor_rows = (m..top_wall).contains(&r);
                let blocked = if in_corridor_rows {
                    if corridor_cols.contains(&col) {
                        self.water_gap
                    } else {
                        col + 1 == cs || col == cs + w
                    }
                } else if r == top_wall {
                    box_cols.contains(&col) && (self.water_gap || !corridor_cols.contains(&col))
                } else if chamber_rows.contains(&r) {
                    col == m || col == m + c + 1
                } else if r == bottom_wall {
                    box_cols.contains(&col)
                } else {
                    false
                };
                if blocked {
                    cell[r * cols + col] = Cell::Blocked;
                }
            }
        }
        debug_assert!(chamber_cols.contains(&mid));

        let mut b = GraphBuilder::with_capacity(rows * cols);
        let mut id = vec![None; rows * cols];
        for r in 0..rows {
            for col in 0..cols {
                if cell[r * cols + col] == Cell::Free {
                    let p = GeoPoint::new(BASE_LAT - r as f64 * TRAP_SPACING_DEG, BASE_LON + col as f64 * TRAP_SPACING_DEG)?;
                    id[r * cols + col] = Some(b.add_node(p));
                }
            }
        }
        let at = |r: usize, col: usize| id[r * cols + col].expect("free cell");
        for r in 0..rows {
            for col in 0..cols {
                let Some(v) = id[r * cols + col] else { continue };
                if col + 1 < cols {
                    if let Some(u) = id[r * cols + col + 1] {
                        b.add_edge(v, u, None)?;
                    }
                }
                if r + 1 < rows {
                    if let Some(u) = id[(r + 1) * cols + col] {
                        b.add_edge(v, u, None)?;
                    }
                }
            }
        }
        let (entry, bridge) = if self.water_gap {
            let inside = at(top_wall + 1, mid);
            let outside = at(m - 1, mid);
            b.add_edge(inside, outside, None)?;
            (outside, Some((inside, outside)))
        } else {
            (at(m, mid), None)
        };
        Ok(BugTrap {
            graph: b.build(),
            source: at(chamber_rows.end - 1, mid),
            target: at(bottom_wall + 1, mid),
            entry,
            bridge,
        })
    }
}
