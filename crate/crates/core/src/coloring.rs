//! Partial edge colorings and their verifiers.
//!
//! Colors are integers `1..=k`; an absent entry means the edge is unused
//! (uncolored). A coloring is *proper* when no two edges sharing a vertex use
//! the same color, *total* when every edge is colored, and *avd* when it is
//! total, proper, and every pair of adjacent vertices sees distinct incident
//! color sets.

use std::sync::Arc;

use thiserror::Error;

use crate::graph::{EdgeId, MultiGraph, VertexId};

mod vizing;

pub use vizing::proper_edge_coloring;

/// Color indices are 1-based; 0 is reserved as the "unused" sentinel in
/// serialized form and never appears as a real color.
pub type Color = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Palette {
    size: u32,
}

impl Palette {
    pub fn new(size: u32) -> Self {
        assert!(size >= 1, "palette must contain at least one color");
        Palette { size }
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn contains(&self, c: Color) -> bool {
        c >= 1 && c <= self.size
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        1..=self.size
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring is not total: {uncolored} edges unused")]
    NotTotal { uncolored: u32 },
    #[error("coloring is not proper: {conflicts} conflicting edge pairs")]
    NotProper { conflicts: usize },
    #[error("edge {edge:?} is already colored")]
    EdgeAlreadyColored { edge: EdgeId },
    #[error("palette of {palette} colors is below the Vizing bound {required} (max degree {max_degree} + multiplicity {multiplicity})")]
    PaletteTooSmall { palette: u32, required: u32, max_degree: u32, multiplicity: u32 },
}

/// Set of colors, implemented as a bitset over the palette. The symmetric
/// difference size is the hot operation in the pipeline's property checks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColorSet {
    bits: Vec<u64>,
}

impl ColorSet {
    pub fn empty(palette: Palette) -> Self {
        ColorSet { bits: vec![0; (palette.size() as usize).div_ceil(64)] }
    }

    fn slot(c: Color) -> (usize, u64) {
        debug_assert!(c >= 1);
        let bit = (c - 1) as usize;
        (bit / 64, 1u64 << (bit % 64))
    }

    pub fn insert(&mut self, c: Color) {
        let (word, mask) = Self::slot(c);
        self.bits[word] |= mask;
    }

    pub fn remove(&mut self, c: Color) {
        let (word, mask) = Self::slot(c);
        self.bits[word] &= !mask;
    }

    pub fn contains(&self, c: Color) -> bool {
        let (word, mask) = Self::slot(c);
        word < self.bits.len() && self.bits[word] & mask != 0
    }

    pub fn len(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn symmetric_difference_len(&self, other: &ColorSet) -> u32 {
        debug_assert_eq!(self.bits.len(), other.bits.len());
        self.bits.iter().zip(&other.bits).map(|(a, b)| (a ^ b).count_ones()).sum()
    }

    /// Colors present in `self` but not in `other`, ascending.
    pub fn difference(&self, other: &ColorSet) -> Vec<Color> {
        self.iter().filter(|&c| !other.contains(c)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.bits.iter().enumerate().flat_map(|(word, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros();
                w &= w - 1;
                Some(word as u32 * 64 + bit + 1)
            })
        })
    }
}

/// An edge coloring of a fixed graph, possibly partial. Cheap to clone; the
/// graph itself is shared.
#[derive(Clone, Debug)]
pub struct PartialEdgeColoring {
    graph: Arc<MultiGraph>,
    palette: Palette,
    colors: Vec<Color>, // 0 = unused, indexed by EdgeId
    uncolored: u32,
}

impl PartialEdgeColoring {
    pub fn new(graph: Arc<MultiGraph>, palette: Palette) -> Self {
        let m = graph.edge_count();
        PartialEdgeColoring { graph, palette, colors: vec![0; m as usize], uncolored: m }
    }

    pub fn graph(&self) -> &Arc<MultiGraph> {
        &self.graph
    }

    pub fn palette(&self) -> Palette {
        self.palette
    }

    /// Re-hosts the coloring in a larger palette. Used when a later stage
    /// needs headroom for fresh colors; existing assignments are unchanged.
    pub fn widen_palette(&mut self, palette: Palette) {
        assert!(palette.size() >= self.palette.size(), "palette can only grow");
        self.palette = palette;
    }

    pub fn color(&self, e: EdgeId) -> Option<Color> {
        match self.colors[e.index()] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn set(&mut self, e: EdgeId, c: Color) {
        assert!(self.palette.contains(c), "color {c} outside palette 1..={}", self.palette.size());
        if self.colors[e.index()] == 0 {
            self.uncolored -= 1;
        }
        self.colors[e.index()] = c;
    }

    pub fn clear(&mut self, e: EdgeId) {
        if self.colors[e.index()] != 0 {
            self.uncolored += 1;
            self.colors[e.index()] = 0;
        }
    }

    pub fn is_total(&self) -> bool {
        self.uncolored == 0
    }

    pub fn uncolored_count(&self) -> u32 {
        self.uncolored
    }

    pub fn colored_count(&self) -> u32 {
        self.graph.edge_count() - self.uncolored
    }

    /// Number of distinct colors actually assigned.
    pub fn distinct_colors_used(&self) -> u32 {
        let mut seen = ColorSet::empty(self.palette);
        for &c in &self.colors {
            if c != 0 {
                seen.insert(c);
            }
        }
        seen.len()
    }

    /// The set of colors on edges incident to `v`.
    pub fn color_set(&self, v: VertexId) -> ColorSet {
        let mut set = ColorSet::empty(self.palette);
        for &e in self.graph.incident_edges(v) {
            if let Some(c) = self.color(e) {
                set.insert(c);
            }
        }
        set
    }

    /// Number of unused (uncolored) edges incident to `v`.
    pub fn unused_degree(&self, v: VertexId) -> u32 {
        self.graph.incident_edges(v).iter().filter(|&&e| self.color(e).is_none()).count() as u32
    }

    /// All pairs of same-colored edges sharing a vertex. Empty iff proper.
    pub fn verify_proper(&self) -> Vec<(EdgeId, EdgeId)> {
        let mut conflicts = Vec::new();
        for v in self.graph.vertices() {
            let inc = self.graph.incident_edges(v);
            for (i, &e) in inc.iter().enumerate() {
                let Some(c) = self.color(e) else { continue };
                for &f in &inc[i + 1..] {
                    if self.color(f) == Some(c) {
                        let pair = (e.min(f), e.max(f));
                        // Parallel edges share both endpoints; report once.
                        if !conflicts.contains(&pair) {
                            conflicts.push(pair);
                        }
                    }
                }
            }
        }
        conflicts
    }

    /// Adjacent vertex pairs with identical color sets. Requires a total
    /// proper coloring; empty result means the coloring is avd.
    pub fn verify_avd(&self) -> Result<Vec<(VertexId, VertexId)>, ColoringError> {
        if !self.is_total() {
            return Err(ColoringError::NotTotal { uncolored: self.uncolored });
        }
        let conflicts = self.verify_proper();
        if !conflicts.is_empty() {
            return Err(ColoringError::NotProper { conflicts: conflicts.len() });
        }
        let sets: Vec<ColorSet> = self.graph.vertices().map(|v| self.color_set(v)).collect();
        let mut bad = Vec::new();
        for e in self.graph.edges() {
            let (u, v) = self.graph.endpoints(e);
            // A total proper coloring gives |S(v)| = deg(v), so only
            // equal-degree neighbors can collide.
            if self.graph.degree(u) == self.graph.degree(v)
                && sets[u.index()] == sets[v.index()]
            {
                let pair = (u.min(v), u.max(v));
                if !bad.contains(&pair) {
                    bad.push(pair);
                }
            }
        }
        Ok(bad)
    }

    /// Palette colors absent at both endpoints of the uncolored edge `e`.
    /// Assigning any of them keeps the coloring proper.
    pub fn available_colors(&self, e: EdgeId) -> Result<ColorSet, ColoringError> {
        if self.color(e).is_some() {
            return Err(ColoringError::EdgeAlreadyColored { edge: e });
        }
        let (u, v) = self.graph.endpoints(e);
        let su = self.color_set(u);
        let sv = self.color_set(v);
        let mut avail = ColorSet::empty(self.palette);
        for c in self.palette.colors() {
            if !su.contains(c) && !sv.contains(c) {
                avail.insert(c);
            }
        }
        Ok(avail)
    }

    /// The subgraph of unused edges, with a map from its edge ids back to
    /// the parent's.
    pub fn unused_graph(&self) -> (MultiGraph, Vec<EdgeId>) {
        let mut edges = Vec::new();
        let mut map = Vec::new();
        for e in self.graph.edges() {
            if self.color(e).is_none() {
                let (u, v) = self.graph.endpoints(e);
                edges.push((u.0, v.0));
                map.push(e);
            }
        }
        let g = MultiGraph::build(
            self.graph.vertex_count(),
            &edges,
            self.graph.max_multiplicity().max(1),
        )
        .expect("unused subgraph reuses validated edges");
        (g, map)
    }

    /// Raw color slots in `EdgeId` order, 0 meaning unused. This is the
    /// serialized representation.
    pub fn color_slots(&self) -> &[Color] {
        &self.colors
    }

    /// Rebuilds a coloring from serialized slots (`0` = unused).
    pub fn from_slots(
        graph: Arc<MultiGraph>,
        palette: Palette,
        slots: &[Color],
    ) -> Result<Self, String> {
        if slots.len() != graph.edge_count() as usize {
            return Err(format!(
                "expected {} color slots, got {}",
                graph.edge_count(),
                slots.len()
            ));
        }
        let mut coloring = PartialEdgeColoring::new(graph, palette);
        for (i, &c) in slots.iter().enumerate() {
            if c != 0 {
                if !palette.contains(c) {
                    return Err(format!("color {c} at edge {i} outside palette 1..={}", palette.size()));
                }
                coloring.set(EdgeId(i as u32), c);
            }
        }
        Ok(coloring)
    }
}
