//! Depth-from-outside table, the d-value and location scoring.
//!
//! For every space other than the root, `D_o` is its step count from the
//! root and the d-value is `D_o / MD_o`, where `MD_o` is the mean of `D_o`
//! over those spaces. A d-value near 1 marks a location neither at the edge
//! of the settlement nor in its contested centre.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::graph::{GraphError, SpatialGraph};
use crate::space::SpaceId;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntaxRow {
    pub space: SpaceId,
    pub depth_from_outside: u32,
    pub d_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntaxReport {
    pub root: SpaceId,
    /// One row per space except the root, sorted by depth then name.
    pub rows: Vec<SyntaxRow>,
    pub md_o: f64,
    pub max_depth: u32,
    /// Number of spaces excluding the root.
    pub space_count: usize,
}

impl SyntaxReport {
    pub fn row(&self, name: &str) -> Option<&SyntaxRow> {
        self.rows.iter().find(|r| r.space.as_str() == name)
    }

    pub fn total_depth(&self) -> u64 {
        self.rows
            .iter()
            .map(|r| u64::from(r.depth_from_outside))
            .sum()
    }

    pub fn mean_d_value(&self) -> f64 {
        self.rows.iter().map(|r| r.d_value).sum::<f64>() / self.rows.len() as f64
    }
}

/// Builds the d-value table for a graph, measuring from its root.
pub fn syntax_report(graph: &SpatialGraph) -> Result<SyntaxReport, GraphError> {
    if graph.space_count() < 2 {
        return Err(GraphError::DegenerateGraph(graph.space_count()));
    }
    let root = graph.root_index();
    let depths = graph.root_depths()?;

    let space_count = graph.space_count() - 1;
    let total: u64 = depths.iter().map(|&(_, d)| u64::from(d)).sum();
    let md_o = total as f64 / space_count as f64;
    let max_depth = depths.iter().map(|&(_, d)| d).max().unwrap_or(0);

    let mut rows: Vec<SyntaxRow> = depths
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| i != root)
        .map(|(_, (space, d))| SyntaxRow {
            space: space.clone(),
            depth_from_outside: d,
            d_value: f64::from(d) / md_o,
        })
        .collect();
    rows.sort_by(|a, b| {
        a.depth_from_outside
            .cmp(&b.depth_from_outside)
            .then_with(|| a.space.cmp(&b.space))
    });

    Ok(SyntaxReport {
        root: graph.root().clone(),
        rows,
        md_o,
        max_depth,
        space_count,
    })
}

/// Qualitative reading of a d-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Band {
    /// Shallow: close to the edge of the settlement, small local market.
    EndOfSettlement,
    Intermediate,
    /// Deep relative to the mean: close to the centre, hard competition.
    Central,
}

impl Band {
    pub fn as_str(self) -> &'static str {
        match self {
            Band::EndOfSettlement => "end-of-settlement",
            Band::Intermediate => "intermediate",
            Band::Central => "central",
        }
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Band limits: below `low` is end-of-settlement, above `high` is central.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandThresholds {
    pub low: f64,
    pub high: f64,
}

impl Default for BandThresholds {
    fn default() -> Self {
        BandThresholds {
            low: 0.5,
            high: 1.5,
        }
    }
}

impl BandThresholds {
    pub fn classify(&self, d_value: f64) -> Band {
        if d_value < self.low {
            Band::EndOfSettlement
        } else if d_value > self.high {
            Band::Central
        } else {
            Band::Intermediate
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiteScore {
    pub space: SpaceId,
    pub depth_from_outside: u32,
    pub d_value: f64,
    /// Distance of the d-value from 1; lower is better.
    pub score: f64,
    pub band: Band,
}

/// Ranks spaces by `|d_value - 1|`, best first, ties by name.
///
/// The score is evaluated as `|D_o - MD_o| / MD_o` so that spaces lying
/// the same number of steps above and below the mean tie exactly.
pub fn site_score(report: &SyntaxReport, bands: &BandThresholds) -> Vec<SiteScore> {
    let mut ranked: Vec<SiteScore> = report
        .rows
        .iter()
        .map(|r| SiteScore {
            space: r.space.clone(),
            depth_from_outside: r.depth_from_outside,
            d_value: r.d_value,
            score: (f64::from(r.depth_from_outside) - report.md_o).abs() / report.md_o,
            band: bands.classify(r.d_value),
        })
        .collect();
    ranked.sort_by(|a, b| {
        a.score
            .partial_cmp(&b.score)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.space.cmp(&b.space))
    });
    ranked
}
