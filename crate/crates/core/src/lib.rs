//! Space-syntax depth analysis of axial maps and the Hotelling linear-city
//! model behind the d-value location measure.
//!
//! * [`graph`]: the connectivity graph and step-count depth measures.
//! * [`syntax`]: depth from outside, `MD_o`, d-values and site scoring.
//! * [`mapfile`]: Prolog-fact and CSV edge-list readers.
//! * [`hotelling`]: demand split, profits and price equilibria.

pub mod graph;
pub mod hotelling;
pub mod mapfile;
pub mod space;
pub mod syntax;

pub use graph::{DepthProfile, GraphError, SpatialGraph};
pub use hotelling::{
    best_response_solve, comparative_statics, demand_split, equilibrium, profits, DemandSplit,
    Equilibrium, HotellingError, MarketConfig, Param, PricePair, Violation,
};
pub use mapfile::{
    parse_csv_edges, parse_fact_file, to_edge_list, EdgeList, FactLine, InputFormat, MapFileError,
    ParseDiagnostics, ParseOptions,
};
pub use space::{SpaceId, DEFAULT_ROOT};
pub use syntax::{
    site_score, syntax_report, Band, BandThresholds, SiteScore, SyntaxReport, SyntaxRow,
};

/// Builds a graph straight from parsed facts.
pub fn graph_from_facts(facts: &[FactLine], root: &str) -> Result<SpatialGraph, GraphError> {
    SpatialGraph::build(to_edge_list(facts).edges, root)
}
