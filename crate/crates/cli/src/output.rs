//! Report payloads and their text, CSV and JSON renderings.
//!
//! Every renderer works from the same payload value. Text rounds to two
//! decimals; CSV and JSON carry full double precision.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use sha2::{Digest, Sha256};

use dspace_core::{Equilibrium, MarketConfig, SiteScore, SyntaxReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub input_digest: String,
    pub timestamp: String,
}

impl Meta {
    pub fn new(input: &[u8]) -> Meta {
        Meta {
            tool: "dspace",
            version: env!("CARGO_PKG_VERSION"),
            input_digest: format!("sha256:{}", hex::encode(Sha256::digest(input))),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: Option<&'a Meta>,
    result: &'a T,
}

pub trait Payload: Serialize {
    fn text(&self, out: &mut String);
    fn csv(&self, out: &mut String);
}

pub fn render<T: Payload>(payload: &T, format: OutputFormat, meta: Option<&Meta>) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            if let Some(m) = meta {
                let _ = writeln!(
                    out,
                    "# {} {} input {} at {}",
                    m.tool, m.version, m.input_digest, m.timestamp
                );
            }
            payload.text(&mut out);
        }
        OutputFormat::Csv => payload.csv(&mut out),
        OutputFormat::Json => {
            let envelope = Envelope {
                meta,
                result: payload,
            };
            out = serde_json::to_string_pretty(&envelope).expect("payload serializes");
            out.push('\n');
        }
    }
    out
}

fn fixed2(v: f64) -> String {
    format!("{v:.2}")
}

// -----------------------------------------------------------------------------
// analyze
// -----------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SpaceRow {
    pub space: String,
    pub depth_from_outside: u32,
    pub d_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeResult {
    pub root: String,
    pub md_o: f64,
    pub max_depth: u32,
    pub space_count: usize,
    pub spaces: Vec<SpaceRow>,
}

impl From<&SyntaxReport> for AnalyzeResult {
    fn from(r: &SyntaxReport) -> Self {
        AnalyzeResult {
            root: r.root.to_string(),
            md_o: r.md_o,
            max_depth: r.max_depth,
            space_count: r.space_count,
            spaces: r
                .rows
                .iter()
                .map(|row| SpaceRow {
                    space: row.space.to_string(),
                    depth_from_outside: row.depth_from_outside,
                    d_value: row.d_value,
                })
                .collect(),
        }
    }
}

fn name_width<'a>(names: impl Iterator<Item = &'a str>) -> usize {
    names.map(str::len).max().unwrap_or(0).max(5)
}

impl Payload for AnalyzeResult {
    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "root: {}", self.root);
        let _ = writeln!(out, "spaces (excluding root): {}", self.space_count);
        let _ = writeln!(out, "max depth: {}", self.max_depth);
        let _ = writeln!(out, "MD_o: {}", fixed2(self.md_o));
        out.push('\n');
        let w = name_width(self.spaces.iter().map(|r| r.space.as_str()));
        let _ = writeln!(out, "{:<w$}  {:>3}  {:>7}", "space", "D_o", "d-value");
        for r in &self.spaces {
            let _ = writeln!(
                out,
                "{:<w$}  {:>3}  {:>7}",
                r.space,
                r.depth_from_outside,
                fixed2(r.d_value)
            );
        }
    }

    fn csv(&self, out: &mut String) {
        out.push_str("space,depth_from_outside,d_value,md_o\n");
        for r in &self.spaces {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.space, r.depth_from_outside, r.d_value, self.md_o
            );
        }
    }
}

// -----------------------------------------------------------------------------
// dvalue
// -----------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct DValueResult {
    pub space: String,
    pub depth_from_outside: u32,
    pub md_o: f64,
    pub d_value: f64,
}

impl Payload for DValueResult {
    fn text(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "{}: D_o = {}, MD_o = {}, d-value = {}",
            self.space,
            self.depth_from_outside,
            fixed2(self.md_o),
            fixed2(self.d_value)
        );
    }

    fn csv(&self, out: &mut String) {
        out.push_str("space,depth_from_outside,md_o,d_value\n");
        let _ = writeln!(
            out,
            "{},{},{},{}",
            self.space, self.depth_from_outside, self.md_o, self.d_value
        );
    }
}

// -----------------------------------------------------------------------------
// site-score
// -----------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub space: String,
    pub depth_from_outside: u32,
    pub d_value: f64,
    pub score: f64,
    pub band: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct SiteScoreResult {
    pub root: String,
    pub md_o: f64,
    pub ranking: Vec<RankRow>,
}

impl SiteScoreResult {
    pub fn new(report: &SyntaxReport, ranked: &[SiteScore], top: usize) -> Self {
        SiteScoreResult {
            root: report.root.to_string(),
            md_o: report.md_o,
            ranking: ranked
                .iter()
                .take(top)
                .enumerate()
                .map(|(i, s)| RankRow {
                    rank: i + 1,
                    space: s.space.to_string(),
                    depth_from_outside: s.depth_from_outside,
                    d_value: s.d_value,
                    score: s.score,
                    band: s.band.as_str(),
                })
                .collect(),
        }
    }
}

impl Payload for SiteScoreResult {
    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "MD_o: {}", fixed2(self.md_o));
        out.push('\n');
        let w = name_width(self.ranking.iter().map(|r| r.space.as_str()));
        let _ = writeln!(
            out,
            "{:>4}  {:<w$}  {:>3}  {:>7}  {:>5}  band",
            "rank", "space", "D_o", "d-value", "score"
        );
        for r in &self.ranking {
            let _ = writeln!(
                out,
                "{:>4}  {:<w$}  {:>3}  {:>7}  {:>5}  {}",
                r.rank,
                r.space,
                r.depth_from_outside,
                fixed2(r.d_value),
                fixed2(r.score),
                r.band
            );
        }
    }

    fn csv(&self, out: &mut String) {
        out.push_str("rank,space,depth_from_outside,d_value,score,band\n");
        for r in &self.ranking {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.rank, r.space, r.depth_from_outside, r.d_value, r.score, r.band
            );
        }
    }
}

// -----------------------------------------------------------------------------
// hotelling
// -----------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct MarketView {
    pub l: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl From<&MarketConfig> for MarketView {
    fn from(m: &MarketConfig) -> Self {
        MarketView {
            l: m.l(),
            a: m.a(),
            b: m.b(),
            c: m.c(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumView {
    pub p1: f64,
    pub p2: f64,
    pub x: f64,
    pub y: f64,
    pub q1: f64,
    pub q2: f64,
    pub pi1: f64,
    pub pi2: f64,
    pub valid: bool,
    pub violations: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u32>,
}

impl From<&Equilibrium> for EquilibriumView {
    fn from(e: &Equilibrium) -> Self {
        EquilibriumView {
            p1: e.prices.p1,
            p2: e.prices.p2,
            x: e.split.x,
            y: e.split.y,
            q1: e.split.q1,
            q2: e.split.q2,
            pi1: e.profit1,
            pi2: e.profit2,
            valid: e.valid,
            violations: e.violations.iter().map(|v| v.as_str()).collect(),
            iterations: e.iterations,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HotellingResult {
    pub mode: &'static str,
    pub market: MarketView,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed: Option<EquilibriumView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<EquilibriumView>,
    /// Largest price difference between the two solvers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_discrepancy: Option<f64>,
}

fn equilibrium_line(label: &str, e: &EquilibriumView) -> String {
    let mut line = format!(
        "{label}: p1={} p2={} q1={} q2={} pi1={} pi2={} ",
        fixed2(e.p1),
        fixed2(e.p2),
        fixed2(e.q1),
        fixed2(e.q2),
        fixed2(e.pi1),
        fixed2(e.pi2)
    );
    if e.valid {
        line.push_str("valid");
    } else {
        let _ = write!(line, "invalid ({})", e.violations.join(", "));
    }
    if let Some(n) = e.iterations {
        let _ = write!(line, " [{n} iterations]");
    }
    line
}

impl Payload for HotellingResult {
    fn text(&self, out: &mut String) {
        let m = &self.market;
        let _ = writeln!(
            out,
            "market: l={} a={} b={} c={}",
            fixed2(m.l),
            fixed2(m.a),
            fixed2(m.b),
            fixed2(m.c)
        );
        if let Some(e) = &self.closed {
            let _ = writeln!(out, "{}", equilibrium_line("closed", e));
        }
        if let Some(e) = &self.numeric {
            let _ = writeln!(out, "{}", equilibrium_line("numeric", e));
        }
        if let Some(d) = self.max_discrepancy {
            let _ = writeln!(out, "max discrepancy: {d:.2e}");
        }
    }

    fn csv(&self, out: &mut String) {
        out.push_str("solver,l,a,b,c,p1,p2,x,y,q1,q2,pi1,pi2,valid,violations,iterations\n");
        let m = &self.market;
        for (label, e) in [("closed", &self.closed), ("numeric", &self.numeric)] {
            if let Some(e) = e {
                let _ = writeln!(
                    out,
                    "{label},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    m.l,
                    m.a,
                    m.b,
                    m.c,
                    e.p1,
                    e.p2,
                    e.x,
                    e.y,
                    e.q1,
                    e.q2,
                    e.pi1,
                    e.pi2,
                    e.valid,
                    e.violations.join(";"),
                    e.iterations.map(|n| n.to_string()).unwrap_or_default()
                );
            }
        }
    }
}
