//! Property tests for graph depth, d-value reports, the map readers and the
//! linear-city model.

use dspace_core::hotelling::{profits_quadratic, DEFAULT_MAX_ITER};
use dspace_core::mapfile::{parse_fact_file_with, write_fact_file};
use dspace_core::*;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::Index;

// -----------------------------------------------------------------------------
// Graph generators and the brute-force oracle
// -----------------------------------------------------------------------------

fn name(i: usize) -> SpaceId {
    SpaceId::new(format!("s{i:02}")).unwrap()
}

#[derive(Debug, Clone)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl RawGraph {
    fn build(&self, root: usize) -> SpatialGraph {
        SpatialGraph::build(
            self.edges.iter().map(|&(u, v)| (name(u), name(v))),
            name(root).as_str(),
        )
        .unwrap()
    }
}

/// Connected graphs: a random spanning tree plus random extra edges.
fn connected_graph(max_nodes: usize) -> impl Strategy<Value = RawGraph> {
    (2..=max_nodes).prop_flat_map(|n| {
        (vec(any::<Index>(), n - 1), vec((0..n, 0..n), 0..2 * n)).prop_map(
            move |(parents, extra)| {
                let mut edges: Vec<(usize, usize)> = parents
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i + 1, p.index(i + 1)))
                    .collect();
                edges.extend(extra);
                RawGraph { n, edges }
            },
        )
    })
}

/// Arbitrary graphs, possibly disconnected; isolated indices simply do not
/// appear as spaces.
fn any_graph(max_nodes: usize) -> impl Strategy<Value = RawGraph> {
    (2..=max_nodes).prop_flat_map(|n| {
        vec((0..n, 0..n), 1..3 * n)
            .prop_filter("needs a non-loop edge", |e| e.iter().any(|(u, v)| u != v))
            .prop_map(move |edges| RawGraph { n, edges })
    })
}

/// Floyd–Warshall over the spaces of `g`, indexed like `g.spaces()`.
fn floyd_warshall(g: &SpatialGraph) -> Vec<Vec<Option<u32>>> {
    let n = g.space_count();
    let idx = |s: &SpaceId| g.spaces().binary_search(s).unwrap();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0u32);
    }
    for (u, v) in g.edges() {
        let (i, j) = (idx(u), idx(v));
        d[i][j] = Some(1);
        d[j][i] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(ik), Some(kj)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|ij| ik + kj < ij) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn depth_matches_floyd_warshall(raw in any_graph(12)) {
        let root = raw.edges.iter().find(|(u, v)| u != v).unwrap().0;
        let g = raw.build(root);
        let oracle = floyd_warshall(&g);
        for (i, origin) in g.spaces().iter().enumerate() {
            let profile = g.depth(origin.as_str()).unwrap();
            for (j, target) in g.spaces().iter().enumerate() {
                prop_assert_eq!(profile.get(target.as_str()), oracle[i][j]);
            }
        }
        prop_assert_eq!(g.depth_matrix(), oracle);
    }

    #[test]
    fn depth_profile_invariants(raw in connected_graph(12), origin in any::<Index>()) {
        let g = raw.build(0);
        let origin = &g.spaces()[origin.index(g.space_count())];
        let p = g.depth(origin.as_str()).unwrap();
        prop_assert_eq!(p.get(origin.as_str()), Some(0));
        prop_assert_eq!(p.depths.len(), g.space_count());
        for (u, v) in g.edges() {
            let (du, dv) = (p.get(u.as_str()).unwrap(), p.get(v.as_str()).unwrap());
            prop_assert!(du.abs_diff(dv) <= 1);
        }
        prop_assert_eq!(p.total(), g.total_depth(origin.as_str()).unwrap());
    }

    #[test]
    fn depth_is_symmetric(raw in connected_graph(12)) {
        let g = raw.build(0);
        for u in g.spaces() {
            let from_u = g.depth(u.as_str()).unwrap();
            for v in g.spaces() {
                let from_v = g.depth(v.as_str()).unwrap();
                prop_assert_eq!(from_u.get(v.as_str()), from_v.get(u.as_str()));
            }
        }
    }

    #[test]
    fn adding_an_edge_never_deepens(raw in connected_graph(12), u in any::<Index>(), v in any::<Index>()) {
        let before = raw.build(0);
        let mut more = raw.clone();
        more.edges.push((u.index(raw.n), v.index(raw.n)));
        let after = more.build(0);
        let (b, a) = (before.depth_matrix(), after.depth_matrix());
        prop_assert_eq!(before.spaces(), after.spaces());
        for i in 0..b.len() {
            for j in 0..b.len() {
                prop_assert!(a[i][j].unwrap() <= b[i][j].unwrap());
            }
        }
    }

    #[test]
    fn mean_depth_at_least_one(raw in connected_graph(12)) {
        let g = raw.build(0);
        for origin in g.spaces() {
            let md = g.mean_depth(origin.as_str()).unwrap();
            let adjacent_to_all = g.neighbours(origin.as_str()).unwrap().len() == g.space_count() - 1;
            prop_assert!(md >= 1.0);
            prop_assert_eq!(md == 1.0, adjacent_to_all);
        }
    }

    #[test]
    fn d_values_average_to_one(raw in connected_graph(12), root in any::<Index>()) {
        let g = raw.build(root.index(raw.n));
        let report = syntax_report(&g).unwrap();
        prop_assert_eq!(report.rows.len(), g.space_count() - 1);
        prop_assert!((report.mean_d_value() - 1.0).abs() <= 1e-12);
        let expected_md = report.total_depth() as f64 / report.space_count as f64;
        prop_assert_eq!(report.md_o, expected_md);
        for row in &report.rows {
            prop_assert_eq!(row.d_value, f64::from(row.depth_from_outside) / report.md_o);
        }
    }

    #[test]
    fn site_scores_ignore_labels(raw in connected_graph(12), perm in Just((0..12).collect::<Vec<usize>>()).prop_shuffle()) {
        let g = raw.build(0);
        let relabelled = SpatialGraph::build(
            raw.edges.iter().map(|&(u, v)| (name(perm[u]), name(perm[v]))),
            name(perm[0]).as_str(),
        ).unwrap();
        let bands = BandThresholds::default();
        let a = site_score(&syntax_report(&g).unwrap(), &bands);
        let b = site_score(&syntax_report(&relabelled).unwrap(), &bands);
        // ordering agrees up to tie-breaks, so compare the score sequence
        let scores = |r: &[SiteScore]| r.iter().map(|s| s.score).collect::<Vec<_>>();
        prop_assert_eq!(scores(&a), scores(&b));
        for s in &a {
            let i: usize = s.space.as_str()[1..].parse().unwrap();
            let twin = b.iter().find(|t| t.space == name(perm[i])).unwrap();
            prop_assert_eq!(twin.score, s.score);
            prop_assert_eq!(twin.band, s.band);
            prop_assert_eq!(twin.depth_from_outside, s.depth_from_outside);
        }
    }
}

// -----------------------------------------------------------------------------
// Map files
// -----------------------------------------------------------------------------

fn atom() -> impl Strategy<Value = SpaceId> {
    "[a-z][a-zA-Z0-9_]{0,8}".prop_map(|s| SpaceId::new(s).unwrap())
}

fn facts() -> impl Strategy<Value = Vec<FactLine>> {
    vec(
        (atom(), atom(), 1u32..1000).prop_map(|(from, to, multiplicity)| FactLine {
            from,
            to,
            multiplicity,
        }),
        1..40,
    )
}

proptest! {
    #[test]
    fn fact_file_round_trip(facts in facts()) {
        let text = write_fact_file(&facts);
        let strict = ParseOptions { strict: true };
        let (parsed, diag) = parse_fact_file_with(&text, strict).unwrap();
        prop_assert_eq!(&parsed, &facts);
        prop_assert!(diag.errors.is_empty());
        let (again, _) = parse_fact_file(&write_fact_file(&parsed)).unwrap();
        prop_assert_eq!(again, facts);
    }

    #[test]
    fn fact_parser_is_total(text in "(?s).{0,400}") {
        for strict in [false, true] {
            let diag = match parse_fact_file_with(&text, ParseOptions { strict }) {
                Ok((facts, d)) => {
                    prop_assert_eq!(facts.len(), d.accepted);
                    d
                }
                Err(e) => e.diagnostics().clone(),
            };
            prop_assert!(diag.is_balanced());
            prop_assert_eq!(diag.total_lines, text.lines().count());
        }
    }

    #[test]
    fn csv_parser_is_total(text in "(?s)[a-z,0-9 \\r\\n_A-Z]{0,300}") {
        let diag = match parse_csv_edges(&text) {
            Ok((_, d)) => d,
            Err(e) => e.diagnostics().clone(),
        };
        prop_assert!(diag.is_balanced());
    }

    #[test]
    fn fact_and_csv_files_agree(facts in facts(), header in any::<bool>(), crlf in any::<bool>()) {
        let edges = to_edge_list(&facts);
        prop_assume!(!edges.edges.is_empty());
        let root = edges.edges[0].0.as_str().to_string();

        let eol = if crlf { "\r\n" } else { "\n" };
        let mut csv = String::new();
        if header {
            csv.push_str("from,to,weight");
            csv.push_str(eol);
        }
        for f in &facts {
            csv.push_str(&format!("{},{},{}{eol}", f.from, f.to, f.multiplicity));
        }

        let (from_pl, _) = parse_fact_file(&write_fact_file(&facts)).unwrap();
        let (from_csv, _) = parse_csv_edges(&csv).unwrap();
        prop_assert_eq!(&from_pl, &from_csv);
        prop_assert_eq!(
            graph_from_facts(&from_pl, &root).unwrap(),
            graph_from_facts(&from_csv, &root).unwrap()
        );
    }
}

// -----------------------------------------------------------------------------
// Linear city
// -----------------------------------------------------------------------------

/// Markets on a dyadic grid (eighths, power-of-two transport costs) whose
/// arithmetic is exact in binary floating point.
fn dyadic_market() -> impl Strategy<Value = MarketConfig> {
    (8u32..=8000, -3i32..=3).prop_flat_map(|(l8, e)| {
        (0..=l8).prop_flat_map(move |a8| {
            (0..=l8 - a8).prop_map(move |b8| {
                MarketConfig::new(
                    f64::from(l8) / 8.0,
                    f64::from(a8) / 8.0,
                    f64::from(b8) / 8.0,
                    2f64.powi(e),
                )
                .unwrap()
            })
        })
    })
}

/// Markets with a nonempty contested segment and dyadic prices inside the
/// no-undercut region.
fn dyadic_priced_market() -> impl Strategy<Value = (MarketConfig, PricePair)> {
    dyadic_market()
        .prop_filter("needs a contested segment", |m| m.contested() > 0.0)
        .prop_flat_map(|m| {
            // gap is a multiple of 1/64; stay strictly inside (-gap, gap)
            let gap64 = (m.c() * m.contested() * 64.0) as i64;
            (Just(m), 1i64..=64_000, -(gap64 - 1)..=(gap64 - 1)).prop_map(|(m, base, diff)| {
                let p1 = base as f64 / 64.0 + 1000.0;
                (m, PricePair::new(p1, p1 + diff as f64 / 64.0))
            })
        })
}

/// Real-valued markets with `a + b <= 0.9 l`.
fn real_market() -> impl Strategy<Value = MarketConfig> {
    (0.5f64..1000.0, 0.0f64..=0.9, 0.0f64..=1.0, 0.01f64..100.0).prop_map(|(l, s, t, c)| {
        let a = s * t * l;
        let b = s * (1.0 - t) * l;
        MarketConfig::new(l, a, b, c).unwrap()
    })
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn demand_conserves_line_exactly((m, p) in dyadic_priced_market()) {
        let s = demand_split(&m, p).unwrap();
        prop_assert_eq!(s.x + s.y, m.l() - m.a() - m.b());
        prop_assert_eq!(s.q1 + s.q2, m.l());
        prop_assert!(s.x > 0.0 && s.y > 0.0);
    }

    #[test]
    fn demand_conserves_line_for_real_prices(m in real_market(), u in 0.0f64..1.0, lvl in 0.0f64..1000.0) {
        prop_assume!(m.contested() > 0.0);
        let gap = m.c() * m.contested();
        let p = PricePair::new(lvl, lvl + (2.0 * u - 1.0) * 0.999 * gap);
        let s = demand_split(&m, p).unwrap();
        prop_assert!(rel_close(s.x + s.y, m.contested(), 1e-9));
        prop_assert!(rel_close(s.q1 + s.q2, m.l(), 1e-9));
    }

    #[test]
    fn product_and_quadratic_profits_agree((m, p) in dyadic_priced_market()) {
        let (pi1, pi2) = profits(&m, p).unwrap();
        let (qa, qb) = profits_quadratic(&m, p);
        prop_assert!(rel_close(pi1, qa, 1e-9));
        prop_assert!(rel_close(pi2, qb, 1e-9));
    }

    #[test]
    fn swapping_stores_swaps_everything(m in real_market()) {
        let e = equilibrium(&m);
        let s = equilibrium(&m.swapped());
        prop_assert_eq!((e.prices.p1, e.prices.p2), (s.prices.p2, s.prices.p1));
        prop_assert_eq!((e.split.q1, e.split.q2), (s.split.q2, s.split.q1));
        prop_assert_eq!((e.profit1, e.profit2), (s.profit2, s.profit1));
        prop_assert_eq!(e.valid, s.valid);
    }

    #[test]
    fn equilibrium_identities(m in real_market()) {
        let e = equilibrium(&m);
        prop_assert_eq!(e.profit1, e.prices.p1 * e.split.q1);
        prop_assert_eq!(e.profit2, e.prices.p2 * e.split.q2);
        prop_assert!(rel_close(e.prices.p1 + e.prices.p2, 2.0 * m.c() * m.l(), 1e-12));
        prop_assert!(rel_close(e.split.q1 + e.split.q2, m.l(), 1e-12));
        let closed1 = m.c() / 2.0 * (m.l() + (m.a() - m.b()) / 3.0).powi(2);
        prop_assert!(rel_close(e.profit1, closed1, 1e-9));
        if e.valid {
            let s = demand_split(&m, e.prices).unwrap();
            prop_assert!(rel_close(s.q1, e.split.q1, 1e-9));
            prop_assert!(rel_close(s.q2, e.split.q2, 1e-9));
        }
    }

    #[test]
    fn power_of_two_cost_scaling_is_exact(m in dyadic_market(), k in -4i32..=4) {
        let k = 2f64.powi(k);
        let scaled = MarketConfig::new(m.l(), m.a(), m.b(), m.c() * k).unwrap();
        let (e, s) = (equilibrium(&m), equilibrium(&scaled));
        prop_assert_eq!(s.prices.p1, k * e.prices.p1);
        prop_assert_eq!(s.prices.p2, k * e.prices.p2);
        prop_assert_eq!(s.profit1, k * e.profit1);
        prop_assert_eq!(s.profit2, k * e.profit2);
        prop_assert_eq!(s.split, e.split);
    }

    #[test]
    fn cost_scaling_is_homogeneous(m in real_market(), k in 0.01f64..100.0) {
        let scaled = MarketConfig::new(m.l(), m.a(), m.b(), m.c() * k).unwrap();
        let (e, s) = (equilibrium(&m), equilibrium(&scaled));
        prop_assert!(rel_close(s.prices.p1, k * e.prices.p1, 1e-9));
        prop_assert!(rel_close(s.profit2, k * e.profit2, 1e-9));
        prop_assert_eq!(s.split, e.split);
    }

    #[test]
    fn best_response_matches_closed_form(m in real_market()) {
        let numeric = best_response_solve(&m, 1e-9, DEFAULT_MAX_ITER).unwrap();
        let closed = equilibrium(&m);
        prop_assert!((numeric.prices.p1 - closed.prices.p1).abs() < 1e-6);
        prop_assert!((numeric.prices.p2 - closed.prices.p2).abs() < 1e-6);
        prop_assert_eq!(numeric.valid, closed.valid);
    }

    #[test]
    fn equilibrium_is_a_local_maximum(m in real_market()) {
        let e = equilibrium(&m);
        let eps = 1e-4 * m.c() * m.l();
        let (pi1, pi2) = profits_quadratic(&m, e.prices);
        for d in [-eps, eps] {
            let (moved1, _) = profits_quadratic(&m, PricePair::new(e.prices.p1 + d, e.prices.p2));
            let (_, moved2) = profits_quadratic(&m, PricePair::new(e.prices.p1, e.prices.p2 + d));
            prop_assert!(moved1 <= pi1);
            prop_assert!(moved2 <= pi2);
        }
    }
}
