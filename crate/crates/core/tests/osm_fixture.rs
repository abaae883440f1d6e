use multigoal::graph::haversine;
use multigoal::ingest::parse_osm_xml;

const FIXTURE: &[u8] = include_bytes!("data/osm_100_ways.osm");

#[test]
fn hundred_way_fixture_counts() {
    // counted by a line-oriented script over the same file: distinct
    // unordered consecutive nd pairs of highway ways, and their endpoints
    let (g, ids) = parse_osm_xml(FIXTURE).unwrap();
    assert_eq!(g.node_count(), 173);
    assert_eq!(ids.len(), 173);
    assert_eq!(g.edges().count(), 192);
    assert!(g.nodes().all(|v| g.check(v).is_ok() && !g.neighbors(v).is_empty()));
}

#[test]
fn fixture_weights_are_haversine() {
    let (g, _) = parse_osm_xml(FIXTURE).unwrap();
    for (u, v, w) in g.edges() {
        assert_eq!(w, haversine(g.point(u), g.point(v)));
    }
}
