use std::collections::{HashMap, HashSet};

use super::IdMap;
use crate::error::{Error, Result};
use crate::graph::{GeoPoint, GraphBuilder, RoutingGraph};

fn attr<'a>(node: roxmltree::Node<'a, '_>, name: &str, doc: &roxmltree::Document) -> Result<&'a str> {
    node.attribute(name).ok_or_else(|| Error::Parse {
        line: doc.text_pos_at(node.range().start).row as usize,
        message: format!("<{}> without `{name}`", node.tag_name().name()),
    })
}

fn num<T: std::str::FromStr>(
    node: roxmltree::Node,
    name: &str,
    doc: &roxmltree::Document,
) -> Result<T> {
    let raw = attr(node, name, doc)?;
    raw.parse().map_err(|_| Error::Parse {
        line: doc.text_pos_at(node.range().start).row as usize,
        message: format!("invalid `{name}` value `{raw}`"),
    })
}

/// Builds a road graph from OSM XML.
///
/// Every way carrying a `highway` tag is kept; consecutive `nd` references
/// become undirected edges weighted by their haversine length. Nodes that
/// end up without an edge are dropped. Internal ids follow document order.
pub fn parse_osm_xml(bytes: &[u8]) -> Result<(RoutingGraph, IdMap)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1,
        message: "input is not valid UTF-8".into(),
    })?;
    let doc = roxmltree::Document::parse(text).map_err(|e| Error::Parse {
        line: e.pos().row as usize,
        message: e.to_string(),
    })?;

    let mut coords: HashMap<i64, GeoPoint> = HashMap::new();
    let mut order: Vec<i64> = Vec::new();
    let mut ways: Vec<(i64, Vec<i64>)> = Vec::new();

    for el in doc.root_element().children().filter(|n| n.is_element()) {
        match el.tag_name().name() {
            "node" => {
                let id: i64 = num(el, "id", &doc)?;
                let lat: f64 = num(el, "lat", &doc)?;
                let lon: f64 = num(el, "lon", &doc)?;
                let p = GeoPoint::new(lat, lon).map_err(|e| Error::Parse {
                    line: doc.text_pos_at(el.range().start).row as usize,
                    message: e.to_string(),
                })?;
                if coords.insert(id, p).is_none() {
                    order.push(id);
                }
            }
            "way" => {
                let is_highway = el.children().any(|c| {
                    c.has_tag_name("tag") && c.attribute("k") == Some("highway")
                });
                if !is_highway {
                    continue;
                }
                let way: i64 = num(el, "id", &doc)?;
                let refs = el
                    .children()
                    .filter(|c| c.has_tag_name("nd"))
                    .map(|c| num::<i64>(c, "ref", &doc))
                    .collect::<Result<Vec<_>>>()?;
                ways.push((way, refs));
            }
            _ => {}
        }
    }

    // A way may precede its nodes, so references resolve after the scan.
    let mut edges: Vec<(i64, i64)> = Vec::new();
    for (way, refs) in &ways {
        if let Some(&node) = refs.iter().find(|r| !coords.contains_key(r)) {
            return Err(Error::MissingNodeRef { way: *way, node });
        }
        edges.extend(refs.windows(2).filter(|p| p[0] != p[1]).map(|p| (p[0], p[1])));
    }

    let used: HashSet<i64> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut ids = IdMap::new();
    let mut builder = GraphBuilder::with_capacity(used.len());
    for id in order.into_iter().filter(|id| used.contains(id)) {
        ids.insert(id)?;
        builder.add_node(coords[&id]);
    }
    for (a, b) in edges {
        builder.add_edge(ids.resolve(a)?, ids.resolve(b)?, None)?;
    }
    Ok((builder.build(), ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::haversine;

    #[test]
    fn two_nodes_one_way() {
        let xml = r#"<?xml version="1.0"?>
<osm version="0.6">
  <node id="1" lat="47.60" lon="-122.33"/>
  <node id="2" lat="47.61" lon="-122.33"/>
  <way id="100"><nd ref="1"/><nd ref="2"/><tag k="highway" v="residential"/></way>
</osm>"#;
        let (g, ids) = parse_osm_xml(xml.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        let (a, b) = (ids.resolve(1).unwrap(), ids.resolve(2).unwrap());
        let expect = haversine(g.point(a), g.point(b));
        assert_eq!(g.edge_weight(a, b), Some(expect));
    }

    #[test]
    fn non_highway_way_dropped() {
        let xml = r#"<osm>
  <node id="1" lat="0" lon="0"/><node id="2" lat="0" lon="0.001"/>
  <way id="5"><nd ref="1"/><nd ref="2"/><tag k="building" v="yes"/></way>
</osm>"#;
        let (g, ids) = parse_osm_xml(xml.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 0);
        assert!(ids.is_empty());
    }

    #[test]
    fn malformed_xml_reports_line() {
        let xml = "<osm>\n<node id=\"1\" lat=\"0\" lon=\"0\">\n</osm>";
        match parse_osm_xml(xml.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_ref_names_way() {
        let xml = r#"<osm>
  <node id="1" lat="0" lon="0"/>
  <way id="77"><nd ref="1"/><nd ref="9"/><tag k="highway" v="path"/></way>
</osm>"#;
        assert_eq!(
            parse_osm_xml(xml.as_bytes()).unwrap_err(),
            Error::MissingNodeRef { way: 77, node: 9 }
        );
    }

    #[test]
    fn shared_nodes_and_repeated_refs() {
        let xml = r#"<osm>
  <node id="1" lat="0" lon="0"/><node id="2" lat="0" lon="0.001"/>
  <node id="3" lat="0.001" lon="0.001"/><node id="4" lat="1" lon="1"/>
  <way id="1"><nd ref="1"/><nd ref="2"/><nd ref="2"/><nd ref="3"/><tag k="highway" v="primary"/></way>
  <way id="2"><nd ref="3"/><nd ref="2"/><tag k="highway" v="service"/></way>
</osm>"#;
        let (g, ids) = parse_osm_xml(xml.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(ids.internal(4).is_none());
    }
}
