use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{NodeId, RoutingGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DestinationKind {
    Source,
    Objective,
    Pseudo { must_visit: bool },
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Destination {
    pub node: NodeId,
    pub kind: DestinationKind,
}

impl Destination {
    /// Whether a final route has to pass through this destination.
    pub fn is_required(&self) -> bool {
        !matches!(self.kind, DestinationKind::Pseudo { must_visit: false })
    }
}

/// Destinations indexed as `[source, objectives.., pseudo.., target]`.
///
/// Every destination sits on a distinct map node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestinationSet {
    items: Vec<Destination>,
}

impl DestinationSet {
    pub fn new(source: NodeId, target: NodeId, objectives: &[NodeId]) -> Result<Self> {
        let mut items = Vec::with_capacity(objectives.len() + 2);
        items.push(Destination { node: source, kind: DestinationKind::Source });
        items.extend(objectives.iter().map(|&node| Destination {
            node,
            kind: DestinationKind::Objective,
        }));
        items.push(Destination { node: target, kind: DestinationKind::Target });
        let set = Self { items };
        set.check_distinct()?;
        Ok(set)
    }

    /// Inserts pseudo destinations just before the target.
    pub fn add_pseudo_destinations(&self, pseudo: &[(NodeId, bool)]) -> Result<Self> {
        for &(node, _) in pseudo {
            if node == self.source_node() || node == self.target_node() {
                return Err(Error::Scenario(format!(
                    "pseudo destination {node} coincides with the source or target"
                )));
            }
        }
        let mut items = self.items.clone();
        let target = items.pop().expect("target present");
        items.extend(pseudo.iter().map(|&(node, must_visit)| Destination {
            node,
            kind: DestinationKind::Pseudo { must_visit },
        }));
        items.push(target);
        let set = Self { items };
        set.check_distinct()?;
        Ok(set)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for d in &self.items {
            if !seen.insert(d.node) {
                return Err(Error::DuplicateDestination(d.node.index() as i64));
            }
        }
        Ok(())
    }

    pub fn validate_against(&self, graph: &RoutingGraph) -> Result<()> {
        self.items.iter().try_for_each(|d| graph.check(d.node))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> Destination {
        self.items[i]
    }

    pub fn node(&self, i: usize) -> NodeId {
        self.items[i].node
    }

    pub fn iter(&self) -> impl Iterator<Item = &Destination> {
        self.items.iter()
    }

    pub fn source_index(&self) -> usize {
        0
    }

    pub fn target_index(&self) -> usize {
        self.items.len() - 1
    }

    pub fn source_node(&self) -> NodeId {
        self.items[0].node
    }

    pub fn target_node(&self) -> NodeId {
        self.items[self.items.len() - 1].node
    }

    pub fn required_flags(&self) -> Vec<bool> {
        self.items.iter().map(Destination::is_required).collect()
    }

    pub fn index_of(&self, node: NodeId) -> Option<usize> {
        self.items.iter().position(|d| d.node == node)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_flags() {
        let d = DestinationSet::new(NodeId(0), NodeId(9), &[NodeId(3), NodeId(4)])
            .unwrap()
            .add_pseudo_destinations(&[(NodeId(5), false), (NodeId(6), true)])
            .unwrap();
        assert_eq!(d.len(), 6);
        assert_eq!(d.target_node(), NodeId(9));
        assert_eq!(d.required_flags(), vec![true, true, true, false, true, true]);
    }

    #[test]
    fn empty_objectives() {
        let d = DestinationSet::new(NodeId(0), NodeId(1), &[]).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn rejects_duplicates_and_bad_pseudo() {
        assert!(DestinationSet::new(NodeId(0), NodeId(0), &[]).is_err());
        assert!(DestinationSet::new(NodeId(0), NodeId(1), &[NodeId(2), NodeId(2)]).is_err());
        let d = DestinationSet::new(NodeId(0), NodeId(1), &[]).unwrap();
        assert!(d.add_pseudo_destinations(&[(NodeId(1), false)]).is_err());
        assert!(d.add_pseudo_destinations(&[(NodeId(0), true)]).is_err());
    }
}
