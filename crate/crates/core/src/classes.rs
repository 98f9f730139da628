//! Equivalence-class decompositions of neighborhoods.
//!
//! All partitions are returned in canonical order: classes sorted by their
//! smallest member id.

use std::collections::BTreeMap;

use crate::network::{Network, NetworkError};
use crate::rational::Rational;
use crate::ratpoly::Poly;
use crate::vset::VertexSet;

/// One equivalence class of neighbors of a controller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetClass {
    pub key: Poly,
    pub members: VertexSet,
    /// Shift `delta_cv` of each member's curvature onto the key.
    pub shifts: BTreeMap<usize, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetPartition {
    pub controller: usize,
    pub classes: Vec<TargetClass>,
}

/// How a vertex outside `C` attaches to `C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiblingSignature {
    pub adjacency: VertexSet,
    /// Class key with respect to each linked controller, by controller index.
    pub keys: Vec<(usize, Poly)>,
}

pub(crate) fn smallest_id(net: &Network, set: &VertexSet) -> Option<String> {
    set.iter().map(|i| net.id(i)).min().map(str::to_string)
}

pub(crate) fn sort_canonical(net: &Network, sets: &mut [VertexSet]) {
    sets.sort_by_cached_key(|s| smallest_id(net, s));
}

/// Partitions the neighbors of `c` by their class key.
pub fn target_classes(net: &Network, c: usize) -> Result<TargetPartition, NetworkError> {
    let n = net.len();
    let mut groups: BTreeMap<Poly, (VertexSet, BTreeMap<usize, Rational>)> = BTreeMap::new();
    for v in net.neighbor_indices(c) {
        let (key, delta) = net.class_key_between(c, v)?;
        let entry = groups
            .entry(key)
            .or_insert_with(|| (VertexSet::empty(n), BTreeMap::new()));
        entry.0.insert(v);
        entry.1.insert(v, delta);
    }
    let mut classes: Vec<TargetClass> = groups
        .into_iter()
        .map(|(key, (members, shifts))| TargetClass {
            key,
            members,
            shifts,
        })
        .collect();
    classes.sort_by_cached_key(|cl| smallest_id(net, &cl.members));
    Ok(TargetPartition {
        controller: c,
        classes,
    })
}

/// First neighbors of `controllers` that are not themselves in it.
pub fn outer_neighbors(net: &Network, controllers: &VertexSet) -> VertexSet {
    let mut out = VertexSet::empty(net.len());
    for c in controllers.iter() {
        for v in net.neighbor_indices(c) {
            if !controllers.contains(v) {
                out.insert(v);
            }
        }
    }
    out
}

fn adjacency_into(net: &Network, controllers: &VertexSet, v: usize) -> VertexSet {
    VertexSet::from_indices(
        net.len(),
        net.neighbor_indices(v).filter(|&u| controllers.contains(u)),
    )
}

fn group_by<K: Ord>(
    net: &Network,
    members: impl Iterator<Item = usize>,
    mut key: impl FnMut(usize) -> Result<K, NetworkError>,
) -> Result<Vec<VertexSet>, NetworkError> {
    let mut groups: BTreeMap<K, VertexSet> = BTreeMap::new();
    for v in members {
        groups
            .entry(key(v)?)
            .or_insert_with(|| VertexSet::empty(net.len()))
            .insert(v);
    }
    let mut out: Vec<VertexSet> = groups.into_values().collect();
    sort_canonical(net, &mut out);
    Ok(out)
}

/// Partitions `N(C)` by adjacency pattern into `C`.
pub fn sibling_classes(net: &Network, controllers: &VertexSet) -> Vec<VertexSet> {
    group_by(net, outer_neighbors(net, controllers).iter(), |v| {
        Ok(adjacency_into(net, controllers, v))
    })
    .expect("adjacency grouping is infallible")
}

pub fn sibling_signature(
    net: &Network,
    controllers: &VertexSet,
    v: usize,
) -> Result<SiblingSignature, NetworkError> {
    let adjacency = adjacency_into(net, controllers, v);
    let keys = adjacency
        .iter()
        .map(|c| net.class_key_between(c, v).map(|(key, _)| (c, key)))
        .collect::<Result<_, _>>()?;
    Ok(SiblingSignature { adjacency, keys })
}

/// Partitions `N(C)` into C-equivalence classes: siblings that also share
/// the class key with respect to every linked controller.
pub fn c_equivalence_classes(
    net: &Network,
    controllers: &VertexSet,
) -> Result<Vec<VertexSet>, NetworkError> {
    group_by(net, outer_neighbors(net, controllers).iter(), |v| {
        sibling_signature(net, controllers, v)
    })
}
