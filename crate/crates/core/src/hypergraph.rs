//! Hypergraph boards and the structural analyses used by the strategies and
//! the lab: degrees, components, excess, stars, coverage and the
//! easier-than order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guard::{Meter, WorkGuard};

/// Vertex id. A board on `n` vertices uses ids `0..n`.
pub type Vertex = u32;

/// A hypergraph on vertices `0..n`.
///
/// Edges are stored as strictly increasing vertex lists, deduplicated, and
/// kept in lexicographic order. Two hypergraphs built from the same edge
/// sets therefore compare equal and serialize to the same bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    uniformity: Option<usize>,
    edges: Vec<Vec<Vertex>>,
}

/// On-disk form: `{"n": .., "s": .., "edges": [[..], ..]}`.
#[derive(Debug, Serialize, Deserialize)]
struct HypergraphFile {
    n: usize,
    s: Option<usize>,
    edges: Vec<Vec<Vertex>>,
}

impl Hypergraph {
    /// Builds a board from raw edges. Uniformity is inferred when every
    /// edge has the same size.
    pub fn new<E: AsRef<[Vertex]>>(n: usize, raw_edges: impl IntoIterator<Item = E>) -> Result<Self> {
        let edges = canonical_edges(n, raw_edges)?;
        let uniformity = match edges.first() {
            Some(first) if edges.iter().all(|e| e.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Ok(Self { n, uniformity, edges })
    }

    /// Builds a board declared `s`-uniform; every edge must have `s` vertices.
    pub fn with_uniformity<E: AsRef<[Vertex]>>(
        n: usize,
        s: usize,
        raw_edges: impl IntoIterator<Item = E>,
    ) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("uniformity must be at least 1".into()));
        }
        let edges = canonical_edges(n, raw_edges)?;
        if let Some((index, e)) = edges.iter().enumerate().find(|(_, e)| e.len() != s) {
            return Err(Error::WrongEdgeSize {
                index,
                len: e.len(),
                expected: s,
            });
        }
        Ok(Self {
            n,
            uniformity: Some(s),
            edges,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            uniformity: None,
            edges: Vec::new(),
        }
    }

    /// Edges must already be canonical; used by the sampler, which emits
    /// them sorted and distinct.
    pub(crate) fn from_canonical(n: usize, s: usize, edges: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self {
            n,
            uniformity: Some(s),
            edges,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The common edge size, if the board is uniform (declared or inferred).
    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &[Vertex] {
        &self.edges[index]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v as u64,
                n: self.n,
            })
        }
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.binary_search(&v).is_ok()).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edge indices incident to each vertex, in increasing order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v as usize].push(i);
            }
        }
        inc
    }

    /// A copy keeping only the edges whose index satisfies `keep`.
    pub fn retain_edges(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, e)| e.clone())
            .collect();
        Self {
            n: self.n,
            uniformity: self.uniformity,
            edges,
        }
    }

    /// The board with `other` placed on fresh vertices `n..n + other.n`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Self> {
        let shift = self.n as Vertex;
        let shifted = other
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| v + shift).collect::<Vec<_>>());
        let all: Vec<Vec<Vertex>> = self.edges.iter().cloned().chain(shifted).collect();
        let n = self.n + other.n;
        match (self.uniformity, other.uniformity) {
            (Some(a), Some(b)) if a == b => Self::with_uniformity(n, a, all),
            _ => Self::new(n, all),
        }
    }

    /// Connected components over edge incidences, with excess and class for
    /// uniform boards.
    pub fn components(&self) -> ComponentSummary {
        let mut dsu = DisjointSet::new(self.n);
        for e in &self.edges {
            for w in e.windows(2) {
                dsu.union(w[0] as usize, w[1] as usize);
            }
        }
        let mut slot_of_root = vec![usize::MAX; self.n];
        let mut components: Vec<Component> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let root = dsu.find(e[0] as usize);
            if slot_of_root[root] == usize::MAX {
                slot_of_root[root] = components.len();
                components.push(Component {
                    vertices: Vec::new(),
                    edges: Vec::new(),
                    excess: None,
                    class: None,
                });
            }
            components[slot_of_root[root]].edges.push(i);
        }
        let mut isolated = Vec::new();
        for v in 0..self.n {
            let root = dsu.find(v);
            match slot_of_root[root] {
                usize::MAX => isolated.push(v as Vertex),
                slot => components[slot].vertices.push(v as Vertex),
            }
        }
        if let Some(s) = self.uniformity {
            for c in &mut components {
                let excess = (s as i64 - 1) * c.edges.len() as i64 - c.vertices.len() as i64;
                c.excess = Some(excess);
                c.class = Some(ComponentClass::from_excess(excess));
            }
        }
        components.sort_by_key(|c| c.vertices[0]);
        ComponentSummary {
            components,
            isolated,
        }
    }

    /// `(s-1)|E| - |V|` over the vertices covered by edges. Isolated
    /// vertices are not counted, so the value is the sum of the component
    /// excesses.
    pub fn excess(&self) -> Result<i64> {
        if self.edges.is_empty() {
            return Ok(0);
        }
        let s = self.uniformity.ok_or(Error::NotUniform)?;
        let covered = self.degrees().iter().filter(|&&d| d > 0).count();
        Ok((s as i64 - 1) * self.edges.len() as i64 - covered as i64)
    }

    /// True iff every component is a tree or a unicycle.
    pub fn is_tree_unicycle_collection(&self) -> Result<bool> {
        if self.edges.is_empty() {
            return Ok(true);
        }
        if self.uniformity.is_none() {
            return Err(Error::NotUniform);
        }
        Ok(self
            .components()
            .components
            .iter()
            .all(|c| c.class != Some(ComponentClass::Complex)))
    }

    /// `self` is easier than `other`: every edge of `other` contains some
    /// edge of `self`.
    pub fn is_easier(&self, other: &Hypergraph) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch(self.n, other.n));
        }
        Ok(other
            .edges
            .iter()
            .all(|big| self.edges.iter().any(|small| is_subset(small, big))))
    }

    /// All `d`-stars of the board.
    ///
    /// For `d >= 2` a star is a set of `d` edges through a common centre that
    /// pairwise meet only there; the edge set determines the centre. A
    /// 1-star is a single edge, counted once, with its smallest vertex
    /// reported as centre.
    pub fn d_stars(&self, d: usize, guard: WorkGuard) -> Result<Vec<Star>> {
        let mut meter = guard.meter();
        self.enumerate_stars(d, &mut meter)
    }

    fn enumerate_stars(&self, d: usize, meter: &mut Meter) -> Result<Vec<Star>> {
        if d == 0 {
            return Err(Error::InvalidParameter("star size d must be at least 1".into()));
        }
        if d == 1 {
            meter.tick(self.edges.len() as u64)?;
            return Ok(self
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| Star {
                    centre: e[0],
                    edges: vec![i],
                })
                .collect());
        }
        let inc = self.incidence();
        let mut stars = Vec::new();
        let mut chosen = Vec::with_capacity(d);
        for (v, through) in inc.iter().enumerate() {
            if through.len() < d {
                continue;
            }
            self.extend_star(v as Vertex, through, 0, d, &mut chosen, &mut stars, meter)?;
        }
        Ok(stars)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_star(
        &self,
        centre: Vertex,
        through: &[usize],
        from: usize,
        d: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Star>,
        meter: &mut Meter,
    ) -> Result<()> {
        meter.tick(1)?;
        if chosen.len() == d {
            out.push(Star {
                centre,
                edges: chosen.clone(),
            });
            return Ok(());
        }
        let need = d - chosen.len();
        for i in from..through.len() {
            if through.len() - i < need {
                break;
            }
            let e = through[i];
            let compatible = chosen
                .iter()
                .all(|&f| intersection_size(&self.edges[e], &self.edges[f]) == 1);
            if compatible {
                chosen.push(e);
                self.extend_star(centre, through, i + 1, d, chosen, out, meter)?;
                chosen.pop();
            }
        }
        Ok(())
    }

    /// Number of `d`-stars (the counter Y).
    pub fn count_d_stars(&self, d: usize, guard: WorkGuard) -> Result<u64> {
        Ok(self.d_stars(d, guard)?.len() as u64)
    }

    /// Unordered pairs of distinct `d`-stars sharing at least one vertex
    /// (the counter Z). Brute-force pair scan.
    pub fn count_intersecting_star_pairs(&self, d: usize, guard: WorkGuard) -> Result<u64> {
        let mut meter = guard.meter();
        let stars = self.enumerate_stars(d, &mut meter)?;
        let supports: Vec<Vec<Vertex>> = stars.iter().map(|s| s.support(self)).collect();
        let mut pairs = 0u64;
        for i in 0..supports.len() {
            meter.tick(supports.len() as u64 - i as u64)?;
            for j in i + 1..supports.len() {
                if intersection_size(&supports[i], &supports[j]) > 0 {
                    pairs += 1;
                }
            }
        }
        Ok(pairs)
    }

    /// Searches exhaustively for `k` pairwise vertex-disjoint `d`-stars.
    /// `None` means no such system exists.
    pub fn find_disjoint_d_stars(
        &self,
        d: usize,
        k: usize,
        guard: WorkGuard,
    ) -> Result<Option<Vec<Star>>> {
        if k == 0 {
            return Err(Error::InvalidParameter("number of stars k must be at least 1".into()));
        }
        let mut meter = guard.meter();
        let stars = self.enumerate_stars(d, &mut meter)?;
        let supports: Vec<Vec<Vertex>> = stars.iter().map(|s| s.support(self)).collect();
        let mut used = vec![false; self.n];
        let mut picked = Vec::with_capacity(k);
        if pick_disjoint(&supports, 0, k, &mut used, &mut picked, &mut meter)? {
            Ok(Some(picked.into_iter().map(|i| stars[i].clone()).collect()))
        } else {
            Ok(None)
        }
    }

    /// Largest `k` for which `k` disjoint `d`-stars exist.
    pub fn max_disjoint_d_stars(&self, d: usize, guard: WorkGuard) -> Result<Vec<Star>> {
        let mut best = Vec::new();
        let mut k = 1;
        while let Some(found) = self.find_disjoint_d_stars(d, k, guard)? {
            best = found;
            k += 1;
        }
        Ok(best)
    }

    /// True iff every `t`-subset of the vertices contains some edge.
    ///
    /// Implemented as a backtracking search for an edge-free `t`-subset,
    /// which visits every subset the plain enumeration would certify but
    /// prunes branches that already contain an edge.
    pub fn covers_all_t_subsets(&self, t: usize, guard: WorkGuard) -> Result<bool> {
        if t > self.n {
            return Ok(true);
        }
        let mut closing = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            closing[*e.last().expect("edges are non-empty") as usize].push(i);
        }
        let mut meter = guard.meter();
        let mut chosen = vec![false; self.n];
        let found = self.free_subset(0, t, &closing, &mut chosen, &mut meter)?;
        Ok(!found)
    }

    fn free_subset(
        &self,
        v: usize,
        need: usize,
        closing: &[Vec<usize>],
        chosen: &mut [bool],
        meter: &mut Meter,
    ) -> Result<bool> {
        meter.tick(1)?;
        if need == 0 {
            return Ok(true);
        }
        if self.n - v < need {
            return Ok(false);
        }
        let completes = closing[v]
            .iter()
            .any(|&i| self.edges[i][..self.edges[i].len() - 1].iter().all(|&u| chosen[u as usize]));
        if !completes {
            chosen[v] = true;
            let found = self.free_subset(v + 1, need - 1, closing, chosen, meter)?;
            chosen[v] = false;
            if found {
                return Ok(true);
            }
        }
        self.free_subset(v + 1, need, closing, chosen, meter)
    }

    /// Canonical single-line JSON, newline terminated.
    pub fn to_json(&self) -> String {
        let file = HypergraphFile {
            n: self.n,
            s: self.uniformity,
            edges: self.edges.clone(),
        };
        let mut out = serde_json::to_string(&file).expect("hypergraph serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: HypergraphFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        match file.s {
            Some(s) => Self::with_uniformity(file.n, s, file.edges),
            None => Self::new(file.n, file.edges),
        }
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HypergraphFile {
            n: self.n,
            s: self.uniformity,
            edges: self.edges.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = HypergraphFile::deserialize(deserializer)?;
        let built = match file.s {
            Some(s) => Self::with_uniformity(file.n, s, file.edges),
            None => Self::new(file.n, file.edges),
        };
        built.map_err(serde::de::Error::custom)
    }
}

fn canonical_edges<E: AsRef<[Vertex]>>(
    n: usize,
    raw_edges: impl IntoIterator<Item = E>,
) -> Result<Vec<Vec<Vertex>>> {
    let mut set = BTreeSet::new();
    for (index, raw) in raw_edges.into_iter().enumerate() {
        let raw = raw.as_ref();
        if raw.is_empty() {
            return Err(Error::EmptyEdge { index });
        }
        if let Some(&v) = raw.iter().find(|&&v| v as usize >= n) {
            return Err(Error::VertexOutOfRange { vertex: v as u64, n });
        }
        let mut e = raw.to_vec();
        e.sort_unstable();
        e.dedup();
        set.insert(e);
    }
    Ok(set.into_iter().collect())
}

/// Both inputs sorted ascending.
pub(crate) fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Both inputs sorted ascending.
pub(crate) fn intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

fn pick_disjoint(
    supports: &[Vec<Vertex>],
    from: usize,
    need: usize,
    used: &mut [bool],
    picked: &mut Vec<usize>,
    meter: &mut Meter,
) -> Result<bool> {
    meter.tick(1)?;
    if need == 0 {
        return Ok(true);
    }
    for i in from..supports.len() {
        if supports.len() - i < need {
            break;
        }
        if supports[i].iter().any(|&v| used[v as usize]) {
            continue;
        }
        for &v in &supports[i] {
            used[v as usize] = true;
        }
        picked.push(i);
        if pick_disjoint(supports, i + 1, need - 1, used, picked, meter)? {
            return Ok(true);
        }
        picked.pop();
        for &v in &supports[i] {
            used[v as usize] = false;
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentClass {
    Tree,
    Unicycle,
    Complex,
}

impl ComponentClass {
    fn from_excess(excess: i64) -> Self {
        match excess {
            i64::MIN..=-1 => ComponentClass::Tree,
            0 => ComponentClass::Unicycle,
            _ => ComponentClass::Complex,
        }
    }
}

/// One connected component carrying at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: Vec<Vertex>,
    /// Indices into the board's edge list.
    pub edges: Vec<usize>,
    /// `None` on mixed-size boards, where excess is undefined.
    pub excess: Option<i64>,
    pub class: Option<ComponentClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    /// Ordered by smallest vertex.
    pub components: Vec<Component>,
    /// Vertices in no edge; these form no component.
    pub isolated: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Star {
    pub centre: Vertex,
    /// Indices into the board's edge list, increasing.
    pub edges: Vec<usize>,
}

impl Star {
    /// Sorted union of the star's edges.
    pub fn support(&self, board: &Hypergraph) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self
            .edges
            .iter()
            .flat_map(|&i| board.edge(i).iter().copied())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, edges: &[&[Vertex]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn build_sorts_and_dedups() {
        let g = h(3, &[&[2, 0, 1], &[0, 1, 2]]);
        assert_eq!(g.edges(), &[vec![0, 1, 2]]);
        assert_eq!(g.uniformity(), Some(3));

        let g = h(5, &[]);
        assert!(g.is_edgeless());
        assert_eq!(g.n(), 5);

        let g = h(4, &[&[0, 1], &[1, 2]]);
        assert_eq!(g.uniformity(), Some(2));
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert_eq!(
            Hypergraph::new(3, [[0u32, 3]]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 3, n: 3 }
        );
        let empty: [&[Vertex]; 1] = [&[]];
        assert_eq!(
            Hypergraph::new(3, empty).unwrap_err(),
            Error::EmptyEdge { index: 0 }
        );
        assert!(matches!(
            Hypergraph::with_uniformity(4, 3, [vec![0u32, 1]]),
            Err(Error::WrongEdgeSize { .. })
        ));
    }

    #[test]
    fn mixed_sizes_are_not_uniform() {
        let g = h(4, &[&[0, 1], &[1, 2, 3]]);
        assert_eq!(g.uniformity(), None);
        assert_eq!(g.excess(), Err(Error::NotUniform));
        assert_eq!(g.is_tree_unicycle_collection(), Err(Error::NotUniform));
        let summary = g.components();
        assert_eq!(summary.components.len(), 1);
        assert_eq!(summary.components[0].class, None);
    }

    #[test]
    fn degrees() {
        let g = h(5, &[&[0, 1, 2], &[0, 3, 4]]);
        assert_eq!(g.degree(0), Ok(2));
        assert_eq!(g.degree(1), Ok(1));
        assert!(g.degree(5).is_err());
        let e = Hypergraph::empty(4);
        assert!((0..4).all(|v| e.degree(v) == Ok(0)));
    }

    #[test]
    fn components_and_classes() {
        let single = h(3, &[&[0, 1, 2]]);
        let c = single.components();
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].excess, Some(-1));
        assert_eq!(c.components[0].class, Some(ComponentClass::Tree));

        let path = h(5, &[&[0, 1, 2], &[2, 3, 4]]);
        let c = path.components();
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].excess, Some(-1));
        assert_eq!(c.components[0].class, Some(ComponentClass::Tree));

        let cycle = h(6, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
        let c = cycle.components();
        assert_eq!(c.components[0].excess, Some(0));
        assert_eq!(c.components[0].class, Some(ComponentClass::Unicycle));

        for g in [&single, &path, &cycle] {
            assert_eq!(g.is_tree_unicycle_collection(), Ok(true));
        }
    }

    #[test]
    fn two_edges_sharing_a_pair_form_a_unicycle() {
        let g = h(4, &[&[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(g.components().components[0].class, Some(ComponentClass::Unicycle));
        assert_eq!(g.is_tree_unicycle_collection(), Ok(true));
    }

    #[test]
    fn three_triples_on_four_vertices_are_complex() {
        // 2*3 - 4 = 2
        let g = h(4, &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3]]);
        assert_eq!(g.components().components[0].excess, Some(2));
        assert_eq!(g.is_tree_unicycle_collection(), Ok(false));
    }

    #[test]
    fn isolated_vertices_are_reported_not_classified() {
        let g = h(6, &[&[0, 1, 2]]);
        let c = g.components();
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.isolated, vec![3, 4, 5]);
        assert_eq!(g.excess(), Ok(-1));
    }

    #[test]
    fn easier_than() {
        let a = h(6, &[&[0, 1]]);
        let b = h(6, &[&[0, 1, 2]]);
        assert_eq!(a.is_easier(&b), Ok(true));
        let a = h(6, &[&[1, 2]]);
        let b = h(6, &[&[0, 1, 2], &[3, 4, 5]]);
        assert_eq!(a.is_easier(&b), Ok(false));
        assert_eq!(b.is_easier(&b), Ok(true));
        assert!(matches!(
            Hypergraph::empty(3).is_easier(&Hypergraph::empty(4)),
            Err(Error::VertexCountMismatch(3, 4))
        ));
    }

    #[test]
    fn star_search() {
        let g = h(5, &[&[0, 1, 2], &[0, 3, 4]]);
        let stars = g.find_disjoint_d_stars(2, 1, WorkGuard::default()).unwrap().unwrap();
        assert_eq!(stars, vec![Star { centre: 0, edges: vec![0, 1] }]);

        let g = h(3, &[&[0, 1, 2]]);
        assert_eq!(g.find_disjoint_d_stars(2, 1, WorkGuard::default()), Ok(None));
    }

    #[test]
    fn two_disjoint_two_stars() {
        let g = h(
            10,
            &[&[0, 1, 2], &[0, 3, 4], &[5, 6, 7], &[5, 8, 9]],
        );
        let stars = g.find_disjoint_d_stars(2, 2, WorkGuard::default()).unwrap().unwrap();
        assert_eq!(
            stars,
            vec![
                Star { centre: 0, edges: vec![0, 1] },
                Star { centre: 5, edges: vec![2, 3] },
            ]
        );
        assert_eq!(g.find_disjoint_d_stars(2, 3, WorkGuard::default()), Ok(None));
    }

    #[test]
    fn edges_sharing_two_vertices_are_not_a_star() {
        let g = h(4, &[&[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(g.count_d_stars(2, WorkGuard::default()), Ok(0));
    }

    #[test]
    fn star_counters() {
        let g = h(5, &[&[0, 1, 2], &[0, 3, 4]]);
        assert_eq!(g.count_d_stars(2, WorkGuard::default()), Ok(1));
        assert_eq!(g.count_intersecting_star_pairs(2, WorkGuard::default()), Ok(0));
        assert_eq!(g.count_d_stars(1, WorkGuard::default()), Ok(2));
        assert_eq!(g.count_intersecting_star_pairs(1, WorkGuard::default()), Ok(1));
        let e = Hypergraph::empty(5);
        for d in 1..4 {
            assert_eq!(e.count_d_stars(d, WorkGuard::default()), Ok(0));
            assert_eq!(e.count_intersecting_star_pairs(d, WorkGuard::default()), Ok(0));
        }
    }

    #[test]
    fn star_enumeration_respects_guard() {
        let edges: Vec<Vec<Vertex>> = (1..30).map(|v| vec![0, v]).collect();
        let g = Hypergraph::new(30, edges).unwrap();
        assert!(matches!(
            g.count_d_stars(5, WorkGuard::new(1000)),
            Err(Error::GuardExceeded { limit: 1000 })
        ));
    }

    #[test]
    fn coverage() {
        let k4: Vec<[Vertex; 2]> = vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        let g = Hypergraph::new(4, k4).unwrap();
        assert_eq!(g.covers_all_t_subsets(2, WorkGuard::default()), Ok(true));
        assert_eq!(g.covers_all_t_subsets(1, WorkGuard::default()), Ok(false));
        assert_eq!(
            Hypergraph::empty(4).covers_all_t_subsets(3, WorkGuard::default()),
            Ok(false)
        );
        let g = h(4, &[&[0, 1]]);
        assert_eq!(g.covers_all_t_subsets(2, WorkGuard::default()), Ok(false));
        assert_eq!(g.covers_all_t_subsets(4, WorkGuard::default()), Ok(true));
    }

    #[test]
    fn json_is_canonical() {
        let a = h(4, &[&[3, 2, 1], &[0, 1, 2]]);
        let text = a.to_json();
        assert_eq!(text, "{\"n\":4,\"s\":3,\"edges\":[[0,1,2],[1,2,3]]}\n");
        assert_eq!(Hypergraph::from_json(&text), Ok(a));
        assert!(matches!(
            Hypergraph::from_json("{\"n\":2,\"s\":null,\"edges\":[[0,5]]}"),
            Err(Error::VertexOutOfRange { .. })
        ));
        assert!(matches!(Hypergraph::from_json("nope"), Err(Error::Malformed(_))));
    }
}
