//! Simple undirected graph on `n` labeled vertices with exact component
//! tracking under single-edge insertions and deletions.
//!
//! Insertions merge component labels smaller-into-larger. A deletion runs a
//! traversal from one endpoint inside the affected component; if the other
//! endpoint is unreachable, the reached vertices are split off under a fresh
//! label. Both operations keep a histogram of component sizes so the two
//! largest sizes are available without sorting.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};

const NO_SLOT: u32 = u32::MAX;

/// Index of a vertex in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Unordered pair of distinct vertices, stored as `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: u32,
    hi: u32,
}

impl Edge {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    pub fn lo(self) -> u32 {
        self.lo
    }

    pub fn hi(self) -> u32 {
        self.hi
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (VertexId(self.lo), VertexId(self.hi))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Largest supported vertex count; every pair index then fits in `u32`.
pub const MAX_VERTICES: usize = 1 << 16;

/// Number of unordered vertex pairs on `n` vertices.
pub fn max_edges(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `(lo, hi)` in the row-major enumeration of pairs with `lo < hi`.
#[inline]
pub(crate) fn pair_index(n: usize, lo: u32, hi: u32) -> usize {
    let (lo, hi) = (lo as usize, hi as usize);
    lo * n - lo * (lo + 1) / 2 + (hi - lo - 1)
}

/// Uniform unordered pair of distinct vertices.
#[inline]
pub(crate) fn random_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Edge {
    let a = rng.random_range(0..n as u32);
    let mut b = rng.random_range(0..n as u32 - 1);
    if b >= a {
        b += 1;
    }
    if a < b {
        Edge { lo: a, hi: b }
    } else {
        Edge { lo: b, hi: a }
    }
}

/// Component sizes of a graph, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSummary {
    pub sizes: Vec<usize>,
    pub s1: usize,
    /// Zero when a single component spans every vertex.
    pub s2: usize,
}

impl ComponentSummary {
    pub fn from_sizes(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let s1 = sizes.first().copied().unwrap_or(0);
        let s2 = sizes.get(1).copied().unwrap_or(0);
        ComponentSummary { sizes, s1, s2 }
    }
}

#[derive(Clone, Debug)]
pub struct DynamicGraph {
    n: usize,
    edges: Vec<Edge>,
    /// Pair index -> position in `edges`, or `NO_SLOT`.
    slot: Vec<u32>,
    adj: Vec<Vec<u32>>,
    label: Vec<u32>,
    members: Vec<Vec<u32>>,
    free_labels: Vec<u32>,
    /// `size_hist[s]` = number of components of size `s`.
    size_hist: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices(n));
        }
        if n > MAX_VERTICES {
            return Err(Error::InvalidConfig(format!(
                "vertex count {n} exceeds {MAX_VERTICES}"
            )));
        }
        let mut size_hist = vec![0; n + 1];
        size_hist[1] = n as u32;
        Ok(DynamicGraph {
            n,
            edges: Vec::new(),
            slot: vec![NO_SLOT; max_edges(n)],
            adj: vec![Vec::new(); n],
            label: (0..n as u32).collect(),
            members: (0..n as u32).map(|v| vec![v]).collect(),
            free_labels: Vec::new(),
            size_hist,
            stamp: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
        })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = DynamicGraph::new(n)?;
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn max_edges(&self) -> usize {
        self.slot.len()
    }

    pub fn absent_count(&self) -> usize {
        self.max_edges() - self.edge_count()
    }

    /// Present edges in storage order (not sorted).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut out = self.edges.clone();
        out.sort_unstable();
        out
    }

    fn check_edge(&self, e: Edge) -> Result<()> {
        if e.hi as usize >= self.n {
            return Err(Error::InvalidVertex {
                vertex: e.hi,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, e: Edge) -> bool {
        (e.hi as usize) < self.n && self.slot[pair_index(self.n, e.lo, e.hi)] != NO_SLOT
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<()> {
        self.check_edge(e)?;
        let idx = pair_index(self.n, e.lo, e.hi);
        if self.slot[idx] != NO_SLOT {
            return Err(Error::DuplicateEdge(e));
        }
        self.slot[idx] = self.edges.len() as u32;
        self.edges.push(e);
        self.adj[e.lo as usize].push(e.hi);
        self.adj[e.hi as usize].push(e.lo);

        let (la, lb) = (self.label[e.lo as usize], self.label[e.hi as usize]);
        if la != lb {
            self.merge(la, lb);
        }
        Ok(())
    }

    fn merge(&mut self, la: u32, lb: u32) {
        let (sa, sb) = (
            self.members[la as usize].len(),
            self.members[lb as usize].len(),
        );
        let (big, small) = if sa >= sb { (la, lb) } else { (lb, la) };
        let moved = std::mem::take(&mut self.members[small as usize]);
        for &v in &moved {
            self.label[v as usize] = big;
        }
        self.members[big as usize].extend_from_slice(&moved);
        self.free_labels.push(small);
        self.size_hist[sa] -= 1;
        self.size_hist[sb] -= 1;
        self.size_hist[sa + sb] += 1;
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<()> {
        self.check_edge(e)?;
        let idx = pair_index(self.n, e.lo, e.hi);
        let pos = self.slot[idx];
        if pos == NO_SLOT {
            return Err(Error::AbsentEdge(e));
        }
        self.slot[idx] = NO_SLOT;
        self.edges.swap_remove(pos as usize);
        if let Some(&moved) = self.edges.get(pos as usize) {
            self.slot[pair_index(self.n, moved.lo, moved.hi)] = pos;
        }
        detach(&mut self.adj[e.lo as usize], e.hi);
        detach(&mut self.adj[e.hi as usize], e.lo);
        self.split_if_disconnected(e.lo, e.hi);
        Ok(())
    }

    /// Traverses from `u`; if `v` is not reached, the reached set becomes a
    /// new component.
    fn split_if_disconnected(&mut self, u: u32, v: u32) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.queue.clear();
        self.queue.push(u);
        self.stamp[u as usize] = epoch;
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for &y in &self.adj[x as usize] {
                if y == v {
                    return;
                }
                if self.stamp[y as usize] != epoch {
                    self.stamp[y as usize] = epoch;
                    self.queue.push(y);
                }
            }
        }

        let old = self.label[u as usize];
        let new = match self.free_labels.pop() {
            Some(l) => l,
            None => {
                self.members.push(Vec::new());
                (self.members.len() - 1) as u32
            }
        };
        let old_size = self.members[old as usize].len();
        let split_size = self.queue.len();
        for &x in &self.queue {
            self.label[x as usize] = new;
        }
        self.members[new as usize].clear();
        self.members[new as usize].extend_from_slice(&self.queue);
        let label = &self.label;
        self.members[old as usize].retain(|&x| label[x as usize] == old);
        self.size_hist[old_size] -= 1;
        self.size_hist[split_size] += 1;
        self.size_hist[old_size - split_size] += 1;
    }

    pub fn component_of(&self, v: VertexId) -> Result<usize> {
        if v.0 as usize >= self.n {
            return Err(Error::InvalidVertex {
                vertex: v.0,
                n: self.n,
            });
        }
        Ok(self.component_size(v.0))
    }

    #[inline]
    pub(crate) fn component_size(&self, v: u32) -> usize {
        self.members[self.label[v as usize] as usize].len()
    }

    /// Largest and second-largest component sizes (second is 0 for a
    /// connected graph).
    pub fn top_two(&self) -> (usize, usize) {
        let mut s1 = 0;
        for size in (1..=self.n).rev() {
            let count = self.size_hist[size];
            if count == 0 {
                continue;
            }
            if s1 != 0 {
                return (s1, size);
            }
            if count >= 2 {
                return (size, size);
            }
            s1 = size;
        }
        (s1, 0)
    }

    pub fn component_sizes(&self) -> ComponentSummary {
        let mut sizes = Vec::new();
        for size in (1..=self.n).rev() {
            for _ in 0..self.size_hist[size] {
                sizes.push(size);
            }
        }
        let (s1, s2) = self.top_two();
        ComponentSummary { sizes, s1, s2 }
    }

    /// Every absent pair, in `(lo, hi)` order.
    pub fn absent_pairs(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.absent_count());
        let mut idx = 0;
        for lo in 0..self.n as u32 {
            for hi in lo + 1..self.n as u32 {
                if self.slot[idx] == NO_SLOT {
                    out.push(Edge { lo, hi });
                }
                idx += 1;
            }
        }
        out
    }

    /// Up to `k` distinct absent pairs, uniformly without replacement and in
    /// random order. Returns every absent pair when fewer than `k` exist.
    pub fn sample_absent_pairs<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<Vec<Edge>> {
        let absent = self.absent_count();
        if absent == 0 {
            return Err(Error::NoCandidates);
        }
        if k >= absent {
            let mut all = self.absent_pairs();
            all.shuffle(rng);
            return Ok(all);
        }
        // Rejection is cheap while a quarter of all pairs are absent and at
        // most half of those are wanted.
        if absent * 4 >= self.max_edges() && 2 * k <= absent {
            let mut out: Vec<Edge> = Vec::with_capacity(k);
            if k <= 16 {
                while out.len() < k {
                    let e = random_pair(self.n, rng);
                    if !self.contains(e) && !out.contains(&e) {
                        out.push(e);
                    }
                }
            } else {
                let mut taken = HashSet::with_capacity(k);
                while out.len() < k {
                    let e = random_pair(self.n, rng);
                    if !self.contains(e) && taken.insert(e) {
                        out.push(e);
                    }
                }
            }
            return Ok(out);
        }
        let all = self.absent_pairs();
        Ok(index::sample(rng, all.len(), k)
            .into_iter()
            .map(|i| all[i])
            .collect())
    }

    /// Mirror of [`sample_absent_pairs`](Self::sample_absent_pairs) over the
    /// present edges.
    pub fn sample_present_pairs<R: Rng + ?Sized>(
        &self,
        k: usize,
        rng: &mut R,
    ) -> Result<Vec<Edge>> {
        let m = self.edges.len();
        if m == 0 {
            return Err(Error::NoCandidates);
        }
        if k >= m {
            let mut all = self.edges.clone();
            all.shuffle(rng);
            return Ok(all);
        }
        Ok(index::sample(rng, m, k)
            .into_iter()
            .map(|i| self.edges[i])
            .collect())
    }

    /// Writes `u v` lines, sorted, 0-based.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in self.sorted_edges() {
            writeln!(w, "{} {}", e.lo, e.hi)?;
        }
        Ok(())
    }
}

fn detach(list: &mut Vec<u32>, target: u32) {
    if let Some(pos) = list.iter().position(|&x| x == target) {
        list.swap_remove(pos);
    }
}

/// Parses one edge per line as `u v`. Blank lines and `#` comments are
/// skipped. Vertices are checked against `n` when given.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Vec<Edge>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_edge_line(line, i + 1, n)?);
    }
    Ok(out)
}

pub(crate) fn parse_edge_line(line: &str, lineno: usize, n: Option<usize>) -> Result<Edge> {
    let mut it = line.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(Error::parse(lineno, "expected two vertex indices"));
    };
    let parse = |s: &str| {
        s.parse::<u32>()
            .map_err(|_| Error::parse(lineno, format!("bad vertex index {s:?}")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if let Some(n) = n {
        for v in [a, b] {
            if v as usize >= n {
                return Err(Error::parse(
                    lineno,
                    format!("vertex {v} out of range for n={n}"),
                ));
            }
        }
    }
    Edge::new(a, b).map_err(|e| Error::parse(lineno, e.to_string()))
}
