//! Core graphs: connected multigraphs with labeled legs, every vertex at
//! least trivalent.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::dgraph::{canonicalize, DEdge, DGraph, DLeg, EdgeDeco, End, VKind};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    pub vertices: usize,
    /// Internal edges as vertex pairs; `(v, v)` is a self-loop.
    pub edges: Vec<(usize, usize)>,
    /// `legs[i]` is the vertex carrying leg `i + 1`.
    pub legs: Vec<usize>,
}

impl Graph {
    pub fn valence(&self, v: usize) -> usize {
        let from_edges: usize = self
            .edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum();
        from_edges + self.legs.iter().filter(|&&w| w == v).count()
    }

    /// First Betti number, assuming the graph is connected.
    pub fn loop_order(&self) -> i64 {
        self.edges.len() as i64 - self.vertices as i64 + 1
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        (0..self.vertices).all(|v| find(&mut parent, v) == root)
    }

    pub fn is_stable(&self) -> bool {
        (0..self.vertices).all(|v| self.valence(v) >= 3)
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .edges
            .iter()
            .any(|&(a, b)| a >= self.vertices || b >= self.vertices)
        {
            return Err(Error::InvalidInput("edge endpoint out of range".into()));
        }
        if self.legs.iter().any(|&v| v >= self.vertices) {
            return Err(Error::InvalidInput(
                "leg attached to a missing vertex".into(),
            ));
        }
        if !self.is_connected() {
            return Err(Error::InvalidInput("graph is not connected".into()));
        }
        if !self.is_stable() {
            return Err(Error::InvalidInput("vertex of valence < 3".into()));
        }
        Ok(())
    }

    /// The graph with every vertex decorated by `c` and bare edges and legs.
    pub fn plain(&self) -> DGraph {
        let end = |v: usize| End {
            v: v as u32,
            flag: false,
            exp: 0,
        };
        DGraph {
            kinds: vec![VKind::C; self.vertices],
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| DEdge {
                    a: end(a),
                    b: end(b),
                    deco: EdgeDeco::Delta(0),
                })
                .collect(),
            legs: self
                .legs
                .iter()
                .map(|&v| DLeg { end: end(v), k: 0 })
                .collect(),
        }
    }

    pub fn from_plain(d: &DGraph) -> Graph {
        Graph {
            vertices: d.kinds.len(),
            edges: d
                .edges
                .iter()
                .map(|e| (e.a.v as usize, e.b.v as usize))
                .collect(),
            legs: d.legs.iter().map(|l| l.end.v as usize).collect(),
        }
    }

    /// Canonical representative of the isomorphism class.
    pub fn canonical(&self) -> Graph {
        Graph::from_plain(&canonicalize(&self.plain()).0)
    }
}

/// Multisets of size `k` drawn from `0..m`, as non-decreasing sequences.
fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..m {
            cur.push(x);
            rec(m, k, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, 0, &mut Vec::new(), &mut out);
    out
}

/// One representative per isomorphism class of connected graphs with loop
/// order `g`, `n` labeled legs and all vertices at least trivalent, in a
/// deterministic order.
pub fn enumerate_graphs(g: usize, n: usize) -> Result<Vec<Graph>> {
    if 2 * g + n < 3 {
        return Err(Error::InvalidInput(format!(
            "need 2g + n ≥ 3, got g = {g}, n = {n}"
        )));
    }
    let mut seen = BTreeSet::new();
    for v in 1..=(2 * g + n - 2) {
        let e = v + g - 1;
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        for choice in multisets(pairs.len(), e) {
            let edges: Vec<(usize, usize)> = choice.iter().map(|&i| pairs[i]).collect();
            let mut deg = vec![0usize; v];
            for &(a, b) in &edges {
                deg[a] += 1;
                deg[b] += 1;
            }
            // legs needed to reach valence 3
            let need: usize = deg.iter().map(|&d| 3usize.saturating_sub(d)).sum();
            if need > n {
                continue;
            }
            let probe = Graph {
                vertices: v,
                edges: edges.clone(),
                legs: Vec::new(),
            };
            if !probe.is_connected() {
                continue;
            }
            let mut legs = vec![0usize; n];
            loop {
                let mut d = deg.clone();
                for &l in &legs {
                    d[l] += 1;
                }
                if d.iter().all(|&x| x >= 3) {
                    let gr = Graph {
                        vertices: v,
                        edges: edges.clone(),
                        legs: legs.clone(),
                    };
                    seen.insert(gr.canonical());
                }
                // next leg assignment
                let mut i = 0;
                while i < n {
                    legs[i] += 1;
                    if legs[i] < v {
                        break;
                    }
                    legs[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    let mut out: Vec<Graph> = seen.into_iter().collect();
    out.sort_by(|a, b| {
        (a.vertices, a.edges.len())
            .cmp(&(b.vertices, b.edges.len()))
            .then(a.cmp(b))
    });
    Ok(out)
}

/// Text form: per graph a header `V E n g`, `E` lines `a b`, `n` lines
/// `leg l -> v`; graphs separated by a blank line.
pub fn graphs_to_text(graphs: &[Graph]) -> String {
    let mut s = String::new();
    for (k, gr) in graphs.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "{} {} {} {}",
            gr.vertices,
            gr.edges.len(),
            gr.legs.len(),
            gr.loop_order()
        );
        for (a, b) in &gr.edges {
            let _ = writeln!(s, "{a} {b}");
        }
        for (i, v) in gr.legs.iter().enumerate() {
            let _ = writeln!(s, "leg {} -> {v}", i + 1);
        }
    }
    s
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn nums(line: usize, s: &str, want: usize) -> Result<Vec<usize>> {
    let v: Vec<usize> = s
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| perr(line, format!("not a number: {t:?}")))
        })
        .collect::<Result<_>>()?;
    if v.len() != want {
        return Err(perr(line, format!("expected {want} numbers")));
    }
    Ok(v)
}

/// Parses the text form. Every graph is validated, and its header must
/// match its body.
pub fn parse_graphs(text: &str) -> Result<Vec<Graph>> {
    const MAX: usize = 64;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .peekable();
    let mut out = Vec::new();
    loop {
        while matches!(lines.peek(), Some((_, l)) if l.is_empty()) {
            lines.next();
        }
        let Some((hl, header)) = lines.next() else {
            break;
        };
        let h = nums(hl, header, 4)?;
        let (v, e, n, g) = (h[0], h[1], h[2], h[3]);
        if v > MAX || e > MAX || n > MAX {
            return Err(perr(hl, "graph too large"));
        }
        let mut edges = Vec::with_capacity(e);
        for _ in 0..e {
            let (ln, l) = lines.next().ok_or_else(|| perr(hl, "missing edge line"))?;
            let ab = nums(ln, l, 2)?;
            edges.push((ab[0], ab[1]));
        }
        let mut legs = vec![usize::MAX; n];
        for _ in 0..n {
            let (ln, l) = lines.next().ok_or_else(|| perr(hl, "missing leg line"))?;
            let rest = l
                .strip_prefix("leg ")
                .ok_or_else(|| perr(ln, "expected `leg l -> v`"))?;
            let (lab, vert) = rest
                .split_once("->")
                .ok_or_else(|| perr(ln, "expected `->`"))?;
            let lab: usize = lab.trim().parse().map_err(|_| perr(ln, "bad leg label"))?;
            let vert: usize = vert.trim().parse().map_err(|_| perr(ln, "bad vertex"))?;
            if lab == 0 || lab > n || legs[lab - 1] != usize::MAX {
                return Err(perr(ln, "leg labels must be 1..n, each once"));
            }
            legs[lab - 1] = vert;
        }
        let gr = Graph {
            vertices: v,
            edges,
            legs,
        };
        gr.validate().map_err(|err| perr(hl, err.to_string()))?;
        if gr.loop_order() != g as i64 {
            return Err(perr(hl, "loop order in header does not match"));
        }
        out.push(gr);
    }
    Ok(out)
}
