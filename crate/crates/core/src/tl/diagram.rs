//! Noncrossing perfect matchings on `2s` circular vertices.
//!
//! Labels run `1..=2s` clockwise from the bottom of the left column: the
//! left column carries `v_1..v_s` bottom-up, the right column carries
//! `v_{s+1}..v_{2s}` top-down. Height `h` on the left is `v_h`, height `h`
//! on the right is `v_{2s+1-h}`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KauffmanDiagram {
    s: usize,
    // partner[v - 1] is the label matched to v
    partner: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    s: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for KauffmanDiagram {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        DiagramRepr {
            s: self.s,
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for KauffmanDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = DiagramRepr::deserialize(d)?;
        let edges: Vec<(usize, usize)> = r.edges.iter().map(|e| (e[0], e[1])).collect();
        KauffmanDiagram::from_edges(r.s, &edges).map_err(D::Error::custom)
    }
}

impl fmt::Debug for KauffmanDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{:?}", self.edges())
    }
}

impl fmt::Display for KauffmanDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

impl Ord for KauffmanDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.s
            .cmp(&other.s)
            .then_with(|| self.edges().cmp(&other.edges()))
    }
}

impl PartialOrd for KauffmanDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl KauffmanDiagram {
    pub fn from_edges(s: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidDiagram("s must be positive".into()));
        }
        if edges.len() != s {
            return Err(Error::InvalidDiagram(format!(
                "expected {s} edges, found {}",
                edges.len()
            )));
        }
        let mut partner = vec![0usize; 2 * s];
        for &(a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > 2 * s {
                    return Err(Error::InvalidDiagram(format!("vertex {v} outside 1..={}", 2 * s)));
                }
                if partner[v - 1] != 0 {
                    return Err(Error::InvalidDiagram(format!("vertex {v} matched twice")));
                }
            }
            if a == b {
                return Err(Error::InvalidDiagram(format!("loop at {a}")));
            }
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        Self::from_partner(s, partner)
    }

    pub fn from_partner(s: usize, partner: Vec<usize>) -> Result<Self> {
        if partner.len() != 2 * s {
            return Err(Error::InvalidDiagram("partner array has the wrong length".into()));
        }
        for v in 1..=2 * s {
            let p = partner[v - 1];
            if p == 0 || p > 2 * s || p == v || partner[p - 1] != v {
                return Err(Error::InvalidDiagram(format!(
                    "partner array is not a fixed-point-free involution at {v}"
                )));
            }
        }
        let d = Self { s, partner };
        if !d.is_noncrossing() {
            return Err(Error::InvalidDiagram(format!("crossing edges in {:?}", d.edges())));
        }
        Ok(d)
    }

    /// The diagram joining left height `h` to right height `h` for every `h`.
    pub fn identity(s: usize) -> Self {
        let partner = (1..=2 * s).map(|v| 2 * s + 1 - v).collect();
        Self { s, partner }
    }

    /// `t_i`: joins left `i` to left `i+1` and right `i` to right `i+1`.
    pub fn generator(s: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= s {
            return Err(Error::IndexOutOfRange {
                what: "generator",
                index: i,
                bound: s.saturating_sub(1),
            });
        }
        let mut d = Self::identity(s);
        let (a, b) = (i, i + 1);
        let (c, e) = (2 * s + 1 - i, 2 * s - i);
        d.partner[a - 1] = b;
        d.partner[b - 1] = a;
        d.partner[c - 1] = e;
        d.partner[e - 1] = c;
        Ok(d)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn partner(&self, v: usize) -> usize {
        self.partner[v - 1]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Edges with the smaller endpoint first, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=2 * self.s)
            .filter(|&v| v < self.partner[v - 1])
            .map(|v| (v, self.partner[v - 1]))
            .collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.partner[a - 1] == b
    }

    fn is_noncrossing(&self) -> bool {
        let edges = self.edges();
        for (x, &(a, b)) in edges.iter().enumerate() {
            for &(c, d) in &edges[x + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_rect(&self, v: usize) -> (Side, usize) {
        if v <= self.s {
            (Side::Left, v)
        } else {
            (Side::Right, 2 * self.s + 1 - v)
        }
    }

    pub fn from_rect(&self, side: Side, h: usize) -> usize {
        match side {
            Side::Left => h,
            Side::Right => 2 * self.s + 1 - h,
        }
    }

    /// Relabel every vertex through `f`, which must be a bijection of `1..=2s`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = self.edges().into_iter().map(|(a, b)| (f(a), f(b))).collect();
        Self::from_edges(self.s, &edges)
    }
}

/// `v ↦ v + 1 mod 2s`.
pub fn shift_diagram(k: &KauffmanDiagram) -> KauffmanDiagram {
    let n = 2 * k.s;
    k.relabel(|v| v % n + 1).expect("rotation keeps a matching noncrossing")
}

/// `v ↦ 2s + 1 - v`.
pub fn reflect_diagram(k: &KauffmanDiagram) -> KauffmanDiagram {
    let n = 2 * k.s;
    k.relabel(|v| n + 1 - v).expect("reflection keeps a matching noncrossing")
}

fn generate(vertices: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if vertices.is_empty() {
        out.push(cur.clone());
        return;
    }
    // pair the first vertex with each vertex leaving an even gap inside
    let first = vertices[0];
    for k in (1..vertices.len()).step_by(2) {
        let inner = &vertices[1..k];
        let outer = &vertices[k + 1..];
        cur.push((first, vertices[k]));
        let mut inner_out = Vec::new();
        generate(inner, &mut Vec::new(), &mut inner_out);
        for m in inner_out {
            let mark = cur.len();
            cur.extend(m);
            generate(outer, cur, out);
            cur.truncate(mark);
        }
        cur.pop();
    }
}

/// All noncrossing matchings for `s`, sorted by their edge listing.
pub fn enumerate_diagrams(s: usize) -> Vec<KauffmanDiagram> {
    if s == 0 {
        return vec![];
    }
    let vertices: Vec<usize> = (1..=2 * s).collect();
    let mut raw = Vec::new();
    generate(&vertices, &mut Vec::new(), &mut raw);
    let mut out: Vec<KauffmanDiagram> = raw
        .into_iter()
        .map(|edges| KauffmanDiagram::from_edges(s, &edges).expect("generator emits valid matchings"))
        .collect();
    out.sort();
    out
}

/// Shared, cached enumeration.
pub fn diagrams(s: usize) -> Arc<Vec<KauffmanDiagram>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<KauffmanDiagram>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(s)
        .or_insert_with(|| Arc::new(enumerate_diagrams(s)))
        .clone()
}

/// Glue `left`'s right column onto `right`'s left column. The result keeps
/// `left`'s left column and `right`'s right column; closed loops are counted.
pub fn compose(left: &KauffmanDiagram, right: &KauffmanDiagram) -> Result<(KauffmanDiagram, usize)> {
    if left.s != right.s {
        return Err(Error::InvalidDiagram(format!(
            "cannot compose diagrams with s = {} and s = {}",
            left.s, right.s
        )));
    }
    let s = left.s;
    // middle heights already traversed
    let mut seen = vec![false; s + 1];
    let mut partner = vec![0usize; 2 * s];

    // from a vertex of `left` (which = false) or `right` (which = true),
    // follow edges until an outer vertex is reached
    let trace = |mut which: bool, mut v: usize, seen: &mut Vec<bool>| -> usize {
        loop {
            let d = if which { right } else { left };
            let p = d.partner(v);
            let (side, h) = d.to_rect(p);
            match (which, side) {
                (false, Side::Left) => return left.from_rect(Side::Left, h),
                (true, Side::Right) => return right.from_rect(Side::Right, h),
                (false, Side::Right) => {
                    seen[h] = true;
                    which = true;
                    v = right.from_rect(Side::Left, h);
                }
                (true, Side::Left) => {
                    seen[h] = true;
                    which = false;
                    v = left.from_rect(Side::Right, h);
                }
            }
        }
    };

    for h in 1..=s {
        let a = left.from_rect(Side::Left, h);
        if partner[a - 1] == 0 {
            let b = trace(false, a, &mut seen);
            partner[a - 1] = b;
            partner[b - 1] = a;
        }
        let c = right.from_rect(Side::Right, h);
        if partner[c - 1] == 0 {
            let e = trace(true, c, &mut seen);
            partner[c - 1] = e;
            partner[e - 1] = c;
        }
    }

    let mut loops = 0;
    for h in 1..=s {
        if seen[h] {
            continue;
        }
        loops += 1;
        // walk the closed loop through the middle column
        let mut cur = h;
        loop {
            seen[cur] = true;
            let p = left.partner(left.from_rect(Side::Right, cur));
            let (_, h1) = left.to_rect(p);
            seen[h1] = true;
            let q = right.partner(right.from_rect(Side::Left, h1));
            let (_, h2) = right.to_rect(q);
            if h2 == h {
                break;
            }
            cur = h2;
        }
    }
    Ok((KauffmanDiagram::from_partner(s, partner)?, loops))
}

/// Product in the diagram monoid: strands of `a · b` run through `b` first,
/// then `a`, like composition of maps.
pub fn tl_multiply(a: &KauffmanDiagram, b: &KauffmanDiagram) -> Result<(KauffmanDiagram, usize)> {
    compose(b, a)
}

pub fn catalan(s: usize) -> usize {
    let mut c: u128 = 1;
    for k in 0..s as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c as usize
}
