//! Pre-matchings of a pair of index tuples, their compatible diagrams and
//! the immanant expansion of a product of two Plücker coordinates.

use serde::{Deserialize, Serialize};

use super::algebra::{all_immanants, f_table};
use super::diagram::KauffmanDiagram;
use crate::combinatorics::IndexTuple;
use crate::error::{Error, Result};
use crate::linalg::{embed, plucker, plucker_to_minor, Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexColor {
    White,
    Black,
    /// Endpoint of a mandatory edge.
    Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredPrematching {
    pub s: usize,
    /// `color[v - 1]` for vertex `v`.
    pub color: Vec<VertexColor>,
    pub mandatory_edges: Vec<(usize, usize)>,
    /// Element of `1..=m+n` whose scan step produced each vertex.
    pub source: Vec<usize>,
}

impl ColoredPrematching {
    pub fn whites(&self) -> usize {
        self.color.iter().filter(|&&c| c == VertexColor::White).count()
    }

    pub fn blacks(&self) -> usize {
        self.color.iter().filter(|&&c| c == VertexColor::Black).count()
    }

    pub fn is_balanced(&self) -> bool {
        self.whites() == self.blacks()
    }

    /// Colored vertex produced by element `e`, if any.
    pub fn colored_vertex_of(&self, e: usize) -> Option<usize> {
        (0..2 * self.s)
            .find(|&v| self.source[v] == e && self.color[v] != VertexColor::Edge)
            .map(|v| v + 1)
    }

    pub fn is_compatible(&self, k: &KauffmanDiagram) -> bool {
        if k.s() != self.s {
            return false;
        }
        if !self.mandatory_edges.iter().all(|&(a, b)| k.has_edge(a, b)) {
            return false;
        }
        k.edges().into_iter().all(|(a, b)| {
            let (ca, cb) = (self.color[a - 1], self.color[b - 1]);
            match (ca, cb) {
                (VertexColor::Edge, VertexColor::Edge) => self.mandatory_edges.contains(&(a, b)),
                (VertexColor::Edge, _) | (_, VertexColor::Edge) => false,
                _ => ca != cb,
            }
        })
    }
}

/// Runs the two colouring scans over `1..=n` and `n+1..=m+n`.
pub fn prematch(i: &IndexTuple, j: &IndexTuple) -> Result<ColoredPrematching> {
    if i.shape() != j.shape() {
        return Err(Error::ShapeMismatch);
    }
    let shape = i.shape();
    let (m, n) = (shape.m(), shape.n());
    let (si, sj) = (i.as_set(), j.as_set());
    let s = si.iter().filter(|&&x| x <= n).count() + sj.iter().filter(|&&x| x <= n).count();
    let total = 2 * s;
    let mut color = Vec::with_capacity(total);
    let mut source = Vec::with_capacity(total);
    let mut mandatory_edges = Vec::new();
    for e in 1..=m + n {
        let (in_i, in_j) = (si.contains(&e), sj.contains(&e));
        let first_half = e <= n;
        let step = match (in_i, in_j) {
            (true, false) => Some(VertexColor::White),
            (false, true) => Some(VertexColor::Black),
            (true, true) if first_half => Some(VertexColor::Edge),
            (false, false) if !first_half => Some(VertexColor::Edge),
            _ => None,
        };
        match step {
            None => {}
            Some(VertexColor::Edge) => {
                let v = color.len() + 1;
                if v + 1 > total {
                    return Err(Error::Prematch(format!(
                        "element {e} needs two vertices but only {} of {total} remain",
                        total + 1 - v
                    )));
                }
                color.extend([VertexColor::Edge, VertexColor::Edge]);
                source.extend([e, e]);
                mandatory_edges.push((v, v + 1));
            }
            Some(c) => {
                if color.len() >= total {
                    return Err(Error::Prematch(format!("element {e} finds no vertex left")));
                }
                color.push(c);
                source.push(e);
            }
        }
    }
    if color.len() != total {
        return Err(Error::Prematch(format!(
            "scan consumed {} of {total} vertices",
            color.len()
        )));
    }
    Ok(ColoredPrematching {
        s,
        color,
        mandatory_edges,
        source,
    })
}

fn bicolored(
    verts: &[(usize, VertexColor)],
    cur: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if verts.is_empty() {
        out.push(cur.clone());
        return;
    }
    let (v0, c0) = verts[0];
    for k in (1..verts.len()).step_by(2) {
        if verts[k].1 == c0 {
            continue;
        }
        let inner = &verts[1..k];
        let balance = inner.iter().filter(|x| x.1 == c0).count() * 2;
        if balance != inner.len() {
            continue;
        }
        let outer = &verts[k + 1..];
        let mut inner_out = Vec::new();
        bicolored(inner, &mut Vec::new(), &mut inner_out);
        cur.push((v0, verts[k].0));
        for im in inner_out {
            let mark = cur.len();
            cur.extend(im);
            bicolored(outer, cur, out);
            cur.truncate(mark);
        }
        cur.pop();
    }
}

/// `Φ(I, J)`, sorted.
pub fn compatible_set(i: &IndexTuple, j: &IndexTuple) -> Result<Vec<KauffmanDiagram>> {
    let pm = prematch(i, j)?;
    compatible_from_prematch(&pm)
}

pub fn compatible_from_prematch(pm: &ColoredPrematching) -> Result<Vec<KauffmanDiagram>> {
    if pm.s == 0 {
        return Err(Error::Prematch("the pair leaves no vertices to match".into()));
    }
    if !pm.is_balanced() {
        return Ok(vec![]);
    }
    // mandatory edges join adjacent vertices, so the colored vertices can be
    // matched on their own
    let colored: Vec<(usize, VertexColor)> = (1..=2 * pm.s)
        .map(|v| (v, pm.color[v - 1]))
        .filter(|x| x.1 != VertexColor::Edge)
        .collect();
    let mut raw = Vec::new();
    bicolored(&colored, &mut Vec::new(), &mut raw);
    let mut out = raw
        .into_iter()
        .map(|mut edges| {
            edges.extend(pm.mandatory_edges.iter().copied());
            KauffmanDiagram::from_edges(pm.s, &edges)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// 1 iff every edge joins an element of `I` to one of its complement, with
/// vertex `v` read as element `v` of `1..=2s`.
pub fn complementary_b(i: &IndexTuple, k: &KauffmanDiagram) -> Result<u8> {
    let shape = i.shape();
    if shape.m() != shape.n() || shape.m() != k.s() {
        return Err(Error::DimensionMismatch {
            expected: format!("I inside [{}] with s = {}", 2 * k.s(), k.s()),
            found: format!("m = {}, n = {}", shape.m(), shape.n()),
        });
    }
    let ok = k
        .edges()
        .into_iter()
        .all(|(a, b)| i.contains(a) != i.contains(b));
    Ok(ok as u8)
}

/// Row and column multisets `P1 ⊎ P2` and `Q1 ⊎ Q2`, sorted.
pub fn generalized_indices(i: &IndexTuple, j: &IndexTuple) -> Result<(Vec<usize>, Vec<usize>)> {
    if i.shape() != j.shape() {
        return Err(Error::ShapeMismatch);
    }
    let (p1, q1) = plucker_to_minor(i);
    let (p2, q2) = plucker_to_minor(j);
    let mut rows: Vec<usize> = p1.into_iter().chain(p2).collect();
    let mut cols: Vec<usize> = q1.into_iter().chain(q2).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    if rows.len() != cols.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} columns", rows.len()),
            found: format!("{} columns", cols.len()),
        });
    }
    Ok((rows, cols))
}

/// `X_{M, M'}` with repeated rows and columns.
pub fn generalized_submatrix(x: &RationalMatrix, i: &IndexTuple, j: &IndexTuple) -> Result<RationalMatrix> {
    let shape = i.shape();
    if x.rows() != shape.n() || x.cols() != shape.m() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", shape.n(), shape.m()),
            found: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    let (rows, cols) = generalized_indices(i, j)?;
    let r: Vec<usize> = rows.iter().map(|v| v - 1).collect();
    let c: Vec<usize> = cols.iter().map(|v| v - 1).collect();
    Ok(x.select(&r, &c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `Δ_I Δ_J` on the embedded point, both tuples read sorted.
    pub value: Rational,
    pub terms: Vec<(KauffmanDiagram, Rational)>,
}

impl Decomposition {
    pub fn term_sum(&self) -> Rational {
        self.terms.iter().map(|(_, v)| v.clone()).sum()
    }
}

/// `Imm_K` of the generalized submatrix for each `K` in `Φ(I, J)`, using
/// immanants already computed for that submatrix.
pub fn compatible_immanants(
    phi: &[KauffmanDiagram],
    immanants: &[Rational],
    s: usize,
) -> Result<Vec<(KauffmanDiagram, Rational)>> {
    let t = f_table(s)?;
    Ok(phi
        .iter()
        .map(|k| {
            let idx = t.diagram_index(k).expect("diagram enumerated");
            (k.clone(), immanants[idx].clone())
        })
        .collect())
}

/// Product of the two coordinates of `X̄` and its expansion over `Φ(I, J)`.
pub fn decompose_product(i: &IndexTuple, j: &IndexTuple, x: &RationalMatrix) -> Result<Decomposition> {
    let xbar = embed(x)?;
    let value = plucker(&xbar, &i.sorted())? * plucker(&xbar, &j.sorted())?;
    let phi = compatible_set(i, j)?;
    let sub = generalized_submatrix(x, i, j)?;
    let imms = all_immanants(&sub)?;
    let terms = compatible_immanants(&phi, &imms, sub.rows())?;
    Ok(Decomposition { value, terms })
}

/// Carry a compatible diagram of one pair to another pair whose symmetric
/// difference is the image of the first under `f`. Mandatory edges are
/// replaced by the target's own.
pub fn transport_diagram(
    k: &KauffmanDiagram,
    from: &ColoredPrematching,
    to: &ColoredPrematching,
    f: impl Fn(usize) -> usize,
) -> Result<KauffmanDiagram> {
    let mut edges = to.mandatory_edges.clone();
    for (a, b) in k.edges() {
        if from.color[a - 1] == VertexColor::Edge {
            continue;
        }
        let map = |v: usize| -> Result<usize> {
            to.colored_vertex_of(f(from.source[v - 1])).ok_or_else(|| {
                Error::Prematch(format!(
                    "element {} has no colored image vertex",
                    from.source[v - 1]
                ))
            })
        };
        let (x, y) = (map(a)?, map(b)?);
        edges.push((x.min(y), x.max(y)));
    }
    KauffmanDiagram::from_edges(to.s, &edges)
}
