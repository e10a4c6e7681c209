//! Minimum Sum Coloring through the twin-class quotient of a graph.
//!
//! Vertices u, v are twins when `N(u) \ {v} = N(v) \ {u}`. Each twin class
//! is either a clique or an independent set, so a coloring only has to say
//! how many vertices of every class receive every color. That count vector
//! is an N-fold program with one brick per color.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::model::{Brick, NFoldInstance, Objective, Status};
use crate::solver::Solver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Clique,
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeClass {
    pub weight: u64,
    pub kind: ClassKind,
    /// Original vertices of the class, when built from a graph.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TypeGraphFile", into = "TypeGraphFile")]
pub struct TypeGraph {
    classes: Vec<TypeClass>,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypeGraphFile {
    types: Vec<TypeClass>,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<TypeGraphFile> for TypeGraph {
    type Error = Error;

    fn try_from(f: TypeGraphFile) -> Result<Self> {
        TypeGraph::new(f.types, f.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<TypeGraph> for TypeGraphFile {
    fn from(t: TypeGraph) -> Self {
        TypeGraphFile {
            types: t.classes,
            edges: t.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TypeGraph {
    /// Edges are unordered; `(i, i)` is a loop. Duplicates are merged.
    pub fn new(classes: Vec<TypeClass>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Invalid(
                "a type graph needs at least one type".into(),
            ));
        }
        if let Some(i) = classes.iter().position(|c| c.weight == 0) {
            return Err(Error::Invalid(format!("type {i} has weight 0")));
        }
        let k = classes.len();
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= k || b >= k {
                return Err(Error::Invalid(format!(
                    "edge ({a}, {b}) refers to a missing type"
                )));
            }
            if a == b && classes[a].kind == ClassKind::Independent {
                return Err(Error::Invalid(format!(
                    "independent type {a} cannot carry a loop"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(TypeGraph {
            classes,
            edges: normalized,
        })
    }

    pub fn classes(&self) -> &[TypeClass] {
        &self.classes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn type_count(&self) -> usize {
        self.classes.len()
    }

    pub fn vertex_count(&self) -> u64 {
        self.classes.iter().map(|c| c.weight).sum()
    }
}

fn adjacency_matrix(adjacency: &[Vec<usize>]) -> Result<Vec<Vec<bool>>> {
    let n = adjacency.len();
    let mut adj = vec![vec![false; n]; n];
    for (v, list) in adjacency.iter().enumerate() {
        for &u in list {
            if u >= n {
                return Err(Error::Invalid(format!(
                    "vertex {v} lists missing neighbour {u}"
                )));
            }
            if u == v {
                return Err(Error::Invalid(format!("vertex {v} has a self-loop")));
            }
            adj[v][u] = true;
        }
    }
    for v in 0..n {
        for u in 0..n {
            if adj[v][u] && !adj[u][v] {
                return Err(Error::Invalid(format!(
                    "edge {v}-{u} is listed in one direction only"
                )));
            }
        }
    }
    Ok(adj)
}

fn twins(adj: &[Vec<bool>], u: usize, v: usize) -> bool {
    (0..adj.len())
        .filter(|&w| w != u && w != v)
        .all(|w| adj[u][w] == adj[v][w])
}

/// Groups twins into classes, first-seen vertex order.
pub fn graph_to_typegraph(adjacency: &[Vec<usize>]) -> Result<TypeGraph> {
    if adjacency.is_empty() {
        return Err(Error::Invalid("the graph has no vertices".into()));
    }
    let adj = adjacency_matrix(adjacency)?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in 0..adj.len() {
        match groups.iter_mut().find(|g| twins(&adj, g[0], v)) {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    let mut classes = Vec::with_capacity(groups.len());
    let mut edges = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        let kind = if g.len() == 1 || adj[g[0]][g[1]] {
            ClassKind::Clique
        } else {
            ClassKind::Independent
        };
        if kind == ClassKind::Clique && g.len() > 1 {
            edges.push((i, i));
        }
        for (j, h) in groups.iter().enumerate().skip(i + 1) {
            if adj[g[0]][h[0]] {
                edges.push((i, j));
            }
        }
        classes.push(TypeClass {
            weight: g.len() as u64,
            kind,
            members: g.clone(),
        });
    }
    TypeGraph::new(classes, edges)
}

/// One brick per color `1..=colors`. Brick columns are the per-type counts
/// followed by one slack per type-graph edge.
pub fn encode_mscol(tg: &TypeGraph, colors: usize) -> Result<NFoldInstance> {
    if colors == 0 {
        return Err(Error::Invalid("at least one color is required".into()));
    }
    let k = tg.type_count();
    let e = tg.edges.len();
    let t = k + e;
    let mut a = IntMatrix::zeros(k, t);
    for i in 0..k {
        a.set(i, i, 1);
    }
    let mut b = IntMatrix::zeros(e, t);
    for (row, &(i, j)) in tg.edges.iter().enumerate() {
        // a loop bounds a single count by one, like the other rows
        b.set(row, i, 1);
        b.set(row, j, 1);
        b.set(row, k + row, 1);
    }
    let brick = Brick {
        a,
        b,
        b_local: vec![1; e],
        lower: vec![0; t],
        upper: vec![1; t],
    };
    let b_top = tg
        .classes
        .iter()
        .map(|c| match c.kind {
            ClassKind::Clique => {
                i64::try_from(c.weight).map_err(|_| Error::Overflow("class weight"))
            }
            ClassKind::Independent => Ok(1),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut c = Vec::with_capacity(colors * t);
    for alpha in 1..=colors as i64 {
        for class in &tg.classes {
            let per_vertex = match class.kind {
                ClassKind::Clique => alpha,
                ClassKind::Independent => alpha
                    .checked_mul(class.weight as i64)
                    .ok_or(Error::Overflow("coloring cost"))?,
            };
            c.push(-per_vertex);
        }
        c.extend(std::iter::repeat(0).take(e));
    }
    NFoldInstance::new(vec![brick; colors], b_top, Objective::LinearMax { c })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringSolution {
    pub status: Status,
    /// Per type, color → number of its vertices with that color.
    pub types: Vec<BTreeMap<u64, u64>>,
    pub sum: u64,
    /// Color of every original vertex, when a graph was supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_colors: Option<Vec<u64>>,
}

/// Optimal coloring of a type graph with `vertex_count` colors available.
pub fn solve_typegraph(tg: &TypeGraph) -> Result<ColoringSolution> {
    solve_typegraph_with(tg, &Solver::default())
}

pub fn solve_typegraph_with(tg: &TypeGraph, solver: &Solver) -> Result<ColoringSolution> {
    let colors = usize::try_from(tg.vertex_count()).map_err(|_| Error::Overflow("vertex count"))?;
    let inst = encode_mscol(tg, colors)?;
    let solution = solver.solve(&inst)?;
    if !solution.is_optimal() {
        return Err(Error::Internal(
            "coloring program reported infeasible".into(),
        ));
    }
    let k = tg.type_count();
    let mut types = vec![BTreeMap::new(); k];
    for alpha in 0..colors {
        let x = &solution.x[inst.brick_range(alpha)];
        for (i, class) in tg.classes.iter().enumerate() {
            if x[i] > 0 {
                let count = match class.kind {
                    ClassKind::Clique => 1,
                    ClassKind::Independent => class.weight,
                };
                types[i].insert(alpha as u64 + 1, count);
            }
        }
        for &(i, j) in &tg.edges {
            if i != j && x[i] > 0 && x[j] > 0 {
                return Err(Error::Internal(format!(
                    "adjacent types {i} and {j} share color {}",
                    alpha + 1
                )));
            }
        }
    }
    let mut sum = 0u64;
    for (i, class) in tg.classes.iter().enumerate() {
        if types[i].values().sum::<u64>() != class.weight {
            return Err(Error::Internal(format!("type {i} is not fully colored")));
        }
        sum += types[i].iter().map(|(c, n)| c * n).sum::<u64>();
    }
    if i64::try_from(sum).ok() != solution.objective_value.checked_neg() {
        return Err(Error::Internal(
            "decoded color sum disagrees with the program".into(),
        ));
    }
    Ok(ColoringSolution {
        status: Status::Optimal,
        types,
        sum,
        vertex_colors: None,
    })
}

/// Optimal coloring of a graph given as adjacency lists; the result is
/// checked to be a proper coloring of the input.
pub fn solve_mscol(adjacency: &[Vec<usize>]) -> Result<ColoringSolution> {
    solve_mscol_with(adjacency, &Solver::default())
}

pub fn solve_mscol_with(adjacency: &[Vec<usize>], solver: &Solver) -> Result<ColoringSolution> {
    let tg = graph_to_typegraph(adjacency)?;
    let mut solution = solve_typegraph_with(&tg, solver)?;
    let mut colors = vec![0u64; adjacency.len()];
    for (class, counts) in tg.classes.iter().zip(&solution.types) {
        let mut members = class.members.iter();
        for (&color, &n) in counts {
            for v in members.by_ref().take(n as usize) {
                colors[*v] = color;
            }
        }
    }
    for (v, list) in adjacency.iter().enumerate() {
        if colors[v] == 0 || list.iter().any(|&u| colors[u] == colors[v]) {
            return Err(Error::Internal(format!(
                "vertex {v} is not properly colored"
            )));
        }
    }
    if colors.iter().sum::<u64>() != solution.sum {
        return Err(Error::Internal(
            "vertex colors disagree with the type totals".into(),
        ));
    }
    solution.vertex_colors = Some(colors);
    Ok(solution)
}
