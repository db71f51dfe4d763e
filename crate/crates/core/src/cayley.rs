//! The classical Cayley tree of a free product of universal quantum groups,
//! built breadth-first from the trivial irrep up to a radius.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{fuse_generator, length, quantum_dim, Direction, Irrep, QuantumGroupSpec};
use crate::scalar::{int, Rational};

pub const DEFAULT_VERTEX_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub usize);

impl EdgeId {
    /// The same geometric edge with the opposite orientation.
    pub fn reverse(self) -> EdgeId {
        EdgeId(self.0 ^ 1)
    }

    pub fn is_ascending(self) -> bool {
        self.0 & 1 == 0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Quantum weights use the quantum dimensions; classical weights force every
/// dimension to 1 and recover the combinatorial tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightMode {
    #[default]
    Quantum,
    Classical,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub irrep: Irrep,
    pub length: usize,
    pub dim: Rational,
    pub parent: Option<(VertexId, Direction)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub direction: Direction,
    pub ascending: bool,
}

/// Vertices are interned in BFS order; vertex `v > 0` owns the edge pair
/// `2(v-1)` (parent to `v`, ascending) and `2(v-1)+1` (its reverse).
#[derive(Clone, Debug)]
pub struct CayleyTree {
    spec: QuantumGroupSpec,
    radius: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<Irrep, VertexId>,
    weights: WeightMode,
}

pub fn build_tree(spec: &QuantumGroupSpec, radius: usize) -> Result<CayleyTree> {
    CayleyTree::build(spec, radius, DEFAULT_VERTEX_CAP)
}

impl CayleyTree {
    pub fn build(spec: &QuantumGroupSpec, radius: usize, vertex_cap: usize) -> Result<CayleyTree> {
        let mut tree = CayleyTree::root_only(spec, radius);
        let directions = spec.directions();
        let mut head = 0;
        while head < tree.vertices.len() {
            let v = VertexId(head);
            head += 1;
            if tree.vertices[v.0].length >= radius {
                continue;
            }
            for &d in &directions {
                let summands = fuse_generator(spec, &tree.vertices[v.0].irrep, d)?;
                let (up, down) = summands.split_first().expect("ascending summand");
                // Dimension of the new vertex from the fusion rule.
                let mut dim = &tree.vertices[v.0].dim * spec.direction_dim(d)?;
                if let Some(desc) = down.first() {
                    let id = tree.index.get(desc).copied().ok_or_else(|| {
                        Error::InvalidIrrep(format!("descending summand {desc} missing"))
                    })?;
                    dim -= &tree.vertices[id.0].dim;
                }
                if tree.vertices.len() >= vertex_cap {
                    return Err(Error::VertexCapExceeded { cap: vertex_cap, radius });
                }
                tree.push_child(v, d, up.clone(), dim);
            }
        }
        Ok(tree)
    }

    /// The subtree made of the first `len + 1` vertices of an infinite
    /// geodesic.
    pub fn along_geodesic(
        spec: &QuantumGroupSpec,
        geodesic: &InfiniteGeodesic,
        len: usize,
    ) -> Result<CayleyTree> {
        let mut tree = CayleyTree::root_only(spec, len);
        for (i, step) in geodesic.walk(spec)?.take(len).enumerate() {
            let step = step?;
            tree.push_child(VertexId(i), step.direction, step.irrep, step.dim);
        }
        Ok(tree)
    }

    fn root_only(spec: &QuantumGroupSpec, radius: usize) -> CayleyTree {
        let root = Vertex { irrep: Irrep::trivial(), length: 0, dim: int(1), parent: None };
        let mut index = HashMap::new();
        index.insert(Irrep::trivial(), VertexId(0));
        CayleyTree {
            spec: spec.clone(),
            radius,
            vertices: vec![root],
            edges: Vec::new(),
            index,
            weights: WeightMode::Quantum,
        }
    }

    fn push_child(&mut self, parent: VertexId, d: Direction, irrep: Irrep, dim: Rational) {
        let id = VertexId(self.vertices.len());
        let length = self.vertices[parent.0].length + 1;
        self.index.insert(irrep.clone(), id);
        self.vertices.push(Vertex { irrep, length, dim, parent: Some((parent, d)) });
        self.edges.push(Edge { source: parent, target: id, direction: d, ascending: true });
        self.edges.push(Edge {
            source: id,
            target: parent,
            direction: d.dual(&self.spec),
            ascending: false,
        });
    }

    pub fn with_weights(mut self, weights: WeightMode) -> CayleyTree {
        self.weights = weights;
        self
    }

    pub fn weights(&self) -> WeightMode {
        self.weights
    }

    pub fn spec(&self) -> &QuantumGroupSpec {
        &self.spec
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e.0).ok_or_else(|| Error::EdgeOutsideTree(e.to_string()))
    }

    pub fn id_of(&self, alpha: &Irrep) -> Option<VertexId> {
        self.index.get(alpha).copied()
    }

    pub fn require(&self, alpha: &Irrep) -> Result<VertexId> {
        self.id_of(alpha).ok_or_else(|| Error::NotInTree(alpha.to_string()))
    }

    /// Ascending edge ending at `v` (none for the root).
    pub fn edge_into(&self, v: VertexId) -> Option<EdgeId> {
        (v.0 > 0 && v.0 < self.vertices.len()).then(|| EdgeId(2 * (v.0 - 1)))
    }

    /// Weight attached to a vertex: its quantum dimension, or 1 in classical mode.
    pub fn weight(&self, v: VertexId) -> Rational {
        match self.weights {
            WeightMode::Quantum => self.vertices[v.0].dim.clone(),
            WeightMode::Classical => int(1),
        }
    }

    pub fn direction_weight(&self, d: Direction) -> Rational {
        match self.weights {
            WeightMode::Quantum => self.spec.direction_dim(d).cloned().unwrap_or_else(|_| int(1)),
            WeightMode::Classical => int(1),
        }
    }

    /// Ascending path from the root to `alpha`.
    pub fn geodesic(&self, alpha: &Irrep) -> Result<Vec<EdgeId>> {
        let mut v = self.require(alpha)?;
        let mut out = Vec::with_capacity(self.vertices[v.0].length);
        while let Some(e) = self.edge_into(v) {
            out.push(e);
            v = self.edges[e.0].source;
        }
        out.reverse();
        Ok(out)
    }

    /// Vertices of length `n`, in BFS order.
    pub fn sphere(&self, n: usize) -> Result<Vec<VertexId>> {
        if n > self.radius {
            return Err(Error::RadiusExceeded { requested: n, radius: self.radius });
        }
        Ok((0..self.vertices.len())
            .filter(|&i| self.vertices[i].length == n)
            .map(VertexId)
            .collect())
    }

    /// Re-checks the tree axioms and the fusion–dimension bookkeeping.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.vertices.len();

        report.check("edge count is 2(V-1)", self.edges.len() == 2 * (n - 1), || {
            format!("{} edges for {} vertices", self.edges.len(), n)
        });

        for (i, vx) in self.vertices.iter().enumerate().skip(1) {
            let v = VertexId(i);
            let Some((p, d)) = vx.parent else {
                report.fail("unique parent", format!("{} has no parent", vx.irrep));
                continue;
            };
            let up = &self.edges[2 * (i - 1)];
            let down = &self.edges[2 * (i - 1) + 1];
            let pair_ok = up.source == p
                && up.target == v
                && up.direction == d
                && up.ascending
                && down.source == v
                && down.target == p
                && down.direction == d.dual(&self.spec)
                && !down.ascending;
            report.check("edge pairing", pair_ok, || format!("edges of {}", vx.irrep));
            report.check("length gradation", self.vertices[p.0].length + 1 == vx.length, || {
                format!("{} -> {}", self.vertices[p.0].irrep, vx.irrep)
            });
            report.check("length matches word", length(&vx.irrep) == vx.length, || {
                vx.irrep.to_string()
            });
            report.check("cached dimension", quantum_dim(&self.spec, &vx.irrep) == vx.dim, || {
                vx.irrep.to_string()
            });
            report.check("irrep well-formed", vx.irrep.validate(&self.spec).is_ok(), || {
                vx.irrep.to_string()
            });

            // m_parent m_gamma = sum of the dimensions of the summands.
            let parent = &self.vertices[p.0].irrep;
            match fuse_generator(&self.spec, parent, d) {
                Ok(summands) => {
                    // Cached dimensions are checked against the letter formula
                    // at their own vertex, so they can stand in here.
                    let dim_of = |s: &Irrep| match self.index.get(s) {
                        Some(id) => self.vertices[id.0].dim.clone(),
                        None => quantum_dim(&self.spec, s),
                    };
                    let lhs = &self.vertices[p.0].dim * self.spec.direction_dim(d).unwrap();
                    let rhs: Rational = summands.iter().map(dim_of).sum();
                    report.check("fusion-dimension bookkeeping", lhs == rhs, || {
                        format!("{parent} (x) {d}")
                    });
                    report.check("ascending summand is the child", summands[0] == vx.irrep, || {
                        format!("{parent} (x) {d}")
                    });
                }
                Err(e) => report.fail("fusion-dimension bookkeeping", e.to_string()),
            }
        }
        report
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checked: usize,
    pub failures: Vec<(String, String)>,
}

impl ValidationReport {
    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push((name.to_string(), detail()));
        }
    }

    fn fail(&mut self, name: &str, detail: String) {
        self.checked += 1;
        self.failures.push((name.to_string(), detail));
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// An infinite geodesic from the root, given by a cycle of directions; each
/// step takes the ascending summand of the fusion with the next direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteGeodesic {
    cycle: Vec<Direction>,
}

#[derive(Clone, Debug)]
pub struct GeodesicStep {
    pub irrep: Irrep,
    pub dim: Rational,
    pub direction: Direction,
}

impl InfiniteGeodesic {
    pub fn new(cycle: Vec<Direction>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("empty direction cycle".into()));
        }
        Ok(InfiniteGeodesic { cycle })
    }

    /// The half-line for a single `A_o` factor; `(1, γ, γγ̄, γγ̄γ, …)` for the
    /// first unitary factor; otherwise alternating generators of the first two
    /// factors.
    pub fn canonical(spec: &QuantumGroupSpec) -> InfiniteGeodesic {
        use crate::fusion::FactorKind;
        let factors = spec.factors();
        if let Some(i) = factors.iter().position(|f| f.kind == FactorKind::Unitary) {
            return InfiniteGeodesic {
                cycle: vec![Direction::new(i, false), Direction::new(i, true)],
            };
        }
        let cycle = if factors.len() == 1 {
            vec![Direction::new(0, false)]
        } else {
            vec![Direction::new(0, false), Direction::new(1, false)]
        };
        InfiniteGeodesic { cycle }
    }

    pub fn cycle(&self) -> &[Direction] {
        &self.cycle
    }

    /// Lazily enumerates `α_1, α_2, …` with their dimensions and the
    /// direction of the step that reached them.
    pub fn walk<'a>(
        &'a self,
        spec: &'a QuantumGroupSpec,
    ) -> Result<impl Iterator<Item = Result<GeodesicStep>> + 'a> {
        for &d in &self.cycle {
            spec.check_direction(d)?;
        }
        let mut current = Irrep::trivial();
        let mut dims: Vec<Rational> = vec![int(1)];
        let mut i = 0usize;
        Ok(std::iter::from_fn(move || {
            let d = self.cycle[i % self.cycle.len()];
            i += 1;
            let step = (|| {
                let summands = fuse_generator(spec, &current, d)?;
                let mut dim = dims.last().unwrap() * spec.direction_dim(d)?;
                if summands.len() > 1 {
                    // The descending summand of a geodesic step is the previous vertex.
                    dim -= &dims[dims.len() - 2];
                }
                current = summands[0].clone();
                dims.push(dim.clone());
                Ok(GeodesicStep { irrep: current.clone(), dim, direction: d })
            })();
            Some(step)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::parse_spec;

    fn tree(s: &str, r: usize) -> CayleyTree {
        build_tree(&parse_spec(s).unwrap(), r).unwrap()
    }

    #[test]
    fn half_line() {
        let t = tree("Ao(3)", 5);
        assert_eq!(t.vertex_count(), 6);
        assert_eq!(t.edges().len(), 10);
        for n in 0..=5 {
            assert_eq!(t.sphere(n).unwrap().len(), 1);
        }
        assert!(t.validate().is_ok());
        let g = t.geodesic(&Irrep::orth(0, 3)).unwrap();
        let pairs: Vec<_> = g
            .iter()
            .map(|&e| {
                let e = t.edge(e).unwrap();
                (e.source.0, e.target.0)
            })
            .collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn unitary_binary_tree() {
        let t = tree("Au(3)", 2);
        let words: Vec<String> = t.vertices().iter().map(|v| v.irrep.to_string()).collect();
        assert_eq!(words, ["1", "0:u", "0:U", "0:uu", "0:uU", "0:Uu", "0:UU"]);
        assert_eq!(t.sphere(2).unwrap().len(), 4);
        assert_eq!(t.sphere(0).unwrap(), vec![VertexId(0)]);
        assert!(t.sphere(3).is_err());
        let g = t.geodesic(&Irrep::unit(0, "uU").unwrap()).unwrap();
        let dirs: Vec<_> = g.iter().map(|&e| t.edge(e).unwrap().direction).collect();
        assert_eq!(dirs, vec![Direction::new(0, false), Direction::new(0, true)]);
        assert!(t.geodesic(&Irrep::trivial()).unwrap().is_empty());
        assert!(matches!(
            t.geodesic(&Irrep::unit(0, "uuu").unwrap()),
            Err(Error::NotInTree(_))
        ));
        assert!(t.validate().is_ok());
    }

    #[test]
    fn radius_zero_and_cap() {
        let t = tree("Ao(3)*Au(3)", 0);
        assert_eq!(t.vertex_count(), 1);
        assert!(t.edges().is_empty());
        let err = CayleyTree::build(&parse_spec("Au(3)").unwrap(), 10, 100).unwrap_err();
        assert_eq!(err, Error::VertexCapExceeded { cap: 100, radius: 10 });
    }

    #[test]
    fn geodesic_walk_dims() {
        let spec = parse_spec("Au(3)").unwrap();
        let g = InfiniteGeodesic::canonical(&spec);
        let dims: Vec<Rational> = g.walk(&spec).unwrap().take(4).map(|s| s.unwrap().dim).collect();
        assert_eq!(dims, [3, 8, 21, 55].map(int).to_vec());
        let t = CayleyTree::along_geodesic(&spec, &g, 6).unwrap();
        assert_eq!(t.vertex_count(), 7);
        assert_eq!(t.vertex(VertexId(3)).irrep, Irrep::unit(0, "uUu").unwrap());
        assert!(t.validate().is_ok());
    }

    #[test]
    fn mixed_geodesic_alternates() {
        let spec = parse_spec("Ao(3)*Ao(3)").unwrap();
        let t = build_tree(&spec, 4).unwrap();
        let alpha: Irrep = "0:1.1:1.0:1".parse().unwrap();
        let g = t.geodesic(&alpha).unwrap();
        let factors: Vec<_> = g.iter().map(|&e| t.edge(e).unwrap().direction.factor).collect();
        assert_eq!(factors, vec![0, 1, 0]);
        assert!(t.validate().is_ok());
    }
}
