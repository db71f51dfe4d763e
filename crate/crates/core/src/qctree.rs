//! The quasi-classical hilbertian tree: the orthonormal vertex basis
//! `ξ̃_α = ξ_α / m_α`, the antisymmetric edge basis `ξ̃_{α∧β}`, the normalised
//! oriented edge basis `ξ_(α,β) / ||ξ_(α,β)||` with `||ξ_(α,β)||² = m_α m_β m_γ`,
//! the endpoint maps `E₂`, `Ô = E₂Θ`, the reversal `Θ`, the counit, path
//! vectors and the `A_o` inverse of `E₂`.
//!
//! Coefficients are exact [`Surd`]s; squared norms collapse to rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cayley::{CayleyTree, EdgeId, InfiniteGeodesic, VertexId};
use crate::error::{Error, Result};
use crate::estimates::TailCertificate;
use crate::fusion::{ao_dims, growth, Irrep};
use crate::scalar::{int, Interval, Rational, Surd};

/// Key of the antisymmetric basis: an ascending edge `(α, β)`, `α` the lower
/// endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeomEdge(pub EdgeId);

/// Finitely supported vector over an orthonormal basis indexed by `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector<K: Ord> {
    coeffs: BTreeMap<K, Surd>,
}

pub type VertexVector = SparseVector<VertexId>;
pub type GeomEdgeVector = SparseVector<GeomEdge>;
pub type OrientedEdgeVector = SparseVector<EdgeId>;

impl<K: Ord + Copy> Default for SparseVector<K> {
    fn default() -> Self {
        SparseVector { coeffs: BTreeMap::new() }
    }
}

impl<K: Ord + Copy> SparseVector<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        let mut v = Self::zero();
        v.add_term(key, &Surd::rational(int(1)));
        v
    }

    pub fn add_term(&mut self, key: K, c: &Surd) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_default();
        *entry = &*entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn get(&self, key: K) -> Surd {
        self.coeffs.get(&key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (K, &Surd)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Number of nonzero coefficients.
    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &Surd) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.coeffs {
            out.add_term(*k, &(c * s));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Surd::rational(int(-1)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn dot(&self, other: &Self) -> Surd {
        let mut acc = Surd::zero();
        for (k, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(k) {
                acc = &acc + &(c * d);
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> Surd {
        self.dot(self)
    }

    /// Exact squared norm when it is rational (always the case for the
    /// vectors built in this module).
    pub fn norm_sq_rational(&self) -> Option<Rational> {
        self.norm_sq().to_rational()
    }
}

/// The vacuum vector `ξ₀ = ξ̃_1`.
pub fn xi0(tree: &CayleyTree) -> VertexVector {
    VertexVector::basis(tree.root())
}

fn check_vertex(tree: &CayleyTree, v: VertexId) -> Result<()> {
    if v.0 < tree.vertex_count() {
        Ok(())
    } else {
        Err(Error::NotInTree(v.to_string()))
    }
}

fn check_geom(tree: &CayleyTree, e: GeomEdge) -> Result<()> {
    tree.edge(e.0)?;
    if e.0.is_ascending() {
        Ok(())
    } else {
        Err(Error::NotAscending(e.0 .0))
    }
}

/// `E₂ ξ̃_{α∧β} = sqrt(m_γ/2) (sqrt(m_α/m_β) ξ̃_β − sqrt(m_β/m_α) ξ̃_α)`.
pub fn e2(tree: &CayleyTree, v: &GeomEdgeVector) -> Result<VertexVector> {
    let mut out = VertexVector::zero();
    for (key, c) in v.iter() {
        check_geom(tree, key)?;
        let edge = tree.edge(key.0)?;
        let (ma, mb) = (tree.weight(edge.source), tree.weight(edge.target));
        let mg = tree.direction_weight(edge.direction);
        let half = &mg / int(2);
        let to_upper = Surd::sqrt(&half * &ma / &mb);
        let to_lower = Surd::signed_sqrt(true, &half * &mb / &ma);
        out.add_term(edge.target, &(c * &to_upper));
        out.add_term(edge.source, &(c * &to_lower));
    }
    Ok(out)
}

/// `E₂` on normalised oriented edges: `(s,t) ↦ sqrt(m_s m_γ / m_t) ξ̃_t`.
pub fn e2_oriented(tree: &CayleyTree, v: &OrientedEdgeVector) -> Result<VertexVector> {
    let mut out = VertexVector::zero();
    for (e, c) in v.iter() {
        let edge = tree.edge(e)?;
        let (ms, mt) = (tree.weight(edge.source), tree.weight(edge.target));
        let mg = tree.direction_weight(edge.direction);
        out.add_term(edge.target, &(c * &Surd::sqrt(ms * mg / mt)));
    }
    Ok(out)
}

/// `Ô` on normalised oriented edges: `(s,t) ↦ sqrt(m_t m_γ / m_s) ξ̃_s`.
pub fn o_source(tree: &CayleyTree, v: &OrientedEdgeVector) -> Result<VertexVector> {
    let mut out = VertexVector::zero();
    for (e, c) in v.iter() {
        let edge = tree.edge(e)?;
        let (ms, mt) = (tree.weight(edge.source), tree.weight(edge.target));
        let mg = tree.direction_weight(edge.direction);
        out.add_term(edge.source, &(c * &Surd::sqrt(mt * mg / ms)));
    }
    Ok(out)
}

/// Edge reversal `Θ ξ_(α,β) = ξ_(β,α)`.
pub fn theta(tree: &CayleyTree, v: &OrientedEdgeVector) -> Result<OrientedEdgeVector> {
    let mut out = OrientedEdgeVector::zero();
    for (e, c) in v.iter() {
        tree.edge(e)?;
        out.add_term(e.reverse(), c);
    }
    Ok(out)
}

/// `Θ` restricted to the antisymmetric subspace, where it is `−id`.
pub fn theta_geom(v: &GeomEdgeVector) -> GeomEdgeVector {
    v.neg()
}

/// Orthogonal projection onto the antisymmetric subspace, in the basis
/// `ξ̃_{α∧β} = (n_(α,β) − n_(β,α)) / sqrt 2`.
pub fn antisymmetrize(tree: &CayleyTree, v: &OrientedEdgeVector) -> Result<GeomEdgeVector> {
    let inv_sqrt2 = Surd::sqrt(Rational::new(1.into(), 2.into()));
    let mut out = GeomEdgeVector::zero();
    for (e, c) in v.iter() {
        tree.edge(e)?;
        let (asc, sign) = if e.is_ascending() { (e, 1) } else { (e.reverse(), -1) };
        out.add_term(GeomEdge(asc), &(c * &inv_sqrt2).scale(&int(sign)));
    }
    Ok(out)
}

/// Inclusion of the antisymmetric subspace into the oriented edge space.
pub fn embed(tree: &CayleyTree, v: &GeomEdgeVector) -> Result<OrientedEdgeVector> {
    let inv_sqrt2 = Surd::sqrt(Rational::new(1.into(), 2.into()));
    let mut out = OrientedEdgeVector::zero();
    for (key, c) in v.iter() {
        check_geom(tree, key)?;
        let c = c * &inv_sqrt2;
        out.add_term(key.0, &c);
        out.add_term(key.0.reverse(), &-c);
    }
    Ok(out)
}

/// `ε(ξ̃_α) = m_α`, extended linearly.
pub fn counit(tree: &CayleyTree, v: &VertexVector) -> Result<Surd> {
    let mut acc = Surd::zero();
    for (vid, c) in v.iter() {
        check_vertex(tree, vid)?;
        acc = &acc + &c.scale(&tree.weight(vid));
    }
    Ok(acc)
}

fn path_term(tree: &CayleyTree, e: EdgeId) -> Result<Surd> {
    let edge = tree.edge(e)?;
    let mg = tree.direction_weight(edge.direction);
    let m = tree.weight(edge.source) * tree.weight(edge.target);
    Ok(Surd::sqrt(int(2) / (mg * m)))
}

/// `ζ_α = Σ_i sqrt(2/m_{γ_i}) ξ̃_{α_i∧α_{i+1}} / sqrt(m_{α_i} m_{α_{i+1}})`
/// along the geodesic to `α`; `E₂ ζ_α = ξ̃_α / m_α − ξ₀`.
pub fn path_vector(tree: &CayleyTree, alpha: &Irrep) -> Result<GeomEdgeVector> {
    let mut out = GeomEdgeVector::zero();
    for e in tree.geodesic(alpha)? {
        out.add_term(GeomEdge(e), &path_term(tree, e)?);
    }
    Ok(out)
}

/// `ξ̃_α / m_α − ξ₀`, the target of the telescoping identity.
pub fn path_target(tree: &CayleyTree, v: VertexId) -> VertexVector {
    let m = tree.weight(v);
    let mut out = VertexVector::basis(v).scale(&Surd::rational(m.recip()));
    out.add_term(tree.root(), &Surd::rational(int(-1)));
    out
}

/// `E₂ ζ_α − (ξ̃_α / m_α − ξ₀)`; zero exactly when the telescoping holds.
pub fn telescoping_residual(tree: &CayleyTree, v: VertexId) -> Result<VertexVector> {
    let alpha = &tree.vertex(v).irrep;
    let image = e2(tree, &path_vector(tree, alpha)?)?;
    Ok(image.sub(&path_target(tree, v)))
}

/// Outcome of [`telescoping_check`].
#[derive(Clone, Debug, Default)]
pub struct TelescopingReport {
    pub checked: usize,
    pub failures: Vec<VertexId>,
}

impl TelescopingReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Verifies `E₂ ζ_α = ξ̃_α / m_α − ξ₀` at every vertex by induction along the
/// BFS order: `ζ_α = ζ_parent + c ξ̃_{parent∧α}`, so by linearity it suffices
/// that `E₂(c ξ̃_{parent∧α})` equals the difference of the two targets. The
/// root holds trivially (`ζ_1 = 0`). Each step is exact, so every vertex
/// costs one edge instead of a whole geodesic.
pub fn telescoping_check(tree: &CayleyTree) -> Result<TelescopingReport> {
    let mut report = TelescopingReport::default();
    let mut verified = vec![false; tree.vertex_count()];
    verified[0] = true;
    for (i, vx) in tree.vertices().iter().enumerate().skip(1) {
        let v = VertexId(i);
        let (p, _) = vx.parent.expect("non-root vertex has a parent");
        let e = tree.edge_into(v).expect("non-root vertex has an edge");
        let step = GeomEdgeVector::basis(GeomEdge(e)).scale(&path_term(tree, e)?);
        let expected = path_target(tree, v).sub(&path_target(tree, p));
        let ok = e2(tree, &step)? == expected;
        verified[i] = ok && verified[p.0];
        report.checked += 1;
        if !verified[i] {
            report.failures.push(v);
        }
    }
    Ok(report)
}

/// Truncation of the fixed vector along an infinite geodesic.
#[derive(Clone, Debug)]
pub struct FixedVector {
    pub radius: usize,
    pub vector: GeomEdgeVector,
    /// `||ζ^{(R)}||²`, exact.
    pub norm_sq_partial: Rational,
    /// Certified bound on `||ζ_∞ − ζ^{(R)}||²`.
    pub tail: Rational,
    pub certificate: TailCertificate,
    /// `||E₂ ζ^{(R)} + ξ₀||²` (`= 1/m_{α_R}²`).
    pub residual_plus_sq: Rational,
    /// `||E₂ ζ^{(R)} − ξ₀||²`, the other sign choice.
    pub residual_minus_sq: Rational,
}

impl FixedVector {
    /// Enclosure of `||ζ_∞||²`.
    pub fn norm_sq(&self) -> Interval {
        Interval::new(self.norm_sq_partial.clone(), &self.norm_sq_partial + &self.tail)
    }
}

/// Lower bound, over the directions of a geodesic, of the growth root of
/// each direction's dimension; refuses dimension `<= 2`.
fn geodesic_growth_floor(tree: &CayleyTree, geodesic: &InfiniteGeodesic) -> Result<(Rational, Rational)> {
    let spec = tree.spec();
    let mut a_lo: Option<Rational> = None;
    let mut mg_min: Option<Rational> = None;
    for &d in geodesic.cycle() {
        let mg = spec.direction_dim(d)?.clone();
        if mg <= int(2) {
            return Err(Error::DimqTwoExcluded { what: "fixed vector".into() });
        }
        let a = growth(&mg)?.lo().clone();
        a_lo = Some(a_lo.map_or(a.clone(), |x| x.min(a)));
        mg_min = Some(mg_min.map_or(mg.clone(), |x| x.min(mg)));
    }
    Ok((a_lo.unwrap(), mg_min.unwrap()))
}

/// `ζ_∞` truncated after `radius` edges along `geodesic`, with a certified
/// tail. Every ascending step multiplies the dimension by at least the
/// growth root of its direction, which gives geometric domination of the
/// remaining terms by `(1/a_lo²)^j`.
pub fn fixed_vector(tree: &CayleyTree, geodesic: &InfiniteGeodesic, radius: usize) -> Result<FixedVector> {
    let spec = tree.spec();
    let (a_lo, mg_min) = geodesic_growth_floor(tree, geodesic)?;
    if radius == 0 {
        return Err(Error::InvalidArgument("fixed vector needs radius >= 1".into()));
    }

    let mut vector = GeomEdgeVector::zero();
    let mut dims = vec![int(1)];
    let mut v = tree.root();
    for step in geodesic.walk(spec)?.take(radius + 1) {
        let step = step?;
        dims.push(step.dim);
        if dims.len() > radius + 1 {
            break;
        }
        let next = tree.require(&step.irrep)?;
        let e = tree.edge_into(next).expect("non-root");
        if tree.edge(e)?.source != v {
            return Err(Error::InvalidArgument(format!("{} is not on the geodesic", step.irrep)));
        }
        vector.add_term(GeomEdge(e), &path_term(tree, e)?);
        v = next;
    }
    let norm_sq_partial = vector
        .norm_sq_rational()
        .expect("path vectors have rational squared norms");

    let ratio = (&a_lo * &a_lo).recip();
    let tail = int(2) / &mg_min / (&dims[radius] * &dims[radius + 1]) / (int(1) - &ratio);

    let image = e2(tree, &vector)?;
    let residual_plus_sq = image.add(&xi0(tree)).norm_sq_rational().expect("rational");
    let residual_minus_sq = image.sub(&xi0(tree)).norm_sq_rational().expect("rational");

    Ok(FixedVector {
        radius,
        vector,
        norm_sq_partial,
        tail,
        certificate: TailCertificate { ratio, crossover: radius },
        residual_plus_sq,
        residual_minus_sq,
    })
}

fn half_line_dimq(tree: &CayleyTree, what: &str) -> Result<Rational> {
    let dimq = tree
        .spec()
        .single_orthogonal()
        .ok_or_else(|| Error::NotSingleOrthogonal(what.into()))?
        .clone();
    if dimq <= int(2) {
        return Err(Error::DimqTwoExcluded { what: what.into() });
    }
    if dimq < int(3) {
        return Err(Error::DimqBelowThree { what: what.into(), dimq: crate::scalar::fmt_rational(&dimq) });
    }
    Ok(dimq)
}

/// Truncated `E₂⁻¹ ξ̃_k` on the `A_o` half-line.
#[derive(Clone, Debug)]
pub struct InverseSeries {
    pub k: usize,
    pub radius: usize,
    pub vector: GeomEdgeVector,
    /// Certified bound on the squared norm of the omitted terms.
    pub tail: Rational,
    pub certificate: TailCertificate,
}

/// `E₂⁻¹(ξ̃_k) = −m_k sqrt(2/m₁) Σ_{i=k}^{R} ξ̃_{i∧i+1} / sqrt(m_i m_{i+1})`.
/// The tree must reach radius `R + 1` so that `E₂` can be applied to the
/// truncation.
pub fn e2_inverse_ao(tree: &CayleyTree, k: usize, radius: usize) -> Result<InverseSeries> {
    let dimq = half_line_dimq(tree, "E2 inverse")?;
    if k > radius {
        return Err(Error::IndexOutOfRange(format!("k = {k} > R = {radius}")));
    }
    if tree.radius() < radius + 1 {
        return Err(Error::RadiusExceeded { requested: radius + 1, radius: tree.radius() });
    }
    let mk = tree.weight(VertexId(k));
    let coeff_head = -Surd::sqrt(&mk * &mk * int(2) / &dimq);
    let mut vector = GeomEdgeVector::zero();
    for i in k..=radius {
        let e = tree.edge_into(VertexId(i + 1)).expect("non-root");
        let m = tree.weight(VertexId(i)) * tree.weight(VertexId(i + 1));
        let c = &coeff_head * &Surd::sqrt(m.recip());
        vector.add_term(GeomEdge(e), &c);
    }
    let a_lo = growth(&dimq)?.lo().clone();
    let ratio = (&a_lo * &a_lo).recip();
    let dims = ao_dims(&dimq, radius + 3);
    let first_omitted = int(2) * &mk * &mk / &dimq / (&dims[radius + 1] * &dims[radius + 2]);
    let tail = first_omitted / (int(1) - &ratio);
    Ok(InverseSeries {
        k,
        radius,
        vector,
        tail,
        certificate: TailCertificate { ratio, crossover: radius + 1 },
    })
}

fn gram_partial(dims: &[Rational], dimq: &Rational, k: usize, l: usize, radius: usize) -> Rational {
    let start = k.max(l);
    let mut s = Rational::zero();
    for i in start..=radius {
        s += (&dims[i] * &dims[i + 1]).recip();
    }
    int(2) / dimq * &dims[k] * &dims[l] * s
}

fn gram_tail(dims: &[Rational], dimq: &Rational, ratio: &Rational, k: usize, l: usize, radius: usize) -> Rational {
    let first = int(2) / dimq * &dims[k] * &dims[l] / (&dims[radius + 1] * &dims[radius + 2]);
    first / (int(1) - ratio)
}

/// `(E₂⁻¹ξ̃_k | E₂⁻¹ξ̃_l) = (2/m₁) Σ_{i ≥ max(k,l)} m_k m_l / (m_i m_{i+1})`,
/// summed through `i = R` with a certified tail.
pub fn gram(tree: &CayleyTree, k: usize, l: usize, radius: usize) -> Result<Interval> {
    let dimq = half_line_dimq(tree, "Gram entry")?;
    if k.max(l) > radius {
        return Err(Error::IndexOutOfRange(format!("max(k, l) = {} > R = {radius}", k.max(l))));
    }
    let dims = ao_dims(&dimq, radius + 3);
    let a_lo = growth(&dimq)?.lo().clone();
    let ratio = (&a_lo * &a_lo).recip();
    let lo = gram_partial(&dims, &dimq, k, l, radius);
    let hi = &lo + gram_tail(&dims, &dimq, &ratio, k, l, radius);
    Ok(Interval::new(lo, hi))
}

/// Gram window `0 <= k, l <= kmax`.
pub fn gram_matrix(tree: &CayleyTree, kmax: usize, radius: usize) -> Result<Vec<Vec<Interval>>> {
    (0..=kmax)
        .map(|k| (0..=kmax).map(|l| gram(tree, k, l, radius)).collect())
        .collect()
}

/// Smallest `D` with `gram(k,l) <= D a^{-|k-l|}` on the window `k, l <= kmax`,
/// from upper interval ends.
pub fn gram_bound(tree: &CayleyTree, kmax: usize) -> Result<Rational> {
    let dimq = half_line_dimq(tree, "Gram bound")?;
    let a_hi = growth(&dimq)?.hi().clone();
    let radius = 2 * kmax + 40;
    let mut d = Rational::zero();
    for k in 0..=kmax {
        for l in 0..=kmax {
            let entry = gram(tree, k, l, radius)?;
            let scaled = entry.hi() * num_traits::pow(a_hi.clone(), k.abs_diff(l));
            if scaled > d {
                d = scaled;
            }
        }
    }
    Ok(d)
}

/// Positive definiteness of the truncated Gram window via exact `LDLᵀ`:
/// the lower ends are the exact Gram matrix of the truncated vectors, and
/// the omitted part is itself a Gram matrix, so positive pivots certify the
/// limit matrix is positive semidefinite. Returns the pivots.
pub fn gram_psd_pivots(window: &[Vec<Interval>]) -> Vec<Rational> {
    let n = window.len();
    let mut a: Vec<Vec<Rational>> = window
        .iter()
        .map(|row| row.iter().map(|x| x.lo().clone()).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for j in 0..n {
        let p = a[j][j].clone();
        pivots.push(p.clone());
        if p.is_zero() {
            break;
        }
        let (head, tail) = a.split_at_mut(j + 1);
        let pivot_row = &head[j];
        for row in tail.iter_mut() {
            let f = &row[j] / &p;
            for (x, y) in row[j + 1..].iter_mut().zip(&pivot_row[j + 1..]) {
                *x -= &f * y;
            }
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_tree, WeightMode};
    use crate::fusion::parse_spec;
    use crate::scalar::rat;

    fn tree(s: &str, r: usize) -> CayleyTree {
        build_tree(&parse_spec(s).unwrap(), r).unwrap()
    }

    fn sq(c: &Surd) -> Rational {
        c.square().to_rational().unwrap()
    }

    #[test]
    fn e2_on_first_edges_of_half_line() {
        let t = tree("Ao(3)", 3);
        let v = GeomEdgeVector::basis(GeomEdge(EdgeId(0)));
        let img = e2(&t, &v).unwrap();
        assert_eq!(sq(&img.get(VertexId(1))), rat(1, 2));
        assert_eq!(sq(&img.get(VertexId(0))), rat(9, 2));
        assert!(img.get(VertexId(1)).to_f64() > 0.0);
        assert!(img.get(VertexId(0)).to_f64() < 0.0);

        let v = GeomEdgeVector::basis(GeomEdge(EdgeId(2)));
        let img = e2(&t, &v).unwrap();
        assert_eq!(sq(&img.get(VertexId(2))), rat(9, 16));
        assert_eq!(sq(&img.get(VertexId(1))), int(4));

        assert!(e2(&t, &GeomEdgeVector::zero()).unwrap().is_zero());
        assert!(matches!(
            e2(&t, &GeomEdgeVector::basis(GeomEdge(EdgeId(1)))),
            Err(Error::NotAscending(1))
        ));
        assert!(e2(&t, &GeomEdgeVector::basis(GeomEdge(EdgeId(40)))).is_err());
    }

    #[test]
    fn e2_agrees_with_unnormalised_formula() {
        // E₂ ξ_(α,β) = (m_α m_γ / m_β) ξ_β, normalised by ||ξ_(α,β)|| and ξ_β = m_β ξ̃_β.
        let t = tree("Au(3)", 4);
        for (i, edge) in t.edges().iter().enumerate() {
            let (ms, mt) = (t.weight(edge.source), t.weight(edge.target));
            let mg = t.direction_weight(edge.direction);
            let expected_sq = (&ms * &mg / &mt * &mt).pow(2) / (&ms * &mt * &mg);
            let img = e2_oriented(&t, &OrientedEdgeVector::basis(EdgeId(i))).unwrap();
            assert_eq!(sq(&img.get(edge.target)), expected_sq);
        }
    }

    #[test]
    fn geom_and_oriented_routes_agree() {
        let t = tree("Ao(3)*Au(3)", 3);
        for i in (0..t.edges().len()).step_by(2) {
            let g = GeomEdgeVector::basis(GeomEdge(EdgeId(i)));
            let via_oriented = e2_oriented(&t, &embed(&t, &g).unwrap()).unwrap();
            assert_eq!(e2(&t, &g).unwrap(), via_oriented);
        }
    }

    #[test]
    fn theta_and_o_source() {
        let t = tree("Ao(3)", 4);
        let v = OrientedEdgeVector::basis(EdgeId(0));
        let r = theta(&t, &v).unwrap();
        assert_eq!(r, OrientedEdgeVector::basis(EdgeId(1)));
        assert_eq!(theta(&t, &r).unwrap(), v);
        // Ô = E₂ ∘ Θ
        for i in 0..t.edges().len() {
            let v = OrientedEdgeVector::basis(EdgeId(i));
            assert_eq!(o_source(&t, &v).unwrap(), e2_oriented(&t, &theta(&t, &v).unwrap()).unwrap());
        }
        // antisymmetrizer ∘ Θ = −antisymmetrizer
        let v = OrientedEdgeVector::basis(EdgeId(2));
        let lhs = antisymmetrize(&t, &theta(&t, &v).unwrap()).unwrap();
        assert_eq!(lhs, antisymmetrize(&t, &v).unwrap().neg());
        let g = GeomEdgeVector::basis(GeomEdge(EdgeId(2)));
        let embedded = embed(&t, &g).unwrap();
        assert_eq!(theta(&t, &embedded).unwrap(), embed(&t, &theta_geom(&g)).unwrap());
        assert_eq!(antisymmetrize(&t, &embedded).unwrap(), g);
    }

    #[test]
    fn counit_values() {
        let t = tree("Au(3)", 2);
        let g = t.require(&Irrep::unit(0, "u").unwrap()).unwrap();
        assert_eq!(counit(&t, &VertexVector::basis(g)).unwrap().to_rational(), Some(int(3)));
        assert_eq!(counit(&t, &xi0(&t)).unwrap().to_rational(), Some(int(1)));
        for i in (0..t.edges().len()).step_by(2) {
            let img = e2(&t, &GeomEdgeVector::basis(GeomEdge(EdgeId(i)))).unwrap();
            assert!(counit(&t, &img).unwrap().is_zero());
        }
    }

    #[test]
    fn path_vectors() {
        let t = tree("Ao(3)", 3);
        let z = path_vector(&t, &Irrep::orth(0, 1)).unwrap();
        assert_eq!(z.support_size(), 1);
        assert_eq!(sq(&z.get(GeomEdge(EdgeId(0)))), rat(2, 9));
        let img = e2(&t, &z).unwrap();
        assert_eq!(img.get(VertexId(1)).to_rational(), Some(rat(1, 3)));
        assert_eq!(img.get(VertexId(0)).to_rational(), Some(int(-1)));
        assert!(path_vector(&t, &Irrep::trivial()).unwrap().is_zero());
        for v in 0..t.vertex_count() {
            assert!(telescoping_residual(&t, VertexId(v)).unwrap().is_zero());
        }
    }

    #[test]
    fn classical_mode_path_norms() {
        let t = tree("Au(3)", 4).with_weights(WeightMode::Classical);
        for (i, vx) in t.vertices().iter().enumerate() {
            let z = path_vector(&t, &vx.irrep).unwrap();
            assert_eq!(z.norm_sq_rational(), Some(int(2 * vx.length as i64)));
            assert!(telescoping_residual(&t, VertexId(i)).unwrap().is_zero());
        }
    }

    #[test]
    fn fixed_vector_gates() {
        let spec = parse_spec("Ao(2)").unwrap();
        let t = build_tree(&spec, 4).unwrap();
        let g = InfiniteGeodesic::canonical(&spec);
        assert!(matches!(fixed_vector(&t, &g, 3), Err(Error::DimqTwoExcluded { .. })));
        assert!(matches!(e2_inverse_ao(&t, 0, 2), Err(Error::DimqTwoExcluded { .. })));
        let t = tree("Au(3)", 3);
        assert!(matches!(e2_inverse_ao(&t, 0, 2), Err(Error::NotSingleOrthogonal(_))));
    }

    #[test]
    fn inverse_single_term() {
        let t = tree("Ao(3)", 6);
        let inv = e2_inverse_ao(&t, 5, 5).unwrap();
        assert_eq!(inv.vector.support_size(), 1);
        let residual = e2(&t, &inv.vector).unwrap().sub(&VertexVector::basis(VertexId(5)));
        assert_eq!(residual.norm_sq_rational(), Some(rat(144 * 144, 377 * 377)));
        assert!(matches!(e2_inverse_ao(&t, 0, 6), Err(Error::RadiusExceeded { .. })));
        assert!(matches!(e2_inverse_ao(&t, 4, 3), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn gram_symmetry() {
        let t = tree("Ao(3)", 1);
        for k in 0..6 {
            for l in 0..6 {
                assert_eq!(gram(&t, k, l, 30).unwrap(), gram(&t, l, k, 30).unwrap());
            }
        }
    }
}
