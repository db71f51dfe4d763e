//! Plain `f64` versions of the half-line and path computations. They carry
//! no certificates and exist for speed comparison and numerical
//! cross-checks of the exact kernels.

use crate::cayley::{CayleyTree, VertexId};
use crate::scalar::to_f64;

pub fn ao_dims_f64(dimq: f64, count: usize) -> Vec<f64> {
    let mut dims = Vec::with_capacity(count);
    for k in 0..count {
        let next = match k {
            0 => 1.0,
            1 => dimq,
            _ => dimq * dims[k - 1] - dims[k - 2],
        };
        dims.push(next);
    }
    dims
}

/// `||ζ_α||²` for every vertex, accumulated along parent pointers.
pub fn path_norms_f64(tree: &CayleyTree) -> Vec<f64> {
    let weights: Vec<f64> = (0..tree.vertex_count()).map(|v| to_f64(&tree.weight(VertexId(v)))).collect();
    let mut norms = vec![0.0; tree.vertex_count()];
    for (v, vx) in tree.vertices().iter().enumerate().skip(1) {
        let (p, d) = vx.parent.expect("non-root vertex has a parent");
        let mg = to_f64(&tree.direction_weight(d));
        norms[v] = norms[p.0] + 2.0 / (mg * weights[p.0] * weights[v]);
    }
    norms
}

/// `(2/m₁) Σ_{i=0}^{R} r^{2i+2} (i+2)^{2s} / (m_i m_{i+1})`.
pub fn weighted_series_f64(dimq: f64, s: f64, r: f64, radius: usize) -> f64 {
    let dims = ao_dims_f64(dimq, radius + 2);
    (0..=radius)
        .map(|i| 2.0 / dimq * r.powi(2 * i as i32 + 2) * ((i + 2) as f64).powf(2.0 * s) / (dims[i] * dims[i + 1]))
        .sum()
}

/// `(2/m₁) Σ_{i=max(k,l)}^{R} m_k m_l / (m_i m_{i+1})`.
pub fn gram_f64(dimq: f64, k: usize, l: usize, radius: usize) -> f64 {
    let dims = ao_dims_f64(dimq, radius + 2);
    (k.max(l)..=radius)
        .map(|i| 2.0 / dimq * dims[k] * dims[l] / (dims[i] * dims[i + 1]))
        .sum()
}

/// `||E₂(E₂⁻¹ξ̃_k truncated at R) − ξ̃_k||`, computed coefficient by
/// coefficient on the half-line.
pub fn e2_inverse_residual_f64(dimq: f64, k: usize, radius: usize) -> f64 {
    let dims = ao_dims_f64(dimq, radius + 2);
    let mut image = vec![0.0f64; radius + 2];
    let head = -dims[k] * (2.0 / dimq).sqrt();
    for i in k..=radius {
        let c = head / (dims[i] * dims[i + 1]).sqrt();
        image[i + 1] += c * (dimq / 2.0 * dims[i] / dims[i + 1]).sqrt();
        image[i] -= c * (dimq / 2.0 * dims[i + 1] / dims[i]).sqrt();
    }
    image[k] -= 1.0;
    image.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_residuals() {
        assert_eq!(ao_dims_f64(3.0, 6), vec![1.0, 3.0, 8.0, 21.0, 55.0, 144.0]);
        let r = e2_inverse_residual_f64(3.0, 5, 5);
        assert!((r - 144.0 / 377.0).abs() < 1e-14);
        let g = gram_f64(3.0, 0, 0, 60);
        let a = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((g - 2.0 / (3.0 * a)).abs() < 1e-14);
    }
}
