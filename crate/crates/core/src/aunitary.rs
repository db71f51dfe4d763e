//! Tensor-power model for `A_u(I_N)`: norms of the `q_l` components of the
//! matrix units `u_{i̲k̲}`, the `η`-chain norms and the resulting two-sided
//! bounds on `||c_g||²`, and the linear growth of the lower bound in `n`.
//!
//! Only squared norms are materialised. Everything is an exact rational.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Rational};

/// A multi-index `(i_1, …, i_n)` with entries in `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>, n_dim: u32) -> Result<MultiIndex> {
        if let Some(p) = entries.iter().position(|&e| e == 0 || e > n_dim) {
            return Err(Error::IndexOutOfRange(format!(
                "entry {} at position {} not in 1..={n_dim}",
                entries[p],
                p + 1
            )));
        }
        Ok(MultiIndex { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All `N^n` multi-indices in lexicographic order.
    pub fn all(n: usize, n_dim: u32) -> impl Iterator<Item = MultiIndex> {
        let total = (n_dim as u64).pow(n as u32);
        (0..total).map(move |mut code| {
            let mut entries = vec![0u32; n];
            for slot in entries.iter_mut().rev() {
                *slot = (code % n_dim as u64) as u32 + 1;
                code /= n_dim as u64;
            }
            MultiIndex { entries }
        })
    }
}

/// Split of one leg `e_i e_k*` into its scalar and traceless parts, squared
/// normalised Hilbert–Schmidt norms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegDecomposition {
    pub scalar_part_sq: Rational,
    pub traceless_part_sq: Rational,
}

pub fn leg_decomposition(i: u32, k: u32, n_dim: u32) -> LegDecomposition {
    let m = int(n_dim as i64);
    let delta = if i == k { int(1) } else { Rational::zero() };
    let scalar_part_sq = &delta / (&m * &m);
    LegDecomposition { traceless_part_sq: m.recip() - &scalar_part_sq, scalar_part_sq }
}

fn check_n_dim(n_dim: u32, what: &str) -> Result<()> {
    match n_dim {
        2 => Err(Error::DimqTwoExcluded { what: what.into() }),
        0 | 1 => Err(Error::DimqBelowThree { what: what.into(), dimq: n_dim.to_string() }),
        _ => Ok(()),
    }
}

/// `||q_l(u_{i̲k̲})||²`. Legs `p < l` are unconstrained, leg `l` is traceless,
/// legs `p > l` are scalar; `l = 0` is the fully scalar component.
pub fn ql_norm_sq(i: &MultiIndex, k: &MultiIndex, l: usize, n_dim: u32) -> Result<Rational> {
    if i.len() != k.len() {
        return Err(Error::LengthMismatch(format!("|i| = {}, |k| = {}", i.len(), k.len())));
    }
    let n = i.len();
    if l > n {
        return Err(Error::IndexOutOfRange(format!("l = {l} > n = {n}")));
    }
    let m_inv = int(n_dim as i64).recip();
    let mut acc = Rational::one();
    for (p, (&ip, &kp)) in i.entries.iter().zip(&k.entries).enumerate() {
        let leg = leg_decomposition(ip, kp, n_dim);
        let pos = p + 1;
        let factor = match pos.cmp(&l) {
            std::cmp::Ordering::Less => m_inv.clone(),
            std::cmp::Ordering::Equal => leg.traceless_part_sq,
            std::cmp::Ordering::Greater => leg.scalar_part_sq,
        };
        if factor.is_zero() {
            return Ok(Rational::zero());
        }
        acc *= factor;
    }
    Ok(acc)
}

/// Number of `k̲` with `k_l ≠ i_l` and `k_p = i_p` for `p > l`, the pattern on
/// which `||q_l(u_{i̲k̲})||² = N^{l-2n}`.
pub fn special_pattern_count(l: usize, n_dim: u32) -> u64 {
    if l == 0 {
        return 0;
    }
    (n_dim as u64 - 1) * (n_dim as u64).pow(l as u32 - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaChain {
    pub n: usize,
    pub l: usize,
    /// `||η_i||²` for `i = 1..=n-l+1`, per unit `||ζ||²`.
    pub norms_sq: Vec<Rational>,
}

pub fn eta_chain(n: usize, l: usize, n_dim: u32) -> Result<EtaChain> {
    check_n_dim(n_dim, "eta chain")?;
    if l > n {
        return Err(Error::IndexOutOfRange(format!("l = {l} > n = {n}")));
    }
    let m2 = int(n_dim as i64 * n_dim as i64);
    let norms_sq = (0..=(n - l)).map(|e| num_traits::pow(m2.clone(), e)).collect();
    Ok(EtaChain { n, l, norms_sq })
}

/// `(lower, upper)` with `lower = ½ Σ_{i=1}^{n-l} N^{2(i-1)}` and `upper`
/// adding the full norm of the last chain element.
pub fn cg_bounds(n: usize, l: usize, n_dim: u32) -> Result<(Rational, Rational)> {
    let chain = eta_chain(n, l, n_dim)?;
    let (last, head) = chain.norms_sq.split_last().expect("chain is nonempty");
    let lower = head.iter().fold(Rational::zero(), |acc, x| acc + x) / int(2);
    let upper = &lower + last;
    Ok((lower, upper))
}

/// `Σ_{k̲} Σ_l cg_lower(n,l) ||q_l(u_{i̲k̲})||²`, evaluated by summing each
/// leg factor over its `N` values (the sum over `k̲` of a product of per-leg
/// factors is the product of per-leg sums).
pub fn cn_lower(n: usize, n_dim: u32) -> Result<Rational> {
    check_n_dim(n_dim, "cn_lower")?;
    if n == 0 {
        return Err(Error::InvalidArgument("cn_lower needs n >= 1".into()));
    }
    let m2_inv = int(n_dim as i64 * n_dim as i64).recip();
    let mut total = Rational::zero();
    for l in 0..=n {
        let (lower, _) = cg_bounds(n, l, n_dim)?;
        let summed = if l == 0 {
            num_traits::pow(m2_inv.clone(), n)
        } else {
            (int(1) - &m2_inv) * num_traits::pow(m2_inv.clone(), n - l)
        };
        total += lower * summed;
    }
    Ok(total)
}

/// Same quantity by enumerating all `N^n` multi-indices `k̲` for the given
/// `i̲`.
pub fn cn_lower_enumerated(i: &MultiIndex, n_dim: u32) -> Result<Rational> {
    check_n_dim(n_dim, "cn_lower")?;
    let n = i.len();
    if n == 0 {
        return Err(Error::InvalidArgument("cn_lower needs n >= 1".into()));
    }
    let lowers: Vec<Rational> = (0..=n).map(|l| cg_bounds(n, l, n_dim).map(|b| b.0)).collect::<Result<_>>()?;
    let mut total = Rational::zero();
    for k in MultiIndex::all(n, n_dim) {
        for (l, lower) in lowers.iter().enumerate() {
            if lower.is_zero() {
                continue;
            }
            total += lower * ql_norm_sq(i, &k, l, n_dim)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn mi(v: &[u32], n: u32) -> MultiIndex {
        MultiIndex::new(v.to_vec(), n).unwrap()
    }

    #[test]
    fn special_value_and_zero_pattern() {
        let v = ql_norm_sq(&mi(&[1, 1], 3), &mi(&[1, 2], 3), 2, 3).unwrap();
        assert_eq!(v, rat(1, 9));
        assert_eq!(ql_norm_sq(&mi(&[1, 1], 3), &mi(&[2, 1], 3), 0, 3).unwrap(), int(0));
        assert_eq!(ql_norm_sq(&mi(&[1, 1], 3), &mi(&[1, 2], 3), 1, 3).unwrap(), int(0));
    }

    #[test]
    fn parseval_small() {
        let i = mi(&[1, 1], 3);
        let s: Rational = (0..=2).map(|l| ql_norm_sq(&i, &i, l, 3).unwrap()).sum();
        assert_eq!(s, rat(1, 9));
    }

    #[test]
    fn errors() {
        assert!(MultiIndex::new(vec![0], 3).is_err());
        assert!(MultiIndex::new(vec![4], 3).is_err());
        assert!(matches!(
            ql_norm_sq(&mi(&[1], 3), &mi(&[1, 1], 3), 0, 3),
            Err(Error::LengthMismatch(_))
        ));
        assert!(matches!(ql_norm_sq(&mi(&[1], 3), &mi(&[1], 3), 2, 3), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(cg_bounds(2, 1, 2), Err(Error::DimqTwoExcluded { .. })));
        assert!(matches!(cn_lower(2, 2), Err(Error::DimqTwoExcluded { .. })));
    }

    #[test]
    fn cg_bound_values() {
        assert_eq!(cg_bounds(3, 1, 3).unwrap(), (int(5), int(86)));
        assert_eq!(cg_bounds(1, 0, 3).unwrap(), (rat(1, 2), rat(19, 2)));
        assert_eq!(cg_bounds(4, 4, 3).unwrap().0, int(0));
        for n in 0..8 {
            for l in 0..=n {
                let m2 = int(9);
                let closed = (num_traits::pow(m2.clone(), n - l) - int(1)) / (int(2) * (m2 - int(1)));
                assert_eq!(cg_bounds(n, l, 3).unwrap().0, closed);
            }
        }
        let chain = eta_chain(3, 1, 3).unwrap();
        assert_eq!(chain.norms_sq, vec![int(1), int(9), int(81)]);
    }

    #[test]
    fn cn_lower_values() {
        assert_eq!(cn_lower(1, 3).unwrap(), rat(1, 18));
        assert_eq!(cn_lower(2, 3).unwrap(), rat(1, 9));
        assert_eq!(cn_lower(3, 3).unwrap(), rat(1, 6));
        for n in 1..=3 {
            for i in MultiIndex::all(n, 3) {
                assert_eq!(cn_lower_enumerated(&i, 3).unwrap(), cn_lower(n, 3).unwrap());
            }
        }
    }

    #[test]
    fn pattern_count_matches_enumeration() {
        let i = mi(&[2, 1, 3], 3);
        for l in 1..=3 {
            let count = MultiIndex::all(3, 3)
                .filter(|k| ql_norm_sq(&i, k, l, 3).unwrap() == num_traits::pow(rat(1, 3), 6 - l))
                .count() as u64;
            assert_eq!(count, special_pattern_count(l, 3), "l = {l}");
        }
    }
}
