//! Certified series and inequality checks: weighted rapid-decay sums along
//! the `A_o` half-line, the Schur bound for `(a^{-|k-l|})`, and the
//! Cauchy–Schwarz summation chain with weights `a^{k-j}`.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::{CayleyTree, VertexId};
use crate::error::{Error, Result};
use crate::fusion::{growth, growth_exceeds};
use crate::scalar::{fmt_rational, from_f64, int, Interval, Rational, Surd};

/// Proof object for a geometric tail: every term from index `crossover` on
/// is at most `ratio` times its predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCertificate {
    pub ratio: Rational,
    pub crossover: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesResult {
    /// Sum of the terms `0..terms_used`.
    pub partial: Rational,
    pub tail_bound: Rational,
    pub terms_used: usize,
    pub certificate: TailCertificate,
}

impl SeriesResult {
    pub fn enclosure(&self) -> Interval {
        Interval::new(self.partial.clone(), &self.partial + &self.tail_bound)
    }
}

fn exponent_2s(s: &Rational) -> Result<u32> {
    let two_s = s * int(2);
    if !two_s.is_integer() || two_s.is_negative() {
        return Err(Error::InvalidExponent(fmt_rational(s)));
    }
    two_s
        .to_integer()
        .to_u32()
        .ok_or_else(|| Error::InvalidExponent(fmt_rational(s)))
}

/// `(2/m₁) Σ_{i=0}^{R} r^{2i+2} (i+2)^{2s} / (m_i m_{i+1})` plus a certified
/// bound on the rest. Requires the growth root `a` of `dimq` to exceed `r`.
pub fn nonuni_norm_sq(s: &Rational, r: &Rational, dimq: &Rational, radius: usize) -> Result<SeriesResult> {
    if *dimq <= int(2) {
        return Err(Error::DimqTwoExcluded { what: "weighted norm series".into() });
    }
    if !r.is_positive() {
        return Err(Error::InvalidArgument(format!("weight r = {} must be positive", fmt_rational(r))));
    }
    let e = exponent_2s(s)?;
    if !growth_exceeds(dimq, r) {
        return Err(Error::GrowthBelowWeight { r: fmt_rational(r) });
    }
    let a_lo = growth(dimq)?.lo().clone();
    if a_lo <= *r {
        return Err(Error::GrowthBelowWeight { r: fmt_rational(r) });
    }
    let r2 = r * r;
    let base = &r2 / (&a_lo * &a_lo);
    // ρ(C) = r² ((C+3)/(C+2))^{2s} / a_lo² bounds t_{i+1}/t_i for every i >= C,
    // since m_i / m_{i+2} <= 1/a² along the half-line.
    let rho = |c: usize| &base * num_traits::pow(Rational::new((c as i64 + 3).into(), (c as i64 + 2).into()), e as usize);
    let mut crossover = radius + 1;
    while rho(crossover) >= Rational::one() {
        crossover += 1;
    }
    let ratio = rho(crossover);

    let two_over_m1 = int(2) / dimq;
    let (mut m_prev, mut m_cur) = (int(1), dimq.clone());
    let mut r_pow = r2.clone();
    let mut term = |i: usize, m_prev: &Rational, m_cur: &Rational| {
        let t = &two_over_m1 * &r_pow * num_traits::pow(int(i as i64 + 2), e as usize) / (m_prev * m_cur);
        r_pow *= &r2;
        t
    };
    let mut partial = Rational::zero();
    let mut tail = Rational::zero();
    for i in 0..=crossover {
        let t = term(i, &m_prev, &m_cur);
        if i <= radius {
            partial += t;
        } else if i < crossover {
            tail += t;
        } else {
            tail += t / (int(1) - &ratio);
        }
        let next = dimq * &m_cur - &m_prev;
        m_prev = std::mem::replace(&mut m_cur, next);
    }
    Ok(SeriesResult {
        partial,
        tail_bound: tail,
        terms_used: radius + 1,
        certificate: TailCertificate { ratio, crossover },
    })
}

/// The unweighted (`r = 1`) series `(2/m₁) Σ (i+2)^{2s} / (m_i m_{i+1})`.
pub fn rd_norm_sq(dimq: &Rational, s: &Rational, radius: usize) -> Result<SeriesResult> {
    nonuni_norm_sq(s, &int(1), dimq, radius)
}

fn check_growth(a: &Interval) -> Result<()> {
    if *a.lo() <= int(1) {
        return Err(Error::InvalidArgument(format!("growth parameter must exceed 1, got {a}")));
    }
    Ok(())
}

/// Schur test bound `(1 + a⁻¹)/(1 − a⁻¹)` for the norm of `(a^{-|k-l|})`.
pub fn toeplitz_schur_bound(a: &Interval) -> Result<Interval> {
    check_growth(a)?;
    let one = Interval::point(int(1));
    let num = a + &one;
    let den = (a - &one).recip();
    Ok(&num * &den)
}

/// Enclosure of the largest eigenvalue of the `size × size` matrix
/// `(a^{-|k-l|})`. A positive approximate eigenvector comes from power
/// iteration in floating point; the Collatz–Wielandt quotients
/// `(Tx)_i / x_i` are then bounded in interval arithmetic, and their min and
/// max bracket the Perron root.
pub fn truncated_toeplitz_norm(a: &Interval, size: usize) -> Result<Interval> {
    check_growth(a)?;
    if size == 0 {
        return Err(Error::InvalidArgument("size must be at least 1".into()));
    }
    let b = a.recip();
    let mut powers = vec![Interval::point(int(1))];
    for j in 1..size {
        powers.push(&powers[j - 1] * &b);
    }

    let bf = 1.0 / a.mid_f64();
    let bf_pows: Vec<f64> = (0..size).map(|j| bf.powi(j as i32)).collect();
    let mut x = vec![1.0f64; size];
    for _ in 0..500 {
        let y: Vec<f64> = (0..size)
            .map(|i| (0..size).map(|j| bf_pows[i.abs_diff(j)] * x[j]).sum())
            .collect();
        let norm = y.iter().cloned().fold(0.0, f64::max);
        let next: Vec<f64> = y.iter().map(|v| v / norm).collect();
        let delta = next.iter().zip(&x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        x = next;
        if delta < 1e-15 {
            break;
        }
    }
    let xq: Vec<Rational> = x.iter().map(|&v| from_f64(v.max(1e-300))).collect();

    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for i in 0..size {
        let mut row = Interval::point(Rational::zero());
        for (j, xj) in xq.iter().enumerate() {
            row = &row + &powers[i.abs_diff(j)].scale(xj);
        }
        let q = row.scale(&xq[i].recip());
        lo = Some(lo.map_or(q.lo().clone(), |v| v.min(q.lo().clone())));
        hi = Some(hi.map_or(q.hi().clone(), |v| v.max(q.hi().clone())));
    }
    Ok(Interval::new(lo.unwrap(), hi.unwrap()))
}

/// Outcome of the summation-chain check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    /// Indices `k` at which the local inequality was not certified.
    pub local_failures: Vec<usize>,
    pub aggregate_first_ok: bool,
    pub aggregate_second_ok: bool,
    /// `Σ_k S_k²` enclosed, with `S_k = Σ_{j>=k} a^{k-j} x_j`.
    pub lhs: Interval,
    /// `c_aggregate · Σ_j x_j²`.
    pub rhs: Interval,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.local_failures.is_empty() && self.aggregate_first_ok && self.aggregate_second_ok
    }

    /// `lhs / rhs`, midpoint estimate (how close the input is to extremal).
    pub fn ratio_f64(&self) -> f64 {
        let r = self.rhs.mid_f64();
        if r == 0.0 {
            0.0
        } else {
            self.lhs.mid_f64() / r
        }
    }
}

/// Checks, for every `k`,
/// `(Σ_{j>=k} a^{k-j} x_j)² <= c · Σ_{j>=k} a^{k-j} x_j²` and the aggregate
/// `Σ_k (Σ_{j>=k} a^{k-j} x_j)² <= c Σ_k Σ_{j>=k} a^{k-j} x_j² <= c² Σ_j x_j²`
/// with `c = 1/(1 − a⁻¹)`. Each inequality must be certified: the upper end
/// of the left side below the lower end of the right side.
pub fn orientation_chain_check(a: &Interval, x: &[Rational]) -> Result<ChainReport> {
    check_growth(a)?;
    let b = a.recip();
    let one = Interval::point(int(1));
    let c = (&one - &b).recip();
    let c2 = &c * &c;
    orientation_chain_check_with(a, x, &c, &c2)
}

/// [`orientation_chain_check`] with explicit constants, for negative
/// controls.
pub fn orientation_chain_check_with(
    a: &Interval,
    x: &[Rational],
    c_local: &Interval,
    c_aggregate: &Interval,
) -> Result<ChainReport> {
    check_growth(a)?;
    if let Some(p) = x.iter().position(|v| v.is_negative()) {
        return Err(Error::NegativeEntry(p));
    }
    let b = a.recip();
    let n = x.len();
    let zero = Interval::point(Rational::zero());
    let mut s = vec![zero.clone(); n + 1];
    let mut t = vec![zero.clone(); n + 1];
    for k in (0..n).rev() {
        let xk = Interval::around(&x[k]);
        let xk2 = Interval::around(&(&x[k] * &x[k]));
        s[k] = &xk + &(&b * &s[k + 1]);
        t[k] = &xk2 + &(&b * &t[k + 1]);
    }
    let mut local_failures = Vec::new();
    let mut lhs = zero.clone();
    let mut mid = zero.clone();
    for k in 0..n {
        let sk2 = &s[k] * &s[k];
        let bound = c_local * &t[k];
        if !sk2.certainly_le(&bound) {
            local_failures.push(k);
        }
        lhs = &lhs + &sk2;
        mid = &mid + &t[k];
    }
    let mid = c_local * &mid;
    let x_sq: Rational = x.iter().map(|v| v * v).sum();
    let rhs = c_aggregate.scale(&x_sq);
    Ok(ChainReport {
        local_failures,
        aggregate_first_ok: lhs.certainly_le(&mid),
        aggregate_second_ok: mid.certainly_le(&rhs),
        lhs,
        rhs,
    })
}

/// `x_j ≈ a^{-j/2}` (rational approximations), `j < len`: close to extremal
/// for the chain inequality.
pub fn near_extremal_input(a: &Interval, len: usize) -> Vec<Rational> {
    let af = a.mid_f64();
    (0..len).map(|j| from_f64(af.powf(-(j as f64) / 2.0))).collect()
}

/// Seeded sparse nonnegative rational vectors for property sweeps.
pub fn random_nonneg_vectors(seed: u64, count: usize, max_len: usize) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        Rational::zero()
                    } else {
                        Rational::new(rng.gen_range(0..=1000i64).into(), rng.gen_range(1..=97i64).into())
                    }
                })
                .collect()
        })
        .collect()
}

/// `sqrt(m_l m_{l-1} / (m_j m_{j+1}))` on the `A_o` half-line.
pub fn s_norm_ratio(tree: &CayleyTree, l: usize, j: usize) -> Result<Surd> {
    if tree.spec().single_orthogonal().is_none() {
        return Err(Error::NotSingleOrthogonal("s_norm_ratio".into()));
    }
    if l == 0 || l > j + 1 {
        return Err(Error::IndexOutOfRange(format!("need 1 <= l <= j + 1, got l = {l}, j = {j}")));
    }
    if j + 1 > tree.radius() {
        return Err(Error::RadiusExceeded { requested: j + 1, radius: tree.radius() });
    }
    let m = |i: usize| tree.weight(VertexId(i));
    Ok(Surd::sqrt(m(l) * m(l - 1) / (m(j) * m(j + 1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_tree;
    use crate::fusion::parse_spec;
    use crate::scalar::rat;

    #[test]
    fn rd_series_gates_and_stability() {
        assert!(matches!(rd_norm_sq(&int(2), &int(3), 10), Err(Error::DimqTwoExcluded { .. })));
        assert!(matches!(rd_norm_sq(&int(3), &rat(1, 3), 10), Err(Error::InvalidExponent(_))));
        let a = rd_norm_sq(&int(3), &int(3), 60).unwrap();
        let b = rd_norm_sq(&int(3), &int(3), 120).unwrap();
        assert!(a.tail_bound < rat(1, 1_000_000_000_000));
        assert!(a.enclosure().contains(&b.partial));
        assert!(a.certificate.ratio < int(1));
    }

    #[test]
    fn rd_s0_matches_unweighted_sum() {
        let res = rd_norm_sq(&int(3), &int(0), 40).unwrap();
        let dims = crate::fusion::ao_dims(&int(3), 42);
        let direct: Rational = (0..=40).map(|i| int(4) * (&dims[i] * &dims[i + 1]).recip()).sum::<Rational>() * rat(2, 3) / int(4);
        assert_eq!(res.partial, direct);
    }

    #[test]
    fn nonuni_gate() {
        assert!(matches!(
            nonuni_norm_sq(&int(3), &int(3), &int(3), 10),
            Err(Error::GrowthBelowWeight { .. })
        ));
        let res = nonuni_norm_sq(&int(3), &int(2), &rat(7, 2), 80).unwrap();
        assert!(res.tail_bound < rat(1, 10_000_000_000));
    }

    #[test]
    fn schur_and_truncated() {
        let a = Interval::point(int(2));
        let schur = toeplitz_schur_bound(&a).unwrap();
        assert_eq!(schur, Interval::point(int(3)));
        let t1 = truncated_toeplitz_norm(&a, 1).unwrap();
        assert!(t1.contains(&int(1)));
        let t50 = truncated_toeplitz_norm(&a, 50).unwrap();
        assert!(t50.certainly_le(&schur));
        assert!(t50.width() < rat(1, 1_000_000));
        assert!(toeplitz_schur_bound(&Interval::point(int(1))).is_err());
    }

    #[test]
    fn chain_basic() {
        let a = Interval::point(int(2));
        let rep = orientation_chain_check(&a, &[int(1), int(0), int(0)]).unwrap();
        assert!(rep.passed());
        assert!(matches!(orientation_chain_check(&a, &[int(-1)]), Err(Error::NegativeEntry(0))));
        let x = near_extremal_input(&a, 60);
        let rep = orientation_chain_check(&a, &x).unwrap();
        assert!(rep.passed());
        assert!(rep.ratio_f64() > 0.5);
        let one = Interval::point(int(1));
        assert!(!orientation_chain_check_with(&a, &x, &one, &one).unwrap().passed());
    }

    #[test]
    fn random_vectors_are_deterministic() {
        assert_eq!(random_nonneg_vectors(7, 5, 10), random_nonneg_vectors(7, 5, 10));
        assert_ne!(random_nonneg_vectors(7, 5, 10), random_nonneg_vectors(8, 5, 10));
    }

    #[test]
    fn s_ratio_values() {
        let t = build_tree(&parse_spec("Ao(3)").unwrap(), 10).unwrap();
        assert_eq!(s_norm_ratio(&t, 1, 1).unwrap().square().to_rational(), Some(rat(1, 8)));
        for j in 0..9 {
            assert_eq!(s_norm_ratio(&t, j + 1, j).unwrap().to_rational(), Some(int(1)));
        }
        assert!(s_norm_ratio(&t, 0, 1).is_err());
        assert!(s_norm_ratio(&t, 1, 10).is_err());
    }
}
