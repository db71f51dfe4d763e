//! The self-check suite behind `qcayley verify`. Every check is exact or
//! certified; the report depends only on the profile and the seed.

use num_traits::Zero;
use qcayley_core::aunitary::{cn_lower, cn_lower_enumerated, ql_norm_sq, MultiIndex};
use qcayley_core::cayley::{build_tree, CayleyTree, InfiniteGeodesic, VertexId, WeightMode};
use qcayley_core::estimates::{
    near_extremal_input, nonuni_norm_sq, orientation_chain_check, orientation_chain_check_with,
    random_nonneg_vectors, rd_norm_sq, toeplitz_schur_bound, truncated_toeplitz_norm,
};
use qcayley_core::fusion::{ao_dims, growth, parse_spec};
use qcayley_core::qctree::{
    e2, e2_inverse_ao, fixed_vector, gram, gram_bound, gram_psd_pivots, path_vector, telescoping_check,
    VertexVector,
};
use qcayley_core::scalar::{int, rat, ten_pow_neg, Interval, Rational};
use qcayley_core::{Error, Result};

use crate::commands::show;
use crate::config::Profile;
use crate::report::Record;

pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub anchor: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn record(&self, profile: Profile, seed: u64) -> Record {
        Record::new("verify", "", self.name, self.anchor)
            .param("check", self.id)
            .param("profile", format!("{profile:?}").to_lowercase())
            .param("seed", seed)
            .text(&self.detail)
            .status(self.passed)
    }
}

struct Sizes {
    tele_radius: usize,
    classical_radius: usize,
    kmax: usize,
    cn_n: usize,
    parseval_n: usize,
    parseval_dim: u32,
    chain_count: usize,
    validate_radius: usize,
}

fn sizes(profile: Profile) -> Sizes {
    match profile {
        Profile::Quick => Sizes {
            tele_radius: 6,
            classical_radius: 6,
            kmax: 10,
            cn_n: 5,
            parseval_n: 3,
            parseval_dim: 3,
            chain_count: 200,
            validate_radius: 6,
        },
        Profile::Full => Sizes {
            tele_radius: 12,
            classical_radius: 10,
            kmax: 20,
            cn_n: 8,
            parseval_n: 4,
            parseval_dim: 4,
            chain_count: 1000,
            validate_radius: 8,
        },
    }
}

const TEST_SPECS: [&str; 4] = ["Ao(3)", "Ao(4)", "Au(3)", "Ao(3)*Au(3)"];

fn outcome(id: &'static str, name: &'static str, anchor: &'static str, result: Result<(bool, String)>) -> CheckOutcome {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckOutcome { id, name, anchor, passed, detail }
}

fn big_tree(spec: &str, radius: usize) -> Result<CayleyTree> {
    CayleyTree::build(&parse_spec(spec)?, radius, 2_000_000)
}

fn telescoping(sz: &Sizes) -> Result<(bool, String)> {
    let mut checked = 0;
    let mut failures = 0;
    for s in TEST_SPECS {
        let report = telescoping_check(&big_tree(s, sz.tele_radius)?)?;
        checked += report.checked;
        failures += report.failures.len();
    }
    Ok((failures == 0, format!("radius {}: {checked} vertices, {failures} nonzero residuals", sz.tele_radius)))
}

fn boundedness(sz: &Sizes) -> Result<(bool, String)> {
    let spec = parse_spec("Ao(3)")?;
    let tree = build_tree(&spec, 12)?;
    let mut max = Rational::zero();
    for v in tree.vertices() {
        max = max.max(path_vector(&tree, &v.irrep)?.norm_sq_rational().unwrap_or_else(Rational::zero));
    }
    let geodesic = InfiniteGeodesic::canonical(&spec);
    let fv = fixed_vector(&CayleyTree::along_geodesic(&spec, &geodesic, 40)?, &geodesic, 40)?;
    let fv12 = fixed_vector(&tree, &geodesic, 12)?;
    let bounded = max < rat(2547, 10000) && fv.norm_sq_partial >= max && &fv.norm_sq_partial - &max <= fv12.tail;

    let mut classical_ok = true;
    for s in ["Ao(3)", "Au(3)"] {
        let t = build_tree(&parse_spec(s)?, sz.classical_radius)?.with_weights(WeightMode::Classical);
        for v in t.vertices() {
            let n = path_vector(&t, &v.irrep)?.norm_sq_rational();
            classical_ok &= n == Some(int(2 * v.length as i64));
        }
    }
    Ok((
        bounded && classical_ok,
        format!(
            "max |zeta|^2 = {} < 0.2547, |zeta_inf^(40)|^2 = {}; classical 2*length: {}",
            show(&max),
            show(&fv.norm_sq_partial),
            classical_ok
        ),
    ))
}

fn inverse_residuals() -> Result<(bool, String)> {
    let tree = build_tree(&parse_spec("Ao(3)")?, 31)?;
    let dims = ao_dims(&int(3), 32);
    let mut ok = true;
    for k in 0..=10 {
        let inv = e2_inverse_ao(&tree, k, 30)?;
        let residual = e2(&tree, &inv.vector)?.sub(&VertexVector::basis(VertexId(k)));
        let expected = (&dims[k] / &dims[31]).pow(2);
        ok &= residual.norm_sq_rational() == Some(expected);
    }
    Ok((ok, "k <= 10, R = 30: |E2(E2^-1 xi_k) - xi_k| = m_k/m_31 exactly".into()))
}

fn gram_check(sz: &Sizes) -> Result<(bool, String)> {
    let tree = build_tree(&parse_spec("Ao(3)")?, 1)?;
    let a = growth(&int(3))?.a;
    let radius = 2 * sz.kmax + 40;
    let mut window = Vec::new();
    let mut narrow = true;
    for k in 0..=sz.kmax {
        let row: Vec<Interval> = (0..=sz.kmax).map(|l| gram(&tree, k, l, radius)).collect::<Result<_>>()?;
        narrow &= row.iter().all(|g| g.width() < ten_pow_neg(10));
        window.push(row);
    }
    let psd = gram_psd_pivots(&window).iter().all(|p| *p > Rational::zero());
    let d = gram_bound(&tree, sz.kmax)?;
    let mut dominated = true;
    for (k, row) in window.iter().enumerate() {
        for (l, g) in row.iter().enumerate() {
            let bound = &d / num_traits::pow(a.hi().clone(), k.abs_diff(l));
            dominated &= *g.hi() <= bound;
        }
    }
    let schur = toeplitz_schur_bound(&a)?;
    let toeplitz = truncated_toeplitz_norm(&a, 50)?;
    let toeplitz_ok = toeplitz.hi() <= &(schur.lo() + ten_pow_neg(9));
    Ok((
        narrow && psd && dominated && toeplitz_ok,
        format!(
            "kmax {}: widths < 1e-10 {narrow}, PSD {psd}, D = {}, dominated {dominated}, Toeplitz(50) <= {} {toeplitz_ok}",
            sz.kmax,
            show(&d),
            show(schur.hi())
        ),
    ))
}

fn growth_check(sz: &Sizes) -> Result<(bool, String)> {
    let n_dim = 3u32;
    let step = rat(1, 2 * (n_dim * n_dim) as i64);
    let mut ok = true;
    let mut prev: Option<Rational> = None;
    for n in 1..=sz.cn_n {
        let i = MultiIndex::new(vec![1; n], n_dim)?;
        let enumerated = cn_lower_enumerated(&i, n_dim)?;
        let factorized = cn_lower(n, n_dim)?;
        ok &= enumerated == factorized;
        ok &= enumerated >= &step * int(n as i64 - 1);
        if let Some(p) = &prev {
            ok &= &enumerated - p == step;
        }
        prev = Some(enumerated);
    }
    Ok((ok, format!("N = 3, n <= {}: enumeration = closed form, step 1/18", sz.cn_n)))
}

fn parseval(sz: &Sizes) -> Result<(bool, String)> {
    let mut ok = true;
    let mut pairs = 0u64;
    for n_dim in 1..=sz.parseval_dim {
        for n in 1..=sz.parseval_n {
            let per_leg = int(n_dim as i64).recip().pow(n as i32);
            for i in MultiIndex::all(n, n_dim) {
                for k in MultiIndex::all(n, n_dim) {
                    let total: Rational = (0..=n).map(|l| ql_norm_sq(&i, &k, l, n_dim)).sum::<Result<Rational>>()?;
                    ok &= total == per_leg;
                    pairs += 1;
                }
            }
        }
    }
    Ok((ok, format!("n <= {}, N <= {}: {pairs} pairs", sz.parseval_n, sz.parseval_dim)))
}

fn rd_check() -> Result<(bool, String)> {
    let a = rd_norm_sq(&int(3), &int(3), 60)?;
    let b = rd_norm_sq(&int(3), &int(3), 120)?;
    let agree = (&b.partial - &a.partial) <= ten_pow_neg(8) && a.enclosure().overlaps(&b.enclosure());
    let nonuni = nonuni_norm_sq(&int(3), &int(2), &rat(7, 2), 80)?;
    let ok = agree && nonuni.tail_bound < ten_pow_neg(10);
    Ok((
        ok,
        format!(
            "rd(3, s=3): R=60 {} / R=120 {}; nonuni(7/2, r=2) tail {}",
            show(&a.partial),
            show(&b.partial),
            show(&nonuni.tail_bound)
        ),
    ))
}

fn chain_check(sz: &Sizes, seed: u64) -> Result<(bool, String)> {
    let growths = [Interval::point(rat(3, 2)), Interval::point(int(2)), growth(&int(3))?.a];
    let vectors = random_nonneg_vectors(seed, sz.chain_count, 24);
    let mut ok = true;
    for a in &growths {
        for x in &vectors {
            ok &= orientation_chain_check(a, x)?.passed();
        }
    }
    let a = Interval::point(int(2));
    let x = near_extremal_input(&a, 64);
    let one = Interval::point(int(1));
    let control_fails = !orientation_chain_check_with(&a, &x, &one, &one)?.passed();
    Ok((ok && control_fails, format!("{} vectors x 3 growths, negative control rejected: {control_fails}", sz.chain_count)))
}

fn dims_check(sz: &Sizes) -> Result<(bool, String)> {
    let mut ok = true;
    for d in [int(3), int(4), rat(7, 2)] {
        let a = growth(&d)?.a;
        let a_inv = a.recip();
        let denom = (&a - &a_inv).recip();
        for (k, m) in ao_dims(&d, 40).iter().enumerate() {
            let closed = &(&a.pow(k as u32 + 1) - &a_inv.pow(k as u32 + 1)) * &denom;
            let slack = closed.inflate(&ten_pow_neg(10));
            ok &= slack.contains(m);
        }
    }
    for s in TEST_SPECS {
        ok &= build_tree(&parse_spec(s)?, sz.validate_radius)?.validate().is_ok();
    }
    let gates = ["Ao(2)", "Au(2)"].iter().all(|s| {
        let spec = parse_spec(s).expect("literal spec");
        let tree = build_tree(&spec, 4).expect("small tree");
        matches!(
            fixed_vector(&tree, &InfiniteGeodesic::canonical(&spec), 3),
            Err(Error::DimqTwoExcluded { .. })
        )
    });
    let open = ["Ao(3)", "Au(3)", "Ao(5/2)"].iter().all(|s| {
        let spec = parse_spec(s).expect("literal spec");
        let tree = build_tree(&spec, 4).expect("small tree");
        fixed_vector(&tree, &InfiniteGeodesic::canonical(&spec), 3).is_ok()
    });
    Ok((ok && gates && open, format!("closed form (40 terms), bookkeeping radius {}, dimq=2 gates {gates}", sz.validate_radius)))
}

pub fn run(profile: Profile, seed: u64) -> Vec<CheckOutcome> {
    let sz = sizes(profile);
    vec![
        outcome("1", "telescoping path identity", "path vector preimage telescoping", telescoping(&sz)),
        outcome("2", "A_o boundedness vs classical properness", "A_o path cocycle is bounded", boundedness(&sz)),
        outcome("3", "inverse residuals", "A_o inverse of E2", inverse_residuals()),
        outcome("4", "Gram certification", "A_o inverse Gram bound", gram_check(&sz)),
        outcome("5", "A_u linear growth", "A_u cocycle norm lower bound", growth_check(&sz)),
        outcome("6", "Parseval in the tensor model", "q_l decomposition norms", parseval(&sz)),
        outcome("7", "rapid decay convergence", "rapid decay Sobolev norm of the fixed vector", rd_check()),
        outcome("8", "summation chain property", "orientation summation chain", chain_check(&sz, seed)),
        outcome("9", "dimension engine", "quantum dimension recursion", dims_check(&sz)),
    ]
}
