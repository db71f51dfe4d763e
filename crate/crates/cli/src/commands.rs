use num_traits::Zero;
use qcayley_core::aunitary::cn_lower;
use qcayley_core::cayley::{CayleyTree, InfiniteGeodesic, WeightMode, DEFAULT_VERTEX_CAP};
use qcayley_core::estimates::{
    near_extremal_input, nonuni_norm_sq, orientation_chain_check, orientation_chain_check_with,
    random_nonneg_vectors, rd_norm_sq, toeplitz_schur_bound, truncated_toeplitz_norm,
};
use qcayley_core::fast;
use qcayley_core::fusion::{a_param, default_tolerance, parse_spec, FactorKind, QuantumGroupSpec};
use qcayley_core::qctree::{fixed_vector, gram, gram_bound, gram_psd_pivots, path_vector, telescoping_check};
use qcayley_core::scalar::{fmt_rational, int, parse_rational, to_f64, Interval, Rational};
use serde_json::json;

use crate::config::{Mode, RunConfig, Weights};
use crate::report::{fmt_hi, fmt_lo, Output, Record};
use crate::{CliError, UsageError};

pub const ANCHOR_DIMS: &str = "quantum dimension recursion";
pub const ANCHOR_TREE: &str = "classical Cayley tree";
pub const ANCHOR_PATHS: &str = "path vector preimage telescoping";
pub const ANCHOR_FIXED: &str = "fixed vector of the A_o path cocycle";
pub const ANCHOR_GRAM: &str = "A_o inverse Gram bound";
pub const ANCHOR_GROWTH: &str = "A_u cocycle norm lower bound";
pub const ANCHOR_RD: &str = "rapid decay Sobolev norm of the fixed vector";
pub const ANCHOR_NONUNI: &str = "non-unimodular weighted norm";
pub const ANCHOR_SCHUR: &str = "Toeplitz matrix a^-|k-l| boundedness";
pub const ANCHOR_CHAIN: &str = "orientation summation chain";

/// What a command produced and whether its built-in checks held.
pub struct CmdResult {
    pub output: Output,
    pub passed: bool,
}

impl CmdResult {
    fn ok(records: Vec<Record>) -> CmdResult {
        CmdResult { output: Output::Records(records), passed: true }
    }
}

fn spec_of(cfg: &RunConfig) -> Result<QuantumGroupSpec, CliError> {
    Ok(parse_spec(cfg.require_spec()?)?)
}

fn rational_arg(value: Option<&String>, name: &str) -> Result<Rational, CliError> {
    let text = value.ok_or_else(|| UsageError(format!("--{name} is required")))?;
    Ok(parse_rational(text)?)
}

fn tolerance(cfg: &RunConfig) -> Result<Rational, CliError> {
    let tol = match &cfg.tolerance {
        Some(t) => parse_rational(t)?,
        None => default_tolerance(),
    };
    if tol <= Rational::zero() {
        return Err(UsageError("--tolerance must be positive".into()).into());
    }
    Ok(tol)
}

fn require<T: Copy>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| UsageError(format!("--{name} is required")).into())
}

fn no_float(cfg: &RunConfig, cmd: &str) -> Result<(), CliError> {
    if cfg.mode() == Mode::Float {
        return Err(UsageError(format!("{cmd} has no float mode")).into());
    }
    Ok(())
}

/// Growth parameter from `--a`, or from `--dimq` through `a + 1/a = dimq`.
fn growth_arg(cfg: &RunConfig) -> Result<(Interval, String), CliError> {
    match (&cfg.a, &cfg.dimq) {
        (Some(a), None) => {
            let a = parse_rational(a)?;
            Ok((Interval::point(a.clone()), format!("a={}", fmt_rational(&a))))
        }
        (None, Some(d)) => {
            let d = parse_rational(d)?;
            let g = a_param(&d, &tolerance(cfg)?)?;
            Ok((g.a, format!("dimq={}", fmt_rational(&d))))
        }
        _ => Err(UsageError("give exactly one of --a or --dimq".into()).into()),
    }
}

pub fn dims(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    let spec = spec_of(cfg)?;
    let count = cfg.count.unwrap_or(10);
    if count == 0 {
        return Err(UsageError("--count must be at least 1".into()).into());
    }
    let values: Vec<String> = match cfg.mode() {
        Mode::Float => {
            let d = spec
                .single_orthogonal()
                .ok_or_else(|| UsageError("float dims needs a single Ao factor".into()))?;
            fast::ao_dims_f64(to_f64(d), count).iter().map(|x| format!("{x:.17e}")).collect()
        }
        Mode::Exact => {
            let geodesic = InfiniteGeodesic::canonical(&spec);
            let mut dims = vec![int(1)];
            for step in geodesic.walk(&spec)?.take(count - 1) {
                dims.push(step?.dim);
            }
            dims.iter().map(fmt_rational).collect()
        }
    };
    let spec_text = spec.to_string();
    let mut json_rows: Vec<serde_json::Value> = values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            serde_json::to_value(
                Record::new("dims", &spec_text, &format!("m_{k}"), ANCHOR_DIMS).param("k", k).text(v),
            )
            .expect("records serialize")
        })
        .collect();
    let first = spec.direction_dim(InfiniteGeodesic::canonical(&spec).cycle()[0])?.clone();
    if first >= int(2) {
        let g = a_param(&first, &tolerance(cfg)?)?;
        let rec = Record::new("dims", &spec_text, "a", ANCHOR_DIMS)
            .param("dimq", fmt_rational(&first))
            .interval(&g.a);
        json_rows.push(serde_json::to_value(rec).expect("records serialize"));
    }
    Ok(CmdResult {
        output: Output::Table {
            json: json_rows,
            header: (0..count).map(|k| format!("m{k}")).collect(),
            rows: vec![values],
        },
        passed: true,
    })
}

pub fn tree(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    no_float(cfg, "tree")?;
    let spec = spec_of(cfg)?;
    let radius = require(cfg.radius, "radius")?;
    let tree = CayleyTree::build(&spec, radius, cfg.cap.unwrap_or(DEFAULT_VERTEX_CAP))?;
    let report = tree.validate();
    for (name, detail) in &report.failures {
        eprintln!("validation failure: {name}: {detail}");
    }
    let mut json_rows = Vec::new();
    let mut rows = Vec::new();
    for (i, v) in tree.vertices().iter().enumerate() {
        let word = v.irrep.to_string();
        let dim = fmt_rational(&v.dim);
        json_rows.push(json!({"id": i, "word": word, "length": v.length, "dimq": dim, "anchor": ANCHOR_TREE}));
        rows.push(vec!["vertex".into(), i.to_string(), word, v.length.to_string(), dim, String::new(), String::new(), String::new(), String::new()]);
    }
    for e in tree.edges() {
        let dir = e.direction.to_string();
        json_rows.push(json!({"src": e.source.0, "dst": e.target.0, "dir": dir, "ascending": e.ascending, "anchor": ANCHOR_TREE}));
        rows.push(vec![
            "edge".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            e.source.0.to_string(),
            e.target.0.to_string(),
            dir,
            e.ascending.to_string(),
        ]);
    }
    let header = ["kind", "id", "word", "length", "dimq", "src", "dst", "dir", "ascending"];
    Ok(CmdResult {
        output: Output::Table { json: json_rows, header: header.map(String::from).to_vec(), rows },
        passed: report.is_ok(),
    })
}

pub fn paths(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    let spec = spec_of(cfg)?;
    let spec_text = spec.to_string();
    let radius = require(cfg.radius, "radius")?;
    let weights = cfg.weights.unwrap_or_default();
    let mode = match weights {
        Weights::Quantum => WeightMode::Quantum,
        Weights::Classical => WeightMode::Classical,
    };
    let tree = CayleyTree::build(&spec, radius, cfg.cap.unwrap_or(DEFAULT_VERTEX_CAP))?.with_weights(mode);
    let weights_name = format!("{weights:?}").to_lowercase();
    let mut records = Vec::new();
    if cfg.mode() == Mode::Float {
        let norms = fast::path_norms_f64(&tree);
        for (v, n) in tree.vertices().iter().zip(&norms) {
            records.push(
                Record::new("paths", &spec_text, "path_norm_sq", ANCHOR_PATHS)
                    .param("vertex", &v.irrep)
                    .param("weights", &weights_name)
                    .float(*n),
            );
        }
        let max = norms.iter().cloned().fold(0.0, f64::max);
        records.push(Record::new("paths", &spec_text, "max_path_norm_sq", ANCHOR_PATHS).param("radius", radius).float(max));
        return Ok(CmdResult::ok(records));
    }
    let mut max = Rational::zero();
    for v in tree.vertices() {
        let n = path_vector(&tree, &v.irrep)?
            .norm_sq_rational()
            .expect("path vectors have rational squared norms");
        records.push(
            Record::new("paths", &spec_text, "path_norm_sq", ANCHOR_PATHS)
                .param("vertex", &v.irrep)
                .param("weights", &weights_name)
                .exact(&n),
        );
        if n > max {
            max = n;
        }
    }
    records.push(Record::new("paths", &spec_text, "max_path_norm_sq", ANCHOR_PATHS).param("radius", radius).exact(&max));
    let check = telescoping_check(&tree)?;
    records.push(
        Record::new("paths", &spec_text, "telescoping_failures", ANCHOR_PATHS)
            .param("checked", check.checked)
            .text(check.failures.len())
            .status(check.is_ok()),
    );
    Ok(CmdResult { output: Output::Records(records), passed: check.is_ok() })
}

pub fn fixed_vector_cmd(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    let spec = spec_of(cfg)?;
    let spec_text = spec.to_string();
    let radius = require(cfg.radius, "radius")?;
    let geodesic = InfiniteGeodesic::canonical(&spec);
    let tree = CayleyTree::along_geodesic(&spec, &geodesic, radius)?;
    if cfg.mode() == Mode::Float {
        let norms = fast::path_norms_f64(&tree);
        let rec = Record::new("fixed-vector", &spec_text, "norm_sq", ANCHOR_FIXED)
            .param("radius", radius)
            .float(norms[radius]);
        return Ok(CmdResult::ok(vec![rec]));
    }
    let fv = fixed_vector(&tree, &geodesic, radius)?;
    let cert = |r: Record| {
        r.param("radius", radius)
            .param("ratio", fmt_hi(&fv.certificate.ratio))
            .param("crossover", fv.certificate.crossover)
    };
    let records = vec![
        cert(Record::new("fixed-vector", &spec_text, "norm_sq", ANCHOR_FIXED))
            .interval(&fv.norm_sq())
            .tail(&fv.tail),
        cert(Record::new("fixed-vector", &spec_text, "residual_plus_sq", ANCHOR_FIXED)).exact(&fv.residual_plus_sq),
        cert(Record::new("fixed-vector", &spec_text, "residual_minus_sq", ANCHOR_FIXED)).exact(&fv.residual_minus_sq),
    ];
    Ok(CmdResult::ok(records))
}

pub fn gram_cmd(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    let spec = spec_of(cfg)?;
    let spec_text = spec.to_string();
    let kmax = cfg.kmax.unwrap_or(10);
    let radius = cfg.radius.unwrap_or(2 * kmax + 40);
    let mut records = Vec::new();
    if cfg.mode() == Mode::Float {
        let d = spec
            .single_orthogonal()
            .ok_or_else(|| UsageError("gram needs a single Ao factor".into()))?;
        for k in 0..=kmax {
            for l in 0..=kmax {
                records.push(
                    Record::new("gram", &spec_text, "gram", ANCHOR_GRAM)
                        .param("k", k)
                        .param("l", l)
                        .param("radius", radius)
                        .float(fast::gram_f64(to_f64(d), k, l, radius)),
                );
            }
        }
        return Ok(CmdResult::ok(records));
    }
    let tree = CayleyTree::build(&spec, 1, DEFAULT_VERTEX_CAP)?;
    let mut window = Vec::new();
    for k in 0..=kmax {
        let mut row = Vec::new();
        for l in 0..=kmax {
            let g = gram(&tree, k, l, radius)?;
            records.push(
                Record::new("gram", &spec_text, "gram", ANCHOR_GRAM)
                    .param("k", k)
                    .param("l", l)
                    .param("radius", radius)
                    .interval(&g)
                    .tail(&g.width()),
            );
            row.push(g);
        }
        window.push(row);
    }
    let d = gram_bound(&tree, kmax)?;
    records.push(Record::new("gram", &spec_text, "gram_bound_D", ANCHOR_GRAM).param("kmax", kmax).exact(&d));
    let pivots = gram_psd_pivots(&window);
    let min_pivot = pivots.iter().min().cloned().unwrap_or_else(Rational::zero);
    let psd = min_pivot > Rational::zero();
    records.push(
        Record::new("gram", &spec_text, "min_ldl_pivot", ANCHOR_GRAM)
            .param("kmax", kmax)
            .exact(&min_pivot)
            .status(psd),
    );
    Ok(CmdResult { output: Output::Records(records), passed: psd })
}

fn single_unitary_n(spec: &QuantumGroupSpec) -> Result<u32, CliError> {
    match spec.factors() {
        [f] if f.kind == FactorKind::Unitary && f.dimq.is_integer() => f
            .dimq
            .to_integer()
            .try_into()
            .map_err(|_| UsageError("N too large".into()).into()),
        _ => Err(UsageError("growth needs a single Au(N) factor with integral N".into()).into()),
    }
}

/// Least-squares slope of `y` against `n = 1, 2, …`, exact.
fn ls_slope(y: &[Rational]) -> Rational {
    let n = int(y.len() as i64);
    let xs: Vec<Rational> = (1..=y.len()).map(|i| int(i as i64)).collect();
    let xbar = xs.iter().sum::<Rational>() / &n;
    let ybar = y.iter().sum::<Rational>() / &n;
    let sxy: Rational = xs.iter().zip(y).map(|(x, y)| (x - &xbar) * (y - &ybar)).sum();
    let sxx: Rational = xs.iter().map(|x| (x - &xbar) * (x - &xbar)).sum();
    if sxx.is_zero() {
        Rational::zero()
    } else {
        sxy / sxx
    }
}

pub fn growth_cmd(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    no_float(cfg, "growth")?;
    let spec = spec_of(cfg)?;
    let spec_text = spec.to_string();
    let n_dim = single_unitary_n(&spec)?;
    let n_max = cfg.n_max.unwrap_or(8);
    let values: Vec<Rational> = (1..=n_max).map(|n| cn_lower(n, n_dim)).collect::<Result<_, _>>()?;
    let mut json_rows = Vec::new();
    let mut rows = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let n = i + 1;
        let diff = if i > 0 { Some(v - &values[i - 1]) } else { None };
        let rec = Record::new("growth", &spec_text, "cn_lower", ANCHOR_GROWTH).param("n", n).exact(v);
        json_rows.push(serde_json::to_value(rec).expect("records serialize"));
        if let Some(d) = &diff {
            let rec = Record::new("growth", &spec_text, "first_difference", ANCHOR_GROWTH).param("n", n).exact(d);
            json_rows.push(serde_json::to_value(rec).expect("records serialize"));
        }
        rows.push(vec![n.to_string(), fmt_rational(v), diff.as_ref().map(fmt_rational).unwrap_or_default()]);
    }
    let slope = ls_slope(&values);
    let rec = Record::new("growth", &spec_text, "fitted_slope", ANCHOR_GROWTH).param("n_max", n_max).exact(&slope);
    json_rows.push(serde_json::to_value(rec).expect("records serialize"));
    Ok(CmdResult {
        output: Output::Table {
            json: json_rows,
            header: vec!["n".into(), "cn_lower".into(), "first_difference".into()],
            rows,
        },
        passed: true,
    })
}

pub fn rd_norm_cmd(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    let dimq = rational_arg(cfg.dimq.as_ref(), "dimq")?;
    let s = rational_arg(cfg.s.as_ref(), "s")?;
    let radius = cfg.radius.unwrap_or(60);
    let r = match &cfg.r {
        Some(r) => Some(parse_rational(r)?),
        None => None,
    };
    let (quantity, anchor) = match r {
        Some(_) => ("nonuni_norm_sq", ANCHOR_NONUNI),
        None => ("rd_norm_sq", ANCHOR_RD),
    };
    let base = |rec: Record| {
        let rec = rec.param("dimq", fmt_rational(&dimq)).param("s", fmt_rational(&s)).param("radius", radius);
        match &r {
            Some(r) => rec.param("r", fmt_rational(r)),
            None => rec,
        }
    };
    if cfg.mode() == Mode::Float {
        let rf = r.as_ref().map(to_f64).unwrap_or(1.0);
        let v = fast::weighted_series_f64(to_f64(&dimq), to_f64(&s), rf, radius);
        return Ok(CmdResult::ok(vec![base(Record::new("rd-norm", "", quantity, anchor)).float(v)]));
    }
    let res = match &r {
        Some(r) => nonuni_norm_sq(&s, r, &dimq, radius)?,
        None => rd_norm_sq(&dimq, &s, radius)?,
    };
    let rec = base(Record::new("rd-norm", "", quantity, anchor))
        .param("ratio", fmt_hi(&res.certificate.ratio))
        .param("crossover", res.certificate.crossover)
        .param("terms_used", res.terms_used)
        .interval(&res.enclosure())
        .tail(&res.tail_bound);
    Ok(CmdResult::ok(vec![rec]))
}

pub fn schur_cmd(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    no_float(cfg, "schur")?;
    let (a, source) = growth_arg(cfg)?;
    let size = cfg.size.unwrap_or(50);
    let schur = toeplitz_schur_bound(&a)?;
    let truncated = truncated_toeplitz_norm(&a, size)?;
    let ok = truncated.certainly_le(&schur);
    let records = vec![
        Record::new("schur", "", "schur_bound", ANCHOR_SCHUR).param("growth", &source).interval(&schur),
        Record::new("schur", "", "truncated_norm", ANCHOR_SCHUR)
            .param("growth", &source)
            .param("size", size)
            .interval(&truncated)
            .status(ok),
    ];
    Ok(CmdResult { output: Output::Records(records), passed: ok })
}

pub fn chain_check_cmd(cfg: &RunConfig) -> Result<CmdResult, CliError> {
    no_float(cfg, "chain-check")?;
    let (a, source) = growth_arg(cfg)?;
    let count = cfg.count.unwrap_or(1000);
    let max_len = cfg.max_len.unwrap_or(24);
    if max_len == 0 {
        return Err(UsageError("--max-len must be at least 1".into()).into());
    }
    let seed = cfg.seed();
    let mut passed = 0usize;
    for x in random_nonneg_vectors(seed, count, max_len) {
        if orientation_chain_check(&a, &x)?.passed() {
            passed += 1;
        }
    }
    let extremal = near_extremal_input(&a, 64);
    let rep = orientation_chain_check(&a, &extremal)?;
    let one = Interval::point(int(1));
    let control = orientation_chain_check_with(&a, &extremal, &one, &one)?;
    let all_ok = passed == count && rep.passed() && !control.passed();
    let records = vec![
        Record::new("chain-check", "", "random_vectors_passed", ANCHOR_CHAIN)
            .param("growth", &source)
            .param("seed", seed)
            .param("count", count)
            .text(passed)
            .status(passed == count),
        Record::new("chain-check", "", "near_extremal_ratio", ANCHOR_CHAIN)
            .param("growth", &source)
            .text(format!("{:.9}", rep.ratio_f64()))
            .status(rep.passed()),
        Record::new("chain-check", "", "negative_control_rejected", ANCHOR_CHAIN)
            .param("growth", &source)
            .text(!control.passed())
            .status(!control.passed()),
    ];
    Ok(CmdResult { output: Output::Records(records), passed: all_ok })
}

/// Short human-readable rendering of a rational for verify details.
pub fn show(q: &Rational) -> String {
    let lo = fmt_lo(q);
    if lo.contains('e') {
        lo
    } else {
        format!("{lo} (~{:.6e})", to_f64(q))
    }
}
