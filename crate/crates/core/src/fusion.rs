//! Irreducible labels of free products of `A_o` / `A_u` factors, their free
//! fusion with the generating corepresentations, and exact quantum
//! dimensions.
//!
//! Irreducibles are reduced words: alternating letters from distinct factors.
//! An orthogonal letter is the `k`-th irreducible (`k >= 1`) of its factor; a
//! unitary letter is a nonempty word over `u`, `ū`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, int, parse_rational, ten_pow_neg, Interval, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Orthogonal,
    Unitary,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorSpec {
    pub kind: FactorKind,
    /// Quantum dimension of the generating corepresentation.
    pub dimq: Rational,
}

impl FactorSpec {
    pub fn new(kind: FactorKind, dimq: Rational) -> Result<Self> {
        if dimq < int(1) {
            return Err(Error::DimqBelowOne(fmt_rational(&dimq)));
        }
        Ok(FactorSpec { kind, dimq })
    }

    pub fn orthogonal(dimq: Rational) -> Result<Self> {
        Self::new(FactorKind::Orthogonal, dimq)
    }

    pub fn unitary(dimq: Rational) -> Result<Self> {
        Self::new(FactorKind::Unitary, dimq)
    }
}

impl fmt::Display for FactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            FactorKind::Orthogonal => "Ao",
            FactorKind::Unitary => "Au",
        };
        write!(f, "{name}({})", fmt_rational(&self.dimq))
    }
}

/// A free product of universal orthogonal / unitary discrete quantum groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantumGroupSpec {
    factors: Vec<FactorSpec>,
}

impl QuantumGroupSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty factor list".into() });
        }
        Ok(QuantumGroupSpec { factors })
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> Option<&FactorSpec> {
        self.factors.get(index)
    }

    /// Generating directions: one per orthogonal factor, `γ` and `γ̄` per
    /// unitary factor.
    pub fn directions(&self) -> Vec<Direction> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            out.push(Direction { factor: i, conj: false });
            if f.kind == FactorKind::Unitary {
                out.push(Direction { factor: i, conj: true });
            }
        }
        out
    }

    pub fn check_direction(&self, d: Direction) -> Result<&FactorSpec> {
        match self.factors.get(d.factor) {
            Some(f) if !(d.conj && f.kind == FactorKind::Orthogonal) => Ok(f),
            _ => Err(Error::UnknownDirection(d.to_string())),
        }
    }

    pub fn direction_dim(&self, d: Direction) -> Result<&Rational> {
        self.check_direction(d).map(|f| &f.dimq)
    }

    /// `Some(dimq)` when the free product is a single orthogonal factor.
    pub fn single_orthogonal(&self) -> Option<&Rational> {
        match self.factors.as_slice() {
            [f] if f.kind == FactorKind::Orthogonal => Some(&f.dimq),
            _ => None,
        }
    }
}

impl fmt::Display for QuantumGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for QuantumGroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

/// Parses `Factor ("*" Factor)*` with `Factor = Ao(<rational>) | Au(<rational>)`.
pub fn parse_spec(text: &str) -> Result<QuantumGroupSpec> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };

    let mut factors = Vec::new();
    loop {
        skip_ws(&mut pos);
        let kind = if text[pos..].starts_with("Ao") {
            FactorKind::Orthogonal
        } else if text[pos..].starts_with("Au") {
            FactorKind::Unitary
        } else {
            return Err(err(pos, "expected `Ao(` or `Au(`"));
        };
        pos += 2;
        skip_ws(&mut pos);
        if bytes.get(pos) != Some(&b'(') {
            return Err(err(pos, "expected `(`"));
        }
        pos += 1;
        let start = pos;
        let close = text[pos..]
            .find(')')
            .map(|o| pos + o)
            .ok_or_else(|| err(text.len(), "missing `)`"))?;
        let dimq = parse_rational(&text[start..close])
            .map_err(|_| err(start, "expected a rational quantum dimension"))?;
        if dimq < int(1) {
            return Err(Error::DimqBelowOne(fmt_rational(&dimq)));
        }
        factors.push(FactorSpec { kind, dimq });
        pos = close + 1;
        skip_ws(&mut pos);
        match bytes.get(pos) {
            None => break,
            Some(b'*') => pos += 1,
            Some(_) => return Err(err(pos, "expected `*` or end of input")),
        }
    }
    QuantumGroupSpec::new(factors)
}

/// A generating direction: the fundamental corepresentation of a factor, or
/// its conjugate for unitary factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    pub factor: usize,
    pub conj: bool,
}

impl Direction {
    pub fn new(factor: usize, conj: bool) -> Self {
        Direction { factor, conj }
    }

    /// Dual direction inside `spec` (orthogonal generators are self-dual).
    pub fn dual(self, spec: &QuantumGroupSpec) -> Direction {
        match spec.factor(self.factor).map(|f| f.kind) {
            Some(FactorKind::Unitary) => Direction { factor: self.factor, conj: !self.conj },
            _ => self,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}{}", self.factor, if self.conj { "*" } else { "" })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownDirection(s.to_string());
        let rest = s.trim().strip_prefix('g').ok_or_else(bad)?;
        let (digits, conj) = match rest.strip_suffix('*') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let factor = digits.parse().map_err(|_| bad())?;
        Ok(Direction { factor, conj })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitSym {
    U,
    UBar,
}

impl UnitSym {
    pub fn bar(self) -> UnitSym {
        match self {
            UnitSym::U => UnitSym::UBar,
            UnitSym::UBar => UnitSym::U,
        }
    }

    fn from_conj(conj: bool) -> UnitSym {
        if conj {
            UnitSym::UBar
        } else {
            UnitSym::U
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Orth(u32),
    Unit(Vec<UnitSym>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub factor: usize,
    pub symbol: Symbol,
}

impl Letter {
    pub fn orth(factor: usize, k: u32) -> Letter {
        Letter { factor, symbol: Symbol::Orth(k) }
    }

    pub fn unit(factor: usize, word: Vec<UnitSym>) -> Letter {
        Letter { factor, symbol: Symbol::Unit(word) }
    }

    pub fn length(&self) -> usize {
        match &self.symbol {
            Symbol::Orth(k) => *k as usize,
            Symbol::Unit(w) => w.len(),
        }
    }
}

/// A reduced word labelling an irreducible corepresentation; the empty word
/// is the trivial corepresentation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Irrep {
    letters: Vec<Letter>,
}

impl Irrep {
    pub fn trivial() -> Irrep {
        Irrep { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Irrep {
        Irrep { letters }
    }

    /// `k`-th irreducible of orthogonal factor `factor`.
    pub fn orth(factor: usize, k: u32) -> Irrep {
        if k == 0 {
            return Irrep::trivial();
        }
        Irrep { letters: vec![Letter::orth(factor, k)] }
    }

    /// Parses a unitary word written with `u` and `U` (= ū) in `factor`.
    pub fn unit(factor: usize, word: &str) -> Result<Irrep> {
        let syms = parse_unit_word(word)?;
        if syms.is_empty() {
            return Ok(Irrep::trivial());
        }
        Ok(Irrep { letters: vec![Letter::unit(factor, syms)] })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    /// Checks alternation, non-triviality of letters and factor kinds.
    pub fn validate(&self, spec: &QuantumGroupSpec) -> Result<()> {
        let bad = || Error::InvalidIrrep(self.to_string());
        for (i, letter) in self.letters.iter().enumerate() {
            let factor = spec.factor(letter.factor).ok_or_else(bad)?;
            match (&letter.symbol, factor.kind) {
                (Symbol::Orth(k), FactorKind::Orthogonal) if *k >= 1 => {}
                (Symbol::Unit(w), FactorKind::Unitary) if !w.is_empty() => {}
                _ => return Err(bad()),
            }
            if i > 0 && self.letters[i - 1].factor == letter.factor {
                return Err(bad());
            }
        }
        Ok(())
    }

    fn with_last(&self, last: Option<Letter>) -> Irrep {
        let mut letters = self.letters[..self.letters.len() - 1].to_vec();
        letters.extend(last);
        Irrep { letters }
    }

    fn with_appended(&self, letter: Letter) -> Irrep {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Irrep { letters }
    }
}

fn parse_unit_word(word: &str) -> Result<Vec<UnitSym>> {
    word.chars()
        .map(|c| match c {
            'u' => Ok(UnitSym::U),
            'U' => Ok(UnitSym::UBar),
            _ => Err(Error::InvalidIrrep(word.to_string())),
        })
        .collect()
}

/// Text form: `1` for the trivial irrep, otherwise letters joined by `.`,
/// each `<factor>:<k>` (orthogonal) or `<factor>:<word>` (unitary, `U` = ū).
impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            match &letter.symbol {
                Symbol::Orth(k) => write!(f, "{}:{k}", letter.factor)?,
                Symbol::Unit(w) => {
                    write!(f, "{}:", letter.factor)?;
                    for s in w {
                        write!(f, "{}", if *s == UnitSym::U { 'u' } else { 'U' })?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Irrep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "1" || t.is_empty() {
            return Ok(Irrep::trivial());
        }
        let bad = || Error::InvalidIrrep(s.to_string());
        let letters = t
            .split('.')
            .map(|part| {
                let (factor, sym) = part.split_once(':').ok_or_else(bad)?;
                let factor: usize = factor.parse().map_err(|_| bad())?;
                if sym.chars().all(|c| c.is_ascii_digit()) {
                    let k: u32 = sym.parse().map_err(|_| bad())?;
                    Ok(Letter::orth(factor, k))
                } else {
                    Ok(Letter::unit(factor, parse_unit_word(sym)?))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Irrep { letters })
    }
}

/// The growth parameter `a >= 1` with `a + 1/a = dimq`, as a certified
/// interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthParam {
    pub dimq: Rational,
    pub a: Interval,
}

impl GrowthParam {
    pub fn lo(&self) -> &Rational {
        self.a.lo()
    }

    pub fn hi(&self) -> &Rational {
        self.a.hi()
    }
}

/// Default interval width for the growth parameter.
pub fn default_tolerance() -> Rational {
    ten_pow_neg(30)
}

/// Larger root of `a^2 - dimq a + 1 = 0`, by bisection with dyadic
/// midpoints down to width `tol`.
pub fn a_param(dimq: &Rational, tol: &Rational) -> Result<GrowthParam> {
    let two = int(2);
    if dimq < &two {
        return Err(Error::NoGrowthRoot(fmt_rational(dimq)));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if dimq == &two {
        return Ok(GrowthParam { dimq: dimq.clone(), a: Interval::point(int(1)) });
    }
    let f = |x: &Rational| x * x - dimq * x + int(1);
    // f(dimq/2) = 1 - dimq^2/4 < 0 and f(dimq) = 1 > 0.
    let mut lo = dimq / &two;
    let mut hi = dimq.clone();
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        let v = f(&mid);
        if v.is_zero() {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(GrowthParam { dimq: dimq.clone(), a: Interval::new(lo, hi) })
}

/// `a_param` at the default width.
pub fn growth(dimq: &Rational) -> Result<GrowthParam> {
    a_param(dimq, &default_tolerance())
}

/// `m_0 = 1, m_1 = dimq, m_{k+1} = dimq m_k - m_{k-1}`; `count` terms.
pub fn ao_dims(dimq: &Rational, count: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    for k in 0..count {
        let next = match k {
            0 => Rational::one(),
            1 => dimq.clone(),
            _ => dimq * &out[k - 1] - &out[k - 2],
        };
        out.push(next);
    }
    out
}

/// Dimension of a unitary word over `u`, `ū` with generator dimension `n`:
/// `m_{ws} = m_w n - m_{w'} [w = w' s̄]`.
pub fn unit_word_dim(n: &Rational, word: &[UnitSym]) -> Rational {
    // prefix[j] = dimension of word[..j]
    let mut prefix: Vec<Rational> = Vec::with_capacity(word.len() + 1);
    prefix.push(Rational::one());
    for j in 0..word.len() {
        let mut next = &prefix[j] * n;
        if j > 0 && word[j - 1] == word[j].bar() {
            next -= &prefix[j - 1];
        }
        prefix.push(next);
    }
    prefix.pop().unwrap()
}

pub fn letter_dim(spec: &QuantumGroupSpec, letter: &Letter) -> Rational {
    let dimq = &spec.factors[letter.factor].dimq;
    match &letter.symbol {
        Symbol::Orth(k) => ao_dims(dimq, *k as usize + 1).pop().unwrap(),
        Symbol::Unit(w) => unit_word_dim(dimq, w),
    }
}

/// Quantum dimension: the product of the letter dimensions.
pub fn quantum_dim(spec: &QuantumGroupSpec, alpha: &Irrep) -> Rational {
    alpha
        .letters
        .iter()
        .map(|l| letter_dim(spec, l))
        .fold(Rational::one(), |acc, m| acc * m)
}

/// Irreducible summands of `alpha ⊗ γ_d`: the ascending one first, then the
/// descending one when the last letter of `alpha` absorbs the generator.
pub fn fuse_generator(spec: &QuantumGroupSpec, alpha: &Irrep, d: Direction) -> Result<Vec<Irrep>> {
    let factor = spec.check_direction(d)?;
    let last = alpha.letters.last().filter(|l| l.factor == d.factor);
    let Some(last) = last else {
        let letter = match factor.kind {
            FactorKind::Orthogonal => Letter::orth(d.factor, 1),
            FactorKind::Unitary => Letter::unit(d.factor, vec![UnitSym::from_conj(d.conj)]),
        };
        return Ok(vec![alpha.with_appended(letter)]);
    };
    let mut out = Vec::with_capacity(2);
    match &last.symbol {
        Symbol::Orth(k) => {
            out.push(alpha.with_last(Some(Letter::orth(d.factor, k + 1))));
            let down = (k - 1 > 0).then(|| Letter::orth(d.factor, k - 1));
            out.push(alpha.with_last(down));
        }
        Symbol::Unit(w) => {
            let s = UnitSym::from_conj(d.conj);
            let mut up = w.clone();
            up.push(s);
            out.push(alpha.with_last(Some(Letter::unit(d.factor, up))));
            if w.last() == Some(&s.bar()) {
                let down = &w[..w.len() - 1];
                let down = (!down.is_empty()).then(|| Letter::unit(d.factor, down.to_vec()));
                out.push(alpha.with_last(down));
            }
        }
    }
    Ok(out)
}

/// Word reversal with letterwise duals (orthogonal letters are self-dual,
/// unitary words are reversed and barred).
pub fn dual(alpha: &Irrep) -> Irrep {
    let letters = alpha
        .letters
        .iter()
        .rev()
        .map(|l| match &l.symbol {
            Symbol::Orth(k) => Letter::orth(l.factor, *k),
            Symbol::Unit(w) => Letter::unit(l.factor, w.iter().rev().map(|s| s.bar()).collect()),
        })
        .collect();
    Irrep { letters }
}

/// Number of generator steps from the trivial irrep.
pub fn length(alpha: &Irrep) -> usize {
    alpha.letters.iter().map(Letter::length).sum()
}

/// Checks `m_{k-1} / m_j <= a^{-(j-k)}` for `1 <= k`, `k - 1 <= j <= jmax`,
/// using the upper end of `a` (which only strengthens the claim).
pub fn dimension_domination_holds(dimq: &Rational, jmax: usize) -> Result<bool> {
    let g = growth(dimq)?;
    let dims = ao_dims(dimq, jmax + 1);
    let a_hi = g.hi();
    for k in 1..=jmax {
        for j in (k - 1)..=jmax {
            let ratio = &dims[k - 1] / &dims[j];
            let ok = if j + 1 == k {
                // a^{1} >= 1 >= m_{k-1}/m_{k-1}
                ratio <= int(1)
            } else {
                ratio * num_traits::pow(a_hi.clone(), j - k) <= int(1)
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `F = diag(q, 1, 1/q)` data: `(Tr F, ||F||)`.
pub fn diag_f_params(q: &Rational) -> (Rational, Rational) {
    let tr = q + int(1) + q.recip();
    let norm = if q >= &int(1) { q.clone() } else { q.recip() };
    (tr, norm)
}

/// `true` exactly when the growth root of `dimq` exceeds `r > 0`:
/// for `r >= 1`, `a > r` iff `r + 1/r < dimq` since `x + 1/x` increases on `[1, ∞)`.
pub fn growth_exceeds(dimq: &Rational, r: &Rational) -> bool {
    if r < &int(1) {
        return dimq >= &int(2);
    }
    &(r + r.recip()) < dimq
}
