//! Real numbers in `[s₀, 1]` represented by adherence words.
//!
//! The interval `I_y = [α_y, α_y + r_y]` of a center word `y` is split by the
//! intervals of its live one-letter extensions. Ratios `r_w` come from a
//! [`RatioProvider`]: exact closed forms for some builtins, rational
//! enclosures otherwise.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::adherence::{self, Adherence, AdherenceWord};
use crate::automaton::{Automaton, Builtin, Letter, State, UpWord, Word};
use crate::error::{Error, Result};
use crate::numeration::NumerationSystem;

pub type Ratio = BigRational;

/// Exact value or a certified enclosure `lo ≤ x ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealValue {
    Exact(Ratio),
    Enclosure { lo: Ratio, hi: Ratio },
}

impl RealValue {
    pub fn zero() -> Self {
        RealValue::Exact(Ratio::zero())
    }

    pub fn enclosure(lo: Ratio, hi: Ratio) -> Self {
        assert!(lo <= hi, "enclosure bounds out of order");
        RealValue::Enclosure { lo, hi }
    }

    pub fn lo(&self) -> &Ratio {
        match self {
            RealValue::Exact(x) => x,
            RealValue::Enclosure { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Ratio {
        match self {
            RealValue::Exact(x) => x,
            RealValue::Enclosure { hi, .. } => hi,
        }
    }

    pub fn as_exact(&self) -> Option<&Ratio> {
        match self {
            RealValue::Exact(x) => Some(x),
            RealValue::Enclosure { .. } => None,
        }
    }

    pub fn width(&self) -> Ratio {
        self.hi() - self.lo()
    }

    pub fn contains(&self, x: &Ratio) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RealValue::Exact(x) if x.is_zero())
    }

    pub fn add(&self, other: &RealValue) -> RealValue {
        match (self, other) {
            (RealValue::Exact(a), RealValue::Exact(b)) => RealValue::Exact(a + b),
            _ => RealValue::enclosure(self.lo() + other.lo(), self.hi() + other.hi()),
        }
    }

    /// `1 - self`.
    pub fn complement(&self) -> RealValue {
        let one = Ratio::one();
        match self {
            RealValue::Exact(x) => RealValue::Exact(&one - x),
            RealValue::Enclosure { lo, hi } => RealValue::enclosure(&one - hi, &one - lo),
        }
    }

    pub fn to_f64(&self) -> f64 {
        ((self.lo() + self.hi()) / Ratio::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Exact(x) => f.write_str(&format_ratio(x)),
            RealValue::Enclosure { lo, hi } => write!(f, "[{}, {}]", format_ratio(lo), format_ratio(hi)),
        }
    }
}

/// `p/q`, or `p` for integers.
pub fn format_ratio(x: &Ratio) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal expansion rounded half away from zero.
pub fn format_decimal(x: &Ratio, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = x.abs() * Ratio::from_integer(scale.clone());
    let half = Ratio::new(1.into(), 2.into());
    let rounded = (scaled + half).floor().to_integer();
    let (int, frac) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places)
    }
}

/// Parses `p/q`, an integer, or a finite decimal.
pub fn parse_ratio(text: &str) -> Result<Ratio> {
    let t = text.trim();
    let bad = || Error::Malformed(format!("not a rational number: `{text}`"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let frac = Ratio::new(frac, scale);
        let int = Ratio::from_integer(int);
        return Ok(if negative { int - frac } else { int + frac });
    }
    Ok(Ratio::from_integer(t.parse().map_err(|_| bad())?))
}

fn ratio(p: i64, q: i64) -> Ratio {
    Ratio::new(p.into(), q.into())
}

fn pow(base: &Ratio, e: usize) -> Ratio {
    num_traits::pow(base.clone(), e)
}

/// `[label]: I_label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub label: Word,
    pub lo: RealValue,
    pub hi: RealValue,
}

impl Interval {
    pub fn render(&self, aut: &Automaton) -> String {
        format!("{}: [{}, {}]", aut.alphabet().render(&self.label), self.lo, self.hi)
    }
}

/// Power-iteration data for a finite automaton.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectral {
    /// Growth ratio of `u(q₀, n)`.
    pub theta: f64,
    /// `a_q = lim u(q, n) / u(q₀, n)`, indexed like the tabulated states.
    pub a: HashMap<State, f64>,
    pub certified: bool,
    /// Half-width of the enclosures handed out.
    pub tolerance: f64,
}

/// Source of the ratios `r_w`.
#[derive(Clone, Debug, PartialEq)]
pub enum RatioProvider {
    ClosedForm(Builtin),
    Spectral(Spectral),
    /// Uncertified bracket of `u(q₀·w, n-|w|)/v(q₀, n)` at `n` and `2n`.
    NumericLimit { n: usize },
    Unavailable(String),
}

impl RatioProvider {
    /// Whether every ratio is returned exactly.
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            RatioProvider::ClosedForm(Builtin::FullBinary | Builtin::IntegerBase(_) | Builtin::DyckPrefix)
        )
    }

    fn certified(&self) -> bool {
        match self {
            RatioProvider::ClosedForm(_) => true,
            RatioProvider::Spectral(s) => s.certified,
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            RatioProvider::ClosedForm(b) => format!("closed form ({})", b.name()),
            RatioProvider::Spectral(s) => format!("spectral (theta = {:.12}, tolerance {:e})", s.theta, s.tolerance),
            RatioProvider::NumericLimit { n } => format!("numeric limit at n = {n} and {} (uncertified)", 2 * n),
            RatioProvider::Unavailable(why) => format!("unavailable: {why}"),
        }
    }
}

const POWER_ITERATIONS: usize = 100_000;
const POWER_TOLERANCE: f64 = 1e-12;
const SPECTRAL_TOLERANCE: f64 = 1e-10;
const NUMERIC_LIMIT_N: usize = 64;

/// Ratios of a finite automaton through the dominant eigenvector of its
/// letter-count matrix. Falls back to [`RatioProvider::NumericLimit`] when the
/// power iteration does not settle on a growth ratio above 1.
pub fn spectral_ratios(aut: &Automaton) -> Result<RatioProvider> {
    let tab = aut
        .tabulate()
        .ok_or_else(|| Error::Unsupported("spectral ratios need a finite automaton".into()))?;
    let n = tab.states.len();
    let fallback = Ok(RatioProvider::NumericLimit { n: NUMERIC_LIMIT_N });
    let mut x: Vec<f64> = tab.finals.iter().map(|&f| if f { 1.0 } else { 0.0 }).collect();
    let mut theta = 0.0;
    let mut converged = false;
    for _ in 0..POWER_ITERATIONS {
        let y: Vec<f64> = (0..n)
            .map(|p| tab.delta[p].iter().flatten().map(|&t| x[t]).sum())
            .collect();
        let norm = y.iter().cloned().fold(0.0, f64::max);
        if norm == 0.0 {
            return fallback;
        }
        let y: Vec<f64> = y.into_iter().map(|c| c / norm).collect();
        let step = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let settled = (norm - theta).abs() <= POWER_TOLERANCE * norm && step <= POWER_TOLERANCE;
        theta = norm;
        x = y;
        if settled {
            converged = true;
            break;
        }
    }
    let at_initial = x[tab.initial];
    if !converged || theta <= 1.0 + 1e-9 || at_initial <= f64::MIN_POSITIVE {
        return fallback;
    }
    let a = tab
        .states
        .iter()
        .zip(&x)
        .map(|(q, &c)| (q.clone(), if aut.is_live(q) { c / at_initial } else { 0.0 }))
        .collect();
    Ok(RatioProvider::Spectral(Spectral { theta, a, certified: true, tolerance: SPECTRAL_TOLERANCE }))
}

/// `r_w` for a center word reaching `q` after `len` letters.
fn ratio_at(sys: &NumerationSystem, q: &State, len: usize, precision: usize) -> Result<RealValue> {
    match sys.ratios() {
        RatioProvider::ClosedForm(b) => closed_form(sys.automaton(), *b, q, len, precision),
        RatioProvider::Spectral(s) => {
            let a = s.a.get(q).copied().unwrap_or(0.0);
            let r = a * (s.theta - 1.0) / s.theta.powi(len as i32 + 1);
            let lo = Ratio::from_float((r - s.tolerance).max(0.0)).unwrap_or_else(Ratio::zero);
            let hi = Ratio::from_float(r + s.tolerance).unwrap_or_else(Ratio::one);
            Ok(RealValue::enclosure(lo, hi))
        }
        RatioProvider::NumericLimit { n } => {
            let (aut, q0) = (sys.automaton(), sys.automaton().initial());
            let mut bounds = Vec::new();
            for m in [(*n).max(len), 2 * (*n).max(len)] {
                let u = sys.cache().count_u(aut, q, m - len);
                let v = sys.cache().count_v(aut, &q0, m);
                bounds.push(Ratio::new(u.into(), v.into()));
            }
            bounds.sort();
            Ok(RealValue::enclosure(bounds[0].clone(), bounds[1].clone()))
        }
        RatioProvider::Unavailable(why) => Err(Error::Unsupported(format!("ratios r_w are {why}"))),
    }
}

fn closed_form(aut: &Automaton, b: Builtin, q: &State, len: usize, precision: usize) -> Result<RealValue> {
    let half = ratio(1, 2);
    Ok(match (b, q) {
        (Builtin::FullBinary, _) => RealValue::Exact(pow(&half, len + 1)),
        (Builtin::IntegerBase(base), _) => {
            let base = base as i64;
            if len == 0 {
                RealValue::Exact(ratio(base - 1, base))
            } else {
                RealValue::Exact(pow(&ratio(1, base), len))
            }
        }
        (Builtin::DyckPrefix, State::Int(level)) => {
            RealValue::Exact(Ratio::from_integer((level + 1).into()) * pow(&half, len + 1))
        }
        (Builtin::RationalBase32, _) if len == 0 => RealValue::Exact(ratio(1, 3)),
        (Builtin::RationalBase32, _) => rational32_ratio(aut, q, len, precision),
        _ => return Err(Error::Unsupported(format!("no closed form for {}", b.name()))),
    })
}

/// `G_0, …, G_n` with `G_0 = 1` and `G_{k+1} = ⌈3 G_k / 2⌉`.
pub fn g_sequence(n: usize) -> Vec<BigUint> {
    let mut g = vec![BigUint::one()];
    for _ in 0..n {
        let last = g.last().unwrap();
        g.push((last * 3u32 + 1u32) >> 1);
    }
    g
}

/// `K = lim G_n (2/3)^n` lies in `[G_n (2/3)^n, (G_n + 1)(2/3)^n]`.
pub fn k_enclosure(n: usize) -> RealValue {
    let g = g_sequence(n).pop().unwrap();
    let scale = pow(&ratio(2, 3), n);
    let lo = Ratio::from_integer(g.into()) * &scale;
    let hi = &lo + &scale;
    RealValue::enclosure(lo, hi)
}

/// Digits of the greedy walk from `q` (smallest or largest digit first).
fn greedy_digits(aut: &Automaton, q: &State, steps: usize, largest: bool) -> Vec<Letter> {
    let mut q = q.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut letters: Vec<Letter> = (0..aut.alphabet().len()).collect();
        if largest {
            letters.reverse();
        }
        let (a, t) = letters
            .into_iter()
            .find_map(|a| aut.step(&q, a).map(|t| (a, t)))
            .expect("every state of the rational base automaton has a successor");
        out.push(a);
        q = t;
    }
    out
}

/// `r_x = val(M_x) - val(m_x) = (1/(3K)) Σ_{i≥|x|} (M_x[i] - m_x[i]) (2/3)^i`,
/// truncated after `precision` digits. The tail is at most
/// `6 (2/3)^{|x|+precision}` and `r_x ≤ (2/K)(2/3)^{|x|}`.
fn rational32_ratio(aut: &Automaton, q: &State, len: usize, precision: usize) -> RealValue {
    let lows = greedy_digits(aut, q, precision, false);
    let highs = greedy_digits(aut, q, precision, true);
    let two_thirds = ratio(2, 3);
    let mut weight = pow(&two_thirds, len);
    let cap_weight = weight.clone();
    let mut sum = Ratio::zero();
    for (m, big) in lows.iter().zip(&highs) {
        sum += Ratio::from_integer(((big - m) as i64).into()) * &weight;
        weight *= &two_thirds;
    }
    let tail = Ratio::from_integer(6.into()) * weight;
    let k = k_enclosure(len + precision);
    let three = Ratio::from_integer(3.into());
    let lo = if sum > tail { (&sum - &tail) / (&three * k.hi()) } else { Ratio::zero() };
    let cap = Ratio::from_integer(2.into()) / k.lo() * cap_weight;
    let hi = ((&sum + &tail) / (&three * k.lo())).min(cap);
    RealValue::enclosure(lo.min(hi.clone()), hi)
}

/// The state reached by a center word, or `None` outside the center.
fn center_state(sys: &NumerationSystem, w: &Word) -> Result<Option<State>> {
    let aut = sys.automaton();
    Ok(aut.step_word(w)?.filter(|q| aut.is_live(q)))
}

/// `r_w`; zero outside the center.
pub fn ratio_r(sys: &NumerationSystem, w: &Word) -> Result<RealValue> {
    ratio_r_with(sys, w, sys.config.precision)
}

pub fn ratio_r_with(sys: &NumerationSystem, w: &Word, precision: usize) -> Result<RealValue> {
    match center_state(sys, w)? {
        Some(q) => ratio_at(sys, &q, w.len(), precision),
        None => match sys.ratios() {
            RatioProvider::Unavailable(why) => Err(Error::Unsupported(format!("ratios r_w are {why}"))),
            _ => Ok(RealValue::zero()),
        },
    }
}

/// `s₀ = 1 - r_ε`.
pub fn s0(sys: &NumerationSystem) -> Result<RealValue> {
    Ok(ratio_r(sys, &Word::empty())?.complement())
}

/// Left endpoint of `I_y`: `s₀ + Σ_i Σ_{a < y[i]} r_{y[0,i-1]a}`.
pub fn alpha(sys: &NumerationSystem, y: &Word) -> Result<RealValue> {
    alpha_with(sys, y, sys.config.precision)
}

fn alpha_with(sys: &NumerationSystem, y: &Word, precision: usize) -> Result<RealValue> {
    let aut = sys.automaton();
    if center_state(sys, y)?.is_none() {
        return Err(Error::NotInCenter(sys.render(y)));
    }
    let mut acc = ratio_r_with(sys, &Word::empty(), precision)?.complement();
    let mut q = aut.initial();
    for (i, &letter) in y.letters().iter().enumerate() {
        for a in 0..letter {
            if let Some(t) = aut.step(&q, a).filter(|t| aut.is_live(t)) {
                acc = acc.add(&ratio_at(sys, &t, i + 1, precision)?);
            }
        }
        q = aut.step(&q, letter).expect("center words stay live");
    }
    Ok(acc)
}

/// `I_y = [α_y, α_y + r_y]`.
pub fn interval_of(sys: &NumerationSystem, y: &Word) -> Result<Interval> {
    interval_with(sys, y, sys.config.precision)
}

fn interval_with(sys: &NumerationSystem, y: &Word, precision: usize) -> Result<Interval> {
    let lo = alpha_with(sys, y, precision)?;
    let hi = lo.add(&ratio_r_with(sys, y, precision)?);
    Ok(Interval { label: y.clone(), lo, hi })
}

/// The nonempty intervals `I_{ya}` over live extensions, in alphabet order.
pub fn subdivide(sys: &NumerationSystem, y: &Word) -> Result<Vec<Interval>> {
    subdivide_with(sys, y, sys.config.precision)
}

fn subdivide_with(sys: &NumerationSystem, y: &Word, precision: usize) -> Result<Vec<Interval>> {
    let aut = sys.automaton();
    let q = center_state(sys, y)?.ok_or_else(|| Error::NotInCenter(sys.render(y)))?;
    let mut lo = alpha_with(sys, y, precision)?;
    let mut out = Vec::new();
    for a in 0..aut.alphabet().len() {
        let Some(t) = aut.step(&q, a).filter(|t| aut.is_live(t)) else { continue };
        let r = ratio_at(sys, &t, y.len() + 1, precision)?;
        if r.is_zero() {
            continue;
        }
        let hi = lo.add(&r);
        out.push(Interval { label: y.pushed(a), lo: lo.clone(), hi: hi.clone() });
        lo = hi;
    }
    Ok(out)
}

/// `Σ_{a < w[i]} r_{w[0,i-1]a}` for `i < n`, following `w` from `q₀`.
fn series_terms(sys: &NumerationSystem, letters: impl Iterator<Item = Letter>, n: usize) -> Result<Vec<RealValue>> {
    let aut = sys.automaton();
    let precision = sys.config.precision;
    let mut q = aut.initial();
    let mut out = Vec::with_capacity(n);
    for (i, letter) in letters.take(n).enumerate() {
        let mut t_i = RealValue::zero();
        for a in 0..letter {
            if let Some(t) = aut.step(&q, a).filter(|t| aut.is_live(t)) {
                t_i = t_i.add(&ratio_at(sys, &t, i + 1, precision)?);
            }
        }
        out.push(t_i);
        q = aut.step(&q, letter).ok_or_else(|| Error::NotInCenter("prefix".into()))?;
    }
    Ok(out)
}

/// `val_S(w) = s₀ + Σ_i Σ_{a<w[i]} r_{w[0,i-1]a}` for an adherence word.
///
/// Exact when the ratios are exact and the terms are arithmetico-geometric
/// along the period, `t(p + kP + j) = (A_j + k B_j) ρ^k`; otherwise the
/// enclosure of a long prefix.
pub fn value_of_infinite(sys: &NumerationSystem, w: &UpWord) -> Result<RealValue> {
    let aut = sys.automaton();
    if adherence::validate_up_word(sys, w, sys.config.validate_limit)? == Adherence::NotInAdherence {
        return Err(Error::NotInAdherence(aut.alphabet().render_up_word(w)));
    }
    if let RatioProvider::ClosedForm(b) = sys.ratios() {
        if sys.ratios().is_exact() {
            if let Some(x) = exact_series(sys, *b, w)? {
                return Ok(RealValue::Exact(x));
            }
        }
    }
    value_of_prefix_stream(sys, w.letters(), sys.config.series_depth.max(w.preperiod.len() + w.period.len()))
}

fn exact_series(sys: &NumerationSystem, b: Builtin, w: &UpWord) -> Result<Option<Ratio>> {
    let base = match b {
        Builtin::FullBinary | Builtin::DyckPrefix => 2,
        Builtin::IntegerBase(k) => k as i64,
        _ => return Ok(None),
    };
    // One period is unrolled into the preperiod so that the first letter,
    // whose ratio may be special, never falls inside the periodic part.
    let p = w.period.len();
    let start = w.preperiod.len() + p;
    let terms = series_terms(sys, w.letters(), start + 3 * p)?;
    let exact: Vec<&Ratio> = match terms.iter().map(RealValue::as_exact).collect::<Option<Vec<_>>>() {
        Some(t) => t,
        None => return Ok(None),
    };
    let rho = pow(&ratio(1, base), p);
    let one = Ratio::one();
    let gap = &one - &rho;
    let mut sum = s0(sys)?.as_exact().cloned().expect("exact provider");
    for t in &exact[..start] {
        sum += *t;
    }
    for j in 0..p {
        let a = exact[start + j].clone();
        let b = exact[start + p + j] / &rho - &a;
        let predicted = (&a + &b * Ratio::from_integer(2.into())) * &rho * &rho;
        if &predicted != exact[start + 2 * p + j] {
            return Ok(None);
        }
        sum += &a / &gap + &b * &rho / (&gap * &gap);
    }
    Ok(Some(sum))
}

/// `[α_y, α_y + r_y]` for the length-`n` prefix `y` of a letter stream.
pub fn value_of_prefix_stream(
    sys: &NumerationSystem,
    letters: impl IntoIterator<Item = Letter>,
    n: usize,
) -> Result<RealValue> {
    let y = Word(letters.into_iter().take(n).collect());
    if y.len() < n {
        return Err(Error::Malformed(format!("the stream ended after {} letters", y.len())));
    }
    let i = interval_of(sys, &y)?;
    Ok(RealValue::enclosure(i.lo.lo().clone(), i.hi.hi().clone()))
}

/// Tie-breaking on a shared interval endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    Leftmost,
    Rightmost,
}

/// A center word `y` of length `depth` with `x ∈ I_y`, found by descending
/// the interval partition.
pub fn encode_real(sys: &NumerationSystem, x: &Ratio, depth: usize, policy: Policy) -> Result<Word> {
    if !sys.ratios().certified() || matches!(sys.ratios(), RatioProvider::NumericLimit { .. }) {
        return Err(Error::Unsupported(format!("encoding needs certified ratios; {}", sys.ratios().describe())));
    }
    let start = s0(sys)?;
    if x < start.lo() || *x > Ratio::one() {
        return Err(Error::OutOfRange { value: format_ratio(x), lo: start.to_string() });
    }
    if x < start.hi() && start.as_exact().is_none() {
        return Err(Error::Ambiguous { position: 0 });
    }
    let mut y = Word::empty();
    for position in 0..depth {
        let mut precision = sys.config.precision;
        let chosen = loop {
            let children = subdivide_with(sys, &y, precision)?;
            if let Some(j) = choose_child(&children, x, policy) {
                break children[j].label.clone();
            }
            let refinable = matches!(sys.ratios(), RatioProvider::ClosedForm(_)) && !sys.ratios().is_exact();
            if !refinable || precision >= sys.config.max_precision {
                return Err(Error::Ambiguous { position });
            }
            precision = (precision * 2).min(sys.config.max_precision);
        };
        y = chosen;
    }
    Ok(y)
}

/// Index of the child whose interval certainly holds `x`, assuming `x` lies
/// in the parent interval.
fn choose_child(children: &[Interval], x: &Ratio, policy: Policy) -> Option<usize> {
    let last = children.len().checked_sub(1)?;
    for (j, child) in children.iter().enumerate().skip(1) {
        if let Some(b) = child.lo.as_exact() {
            if b == x {
                return Some(match policy {
                    Policy::Leftmost => j - 1,
                    Policy::Rightmost => j,
                });
            }
        }
    }
    (0..=last).find(|&j| (j == 0 || children[j].lo.hi() < x) && (j == last || x < children[j].hi.lo()))
}

/// All adherence words of value `x`: `{m_w, M_z}` when `x = inf I_w = sup I_z`
/// for adjacent intervals at some depth, a single word at the ends of `[s₀, 1]`.
pub fn endpoint_representations(sys: &NumerationSystem, x: &Ratio, max_depth: usize) -> Result<Vec<UpWord>> {
    if !sys.ratios().is_exact() {
        return Err(Error::Unsupported("endpoint detection needs exact ratios".into()));
    }
    let start = s0(sys)?.as_exact().cloned().expect("exact provider");
    let exact = |w: AdherenceWord| {
        w.as_exact()
            .cloned()
            .ok_or_else(|| Error::Unsupported("the extremal word is not ultimately periodic".into()))
    };
    if *x < start || *x > Ratio::one() {
        return Err(Error::OutOfRange { value: format_ratio(x), lo: format_ratio(&start) });
    }
    if *x == start {
        return Ok(vec![exact(adherence::min_word(sys, &Word::empty())?)?]);
    }
    if x.is_one() {
        return Ok(vec![exact(adherence::max_word(sys, &Word::empty())?)?]);
    }
    let mut y = Word::empty();
    for _ in 0..max_depth {
        let children = subdivide(sys, &y)?;
        for j in 1..children.len() {
            if children[j].lo.as_exact() == Some(x) {
                return Ok(vec![
                    exact(adherence::min_word(sys, &children[j].label)?)?,
                    exact(adherence::max_word(sys, &children[j - 1].label)?)?,
                ]);
            }
        }
        match children.iter().find(|c| c.lo.lo() < x && x < c.hi.hi()) {
            Some(c) => y = c.label.clone(),
            None => break,
        }
    }
    Err(Error::NotAnEndpoint { value: format_ratio(x), depth: max_depth })
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub prefix: Word,
    pub val: BigUint,
    pub v: BigUint,
}

impl ConvergenceRow {
    pub fn ratio(&self) -> Ratio {
        Ratio::new(self.val.clone().into(), self.v.clone().into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Set when the table stops early.
    pub note: Option<String>,
}

/// `(n, val(w[0,n-1]), v(q₀, n), ratio)` for `n = 1..=n_max`, stopping at the
/// first prefix outside the language.
///
/// All rows come out of one backward sweep: the sibling state reached at
/// position `i` contributes `u(·, n-i-1)` to every row `n > i`.
pub fn convergence_table(sys: &NumerationSystem, w: &UpWord, n_max: usize) -> Result<ConvergenceTable> {
    let aut = sys.automaton();
    aut.alphabet().check(&w.preperiod)?;
    aut.alphabet().check(&w.period)?;
    let prefix = w.prefix(n_max);
    let mut q = aut.initial();
    let mut siblings: Vec<Vec<State>> = Vec::new();
    let mut last = 0;
    let mut note = None;
    for (i, &letter) in prefix.letters().iter().enumerate() {
        siblings.push((0..letter).filter_map(|a| aut.step(&q, a)).collect());
        match aut.step(&q, letter) {
            Some(t) if aut.is_final(&t) => {
                q = t;
                last = i + 1;
            }
            _ => {
                note = Some(format!("the prefix of length {} is not in the language", i + 1));
                siblings.pop();
                break;
            }
        }
    }
    siblings.truncate(last);
    let v_profile = sys.cache().profile(aut, &aut.initial(), last);
    let mut acc = vec![BigUint::zero(); last + 1];
    if aut.closed_profile(&aut.initial(), 0).is_some() {
        for (n, slot) in acc.iter_mut().enumerate().skip(1) {
            let queries: Vec<(State, usize)> = siblings[..n]
                .iter()
                .enumerate()
                .flat_map(|(i, sib)| sib.iter().map(move |t| (t.clone(), n - i - 1)))
                .collect();
            *slot = sys.cache().batch(aut, &queries).into_iter().sum();
        }
    } else if last > 0 {
        let requests: Vec<Vec<State>> = (0..last)
            .map(|k| siblings[..last - k].iter().flatten().cloned().collect())
            .collect();
        sys.cache().sweep(aut, requests, |k, layer| {
            for (i, sib) in siblings.iter().enumerate().take(last - k) {
                for t in sib {
                    acc[i + k + 1] += &layer[t];
                }
            }
        });
    }
    let mut rows = Vec::with_capacity(last);
    let mut below = v_profile[0].clone();
    for n in 1..=last {
        let v = &below + &v_profile[n];
        rows.push(ConvergenceRow { n, prefix: prefix.prefix(n), val: &below + &acc[n], v: v.clone() });
        below = v;
    }
    Ok(ConvergenceTable { rows, note })
}

/// `val((ab)^n) / v(2n)` and `val((ab)^n a) / v(2n+1)`: the two accumulation
/// points of the finite ratios on the balanced language.
pub fn nonprefix_divergence(sys: &NumerationSystem, blocks: usize) -> Result<(Ratio, Ratio)> {
    let even = Word([0, 1].repeat(blocks));
    let odd = even.pushed(0);
    let values = sys.value_of_all(&[even.clone(), odd.clone()]);
    let mut values = values.into_iter();
    let val_even = values.next().unwrap()?;
    let val_odd = values.next().unwrap()?;
    let v_even = sys.count_v(even.len());
    let v_odd = sys.count_v(odd.len());
    Ok((Ratio::new(val_even.into(), v_even.into()), Ratio::new(val_odd.into(), v_odd.into())))
}
