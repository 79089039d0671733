//! Acceptance suite: one line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use common::*;
use numerans::adherence::{self, AdherenceWord};
use numerans::automaton::{parse_dfa, Automaton, State, Word};
use numerans::counting::{classify, dyck_u_closed, Growth};
use numerans::oracle::{self, alpha_fin, brute_count, enumerate_upto};
use numerans::reals::{
    self, alpha, convergence_table, encode_real, format_decimal, interval_of, k_enclosure, parse_ratio, ratio_r,
    ratio_r_with, s0, spectral_ratios, subdivide, value_of_infinite, Policy, Ratio, RatioProvider, RealValue,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(t: Instant, limit: Duration) -> Outcome {
    let spent = t.elapsed();
    ensure!(spent < limit, "took {spent:.2?}, limit {limit:?}");
    Ok(format!("{spent:.2?}"))
}

fn exact(v: &RealValue) -> Result<Ratio, String> {
    v.as_exact().cloned().ok_or_else(|| format!("expected an exact value, got {v}"))
}

const TABLE: [(&str, u64, u64, &str); 15] = [
    ("a", 1, 2, "0.50000"),
    ("aa", 2, 4, "0.50000"),
    ("aab", 5, 7, "0.71429"),
    ("aaba", 9, 13, "0.69231"),
    ("aabaa", 17, 23, "0.73913"),
    ("aabaab", 32, 43, "0.74419"),
    ("aabaaba", 60, 78, "0.76923"),
    ("aabaabaa", 112, 148, "0.75676"),
    ("aabaabaab", 213, 274, "0.77737"),
    ("aabaabaaba", 404, 526, "0.76806"),
    ("aabaabaabaa", 771, 988, "0.78036"),
    ("aabaabaabaab", 1479, 1912, "0.77354"),
    ("aabaabaabaaba", 2841, 3628, "0.78308"),
    ("aabaabaabaabaa", 5486, 7060, "0.77705"),
    ("aabaabaabaabaab", 10591, 13495, "0.78481"),
];

fn table_reproduction() -> Outcome {
    let t = Instant::now();
    let d = sys("dyck");
    let table = convergence_table(&d, &up(&d, "(aab)^w"), 15).map_err(|e| e.to_string())?;
    ensure!(table.rows.len() == 15, "{} rows", table.rows.len());
    for (row, (prefix, val, v, dec)) in table.rows.iter().zip(TABLE) {
        let got = (d.render(&row.prefix), row.val.clone(), row.v.clone(), format_decimal(&row.ratio(), 5));
        let want = (prefix.to_string(), BigUint::from(val), BigUint::from(v), dec.to_string());
        ensure!(got == want, "row {}: got {got:?}, want {want:?}", row.n);
    }
    within(t, Duration::from_secs(1)).map(|s| format!("15 rows, {s}"))
}

fn exact_limits() -> Outcome {
    let d = sys("dyck");
    for (text, want) in [("(aab)^w", ratio(39, 49)), ("(a)^w", ratio(1, 2)), ("(ab)^w", ratio(1, 1))] {
        let got = exact(&value_of_infinite(&d, &up(&d, text)).map_err(|e| e.to_string())?)?;
        ensure!(got == want, "{text}: {got} != {want}");
    }
    Ok("39/49, 1/2, 1".into())
}

fn interval_table() -> Outcome {
    let d = sys("dyck");
    let listed = [
        ("a", (1, 2), (1, 1)),
        ("aa", (1, 2), (7, 8)),
        ("ab", (7, 8), (1, 1)),
        ("aaa", (1, 2), (3, 4)),
        ("aab", (3, 4), (7, 8)),
        ("aba", (7, 8), (1, 1)),
        ("aaaa", (1, 2), (21, 32)),
        ("aaab", (21, 32), (3, 4)),
        ("aaba", (3, 4), (27, 32)),
        ("aabb", (27, 32), (7, 8)),
        ("abaa", (7, 8), (31, 32)),
        ("abab", (31, 32), (1, 1)),
    ];
    // Breadth-first subdivision from the root.
    let mut found = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..4 {
        let mut next = Vec::new();
        for y in &layer {
            for child in subdivide(&d, y).map_err(|e| e.to_string())? {
                found.push((d.render(&child.label), exact(&child.lo)?, exact(&child.hi)?));
                next.push(child.label);
            }
        }
        layer = next;
    }
    let want: Vec<_> = listed
        .iter()
        .map(|(w, (a, b), (c, e))| (w.to_string(), ratio(*a, *b), ratio(*c, *e)))
        .collect();
    ensure!(found == want, "got {found:?}");
    Ok(format!("{} intervals through depth 4", found.len()))
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let cases = [
        ("binary", 10),
        ("base2", 12),
        ("base3", 10),
        ("base10", 5),
        ("dyck", 10),
        ("dyck-proper", 10),
        ("rational32", 10),
        ("balanced", 10),
        ("half-prefix", 10),
    ];
    let mut total = 0;
    for (name, n) in cases {
        let s = sys(name);
        let lang = enumerate_upto(s.automaton(), n).map_err(|e| e.to_string())?;
        let values = s.value_of_all(lang.words());
        for (i, (w, v)) in lang.words().iter().zip(values).enumerate() {
            let v = v.map_err(|e| format!("{name}: {e}"))?;
            ensure!(v == BigUint::from(i), "{name}: val({}) = {v}, oracle {i}", s.render(w));
            let brute = oracle::brute_value(&lang, w).map_err(|e| e.to_string())?;
            ensure!(brute == v, "{name}: brute value mismatch");
        }
        let ranks: Vec<BigUint> = (0..lang.len()).map(BigUint::from).collect();
        for (w, got) in lang.words().iter().zip(s.words_at(&ranks)) {
            ensure!(*w == got, "{name}: rep mismatch at {}", s.render(w));
        }
        total += lang.len();
    }
    within(t, Duration::from_secs(30)).map(|s| format!("{total} words over 9 builtins, {s}"))
}

fn dyck_closed_forms() -> Outcome {
    let proper = sys("dyck-proper");
    let prefix = sys("dyck");
    let (pa, da) = (prefix.automaton(), proper.automaton());
    for m in 0..=6i64 {
        let q = State::Int(m);
        for n in 0..=16usize {
            let closed = dyck_u_closed(m as u64, n as u64);
            let counted = proper.cache().count_u(da, &q, n);
            ensure!(closed == counted, "d_{m}({n}): closed {closed} vs DP {counted}");
            ensure!(counted == brute_count(da, &q, n), "d_{m}({n}) disagrees with the oracle");
            if n as i64 > m {
                let lhs = prefix.cache().count_u(pa, &q, n);
                let rhs = BigUint::from(2u32) * prefix.cache().count_u(pa, &q, n - 1) - proper.cache().count_u(da, &q, n - 1);
                ensure!(lhs == rhs, "recurrence fails at m={m}, n={n}");
            }
        }
    }
    Ok("m <= 6, n <= 16".into())
}

fn rational_base() -> Outcome {
    let r = sys("rational32");
    let g = reals::g_sequence(30);
    for (n, gn) in g.iter().enumerate() {
        ensure!(r.count_v(n) == *gn, "v({n}) = {} but G_{n} = {gn}", r.count_v(n));
    }
    let lang = enumerate_upto(r.automaton(), 12).map_err(|e| e.to_string())?;
    ensure!(lang.len() >= 20, "only {} words", lang.len());
    for (i, w) in lang.words().iter().take(20).enumerate() {
        ensure!(r.word_at(&BigUint::from(i)) == *w, "word_at({i})");
    }
    let three_halves = ratio(3, 2);
    for w in lang.words() {
        let len = w.len();
        let mut sum = Ratio::zero();
        for (i, &d) in w.letters().iter().enumerate() {
            sum += ratio(d as i64, 1) * num_traits::pow(three_halves.clone(), len - 1 - i);
        }
        let formula = sum / ratio(2, 1);
        let got = Ratio::from_integer(r.value_of(w).map_err(|e| e.to_string())?.into());
        ensure!(got == formula, "val({}) = {got}, formula {formula}", r.render(w));
    }
    let k = k_enclosure(60);
    let (lo, hi) = (parse_ratio("1.6222705").unwrap(), parse_ratio("1.6222706").unwrap());
    ensure!(k.width() < ratio(1, 10_000_000_000), "K width {}", k.width());
    ensure!(&lo < k.lo() && k.hi() < &hi, "K enclosure {k} is not within [1.6222705, 1.6222706]");
    Ok(format!("G_0..G_30, {} words checked, K in {}", lang.len(), format_decimal(k.lo(), 10)))
}

fn divergence_demo() -> Outcome {
    let t = Instant::now();
    let b = sys("balanced");
    let (even, odd) = reals::nonprefix_divergence(&b, 1000).map_err(|e| e.to_string())?;
    let gap_even = (even.clone() - ratio(3, 4)).to_f64().unwrap().abs();
    let gap_odd = (odd.clone() - ratio(3, 5)).to_f64().unwrap().abs();
    ensure!(gap_even.lt(&0.01), "even ratio {} is {gap_even} away from 3/4", format_decimal(&even, 6));
    ensure!(gap_odd.lt(&0.01), "odd ratio {} is {gap_odd} away from 3/5", format_decimal(&odd, 6));
    let spent = within(t, Duration::from_secs(60))?;
    Ok(format!("even {}, odd {}, {spent}", format_decimal(&even, 5), format_decimal(&odd, 5)))
}

fn spectral_vs_closed() -> Outcome {
    let tol = ratio(1, 1_000_000_000);
    let mut checked = 0;
    for name in ["binary", "base10"] {
        let closed = sys(name);
        let provider = spectral_ratios(closed.automaton()).map_err(|e| e.to_string())?;
        ensure!(matches!(provider, RatioProvider::Spectral(_)), "{name}: {}", provider.describe());
        let spectral = sys(name).with_ratios(provider);
        let aut = closed.automaton();
        let mut layer = vec![Word::empty()];
        for len in 0..=6 {
            for w in &layer {
                let want = exact(&ratio_r(&closed, w).map_err(|e| e.to_string())?)?;
                let got = ratio_r(&spectral, w).map_err(|e| e.to_string())?;
                ensure!(got.contains(&want), "{name} r_{}: {got} misses {want}", closed.render(w));
                ensure!(got.lo() >= &(&want - &tol) && got.hi() <= &(&want + &tol), "{name}: too wide at {}", closed.render(w));
                checked += 1;
            }
            if len < 6 {
                layer = layer
                    .iter()
                    .flat_map(|w| (0..aut.alphabet().len()).map(move |a| w.pushed(a)))
                    .collect();
            }
        }
    }
    Ok(format!("{checked} words"))
}

fn classification() -> Outcome {
    let binary = classify(&Automaton::full_binary()).map_err(|e| e.to_string())?;
    ensure!(
        binary.growth == Growth::Exponential && binary.uncountable_adherence && binary.uncountable_linfty,
        "binary: {binary:?}"
    );
    let poly = classify(&parse_dfa(AB_STAR).unwrap()).map_err(|e| e.to_string())?;
    ensure!(
        poly.growth == Growth::Polynomial { degree: 1 } && !poly.uncountable_adherence && !poly.uncountable_linfty,
        "a*b*: {poly:?}"
    );
    let cycles = classify(&parse_dfa(TWO_CYCLES).unwrap()).map_err(|e| e.to_string())?;
    ensure!(cycles.uncountable_linfty, "two cycles: {cycles:?}");
    Ok("binary, a*b*, two final cycles".into())
}

fn property_suites() -> Outcome {
    let mut notes = Vec::new();
    let d = sys("dyck");
    let b = sys("binary");
    let err = |e: numerans::Error| e.to_string();

    // Partition: the widths of the length-l center words add up to 1 - s0.
    for s in [&d, &b] {
        let total = exact(&s0(s).map_err(err)?)?;
        for l in 0..=12 {
            let mut sum = Ratio::zero();
            for y in center_words(s.automaton(), l) {
                sum += exact(&ratio_r(s, &y).map_err(err)?)?;
            }
            ensure!(sum + &total == Ratio::one(), "{}: partition fails at length {l}", s.name());
        }
    }
    notes.push("partition");

    // Nesting, endpoint law and the H3 bound over every center word up to length 8.
    for l in 0..=8 {
        for y in center_words(d.automaton(), l) {
            let parent = interval_of(&d, &y).map_err(err)?;
            let children = subdivide(&d, &y).map_err(err)?;
            ensure!(children.first().map(|c| &c.lo) == Some(&parent.lo), "nesting: left end of {}", d.render(&y));
            ensure!(children.last().map(|c| &c.hi) == Some(&parent.hi), "nesting: right end of {}", d.render(&y));
            for pair in children.windows(2) {
                ensure!(pair[0].hi == pair[1].lo && pair[0].lo.lo() < pair[0].hi.lo(), "nesting: gap under {}", d.render(&y));
            }
            let m = adherence::min_word(&d, &y).map_err(err)?;
            let big = adherence::max_word(&d, &y).map_err(err)?;
            let (AdherenceWord::Exact(m), AdherenceWord::Exact(big)) = (m, big) else {
                return Err(format!("extremal words of {} are not periodic", d.render(&y)));
            };
            let vm = exact(&value_of_infinite(&d, &m).map_err(err)?)?;
            let vb = exact(&value_of_infinite(&d, &big).map_err(err)?)?;
            ensure!(vm == exact(&parent.lo)? && vb == exact(&parent.hi)?, "endpoint law fails at {}", d.render(&y));
            let bound = ratio(l as i64 + 1, 1) * num_traits::pow(ratio(1, 2), l + 1);
            ensure!(exact(&ratio_r(&d, &y).map_err(err)?)? <= bound, "H3 bound fails at {}", d.render(&y));
        }
    }
    notes.push("nesting, endpoint law, H3");

    // Random adherence words, reproducible from a fixed seed.
    let mut runner = TestRunner::deterministic();
    let letters = || proptest::collection::vec(0usize..2, 0..7);
    let periods = || proptest::collection::vec(0usize..2, 1..5);
    let mut samples = Vec::new();
    while samples.len() < 200 {
        let pre = letters().new_tree(&mut runner).unwrap().current();
        let per = periods().new_tree(&mut runner).unwrap().current();
        if let Some(w) = adherent(&d, pre, per) {
            let x = exact(&value_of_infinite(&d, &w).map_err(err)?)?;
            samples.push((w, x));
        }
    }
    let mut pairs = 0;
    'outer: for (i, (w, x)) in samples.iter().enumerate() {
        for (z, y) in samples.iter().skip(i + 1) {
            match lex_cmp(w, z) {
                std::cmp::Ordering::Less => ensure!(x <= y, "monotonicity: {x} > {y}"),
                std::cmp::Ordering::Greater => ensure!(x >= y, "monotonicity: {x} < {y}"),
                std::cmp::Ordering::Equal => ensure!(x == y, "equal words, distinct values"),
            }
            let l = common_prefix(w, z, 64);
            let r = exact(&ratio_r(&d, &w.prefix(l)).map_err(err)?)?;
            let gap = if x > y { x - y } else { y - x };
            ensure!(gap <= r, "continuity modulus fails on a common prefix of length {l}");
            pairs += 1;
            if pairs == 500 {
                break 'outer;
            }
        }
    }
    notes.push("monotonicity and continuity on 500 pairs");

    for (_, x) in &samples {
        for depth in 0..=12 {
            let y = encode_real(&d, x, depth, Policy::Rightmost).map_err(err)?;
            let i = interval_of(&d, &y).map_err(err)?;
            ensure!(i.lo.lo() <= x && x <= i.hi.hi(), "encode/decode: {x} outside I_{}", d.render(&y));
        }
    }
    notes.push("encode/decode on 200 words");

    // Finite approximants stay within r_y of alpha_y.
    let aut = d.automaton();
    for l in 1..=4 {
        for y in center_words(aut, l) {
            let a = exact(&alpha(&d, &y).map_err(err)?)?;
            let r = exact(&ratio_r(&d, &y).map_err(err)?)?;
            for n in l + 1..=60 {
                let fin = alpha_fin(aut, &y, n).map_err(err)?;
                let gap = num_traits::Signed::abs(&(&a - &fin));
                ensure!(gap <= r, "alpha_fin({}, {n}) is {gap} away from alpha", d.render(&y));
                if n == 60 {
                    ensure!(gap < ratio(1, 100), "alpha_fin({}, 60) gap {gap}", d.render(&y));
                }
            }
        }
    }
    let y = word(&d, "aab");
    let gap = num_traits::Signed::abs(&(exact(&alpha(&d, &y).map_err(err)?)? - alpha_fin(aut, &y, 400).map_err(err)?));
    ensure!(gap < ratio(1, 1000), "alpha_fin(aab, 400) gap {gap}");
    notes.push("finite approximants");

    // Rational-base enclosures are nested in the precision parameter.
    let r32 = sys("rational32");
    for y in center_words(r32.automaton(), 6) {
        let coarse = ratio_r_with(&r32, &y, 24).map_err(err)?;
        let fine = ratio_r_with(&r32, &y, 48).map_err(err)?;
        ensure!(coarse.lo() <= fine.lo() && fine.hi() <= coarse.hi(), "enclosures not nested at {}", r32.render(&y));
        let large_n = 400;
        let u = r32.cache().count_u(r32.automaton(), &r32.automaton().step_word(&y).unwrap().unwrap(), large_n - y.len());
        let v = r32.count_v(large_n);
        let estimate = Ratio::new(u.into(), v.into());
        let slack = ratio(1, 1_000_000);
        ensure!(
            fine.lo() - &slack <= estimate && estimate <= fine.hi() + &slack,
            "r_{} enclosure {fine} far from the finite ratio",
            r32.render(&y)
        );
    }
    notes.push("enclosure soundness");

    // Central binomial asymptotics of the Dyck prefix counts.
    let n = 2000usize;
    let u = d.count_u(2 * n);
    let four_n = BigUint::one() << (2 * n);
    let scaled = Ratio::new(u.into(), four_n.into()).to_f64().unwrap() * (std::f64::consts::PI * n as f64).sqrt();
    ensure!((0.95..=1.05).contains(&scaled), "u(2n) sqrt(pi n) / 4^n = {scaled}");
    notes.push("central binomial asymptotics");

    Ok(notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table reproduction", table_reproduction),
        ("exact limits", exact_limits),
        ("interval table", interval_table),
        ("oracle equivalence", oracle_equivalence),
        ("Dyck closed forms", dyck_closed_forms),
        ("rational base 3/2", rational_base),
        ("divergence demo", divergence_demo),
        ("spectral vs closed form", spectral_vs_closed),
        ("classification", classification),
        ("property suites", property_suites),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| *f == id.to_string()) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
