//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Expected values are written out here rather than taken from the library.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmsym_core::brent::{
    assignment_from_terms, check_solution, generic_system, trivial_decomposition, BrentSystem, ExportFormat,
};
use mmsym_core::catalog::{family_tensor_symbolic, matmul_tensor, verify_catalog, GROUP_ORDER};
use mmsym_core::grammar::parse_polynomial;
use mmsym_core::group::group_g;
use mmsym_core::invariants::{
    compute_classes, gamma_to_tensor, group_average, orbit_sum_checked, project, GammaVector,
};
use mmsym_core::tensor::{BasisIndex, Tensor};
use mmsym_core::{Cyclotomic, Polynomial};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

/// Total number of type multisets of length at most 23, from a brute-force
/// count over multiplicity vectors of the tabulated orbit lengths.
const GOLDEN_MULTISETS_23: usize = 14623;

const CLASS_TABLE: [(&str, usize); 12] = [
    ("11,11,11", 3),
    ("11,11,22", 18),
    ("11,12,21", 18),
    ("11,12,12", 36),
    ("11,21,12", 18),
    ("11,22,33", 6),
    ("11,23,23", 18),
    ("11,23,32", 18),
    ("12,23,31", 6),
    ("12,23,13", 18),
    ("12,32,13", 18),
    ("12,31,23", 6),
];

const LENGTHS: [usize; 44] = [
    12, 12, 6, 6, 3, 2, 1, 16, 4, 8, 8, 6, 12, 12, 12, 18, 18, 9, 9, 9, 9, 18, 18, 18, 18, 18, 18, 18, 18, 18, 18, 18,
    18, 18, 18, 18, 18, 18, 6, 12, 12, 12, 6, 6,
];

/// Reference γ9..γ12 cells of the orbit sums of families 24, 29, 32, 38.
const REFERENCE_TABLE: [(u8, [&str; 4]); 4] = [
    (24, ["6*a^2*d", "2*a^2*d+4*a*b*d", "2*b^2*d+4*a*b*d", "6*b^2*d"]),
    (
        29,
        ["6*i*a^2*d", "2*i*a^2*d+4*i*a*b*d", "2*i*b^2*d+4*i*a*b*d", "6*i*b^2*d"],
    ),
    (32, ["6*a^2*d", "2*a^2*d+4*a*b*d", "2*b^2*d-4*a*b*d", "-6*b^2*d"]),
    (
        38,
        ["6*i*a^2*d", "-2*i*a^2*d+4*i*a*b*d", "2*i*b^2*d-4*i*a*b*d", "-6*i*b^2*d"],
    ),
];

fn gamma(v: [i64; 12]) -> GammaVector {
    GammaVector::from_ints(v)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn class_table() -> Outcome {
    let classes = compute_classes().map_err(err)?;
    ensure(classes.len() == 12, || format!("{} classes", classes.len()))?;
    for (c, (rep, size)) in classes.iter().zip(CLASS_TABLE) {
        let rep = BasisIndex::parse_short(rep).map_err(err)?;
        ensure(c.size() == size, || {
            format!("Q{} has {} members, expected {size}", c.id, c.size())
        })?;
        ensure(c.members.contains(&rep), || format!("{rep} not in Q{}", c.id))?;
    }
    let total: usize = classes.iter().map(|c| c.size()).sum();
    let even = BasisIndex::all().filter(|a| a.is_even()).count();
    ensure(total == 183 && even == 183, || format!("total {total}, even {even}"))?;
    Ok("12 classes, 183 even indices".into())
}

fn projection_of_t() -> Outcome {
    let got = project(&matmul_tensor());
    let want = gamma([1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0]);
    ensure(got == want, || format!("got {got}"))?;
    Ok(format!("p(T) = {got}"))
}

fn worked_example() -> Outcome {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let argv = ["mmsym", "orbit-sum", "--type", "27", "--params", "1,2,3,4,5", "--gamma"];
    let code = mmsym_cli::run(argv, &mut out, &mut errs);
    let text = String::from_utf8(out).map_err(err)?;
    let want = "318*g1 + 214*g2 + 32*g3 - 32*g4 + 32*g5 + 174*g6 - 40*g7 + 40*g8";
    ensure(code == 0 && text.trim() == want, || {
        format!("exit {code}, output {text:?}")
    })?;
    let ints: Vec<Cyclotomic> = (1..=5).map(Cyclotomic::from_int).collect();
    let w = mmsym_core::catalog::family_tensor(27, &ints).map_err(err)?;
    let direct = orbit_sum_checked(&w, 18).map_err(err)?;
    let expected = gamma([318, 214, 32, -32, 32, 174, -40, 40, 0, 0, 0, 0]);
    ensure(direct == expected, || format!("library orbit sum {direct}"))?;
    Ok(want.into())
}

fn reference_gamma_table() -> Outcome {
    let mut mismatches = Vec::new();
    for (id, cells) in REFERENCE_TABLE {
        let fam = mmsym_core::catalog::family(id).map_err(err)?;
        let w = family_tensor_symbolic(id, 0).map_err(err)?;
        let s = orbit_sum_checked(&w, fam.length).map_err(err)?;
        for (k, cell) in cells.iter().enumerate() {
            let want = parse_polynomial(cell).map_err(err)?;
            let got = s.get(9 + k);
            if got != &want {
                mismatches.push(format!("family {id} g{}: reference {want}, computed {got}", 9 + k));
            }
        }
    }
    if mismatches.is_empty() {
        Ok("16/16 cells match".into())
    } else {
        Err(format!(
            "{}/16 cells match; {}",
            16 - mismatches.len(),
            mismatches.join("; ")
        ))
    }
}

fn sigma_vectors() -> Outcome {
    let cases: [(u8, Vec<i64>, [i64; 12]); 3] = [
        (7, vec![1], [1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
        (6, vec![1], [2, -1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0]),
        (5, vec![0, 1], [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    ];
    for (id, params, want) in cases {
        let vals: Vec<Cyclotomic> = params.into_iter().map(Cyclotomic::from_int).collect();
        let w = mmsym_core::catalog::family_tensor(id, &vals).map_err(err)?;
        let l = mmsym_core::group::orbit_of(&w).len();
        let got = orbit_sum_checked(&w, l).map_err(err)?;
        ensure(got == gamma(want), || format!("family {id}: {got}"))?;
    }
    Ok("sigma', sigma'', sigma''' as expected".into())
}

fn family_nine() -> Outcome {
    let w = family_tensor_symbolic(9, 0).map_err(err)?;
    let s = orbit_sum_checked(&w, 4).map_err(err)?;
    let want = parse_polynomial("4*b^3").map_err(err)?;
    for i in 9..=12 {
        ensure(s.get(i) == &want, || format!("g{i} = {}", s.get(i)))?;
    }
    Ok("g9..g12 = 4*b^3".into())
}

fn catalog_lengths() -> Outcome {
    let checks = verify_catalog().map_err(err)?;
    ensure(checks.len() == 44, || format!("{} families", checks.len()))?;
    for c in &checks {
        let want = LENGTHS[usize::from(c.id) - 1];
        ensure(c.orbit_size == want, || {
            format!("family {}: orbit {}, expected {want}", c.id, c.orbit_size)
        })?;
        ensure(c.orbit_size * c.stabilizer_order == GROUP_ORDER, || {
            format!("family {}: {} * {}", c.id, c.orbit_size, c.stabilizer_order)
        })?;
    }
    Ok("44 families".into())
}

fn random_tensor(rng: &mut ChaCha8Rng) -> Tensor {
    let mut t = Tensor::zero();
    for _ in 0..rng.gen_range(1..=40) {
        let alpha = BasisIndex::from_code(rng.gen_range(0..729));
        let c = Cyclotomic::from_components(
            mmsym_core::arith::rational(rng.gen_range(-5..=5), 1),
            mmsym_core::arith::rational(rng.gen_range(-5..=5), 1),
            mmsym_core::arith::rational(rng.gen_range(-5..=5), 1),
            mmsym_core::arith::rational(rng.gen_range(-5..=5), 1),
        );
        t.add_at(alpha, &Polynomial::constant(c));
    }
    t
}

fn invariance_suite() -> Outcome {
    let g = group_g();
    ensure(g.len() == GROUP_ORDER, || format!("|G| = {}", g.len()))?;
    let t = matmul_tensor();
    for k in 0..g.len() {
        ensure(g.act(k, &t) == t, || format!("element {k} moves T"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for n in 0..20 {
        let w = random_tensor(&mut rng);
        let p = project(&w);
        ensure(project(&gamma_to_tensor(&p)) == p, || {
            format!("tensor {n}: p not idempotent")
        })?;
        for k in 0..g.len() {
            ensure(project(&g.act(k, &w)) == p, || {
                format!("tensor {n}: p(g w) != p(w) for element {k}")
            })?;
        }
        let mut sum = Tensor::zero();
        for k in 0..g.len() {
            sum.add_assign(&g.act(k, &w));
        }
        let inv = Polynomial::constant(Cyclotomic::from_rational(mmsym_core::arith::rational(1, 144)));
        let avg = sum.scale(&inv);
        ensure(avg == gamma_to_tensor(&p), || {
            format!("tensor {n}: average differs from p(w)")
        })?;
        ensure(group_average(&w) == avg, || {
            format!("tensor {n}: group_average differs")
        })?;
    }
    let mut odd = 0;
    for alpha in BasisIndex::all().filter(|a| !a.is_even()) {
        let e = Tensor::basis(alpha);
        let mut sum = Tensor::zero();
        for k in 0..g.len() {
            sum.add_assign(&g.act(k, &e));
        }
        ensure(sum.is_empty(), || format!("group sum of e_{alpha} is nonzero"))?;
        odd += 1;
    }
    Ok(format!("144 elements, 20 random tensors, {odd} odd indices"))
}

fn theorem() -> Outcome {
    // Independent count: multiplicity vectors over the tabulated lengths.
    fn count(lengths: &[usize], budget: usize) -> usize {
        match lengths.split_first() {
            None => 1,
            Some((&l, rest)) => (0..=budget / l).map(|m| count(rest, budget - m * l)).sum(),
        }
    }
    let brute = count(&LENGTHS, 23) - 1;
    ensure(brute == GOLDEN_MULTISETS_23, || format!("brute-force count {brute}"))?;

    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = mmsym_cli::run(
        ["mmsym", "verify", "--max-length", "23", "--report", "json"],
        &mut out,
        &mut errs,
    );
    ensure(code == 0, || format!("exit {code}: {}", String::from_utf8_lossy(&errs)))?;
    let report: serde_json::Value = serde_json::from_slice(&out).map_err(err)?;
    let n = report["multiset_count"].as_u64().unwrap_or(0) as usize;
    let certs = report["certificates"].as_array().map_or(0, Vec::len);
    let survivors = report["survivors"].as_array().map_or(usize::MAX, Vec::len);
    ensure(n == GOLDEN_MULTISETS_23 && certs == n && survivors == 0, || {
        format!("{n} multisets, {certs} certificates, {survivors} survivors")
    })?;
    Ok(format!("{certs} certificates, 0 survivors, exit 0"))
}

fn brent_systems() -> Outcome {
    let s = generic_system(23).map_err(err)?;
    ensure(s.equations.len() == 729 && s.variables.len() == 621, || {
        format!("{} equations, {} variables", s.equations.len(), s.variables.len())
    })?;
    let s27 = generic_system(27).map_err(err)?;
    let sol = assignment_from_terms(&trivial_decomposition()).map_err(err)?;
    let outcome = check_solution(&s27, &sol).map_err(err)?;
    ensure(outcome.holds(), || format!("{} equations fail", outcome.failing.len()))?;
    let back = BrentSystem::from_json(&s.export(ExportFormat::Json)).map_err(err)?;
    ensure(back == s, || "JSON round trip changed the system".into())?;
    Ok("729 equations, 621 variables, rank 27 solved, JSON round trip".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("class table", Duration::from_secs(1), class_table),
        ("projection of T", Duration::from_secs(1), projection_of_t),
        ("worked orbit-sum example", Duration::from_secs(1), worked_example),
        (
            "gamma table of families 24/29/32/38",
            Duration::from_secs(10),
            reference_gamma_table,
        ),
        ("sigma vectors", Duration::from_secs(1), sigma_vectors),
        ("family 9 coordinates", Duration::from_secs(1), family_nine),
        ("catalog lengths", Duration::from_secs(120), catalog_lengths),
        ("invariance suite", Duration::from_secs(60), invariance_suite),
        ("verification up to length 23", Duration::from_secs(300), theorem),
        ("Brent systems", Duration::from_secs(10), brent_systems),
    ];
    let mut results = BTreeMap::new();
    for (k, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if outcome.is_ok() && took > limit {
            outcome = Err(format!("took {took:.2?}, limit {limit:?}"));
        }
        match &outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({took:.2?})", k + 1),
            Err(detail) => println!("criterion {}: FAIL {name}: {detail} ({took:.2?})", k + 1),
        }
        results.insert(k + 1, outcome.is_ok());
    }
    let passed = results.values().filter(|ok| **ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
