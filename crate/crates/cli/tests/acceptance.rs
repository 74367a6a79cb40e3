//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde_json::Value;
use supertower_cli::{parse_curve, report, CurveFile};
use supertower_core::divisors::{
    inclusion_matrix, rank_mod_ell, smith_normal_form, BasePoint, DivisorTower, PointLabel, SymbolicDivisor,
};
use supertower_core::redcheck::check_differences;
use supertower_core::strata::euler_phi_prime_power;
use supertower_core::testing::{
    brute_force_offending_pairs, fl_rank, genus_by_ramification_divisor, random_disjoint_family, random_linear_model,
    random_normalized_model, random_pre_model, rng, substitution_identity_holds, CorpusParams,
};
use supertower_core::{
    analyze, block_shape, certify, classify_exceptional, int, rat, stratify, tower_table, AnalysisOptions, CaseLabel,
    CertifyOptions, ConditionReport, CurveModel, Pivot, Poly, SplitStatus, UnitConvention,
};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

const CORPUS_SIZE: u64 = 256;
const FAMILIES: u64 = 64;
const PRE_MODELS: u64 = 128;
const LINEAR_MODELS: u64 = 120;

fn corpus() -> Vec<CurveModel> {
    (0..CORPUS_SIZE).map(|i| random_normalized_model(&mut rng(0x5eed_0000 + i), CorpusParams::default())).collect()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn criterion_1(models: &[CurveModel]) -> Check {
    let start = Instant::now();
    for (k, m) in models.iter().enumerate() {
        let st = stratify(m).map_err(|e| e.to_string())?;
        let table = tower_table(&st).map_err(|e| e.to_string())?;
        let fibers: Vec<(u32, u64)> =
            (0..m.places().len()).map(|i| (st.stratum_of(i), m.places()[i].degree() as u64)).collect();
        let direct = 2 * genus_by_ramification_divisor(m.ell(), m.n(), &fibers);
        let from_blocks: i128 = (1..=m.n())
            .map(|s| block_shape(&table, s).map(|b| b.total_dim()))
            .sum::<Result<i128, _>>()
            .map_err(|e| e.to_string())?;
        let formula: i128 =
            (1..=m.n()).map(|s| euler_phi_prime_power(m.ell(), s) * (st.count_below(s) as i128 - 2)).sum();
        ensure!(
            direct == from_blocks && from_blocks == formula,
            "model {k} ({m}): 2g = {direct}, blocks = {from_blocks}, formula = {formula}"
        );
        ensure!(m.places().len() <= 8 && m.places().iter().all(|p| p.degree() <= 3), "model {k} out of range");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("{} models, {elapsed:.2?}", models.len()))
}

fn branch_points(m: &CurveModel) -> Vec<BasePoint> {
    let mut pts: Vec<BasePoint> = m
        .places()
        .iter()
        .enumerate()
        .flat_map(|(place, p)| (0..p.degree() as u32).map(move |root| BasePoint::Root { place, root }))
        .collect();
    pts.push(BasePoint::Infinity);
    pts.push(BasePoint::Generic(0));
    pts
}

fn criterion_2(models: &[CurveModel]) -> Check {
    let mut checks = 0usize;
    for (k, m) in models.iter().enumerate() {
        let st = stratify(m).map_err(|e| e.to_string())?;
        let t = DivisorTower::new(&st).map_err(|e| e.to_string())?;
        let ell = m.ell() as i128;
        let e = |x: &dyn std::fmt::Display| format!("model {k}: {x}");
        for xi in branch_points(m) {
            let j = t.stratum(xi).map_err(|x| e(&x))?;
            for s in 1..=m.n() {
                let prev = t.fiber_divisor(xi, s - 1).map_err(|x| e(&x))?;
                let here = t.fiber_divisor(xi, s).map_err(|x| e(&x))?;
                let pulled = t.pullback(&prev).map_err(|x| e(&x))?;
                let composite = t.point_pullback(xi, s).map_err(|x| e(&x))?;
                match j {
                    Some(j) if j < s => {
                        ensure!(pulled == here.scale(ell), "model {k}: (b) fails at {xi}, s = {s}");
                        ensure!(composite == here.scale(ell.pow(s - j)), "model {k}: (c) fails at {xi}, s = {s}");
                    }
                    _ => {
                        ensure!(pulled == here, "model {k}: (a) fails at {xi}, s = {s}");
                        ensure!(composite == here, "model {k}: (d) fails at {xi}, s = {s}");
                        let base = &t.fiber_divisor(xi, 0).map_err(|x| e(&x))?
                            - &t.fiber_divisor(t.pivot(), 0).map_err(|x| e(&x))?;
                        let expected = &here - &t.fiber_divisor(t.pivot(), s).map_err(|x| e(&x))?.scale(ell.pow(s));
                        ensure!(
                            t.pullback_to(&base, s).map_err(|x| e(&x))? == expected,
                            "model {k}: corollary fails at {xi}, s = {s}"
                        );
                    }
                }
                ensure!(here.is_reduced(), "model {k}: [{xi}]_{s} is not reduced");
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (point, level) pairs"))
}

fn criterion_3(models: &[CurveModel]) -> Check {
    let mut levels = 0usize;
    for (k, m) in models.iter().enumerate() {
        let st = stratify(m).map_err(|e| e.to_string())?;
        let t = DivisorTower::new(&st).map_err(|e| e.to_string())?;
        let ell = m.ell();
        for s in 1..=m.n() {
            let r = t.r_divisor(s).map_err(|e| e.to_string())?;
            ensure!(r.degree() == 0, "model {k}, s = {s}: deg R = {}", r.degree());
            let u = t.coordinates(&r, false).map_err(|e| e.to_string())?;
            ensure!(u.iter().all(|c| c.rem_euclid(ell as i128) != 0), "model {k}, s = {s}: some u is 0 mod ell");
            let pivot = r.coeff(&PointLabel { base: t.pivot(), level: s, fiber: 0 });
            ensure!(pivot.rem_euclid(ell as i128) != 0, "model {k}, s = {s}: pivot coefficient is 0 mod ell");

            let w = t.ws_presentation(s).map_err(|e| e.to_string())?;
            let count = st.count_below(s) as usize;
            ensure!(w.dim == count - 2, "model {k}, s = {s}: dim {} vs #S[<s] - 2 = {}", w.dim, count - 2);
            let basis: Vec<Vec<i128>> = w.basis.rows().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            ensure!(fl_rank(&basis, ell) == count - 1, "model {k}, s = {s}: basis is not independent mod ell");
            let rel = vec![u.clone()];
            let independent = count - 1 - fl_rank(&rel, ell);
            ensure!(independent == w.dim, "model {k}, s = {s}: oracle dim {independent} vs {}", w.dim);
            let big: Vec<Vec<BigInt>> = rel.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            ensure!(count - 1 - rank_mod_ell(&big, ell) == w.dim, "model {k}, s = {s}: SNF rank disagrees");
            levels += 1;
        }
    }
    Ok(format!("{levels} levels"))
}

fn criterion_4() -> Check {
    let one = BigInt::from(1);
    let mut sizes = 0usize;
    for i in 0..FAMILIES {
        let family = random_disjoint_family(&mut rng(0xd15c_0000 + i));
        ensure!(family.iter().all(SymbolicDivisor::is_reduced), "family {i}: a divisor is not reduced");
        for (a, d) in family.iter().enumerate() {
            for e in &family[a + 1..] {
                ensure!(d.disjoint_from(e), "family {i}: supports overlap");
            }
        }
        let (_, matrix) = inclusion_matrix(&family);
        let snf = smith_normal_form(&matrix);
        ensure!(snf.verify(&matrix), "family {i}: SNF certificate fails");
        ensure!(snf.diagonal.len() == family.len(), "family {i}: rank deficit");
        ensure!(snf.diagonal.iter().all(|d| *d == one), "family {i}: elementary divisors {:?}", snf.diagonal);
        sizes += family.len();
    }
    Ok(format!("{FAMILIES} families, {sizes} divisors"))
}

fn criterion_5() -> Check {
    let (mut infinity_branched, mut oversized, mut finite_pivot) = (0, 0, 0);
    for i in 0..PRE_MODELS {
        let m = random_pre_model(&mut rng(0x9e00_0000 + i), CorpusParams::default());
        let big_n = m.cover_degree();
        infinity_branched += m.infinity_is_branched() as usize;
        oversized += m.places().iter().any(|p| p.exponent() < 0 || p.exponent() >= big_n) as usize;
        let (out, record) = m.normalize().map_err(|e| format!("pre-model {i}: {e}"))?;
        ensure!(out.is_normalized(), "pre-model {i}: not flagged normalized");
        ensure!(
            out.places().iter().all(|p| 0 < p.exponent() && p.exponent() < big_n && p.poly().is_monic()),
            "pre-model {i}: exponents or leading coefficients out of range"
        );
        ensure!(out.infinity_exponent().rem_euclid(big_n) == 0, "pre-model {i}: infinity is branched");
        ensure!(out.branch_set().len() == out.places().len(), "pre-model {i}: branch set differs from places");
        if let Pivot::Finite(x) = &record.pivot {
            finite_pivot += 1;
            ensure!(m.places().iter().all(|p| p.poly().eval(x) != int(0)), "pre-model {i}: pivot is a root");
        }
        ensure!(substitution_identity_holds(&m, &out, &record), "pre-model {i}: substitution identity fails");
        let (again, _) = out.normalize().map_err(|e| e.to_string())?;
        ensure!(again == out, "pre-model {i}: normalize is not idempotent");
    }
    ensure!(infinity_branched > 0 && oversized > 0, "corpus lacks infinity-branched or oversized inputs");
    Ok(format!(
        "{PRE_MODELS} pre-models ({infinity_branched} infinity-branched, {oversized} with exponents outside (0, N), {finite_pivot} finite pivots)"
    ))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let text = fs::read_to_string(fixtures().join("picard.curve")).map_err(|e| e.to_string())?;
    let curve = parse_curve(&text).map_err(|e| e.to_string())?;
    let a = analyze(&curve.model, &AnalysisOptions::default()).map_err(|e| e.to_string())?;
    let exps: Vec<i64> = a.normalized.places().iter().map(|p| p.exponent()).collect();
    ensure!(a.normalized.ell() == 3 && a.normalized.n() == 1, "wrong header");
    ensure!(
        exps.iter().copied().collect::<BTreeSet<_>>() == BTreeSet::from([1, 2]) && exps.len() == 5,
        "multiplicities {exps:?}"
    );
    let table = a.table.as_ref().ok_or("no tower table")?;
    ensure!(table.genus() == 3, "g = {}", table.genus());
    ensure!(table.row(1).m == 3, "m_1 = {}", table.row(1).m);
    let level = &a.levels[0];
    ensure!(level.shape.to_string() == "[psi_1, psi_1(-1)]", "shape {}", level.shape);
    ensure!(level.shape.psi_dim == 3, "dim psi_1 = {}", level.shape.psi_dim);
    let shape = a.shape.as_ref().ok_or("no shape")?;
    ensure!(shape.total_dim == 6, "total dimension {}", shape.total_dim);
    let labels: Vec<CaseLabel> = level.exceptional.iter().map(|c| c.label).collect();
    ensure!(labels == [CaseLabel::A], "cases {labels:?}");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("g = 3, m_1 = 3, {}, cases {{a}}, {elapsed:.2?}", level.shape))
}

fn flags(r: &ConditionReport) -> [bool; 5] {
    [
        r.total_ramification,
        r.lambda_unit,
        r.roots_integral,
        r.differences_units,
        r.splits_over_ten != SplitStatus::FailedUnknown,
    ]
}

fn report_for(lambda: supertower_core::Rat, factors: &[(&[i64], i64)]) -> Result<ConditionReport, String> {
    let f: Vec<(Poly, i64)> = factors.iter().map(|(c, e)| (Poly::from_ints(c), *e)).collect();
    let m = CurveModel::from_factors(3, 1, lambda, &f).map_err(|e| e.to_string())?;
    let (m, _) = m.normalize().map_err(|e| e.to_string())?;
    let st = stratify(&m).map_err(|e| e.to_string())?;
    certify(&m, &st, &CertifyOptions::default()).map_err(|e| e.to_string())
}

fn criterion_7() -> Check {
    let base = report_for(int(1), &[(&[0, 1], 1), (&[-1, 1], 1), (&[-2, 1], 1)])?;
    ensure!(base.is_certified(), "x(x-1)(x-2) is not certified: {base}");
    let base_flags = flags(&base);
    let perturbed = [
        ("lambda = 1/3", report_for(rat(1, 3), &[(&[0, 1], 1), (&[-1, 1], 1), (&[-2, 1], 1)])?, 1),
        ("roots {0,1,3}", report_for(int(1), &[(&[0, 1], 1), (&[-1, 1], 1), (&[-3, 1], 1)])?, 3),
        ("factor 3x - 6", report_for(int(1), &[(&[0, 1], 1), (&[-1, 1], 1), (&[-6, 3], 1)])?, 1),
    ];
    for (name, r, slot) in &perturbed {
        let f = flags(r);
        let changed: Vec<usize> = (0..5).filter(|&i| f[i] != base_flags[i]).collect();
        ensure!(changed == [*slot], "{name}: flipped checks {changed:?}, expected [{slot}]");
        ensure!(!r.is_certified(), "{name}: still certified");
    }

    let mut offending = 0usize;
    for i in 0..LINEAR_MODELS {
        let ell = [2u64, 3, 5][i as usize % 3];
        let n = 1 + (i as u32 / 3) % 2;
        let m = random_linear_model(&mut rng(0x1e00_0000 + i), ell, n, 7);
        let (ok, off) = check_differences(&m, UnitConvention::EllAdic).map_err(|e| e.to_string())?;
        let pairs: Vec<(usize, usize)> = off.iter().filter_map(|o| o.second.map(|s| (o.first, s))).collect();
        ensure!(pairs.len() == off.len(), "linear model {i}: discriminant offense on a linear place");
        ensure!(pairs == brute_force_offending_pairs(&m), "linear model {i}: disagrees with brute force");
        ensure!(ok == pairs.is_empty(), "linear model {i}: verdict inconsistent");
        offending += pairs.len();
    }
    Ok(format!("3 perturbations, {LINEAR_MODELS} linear models ({offending} offending pairs)"))
}

fn criterion_8(models: &[CurveModel]) -> Check {
    let mut all: Vec<CurveModel> = models.to_vec();
    for i in 0..PRE_MODELS {
        let m = random_pre_model(&mut rng(0x9e00_0000 + i), CorpusParams::default());
        all.push(m.normalize().map_err(|e| e.to_string())?.0);
    }
    for i in 0..LINEAR_MODELS {
        let m = random_linear_model(&mut rng(0x1e00_0000 + i), [2u64, 3, 5][i as usize % 3], 1 + (i as u32 / 3) % 2, 7);
        all.push(m.normalize().map_err(|e| e.to_string())?.0);
    }
    let (mut checked, mut rational, mut nontrivial) = (0usize, 0usize, 0usize);
    for (k, m) in all.iter().enumerate() {
        let st = stratify(m).map_err(|e| e.to_string())?;
        let r0 = st.count(0);
        if r0 == 0 {
            continue;
        }
        let ell = m.ell() as i64;
        let has_rational = m.places().iter().any(|p| p.degree() == 1 && p.exponent() % ell != 0);
        rational += has_rational as usize;
        for s in 1..=m.n() {
            let cases = classify_exceptional(&st, s, has_rational).map_err(|e| e.to_string())?;
            ensure!(cases.first().map(|c| c.label) == Some(CaseLabel::A), "model {k}, s = {s}: (a) missing");
            for c in &cases {
                ensure!(CaseLabel::ALL.contains(&c.label), "model {k}: unknown case");
                ensure!(c.d_s == c.label.d_s(), "model {k}: d_s mismatch");
                ensure!(c.d_s <= 4 && r0 % c.d_s as u64 == 0, "model {k}, s = {s}: d_s = {} vs r0 = {r0}", c.d_s);
            }
            if has_rational {
                ensure!(cases.len() == 1, "model {k}, s = {s}: rational point but cases {:?}", cases.len());
            }
            nontrivial += (cases.len() > 1) as usize;
            checked += 1;
        }
    }
    Ok(format!("{checked} levels over {} models ({rational} with a rational point in S[0], {nontrivial} levels with exceptional cases)", all.len()))
}

struct Run {
    code: i32,
    stdout: Vec<u8>,
}

fn run(args: &[&str]) -> Result<Run, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_supertower")).args(args).output().map_err(|e| e.to_string())?;
    Ok(Run { code: out.status.code().unwrap_or(-1), stdout: out.stdout })
}

fn expected_exit(name: &str) -> Option<i32> {
    Some(match name {
        "cusp.curve" | "genus_one.curve" | "a_genus_one.curve" | "b_symmetric.curve" => 0,
        "picard.curve"
        | "reducible.curve"
        | "tower.curve"
        | "c_genus_three.curve"
        | "d_quartic.curve"
        | "e_scaled.curve" => 1,
        "malformed.curve" | "bad_rational.curve" => 2,
        "composite_ell.curve"
        | "empty_factors.curve"
        | "n_zero.curve"
        | "reducible_factor.curve"
        | "zero_lambda.curve" => 3,
        _ => return None,
    })
}

fn fixture_files() -> Result<Vec<PathBuf>, String> {
    let mut files = Vec::new();
    for dir in [fixtures(), fixtures().join("picard"), fixtures().join("errors")] {
        for entry in fs::read_dir(&dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            if path.is_file() {
                files.push(path);
            }
        }
    }
    files.sort();
    Ok(files)
}

fn criterion_9() -> Check {
    let files = fixture_files()?;
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let expected = expected_exit(&name).ok_or(format!("no expected exit code for {name}"))?;
        let p = path.to_str().ok_or("non-UTF-8 path")?;
        let first = run(&["analyze", p])?;
        let second = run(&["analyze", p])?;
        ensure!(first.code == expected, "{name}: analyze exit {} (expected {expected})", first.code);
        ensure!(first.stdout == second.stdout, "{name}: analyze output differs between runs");
        let norm = run(&["normalize", p])?;
        let norm_expected = if expected == 1 { 0 } else { expected };
        ensure!(norm.code == norm_expected, "{name}: normalize exit {} (expected {norm_expected})", norm.code);
        if expected <= 1 {
            let text = String::from_utf8(first.stdout).map_err(|_| format!("{name}: report is not UTF-8"))?;
            ensure!(!text.contains('\r') && text.ends_with('\n'), "{name}: line endings");
            let value: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            ensure!(report::render(&value) == text, "{name}: report is not in canonical form");
            ensure!(value["schema_version"] == "1", "{name}: schema_version missing");
            let echo = CurveFile::from_json(&value["input"].to_string()).and_then(CurveFile::into_curve);
            let original = parse_curve(&fs::read_to_string(path).map_err(|e| e.to_string())?);
            ensure!(echo.ok() == original.ok(), "{name}: echoed model does not round-trip");
        }
    }

    let all = tempfile::tempdir().map_err(|e| e.to_string())?;
    for path in &files {
        fs::copy(path, all.path().join(path.file_name().unwrap())).map_err(|e| e.to_string())?;
    }
    let picard = fixtures().join("picard");
    for (dir, code) in [(picard.as_path(), 0), (all.path(), 1)] {
        let d = dir.to_str().ok_or("non-UTF-8 path")?;
        let one = run(&["batch", d, "--jobs", "1"])?;
        let four = run(&["batch", d, "--jobs", "4"])?;
        let again = run(&["batch", d, "--jobs", "4"])?;
        ensure!(one.code == code && four.code == code, "batch {d}: exit {} / {}", one.code, four.code);
        ensure!(one.stdout == four.stdout && four.stdout == again.stdout, "batch {d}: output depends on --jobs");
    }
    Ok(format!("{} fixtures, batch --jobs 1 and 4 byte-identical", files.len()))
}

fn main() {
    let start = Instant::now();
    let models = corpus();
    let criteria: Vec<Criterion> = vec![
        ("genus equals the block-dimension sum", Box::new(|| criterion_1(&models))),
        ("pullback identities and corollary", Box::new(|| criterion_2(&models))),
        ("W_s presentation", Box::new(|| criterion_3(&models))),
        ("SNF torsion-freeness", Box::new(criterion_4)),
        ("normalization postconditions", Box::new(criterion_5)),
        ("Picard genus-3 fixture", Box::new(criterion_6)),
        ("arithmetic certifier", Box::new(criterion_7)),
        ("exceptional-case classifier", Box::new(|| criterion_8(&models))),
        ("CLI determinism and exit codes", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    let elapsed = start.elapsed();
    println!("acceptance finished in {elapsed:.2?}");
    if failed > 0 || elapsed > Duration::from_secs(60) {
        std::process::exit(1);
    }
}
