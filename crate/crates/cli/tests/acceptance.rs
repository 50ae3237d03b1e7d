//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use quivhom::evidence::{build_one_point_report, GlDimBound, ReportVerdict};
use quivhom::exactlin::Field;
use quivhom::matrixcat::{
    kernel_ideal, match_staircase, staircase, verify_bimodule_projectivity, verify_representable_slices,
};
use quivhom::modcat::{ext_dims, hom_space, tensor_over_cat, tor, yoneda_projective, ProjDim};
use quivhom::pathcat::{build_category, ideal_from_generators, opposite, IdealData, PresentedCategory};
use quivhom::quiver::{parse_module_spec, parse_spec};
use quivhom::sie::{big_tor, check_strongly_idempotent, psi_map, IdealContext, TestModules, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

#[path = "../../core/tests/common/mod.rs"]
mod common;
use common::{arb_quiver, build, dual_of_right, oracle_ext, random_module};

const YONEDA_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_LIMIT: Duration = Duration::from_secs(30);
const STAIRCASE_LIMIT: Duration = Duration::from_secs(60);
const SIE_DEGREE: usize = 8;
const REPORT_DEGREE: usize = 6;
const FUZZ_INPUTS: usize = 1_000_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn yoneda() -> Check {
    let start = Instant::now();
    let mut runner = TestRunner::deterministic();
    let strategy = arb_quiver();
    let mut cats = Vec::new();
    while cats.len() < 10 {
        let spec = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let pc = build_category(&spec).map_err(|e| e.to_string())?;
        if pc.category().total_dim() <= 30 {
            cats.push(pc.category().clone());
        }
    }
    let mut checks = 0;
    for (k, c) in cats.iter().enumerate() {
        let op = Arc::new(opposite(c));
        for seed in 0..50 {
            let n = Arc::new(random_module(c, (k * 50 + seed) as u64));
            for x in 0..c.num_objects() {
                let p = Arc::new(yoneda_projective(c, x));
                let hom = hom_space(&p, &n).len();
                ensure(hom == n.dim(x), || {
                    format!("category {k}, module {seed}: Hom(C({x},-), N) = {hom}, N({x}) = {}", n.dim(x))
                })?;
                let t = tensor_over_cat(&yoneda_projective(&op, x), &n).map_err(|e| e.to_string())?.dim();
                ensure(t == n.dim(x), || {
                    format!("category {k}, module {seed}: C(-,{x}) ⊗ N = {t}, N({x}) = {}", n.dim(x))
                })?;
                checks += 2;
            }
        }
    }
    Ok(format!("{checks} identities, {}", timed(YONEDA_LIMIT, start)?))
}

fn ext_tor_oracle() -> Check {
    let start = Instant::now();
    let cats = [
        build("vertices 1 2 3; arrows a: 1 -> 2, b: 2 -> 3").category().clone(),
        build("truncate 3; vertices p; arrows x: p -> p; relations x*x*x").category().clone(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for k in 0..50 {
        let c = &cats[k % 2];
        let op = Arc::new(opposite(c));
        let m = Arc::new(random_module(c, rng.gen()));
        let n = random_module(c, rng.gen());
        let i = rng.gen_range(0..=3);
        let ext = ext_dims(&m, &n, i).map_err(|e| e.to_string())?[i];
        let want = oracle_ext(&m, &n, i)[i];
        ensure(ext == want, || format!("instance {k}: Ext^{i} = {ext}, oracle {want}"))?;
        let b = random_module(&op, rng.gen());
        let t = tor(&b, &m, i).map_err(|e| e.to_string())?.dim;
        let want = oracle_ext(&m, &dual_of_right(&b, c), i)[i];
        ensure(t == want, || format!("instance {k}: Tor_{i} = {t}, oracle {want}"))?;
    }
    Ok(format!("50 instances, {}", timed(ORACLE_LIMIT, start)?))
}

fn vertex_ideal(c: &Arc<PresentedCategory>, x: usize) -> IdealData {
    ideal_from_generators(c, &[(x, x, c.identity_vector(x))])
}

fn basis_ideal(c: &Arc<PresentedCategory>, x: usize, y: usize, f: usize) -> IdealData {
    let mut v = vec![c.field().zero(); c.dim(x, y)];
    v[f] = c.field().one();
    ideal_from_generators(c, &[(x, y, v)])
}

fn criteria_agree() -> Check {
    let a2 = build("vertices 1 2; arrows a: 1 -> 2").category().clone();
    let a3 = build("vertices 1 2 3; arrows a: 1 -> 2, b: 2 -> 3; relations b*a").category().clone();
    let a3_free = build("vertices 1 2 3; arrows a: 1 -> 2, b: 2 -> 3").category().clone();
    let dual = build("truncate 2; vertices p; arrows x: p -> p; relations x*x").category().clone();
    let mut corpus: Vec<(String, IdealData)> = vec![
        ("zero in A3".into(), IdealData::zero(&a3_free)),
        ("<e1> in A2".into(), vertex_ideal(&a2, 0)),
        ("<e2> in A2".into(), vertex_ideal(&a2, 1)),
        ("<e2> in A3/(ba)".into(), vertex_ideal(&a3, 1)),
        ("<e1> in A3".into(), vertex_ideal(&a3_free, 0)),
        ("<e2> in A3".into(), vertex_ideal(&a3_free, 1)),
        ("<a> in A2".into(), basis_ideal(&a2, 0, 1, 0)),
        ("<x> in K[x]/x^2".into(), basis_ideal(&dual, 0, 0, 1)),
    ];
    for n in 2..=4 {
        let s = staircase(n, Field::Prime(32003)).map_err(|e| e.to_string())?;
        corpus.push((format!("staircase-{n} kernel"), kernel_ideal(&s.extension).map_err(|e| e.to_string())?.ideal));
    }
    let (mut pass, mut fail) = (0, 0);
    for (name, ideal) in &corpus {
        let ctx = IdealContext::new(ideal).map_err(|e| e.to_string())?;
        let cert =
            check_strongly_idempotent(&ctx, SIE_DEGREE, &TestModules::standard(&ctx)).map_err(|e| e.to_string())?;
        let v: Vec<Verdict> = ["b", "d", "e", "f"]
            .iter()
            .map(|id| cert.criterion(id).map_or(Verdict::NotEvaluated, |c| c.verdict))
            .collect();
        ensure(v.iter().all(|x| *x == v[0] && *x != Verdict::NotEvaluated), || {
            format!("{name}: (b),(d),(e),(f) = {v:?}")
        })?;
        ensure(cert.consistent, || format!("{name}: certificate marked inconsistent"))?;
        if v[0] == Verdict::Pass {
            pass += 1
        } else {
            fail += 1
        }
    }
    Ok(format!("{} ideals at degree {SIE_DEGREE}: {pass} pass, {fail} fail", corpus.len()))
}

fn negative_control() -> Check {
    let c = build("truncate 2; vertices p; arrows x: p -> p; relations x*x").category().clone();
    let ctx = IdealContext::new(&basis_ideal(&c, 0, 0, 1)).map_err(|e| e.to_string())?;
    let cert = check_strongly_idempotent(&ctx, SIE_DEGREE, &TestModules::standard(&ctx)).map_err(|e| e.to_string())?;
    ensure(!cert.idempotent && cert.idempotency_witness.as_deref() == Some("x"), || {
        format!("idempotency witness {:?}", cert.idempotency_witness)
    })?;
    ensure(cert.verdict == Verdict::Fail, || "verdict is not FAIL".into())?;
    // C/I = K, so π_*K = S and TOR_1(C/I, S) = I/I² = K; the quotient side Tor_1^K(K, K) = 0.
    let s = Arc::new(quivhom::modcat::simple(ctx.q(), 0).map_err(|e| e.to_string())?);
    let t1 = big_tor(&ctx, &Arc::new(ctx.pullback(&s)), 1).map_err(|e| e.to_string())?;
    ensure(t1.dims() == [1], || format!("TOR_1 dims {:?}", t1.dims()))?;
    let sop = quivhom::modcat::simple(&ctx.qop, 0).map_err(|e| e.to_string())?;
    let psi = psi_map(&ctx, &sop, &s, 1).map_err(|e| e.to_string())?;
    ensure((psi.parent_dim, psi.quotient_dim, psi.iso) == (1, 0, false), || format!("ψ_1: {psi:?}"))?;
    let w = cert.criterion("d").and_then(|c| c.witness.clone()).ok_or("no ψ witness")?;
    ensure((w.degree, w.dimension, w.compared_with) == (1, 1, Some(0)), || format!("ψ witness {w:?}"))?;
    Ok("witness x, Tor_1 comparison 1 vs 0".into())
}

fn staircase_kernel_structure() -> Check {
    let start = Instant::now();
    for n in 2..=4 {
        let s = staircase(n, Field::Prime(32003)).map_err(|e| e.to_string())?;
        let m = match_staircase(&s.presented, &s.extension).map_err(|e| e.to_string())?;
        ensure(m.holds(), || format!("n = {n}: presentation {m:?}"))?;
        let k = kernel_ideal(&s.extension).map_err(|e| e.to_string())?;
        let slices = verify_representable_slices(&s.extension, &k).map_err(|e| e.to_string())?;
        ensure(slices.iter().all(|c| c.projective), || format!("n = {n}: a slice is not projective"))?;
        let b = verify_bimodule_projectivity(&s.extension, &k, SIE_DEGREE).map_err(|e| e.to_string())?;
        for p in &b.pairs {
            ensure(p.ideal == p.into_point * p.out_of_point, || format!("n = {n}: {p:?}"))?;
        }
        ensure(b.projective_dimension == ProjDim::Exactly(0) && b.holds(), || format!("n = {n}: {b:?}"))?;
    }
    Ok(format!("n = 2, 3, 4, {}", timed(STAIRCASE_LIMIT, start)?))
}

fn reports_supported() -> Check {
    for n in 2..=4 {
        let s = staircase(n, Field::Prime(32003)).map_err(|e| e.to_string())?;
        let r = build_one_point_report(&s.extension, &format!("staircase-{n}"), REPORT_DEGREE, Some(&s.presented))
            .map_err(|e| e.to_string())?;
        let h = &r.hypotheses;
        let c = &r.consequences;
        let checks = [
            ("verdict", r.verdict == ReportVerdict::Supported),
            ("shortcut", h.strong_idempotency.via_shortcut && h.strong_idempotency.verdict == Verdict::Pass),
            ("pd", h.bimodule_projective_dimension == ProjDim::Exactly(0)),
            ("perfect", c.perfect_preservation.all_finite && c.perfect_preservation.max_pd.is_some_and(|d| d <= 1)),
            ("ext", c.ext_comparison.len() == n * n * (REPORT_DEGREE + 1) && c.ext_comparison.iter().all(|x| x.iso)),
            ("gldim", matches!(c.gldim_quotient, GlDimBound::AtMost(d) if d <= 1) && c.gldim_parent.is_finite()),
        ];
        for (name, ok) in checks {
            ensure(ok, || format!("n = {n}: {name} ({})", r.verdict))?;
        }
    }
    Ok(format!("n = 2, 3, 4 SUPPORTED at degree {REPORT_DEGREE}"))
}

fn run_cli(args: &[&str]) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_quivhom")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("quivhom-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let dual = dir.join("dual.quiver");
    let (spec, _) = run_cli(&["example", "dual-numbers"])?;
    std::fs::write(&dual, spec).map_err(|e| e.to_string())?;
    let dual = dual.to_str().ok_or("non-utf8 temp path")?.to_string();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["one-point", "--truncate", "4", "--format", "json"],
        vec!["report", &dual, "X", "--format", "json"],
        vec!["check-sie", &dual, "X", "--format", "json"],
        vec!["self-check", "--seed", "7", "--format", "json"],
    ];
    let mut digests = Vec::new();
    for args in &invocations {
        let (a, _) = run_cli(args)?;
        let (b, _) = run_cli(args)?;
        let (ha, hb) = (Sha256::digest(&a), Sha256::digest(&b));
        ensure(ha == hb && !a.is_empty(), || format!("`{}` differs between runs", args.join(" ")))?;
        digests.push(ha.iter().take(6).map(|b| format!("{b:02x}")).collect::<String>());
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} invocations, sha256 {}", invocations.len(), digests.join(" ")))
}

const SEEDS: &[&str] = &[
    "vertices 1 2 3\narrows\n  a: 1 -> 2\n  b: 2 -> 3\nrelations\n  b*a\nmodule M\n  dims 1 1 0\n  map a = [[1]]\nideal I\n  gen id(2)\ncheck sie I\n",
    "field q\ntruncate 3\nvertices p\narrows\n  x: p -> p\nrelations\n  x*x*x\n",
    "field gf:7\nvertices 1 2 3 4\narrows a: 1 -> 2, b: 2 -> 4, c: 1 -> 3, d: 3 -> 4\nrelations b*a - 2/3 d*c\n",
];

fn mutate(rng: &mut ChaCha8Rng, seed: &[u8]) -> Vec<u8> {
    let mut v = seed.to_vec();
    for _ in 0..rng.gen_range(1..=4) {
        let pos = rng.gen_range(0..=v.len());
        match rng.gen_range(0..3) {
            0 if pos < v.len() => v[pos] = rng.gen(),
            1 if pos < v.len() => {
                v.remove(pos);
            }
            _ => v.insert(pos, *b" \n:*-+/[],;0123456789abxp".get(rng.gen_range(0..26)).unwrap_or(&b'x')),
        }
    }
    v
}

fn parser_fuzz() -> Check {
    let start = Instant::now();
    let base = parse_spec(SEEDS[0].as_bytes()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xf022);
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut crash = None;
    for k in 0..FUZZ_INPUTS {
        let input: Vec<u8> = match k % 4 {
            0 => (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect(),
            1 => (0..rng.gen_range(0..96)).map(|_| *b"vertices arrows relations module ideal gen dims map truncate field check 1 2 p a b x : -> * [ ] , ; \n".get(rng.gen_range(0..100)).unwrap_or(&b' ')).collect(),
            _ => mutate(&mut rng, SEEDS[k % SEEDS.len()].as_bytes()),
        };
        let r = catch_unwind(AssertUnwindSafe(|| {
            let ok = parse_spec(&input).is_ok();
            let _ = parse_module_spec(&input, &base);
            ok
        }));
        match r {
            Ok(true) => accepted += 1,
            Ok(false) => rejected += 1,
            Err(_) => {
                crash = Some(String::from_utf8_lossy(&input).into_owned());
                break;
            }
        }
    }
    std::panic::set_hook(hook);
    if let Some(input) = crash {
        return Err(format!("panic on input {input:?}"));
    }
    Ok(format!("{FUZZ_INPUTS} inputs, {accepted} accepted, {rejected} diagnosed, {:.2?}", start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 yoneda and co-yoneda identities", yoneda),
        ("2 ext and tor against the greedy oracle", ext_tor_oracle),
        ("3 criteria (b), (d), (e), (f) agree", criteria_agree),
        ("4 negative control on dual numbers", negative_control),
        ("5 one-point extension kernel structure", staircase_kernel_structure),
        ("6 staircase reports supported", reports_supported),
        ("7 deterministic cli output", determinism),
        ("8 parser robustness", parser_fuzz),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
