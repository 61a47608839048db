//! The acceptance gate: one test per top-level criterion, each printing a
//! single `[PASS]`/`[FAIL]` line (visible with `--nocapture`).  Every
//! numeric bound below is either an exact structural fact, an independently
//! derived oracle value, or the library-wide tolerance of 1e-9.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use parcross::crossed::{
    build_crossed_product, conditional_expectation, cp_adjoint, cp_multiply, universal_norm,
    CrossedElement, CrossedProductAlgebra,
};
use parcross::fdalg::Element;
use parcross::fixtures;
use parcross::globalization::{
    construct_enveloping, validate_global_system, verify_globalization_limit, BasisOrder,
};
use parcross::inductive::{validate_inductive_system, verify_limit_theorem, InductiveSystem};
use parcross::linalg::cr;
use parcross::partial_action::PartialAction;
use parcross::report::Report;
use parcross::rokhlin::{
    canonical_test_set, check_tower, half_domain_grid_oracle, pushforward_tower, search_tower,
    RokhlinTower, DEFAULT_ITERS, DEFAULT_RESTARTS,
};
use parcross::traces::{
    check_invariance, trace_on_crossed, verify_trace_limit_identity, TraceWeights,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn criterion(n: usize, what: &str, f: impl FnOnce() -> Result<(), String>) {
    match f() {
        Ok(()) => println!("[PASS] criterion {n}: {what}"),
        Err(msg) => {
            println!("[FAIL] criterion {n}: {what} — {msg}");
            panic!("criterion {n} failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !($cond) {
            return Err(format!($($arg)*));
        }
    };
}

fn es(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn cp_of(action: &PartialAction) -> Result<CrossedProductAlgebra, String> {
    build_crossed_product(action, &TraceWeights::uniform(action.algebra())).map_err(es)
}

fn report_ok(name: &str, rep: &Report) -> Result<(), String> {
    if rep.passed() {
        Ok(())
    } else {
        let worst = rep.worst().map(|c| c.to_string()).unwrap_or_else(|| "empty".into());
        Err(format!("{name}: worst check {worst}"))
    }
}

/// A random restricted action small enough for full crossed-product
/// verification (same cap the library uses in its own random sequences).
fn small_crossed_action(rng: &mut ChaCha8Rng) -> PartialAction {
    loop {
        let action = fixtures::random_restricted_action(rng, 3, 2);
        let crossed_dim: usize = action.group().elements().map(|g| action.ideal(g).dim()).sum();
        if crossed_dim <= 20 {
            return action;
        }
    }
}

fn random_crossed_element(rng: &mut ChaCha8Rng, cp: &CrossedProductAlgebra) -> CrossedElement {
    let action = cp.system();
    let coeffs: Vec<Element> = action
        .group()
        .elements()
        .map(|g| fixtures::random_ideal_element(rng, action.ideal(g)))
        .collect();
    cp.element(coeffs, TOL).expect("coefficients constructed in the ideals")
}

fn s1_exact_tower() -> RokhlinTower {
    let s1 = fixtures::s1();
    let fe = s1.algebra().diagonal_element(&[cr(1.0), cr(0.0)]).expect("two entries");
    let fs = s1.algebra().diagonal_element(&[cr(0.0), cr(1.0)]).expect("two entries");
    RokhlinTower::new(vec![vec![fe, fs]]).expect("valid tower")
}

// ---------------------------------------------------------------------------
// 1. Crossed-product goldens
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_crossed_product_goldens() {
    criterion(1, "crossed products of the named systems have exact golden block data", || {
        let cp1 = cp_of(&fixtures::s1())?;
        ensure!(cp1.dim() == 4, "flip system: dimension {} instead of 4", cp1.dim());
        ensure!(cp1.block_dims() == [2], "flip system: blocks {:?} instead of [2]", cp1.block_dims());

        let cp2 = cp_of(&fixtures::s2())?;
        ensure!(cp2.dim() == 3, "half-domain system: dimension {} instead of 3", cp2.dim());
        ensure!(
            cp2.block_dims() == [1, 1, 1],
            "half-domain system: blocks {:?} instead of [1, 1, 1]",
            cp2.block_dims()
        );

        // The trivial group leaves the algebra untouched; the decomposition
        // reports dimensions in descending order by convention.
        let trivial = fixtures::trivial_action(&[2, 3]);
        let cpt = cp_of(&trivial)?;
        ensure!(cpt.dim() == 13, "trivial action: dimension {} instead of 13", cpt.dim());
        ensure!(
            cpt.block_dims() == [3, 2],
            "trivial action: blocks {:?} instead of [3, 2]",
            cpt.block_dims()
        );
        let mut recovered = cpt.block_dims().to_vec();
        recovered.sort_unstable();
        ensure!(
            recovered == [2, 3],
            "trivial action: block multiset {recovered:?} differs from the base algebra"
        );
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// 2. Norm and expectation invariants on random crossed elements
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_crossed_product_invariants_on_random_elements() {
    criterion(2, "norm axioms and expectation properties on 100 random elements per system", || {
        for (name, action) in
            [("flip", fixtures::s1()), ("half-domain", fixtures::s2()), ("zero-domain", fixtures::s3())]
        {
            let cp = cp_of(&action)?;
            let tau = TraceWeights::uniform(action.algebra());
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            for i in 0..100 {
                let x = random_crossed_element(&mut rng, &cp);
                let nx = universal_norm(&cp, &x).map_err(es)?;
                ensure!(
                    nx <= x.coeff_norm_sum() + TOL * (1.0 + nx),
                    "{name} #{i}: norm {nx} exceeds the coefficient-sum bound {}",
                    x.coeff_norm_sum()
                );
                let xstar_x = cp_multiply(&cp_adjoint(&x).map_err(es)?, &x).map_err(es)?;
                let nxx = universal_norm(&cp, &xstar_x).map_err(es)?;
                ensure!(
                    (nxx - nx * nx).abs() <= TOL * (1.0 + nx * nx),
                    "{name} #{i}: C*-identity broken: ‖x*x‖ = {nxx}, ‖x‖² = {}",
                    nx * nx
                );
                let ex = conditional_expectation(&x);
                ensure!(
                    ex.op_norm() <= nx + TOL * (1.0 + nx),
                    "{name} #{i}: expectation is not contractive"
                );
                let exx = conditional_expectation(&xstar_x);
                let (lo, _) = exx.spectrum_bounds();
                ensure!(lo >= -TOL, "{name} #{i}: E(x*x) has spectrum below zero: {lo}");
                if !x.is_zero(1e-12) {
                    let mass = tau.eval(&exx).map_err(es)?.re;
                    ensure!(mass > 1e-12, "{name} #{i}: E is not faithful: mass {mass}");
                }
                let a = fixtures::random_element(&mut rng, action.algebra());
                let na = universal_norm(&cp, &cp.embed(&a).map_err(es)?).map_err(es)?;
                ensure!(
                    (na - a.op_norm()).abs() <= TOL * (1.0 + a.op_norm()),
                    "{name} #{i}: embedding is not isometric: {na} vs {}",
                    a.op_norm()
                );
            }
        }
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// 3. Stage-map coherence on random inductive sequences
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_stage_map_coherence_on_random_sequences() {
    criterion(3, "stage maps of 25 random sequences compose coherently within 1e-9", || {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for case in 0..25 {
            let sys = fixtures::random_inductive_system(&mut rng).map_err(es)?;
            report_ok(&format!("case {case} laws"), &validate_inductive_system(&sys, TOL))?;
            let n = sys.num_stages();
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let direct = sys.stage_map(i, k).map_err(es)?;
                        let via = sys
                            .stage_map(j, k)
                            .map_err(es)?
                            .compose(&sys.stage_map(i, j).map_err(es)?)
                            .map_err(es)?;
                        let d = direct.distance(&via);
                        ensure!(
                            d <= TOL,
                            "case {case}: map {i}->{k} differs from {i}->{j}->{k} by {d:.3e}"
                        );
                    }
                }
            }
        }
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// 4. Limit theorem on named and random sequences
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_limit_theorem() {
    criterion(4, "crossing the limit equals the limit of crossed stages (named + 25 random)", || {
        let named: [(&str, InductiveSystem); 3] = [
            ("constant flip", fixtures::constant_system(&fixtures::s1(), 4).map_err(es)?),
            ("constant half-domain", fixtures::constant_system(&fixtures::s2(), 4).map_err(es)?),
            ("diagonal embedding", fixtures::diag_embed_seq().map_err(es)?),
        ];
        for (name, sys) in named {
            let n = sys.num_stages() - 1;
            let rep = verify_limit_theorem(&sys, n, TOL).map_err(es)?;
            report_ok(name, &rep)?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for case in 0..25 {
            let sys = fixtures::random_inductive_system(&mut rng).map_err(es)?;
            let n = sys.num_stages() - 1;
            let rep = verify_limit_theorem(&sys, n, TOL).map_err(es)?;
            report_ok(&format!("random case {case}"), &rep)?;
        }
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// 5. Globalization goldens, round-trips, and limits
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_globalization() {
    criterion(5, "enveloping actions: goldens, 25 random round-trips, and limit compatibility", || {
        // Half-domain system: the envelope adds one translated copy of the
        // missing block, giving three scalar blocks with the flip 1 ↔ 2.
        let (gs2, rep2) = construct_enveloping(&fixtures::s2(), BasisOrder::Forward, TOL).map_err(es)?;
        report_ok("half-domain envelope construction", &rep2)?;
        ensure!(
            gs2.algebra().block_dims() == [1, 1, 1],
            "half-domain envelope blocks {:?} instead of [1, 1, 1]",
            gs2.algebra().block_dims()
        );
        ensure!(
            gs2.embedded_blocks().map_err(es)? == vec![0, 2],
            "half-domain image blocks {:?} instead of [0, 2]",
            gs2.embedded_blocks().map_err(es)?
        );
        let eta2 = gs2.envelope();
        ensure!(
            eta2.block_image(1, 0) == 0 && eta2.block_image(1, 1) == 2 && eta2.block_image(1, 2) == 1,
            "half-domain envelope does not swap the second block with the added copy"
        );

        // Zero-domain system on one scalar block: envelope is two blocks
        // exchanged by the group.
        let (gs3, rep3) = construct_enveloping(&fixtures::s3(), BasisOrder::Forward, TOL).map_err(es)?;
        report_ok("zero-domain envelope construction", &rep3)?;
        ensure!(
            gs3.algebra().block_dims() == [1, 1],
            "zero-domain envelope blocks {:?} instead of [1, 1]",
            gs3.algebra().block_dims()
        );
        ensure!(
            gs3.embedded_blocks().map_err(es)? == vec![0],
            "zero-domain image blocks {:?} instead of [0]",
            gs3.embedded_blocks().map_err(es)?
        );
        let eta3 = gs3.envelope();
        ensure!(
            eta3.block_image(1, 0) == 1 && eta3.block_image(1, 1) == 0,
            "zero-domain envelope does not flip its two blocks"
        );

        // Round-trips: envelope a random restricted action, then confirm the
        // restriction back to the image reproduces it.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for case in 0..25 {
            let action = fixtures::random_restricted_action(&mut rng, 3, 2);
            let (gs, rep) = construct_enveloping(&action, BasisOrder::Forward, TOL).map_err(es)?;
            report_ok(&format!("random case {case} construction"), &rep)?;
            let full = validate_global_system(&gs, TOL).map_err(es)?;
            report_ok(&format!("random case {case} round-trip"), &full)?;
        }

        // Limit compatibility on the constant sequences.
        for (name, base) in [("half-domain", fixtures::s2()), ("zero-domain", fixtures::s3())] {
            let sys = fixtures::constant_system(&base, 4).map_err(es)?;
            let rep = verify_globalization_limit(&sys, 3, TOL).map_err(es)?;
            report_ok(&format!("constant {name} sequence limit"), &rep)?;
        }
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// 6. Rokhlin towers: exact check, search accuracy, oracle band, transport
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_rokhlin_towers() {
    criterion(6, "towers: exact flip tower, search accuracy, oracle band, and transport", || {
        // (a) the canonical flip tower is exact
        let s1 = fixtures::s1();
        let tower = s1_exact_tower();
        let f = canonical_test_set(&s1);
        let dr = check_tower(&s1, &tower, &f, TOL, true).map_err(es)?;
        ensure!(dr.max_defect() <= 1e-12, "canonical flip tower defect {}", dr.max_defect());

        // (b) the search finds it from scratch to below 1e-6
        let (_, found) =
            search_tower(&s1, 0, &f, 1e-6, 0, DEFAULT_RESTARTS, DEFAULT_ITERS, false).map_err(es)?;
        ensure!(
            found.max_defect() < 1e-6,
            "search on the flip system stalled at {}",
            found.max_defect()
        );

        // (c) on the half-domain system the best single-level defect is 1/6;
        // the search must land in a band around the independent grid oracle
        let oracle = half_domain_grid_oracle(2e-4);
        ensure!((oracle - 1.0 / 6.0).abs() < 1e-3, "grid oracle {oracle} drifted from 1/6");
        let s2 = fixtures::s2();
        let f2 = canonical_test_set(&s2);
        let (_, best) =
            search_tower(&s2, 0, &f2, 0.5, 0, DEFAULT_RESTARTS, DEFAULT_ITERS, false).map_err(es)?;
        let b = best.max_defect();
        ensure!(b >= oracle - 0.01, "defect {b} beats the feasibility oracle {oracle}");
        ensure!(b <= oracle + 0.05, "search failed to approach the oracle: {b} vs {oracle}");

        // (d) pushing the exact tower along the constant sequence preserves
        // every defect to 1e-9
        let sys = fixtures::constant_system(&s1, 4).map_err(es)?;
        let pushed = pushforward_tower(&sys, 0, &tower, 3).map_err(es)?;
        let chain = sys.stage_map(0, 3).map_err(es)?;
        let f_img: Vec<Element> = f
            .iter()
            .map(|x| chain.apply(x).map_err(es))
            .collect::<Result<_, _>>()?;
        let before = check_tower(&s1, &tower, &f, TOL, true).map_err(es)?;
        let after = check_tower(sys.stage(3), &pushed, &f_img, TOL, true).map_err(es)?;
        ensure!(
            (before.max_defect() - after.max_defect()).abs() <= TOL,
            "transport changed the defect: {} -> {}",
            before.max_defect(),
            after.max_defect()
        );
        ensure!(after.passed(), "transported tower no longer passes");
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// 7. Traces: the invariance/trace equivalence, the golden defect, limits
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_traces() {
    criterion(7, "invariance ⇔ trace property (50 random pairs), golden defect 0.4, limits", || {
        // (a) the biconditional with a separation margin
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..50 {
            let action = small_crossed_action(&mut rng);
            let tau = if case % 2 == 0 {
                TraceWeights::uniform(action.algebra())
            } else {
                fixtures::random_faithful_trace(&mut rng, action.algebra())
            };
            let cp = cp_of(&action)?;
            let inv = check_invariance(&tau, &action, TOL).map_err(es)?;
            let tr = trace_on_crossed(&tau, &cp, TOL).map_err(es)?;
            ensure!(
                tr.defect_of("equivalence_forward") == Some(0.0),
                "case {case}: invariant state fails the trace property"
            );
            ensure!(
                tr.defect_of("equivalence_backward") == Some(0.0),
                "case {case}: tracial state is not invariant"
            );
            let inv_d = inv.max_defect();
            let tp = tr.defect_of("trace_property").ok_or("missing trace_property check")?;
            ensure!(
                (inv_d <= TOL) == (tp <= TOL),
                "case {case}: invariance defect {inv_d:.3e} and trace defect {tp:.3e} disagree"
            );
            if inv_d > 0.01 {
                ensure!(
                    tp > 0.001,
                    "case {case}: visible invariance defect {inv_d:.3e} but tiny trace defect {tp:.3e}"
                );
            }
        }

        // (b) the golden skewed state on the flip system: invariance defect
        // exactly 0.4, witnessed by the stated pair of crossed elements
        let s1 = fixtures::s1();
        let tau = TraceWeights::new(s1.algebra().clone(), vec![0.7, 0.3]).map_err(es)?;
        let inv = check_invariance(&tau, &s1, TOL).map_err(es)?;
        ensure!(
            (inv.max_defect() - 0.4).abs() <= 1e-9,
            "golden invariance defect {} instead of 0.4",
            inv.max_defect()
        );
        let cp = cp_of(&s1)?;
        let p0 = s1.algebra().diagonal_element(&[cr(1.0), cr(0.0)]).map_err(es)?;
        let p1 = s1.algebra().diagonal_element(&[cr(0.0), cr(1.0)]).map_err(es)?;
        let x = cp.term(1, &p0, TOL).map_err(es)?;
        let y = cp.term(1, &p1, TOL).map_err(es)?;
        let tau_e = |z: &CrossedElement| -> Result<f64, String> {
            Ok(tau.eval(&conditional_expectation(z)).map_err(es)?.re)
        };
        let xy = tau_e(&cp_multiply(&x, &y).map_err(es)?)?;
        let yx = tau_e(&cp_multiply(&y, &x).map_err(es)?)?;
        ensure!((xy - 0.7).abs() <= 1e-9, "τE(xy) = {xy} instead of 0.7");
        ensure!((yx - 0.3).abs() <= 1e-9, "τE(yx) = {yx} instead of 0.3");
        ensure!(((xy - yx).abs() - 0.4).abs() <= 1e-9, "witnessed defect {} instead of 0.4", (xy - yx).abs());

        // (c) limit identity on the constant sequences with equal weights
        for (name, base) in [("flip", fixtures::s1()), ("half-domain", fixtures::s2())] {
            let sys = fixtures::constant_system(&base, 4).map_err(es)?;
            let taus: Vec<TraceWeights> = (0..4)
                .map(|_| TraceWeights::new(base.algebra().clone(), vec![0.5, 0.5]))
                .collect::<Result<_, _>>()
                .map_err(es)?;
            let rep = verify_trace_limit_identity(&sys, &taus, 3, TOL).map_err(es)?;
            report_ok(&format!("constant {name} sequence"), &rep)?;
        }
        Ok(())
    });
}

// ---------------------------------------------------------------------------
// 8. CLI determinism and round-trips
// ---------------------------------------------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parcross"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run_cli(args: &[&str]) -> Result<Output, String> {
    bin().args(args).output().map_err(es)
}

#[test]
fn criterion_8_cli_determinism_and_round_trips() {
    criterion(8, "CLI: byte-identical reports, fixture round-trips, exit codes", || {
        // determinism of a seeded search, stdout and --out alike
        let input = data("s1.json");
        let out_a = std::env::temp_dir().join("parcross_acceptance_a.json");
        let out_b = std::env::temp_dir().join("parcross_acceptance_b.json");
        let args = |o: &Path| {
            vec![
                "rokhlin".to_string(),
                "search".to_string(),
                input.to_str().unwrap().to_string(),
                "--k".into(),
                "0".into(),
                "--eps".into(),
                "1e-6".into(),
                "--seed".into(),
                "7".into(),
                "--restarts".into(),
                "2".into(),
                "--iters".into(),
                "80".into(),
                "--out".into(),
                o.to_str().unwrap().to_string(),
            ]
        };
        let first = bin().args(args(&out_a)).output().map_err(es)?;
        let second = bin().args(args(&out_b)).output().map_err(es)?;
        ensure!(first.stdout == second.stdout, "same seed produced different stdout bytes");
        let fa = std::fs::read(&out_a).map_err(es)?;
        let fb = std::fs::read(&out_b).map_err(es)?;
        ensure!(fa == fb, "same seed produced different report files");
        let _ = std::fs::remove_file(&out_a);
        let _ = std::fs::remove_file(&out_b);

        // every bundled fixture emits byte-identically to the committed file
        // and validates with exit code 0
        for name in [
            "s1",
            "s2",
            "s3",
            "constant-s1-seq",
            "constant-s2-seq",
            "constant-s3-seq",
            "diag-embed-seq",
        ] {
            let emitted = run_cli(&["fixtures", "emit", name])?;
            ensure!(emitted.status.code() == Some(0), "emit {name} failed");
            let bundled = std::fs::read(data(&format!("{name}.json"))).map_err(es)?;
            ensure!(emitted.stdout == bundled, "emit {name} differs from the bundled file");

            let path = data(&format!("{name}.json"));
            let validated = run_cli(&["validate", path.to_str().unwrap()])?;
            ensure!(
                validated.status.code() == Some(0),
                "validate {name} exited {:?}",
                validated.status.code()
            );
        }

        // the half-domain crossed product report names its three blocks
        let crossed = run_cli(&["crossed", data("s2.json").to_str().unwrap()])?;
        ensure!(crossed.status.code() == Some(0), "crossed exited nonzero");
        let text = String::from_utf8(crossed.stdout).map_err(es)?;
        ensure!(text.contains("[1, 1, 1]"), "crossed report lacks the block structure");

        // an unreachable tolerance makes the search report failure (exit 1)
        let failing = run_cli(&[
            "rokhlin",
            "search",
            data("s2.json").to_str().unwrap(),
            "--k",
            "0",
            "--eps",
            "0.1",
            "--seed",
            "0",
        ])?;
        ensure!(
            failing.status.code() == Some(1),
            "search below the floor exited {:?} instead of 1",
            failing.status.code()
        );

        // malformed input names the field and exits 2
        let mut broken: serde_json::Value =
            serde_json::from_slice(&std::fs::read(data("s2.json")).map_err(es)?).map_err(es)?;
        broken["system"]["action"]["s"] = serde_json::json!("frozen");
        let bad_path = std::env::temp_dir().join("parcross_acceptance_bad.json");
        std::fs::write(&bad_path, serde_json::to_vec(&broken).map_err(es)?).map_err(es)?;
        let bad = run_cli(&["validate", bad_path.to_str().unwrap()])?;
        ensure!(bad.status.code() == Some(2), "bad marker exited {:?} instead of 2", bad.status.code());
        let err = String::from_utf8(bad.stderr).map_err(es)?;
        ensure!(err.contains("system.action.s"), "error does not name the field: {err}");
        let _ = std::fs::remove_file(&bad_path);
        Ok(())
    });
}
