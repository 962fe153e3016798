//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs the `hlgap` binary where the criterion is about the tool and
//! the library where it is about numerics.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use hlgap::bridge::{bridged_inverse, build_bridged, verify_null_quadratic, BridgeMatrix};
use hlgap::graph::WeightedGraph;
use hlgap::matrix::{determinant, invert, sym_eigen, Block, SymMatrix};
use hlgap::optimizer::{optimize_with, SearchOptions};
use hlgap::sdp::{certify_bridged_lmi, gap_analytic, gap_bisection, relaxation_report};
use hlgap::table2::REFERENCE_ROWS;
use hlgap::Error;

const SPECTRUM_TOL: f64 = 1e-3;
const SPECTRUM_TIME_LIMIT: Duration = Duration::from_millis(100);
const TABLE_TOL: f64 = 1e-4;
const TABLE_REQUIRED: usize = 14;
const TABLE_TIME_LIMIT: Duration = Duration::from_secs(60);
const BISECTION_TOL: f64 = 2e-8;
const SPECTRAL_TOL: f64 = 1e-9;
const INVERSE_TOL: f64 = 1e-9;
const NULL_QUADRATIC_TOL: f64 = 1e-10;
const DET_REL_TOL: f64 = 1e-8;
const DIAGONAL_TOL: f64 = 1e-12;
const MARGIN_REL: f64 = 1e-8;
const PERTURBATION: f64 = 1e-3;
const TRIALS: usize = 100;

fn hlgap(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_hlgap")).args(args).output().expect("hlgap runs");
    (out, start.elapsed())
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

type Verdict = (bool, String);

fn spectra() -> Verdict {
    let q = (5f64.sqrt() + 1.0) / 2.0;
    let cases: [(&str, [f64; 6]); 4] = [
        ("F0bar", [2.1149, 1.0, 1.0 / q, -0.2541, -q, -1.8608]),
        ("F0", [3.0680, 1.7437, 1.5616, -1.105, -2.5616, -2.7067]),
        ("B0bar", [2.0, 1.0, 1.0, -1.0, -1.0, -2.0]),
        ("B0", [3.3723, 2.3723, 1.0, -1.0, -2.3723, -3.3723]),
    ];
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for (name, expected) in cases {
        let (out, t) = hlgap(&["spectrum", "--graph", &format!("builtin:{name}"), "--json"]);
        if !out.status.success() {
            return (false, format!("spectrum of {name} failed"));
        }
        let got: Vec<f64> = serde_json::from_value(json_of(&out)["spectrum"].clone()).unwrap();
        if got.len() != 6 {
            return (false, format!("{name}: {} eigenvalues", got.len()));
        }
        for (g, e) in got.iter().zip(expected) {
            worst = worst.max((g - e).abs());
        }
        slowest = slowest.max(t);
    }
    (
        worst <= SPECTRUM_TOL && slowest < SPECTRUM_TIME_LIMIT,
        format!(
            "max |Δλ| = {worst:.2e} (tol {SPECTRUM_TOL:e}), slowest run {:.3} s (limit {:.1} s)",
            slowest.as_secs_f64(),
            SPECTRUM_TIME_LIMIT.as_secs_f64()
        ),
    )
}

fn table(json: &Value, elapsed: Duration) -> Verdict {
    let rows = json["rows"].as_array().expect("rows");
    let mut matched = 0;
    let mut below = Vec::new();
    let mut exceeds = Vec::new();
    for r in rows {
        let best = r["best_gap"].as_f64().unwrap();
        let paper = r["paper_gap"].as_f64().unwrap();
        let label = format!("{}-{}-{}", r["ga"].as_str().unwrap(), r["gb"].as_str().unwrap(), r["max_degree"]);
        if (best - paper).abs() <= TABLE_TOL {
            matched += 1;
        } else if best > paper {
            exceeds.push(format!("{label} {best:.6} > {paper:.6}"));
        }
        if best < paper - TABLE_TOL {
            below.push(format!("{label} {best:.6} < {paper:.6}"));
        }
    }
    let ok = rows.len() == 16 && matched >= TABLE_REQUIRED && below.is_empty() && elapsed < TABLE_TIME_LIMIT;
    let mut detail = format!(
        "{matched}/{} rows within {TABLE_TOL:e} (need {TABLE_REQUIRED}), {:.1} s (limit {} s)",
        rows.len(),
        elapsed.as_secs_f64(),
        TABLE_TIME_LIMIT.as_secs()
    );
    if !exceeds.is_empty() {
        detail += &format!("; exceeds-paper: {}", exceeds.join(", "));
    }
    if !below.is_empty() {
        detail += &format!("; below paper: {}", below.join(", "));
    }
    (ok, detail)
}

fn random_sym(rng: &mut StdRng, n: usize, range: f64) -> SymMatrix {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-range..range)).collect()).collect();
    SymMatrix::from_upper_fn(n, |i, j| rows[i][j])
}

fn min_abs_eigenvalue(m: &SymMatrix) -> f64 {
    sym_eigen(m).unwrap().values.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()))
}

fn sdp_equivalence(rng: &mut StdRng) -> Verdict {
    let mut worst_bisection = 0.0f64;
    let mut worst_spectral = 0.0f64;
    let mut done = 0;
    while done < TRIALS {
        let n = rng.gen_range(2..=8);
        let c = random_sym(rng, n, 2.0);
        let values = sym_eigen(&c).unwrap().values;
        let mixed = values[0] > 0.0 && values[n - 1] < 0.0;
        if !mixed || min_abs_eigenvalue(&c) < 1e-3 {
            continue;
        }
        let analytic = gap_analytic(&c).unwrap().gap;
        let bisection = gap_bisection(&c, 1e-12).unwrap().gap;
        let spectral = WeightedGraph::new(c).spectral_gap().unwrap();
        worst_bisection = worst_bisection.max((analytic - bisection).abs());
        worst_spectral = worst_spectral.max((analytic - spectral).abs());
        done += 1;
    }
    (
        worst_bisection <= BISECTION_TOL && worst_spectral <= SPECTRAL_TOL,
        format!(
            "{TRIALS} matrices: max |analytic − bisection| = {worst_bisection:.2e} (tol {BISECTION_TOL:e}), \
             max |analytic − spectral| = {worst_spectral:.2e} (tol {SPECTRAL_TOL:e})"
        ),
    )
}

fn block_inverse(rng: &mut StdRng) -> Verdict {
    let mut worst_inv = 0.0f64;
    let mut worst_ul = 0.0f64;
    let mut worst_null = 0.0f64;
    let mut worst_det = 0.0f64;
    let mut done = 0;
    while done < TRIALS {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=m / 2);
        let mut set: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            set.swap(i, rng.gen_range(0..=i));
        }
        set.truncate(k);

        let a = random_sym(rng, n, 2.0);
        // B⁻¹ with a zero principal block on the bridge set
        let x = random_sym(rng, m, 2.0);
        let x =
            SymMatrix::from_upper_fn(m, |i, j| if set.contains(&i) && set.contains(&j) { 0.0 } else { x.get(i, j) });
        if min_abs_eigenvalue(&a) < 0.2 || min_abs_eigenvalue(&x) < 0.2 {
            continue;
        }
        let b = invert(&x).unwrap();
        let voltage = |rng: &mut StdRng, len: usize| -> Vec<f64> {
            (0..len).map(|_| rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 }).collect()
        };
        let da = voltage(rng, n);
        let db = voltage(rng, m);
        let htilde = Block::from_fn(n, m, |_, j| if set.contains(&j) && rng.gen_bool(0.5) { 1.0 } else { 0.0 });
        let bm = BridgeMatrix::new(htilde, set.clone(), &da, &db).unwrap();
        let ga = WeightedGraph::new(a);
        let gb = WeightedGraph::new(b);

        let c = build_bridged(&ga, &gb, &bm).unwrap();
        let closed = bridged_inverse(&ga, &gb, &bm).unwrap();
        let direct = invert(c.adjacency()).unwrap();
        worst_inv = worst_inv.max(closed.max_abs_diff(&direct));
        let a_inv = ga.inverse().unwrap();
        worst_ul = worst_ul.max(closed.principal(&(0..n).collect::<Vec<_>>()).max_abs_diff(&a_inv));
        let hbh = bm.h().matmul(&gb.inverse().unwrap().matmul(&bm.h().transpose()));
        worst_null = worst_null.max(hbh.max_abs());
        if !verify_null_quadratic(&gb, &bm).unwrap() {
            return (false, "verify_null_quadratic rejected a bridgeable instance".into());
        }
        let det_c = determinant(c.adjacency()).unwrap();
        let det_ab = determinant(ga.adjacency()).unwrap() * determinant(gb.adjacency()).unwrap();
        worst_det = worst_det.max((det_c - det_ab).abs() / det_ab.abs());
        done += 1;
    }
    (
        worst_inv <= INVERSE_TOL && worst_ul == 0.0 && worst_null <= NULL_QUADRATIC_TOL && worst_det <= DET_REL_TOL,
        format!(
            "{TRIALS} instances: max entry error {worst_inv:.2e} (tol {INVERSE_TOL:e}), upper-left vs A⁻¹ {worst_ul:.1e}, \
             max |HB⁻¹Hᵀ| {worst_null:.2e} (tol {NULL_QUADRATIC_TOL:e}), det rel. error {worst_det:.2e} (tol {DET_REL_TOL:e})"
        ),
    )
}

fn relaxation(rng: &mut StdRng) -> Verdict {
    let f0 = [1.0, 1.0, 2.0, 0.5, 2.0, 4.0];
    let b0 = [1.0, 1.0, 2.0, 1.0, 1.0, 2.0];
    let mut worst_diag = 0.0f64;
    let mut worst_l = 0.0f64;
    for t in 0..TRIALS {
        let (da, db) = match t % 4 {
            0 => (&f0, &f0),
            1 => (&f0, &b0),
            2 => (&b0, &f0),
            _ => (&b0, &b0),
        };
        let htilde = Block::from_fn(6, 6, |_, _| if rng.gen_bool(0.3) { 1.0 } else { 0.0 });
        let r = relaxation_report(&htilde, da, db).unwrap();
        worst_diag = worst_diag.max(r.diagonal_residual);
        worst_l = worst_l.max(r.l_max_abs).max(r.cauchy_schwarz_bound);
    }
    (
        worst_diag <= DIAGONAL_TOL && worst_l == 0.0,
        format!("{TRIALS} bridges: diagonal residual {worst_diag:.2e} (tol {DIAGONAL_TOL:e}), max |L| = {worst_l:e} (must be 0)"),
    )
}

fn certification_and_oracle() -> (Verdict, Verdict) {
    let mut cert_fail = Vec::new();
    let mut oracle_fail = Vec::new();
    let mut worst_ratio = f64::NEG_INFINITY;
    for r in &REFERENCE_ROWS {
        let label = format!("{}-{}-{:?}", r.ga, r.gb, r.max_degree);
        let spec = r.spec().unwrap();
        let pruned = optimize_with(&spec, &SearchOptions::default(), None).unwrap();
        let brute = optimize_with(&spec, &SearchOptions { no_pruning: true, workers: None }, None).unwrap();
        if pruned.best_gap != brute.best_gap || pruned.best_htilde != brute.best_htilde {
            oracle_fail.push(label.clone());
        }

        let bm = spec.bridge_matrix(&pruned.best_htilde).unwrap();
        let (mu, eta) = (pruned.certificate.mu, pruned.certificate.eta);
        match certify_bridged_lmi(spec.ga(), spec.gb(), &bm, mu, eta) {
            Ok(c) => {
                // the certificate enforces margin ≥ −1e-8·scale per block; report the raw worst
                for m in c.margins {
                    worst_ratio = worst_ratio.max(-m / MARGIN_REL);
                }
            }
            Err(e) => cert_fail.push(format!("{label}: {e}")),
        }
        match certify_bridged_lmi(spec.ga(), spec.gb(), &bm, mu + PERTURBATION, eta) {
            Err(Error::InfeasiblePoint { .. }) => {}
            other => cert_fail.push(format!("{label}: μ + {PERTURBATION:e} not rejected ({other:?})")),
        }
    }
    let cert = (
        cert_fail.is_empty(),
        if cert_fail.is_empty() {
            format!(
                "16 optima certified (worst −margin/{MARGIN_REL:e} = {worst_ratio:.2e}), all rejected at μ + {PERTURBATION:e}"
            )
        } else {
            cert_fail.join("; ")
        },
    );
    let oracle = (
        oracle_fail.is_empty(),
        if oracle_fail.is_empty() {
            "pruned search equals brute force on all 16 instances (gap and H̃ identical)".to_string()
        } else {
            format!("mismatch on {}", oracle_fail.join(", "))
        },
    );
    (cert, oracle)
}

fn determinism(reference: &[u8]) -> Verdict {
    let runs = [
        vec!["table2", "--json"],
        vec!["table2", "--json", "--workers", "1"],
        vec!["table2", "--json", "--workers", "4"],
    ];
    for args in &runs {
        let (out, _) = hlgap(args);
        if out.stdout != reference {
            return (false, format!("`hlgap {}` differs from the first run", args.join(" ")));
        }
    }
    (true, format!("{} repeated runs byte-identical ({} bytes), workers default/1/4", runs.len() + 1, reference.len()))
}

fn main() {
    let mut rng = StdRng::seed_from_u64(0x6a70);
    let mut results: Vec<(&str, Verdict)> = Vec::new();

    results.push(("1 spectra reproduction", spectra()));

    let (out, elapsed) = hlgap(&["table2", "--json"]);
    let table_json = out.status.success().then(|| json_of(&out));
    results.push((
        "2 table reproduction",
        match &table_json {
            Some(j) => table(j, elapsed),
            None => (false, String::from_utf8_lossy(&out.stderr).into_owned()),
        },
    ));

    results.push(("3 SDP representation equivalence", sdp_equivalence(&mut rng)));
    results.push(("4 block inverse correctness", block_inverse(&mut rng)));
    results.push(("5 relaxation tightness", relaxation(&mut rng)));
    let (cert, oracle) = certification_and_oracle();
    results.push(("6 LMI certification", cert));
    results.push(("7 oracle equivalence", oracle));
    results.push(("8 determinism", determinism(&out.stdout)));

    let mut failed = 0;
    for (name, (ok, detail)) in &results {
        if !ok {
            failed += 1;
        }
        println!("{} [{name}] {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {}/{} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
