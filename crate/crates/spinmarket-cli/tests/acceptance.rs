//! Acceptance suite: each test asserts one release criterion, and the test
//! name doubles as the pass/fail line in the `cargo test` output. Run with
//! `--nocapture` to see per-criterion measurements.
//!
//! Criteria 1–4 share ten full simulations at default parameters (seeds
//! 1..=10), computed once; expect roughly four to five minutes of wall time
//! on one core for the whole suite.

use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinmarket::dynamics::update_site;
use spinmarket::stats::{
    acf, fit_power_law, jarque_bera, jarque_bera_from_moments, shapiro_wilk, AcfCurve, StatsReport,
};
use spinmarket::{
    build_report, magnetization_to_returns, run_simulation, InitMode, Mapping, ModelParams,
    SpinLattice,
};

// ---------------------------------------------------------------------------
// Shared default-parameter runs (criteria 1-4)

struct SeedRun {
    seed: u64,
    report: StatsReport,
    /// max/min ratio of the per-1000-sweep standard deviation of m.
    vol_window_ratio: f64,
}

fn default_runs() -> &'static [SeedRun] {
    static RUNS: OnceLock<Vec<SeedRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        (1..=10u64)
            .map(|seed| {
                let params = ModelParams { seed, ..ModelParams::default() };
                let output = run_simulation(&params, &[]).expect("default run");
                let returns =
                    magnetization_to_returns(&output.series, params.delta_t, Mapping::MDiff)
                        .expect("returns")
                        .standardize()
                        .expect("standardize");
                let report = build_report(&returns, 150, (1, 150)).expect("report");

                let m = output.series.values();
                let mut min_sd = f64::INFINITY;
                let mut max_sd = f64::NEG_INFINITY;
                for chunk in m.chunks_exact(1000) {
                    let mean = chunk.iter().sum::<f64>() / chunk.len() as f64;
                    let var = chunk.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                        / chunk.len() as f64;
                    let sd = var.sqrt();
                    min_sd = min_sd.min(sd);
                    max_sd = max_sd.max(sd);
                }
                SeedRun { seed, report, vol_window_ratio: max_sd / min_sd }
            })
            .collect()
    })
}

#[test]
fn criterion_1_absolute_return_acf_power_law_exponent() {
    let mut in_band = 0;
    let mut detail = String::new();
    for run in default_runs() {
        let eta = run.report.powerlaw.eta;
        let ok = (0.15..=0.45).contains(&eta);
        in_band += usize::from(ok);
        detail.push_str(&format!(
            "  seed {:2}: eta = {eta:+.3} (r2 = {:.3}) {}\n",
            run.seed,
            run.report.powerlaw.r_squared,
            if ok { "in [0.15, 0.45]" } else { "OUT of [0.15, 0.45]" }
        ));
    }
    println!("criterion 1: eta in [0.15, 0.45] for {in_band}/10 seeds (need >= 8)\n{detail}");
    assert!(
        in_band >= 8,
        "absolute-return ACF power-law exponent landed in [0.15, 0.45] for only \
         {in_band}/10 default-parameter seeds (need 8):\n{detail}"
    );
}

#[test]
fn criterion_2_leptokurtosis_and_normality_rejection() {
    let mut passing = 0;
    let mut detail = String::new();
    for run in default_runs() {
        let r = &run.report;
        let ok = r.kurtosis_raw > 3.0 && r.jb_pvalue < 0.05;
        passing += usize::from(ok);
        detail.push_str(&format!(
            "  seed {:2}: kurtosis = {:.3}, jb_p = {:.3e}, |skew| = {:.4}\n",
            run.seed,
            r.kurtosis_raw,
            r.jb_pvalue,
            r.skewness.abs()
        ));
        // The report must assemble with a nonzero (sign-agnostic) skewness.
        assert!(r.skewness.abs() > 0.0, "seed {}: skewness is exactly zero", run.seed);
    }
    println!("criterion 2: heavy tails + normality rejected for {passing}/10 seeds (need >= 9)\n{detail}");
    assert!(passing >= 9, "kurtosis > 3 and jb_p < 0.05 held for only {passing}/10 seeds:\n{detail}");
}

#[test]
fn criterion_3_raw_return_autocorrelation_vanishes() {
    let mut detail = String::new();
    let mut all_ok = true;
    for run in default_runs() {
        let curve = &run.report.acf_returns;
        let band = 2.0 / (curve.n() as f64).sqrt();
        let window = &curve.rho()[5..=150];
        let mean_abs = window.iter().map(|r| r.abs()).sum::<f64>() / window.len() as f64;
        let inside = window.iter().filter(|r| r.abs() <= band).count();
        let frac = inside as f64 / window.len() as f64;
        let ok = mean_abs < 0.1 && frac >= 0.8;
        all_ok &= ok;
        detail.push_str(&format!(
            "  seed {:2}: mean|rho(5..150)| = {mean_abs:.4} (< 0.1), in-band = {:.1}% (>= 80%)\n",
            run.seed,
            100.0 * frac
        ));
    }
    println!("criterion 3: raw-return ACF vanishes\n{detail}");
    assert!(all_ok, "raw-return autocorrelation failed the white-noise checks:\n{detail}");
}

#[test]
fn criterion_4_volatility_regimes_switch_within_a_run() {
    let mut detail = String::new();
    let mut all_ok = true;
    for run in default_runs() {
        let ok = run.vol_window_ratio >= 5.0;
        all_ok &= ok;
        detail.push_str(&format!(
            "  seed {:2}: max/min per-1000-sweep sd of m = {:.1} (>= 5)\n",
            run.seed, run.vol_window_ratio
        ));
    }
    println!("criterion 4: quiet and turbulent volatility regimes\n{detail}");
    assert!(all_ok, "per-window volatility of m never varied five-fold:\n{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 5: exact stationary distribution on a 2x2 lattice

/// Independent neighbour enumeration for the 2x2 torus: sites are flat
/// indices `row * 2 + col`; vertical and horizontal neighbours each appear
/// twice because wrapping reaches the same site from both directions.
fn field_2x2(spins: [i8; 4], site: usize, coupling: f64) -> f64 {
    let (row, col) = (site / 2, site % 2);
    let vertical = spins[(1 - row) * 2 + col];
    let horizontal = spins[row * 2 + (1 - col)];
    coupling * 2.0 * f64::from(vertical + horizontal)
}

fn state_spins(state: usize) -> [i8; 4] {
    let mut spins = [0i8; 4];
    for (site, spin) in spins.iter_mut().enumerate() {
        *spin = if state & (1 << site) != 0 { 1 } else { -1 };
    }
    spins
}

/// Stationary distribution of the random-site heat-bath chain, from the
/// explicit 16-state transition matrix (built independently of the library's
/// lattice code) by power iteration.
fn stationary_2x2(beta: f64, coupling: f64) -> [f64; 16] {
    let mut transition = [[0.0f64; 16]; 16];
    for (state, row) in transition.iter_mut().enumerate() {
        let spins = state_spins(state);
        for site in 0..4 {
            let h = field_2x2(spins, site, coupling);
            let p_up = 1.0 / (1.0 + (-2.0 * beta * h).exp());
            let up_state = state | (1 << site);
            let down_state = state & !(1 << site);
            row[up_state] += 0.25 * p_up;
            row[down_state] += 0.25 * (1.0 - p_up);
        }
    }
    let mut pi = [1.0f64 / 16.0; 16];
    loop {
        let mut next = [0.0f64; 16];
        for (state, &mass) in pi.iter().enumerate() {
            for (target, &p) in transition[state].iter().enumerate() {
                next[target] += mass * p;
            }
        }
        let delta: f64 = pi.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if delta < 1e-15 {
            return pi;
        }
    }
}

#[test]
fn criterion_5_two_by_two_lattice_matches_exact_stationary_law() {
    let (beta, alpha, coupling) = (0.5, 0.0, 1.0);
    let pi = stationary_2x2(beta, coupling);
    assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut lattice = SpinLattice::from_rng(2, InitMode::Random, &mut rng).unwrap();
    let encode = |lat: &SpinLattice| -> usize {
        (0..4).map(|site| usize::from(lat.spin(site) > 0) << site).sum()
    };

    for _ in 0..10_000 {
        let site = rng.random_range(0..4);
        update_site(&mut lattice, site, beta, alpha, coupling, &mut rng);
    }

    // Tally every 50th state over 1e6 updates so successive tallies are
    // effectively independent draws and multinomial bounds apply.
    const UPDATES: usize = 1_000_000;
    const GAP: usize = 50;
    let mut counts = [0u64; 16];
    for step in 1..=UPDATES {
        let site = rng.random_range(0..4);
        update_site(&mut lattice, site, beta, alpha, coupling, &mut rng);
        if step % GAP == 0 {
            counts[encode(&lattice)] += 1;
        }
    }

    let samples = (UPDATES / GAP) as f64;
    let mut detail = String::new();
    let mut worst_z = 0.0f64;
    for state in 0..16 {
        let expected = samples * pi[state];
        let sigma = (samples * pi[state] * (1.0 - pi[state])).sqrt();
        let z = (counts[state] as f64 - expected) / sigma;
        worst_z = worst_z.max(z.abs());
        detail.push_str(&format!(
            "  state {state:2}: observed {:6}, expected {expected:8.1}, z = {z:+.2}\n",
            counts[state]
        ));
    }
    println!("criterion 5: worst |z| = {worst_z:.2} over 16 states\n{detail}");
    assert!(
        worst_z <= 3.0,
        "empirical 2x2 state frequencies left the 3-sigma multinomial band:\n{detail}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: statistics kernels against independent oracles

fn naive_acf(values: &[f64], max_lag: usize) -> Vec<f64> {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let denom: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    (0..=max_lag)
        .map(|lag| {
            let mut num = 0.0;
            for t in 0..n - lag {
                num += (values[t] - mean) * (values[t + lag] - mean);
            }
            num / denom
        })
        .collect()
}

#[test]
fn criterion_6_statistics_kernels_match_oracles() {
    // ACF vs the brute-force double loop, on a correlated series.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let normal = rand_distr::Normal::new(0.0, 1.0).unwrap();
    let mut series = vec![0.0f64; 1000];
    for t in 1..series.len() {
        series[t] = 0.6 * series[t - 1] + rng.sample::<f64, _>(normal);
    }
    let fast = acf(&series, 150).unwrap();
    let slow = naive_acf(&series, 150);
    let acf_err = fast
        .rho()
        .iter()
        .zip(&slow)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(acf_err < 1e-12, "acf deviates from the naive oracle by {acf_err:e}");

    // Power-law fit recovers exact synthetic parameters.
    let rho: Vec<f64> = (0..=150).map(|t| if t == 0 { 1.0 } else { 2.0 * f64::powf(t as f64, -0.3) }).collect();
    let fit = fit_power_law(&AcfCurve::new(rho, 10_000), (1, 150)).unwrap();
    assert!((fit.amplitude - 2.0).abs() < 1e-9, "A = {}", fit.amplitude);
    assert!((fit.eta - 0.3).abs() < 1e-9, "eta = {}", fit.eta);
    assert!((fit.r_squared - 1.0).abs() < 1e-9, "r2 = {}", fit.r_squared);

    // Jarque-Bera against the closed formula, both symbolically and on data.
    let (jb, p) = jarque_bera_from_moments(600, 0.5, 4.0);
    assert_eq!(jb, 50.0);
    assert_eq!(p, (-25.0f64).exp());
    let sample: Vec<f64> = (0..200).map(|_| rng.sample::<f64, _>(normal)).collect();
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let central = |k: i32| sample.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / n;
    let (m2, m3, m4) = (central(2), central(3), central(4));
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    let jb_oracle = n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
    let (jb_lib, _) = jarque_bera(&sample).unwrap();
    assert!((jb_lib - jb_oracle).abs() < 1e-9 * jb_oracle.max(1.0));

    // Shapiro-Wilk against the classic worked example for the algorithm
    // (n = 11 body-weight sample; reference W and p from the published
    // routine's output).
    let weights = [148.0, 154.0, 158.0, 160.0, 161.0, 162.0, 166.0, 170.0, 182.0, 195.0, 236.0];
    let (w, p) = shapiro_wilk(&weights).unwrap();
    assert!((w - 0.78888).abs() < 1e-3, "W = {w}");
    assert!((p - 0.0067).abs() < 1e-3, "p = {p}");

    // Calibration: on seeded Gaussian samples both tests hold their size.
    let mut jb_rejects = 0;
    let mut sw_rejects = 0;
    for trial in 0..100u64 {
        let mut trial_rng = ChaCha8Rng::seed_from_u64(1000 + trial);
        let sample: Vec<f64> = (0..500).map(|_| trial_rng.sample::<f64, _>(normal)).collect();
        let (_, jb_p) = jarque_bera(&sample).unwrap();
        let (_, sw_p) = shapiro_wilk(&sample).unwrap();
        jb_rejects += usize::from(jb_p < 0.05);
        sw_rejects += usize::from(sw_p < 0.05);
    }
    println!(
        "criterion 6: acf err {acf_err:.1e}; JB rejects {jb_rejects}/100, SW rejects {sw_rejects}/100 at 5%"
    );
    assert!(jb_rejects <= 12, "Jarque-Bera rejected {jb_rejects}/100 Gaussian samples");
    assert!(sw_rejects <= 12, "Shapiro-Wilk rejected {sw_rejects}/100 Gaussian samples");
}

// ---------------------------------------------------------------------------
// Criteria 7 and 8 drive the installed binary end to end.

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinmarket"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary ran")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

/// Heavy-tailed daily price fixture: geometric walk with Student-t(3)
/// innovations, standing in for a real index series (which is not shipped;
/// the README documents the equivalent check on actual index data).
fn write_student_t_fixture(path: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let t3 = rand_distr::StudentT::new(3.0).unwrap();
    let mut price = 100.0f64;
    let mut rows = String::from("Date,Adj Close\n");
    for i in 0..4000u32 {
        price *= f64::exp(0.01 * rng.sample::<f64, _>(t3));
        let (year, month, day) = (1990 + i / 336, 1 + (i / 28) % 12, 1 + i % 28);
        rows.push_str(&format!("{year:04}-{month:02}-{day:02},{price:.6}\n"));
    }
    std::fs::write(path, rows).unwrap();
}

#[test]
fn criterion_7_empirical_pipeline_flags_heavy_tails() {
    let tmp = tempfile::TempDir::new().unwrap();
    write_student_t_fixture(&tmp.path().join("index.csv"));
    let out = run_in(tmp.path(), &["analyze", "--csv", "index.csv", "--out", "emp"]);
    assert_success(&out);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("emp/report.json")).unwrap())
            .unwrap();
    let kurtosis = report["kurtosis_raw"].as_f64().unwrap();
    let jb_p = report["jb_pvalue"].as_f64().unwrap();
    let eta = report["powerlaw"]["eta"].as_f64().unwrap();
    println!("criterion 7: kurtosis = {kurtosis:.2}, jb_p = {jb_p:.2e}, eta = {eta:.3}");
    assert!(kurtosis > 5.0, "heavy-tailed fixture kurtosis {kurtosis} not above 5");
    assert!(jb_p < 0.05, "normality not rejected on the heavy-tailed fixture: {jb_p}");
    assert!(eta.is_finite());
    assert_eq!(report["provenance"]["kind"], "empirical");
}

#[test]
fn criterion_8_identical_config_reproduces_bytes() {
    let tmp = tempfile::TempDir::new().unwrap();
    let args = &[
        "simulate", "--size", "32", "--sweeps", "20000", "--warmup", "2000", "--delta-t", "100",
        "--seed", "1",
    ];
    assert_success(&run_in(tmp.path(), &[args as &[&str], &["--out", "first"]].concat()));
    assert_success(&run_in(tmp.path(), &[args as &[&str], &["--out", "second"]].concat()));
    for name in ["returns.csv", "report.json"] {
        let a = std::fs::read(tmp.path().join("first").join(name)).unwrap();
        let b = std::fs::read(tmp.path().join("second").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    println!("criterion 8: returns.csv and report.json byte-identical across reruns");
}
