//! Acceptance criteria, one test per criterion. Each test prints a single
//! `criterion N ...: PASS|FAIL` line before asserting.
//!
//! Clauses that need the measured dummy-head HRIR set run only when
//! `STEREO_UNCERTAINTY_REFERENCE_HRIR` names an HRIR JSON file; otherwise
//! they report SKIP and do not affect the verdict.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;

use stereo_uncertainty::frontend::{best_lag, binaural_cues, Filterbank};
use stereo_uncertainty::geometry::{
    mic_radius_from_d, psr_distance_for_tau_overlap, relative_panning, tau_overlap, x_for_full_shift,
    ListenerPose, PanningPoint, RelativeMethod, SourcePlacement, StereoSetup, SPEED_OF_SOUND,
};
use stereo_uncertainty::panning::{
    coverage_angle, psr_curve, psr_design, solve_beta, MicArrangement, WilliamsCurves,
};
use stereo_uncertainty::reference;
use stereo_uncertainty::render::{
    default_analytic_set, free_field_source, load_hrir_set, render, HrirSet, RenderOptions, RenderSource,
};
use stereo_uncertainty::stimuli::{generate, GaussianNoise, Stimulus};
use stereo_uncertainty::sweep::{
    arrangement_comparison, grid_ictd_icld, pearson, psr_average_vs_d, CompareSpec, GridSpec,
    PoseSet, PsrAverageSpec, Range, Scorer, SweepConfig, SweepResult,
};
use stereo_uncertainty::uncertainty::{
    build_dictionary, score_cues, xi, DictionaryConfig, FreeFieldDictionary, ModelOptions,
};

const REFERENCE_ENV: &str = "STEREO_UNCERTAINTY_REFERENCE_HRIR";

/// One clause of a criterion: description and outcome (`None` = skipped).
struct Check {
    what: String,
    ok: Option<bool>,
}

fn check(what: impl Into<String>, ok: bool) -> Check {
    Check { what: what.into(), ok: Some(ok) }
}

fn skip(what: impl Into<String>) -> Check {
    Check { what: what.into(), ok: None }
}

/// Prints the verdict and clause details, then asserts. Writes go to the raw
/// stdout handle so that passing criteria are visible without --nocapture.
fn report(n: u32, title: &str, checks: Vec<Check>) {
    let pass = checks.iter().all(|c| c.ok != Some(false));
    let mut text = format!("criterion {n:2} ({title}): {}\n", if pass { "PASS" } else { "FAIL" });
    for c in &checks {
        let tag = match c.ok {
            Some(true) => "ok  ",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        text.push_str(&format!("    [{tag}] {}\n", c.what));
    }
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).expect("stdout");
    assert!(pass, "criterion {n} failed");
}

struct Model {
    hrirs: HrirSet,
    dict: FreeFieldDictionary,
}

fn analytic() -> &'static Model {
    static CELL: OnceLock<Model> = OnceLock::new();
    CELL.get_or_init(|| {
        let hrirs = default_analytic_set();
        let dict = build_dictionary(&hrirs, &DictionaryConfig::default()).expect("dictionary");
        Model { hrirs, dict }
    })
}

fn measured() -> Option<&'static Model> {
    static CELL: OnceLock<Option<Model>> = OnceLock::new();
    CELL.get_or_init(|| {
        let path = std::env::var_os(REFERENCE_ENV)?;
        let hrirs = load_hrir_set(path.as_ref()).expect("reference HRIR set");
        let dict = build_dictionary(&hrirs, &DictionaryConfig::default()).expect("dictionary");
        Some(Model { hrirs, dict })
    })
    .as_ref()
}

fn scorer(model: &'static Model) -> Scorer<'static> {
    Scorer::new(&SweepConfig::default(), &model.hrirs, &model.dict, WilliamsCurves::default()).expect("scorer")
}

fn central_grid() -> &'static SweepResult {
    static CELL: OnceLock<SweepResult> = OnceLock::new();
    CELL.get_or_init(|| grid_ictd_icld(&scorer(analytic()), &GridSpec::default()).expect("grid"))
}

fn offset_grid() -> &'static SweepResult {
    static CELL: OnceLock<SweepResult> = OnceLock::new();
    CELL.get_or_init(|| {
        let spec = GridSpec { x_m: 0.10, ..GridSpec::default() };
        grid_ictd_icld(&scorer(analytic()), &spec).expect("grid")
    })
}

fn fig11_d_m() -> Vec<f64> {
    reference::PSR_AVERAGE_D_CM.iter().map(|d| d / 100.0).collect()
}

fn deg(v: f64) -> f64 {
    v.to_radians()
}

#[test]
fn criterion_01_geometry_closed_forms() {
    let tau = tau_overlap(0.09, deg(100.0), deg(60.0), SPEED_OF_SOUND) * 1e3;
    let d = psr_distance_for_tau_overlap(0.09, deg(100.0), deg(60.0)) * 100.0;
    let d72 = psr_distance_for_tau_overlap(0.09, deg(100.0), deg(72.0));
    let rm = mic_radius_from_d(d72, deg(72.0)) * 100.0;
    let setup = StereoSetup::new(deg(60.0), 2.0).unwrap();
    let x = x_for_full_shift(&setup);
    report(
        1,
        "geometry closed forms",
        vec![
            check(format!("tau_o = {tau:.4} ms, expected 0.273 +- 0.003"), (tau - 0.273).abs() <= 0.003),
            check(format!("PSR d = {d:.3} cm, expected 18.7 +- 0.1"), (d - 18.7).abs() <= 0.1),
            check(format!("r_m(72 deg) = {rm:.3} cm, expected 16.2 +- 0.1"), (rm - 16.2).abs() <= 0.1),
            check(format!("x for 1 ms shift = {x:.4} m, expected 0.343 +- 0.001"), (x - 0.343).abs() <= 0.001),
        ],
    );
}

#[test]
fn criterion_02_relative_panning_worked_example() {
    let setup = StereoSetup::new(deg(60.0), 2.0).unwrap();
    let printed = relative_panning(
        PanningPoint::new(0.0, 5.0),
        &ListenerPose::at(0.10, 0.0),
        &setup,
        RelativeMethod::PrintedApproximation,
    );
    let exact = relative_panning(
        PanningPoint::new(0.0, 0.0),
        &ListenerPose::at(0.343, 0.0),
        &setup,
        RelativeMethod::ExactPath,
    );
    let (t, l) = (printed.rictd * 1e3, printed.ricld);
    report(
        2,
        "RICTD/RICLD worked example",
        vec![
            check(
                format!("printed RICTD {t:.4} ms, RICLD {l:.4} dB; expected -0.2915, 4.7829"),
                (t + 0.2915).abs() < 5e-5 && (l - 4.7829).abs() < 5e-5,
            ),
            check(
                format!("exact |RICLD| at x = 0.343 m: {:.4} dB, expected 1.46 +- 0.02", exact.ricld.abs()),
                (exact.ricld.abs() - 1.46).abs() <= 0.02,
            ),
        ],
    );
}

/// Independent bisection on `sin(phi0 + b) / sin(b) = 10^(icld / 20)`.
fn beta_oracle(phi0: f64, icld: f64) -> f64 {
    let target = 10f64.powf(icld / 20.0);
    let g = |b: f64| (phi0 + b).sin() / b.sin() - target;
    let (mut lo, mut hi) = (1e-9, PI / 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_03_psr_design() {
    let curves = WilliamsCurves::default();
    let phi0 = deg(60.0);
    let (mut worst_point, mut worst_residual) = (0.0f64, 0.0f64);
    for d in fig11_d_m() {
        let design = psr_design(d, phi0, &curves, SPEED_OF_SOUND).unwrap();
        let centre = psr_curve(&design, 0.0).unwrap();
        let left = psr_curve(&design, phi0 / 2.0).unwrap();
        let right = psr_curve(&design, -phi0 / 2.0).unwrap();
        let errs = [
            centre.ictd * 1e3,
            centre.icld,
            (left.ictd - design.ictd_max) * 1e3,
            left.icld - design.icld_w,
            (right.ictd + design.ictd_max) * 1e3,
            right.icld + design.icld_w,
        ];
        worst_point = errs.iter().fold(worst_point, |m, e| m.max(e.abs()));
        let b = design.beta;
        let residual = 20.0 * ((phi0 + b).sin() / b.sin()).log10() - design.icld_w;
        worst_residual = worst_residual.max(residual.abs());
    }
    let beta = solve_beta(phi0, 15.0).unwrap();
    let oracle = beta_oracle(phi0, 15.0);
    report(
        3,
        "PSR design",
        vec![
            check(
                format!("constraint points over 25 distances, worst error {worst_point:.2e} (ms/dB)"),
                worst_point <= 1e-6,
            ),
            check(format!("beta residual {worst_residual:.2e} dB"), worst_residual < 1e-9),
            check(
                format!("beta(60 deg, 15 dB) = {:.9} deg, oracle {:.9} deg", beta.to_degrees(), oracle.to_degrees()),
                (beta - oracle).abs() < 1e-9,
            ),
        ],
    );
}

/// Local minima of `v[lo..=hi]`, with plateaus counted once.
fn local_minima(v: &[f64], lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = lo;
    while i <= hi {
        let mut j = i;
        while j < hi && v[j + 1] == v[i] {
            j += 1;
        }
        let left_higher = i == 0 || v[i - 1] > v[i];
        let right_higher = j + 1 >= v.len() || v[j + 1] > v[j];
        if left_higher && right_higher {
            out.push(i);
        }
        i = j + 1;
    }
    out
}

/// First grid index where `v` crosses `level` going upward.
fn crossing(v: &[f64], level: f64) -> usize {
    v.windows(2).position(|w| w[0] <= level && w[1] > level).map_or(v.len() - 1, |k| k + 1)
}

#[test]
fn criterion_04_conflicting_cue_bimodality() {
    let dict = &analytic().dict;
    let band = &dict.bands[dict.band_nearest(6070.0)];
    let fitd = band.normalized_fitd();
    let fild = band.normalized_fild();
    let (itd, ild) = (0.5, -0.5);
    // modes are counted between the directions matching each cue alone,
    // widened by 10 degrees on both sides
    let k_itd = crossing(&fitd, itd);
    let k_ild = crossing(&fild, ild);
    let step = dict.theta_grid_deg[1] - dict.theta_grid_deg[0];
    let margin = (10.0 / step).round() as usize;
    let lo = k_itd.min(k_ild).saturating_sub(margin);
    let hi = (k_itd.max(k_ild) + margin).min(fitd.len() - 1);
    let modes = |p: f64| {
        let x: Vec<f64> = (0..fitd.len()).map(|k| xi(itd - fitd[k], ild - fild[k], p)).collect();
        local_minima(&x, lo, hi)
    };
    let m05 = modes(0.5);
    let m2 = modes(2.0);
    let at = |m: &[usize]| m.iter().map(|&k| dict.theta_grid_deg[k]).collect::<Vec<_>>();
    report(
        4,
        "conflicting-cue bimodality",
        vec![
            check(
                format!(
                    "{:.0} Hz band, cues (0.5, -0.5), p = 0.5: distance minima at {:?} deg",
                    band.center_hz,
                    at(&m05)
                ),
                m05.len() == 2,
            ),
            check(format!("p = 2: distance minima at {:?} deg", at(&m2)), m2.len() == 1),
        ],
    );
}

#[test]
fn criterion_05_dictionary_sanity() {
    let model = analytic();
    let dict = &model.dict;
    let bank = Filterbank::new(dict.provenance.filterbank).unwrap();
    let signal = generate(&Stimulus::default()).unwrap();
    let opts = ModelOptions::default();
    let mut worst = (f64::NEG_INFINITY, 0.0);
    for &t in &dict.theta_grid_deg {
        let placement = SourcePlacement::new(t.to_radians(), 2.0).unwrap();
        let ears = render(&[free_field_source(&signal, placement)], &model.hrirs, &RenderOptions::default()).unwrap();
        let h = score_cues(&binaural_cues(&ears, &bank).unwrap(), dict, &opts).unwrap().h_bar;
        if h > worst.0 {
            worst = (h, t);
        }
    }
    let mut checks = vec![
        check(format!("analytic head h_min = {:.4}, expected in (0.2, 0.7)", dict.h_min), dict.h_min > 0.2 && dict.h_min < 0.7),
        check(
            format!("free-field h_bar at dictionary angles: max {:.4} at {} deg, expected < 0.08", worst.0, worst.1),
            worst.0 < 0.08,
        ),
    ];
    checks.push(match measured() {
        Some(m) => check(
            format!("reference set h_min = {:.4}, expected {} +- 0.1", m.dict.h_min, reference::H_MIN),
            (m.dict.h_min - reference::H_MIN).abs() <= 0.1,
        ),
        None => skip(format!("reference set h_min ({REFERENCE_ENV} not set)")),
    });
    report(5, "dictionary sanity", checks);
}

#[test]
fn criterion_06_central_grid_structure() {
    let g = central_grid();
    let ictd = &g.axes[0].values;
    let icld = &g.axes[1].values;
    let mean_where = |pred: &dyn Fn(f64, f64) -> bool| {
        let (mut s, mut n) = (0.0, 0usize);
        for (i, &t) in ictd.iter().enumerate() {
            for (j, &l) in icld.iter().enumerate() {
                if pred(t, l) {
                    s += g.get(&[i, j]);
                    n += 1;
                }
            }
        }
        s / n as f64
    };
    let conflicting = mean_where(&|t, l| t * l < 0.0);
    let consistent = mean_where(&|t, l| t * l > 0.0);

    let mut sorted = g.values.clone();
    sorted.sort_by(f64::total_cmp);
    let p25 = sorted[(0.25 * (sorted.len() - 1) as f64).round() as usize];
    let loud_rows: Vec<(f64, f64)> = icld
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() >= 15.0)
        .map(|(j, &l)| (l, (0..ictd.len()).map(|i| g.get(&[i, j])).sum::<f64>() / ictd.len() as f64))
        .collect();
    let worst_row = loud_rows.iter().fold(f64::NEG_INFINITY, |m, r| m.max(r.1));

    // consistent quadrants, 1..12 dB, mirrored onto positive ICTD
    let band = |lo: f64, hi: f64| {
        mean_where(&|t, l| {
            let (t, l) = if t < 0.0 { (-t, -l) } else { (t, l) };
            t >= lo - 1e-9 && t <= hi + 1e-9 && (1.0..=12.0).contains(&l)
        })
    };
    let ridge = band(0.2, 0.35);
    let centre = band(0.0, 0.0);
    let outer = band(0.6, 1.0);
    report(
        6,
        "central-grid structure",
        vec![
            check(
                format!("conflicting quadrants {conflicting:.4} > consistent {consistent:.4}"),
                conflicting > consistent,
            ),
            check(
                format!("|ICLD| >= 15 dB row means <= {worst_row:.4} below 25th percentile {p25:.4}"),
                worst_row < p25,
            ),
            check(
                format!(
                    "ridge at 0.2-0.35 ms: {ridge:.4} vs 0 ms {centre:.4} and 0.6-1 ms {outer:.4} (margin 0.02)"
                ),
                ridge > centre + 0.02 && ridge > outer + 0.02,
            ),
        ],
    );
}

#[test]
fn criterion_07_off_center_shift() {
    let g0 = central_grid();
    let g1 = offset_grid();
    let n = g0.axes[0].len();
    let m = g0.axes[1].len();
    let step_ms = g0.axes[0].values[1] - g0.axes[0].values[0];
    let mut best = (f64::NEG_INFINITY, 0isize);
    for s in -12isize..=12 {
        // g1(ictd) against g0(ictd + shift)
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for i in 0..n as isize {
            let k = i + s;
            if k < 0 || k >= n as isize {
                continue;
            }
            for j in 0..m {
                a.push(g1.get(&[i as usize, j]));
                b.push(g0.get(&[k as usize, j]));
            }
        }
        let r = pearson(&a, &b).unwrap();
        if r > best.0 {
            best = (r, s);
        }
    }
    let shift = best.1 as f64 * step_ms;
    report(
        7,
        "off-centre shift",
        vec![check(
            format!("x = +10 cm grid best matches the central grid shifted by {shift:+.2} ms (r = {:.3}); expected -0.35..-0.25", best.0),
            (-0.35 - 1e-9..=-0.25 + 1e-9).contains(&shift),
        )],
    );
}

fn row_argmin(r: &SweepResult, row: usize) -> (usize, f64) {
    let cols = r.axes[1].len();
    let v = &r.values[row * cols..(row + 1) * cols];
    (0..cols).fold((0, v[0]), |b, k| if v[k] < b.1 { (k, v[k]) } else { b })
}

#[test]
fn criterion_08_psr_distance_argmins() {
    let r = psr_average_vs_d(&scorer(analytic()), &PsrAverageSpec::default()).unwrap();
    let d_cm = |k: usize| r.axes[1].values[k] * 100.0;
    let windows = [(0.0, 5.0), (15.0, 25.0), (25.0, 37.2)];
    let mut checks: Vec<Check> = r.axes[0]
        .labels
        .iter()
        .zip(windows)
        .enumerate()
        .map(|(row, (label, (lo, hi)))| {
            let (k, v) = row_argmin(&r, row);
            check(
                format!("{label}: argmin d = {:.2} cm (h_bar {v:.4}), expected in [{lo}, {hi}] cm", d_cm(k)),
                d_cm(k) >= lo - 1e-9 && d_cm(k) <= hi + 1e-9,
            )
        })
        .collect();
    checks.push(match measured() {
        Some(m) => {
            let spec = PsrAverageSpec {
                d_m: Range::single(0.0),
                pose_sets: vec![PoseSet { label: "on-center".into(), x_m: Range::single(0.0), y_m: 0.0 }],
                ..PsrAverageSpec::default()
            };
            let v = psr_average_vs_d(&scorer(m), &spec).unwrap().values[0];
            check(format!("reference set on-centre d = 0: {v:.4}, expected 0.359 +- 0.05"), (v - 0.359).abs() <= 0.05)
        }
        None => skip(format!("reference set on-centre value at d = 0 ({REFERENCE_ENV} not set)")),
    });
    report(8, "PSR distance argmins", checks);
}

#[test]
fn criterion_09_arrangement_comparison() {
    let (mean, exc) = arrangement_comparison(&scorer(analytic()), &CompareSpec::default()).unwrap();
    let labels = &mean.axes[0].labels;
    let amplitude: Vec<bool> = labels
        .iter()
        .map(|l| reference::AMPLITUDE_METHOD[reference::ARRANGEMENT_LABELS.iter().position(|r| r == l).unwrap()])
        .collect();
    let xs = &mean.axes[1].values;
    let best_of = |r: &SweepResult, j: usize, amp: bool| {
        (0..labels.len())
            .filter(|&a| amplitude[a] == amp)
            .map(|a| r.get(&[a, j]))
            .collect::<Vec<_>>()
    };
    let max = |v: Vec<f64>| v.into_iter().fold(f64::NEG_INFINITY, f64::max);
    let min = |v: Vec<f64>| v.into_iter().fold(f64::INFINITY, f64::min);
    let j0 = xs.iter().position(|&x| x.abs() < 1e-12).unwrap();
    let (amp0, ta0) = (max(best_of(&mean, j0, true)), min(best_of(&mean, j0, false)));

    let mut far_fail = Vec::new();
    for (j, &x) in xs.iter().enumerate().filter(|(_, x)| x.abs() >= 0.12 - 1e-9) {
        let (a, t) = (min(best_of(&mean, j, true)), min(best_of(&mean, j, false)));
        if a <= t {
            far_fail.push(format!("{:+.0} cm ({a:.3} vs {t:.3})", x * 100.0));
        }
    }
    let mut ratio = f64::INFINITY;
    let mut amp_exc = f64::INFINITY;
    for (j, _) in xs.iter().enumerate().filter(|(_, x)| (x.abs() - 0.2).abs() < 1e-9) {
        let a = min(best_of(&exc, j, true));
        amp_exc = amp_exc.min(a);
        ratio = ratio.min(a / max(best_of(&exc, j, false)));
    }
    let mut checks = vec![
        check(
            format!("x = 0: worst amplitude mean {amp0:.4} < best time-amplitude mean {ta0:.4}"),
            amp0 < ta0,
        ),
        check(
            if far_fail.is_empty() {
                "|x| >= 12 cm: a time-amplitude method has the lowest mean everywhere".to_string()
            } else {
                format!("|x| >= 12 cm: amplitude method lowest at {}", far_fail.join(", "))
            },
            far_fail.is_empty(),
        ),
        check(
            format!("|x| = 20 cm: amplitude excursion {amp_exc:.4} is {ratio:.2}x the largest time-amplitude one, expected >= 1.5x"),
            ratio >= 1.5,
        ),
    ];
    checks.push(match measured() {
        Some(m) => {
            let spec = CompareSpec {
                arrangements: CompareSpec::default().arrangements[..3].to_vec(),
                x_m: Range::single(0.2),
                ..CompareSpec::default()
            };
            let (_, e) = arrangement_comparison(&scorer(m), &spec).unwrap();
            let worst = e.values.iter().copied().fold(f64::INFINITY, f64::min);
            check(format!("reference set amplitude excursion at 20 cm: {worst:.4}, expected >= 0.35"), worst >= 0.35)
        }
        None => skip(format!("reference set excursion at 20 cm ({REFERENCE_ENV} not set)")),
    });
    report(9, "arrangement comparison", checks);
}

#[test]
fn criterion_10_coverage_angles() {
    let curves = WilliamsCurves::default();
    let mut checks: Vec<Check> = [("blumlein", 68.0), ("xy", 176.0), ("ortf", 94.0), ("din", 100.0), ("nos", 80.0)]
        .into_iter()
        .map(|(name, expected)| {
            let c = coverage_angle(&MicArrangement::preset(name).unwrap(), &curves).to_degrees();
            check(format!("{name}: {c:.1} deg, expected {expected} +- 10"), (c - expected).abs() <= 10.0)
        })
        .collect();
    let phi0 = deg(60.0);
    let worst = fig11_d_m()
        .into_iter()
        .map(|d| {
            let arr = MicArrangement::psr(psr_design(d, phi0, &curves, SPEED_OF_SOUND).unwrap());
            (coverage_angle(&arr, &curves) - phi0).abs().to_degrees()
        })
        .fold(0.0, f64::max);
    checks.push(check(
        format!("PSR coverage equals the 60 deg base angle, worst deviation {worst:.2} deg (scan step 0.5)"),
        worst <= 0.5,
    ));
    report(10, "coverage angles", checks);
}

#[test]
fn criterion_11_correlation_fixture() {
    let (xs, ys): (Vec<f64>, Vec<f64>) = reference::LISTENING_TEST_SCATTER.iter().copied().unzip();
    let r = pearson(&xs, &ys).unwrap();
    report(
        11,
        "correlation fixture",
        vec![check(
            format!("pearson over 16 listening-test pairs = {r:.4}, expected {} +- 0.005", reference::LISTENING_TEST_PEARSON),
            (r - reference::LISTENING_TEST_PEARSON).abs() <= 0.005,
        )],
    );
}

/// Brute-force `argmax_lag sum_n left[n] right[n + lag]`, ties to the
/// smaller |lag| and then the negative lag.
fn lag_oracle(left: &[f64], right: &[f64], max_lag: isize) -> isize {
    let mut best: Option<(f64, isize)> = None;
    let mut lags: Vec<isize> = (-max_lag..=max_lag).collect();
    lags.sort_by_key(|&l| (l.abs(), l > 0));
    for lag in lags {
        let mut s = 0.0;
        for (n, &l) in left.iter().enumerate() {
            let m = n as isize + lag;
            if m >= 0 && (m as usize) < right.len() {
                s += l * right[m as usize];
            }
        }
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, lag));
        }
    }
    best.unwrap().1
}

#[test]
fn criterion_12_determinism_and_oracles() {
    let dict = &analytic().dict;
    let text = dict.to_json().unwrap();
    let back = FreeFieldDictionary::from_json(&text).unwrap();
    let bits = |d: &FreeFieldDictionary| {
        let mut v: Vec<u64> = vec![d.h_min.to_bits(), d.p.to_bits()];
        for b in &d.bands {
            v.extend(b.fitd_s.iter().chain(&b.fild_db).map(|x| x.to_bits()));
            v.push(b.max_abs_fitd.to_bits());
            v.push(b.max_abs_fild.to_bits());
        }
        v
    };
    let round_trip = back == *dict && bits(&back) == bits(dict) && back.to_json().unwrap() == text;

    let mut rng = GaussianNoise::new(12);
    let mut lag_mismatch = 0;
    for k in 0..200 {
        let n = 64 + k % 97;
        let left = rng.fill(n);
        let right = rng.fill(n);
        let (lag, _) = best_lag(&left, &right, 31);
        if lag != lag_oracle(&left, &right, 31) {
            lag_mismatch += 1;
        }
    }

    let hrirs = &analytic().hrirs;
    let opts = RenderOptions::default();
    let signal = generate(&Stimulus::default()).unwrap();
    let near = SourcePlacement::new(deg(25.0), 2.0).unwrap();
    let far = SourcePlacement::new(deg(25.0), 4.0).unwrap();
    let unit = render(&[free_field_source(&signal, near)], hrirs, &opts).unwrap();
    let scaled = render(&[RenderSource { gain: 2.5, ..free_field_source(&signal, near) }], hrirs, &opts).unwrap();
    let distant = render(&[free_field_source(&signal, far)], hrirs, &opts).unwrap();
    let rel = |a: &[f64], b: &[f64], k: f64| {
        let peak = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x * k - y).abs())) / (peak * k.abs())
    };
    let lin = rel(&unit.left, &scaled.left, 2.5).max(rel(&unit.right, &scaled.right, 2.5));
    let att = rel(&unit.left, &distant.left, 0.5).max(rel(&unit.right, &distant.right, 0.5));
    report(
        12,
        "determinism and oracles",
        vec![
            check("dictionary JSON round trip is bit-exact", round_trip),
            check(format!("ITD lag vs brute-force correlation: {lag_mismatch} mismatches in 200 pairs"), lag_mismatch == 0),
            check(format!("render linearity, relative error {lin:.1e}"), lin <= 1e-9),
            check(format!("1/distance attenuation, relative error {att:.1e}"), att <= 1e-9 && unit.len() == distant.len()),
        ],
    );
}
