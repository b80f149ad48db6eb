//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinpurify::analysis::{
    asymptotic_round_ratio, bell_mutual_information, cnot_mutual_information, dm_anisotropy_run,
    fwhm_window, max_fidelity_formula, resource_estimate, success_probability_ratio,
    two_pair_mutual_information,
};
use spinpurify::protocols::{
    bbpssw_reference, iterate, pure_filter_with_coupling, three_pair_rejected_patterns,
    two_pair_protocol, FilterTime, Protocol, ThreePairSimulator,
};
use spinpurify::spin::{bell_weights, is_maximally_entangled};
use spinpurify::{
    invariant_subspace_check, ChainLayout, CouplingSpec, PureFilterSpec, Result, SiteSet,
};

const T_OPT: f64 = 2.0 * PI;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

/// Largest deviation of the simulated fidelity from the closed form over
/// F = 0.55, 0.60, …, 0.95 and both site sets.
fn eq4_deviation(j: f64) -> Result<f64> {
    let sim = ThreePairSimulator::new(&CouplingSpec::isotropic(j))?;
    let mut worst = 0.0f64;
    for i in 0..9 {
        let f = 0.55 + 0.05 * i as f64;
        for site_set in SiteSet::ALL {
            let o = sim.accepted(f, T_OPT / j.abs(), site_set)?;
            worst = worst.max((o.fidelity - max_fidelity_formula(f)).abs());
        }
    }
    Ok(worst)
}

/// Largest probability error and whether every filtered state is maximally
/// entangled, for α = 0.1, 0.3, 0.6.
fn filter_check(j: f64) -> Result<(f64, bool)> {
    let mut worst = 0.0f64;
    let mut all_max = true;
    for alpha in [0.1, 0.3, 0.6] {
        let o =
            pure_filter_with_coupling(&PureFilterSpec::from_alpha(alpha)?, FilterTime::Optimal, j)?;
        worst = worst.max((o.success_probability - 2.0 * alpha * alpha).abs());
        all_max &= is_maximally_entangled(&o.post_state, 1e-9)?;
    }
    Ok((worst, all_max))
}

fn c1_closed_form() -> Result<Verdict> {
    let d = eq4_deviation(1.0)?;
    verdict(
        d < 1e-9,
        format!("max |F'_sim - F'_formula| = {d:.2e} over 9 F values"),
    )
}

fn c2_fixed_points() -> Result<Verdict> {
    let sim = ThreePairSimulator::isotropic()?;
    let mut worst = 0.0f64;
    for f in [0.5, 1.0] {
        worst = worst.max((max_fidelity_formula(f) - f).abs());
        for site_set in SiteSet::ALL {
            worst = worst.max((sim.accepted(f, T_OPT, site_set)?.fidelity - f).abs());
        }
    }
    verdict(
        worst < 1e-12,
        format!("max |F'(F) - F| at F = 1/2, 1: {worst:.2e}"),
    )
}

fn c3_pure_filter() -> Result<Verdict> {
    let (d, all_max) = filter_check(1.0)?;
    verdict(
        d < 1e-10 && all_max,
        format!("max |p - 2a^2| = {d:.2e}, maximally entangled: {all_max}"),
    )
}

fn c4_antiferromagnetic() -> Result<Verdict> {
    let d = eq4_deviation(-1.0)?;
    let (p, all_max) = filter_check(-1.0)?;
    verdict(
        d < 1e-9 && p < 1e-10 && all_max,
        format!("J = -1: closed form {d:.2e}, filter probability {p:.2e}, maximally entangled: {all_max}"),
    )
}

fn c5_werner_form() -> Result<Verdict> {
    let sim = ThreePairSimulator::isotropic()?;
    let (mut minor, mut phi) = (0.0f64, 0.0f64);
    for i in 0..9 {
        let f = 0.55 + 0.05 * i as f64;
        for site_set in SiteSet::ALL {
            let o = sim.accepted(f, T_OPT, site_set)?;
            let w = bell_weights(&o.post_state)?;
            minor = minor.max((w[1] - w[2]).abs()).max((w[2] - w[3]).abs());
            phi = phi.max((w[0] - max_fidelity_formula(f)).abs());
        }
    }
    verdict(
        minor < 1e-10 && phi < 1e-10,
        format!("minor weight spread {minor:.2e}, |w(Phi+) - F'| {phi:.2e}"),
    )
}

fn c6_two_pair_no_go() -> Result<Verdict> {
    let f = 0.75;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coupling = |rng: &mut ChaCha8Rng| {
        CouplingSpec::new(
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
            rng.random_range(-2.0..=2.0),
        )
    };
    let (mut delta, mut gain) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..100 {
        let c = coupling(&mut rng);
        let t = rng.random_range(0.0..=20.0);
        let out = two_pair_protocol(f, &c, t)?.fidelity;
        delta = delta.max((out - f).abs());
        gain = gain.max(out - f);
    }
    let mut leakage = 0.0f64;
    for _ in 0..20 {
        leakage = leakage.max(invariant_subspace_check(&coupling(&mut rng))?.max_leakage());
    }
    verdict(
        delta < 1e-9 && leakage < 1e-12,
        format!("max |F_out - F| = {delta:.3e} (max gain {gain:.2e}), max leakage {leakage:.2e}"),
    )
}

/// BBPSSW fidelity from Bell-label bookkeeping alone: both input labels must
/// share their first bit, and the source keeps `(k, l ⊕ n)`.
fn bbpssw_by_counting(f: f64) -> f64 {
    let minor = (1.0 - f) / 3.0;
    let w = |k: usize, l: usize| if k == 0 && l == 0 { f } else { minor };
    let mut kept = [[0.0; 2]; 2];
    for k in 0..2 {
        for l in 0..2 {
            for n in 0..2 {
                kept[k][l ^ n] += w(k, l) * w(k, n);
            }
        }
    }
    kept[0][0] / kept.iter().flatten().sum::<f64>()
}

fn c7_bbpssw() -> Result<Verdict> {
    let fb = bbpssw_reference(0.75)?.fidelity;
    let oracle = bbpssw_by_counting(0.75);
    let sim = ThreePairSimulator::isotropic()?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=30 {
        let f = 0.6 + 0.01 * i as f64;
        let sc = sim.accepted(f, T_OPT, SiteSet::Sites3456)?.fidelity;
        let b = bbpssw_reference(f)?.fidelity;
        let r = (sc - f) / (b - f);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    verdict(
        (fb - 0.78846).abs() < 5e-6 && (fb - oracle).abs() < 1e-12 && lo >= 1.7 && hi <= 2.3,
        format!("F'_B(0.75) = {fb:.6} (oracle {oracle:.6}), gain ratio on [0.6, 0.9] in [{lo:.3}, {hi:.3}]"),
    )
}

fn c8_rejected() -> Result<Verdict> {
    let f = 0.75;
    let rejected = three_pair_rejected_patterns(f, T_OPT)?.fidelity - f;
    let bbpssw = bbpssw_reference(f)?.fidelity - f;
    let share = rejected / bbpssw;
    verdict(
        rejected > 0.0 && (0.35..=0.65).contains(&share),
        format!("rejected-pattern gain {rejected:.5}, {share:.3} of the BBPSSW gain"),
    )
}

fn c9_window() -> Result<Verdict> {
    let mut widths = Vec::new();
    for f in [0.61, 0.65, 0.75, 0.85, 0.94] {
        widths.push((f, fwhm_window(f)?));
    }
    let worst = widths.iter().map(|w| w.1).fold(0.0, f64::max);
    let list: Vec<String> = widths.iter().map(|(f, w)| format!("{f}: {w:.3}")).collect();
    verdict(worst < 0.5, format!("FWHM in Jt: {}", list.join(", ")))
}

fn c10_mutual_information() -> Result<Verdict> {
    let cnot = cnot_mutual_information()?;
    let layout = ChainLayout::new(3)?;
    let mut best = f64::NEG_INFINITY;
    for pair in 1..=3 {
        best = best.max(bell_mutual_information(&layout, pair, T_OPT)?);
    }
    let mut two = 0.0f64;
    for pair in 1..=2 {
        two = two.max(two_pair_mutual_information(pair, T_OPT)?.abs());
    }
    verdict(
        (cnot - 1.0).abs() < 1e-10 && (best - 1.48).abs() < 0.01 && two < 1e-9,
        format!("CNOT {cnot:.12} bits, three-pair best {best:.4} bits, two-pair {two:.1e} bits"),
    )
}

fn c11_resources() -> Result<Verdict> {
    let e = resource_estimate(0.75, 0.990)?;
    let expected = [0.8277, 0.8988, 0.9489, 0.9768, 0.9903];
    let seq = iterate(Protocol::ThreePair, 0.75, 5)?.fidelities();
    let step_err = seq
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let coeff = (11.0f64 / 27.0).ln() / (2.0f64 / 3.0).ln();
    let coeff_lib = asymptotic_round_ratio();
    verdict(
        e.r_sc == 5.0
            && step_err < 5e-4
            && (e.ratio - 2.07).abs() <= 0.3
            && (coeff - 2.21).abs() < 0.01
            && (coeff_lib - coeff).abs() < 1e-15,
        format!(
            "r_SC = {}, r_B = {}, sequence error {step_err:.1e}, l_SC/l_B = {:.3}, coefficient {coeff:.4}",
            e.r_sc, e.r_b, e.ratio
        ),
    )
}

fn c12_success_ratio() -> Result<Verdict> {
    let r = success_probability_ratio(0.75)?;
    verdict(
        (0.3..=0.5).contains(&r),
        format!("p_SC/p_B at F = 0.75: {r:.4}"),
    )
}

fn c13_dm() -> Result<Verdict> {
    let dm = dm_anisotropy_run(0.75, 1.0, [0.1, 0.0, 0.0], (330.0, 370.0), 0.05)?;
    let xy = dm_anisotropy_run(0.75, 1.0, [0.0; 3], (0.0, 400.0), 0.5)?;
    let xy_gain = xy.f_best - 0.75;
    verdict(
        (dm.f_best - 0.81).abs() <= 0.01 && xy_gain <= 1e-6,
        format!(
            "DM: F_best = {:.5} at t = {:.2}; XY: best gain {xy_gain:.2e}",
            dm.f_best, dm.t_best
        ),
    )
}

fn c14_determinism() -> Result<Verdict> {
    let runs: [&[&str]; 3] = [
        &["nogo", "--samples", "10", "--seed", "7"],
        &["curve", "--F", "0.75", "--t", "0:7:0.25"],
        &["resources", "--Fi", "0.75", "--Ff", "0.990"],
    ];
    let dir = std::env::temp_dir().join(format!("spinpurify-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let mut same = true;
    let mut bytes = 0;
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.join(format!("{i}-{rep}.out"));
            let status = Command::new(env!("CARGO_BIN_EXE_spinpurify"))
                .args(*args)
                .arg("--output")
                .arg(&path)
                .status()
                .expect("spawn spinpurify");
            same &= status.success();
            outputs.push(std::fs::read(&path).unwrap_or_default());
        }
        bytes += outputs[0].len();
        same &= !outputs[0].is_empty() && outputs[0] == outputs[1];
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(
        same,
        format!("3 commands run twice, {bytes} bytes compared"),
    )
}

type Check = fn() -> Result<Verdict>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 14] = [
        ("closed-form equivalence", c1_closed_form),
        ("fixed points", c2_fixed_points),
        ("pure-state filter", c3_pure_filter),
        ("antiferromagnetic invariance", c4_antiferromagnetic),
        ("Werner form", c5_werner_form),
        ("two-pair no-go", c6_two_pair_no_go),
        ("BBPSSW comparison", c7_bbpssw),
        ("rejected patterns", c8_rejected),
        ("timing window", c9_window),
        ("mutual information", c10_mutual_information),
        ("resources", c11_resources),
        ("success-probability ratio", c12_success_ratio),
        ("DM anisotropy", c13_dm),
        ("determinism", c14_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "{} {:>2} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
