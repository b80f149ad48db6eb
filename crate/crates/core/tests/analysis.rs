use std::f64::consts::PI;

use proptest::prelude::*;
use spinpurify::analysis::{
    asymptotic_round_ratio, bell_mutual_information, cnot_mutual_information, dm_anisotropy_run,
    fidelity_curve, fwhm_window, max_fidelity_formula, mutual_information_bits,
    mutual_information_under, resource_estimate, resource_estimate_with, success_probability_ratio,
    time_grid, two_pair_mutual_information, BbpsswRounds, ResourceOptions,
};
use spinpurify::protocols::{bilateral_cnot, iterate, Protocol, ThreePairSimulator};
use spinpurify::{ChainLayout, DenseOperator, SiteSet};

#[test]
fn closed_form_values() {
    assert!((max_fidelity_formula(0.75) - 42.625 / 51.5).abs() < 1e-15);
    assert!((max_fidelity_formula(0.5) - 0.5).abs() < 1e-15);
    assert!((max_fidelity_formula(1.0) - 1.0).abs() < 1e-15);
}

#[test]
fn curve_peaks_at_full_period() {
    let grid = time_grid(0.0, 12.0, 0.05).unwrap();
    let mut grid_with_peak = grid.clone();
    grid_with_peak.push(2.0 * PI);
    grid_with_peak.sort_by(f64::total_cmp);
    let curve = fidelity_curve(0.75, &grid_with_peak, SiteSet::Sites3456).unwrap();
    assert_eq!(curve.len(), grid_with_peak.len());
    let (t, f) = curve.peak().unwrap();
    assert!((t - 2.0 * PI).abs() < 1e-12);
    assert!((f - 0.827670).abs() < 5e-7);
    assert!((curve.fidelity[0] - 0.75).abs() < 1e-12);
    for (&fid, &p) in curve.fidelity.iter().zip(&curve.probability) {
        assert!((0.0..=1.0).contains(&fid) && (0.0..=1.0).contains(&p));
    }
}

#[test]
fn curve_repeats_every_four_pi() {
    let curve = fidelity_curve(0.75, &[2.0 * PI, 6.0 * PI], SiteSet::Sites1256).unwrap();
    assert!((curve.fidelity[0] - curve.fidelity[1]).abs() < 1e-9);
}

#[test]
fn unsorted_grid_is_rejected() {
    assert!(fidelity_curve(0.75, &[1.0, 0.5], SiteSet::Sites3456).is_err());
}

#[test]
fn window_is_wide_inside_the_quoted_range() {
    // half-gain window around 2π; see fwhm criterion in the acceptance suite
    for f in [0.65, 0.75, 0.85] {
        let w = fwhm_window(f).unwrap();
        assert!(w > 0.5 && w < 1.0, "F = {f}: {w}");
    }
    assert!(fwhm_window(0.5).is_err());
}

#[test]
fn mutual_information_of_tables() {
    // perfectly correlated bit: 1 bit; independent: 0
    assert!((mutual_information_bits(&[0.5, 0.0, 0.0, 0.5], 2) - 1.0).abs() < 1e-15);
    assert!(mutual_information_bits(&[0.25; 4], 2).abs() < 1e-15);
    // X uniform over 4, Y = X: 2 bits
    let mut diag = [0.0; 16];
    for i in 0..4 {
        diag[i * 4 + i] = 0.25;
    }
    assert!((mutual_information_bits(&diag, 4) - 2.0).abs() < 1e-15);
}

#[test]
fn cnot_information() {
    assert!((cnot_mutual_information().unwrap() - 1.0).abs() < 1e-10);
    let identity = mutual_information_under(&DenseOperator::identity(4), 2, 1).unwrap();
    assert!(identity.abs() < 1e-12);
    let u = bilateral_cnot();
    let twice = u.matmul(&u).unwrap();
    assert!(mutual_information_under(&twice, 2, 1).unwrap().abs() < 1e-12);
}

#[test]
fn chain_information() {
    let layout = ChainLayout::new(3).unwrap();
    for pair in 1..=3 {
        assert!(bell_mutual_information(&layout, pair, 0.0).unwrap().abs() < 1e-12);
    }
    let best = (1..=3)
        .map(|p| bell_mutual_information(&layout, p, 2.0 * PI).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((best - 1.48).abs() < 0.01, "{best}");
    for pair in 1..=2 {
        assert!(two_pair_mutual_information(pair, 2.0 * PI).unwrap().abs() < 1e-9);
    }
    assert!(bell_mutual_information(&layout, 4, 1.0).is_err());
}

#[test]
fn resource_estimate_for_the_quoted_targets() {
    let e = resource_estimate(0.75, 0.990).unwrap();
    assert_eq!(e.r_sc, 5.0);
    assert!((e.ratio - 2.07).abs() < 0.3, "{e:?}");
    assert!(e.l_sc >= 1.0 && e.l_b >= 1.0);
    assert!((asymptotic_round_ratio() - 2.21).abs() < 0.01);
}

#[test]
fn per_round_cost_ratio_under_asymptotic_rounds() {
    let opts = ResourceOptions {
        bbpssw_rounds: BbpsswRounds::Asymptotic,
        ..ResourceOptions::default()
    };
    let trace = iterate(Protocol::ThreePair, 0.75, 5).unwrap();
    for (r, target) in trace.fidelities().into_iter().enumerate() {
        let e = resource_estimate_with(0.75, target, &opts).unwrap();
        assert_eq!(e.r_sc, (r + 1) as f64);
        let per_round = e.ratio.ln() / e.r_sc;
        assert!(
            (1.10f64.ln()..=1.25f64.ln()).contains(&per_round),
            "r = {}: {}",
            r + 1,
            per_round.exp()
        );
    }
}

#[test]
fn unreachable_target_is_reported() {
    let opts = ResourceOptions {
        max_rounds: 2,
        ..ResourceOptions::default()
    };
    assert!(resource_estimate_with(0.75, 0.99, &opts).is_err());
    assert!(resource_estimate(0.4, 0.9).is_err());
}

#[test]
fn success_probability_ratio_band() {
    let r = success_probability_ratio(0.75).unwrap();
    assert!((0.3..=0.5).contains(&r), "{r}");
    let near_one = success_probability_ratio(0.999).unwrap();
    assert!(near_one.is_finite() && near_one > 0.0);
}

#[test]
fn dm_run_at_half_has_no_gain() {
    let scan = dm_anisotropy_run(0.5, 1.0, [0.1, 0.0, 0.0], (0.0, 20.0), 0.5).unwrap();
    assert!(scan.curve.fidelity.iter().all(|&f| f <= 0.5 + 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn curve_never_beats_closed_form(f in 0.5f64..1.0, t in 0.0f64..30.0) {
        let sim = ThreePairSimulator::isotropic().unwrap();
        let o = sim.accepted(f, t, SiteSet::Sites3456).unwrap();
        prop_assert!(o.fidelity <= max_fidelity_formula(f) + 1e-9);
    }

    #[test]
    fn information_is_bounded(t in 0.0f64..10.0, pair in 1usize..=3) {
        let layout = ChainLayout::new(3).unwrap();
        let i = bell_mutual_information(&layout, pair, t).unwrap();
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&i));
    }
}
