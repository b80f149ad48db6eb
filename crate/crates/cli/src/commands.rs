//! One function per subcommand. Each returns the full text written to the
//! output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use spinpurify::analysis::{
    asymptotic_round_ratio, bell_mutual_information, cnot_mutual_information, curve_with,
    dm_anisotropy_run, fwhm_window, max_fidelity_formula, resource_estimate_with,
    two_pair_mutual_information, FidelityCurve, ResourceOptions,
};
use spinpurify::protocols::{
    bbpssw_map, iterate, pure_filter_with_coupling, two_pair_protocol, FilterTime, Protocol,
    ThreePairSimulator, ACCEPTED_PATTERNS, COINCIDENT_PATTERNS, OPTIMAL_THREE_PAIR_TIME,
    REJECTED_PATTERNS,
};
use spinpurify::spin::is_maximally_entangled;
use spinpurify::{
    bilateral_hamiltonian, hermitian_eig, invariant_subspace_check, ChainLayout, CouplingSpec,
    ProtocolOutcome, PureFilterSpec, SiteSet,
};

use crate::args::{Format, HamiltonianSpec};
use crate::cli::*;
use crate::error::{CliError, CliResult};
use crate::format::csv_table;

/// Runs `command` and renders its report.
pub fn execute(command: &Command) -> CliResult<String> {
    match command {
        Command::Curve(a) => curve(a),
        Command::Compare(a) => compare(a),
        Command::Resources(a) => resources(a),
        Command::Mutualinfo(a) => mutual_info(a),
        Command::Nogo(a) => nogo(a),
        Command::Dm(a) => dm(a),
        Command::Protocol(a) => protocol(a),
        Command::Filter(a) => filter(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Window(a) => window(a),
    }
}

#[derive(Serialize)]
struct Report<'a, I: Serialize> {
    command: &'a str,
    inputs: &'a I,
    results: Value,
}

fn report<I: Serialize>(command: &str, inputs: &I, results: Value) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Report {
        command,
        inputs,
        results,
    })?;
    s.push('\n');
    Ok(s)
}

fn curve_csv(c: &FidelityCurve) -> CliResult<String> {
    let rows = (0..c.len()).map(|i| vec![c.t_grid[i], c.fidelity[i], c.probability[i]]);
    csv_table(&["t", "fidelity", "probability"], rows)
}

fn curve_json(c: &FidelityCurve) -> Value {
    let peak = c.peak().map(|(t, f)| json!({ "t": t, "fidelity": f }));
    json!({
        "t": c.t_grid,
        "fidelity": c.fidelity,
        "probability": c.probability,
        "peak": peak,
    })
}

fn curve(a: &CurveArgs) -> CliResult<String> {
    let sim = ThreePairSimulator::new(&a.coupling.coupling())?;
    let c = curve_with(&sim, a.f, &a.t.points(), a.site_set.into())?;
    match a.format {
        Format::Csv => curve_csv(&c),
        Format::Json => report("curve", a, curve_json(&c)),
    }
}

fn compare(a: &CompareArgs) -> CliResult<String> {
    if a.grid.lo < 0.0 || a.grid.hi > 1.0 {
        return Err(CliError::Usage(format!(
            "fidelity grid {} leaves [0, 1]",
            a.grid
        )));
    }
    let sim = ThreePairSimulator::isotropic()?;
    let mut rows = Vec::new();
    for f in a.grid.points() {
        let f = f.min(1.0);
        let sc = sim
            .accepted(f, OPTIMAL_THREE_PAIR_TIME, SiteSet::Sites3456)?
            .fidelity;
        let (bbpssw, _) = bbpssw_map(f)?;
        rows.push(vec![f, sc, bbpssw, f]);
    }
    let header = ["F", "F_sc", "F_bbpssw", "F_identity"];
    match a.format {
        Format::Csv => csv_table(&header, rows),
        Format::Json => {
            let columns: Vec<Vec<f64>> = (0..4)
                .map(|k| rows.iter().map(|r| r[k]).collect())
                .collect();
            let results: serde_json::Map<String, Value> = header
                .iter()
                .zip(columns)
                .map(|(h, c)| (h.to_string(), json!(c)))
                .collect();
            report("compare", a, Value::Object(results))
        }
    }
}

fn resources(a: &ResourcesArgs) -> CliResult<String> {
    if !(a.fi > 0.5 && a.fi < a.ff && a.ff < 1.0) {
        return Err(CliError::Usage(format!(
            "need 1/2 < Fi < Ff < 1, got Fi = {}, Ff = {}",
            a.fi, a.ff
        )));
    }
    let opts = ResourceOptions {
        bbpssw_probability: a.pb.into(),
        bbpssw_rounds: a.rb.into(),
        ..ResourceOptions::default()
    };
    let e = resource_estimate_with(a.fi, a.ff, &opts)?;
    let sequence = iterate(Protocol::ThreePair, a.fi, e.r_sc.round() as usize)?.fidelities();
    report(
        "resources",
        a,
        json!({
            "r_sc": e.r_sc,
            "r_b": e.r_b,
            "p_sc_avg": e.p_sc_avg,
            "p_b": e.p_b,
            "l_sc": e.l_sc,
            "l_b": e.l_b,
            "ratio": e.ratio,
            "three_pair_sequence": sequence,
            "round_coefficient": asymptotic_round_ratio(),
        }),
    )
}

fn mutual_info(a: &MutualInfoArgs) -> CliResult<String> {
    let layout = ChainLayout::new(3)?;
    let three = (1..=3)
        .map(|p| bell_mutual_information(&layout, p, a.t))
        .collect::<Result<Vec<_>, _>>()?;
    let (best_pair, best) =
        three
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| {
                if x > acc.1 {
                    (i + 1, x)
                } else {
                    acc
                }
            });
    let two = (1..=2)
        .map(|p| two_pair_mutual_information(p, a.t))
        .collect::<Result<Vec<_>, _>>()?;
    report(
        "mutualinfo",
        a,
        json!({
            "three_pair_bits": three,
            "best_bits": best,
            "best_pair": best_pair,
            "two_pair_bits": two,
            "cnot_bits": cnot_mutual_information()?,
        }),
    )
}

fn random_coupling(rng: &mut ChaCha8Rng) -> CouplingSpec {
    let mut j = || rng.random_range(-2.0..=2.0);
    CouplingSpec::new(j(), j(), j())
}

fn nogo(a: &NogoArgs) -> CliResult<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut samples = Vec::with_capacity(a.samples);
    let (mut max_delta, mut max_gain) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..a.samples {
        let c = random_coupling(&mut rng);
        let t = rng.random_range(0.0..=20.0);
        let o = two_pair_protocol(a.f, &c, t)?;
        let delta = o.fidelity - a.f;
        max_delta = max_delta.max(delta.abs());
        max_gain = max_gain.max(delta);
        samples.push(json!({
            "jx": c.jx, "jy": c.jy, "jz": c.jz, "t": t,
            "F_out": o.fidelity, "p_success": o.success_probability,
        }));
    }
    let mut max_leakage = 0.0f64;
    for _ in 0..a.leakage_samples {
        max_leakage =
            max_leakage.max(invariant_subspace_check(&random_coupling(&mut rng))?.max_leakage());
    }
    report(
        "nogo",
        a,
        json!({
            "max_abs_delta": max_delta,
            "max_gain": if a.samples == 0 { None } else { Some(max_gain) },
            "max_leakage": max_leakage,
            "samples": samples,
        }),
    )
}

fn dm(a: &DmArgs) -> CliResult<String> {
    let scan = dm_anisotropy_run(a.f, a.j, a.d.0, (a.t.lo, a.t.hi), a.t.step)?;
    match a.format {
        Format::Csv => curve_csv(&scan.curve),
        Format::Json => report(
            "dm",
            a,
            json!({
                "t_best": scan.t_best,
                "F_best": scan.f_best,
                "p_best": scan.p_best,
                "gain": scan.f_best - a.f,
            }),
        ),
    }
}

fn patterns_json(o: &ProtocolOutcome) -> Value {
    o.accepted_patterns
        .iter()
        .zip(&o.branch_probabilities)
        .map(|((sites, bits), p)| json!({ "sites": sites, "outcomes": bits, "probability": p }))
        .collect()
}

fn protocol(a: &ProtocolArgs) -> CliResult<String> {
    let coupling = a.coupling.coupling();
    let record = match a.kind {
        ProtocolKind::ThreePair | ProtocolKind::Rejected => {
            let site_set = SiteSet::from(a.site_set);
            let patterns = if a.kind == ProtocolKind::ThreePair {
                &ACCEPTED_PATTERNS
            } else {
                &REJECTED_PATTERNS
            };
            let o = ThreePairSimulator::new(&coupling)?.run(a.f, a.t, site_set, patterns)?;
            json!({
                "F_in": a.f, "t": a.t, "site_set": site_set.to_string(),
                "F_out": o.fidelity, "p_success": o.success_probability,
                "patterns": patterns_json(&o),
            })
        }
        ProtocolKind::TwoPair => {
            let o = two_pair_protocol(a.f, &coupling, a.t)?;
            json!({
                "F_in": a.f, "t": a.t, "site_set": "34",
                "F_out": o.fidelity, "p_success": o.success_probability,
                "patterns": patterns_json(&o),
            })
        }
        ProtocolKind::Bbpssw => {
            let (f_out, p) = bbpssw_map(a.f)?;
            let patterns: Vec<Value> = COINCIDENT_PATTERNS
                .iter()
                .map(|bits| json!({ "sites": [3, 4], "outcomes": bits }))
                .collect();
            json!({
                "F_in": a.f, "t": null, "site_set": "34",
                "F_out": f_out, "p_success": p, "patterns": patterns,
            })
        }
    };
    report("protocol", a, record)
}

fn filter(a: &FilterArgs) -> CliResult<String> {
    let spec = PureFilterSpec::from_alpha(a.alpha)?;
    let time = a.t.map_or(FilterTime::Optimal, FilterTime::At);
    let t = a.t.unwrap_or(spec.optimal_jt() / a.j.abs());
    let o = pure_filter_with_coupling(&spec, time, a.j)?;
    report(
        "filter",
        a,
        json!({
            "alpha": spec.alpha(),
            "beta": spec.beta(),
            "optimal_jt": spec.optimal_jt(),
            "t": t,
            "p_success": o.success_probability,
            "phi_plus_fidelity": o.fidelity,
            "maximally_entangled": is_maximally_entangled(&o.post_state, 1e-9)?,
        }),
    )
}

fn spectrum(a: &SpectrumArgs) -> CliResult<String> {
    let spec = match &a.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            HamiltonianSpec::from_json(&text)?
        }
        None => {
            let c = a.coupling.coupling();
            HamiltonianSpec {
                n_pairs: a.pairs,
                jx: c.jx,
                jy: c.jy,
                jz: c.jz,
                d: c.dm,
            }
        }
    };
    let coupling = spec.coupling();
    let h = bilateral_hamiltonian(&spec.layout()?, &coupling)?;
    let values = hermitian_eig(&h)?.values;
    let leakage = if spec.n_pairs == 2 && !coupling.has_dm() {
        let r = invariant_subspace_check(&coupling)?;
        let subspaces: Vec<Value> = r
            .subspaces
            .iter()
            .map(|s| json!({ "subspace": s.name(), "leakage": s.leakage }))
            .collect();
        json!({ "max": r.max_leakage(), "subspaces": subspaces })
    } else {
        Value::Null
    };
    report(
        "spectrum",
        &spec,
        json!({ "eigenvalues": values, "invariant_subspaces": leakage }),
    )
}

fn window(a: &WindowArgs) -> CliResult<String> {
    let rows =
        a.f.iter()
            .map(|&f| {
                Ok(json!({
                    "F": f,
                    "fwhm": fwhm_window(f)?,
                    "F_max": max_fidelity_formula(f),
                }))
            })
            .collect::<CliResult<Vec<_>>>()?;
    report("window", a, json!(rows))
}
