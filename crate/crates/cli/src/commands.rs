use cvgauss::circuit::{Backend, Circuit};
use cvgauss::entanglement::{
    classify_three_mode, duan_test, log_negativity, npt_test, simon_test, tan_test, tripartite_witnesses,
};
use cvgauss::measurement::{epr_paradox_test, Outcome};
use cvgauss::nonlocality::{b2_optimize, b2_tmsv_asymptotic_optimum, B2Search};
use cvgauss::protocols::*;
use cvgauss::state::StateRecord;
use cvgauss::{CriterionReport, GaussianState};
use log::info;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::output::{envelope, read_file, Document, Failure, Sweep, Table};
use crate::{BackendArg, CloneArgs, Common, Densecode, Entanglement, Ghz, Nonlocal, RunCircuit, Swap, Telecl, Teleport};

/// Largest element-wise backend difference still reported as agreement.
const AGREEMENT: f64 = 1e-9;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialise")
}

fn summary(columns: &[Vec<f64>], modes: &[usize]) -> Value {
    let per_mode: Vec<Value> = columns
        .iter()
        .zip(modes)
        .map(|(c, m)| {
            let n = c.len() as f64;
            let mean = c.iter().sum::<f64>() / n;
            let var = c.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            json!({ "mode": m, "mean": mean, "variance": var })
        })
        .collect();
    Value::Array(per_mode)
}

pub fn run_circuit(common: &Common, args: &RunCircuit) -> Result<Document, Failure> {
    let circuit = Circuit::from_json(&read_file(&args.circuit)?)?;
    let modes = circuit.measured_modes();
    info!("circuit with {} modes and {} ops", circuit.n_modes, circuit.ops.len());
    let mut rng = StdRng::seed_from_u64(common.seed);
    let mut table = None;
    let mut sample = |backend: Backend, rng: &mut StdRng| -> Result<Option<Value>, Failure> {
        if args.shots == 0 || modes.is_empty() {
            return Ok(None);
        }
        let cols = circuit.sample(backend, args.shots, rng)?;
        if table.is_none() {
            let mut header = vec!["shot".to_string()];
            header.extend(modes.iter().map(|m| format!("x{m}")));
            let mut t = Table::new(&header);
            for s in 0..args.shots {
                let mut row = vec![s as f64];
                row.extend(cols.iter().map(|c| c[s]));
                t.push(&row);
            }
            table = Some(t);
        }
        Ok(Some(summary(&cols, &modes)))
    };
    let result = match args.backend {
        BackendArg::Covariance => {
            let state = circuit.run_covariance()?;
            json!({
                "backend": "covariance",
                "state": to_value(&state),
                "measured_modes": modes,
                "samples": sample(Backend::Covariance, &mut rng)?,
            })
        }
        BackendArg::Stabilizer => {
            let tableau = circuit.run_stabilizer()?;
            json!({
                "backend": "stabilizer",
                "state": to_value(&tableau.to_gaussian()?),
                "tableau_size": tableau.state_size(),
                "measured_modes": modes,
                "samples": sample(Backend::Stabilizer, &mut rng)?,
            })
        }
        BackendArg::Both => {
            let diff = circuit.compare_backends()?;
            json!({
                "backend": "both",
                "state": to_value(&circuit.run_covariance()?),
                "diff": { "mean": diff.mean, "cov": diff.cov, "max": diff.max() },
                "tolerance": AGREEMENT,
                "agree": diff.max() <= AGREEMENT,
                "measured_modes": modes,
                "samples": {
                    "covariance": sample(Backend::Covariance, &mut rng)?,
                    "stabilizer": sample(Backend::Stabilizer, &mut rng)?,
                },
            })
        }
    };
    let params = json!({
        "circuit": args.circuit.display().to_string(),
        "n_modes": circuit.n_modes,
        "shots": args.shots,
    });
    Ok(Document {
        json: envelope("run-circuit", common, params, result),
        table,
    })
}

pub fn teleport(common: &Common, args: &Teleport) -> Result<Document, Failure> {
    let alpha = (args.alpha_x, args.alpha_p);
    let input = GaussianState::coherent(alpha.0, alpha.1);
    let mut table = Table::new(&["r", "g", "fidelity", "excess_noise"]);
    if let Some(sweep) = Sweep::from_common(common, &["r", "g"])? {
        let mut points = Vec::new();
        for &v in &sweep.values {
            let (r, g) = if sweep.param == "r" { (v, args.g) } else { (args.r, v) };
            let res = cvgauss::protocols::teleport(&input, r, g)?;
            let f = res.fidelity.unwrap_or(f64::NAN);
            table.push(&[r, g, f, res.excess_noise]);
            points.push(json!({ "r": r, "g": g, "fidelity": f, "excess_noise": res.excess_noise }));
        }
        let params = json!({ "sweep": sweep.param, "r": args.r, "g": args.g, "alpha": [alpha.0, alpha.1] });
        return Ok(Document {
            json: envelope("teleport", common, params, Value::Array(points)),
            table: Some(table),
        });
    }
    let res = cvgauss::protocols::teleport(&input, args.r, args.g)?;
    table.push(&[args.r, args.g, res.fidelity.unwrap_or(f64::NAN), res.excess_noise]);
    let mut result = json!({
        "fidelity": res.fidelity,
        "fidelity_formula": teleport_fidelity_coherent(res.squeezing, args.g, alpha),
        "excess_noise": res.excess_noise,
        "ensemble": to_value(&res.ensemble),
        "single_shot_zero": to_value(&res.single_shot_zero),
    });
    if args.g == 1.0 {
        result["transfer_operator_fidelity"] = json!(transfer_operator_fidelity(res.squeezing));
    }
    if args.shots > 0 {
        let mut rng = StdRng::seed_from_u64(common.seed);
        let covariance = matches!(args.backend, BackendArg::Covariance | BackendArg::Both);
        let stabilizer = matches!(args.backend, BackendArg::Stabilizer | BackendArg::Both);
        if covariance {
            let mc = teleport_monte_carlo(&input, args.r, args.g, args.shots, &mut rng)?;
            result["monte_carlo"] = to_value(&mc);
        }
        if stabilizer {
            if args.g != 1.0 {
                return Err(Failure::Usage("the stabilizer teleportation circuit has unit gain".into()));
            }
            let st = teleport_stabilizer(args.r, alpha, args.shots, &mut rng)?;
            result["stabilizer"] = to_value(&st);
        }
    }
    let params = json!({
        "r": args.r, "g": args.g, "alpha": [alpha.0, alpha.1], "shots": args.shots,
    });
    Ok(Document {
        json: envelope("teleport", common, params, result),
        table: Some(table),
    })
}

fn densecode_row(nbar: f64) -> Result<(Vec<f64>, Value), Failure> {
    let dc = dense_coding_capacity(nbar)?;
    let ch = channel_capacities(nbar)?;
    let row = vec![nbar, dc.capacity, ch.number, ch.coherent, ch.squeezed, dc.r, dc.sigma2];
    let value = json!({
        "nbar": nbar,
        "dense": to_value(&dc),
        "channels": to_value(&ch),
        "dense_beats_number": dc.capacity > ch.number,
        "dense_beats_squeezed": dc.capacity > ch.squeezed,
    });
    Ok((row, value))
}

pub fn densecode(common: &Common, args: &Densecode) -> Result<Document, Failure> {
    let mut table = Table::new(&["nbar", "capacity_dense", "capacity_number", "capacity_coherent", "capacity_squeezed", "r", "sigma2"]);
    let sweep = Sweep::from_common(common, &["nbar"])?;
    let values = sweep.as_ref().map(|s| s.values.clone()).unwrap_or_else(|| vec![args.nbar]);
    let mut points = Vec::new();
    for nbar in values {
        let (row, value) = densecode_row(nbar)?;
        table.push(&row);
        points.push(value);
    }
    let break_even = |scheme: Scheme| -> Result<Value, Failure> {
        let r = dense_coding_break_even(scheme)?;
        Ok(json!({ "r": r, "nbar": dense_coding_nbar(r), "db": 10.0 * (2.0 * r).exp().log10() }))
    };
    let result = json!({
        "points": points,
        "break_even": {
            "number": break_even(Scheme::Number)?,
            "squeezed": break_even(Scheme::Squeezed)?,
        },
        "units": "nats",
    });
    let params = json!({ "nbar": args.nbar, "sweep": sweep.map(|s| s.param) });
    Ok(Document {
        json: envelope("densecode", common, params, result),
        table: Some(table),
    })
}

pub fn clone(common: &Common, args: &CloneArgs) -> Result<Document, Failure> {
    let mut table = Table::new(&["N", "M", "fidelity_coherent", "fidelity_universal"]);
    let universal = Alphabet::Universal { dim: args.dim };
    let sweep = Sweep::from_common(common, &["M"])?;
    let ms: Vec<u64> = match &sweep {
        Some(s) => s.values.iter().map(|v| v.round() as u64).collect(),
        None => vec![args.m],
    };
    let mut points = Vec::new();
    for m in ms {
        let fc = clone_fidelity(args.n, m, Alphabet::Coherent)?;
        let fu = clone_fidelity(args.n, m, universal)?;
        table.push(&[args.n as f64, m as f64, fc, fu]);
        points.push(json!({ "N": args.n, "M": m, "fidelity_coherent": fc, "fidelity_universal": fu }));
    }
    let input = GaussianState::coherent(args.alpha_x, args.alpha_p);
    let circuit = clone_coherent_circuit(&input)?;
    let result = json!({
        "formulas": points,
        "circuit": {
            "amplifier_squeezing": amplifier_squeezing(),
            "clones": to_value(&circuit.clones),
            "fidelities": circuit.fidelities,
        },
    });
    let params = json!({
        "N": args.n, "M": args.m, "dim": args.dim, "alpha": [args.alpha_x, args.alpha_p],
    });
    Ok(Document {
        json: envelope("clone", common, params, result),
        table: Some(table),
    })
}

pub fn swap(common: &Common, args: &Swap) -> Result<Document, Failure> {
    let mut table = Table::new(&["r", "r_prime", "R"]);
    if let Some(sweep) = Sweep::from_common(common, &["r", "r_prime"])? {
        let mut points = Vec::new();
        for &v in &sweep.values {
            let (r, rp) = if sweep.param == "r" { (v, args.r_prime) } else { (args.r, v) };
            let big = swap_squeezing(r, rp)?;
            table.push(&[r, rp, big]);
            points.push(json!({ "r": r, "r_prime": rp, "R": big }));
        }
        let params = json!({ "sweep": sweep.param, "r": args.r, "r_prime": args.r_prime });
        return Ok(Document {
            json: envelope("swap", common, params, Value::Array(points)),
            table: Some(table),
        });
    }
    let closed = cvgauss::protocols::swap(args.r, args.r_prime)?;
    let mut rng = StdRng::seed_from_u64(common.seed);
    let shot = swap_operational(args.r, args.r_prime, [Outcome::Sample; 2], &mut rng)?;
    let fit = fit_tmsv(&shot.corrected)?;
    table.push(&[closed.r, closed.r_prime, closed.big_r]);
    let result = json!({
        "R": closed.big_r,
        "state": to_value(&closed.state),
        "operational": {
            "outcomes": shot.outcomes,
            "fit": to_value(&fit),
            "corrected": to_value(&shot.corrected),
        },
    });
    let params = json!({ "r": args.r, "r_prime": args.r_prime });
    Ok(Document {
        json: envelope("swap", common, params, result),
        table: Some(table),
    })
}

pub fn telecl(common: &Common, args: &Telecl) -> Result<Document, Failure> {
    let mut table = Table::new(&["M", "r", "db"]);
    let sweep = Sweep::from_common(common, &["M"])?;
    let ms: Vec<u64> = match &sweep {
        Some(s) => s.values.iter().map(|v| v.round() as u64).collect(),
        None => vec![args.m],
    };
    let mut points = Vec::new();
    for m in ms {
        let res = telecloning_resource(m)?;
        table.push(&[m as f64, res.r, res.db]);
        points.push(to_value(&res));
    }
    let result = if sweep.is_some() { Value::Array(points) } else { points.remove(0) };
    Ok(Document {
        json: envelope("telecl", common, json!({ "M": args.m }), result),
        table: Some(table),
    })
}

fn load_state(text: &str) -> Result<GaussianState, Failure> {
    let value: Value = serde_json::from_str(text).map_err(cvgauss::Error::from)?;
    let candidate = [&value, &value["state"], &value["result"]["state"]]
        .into_iter()
        .find(|v| v.get("cov").is_some())
        .ok_or_else(|| Failure::Usage("no state record {n_modes, mean, cov} found".into()))?;
    let record: StateRecord =
        serde_json::from_value(candidate.clone()).map_err(|e| Failure::Usage(format!("bad state record: {e}")))?;
    let state = GaussianState::from_record(&record)?;
    let diag = state.validate();
    if let Some(v) = diag.violation() {
        return Err(Failure::Compute(format!("not a physical state: {v:?}")));
    }
    Ok(state)
}

pub fn entanglement(common: &Common, args: &Entanglement) -> Result<Document, Failure> {
    let state = load_state(&read_file(&args.state)?)?;
    let n = state.n_modes();
    let mut reports: Vec<CriterionReport> = Vec::new();
    let mut extra = json!({});
    match n {
        0 | 1 => return Err(Failure::Usage("entanglement needs at least two modes".into())),
        2 => {
            reports.push(simon_test(&state)?);
            reports.push(npt_test(&state, &[1])?);
            reports.push(duan_test(&state, 1.0)?);
            reports.push(tan_test(&state)?);
            reports.push(epr_paradox_test(&state)?);
            extra["log_negativity"] = json!(log_negativity(&state, &[1])?);
        }
        _ => {
            let mut negativities = Vec::new();
            for k in 0..n {
                let mut r = npt_test(&state, &[k])?;
                r.name = format!("npt[{}]", k + 1);
                reports.push(r);
                negativities.push(log_negativity(&state, &[k])?);
            }
            extra["log_negativity"] = json!(negativities);
            if n == 3 {
                reports.extend(tripartite_witnesses(&state)?);
                let class = classify_three_mode(&state)?;
                extra["classification"] = json!({ "class": class.class.label(), "detail": to_value(&class) });
            }
        }
    }
    let mut table = Table::new(&["name", "lhs", "bound", "margin", "verdict"]);
    for r in &reports {
        table.push_text(vec![
            r.name.clone(),
            r.lhs.to_string(),
            r.bound.to_string(),
            r.margin.to_string(),
            if r.violated() { "violated" } else { "satisfied" }.to_string(),
        ]);
    }
    extra["criteria"] = to_value(&reports);
    extra["n_modes"] = json!(n);
    let params = json!({ "state": args.state.display().to_string() });
    Ok(Document {
        json: envelope("entanglement", common, params, extra),
        table: Some(table),
    })
}

pub fn nonlocal(common: &Common, args: &Nonlocal) -> Result<Document, Failure> {
    let search = if args.full { B2Search::Full } else { B2Search::Family };
    let mut table = Table::new(&["r", "j_star", "b2_max"]);
    let sweep = Sweep::from_common(common, &["r"])?;
    let rs = sweep.as_ref().map(|s| s.values.clone()).unwrap_or_else(|| vec![args.r]);
    let mut points = Vec::new();
    for r in rs {
        if !(r >= 0.0) {
            return Err(Failure::Usage(format!("squeezing must be >= 0, got {r}")));
        }
        let opt = b2_optimize(&GaussianState::two_mode_squeezed_vacuum(r), search)?;
        table.push(&[r, opt.j_star, opt.b2_max]);
        points.push(json!({
            "r": r,
            "optimum": to_value(&opt),
            "asymptotic_optimum": b2_tmsv_asymptotic_optimum(r),
            "violates_local_bound": opt.b2_max > 2.0,
        }));
    }
    let result = if sweep.is_some() { Value::Array(points) } else { points.remove(0) };
    let params = json!({ "r": args.r, "search": if args.full { "full" } else { "family" } });
    Ok(Document {
        json: envelope("nonlocal", common, params, result),
        table: Some(table),
    })
}

pub fn ghz(common: &Common, args: &Ghz) -> Result<Document, Failure> {
    let state = ghz_network(args.n, args.r1, args.r2)?;
    let witness = ghz_witness_value(args.n, args.r1, args.r2)?;
    let mut result = json!({
        "state": to_value(&state),
        "witness_value": witness,
        "bowen_r1": bowen_relation(args.n, args.r2)?,
    });
    if args.n == 3 {
        result["classification"] = json!(classify_three_mode(&state)?.class.label());
    }
    let mut table = Table::new(&["N", "r1", "r2", "witness_value"]);
    table.push(&[args.n as f64, args.r1, args.r2, witness]);
    let params = json!({ "N": args.n, "r1": args.r1, "r2": args.r2 });
    Ok(Document {
        json: envelope("ghz", common, params, result),
        table: Some(table),
    })
}
