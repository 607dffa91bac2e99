//! One handler per subcommand: load inputs, call the library, shape JSON.

use std::path::Path;

use serde_json::{json, Map, Value};

use graphboot::bootstrap::{bb_run, dwb_run};
use graphboot::covariance::{default_repair_floor, hac_estimate, psd_repair, Kernel};
use graphboot::dgp::{
    gen_iid_normal, gen_network, run_coverage_detailed, CliffOrdModel, DgpSpec, MaModel,
    ProcessKind,
};
use graphboot::graph::denseness::denseness;
use graphboot::inference::{
    confidence_set, dependence_transform_rate, diagnostics, empirical_quantile, GammaSequence,
    Scheme, TailPolicy, WeightNormProfile,
};
use graphboot::rng::{child_seed, stream_rng};
use graphboot::smooth::{Identity, L2NormSquared, Polynomial, SmoothFn};
use graphboot::{DistanceMatrix, SampleMatrix};

use crate::args::{
    BootstrapArgs, CoverageArgs, DensenessArgs, DiagnoseArgs, DistancesArgs, HacArgs,
    QuantilesArgs, SchemeArg, SimulateArgs, TailArg, WeightNormArg,
};
use crate::io::{read_file, write_file, write_replicates, CliError, Output};

/// Seed domain tags for `simulate` (coverage has its own inside the library).
const TAG_SIM_NETWORK: u64 = 1;
const TAG_SIM_DATA: u64 = 2;

pub fn distances(a: &DistancesArgs) -> Result<Output, CliError> {
    let d = a.graph.load()?;
    let text = d.to_text();
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Output::Json(json!({
                "n": d.n(),
                "max_finite_distance": d.max_finite(),
                "max_class": d.max_class(),
                "out": path.display().to_string(),
            })))
        }
        None => Ok(Output::Text(text)),
    }
}

pub fn denseness_cmd(a: &DensenessArgs) -> Result<Output, CliError> {
    let d = a.graph.load()?;
    // `delta`/`delta_boundary` are the first moments (the block-size
    // average used everywhere as a center); the `_k` variants carry the
    // requested moment order, and the central moment always uses k.
    let first = denseness(&d, a.s, 1)?;
    let at_k = denseness(&d, a.s, a.k)?;
    Ok(Output::Json(json!({
        "n": d.n(),
        "s": a.s,
        "k": a.k,
        "delta": first.delta,
        "delta_boundary": first.delta_boundary,
        "delta_k": at_k.delta,
        "delta_boundary_k": at_k.delta_boundary,
        "d_max": at_k.d_max,
        "d_max_boundary": at_k.d_max_boundary,
        "delta_central": at_k.delta_central,
    })))
}

pub fn hac(a: &HacArgs) -> Result<Output, CliError> {
    let d = a.graph.load()?;
    let y = a.data.load()?;
    let kernel = Kernel::parse(&a.kernel)?;
    let sigma = hac_estimate(&d, &y, kernel, a.bandwidth)?;
    let mut doc = Map::new();
    doc.insert("kernel".into(), json!(kernel.name()));
    doc.insert("bandwidth".into(), json!(a.bandwidth));
    doc.insert("n".into(), json!(y.n()));
    doc.insert("v".into(), json!(y.v()));
    doc.insert(
        "min_eigenvalue".into(),
        json!(sigma.min_eigenvalue()),
    );
    doc.insert("sigma".into(), serde_json::to_value(&sigma).expect("matrix serializes"));
    if a.repair {
        let floor = a.floor.unwrap_or_else(|| default_repair_floor(&sigma));
        let repaired = psd_repair(&sigma, floor)?;
        doc.insert("floor".into(), json!(floor));
        doc.insert(
            "sigma_repaired".into(),
            serde_json::to_value(&repaired).expect("matrix serializes"),
        );
    }
    Ok(Output::Json(Value::Object(doc)))
}

/// Parse `--phi identity | l2norm | poly:SPEC`. The `l2norm` transform is
/// the squared Euclidean norm (the plain norm is not differentiable at the
/// origin).
fn parse_phi(spec: &str) -> Result<Box<dyn SmoothFn + Sync>, CliError> {
    match spec {
        "identity" => Ok(Box::new(Identity)),
        "l2norm" => Ok(Box::new(L2NormSquared)),
        s => match s.strip_prefix("poly:") {
            Some(body) => Ok(Box::new(Polynomial::parse(body)?)),
            None => Err(CliError::new(
                "invalid_parameter",
                format!("unknown transform `{spec}`: use identity, l2norm, or poly:SPEC"),
            )),
        },
    }
}

pub fn bootstrap(scheme: Scheme, a: &BootstrapArgs) -> Result<Output, CliError> {
    let seed = a.seed.ok_or_else(|| {
        CliError::new(
            "missing_seed",
            "--seed is required for bootstrap runs (no wall-clock seeding)",
        )
    })?;
    let d = a.graph.load()?;
    let y = a.data.load()?;
    let phi = a.phi.as_deref().map(parse_phi).transpose()?;
    let run = match scheme {
        Scheme::Block => bb_run(&y, &d, a.radius, a.reps, phi.as_deref(), seed)?,
        Scheme::DependentWild => dwb_run(&y, &d, a.radius, a.reps, phi.as_deref(), seed)?,
    };
    run.validate()?;
    let sets: Vec<Value> = a
        .alphas
        .iter()
        .map(|&alpha| -> Result<Value, CliError> {
            let set = confidence_set(&run, alpha)?;
            Ok(serde_json::to_value(set).expect("set serializes"))
        })
        .collect::<Result<_, _>>()?;
    if let Some(path) = &a.dump_replicates {
        write_replicates(path, &run.replicates_t1, run.replicates_t2.as_deref())?;
    }
    let mut doc = Map::new();
    doc.insert("scheme".into(), json!(run.scheme.name()));
    doc.insert("n".into(), json!(run.n));
    doc.insert("v".into(), json!(run.v));
    doc.insert("radius".into(), json!(run.s_n));
    doc.insert("reps".into(), json!(run.reps));
    doc.insert("seed".into(), json!(run.seed));
    doc.insert(
        "sample_mean".into(),
        json!(run.sample_mean.iter().copied().collect::<Vec<f64>>()),
    );
    doc.insert(
        "center".into(),
        json!(run.center.iter().copied().collect::<Vec<f64>>()),
    );
    doc.insert(
        "sigma_star".into(),
        serde_json::to_value(&run.sigma_star).expect("matrix serializes"),
    );
    doc.insert("phi".into(), json!(a.phi));
    doc.insert("phi_at_sample_mean".into(), json!(run.phi_at_sample_mean));
    doc.insert(
        "block".into(),
        serde_json::to_value(&run.block).expect("stats serialize"),
    );
    doc.insert("confidence_sets".into(), Value::Array(sets));
    Ok(Output::Json(Value::Object(doc)))
}

pub fn diagnose(a: &DiagnoseArgs) -> Result<Output, CliError> {
    let d = a.graph.load()?;
    let tail = match a.gamma_tail {
        TailArg::Zero => TailPolicy::Zero,
        TailArg::Reject => TailPolicy::Reject,
    };
    let gamma = GammaSequence::new(a.gamma.clone(), tail)?;
    let profile = match a.weight_norm {
        WeightNormArg::Gaussian => WeightNormProfile::GaussianFromOmega,
        WeightNormArg::Unit => WeightNormProfile::Unit,
    };
    let report = diagnostics(&d, a.radius, &gamma, a.r, a.p, profile)?;
    let mut doc = match serde_json::to_value(&report).expect("report serializes") {
        Value::Object(m) => m,
        _ => unreachable!("diagnostics report is a JSON object"),
    };
    doc.insert("radius".into(), json!(a.radius));
    doc.insert("r".into(), json!(a.r));
    doc.insert("p".into(), json!(a.p));
    doc.insert("gamma_terms".into(), json!(gamma.len()));
    if let Some(tau) = a.tau {
        let rate = dependence_transform_rate(a.p, tau, a.c4_zero)?;
        doc.insert("transform_rate".into(), json!(rate));
    }
    Ok(Output::Json(Value::Object(doc)))
}

pub fn quantiles(a: &QuantilesArgs) -> Result<Output, CliError> {
    let values = crate::io::load_column(&a.data, a.column, a.header)?;
    let qs: Vec<f64> = a
        .alphas
        .iter()
        .map(|&alpha| empirical_quantile(&values, alpha))
        .collect::<Result<_, _>>()?;
    Ok(Output::Json(json!({
        "count": values.len(),
        "alphas": a.alphas,
        "quantiles": qs,
    })))
}

/// Parse a TOML (`.toml`) or JSON (anything else) design file.
fn load_spec(path: &Path) -> Result<DgpSpec, CliError> {
    let text = read_file(path)?;
    let parsed: Result<DgpSpec, String> =
        if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| e.to_string())
        } else {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        };
    parsed.map_err(|e| CliError::new("config_error", format!("{}: {e}", path.display())))
}

/// Resolve the run seed: the flag wins, then the config file, else error.
fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> Result<u64, CliError> {
    flag.or(config).ok_or_else(|| {
        CliError::new(
            "missing_seed",
            "--seed is required (or a `seed` entry in the config); no wall-clock seeding",
        )
    })
}

pub fn simulate(a: &SimulateArgs) -> Result<Output, CliError> {
    let spec = load_spec(&a.config)?;
    let seed = resolve_seed(a.seed, spec.seed)?;
    let net = gen_network(spec.network, spec.n, child_seed(seed, TAG_SIM_NETWORK))?;
    let d = DistanceMatrix::from_network(&net);
    let data_seed = child_seed(seed, TAG_SIM_DATA);
    let mut gamma: Option<Vec<f64>> = None;
    let (y, true_var) = match spec.process {
        ProcessKind::IidNormal => (gen_iid_normal(spec.n, data_seed)?, 1.0),
        ProcessKind::MaNeighborhood { q } => {
            let model = MaModel::new(&d, q)?;
            let y = SampleMatrix::from_column(&model.draw(&mut stream_rng(data_seed, 0)))?;
            (y, model.true_scaled_mean_variance())
        }
        ProcessKind::CliffOrd { lambda } => {
            let model = CliffOrdModel::new(&net, lambda)?;
            gamma = Some(model.gamma_series(&d)?);
            let y = SampleMatrix::from_column(&model.draw(&mut stream_rng(data_seed, 0)))?;
            (y, model.true_scaled_mean_variance())
        }
    };
    let data: Vec<f64> = (0..y.n()).map(|i| y.get(i, 0)).collect();
    if let Some(path) = &a.out_edges {
        write_file(path, &net.to_edge_list_text())?;
    }
    if let Some(path) = &a.out_data {
        let csv: String = data.iter().map(|v| format!("{v}\n")).collect();
        write_file(path, &csv)?;
    }
    Ok(Output::Json(json!({
        "network": spec.network.name(),
        "process": spec.process.name(),
        "n": spec.n,
        "seed": seed,
        "edge_count": net.edge_count(),
        "true_scaled_variance": true_var,
        "gamma": gamma,
        "data": data,
    })))
}

pub fn coverage(a: &CoverageArgs) -> Result<Output, CliError> {
    let spec = load_spec(&a.config)?;
    let seed = resolve_seed(a.seed, spec.seed)?;
    let scheme = match a.scheme {
        SchemeArg::Block => Scheme::Block,
        SchemeArg::Dwb => Scheme::DependentWild,
    };
    let (report, rows) =
        run_coverage_detailed(&spec, scheme, a.radius, a.reps, a.alpha, a.mc, seed)?;
    if let Some(path) = &a.records {
        let mut out = String::new();
        for row in &rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.rep,
                u8::from(row.covered),
                row.sigma_star,
                row.radius
            ));
        }
        write_file(path, &out)?;
    }
    Ok(Output::Json(serde_json::to_value(report).expect("report serializes")))
}
