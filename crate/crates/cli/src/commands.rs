use serde_json::json;
use std::path::{Path, PathBuf};

use permlab::exchangeable::{strong_law_trajectory, theorem2_check, ExchangeableModel};
use permlab::framework::{limit_convergence_check, Clt};
use permlab::lacunary::{clt_sample, lil_max_sample, lil_trajectory, CltConfig, FixedPointX, FourierFunction, Normalization, Summand};
use permlab::measures::{empirical_measure, measure_from_csv, DiscreteMeasure, MixedNormal};
use permlab::metrics::{ks_distance, prohorov_distance, prohorov_oracle, strassen_coupling, wasserstein2, CouplingOutcome};
use permlab::seed;
use permlab::sequences::{diophantine_growth_scan, gen_erdos, gen_hadamard, IndexSequence, PermSpec};

use crate::output::{read_numeric_csv, real, Csv, Outputs};
use crate::svg::emit_svg;
use crate::{
    CliError, CliResult, CltArgs, Command, DioCountArgs, ExchangeableArgs, ExperimentConfig, FrameworkArgs,
    GenSeqArgs, LilArgs, Norm, PlotArgs, ProhorovArgs, SeqKind, StrongLawArgs, TheoremName,
};

pub(crate) fn execute(config: &ExperimentConfig) -> CliResult<Outputs> {
    let seed = config.seed;
    match &config.experiment {
        Command::GenSeq(a) => gen_seq(a),
        Command::DioCount(a) => dio_count(a),
        Command::Clt(a) => clt(a, seed),
        Command::Lil(a) => lil(a, seed),
        Command::Prohorov(a) => prohorov(a),
        Command::FrameworkCheck(a) => framework_check(a, seed),
        Command::Exchangeable(a) => exchangeable(a, seed),
        Command::StrongLaw(a) => strong_law(a, seed),
        Command::Plot(a) => plot(a),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn read_sequence(path: &Path) -> CliResult<IndexSequence> {
    Ok(IndexSequence::from_csv(&read_text(path)?)?)
}

fn read_measure(path: &Path) -> CliResult<DiscreteMeasure> {
    Ok(measure_from_csv(&read_text(path)?)?)
}

fn read_model(path: &Path) -> CliResult<ExchangeableModel> {
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(ExchangeableModel::from_json(&read_text(path)?, base)?)
}

fn theorem(name: TheoremName) -> Clt {
    match name {
        TheoremName::Clt => Clt::Plain,
        TheoremName::TrimmedClt => Clt::Trimmed,
    }
}

fn parse_perm(text: &str) -> CliResult<PermSpec> {
    text.parse::<PermSpec>().map_err(|e| CliError::Config(e.to_string()))
}

fn json_text(value: serde_json::Value) -> String {
    serde_json::to_string_pretty(&value).expect("JSON values serialise") + "\n"
}

/// `dist.csv` -> `dist.summary.json`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    out.with_file_name(format!("{stem}{suffix}"))
}

fn gen_seq(a: &GenSeqArgs) -> CliResult<Outputs> {
    let missing = |name: &str| CliError::Config(format!("--{name} is required for --kind {:?}", a.kind));
    let seq = match a.kind {
        SeqKind::Hadamard => gen_hadamard(a.q.ok_or_else(|| missing("q"))?, a.n1, a.n)?,
        SeqKind::Erdos => gen_erdos(a.c.ok_or_else(|| missing("c"))?, a.alpha.ok_or_else(|| missing("alpha"))?, a.n1, a.n)?,
    };
    let mut out = Outputs::default();
    out.add(&a.out, seq.to_csv());
    Ok(out)
}

fn dio_count(a: &DioCountArgs) -> CliResult<Outputs> {
    let seq = read_sequence(&a.seq)?;
    let rows = diophantine_growth_scan(&seq, a.a, a.b, a.c, &a.n_list)?;
    let mut csv = Csv::with_header(&["N", "count", "ratio"]);
    for r in rows {
        csv.row(&[r.n.to_string(), r.count.to_string(), real(r.ratio)]);
    }
    let mut out = Outputs::default();
    out.add(&a.out, csv.finish());
    Ok(out)
}

fn clt(a: &CltArgs, seed: u64) -> CliResult<Outputs> {
    let seq = read_sequence(&a.seq)?;
    let spec = parse_perm(&a.perm)?;
    let perm = match spec {
        PermSpec::Identity => None,
        _ => Some(spec.build(a.perm_len.unwrap_or(seq.len()))?),
    };
    let summand = match (&a.cos, &a.sin) {
        (None, None) => Summand::Sine,
        (cos, sin) => Summand::Fourier(FourierFunction::new(
            cos.clone().unwrap_or_default(),
            sin.clone().unwrap_or_default(),
        )?),
    };
    let norm = match a.norm {
        Norm::SqrtNOver2 => Normalization::SqrtNOver2,
        Norm::SqrtN => Normalization::SqrtN,
    };
    let cfg = CltConfig { n: a.n, m: a.m, norm, perm, summand, precision: a.precision, seed };
    let sample = clt_sample(&seq, &cfg)?;
    let (mean, var) = sample.mean_var();
    let law = empirical_measure(&sample)?;
    let ks_to_normal = ks_distance(&law, &MixedNormal::standard());
    let ks_to_fitted = if var > 0.0 { ks_distance(&law, &MixedNormal::normal(var)?) } else { ks_to_normal };
    let mut csv = Csv::with_header(&["value"]);
    for v in &sample.values {
        csv.row(&[real(*v)]);
    }
    let mut out = Outputs::default();
    out.add(&a.out, csv.finish());
    out.add(
        sibling(&a.out, ".summary.json"),
        json_text(json!({
            "ks_to_normal": ks_to_normal,
            "ks_to_fitted_normal": ks_to_fitted,
            "mean": mean,
            "var": var,
            "N": a.n,
            "M": a.m,
            "perm": spec.to_string(),
        })),
    );
    Ok(out)
}

fn lil(a: &LilArgs, seed: u64) -> CliResult<Outputs> {
    let seq = read_sequence(&a.seq)?;
    let maxima = lil_max_sample(&seq, a.n_max, a.xs, a.precision, seed)?;
    // The plotted trajectory is the one at the first sampled point.
    let bits = match a.precision {
        Some(b) => b,
        None => permlab::lacunary::auto_precision(&seq.prefix(a.n_max)?[a.n_max - 1]),
    };
    let x = FixedPointX::random(&mut seed::task_rng(seed, 0), bits)?;
    let traj = lil_trajectory(&seq, &x, a.n_max)?;
    let mut csv = Csv::with_header(&["N", "L_N"]);
    for (n, l) in &traj.points {
        csv.row(&[n.to_string(), real(*l)]);
    }
    let mut max_csv = Csv::with_header(&["x_index", "max_L"]);
    for (i, v) in maxima.values.iter().enumerate() {
        max_csv.row(&[i.to_string(), real(*v)]);
    }
    let mut sorted = maxima.values.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.is_empty() {
        f64::NAN
    } else if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
    };
    let mut out = Outputs::default();
    out.add(&a.out, csv.finish());
    out.add(sibling(&a.out, "_max.csv"), max_csv.finish());
    out.add(
        sibling(&a.out, ".summary.json"),
        json_text(json!({ "median_max_L": if median.is_finite() { json!(median) } else { json!(null) }, "xs": a.xs, "Nmax": a.n_max })),
    );
    Ok(out)
}

fn prohorov(a: &ProhorovArgs) -> CliResult<Outputs> {
    let mu = read_measure(&a.mu)?;
    let nu = read_measure(&a.nu)?;
    let distance = prohorov_distance(&mu, &nu);
    let mut csv = Csv::with_header(&["quantity", "value"]);
    csv.row(&["prohorov".into(), real(distance)]);
    if a.oracle {
        csv.row(&["prohorov_oracle".into(), real(prohorov_oracle(&mu, &nu)?)]);
    }
    csv.row(&["wasserstein2".into(), real(wasserstein2(&mu, &nu))]);
    csv.row(&["ks".into(), real(ks_distance(&mu, &nu))]);
    let mut out = Outputs::default();
    out.add(&a.out, csv.finish());
    if let Some(eps) = a.coupling_eps {
        let mut coupling = Csv::with_header(&["x", "y", "mass"]);
        match strassen_coupling(&mu, &nu, eps)? {
            CouplingOutcome::Feasible(c) => {
                for (i, row) in c.mass.iter().enumerate() {
                    for (j, &m) in row.iter().enumerate() {
                        if m > 0.0 {
                            coupling.row(&[real(c.rows[i]), real(c.cols[j]), real(m)]);
                        }
                    }
                }
            }
            CouplingOutcome::Infeasible { deficit } => {
                return Err(CliError::Runtime(format!(
                    "coupling-infeasible: deficit {deficit} exceeds eps = {eps}"
                )))
            }
        }
        out.add(sibling(&a.out, "_coupling.csv"), coupling.finish());
    }
    Ok(out)
}

fn framework_check(a: &FrameworkArgs, seed: u64) -> CliResult<Outputs> {
    let mu = read_measure(&a.mu)?;
    let rows = limit_convergence_check(&theorem(a.theorem), &mu, &a.k_list, a.m, seed)?;
    let mut csv = Csv::with_header(&["k", "ks_to_G"]);
    for r in rows {
        csv.row(&[r.k.to_string(), real(r.ks)]);
    }
    let mut out = Outputs::default();
    out.add(&a.out, csv.finish());
    Ok(out)
}

fn exchangeable(a: &ExchangeableArgs, seed: u64) -> CliResult<Outputs> {
    let model = read_model(&a.model)?;
    let t = theorem(a.theorem);
    let q = permlab::framework::RegularLimitTheorem::window(&t, a.k).1;
    let specs = a.perms.iter().map(|p| parse_perm(p)).collect::<CliResult<Vec<_>>>()?;
    let perms = specs.iter().map(|s| s.build(q)).collect::<Result<Vec<_>, _>>()?;
    let report = theorem2_check(&model, &t, a.k, &perms, a.m, seed, a.tolerance)?;
    let mut csv = Csv::with_header(&["perm", "ks_to_limit"]);
    for (s, ks) in specs.iter().zip(&report.ks_to_limit) {
        csv.row(&[s.to_string(), real(*ks)]);
    }
    let mut out = Outputs::default();
    out.add(sibling(&a.out, ".csv"), csv.finish());
    out.add(
        &a.out,
        json_text(json!({
            "k": a.k,
            "M": a.m,
            "perms": specs.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "ks_to_limit": report.ks_to_limit,
            "max_ks_to_limit": report.max_ks_to_limit(),
            "max_pairwise_ks": report.max_pairwise_ks,
            "tolerance": report.tolerance,
            "holds": report.holds,
        })),
    );
    Ok(out)
}

fn strong_law(a: &StrongLawArgs, seed: u64) -> CliResult<Outputs> {
    if a.every == 0 {
        return Err(CliError::Config("--every must be >= 1".into()));
    }
    let model = read_model(&a.model)?;
    let traj = strong_law_trajectory(&model, a.p, a.n, seed)?;
    let mut csv = Csv::with_header(&["n", "value"]);
    let last = traj.len();
    for &(n, v) in &traj {
        if n % a.every == 0 || n == last {
            csv.row(&[n.to_string(), real(v)]);
        }
    }
    let mut out = Outputs::default();
    out.add(&a.out, csv.finish());
    let final_value = traj.last().map(|p| p.1).unwrap_or(f64::NAN);
    out.add(sibling(&a.out, ".summary.json"), json_text(json!({ "p": a.p, "N": a.n, "final": final_value })));
    Ok(out)
}

fn plot(a: &PlotArgs) -> CliResult<Outputs> {
    let rows = read_numeric_csv(&read_text(&a.input)?)?;
    let mut out = Outputs::default();
    out.add(&a.out, emit_svg(&rows, a.kind, a.variance)?);
    Ok(out)
}
