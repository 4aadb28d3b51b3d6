use std::fs;

use entopo::algebra::GeneratorIndex;
use entopo::classifier::{
    classify_model, classify_trajectory, critical_scan, Classification, ClassifierOptions,
};
use entopo::models::{ModelId, ModelSpec, WernerFamily};
use entopo::montecarlo::{concurrence_histogram, radial_profile, volumes, ProfileConfig};
use entopo::sections::{section_point, section_type, table1};
use entopo::state::{concurrence_with_tol, positivity, read_state_json, PolarizationVector};
use entopo::trajectory::{uniform_times, Trajectory, TrajectorySample};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{emit, fmt_f, Provenance, Table};
use crate::CliError;

fn provenance(command_line: &str, common: &Common, seed: Option<u64>) -> Provenance {
    Provenance {
        command_line: command_line.to_string(),
        seed,
        tol: common.tol,
        tol_c: common.tol_c,
    }
}

fn classifier_options(common: &Common) -> ClassifierOptions {
    ClassifierOptions {
        tol_c: common.tol_c,
        ..Default::default()
    }
}

pub fn volumes_cmd(a: &VolumesArgs, cl: &str) -> Result<(), CliError> {
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let cfg = ProfileConfig {
        radial_steps: a.radial_steps,
        samples: a.samples,
        seed: a.seed.seed,
        positivity_tol: a.common.tol,
        concurrence_tol: a.common.tol_c,
    };
    let prof = radial_profile(&cfg)?;
    let v = volumes(&prof)?;
    let mut t = Table::new(&["r", "p_phys", "p_phys_err", "p_sep", "p_sep_err"]);
    let (ep, es) = (prof.p_phys_err(), prof.p_sep_err());
    for k in 0..prof.radii.len() {
        t.push(vec![
            fmt_f(prof.radii[k]),
            fmt_f(prof.p_phys[k]),
            fmt_f(ep[k]),
            fmt_f(prof.p_sep[k]),
            fmt_f(es[k]),
        ]);
    }
    let summary = json!({
        "V_phys": v.v_phys,
        "V_sep": v.v_sep,
        "ratio": v.ratio,
        "errors": { "V_phys": v.v_phys_err, "V_sep": v.v_sep_err, "ratio": v.ratio_err },
        "V_ball": v.v_ball,
        "seed": a.seed.seed,
        "samples": a.samples,
        "K": a.radial_steps,
    });
    emit(
        &a.common,
        &provenance(cl, &a.common, Some(a.seed.seed)),
        Some(&t),
        Some(summary),
    )
}

pub fn histogram_cmd(a: &HistogramArgs, cl: &str) -> Result<(), CliError> {
    if a.samples == 0 || a.bins == 0 {
        return Err(CliError::Usage(
            "--samples and --bins must be positive".into(),
        ));
    }
    let h = concurrence_histogram(a.radius, a.samples, a.bins, a.seed.seed, a.common.tol_c)?;
    let mut t = Table::new(&["c_lo", "c_hi", "probability"]);
    for (k, p) in h.probabilities.iter().enumerate() {
        t.push(vec![fmt_f(h.edges[k]), fmt_f(h.edges[k + 1]), fmt_f(*p)]);
    }
    let summary = json!({
        "radius": h.radius,
        "status": h.status,
        "zero_mass": h.zero_mass,
        "physical": h.physical,
        "draws": h.draws,
        "pure_shell": h.pure_shell,
        "bins": a.bins,
        "samples": a.samples,
        "seed": a.seed.seed,
    });
    emit(
        &a.common,
        &provenance(cl, &a.common, Some(a.seed.seed)),
        Some(&t),
        Some(summary),
    )
}

pub fn section_cmd(a: &SectionArgs, cl: &str) -> Result<(), CliError> {
    if a.grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let (i, j) = (
        GeneratorIndex::from_label(&a.i)?,
        GeneratorIndex::from_label(&a.j)?,
    );
    let shape = section_type(i, j)?;
    let mut t = Table::new(&["x", "y", "physical", "C"]);
    let mut physical = 0usize;
    let mut max_c: f64 = 0.0;
    for ia in 0..a.grid {
        for ib in 0..a.grid {
            let x = -1.0 + 2.0 * ia as f64 / (a.grid - 1) as f64;
            let y = -1.0 + 2.0 * ib as f64 / (a.grid - 1) as f64;
            let n = section_point(i, j, x, y);
            let row = if positivity(&n, a.common.tol).physical {
                let c = concurrence_with_tol(&n, a.common.tol)?.c;
                physical += 1;
                max_c = max_c.max(c);
                vec![fmt_f(x), fmt_f(y), "1".into(), fmt_f(c)]
            } else {
                vec![fmt_f(x), fmt_f(y), "0".into(), String::new()]
            };
            t.push(row);
        }
    }
    let summary = json!({
        "i": i.label(),
        "j": j.label(),
        "kind": shape.kind.name(),
        "grid": a.grid,
        "physical_points": physical,
        "max_concurrence": max_c,
    });
    emit(
        &a.common,
        &provenance(cl, &a.common, None),
        Some(&t),
        Some(summary),
    )
}

pub fn table1_cmd(common: &Common, cl: &str) -> Result<(), CliError> {
    let labels: Vec<&str> = (0..15)
        .map(|s| GeneratorIndex::from_slot(s).expect("slot < 15").label())
        .collect();
    let mut cols = vec![""];
    cols.extend(&labels);
    let mut t = Table::new(&cols);
    let tab = table1();
    let mut rows = Vec::new();
    for (r, label) in labels.iter().enumerate() {
        let cells: Vec<String> = tab[r]
            .iter()
            .map(|c| c.map_or(String::new(), |k| k.letter().to_string()))
            .collect();
        rows.push(json!({ "row": label, "cells": cells.clone() }));
        let mut row = vec![label.to_string()];
        row.extend(cells);
        t.push(row);
    }
    emit(
        common,
        &provenance(cl, common, None),
        Some(&t),
        Some(json!({ "labels": labels, "table": rows })),
    )
}

pub fn build_spec(model: ModelName, p: &ModelArgs) -> Result<ModelSpec, CliError> {
    let id = match model {
        ModelName::D3 => ModelId::D3,
        ModelName::Ye => ModelId::Ye,
        ModelName::Zj => ModelId::Zj,
    };
    let mut spec = ModelSpec::default_for(id)?;
    if p.dephasing == Some(DephasingArg::Exp) && p.gamma2.is_none() {
        return Err(CliError::Usage("--dephasing exp needs --Gamma2".into()));
    }
    let named = [
        ("g", p.g),
        ("gamma", p.gamma),
        ("B0", p.b0),
        ("x0", p.x0),
        ("y0", p.y0),
        ("z0", p.z0),
        ("Gamma", p.big_gamma),
        ("a0", p.a0),
        ("r", p.r),
        ("phi", p.phi),
        ("Gamma1", p.gamma1),
        ("Gamma2", p.gamma2),
    ];
    for (name, value) in named {
        if let Some(v) = value {
            spec = spec.with_param(name, v)?;
        }
    }
    if p.dephasing == Some(DephasingArg::Rtn) && p.gamma2.is_some() {
        return Err(CliError::Usage(
            "--Gamma2 applies to exponential dephasing only".into(),
        ));
    }
    match (&mut spec, p.family) {
        (ModelSpec::Zj(z), Some(f)) => {
            z.family = match f {
                FamilyArg::Phi => WernerFamily::Phi,
                FamilyArg::Psi => WernerFamily::Psi,
            }
        }
        (_, Some(_)) => {
            return Err(CliError::Usage(
                "--family applies to the zj model only".into(),
            ))
        }
        _ => {}
    }
    if p.dephasing.is_some() && !matches!(spec, ModelSpec::Zj(_)) {
        return Err(CliError::Usage(
            "--dephasing applies to the zj model only".into(),
        ));
    }
    Ok(spec)
}

fn time_grid(t: &TimeArgs, horizon: f64, default_samples: usize) -> Result<Vec<f64>, CliError> {
    let t_max = t.t_max.unwrap_or(horizon);
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CliError::Usage(format!(
            "--t-max must be positive, got {t_max}"
        )));
    }
    let n = match (t.dt, t.samples) {
        (Some(dt), _) if dt > 0.0 && dt.is_finite() => (t_max / dt).round() as usize + 1,
        (Some(dt), _) => return Err(CliError::Usage(format!("--dt must be positive, got {dt}"))),
        (None, Some(n)) => n,
        (None, None) if t.t_max.is_some() => ((default_samples as f64) * t_max / horizon)
            .ceil()
            .max(default_samples as f64) as usize,
        (None, None) => default_samples,
    };
    if n < 2 {
        return Err(CliError::Usage(
            "the time grid needs at least 2 samples".into(),
        ));
    }
    Ok(uniform_times(t_max, n))
}

fn classification_json(c: &Classification, n_inf: Option<&PolarizationVector>) -> Value {
    json!({
        "category": c.category.map(|x| x.letter().to_string()),
        "undecided_horizon": c.undecided_horizon(),
        "distance_markovian": c.distance_markovian,
        "max_distance_increase": c.max_distance_increase,
        "zero_set": c.zero_set,
        "prediction": c.prediction,
        "n_infinity": n_inf.map(|n| n.n.to_vec()),
    })
}

fn trajectory_table(traj: &Trajectory) -> Table {
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=15).map(|k| format!("n_{k}")));
    cols.push("C".into());
    let mut t = Table {
        columns: cols,
        rows: Vec::new(),
    };
    for s in &traj.samples {
        let mut row = vec![fmt_f(s.t)];
        row.extend(s.n.n.iter().map(|&x| fmt_f(x)));
        row.push(fmt_f(s.c));
        t.push(row);
    }
    t
}

pub fn trajectory_cmd(a: &TrajectoryArgs, cl: &str) -> Result<(), CliError> {
    let spec = build_spec(a.model, &a.params)?;
    let model = spec.build()?;
    let times = time_grid(&a.time, model.horizon(), model.default_samples())?;
    let c = classify_model(model.as_ref(), Some(&times), &classifier_options(&a.common))?;
    let traj = model.trajectory(&times)?;
    let mut summary = classification_json(&c, Some(&model.n_infinity()));
    summary["model"] = json!(model.id().to_string());
    summary["params"] =
        serde_json::to_value(&spec).map_err(|e| CliError::Internal(e.to_string()))?;
    summary["t_max"] = json!(traj.t_max());
    summary["samples"] = json!(traj.samples.len());
    emit(
        &a.common,
        &provenance(cl, &a.common, None),
        Some(&trajectory_table(&traj)),
        Some(summary),
    )
}

fn read_trajectory_csv(path: &std::path::Path) -> Result<Vec<TrajectorySample>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if k == 0 && rec.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if rec.len() != 17 {
            return Err(CliError::Usage(format!(
                "{}: record {} has {} fields, expected 17 (t, n_1..n_15, C)",
                path.display(),
                k + 1,
                rec.len()
            )));
        }
        let vals: Vec<f64> = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("{}: record {}: {e}", path.display(), k + 1)))?;
        out.push(TrajectorySample {
            t: vals[0],
            n: PolarizationVector::from_slice(&vals[1..16])?,
            c: vals[16],
        });
    }
    Ok(out)
}

pub fn classify_cmd(a: &ClassifyArgs, cl: &str) -> Result<(), CliError> {
    let samples = read_trajectory_csv(&a.input)?;
    let (mut n_inf, mut meta, mut model_name) = (None, None, None);
    if let Some(m) = a.model {
        let model = build_spec(m, &a.params)?.build()?;
        n_inf = Some(model.n_infinity());
        meta = Some(model.meta());
        model_name = Some(model.id().to_string());
    }
    if let Some(v) = &a.n_inf {
        n_inf = Some(PolarizationVector::from_slice(v)?);
    }
    let traj = Trajectory {
        samples,
        n_infinity: n_inf,
        model: model_name,
        meta,
    };
    let c = classify_trajectory(&traj, &classifier_options(&a.common))?;
    let mut t = Table::new(&["start", "end", "is_point"]);
    for iv in &c.zero_set.intervals {
        t.push(vec![
            fmt_f(iv.start),
            fmt_f(iv.end),
            (iv.is_point as u8).to_string(),
        ]);
    }
    let mut summary = classification_json(&c, traj.n_infinity.as_ref());
    summary["input"] = json!(a.input.display().to_string());
    summary["samples"] = json!(traj.samples.len());
    // The category is the answer; print it as JSON unless CSV was asked for.
    let mut common = a.common.clone();
    common.format.get_or_insert(Format::Json);
    emit(
        &common,
        &provenance(cl, &a.common, None),
        Some(&t),
        Some(summary),
    )
}

pub fn critical_cmd(a: &CriticalArgs, cl: &str) -> Result<(), CliError> {
    let spec = build_spec(a.model, &a.params)?;
    let scan = critical_scan(
        &spec,
        &a.parameter,
        a.lo,
        a.hi,
        a.steps,
        &classifier_options(&a.common),
    )?;
    let letter = |c: Option<entopo::classifier::EvolutionCategory>| {
        c.map_or("undecided".to_string(), |x| x.to_string())
    };
    let mut t = Table::new(&["value", "lo", "hi", "lo_category", "hi_category"]);
    for b in &scan.brackets {
        t.push(vec![
            fmt_f(b.value),
            fmt_f(b.lo),
            fmt_f(b.hi),
            letter(b.lo_category),
            letter(b.hi_category),
        ]);
    }
    let summary = json!({
        "model": spec.id().to_string(),
        "params": spec,
        "parameter": scan.parameter,
        "critical_values": scan.critical_values(),
        "samples": scan.samples.iter().map(|s| json!({ "value": s.value, "category": letter(s.category) })).collect::<Vec<_>>(),
        "brackets": scan.brackets,
    });
    emit(
        &a.common,
        &provenance(cl, &a.common, None),
        Some(&t),
        Some(summary),
    )
}

pub fn concurrence_cmd(a: &ConcurrenceArgs, cl: &str) -> Result<(), CliError> {
    let n = match (&a.state, &a.n) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            read_state_json(&text)?
        }
        (None, Some(v)) => PolarizationVector::from_slice(v)?,
        _ => return Err(CliError::Usage("give exactly one of --state or --n".into())),
    };
    let pos = positivity(&n, a.common.tol);
    let mut t = Table::new(&[
        "physical",
        "C",
        "lambda_1",
        "lambda_2",
        "lambda_3",
        "lambda_4",
        "a2",
        "a3",
        "a4",
        "separable",
    ]);
    let mut summary = json!({
        "n": n.n.to_vec(),
        "norm": n.norm(),
        "physical": pos.physical,
        "a2": pos.a2,
        "a3": pos.a3,
        "a4": pos.a4,
    });
    if pos.physical {
        let c = concurrence_with_tol(&n, a.common.tol)?;
        let sep = c.c <= a.common.tol_c;
        let mut row = vec!["1".to_string(), fmt_f(c.c)];
        row.extend(c.lambdas.iter().map(|&x| fmt_f(x)));
        row.extend([
            fmt_f(pos.a2),
            fmt_f(pos.a3),
            fmt_f(pos.a4),
            (sep as u8).to_string(),
        ]);
        t.push(row);
        summary["C"] = json!(c.c);
        summary["lambdas"] = json!(c.lambdas);
        summary["separable"] = json!(sep);
    } else {
        let mut row = vec!["0".to_string()];
        row.extend(std::iter::repeat(String::new()).take(5));
        row.extend([fmt_f(pos.a2), fmt_f(pos.a3), fmt_f(pos.a4), String::new()]);
        t.push(row);
    }
    emit(
        &a.common,
        &provenance(cl, &a.common, None),
        Some(&t),
        Some(summary),
    )
}
