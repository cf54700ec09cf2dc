use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};
use zvar_core::prime_side::{sieve_mangoldt, MangoldtTable, C_OF_MAX_Y};
use zvar_core::special::QuadratureSpec;
use zvar_core::statistics::{
    compare, empirical_log_increment_variance, empirical_log_moment, empirical_number_variance,
    empirical_s_variance, predict_berry_nonuniversal, predict_berry_universal, predict_fujii, predict_thm_1_1_from_data,
    predict_thm_1_2, predict_thm_1_3, predict_thm_1_4, Normalization, PredictionBreakdown, Target, BERRY, RH,
};
use zvar_core::zero_data::{load_zero_file, ZeroTable};
use zvar_core::zero_side::{chan_approx, f_delta_grid, f_integral, gm_asymptotic, mean_gap, tail_integrals};

use crate::config::{RunConfig, TargetKind};
use crate::report::{Cell, Report};
use crate::CliError;

fn load(cfg: &RunConfig) -> Result<ZeroTable, CliError> {
    let table = load_zero_file(&cfg.zeros_path, None)?;
    Ok(match cfg.coverage {
        Some(h) => table.with_coverage(h)?,
        None => table,
    })
}

fn height(cfg: &RunConfig, table: &ZeroTable) -> f64 {
    cfg.t_max.unwrap_or_else(|| table.covered_height())
}

fn with_height(cfg: &RunConfig, t: f64) -> Vec<(String, String)> {
    let mut meta = cfg.params();
    meta.retain(|(k, _)| k != "t-max");
    meta.push(("T".to_string(), format!("{t:?}")));
    meta.sort();
    meta
}

fn mangoldt_for(cfg: &RunConfig, t: f64) -> Result<MangoldtTable, CliError> {
    let n = cfg.sieve.unwrap_or_else(|| (t.ceil() as u64).max(C_OF_MAX_Y));
    Ok(sieve_mangoldt(n)?)
}

fn target(cfg: &RunConfig) -> Target {
    match cfg.target {
        TargetKind::LogZeta => Target::LogZeta,
        TargetKind::ArgS => Target::ArgS,
    }
}

/// Validates a zero file, fills its cache and prints count, height and checksum.
pub fn ingest(path: &Path, expected: Option<usize>) -> Result<(), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let table = load_zero_file(path, expected)?;
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    println!("path: {}", path.display());
    println!("count: {}", table.count());
    println!("max_height: {:?}", table.max_height());
    println!("sha256: {digest}");
    Ok(())
}

pub fn fstat(cfg: &RunConfig) -> Result<Report, CliError> {
    let table = load(cfg)?;
    let t = height(cfg, &table);
    let window = cfg.window_gaps * mean_gap(t);
    let mut report = Report::new(
        "fstat",
        with_height(cfg, t),
        vec!["alpha", "delta", "re", "im", "trunc_bound", "gm", "chan_re", "chan_im"],
    );
    for &delta in &cfg.deltas {
        for e in f_delta_grid(&table, &cfg.alphas, delta, t, window)? {
            let in_unit = (0.0..=1.0).contains(&e.alpha);
            let gm = if in_unit { Cell::Num(gm_asymptotic(e.alpha, t)?) } else { Cell::Empty };
            let (chan_re, chan_im) = if in_unit {
                let c = chan_approx(e.alpha, delta, t)?;
                (Cell::Num(c.re), Cell::Num(c.im))
            } else {
                (Cell::Empty, Cell::Empty)
            };
            report.push(vec![
                e.alpha.into(),
                delta.into(),
                e.value.re.into(),
                e.value.im.into(),
                e.truncation_bound.into(),
                gm,
                chan_re,
                chan_im,
            ]);
        }
    }
    Ok(report)
}

fn quadrature(cfg: &RunConfig) -> QuadratureSpec {
    QuadratureSpec::new(cfg.tolerance, 1e-9, 200)
}

/// Δ = 2πδ/log T.
fn shift(delta_units: f64, t: f64) -> f64 {
    TAU * delta_units / t.ln()
}

pub fn variance(cfg: &RunConfig) -> Result<Report, CliError> {
    let table = load(cfg)?;
    let t = cfg.t_max.ok_or_else(|| CliError::Usage("variance needs --t-max".into()))?;
    let mut columns = vec!["T", "delta", "h", "number_variance", "s_variance"];
    if cfg.log_moments {
        columns.extend(["log_increment_variance", "log_moment"]);
    }
    let mut meta = with_height(cfg, t);
    meta.push(("normalization".to_string(), "per_T".to_string()));
    let mut report = Report::new("variance", meta, columns);
    let spec = quadrature(cfg);
    let moment = if cfg.log_moments { Some(empirical_log_moment(t, &table, &spec)?.value / t) } else { None };
    for &d in &cfg.deltas {
        let h = shift(d, t);
        let mut row: Vec<Cell> = vec![t.into(), d.into(), h.into()];
        if h > 0.0 {
            row.push((empirical_number_variance(&table, t, h, d)? / t).into());
            row.push((empirical_s_variance(&table, t, h)? / t).into());
        } else {
            row.extend([Cell::Num(0.0), Cell::Num(0.0)]);
        }
        if let Some(m) = moment {
            row.push((empirical_log_increment_variance(t, h, &table, &spec)?.value / t).into());
            row.push(m.into());
        }
        report.push(row);
    }
    Ok(report)
}

/// All variance predictions at (δ, T) in the configured target.
fn predictions(
    cfg: &RunConfig,
    table: &ZeroTable,
    mangoldt: &MangoldtTable,
    t: f64,
) -> Result<Vec<(f64, Vec<PredictionBreakdown>)>, CliError> {
    let deltas: Vec<f64> = cfg.deltas.iter().map(|&d| shift(d, t)).collect();
    let tail_window = cfg.tail_window_gaps * mean_gap(t);
    let tails = tail_integrals(table, &deltas, t, cfg.alpha_max, cfg.tail_grid, tail_window)?;
    let spec = QuadratureSpec::default();
    let tgt = target(cfg);
    let mut out = Vec::new();
    for ((&units, &delta), tail) in cfg.deltas.iter().zip(&deltas).zip(&tails) {
        if delta == 0.0 {
            continue;
        }
        let mut ps = vec![
            predict_thm_1_2(delta, t, mangoldt, tail, tgt, cfg.conjectural)?,
            predict_thm_1_3(delta, t, mangoldt, tail, &spec, tgt, cfg.conjectural)?,
            predict_thm_1_4(delta, t, mangoldt, tail, tgt, cfg.conjectural)?,
        ];
        if tgt == Target::ArgS {
            if delta <= 10.0 {
                ps.push(predict_fujii(delta, t, table, tail_window, cfg.alpha_max, cfg.conjectural)?);
            }
            let berry = predict_berry_universal(units)?;
            ps.push(PredictionBreakdown::new(
                "berry_universal",
                t,
                delta,
                Normalization::PerT,
                &[("universal", berry)],
                &[RH, BERRY],
                0.0,
            ));
            ps.push(predict_berry_nonuniversal(units, t, mangoldt)?);
        }
        out.push((units, ps));
    }
    Ok(out)
}

fn terms_text(p: &PredictionBreakdown) -> String {
    p.terms.iter().map(|(k, v)| format!("{k}={v:?}")).collect::<Vec<_>>().join(";")
}

pub fn predict(cfg: &RunConfig) -> Result<Report, CliError> {
    let table = load(cfg)?;
    let t = cfg.t_max.ok_or_else(|| CliError::Usage("predict needs --t-max".into()))?;
    let mangoldt = mangoldt_for(cfg, t)?;
    let mut report = Report::new(
        "predict",
        with_height(cfg, t),
        vec!["T", "delta", "Delta", "prediction", "normalization", "total", "err_est", "assumptions", "terms"],
    );
    let f = f_integral(&table, t, cfg.alpha_max, cfg.tail_window_gaps * mean_gap(t))?;
    let p = predict_thm_1_1_from_data(t, &f, cfg.conjectural)?;
    report.push(vec![
        t.into(),
        Cell::Empty,
        Cell::Empty,
        p.name.clone().into(),
        "raw".into(),
        p.total.into(),
        p.err_est.into(),
        p.assumptions.join(";").into(),
        terms_text(&p).into(),
    ]);
    for (units, ps) in predictions(cfg, &table, &mangoldt, t)? {
        for p in ps {
            report.push(vec![
                t.into(),
                units.into(),
                p.delta.into(),
                p.name.clone().into(),
                "per_T".into(),
                p.total.into(),
                p.err_est.into(),
                p.assumptions.join(";").into(),
                terms_text(&p).into(),
            ]);
        }
    }
    Ok(report)
}

pub fn compare_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let table = load(cfg)?;
    let t = cfg.t_max.ok_or_else(|| CliError::Usage("compare needs --t-max".into()))?;
    let mangoldt = mangoldt_for(cfg, t)?;
    let spec = quadrature(cfg);
    let mut meta = with_height(cfg, t);
    meta.push(("normalization".to_string(), "per_T".to_string()));
    let empirical_kind = if cfg.target == TargetKind::ArgS { "s_variance" } else { "log_increment_variance" };
    meta.push(("empirical".to_string(), empirical_kind.to_string()));
    let mut report = Report::new(
        "compare",
        meta,
        vec![
            "T",
            "delta",
            "Delta",
            "empirical",
            "prediction",
            "total",
            "difference",
            "relative_error",
            "assumptions",
        ],
    );
    for (units, ps) in predictions(cfg, &table, &mangoldt, t)? {
        let h = shift(units, t);
        let raw = match cfg.target {
            TargetKind::ArgS => empirical_s_variance(&table, t, h)?,
            TargetKind::LogZeta => empirical_log_increment_variance(t, h, &table, &spec)?.value,
        };
        let mut params = BTreeMap::new();
        params.insert("delta".to_string(), units);
        params.insert("alpha_max".to_string(), cfg.alpha_max);
        let r = compare(raw, ps, t, params)?;
        for (row, p) in r.rows.iter().zip(&r.predictions) {
            report.push(vec![
                t.into(),
                units.into(),
                h.into(),
                r.empirical.into(),
                row.name.clone().into(),
                row.prediction.into(),
                row.difference.into(),
                row.relative_error.into(),
                p.assumptions.join(";").into(),
            ]);
        }
    }
    Ok(report)
}
