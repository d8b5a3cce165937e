use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::experiments::{
    CorrespondenceRow, ExperimentOutput, RunResult, ScalingTable, SosResult,
};
use crate::error::{Error, Result};

pub const MANIFEST: &str = "manifest.txt";
pub const TIMING: &str = "timing.txt";
pub const TIMESERIES_HEADER: &str =
    "step,omega_heavy,omega_light,M,tv_distance,max_offdiag,leak_q,leak_cl,valid";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn timeseries_name(run: &RunResult) -> String {
    format!("timeseries_{}.csv", run.hash)
}

pub fn timeseries_csv(run: &RunResult) -> String {
    let mut s = String::with_capacity(160 * run.records.len());
    s.push_str(TIMESERIES_HEADER);
    s.push('\n');
    for r in &run.records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.step,
            num(r.omega_heavy),
            num(r.omega_light),
            num(r.mutual_information),
            num(r.tv_distance),
            num(r.max_offdiag),
            num(r.leak_q),
            num(r.leak_cl),
            r.valid
        );
    }
    s
}

pub fn section_csv(sos: &SosResult) -> String {
    let mut s = String::from("theta,n\n");
    for o in &sos.orbits {
        for &(theta, n) in &o.points {
            let _ = writeln!(s, "{},{}", num(theta), num(n));
        }
    }
    s
}

pub fn scaling_csv(t: &ScalingTable) -> String {
    let mut s =
        String::from("step,omega_coarse,omega_fine_measured,omega_fine_predicted,rel_err\n");
    for r in &t.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.step,
            num(r.omega_coarse),
            num(r.omega_fine_measured),
            num(r.omega_fine_predicted),
            num(r.rel_err)
        );
    }
    s
}

fn runs_csv(runs: &[RunResult]) -> String {
    let mut s = String::from("run,k,hbar_eff,omega_sat,M_sat,valid\n");
    for r in runs {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.hash,
            num(r.k),
            num(r.hbar_eff),
            num(r.saturation_mean(|x| x.omega_heavy)),
            num(r.saturation_mean(|x| x.mutual_information)),
            r.valid
        );
    }
    s
}

fn scaling_summary_csv(tables: &[ScalingTable]) -> String {
    let mut s = String::from(
        "table,k,hbar_coarse,hbar_fine,ratio,sat_omega_coarse,sat_omega_fine,sat_predicted,sat_rel_err,in_domain,monotone\n",
    );
    for (i, t) in tables.iter().enumerate() {
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{},{},{},{},{},{}",
            num(t.k),
            num(t.hbar_coarse),
            num(t.hbar_fine),
            num(t.ratio),
            num(t.sat_omega_coarse),
            num(t.sat_omega_fine),
            num(t.sat_predicted),
            num(t.sat_rel_err),
            t.in_domain,
            t.monotone
        );
    }
    s
}

fn correspondence_csv(rows: &[CorrespondenceRow]) -> String {
    let mut s = String::from(
        "run,k,hbar_eff,pearson,saturation_gap,probe_step,probe_tv,probe_max_offdiag,probe_reduced_distance,probe_global_distance,final_reduced_distance,final_global_distance,valid\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.hash,
            num(r.k),
            num(r.hbar_eff),
            num(r.pearson),
            num(r.saturation_gap),
            r.probe_step,
            num(r.probe_tv),
            num(r.probe_max_offdiag),
            num(r.probe_reduced_distance),
            num(r.probe_global_distance),
            num(r.final_reduced_distance),
            num(r.final_global_distance),
            r.valid
        );
    }
    s
}

fn sos_summary_csv(results: &[SosResult]) -> String {
    let mut s = String::from("k,lyapunov,regime,section_file\n");
    for r in results {
        let _ = writeln!(
            s,
            "{},{},{},section_{}.csv",
            num(r.k),
            num(r.lyapunov),
            r.regime.as_str(),
            r.hash
        );
    }
    s
}

/// Line plot of `omega_heavy(t)` and `M(t)` on a unit vertical axis.
pub fn entropy_svg(run: &RunResult) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let last = run.records.len().saturating_sub(1).max(1) as f64;
    let x = |t: usize| pad + (w - 2.0 * pad) * t as f64 / last;
    let y = |v: f64| h - pad - (h - 2.0 * pad) * v;
    let line = |f: &dyn Fn(&super::experiments::StepRecord) -> f64| {
        run.records
            .iter()
            .map(|r| format!("{:.2},{:.2}", x(r.step), y(f(r))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{pad},{pad} V{} H{}" fill="none" stroke="black"/>"#,
        h - pad,
        w - pad
    );
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
        line(&|r| r.omega_heavy)
    );
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="firebrick" stroke-width="1.5" stroke-dasharray="4 3"/>"#,
        line(&|r| r.mutual_information)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="13">k = {}, hbar_eff = {}: linear entropy (solid), M (dashed)</text>"#,
        pad, run.k, run.hbar_eff
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">kicks 0..{}</text>"#,
        w / 2.0 - 30.0,
        h - 12.0,
        last
    );
    s.push_str("</svg>\n");
    s
}

/// Writes all data files, then the manifest. Returns the written paths,
/// manifest last.
pub fn emit_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    output: &ExperimentOutput,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let mut files: Vec<(String, String)> = Vec::new();
    let runs = output.runs();
    for r in runs {
        files.push((timeseries_name(r), timeseries_csv(r)));
    }
    match output {
        ExperimentOutput::Entropy(runs) if !runs.is_empty() => {
            files.push(("runs.csv".into(), runs_csv(runs)));
        }
        ExperimentOutput::Entropy(_) => {}
        ExperimentOutput::Sos(results) => {
            for r in results {
                files.push((format!("section_{}.csv", r.hash), section_csv(r)));
            }
            if !results.is_empty() {
                files.push(("sos_summary.csv".into(), sos_summary_csv(results)));
            }
        }
        ExperimentOutput::Scaling(rep) => {
            for (i, t) in rep.tables.iter().enumerate() {
                files.push((format!("scaling_{i}.csv"), scaling_csv(t)));
            }
            if !rep.tables.is_empty() {
                files.push(("scaling_summary.csv".into(), scaling_summary_csv(&rep.tables)));
            }
        }
        ExperimentOutput::Correspond(rep) => {
            if !rep.rows.is_empty() {
                files.push(("correspondence.csv".into(), correspondence_csv(&rep.rows)));
            }
        }
    }
    if cfg.plots {
        for r in runs {
            files.push((format!("entropy_{}.svg", r.hash), entropy_svg(r)));
        }
    }
    if !runs.is_empty() {
        let mut t = String::from("run,wall_seconds\n");
        for r in runs {
            let _ = writeln!(t, "{},{:.3}", r.hash, r.wall_time.as_secs_f64());
        }
        files.push((TIMING.into(), t));
    }

    let mut written = Vec::with_capacity(files.len() + 1);
    for (name, contents) in &files {
        let path = dir.join(name);
        write_file(&path, contents)?;
        written.push(path);
    }

    let mut m = String::new();
    let _ = writeln!(m, "experiment = {}", cfg.experiment.as_str());
    let _ = writeln!(m, "config_hash = {}", cfg.hash());
    let _ = writeln!(m, "seed = {}", cfg.seed);
    let _ = writeln!(m, "all_valid = {}", output.all_valid());
    for r in runs {
        let _ = writeln!(
            m,
            "run = {} k={} hbar_eff={} valid={}",
            r.hash,
            num(r.k),
            num(r.hbar_eff),
            r.valid
        );
        for note in &r.notes {
            let _ = writeln!(m, "note = {} {note}", r.hash);
        }
    }
    for (name, _) in &files {
        let _ = writeln!(m, "file = {name}");
    }
    let _ = writeln!(m, "\n[config]");
    m.push_str(&cfg.canonical());
    let path = dir.join(MANIFEST);
    write_file(&path, &m)?;
    written.push(path);
    Ok(written)
}
