//! CSV emission. Every file starts with a `#` comment block carrying the
//! artifact version and the fully resolved run configuration, so results
//! are auditable; the timestamp sits on its own line so byte comparisons
//! can exclude it.

use std::fmt::Write as _;
use std::path::Path;

use crate::discrete::IterateLog;
use crate::dynamics::RestartedTrajectory;
use crate::Result;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The comment header of an output file.
#[derive(Debug, Clone, Default)]
pub struct RunHeader {
    config: Vec<(String, String)>,
    timestamp_unix: Option<u64>,
}

impl RunHeader {
    pub fn new() -> Self {
        RunHeader::default()
    }

    pub fn kv(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    pub fn with_timestamp(mut self, unix_seconds: u64) -> Self {
        self.timestamp_unix = Some(unix_seconds);
        self
    }

    pub fn with_timestamp_now(self) -> Self {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.with_timestamp(now)
    }

    fn render(&self) -> String {
        let mut out = format!("# inertial-restart v{ARTIFACT_VERSION}\n");
        for (k, v) in &self.config {
            let _ = writeln!(out, "# {k} = {v}");
        }
        if let Some(ts) = self.timestamp_unix {
            let _ = writeln!(out, "# timestamp_unix = {ts}");
        }
        out
    }
}

/// Renders a full CSV document: header block, column line, rows.
pub fn render_csv(header: &RunHeader, columns: &str, rows: &[String]) -> String {
    let mut out = header.render();
    out.push_str(columns);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, header: &RunHeader, columns: &str, rows: &[String]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, render_csv(header, columns, rows))?;
    Ok(())
}

/// Drops the timestamp comment line, for byte-level determinism checks.
pub fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("# timestamp_unix"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn opt_gap(fval: f64, reference: Option<f64>) -> String {
    match reference {
        Some(r) => (fval - r).to_string(),
        None => "na".to_string(),
    }
}

pub const CONTINUOUS_COLUMNS: &str = "t,fval,gap,speed2,segment_index";

/// Per-sample rows of a continuous run, in global time.
pub fn continuous_sample_rows(run: &RestartedTrajectory, reference: Option<f64>) -> Vec<String> {
    run.flat_samples()
        .into_iter()
        .map(|(t, fval, speed2, seg)| {
            format!("{t},{fval},{},{speed2},{seg}", opt_gap(fval, reference))
        })
        .collect()
}

pub const RESTART_COLUMNS: &str = "k,T_k,gap_at_restart";

/// Restart events of a continuous run: index, global time, gap there.
pub fn restart_rows(run: &RestartedTrajectory, reference: Option<f64>) -> Vec<String> {
    run.restart_times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            // the state at restart k is the start of segment k+1
            let fval = run
                .segments
                .get(k + 1)
                .map(|s| s.samples[0].fval)
                .unwrap_or_else(|| {
                    let seg = &run.segments[k];
                    seg.samples.last().map(|s| s.fval).unwrap_or(f64::NAN)
                });
            format!("{},{t},{}", k + 1, opt_gap(fval, reference))
        })
        .collect()
}

pub const DISCRETE_COLUMNS: &str = "k,fval,gap,delta_sq,j,restarted,phase";

/// Rows of a discrete run log.
pub fn discrete_rows(log: &IterateLog) -> Vec<String> {
    log.records
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.k,
                r.fval,
                r.gap.map_or_else(|| "na".to_string(), |g| g.to_string()),
                r.delta_sq,
                r.j,
                u8::from(r.restarted),
                r.phase
            )
        })
        .collect()
}

/// Summary-table CSV (`problem,policy,lambda,A,B,R2,n_points`).
pub fn write_table_csv(
    path: &Path,
    header: &RunHeader,
    table: &crate::analysis::RateTable,
) -> Result<()> {
    write_csv(
        path,
        header,
        crate::analysis::RateTable::CSV_HEADER,
        &table.csv_rows(),
    )
}

pub const LONG_COLUMNS: &str = "series_id,k_or_t,gap";

/// Plot-ready long format: one row per point, tagged with a series id.
pub fn long_format_rows(series_id: &str, points: &[(f64, f64)]) -> Vec<String> {
    points
        .iter()
        .map(|&(k, g)| format!("{series_id},{k},{g}"))
        .collect()
}
