use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{EnergyRecord, EnergySeries};
use crate::error::{Error, Result};
use crate::singular::NormSeries;

pub const ENERGY_HEADER: [&str; 8] = [
    "t",
    "l2_sq",
    "halpha_sq",
    "h2alpha_sq",
    "diss_integral",
    "Q",
    "residual",
    "nonlin_flux",
];
pub const INTERVAL_HEADER: [&str; 2] = ["tau", "s"];
pub const NORM_HEADER: [&str; 2] = ["t", "y"];
pub const SWEEP_HEADER: [&str; 7] = [
    "alpha",
    "d_alpha",
    "t_star",
    "eventual_time",
    "max_Q_ratio",
    "final_energy",
    "status",
];

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// `key=value` pairs from `#` comment lines.
pub fn parse_metadata(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.trim_start().strip_prefix('#'))
        .flat_map(|l| l.split_whitespace())
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn trailer(pairs: &[(&str, String)]) -> String {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# {}\n", body.join(" "))
}

fn write_table<W: Write>(w: W, header: &[&str], rows: &[Vec<String>], meta: &[(&str, String)]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    let mut inner = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    if !meta.is_empty() {
        inner.write_all(trailer(meta).as_bytes())?;
    }
    Ok(())
}

struct Table {
    columns: Vec<String>,
    rows: Vec<csv::StringRecord>,
    meta: BTreeMap<String, String>,
}

impl Table {
    fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let columns = reader.headers()?.iter().map(str::to_string).collect();
        let rows = reader.records().collect::<std::result::Result<_, _>>()?;
        Ok(Self {
            columns,
            rows,
            meta: parse_metadata(text),
        })
    }

    fn has(&self, header: &[&str]) -> bool {
        self.columns.len() == header.len() && self.columns.iter().zip(header).all(|(a, b)| a == b)
    }

    fn require(&self, header: &[&str]) -> Result<()> {
        if let Some(missing) = header.iter().find(|h| !self.columns.iter().any(|c| c == *h)) {
            return Err(Error::Format(format!("missing column `{missing}`")));
        }
        if !self.has(header) {
            return Err(Error::Format(format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                self.columns.join(",")
            )));
        }
        Ok(())
    }

    fn meta_f64(&self, key: &str) -> Result<Option<f64>> {
        self.meta
            .get(key)
            .map(|v| v.parse().map_err(|_| Error::Format(format!("bad metadata value {key}={v}"))))
            .transpose()
    }
}

fn cell(row: &csv::StringRecord, i: usize, line: usize) -> Result<f64> {
    let raw = row.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| Error::Format(format!("row {line}, column {}: cannot parse `{raw}`", i + 1)))
}

fn opt_cell(row: &csv::StringRecord, i: usize, line: usize) -> Result<Option<f64>> {
    match row.get(i) {
        None | Some("") => Ok(None),
        Some(_) => cell(row, i, line).map(Some),
    }
}

/// Energy series as CSV: the header line, one row per record (`Q` empty when
/// undefined) and a trailing `#` line with the config digest and run tags.
pub fn write_energy_csv<W: Write>(w: W, series: &EnergySeries) -> Result<()> {
    let rows: Vec<Vec<String>> = series
        .records
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.t),
                fmt_f64(r.l2_sq),
                fmt_f64(r.halpha_sq),
                fmt_f64(r.h2alpha_sq),
                fmt_f64(r.diss_integral),
                fmt_opt(r.q),
                fmt_f64(r.residual),
                fmt_f64(r.nonlin_flux),
            ]
        })
        .collect();
    let meta = [
        ("config_digest", series.config_digest.clone()),
        ("alpha", fmt_f64(series.alpha)),
        ("nu", fmt_f64(series.nu)),
        ("dim", series.dim.to_string()),
    ];
    write_table(w, &ENERGY_HEADER, &rows, &meta)
}

pub fn energy_csv_string(series: &EnergySeries) -> Result<String> {
    let mut buf = Vec::new();
    write_energy_csv(&mut buf, series)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_energy_csv(text: &str) -> Result<EnergySeries> {
    let table = Table::parse(text)?;
    table.require(&ENERGY_HEADER)?;
    let need = |key: &str| -> Result<String> {
        table
            .meta
            .get(key)
            .cloned()
            .ok_or_else(|| Error::Format(format!("missing `{key}` in the trailing metadata line")))
    };
    let alpha = need("alpha")?.parse().map_err(|_| Error::Format("bad alpha tag".into()))?;
    let nu = need("nu")?.parse().map_err(|_| Error::Format("bad nu tag".into()))?;
    let dim = need("dim")?.parse().map_err(|_| Error::Format("bad dim tag".into()))?;
    let mut series = EnergySeries::new(alpha, nu, dim, need("config_digest")?);
    for (j, row) in table.rows.iter().enumerate() {
        let line = j + 2;
        series.push(EnergyRecord {
            t: cell(row, 0, line)?,
            l2_sq: cell(row, 1, line)?,
            halpha_sq: cell(row, 2, line)?,
            h2alpha_sq: cell(row, 3, line)?,
            diss_integral: cell(row, 4, line)?,
            q: opt_cell(row, 5, line)?,
            residual: cell(row, 6, line)?,
            nonlin_flux: cell(row, 7, line)?,
        })?;
    }
    Ok(series)
}

/// Interval file rows `(τ, s)` and the optional `tail_start` tag.
pub fn read_intervals_csv(text: &str) -> Result<(Vec<(f64, f64)>, Option<f64>)> {
    let table = Table::parse(text)?;
    table.require(&INTERVAL_HEADER)?;
    let rows = table
        .rows
        .iter()
        .enumerate()
        .map(|(j, r)| Ok((cell(r, 0, j + 2)?, cell(r, 1, j + 2)?)))
        .collect::<Result<_>>()?;
    Ok((rows, table.meta_f64("tail_start")?))
}

pub fn write_intervals_csv<W: Write>(w: W, intervals: &[(f64, f64)], tail_start: f64) -> Result<()> {
    let rows: Vec<Vec<String>> = intervals.iter().map(|&(a, b)| vec![fmt_f64(a), fmt_f64(b)]).collect();
    write_table(w, &INTERVAL_HEADER, &rows, &[("tail_start", fmt_f64(tail_start))])
}

/// Norm series from a `t,y` file, or from an energy CSV via
/// `y = sqrt(halpha_sq)`. Explicit `alpha`/`nu` override the file's tags.
pub fn read_norm_series(text: &str, alpha: Option<f64>, nu: Option<f64>) -> Result<NormSeries> {
    let table = Table::parse(text)?;
    let samples: Vec<(f64, f64)> = if table.has(&NORM_HEADER) {
        table
            .rows
            .iter()
            .enumerate()
            .map(|(j, r)| Ok((cell(r, 0, j + 2)?, cell(r, 1, j + 2)?)))
            .collect::<Result<_>>()?
    } else if table.has(&ENERGY_HEADER) {
        table
            .rows
            .iter()
            .enumerate()
            .map(|(j, r)| Ok((cell(r, 0, j + 2)?, cell(r, 2, j + 2)?.max(0.0).sqrt())))
            .collect::<Result<_>>()?
    } else {
        return Err(Error::Format(format!(
            "expected header `t,y` or `{}`, found `{}`",
            ENERGY_HEADER.join(","),
            table.columns.join(",")
        )));
    };
    let alpha = match alpha {
        Some(a) => a,
        None => table
            .meta_f64("alpha")?
            .ok_or_else(|| Error::config("alpha", "not tagged in the input; pass it explicitly"))?,
    };
    let nu = match nu {
        Some(v) => v,
        None => table.meta_f64("nu")?.unwrap_or(1.0),
    };
    NormSeries::new(alpha, nu, samples)
}

pub fn write_norm_series<W: Write>(w: W, series: &NormSeries) -> Result<()> {
    let rows: Vec<Vec<String>> = series
        .samples()
        .iter()
        .map(|&(t, y)| vec![fmt_f64(t), fmt_f64(y)])
        .collect();
    let meta = [("alpha", fmt_f64(series.alpha)), ("nu", fmt_f64(series.nu))];
    write_table(w, &NORM_HEADER, &rows, &meta)
}

/// One line of a sweep summary. Numeric fields are empty when undefined or
/// when the run failed; `status` is `ok` or the error kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub d_alpha: Option<f64>,
    pub t_star: Option<f64>,
    pub eventual_time: Option<f64>,
    pub max_q_ratio: Option<f64>,
    pub final_energy: Option<f64>,
    pub status: String,
}

pub fn write_sweep_summary<W: Write>(w: W, rows: &[SweepRow], digest: &str) -> Result<()> {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let rows: Vec<Vec<String>> = sorted
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.alpha),
                fmt_opt(r.d_alpha),
                fmt_opt(r.t_star),
                fmt_opt(r.eventual_time),
                fmt_opt(r.max_q_ratio),
                fmt_opt(r.final_energy),
                r.status.clone(),
            ]
        })
        .collect();
    write_table(w, &SWEEP_HEADER, &rows, &[("config_digest", digest.to_string())])
}

pub fn read_sweep_summary(text: &str) -> Result<Vec<SweepRow>> {
    let table = Table::parse(text)?;
    table.require(&SWEEP_HEADER)?;
    table
        .rows
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let line = j + 2;
            Ok(SweepRow {
                alpha: cell(r, 0, line)?,
                d_alpha: opt_cell(r, 1, line)?,
                t_star: opt_cell(r, 2, line)?,
                eventual_time: opt_cell(r, 3, line)?,
                max_q_ratio: opt_cell(r, 4, line)?,
                final_energy: opt_cell(r, 5, line)?,
                status: r.get(6).unwrap_or("").to_string(),
            })
        })
        .collect()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
