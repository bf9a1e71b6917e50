//! Tabulated surface and curvature values over a grid, emitted as CSV or JSON.

use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curvature::{
    kadiyala_is_developable, ves_theorem1_verdict, DevelopabilityVerdict, Theorem1Prediction,
};
use crate::error::{Error, Result};
use crate::harness::grid::{sample_grid, GridSpec};
use crate::models::{HeightField, Model};
use crate::surface::{
    classify_sign, fundamental_forms, gaussian_curvature, mean_curvature, SignClass,
};

pub const CSV_HEADER: &str = "u,v,f,K,H,valid,sign";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidSpec(format!("unknown format {other:?}"))),
        }
    }
}

/// One grid point. Points outside the model domain carry no values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub u: f64,
    pub v: f64,
    pub f: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    #[serde(rename = "H")]
    pub h: Option<f64>,
    pub valid: bool,
    pub sign: Option<SignClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "snake_case")]
pub enum TheoremVerdict {
    /// Returns-to-scale regime and predicted curvature sign for VES.
    Theorem1(Theorem1Prediction),
    /// Flat-surface verdict for Kadiyala.
    Theorem2(DevelopabilityVerdict),
}

impl TheoremVerdict {
    pub fn for_model(model: &Model) -> Self {
        match model {
            Model::Ves { params, .. } => TheoremVerdict::Theorem1(ves_theorem1_verdict(params)),
            Model::Kadiyala { params } => TheoremVerdict::Theorem2(kadiyala_is_developable(params)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub points: usize,
    pub max_abs_k: f64,
    pub min_f: Option<f64>,
    pub max_f: Option<f64>,
    pub invalid_count: usize,
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
    pub tol_k: f64,
    pub verdict: TheoremVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub model: Model,
    pub grid: GridSpec,
    pub rows: Vec<GridRow>,
    pub summary: GridSummary,
}

impl GridReport {
    /// Evaluates `model` on every point of `grid`. Sign classes use
    /// `local_scale = max |K|` over the valid points.
    pub fn build(model: &Model, grid: &GridSpec, tol_k: f64) -> Result<Self> {
        let mut rows = Vec::with_capacity(grid.len());
        for (u, v) in sample_grid(grid)? {
            if !model.in_domain(u, v) {
                rows.push(GridRow {
                    u,
                    v,
                    f: None,
                    k: None,
                    h: None,
                    valid: false,
                    sign: None,
                });
                continue;
            }
            let jet = model.jet(u, v)?;
            let forms = fundamental_forms(&jet)?;
            rows.push(GridRow {
                u,
                v,
                f: Some(jet.val),
                k: Some(gaussian_curvature(&forms)),
                h: Some(mean_curvature(&forms)),
                valid: true,
                sign: None,
            });
        }
        rows.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));

        let max_abs_k = rows
            .iter()
            .filter_map(|r| r.k)
            .fold(0.0f64, |m, k| m.max(k.abs()));
        let (mut positive, mut zero, mut negative) = (0, 0, 0);
        for row in &mut rows {
            if let Some(k) = row.k {
                let s = classify_sign(k, max_abs_k, tol_k);
                match s {
                    SignClass::Positive => positive += 1,
                    SignClass::Zero => zero += 1,
                    SignClass::Negative => negative += 1,
                }
                row.sign = Some(s);
            }
        }
        let fs = || rows.iter().filter_map(|r| r.f);
        let summary = GridSummary {
            points: rows.len(),
            max_abs_k,
            min_f: fs().reduce(f64::min),
            max_f: fs().reduce(f64::max),
            invalid_count: rows.iter().filter(|r| !r.valid).count(),
            positive,
            zero,
            negative,
            tol_k,
            verdict: TheoremVerdict::for_model(model),
        };
        Ok(Self {
            model: *model,
            grid: *grid,
            rows,
            summary,
        })
    }
}

fn csv_number(out: &mut impl Write, x: Option<f64>) -> io::Result<()> {
    match x {
        // `Debug` prints the shortest string that parses back to the same f64.
        Some(x) => write!(out, "{x:?}"),
        None => Ok(()),
    }
}

pub fn write_csv(report: &GridReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.rows {
        csv_number(out, Some(r.u))?;
        out.write_all(b",")?;
        csv_number(out, Some(r.v))?;
        out.write_all(b",")?;
        csv_number(out, r.f)?;
        out.write_all(b",")?;
        csv_number(out, r.k)?;
        out.write_all(b",")?;
        csv_number(out, r.h)?;
        write!(out, ",{},", r.valid)?;
        if let Some(s) = r.sign {
            out.write_all(s.as_str().as_bytes())?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn emit_grid_report(
    report: &GridReport,
    format: ReportFormat,
    out: &mut impl Write,
) -> io::Result<()> {
    match format {
        ReportFormat::Csv => write_csv(report, out),
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report).map_err(io::Error::other)?;
            out.write_all(b"\n")
        }
    }
}
