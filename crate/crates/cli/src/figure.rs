use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use exodetect::{Alignment, Scenario};
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{evaluate, Quantity};
use crate::output::{emit, print_json, spaced, usage, Table};
use crate::svg::{Plot, Series};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureName {
    /// Quantum and direct-imaging entropies against ε at s = 0.05σ (log-log).
    QreVsEps,
    /// Quantum and direct-imaging entropies against s/σ for each `--eps-list` value.
    QreVsSep,
    /// Thermal quantum entropy per photon against s/σ at ε = 0.05.
    ThermalPerPhoton,
    /// Single-photon and thermal SPADE against s/σ at ε = 0.01.
    SpadeThermal,
}

impl FigureName {
    fn name(self) -> &'static str {
        match self {
            FigureName::QreVsEps => "qre-vs-eps",
            FigureName::QreVsSep => "qre-vs-sep",
            FigureName::ThermalPerPhoton => "thermal-per-photon",
            FigureName::SpadeThermal => "spade-thermal",
        }
    }
}

/// ε values for `qre-vs-sep` when `--eps-list` is absent (a choice, not read off a source).
const DEFAULT_EPS_LIST: [f64; 3] = [0.01, 0.05, 0.1];
const THERMAL_EPSILON: f64 = 0.05;
const DEFAULT_THERMAL_PHOTONS: [f64; 4] = [0.001, 0.1, 1.0, 10.0];
const SPADE_EPSILON: f64 = 0.01;
const DEFAULT_SPADE_PHOTONS: [f64; 2] = [0.1, 0.5];
const EPS_SWEEP_SEPARATION: f64 = 0.05;

#[derive(Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    name: FigureName,
    /// CSV destination.
    #[arg(long)]
    output: PathBuf,
    /// Optional SVG rendering of the same data.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Number of points along the horizontal axis.
    #[arg(long)]
    points: Option<usize>,
    /// Companion brightness values for `qre-vs-sep`.
    #[arg(long, value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
    /// Mean photon numbers for `thermal-per-photon` and `spade-thermal`.
    #[arg(long, value_delimiter = ',')]
    photons_list: Option<Vec<f64>>,
}

struct Figure {
    table: Table,
    plot_title: &'static str,
    x_label: &'static str,
    y_label: &'static str,
    x_log: bool,
    series: Vec<Series>,
}

fn unit_scenario(eps: f64, s: f64, photons: f64) -> exodetect::Result<Scenario> {
    Scenario::new(eps, s, 1.0, photons, Alignment::CentroidCentered)
}

fn metadata(name: FigureName, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut m = vec![
        ("figure".to_string(), name.name().to_string()),
        ("sigma".to_string(), "1".to_string()),
        ("alignment".to_string(), Alignment::CentroidCentered.to_string()),
    ];
    m.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
    m
}

fn list(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn qre_vs_eps(points: usize) -> Result<Figure> {
    let rows = spaced(1e-4, 1e-2, points, true)
        .into_par_iter()
        .map(|eps| {
            let sc = unit_scenario(eps, EPS_SWEEP_SEPARATION, 0.0)?;
            Ok(vec![eps, evaluate(Quantity::Quantum, &sc)?.nats, evaluate(Quantity::Di, &sc)?.nats])
        })
        .collect::<exodetect::Result<Vec<_>>>()?;
    let table = Table {
        metadata: metadata(
            FigureName::QreVsEps,
            &[
                ("separation", EPS_SWEEP_SEPARATION.to_string()),
                ("mean_photons", "0".into()),
                ("epsilon", format!("swept 1e-4 to 1e-2, {points} log-spaced points")),
            ],
        ),
        columns: vec!["eps".into(), "D_quantum".into(), "D_di".into()],
        rows,
    };
    let series = ["D_quantum", "D_di"]
        .iter()
        .map(|c| Series {
            label: c.to_string(),
            points: table.column("eps").into_iter().zip(table.column(c)).collect(),
        })
        .collect();
    Ok(Figure {
        table,
        plot_title: "Relative entropy against brightness ratio, s = 0.05σ",
        x_label: "ε",
        y_label: "D (nats)",
        x_log: true,
        series,
    })
}

fn qre_vs_sep(points: usize, eps_list: &[f64]) -> Result<Figure> {
    let seps = spaced(0.05, 6.0, points, false);
    let grid: Vec<(f64, f64)> = eps_list.iter().flat_map(|&e| seps.iter().map(move |&s| (e, s))).collect();
    let rows = grid
        .into_par_iter()
        .map(|(eps, s)| {
            let sc = unit_scenario(eps, s, 0.0)?;
            Ok(vec![eps, s, evaluate(Quantity::Quantum, &sc)?.nats, evaluate(Quantity::Di, &sc)?.nats])
        })
        .collect::<exodetect::Result<Vec<_>>>()?;
    let mut series = Vec::new();
    for &eps in eps_list {
        for (col, tag) in [(2, "quantum"), (3, "di")] {
            series.push(Series {
                label: format!("{tag} ε={eps}"),
                points: rows.iter().filter(|r| r[0] == eps).map(|r| (r[1], r[col])).collect(),
            });
        }
    }
    Ok(Figure {
        table: Table {
            metadata: metadata(
                FigureName::QreVsSep,
                &[
                    ("mean_photons", "0".into()),
                    ("epsilon", list(eps_list)),
                    ("separation", format!("swept 0.05 to 6, {points} linear points")),
                ],
            ),
            columns: vec!["eps".into(), "s_over_sigma".into(), "D_quantum".into(), "D_di".into()],
            rows,
        },
        plot_title: "Relative entropy against separation",
        x_label: "s/σ",
        y_label: "D (nats)",
        x_log: false,
        series,
    })
}

fn thermal_per_photon(points: usize, photons: &[f64]) -> Result<Figure> {
    let seps = spaced(0.1, 4.0, points, false);
    let grid: Vec<(f64, f64)> = photons.iter().flat_map(|&n| seps.iter().map(move |&s| (n, s))).collect();
    let rows = grid
        .into_par_iter()
        .map(|(n, s)| {
            let sc = unit_scenario(THERMAL_EPSILON, s, n)?;
            let per_photon = evaluate(Quantity::GaussianNumeric, &sc)?.per_photon.expect("thermal");
            Ok(vec![n, s, per_photon, evaluate(Quantity::Quantum, &sc)?.nats])
        })
        .collect::<exodetect::Result<Vec<_>>>()?;
    let mut series: Vec<Series> = photons
        .iter()
        .map(|&n| Series {
            label: format!("N={n}"),
            points: rows.iter().filter(|r| r[0] == n).map(|r| (r[1], r[2])).collect(),
        })
        .collect();
    series.push(Series {
        label: "single photon".into(),
        points: rows.iter().filter(|r| r[0] == photons[0]).map(|r| (r[1], r[3])).collect(),
    });
    Ok(Figure {
        table: Table {
            metadata: metadata(
                FigureName::ThermalPerPhoton,
                &[
                    ("epsilon", THERMAL_EPSILON.to_string()),
                    ("mean_photons", list(photons)),
                    ("separation", format!("swept 0.1 to 4, {points} linear points")),
                ],
            ),
            columns: vec![
                "mean_photons".into(),
                "s_over_sigma".into(),
                "D_per_photon".into(),
                "D_single_photon".into(),
            ],
            rows,
        },
        plot_title: "Thermal quantum relative entropy per photon, ε = 0.05",
        x_label: "s/σ",
        y_label: "D / N (nats)",
        x_log: false,
        series,
    })
}

fn spade_thermal(points: usize, photons: &[f64]) -> Result<Figure> {
    let rows = spaced(0.1, 4.0, points, false)
        .into_par_iter()
        .map(|s| {
            let sc = unit_scenario(SPADE_EPSILON, s, 0.0)?;
            let mut row = vec![s, evaluate(Quantity::Quantum, &sc)?.nats, evaluate(Quantity::Spade, &sc)?.nats];
            for &n in photons {
                let thermal = sc.with_mean_photons(n)?;
                row.push(evaluate(Quantity::SpadeThermal, &thermal)?.per_photon.expect("thermal"));
            }
            Ok(row)
        })
        .collect::<exodetect::Result<Vec<_>>>()?;
    let mut columns = vec!["s_over_sigma".to_string(), "D_quantum".into(), "D_spade".into()];
    columns.extend(photons.iter().map(|n| format!("D_spade_thermal_N{n}")));
    let series = (1..columns.len())
        .map(|c| Series {
            label: columns[c].clone(),
            points: rows.iter().map(|r| (r[0], r[c])).collect(),
        })
        .collect();
    Ok(Figure {
        table: Table {
            metadata: metadata(
                FigureName::SpadeThermal,
                &[
                    ("epsilon", SPADE_EPSILON.to_string()),
                    ("mean_photons", list(photons)),
                    ("separation", format!("swept 0.1 to 4, {points} linear points")),
                ],
            ),
            columns,
            rows,
        },
        plot_title: "SPADE per photon, ε = 0.01",
        x_label: "s/σ",
        y_label: "D / N (nats)",
        x_log: false,
        series,
    })
}

#[derive(Serialize)]
struct Report<'a> {
    figure: FigureName,
    csv: String,
    svg: Option<String>,
    columns: &'a [String],
    rows: usize,
}

pub fn run(args: &FigureArgs, json: bool) -> Result<()> {
    let points = args.points.unwrap_or(match args.name {
        FigureName::QreVsEps => 41,
        _ => 60,
    });
    if points < 2 {
        return Err(usage(format!("a figure needs at least 2 points, got {points}")));
    }
    if args.eps_list.is_some() && args.name != FigureName::QreVsSep {
        return Err(usage("--eps-list only applies to qre-vs-sep"));
    }
    let thermal = matches!(args.name, FigureName::ThermalPerPhoton | FigureName::SpadeThermal);
    if args.photons_list.is_some() && !thermal {
        return Err(usage("--photons-list only applies to thermal-per-photon and spade-thermal"));
    }
    let eps_list = args.eps_list.clone().unwrap_or(DEFAULT_EPS_LIST.to_vec());
    let photons = args.photons_list.clone().unwrap_or(match args.name {
        FigureName::SpadeThermal => DEFAULT_SPADE_PHOTONS.to_vec(),
        _ => DEFAULT_THERMAL_PHOTONS.to_vec(),
    });
    if eps_list.is_empty() || photons.is_empty() {
        return Err(usage("value lists must not be empty"));
    }
    let figure = match args.name {
        FigureName::QreVsEps => qre_vs_eps(points)?,
        FigureName::QreVsSep => qre_vs_sep(points, &eps_list)?,
        FigureName::ThermalPerPhoton => thermal_per_photon(points, &photons)?,
        FigureName::SpadeThermal => spade_thermal(points, &photons)?,
    };
    figure.table.write_to(Some(&args.output))?;
    if let Some(path) = &args.svg {
        let plot = Plot {
            title: figure.plot_title,
            x_label: figure.x_label,
            y_label: figure.y_label,
            x_log: figure.x_log,
            y_log: true,
            series: figure.series,
        };
        fs::write(path, plot.render()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let report = Report {
        figure: args.name,
        csv: args.output.display().to_string(),
        svg: args.svg.as_ref().map(|p| p.display().to_string()),
        columns: &figure.table.columns,
        rows: figure.table.rows.len(),
    };
    if json {
        print_json(&report)
    } else {
        let mut text = format!("wrote {} rows to {}\n", report.rows, report.csv);
        if let Some(svg) = &report.svg {
            text += &format!("wrote {svg}\n");
        }
        emit(&text)
    }
}
