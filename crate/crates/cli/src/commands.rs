use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};

use bellwave_core::chsh::{
    bell_closed, bell_from_correlators, kappa_star, scan_classical_crossings,
};
use bellwave_core::correlator::{correlator_dimensionless, correlators_numeric};
use bellwave_core::sweep::sweep;
use bellwave_core::validation::validate;
use bellwave_core::{
    AnalyzerSettings, DimensionlessPoint, Evaluation, Spacing, SweepRow, ValidationGrid, ZetaGrid,
};

use crate::args::{
    ChshArgs, Cli, Command, Figure1Args, FormatArg, PointArgs, SpacingArg, SweepArgs, ValidateArgs,
};
use crate::format::{g9, Cell, Table};
use crate::resolve::{parse_direction, parse_list, parse_settings, Resolved};
use crate::svg::{Plot, ReferenceLine, Series};
use crate::{usage, CliError};

const FIGURE_KAPPAS: [f64; 2] = [0.5, 1.0];

/// Runs one invocation. Returns the process exit code for outcomes that are
/// not errors, i.e. a validation report with failures.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let res = Resolved::new(&cli.shared)?;
    match res.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| usage(format!("--jobs {n}: {e}")))?;
            pool.install(|| dispatch(&cli.command, &res))
        }
        None => dispatch(&cli.command, &res),
    }
}

fn dispatch(cmd: &Command, res: &Resolved) -> Result<u8, CliError> {
    match cmd {
        Command::Point(a) => point(a, res),
        Command::Sweep(a) => cmd_sweep(a, res),
        Command::Chsh(a) => chsh(a, res),
        Command::Validate(a) => cmd_validate(a, res),
        Command::Figure1(a) => figure1(a, res),
    }
    .map(|()| 0)
    .or_else(|e| match e {
        Outcome::Failed => Ok(1),
        Outcome::Error(e) => Err(e),
    })
}

/// Internal result so that validation can report failure without an error
/// message of its own.
enum Outcome {
    Failed,
    Error(CliError),
}

impl<E: Into<CliError>> From<E> for Outcome {
    fn from(e: E) -> Self {
        Outcome::Error(e.into())
    }
}

fn render(table: &Table, format: FormatArg, single: bool) -> String {
    match format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Json => table.to_json(single),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(res: &Resolved, text: &str) -> Result<(), CliError> {
    match &res.out {
        Some(path) => write_file(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn method_rows(res: &Resolved) -> Vec<&'static str> {
    let mut m = Vec::new();
    if res.wants_closed() {
        m.push("closed");
    }
    if res.wants_numeric() {
        m.push("numeric");
    }
    m
}

fn point(args: &PointArgs, res: &Resolved) -> Result<(), Outcome> {
    let pt = res.point("point")?;
    let cfg = res.physical(pt)?;
    let dec = bell_closed(&pt);
    let quantity = if args.bell { "B" } else { "C" };
    let mut table = Table::new([
        "zeta", "kappa", quantity, "F_perp", "Phi_par", "method", "err",
    ]);

    if args.bell {
        if args.a.is_some() || args.b.is_some() {
            return Err(usage("--bell uses --settings; drop --a/--b").into());
        }
        let settings = parse_settings(args.settings.as_deref())?;
        for m in method_rows(res) {
            let eval = if m == "closed" {
                Evaluation::Closed
            } else {
                res.numeric()
            };
            let v = bell_from_correlators(&pt, &settings, &eval)?;
            table.push(point_row(&pt, v.value, &dec, m, v.err));
        }
    } else {
        if args.settings.is_some() {
            return Err(usage("--settings applies with --bell").into());
        }
        let (Some(a), Some(b)) = (&args.a, &args.b) else {
            return Err(usage("point needs --a and --b, or --bell").into());
        };
        let a = parse_direction("a", a)?;
        let b = parse_direction("b", b)?;
        for m in method_rows(res) {
            let (value, err) = if m == "closed" {
                (correlator_dimensionless(&a, &b, &pt).value, 0.0)
            } else {
                let c = correlators_numeric(&[(a, b)], &cfg, &res.options)?[0];
                (c.value, c.err)
            };
            table.push(point_row(&pt, value, &dec, m, err));
        }
    }
    emit(res, &render(&table, res.format, true))?;
    Ok(())
}

fn point_row(
    pt: &DimensionlessPoint,
    value: f64,
    dec: &bellwave_core::BellDecomposition,
    method: &str,
    err: f64,
) -> Vec<Cell> {
    vec![
        Cell::Num(pt.zeta),
        Cell::Num(pt.kappa),
        Cell::Num(value),
        Cell::Num(dec.f_perp),
        Cell::Num(dec.phi_par),
        Cell::Text(method.into()),
        Cell::Num(err),
    ]
}

/// κ list from --kappas, the config file, or a lone --kappa, in that order.
fn kappa_list(flag: Option<&str>, res: &Resolved, default: &[f64]) -> Result<Vec<f64>, CliError> {
    if let Some(text) = flag.or(res.kappas.as_deref()) {
        return Ok(parse_list("kappas", text)?);
    }
    Ok(match res.kappa {
        Some(k) => vec![k],
        None => default.to_vec(),
    })
}

fn sweep_table(rows: &[SweepRow], numeric: bool) -> Table {
    let mut cols = vec!["kappa", "zeta", "B", "absB", "F_perp", "Phi_par"];
    if numeric {
        cols.extend(["B_numeric", "err"]);
    }
    let mut table = Table::new(cols);
    for r in rows {
        let mut row = vec![
            Cell::Num(r.kappa),
            Cell::Num(r.zeta),
            Cell::Num(r.bell),
            Cell::Num(r.abs_bell()),
            Cell::Num(r.f_perp),
            Cell::Num(r.phi_par),
        ];
        if numeric {
            let v = r.numeric.expect("numeric requested");
            row.extend([Cell::Num(v.value), Cell::Num(v.err)]);
        }
        table.push(row);
    }
    table
}

fn check_kappas(kappas: &[f64], res: &Resolved) -> Result<(), CliError> {
    for &k in kappas {
        res.physical(DimensionlessPoint::new(0.0, k)?)?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, res: &Resolved) -> Result<(), Outcome> {
    let kappas = kappa_list(args.kappas.as_deref(), res, &FIGURE_KAPPAS)?;
    check_kappas(&kappas, res)?;
    let grid = ZetaGrid {
        min: args.zeta_min,
        max: args.zeta_max,
        count: args.count,
        spacing: match args.spacing {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        },
    };
    grid.validate()?;
    let settings = parse_settings(args.settings.as_deref())?;
    let numeric = res.wants_numeric().then(|| res.numeric());
    let rows = sweep(&kappas, &grid, numeric.as_ref(), &settings)?;
    emit(
        res,
        &render(&sweep_table(&rows, numeric.is_some()), res.format, false),
    )?;
    Ok(())
}

fn chsh(args: &ChshArgs, res: &Resolved) -> Result<(), Outcome> {
    if args.find_crossing {
        let kappa = res
            .kappa
            .ok_or_else(|| usage("chsh --find-crossing needs --kappa or --P"))?;
        let scan = scan_classical_crossings(kappa)?;
        let mut table = Table::new(["kappa", "kappa_star", "limit", "crossings", "beyond_scan"]);
        let list: Vec<String> = scan.crossings.iter().map(|&z| g9(z)).collect();
        table.push(vec![
            Cell::Num(kappa),
            Cell::Num(kappa_star()),
            Cell::Num(scan.limit),
            Cell::Text(list.join(";")),
            Cell::Bool(scan.crossing_beyond_scan()),
        ]);
        emit(res, &render(&table, res.format, true))?;
        return Ok(());
    }

    let pt = res.point("chsh")?;
    let cfg = res.physical(pt)?;
    let settings = parse_settings(args.settings.as_deref())?;
    let pairs = settings.pairs();
    let dec = bell_closed(&pt);
    let mut table = Table::new([
        "zeta", "kappa", "C_ab", "C_ab2", "C_a2b", "C_a2b2", "B", "absB", "F_perp", "Phi_par",
        "method", "err",
    ]);
    for m in method_rows(res) {
        let (c, err) = if m == "closed" {
            (
                pairs.map(|(a, b)| correlator_dimensionless(&a, &b, &pt).value),
                0.0,
            )
        } else {
            let v = correlators_numeric(&pairs, &cfg, &res.options)?;
            (
                [v[0].value, v[1].value, v[2].value, v[3].value],
                v.iter().map(|x| x.err).sum(),
            )
        };
        let b = AnalyzerSettings::combine(c);
        let mut row = vec![Cell::Num(pt.zeta), Cell::Num(pt.kappa)];
        row.extend(c.map(Cell::Num));
        row.extend([
            Cell::Num(b),
            Cell::Num(b.abs()),
            Cell::Num(dec.f_perp),
            Cell::Num(dec.phi_par),
            Cell::Text(m.into()),
            Cell::Num(err),
        ]);
        table.push(row);
    }
    emit(res, &render(&table, res.format, true))?;
    Ok(())
}

fn cmd_validate(args: &ValidateArgs, res: &Resolved) -> Result<(), Outcome> {
    if !(args.tol.is_finite() && args.tol >= 0.0) {
        return Err(usage(format!(
            "--tol must be finite and non-negative, got {}",
            args.tol
        ))
        .into());
    }
    let defaults = ValidationGrid::default();
    let kappas = kappa_list(args.kappas.as_deref(), res, &defaults.kappas)?;
    let zetas = match args.zetas.as_deref().or(res.zetas.as_deref()) {
        Some(text) => parse_list("zetas", text)?,
        None => res.zeta.map(|z| vec![z]).unwrap_or(defaults.zetas),
    };
    let grid = ValidationGrid {
        kappas,
        zetas,
        settings: parse_settings(args.settings.as_deref())?,
        d: res.d,
        allow_relativistic: res.allow_relativistic,
        tolerance: args.tol,
        options: res.options.clone(),
    };
    let report = validate(&grid)?;
    let mut table = Table::new([
        "zeta",
        "kappa",
        "pair",
        "closed",
        "numeric",
        "abs_diff",
        "quad_err",
        "converged",
        "pass",
    ]);
    for r in &report.rows {
        table.push(vec![
            Cell::Num(r.zeta),
            Cell::Num(r.kappa),
            Cell::Text(r.pair_label().into()),
            Cell::Num(r.closed),
            Cell::Num(r.numeric),
            Cell::Num(r.abs_diff),
            Cell::Num(r.quad_err),
            Cell::Bool(r.converged),
            Cell::Bool(r.pass),
        ]);
    }
    emit(res, &render(&table, res.format, false))?;
    let unconverged = report.rows.iter().filter(|r| !r.converged).count();
    eprintln!(
        "validate: {} rows, {} failures ({} unconverged), max diff {}, tolerance {}",
        report.rows.len(),
        report.failures(),
        unconverged,
        g9(report.max_diff()),
        g9(report.tolerance)
    );
    if report.passed() {
        Ok(())
    } else {
        Err(Outcome::Failed)
    }
}

fn figure1(args: &Figure1Args, res: &Resolved) -> Result<(), Outcome> {
    let kappas = kappa_list(args.kappas.as_deref(), res, &FIGURE_KAPPAS)?;
    check_kappas(&kappas, res)?;
    let grid = ZetaGrid::linear(0.0, args.zeta_max, args.count);
    let rows = sweep(&kappas, &grid, None, &AnalyzerSettings::default())?;

    let csv_path = res.out.clone().unwrap_or_else(|| {
        PathBuf::from(match res.format {
            FormatArg::Csv => "figure1.csv",
            FormatArg::Json => "figure1.json",
        })
    });
    let svg_path = args
        .svg
        .clone()
        .unwrap_or_else(|| csv_path.with_extension("svg"));
    if svg_path == csv_path {
        return Err(usage("--svg must differ from --out").into());
    }
    write_file(
        &csv_path,
        &render(&sweep_table(&rows, false), res.format, false),
    )?;

    let series = kappas
        .iter()
        .map(|&k| Series {
            label: format!("κ = {}", g9(k)),
            points: rows
                .iter()
                .filter(|r| r.kappa == k)
                .map(|r| (r.zeta, r.abs_bell()))
                .collect(),
        })
        .collect();
    let plot = Plot {
        title: "|B(ζ; κ)| against normalized separation".into(),
        x_label: "ζ = Z/d".into(),
        y_label: "|B|".into(),
        x_range: (0.0, args.zeta_max),
        y_range: (0.0, 3.0),
        series,
        references: vec![
            ReferenceLine {
                y: 2.0 * SQRT_2,
                color: "#1f77b4".into(),
                label: "2√2".into(),
            },
            ReferenceLine {
                y: 2.0,
                color: "#d62728".into(),
                label: "2".into(),
            },
        ],
    };
    write_file(&svg_path, &plot.render())?;
    eprintln!("wrote {} and {}", csv_path.display(), svg_path.display());
    Ok(())
}
