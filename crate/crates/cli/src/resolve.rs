//! Merges flags with the optional config file and turns the result into
//! core types.

use std::path::PathBuf;

use bellwave_core::units::DEFAULT_WIDTH;
use bellwave_core::{
    AnalyzerSettings, DimensionlessPoint, Evaluation, NumericOptions, PhysicalConfig,
    QuadratureSpec, SpinMode, UnitVector3, WindowProfile,
};
use clap::ValueEnum;

use crate::args::{FormatArg, MethodArg, SharedArgs, SpinModeArg, WindowArg};
use crate::config::ConfigFile;
use crate::{usage, CliError, UsageError};

/// Relative agreement demanded of a dimensionless value and its dimensional
/// counterpart when both are supplied.
const CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Resolved {
    pub d: f64,
    pub zeta: Option<f64>,
    pub kappa: Option<f64>,
    pub allow_relativistic: bool,
    pub method: MethodArg,
    pub options: NumericOptions,
    pub format: FormatArg,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    /// List keys only meaningful to some commands.
    pub kappas: Option<String>,
    pub zetas: Option<String>,
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

fn enum_key<T: ValueEnum>(cfg: &ConfigFile, key: &str) -> Result<Option<T>, UsageError> {
    cfg.raw(key)
        .map(|v| {
            T::from_str(v, true)
                .map_err(|_| UsageError(format!("config key `{key}`: invalid value `{v}`")))
        })
        .transpose()
}

/// A dimensionless value checked against, or derived from, its dimensional
/// counterpart.
fn reconcile(
    name: &str,
    dimless: Option<f64>,
    derived: Option<f64>,
    derived_from: &str,
) -> Result<Option<f64>, UsageError> {
    match (dimless, derived) {
        (Some(a), Some(b)) => {
            let scale = a.abs().max(b.abs()).max(1e-300);
            if (a - b).abs() > CONSISTENCY_TOL * scale {
                return Err(UsageError(format!(
                    "conflicting parameters: --{name} {a} but {derived_from} gives {b}"
                )));
            }
            Ok(Some(a))
        }
        (a, b) => Ok(a.or(b)),
    }
}

impl Resolved {
    pub fn new(shared: &SharedArgs) -> Result<Self, CliError> {
        let file = match &shared.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let d = pick(shared.d, file.get("d")?).unwrap_or(DEFAULT_WIDTH);
        if !(d.is_finite() && d > 0.0) {
            return Err(usage(format!("--d must be finite and positive, got {d}")));
        }
        let p = pick(shared.p, file.get::<f64>("P")?);
        let z = pick(shared.z, file.get::<f64>("Z")?);
        let zeta = reconcile(
            "zeta",
            pick(shared.zeta, file.get("zeta")?),
            z.map(|z| z / d),
            "--Z/--d",
        )?;
        let kappa = reconcile(
            "kappa",
            pick(shared.kappa, file.get("kappa")?),
            p.map(|p| p * d),
            "--P*--d",
        )?;
        let allow_relativistic =
            shared.allow_relativistic || file.get_bool("allow_relativistic")?.unwrap_or(false);

        let method = pick(shared.method, enum_key(&file, "method")?).unwrap_or(MethodArg::Closed);
        let spin_mode = match pick(shared.spin_mode, enum_key(&file, "spin_mode")?) {
            Some(SpinModeArg::Full) => SpinMode::Full,
            _ => SpinMode::Leading,
        };
        let window = pick(shared.window, enum_key(&file, "window")?).unwrap_or(WindowArg::Uniform);
        let window_width = pick(shared.window_width, file.get("window_width")?);
        let profile = match window {
            WindowArg::Uniform => {
                if window_width.is_some() {
                    return Err(usage("--window-width needs --window gaussian"));
                }
                WindowProfile::Uniform
            }
            WindowArg::Gaussian => WindowProfile::gaussian(window_width.unwrap_or(1.0) * d)?,
        };

        let defaults = QuadratureSpec::default();
        let nodes =
            pick(shared.quad_nodes, file.get("quad_nodes")?).unwrap_or(defaults.nodes_per_axis);
        let max_nodes = pick(shared.quad_max_nodes, file.get("quad_max_nodes")?)
            .unwrap_or(defaults.max_nodes_per_axis.max(nodes));
        let tol = pick(shared.quad_tol, file.get("quad_tol")?).unwrap_or(defaults.target_rel_tol);
        let quadrature = QuadratureSpec {
            nodes_per_axis: nodes,
            target_rel_tol: tol,
            max_nodes_per_axis: max_nodes,
            ..defaults
        };
        quadrature.validate_budget()?;

        let jobs = pick(shared.jobs, file.get("jobs")?);
        if jobs == Some(0) {
            return Err(usage("--jobs must be at least 1"));
        }

        Ok(Resolved {
            d,
            zeta,
            kappa,
            allow_relativistic,
            method,
            options: NumericOptions {
                spin_mode,
                window_a: profile,
                window_b: profile,
                quadrature,
            },
            format: pick(shared.format, enum_key(&file, "format")?).unwrap_or(FormatArg::Csv),
            out: pick(shared.out.clone(), file.raw("out").map(PathBuf::from)),
            jobs,
            kappas: file.raw("kappas").map(str::to_string),
            zetas: file.raw("zetas").map(str::to_string),
        })
    }

    /// The (ζ, κ) pair, required by single-point commands.
    pub fn point(&self, command: &str) -> Result<DimensionlessPoint, CliError> {
        let zeta = self
            .zeta
            .ok_or_else(|| usage(format!("{command} needs --zeta or --Z")))?;
        let kappa = self
            .kappa
            .ok_or_else(|| usage(format!("{command} needs --kappa or --P")))?;
        Ok(DimensionlessPoint::new(zeta, kappa)?)
    }

    /// Physical configuration at the resolved width; also enforces the
    /// non-relativistic bound.
    pub fn physical(&self, pt: DimensionlessPoint) -> Result<PhysicalConfig, CliError> {
        Ok(bellwave_core::units::from_dimensionless(
            pt,
            self.d,
            self.allow_relativistic,
        )?)
    }

    pub fn numeric(&self) -> Evaluation {
        Evaluation::Numeric {
            d: self.d,
            allow_relativistic: self.allow_relativistic,
            options: self.options.clone(),
        }
    }

    pub fn wants_closed(&self) -> bool {
        self.method != MethodArg::Numeric
    }

    pub fn wants_numeric(&self) -> bool {
        self.method != MethodArg::Closed
    }
}

/// Comma-separated reals.
pub fn parse_list(name: &str, text: &str) -> Result<Vec<f64>, UsageError> {
    let values = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| UsageError(format!("--{name}: `{}` is not a number", t.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(UsageError(format!("--{name} is empty")));
    }
    Ok(values)
}

/// `x,y,z`, normalized to unit length.
pub fn parse_direction(name: &str, text: &str) -> Result<UnitVector3, CliError> {
    let v = parse_list(name, text)?;
    if v.len() != 3 {
        return Err(usage(format!(
            "--{name} needs three components, got `{text}`"
        )));
    }
    UnitVector3::normalize(v[0], v[1], v[2]).map_err(|e| usage(format!("--{name}: {e}")))
}

/// `default`, or `a=x,y,z,a2=x,y,z,b=x,y,z,b2=x,y,z` with any subset of keys
/// overriding the default directions.
pub fn parse_settings(text: Option<&str>) -> Result<AnalyzerSettings, CliError> {
    let mut settings = AnalyzerSettings::default();
    let Some(text) = text.map(str::trim) else {
        return Ok(settings);
    };
    if text.is_empty() || text == "default" {
        return Ok(settings);
    }
    let mut groups: Vec<(String, Vec<&str>)> = Vec::new();
    for token in text.split(',') {
        match token.split_once('=') {
            Some((key, first)) => groups.push((key.trim().to_string(), vec![first])),
            None => match groups.last_mut() {
                Some((_, parts)) => parts.push(token),
                None => {
                    return Err(usage(format!(
                        "--settings: expected key=x,y,z, got `{token}`"
                    )))
                }
            },
        }
    }
    for (key, parts) in groups {
        let dir = parse_direction(&format!("settings {key}"), &parts.join(","))?;
        match key.as_str() {
            "a" => settings.a = dir,
            "a2" => settings.a_prime = dir,
            "b" => settings.b = dir,
            "b2" => settings.b_prime = dir,
            other => {
                return Err(usage(format!(
                    "--settings: unknown key `{other}` (use a, a2, b, b2)"
                )))
            }
        }
    }
    Ok(settings)
}
