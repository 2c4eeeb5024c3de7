use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use canal::classify::{classify, ClassifyConfig};
use canal::curvature::{evaluate, CurvatureSet, CurvatureValue, DiffConfig, ToleranceOverrides, Tolerances};
use canal::export::{render_csv, render_obj, sample_grid, NumberFormat, ObjOptions};
use canal::spec::{builtin, SurfaceSpec, BUILTIN_NAMES};
use canal::verify::{verify_builtin, verify_surface, VerifyConfig};
use canal::Error;

/// Exit status for a verification run with failing checks.
const VERIFY_FAILED: u8 = 5;

#[derive(Parser)]
#[command(name = "canal", version, about = "Curvatures, classification and meshes of canal surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental forms and K, H, K_II, H_II at one point.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Flat / minimal / II-flat / II-minimal verdicts as JSON.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Sample the spec grid and write a mesh. OBJ output gets a CSV sidecar
    /// with the curvatures next to it.
    Mesh {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Obj)]
        format: Format,
        /// Split quads into triangles.
        #[arg(long)]
        triangulate: bool,
        /// Leave the t = 0 seam open.
        #[arg(long)]
        open_seam: bool,
    },
    /// Run the invariant checks on a spec, or the reference suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run the full suite on the built-in reference surfaces.
        #[arg(long, conflicts_with_all = ["spec", "spec_file", "surface"])]
        builtin: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Surface spec (JSON).
    #[arg(value_name = "SPEC")]
    spec: Option<PathBuf>,
    /// Same as the positional SPEC.
    #[arg(long = "spec", value_name = "FILE", conflicts_with = "spec")]
    spec_file: Option<PathBuf>,
    /// Use a built-in reference surface instead of a file.
    #[arg(long, value_name = "NAME", conflicts_with_all = ["spec", "spec_file"])]
    surface: Option<String>,
    /// Significant digits in printed numbers.
    #[arg(long, default_value_t = 17)]
    digits: usize,
    /// Threshold on EG − F².
    #[arg(long)]
    tol_deg: Option<f64>,
    /// Threshold on |eg − f²|.
    #[arg(long)]
    tol_ii: Option<f64>,
    /// Threshold on |K| for H_II.
    #[arg(long)]
    tol_k: Option<f64>,
    /// Base tolerance profile: default, strict or loose.
    #[arg(long, env = "CANAL_TOL_PROFILE", default_value = "default")]
    tol_profile: String,
}

impl Common {
    fn spec(&self) -> canal::Result<SurfaceSpec> {
        if let Some(name) = &self.surface {
            return builtin(name).ok_or_else(|| {
                Error::Spec(format!("unknown surface `{name}`, expected one of {}", BUILTIN_NAMES.join(", ")))
            });
        }
        match self.spec.as_ref().or(self.spec_file.as_ref()) {
            Some(path) => SurfaceSpec::load(path),
            None => Err(Error::Spec("no surface given: pass a spec file or --surface NAME".into())),
        }
    }

    fn number_format(&self) -> canal::Result<NumberFormat> {
        NumberFormat::new(self.digits)
    }

    /// Profile, then the spec's own overrides, then the flags.
    fn tolerances(&self, spec: Option<&SurfaceSpec>) -> canal::Result<Tolerances> {
        let base = Tolerances::profile(&self.tol_profile).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown tolerance profile `{}`, expected one of {}",
                self.tol_profile,
                Tolerances::PROFILES.join(", ")
            ))
        })?;
        let base = match spec {
            Some(s) => s.tolerances_over(base),
            None => base,
        };
        let flags = ToleranceOverrides { deg: self.tol_deg, ii: self.tol_ii, k: self.tol_k };
        Ok(base.with(&flags))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { common, s, t, json } => eval(&common, s, t, json),
        Command::Classify { common } => cmd_classify(&common),
        Command::Mesh { common, out, format, triangulate, open_seam } => {
            mesh(&common, &out, format, ObjOptions { triangulate, weld_seam: !open_seam })
        }
        Command::Verify { common, builtin, json } => verify(&common, builtin, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Rounds every number in `v` to the requested significant digits.
fn round_json(v: Value, num: NumberFormat) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => num.fmt(x).parse::<f64>().map(Value::from).unwrap_or(Value::Number(n)),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(|x| round_json(x, num)).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, round_json(x, num))).collect()),
        other => other,
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(v: Value, num: NumberFormat) {
    emit(&serde_json::to_string_pretty(&round_json(v, num)).expect("JSON values serialize"));
    emit("\n");
}

fn value_json(v: CurvatureValue) -> Value {
    match v {
        CurvatureValue::Defined(x) => json!(x),
        u => json!(u.to_string()),
    }
}

fn eval(common: &Common, s: f64, t: f64, as_json: bool) -> canal::Result<u8> {
    let spec = common.spec()?;
    let num = common.number_format()?;
    let tol = common.tolerances(Some(&spec))?;
    let m = spec.build()?;
    let forms = m.forms(s, t)?;
    let point = m.point(s, t)?;
    let c = evaluate(&m, s, t, CurvatureSet::ALL, &DiffConfig::default(), &tol)?;
    let rows: [(&str, Value); 15] = [
        ("s", json!(s)),
        ("t", json!(t)),
        ("x", json!(point.x)),
        ("y", json!(point.y)),
        ("z", json!(point.z)),
        ("E", json!(forms.e_big)),
        ("F", json!(forms.f_big)),
        ("G", json!(forms.g_big)),
        ("e", json!(forms.e)),
        ("f", json!(forms.f)),
        ("g", json!(forms.g)),
        ("EG-F^2", json!(forms.area2)),
        ("eg-f^2", json!(forms.det2)),
        ("K", value_json(c.k)),
        ("H", value_json(c.h)),
    ];
    let tail = [("K_II", value_json(c.k_ii)), ("K_II_brioschi", value_json(c.k_ii_brioschi)), ("H_II", value_json(c.h_ii))];
    if as_json {
        let map: serde_json::Map<String, Value> =
            rows.into_iter().chain(tail).map(|(k, v)| (k.to_string(), v)).collect();
        print_json(Value::Object(map), num);
    } else {
        let mut out = String::new();
        for (k, v) in rows.into_iter().chain(tail) {
            let text = match v {
                Value::Number(n) => num.fmt(n.as_f64().unwrap_or(f64::NAN)),
                Value::String(s) => s,
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k:<14}{text}");
        }
        emit(&out);
    }
    Ok(0)
}

fn cmd_classify(common: &Common) -> canal::Result<u8> {
    let spec = common.spec()?;
    let num = common.number_format()?;
    let tol = common.tolerances(Some(&spec))?;
    let m = spec.build()?;
    let cfg = ClassifyConfig { ns: spec.grid.ns, nt: spec.grid.nt, tolerances: tol, ..Default::default() };
    let report = classify(&m, &cfg);
    print_json(serde_json::to_value(&report).expect("report serializes"), num);
    Ok(0)
}

fn write(path: &Path, text: &str) -> canal::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn mesh(common: &Common, out: &Path, format: Format, opts: ObjOptions) -> canal::Result<u8> {
    let spec = common.spec()?;
    let num = common.number_format()?;
    let tol = common.tolerances(Some(&spec))?;
    let m = spec.build()?;
    let grid = sample_grid(&m, spec.grid.ns, spec.grid.nt, CurvatureSet::ALL, &DiffConfig::default(), &tol)?;
    let csv_path = match format {
        Format::Obj => {
            write(out, &render_obj(&grid, opts, num))?;
            emit(&format!("{}\n", out.display()));
            out.with_extension("csv")
        }
        Format::Csv => out.to_path_buf(),
    };
    write(&csv_path, &render_csv(&grid, num))?;
    emit(&format!("{}\n", csv_path.display()));
    Ok(0)
}

fn verify(common: &Common, suite: bool, as_json: bool) -> canal::Result<u8> {
    let num = common.number_format()?;
    let report = if suite {
        let cfg = VerifyConfig { tolerances: common.tolerances(None)?, ..Default::default() };
        verify_builtin(&cfg)
    } else {
        let spec = common.spec()?;
        let cfg = VerifyConfig {
            ns: spec.grid.ns,
            nt: spec.grid.nt,
            tolerances: common.tolerances(Some(&spec))?,
            ..Default::default()
        };
        let m = spec.build()?;
        let name = common.surface.clone().unwrap_or_else(|| "spec".to_string());
        verify_surface(&name, &m, &cfg)?
    };
    if as_json {
        print_json(serde_json::to_value(&report).expect("report serializes"), num);
    } else {
        emit(&report.render_text());
    }
    Ok(if report.passed() { 0 } else { VERIFY_FAILED })
}
