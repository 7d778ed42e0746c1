use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncosc::separability::{scan, Axis};
use ncosc::szilard::MeasurementSpec;
use ncosc::wigner::{illustration_form, illustration_planes, parse_fixed, parse_plane, project, GridAxis, SliceSpec};
use ncosc::{analyze, covariance, extractable_work, ground_state, spectral_data, wigner_form, ErrorKind};
use ncosc::{ParamName, PhaseAxis, PhysicalParams64, Tolerances64, WignerForm64};
use serde::Serialize;

const PARAM_TABLE: &str = "\
Parameter flags:
  --m1, --m2     masses m1, m2
  --w1, --w2     trap frequencies (omega-tilde 1, omega-tilde 2)
  --theta        position noncommutativity theta
  --eta          momentum noncommutativity eta
  --hbar         Planck constant (default 1)

Exit status: 0 success, 2 invalid input, 3 degenerate spectrum,
4 numerical identity failure, 1 I/O error.";

#[derive(Parser)]
#[command(name = "ncosc", version, about = "Noncommutative coupled oscillators: spectrum, entanglement, Wigner slices, Szilard work")]
#[command(after_help = PARAM_TABLE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline for one parameter point, as JSON on stdout.
    #[command(after_help = PARAM_TABLE, allow_negative_numbers = true)]
    Analyze {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Separability verdict over a 1D or 2D parameter grid.
    #[command(after_help = PARAM_TABLE, allow_negative_numbers = true)]
    Scan(ScanArgs),
    /// Wigner-function slices written as CSV grids with JSON metadata.
    #[command(after_help = PARAM_TABLE, allow_negative_numbers = true)]
    Wigner(WignerArgs),
    /// Work extractable from mode 1 after a Gaussian measurement on mode 2.
    #[command(after_help = PARAM_TABLE, allow_negative_numbers = true)]
    Szilard {
        #[command(flatten)]
        params: Params,
        /// Measurement squeezing (1 = heterodyne; 0 = homodyne, unsupported).
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Rotation of the measured quadrature, radians.
        #[arg(long = "theta-pi2", default_value_t = 0.0)]
        theta_pi2: f64,
        /// Thermal energy k_B T.
        #[arg(long, default_value_t = 1.0)]
        kbt: f64,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    m1: f64,
    #[arg(long)]
    m2: f64,
    #[arg(long)]
    w1: f64,
    #[arg(long)]
    w2: f64,
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Tolerance for the eigen-system identity residuals.
    #[arg(long)]
    tol: Option<f64>,
}

/// Same flags, each optional; used where some values come from elsewhere.
#[derive(Args)]
struct PartialParams {
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    m2: Option<f64>,
    #[arg(long)]
    w1: Option<f64>,
    #[arg(long)]
    w2: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Tolerance for the eigen-system identity residuals.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct JsonOut {
    /// Compact JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// First axis, `name=min:max:steps` with name one of m1 m2 w1 w2 theta eta hbar.
    #[arg(long)]
    axis1: String,
    /// Optional second axis; varies fastest.
    #[arg(long)]
    axis2: Option<String>,
    #[command(flatten)]
    params: PartialParams,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct WignerArgs {
    /// Free axes `a,b` from x1 p1 x2 p2. With --illustration and no plane,
    /// all six illustrative slices are written.
    #[arg(long)]
    plane: Option<String>,
    /// Values of the two remaining axes, `c=v,d=v` (default 0, or 1 with --illustration).
    #[arg(long)]
    fixed: Option<String>,
    /// Grid for both free axes, `min:max:count`.
    #[arg(long, default_value = "-4:4:201", allow_hyphen_values = true)]
    grid: String,
    /// Use the illustrative moments instead of a parameter point.
    #[arg(long)]
    illustration: bool,
    /// Output path prefix; files are `<prefix>_<a>_<b>.{csv,json}`.
    #[arg(long, default_value = "wigner")]
    out: String,
    /// Write `a b w` triples (gnuplot) to `.dat` instead of a CSV matrix.
    #[arg(long)]
    triples: bool,
    #[command(flatten)]
    params: PartialParams,
}

enum Failure {
    Core(ncosc::Error),
    Usage(String),
    Io(String),
}

impl From<ncosc::Error> for Failure {
    fn from(e: ncosc::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { params, out } => cmd_analyze(&params, &out),
        Command::Scan(args) => cmd_scan(&args),
        Command::Wigner(args) => cmd_wigner(&args),
        Command::Szilard {
            params,
            mu,
            theta_pi2,
            kbt,
            out,
        } => cmd_szilard(&params, MeasurementSpec { mu, theta: theta_pi2, kbt }, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Degenerate => 3,
                ErrorKind::Numerical => 4,
            })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances64, Failure> {
    let t = Tolerances64::default();
    match tol {
        None => Ok(t),
        Some(v) if v > 0.0 && v.is_finite() => Ok(t.with_identity(v)),
        Some(v) => Err(Failure::Usage(format!("--tol must be positive and finite, got {v}"))),
    }
}

impl Params {
    fn point(&self) -> PhysicalParams64 {
        PhysicalParams64::new(self.m1, self.m2, self.w1, self.w2, self.theta, self.eta).with_hbar(self.hbar)
    }
}

impl PartialParams {
    /// Fills every parameter. Those listed in `free` may be omitted and then
    /// take the paired value.
    fn point(&self, free: &[(ParamName, f64)]) -> Result<PhysicalParams64, Failure> {
        let mut p = PhysicalParams64::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).with_hbar(self.hbar);
        let given = [
            (ParamName::M1, self.m1),
            (ParamName::M2, self.m2),
            (ParamName::W1, self.w1),
            (ParamName::W2, self.w2),
            (ParamName::Theta, self.theta),
            (ParamName::Eta, self.eta),
        ];
        for (name, value) in given {
            match (value, free.iter().find(|(n, _)| *n == name)) {
                (Some(v), _) => p.set(name, v),
                (None, Some(&(_, v))) => p.set(name, v),
                (None, None) => {
                    return Err(Failure::Usage(format!("missing --{name}")));
                }
            }
        }
        Ok(p)
    }
}

fn emit<S: Serialize>(value: &S, out: &JsonOut) -> Outcome {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    let res = if out.pretty {
        serde_json::to_writer_pretty(&mut w, value)
    } else {
        serde_json::to_writer(&mut w, value)
    };
    res.map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

fn cmd_analyze(params: &Params, out: &JsonOut) -> Outcome {
    let tol = tolerances(params.tol)?;
    let report = analyze(&params.point(), &tol)?;
    emit(&report, out)
}

fn cmd_szilard(params: &Params, spec: MeasurementSpec<f64>, out: &JsonOut) -> Outcome {
    let tol = tolerances(params.tol)?;
    spec.validate()?;
    let p = params.point();
    p.validate()?;
    let cp = p.to_commutative();
    let sd = spectral_data(&cp, &tol)?;
    let cov = covariance(&ground_state(&cp, &sd, &tol)?);
    emit(&extractable_work(&cov, &spec, &tol)?, out)
}

fn cmd_scan(args: &ScanArgs) -> Outcome {
    let tol = tolerances(args.params.tol)?;
    let axis1: Axis<f64> = args.axis1.parse()?;
    let axis2: Option<Axis<f64>> = args.axis2.as_deref().map(str::parse).transpose()?;
    let free: Vec<(ParamName, f64)> = std::iter::once(&axis1).chain(&axis2).map(|a| (a.name, a.min)).collect();
    let fixed = args.params.point(&free)?;
    let table = scan(axis1, axis2, &fixed, &tol)?;

    let sink: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match args.format {
        Format::Csv => table.write_csv(&mut sink).map_err(|e| Failure::Io(e.to_string()))?,
        Format::Json => {
            serde_json::to_writer(&mut sink, &table).map_err(|e| Failure::Io(e.to_string()))?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;

    eprintln!("{}", table.summary());
    if let Some(row) = table.closest_to_boundary() {
        let at: Vec<String> = table
            .axes
            .iter()
            .zip(&row.values)
            .map(|(a, v)| format!("{}={v:e}", a.name))
            .collect();
        eprintln!("closest to boundary: {} margin {:e}", at.join(" "), row.margin.unwrap_or(f64::NAN));
    }
    Ok(())
}

#[derive(Serialize)]
struct SliceRecord<'a> {
    source: &'a str,
    #[serde(flatten)]
    meta: ncosc::wigner::GridMetadata<f64>,
    factorization_defect: f64,
    data_file: String,
}

fn cmd_wigner(args: &WignerArgs) -> Outcome {
    let tol = tolerances(args.params.tol)?;
    let (form, source): (WignerForm64, &str) = if args.illustration {
        (illustration_form(), "illustration")
    } else {
        let p = args.params.point(&[])?;
        p.validate()?;
        let cp = p.to_commutative();
        let sd = spectral_data(&cp, &tol)?;
        (wigner_form(&covariance(&ground_state(&cp, &sd, &tol)?)), "parameters")
    };

    let planes: Vec<(PhaseAxis, PhaseAxis)> = match (&args.plane, args.illustration) {
        (Some(s), _) => vec![parse_plane(s)?],
        (None, true) => illustration_planes().to_vec(),
        (None, false) => return Err(ncosc::Error::InvalidPlane("--plane is required without --illustration".into()).into()),
    };
    let grid: GridAxis<f64> = args.grid.parse()?;
    let fixed = match &args.fixed {
        Some(s) => parse_fixed::<f64>(s)?,
        None => Vec::new(),
    };
    if !fixed.is_empty() && planes.len() > 1 {
        return Err(ncosc::Error::InvalidPlane("--fixed needs a single --plane".into()).into());
    }

    // validate every slice before writing anything
    let specs = planes
        .iter()
        .map(|&plane| {
            let fixed = if fixed.is_empty() && args.illustration {
                PhaseAxis::ALL
                    .into_iter()
                    .filter(|a| *a != plane.0 && *a != plane.1)
                    .map(|a| (a, 1.0))
                    .collect()
            } else {
                fixed.clone()
            };
            SliceSpec::new(plane, &fixed, grid, grid)
        })
        .collect::<ncosc::Result<Vec<_>>>()?;

    let mut written = Vec::new();
    for spec in specs {
        let g = project(&form, &spec);
        let stem = format!("{}_{}_{}", args.out, spec.plane.0, spec.plane.1);
        let data_file = format!("{stem}.{}", if args.triples { "dat" } else { "csv" });
        let io_err = |e: &dyn std::fmt::Display| Failure::Io(format!("{data_file}: {e}"));
        let mut w = BufWriter::new(File::create(&data_file).map_err(|e| io_err(&e))?);
        if args.triples {
            g.write_triples(&mut w).map_err(|e| io_err(&e))?;
        } else {
            g.write_csv(&mut w).map_err(|e| io_err(&e))?;
        }
        w.flush()?;
        let record = SliceRecord {
            source,
            meta: g.metadata(&form),
            factorization_defect: g.factorization_defect(),
            data_file: data_file.clone(),
        };
        let meta_file = format!("{stem}.json");
        let f = File::create(&meta_file).map_err(|e| Failure::Io(format!("{meta_file}: {e}")))?;
        serde_json::to_writer_pretty(BufWriter::new(f), &record).map_err(|e| Failure::Io(e.to_string()))?;
        println!("{data_file} {meta_file}");
        written.push(record);
    }
    eprintln!("wrote {} slice(s)", written.len());
    Ok(())
}
