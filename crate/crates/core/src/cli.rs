//! Command-line front end. Every subcommand produces one [`OutputDocument`]
//! of equal-length numeric columns, printed as JSON (default) or CSV.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure.

use crate::actionangle::{action_of_energy, quantized_spectrum, PotentialKind, PotentialSpec};
use crate::coherent::{dim_for_tail, expectations, number_distribution, CoherentFamily};
use crate::error::Error;
use crate::hilbert::{coherent_density, Point, Space};
use crate::physapp::{self, constants};
use crate::repcore::{self, admissible_k, cover_compose, BargmannIndex, CoverElement, CMat};
use crate::specfun::rho_k;
use crate::C64;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub const SCHEMA: &str = "su11-oscillator/1";
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema: String,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub columns: Vec<Column>,
    pub metadata: BTreeMap<String, Value>,
}

impl OutputDocument {
    fn new(command: &str, settings: &Settings) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        metadata.insert("settings".into(), serde_json::to_value(settings).unwrap_or(Value::Null));
        OutputDocument { schema: SCHEMA.into(), command: command.into(), params: BTreeMap::new(), columns: vec![], metadata }
    }

    fn param(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.params.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    fn column(&mut self, name: &str, values: Vec<f64>) -> &mut Self {
        // normalize -0 so output does not depend on rounding paths
        let values = values.into_iter().map(|v| if v == 0.0 { 0.0 } else { v }).collect();
        self.columns.push(Column { name: name.into(), values });
        self
    }

    fn scalar(&mut self, name: &str, v: f64) -> &mut Self {
        self.column(name, vec![v])
    }

    pub fn column_values(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.schema != SCHEMA {
            return Err(format!("unknown schema '{}'", self.schema));
        }
        if self.command.is_empty() {
            return Err("empty command".into());
        }
        if !self.metadata.contains_key("version") {
            return Err("metadata lacks version".into());
        }
        if let Some(first) = self.columns.first() {
            if self.columns.iter().any(|c| c.values.len() != first.values.len()) {
                return Err("columns have unequal lengths".into());
            }
        }
        let mut names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err("duplicate column name".into());
        }
        if self.columns.iter().flat_map(|c| &c.values).any(|v| !v.is_finite()) {
            return Err("non-finite value".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(",");
        out.push('\n');
        let rows = self.columns.first().map_or(0, |c| c.values.len());
        for r in 0..rows {
            let row: Vec<String> = self.columns.iter().map(|c| format_number(c.values[r])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip text, switching to exponent form for very small or
/// large magnitudes. Never locale dependent.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Parse and validate a JSON document.
pub fn parse_document(s: &str) -> std::result::Result<OutputDocument, String> {
    let doc: OutputDocument = serde_json::from_str(s).map_err(|e| e.to_string())?;
    doc.validate()?;
    Ok(doc)
}

/// Tolerances and truncation defaults, overridable by `--config`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub dim: usize,
    pub points: usize,
    pub rep_tol: f64,
    pub coherent_tail: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { dim: 64, points: 201, rep_tol: 1e-12, coherent_tail: 1e-12 }
    }
}

impl Settings {
    pub fn from_config(text: &str) -> std::result::Result<Self, String> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
            let (key, val) = (key.trim(), val.trim());
            let bad = |e: &dyn std::fmt::Display| format!("config line {}: {key}: {e}", lineno + 1);
            match key {
                "dim" => s.dim = val.parse().map_err(|e| bad(&e))?,
                "points" => s.points = val.parse().map_err(|e| bad(&e))?,
                "rep_tol" => s.rep_tol = val.parse().map_err(|e| bad(&e))?,
                "coherent_tail" => s.coherent_tail = val.parse().map_err(|e| bad(&e))?,
                _ => return Err(format!("config line {}: unknown key '{key}'", lineno + 1)),
            }
        }
        if s.dim < 4 || s.points < 2 || !(s.rep_tol > 0.0) || !(s.coherent_tail > 0.0 && s.coherent_tail < 1.0) {
            return Err("config values out of range".into());
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "su11", version, about = "Tables and curves for the SU(1,1) quantized oscillator")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// key=value file with dim, points, rep_tol, coherent_tail
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Args)]
struct KArg {
    /// Bargmann index k > 0
    #[arg(long)]
    k: f64,
}

#[derive(Debug, Args)]
struct ParamArg {
    #[arg(long, default_value = "bg")]
    family: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    im: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energy ladder hbar omega (n + k)
    Spectrum {
        #[command(flatten)]
        k: KArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Commutator and Casimir residuals of the truncated representation
    RepCheck {
        #[command(flatten)]
        k: KArg,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Number distribution or expectation values of a coherent state
    Coherent {
        #[command(flatten)]
        k: KArg,
        #[command(flatten)]
        param: ParamArg,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        expectations: bool,
    },
    /// Bessel ratio rho_k(z) at one point or on a grid
    Rho {
        #[command(flatten)]
        k: KArg,
        #[arg(long)]
        z: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        z_min: f64,
        #[arg(long, default_value_t = 10.0)]
        z_max: f64,
    },
    /// Action variable of a 1-d potential, or its quantized spectrum
    Action {
        #[arg(long)]
        potential: String,
        #[arg(long, default_value_t = 1.0)]
        v0: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        /// Comma-separated dimensionless energies
        #[arg(long, value_delimiter = ',')]
        energies: Vec<f64>,
        /// Quantize with this Bargmann index instead
        #[arg(long)]
        quantize_k: Option<f64>,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Coherent-state probability density on a realization space
    Density {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        k: KArg,
        #[command(flatten)]
        param: ParamArg,
        /// Upper end of the half-line grid
        #[arg(long, default_value_t = 20.0)]
        u_max: f64,
    },
    /// Canonical thermodynamics at beta hbar omega
    Thermo {
        #[arg(long)]
        beta_hw: f64,
        #[command(flatten)]
        k: KArg,
    },
    /// Landau levels hbar |qB|/m (n + k)
    Landau {
        #[arg(long, allow_negative_numbers = true)]
        charge: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long)]
        mass: f64,
        #[command(flatten)]
        k: KArg,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Stark-shifted effective index (SI inputs)
    Stark {
        #[command(flatten)]
        k: KArg,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        charge: i32,
        /// Field strength in V/m
        #[arg(long)]
        e0: f64,
        /// Oscillator frequency in Hz
        #[arg(long)]
        nu: f64,
        /// Rest energy in J
        #[arg(long, conflicts_with = "rest_energy_gev")]
        rest_energy: Option<f64>,
        /// Rest energy in GeV
        #[arg(long)]
        rest_energy_gev: Option<f64>,
    },
    /// Cutoff vacuum energy density, or the k reaching a target density
    Vacuum {
        #[arg(long)]
        k: Option<f64>,
        /// Cutoff angular frequency in rad/s
        #[arg(long, conflicts_with = "ell")]
        omega_hat: Option<f64>,
        /// Cutoff length in m
        #[arg(long)]
        ell: Option<f64>,
        /// Target density; solves for k at the given length
        #[arg(long, conflicts_with = "k")]
        target: Option<f64>,
        #[arg(long, value_enum, default_value = "si")]
        unit: DensityUnit,
    },
    /// Extract k from two isotope transition frequencies
    Mulliken {
        #[arg(long, allow_negative_numbers = true)]
        ea: f64,
        #[arg(long, allow_negative_numbers = true)]
        eb: f64,
        #[arg(long)]
        omega1: f64,
        #[arg(long)]
        omega2: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega_a1: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega_b2: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
    },
    /// Covering-group composition, or admissible k for an m-fold cover
    Cover {
        /// gamma_re,gamma_im,omega
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        g1: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        g2: Option<Vec<f64>>,
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DensityUnit {
    /// J m^-3
    Si,
    /// keV cm^-3
    KevCm3,
}

impl DensityUnit {
    fn joules_per_m3(self) -> f64 {
        match self {
            DensityUnit::Si => 1.0,
            DensityUnit::KevCm3 => 1e3 * constants::EV * 1e6,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type Out = std::result::Result<OutputDocument, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn bk(k: f64) -> std::result::Result<BargmannIndex, Failure> {
    BargmannIndex::new(k).map_err(|e| usage(e.to_string()))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Run the command line `argv` (including the program name).
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let text = e.render().to_string();
            return match e.kind() {
                DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand if e.exit_code() == 0 => {
                    RunOutput { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let settings = match &cli.config {
        None => Ok(Settings::default()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))
            .and_then(|t| Settings::from_config(&t)),
    };
    let settings = match settings {
        Ok(s) => s,
        Err(msg) => return RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    match dispatch(&cli.cmd, &settings) {
        Ok(doc) => {
            if let Err(msg) = doc.validate() {
                return RunOutput { code: EXIT_NUMERIC, stdout: String::new(), stderr: format!("error: {msg}\n") };
            }
            let stdout = match cli.format {
                Format::Json => doc.to_json() + "\n",
                Format::Csv => doc.to_csv(),
            };
            RunOutput { code: EXIT_OK, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => RunOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Numeric(msg)) => {
            RunOutput { code: EXIT_NUMERIC, stdout: String::new(), stderr: format!("numerical failure: {msg}\n") }
        }
    }
}

fn dispatch(cmd: &Command, s: &Settings) -> Out {
    match cmd {
        Command::Spectrum { k, n, omega, hbar } => {
            let sp = repcore::spectrum(bk(k.k)?, *n, *omega, *hbar);
            let mut d = OutputDocument::new("spectrum", s);
            d.param("k", k.k).param("n", n).param("omega", omega).param("hbar", hbar);
            d.column("n", (0..=*n).map(|i| i as f64).collect()).column("energy", sp.levels);
            Ok(d)
        }
        Command::RepCheck { k, dim } => rep_check(bk(k.k)?, dim.unwrap_or(s.dim), s),
        Command::Coherent { k, param, n_max, expectations: ex } => coherent_cmd(bk(k.k)?, param, *n_max, *ex, s),
        Command::Rho { k, z, z_min, z_max } => {
            let zs = match z {
                Some(z) => vec![*z],
                None => linspace(*z_min, *z_max, s.points),
            };
            let vals = zs.iter().map(|&z| rho_k(k.k, z)).collect::<crate::Result<Vec<_>>>()?;
            let mut d = OutputDocument::new("rho", s);
            d.param("k", k.k);
            match z {
                Some(z) => d.param("z", z),
                None => d.param("z_min", z_min).param("z_max", z_max),
            };
            d.column("z", zs).column("rho", vals);
            Ok(d)
        }
        Command::Action { potential, v0, a, mass, energies, quantize_k, n_max } => {
            let kind: PotentialKind = potential.parse().map_err(|e: Error| usage(e.to_string()))?;
            let pot = PotentialSpec::new(kind, *v0, *a, *mass).map_err(|e| usage(e.to_string()))?;
            let mut d = OutputDocument::new("action", s);
            d.param("potential", potential).param("v0", v0).param("a", a).param("mass", mass);
            if let Some(kq) = quantize_k {
                let q = quantized_spectrum(&pot, bk(*kq)?, *n_max, 1.0)?;
                d.param("k", kq).param("n_max", n_max).param("omega0", pot.omega0());
                d.column("n", (0..=*n_max).map(|i| i as f64).collect())
                    .column("energy", q.levels)
                    .column("valid", q.valid.iter().map(|&b| b as u8 as f64).collect());
            } else {
                if energies.is_empty() {
                    return Err(usage("action needs --energies or --quantize-k"));
                }
                let vals = energies.iter().map(|&e| action_of_energy(&pot, e)).collect::<crate::Result<Vec<_>>>()?;
                d.param("energies", energies);
                d.column("energy", energies.clone())
                    .column("action_quadrature", vals.iter().map(|v| v.quadrature).collect())
                    .column("action_closed", vals.iter().map(|v| v.closed_form).collect());
            }
            Ok(d)
        }
        Command::Density { space, k, param, u_max } => density_cmd(space, bk(k.k)?, param, *u_max, s),
        Command::Thermo { beta_hw, k } => {
            let r = physapp::thermo(*beta_hw, bk(k.k)?).map_err(|e| usage(e.to_string()))?;
            let h = 1e-3 * beta_hw.max(0.2);
            let f = |b: f64| physapp::ln_partition(b, k.k);
            let x = *beta_hw;
            let fd = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
            let mut d = OutputDocument::new("thermo", s);
            d.param("beta_hw", beta_hw).param("k", k.k);
            d.scalar("Z", r.Z)
                .scalar("F", r.F)
                .scalar("U", r.U)
                .scalar("dE2", r.dE2)
                .scalar("S_over_kB", r.S_over_kB)
                .scalar("entropy_identity_residual", r.entropy_identity_residual())
                .scalar("fluctuation_fd_residual", r.dE2 - fd);
            Ok(d)
        }
        Command::Landau { charge, b, mass, k, n_max, hbar } => {
            let l = physapp::landau_levels(*charge, *b, *mass, bk(k.k)?, *n_max, *hbar).map_err(|e| usage(e.to_string()))?;
            let mut d = OutputDocument::new("landau", s);
            d.param("charge", charge).param("b", b).param("mass", mass).param("k", k.k).param("hbar", hbar);
            d.param("omega", l.omega);
            d.column("n", (0..=*n_max).map(|i| i as f64).collect()).column("energy", l.levels);
            Ok(d)
        }
        Command::Stark { k, charge, e0, nu, rest_energy, rest_energy_gev } => {
            let rest = match (rest_energy, rest_energy_gev) {
                (Some(j), _) => *j,
                (None, Some(g)) => g * 1e9 * constants::EV,
                (None, None) => return Err(usage("stark needs --rest-energy or --rest-energy-gev")),
            };
            if !(rest > 0.0 && *nu > 0.0) {
                return Err(usage("rest energy and frequency must be positive"));
            }
            let st = physapp::stark_effective_k(k.k, *charge, *e0, 2.0 * PI * nu, rest);
            let mut d = OutputDocument::new("stark", s);
            d.param("k", k.k).param("charge", charge).param("e0", e0).param("nu", nu).param("rest_energy", rest);
            d.scalar("delta", st.delta).scalar("k_eff", st.k_eff).scalar("nonpositive", st.nonpositive as u8 as f64);
            Ok(d)
        }
        Command::Vacuum { k, omega_hat, ell, target, unit } => {
            let scale = unit.joules_per_m3();
            let mut d = OutputDocument::new("vacuum", s);
            d.param("unit", format!("{unit:?}").to_lowercase());
            match (k, omega_hat, ell, target) {
                (Some(k), Some(w), None, None) if *k >= 0.0 && *w > 0.0 => {
                    d.param("k", k).param("omega_hat", w);
                    d.scalar("ell", physapp::cutoff_length(*w))
                        .scalar("density", physapp::vacuum_energy_density(*w, *k) / scale);
                }
                (Some(k), None, Some(l), None) if *k >= 0.0 && *l > 0.0 => {
                    d.param("k", k).param("ell", l);
                    d.scalar("ell", *l).scalar("density", physapp::vacuum_energy_density_ell(*l, *k) / scale);
                }
                (None, None, Some(l), Some(t)) if *l > 0.0 && *t > 0.0 => {
                    d.param("target", t).param("ell", l);
                    d.scalar("ell", *l).scalar("k", physapp::solve_k_for_density(t * scale, *l));
                }
                _ => return Err(usage("vacuum needs --k with --omega-hat or --ell, or --target with --ell (all positive)")),
            }
            Ok(d)
        }
        Command::Mulliken { ea, eb, omega1, omega2, omega_a1, omega_b2, hbar } => {
            let k = physapp::mulliken_extract_k(*ea, *eb, *omega1, *omega2, *omega_a1, *omega_b2, *hbar)?;
            let mut d = OutputDocument::new("mulliken", s);
            d.param("ea", ea).param("eb", eb).param("omega1", omega1).param("omega2", omega2);
            d.param("omega_a1", omega_a1).param("omega_b2", omega_b2).param("hbar", hbar);
            d.scalar("k", k);
            Ok(d)
        }
        Command::Cover { g1, g2, m } => cover_cmd(g1.as_deref(), g2.as_deref(), *m, s),
    }
}

fn rep_check(k: BargmannIndex, dim: usize, s: &Settings) -> Out {
    if dim < 4 {
        return Err(usage("rep-check needs dim >= 4"));
    }
    let r = repcore::build_rep(k, dim, 1.0, 1.0)?;
    let eye = CMat::identity(dim, dim);
    let i = C64::new(0.0, 1.0);
    let res = |m: CMat| repcore::max_abs(&repcore::interior(&m));
    let checks = [
        ("k0_kplus", res(repcore::commutator(&r.k0, &r.kplus) - &r.kplus)),
        ("k0_kminus", res(repcore::commutator(&r.k0, &r.kminus) + &r.kminus)),
        ("kplus_kminus", res(repcore::commutator(&r.kplus, &r.kminus) + &r.k0 * C64::new(2.0, 0.0))),
        ("a_adag", res(repcore::commutator(&r.a, &r.adag) - &eye)),
        ("q_p", res(repcore::commutator(&r.q, &r.p) - &eye * i)),
        ("casimir", res(r.casimir() - &eye * C64::new(k.casimir(), 0.0))),
    ];
    // one ulp of the largest K+K- entry bounds the cancellation error
    let tol = s.rep_tol.max(1e-15 * repcore::max_abs(&(&r.kplus * &r.kminus)));
    let worst = checks.iter().fold(0.0f64, |a, c| a.max(c.1));
    if worst > tol {
        let names: Vec<_> = checks.iter().filter(|c| c.1 > tol).map(|c| format!("{}={:e}", c.0, c.1)).collect();
        return Err(Failure::Numeric(format!("residuals above {tol:e}: {}", names.join(", "))));
    }
    let mut d = OutputDocument::new("rep-check", s);
    d.param("k", k.value()).param("dim", dim).param("tolerance", tol);
    for (name, v) in checks {
        d.scalar(name, v);
    }
    Ok(d)
}

fn family_and_param(p: &ParamArg) -> std::result::Result<(CoherentFamily, C64), Failure> {
    let fam: CoherentFamily = p.family.parse().map_err(|e: Error| usage(e.to_string()))?;
    Ok((fam, C64::new(p.re, p.im)))
}

fn coherent_cmd(k: BargmannIndex, p: &ParamArg, n_max: Option<usize>, ex: bool, s: &Settings) -> Out {
    let (fam, z) = family_and_param(p)?;
    let mut d = OutputDocument::new("coherent", s);
    d.param("k", k.value()).param("family", &p.family).param("re", p.re).param("im", p.im);
    if ex {
        let r = expectations(fam, k, z)?;
        d.scalar("mean_k0", r.mean_k0)
            .scalar("mean_k1", r.mean_k1)
            .scalar("mean_k2", r.mean_k2)
            .scalar("mean_n", r.mean_n)
            .scalar("var_k0", r.var_k0)
            .scalar("var_k1", r.var_k1)
            .scalar("var_k2", r.var_k2);
        return Ok(d);
    }
    let n_max = match n_max {
        Some(n) => n,
        None => dim_for_tail(fam, k, z, s.coherent_tail)?.saturating_sub(1),
    };
    let probs = number_distribution(fam, k, z, n_max)?;
    d.param("n_max", n_max);
    d.column("n", (0..=n_max).map(|i| i as f64).collect()).column("probability", probs);
    Ok(d)
}

fn density_cmd(space: &str, k: BargmannIndex, p: &ParamArg, u_max: f64, s: &Settings) -> Out {
    let sp: Space = space.parse().map_err(|e: Error| usage(e.to_string()))?;
    let (fam, z) = family_and_param(p)?;
    let n = s.points;
    let (xs, pts): (Vec<f64>, Vec<Point>) = match sp {
        Space::CircleHalf | Space::CircleWeighted => {
            let xs: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
            let pts = xs.iter().map(|&t| Point::Angle(t)).collect();
            (xs, pts)
        }
        Space::Disc => {
            let xs = linspace(-0.99, 0.99, n);
            let pts = xs.iter().map(|&x| Point::Disc(C64::new(x, 0.0))).collect();
            (xs, pts)
        }
        Space::HalfLine => {
            if !(u_max > 0.0) {
                return Err(usage("--u-max must be positive"));
            }
            let xs: Vec<f64> = (1..=n).map(|i| u_max * i as f64 / n as f64).collect();
            let pts = xs.iter().map(|&u| Point::Line(u)).collect();
            (xs, pts)
        }
    };
    let vals = pts.iter().map(|&pt| coherent_density(sp, fam, k, z, pt)).collect::<crate::Result<Vec<_>>>()?;
    let mut d = OutputDocument::new("density", s);
    d.param("space", space).param("k", k.value()).param("family", &p.family).param("re", p.re).param("im", p.im);
    if sp == Space::HalfLine {
        d.param("u_max", u_max);
    }
    let axis = match sp {
        Space::CircleHalf | Space::CircleWeighted => "theta",
        Space::Disc => "x",
        Space::HalfLine => "u",
    };
    d.column(axis, xs).column("density", vals);
    Ok(d)
}

fn cover_element(v: &[f64]) -> std::result::Result<CoverElement, Failure> {
    if v.len() != 3 {
        return Err(usage("cover elements are given as gamma_re,gamma_im,omega"));
    }
    CoverElement::new(C64::new(v[0], v[1]), v[2]).map_err(|e| usage(e.to_string()))
}

fn cover_cmd(g1: Option<&[f64]>, g2: Option<&[f64]>, m: Option<usize>, s: &Settings) -> Out {
    let mut d = OutputDocument::new("cover", s);
    match (g1, g2, m) {
        (Some(a), Some(b), None) => {
            let (e1, e2) = (cover_element(a)?, cover_element(b)?);
            let g = cover_compose(&e2, &e1);
            let defect = repcore::max_abs2(&(g.to_su11() - e2.to_su11() * e1.to_su11()));
            d.param("g1", a).param("g2", b);
            d.scalar("gamma_re", g.gamma.re)
                .scalar("gamma_im", g.gamma.im)
                .scalar("omega", g.omega)
                .scalar("homomorphism_defect", defect);
            Ok(d)
        }
        (None, None, Some(m)) => {
            let a = admissible_k(m).map_err(|e| usage(e.to_string()))?;
            d.param("m", m).param("k_min", a.min);
            d.column("mu", (1..=a.first.len()).map(|i| i as f64).collect()).column("k", a.first);
            Ok(d)
        }
        _ => Err(usage("cover needs --g1 and --g2, or --m")),
    }
}
