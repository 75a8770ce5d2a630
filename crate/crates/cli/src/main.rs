//! `dpa`: closed-form DPA statistics, figure curves and oracle self-checks as CSV.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpa_core::closed_form::{
    amplitude_a, characteristic_function, g2, g2_asymptote, photon_stats, quadrature_variance, snr,
    snr_max,
};
use dpa_core::criteria::{chi_criterion, full_report, min_quadrature_variance, rc88_gap};
use dpa_core::solvers::critical_alpha;
use dpa_core::{Error, FockOracle, GaussianParams, ProbePoint};
use rayon::prelude::*;

const EXIT_DOMAIN: u8 = 3;
const EXIT_NUMERIC: u8 = 4;
const EXIT_NO_SIGN_CHANGE: u8 = 5;
const EXIT_ORACLE: u8 = 6;
const EXIT_OTHER: u8 = 1;

const ORACLE_TOL: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "dpa",
    version,
    about = "Displaced squeezed thermal light in a degenerate parametric amplifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate quantities at a single delay.
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        delay: DelayArgs,
        #[command(flatten)]
        quantities: QuantityArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate quantities on a uniform grid of delays.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        quantities: QuantityArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print the curve of figure N (1-6) as `omega_tau,value`.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=6))]
        n: u8,
        #[command(flatten)]
        overrides: FigureOverrides,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Report every nonclassicality test at one delay.
    Criteria {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        delay: DelayArgs,
        /// Number of λ grid points in [0, π) for the numeric squeezing scan.
        #[arg(long, default_value_t = 360)]
        lambda_grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve for the coherent amplitude at which g²(0) = 1.
    CriticalAlpha {
        #[arg(long)]
        nbar: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare closed forms with the truncated Fock-space oracle on a small grid.
    OracleCheck {
        /// Fock-space dimension.
        #[arg(long, default_value_t = 40)]
        dim: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ParamArgs {
    /// Mean thermal photon number n̄ ≥ 0.
    #[arg(long)]
    nbar: f64,
    /// Squeeze magnitude r > 0.
    #[arg(long)]
    r: f64,
    /// Squeeze phase θ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    /// Coherent amplitude |α|.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Coherent phase φ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    /// Amplifier rate Ω; combined with --tau when --omega-tau is absent.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
}

impl ParamArgs {
    fn build(&self) -> Result<GaussianParams, Error> {
        GaussianParams::new(
            self.nbar, self.r, self.theta, self.alpha, self.phi, self.omega,
        )
    }
}

#[derive(Args)]
struct DelayArgs {
    /// Dimensionless delay Ωτ.
    #[arg(long, conflicts_with = "tau", allow_hyphen_values = true)]
    omega_tau: Option<f64>,
    /// Delay τ in units of 1/Ω; multiplied by --omega.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// Quadrature angle λ for mean_x, var_x, uncertainty_product and snr.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
}

impl DelayArgs {
    fn tau_scaled(&self, params: &GaussianParams) -> f64 {
        match (self.omega_tau, self.tau) {
            (Some(x), _) => x,
            (None, Some(t)) => params.scaled_delay(t),
            (None, None) => 0.0,
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tau_min: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    tau_max: f64,
    /// Number of intervals; the grid has steps + 1 rows.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
}

impl RangeArgs {
    fn grid(&self) -> Result<Vec<f64>, Error> {
        if !(self.tau_min.is_finite() && self.tau_min >= 0.0) {
            return Err(domain(
                "tau_min",
                format!("must be finite and >= 0, got {}", self.tau_min),
            ));
        }
        if !(self.tau_max.is_finite() && self.tau_max > self.tau_min) {
            return Err(domain(
                "tau_max",
                format!("must be finite and > tau_min, got {}", self.tau_max),
            ));
        }
        if self.steps < 2 {
            return Err(domain("steps", format!("must be >= 2, got {}", self.steps)));
        }
        let width = self.tau_max - self.tau_min;
        Ok((0..=self.steps)
            .map(|i| self.tau_min + width * i as f64 / self.steps as f64)
            .collect())
    }
}

#[derive(Args)]
struct FigureOverrides {
    #[arg(long)]
    nbar: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
}

#[derive(Args)]
struct QuantityArgs {
    /// Quantity to evaluate; repeat for several columns.
    #[arg(long = "quantity", value_enum)]
    quantities: Vec<Quantity>,
}

impl QuantityArgs {
    fn selected(&self) -> Vec<Quantity> {
        if self.quantities.is_empty() {
            vec![
                Quantity::G2,
                Quantity::MeanN,
                Quantity::VarN,
                Quantity::MandelQ,
            ]
        } else {
            self.quantities.clone()
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    #[value(name = "g2")]
    G2,
    #[value(name = "g2_asymptote")]
    G2Asymptote,
    #[value(name = "mean_n")]
    MeanN,
    #[value(name = "var_n")]
    VarN,
    #[value(name = "mandel_q")]
    MandelQ,
    #[value(name = "mean_x")]
    MeanX,
    #[value(name = "var_x")]
    VarX,
    #[value(name = "var_x_min")]
    VarXMin,
    #[value(name = "uncertainty_product")]
    UncertaintyProduct,
    #[value(name = "snr")]
    Snr,
    #[value(name = "snr_max")]
    SnrMax,
    #[value(name = "chi_criterion")]
    ChiCriterion,
    #[value(name = "rc88_gap")]
    Rc88Gap,
}

impl Quantity {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_owned()
    }

    fn eval(self, p: &GaussianParams, tau: f64, lambda: f64) -> Result<f64, Error> {
        match self {
            Quantity::G2 => g2(p, tau),
            Quantity::G2Asymptote => g2_asymptote(p),
            Quantity::MeanN => Ok(photon_stats(p, tau)?.mean_n),
            Quantity::VarN => Ok(photon_stats(p, tau)?.var_n),
            Quantity::MandelQ => Ok(photon_stats(p, tau)?.mandel_q),
            Quantity::MeanX => Ok(quadrature_variance(p, tau, lambda)?.mean_x),
            Quantity::VarX => Ok(quadrature_variance(p, tau, lambda)?.var_x),
            Quantity::VarXMin => min_quadrature_variance(p, tau),
            Quantity::UncertaintyProduct => {
                Ok(quadrature_variance(p, tau, lambda)?.uncertainty_product)
            }
            Quantity::Snr => snr(p, tau, lambda),
            Quantity::SnrMax => snr_max(p, tau),
            Quantity::ChiCriterion => Ok(chi_criterion(p, tau)?.value),
            Quantity::Rc88Gap => rc88_gap(p, tau),
        }
    }
}

fn domain(field: &'static str, reason: String) -> Error {
    Error::Domain { field, reason }
}

/// 17 significant digits, '.' separator regardless of locale.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn table(
    quantities: &[Quantity],
    p: &GaussianParams,
    taus: &[f64],
    lambda: f64,
) -> Result<String, Error> {
    let rows: Vec<Result<String, Error>> = taus
        .par_iter()
        .map(|&tau| {
            let mut row = num(tau);
            for q in quantities {
                row.push(',');
                row.push_str(&num(q.eval(p, tau, lambda)?));
            }
            Ok(row)
        })
        .collect();
    let mut csv = String::from("omega_tau");
    for q in quantities {
        csv.push(',');
        csv.push_str(&q.name());
    }
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }
    Ok(csv)
}

fn figure(n: u8, o: &FigureOverrides, range: &RangeArgs) -> Result<String, Error> {
    // Figures come in pairs: 1/3 plot g², 2/4 the RC88 gap, 5/6 Mandel Q.
    let (alpha, quantity) = match n {
        1 => (5.0, Quantity::G2),
        2 => (5.0, Quantity::Rc88Gap),
        3 => (0.45, Quantity::G2),
        4 => (0.45, Quantity::Rc88Gap),
        5 => (5.0, Quantity::MandelQ),
        _ => (0.45, Quantity::MandelQ),
    };
    let p = GaussianParams::new(
        o.nbar.unwrap_or(0.1),
        o.r.unwrap_or(0.1),
        o.theta.unwrap_or(0.0),
        o.alpha.unwrap_or(alpha),
        o.phi.unwrap_or(0.0),
        1.0,
    )?;
    let body = table(&[quantity], &p, &range.grid()?, range.lambda)?;
    Ok(body.replacen(&quantity.name(), "value", 1))
}

fn criteria(p: &GaussianParams, tau: f64, grid: usize) -> Result<String, Error> {
    let r = full_report(p, tau, grid)?;
    let mut csv = String::from(
        "omega_tau,sub_poissonian,antibunched,rc88_nonclassical,quadrature_squeezed,min_var_x,grid_min_var_x,\
         chi_criterion,chi_nonclassical,mandel_q,mandel_nonclassical\n",
    );
    let _ = writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{},{},{}",
        num(r.tau_scaled),
        r.sub_poissonian,
        r.antibunched_at_tau,
        r.rc88_nonclassical_at_tau,
        r.quadrature_squeezed,
        num(r.min_quadrature_variance),
        num(r.grid_quadrature_variance),
        num(r.chi_criterion_value),
        r.chi_nonclassical,
        num(r.mandel_q),
        r.mandel_nonclassical
    );
    Ok(csv)
}

#[derive(Default)]
struct OracleDeltas {
    amplitude: f64,
    chi: f64,
    mean_x: f64,
    var_x: f64,
    mean_n: f64,
    var_n: f64,
    g2: f64,
}

impl OracleDeltas {
    fn rows(&self) -> [(&'static str, f64); 7] {
        [
            ("amplitude", self.amplitude),
            ("chi", self.chi),
            ("mean_x", self.mean_x),
            ("var_x", self.var_x),
            ("mean_n", self.mean_n),
            ("var_n", self.var_n),
            ("g2", self.g2),
        ]
    }
}

fn oracle_grid() -> Vec<GaussianParams> {
    let mut grid = Vec::new();
    for nbar in [0.0, 0.1, 0.5] {
        for r in [0.05, 0.1] {
            for alpha in [0.0, 0.5, 1.0] {
                for phi in [0.0, PI / 3.0] {
                    grid.push(
                        GaussianParams::new(nbar, r, 0.0, alpha, phi, 1.0).expect("grid is valid"),
                    );
                }
            }
        }
    }
    grid
}

fn oracle_deltas(p: &GaussianParams, dim: usize) -> Result<OracleDeltas, Error> {
    let oracle = FockOracle::new(p, dim)?;
    let mut d = OracleDeltas::default();
    for tau in [0.0, 0.25, 0.5, 1.0] {
        d.amplitude = d
            .amplitude
            .max((amplitude_a(p, tau)? - oracle.amplitude(tau)?).norm());
        for probe in [
            ProbePoint::new(0.3, 1.0, tau)?,
            ProbePoint::new(0.5, 0.5 * (p.theta + PI), tau)?,
        ] {
            d.chi = d
                .chi
                .max((characteristic_function(p, &probe)? - oracle.char_fn(&probe)?).norm());
        }
        for lambda in [0.0, 0.7] {
            let closed = quadrature_variance(p, tau, lambda)?;
            let brute = oracle.quadrature(tau, lambda)?;
            d.mean_x = d.mean_x.max((closed.mean_x - brute.mean_x).abs());
            d.var_x = d.var_x.max((closed.var_x - brute.var_x).abs());
        }
        let closed = photon_stats(p, tau)?;
        let brute = oracle.photon_stats(tau)?;
        d.mean_n = d.mean_n.max((closed.mean_n - brute.mean_n).abs());
        d.var_n = d.var_n.max((closed.var_n - brute.var_n).abs());
        d.g2 = d.g2.max((g2(p, tau)? - oracle.g2(tau)?).abs());
    }
    Ok(d)
}

/// Returns the CSV table and whether every delta is within tolerance.
fn oracle_check(dim: usize) -> Result<(String, bool), Error> {
    let per_point: Vec<Result<OracleDeltas, Error>> = oracle_grid()
        .par_iter()
        .map(|p| oracle_deltas(p, dim))
        .collect();
    let mut worst = OracleDeltas::default();
    for d in per_point {
        let d = d?;
        worst.amplitude = worst.amplitude.max(d.amplitude);
        worst.chi = worst.chi.max(d.chi);
        worst.mean_x = worst.mean_x.max(d.mean_x);
        worst.var_x = worst.var_x.max(d.var_x);
        worst.mean_n = worst.mean_n.max(d.mean_n);
        worst.var_n = worst.var_n.max(d.var_n);
        worst.g2 = worst.g2.max(d.g2);
    }
    let mut csv = String::from("quantity,max_delta,tolerance,ok\n");
    let mut all_ok = true;
    for (name, delta) in worst.rows() {
        let ok = delta <= ORACLE_TOL;
        all_ok &= ok;
        let _ = writeln!(csv, "{name},{},{},{ok}", num(delta), num(ORACLE_TOL));
    }
    Ok((csv, all_ok))
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain { .. } => EXIT_DOMAIN,
        Error::Overflow { .. } | Error::Truncation { .. } => EXIT_NUMERIC,
        Error::NoSignChange { .. } => EXIT_NO_SIGN_CHANGE,
        _ => EXIT_OTHER,
    }
}

fn emit(out: &OutArgs, text: &str) -> io::Result<()> {
    match &out.out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match &cli.command {
        Command::Eval {
            params,
            delay,
            quantities,
            out,
        } => (
            params.build().and_then(|p| {
                let tau = delay.tau_scaled(&p);
                table(&quantities.selected(), &p, &[tau], delay.lambda).map(|s| (s, true))
            }),
            out,
        ),
        Command::Sweep {
            params,
            range,
            quantities,
            out,
        } => (
            params.build().and_then(|p| {
                table(&quantities.selected(), &p, &range.grid()?, range.lambda).map(|s| (s, true))
            }),
            out,
        ),
        Command::Figure {
            n,
            overrides,
            range,
            out,
        } => (figure(*n, overrides, range).map(|s| (s, true)), out),
        Command::Criteria {
            params,
            delay,
            lambda_grid,
            out,
        } => (
            params
                .build()
                .and_then(|p| criteria(&p, delay.tau_scaled(&p), *lambda_grid).map(|s| (s, true))),
            out,
        ),
        Command::CriticalAlpha {
            nbar,
            r,
            theta,
            phi,
            out,
        } => (
            critical_alpha(*nbar, *r, *theta, *phi).map(|root| {
                (
                    format!(
                        "alpha_c,residual,iterations\n{:.10},{},{}\n",
                        root.location,
                        num(root.residual),
                        root.iterations
                    ),
                    true,
                )
            }),
            out,
        ),
        Command::OracleCheck { dim, out } => (oracle_check(*dim), out),
    };

    match result {
        Ok((text, ok)) => {
            if let Err(err) = emit(out, &text) {
                eprintln!("error: writing output: {err}");
                return ExitCode::from(EXIT_OTHER);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: oracle deltas exceed tolerance {ORACLE_TOL:e}");
                ExitCode::from(EXIT_ORACLE)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
