mod commands;
mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qm_core::verify::{self, VerifyConfig, DEFAULT_SEED};

use commands::*;
use table::{Format, Table};

#[derive(Parser, Debug)]
#[command(name = "qq", version, about = "Quantum mechanics toolkit: tables and self-checks")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Seed for Monte Carlo commands.
    #[arg(long, global = true, env = "QQ_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Qubit states along a meridian of the Bloch sphere.
    Bloch(BlochArgs),
    /// Inner products among the six cube states.
    BasisTables(BasisTablesArgs),
    /// Amplitudes of the Bell, GHZ and W states.
    BellStates(BellStatesArgs),
    /// Reduced density matrices by three methods.
    PartialTrace(PartialTraceArgs),
    /// Single-particle ring spectrum, closed form vs diagonalization.
    Dispersion(DispersionArgs),
    /// Three-site ring propagator element ⟨j|U(t)|k⟩.
    RingPropagator(RingPropagatorArgs),
    /// Rabi excitation probability.
    Rabi(RabiArgs),
    /// Berry phase around latitude loops.
    Berry(BerryArgs),
    /// Photon statistics of a coherent state.
    Coherent(CoherentArgs),
    /// Quadrature variances of the squeezed vacuum.
    Squeeze(SqueezeArgs),
    /// Clebsch-Gordan coefficients for j1 ⊗ j2.
    CgTable(CgTableArgs),
    /// Wigner small-d matrix.
    WignerD(WignerDArgs),
    /// Hydrogen levels and radial expectation values.
    Hydrogen(HydrogenArgs),
    /// Linear Stark splitting of n = 2.
    Stark(StarkArgs),
    /// Helium variational energy against effective charge.
    Variational(VariationalArgs),
    /// Sudden-approximation survival probabilities.
    Sudden(SuddenArgs),
    /// WKB levels against finite differences.
    Wkb(WkbArgs),
    /// Singlet correlations, quantum and hidden-variable Monte Carlo.
    Chsh(ChshArgs),
    /// GHZ parity values.
    Ghz(GhzArgs),
    /// Face hidden-variable model against quantum probabilities.
    LhvCurve(LhvCurveArgs),
    /// Lattice Dirac dispersion.
    DiracDispersion(DiracDispersionArgs),
    /// Clifford algebra residuals.
    Clifford(CliffordArgs),
    /// 1D Ising decimation flow.
    RgFlow(RgFlowArgs),
    /// Kramers-Wannier self-dual point.
    DualityTc(DualityTcArgs),
    /// Critical exponents from RG eigenvalues.
    ScalingExponents(ScalingArgs),
    /// Transverse-field Ising gap.
    TfimGap(TfimGapArgs),
    /// Qubit partition function as a classical chain.
    QubitImaginaryTime(ImagTimeArgs),
    /// Wilson-Fisher coupling flow.
    WfFlow(WfFlowArgs),
    /// Run the acceptance checks and print a report.
    VerifyAll(VerifyAllArgs),
}

#[derive(clap::Args, Debug)]
struct VerifyAllArgs {
    /// Restrict to a criterion number (e.g. 15, c15) or a topic (e.g. rg, bell).
    #[arg(long)]
    only: Option<String>,
    /// Monte Carlo samples for the Bell checks.
    #[arg(long, default_value_t = verify::DEFAULT_MC_SAMPLES)]
    samples: usize,
}

fn name_and_params(cmd: &Command) -> (String, String) {
    let dbg = format!("{cmd:?}");
    let variant = dbg.split('(').next().unwrap_or("").to_string();
    let mut kebab = String::new();
    for (i, ch) in variant.chars().enumerate() {
        if ch.is_ascii_uppercase() {
            if i > 0 {
                kebab.push('-');
            }
            kebab.push(ch.to_ascii_lowercase());
        } else {
            kebab.push(ch);
        }
    }
    let params = dbg.strip_prefix(&variant).unwrap_or("").trim_start_matches('(').trim_end_matches(')').to_string();
    (kebab, params)
}

fn table_for(cmd: &Command, seed: u64) -> Result<Table, CliError> {
    match cmd {
        Command::Bloch(a) => bloch(a),
        Command::BasisTables(a) => basis_tables(a),
        Command::BellStates(a) => bell_states(a),
        Command::PartialTrace(a) => partial_trace(a),
        Command::Dispersion(a) => dispersion(a),
        Command::RingPropagator(a) => ring_propagator(a),
        Command::Rabi(a) => rabi(a),
        Command::Berry(a) => berry(a),
        Command::Coherent(a) => coherent(a),
        Command::Squeeze(a) => squeeze(a),
        Command::CgTable(a) => cg_table(a),
        Command::WignerD(a) => wigner_d(a),
        Command::Hydrogen(a) => hydrogen(a),
        Command::Stark(a) => stark(a),
        Command::Variational(a) => variational(a),
        Command::Sudden(a) => sudden(a),
        Command::Wkb(a) => wkb(a),
        Command::Chsh(a) => chsh(a, seed),
        Command::Ghz(a) => ghz(a),
        Command::LhvCurve(a) => lhv_curve(a),
        Command::DiracDispersion(a) => dirac_dispersion(a),
        Command::Clifford(a) => clifford(a),
        Command::RgFlow(a) => rg_flow(a),
        Command::DualityTc(a) => duality_tc(a),
        Command::ScalingExponents(a) => scaling_exponents(a),
        Command::TfimGap(a) => tfim_gap(a),
        Command::QubitImaginaryTime(a) => qubit_imaginary_time(a),
        Command::WfFlow(a) => wf_flow(a),
        Command::VerifyAll(_) => unreachable!("verify-all does not produce a table"),
    }
}

/// Returns the text to emit and whether every check passed.
fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    let (name, params) = name_and_params(&cli.command);
    if let Command::VerifyAll(a) = &cli.command {
        let criteria = match &a.only {
            Some(f) => verify::parse_filter(f)?,
            None => verify::CRITERIA.collect(),
        };
        let cfg = VerifyConfig { seed: cli.seed, mc_samples: a.samples };
        let report = verify::verify(&criteria, &cfg);
        let text = format!("# qq {name}\n# params: {params}\n# seed: {}\n{}", cli.seed, verify::render(&report));
        return Ok((text, report.all_pass()));
    }
    let table = table_for(&cli.command, cli.seed)?;
    if let Some((row, col)) = table.first_non_finite() {
        return Err(CliError::Numeric(format!("non-finite value in column {col}, row {row}")));
    }
    let preamble = [format!("qq {name}"), format!("params: {params}"), format!("seed: {}", cli.seed)];
    Ok((table.render(cli.format, &preamble), true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, ok) = match run(&cli) {
        Ok(v) => v,
        Err(CliError::Usage(m)) => {
            eprintln!("qq: {m}");
            return ExitCode::from(2);
        }
        Err(CliError::Numeric(m)) => {
            eprintln!("qq: {m}");
            return ExitCode::from(1);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("qq: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
