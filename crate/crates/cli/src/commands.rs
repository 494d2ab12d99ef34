//! Command bodies. Each turns a resolved config into a results table.

use std::fmt;

use qentangle_core::area_law::{
    area_check_table, area_table, block_entropy_scan, contiguous_partitions, mutual_info_area_check, purity_via_swap, SwapMode,
};
use qentangle_core::measures::{
    concurrence_2q, entanglement_entropy, mes_fidelity, mutual_information_between, negativity, product_distance, renyi_entropy,
    schmidt_decompose, von_neumann, FidelityOptions,
};
use qentangle_core::models::{
    build_model, dimer_state, gibbs_state, ground_state, overlap_scan, overlap_table, pair_table, two_site_entanglement_scan, Boundary,
    ModelKind, ModelSpec,
};
use qentangle_core::mps::{io::write_mps, variational_ground_search, VariationalOptions};
use qentangle_core::protocols::{chsh_play, filter_distill, DistillMode, GameMode, GameStrategy};
use qentangle_core::state::io::{read_density, read_pure};
use qentangle_core::table::{Cell, Table};
use qentangle_core::{DensityOperator, Error, PureState, RegionPartition, SiteSpace, State};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{CommandKind, ConfigError, RunConfig};

/// Failure of a run, mapped onto the exit code contract.
#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Core(Error),
    Io(String),
    /// The run finished but a checked inequality or identity failed.
    Validation(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io(_) => 2,
            RunError::Core(Error::Capacity(_)) => 3,
            RunError::Core(Error::Numerical(_)) | RunError::Validation(_) => 4,
            RunError::Core(_) => 2,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "{e}"),
            RunError::Validation(e) => write!(f, "validation failed: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Core(e)
    }
}

/// Results of one command plus an optional failed check.
pub struct Outcome {
    pub table: Table,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self { table, failure: None }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, RunError> {
    match cfg.command {
        CommandKind::Measure => measure(cfg),
        CommandKind::ScanArea => scan_area(cfg),
        CommandKind::ScanTransition => scan_transition(cfg),
        CommandKind::Chsh => chsh(cfg),
        CommandKind::Distill => distill(cfg),
        CommandKind::MpsSolve => mps_solve(cfg),
        CommandKind::SwapPurity => swap_purity(cfg),
    }
}

fn model_spec(cfg: &RunConfig) -> ModelSpec {
    let kind = ModelKind::parse(cfg.text("model")).expect("model choice is validated");
    let mut spec = ModelSpec::new(kind, cfg.usize("n"));
    if let Some(b) = cfg.get("b").map(|_| cfg.float("b")) {
        spec = spec.with_field(b);
    }
    if cfg.text("boundary") == "open" {
        spec.boundary = Boundary::Open;
    }
    spec
}

enum Prepared {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl Prepared {
    fn as_state(&self) -> &dyn State {
        match self {
            Prepared::Pure(p) => p,
            Prepared::Mixed(r) => r,
        }
    }
}

fn prepare(cfg: &RunConfig) -> Result<Prepared, RunError> {
    let n = cfg.usize("n");
    let pure = match cfg.text("state") {
        "ghz" => PureState::ghz(n)?,
        "w" => PureState::w(n)?,
        "bell" => {
            if n != 2 {
                return Err(ConfigError { key: "n".into(), message: format!("state = bell has 2 sites, got n = {n}") }.into());
            }
            PureState::phi_plus()
        }
        "random" => PureState::random(SiteSpace::qubits(n)?, &mut ChaCha8Rng::seed_from_u64(cfg.seed())),
        "ground" => ground_state(&build_model(&model_spec(cfg))?)?.even_ground_vector().clone(),
        "dimer" => dimer_state(n, 0)?,
        "gibbs" => return Ok(Prepared::Mixed(gibbs_state(&build_model(&model_spec(cfg))?, cfg.float("t"))?)),
        "file" => {
            let path = cfg.text("input");
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError { key: "input".into(), message: format!("{path}: {e}") })?;
            let state = match read_pure(&text) {
                Ok(p) => Prepared::Pure(p),
                Err(_) => Prepared::Mixed(read_density(&text)?),
            };
            if state.as_state().space().n_sites() != n {
                return Err(ConfigError {
                    key: "n".into(),
                    message: format!("{path} holds {} sites, but n = {n}", state.as_state().space().n_sites()),
                }
                .into());
            }
            return Ok(state);
        }
        other => unreachable!("state `{other}` is validated"),
    };
    Ok(Prepared::Pure(pure))
}

fn region_partition(cfg: &RunConfig) -> Result<RegionPartition, RunError> {
    Ok(RegionPartition::chain(cfg.usize("n"), cfg.list("region"))?)
}

fn reduced(state: &dyn State, sites: &[usize]) -> Result<DensityOperator, RunError> {
    let space = state.space().restrict(sites)?;
    Ok(DensityOperator::new(space, state.reduced_matrix(sites)?)?)
}

fn measure(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let state = prepare(cfg)?;
    let part = region_partition(cfg)?;
    let (a, b) = (part.region_a(), part.region_b());
    let mut table = Table::new(&["measure", "value"]);
    let mut row = |name: &str, v: f64| table.push(vec![Cell::Text(name.into()), Cell::Num(v)]);
    let rho_a = reduced(state.as_state(), a)?;
    match &state {
        Prepared::Pure(psi) => {
            let schmidt = schmidt_decompose(psi, &part)?;
            row("entanglement_entropy", entanglement_entropy(psi, &part)?);
            row("schmidt_rank", schmidt.coefficients.len() as f64);
            // ‖ρ^{T_A}‖₁ = (Σ_k d_k)² for a pure state.
            let sum: f64 = schmidt.coefficients.iter().sum();
            row("negativity", sum * sum - 1.0);
            if psi.space().n_sites() == 2 && psi.space().is_qubits() {
                row("concurrence", concurrence_2q(psi)?);
            }
        }
        Prepared::Mixed(rho) => {
            row("entropy", von_neumann(rho)?);
            row("negativity", negativity(rho, &part)?);
            row("product_distance", product_distance(rho, &part)?);
        }
    }
    row("renyi2_a", renyi_entropy(&rho_a, 2.0)?);
    row("purity_a", rho_a.purity());
    row("mutual_information", mutual_information_between(state.as_state(), a, b)?);
    let space = state.as_state().space();
    if space.dim_of(a) == space.dim_of(b) {
        let opts = FidelityOptions { seed: cfg.seed(), ..Default::default() };
        row("mes_fidelity", mes_fidelity(state.as_state(), &part, opts)?.fidelity);
    }
    Ok(Outcome::ok(table))
}

fn scan_area(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let h = build_model(&model_spec(cfg))?;
    let blocks = cfg.list("blocks");
    match cfg.opt_float("t") {
        None => {
            // The periodic Majumdar-Ghosh ground space is spanned by the two
            // dimer coverings; one covering is scanned rather than their
            // symmetric mixture.
            let (psi, tag) = if model_spec(cfg).kind == ModelKind::MajumdarGhosh {
                (dimer_state(cfg.usize("n"), 0)?, "dimer")
            } else {
                (ground_state(&h)?.even_ground_vector().clone(), "ground")
            };
            let records = block_entropy_scan(&psi, h.lattice(), 0, blocks, tag)?;
            Ok(Outcome::ok(area_table(&records)))
        }
        Some(t) => {
            let parts: Vec<RegionPartition> =
                contiguous_partitions(h.lattice())?.into_iter().filter(|p| blocks.contains(&p.region_a().len())).collect();
            let checks = mutual_info_area_check(&h, t, &parts)?;
            let check = cfg.flag("bound-check");
            let failed = checks.iter().filter(|c| !c.pass).count();
            let failure = (check && failed > 0).then(|| format!("{failed} of {} partitions exceed the boundary bound", checks.len()));
            Ok(Outcome { table: area_check_table(&checks, t, check), failure })
        }
    }
}

fn scan_transition(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let spec = model_spec(cfg);
    let grid = cfg.grid("grid");
    let table = match cfg.text("quantity") {
        "overlap" => overlap_table(&overlap_scan(&spec, grid, cfg.float("epsilon"))?),
        _ => {
            let pair = cfg.list("pair");
            pair_table(&two_site_entanglement_scan(&spec, grid, (pair[0], pair[1]))?)
        }
    };
    Ok(Outcome::ok(table))
}

fn chsh(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let strategy = match cfg.text("strategy") {
        "quantum" => GameStrategy::standard_quantum(),
        _ => GameStrategy::best_classical(),
    };
    let rounds = cfg.usize("rounds");
    let mode = if rounds == 0 { GameMode::Analytic } else { GameMode::Sampled { rounds, seed: cfg.seed() } };
    let r = chsh_play(&strategy, mode)?;
    let mut table = Table::new(&["strategy", "mode", "rounds", "seed", "win_probability", "std_error"]);
    table.push(vec![
        Cell::Text(cfg.text("strategy").into()),
        Cell::Text(if rounds == 0 { "analytic" } else { "sampled" }.into()),
        Cell::Int(rounds as i64),
        Cell::Int(cfg.seed() as i64),
        Cell::Num(r.win_probability),
        r.std_error.map_or(Cell::Empty, Cell::Num),
    ]);
    Ok(Outcome::ok(table))
}

fn distill(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let mode = match cfg.text("mode") {
        "both" => DistillMode::BothBranches,
        _ => DistillMode::Sampled(cfg.seed()),
    };
    let theta = cfg.float("theta");
    let mut table = Table::new(&["theta", "label", "probability", "mes_fidelity", "phi_plus_fidelity", "entanglement"]);
    for b in filter_distill(theta, mode)? {
        table.push(vec![
            Cell::Num(theta),
            Cell::Text(b.label),
            Cell::Num(b.probability),
            Cell::Num(b.mes_fidelity),
            Cell::Num(b.phi_plus_fidelity),
            Cell::Num(b.entanglement),
        ]);
    }
    Ok(Outcome::ok(table))
}

fn mps_solve(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let h = build_model(&model_spec(cfg))?;
    let opts = VariationalOptions {
        bond_dim: cfg.usize("bond-dim"),
        max_sweeps: cfg.usize("sweeps"),
        tol: cfg.float("tol"),
        seed: cfg.seed(),
        block: cfg.usize("block"),
    };
    let res = variational_ground_search(&h, &opts)?;
    let exact = if cfg.flag("exact") { Some(ground_state(&h)?.ground_energy) } else { None };
    let mut cols = vec!["sweep", "energy", "max_bond"];
    if exact.is_some() {
        cols.extend(["exact_energy", "error"]);
    }
    let mut table = Table::new(&cols);
    for (k, e) in res.sweep_energies.iter().enumerate() {
        let mut row = vec![Cell::Int(k as i64 + 1), Cell::Num(*e), Cell::Int(res.mps.max_bond() as i64)];
        if let Some(e0) = exact {
            row.extend([Cell::Num(e0), Cell::Num(e - e0)]);
        }
        table.push(row);
    }
    if let Some(path) = cfg.opt_text("save-mps") {
        std::fs::write(path, write_mps(&res.mps)).map_err(|e| RunError::Io(format!("key `save-mps`: {path}: {e}")))?;
    }
    let failure = exact.and_then(|e0| {
        (res.energy < e0 - 1e-9 * e0.abs().max(1.0)).then(|| format!("variational energy {} lies below the exact {e0}", res.energy))
    });
    Ok(Outcome { table, failure })
}

fn swap_purity(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let state = prepare(cfg)?;
    let part = region_partition(cfg)?;
    let rho_a = reduced(state.as_state(), part.region_a())?;
    let exact = purity_via_swap(&rho_a, SwapMode::Exact)?.value;
    let spectrum = rho_a.purity();
    let shots = cfg.usize("shots");
    let sampled = if shots > 0 { Some(purity_via_swap(&rho_a, SwapMode::Sampled { shots, seed: cfg.seed() })?) } else { None };
    let region = part.region_a().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
    let mut table = Table::new(&["region_a", "swap_purity", "spectrum_purity", "renyi2", "sampled_purity", "std_error"]);
    table.push(vec![
        Cell::Text(region),
        Cell::Num(exact),
        Cell::Num(spectrum),
        Cell::Num(-spectrum.log2()),
        sampled.as_ref().map_or(Cell::Empty, |s| Cell::Num(s.value)),
        sampled.as_ref().and_then(|s| s.std_error).map_or(Cell::Empty, Cell::Num),
    ]);
    let failure = ((exact - spectrum).abs() > 1e-10).then(|| format!("swap purity {exact} differs from tr ρ² = {spectrum}"));
    Ok(Outcome { table, failure })
}
