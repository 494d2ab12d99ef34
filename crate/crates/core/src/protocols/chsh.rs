//! The CHSH nonlocal game: referee sends bits x, y; Alice and Bob answer
//! a, b without communicating and win when a ⊕ b = x·y.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{arg, Result};
use crate::linalg::kron;
use crate::state::pauli::Direction;
use crate::state::{expectation, sample_measurement, KrausSet, PureState};

/// Alice's measurement directions (n_x, n_z) for questions x = 0, 1.
pub const ALICE_GAME_DIRECTIONS: [(f64, f64); 2] = [(1.0, 0.0), (0.0, 1.0)];
/// Bob's measurement directions (n_x, n_z) for questions y = 0, 1.
pub const BOB_GAME_DIRECTIONS: [(f64, f64); 2] =
    [(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2), (std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2)];

/// Rounds per independently seeded sub-stream in sampled mode.
const CHUNK: usize = 4096;

#[derive(Debug, Clone)]
pub enum GameStrategy {
    /// Deterministic answer tables a(x), b(y).
    Classical { a: [u8; 2], b: [u8; 2] },
    /// Shared two-qubit state; each player measures σ_n along the direction
    /// for their question and answers 0 on eigenvalue +1, 1 on −1.
    Quantum { state: PureState, alice: [Direction; 2], bob: [Direction; 2] },
}

impl GameStrategy {
    pub fn classical(a: [u8; 2], b: [u8; 2]) -> Result<Self> {
        if a.iter().chain(&b).any(|&v| v > 1) {
            return arg(format!("answer tables must hold bits, got a={a:?} b={b:?}"));
        }
        Ok(Self::Classical { a, b })
    }

    /// Both players always answer 0.
    pub fn best_classical() -> Self {
        Self::Classical { a: [0, 0], b: [0, 0] }
    }

    pub fn quantum(state: PureState, alice: [(f64, f64); 2], bob: [(f64, f64); 2]) -> Result<Self> {
        if state.space().dims() != [2, 2] {
            return arg(format!("quantum strategy needs a two-qubit state, got dims {:?}", state.space().dims()));
        }
        let alice = [Direction::new(alice[0].0, alice[0].1)?, Direction::new(alice[1].0, alice[1].1)?];
        let bob = [Direction::new(bob[0].0, bob[0].1)?, Direction::new(bob[1].0, bob[1].1)?];
        Ok(Self::Quantum { state, alice, bob })
    }

    /// |Φ⁺⟩ with the standard game directions.
    pub fn standard_quantum() -> Self {
        Self::quantum(PureState::phi_plus(), ALICE_GAME_DIRECTIONS, BOB_GAME_DIRECTIONS).expect("unit directions")
    }

    /// Pr[a ⊕ b = x·y] for one question pair.
    fn win_given(&self, x: usize, y: usize) -> Result<f64> {
        let target = (x & y) as u8;
        match self {
            Self::Classical { a, b } => Ok(if a[x] ^ b[y] == target { 1.0 } else { 0.0 }),
            Self::Quantum { state, alice, bob } => {
                let mut p = 0.0;
                for ab in 0..4u8 {
                    let (oa, ob) = (ab >> 1, ab & 1);
                    if oa ^ ob != target {
                        continue;
                    }
                    let proj = kron(&alice[x].eigenprojector(oa == 0), &bob[y].eigenprojector(ob == 0));
                    p += expectation(state, &proj, &[0, 1])?;
                }
                Ok(p)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum GameMode {
    Analytic,
    Sampled { rounds: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct GameResult {
    pub win_probability: f64,
    #[serde(flatten)]
    pub mode: GameMode,
    /// √(P(1 − P)/rounds) in sampled mode.
    pub std_error: Option<f64>,
}

/// Kraus sets {Π₊, Π₋} for each player's two questions, embedded on two qubits.
fn measurement_sets(alice: &[Direction; 2], bob: &[Direction; 2]) -> Result<[[KrausSet; 2]; 2]> {
    let space = crate::state::SiteSpace::qubits(2)?;
    let make = |d: &Direction, site: usize| -> Result<KrausSet> {
        KrausSet::new(vec![d.eigenprojector(true), d.eigenprojector(false)], vec!["0".into(), "1".into()])?.embed(&space, &[site])
    };
    Ok([[make(&alice[0], 0)?, make(&alice[1], 0)?], [make(&bob[0], 1)?, make(&bob[1], 1)?]])
}

fn play_chunk(strategy: &GameStrategy, sets: Option<&[[KrausSet; 2]; 2]>, seed: u64, chunk: usize, rounds: usize) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    let mut wins = 0;
    for _ in 0..rounds {
        let x = rng.random_range(0..2usize);
        let y = rng.random_range(0..2usize);
        let (a, b) = match (strategy, sets) {
            (GameStrategy::Classical { a, b }, _) => (a[x], b[y]),
            (GameStrategy::Quantum { state, .. }, Some(sets)) => {
                let first = sample_measurement(state, &sets[0][x], &mut rng)?;
                let second = sample_measurement(&first.post, &sets[1][y], &mut rng)?;
                (first.index as u8, second.index as u8)
            }
            (GameStrategy::Quantum { .. }, None) => unreachable!("quantum play needs measurement sets"),
        };
        if a ^ b == (x & y) as u8 {
            wins += 1;
        }
    }
    Ok(wins)
}

/// Win probability of a strategy, either exactly from the Born rule or by
/// simulating rounds. Sampled rounds are split into fixed-size chunks, each
/// with its own ChaCha stream of the master seed, so the estimate does not
/// depend on scheduling.
pub fn chsh_play(strategy: &GameStrategy, mode: GameMode) -> Result<GameResult> {
    match mode {
        GameMode::Analytic => {
            let mut p = 0.0;
            for x in 0..2 {
                for y in 0..2 {
                    p += 0.25 * strategy.win_given(x, y)?;
                }
            }
            Ok(GameResult { win_probability: p.clamp(0.0, 1.0), mode, std_error: None })
        }
        GameMode::Sampled { rounds, seed } => {
            if rounds == 0 {
                return arg("sampled mode needs at least one round");
            }
            let sets = match strategy {
                GameStrategy::Quantum { alice, bob, .. } => Some(measurement_sets(alice, bob)?),
                GameStrategy::Classical { .. } => None,
            };
            let chunks = rounds.div_ceil(CHUNK);
            let wins: Vec<usize> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let n = CHUNK.min(rounds - c * CHUNK);
                    play_chunk(strategy, sets.as_ref(), seed, c, n)
                })
                .collect::<Result<_>>()?;
            let p = wins.iter().sum::<usize>() as f64 / rounds as f64;
            Ok(GameResult { win_probability: p, mode, std_error: Some((p * (1.0 - p) / rounds as f64).sqrt()) })
        }
    }
}

/// All 16 deterministic answer-table strategies.
pub fn classical_tables() -> Vec<GameStrategy> {
    (0..16u8)
        .map(|t| GameStrategy::Classical { a: [t & 1, (t >> 1) & 1], b: [(t >> 2) & 1, (t >> 3) & 1] })
        .collect()
}
