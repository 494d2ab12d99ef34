//! LOCC protocols on two qubits: the CHSH game and single-copy filtering.

mod chsh;
mod distill;

pub use chsh::{chsh_play, classical_tables, GameMode, GameResult, GameStrategy, ALICE_GAME_DIRECTIONS, BOB_GAME_DIRECTIONS};
pub use distill::{average_yield, distillation_kraus, filter_distill, filter_input_state, BranchRecord, DistillMode};
