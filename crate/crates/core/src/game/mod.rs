//! Two-player games for standard control problems.

pub mod arena;
pub mod attractor;
pub mod gadget;
pub mod muller;
pub mod parity;
pub mod solve;

pub use arena::{build_arena, Edge, GameArena, Owner, Vertex, VertexKind};
pub use muller::{brute_force_winning, DEFAULT_BOUND};
pub use parity::{zielonka, ParityGame, ParitySolution};
pub use solve::{package_controller, package_counterexample, solve, solve_from, winning_region, Solution, SolveStats};
