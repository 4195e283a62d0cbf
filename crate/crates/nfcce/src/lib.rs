//! Social-welfare-maximizing normal-form coarse correlated equilibria
//! (NFCCE) of extensive-form games.
//!
//! The solver works on the sequence form and runs two-phase column
//! generation on a hybrid linear program whose variables are correlated
//! plan-pair probabilities. Entering columns are priced by one of two
//! interchangeable oracles: a per-leaf constrained plan search (`plrc`)
//! for two-player games without chance, and a mixed-integer program
//! (`milrc`) solved by an exact branch-and-bound that also covers chance
//! moves and three players. A brute-force verifier provides independent
//! ground truth on small games.

pub mod efg;
pub mod gamegen;
pub mod oracles;
pub mod simplex;
pub mod verify;

pub use efg::json::{game_from_json, game_to_json};
pub use efg::seqform::{
    best_response_value, build_sequence_form, plan_to_realization, realization_expected_utility,
};
pub use efg::{validate_game, ExtensiveFormGame};
