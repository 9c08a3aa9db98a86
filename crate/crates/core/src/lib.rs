//! Bi-objective multimodal car-sharing optimization.
//!
//! Assigns modes of transport (car, bike, public) to user trips and schedules
//! shared-car routes over a day, minimizing total cost and total user
//! preference penalty simultaneously. The full Pareto frontier is enumerated
//! exactly.
//!
//! The crate is organized around interchangeable strategies:
//!
//! * **Model variants** (`m1`..`m4b`): increasingly flexible formulations,
//!   from fixed task sequences with static weights up to free sequences with
//!   time-expanded leg weights and a branch-and-cut reformulation. Each
//!   variant is a [`registry::VariantStrategy`] looked up by name.
//! * **Frontier methods** (`eps-cost`, `eps-pref`, `wbs`): exact bi-objective
//!   frameworks behind [`registry::FrontierMethod`].
//!
//! Pipeline: [`instance`] data → [`multigraph`] leg graph → [`models`]
//! assembly → [`mip`] exact solve (with [`separation`] callbacks for `m4b`)
//! → [`biobjective`] frontier enumeration.

pub mod biobjective;
pub mod instance;
pub mod mip;
pub mod models;
pub mod multigraph;
pub mod registry;
pub mod separation;

#[cfg(test)]
pub(crate) mod testutil;

pub use instance::{Instance, Mot};
