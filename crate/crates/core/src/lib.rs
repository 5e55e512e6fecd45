//! Linear production situations in which every good also consumes a scarce
//! common-pool resource sold by an outside manager.
//!
//! The crate covers the whole pipeline on exact rationals:
//!
//! * [`lp`]: a small dense simplex that returns primal and dual optima.
//! * [`model`], [`coalition`], [`io`]: the situation `(A, B, p, r, c)`, its
//!   validation, coalitions, partitions and the JSON instance format.
//! * [`demand`]: `value(S; z)`, optimal demands `d_S`, and the partitions
//!   whose demand first exceeds the stock.
//! * [`game`]: characteristic, resource, optimistic, pessimistic,
//!   partition-function and bankruptcy games.
//! * [`solution`]: core membership and emptiness, and allocations priced
//!   from dual solutions.
//! * [`stability`]: reduced games and partitional stability.
//! * [`generate`]: seeded random instances for property checks.

pub mod coalition;
pub mod demand;
pub mod error;
pub mod game;
pub mod generate;
pub mod io;
pub mod lp;
pub mod model;
pub mod rational;
pub mod solution;
pub mod stability;

pub use coalition::{enumerate_partitions, Coalition, EmbeddedCoalition, Partition, DEFAULT_PARTITION_CAP};
pub use demand::{compute_m_min, optimal_demand, value_of, DemandProfile, Regime, RegimeReport};
pub use error::{Error, Result};
pub use game::{
    bankruptcy_game, characteristic_game, lpp_game_from_resource_game, optimistic_game,
    optimistic_resource_game, partition_function_game, pessimistic_and_optimistic_views,
    pessimistic_game, pessimistic_resource_game, AllocationRule, BuiltinRule, CharacteristicGame,
    PartitionFunctionGame,
};
pub use model::{LppInstance, Violation};
pub use rational::Rational;
pub use solution::{
    check_core_membership, core_nonempty, dominates, owen_allocation, partition_core,
    scarce_pool_allocation, Allocation, CoreReport, DominanceMode, PartitionCoreMode, Provenance,
    Verdict,
};
pub use stability::{is_partitionally_stable, reduced_game, stable_partitions, ReductionSemantics};
