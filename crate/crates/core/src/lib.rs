//! Many-to-one hospital–doctor matching with couples.
//!
//! The crate covers the market model and its JSON format ([`market`]),
//! preference axioms with counterexample witnesses ([`axioms`]), blocking
//! coalitions and exhaustive enumeration of stable matchings
//! ([`stability`]), deferred acceptance and serial dictatorship
//! ([`engine`]), the constructive algorithms ([`solvers`]), and builders for
//! markets without stable matchings ([`constructions`]).

pub mod axioms;
pub mod constructions;
pub mod engine;
pub mod market;
pub mod random;
pub mod report;
pub mod set_order;
pub mod solvers;
pub mod stability;

pub use axioms::{Axiom, AxiomError, AxiomVerdict, Witness};
pub use engine::{run_dpda, run_sda, EngineError, EngineTrace, ProposalStream, StreamSource, TraceEvent};
pub use market::{
    parse_instance, parse_matching, serialize_instance, serialize_matching, validate_instance, Couple,
    CouplePreference, DoctorIx, DoctorPreference, Hospital, HospitalIx, HospitalPreference, MarketBuilder,
    MarketInstance, Matching, Member, Mode, SetExtension, SetExtensionSpec, Slot, SlotPair, NONE_TOKEN,
};
pub use solvers::{solve, Algorithm, SolveError, SolverReport};
pub use stability::{
    enumerate_stable, find_blocking_pairs, is_stable, Semantics, StabilityError, StabilityStatus, StabilityVerdict,
    DEFAULT_MAX_CANDIDATES,
};
