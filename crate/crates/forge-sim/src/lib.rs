//! Agent-based simulator of an open-source developer community.
//!
//! Major agents found projects and shed overloaded task kinds into child
//! projects; minor agents pick projects by preferential attachment with
//! aging fitness and join or leave under threshold rules. Everything runs
//! off one seeded random stream, so runs are bit-reproducible.
//!
//! The crate splits into the simulation core ([`model`], [`behaviors`],
//! [`growth`], [`engine`]), the logging and persistence layer ([`event`],
//! [`output`], [`config`]), and offline tooling ([`analytics`], [`ingest`]).

pub mod analytics;
pub mod behaviors;
pub mod config;
pub mod engine;
pub mod event;
pub mod growth;
pub mod ingest;
pub mod model;
pub mod output;
pub mod rng;

pub use engine::{SimConfig, SimState, Simulation};
pub use event::{EventRecord, EventSink};
pub use rng::SimRng;
