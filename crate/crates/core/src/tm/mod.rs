//! Deterministic single-tape Turing machines and the harness comparing
//! machine runs on encoded models against game verdicts.

mod correspondence;
pub mod curated;
mod machine;
mod run;

pub use correspondence::{
    check_correspondence, Agreement, CorrespondenceError, CorrespondenceReport, CorrespondenceRow,
};
pub use machine::{parse_machine, Direction, MachineError, Transition, TuringMachine, BLANK};
pub use run::{configuration_after, run_tm, Configuration, TmOutcome};
