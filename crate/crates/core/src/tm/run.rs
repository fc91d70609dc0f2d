use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Direction, MachineError, TuringMachine, BLANK};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TmOutcome {
    Accept {
        steps: u64,
    },
    Reject {
        steps: u64,
    },
    /// Budget exhausted without halting or repeating a configuration.
    Running {
        budget: u64,
    },
    /// The configuration after `first` steps reappeared after `steps` steps,
    /// so the machine runs forever.
    CycleDetected {
        first: u64,
        steps: u64,
    },
}

/// State, head position and tape contents with trailing blanks trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: String,
    pub head: usize,
    pub tape: Vec<char>,
}

impl Configuration {
    fn normalized(&self) -> Self {
        let mut tape = self.tape.clone();
        while tape.len() > self.head + 1 && tape.last() == Some(&BLANK) {
            tape.pop();
        }
        Self {
            state: self.state.clone(),
            head: self.head,
            tape,
        }
    }
}

/// Performs one step, or returns `None` when `config` is halting or has no
/// transition. Moving left on cell 0 leaves the head in place.
pub(crate) fn step(tm: &TuringMachine, config: &mut Configuration) -> Option<()> {
    if config.state == tm.accept || config.state == tm.reject {
        return None;
    }
    if config.head >= config.tape.len() {
        config.tape.resize(config.head + 1, BLANK);
    }
    let read = config.tape[config.head];
    let t = tm.delta.get(&(config.state.clone(), read))?;
    config.tape[config.head] = t.write;
    config.state = t.next.clone();
    match t.direction {
        Direction::L => config.head = config.head.saturating_sub(1),
        Direction::R => config.head += 1,
    }
    Some(())
}

/// Simulates at most `step_budget` steps, stopping early on halting or on an
/// exactly repeated configuration.
pub fn run_tm(
    tm: &TuringMachine,
    input: &str,
    step_budget: u64,
) -> Result<TmOutcome, MachineError> {
    tm.check_input(input)?;
    let mut config = Configuration {
        state: tm.start.clone(),
        head: 0,
        tape: input.chars().collect(),
    };
    let mut seen: HashMap<Configuration, u64> = HashMap::new();
    let mut steps = 0;
    loop {
        if config.state == tm.accept {
            return Ok(TmOutcome::Accept { steps });
        }
        if config.state == tm.reject {
            return Ok(TmOutcome::Reject { steps });
        }
        if let Some(&first) = seen.get(&config.normalized()) {
            return Ok(TmOutcome::CycleDetected { first, steps });
        }
        if steps == step_budget {
            return Ok(TmOutcome::Running {
                budget: step_budget,
            });
        }
        seen.insert(config.normalized(), steps);
        if step(tm, &mut config).is_none() {
            return Ok(TmOutcome::Reject { steps });
        }
        steps += 1;
    }
}

/// Configuration reached after exactly `steps` steps (or at halting).
pub fn configuration_after(tm: &TuringMachine, input: &str, steps: u64) -> Configuration {
    let mut config = Configuration {
        state: tm.start.clone(),
        head: 0,
        tape: input.chars().collect(),
    };
    for _ in 0..steps {
        if step(tm, &mut config).is_none() {
            break;
        }
    }
    config.normalized()
}
