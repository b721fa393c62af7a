//! Greedy autoregressive execution of next-token programs.

use serde::{Deserialize, Serialize};

use crate::error::EvalError;
use crate::ir::{Plan, Trace};
use crate::programs::TaskSpec;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    StopToken,
    MaxSteps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    /// Prompt followed by every generated token.
    pub full_sequence: Vec<Value>,
    pub prompt_len: usize,
    pub steps_taken: usize,
    pub terminated: Termination,
    /// Intermediate variables of the evaluation that produced each generated token.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_step_traces: Option<Vec<Trace>>,
}

impl RunResult {
    pub fn completion(&self) -> &[Value] {
        &self.full_sequence[self.prompt_len..]
    }
}

/// A compiled next-token program with its stopping rule, reusable across prompts.
#[derive(Clone, Debug)]
pub struct Runner {
    plan: Plan,
    stop_token: Value,
    spec_max_steps: crate::programs::MaxSteps,
}

impl Runner {
    pub fn new(spec: &TaskSpec) -> Result<Self, EvalError> {
        Ok(Self {
            plan: Plan::compile(&spec.program)?,
            stop_token: spec.stop_token,
            spec_max_steps: spec.max_steps,
        })
    }

    /// Runs with the task's default step budget.
    pub fn run(&self, prompt: &[Value], trace: bool) -> Result<RunResult, EvalError> {
        self.run_with_budget(prompt, self.spec_max_steps.for_prompt(prompt.len()), trace)
    }

    /// Appends the program's last output until it emits the stop token or `max_steps` tokens were added.
    ///
    /// Each step only evaluates the newest position; earlier positions cannot change
    /// because every operation is causal.
    pub fn run_with_budget(&self, prompt: &[Value], max_steps: usize, trace: bool) -> Result<RunResult, EvalError> {
        if prompt.is_empty() {
            return Err(EvalError::Malformed("empty prompt".into()));
        }
        let mut ev = self.plan.start();
        for &t in prompt {
            ev.push_token(t)?;
        }
        let mut seq = prompt.to_vec();
        let mut traces = trace.then(Vec::new);
        let mut steps = 0;
        let terminated = loop {
            if steps == max_steps {
                break Termination::MaxSteps;
            }
            if let Some(t) = traces.as_mut() {
                t.push(ev.trace());
            }
            let next = ev.last_output().expect("prompt is non-empty");
            seq.push(next);
            steps += 1;
            if next == self.stop_token {
                break Termination::StopToken;
            }
            if steps < max_steps {
                ev.push_token(next)?;
            }
        };
        Ok(RunResult {
            full_sequence: seq,
            prompt_len: prompt.len(),
            steps_taken: steps,
            terminated,
            per_step_traces: traces,
        })
    }
}

/// Runs `spec`'s program on `prompt` until its stop token or its step budget.
pub fn sample_autoregressive(spec: &TaskSpec, prompt: &[Value], trace: bool) -> Result<RunResult, EvalError> {
    Runner::new(spec)?.run(prompt, trace)
}

/// 1 iff the sequences are identical, else 0.
pub fn exact_match(predicted: &[Value], target: &[Value]) -> u8 {
    u8::from(predicted == target)
}
