//! Arena of 2-functions built from generators and projections by
//! superposition only. Every node records how it was made, so membership of
//! a node in the generated clone can be re-checked by replaying the steps.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::two_function::TwoFunction;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Step {
    Projection { arity: usize, index: usize },
    Generator(usize),
    Compose { outer: NodeId, inner: Vec<NodeId> },
}

#[derive(Debug, Clone)]
pub struct Derivation {
    m: usize,
    generators: Vec<TwoFunction>,
    steps: Vec<Step>,
    values: Vec<TwoFunction>,
    memo: HashMap<Step, NodeId>,
}

impl std::hash::Hash for Step {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Step::Projection { arity, index } => (0u8, arity, index).hash(state),
            Step::Generator(g) => (1u8, g).hash(state),
            Step::Compose { outer, inner } => (2u8, outer, inner).hash(state),
        }
    }
}

impl Derivation {
    pub fn new(m: usize, generators: Vec<TwoFunction>) -> Result<Self> {
        if generators.iter().any(|g| g.m() != m) {
            return Err(Error::SizeMismatch(format!("generators must be over {m} alternatives")));
        }
        Ok(Self { m, generators, steps: Vec::new(), values: Vec::new(), memo: HashMap::new() })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[TwoFunction] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn value(&self, id: NodeId) -> &TwoFunction {
        &self.values[id]
    }

    pub fn step(&self, id: NodeId) -> &Step {
        &self.steps[id]
    }

    fn push(&mut self, step: Step, value: TwoFunction) -> NodeId {
        let id = self.steps.len();
        self.memo.insert(step.clone(), id);
        self.steps.push(step);
        self.values.push(value);
        id
    }

    pub fn projection(&mut self, arity: usize, index: usize) -> Result<NodeId> {
        let step = Step::Projection { arity, index };
        if let Some(&id) = self.memo.get(&step) {
            return Ok(id);
        }
        let value = TwoFunction::projection(self.m, arity, index)?;
        Ok(self.push(step, value))
    }

    pub fn generator(&mut self, g: usize) -> Result<NodeId> {
        let step = Step::Generator(g);
        if let Some(&id) = self.memo.get(&step) {
            return Ok(id);
        }
        let value = self
            .generators
            .get(g)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("no generator {g}")))?;
        Ok(self.push(step, value))
    }

    /// `outer(inner_1, …, inner_k)`.
    pub fn compose(&mut self, outer: NodeId, inner: &[NodeId]) -> Result<NodeId> {
        let step = Step::Compose { outer, inner: inner.to_vec() };
        if let Some(&id) = self.memo.get(&step) {
            return Ok(id);
        }
        let args: Vec<&TwoFunction> = inner.iter().map(|&i| &self.values[i]).collect();
        let value = self.values[outer].superpose(&args)?;
        Ok(self.push(step, value))
    }

    /// Recomputes every node from its step and compares with the stored
    /// value. Steps may only refer to earlier nodes.
    pub fn replay(&self) -> Result<()> {
        let mut fresh: Vec<TwoFunction> = Vec::with_capacity(self.steps.len());
        for (id, step) in self.steps.iter().enumerate() {
            let v = match step {
                Step::Projection { arity, index } => TwoFunction::projection(self.m, *arity, *index)?,
                Step::Generator(g) => self.generators[*g].clone(),
                Step::Compose { outer, inner } => {
                    if *outer >= id || inner.iter().any(|&i| i >= id) {
                        return Err(Error::Falsified(format!("node {id} refers forward")));
                    }
                    let args: Vec<&TwoFunction> = inner.iter().map(|&i| &fresh[i]).collect();
                    fresh[*outer].superpose(&args)?
                }
            };
            if v != self.values[id] {
                return Err(Error::Falsified(format!("node {id} does not replay")));
            }
            fresh.push(v);
        }
        Ok(())
    }

    /// Number of nodes reachable from `root` (the size of its term DAG).
    pub fn dag_size(&self, root: NodeId) -> usize {
        let mut seen = vec![false; self.steps.len()];
        let mut stack = vec![root];
        let mut count = 0;
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id], true) {
                continue;
            }
            count += 1;
            if let Step::Compose { outer, inner } = &self.steps[id] {
                stack.push(*outer);
                stack.extend(inner);
            }
        }
        count
    }
}
