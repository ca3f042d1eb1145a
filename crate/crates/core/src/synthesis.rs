//! Simulation and control synthesis.
//!
//! For a controllable network the path decomposition turns every controlled
//! path into a shift register: values fed at the generator travel one node
//! per step. The synthesized schedule first feeds ones everywhere until the
//! network fills with ones, then shifts each path's slice of the target state
//! in, latest bit first, so that every bit lands exactly at the horizon.
//! The schedule depends only on the target state, never on the start state.

use std::fmt;

use thiserror::Error;

use crate::analysis::{
    decompose_controlled_paths, fill_depth, AnalysisError, DepthMap, PathDecomposition, Verdict,
};
use crate::model::{Cbcn, NetworkState, UpdateRule};

/// One Boolean per control input at a fixed time step, ordered by ascending
/// controlled variable.
pub type ControlVector = Vec<bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("{verdict}")]
    NotControllable { verdict: Verdict },
    #[error("expected {expected} {what}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
}

/// A time-indexed list of control vectors of uniform width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlSequence {
    width: usize,
    steps: Vec<ControlVector>,
}

impl ControlSequence {
    pub fn new(width: usize, steps: Vec<ControlVector>) -> Result<Self, SynthesisError> {
        for step in &steps {
            if step.len() != width {
                return Err(SynthesisError::DimensionMismatch {
                    what: "control bits",
                    expected: width,
                    got: step.len(),
                });
            }
        }
        Ok(ControlSequence { width, steps })
    }

    pub fn empty(width: usize) -> Self {
        ControlSequence {
            width,
            steps: Vec::new(),
        }
    }

    /// The horizon `T`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn steps(&self) -> &[ControlVector] {
        &self.steps
    }

    pub fn iter(&self) -> impl Iterator<Item = &ControlVector> {
        self.steps.iter()
    }
}

impl fmt::Display for ControlSequence {
    /// One line per step; column order is ascending controlled variable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            for &b in step {
                write!(f, "{}", if b { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Advances the network one step: controlled variables copy their input bit,
/// the rest take the AND of their update set.
pub fn step(net: &Cbcn, x: &NetworkState, u: &[bool]) -> Result<NetworkState, SynthesisError> {
    let n = net.var_count();
    if x.len() != n {
        return Err(SynthesisError::DimensionMismatch {
            what: "state bits",
            expected: n,
            got: x.len(),
        });
    }
    if u.len() != net.num_controls() {
        return Err(SynthesisError::DimensionMismatch {
            what: "control bits",
            expected: net.num_controls(),
            got: u.len(),
        });
    }
    let mut next = Vec::with_capacity(n);
    let mut column = 0;
    for v in net.vars() {
        match net.rule(v) {
            UpdateRule::Controlled => {
                next.push(u[column]);
                column += 1;
            }
            UpdateRule::Conjunction(set) => {
                next.push(set.iter().all(|&j| x.bit(j)));
            }
        }
    }
    Ok(NetworkState::new(next))
}

/// Runs the network from `x0` under `seq`, returning the full trajectory
/// `x(0), ..., x(T)`.
pub fn simulate(
    net: &Cbcn,
    x0: &NetworkState,
    seq: &ControlSequence,
) -> Result<Vec<NetworkState>, SynthesisError> {
    let mut trajectory = Vec::with_capacity(seq.len() + 1);
    trajectory.push(x0.clone());
    for u in seq.iter() {
        let next = step(net, trajectory.last().unwrap(), u)?;
        trajectory.push(next);
    }
    Ok(trajectory)
}

/// The data behind a synthesized schedule for one target state.
#[derive(Debug, Clone)]
pub struct SynthesisPlan {
    decomposition: PathDecomposition,
    depths: DepthMap,
    horizon: usize,
    /// Target bits per path, generator-adjacent node first.
    path_targets: Vec<Vec<bool>>,
}

impl SynthesisPlan {
    /// Plans a schedule steering the network to `b` from any start state.
    pub fn new(net: &Cbcn, b: &NetworkState) -> Result<Self, SynthesisError> {
        let n = net.var_count();
        if b.len() != n {
            return Err(SynthesisError::DimensionMismatch {
                what: "state bits",
                expected: n,
                got: b.len(),
            });
        }
        let g = net.dependency_graph();
        let decomposition = decompose_controlled_paths(&g).map_err(|e| match e {
            AnalysisError::NotControllable { verdict } => {
                SynthesisError::NotControllable { verdict }
            }
            AnalysisError::NotADag { cycle } => SynthesisError::NotControllable {
                verdict: Verdict::NotDag { cycle },
            },
        })?;
        let depths = fill_depth(&g).expect("controllable graphs are acyclic");
        let longest = decomposition
            .iter()
            .map(|p| p.simple_nodes().len())
            .max()
            .expect("decompositions of non-empty graphs have at least one path");
        let horizon = depths.tau() + longest;
        let path_targets = decomposition
            .iter()
            .map(|p| p.simple_nodes().iter().map(|v| b.bit(v.var())).collect())
            .collect();
        Ok(SynthesisPlan {
            decomposition,
            depths,
            horizon,
            path_targets,
        })
    }

    pub fn decomposition(&self) -> &PathDecomposition {
        &self.decomposition
    }

    pub fn depths(&self) -> &DepthMap {
        &self.depths
    }

    /// The schedule length `T`, at most twice the variable count.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Emits the schedule. Each path's generator feeds ones, then its target
    /// bits reversed: the bit for the `r`-th node (counted from the
    /// generator) is fed at time `T - r` and arrives exactly at `T`.
    pub fn control_sequence(&self, net: &Cbcn) -> ControlSequence {
        let width = net.num_controls();
        let horizon = self.horizon;
        let mut steps = vec![vec![true; width]; horizon];
        for (path, targets) in self.decomposition.iter().zip(&self.path_targets) {
            let column = net
                .control_index(path.generator().var())
                .expect("path generators are controlled variables");
            for (offset, &bit) in targets.iter().enumerate() {
                let r = offset + 1;
                steps[horizon - r][column] = bit;
            }
        }
        ControlSequence { width, steps }
    }
}

/// Builds a control sequence steering the network from `a` to `b`.
///
/// The sequence works from every start state; `a` only fixes dimensions. Its
/// length is the fill time plus the longest path, never more than twice the
/// variable count.
pub fn synthesize(
    net: &Cbcn,
    a: &NetworkState,
    b: &NetworkState,
) -> Result<ControlSequence, SynthesisError> {
    let n = net.var_count();
    if a.len() != n {
        return Err(SynthesisError::DimensionMismatch {
            what: "state bits",
            expected: n,
            got: a.len(),
        });
    }
    let plan = SynthesisPlan::new(net, b)?;
    let seq = plan.control_sequence(net);
    debug_assert_eq!(
        simulate(net, a, &seq).unwrap().last(),
        Some(b),
        "synthesized schedule must reach the target"
    );
    Ok(seq)
}
