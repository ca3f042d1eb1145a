//! Network models: conjunctive Boolean networks, their controlled variants,
//! dependency graphs, and the text formats used to exchange them.
//!
//! Variables are numbered `1..=n` and written `X1..Xn`. A state assigns a
//! Boolean to every variable; packed into an integer, bit 0 holds `X1`
//! (little-endian). This convention is fixed across the whole crate.

mod graph;
mod parse;
mod undirected;

pub use graph::{DependencyGraph, Node, NodeClass};
pub use parse::{dbn_to_cbn, parse_cbn, write_cbn, ParseError};
pub use undirected::{parse_edge_list, GraphFormatError, UndirectedGraph};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Structural violations detected when building a network.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("network has no variables")]
    Empty,
    #[error("update function of X{var} is constant (empty update set)")]
    ConstantUpdate { var: usize },
    #[error("update set of X{var} references X{index}, outside 1..={n}")]
    IndexOutOfRange { var: usize, index: usize, n: usize },
    #[error("controlled index {index} outside 1..={n}")]
    ControlOutOfRange { index: usize, n: usize },
}

/// Sorts, deduplicates, and validates one update set.
fn normalize_set(var: usize, mut set: Vec<usize>, n: usize) -> Result<Vec<usize>, ModelError> {
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(ModelError::ConstantUpdate { var });
    }
    if set[0] == 0 || *set.last().unwrap() > n {
        let &index = set.iter().find(|&&j| j == 0 || j > n).unwrap();
        return Err(ModelError::IndexOutOfRange { var, index, n });
    }
    Ok(set)
}

/// A conjunctive Boolean network: every variable updates to the AND of a
/// fixed non-empty set of variables. Update sets are kept sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cbn {
    update_sets: Vec<Vec<usize>>,
}

impl Cbn {
    /// Builds a network from one update set per variable.
    /// `update_sets[i]` feeds `X(i+1)`; each set must be non-empty and its
    /// members must lie in `1..=n`. Duplicates are dropped.
    pub fn new(update_sets: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let n = update_sets.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        let update_sets = update_sets
            .into_iter()
            .enumerate()
            .map(|(slot, set)| normalize_set(slot + 1, set, n))
            .collect::<Result<_, _>>()?;
        Ok(Cbn { update_sets })
    }

    pub fn var_count(&self) -> usize {
        self.update_sets.len()
    }

    /// Variables `1..=n`.
    pub fn vars(&self) -> impl Iterator<Item = usize> {
        1..=self.var_count()
    }

    /// The variables appearing in the update of `X<var>`, ascending.
    pub fn update_set(&self, var: usize) -> &[usize] {
        &self.update_sets[var - 1]
    }

    /// True when `X<var>` appears in its own update.
    pub fn has_self_loop(&self, var: usize) -> bool {
        self.update_sets[var - 1].binary_search(&var).is_ok()
    }

    /// Variables whose update mentions themselves. Any such variable must be
    /// controlled before the network can become controllable.
    pub fn self_loop_vars(&self) -> BTreeSet<usize> {
        self.vars().filter(|&v| self.has_self_loop(v)).collect()
    }
}

/// The update rule of one variable in a controlled network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpdateRule {
    /// The variable copies a free Boolean input each step.
    Controlled,
    /// The variable takes the AND of the listed variables (sorted, deduped).
    Conjunction(Vec<usize>),
}

/// A conjunctive Boolean control network: a [`Cbn`] in which the variables of
/// a chosen set `I` are driven by free Boolean inputs instead of their update
/// functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cbcn {
    rules: Vec<UpdateRule>,
}

impl Cbcn {
    /// Builds a network from one rule per variable. Conjunction sets must be
    /// non-empty and in range; they are sorted and deduplicated.
    pub fn new(rules: Vec<UpdateRule>) -> Result<Self, ModelError> {
        let n = rules.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        let rules = rules
            .into_iter()
            .enumerate()
            .map(|(slot, rule)| match rule {
                UpdateRule::Controlled => Ok(UpdateRule::Controlled),
                UpdateRule::Conjunction(set) => {
                    normalize_set(slot + 1, set, n).map(UpdateRule::Conjunction)
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Cbcn { rules })
    }

    /// Replaces the updates of `controlled` by free inputs.
    pub fn control(cbn: &Cbn, controlled: &BTreeSet<usize>) -> Result<Self, ModelError> {
        let n = cbn.var_count();
        for &i in controlled {
            if i == 0 || i > n {
                return Err(ModelError::ControlOutOfRange { index: i, n });
            }
        }
        let rules = cbn
            .vars()
            .map(|v| {
                if controlled.contains(&v) {
                    UpdateRule::Controlled
                } else {
                    UpdateRule::Conjunction(cbn.update_set(v).to_vec())
                }
            })
            .collect();
        Ok(Cbcn { rules })
    }

    pub fn var_count(&self) -> usize {
        self.rules.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> {
        1..=self.var_count()
    }

    pub fn rule(&self, var: usize) -> &UpdateRule {
        &self.rules[var - 1]
    }

    pub fn is_controlled(&self, var: usize) -> bool {
        matches!(self.rules[var - 1], UpdateRule::Controlled)
    }

    /// The controlled index set `I`, ascending.
    pub fn controlled_set(&self) -> BTreeSet<usize> {
        self.vars().filter(|&v| self.is_controlled(v)).collect()
    }

    pub fn controlled_vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.vars().filter(|&v| self.is_controlled(v))
    }

    pub fn num_controls(&self) -> usize {
        self.rules
            .iter()
            .filter(|r| matches!(r, UpdateRule::Controlled))
            .count()
    }

    /// Column of `var` in control vectors: its rank within `I` (ascending).
    pub fn control_index(&self, var: usize) -> Option<usize> {
        if !self.is_controlled(var) {
            return None;
        }
        Some(self.controlled_vars().take_while(|&v| v < var).count())
    }

    pub fn dependency_graph(&self) -> DependencyGraph {
        DependencyGraph::build(self)
    }
}

impl From<Cbn> for Cbcn {
    /// The uncontrolled network (`I` empty).
    fn from(cbn: Cbn) -> Self {
        let rules = cbn
            .update_sets
            .into_iter()
            .map(UpdateRule::Conjunction)
            .collect();
        Cbcn { rules }
    }
}

/// A full assignment of Booleans to the variables of one network.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkState {
    bits: Vec<bool>,
}

impl NetworkState {
    pub fn new(bits: Vec<bool>) -> Self {
        NetworkState { bits }
    }

    pub fn all_ones(n: usize) -> Self {
        NetworkState {
            bits: vec![true; n],
        }
    }

    pub fn all_zeros(n: usize) -> Self {
        NetworkState {
            bits: vec![false; n],
        }
    }

    /// Unpacks an integer state; bit 0 is `X1`.
    pub fn from_index(n: usize, index: usize) -> Self {
        assert!(n < usize::BITS as usize, "state width too large to unpack");
        let bits = (0..n).map(|i| index >> i & 1 == 1).collect();
        NetworkState { bits }
    }

    /// Packs into an integer; bit 0 is `X1`.
    pub fn to_index(&self) -> usize {
        assert!(self.len() < usize::BITS as usize, "state too wide to pack");
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (b as usize) << i)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of `X<var>` (1-based).
    pub fn bit(&self, var: usize) -> bool {
        self.bits[var - 1]
    }

    pub fn set_bit(&mut self, var: usize, value: bool) {
        self.bits[var - 1] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// Parse failures for textual states such as `011`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid state string {text:?}: expected only '0'/'1'")]
pub struct StateParseError {
    pub text: String,
}

impl FromStr for NetworkState {
    type Err = StateParseError;

    /// Leftmost character is `X1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(StateParseError {
                        text: s.to_string(),
                    })
                }
            }
        }
        Ok(NetworkState { bits })
    }
}

impl fmt::Display for NetworkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vars: &[usize]) -> BTreeSet<usize> {
        vars.iter().copied().collect()
    }

    #[test]
    fn cbn_rejects_empty_update_set() {
        let err = Cbn::new(vec![vec![2], vec![]]).unwrap_err();
        assert_eq!(err, ModelError::ConstantUpdate { var: 2 });
    }

    #[test]
    fn cbn_rejects_out_of_range_reference() {
        let err = Cbn::new(vec![vec![3]]).unwrap_err();
        assert_eq!(
            err,
            ModelError::IndexOutOfRange {
                var: 1,
                index: 3,
                n: 1
            }
        );
    }

    #[test]
    fn update_sets_are_normalized() {
        let cbn = Cbn::new(vec![vec![2, 1, 2], vec![1]]).unwrap();
        assert_eq!(cbn.update_set(1), &[1, 2]);
    }

    #[test]
    fn self_loop_detection() {
        let cbn = Cbn::new(vec![vec![2], vec![1, 2]]).unwrap();
        assert!(!cbn.has_self_loop(1));
        assert!(cbn.has_self_loop(2));
        assert_eq!(cbn.self_loop_vars(), set(&[2]));
    }

    #[test]
    fn control_replaces_rules() {
        let cbn = Cbn::new(vec![vec![2], vec![1, 2]]).unwrap();
        let net = Cbcn::control(&cbn, &set(&[2])).unwrap();
        assert_eq!(net.rule(1), &UpdateRule::Conjunction(vec![2]));
        assert_eq!(net.rule(2), &UpdateRule::Controlled);
        assert_eq!(net.controlled_set(), set(&[2]));
        assert_eq!(net.num_controls(), 1);
        assert_eq!(net.control_index(2), Some(0));
        assert_eq!(net.control_index(1), None);
    }

    #[test]
    fn control_index_follows_ascending_order() {
        let cbn = Cbn::new(vec![vec![2], vec![3], vec![1]]).unwrap();
        let net = Cbcn::control(&cbn, &set(&[1, 3])).unwrap();
        assert_eq!(net.control_index(1), Some(0));
        assert_eq!(net.control_index(3), Some(1));
    }

    #[test]
    fn state_round_trips_through_index() {
        for idx in 0..8 {
            let s = NetworkState::from_index(3, idx);
            assert_eq!(s.to_index(), idx);
        }
        // bit 0 is X1
        let s = NetworkState::from_index(3, 0b001);
        assert!(s.bit(1));
        assert!(!s.bit(2));
    }

    #[test]
    fn state_string_is_leftmost_x1() {
        let s: NetworkState = "011".parse().unwrap();
        assert!(!s.bit(1));
        assert!(s.bit(2));
        assert!(s.bit(3));
        assert_eq!(s.to_string(), "011");
        assert!("01x".parse::<NetworkState>().is_err());
    }
}
