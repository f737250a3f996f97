//! The binary branching tree `T ⊂ ω^<ω`.
//!
//! `T₀ = {∅}`, `T₁ = {(0)}`, and `T_{n+1} = {t⁻, t⁺ : t ∈ Tₙ}` where `t⁻` appends
//! a `0` and `t⁺` increments the last digit. A node's level is `|t| + Σ t`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeNode {
    digits: Vec<u64>,
}

impl TreeNode {
    pub fn root() -> TreeNode {
        TreeNode::default()
    }

    pub fn new(digits: Vec<u64>) -> TreeNode {
        TreeNode { digits }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn is_root(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn last(&self) -> Option<u64> {
        self.digits.last().copied()
    }

    /// `t ⌢ k`.
    pub fn child(&self, k: u64) -> TreeNode {
        let mut digits = self.digits.clone();
        digits.push(k);
        TreeNode { digits }
    }

    /// The level `n` with `t ∈ Tₙ`.
    pub fn level(&self) -> Result<usize> {
        let mut n = self.len() as u64;
        for &d in &self.digits {
            n = match n.checked_add(d) {
                Some(n) => n,
                None => return domain("node level overflows"),
            };
        }
        usize::try_from(n).or_else(|_| domain("node level overflows"))
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_root() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Decides `t ∈ T` by undoing the construction step by step.
pub fn contains(t: &TreeNode) -> bool {
    let mut cur = t.digits.clone();
    loop {
        match cur.last().copied() {
            None => return true,
            Some(0) if cur.len() == 1 => return true,
            Some(0) => {
                cur.pop();
            }
            Some(_) => *cur.last_mut().expect("nonempty") -= 1,
        }
    }
}

/// `(t⁻, t⁺)`. The root's only successor is `(0)`; see [`root_successor`].
pub fn successors(t: &TreeNode) -> Result<(TreeNode, TreeNode)> {
    let Some(last) = t.last() else {
        return domain("the root has the single successor (0)");
    };
    if !contains(t) {
        return domain(format!("{t} is not a node of T"));
    }
    let minus = t.child(0);
    let mut plus = t.clone();
    plus.digits[t.len() - 1] = last.checked_add(1).map_or_else(|| domain("digit overflows"), Ok)?;
    Ok((minus, plus))
}

pub fn root_successor() -> TreeNode {
    TreeNode::new(vec![0])
}

/// `Tₙ` in lexicographic order.
pub fn level(n: usize) -> Vec<TreeNode> {
    match n {
        0 => vec![TreeNode::root()],
        _ => {
            let mut cur = vec![root_successor()];
            for _ in 1..n {
                let mut next = Vec::with_capacity(cur.len() * 2);
                for t in &cur {
                    let (minus, plus) = successors(t).expect("level nodes are in T");
                    next.push(minus);
                    next.push(plus);
                }
                cur = next;
            }
            cur.sort();
            cur
        }
    }
}

/// `(s_t, k)` with `s_t ∈ T_k` and `t = s_t ⌢ (n−k−1)`: the node where the last
/// minus-branching before `t` occurred, which is `t` without its last digit.
pub fn source(t: &TreeNode) -> Result<(TreeNode, usize)> {
    if t.is_root() {
        return domain("the root has no source");
    }
    if !contains(t) {
        return domain(format!("{t} is not a node of T"));
    }
    let s = TreeNode::new(t.digits[..t.len() - 1].to_vec());
    let k = s.level()?;
    Ok((s, k))
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;

    fn node(d: &[u64]) -> TreeNode {
        TreeNode::new(d.to_vec())
    }

    #[test]
    fn successor_examples() {
        assert_eq!(successors(&node(&[0])).unwrap(), (node(&[0, 0]), node(&[1])));
        assert_eq!(successors(&node(&[0, 0])).unwrap(), (node(&[0, 0, 0]), node(&[0, 1])));
        assert_eq!(successors(&node(&[1])).unwrap(), (node(&[1, 0]), node(&[2])));
        assert!(successors(&TreeNode::root()).is_err());
    }

    #[test]
    fn level_examples() {
        assert_eq!(level(0), vec![TreeNode::root()]);
        assert_eq!(level(1), vec![node(&[0])]);
        assert_eq!(level(3), vec![node(&[0, 0, 0]), node(&[0, 1]), node(&[1, 0]), node(&[2])]);
        assert_eq!(level(13).len(), 1 << 12);
    }

    #[test]
    fn source_examples() {
        assert_eq!(source(&node(&[0])).unwrap(), (TreeNode::root(), 0));
        assert_eq!(source(&node(&[0, 1])).unwrap(), (node(&[0]), 1));
        assert_eq!(source(&node(&[2])).unwrap(), (TreeNode::root(), 0));
        assert!(source(&TreeNode::root()).is_err());
    }

    #[test]
    fn nodes_serialize_as_arrays() {
        assert_eq!(serde_json::to_string(&node(&[0, 3])).unwrap(), "[0,3]");
        assert_eq!(serde_json::to_string(&TreeNode::root()).unwrap(), "[]");
    }

    /// Source by replaying the construction: follow creation steps back to the
    /// last minus step, whose parent is the source.
    fn minus_branch_source(parents: &BTreeMap<TreeNode, (TreeNode, bool)>, t: &TreeNode) -> TreeNode {
        let mut cur = t.clone();
        loop {
            match parents.get(&cur) {
                Some((p, true)) => return p.clone(),
                Some((p, false)) => cur = p.clone(),
                None => return TreeNode::root(),
            }
        }
    }

    #[test]
    fn exhaustive_laws_up_to_twelve() {
        let mut parents = BTreeMap::new();
        for n in 1..=12 {
            let here = level(n);
            let mut union = BTreeSet::new();
            for t in &here {
                assert_eq!(t.level().unwrap(), n);
                let (minus, plus) = successors(t).unwrap();
                assert!(union.insert(minus.clone()), "collision at {minus}");
                assert!(union.insert(plus.clone()), "collision at {plus}");
                parents.insert(minus.clone(), (t.clone(), true));
                parents.insert(plus.clone(), (t.clone(), false));
                assert_eq!(source(&minus).unwrap().0, *t);
                assert_eq!(source(&plus).unwrap().0, source(t).unwrap().0);
            }
            let next = level(n + 1);
            assert_eq!(next.len(), 1 << n);
            assert_eq!(next.iter().cloned().collect::<BTreeSet<_>>(), union);
            assert!(next.windows(2).all(|w| w[0] < w[1]));
        }
        for n in 1..=13 {
            for t in level(n) {
                let (s, k) = source(&t).unwrap();
                assert_eq!(s.child((n - k - 1) as u64), t);
                assert_eq!(s, minus_branch_source(&parents, &t));
            }
        }
    }

    #[test]
    fn every_finite_sequence_is_a_node() {
        for a in 0..4 {
            for b in 0..4 {
                assert!(contains(&node(&[a, b])));
                let n = node(&[a, b]).level().unwrap();
                assert!(level(n).contains(&node(&[a, b])));
            }
        }
    }
}
