//! Tree and block views of the atoms of a conditional algebra.
//!
//! These are built from prefixes of permutations without going through
//! [`ConditionalAlgebra::atoms_below_basic`], so they serve as independent
//! enumerations of the same sets.

use crate::conditional_algebra::{factorial, CElement, ConditionalAlgebra};
use crate::error::{Error, Result};
use crate::event_algebra::{Event, EventAlgebra};

/// A node `(α | b)` where `b` is the complement of the atoms chosen above it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub atom: usize,
    pub antecedent: u64,
    pub children: Vec<TreeNode>,
}

/// The tree whose root-to-leaf paths are the atoms of the conditional algebra.
/// It has depth `n − 1`; the last atom of each permutation is forced.
#[derive(Debug, Clone)]
pub struct AtomTree {
    n: usize,
    roots: Vec<TreeNode>,
}

fn grow(n: usize, remaining: u64, depth: usize) -> Vec<TreeNode> {
    if depth + 1 >= n {
        return Vec::new();
    }
    (0..n)
        .filter(|&i| (remaining >> i) & 1 == 1)
        .map(|i| TreeNode {
            atom: i,
            antecedent: remaining,
            children: grow(n, remaining & !(1 << i), depth + 1),
        })
        .collect()
}

impl AtomTree {
    pub fn build(base: &EventAlgebra) -> Self {
        let n = base.n();
        AtomTree { n, roots: grow(n, base.full_mask(), 0) }
    }

    pub fn roots(&self) -> &[TreeNode] {
        &self.roots
    }

    pub fn depth(&self) -> usize {
        self.n - 1
    }

    pub fn leaf_count(&self) -> usize {
        self.paths().len()
    }

    /// Every path completed with its forced last atom, in tree order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        fn walk(node: &TreeNode, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            prefix.push(node.atom);
            if node.children.is_empty() {
                let mut full = prefix.clone();
                let used = full.iter().fold(0u64, |m, &i| m | (1 << i));
                full.extend((0..n).filter(|&i| (used >> i) & 1 == 0));
                out.push(full);
            } else {
                for c in &node.children {
                    walk(c, n, prefix, out);
                }
            }
            prefix.pop();
        }
        let mut out = Vec::new();
        if self.roots.is_empty() {
            out.push((0..self.n).collect());
        }
        for r in &self.roots {
            walk(r, self.n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Indented text rendering, one node `(label | antecedent)` per line.
    pub fn render_text(&self, base: &EventAlgebra) -> String {
        fn walk(node: &TreeNode, base: &EventAlgebra, depth: usize, out: &mut String) {
            let ant = base.render(&base.event(node.antecedent).expect("valid mask"));
            out.push_str(&"  ".repeat(depth));
            out.push_str(&format!("({} | {})\n", base.label(node.atom), ant));
            for c in &node.children {
                walk(c, base, depth + 1, out);
            }
        }
        let mut out = String::new();
        for r in &self.roots {
            walk(r, base, 0, &mut out);
        }
        out
    }
}

/// All atoms whose permutation starts with `prefix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub prefix: Vec<usize>,
    pub members: CElement,
}

fn check_prefix(n: usize, prefix: &[usize]) -> Result<()> {
    if prefix.len() > n {
        return Err(Error::InvalidPrefix(format!("length {} exceeds {n}", prefix.len())));
    }
    let mut used = 0u64;
    for &i in prefix {
        if i >= n {
            return Err(Error::InvalidPrefix(format!("atom index {i} out of range")));
        }
        if (used >> i) & 1 == 1 {
            return Err(Error::InvalidPrefix(format!("atom index {i} repeated")));
        }
        used |= 1 << i;
    }
    Ok(())
}

pub fn block(alg: &ConditionalAlgebra, prefix: &[usize]) -> Result<Block> {
    check_prefix(alg.n(), prefix)?;
    let members = alg.element_from_predicate(|perm| {
        perm.iter().zip(prefix).all(|(&p, &q)| p as usize == q)
    });
    debug_assert_eq!(members.count() as u64, factorial(alg.n() - prefix.len()));
    Ok(Block { prefix: prefix.to_vec(), members })
}

/// The family of sets S_j: atoms below `(target | b)` grouped by the base atom
/// their permutation starts with. The target's own set comes first, then the
/// other atoms in ascending index order.
pub fn s_blocks(alg: &ConditionalAlgebra, target: usize, b: &Event) -> Result<Vec<(usize, CElement)>> {
    alg.base().check(b)?;
    if b.is_bottom() {
        return Err(Error::BottomAntecedent);
    }
    if !b.contains_atom(target) {
        return Err(Error::NotBelow(format!("target atom {target} is not below b")));
    }
    let n = alg.n();
    let below = alg.atoms_below_basic(&alg.base().atom(target)?, b)?;
    let order = std::iter::once(target).chain((0..n).filter(|&j| j != target));
    Ok(order
        .map(|j| {
            let start = alg.element_from_predicate(|perm| perm[0] as usize == j);
            (j, start.meet(&below).expect("same algebra"))
        })
        .collect())
}

/// Blocks whose union is S_j for a start atom `start` outside `b`:
/// prefixes `⟨start, β…, target⟩` over ordered tuples of distinct atoms β of
/// `¬b` other than `start`.
pub fn s_block_decomposition(
    alg: &ConditionalAlgebra,
    target: usize,
    b: &Event,
    start: usize,
) -> Result<Vec<Block>> {
    alg.base().check(b)?;
    if b.is_bottom() {
        return Err(Error::BottomAntecedent);
    }
    if !b.contains_atom(target) {
        return Err(Error::NotBelow(format!("target atom {target} is not below b")));
    }
    if start >= alg.n() || b.contains_atom(start) {
        return Err(Error::NotBelow(format!("start atom {start} must lie outside b")));
    }
    let betas: Vec<usize> = (!*b).atoms_below().into_iter().filter(|&x| x != start).collect();
    let mut out = Vec::new();
    let mut tuple = Vec::new();
    extend_tuples(alg, target, start, &betas, &mut tuple, &mut out)?;
    Ok(out)
}

fn extend_tuples(
    alg: &ConditionalAlgebra,
    target: usize,
    start: usize,
    betas: &[usize],
    tuple: &mut Vec<usize>,
    out: &mut Vec<Block>,
) -> Result<()> {
    let mut prefix = vec![start];
    prefix.extend_from_slice(tuple);
    prefix.push(target);
    out.push(block(alg, &prefix)?);
    for &beta in betas {
        if !tuple.contains(&beta) {
            tuple.push(beta);
            extend_tuples(alg, target, start, betas, tuple, out)?;
            tuple.pop();
        }
    }
    Ok(())
}
