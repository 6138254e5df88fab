//! Path-context mining.
//!
//! A path-context joins two leaves through their lowest common ancestor:
//! the node types going up from the first leaf, the ancestor itself, then
//! down to the second leaf. Leaves carry normalized subtokens and the
//! resolved type of the original token.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ast::AstNode;
use crate::subtokens::split_subtokens;
use crate::types::NO_TYPE;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathContext {
    pub start_token: Vec<String>,
    pub start_type: String,
    /// Node types from the start leaf up to the common ancestor and down to the end leaf.
    pub path: Vec<String>,
    pub end_token: Vec<String>,
    pub end_type: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinerLimits {
    /// Longest path, counted in nodes including both leaves.
    pub max_path_nodes: usize,
    /// Largest child-index gap between the two branches at the common ancestor.
    pub max_path_width: usize,
    pub max_contexts: usize,
    pub rng_seed: u64,
}

impl Default for MinerLimits {
    fn default() -> Self {
        Self {
            max_path_nodes: 9,
            max_path_width: 2,
            max_contexts: 200,
            rng_seed: 0,
        }
    }
}

impl MinerLimits {
    pub fn unlimited() -> Self {
        Self {
            max_path_nodes: usize::MAX,
            max_path_width: usize::MAX,
            max_contexts: usize::MAX,
            rng_seed: 0,
        }
    }
}

/// A tree flattened into preorder arrays.
struct Flat<'a> {
    nodes: Vec<&'a AstNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Node ids of the leaves, in leaf order.
    leaves: Vec<usize>,
}

impl<'a> Flat<'a> {
    fn new(root: &'a AstNode) -> Self {
        let mut flat = Flat {
            nodes: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            leaves: Vec::new(),
        };
        let mut stack = vec![(root, None)];
        while let Some((node, parent)) = stack.pop() {
            let id = flat.nodes.len();
            flat.nodes.push(node);
            flat.parent.push(parent);
            flat.children.push(Vec::new());
            if let Some(p) = parent {
                flat.children[p].push(id);
            }
            if node.is_leaf() {
                flat.leaves.push(id);
            }
            stack.extend(node.children.iter().rev().map(|c| (c, Some(id))));
        }
        flat
    }
}

/// Part of a path from a leaf up to (and including) some node.
#[derive(Clone, Copy)]
struct Upward {
    leaf: usize,
    /// Node count from the leaf to the current node, both included.
    len: usize,
}

/// Every leaf pair whose path fits `limits`, ordered by (first leaf, second leaf).
///
/// Pairs are found bottom-up: each node receives the upward pieces of its
/// children and joins pieces coming from different children, so pieces
/// that are already too long never meet.
pub fn enumerate_paths(tree: &AstNode, limits: &MinerLimits) -> Vec<PathContext> {
    let flat = Flat::new(tree);
    let leaf_index: std::collections::HashMap<usize, usize> = flat
        .leaves
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();

    let mut pieces: Vec<Vec<Upward>> = vec![Vec::new(); flat.nodes.len()];
    // (first leaf index, second leaf index, first node, second node, ancestor)
    let mut pairs: Vec<(usize, usize, usize, usize, usize)> = Vec::new();

    // Preorder ids: every child has a larger id than its parent.
    for v in (0..flat.nodes.len()).rev() {
        if flat.children[v].is_empty() {
            pieces[v].push(Upward { leaf: v, len: 1 });
            continue;
        }
        let kids = &flat.children[v];
        for (i, &left) in kids.iter().enumerate() {
            for (gap, &right) in kids[i + 1..].iter().enumerate() {
                if gap + 1 > limits.max_path_width {
                    break;
                }
                for a in &pieces[left] {
                    for b in &pieces[right] {
                        if a.len + b.len < limits.max_path_nodes {
                            pairs.push((leaf_index[&a.leaf], leaf_index[&b.leaf], a.leaf, b.leaf, v));
                        }
                    }
                }
            }
        }
        let mut up = Vec::new();
        for &c in kids {
            for p in std::mem::take(&mut pieces[c]) {
                // At the parent the piece grows by `v`, and a path needs at
                // least one more node on the other side.
                if p.len + 3 <= limits.max_path_nodes {
                    up.push(Upward {
                        leaf: p.leaf,
                        len: p.len + 1,
                    });
                }
            }
        }
        pieces[v] = up;
    }

    pairs.sort_unstable_by_key(|&(a, b, ..)| (a, b));
    pairs
        .into_iter()
        .map(|(_, _, a, b, lca)| context(&flat, a, b, lca))
        .collect()
}

fn context(flat: &Flat<'_>, a: usize, b: usize, lca: usize) -> PathContext {
    let label = |id: usize| flat.nodes[id].node_type.clone();
    let mut path = Vec::new();
    let mut x = a;
    while x != lca {
        path.push(label(x));
        x = flat.parent[x].expect("ancestor above leaf");
    }
    path.push(label(lca));
    let mark = path.len();
    let mut y = b;
    while y != lca {
        path.push(label(y));
        y = flat.parent[y].expect("ancestor above leaf");
    }
    path[mark..].reverse();

    let (start, end) = (flat.nodes[a], flat.nodes[b]);
    PathContext {
        start_token: split_subtokens(start.token.as_deref().unwrap_or_default()),
        start_type: leaf_type(start),
        path,
        end_token: split_subtokens(end.token.as_deref().unwrap_or_default()),
        end_type: leaf_type(end),
    }
}

fn leaf_type(node: &AstNode) -> String {
    node.resolved_type
        .clone()
        .unwrap_or_else(|| NO_TYPE.to_owned())
}

/// Stable per-tree sampling key: the label plus the tree's leaf count.
pub fn tree_key(label: &str, tree: &AstNode) -> String {
    format!("{label}#{}", tree.leaves().len())
}

/// Keeps at most `max_contexts`, chosen uniformly by a generator seeded from
/// `rng_seed` and `tree_key`. The survivors keep their original order.
pub fn sample_contexts(
    contexts: Vec<PathContext>,
    limits: &MinerLimits,
    tree_key: &str,
) -> Vec<PathContext> {
    if contexts.len() <= limits.max_contexts {
        return contexts;
    }
    let mut hasher = Sha256::new();
    hasher.update(limits.rng_seed.to_le_bytes());
    hasher.update(tree_key.as_bytes());
    let seed: [u8; 32] = hasher.finalize().into();
    let mut rng = ChaCha8Rng::from_seed(seed);

    let mut keep = index::sample(&mut rng, contexts.len(), limits.max_contexts).into_vec();
    keep.sort_unstable();
    let mut keep = keep.into_iter().peekable();
    contexts
        .into_iter()
        .enumerate()
        .filter_map(|(i, ctx)| {
            if keep.peek() == Some(&i) {
                keep.next();
                Some(ctx)
            } else {
                None
            }
        })
        .collect()
}
