//! Unordered rooted trees and the prime tree map `t(p)`.
//!
//! `t(2)` is a single node; for odd `p`, `t(p)` grafts `k` copies of `t(q)`
//! onto a new root for every `q^k` exactly dividing `p - 1`. Children are
//! kept sorted by their AHU encoding, so derived equality is isomorphism.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::arithmetic::PrimeTable;
use crate::error::{Error, Result};

/// An unordered rooted tree in canonical form. Cloning is cheap: subtrees
/// are reference counted and shared.
#[derive(Clone)]
pub struct RootedTree(Arc<Node>);

struct Node {
    children: Vec<RootedTree>,
    encoding: String,
    size: usize,
}

impl RootedTree {
    /// The single-node tree `•`.
    pub fn leaf() -> Self {
        Self::b_plus(Vec::new())
    }

    /// Grafts the forest onto a common new root.
    pub fn b_plus(forest: impl IntoIterator<Item = RootedTree>) -> Self {
        let mut children: Vec<RootedTree> = forest.into_iter().collect();
        children.sort_by(|a, b| a.encode().cmp(b.encode()));
        let len = 2 + children.iter().map(|c| c.encode().len()).sum::<usize>();
        let mut encoding = String::with_capacity(len);
        encoding.push('(');
        for c in &children {
            encoding.push_str(c.encode());
        }
        encoding.push(')');
        let size = 1 + children.iter().map(RootedTree::degree).sum::<usize>();
        RootedTree(Arc::new(Node {
            children,
            encoding,
            size,
        }))
    }

    /// Parses an AHU parenthesis string such as `"((())())"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut stack: Vec<Vec<RootedTree>> = Vec::new();
        let mut done: Option<RootedTree> = None;
        for (i, ch) in s.chars().enumerate() {
            if done.is_some() {
                return Err(Error::Parse(format!("trailing input at offset {i}")));
            }
            match ch {
                '(' => stack.push(Vec::new()),
                ')' => {
                    let kids = stack
                        .pop()
                        .ok_or_else(|| Error::Parse(format!("unbalanced ')' at offset {i}")))?;
                    let t = RootedTree::b_plus(kids);
                    match stack.last_mut() {
                        Some(parent) => parent.push(t),
                        None => done = Some(t),
                    }
                }
                other => return Err(Error::Parse(format!("unexpected {other:?} at offset {i}"))),
            }
        }
        done.ok_or_else(|| Error::Parse("incomplete tree encoding".into()))
    }

    /// Children in canonical (ascending encoding) order.
    pub fn children(&self) -> &[RootedTree] {
        &self.0.children
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    /// Number of nodes, root included.
    pub fn degree(&self) -> usize {
        self.0.size
    }

    /// AHU canonical encoding: `"()"` for a leaf, otherwise `"("` followed
    /// by the lexicographically sorted child encodings and `")"`.
    pub fn encode(&self) -> &str {
        &self.0.encoding
    }

    pub fn height(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(RootedTree::height)
            .max()
            .unwrap_or(0)
    }

    /// Recovers the prime a tree stands for: 2 at a leaf, and one more than
    /// the product of the children's values elsewhere. For `t(p)` this is
    /// `p`. `None` on overflow.
    pub fn prime_value(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for c in self.children() {
            acc = acc.checked_mul(c.prime_value()?)?;
        }
        if self.is_leaf() {
            Some(2)
        } else {
            acc.checked_add(1)
        }
    }
}

impl PartialEq for RootedTree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.encode() == other.encode()
    }
}

impl Eq for RootedTree {}

impl Hash for RootedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.encode().hash(state);
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encode().cmp(other.encode())
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedTree({})", self.encode())
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encode())
    }
}

pub fn b_plus(forest: impl IntoIterator<Item = RootedTree>) -> RootedTree {
    RootedTree::b_plus(forest)
}

pub fn degree(t: &RootedTree) -> usize {
    t.degree()
}

pub fn encode(t: &RootedTree) -> &str {
    t.encode()
}

/// `w(p)`: number of distinct prime divisors of `p - 1`.
pub fn support_grading(table: &PrimeTable, p: u64) -> Result<u32> {
    table.require_prime(p)?;
    Ok(table.factorize(p - 1)?.len() as u32)
}

/// `W(p)`: sum of the exponents in the factorization of `p - 1`.
pub fn total_weight(table: &PrimeTable, p: u64) -> Result<u32> {
    table.require_prime(p)?;
    Ok(table.factorize(p - 1)?.total() as u32)
}

/// Memoized `t(p)` for primes within a table. Safe to share between
/// threads; concurrent misses may build the same tree twice, which is
/// harmless since the results are structurally equal.
pub struct PrimeTreeCache {
    table: Arc<PrimeTable>,
    memo: RwLock<HashMap<u64, RootedTree>>,
}

impl PrimeTreeCache {
    pub fn new(table: Arc<PrimeTable>) -> Self {
        let mut memo = HashMap::new();
        memo.insert(2, RootedTree::leaf());
        PrimeTreeCache {
            table,
            memo: RwLock::new(memo),
        }
    }

    pub fn table(&self) -> &Arc<PrimeTable> {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `t(p)`. Errors if `p` is composite or beyond the table limit.
    pub fn prime_tree(&self, p: u64) -> Result<RootedTree> {
        self.table.check_in_table(p)?;
        self.table.require_prime(p)?;
        self.get_or_build(p)
    }

    fn get_or_build(&self, p: u64) -> Result<RootedTree> {
        if let Some(t) = self.memo.read().unwrap().get(&p) {
            return Ok(t.clone());
        }
        let mut forest = Vec::new();
        for (q, k) in self.table.factorize(p - 1)?.iter() {
            let sub = self.get_or_build(q)?;
            forest.extend(std::iter::repeat_n(sub, k as usize));
        }
        let t = RootedTree::b_plus(forest);
        self.memo.write().unwrap().insert(p, t.clone());
        Ok(t)
    }
}

impl fmt::Debug for PrimeTreeCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeTreeCache")
            .field("limit", &self.table.limit())
            .field("cached", &self.len())
            .finish()
    }
}

/// Shorthand for [`PrimeTreeCache::prime_tree`].
pub fn prime_tree(cache: &PrimeTreeCache, p: u64) -> Result<RootedTree> {
    cache.prime_tree(p)
}

#[derive(Serialize)]
struct LabeledNode {
    p: u64,
    children: Vec<LabeledNode>,
}

fn labeled(t: &RootedTree) -> Result<LabeledNode> {
    Ok(LabeledNode {
        p: label(t)?,
        children: t.children().iter().map(labeled).collect::<Result<_>>()?,
    })
}

fn label(t: &RootedTree) -> Result<u64> {
    t.prime_value()
        .ok_or_else(|| Error::Overflow("subtree prime value exceeds 64 bits".into()))
}

/// Compact JSON `{"p":<prime>,"children":[...]}`, children in canonical order.
pub fn to_json(t: &RootedTree) -> Result<String> {
    Ok(serde_json::to_string(&labeled(t)?).expect("serializing plain structs cannot fail"))
}

/// Graphviz DOT. Nodes are numbered in depth-first preorder over the
/// canonical child order and labelled with the prime value of their subtree;
/// edges point from parent to child.
pub fn to_dot(t: &RootedTree) -> Result<String> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    fn walk(
        t: &RootedTree,
        parent: Option<usize>,
        nodes: &mut Vec<u64>,
        edges: &mut Vec<(usize, usize)>,
    ) -> Result<()> {
        let id = nodes.len();
        nodes.push(label(t)?);
        if let Some(parent) = parent {
            edges.push((parent, id));
        }
        for c in t.children() {
            walk(c, Some(id), nodes, edges)?;
        }
        Ok(())
    }
    walk(t, None, &mut nodes, &mut edges)?;

    let mut out = String::new();
    writeln!(out, "digraph t{} {{", nodes[0]).unwrap();
    for (i, p) in nodes.iter().enumerate() {
        writeln!(out, "    n{i} [label=\"{p}\"];").unwrap();
    }
    for (a, b) in edges {
        writeln!(out, "    n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

/// One line per node in preorder, indented two spaces per level.
pub fn to_text(t: &RootedTree) -> Result<String> {
    fn walk(t: &RootedTree, depth: usize, out: &mut String) -> Result<()> {
        writeln!(out, "{:indent$}{}", "", label(t)?, indent = 2 * depth).unwrap();
        for c in t.children() {
            walk(c, depth + 1, out)?;
        }
        Ok(())
    }
    let mut out = String::new();
    walk(t, 0, &mut out)?;
    Ok(out)
}
