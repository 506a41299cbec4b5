//! Network topology, truth functions, random K=1 ensembles and the
//! decomposition of a network into independent components.
//!
//! Qubit layout used throughout the crate: for a network of `n` nodes,
//! positions `0..n` are the target register (the value being updated, read
//! as the node state after the step's swaps) and positions `n..2n` are the
//! control register that conditions the logic gates.
//!
//! Truth tables are indexed by input pattern: input `j` contributes bit `j`
//! of the index, lowest input first. Bit value 1 stands for spin `+1`.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Action a truth-table row applies to the target qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Identity,
    Flip,
}

impl Action {
    pub fn is_flip(self) -> bool {
        self == Action::Flip
    }
}

/// Dense truth table: one action per input pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    k: usize,
    entries: Vec<Action>,
}

impl TruthTable {
    pub fn new(entries: Vec<Action>) -> Result<Self> {
        let len = entries.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::TableLength(len));
        }
        Ok(Self {
            k: len.trailing_zeros() as usize,
            entries,
        })
    }

    /// Parses a `0`/`1` string, one character per input pattern, `1` = flip.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let entries = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(Action::Identity),
                '1' => Ok(Action::Flip),
                other => Err(Error::Parse {
                    line: 0,
                    msg: format!("invalid table character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn to_bits(&self) -> String {
        self.entries
            .iter()
            .map(|a| if a.is_flip() { '1' } else { '0' })
            .collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[Action] {
        &self.entries
    }

    pub fn action(&self, pattern: usize) -> Action {
        self.entries[pattern]
    }
}

/// The four single-input truth functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum K1Kind {
    ConstI,
    ConstX,
    Copy,
    Not,
}

impl K1Kind {
    pub const ALL: [K1Kind; 4] = [K1Kind::ConstI, K1Kind::ConstX, K1Kind::Copy, K1Kind::Not];
}

impl fmt::Display for K1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            K1Kind::ConstI => "const-i",
            K1Kind::ConstX => "const-x",
            K1Kind::Copy => "copy",
            K1Kind::Not => "not",
        };
        f.write_str(s)
    }
}

/// Two-entry table for a single-input function. COPY flips the target when
/// the input is 1, NOT when the input is 0.
pub fn make_k1_function(kind: K1Kind) -> TruthTable {
    use Action::*;
    let entries = match kind {
        K1Kind::ConstI => vec![Identity, Identity],
        K1Kind::ConstX => vec![Flip, Flip],
        K1Kind::Copy => vec![Identity, Flip],
        K1Kind::Not => vec![Flip, Identity],
    };
    TruthTable { k: 1, entries }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub inputs: Vec<usize>,
    pub table: TruthTable,
    pub hadamard: bool,
}

/// Gate a node reduces to once non-effective inputs are pruned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingleInputGate {
    Identity,
    X,
    /// Flip when the input node's control qubit is 1.
    Cx(usize),
    /// Flip when the input node's control qubit is 0.
    CxBar(usize),
}

impl Node {
    pub fn new(inputs: Vec<usize>, table: TruthTable, hadamard: bool) -> Self {
        Self {
            inputs,
            table,
            hadamard,
        }
    }

    pub fn k1(input: usize, kind: K1Kind, hadamard: bool) -> Self {
        Self::new(vec![input], make_k1_function(kind), hadamard)
    }

    fn distinct_inputs(&self) -> Vec<usize> {
        let mut seen = Vec::new();
        for &i in &self.inputs {
            if !seen.contains(&i) {
                seen.push(i);
            }
        }
        seen
    }

    /// Table action for the given node values; `value(j)` is the bit of node `j`.
    pub fn action_for(&self, value: impl Fn(usize) -> bool) -> Action {
        let pattern = self
            .inputs
            .iter()
            .enumerate()
            .fold(0usize, |acc, (bit, &j)| {
                acc | (usize::from(value(j)) << bit)
            });
        self.table.action(pattern)
    }

    /// Action as a function of an assignment to the distinct input nodes.
    fn action_for_assignment(&self, distinct: &[usize], assignment: usize) -> Action {
        self.action_for(|j| {
            let pos = distinct.iter().position(|&d| d == j).unwrap();
            assignment >> pos & 1 == 1
        })
    }

    /// Reduces the node to a single-input gate, or `None` when two or more
    /// inputs are effective.
    pub fn single_input_gate(&self) -> Option<SingleInputGate> {
        let distinct = self.distinct_inputs();
        let effective = effective_inputs(self);
        match effective.as_slice() {
            [] => Some(if self.action_for_assignment(&distinct, 0).is_flip() {
                SingleInputGate::X
            } else {
                SingleInputGate::Identity
            }),
            [e] => {
                let pos = distinct.iter().position(|d| d == e).unwrap();
                let on_one = self.action_for_assignment(&distinct, 1 << pos);
                Some(if on_one.is_flip() {
                    SingleInputGate::Cx(*e)
                } else {
                    SingleInputGate::CxBar(*e)
                })
            }
            _ => None,
        }
    }
}

/// Inputs on which the node's action actually depends. Repeated inputs are
/// treated as one node, so a table is only evaluated on consistent patterns.
pub fn effective_inputs(node: &Node) -> Vec<usize> {
    let distinct = node.distinct_inputs();
    let total = 1usize << distinct.len();
    distinct
        .iter()
        .enumerate()
        .filter(|&(pos, _)| {
            (0..total).any(|a| {
                node.action_for_assignment(&distinct, a)
                    != node.action_for_assignment(&distinct, a ^ (1 << pos))
            })
        })
        .map(|(_, &j)| j)
        .collect()
}

/// Static circuit description: wiring, truth tables and Hadamard flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Network {
    nodes: Vec<Node>,
}

impl Network {
    pub fn new(nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let n = nodes.len();
        for (i, node) in nodes.iter().enumerate() {
            if node.table.k() != node.inputs.len() {
                return Err(Error::InputArity {
                    node: i,
                    expected: node.table.k(),
                    got: node.inputs.len(),
                });
            }
            if let Some(&bad) = node.inputs.iter().find(|&&j| j >= n) {
                return Err(Error::InputOutOfRange {
                    node: i,
                    input: bad,
                    n,
                });
            }
        }
        Ok(Self { nodes })
    }

    /// Single-input network from `(input, kind)` pairs.
    pub fn k1(wiring: &[(usize, K1Kind)], hadamard_all: bool) -> Result<Self> {
        Self::new(
            wiring
                .iter()
                .map(|&(input, kind)| Node::k1(input, kind, hadamard_all))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn has_hadamard(&self) -> bool {
        self.nodes.iter().any(|nd| nd.hadamard)
    }

    pub fn with_hadamard(mut self, flags: impl Fn(usize) -> bool) -> Self {
        for (i, nd) in self.nodes.iter_mut().enumerate() {
            nd.hadamard = flags(i);
        }
        self
    }

    pub fn map_tables(mut self, f: impl Fn(&TruthTable) -> TruthTable) -> Result<Self> {
        for nd in &mut self.nodes {
            nd.table = f(&nd.table);
        }
        Self::new(self.nodes)
    }

    /// Graphviz rendering of the wiring; non-effective inputs are dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph qlnet {\n");
        for (i, nd) in self.nodes.iter().enumerate() {
            let shape = if nd.hadamard {
                "doublecircle"
            } else {
                "circle"
            };
            out.push_str(&format!("  n{i} [shape={shape}];\n"));
        }
        for (i, nd) in self.nodes.iter().enumerate() {
            let eff = effective_inputs(nd);
            for &j in &nd.inputs {
                let style = if eff.contains(&j) { "solid" } else { "dashed" };
                out.push_str(&format!("  n{j} -> n{i} [style={style}];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Structural class of a component of a K=1 network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComponentClass {
    SimpleLoop,
    SimpleChain,
    LoopWithTrees,
    ChainWithTrees,
}

impl ComponentClass {
    pub const ALL: [ComponentClass; 4] = [
        ComponentClass::SimpleLoop,
        ComponentClass::SimpleChain,
        ComponentClass::LoopWithTrees,
        ComponentClass::ChainWithTrees,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    pub class: ComponentClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    /// Directed `(source, destination)` edges surviving input pruning.
    pub effective_edges: Vec<(usize, usize)>,
}

impl ComponentReport {
    pub fn component_of(&self, node: usize) -> Option<&Component> {
        self.components
            .iter()
            .find(|c| c.nodes.binary_search(&node).is_ok())
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Splits a K=1 network into weakly connected components of its effective
/// graph and classifies each one.
pub fn decompose(net: &Network) -> Result<ComponentReport> {
    let n = net.n();
    let mut edges = Vec::new();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for (i, node) in net.nodes().iter().enumerate() {
        let eff = effective_inputs(node);
        if eff.len() > 1 {
            return Err(Error::NotFunctionalGraph {
                node: i,
                count: eff.len(),
            });
        }
        for &j in &eff {
            edges.push((j, i));
            indeg[i] += 1;
            outdeg[j] += 1;
        }
    }

    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(v);
    }

    let components = groups
        .into_iter()
        .map(|nodes| {
            // in-degree <= 1 everywhere: either every node has an input (one
            // cycle) or exactly one constant-driven root (a tree).
            let has_cycle = nodes.iter().all(|&v| indeg[v] == 1);
            let linear = nodes.iter().all(|&v| outdeg[v] <= 1);
            let class = match (has_cycle, linear) {
                (true, true) => ComponentClass::SimpleLoop,
                (true, false) => ComponentClass::LoopWithTrees,
                (false, true) => ComponentClass::SimpleChain,
                (false, false) => ComponentClass::ChainWithTrees,
            };
            Component { nodes, class }
        })
        .collect();

    Ok(ComponentReport {
        components,
        effective_edges: edges,
    })
}

/// Relative weights of the four single-input functions in a random ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionWeights {
    pub const_i: f64,
    pub const_x: f64,
    pub copy: f64,
    pub not: f64,
}

impl Default for FunctionWeights {
    fn default() -> Self {
        Self::uniform()
    }
}

impl FunctionWeights {
    pub fn uniform() -> Self {
        Self {
            const_i: 1.0,
            const_x: 1.0,
            copy: 1.0,
            not: 1.0,
        }
    }

    /// All weight on one kind.
    pub fn only(kind: K1Kind) -> Self {
        let mut w = Self {
            const_i: 0.0,
            const_x: 0.0,
            copy: 0.0,
            not: 0.0,
        };
        *w.weight_mut(kind) = 1.0;
        w
    }

    pub fn weight(&self, kind: K1Kind) -> f64 {
        match kind {
            K1Kind::ConstI => self.const_i,
            K1Kind::ConstX => self.const_x,
            K1Kind::Copy => self.copy,
            K1Kind::Not => self.not,
        }
    }

    fn weight_mut(&mut self, kind: K1Kind) -> &mut f64 {
        match kind {
            K1Kind::ConstI => &mut self.const_i,
            K1Kind::ConstX => &mut self.const_x,
            K1Kind::Copy => &mut self.copy,
            K1Kind::Not => &mut self.not,
        }
    }

    pub fn sampler(&self) -> Result<WeightedIndex<f64>> {
        let w = K1Kind::ALL.map(|k| self.weight(k));
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidWeights(format!("{w:?}")));
        }
        WeightedIndex::new(w).map_err(|e| Error::InvalidWeights(e.to_string()))
    }
}

impl std::str::FromStr for FunctionWeights {
    type Err = Error;

    /// Accepts `uniform`, a single kind name (`copy`), or four comma-separated
    /// weights in the order const-i, const-x, copy, not.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let kind = match s {
            "uniform" => return Ok(Self::uniform()),
            "const-i" => Some(K1Kind::ConstI),
            "const-x" => Some(K1Kind::ConstX),
            "copy" => Some(K1Kind::Copy),
            "not" => Some(K1Kind::Not),
            _ => None,
        };
        if let Some(k) = kind {
            return Ok(Self::only(k));
        }
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidWeights(format!("{s:?}: {e}")))?;
        match parts.as_slice() {
            &[const_i, const_x, copy, not] => {
                let w = Self {
                    const_i,
                    const_x,
                    copy,
                    not,
                };
                w.sampler()?;
                Ok(w)
            }
            _ => Err(Error::InvalidWeights(format!("{s:?}: expected 4 weights"))),
        }
    }
}

/// Random K=1 network drawn from an existing generator.
pub fn random_k1_network_with<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    sampler: &WeightedIndex<f64>,
    hadamard_all: bool,
) -> Result<Network> {
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    let nodes = (0..n)
        .map(|_| {
            let input = rng.random_range(0..n);
            let kind = K1Kind::ALL[sampler.sample(rng)];
            Node::k1(input, kind, hadamard_all)
        })
        .collect();
    Network::new(nodes)
}

/// Random K=1 network: inputs uniform over all nodes (self-inputs allowed),
/// kinds drawn from `weights`. Deterministic in `seed`.
pub fn random_k1_network(
    n: usize,
    seed: u64,
    weights: &FunctionWeights,
    hadamard_all: bool,
) -> Result<Network> {
    let sampler = weights.sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_k1_network_with(n, &mut rng, &sampler, hadamard_all)
}

const MAGIC: &str = "qlnet v1";

/// Serializes in the line-based `qlnet v1` format. Each `header` line is
/// written as a `#` comment.
pub fn write_network(net: &Network, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("nodes {}\n", net.n()));
    for (i, nd) in net.nodes().iter().enumerate() {
        let inputs = if nd.inputs.is_empty() {
            "-".to_string()
        } else {
            nd.inputs
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!(
            "node {i} inputs {inputs} table {} hadamard {}\n",
            nd.table.to_bits(),
            u8::from(nd.hadamard)
        ));
    }
    out
}

/// Parses the `qlnet v1` format. Blank lines and `#` comments are ignored.
pub fn parse_network(text: &str) -> Result<Network> {
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        Some((ln, l)) => return Err(err(ln, format!("expected {MAGIC:?}, found {l:?}"))),
        None => return Err(err(0, "empty input".into())),
    }
    let n = match lines.next() {
        Some((ln, l)) => {
            let mut tok = l.split_whitespace();
            match (tok.next(), tok.next().map(str::parse::<usize>), tok.next()) {
                (Some("nodes"), Some(Ok(n)), None) => n,
                _ => return Err(err(ln, format!("expected `nodes <n>`, found {l:?}"))),
            }
        }
        None => return Err(err(0, "missing `nodes` line".into())),
    };

    let mut slots: Vec<Option<Node>> = vec![None; n];
    for (ln, l) in lines {
        let tok: Vec<&str> = l.split_whitespace().collect();
        let (idx, inputs, table, had) = match tok.as_slice() {
            ["node", i, "inputs", inp, "table", t, "hadamard", h] => (*i, *inp, *t, *h),
            _ => return Err(err(ln, format!("malformed node line {l:?}"))),
        };
        let idx: usize = idx
            .parse()
            .map_err(|_| err(ln, format!("bad node index {idx:?}")))?;
        if idx >= n {
            return Err(err(ln, format!("node index {idx} >= {n}")));
        }
        let inputs: Vec<usize> = if inputs == "-" {
            Vec::new()
        } else {
            inputs
                .split(',')
                .map(|s| s.parse().map_err(|_| err(ln, format!("bad input {s:?}"))))
                .collect::<Result<_>>()?
        };
        let table = TruthTable::from_bits(table).map_err(|e| err(ln, e.to_string()))?;
        let hadamard = match had {
            "0" => false,
            "1" => true,
            _ => return Err(err(ln, format!("hadamard must be 0 or 1, found {had:?}"))),
        };
        if slots[idx].is_some() {
            return Err(err(ln, format!("duplicate node {idx}")));
        }
        slots[idx] = Some(Node::new(inputs, table, hadamard));
    }
    let nodes = slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| err(0, format!("node {i} missing"))))
        .collect::<Result<Vec<_>>>()?;
    Network::new(nodes)
}

/// Fixture networks used by tests, benches and the bundled example files.
pub mod fixtures {
    use super::*;

    /// Two-node, two-input network: node 0 flips where OR of the inputs is
    /// true, node 1 flips where AND of the inputs is false.
    pub fn or_and() -> Network {
        Network::new(vec![
            Node::new(vec![0, 1], TruthTable::from_bits("0111").unwrap(), false),
            Node::new(vec![0, 1], TruthTable::from_bits("1110").unwrap(), false),
        ])
        .unwrap()
    }

    /// Ring where node `i` reads node `i - 1` (node 0 reads node `n - 1`).
    pub fn loop_network(n: usize, kind: K1Kind, hadamard_all: bool) -> Network {
        let wiring: Vec<_> = (0..n).map(|i| ((i + n - 1) % n, kind)).collect();
        Network::k1(&wiring, hadamard_all).unwrap()
    }

    /// Path where node 0 carries a constant function and node `i` reads
    /// node `i - 1`.
    pub fn chain_network(n: usize, kind: K1Kind, hadamard_all: bool) -> Network {
        let wiring: Vec<_> = (0..n)
            .map(|i| {
                if i == 0 {
                    (0, K1Kind::ConstI)
                } else {
                    (i - 1, kind)
                }
            })
            .collect();
        Network::k1(&wiring, hadamard_all).unwrap()
    }

    /// Chain of `chain_len` nodes hanging off a self-looped node 0.
    pub fn chain_on_loop(chain_len: usize, hadamard_all: bool) -> Network {
        let wiring: Vec<_> = (0..=chain_len)
            .map(|i| (i.saturating_sub(1), K1Kind::Copy))
            .collect();
        Network::k1(&wiring, hadamard_all).unwrap()
    }

    /// Chain with one extra node attached to its second node.
    pub fn chain_with_branch() -> Network {
        use K1Kind::*;
        Network::k1(
            &[(0, ConstI), (0, Copy), (1, Copy), (2, Copy), (1, Copy)],
            false,
        )
        .unwrap()
    }

    /// Loop of three with one extra node fed by node 0.
    pub fn loop_with_branch() -> Network {
        use K1Kind::*;
        Network::k1(&[(2, Copy), (0, Copy), (1, Copy), (0, Copy)], false).unwrap()
    }
}
