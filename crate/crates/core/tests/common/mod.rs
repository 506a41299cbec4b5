#![allow(dead_code)]

use qlnet::netmodel::{Action, Network, Node, TruthTable};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_table<R: Rng>(rng: &mut R, k: usize) -> TruthTable {
    let entries = (0..1usize << k)
        .map(|_| {
            if rng.random() {
                Action::Flip
            } else {
                Action::Identity
            }
        })
        .collect();
    TruthTable::new(entries).unwrap()
}

/// Single-input network with arbitrary tables and Hadamard flags drawn with
/// probability `p_h`.
pub fn random_k1<R: Rng>(rng: &mut R, n: usize, p_h: f64) -> Network {
    let nodes = (0..n)
        .map(|_| {
            Node::new(
                vec![rng.random_range(0..n)],
                random_table(rng, 1),
                rng.random_bool(p_h),
            )
        })
        .collect();
    Network::new(nodes).unwrap()
}

/// Network whose nodes read up to `kmax` inputs, repeats allowed.
pub fn random_kmax<R: Rng>(rng: &mut R, n: usize, kmax: usize, p_h: f64) -> Network {
    let nodes = (0..n)
        .map(|_| {
            let k = rng.random_range(0..=kmax);
            let inputs = (0..k).map(|_| rng.random_range(0..n)).collect();
            Node::new(inputs, random_table(rng, k), rng.random_bool(p_h))
        })
        .collect();
    Network::new(nodes).unwrap()
}

/// Binary-symplectic frame: `x[q]`, `z[q]` per qubit, signs ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symplectic {
    pub n: usize,
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl Symplectic {
    pub fn single_x(n: usize, node: usize) -> Self {
        let mut s = Self {
            n,
            x: vec![false; 2 * n],
            z: vec![false; 2 * n],
        };
        s.x[node] = true;
        s
    }

    /// One network step: Hadamards, one controlled-X per node with an
    /// effective input, register swap.
    pub fn step(&mut self, net: &Network) {
        let n = self.n;
        for (i, node) in net.nodes().iter().enumerate() {
            if node.hadamard {
                std::mem::swap(&mut self.x[i], &mut self.z[i]);
            }
        }
        for (i, node) in net.nodes().iter().enumerate() {
            let distinct: std::collections::BTreeSet<usize> = node.inputs.iter().copied().collect();
            assert!(distinct.len() <= 1, "single-input networks only");
            if let Some(&j) = distinct.iter().next() {
                // repeated copies of one input only reach the all-0 and all-1 rows
                let all = (1 << node.inputs.len()) - 1;
                let depends = node.table.action(0) != node.table.action(all);
                if depends {
                    let (c, t) = (n + j, i);
                    self.x[t] ^= self.x[c];
                    self.z[c] ^= self.z[t];
                }
            }
        }
        for q in 0..n {
            self.x.swap(q, n + q);
            self.z.swap(q, n + q);
        }
    }

    /// Labels coded I=0, X=1, Y=2, Z=3.
    pub fn codes(&self) -> Vec<u8> {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| match (x, z) {
                (false, false) => 0,
                (true, false) => 1,
                (true, true) => 2,
                (false, true) => 3,
            })
            .collect()
    }

    pub fn hamming(&self) -> usize {
        (0..self.n).filter(|&q| self.x[q] || self.z[q]).count()
    }
}
