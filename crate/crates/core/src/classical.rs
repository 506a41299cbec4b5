//! Exact classical simulation of the reversible update rule
//! `s_{t+1} = s_{t-1} * F(S_t)`, cycle detection, classical damage spreading
//! and a rule-90 reference automaton.

use crate::error::{Error, Result};
use crate::netmodel::Network;

/// Classical spin configuration over the `2n` qubits of a network.
///
/// Bit `i < n` is the target register (previous-step value `s_{t-1}` at the
/// start of a step), bit `n + i` the control register (current value
/// `s_t`). Bit 1 is spin `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    n: usize,
    bits: Vec<bool>,
}

impl SpinConfig {
    /// All spins `-1`.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; 2 * n],
        }
    }

    pub fn from_bits(n: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != 2 * n {
            return Err(Error::ConfigLength {
                expected: 2 * n,
                got: bits.len(),
            });
        }
        Ok(Self { n, bits })
    }

    /// From spin values (`±1`) of the previous and current steps.
    pub fn from_spins(previous: &[i8], current: &[i8]) -> Result<Self> {
        let n = previous.len();
        let bits = previous.iter().chain(current).map(|&s| s > 0).collect();
        Self::from_bits(n, bits)
    }

    /// From a basis label: bit `q` of `label` is qubit `q`.
    pub fn from_label(n: usize, label: usize) -> Self {
        Self {
            n,
            bits: (0..2 * n).map(|q| label >> q & 1 == 1).collect(),
        }
    }

    pub fn to_label(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (q, &b)| acc | (usize::from(b) << q))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, q: usize) -> bool {
        self.bits[q]
    }

    pub fn flip(&mut self, q: usize) {
        self.bits[q] = !self.bits[q];
    }

    pub fn target(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn control(&self, i: usize) -> bool {
        self.bits[self.n + i]
    }

    pub fn spin(&self, q: usize) -> i8 {
        if self.bits[q] {
            1
        } else {
            -1
        }
    }

    /// Parses `0`/`1` or `-`/`+` characters, qubit 0 first.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '1' | '+' => Ok(true),
                '0' | '-' => Ok(false),
                other => Err(Error::Parse {
                    line: 0,
                    msg: format!("invalid state character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(n, bits)
    }

    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

fn check_classical(net: &Network) -> Result<()> {
    match net.nodes().iter().position(|nd| nd.hadamard) {
        Some(node) => Err(Error::HadamardPresent { node }),
        None => Ok(()),
    }
}

fn check_config(net: &Network, cfg: &SpinConfig) -> Result<()> {
    if cfg.n != net.n() {
        return Err(Error::ConfigLength {
            expected: 2 * net.n(),
            got: cfg.bits.len(),
        });
    }
    Ok(())
}

fn step_unchecked(net: &Network, cfg: &mut SpinConfig) {
    let n = net.n();
    let flips: Vec<bool> = net
        .nodes()
        .iter()
        .map(|nd| nd.action_for(|j| cfg.bits[n + j]).is_flip())
        .collect();
    for (i, f) in flips.into_iter().enumerate() {
        cfg.bits[i] ^= f;
        cfg.bits.swap(i, n + i);
    }
}

/// One synchronous update: each node's table acts on its target bit,
/// conditioned on the control register, then the registers swap.
pub fn step_classical(net: &Network, cfg: &SpinConfig) -> Result<SpinConfig> {
    check_classical(net)?;
    check_config(net, cfg)?;
    let mut next = cfg.clone();
    step_unchecked(net, &mut next);
    Ok(next)
}

/// Inverse of [`step_classical`]: swap first, then re-apply the logic.
pub fn unstep_classical(net: &Network, cfg: &SpinConfig) -> Result<SpinConfig> {
    check_classical(net)?;
    check_config(net, cfg)?;
    let n = net.n();
    let mut prev = cfg.clone();
    for i in 0..n {
        prev.bits.swap(i, n + i);
    }
    let flips: Vec<bool> = net
        .nodes()
        .iter()
        .map(|nd| nd.action_for(|j| prev.bits[n + j]).is_flip())
        .collect();
    for (i, f) in flips.into_iter().enumerate() {
        prev.bits[i] ^= f;
    }
    Ok(prev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleInfo {
    /// Always 0: reversible dynamics has no transients.
    pub transient: usize,
    pub period: usize,
}

/// Period of the orbit through `cfg`. Reversibility guarantees the orbit
/// returns to `cfg` itself, so no visited-state table is needed.
pub fn find_cycle(net: &Network, cfg: &SpinConfig, max_steps: usize) -> Result<CycleInfo> {
    check_classical(net)?;
    check_config(net, cfg)?;
    let mut cur = cfg.clone();
    for period in 1..=max_steps {
        step_unchecked(net, &mut cur);
        if cur == *cfg {
            return Ok(CycleInfo {
                transient: 0,
                period,
            });
        }
    }
    Err(Error::PeriodNotFound(max_steps))
}

/// Cycle lengths over the whole `4^n` state space, sorted descending.
pub fn cycle_structure(net: &Network) -> Result<Vec<usize>> {
    check_classical(net)?;
    let n = net.n();
    if 2 * n >= usize::BITS as usize - 1 {
        return Err(Error::DimensionCap { n, max: 30 });
    }
    let total = 1usize << (2 * n);
    let mut seen = vec![false; total];
    let mut lengths = Vec::new();
    for start in 0..total {
        if seen[start] {
            continue;
        }
        let mut cur = SpinConfig::from_label(n, start);
        let mut len = 0;
        loop {
            seen[cur.to_label()] = true;
            step_unchecked(net, &mut cur);
            len += 1;
            if cur.to_label() == start {
                break;
            }
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    Ok(lengths)
}

/// Difference between two trajectories after one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DamageStep {
    /// Differing target-register nodes, measured after the swaps.
    pub mask: Vec<bool>,
    pub distance: usize,
}

impl DamageStep {
    /// Mask as hex, node 0 in the least significant bit.
    pub fn mask_hex(&self) -> String {
        mask_to_hex(&self.mask)
    }
}

pub fn mask_to_hex(mask: &[bool]) -> String {
    let digits: String = mask
        .chunks(4)
        .rev()
        .map(|c| {
            let v = c
                .iter()
                .enumerate()
                .fold(0u32, |acc, (b, &on)| acc | (u32::from(on) << b));
            char::from_digit(v, 16).unwrap()
        })
        .collect();
    if digits.is_empty() {
        "0".into()
    } else {
        digits
    }
}

/// Runs `cfg` and a copy with target bit `flip_node` flipped for `steps`
/// steps, recording the differing target-register nodes after each step.
///
/// The target register is the one the generalized Hamming distance reads
/// after the swaps, so this series equals the X-mask of a Pauli frame
/// seeded with a single X on that target.
pub fn classical_damage_series(
    net: &Network,
    cfg: &SpinConfig,
    flip_node: usize,
    steps: usize,
) -> Result<Vec<DamageStep>> {
    check_classical(net)?;
    check_config(net, cfg)?;
    let n = net.n();
    if flip_node >= n {
        return Err(Error::NodeOutOfRange {
            index: flip_node,
            n,
        });
    }
    let mut a = cfg.clone();
    let mut b = cfg.clone();
    b.flip(flip_node);
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        step_unchecked(net, &mut a);
        step_unchecked(net, &mut b);
        let mask: Vec<bool> = (0..n).map(|i| a.bits[i] != b.bits[i]).collect();
        let distance = mask.iter().filter(|&&m| m).count();
        out.push(DamageStep { mask, distance });
    }
    Ok(out)
}

/// Boundary handling for [`rule90_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Cells outside the row read as 0.
    Null,
}

/// Rule 90: `row[k+1][c] = row[k][c-1] XOR row[k][c+1]`.
///
/// Returns `steps + 1` rows, the first being `initial`. With the damage grid
/// laid out as node (row) by time (column), successive upstream nodes obey
/// this rule along the time axis.
pub fn rule90_oracle(initial: &[bool], steps: usize, boundary: Boundary) -> Vec<Vec<bool>> {
    let w = initial.len();
    let mut grid = Vec::with_capacity(steps + 1);
    grid.push(initial.to_vec());
    for _ in 0..steps {
        let row = grid.last().unwrap();
        let at = |c: isize| -> bool {
            if w == 0 {
                return false;
            }
            match boundary {
                Boundary::Periodic => row[c.rem_euclid(w as isize) as usize],
                Boundary::Null => c >= 0 && (c as usize) < w && row[c as usize],
            }
        };
        let next = (0..w as isize).map(|c| at(c - 1) ^ at(c + 1)).collect();
        grid.push(next);
    }
    grid
}

/// Transposes damage masks into a node-by-time grid.
pub fn damage_grid(series: &[DamageStep]) -> Vec<Vec<bool>> {
    let n = series.first().map_or(0, |s| s.mask.len());
    (0..n)
        .map(|i| series.iter().map(|s| s.mask[i]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::fixtures::*;
    use crate::netmodel::K1Kind;

    #[test]
    fn or_and_step_from_all_up() {
        // (s_t, s_{t-1}) = (+1,+1,+1,+1): node 0 (OR true) flips, node 1
        // (AND true) keeps its previous value.
        let net = or_and();
        let cfg = SpinConfig::from_spins(&[1, 1], &[1, 1]).unwrap();
        let next = step_classical(&net, &cfg).unwrap();
        assert_eq!(next.spin(2), -1);
        assert_eq!(next.spin(3), 1);
        assert_eq!(next.spin(0), 1);
        assert_eq!(next.spin(1), 1);
    }

    #[test]
    fn or_and_cycle_structure() {
        assert_eq!(cycle_structure(&or_and()).unwrap(), vec![6, 4, 3, 3]);
    }

    #[test]
    fn const_identity_swaps_registers() {
        let net = loop_network(1, K1Kind::ConstI, false);
        for label in 0..4 {
            let cfg = SpinConfig::from_label(1, label);
            let p = find_cycle(&net, &cfg, 10).unwrap().period;
            assert_eq!(2 % p, 0);
            assert_eq!(p == 1, cfg.get(0) == cfg.get(1));
        }
    }

    #[test]
    fn unstep_inverts_step() {
        let net = or_and();
        for label in 0..16 {
            let cfg = SpinConfig::from_label(2, label);
            let next = step_classical(&net, &cfg).unwrap();
            assert_eq!(unstep_classical(&net, &next).unwrap(), cfg);
        }
    }

    #[test]
    fn hadamard_rejected() {
        let net = loop_network(2, K1Kind::Copy, true);
        let cfg = SpinConfig::zeros(2);
        assert_eq!(
            step_classical(&net, &cfg),
            Err(Error::HadamardPresent { node: 0 })
        );
        assert!(find_cycle(&net, &cfg, 5).is_err());
    }

    #[test]
    fn period_not_found() {
        let net = or_and();
        let cfg = SpinConfig::from_label(2, 0b1111);
        let period = find_cycle(&net, &cfg, 100).unwrap().period;
        assert!(period > 1);
        assert_eq!(
            find_cycle(&net, &cfg, period - 1),
            Err(Error::PeriodNotFound(period - 1))
        );
    }

    #[test]
    fn config_length_checked() {
        let net = or_and();
        assert!(step_classical(&net, &SpinConfig::zeros(3)).is_err());
        assert!(SpinConfig::from_bits(2, vec![true; 3]).is_err());
    }

    #[test]
    fn constant_network_damage_is_frozen() {
        let net = Network::k1(&[(0, K1Kind::ConstI), (0, K1Kind::ConstI)], false).unwrap();
        let series = classical_damage_series(&net, &SpinConfig::zeros(2), 1, 20).unwrap();
        // the flipped value oscillates between the two registers
        let visible: Vec<usize> = series.iter().map(|s| s.distance).collect();
        assert!(visible.iter().all(|&d| d <= 1));
        assert_eq!(visible.iter().filter(|&&d| d == 1).count(), 10);
        assert!(series.iter().all(|s| !s.mask[0]));
    }

    #[test]
    fn damage_rejects_bad_node() {
        let net = loop_network(3, K1Kind::Copy, false);
        assert!(matches!(
            classical_damage_series(&net, &SpinConfig::zeros(3), 3, 1),
            Err(Error::NodeOutOfRange { .. })
        ));
    }

    #[test]
    fn rule90_all_zero_stays_zero() {
        let grid = rule90_oracle(&[false; 9], 12, Boundary::Periodic);
        assert_eq!(grid.len(), 13);
        assert!(grid.iter().flatten().all(|&b| !b));
    }

    #[test]
    fn rule90_single_seed_is_pascal_mod_2() {
        let w = 41;
        let c0 = 20;
        let mut init = vec![false; w];
        init[c0] = true;
        let grid = rule90_oracle(&init, 16, Boundary::Null);
        for (k, row) in grid.iter().enumerate() {
            for (c, &cell) in row.iter().enumerate() {
                let d = c as isize - c0 as isize;
                let expected = if d.unsigned_abs() <= k && (k as isize + d) % 2 == 0 {
                    let m = (k as isize + d) as usize / 2;
                    // Lucas: C(k, m) odd iff m & !k == 0
                    m & !k == 0
                } else {
                    false
                };
                assert_eq!(cell, expected, "row {k} col {c}");
            }
        }
    }

    #[test]
    fn mask_hex_layout() {
        assert_eq!(mask_to_hex(&[true, false, false, false, true]), "11");
        assert_eq!(mask_to_hex(&[false, true]), "2");
        assert_eq!(mask_to_hex(&[]), "0");
    }

    #[test]
    fn label_round_trip() {
        for label in 0..64 {
            assert_eq!(SpinConfig::from_label(3, label).to_label(), label);
        }
        let cfg = SpinConfig::parse(2, "+-01").unwrap();
        assert_eq!(cfg.to_bit_string(), "1001");
    }
}
