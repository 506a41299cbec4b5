//! Ensemble studies over random K=1 networks.
//!
//! Every realization draws its own generator from `(seed, n, index)`, so
//! results do not depend on how realizations are scheduled. Per-realization
//! values are collected in index order and reduced sequentially with
//! compensated sums, which keeps parallel and sequential runs bit-identical.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::{
    decompose, random_k1_network_with, ComponentClass, FunctionWeights, Network,
};
use crate::pauliframe::{FramePropagator, PauliFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Classical,
    /// Hadamard on every target qubit.
    QuantumAllH,
}

impl Mode {
    pub fn hadamard_all(self) -> bool {
        self == Mode::QuantumAllH
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Classical => "classical",
            Mode::QuantumAllH => "quantum",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "classical" => Ok(Mode::Classical),
            "quantum" | "quantum_all_h" => Ok(Mode::QuantumAllH),
            _ => Err(Error::InvalidConfig(format!("unknown mode {s:?}"))),
        }
    }
}

fn default_realizations() -> usize {
    1000
}

fn default_steps() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnsembleConfig {
    pub sizes: Vec<usize>,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    pub mode: Mode,
    #[serde(default)]
    pub function_weights: FunctionWeights,
}

impl EnsembleConfig {
    pub fn new(sizes: Vec<usize>, mode: Mode) -> Self {
        Self {
            sizes,
            realizations: default_realizations(),
            steps: default_steps(),
            seed: 0,
            mode,
            function_weights: FunctionWeights::uniform(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidConfig(
                "realizations must be at least 1".into(),
            ));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::InvalidConfig("no network sizes given".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::EmptyNetwork);
        }
        self.function_weights.sampler()?;
        Ok(())
    }

    /// Same config with the other mode; seeds, and therefore networks and
    /// perturbation sites, are shared.
    pub fn with_mode(&self, mode: Mode) -> Self {
        Self {
            mode,
            ..self.clone()
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of realization `index` at size `n`.
pub fn realization_seed(seed: u64, n: usize, index: usize) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(n as u64)) ^ index as u64)
}

/// Outcome of one perturbed network.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub node: usize,
    /// Hamming distance averaged over the steps.
    pub mean_distance: f64,
    pub max_distance: usize,
    /// Sizes of all components of the drawn network.
    pub components: Vec<(usize, ComponentClass)>,
    /// Whether every frame stayed on the perturbed node's component.
    pub confined: bool,
}

/// Draws realization `index` at size `n` and returns the network with the
/// perturbed node.
pub fn draw_realization(cfg: &EnsembleConfig, n: usize, index: usize) -> Result<(Network, usize)> {
    let sampler = cfg.function_weights.sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(realization_seed(cfg.seed, n, index));
    let net = random_k1_network_with(n, &mut rng, &sampler, cfg.mode.hadamard_all())?;
    let node = rng.random_range(0..n);
    Ok((net, node))
}

pub fn run_realization(cfg: &EnsembleConfig, n: usize, index: usize) -> Result<Realization> {
    let (net, node) = draw_realization(cfg, n, index)?;
    let report = decompose(&net)?;
    let mut allowed = vec![false; 2 * n];
    for &i in &report
        .component_of(node)
        .expect("every node has a component")
        .nodes
    {
        allowed[i] = true;
        allowed[n + i] = true;
    }

    let prop = FramePropagator::new(&net)?;
    let mut frame = PauliFrame::single_x(n, node)?;
    let mut sum = 0usize;
    let mut max = 0usize;
    let mut confined = true;
    for _ in 0..cfg.steps {
        prop.step(&mut frame);
        let h = frame.hamming();
        sum += h;
        max = max.max(h);
        confined &= frame.support().iter().all(|&q| allowed[q]);
    }
    Ok(Realization {
        node,
        mean_distance: sum as f64 / cfg.steps as f64,
        max_distance: max,
        components: report
            .components
            .iter()
            .map(|c| (c.nodes.len(), c.class))
            .collect(),
        confined,
    })
}

/// Running mean and variance with Kahan-compensated sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    count: usize,
    sum: f64,
    sum_c: f64,
    sq: f64,
    sq_c: f64,
}

fn kahan(sum: &mut f64, comp: &mut f64, x: f64) {
    let y = x - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        kahan(&mut self.sum, &mut self.sum_c, x);
        kahan(&mut self.sq, &mut self.sq_c, x * x);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    /// Sample variance (n - 1 denominator).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        ((self.sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for Accumulator {
    fn from_iter<T: IntoIterator<Item = f64>>(iter: T) -> Self {
        let mut acc = Self::default();
        iter.into_iter().for_each(|x| acc.push(x));
        acc
    }
}

/// Component counts over an ensemble at one size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentStats {
    pub n: usize,
    pub realizations: usize,
    /// `size_counts[s]`: components of size `s`.
    pub size_counts: Vec<usize>,
    /// `class_counts[s][c]`: components of size `s` and class index `c`.
    pub class_counts: Vec<[usize; 4]>,
}

impl ComponentStats {
    fn new(n: usize) -> Self {
        Self {
            n,
            realizations: 0,
            size_counts: vec![0; n + 1],
            class_counts: vec![[0; 4]; n + 1],
        }
    }

    fn add(&mut self, components: &[(usize, ComponentClass)]) {
        self.realizations += 1;
        for &(s, c) in components {
            self.size_counts[s] += 1;
            self.class_counts[s][c.index()] += 1;
        }
    }

    /// Fraction of size-`s` components that are simple loops or chains.
    pub fn simple_fraction(&self, s: usize) -> Option<f64> {
        let total = *self.size_counts.get(s)?;
        if total == 0 {
            return None;
        }
        let [l, c, _, _] = self.class_counts[s];
        Some((l + c) as f64 / total as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SizeResult {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    /// Mean over realizations of the largest distance in the run.
    pub time_max: f64,
    pub time_max_stderr: f64,
    /// Realizations in which a frame left the perturbed component.
    pub unconfined: usize,
    pub components: ComponentStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EnsembleResult {
    pub config: EnsembleConfig,
    pub per_size: Vec<SizeResult>,
}

impl EnsembleResult {
    pub fn means(&self) -> Vec<f64> {
        self.per_size.iter().map(|s| s.mean).collect()
    }
}

fn summarize(n: usize, runs: &[Realization]) -> SizeResult {
    let mean: Accumulator = runs.iter().map(|r| r.mean_distance).collect();
    let max: Accumulator = runs.iter().map(|r| r.max_distance as f64).collect();
    let mut components = ComponentStats::new(n);
    for r in runs {
        components.add(&r.components);
    }
    SizeResult {
        n,
        mean: mean.mean(),
        stderr: mean.stderr(),
        time_max: max.mean(),
        time_max_stderr: max.stderr(),
        unconfined: runs.iter().filter(|r| !r.confined).count(),
        components,
    }
}

/// All realizations at size `n`, in index order.
pub fn realizations(cfg: &EnsembleConfig, n: usize) -> Result<Vec<Realization>> {
    par::map_indices(cfg.realizations, |r| run_realization(cfg, n, r))
}

/// All realizations at size `n` on the calling thread.
pub fn realizations_sequential(cfg: &EnsembleConfig, n: usize) -> Result<Vec<Realization>> {
    (0..cfg.realizations)
        .map(|r| run_realization(cfg, n, r))
        .collect()
}

/// Runs the ensemble, in parallel when the `parallel` feature is on.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleResult> {
    run_with(cfg, realizations)
}

pub fn run_ensemble_sequential(cfg: &EnsembleConfig) -> Result<EnsembleResult> {
    run_with(cfg, realizations_sequential)
}

fn run_with(
    cfg: &EnsembleConfig,
    runs: impl Fn(&EnsembleConfig, usize) -> Result<Vec<Realization>>,
) -> Result<EnsembleResult> {
    cfg.validate()?;
    let per_size = cfg
        .sizes
        .iter()
        .map(|&n| Ok(summarize(n, &runs(cfg, n)?)))
        .collect::<Result<_>>()?;
    Ok(EnsembleResult {
        config: cfg.clone(),
        per_size,
    })
}

/// Component statistics without running any dynamics.
pub fn component_stats(cfg: &EnsembleConfig) -> Result<Vec<ComponentStats>> {
    cfg.validate()?;
    cfg.sizes
        .iter()
        .map(|&n| {
            let drawn = par::map_indices(cfg.realizations, |r| {
                let (net, _) = draw_realization(cfg, n, r)?;
                Ok(decompose(&net)?
                    .components
                    .iter()
                    .map(|c| (c.nodes.len(), c.class))
                    .collect::<Vec<_>>())
            })?;
            let mut stats = ComponentStats::new(n);
            drawn.iter().for_each(|c| stats.add(c));
            Ok(stats)
        })
        .collect()
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        return None;
    }
    Some(cov / (va * vb).sqrt())
}

/// Spearman rank correlation with average ranks for ties. `None` for fewer
/// than two points or a constant input.
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len(), "spearman_rho needs paired samples");
    if xs.len() < 2 {
        return None;
    }
    pearson(&ranks(xs), &ranks(ys))
}

pub mod par {
    //! Ordered map over `0..count`, parallel when the feature is enabled.

    use crate::error::Result;

    #[cfg(feature = "parallel")]
    pub fn map_indices<T, F>(count: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }

    #[cfg(not(feature = "parallel"))]
    pub fn map_indices<T, F>(count: usize, f: F) -> Result<Vec<T>>
    where
        F: Fn(usize) -> Result<T>,
    {
        (0..count).map(f).collect()
    }

    pub fn is_parallel() -> bool {
        cfg!(feature = "parallel")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::K1Kind;

    fn small(mode: Mode) -> EnsembleConfig {
        EnsembleConfig {
            sizes: vec![3, 6],
            realizations: 40,
            steps: 30,
            seed: 11,
            mode,
            function_weights: FunctionWeights::uniform(),
        }
    }

    #[test]
    fn deterministic_and_schedule_independent() {
        let cfg = small(Mode::QuantumAllH);
        let a = run_ensemble(&cfg).unwrap();
        let b = run_ensemble(&cfg).unwrap();
        let c = run_ensemble_sequential(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn seeds_differ_across_sizes_and_indices() {
        let s: std::collections::HashSet<u64> = (1..20)
            .flat_map(|n| (0..50).map(move |r| realization_seed(3, n, r)))
            .collect();
        assert_eq!(s.len(), 19 * 50);
    }

    #[test]
    fn modes_share_networks() {
        let q = small(Mode::QuantumAllH);
        let c = q.with_mode(Mode::Classical);
        for r in 0..10 {
            let (a, na) = draw_realization(&q, 5, r).unwrap();
            let (b, nb) = draw_realization(&c, 5, r).unwrap();
            assert_eq!(na, nb);
            let strip = |net: &Network| -> Vec<_> {
                net.nodes()
                    .iter()
                    .map(|x| (x.inputs.clone(), x.table.clone()))
                    .collect()
            };
            assert_eq!(strip(&a), strip(&b));
        }
    }

    #[test]
    fn lone_constant_node_alternates() {
        // the flipped value sits on the target, moves to the control on the
        // first swap and back on the second
        let mut cfg = EnsembleConfig::new(vec![1], Mode::Classical);
        cfg.function_weights = FunctionWeights::only(K1Kind::ConstI);
        cfg.realizations = 1;
        cfg.steps = 1;
        assert_eq!(run_ensemble(&cfg).unwrap().per_size[0].mean, 0.0);
        cfg.steps = 2;
        assert_eq!(run_ensemble(&cfg).unwrap().per_size[0].mean, 0.5);
    }

    #[test]
    fn confinement_holds() {
        for mode in [Mode::Classical, Mode::QuantumAllH] {
            let res = run_ensemble(&small(mode)).unwrap();
            assert!(res.per_size.iter().all(|s| s.unconfined == 0));
        }
    }

    #[test]
    fn means_are_bounded() {
        let res = run_ensemble(&small(Mode::QuantumAllH)).unwrap();
        for s in &res.per_size {
            assert!(s.mean >= 0.0 && s.mean <= s.n as f64);
            assert!(s.time_max >= s.mean);
        }
    }

    #[test]
    fn single_node_components() {
        let mut cfg = EnsembleConfig::new(vec![1], Mode::Classical);
        cfg.realizations = 25;
        let st = &component_stats(&cfg).unwrap()[0];
        assert_eq!(st.size_counts, vec![0, 25]);
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = small(Mode::Classical);
        cfg.realizations = 0;
        assert!(run_ensemble(&cfg).is_err());
        let mut cfg = small(Mode::Classical);
        cfg.sizes = vec![0];
        assert!(matches!(run_ensemble(&cfg), Err(Error::EmptyNetwork)));
    }

    #[test]
    fn config_json_defaults() {
        let cfg: EnsembleConfig =
            serde_json::from_str(r#"{"sizes":[4,8],"mode":"QUANTUM_ALL_H","seed":5}"#).unwrap();
        assert_eq!(cfg.realizations, 1000);
        assert_eq!(cfg.steps, 200);
        assert_eq!(cfg.mode, Mode::QuantumAllH);
        assert_eq!(cfg.function_weights, FunctionWeights::uniform());
    }

    #[test]
    fn accumulator_matches_direct() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let acc: Accumulator = xs.iter().copied().collect();
        assert!((acc.mean() - 3.5).abs() < 1e-15);
        assert!((acc.variance() - 7.0).abs() < 1e-12);
        assert!((acc.stderr() - (7.0f64 / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spearman_basic() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman_rho(&x, &[10.0, 20.0, 30.0, 40.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman_rho(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(spearman_rho(&x, &[1.0; 4]), None);
        // ties get average ranks
        let r = spearman_rho(&x, &[1.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(r > 0.9 && r < 1.0);
    }
}
