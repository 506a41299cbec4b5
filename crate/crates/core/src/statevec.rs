//! Exact `2n`-qubit state-vector simulation, dense one-step propagators and
//! spectral analysis of the propagator.
//!
//! Basis labels put qubit `q` in bit `q`: targets occupy bits `0..n`,
//! controls bits `n..2n`. Ket `|1>` is spin `+1`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::netmodel::Network;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Computational basis state `|label>` over `2n` qubits.
    pub fn basis(n: usize, label: usize) -> Self {
        let mut amps = vec![ZERO; 1 << (2 * n)];
        amps[label] = ONE;
        Self { n, amps }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1 << (2 * n) {
            return Err(Error::ConfigLength {
                expected: 1 << (2 * n),
                got: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn qubits(&self) -> usize {
        2 * self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, c: C64) {
        self.amps.iter_mut().for_each(|a| *a *= c);
    }

    /// Label of the single nonzero amplitude, if the state is a basis state.
    pub fn as_basis_label(&self, tol: f64) -> Option<usize> {
        let mut found = None;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > tol {
                if found.is_some() || (a.norm() - 1.0).abs() > tol {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-abs deviation after removing the best global phase, fitted from
    /// the largest-magnitude amplitude of `self`.
    pub fn diff_up_to_phase(&self, other: &Self) -> f64 {
        let (idx, _) = self
            .amps
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, a)| {
                if a.norm() > best.1 {
                    (i, a.norm())
                } else {
                    best
                }
            });
        let phase = if self.amps[idx].norm() == 0.0 {
            ONE
        } else {
            let r = other.amps[idx] / self.amps[idx];
            if r.norm() == 0.0 {
                ONE
            } else {
                r / r.norm()
            }
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubit(&self, q: usize) {
        assert!(q < self.qubits(), "qubit {q} out of range");
    }

    pub fn apply_h(&mut self, q: usize) {
        self.check_qubit(q);
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        self.check_qubit(q);
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        self.check_qubit(q);
        let bit = 1 << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    /// `Y = iXZ`: `Y|0> = i|1>`, `Y|1> = -i|0>`.
    pub fn apply_y(&mut self, q: usize) {
        self.apply_z(q);
        self.apply_x(q);
        self.scale(C64::new(0.0, 1.0));
    }

    /// X on `target` when every `(qubit, value)` control matches.
    pub fn apply_mcx(&mut self, controls: &[(usize, bool)], target: usize) {
        self.check_qubit(target);
        let tbit = 1 << target;
        let (mut mask, mut want) = (0usize, 0usize);
        for &(q, v) in controls {
            self.check_qubit(q);
            let b = 1 << q;
            if mask & b != 0 && (want & b != 0) != v {
                return; // contradictory controls never fire
            }
            mask |= b;
            if v {
                want |= b;
            }
        }
        for i in 0..self.amps.len() {
            if i & tbit == 0 && i & mask == want {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        self.check_qubit(a);
        self.check_qubit(b);
        if a == b {
            return;
        }
        let (ba, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ba != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ba) | bb);
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate {
            Gate::H(q) => self.apply_h(*q),
            Gate::Mcx { controls, target } => self.apply_mcx(controls, *target),
            Gate::Swap(a, b) => self.apply_swap(*a, *b),
        }
    }
}

/// Elementary gates of the step circuit. All are self-inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    /// Multi-controlled X; each control is `(qubit, required value)`.
    Mcx {
        controls: Vec<(usize, bool)>,
        target: usize,
    },
    Swap(usize, usize),
}

/// Gate sequence for one step: Hadamards on flagged targets, one
/// multi-controlled X per flipping table row, then the register swaps.
pub fn circuit(net: &Network) -> Vec<Gate> {
    let n = net.n();
    let mut gates: Vec<Gate> = net
        .nodes()
        .iter()
        .enumerate()
        .filter(|(_, nd)| nd.hadamard)
        .map(|(i, _)| Gate::H(i))
        .collect();
    for (i, nd) in net.nodes().iter().enumerate() {
        for (pattern, action) in nd.table.entries().iter().enumerate() {
            if action.is_flip() {
                let controls = nd
                    .inputs
                    .iter()
                    .enumerate()
                    .map(|(bit, &j)| (n + j, pattern >> bit & 1 == 1))
                    .collect();
                gates.push(Gate::Mcx {
                    controls,
                    target: i,
                });
            }
        }
    }
    gates.extend((0..n).map(|i| Gate::Swap(i, n + i)));
    gates
}

/// Matrix-free application of one step.
pub fn apply_step(net: &Network, psi: &StateVector) -> Result<StateVector> {
    if psi.n != net.n() {
        return Err(Error::ConfigLength {
            expected: 2 * net.n(),
            got: psi.qubits(),
        });
    }
    let mut out = psi.clone();
    for g in circuit(net) {
        out.apply_gate(&g);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct PropagatorOptions {
    /// Largest node count for which a dense `4^n x 4^n` matrix is built.
    pub max_nodes: usize,
}

impl Default for PropagatorOptions {
    fn default() -> Self {
        Self { max_nodes: 7 }
    }
}

/// Dense unitary advancing the `2n`-qubit system by one step.
#[derive(Debug, Clone)]
pub struct Propagator {
    n: usize,
    matrix: Mat<C64>,
}

impl Propagator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    pub fn from_matrix(n: usize, matrix: Mat<C64>) -> Result<Self> {
        let d = 1usize << (2 * n);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::ConfigLength {
                expected: d,
                got: matrix.nrows(),
            });
        }
        Ok(Self { n, matrix })
    }

    /// `max |(U^dagger U - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.matrix.adjoint() * &self.matrix;
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                let e = if i == j { g[(i, j)] - ONE } else { g[(i, j)] };
                worst = worst.max(e.norm());
            }
        }
        worst
    }

    /// True when every entry is within `tol` of 0 or 1 and each column holds
    /// exactly one 1.
    pub fn is_permutation(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|j| {
            let mut ones = 0;
            for i in 0..d {
                let z = self.matrix[(i, j)];
                if (z - ONE).norm() <= tol {
                    ones += 1;
                } else if z.norm() > tol {
                    return false;
                }
            }
            ones == 1
        })
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let d = self.dim();
        let amps = (0..d)
            .map(|i| (0..d).map(|j| self.matrix[(i, j)] * psi.amps[j]).sum())
            .collect();
        StateVector { n: self.n, amps }
    }
}

/// Image of a basis label under the logic gates and swaps of one step.
fn classical_image(net: &Network, label: usize) -> usize {
    let n = net.n();
    let low = (1usize << n) - 1;
    let ctrl = label >> n;
    let mut tgt = label & low;
    for (i, nd) in net.nodes().iter().enumerate() {
        if nd.action_for(|j| ctrl >> j & 1 == 1).is_flip() {
            tgt ^= 1 << i;
        }
    }
    (tgt << n) | ctrl
}

pub fn build_propagator(net: &Network) -> Result<Propagator> {
    build_propagator_with(net, PropagatorOptions::default())
}

/// Assembles `U = P * H_layer`, where `P` is the basis permutation of the
/// logic gates and swaps and `H_layer` the tensor product of Hadamards on
/// flagged targets.
pub fn build_propagator_with(net: &Network, opts: PropagatorOptions) -> Result<Propagator> {
    let n = net.n();
    if n > opts.max_nodes {
        return Err(Error::DimensionCap {
            n,
            max: opts.max_nodes,
        });
    }
    let d = 1usize << (2 * n);
    let flagged: Vec<usize> = (0..n).filter(|&i| net.node(i).hadamard).collect();
    let image: Vec<usize> = (0..d).map(|b| classical_image(net, b)).collect();
    let amp = FRAC_1_SQRT_2.powi(flagged.len() as i32);

    let mut matrix = Mat::<C64>::zeros(d, d);
    for a in 0..d {
        for combo in 0..1usize << flagged.len() {
            let mut b = a;
            let mut sign = 1.0;
            for (k, &q) in flagged.iter().enumerate() {
                let bq = combo >> k & 1;
                b = (b & !(1 << q)) | (bq << q);
                if bq == 1 && a >> q & 1 == 1 {
                    sign = -sign;
                }
            }
            matrix[(image[b], a)] = C64::new(sign * amp, 0.0);
        }
    }
    Ok(Propagator { n, matrix })
}

/// `e^{2 pi i k / l}` with `0 <= k < l` and `gcd(k, l) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub k: u64,
    pub l: u64,
}

impl RootOfUnity {
    pub fn new(k: u64, l: u64) -> Self {
        let k = k % l;
        let g = gcd(k, l);
        Self { k: k / g, l: l / g }
    }

    pub fn phase(&self) -> f64 {
        TAU * self.k as f64 / self.l as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Closest fraction `p/q` to `x` in `[0, 1]` with `q <= max_den`, by
/// continued-fraction convergents and the final semiconvergent.
pub fn best_rational(x: f64, max_den: u64) -> (u64, u64) {
    assert!(max_den >= 1);
    let x = x.clamp(0.0, 1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if q0 as f64 + a * q1 as f64 > max_den as f64 {
            break;
        }
        let a = a as u64;
        (p0, q0, p1, q1) = (p1, q1, p0 + a * p1, q0 + a * q1);
        let frac = v - v.floor();
        if frac <= f64::EPSILON {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return (0, 1);
    }
    let k = (max_den - q0) / q1;
    let (sp, sq) = (p0 + k * p1, q0 + k * q1);
    let err_conv = (x - p1 as f64 / q1 as f64).abs();
    let err_semi = (x - sp as f64 / sq as f64).abs();
    if err_semi < err_conv {
        (sp, sq)
    } else {
        (p1, q1)
    }
}

/// Root of unity within `tol` radians of `phase`, order at most `lmax`.
pub fn classify_root(phase: f64, tol: f64, lmax: u64) -> Option<RootOfUnity> {
    let x = phase.rem_euclid(TAU) / TAU;
    let (p, q) = best_rational(x, lmax);
    let err = (x - p as f64 / q as f64).abs() * TAU;
    (err <= tol).then(|| RootOfUnity::new(p, q))
}

/// Cycle lengths recovered from a multiset of roots by repeatedly removing
/// the complete set of `L`-th roots for the largest order `L` present.
/// `None` when some set is incomplete.
pub fn recover_cycle_lengths(roots: &[RootOfUnity]) -> Option<Vec<usize>> {
    let mut counts: HashMap<RootOfUnity, usize> = HashMap::new();
    for r in roots {
        *counts.entry(*r).or_default() += 1;
    }
    let mut lengths = Vec::new();
    while let Some(l) = counts.keys().map(|r| r.l).max() {
        for j in 0..l {
            let key = RootOfUnity::new(j, l);
            let c = counts.get_mut(&key)?;
            *c -= 1;
            if *c == 0 {
                counts.remove(&key);
            }
        }
        lengths.push(l as usize);
    }
    Some(lengths)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Phase tolerance (radians) for clustering and root detection.
    pub tol: f64,
    /// Largest root-of-unity order tested.
    pub lmax: u64,
    /// Largest accepted unitarity defect.
    pub unitary_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            lmax: 4096,
            unitary_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenphase {
    pub value: C64,
    /// In `[0, 2 pi)`.
    pub phase: f64,
    pub root: Option<RootOfUnity>,
    /// Index into [`SpectrumReport::clusters`].
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCluster {
    pub phase: f64,
    pub degeneracy: usize,
    pub root: Option<RootOfUnity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Sorted by phase.
    pub eigenphases: Vec<Eigenphase>,
    pub clusters: Vec<PhaseCluster>,
    /// Cycle lengths, for permutation propagators only.
    pub cycle_lengths: Option<Vec<usize>>,
    pub options: SpectrumOptions,
}

impl SpectrumReport {
    pub fn phases(&self) -> Vec<f64> {
        self.eigenphases.iter().map(|e| e.phase).collect()
    }

    pub fn degeneracies(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.degeneracy).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.clusters.iter().all(|c| c.degeneracy == 1)
    }

    pub fn all_roots_of_unity(&self) -> bool {
        self.eigenphases.iter().all(|e| e.root.is_some())
    }

    pub fn roots_of_unity(&self) -> Vec<RootOfUnity> {
        self.eigenphases.iter().filter_map(|e| e.root).collect()
    }

    /// Smallest circular distance between consecutive eigenphases.
    pub fn min_phase_gap(&self) -> f64 {
        let p = self.phases();
        if p.len() < 2 {
            return TAU;
        }
        let wrap = p[0] + TAU - p[p.len() - 1];
        p.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min)
    }
}

fn eigenvalues(m: &Mat<C64>) -> Result<Vec<C64>> {
    m.eigenvalues().map_err(|_| Error::EigenFailure)
}

/// Eigenphases of `prop`, clustered for degeneracy and tested against roots
/// of unity of order up to `opts.lmax`.
pub fn spectrum(prop: &Propagator, opts: SpectrumOptions) -> Result<SpectrumReport> {
    let defect = prop.unitarity_defect();
    if defect > opts.unitary_tol {
        return Err(Error::NotUnitary(defect));
    }
    // phases within tolerance of 2 pi are reported as 0 so the cluster
    // around 1 is not split across the cut
    let mut eig: Vec<(C64, f64)> = eigenvalues(&prop.matrix)?
        .into_iter()
        .map(|z| {
            let ph = z.arg().rem_euclid(TAU);
            (z, if TAU - ph <= opts.tol { 0.0 } else { ph })
        })
        .collect();
    eig.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut cluster_of = vec![0usize; eig.len()];
    let mut starts = vec![0usize];
    for i in 1..eig.len() {
        if eig[i].1 - eig[i - 1].1 > opts.tol {
            starts.push(i);
        }
        cluster_of[i] = starts.len() - 1;
    }

    let eigenphases: Vec<Eigenphase> = eig
        .iter()
        .zip(&cluster_of)
        .map(|(&(value, phase), &cluster)| Eigenphase {
            value,
            phase,
            root: classify_root(phase, opts.tol, opts.lmax),
            cluster,
        })
        .collect();
    let clusters = (0..starts.len())
        .map(|c| {
            let first = &eigenphases[starts[c]];
            PhaseCluster {
                phase: first.phase,
                degeneracy: cluster_of.iter().filter(|&&k| k == c).count(),
                root: first.root,
            }
        })
        .collect();

    let cycle_lengths =
        if prop.is_permutation(1e-12) && eigenphases.iter().all(|e| e.root.is_some()) {
            let roots: Vec<_> = eigenphases.iter().filter_map(|e| e.root).collect();
            recover_cycle_lengths(&roots)
        } else {
            None
        };

    Ok(SpectrumReport {
        eigenphases,
        clusters,
        cycle_lengths,
        options: opts,
    })
}

/// Smallest `m` in `2..=max_power` with `U^m = U` up to a global phase.
pub fn check_clifford_periodicity(net: &Network, max_power: usize) -> Result<Option<usize>> {
    let u = build_propagator(net)?.matrix;
    let d = u.nrows();
    let (mut r, mut c, mut best) = (0, 0, -1.0);
    for j in 0..d {
        for i in 0..d {
            if u[(i, j)].norm() > best {
                (r, c, best) = (i, j, u[(i, j)].norm());
            }
        }
    }
    const TOL: f64 = 1e-8;
    let mut p = u.clone();
    for m in 2..=max_power {
        p = &p * &u;
        let phase = p[(r, c)] / u[(r, c)];
        if (phase.norm() - 1.0).abs() > TOL {
            continue;
        }
        let matches = (0..d).all(|j| (0..d).all(|i| (p[(i, j)] - phase * u[(i, j)]).norm() <= TOL));
        if matches {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
