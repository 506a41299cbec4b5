//! Pauli-frame propagation of the difference between two trajectories of a
//! K=1 network.
//!
//! If `psi' = rho psi` at some time, then one step later
//! `psi' = (U rho U^dagger) U psi`. For networks built from Hadamards,
//! controlled-X gates, X and swaps, `U rho U^dagger` is again a Pauli string,
//! so the difference is tracked gate by gate without touching amplitudes.
//! The generalized Hamming distance counts the non-identity factors on the
//! target register after the step's swaps.

use std::fmt;

use crate::error::{Error, Result};
use crate::netmodel::{Network, SingleInputGate};
use crate::statevec::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Export code: I=0, X=1, Y=2, Z=3.
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Option<Self> {
        [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z]
            .get(c as usize)
            .copied()
    }

    pub fn symbol(self) -> char {
        ['I', 'X', 'Y', 'Z'][self as usize]
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' | 'i' | '.' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Label of the product, phase dropped.
    pub fn product_label(self, other: Pauli) -> Pauli {
        let (ax, az) = self.xz();
        let (bx, bz) = other.xz();
        Pauli::from_xz(ax ^ bx, az ^ bz)
    }
}

use Pauli::{I, X, Y, Z};

/// Conjugation by controlled-X, indexed `[control][target]`:
/// `(control', target', sign flipped)`.
const CX_RULES: [[(Pauli, Pauli, bool); 4]; 4] = [
    [(I, I, false), (I, X, false), (Z, Y, false), (Z, Z, false)],
    [(X, X, false), (X, I, false), (Y, Z, false), (Y, Y, true)],
    [(Y, X, false), (Y, I, false), (X, Z, true), (X, Y, false)],
    [(Z, I, false), (Z, X, false), (I, Y, false), (I, Z, false)],
];

/// Pauli string over the `2n` qubits of a network with a global sign.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    labels: Vec<Pauli>,
    negative: bool,
}

impl PauliFrame {
    pub fn identity(n: usize) -> Self {
        Self {
            labels: vec![I; 2 * n],
            negative: false,
        }
    }

    /// Single X on target qubit `node`, identity elsewhere.
    pub fn single_x(n: usize, node: usize) -> Result<Self> {
        if node >= n {
            return Err(Error::NodeOutOfRange { index: node, n });
        }
        let mut f = Self::identity(n);
        f.labels[node] = X;
        Ok(f)
    }

    pub fn from_labels(labels: Vec<Pauli>, sign: i8) -> Result<Self> {
        if labels.is_empty() || !labels.len().is_multiple_of(2) {
            return Err(Error::ConfigLength {
                expected: 2 * (labels.len() / 2).max(1),
                got: labels.len(),
            });
        }
        Ok(Self {
            labels,
            negative: sign < 0,
        })
    }

    /// Builds a frame from `(qubit, label)` pairs.
    pub fn from_sparse(n: usize, entries: &[(usize, Pauli)]) -> Result<Self> {
        let mut f = Self::identity(n);
        for &(q, p) in entries {
            f.check(q)?;
            f.labels[q] = p;
        }
        Ok(f)
    }

    /// Parses a string of `I/X/Y/Z` (or `.` for I), qubit 0 first, with an
    /// optional leading sign and an optional `|` between the registers.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let labels = body
            .chars()
            .filter(|&c| c != '|' && !c.is_whitespace())
            .map(|c| {
                Pauli::from_symbol(c).ok_or_else(|| Error::Parse {
                    line: 0,
                    msg: format!("invalid Pauli symbol {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_labels(labels, if negative { -1 } else { 1 })
    }

    pub fn n(&self) -> usize {
        self.labels.len() / 2
    }

    pub fn qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.labels
    }

    pub fn label(&self, q: usize) -> Pauli {
        self.labels[q]
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// Target-register labels.
    pub fn visible(&self) -> &[Pauli] {
        &self.labels[..self.n()]
    }

    /// Generalized Hamming distance: non-identity target labels.
    pub fn hamming(&self) -> usize {
        self.visible().iter().filter(|p| !p.is_identity()).count()
    }

    pub fn weight(&self) -> usize {
        self.labels.iter().filter(|p| !p.is_identity()).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// Qubits carrying a non-identity label.
    pub fn support(&self) -> Vec<usize> {
        (0..self.qubits())
            .filter(|&q| !self.labels[q].is_identity())
            .collect()
    }

    /// Label-wise product, phase dropped.
    pub fn product_labels(&self, other: &Self) -> Vec<Pauli> {
        self.labels
            .iter()
            .zip(&other.labels)
            .map(|(a, b)| a.product_label(*b))
            .collect()
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.qubits() {
            return Err(Error::QubitOutOfRange {
                index: q,
                qubits: self.qubits(),
            });
        }
        Ok(())
    }

    /// `H P H`: swaps X and Z, negates Y.
    pub fn conjugate_h(&mut self, q: usize) {
        self.labels[q] = match self.labels[q] {
            X => Z,
            Z => X,
            Y => {
                self.negative = !self.negative;
                Y
            }
            I => I,
        };
    }

    /// `X P X`: negates Y and Z.
    pub fn conjugate_x(&mut self, q: usize) {
        if matches!(self.labels[q], Y | Z) {
            self.negative = !self.negative;
        }
    }

    /// Conjugation by a controlled-X activated by `|1>` on `control`.
    pub fn conjugate_cx(&mut self, control: usize, target: usize) {
        assert_ne!(control, target, "control and target must differ");
        let (c, t, flip) = CX_RULES[self.labels[control] as usize][self.labels[target] as usize];
        self.labels[control] = c;
        self.labels[target] = t;
        self.negative ^= flip;
    }

    /// Conjugation by a controlled-X activated by `|0>`, i.e. `X_t CX`.
    pub fn conjugate_cx_bar(&mut self, control: usize, target: usize) {
        self.conjugate_cx(control, target);
        self.conjugate_x(target);
    }

    /// Swaps every target label with its control partner.
    pub fn swap_registers(&mut self) {
        let n = self.n();
        let (t, c) = self.labels.split_at_mut(n);
        t.swap_with_slice(c);
    }

    /// Applies the signed Pauli string to a state vector.
    pub fn apply_to(&self, psi: &StateVector) -> StateVector {
        assert_eq!(psi.qubits(), self.qubits(), "frame and state sizes differ");
        let mut out = psi.clone();
        for (q, p) in self.labels.iter().enumerate() {
            match p {
                I => {}
                X => out.apply_x(q),
                Y => out.apply_y(q),
                Z => out.apply_z(q),
            }
        }
        if self.negative {
            out.scale((-1.0).into());
        }
        out
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let t: String = self.labels[..n].iter().map(|p| p.symbol()).collect();
        let c: String = self.labels[n..].iter().map(|p| p.symbol()).collect();
        write!(f, "{}{t}|{c}", if self.negative { '-' } else { '+' })
    }
}

/// Frames before and after each stage of one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub after_hadamard: PauliFrame,
    pub after_logic: PauliFrame,
    pub after_swap: PauliFrame,
}

/// Precompiled single-input circuit of a network.
#[derive(Debug, Clone)]
pub struct FramePropagator {
    n: usize,
    hadamards: Vec<usize>,
    gates: Vec<(usize, SingleInputGate)>,
}

impl FramePropagator {
    pub fn new(net: &Network) -> Result<Self> {
        let n = net.n();
        let hadamards = (0..n).filter(|&i| net.node(i).hadamard).collect();
        let gates = net
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, nd)| {
                nd.single_input_gate()
                    .map(|g| (i, g))
                    .ok_or_else(|| Error::UnsupportedGate {
                        node: i,
                        count: crate::netmodel::effective_inputs(nd).len(),
                    })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            n,
            hadamards,
            gates,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn hadamard_layer(&self, frame: &mut PauliFrame) {
        for &q in &self.hadamards {
            frame.conjugate_h(q);
        }
    }

    fn logic_layer(&self, frame: &mut PauliFrame) {
        let n = self.n;
        for &(target, gate) in &self.gates {
            match gate {
                SingleInputGate::Identity => {}
                SingleInputGate::X => frame.conjugate_x(target),
                SingleInputGate::Cx(input) => frame.conjugate_cx(n + input, target),
                SingleInputGate::CxBar(input) => frame.conjugate_cx_bar(n + input, target),
            }
        }
    }

    fn check(&self, frame: &PauliFrame) {
        assert_eq!(frame.n(), self.n, "frame does not match network size");
    }

    pub fn step(&self, frame: &mut PauliFrame) {
        self.check(frame);
        self.hadamard_layer(frame);
        self.logic_layer(frame);
        frame.swap_registers();
    }

    pub fn step_traced(&self, frame: &PauliFrame) -> StepTrace {
        self.check(frame);
        let mut f = frame.clone();
        self.hadamard_layer(&mut f);
        let after_hadamard = f.clone();
        self.logic_layer(&mut f);
        let after_logic = f.clone();
        f.swap_registers();
        StepTrace {
            after_hadamard,
            after_logic,
            after_swap: f,
        }
    }
}

fn check_frame(net: &Network, frame: &PauliFrame) -> Result<()> {
    if frame.n() != net.n() {
        return Err(Error::ConfigLength {
            expected: 2 * net.n(),
            got: frame.qubits(),
        });
    }
    Ok(())
}

/// One step of the difference operator through the network's circuit.
pub fn step_frame(net: &Network, frame: &PauliFrame) -> Result<PauliFrame> {
    check_frame(net, frame)?;
    let prop = FramePropagator::new(net)?;
    let mut next = frame.clone();
    prop.step(&mut next);
    Ok(next)
}

/// Frames recorded after each step's swaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSeries {
    pub initial: PauliFrame,
    pub frames: Vec<PauliFrame>,
}

impl DistanceSeries {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn hamming(&self) -> Vec<usize> {
        self.frames.iter().map(PauliFrame::hamming).collect()
    }

    pub fn max_hamming(&self) -> usize {
        self.frames
            .iter()
            .map(PauliFrame::hamming)
            .max()
            .unwrap_or(0)
    }

    pub fn mean_hamming(&self) -> f64 {
        if self.frames.is_empty() {
            return 0.0;
        }
        self.frames.iter().map(|f| f.hamming() as f64).sum::<f64>() / self.frames.len() as f64
    }

    /// Target-register rows, one per step.
    pub fn visible_rows(&self) -> Vec<Vec<Pauli>> {
        self.frames.iter().map(|f| f.visible().to_vec()).collect()
    }

    /// Initial frame followed by every recorded frame.
    pub fn all_frames(&self) -> impl Iterator<Item = &PauliFrame> {
        std::iter::once(&self.initial).chain(&self.frames)
    }
}

pub fn damage_series(net: &Network, initial: &PauliFrame, steps: usize) -> Result<DistanceSeries> {
    check_frame(net, initial)?;
    let prop = FramePropagator::new(net)?;
    Ok(damage_series_with(&prop, initial, steps))
}

pub fn damage_series_with(
    prop: &FramePropagator,
    initial: &PauliFrame,
    steps: usize,
) -> DistanceSeries {
    let mut frame = initial.clone();
    let frames = (0..steps)
        .map(|_| {
            prop.step(&mut frame);
            frame.clone()
        })
        .collect();
    DistanceSeries {
        initial: initial.clone(),
        frames,
    }
}

/// Smallest `p <= max_steps` after which the frame, sign included, returns
/// to `initial`. Conjugation is invertible, so the orbit has no transient.
pub fn frame_period(
    net: &Network,
    initial: &PauliFrame,
    max_steps: usize,
) -> Result<Option<usize>> {
    check_frame(net, initial)?;
    let prop = FramePropagator::new(net)?;
    let mut frame = initial.clone();
    for p in 1..=max_steps {
        prop.step(&mut frame);
        if frame == *initial {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolitaryClass {
    /// Advances one node every three steps through X, Z-Z, Z-X forms.
    LoopSoliton,
    /// Advances one node per step as `X_t(i) Z_c(i-1) X_c(i+1)`.
    ChainSoliton,
    Complex,
    Static,
}

impl fmt::Display for SolitaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolitaryClass::LoopSoliton => "loop-soliton",
            SolitaryClass::ChainSoliton => "chain-soliton",
            SolitaryClass::Complex => "complex",
            SolitaryClass::Static => "static",
        })
    }
}

/// Steps allowed before a soliton template must hold.
pub const SOLITON_TRANSIENT: usize = 5;
/// Consecutive frames a template must match.
pub const SOLITON_WINDOW: usize = 6;

type Entries = Vec<(usize, Pauli)>;

/// Non-identity entries split by register: `(target entries, control entries)`.
fn split_support(f: &PauliFrame) -> (Entries, Entries) {
    let n = f.n();
    let mut t = Vec::new();
    let mut c = Vec::new();
    for q in f.support() {
        if q < n {
            t.push((q, f.label(q)));
        } else {
            c.push((q - n, f.label(q)));
        }
    }
    (t, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LoopForm {
    /// `X_t(i)`
    A(usize),
    /// `Z_t(p) Z_c(i)`
    B { p: usize, i: usize },
    /// `Z_t(i) X_c(p)`
    C { i: usize, p: usize },
}

fn loop_form(f: &PauliFrame) -> Option<LoopForm> {
    let (t, c) = split_support(f);
    match (t.as_slice(), c.as_slice()) {
        ([(i, X)], []) => Some(LoopForm::A(*i)),
        ([(p, Z)], [(i, Z)]) => Some(LoopForm::B { p: *p, i: *i }),
        ([(i, Z)], [(p, X)]) => Some(LoopForm::C { i: *i, p: *p }),
        _ => None,
    }
}

fn loop_transition(a: LoopForm, b: LoopForm) -> bool {
    match (a, b) {
        (LoopForm::A(i), LoopForm::B { i: i2, .. }) => i == i2,
        (LoopForm::B { p, i }, LoopForm::C { i: i2, p: p2 }) => i == i2 && p == p2,
        (LoopForm::C { p, .. }, LoopForm::A(i)) => p == i,
        _ => false,
    }
}

/// `(a, b, c)` for `X_t(a) Z_c(b) X_c(c)`.
fn chain_form(f: &PauliFrame) -> Option<(usize, usize, usize)> {
    let (t, c) = split_support(f);
    match (t.as_slice(), c.as_slice()) {
        ([(a, X)], [(q1, p1), (q2, p2)]) => match (p1, p2) {
            (Z, X) => Some((*a, *q1, *q2)),
            (X, Z) => Some((*a, *q2, *q1)),
            _ => None,
        },
        _ => None,
    }
}

fn chain_transition(a: (usize, usize, usize), b: (usize, usize, usize)) -> bool {
    b.0 == a.2 && b.1 == a.0
}

/// Whether every consecutive pair in `frames[from..]` follows the loop
/// template.
fn follows_loop_template(frames: &[&PauliFrame], from: usize) -> bool {
    let forms: Option<Vec<LoopForm>> = frames[from..].iter().map(|f| loop_form(f)).collect();
    match forms {
        Some(forms) => forms.windows(2).all(|w| loop_transition(w[0], w[1])),
        None => false,
    }
}

fn has_chain_window(frames: &[&PauliFrame]) -> bool {
    let forms: Vec<_> = frames.iter().map(|f| chain_form(f)).collect();
    forms.windows(SOLITON_WINDOW).any(|w| {
        w.iter().all(Option::is_some)
            && w.windows(2)
                .all(|p| chain_transition(p[0].unwrap(), p[1].unwrap()))
    })
}

/// Classifies a series by matching soliton templates.
///
/// A loop soliton must hold from at most [`SOLITON_TRANSIENT`] steps on to the
/// end of the series; a chain soliton needs a visible distance of at most one
/// throughout and [`SOLITON_WINDOW`] consecutive frames of the chain form,
/// which tolerates reflections at the chain ends.
pub fn detect_solitary(series: &DistanceSeries) -> SolitaryClass {
    let frames: Vec<&PauliFrame> = series.all_frames().collect();
    if frames.iter().all(|f| **f == series.initial) {
        return SolitaryClass::Static;
    }
    let long_enough = frames.len() >= SOLITON_WINDOW;
    if long_enough
        && (0..=SOLITON_TRANSIENT.min(frames.len() - SOLITON_WINDOW))
            .any(|s| follows_loop_template(&frames, s))
    {
        return SolitaryClass::LoopSoliton;
    }
    if long_enough && frames.iter().all(|f| f.hamming() <= 1) && has_chain_window(&frames) {
        return SolitaryClass::ChainSoliton;
    }
    SolitaryClass::Complex
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::fixtures::*;
    use crate::netmodel::K1Kind;
    use num_complex::Complex64 as C;

    type M2 = [[C; 2]; 2];

    fn pauli_matrix(p: Pauli) -> M2 {
        let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
        match p {
            I => [[o, z], [z, o]],
            X => [[z, o], [o, z]],
            Y => [[z, -i], [i, z]],
            Z => [[o, z], [z, -o]],
        }
    }

    /// 4x4 matrix on (control, target) with control as the high bit.
    fn kron(a: &M2, b: &M2) -> [[C; 4]; 4] {
        let mut m = [[C::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = a[r >> 1][c >> 1] * b[r & 1][c & 1];
            }
        }
        m
    }

    fn mul4(a: &[[C; 4]; 4], b: &[[C; 4]; 4]) -> [[C; 4]; 4] {
        let mut m = [[C::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
            }
        }
        m
    }

    #[test]
    fn cx_rules_match_matrix_conjugation() {
        let o = C::new(1.0, 0.0);
        let z = C::new(0.0, 0.0);
        let cx = [[o, z, z, z], [z, o, z, z], [z, z, z, o], [z, z, o, z]];
        let all = [I, X, Y, Z];
        for &pc in &all {
            for &pt in &all {
                let conj = mul4(&mul4(&cx, &kron(&pauli_matrix(pc), &pauli_matrix(pt))), &cx);
                let mut f = PauliFrame::from_labels(vec![pt, pc], 1).unwrap();
                f.conjugate_cx(1, 0);
                let expected = kron(&pauli_matrix(f.label(1)), &pauli_matrix(f.label(0)));
                let s = f64::from(f.sign());
                for r in 0..4 {
                    for c in 0..4 {
                        assert!(
                            (conj[r][c] - expected[r][c] * s).norm() < 1e-12,
                            "{pc:?}{pt:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn cx_bar_differs_from_cx_by_sign_only() {
        let all = [I, X, Y, Z];
        for &pc in &all {
            for &pt in &all {
                let base = PauliFrame::from_labels(vec![pt, pc], 1).unwrap();
                let mut a = base.clone();
                let mut b = base.clone();
                a.conjugate_cx(1, 0);
                b.conjugate_cx_bar(1, 0);
                assert_eq!(a.labels(), b.labels());
            }
        }
    }

    #[test]
    fn hadamard_rules() {
        let mut f = PauliFrame::parse("XIYZ").unwrap();
        f.conjugate_h(0);
        assert_eq!(f.to_string(), "+ZI|YZ");
        f.conjugate_h(1);
        assert_eq!(f.to_string(), "+ZI|YZ");
        f.conjugate_h(2);
        assert_eq!(f.to_string(), "-ZI|YZ");
        f.conjugate_h(3);
        assert_eq!(f.to_string(), "-ZI|YX");
    }

    #[test]
    fn cx_examples() {
        let mut f = PauliFrame::parse("IX").unwrap(); // target 0 = I, control 1 = X
        f.conjugate_cx(1, 0);
        assert_eq!(f.to_string(), "+X|X");
        let mut f = PauliFrame::parse("ZX").unwrap();
        f.conjugate_cx(1, 0);
        assert_eq!(f.to_string(), "-Y|Y");
        let mut f = PauliFrame::identity(1);
        f.conjugate_cx(1, 0);
        assert!(f.is_identity());
    }

    #[test]
    fn x_conjugation() {
        let mut f = PauliFrame::parse("ZX").unwrap();
        f.conjugate_x(0);
        assert_eq!(f.sign(), -1);
        f.conjugate_x(1);
        assert_eq!(f.sign(), -1);
        assert_eq!(f.hamming(), 1);
    }

    #[test]
    fn product_labels() {
        assert_eq!(X.product_label(Z), Y);
        assert_eq!(Y.product_label(Y), I);
        assert_eq!(I.product_label(Z), Z);
        assert_eq!(Z.product_label(Y), X);
    }

    #[test]
    fn identity_frame_is_fixed() {
        let net = loop_network(5, K1Kind::Copy, true);
        let f = PauliFrame::identity(5);
        assert_eq!(step_frame(&net, &f).unwrap(), f);
        assert_eq!(frame_period(&net, &f, 10).unwrap(), Some(1));
    }

    #[test]
    fn loop_first_step() {
        // X on target 0 of an all-H loop -> Z on target n-1 and control 0
        let n = 6;
        let net = loop_network(n, K1Kind::Copy, true);
        let f = step_frame(&net, &PauliFrame::single_x(n, 0).unwrap()).unwrap();
        let expected = PauliFrame::from_sparse(n, &[(n - 1, Z), (n, Z)]).unwrap();
        assert_eq!(f.labels(), expected.labels());
    }

    #[test]
    fn two_input_node_rejected() {
        let err = step_frame(&or_and(), &PauliFrame::identity(2)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedGate { node: 0, count: 2 }));
    }

    #[test]
    fn static_series() {
        let net = loop_network(4, K1Kind::ConstI, false);
        let s = damage_series(&net, &PauliFrame::identity(4), 20).unwrap();
        assert_eq!(detect_solitary(&s), SolitaryClass::Static);
    }

    #[test]
    fn loop_series_is_loop_soliton() {
        let net = loop_network(12, K1Kind::Copy, true);
        let s = damage_series(&net, &PauliFrame::single_x(12, 0).unwrap(), 72).unwrap();
        assert_eq!(detect_solitary(&s), SolitaryClass::LoopSoliton);
    }

    #[test]
    fn parse_and_display() {
        let f = PauliFrame::parse("-XY|ZI").unwrap();
        assert_eq!(f.sign(), -1);
        assert_eq!(f.to_string(), "-XY|ZI");
        assert!(PauliFrame::parse("XYZ").is_err());
        assert!(PauliFrame::parse("XQ").is_err());
    }

    #[test]
    fn apply_y_matches_definition() {
        let psi = StateVector::basis(1, 0);
        let f = PauliFrame::parse("YI").unwrap();
        let out = f.apply_to(&psi);
        assert!((out.amplitudes()[1] - C::new(0.0, 1.0)).norm() < 1e-15);
    }
}
