//! The secular function Δ(k) whose zeros are the graph spectrum.
//!
//! Per edge, the mode ansatz is a one- or two-coefficient combination of
//! sin/cos adapted to any leaf endpoint; per internal node of degree g the
//! junction conditions supply g−1 field-continuity rows and one row summing
//! the outward normal derivatives. Collecting coefficients gives a square
//! matrix M(k); Δ(k) = det M(k).
//!
//! Two evaluation axes are needed. On the real axis, entries are bounded
//! trigonometric values and a plain LU determinant (under a k-independent
//! normalization) locates spectral zeros by sign changes. On the imaginary
//! axis k = iω the trigonometric basis turns hyperbolic and grows like
//! e^{ω·L}; evaluating it directly loses the e^{−ω·L} parts to cancellation
//! long before f64 overflows. Re-parametrizing every edge in the decaying
//! exponentials e^{−ωx}, e^{−ω(L−x)} keeps every entry in [−2, 2] with the
//! small differences formed through `expm1`, and the change of basis shifts
//! the log-determinant by exactly ω·L − ln 2 per edge, so
//! h(ω) = log|Δ(iω)| − ω·ΣL = log|det M_exp(ω)| − (#edges)·ln 2
//! is computed in ordinary f64 for ω·ΣL up to 1e4 and far beyond.

use alloc::vec::Vec;

use crate::graph::{Endpoint, GraphError, LeafBc, MetricGraph, Violation};
use crate::math;

#[derive(Clone, Debug, PartialEq)]
pub enum SecularError {
    InvalidGraph(Vec<Violation>),
    Graph(GraphError),
    /// Determinant evaluation failed (exactly singular or NaN); this
    /// indicates a bug or a degenerate graph, not a user input error.
    NonFinite { omega: f64 },
    NotAStar,
}

impl core::fmt::Display for SecularError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SecularError::InvalidGraph(v) => {
                write!(f, "invalid graph ({} violation(s))", v.len())
            }
            SecularError::Graph(e) => write!(f, "{e}"),
            SecularError::NonFinite { omega } => {
                write!(f, "non-finite determinant evaluation at omega={omega:e}")
            }
            SecularError::NotAStar => write!(f, "operation requires a uniform star graph"),
        }
    }
}

impl From<GraphError> for SecularError {
    fn from(e: GraphError) -> Self {
        SecularError::Graph(e)
    }
}

/// Which end of an edge sits at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndSel {
    Start,
    End,
}

/// Ansatz assigned to one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisForm {
    /// a·sin(kx) + b·cos(kx); two coefficient slots.
    Interior,
    /// Leaf at x = L absorbed into the ansatz; one slot.
    LeafAtEnd(LeafBc),
    /// Leaf at x = 0 absorbed; one slot.
    LeafAtStart(LeafBc),
    /// Leaves at both ends: the x = L leaf is absorbed, the x = 0 leaf
    /// becomes an extra constraint row; one slot.
    DoubleLeaf { start: LeafBc, end: LeafBc },
}

#[derive(Clone, Copy, Debug)]
pub struct EdgeBasis {
    pub edge: usize,
    pub form: BasisForm,
    pub first_coeff: usize,
    pub n_coeffs: usize,
}

#[derive(Clone, Debug)]
pub enum RowKind {
    /// value(b) − value(a) = 0 for consecutive incident edge-ends at a node.
    Continuity {
        node: usize,
        a: (usize, EndSel),
        b: (usize, EndSel),
    },
    /// Σ outward normal derivatives / k = 0 over all incident ends.
    Kirchhoff { node: usize },
    /// Boundary condition row for the second leaf of a two-leaf edge.
    LeafConstraint { edge: usize },
}

/// Whether an entry contribution is a basis value or a normalized derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Usage {
    Value,
    Deriv,
}

/// One contribution to a matrix entry: coefficient `slot` of `edge`'s basis,
/// evaluated (value or derivative/k) at one end, with a row-plan sign.
#[derive(Clone, Copy, Debug)]
struct Event {
    row: u32,
    col: u32,
    edge: u32,
    slot: u8,
    usage: Usage,
    at: EndSel,
    flip: f64,
}

/// The assembled junction-condition system for one graph.
#[derive(Clone, Debug)]
pub struct SecularProblem {
    dim: usize,
    n_edges: usize,
    lengths: Vec<f64>,
    forms: Vec<BasisForm>,
    total_length: f64,
    min_length: f64,
    bases: Vec<EdgeBasis>,
    rows: Vec<RowKind>,
    events: Vec<Event>,
    /// Product over rows of the largest possible entry magnitude; constant
    /// in k, used to keep `det_real` values O(1).
    row_bound_product: f64,
}

/// Trigonometric value of one event on the real axis, with the mirrored
/// (x−L) forms folded to non-negative arguments.
fn circular_entry(form: BasisForm, slot: u8, usage: Usage, at: EndSel, k: f64, len: f64) -> f64 {
    use BasisForm::*;
    use EndSel::*;
    use Usage::*;
    let interior_a = |usage: Usage, at: EndSel| match (usage, at) {
        (Value, Start) => 0.0,
        (Value, End) => math::sin(k * len),
        (Deriv, Start) => 1.0,
        (Deriv, End) => math::cos(k * len),
    };
    let interior_b = |usage: Usage, at: EndSel| match (usage, at) {
        (Value, Start) => 1.0,
        (Value, End) => math::cos(k * len),
        (Deriv, Start) => 0.0,
        (Deriv, End) => -math::sin(k * len),
    };
    let leaf_end = |bc: LeafBc, usage: Usage, at: EndSel| match (bc, usage, at) {
        // a·sin(k(x−L))
        (LeafBc::Dirichlet, Value, Start) => -math::sin(k * len),
        (LeafBc::Dirichlet, Value, End) => 0.0,
        (LeafBc::Dirichlet, Deriv, Start) => math::cos(k * len),
        (LeafBc::Dirichlet, Deriv, End) => 1.0,
        // a·cos(k(x−L))
        (LeafBc::Neumann, Value, Start) => math::cos(k * len),
        (LeafBc::Neumann, Value, End) => 1.0,
        (LeafBc::Neumann, Deriv, Start) => math::sin(k * len),
        (LeafBc::Neumann, Deriv, End) => 0.0,
    };
    match form {
        Interior => {
            if slot == 0 {
                interior_a(usage, at)
            } else {
                interior_b(usage, at)
            }
        }
        LeafAtStart(LeafBc::Dirichlet) => interior_a(usage, at),
        LeafAtStart(LeafBc::Neumann) => interior_b(usage, at),
        LeafAtEnd(bc) => leaf_end(bc, usage, at),
        DoubleLeaf { end, .. } => leaf_end(end, usage, at),
    }
}

/// Entry on the imaginary axis in the decaying-exponential basis. Every
/// value lies in [−2, 2]; q = e^{−ωL}, and 1 − q² is formed via `expm1`.
fn exponential_entry(
    form: BasisForm,
    slot: u8,
    usage: Usage,
    at: EndSel,
    omega: f64,
    len: f64,
) -> f64 {
    use BasisForm::*;
    use EndSel::*;
    use Usage::*;
    let q = math::exp(-omega * len);
    let one_minus_q2 = -math::expm1(-2.0 * omega * len);
    let one_plus_q2 = 1.0 + q * q;
    // interior slots: α decays from the start, β from the end
    let interior_a = |usage: Usage, at: EndSel| match (usage, at) {
        (Value, Start) => 1.0,
        (Value, End) => q,
        (Deriv, Start) => -1.0,
        (Deriv, End) => -q,
    };
    let interior_b = |usage: Usage, at: EndSel| match (usage, at) {
        (Value, Start) => q,
        (Value, End) => 1.0,
        (Deriv, Start) => q,
        (Deriv, End) => 1.0,
    };
    let leaf_end = |bc: LeafBc, usage: Usage, at: EndSel| match (bc, usage, at) {
        // e^{−ωx} − e^{−ω(2L−x)}  (vanishes at x = L)
        (LeafBc::Dirichlet, Value, Start) => one_minus_q2,
        (LeafBc::Dirichlet, Value, End) => 0.0,
        (LeafBc::Dirichlet, Deriv, Start) => -one_plus_q2,
        (LeafBc::Dirichlet, Deriv, End) => -2.0 * q,
        // e^{−ωx} + e^{−ω(2L−x)}  (derivative vanishes at x = L)
        (LeafBc::Neumann, Value, Start) => one_plus_q2,
        (LeafBc::Neumann, Value, End) => 2.0 * q,
        (LeafBc::Neumann, Deriv, Start) => -one_minus_q2,
        (LeafBc::Neumann, Deriv, End) => 0.0,
    };
    let leaf_start = |bc: LeafBc, usage: Usage, at: EndSel| match (bc, usage, at) {
        // e^{−ω(L−x)} − e^{−ω(L+x)}  (vanishes at x = 0)
        (LeafBc::Dirichlet, Value, Start) => 0.0,
        (LeafBc::Dirichlet, Value, End) => one_minus_q2,
        (LeafBc::Dirichlet, Deriv, Start) => 2.0 * q,
        (LeafBc::Dirichlet, Deriv, End) => one_plus_q2,
        // e^{−ω(L−x)} + e^{−ω(L+x)}  (derivative vanishes at x = 0)
        (LeafBc::Neumann, Value, Start) => 2.0 * q,
        (LeafBc::Neumann, Value, End) => one_plus_q2,
        (LeafBc::Neumann, Deriv, Start) => 0.0,
        (LeafBc::Neumann, Deriv, End) => one_minus_q2,
    };
    match form {
        Interior => {
            if slot == 0 {
                interior_a(usage, at)
            } else {
                interior_b(usage, at)
            }
        }
        LeafAtStart(bc) => leaf_start(bc, usage, at),
        LeafAtEnd(bc) => leaf_end(bc, usage, at),
        DoubleLeaf { end, .. } => leaf_end(end, usage, at),
    }
}

impl SecularProblem {
    /// Assign bases and build the row plan. Rejects invalid graphs.
    pub fn new(graph: &MetricGraph) -> Result<SecularProblem, SecularError> {
        let violations = graph.validate();
        if !violations.is_empty() {
            return Err(SecularError::InvalidGraph(violations));
        }
        let edges = graph.edges();

        let mut bases = Vec::with_capacity(edges.len());
        let mut next_coeff = 0usize;
        for (i, e) in edges.iter().enumerate() {
            let form = match (&e.start, &e.end) {
                (Endpoint::Node(_), Endpoint::Node(_)) => BasisForm::Interior,
                (Endpoint::Node(_), Endpoint::Leaf(bc)) => BasisForm::LeafAtEnd(*bc),
                (Endpoint::Leaf(bc), Endpoint::Node(_)) => BasisForm::LeafAtStart(*bc),
                (Endpoint::Leaf(s), Endpoint::Leaf(e)) => BasisForm::DoubleLeaf {
                    start: *s,
                    end: *e,
                },
            };
            let n_coeffs = if form == BasisForm::Interior { 2 } else { 1 };
            bases.push(EdgeBasis {
                edge: i,
                form,
                first_coeff: next_coeff,
                n_coeffs,
            });
            next_coeff += n_coeffs;
        }
        let dim = next_coeff;

        let mut rows = Vec::new();
        let mut events = Vec::new();
        let mut row_idx = 0u32;

        let push_edge = |events: &mut Vec<Event>,
                             row: u32,
                             basis: &EdgeBasis,
                             usage: Usage,
                             at: EndSel,
                             flip: f64| {
            for slot in 0..basis.n_coeffs {
                events.push(Event {
                    row,
                    col: (basis.first_coeff + slot) as u32,
                    edge: basis.edge as u32,
                    slot: slot as u8,
                    usage,
                    at,
                    flip,
                });
            }
        };

        for node in 0..graph.node_count() {
            let mut incident: Vec<(usize, EndSel)> = Vec::new();
            for (i, e) in edges.iter().enumerate() {
                if e.start == Endpoint::Node(node) {
                    incident.push((i, EndSel::Start));
                }
                if e.end == Endpoint::Node(node) {
                    incident.push((i, EndSel::End));
                }
            }
            // continuity chain: value(next) − value(current)
            for pair in incident.windows(2) {
                let (ea, at_a) = pair[0];
                let (eb, at_b) = pair[1];
                push_edge(&mut events, row_idx, &bases[ea], Usage::Value, at_a, -1.0);
                push_edge(&mut events, row_idx, &bases[eb], Usage::Value, at_b, 1.0);
                rows.push(RowKind::Continuity {
                    node,
                    a: (ea, at_a),
                    b: (eb, at_b),
                });
                row_idx += 1;
            }
            // Kirchhoff: outward derivative is +d/dx at a start end, −d/dx at an end end
            for &(edge, at) in &incident {
                let flip = match at {
                    EndSel::Start => 1.0,
                    EndSel::End => -1.0,
                };
                push_edge(&mut events, row_idx, &bases[edge], Usage::Deriv, at, flip);
            }
            rows.push(RowKind::Kirchhoff { node });
            row_idx += 1;
        }

        // second-leaf constraint rows
        for basis in &bases {
            if let BasisForm::DoubleLeaf { start, .. } = basis.form {
                let usage = match start {
                    LeafBc::Dirichlet => Usage::Value,
                    LeafBc::Neumann => Usage::Deriv,
                };
                push_edge(&mut events, row_idx, basis, usage, EndSel::Start, 1.0);
                rows.push(RowKind::LeafConstraint { edge: basis.edge });
                row_idx += 1;
            }
        }

        debug_assert_eq!(row_idx as usize, dim, "junction system must be square");

        // constant normalization for det_real: per-row largest possible entry
        let mut entry_bound = alloc::vec![0.0f64; dim * dim];
        for ev in &events {
            entry_bound[ev.row as usize * dim + ev.col as usize] += ev.flip.abs();
        }
        let mut row_bound_product = 1.0;
        for r in 0..dim {
            let rb = entry_bound[r * dim..(r + 1) * dim]
                .iter()
                .fold(0.0f64, |a, &b| a.max(b));
            row_bound_product *= rb.max(1.0);
        }

        Ok(SecularProblem {
            dim,
            n_edges: edges.len(),
            lengths: edges.iter().map(|e| e.length).collect(),
            forms: bases.iter().map(|b| b.form).collect(),
            total_length: graph.total_length(),
            min_length: graph.min_length(),
            bases,
            rows,
            events,
            row_bound_product,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn min_length(&self) -> f64 {
        self.min_length
    }

    pub fn bases(&self) -> &[EdgeBasis] {
        &self.bases
    }

    pub fn rows(&self) -> &[RowKind] {
        &self.rows
    }

    /// M(k) on the real axis, row-major.
    pub fn matrix_real(&self, k: f64) -> Vec<f64> {
        let mut m = alloc::vec![0.0f64; self.dim * self.dim];
        for ev in &self.events {
            let edge = ev.edge as usize;
            let v = circular_entry(
                self.forms[edge],
                ev.slot,
                ev.usage,
                ev.at,
                k,
                self.lengths[edge],
            );
            m[ev.row as usize * self.dim + ev.col as usize] += ev.flip * v;
        }
        m
    }

    /// The decaying-exponential counterpart of M(iω); bounded entries.
    fn matrix_imag(&self, omega: f64) -> Vec<f64> {
        let mut m = alloc::vec![0.0f64; self.dim * self.dim];
        for ev in &self.events {
            let edge = ev.edge as usize;
            let v = exponential_entry(
                self.forms[edge],
                ev.slot,
                ev.usage,
                ev.at,
                omega,
                self.lengths[edge],
            );
            m[ev.row as usize * self.dim + ev.col as usize] += ev.flip * v;
        }
        m
    }

    /// Signed det M(k) under a fixed positive normalization; sign changes in
    /// k bracket simple spectral zeros.
    pub fn det_real(&self, k: f64) -> f64 {
        let mut m = self.matrix_real(k);
        match lu_det_f64(&mut m, self.dim) {
            Some(det) => det / self.row_bound_product,
            None => 0.0,
        }
    }

    /// h(ω) = log|Δ(iω)| − ω·ΣL, finite and bounded for arbitrarily large ω.
    pub fn normalized_log_det(&self, omega: f64) -> Result<f64, SecularError> {
        let mut m = self.matrix_imag(omega);
        let n = self.dim;
        let mut log_det = 0.0f64;
        for col in 0..n {
            let mut pivot = col;
            for row in col + 1..n {
                if m[row * n + col].abs() > m[pivot * n + col].abs() {
                    pivot = row;
                }
            }
            let p = m[pivot * n + col];
            if p == 0.0 || !p.is_finite() {
                return Err(SecularError::NonFinite { omega });
            }
            if pivot != col {
                for j in col..n {
                    m.swap(col * n + j, pivot * n + j);
                }
            }
            log_det += math::ln(p.abs());
            for row in col + 1..n {
                let factor = m[row * n + col] / p;
                if factor == 0.0 {
                    continue;
                }
                for j in col + 1..n {
                    m[row * n + j] -= factor * m[col * n + j];
                }
            }
        }
        let h = log_det - self.n_edges as f64 * core::f64::consts::LN_2;
        if !h.is_finite() {
            return Err(SecularError::NonFinite { omega });
        }
        Ok(h)
    }
}

/// Plain LU determinant with partial pivoting; `None` when exactly singular.
fn lu_det_f64(m: &mut [f64], n: usize) -> Option<f64> {
    let mut det = 1.0f64;
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if m[pivot * n + col] == 0.0 {
            return None;
        }
        if pivot != col {
            for j in col..n {
                m.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for row in col + 1..n {
            let factor = m[row * n + col] / p;
            if factor == 0.0 {
                continue;
            }
            for j in col + 1..n {
                m[row * n + j] -= factor * m[col * n + j];
            }
        }
    }
    Some(det)
}

/// Closed-form secular sum for a uniform star: Σ cot(k·Lᵢ) under Dirichlet
/// leaves, Σ tan(k·Lᵢ) under Neumann. Evaluation at a pole returns a signed
/// infinity.
pub fn star_secular_closed(lengths: &[f64], bc: LeafBc, k: f64) -> f64 {
    let mut sum = 0.0;
    for &l in lengths {
        sum += match bc {
            LeafBc::Dirichlet => math::cot(k * l),
            LeafBc::Neumann => math::tan(k * l),
        };
    }
    sum
}

/// The object every energy computation consumes: either the closed star form
/// or the determinant of the junction matrix.
#[derive(Clone, Debug)]
pub enum SecularFunction {
    ClosedFormStar { lengths: Vec<f64>, bc: LeafBc },
    Determinant(SecularProblem),
}

impl SecularFunction {
    /// Closed form when the graph is a uniform star, determinant otherwise.
    pub fn for_graph(graph: &MetricGraph) -> Result<SecularFunction, SecularError> {
        if let Some((lengths, bc)) = graph.as_uniform_star() {
            let violations = graph.validate();
            if !violations.is_empty() {
                return Err(SecularError::InvalidGraph(violations));
            }
            Ok(SecularFunction::ClosedFormStar { lengths, bc })
        } else {
            Ok(SecularFunction::Determinant(SecularProblem::new(graph)?))
        }
    }

    /// Always the determinant route.
    pub fn determinant(graph: &MetricGraph) -> Result<SecularFunction, SecularError> {
        Ok(SecularFunction::Determinant(SecularProblem::new(graph)?))
    }

    pub fn total_length(&self) -> f64 {
        match self {
            SecularFunction::ClosedFormStar { lengths, .. } => lengths.iter().sum(),
            SecularFunction::Determinant(p) => p.total_length(),
        }
    }

    pub fn min_length(&self) -> f64 {
        match self {
            SecularFunction::ClosedFormStar { lengths, .. } => {
                lengths.iter().copied().fold(f64::INFINITY, f64::min)
            }
            SecularFunction::Determinant(p) => p.min_length(),
        }
    }

    /// Signed secular value on the real axis. The closed star form has poles
    /// between its zeros; the determinant has none.
    pub fn det_real(&self, k: f64) -> f64 {
        match self {
            SecularFunction::ClosedFormStar { lengths, bc } => {
                star_secular_closed(lengths, *bc, k)
            }
            SecularFunction::Determinant(p) => p.det_real(k),
        }
    }

    /// h(ω) = log Δ(iω) minus the leading exponential exponent (ω·ΣL for the
    /// determinant; zero for the closed star sums, which stay bounded).
    pub fn log_det_imag(&self, omega: f64) -> Result<f64, SecularError> {
        match self {
            SecularFunction::ClosedFormStar { lengths, bc } => {
                let mut sum = 0.0;
                for &l in lengths {
                    sum += match bc {
                        LeafBc::Dirichlet => math::coth(omega * l),
                        LeafBc::Neumann => math::tanh(omega * l),
                    };
                }
                Ok(math::ln(sum))
            }
            SecularFunction::Determinant(p) => p.normalized_log_det(omega),
        }
    }

    /// d/dω log Δ(iω): analytic for the closed star form, stable central
    /// difference of h for the determinant.
    pub fn log_derivative_imag(&self, omega: f64) -> Result<f64, SecularError> {
        match self {
            SecularFunction::ClosedFormStar { lengths, bc } => {
                let mut num = 0.0;
                let mut den = 0.0;
                for &l in lengths {
                    match bc {
                        LeafBc::Dirichlet => {
                            num -= l * math::csch2(omega * l);
                            den += math::coth(omega * l);
                        }
                        LeafBc::Neumann => {
                            num += l * math::sech2(omega * l);
                            den += math::tanh(omega * l);
                        }
                    }
                }
                Ok(num / den)
            }
            SecularFunction::Determinant(p) => {
                let delta = 1e-6 * omega.max(1.0);
                let lo = (omega - delta).max(omega * 0.5);
                let hi = omega + (omega - lo);
                let h_lo = p.normalized_log_det(lo)?;
                let h_hi = p.normalized_log_det(hi)?;
                Ok((h_hi - h_lo) / (hi - lo) + p.total_length())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MetricGraph;
    use core::f64::consts::PI;

    fn problem(g: &MetricGraph) -> SecularProblem {
        SecularProblem::new(g).unwrap()
    }

    #[test]
    fn strip_dirichlet_determinant_is_sine() {
        let g = MetricGraph::strip(1.0, LeafBc::Dirichlet).unwrap();
        let p = problem(&g);
        assert_eq!(p.dim(), 1);
        // det ∝ -sin(kL)
        for &k in &[0.3, 1.0, 2.5, 3.1] {
            assert!((p.det_real(k) + k.sin()).abs() < 1e-14, "k={k}");
        }
        // sign change brackets pi
        assert!(p.det_real(3.0) * p.det_real(3.3) < 0.0);
    }

    #[test]
    fn strip_neumann_zeros_at_multiples_of_pi_over_l() {
        let g = MetricGraph::strip(2.0, LeafBc::Neumann).unwrap();
        let p = problem(&g);
        for m in 1..=6 {
            let k = m as f64 * PI / 2.0;
            assert!(p.det_real(k).abs() < 1e-12, "m={m}");
            assert!(p.det_real(k - 0.05) * p.det_real(k + 0.05) < 0.0);
        }
    }

    #[test]
    fn circle_determinant_is_two_minus_two_cos() {
        let g = MetricGraph::circle(1.0).unwrap();
        let p = problem(&g);
        for &k in &[0.7, 2.0, 5.9, 2.0 * PI] {
            let expect = (2.0 - 2.0 * k.cos()) / p.row_bound_product;
            assert!(
                (p.det_real(k) - expect).abs() < 1e-13,
                "k={k} got {} want {}",
                p.det_real(k),
                expect
            );
        }
        // double zero at 2π: value ~ 0 but no sign change
        assert!(p.det_real(2.0 * PI).abs() < 1e-12);
        assert!(p.det_real(2.0 * PI - 0.1) * p.det_real(2.0 * PI + 0.1) > 0.0);
    }

    #[test]
    fn star_determinant_vanishes_with_closed_form() {
        // symmetric DBC star: cos(kL) = 0 at k = π/2
        let g = MetricGraph::star(&[1.0, 1.0, 1.0], LeafBc::Dirichlet).unwrap();
        let p = problem(&g);
        let mut lo = 1.5;
        let mut hi = 1.6;
        assert!(p.det_real(lo) * p.det_real(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if p.det_real(lo) * p.det_real(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((0.5 * (lo + hi) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn tree5_matrix_matches_printed_rows_up_to_sign() {
        let ls = [1.1, 0.7, 1.3, 0.9, 1.6];
        let g = MetricGraph::tree5(&ls, LeafBc::Dirichlet).unwrap();
        let p = problem(&g);
        assert_eq!(p.dim(), 6);
        for &k in &[0.37, 1.0, 2.9] {
            let (s, c): (Vec<f64>, Vec<f64>) = (
                ls.iter().map(|l| (k * l).sin()).collect(),
                ls.iter().map(|l| (k * l).cos()).collect(),
            );
            // reference rows: coefficient order (a1, a2, a3, b3, a4, a5)
            let reference: [[f64; 6]; 6] = [
                [s[0], -s[1], 0.0, 0.0, 0.0, 0.0],
                [0.0, s[1], 0.0, 1.0, 0.0, 0.0],
                [c[0], c[1], 1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, s[2], c[2], -s[3], 0.0],
                [0.0, 0.0, 0.0, 0.0, s[3], -s[4]],
                [0.0, 0.0, c[2], -s[2], c[3], c[4]],
            ];
            let m = p.matrix_real(k);
            for r in 0..6 {
                // fix the per-row sign from the first non-negligible entry
                let mut sign = 0.0;
                for c in 0..6 {
                    if reference[r][c].abs() > 1e-3 {
                        sign = (m[r * 6 + c] / reference[r][c]).signum();
                        break;
                    }
                }
                assert!(sign == 1.0 || sign == -1.0, "row {r} sign");
                for c in 0..6 {
                    assert!(
                        (m[r * 6 + c] - sign * reference[r][c]).abs() < 1e-14,
                        "k={k} entry ({},{}) got {} want {}",
                        r + 1,
                        c + 1,
                        m[r * 6 + c],
                        sign * reference[r][c]
                    );
                }
            }
        }
    }

    #[test]
    fn tree5_spec_entries_at_unit_arguments() {
        let g = MetricGraph::tree5(&[1.0; 5], LeafBc::Dirichlet).unwrap();
        let m = problem(&g).matrix_real(1.0);
        assert!((m[0] - 1.0f64.sin()).abs() < 1e-15); // entry (1,1) = sin(1)
        assert!((m[2 * 6 + 2] - 1.0).abs() < 1e-15); // entry (3,3) = 1
    }

    fn det6(m: &[[f64; 6]; 6]) -> f64 {
        let mut a = *m;
        let mut det = 1.0;
        for col in 0..6 {
            let mut piv = col;
            for row in col + 1..6 {
                if a[row][col].abs() > a[piv][col].abs() {
                    piv = row;
                }
            }
            if a[piv][col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..6 {
                let f = a[row][col] / a[col][col];
                for j in col..6 {
                    a[row][j] -= f * a[col][j];
                }
            }
        }
        det
    }

    #[test]
    fn loop4_determinant_matches_printed_matrix() {
        let ls = [0.8, 1.2, 0.65, 1.4];
        let g = MetricGraph::loop4(&ls, LeafBc::Dirichlet).unwrap();
        let p = problem(&g);
        assert_eq!(p.dim(), 6);
        // printed reference, coefficient order (a1, a2, b2, a3, b3, a4)
        let reference_det = |k: f64| -> f64 {
            let s: Vec<f64> = ls.iter().map(|l| (k * l).sin()).collect();
            let c: Vec<f64> = ls.iter().map(|l| (k * l).cos()).collect();
            let m = [
                [s[0], 0.0, 1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0, -1.0, 0.0],
                [c[0], 1.0, 0.0, 1.0, 0.0, 0.0],
                [0.0, s[1], c[1], 0.0, 0.0, -s[3]],
                [0.0, 0.0, 0.0, -s[2], -c[2], s[3]],
                [0.0, c[1], -s[1], c[2], -s[2], c[3]],
            ];
            det6(&m)
        };
        let mut ratios = Vec::new();
        for &k in &[0.31, 0.9, 1.7, 2.3] {
            let mine = p.det_real(k) * p.row_bound_product;
            let printed = reference_det(k);
            assert!(printed.abs() > 1e-6);
            ratios.push(mine / printed);
        }
        // determinant agrees with the printed one up to one fixed sign
        for r in &ratios {
            assert!(
                (r.abs() - 1.0).abs() < 1e-10,
                "|det ratio| != 1: {ratios:?}"
            );
            assert!((r - ratios[0]).abs() < 1e-10, "ratio not constant: {ratios:?}");
        }
    }

    #[test]
    fn tree5_determinant_matches_printed_matrix() {
        let ls = [1.1, 0.7, 1.3, 0.9, 1.6];
        let g = MetricGraph::tree5(&ls, LeafBc::Dirichlet).unwrap();
        let p = problem(&g);
        let reference_det = |k: f64| -> f64 {
            let s: Vec<f64> = ls.iter().map(|l| (k * l).sin()).collect();
            let c: Vec<f64> = ls.iter().map(|l| (k * l).cos()).collect();
            let m = [
                [s[0], -s[1], 0.0, 0.0, 0.0, 0.0],
                [0.0, s[1], 0.0, 1.0, 0.0, 0.0],
                [c[0], c[1], 1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, s[2], c[2], -s[3], 0.0],
                [0.0, 0.0, 0.0, 0.0, s[3], -s[4]],
                [0.0, 0.0, c[2], -s[2], c[3], c[4]],
            ];
            det6(&m)
        };
        let mut ratio0 = None;
        for &k in &[0.41, 1.13, 2.7] {
            let mine = p.det_real(k) * p.row_bound_product;
            let printed = reference_det(k);
            let r = mine / printed;
            assert!((r.abs() - 1.0).abs() < 1e-10, "k={k} ratio {r}");
            match ratio0 {
                None => ratio0 = Some(r),
                Some(r0) => assert!((r - r0).abs() < 1e-10),
            }
        }
    }

    #[test]
    fn matrix_entries_continuous_at_k_zero() {
        let g = MetricGraph::tree5(&[1.0; 5], LeafBc::Dirichlet).unwrap();
        let p = problem(&g);
        let m0 = p.matrix_real(0.0);
        let m_eps = p.matrix_real(1e-9);
        for (a, b) in m0.iter().zip(m_eps.iter()) {
            assert!((a - b).abs() < 1e-8);
        }
        // sines -> 0, cosines -> 1 at k = 0
        assert_eq!(m0[0], 0.0);
        assert_eq!(m0[2 * 6], 1.0);
    }

    #[test]
    fn normalized_log_det_is_bounded_to_large_omega() {
        for g in [
            MetricGraph::star(&[1.0, 1.0, 1.0], LeafBc::Dirichlet).unwrap(),
            MetricGraph::star(&[0.5, 1.5, 2.5], LeafBc::Neumann).unwrap(),
            MetricGraph::tree5(&[1.0; 5], LeafBc::Dirichlet).unwrap(),
            MetricGraph::tree5(&[1.0; 5], LeafBc::Neumann).unwrap(),
            MetricGraph::loop4(&[1.0; 4], LeafBc::Dirichlet).unwrap(),
            MetricGraph::loop4(&[1.0; 4], LeafBc::Neumann).unwrap(),
            MetricGraph::strip(1.0, LeafBc::Dirichlet).unwrap(),
            MetricGraph::circle(1.0).unwrap(),
        ] {
            let p = problem(&g);
            let total = p.total_length();
            let mut omega = 1e-4 / total;
            while omega <= 1.0e4 / total {
                let h = p.normalized_log_det(omega).unwrap();
                assert!(h.is_finite() && h.abs() < 50.0, "h({omega}) = {h}");
                omega *= 1.7;
            }
        }
    }

    #[test]
    fn strip_log_det_has_analytic_form() {
        // |Δ(iω)| = sinh(ω) → h = log(1 - e^{-2ω}) - log 2
        let g = MetricGraph::strip(1.0, LeafBc::Dirichlet).unwrap();
        let p = problem(&g);
        for &w in &[0.1, 1.0, 5.0, 40.0, 900.0] {
            let expect = (-(-2.0f64 * w).exp()).ln_1p() - core::f64::consts::LN_2;
            let h = p.normalized_log_det(w).unwrap();
            assert!((h - expect).abs() < 1e-12, "w={w}: {h} vs {expect}");
        }
    }

    #[test]
    fn circle_log_det_has_analytic_form() {
        // |Δ(iω)| = 2 cosh(ωL) − 2 → h = 2 log(1 − e^{−ωL})
        let g = MetricGraph::circle(1.0).unwrap();
        let p = problem(&g);
        for &w in &[0.05f64, 1.0, 20.0, 48.0, 3000.0] {
            let expect = 2.0 * (-(-w).exp()).ln_1p();
            let h = p.normalized_log_det(w).unwrap();
            assert!(
                (h - expect).abs() < 1e-12 * (1.0 + expect.abs()),
                "w={w}: {h} vs {expect}"
            );
        }
    }

    #[test]
    fn log_derivative_reaches_total_length_asymptote() {
        for g in [
            MetricGraph::tree5(&[1.0, 1.3, 0.7, 1.1, 0.9], LeafBc::Dirichlet).unwrap(),
            MetricGraph::loop4(&[1.0, 0.8, 1.2, 0.9], LeafBc::Neumann).unwrap(),
            MetricGraph::circle(2.0).unwrap(),
        ] {
            let f = SecularFunction::determinant(&g).unwrap();
            let omega = 30.0 / g.min_length();
            let d = f.log_derivative_imag(omega).unwrap();
            assert!(
                (d - g.total_length()).abs() < 1e-8,
                "asymptote violated: {} vs {}",
                d,
                g.total_length()
            );
        }
    }

    #[test]
    fn strip_log_derivative_is_coth() {
        let g = MetricGraph::strip(1.0, LeafBc::Dirichlet).unwrap();
        let f = SecularFunction::determinant(&g).unwrap();
        let d = f.log_derivative_imag(5.0).unwrap();
        assert!((d - 5.0f64.tanh().recip()).abs() < 1e-9, "coth(5) vs {d}");
    }

    #[test]
    fn closed_star_derivative_matches_determinant_route() {
        let lengths = alloc::vec![1.0, 1.4, 0.6];
        let g = MetricGraph::star(&lengths, LeafBc::Dirichlet).unwrap();
        let closed = SecularFunction::for_graph(&g).unwrap();
        assert!(matches!(closed, SecularFunction::ClosedFormStar { .. }));
        let det = SecularFunction::determinant(&g).unwrap();
        for &w in &[0.3, 1.0, 4.0] {
            // closed form has the pole factor Π sinh removed:
            // d log Δ_det = d log Δ_closed + Σ L coth(ωL)
            let prod_term: f64 = lengths.iter().map(|l| l * math::coth(w * l)).sum();
            let a = closed.log_derivative_imag(w).unwrap() + prod_term;
            let b = det.log_derivative_imag(w).unwrap();
            assert!((a - b).abs() < 1e-6, "w={w}: {a} vs {b}");
        }
    }

    #[test]
    fn closed_star_log_derivative_matches_printed_integrand() {
        // DBC [1,1,1]: d/dω log Σcoth = -3·csch²(ω) / (3·coth(ω))
        let f = SecularFunction::ClosedFormStar {
            lengths: alloc::vec![1.0, 1.0, 1.0],
            bc: LeafBc::Dirichlet,
        };
        let w = 0.8f64;
        let expect = -(3.0 * math::csch2(w)) / (3.0 * math::coth(w));
        assert!((f.log_derivative_imag(w).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn neumann_zero_mode_gives_log_slope_at_origin() {
        // Σ tanh(ωL) ~ ω ΣL ⇒ h(ω) ~ log ω near 0
        let f = SecularFunction::ClosedFormStar {
            lengths: alloc::vec![1.0, 1.0, 1.0],
            bc: LeafBc::Neumann,
        };
        let h1 = f.log_det_imag(1e-6).unwrap();
        let h2 = f.log_det_imag(1e-7).unwrap();
        assert!((h1 - h2 - core::f64::consts::LN_10).abs() < 1e-4);
    }

    #[test]
    fn star_closed_form_pole_and_zero_values() {
        assert!((star_secular_closed(&[1.0, 1.0, 1.0], LeafBc::Dirichlet, PI / 2.0)).abs() < 1e-12);
        assert!((star_secular_closed(&[1.0, 1.0, 1.0], LeafBc::Neumann, PI)).abs() < 1e-12);
        // dividing by an exact float zero of sin marks the pole
        let at_pole = star_secular_closed(&[0.5, 1.0], LeafBc::Dirichlet, 0.0);
        assert!(at_pole.is_infinite());
    }

    #[test]
    fn invalid_graph_is_rejected() {
        let g = MetricGraph::new(0, alloc::vec![]);
        assert!(matches!(
            SecularProblem::new(&g),
            Err(SecularError::InvalidGraph(_))
        ));
    }
}
