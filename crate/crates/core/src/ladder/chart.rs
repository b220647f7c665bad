use super::table::{integrate_panel, local_integral};
use super::{check_admissible, ztilde_sq, LadderError, LadderTable};
use crate::quadrature::{Adaptive, EndpointFlags, QuadratureResult, TanhSinh};
use crate::sum::NeumaierSum;

// Per-unit-length tolerance for the chart's own panel integrals.
const CHART_PANEL_TOL: f64 = 1e-14;
// End pieces handed to tanh–sinh are at least this long in t.
const END_PIECE: f64 = 0.1;

/// A node of the chart: `t` in the preimage interval, `x = φ₁(t) − T` and
/// `x_rev = φ₁(b) − φ₁(t)`, each accurate relative to its own size, and
/// the density Z̃²(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub t: f64,
    pub x: f64,
    pub x_rev: f64,
    pub density: f64,
}

/// φ₁ restricted to the preimage [a, b] of [T, T+U], re-expressed as the
/// offset x = φ₁(t) − T. The preimage of T is taken as the exact origin, so
/// the change of variables x = x(t) holds without the inversion residual.
#[derive(Debug, Clone)]
pub struct LocalChart<'a> {
    ladder: &'a LadderTable,
    base: f64,
    u: f64,
    nodes: Vec<f64>,
    offsets: Vec<f64>,
}

impl<'a> LocalChart<'a> {
    pub fn new(ladder: &'a LadderTable, base: f64, u: f64) -> Result<Self, LadderError> {
        check_admissible(base, u)?;
        let a = ladder.invert(base)?;
        let b = ladder.invert(base + u)?;
        let mut nodes = vec![a];
        let first = ladder.locate(a) + 1;
        let mut k = first;
        while k < ladder.checkpoint_count() && ladder.checkpoint_t(k) < b {
            nodes.push(ladder.checkpoint_t(k));
            k += 1;
        }
        nodes.push(b);
        let ev = ladder.evaluator();
        let mut acc = NeumaierSum::new();
        let mut offsets = vec![0.0];
        for w in nodes.windows(2) {
            let len = w[1] - w[0];
            acc.add(integrate_panel(ev, w[0], w[1], CHART_PANEL_TOL * len.max(1e-3), 12)?);
            offsets.push(acc.value());
        }
        Ok(Self {
            ladder,
            base,
            u,
            nodes,
            offsets,
        })
    }

    pub fn base(&self) -> f64 {
        self.base
    }
    pub fn length(&self) -> f64 {
        self.u
    }
    pub fn a(&self) -> f64 {
        self.nodes[0]
    }
    pub fn b(&self) -> f64 {
        *self.nodes.last().expect("chart has two ends")
    }
    /// φ₁(b) − φ₁(a) as integrated by the chart; equals U up to the
    /// inversion tolerance.
    pub fn span(&self) -> f64 {
        *self.offsets.last().expect("chart has two ends")
    }
    /// Checkpoints strictly inside (a, b).
    pub fn inner_nodes(&self) -> &[f64] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    fn panel_of(&self, t: f64) -> usize {
        let j = self.nodes.partition_point(|&n| n <= t);
        j.saturating_sub(1).min(self.nodes.len() - 2)
    }

    /// Chart point at `t`, with `from_a = t − a` and `from_b = b − t` supplied
    /// exactly when known.
    fn point(&self, t: f64, from_a: Option<f64>, from_b: Option<f64>) -> Result<ChartPoint, LadderError> {
        let ev = self.ladder.evaluator();
        let j = self.panel_of(t);
        let last = self.nodes.len() - 2;
        let left_len = match from_a {
            Some(d) if j == 0 => d,
            _ => t - self.nodes[j],
        };
        let right_len = match from_b {
            Some(d) if j == last => d,
            _ => self.nodes[j + 1] - t,
        };
        let left_start = if j == 0 { self.a() } else { self.nodes[j] };
        let x = self.offsets[j] + local_integral(ev, left_start, left_len)?;
        let x_rev = (self.span() - self.offsets[j + 1]) + local_integral(ev, self.nodes[j + 1] - right_len, right_len)?;
        Ok(ChartPoint {
            t,
            x: x.max(0.0),
            x_rev: x_rev.max(0.0),
            density: ztilde_sq(ev, t)?,
        })
    }

    /// φ₁(t) − T for t ∈ [a, b].
    pub fn offset(&self, t: f64) -> Result<f64, LadderError> {
        self.check(t)?;
        Ok(self.point(t, None, None)?.x)
    }

    fn check(&self, t: f64) -> Result<(), LadderError> {
        if !(t >= self.a() && t <= self.b()) {
            return Err(LadderError::Domain {
                what: "chart",
                value: t,
                lo: self.a(),
                hi: self.b(),
            });
        }
        Ok(())
    }

    /// ∫_a^b g(p) dt. Smooth integrands use adaptive Gauss–Kronrod split at
    /// the checkpoints; singular ends get a tanh–sinh piece of their own.
    pub fn integrate<G>(&self, mut g: G, singular: EndpointFlags, tol: f64) -> Result<QuadratureResult, LadderError>
    where
        G: FnMut(&ChartPoint) -> f64,
    {
        let (a, b) = (self.a(), self.b());
        let mut failure: Option<LadderError> = None;
        let mut call = |t: f64, fa: Option<f64>, fb: Option<f64>, failure: &mut Option<LadderError>| -> f64 {
            match self.point(t, fa, fb) {
                Ok(p) => g(&p),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        };

        let inner = self.inner_nodes();
        let left_cut = if singular.left {
            inner.iter().copied().find(|&n| n - a >= END_PIECE).unwrap_or(0.5 * (a + b))
        } else {
            a
        };
        let right_cut = if singular.right {
            inner
                .iter()
                .rev()
                .copied()
                .find(|&n| b - n >= END_PIECE && n >= left_cut)
                .unwrap_or(if singular.left { left_cut.max(0.5 * (a + b)) } else { 0.5 * (a + b) })
        } else {
            b
        };
        let pieces = usize::from(singular.left) + usize::from(singular.right) + usize::from(left_cut < right_cut);
        let piece_tol = tol / pieces.max(1) as f64;

        let mut total: Option<QuadratureResult> = None;
        let mut push = |r: QuadratureResult| {
            total = Some(match total {
                Some(t) => t.combine(r),
                None => r,
            });
        };
        if singular.left {
            let r = TanhSinh::new(piece_tol).integrate(
                |p| call(p.x, Some(p.from_a), None, &mut failure),
                a,
                left_cut,
                EndpointFlags::LEFT,
            );
            if let Some(e) = failure.take() {
                return Err(e);
            }
            push(r?);
        }
        if left_cut < right_cut {
            let r = Adaptive::new(piece_tol)
                .breakpoints(inner.iter().copied())
                .integrate(|t| call(t, None, None, &mut failure), left_cut, right_cut);
            if let Some(e) = failure.take() {
                return Err(e);
            }
            push(r?);
        }
        if singular.right {
            let r = TanhSinh::new(piece_tol).integrate(
                |p| call(p.x, None, Some(p.from_b), &mut failure),
                right_cut,
                b,
                EndpointFlags::RIGHT,
            );
            if let Some(e) = failure.take() {
                return Err(e);
            }
            push(r?);
        }
        let mut r = total.expect("at least one piece");
        r.singular_endpoints = singular;
        Ok(r)
    }
}

/// ∫_{φ₁⁻¹(T)}^{φ₁⁻¹(T+U)} f(φ₁(t)) Z̃²(t) dt, which by the change of
/// variables x = φ₁(t) equals ∫_T^{T+U} f(x) dx.
pub fn pushforward_integral<F>(
    ladder: &LadderTable,
    mut f: F,
    base: f64,
    u: f64,
    tol: f64,
) -> Result<QuadratureResult, LadderError>
where
    F: FnMut(f64) -> f64,
{
    let chart = LocalChart::new(ladder, base, u)?;
    chart.integrate(|p| f(base + p.x) * p.density, EndpointFlags::NONE, tol)
}
