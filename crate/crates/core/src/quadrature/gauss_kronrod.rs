use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{check_interval, check_tol, EndpointFlags, QuadError, QuadratureResult, Rule};
use crate::sum::NeumaierSum;

/// Hard cap on the number of panels an adaptive run may create.
pub const DEFAULT_MAX_PANELS: usize = 1_000_000;

thread_local! {
    static PANEL_BUDGET: Cell<usize> = const { Cell::new(DEFAULT_MAX_PANELS) };
}

/// Runs `f` with `max_panels` as the panel cap of every [`Adaptive`]
/// created on this thread inside it, restoring the previous cap afterwards.
pub fn with_panel_budget<R>(max_panels: usize, f: impl FnOnce() -> R) -> R {
    struct Restore(usize);
    impl Drop for Restore {
        fn drop(&mut self) {
            PANEL_BUDGET.with(|b| b.set(self.0));
        }
    }
    let _restore = Restore(PANEL_BUDGET.with(|b| b.replace(max_panels.max(1))));
    f()
}

// Kronrod abscissae (descending, last is the centre) and weights. The odd
// entries are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss–Kronrod panel evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelEstimate {
    pub kronrod: f64,
    pub gauss: f64,
    pub error: f64,
    /// Approximation of ∫|f|.
    pub abs_integral: f64,
}

/// 7-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss7<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = WG[3] * f(c);
    for j in 0..3 {
        let dx = h * XGK[2 * j + 1];
        s += WG[j] * (f(c - dx) + f(c + dx));
    }
    s * h
}

/// 15-point Kronrod rule with its embedded 7-point Gauss rule. The error
/// estimate follows the QUADPACK scaling.
pub fn gauss_kronrod_15<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> PanelEstimate {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let hl = h.abs();
    let resk = resk * h;
    let resg = resg * h;
    let resabs = resabs * hl;
    let resasc = resasc * hl;
    let mut err = (resk - resg).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    PanelEstimate {
        kronrod: resk,
        gauss: resg,
        error: err,
        abs_integral: resabs,
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    est: PanelEstimate,
}

impl Panel {
    fn at_roundoff_floor(&self) -> bool {
        self.est.error <= 50.0 * f64::EPSILON * self.est.abs_integral * 1.000_001
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est
            .error
            .total_cmp(&other.est.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Adaptive Gauss–Kronrod integrator.
#[derive(Debug, Clone)]
pub struct Adaptive {
    tol: f64,
    max_panels: usize,
    breakpoints: Vec<f64>,
}

impl Adaptive {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            max_panels: PANEL_BUDGET.with(Cell::get),
            breakpoints: Vec::new(),
        }
    }

    pub fn max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels.max(1);
        self
    }

    /// Points at which the interval is pre-split. Points outside `(a, b)`
    /// are ignored.
    pub fn breakpoints(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints = points.into_iter().collect();
        self
    }

    pub fn integrate<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
    ) -> Result<QuadratureResult, QuadError> {
        check_interval(a, b)?;
        check_tol(self.tol)?;

        let mut cuts: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|p| p.is_finite() && *p > a && *p < b)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(a);
        edges.extend(cuts);
        edges.push(b);

        let mut eval = |lo: f64, hi: f64| -> Result<Panel, QuadError> {
            let mut bad = None;
            let est = gauss_kronrod_15(
                |x| {
                    let y = f(x);
                    if !y.is_finite() && bad.is_none() {
                        bad = Some(x);
                    }
                    y
                },
                lo,
                hi,
            );
            match bad {
                Some(x) => Err(QuadError::NonFinite { x }),
                None => Ok(Panel { a: lo, b: hi, est }),
            }
        };

        let mut active = BinaryHeap::new();
        let mut settled = Vec::new();
        let mut total_err = 0.0;
        for w in edges.windows(2) {
            let p = eval(w[0], w[1])?;
            total_err += p.est.error;
            active.push(p);
        }
        let mut count = active.len();

        while total_err > self.tol {
            let Some(worst) = active.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            let splittable = mid > worst.a && mid < worst.b && !worst.at_roundoff_floor();
            if !splittable {
                settled.push(worst);
                continue;
            }
            if count >= self.max_panels {
                active.push(worst);
                let (value, _) = Self::collect(&active, &settled);
                return Err(QuadError::NonConvergence {
                    value,
                    error_estimate: total_err,
                    panels: count,
                });
            }
            let left = eval(worst.a, mid)?;
            let right = eval(mid, worst.b)?;
            total_err += left.est.error + right.est.error - worst.est.error;
            active.push(left);
            active.push(right);
            count += 1;
        }

        let (value, error_estimate) = Self::collect(&active, &settled);
        Ok(QuadratureResult {
            value,
            error_estimate,
            panels_used: count,
            rule: Rule::GaussKronrod15,
            singular_endpoints: EndpointFlags::NONE,
        })
    }

    fn collect(active: &BinaryHeap<Panel>, settled: &[Panel]) -> (f64, f64) {
        let mut all: Vec<&Panel> = active.iter().chain(settled.iter()).collect();
        all.sort_by(|p, q| p.a.total_cmp(&q.a));
        let mut value = NeumaierSum::new();
        let mut err = NeumaierSum::new();
        for p in all {
            value.add(p.est.kronrod);
            err.add(p.est.error);
        }
        (value.value(), err.value())
    }
}
