use std::f64::consts::FRAC_PI_2;

use super::{check_interval, check_tol, EndpointFlags, QuadError, QuadratureResult, Rule};
use crate::sum::NeumaierSum;

/// A tanh–sinh node. `from_a` and `from_b` are the distances to the
/// interval ends, computed without forming `x - a` or `b - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
}

// Nodes closer than this (in unit coordinates) to a non-singular end are
// dropped.
const REGULAR_CUTOFF: f64 = 1e-15;
// Largest transformed abscissa; at s = 6 the unit distance is ~1e-275.
const S_MAX: f64 = 6.0;
const TAIL_RATIO: f64 = 1e-20;

/// Double-exponential (tanh–sinh) integrator with level refinement.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    tol: f64,
    min_level: u32,
    max_level: u32,
}

impl TanhSinh {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            min_level: 3,
            max_level: 12,
        }
    }

    pub fn max_level(mut self, level: u32) -> Self {
        self.max_level = level.max(1);
        self.min_level = self.min_level.min(self.max_level);
        self
    }

    pub fn integrate<F: FnMut(Abscissa) -> f64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        singular: EndpointFlags,
    ) -> Result<QuadratureResult, QuadError> {
        check_interval(a, b)?;
        check_tol(self.tol)?;
        let r = 0.5 * (b - a);

        let mut node = |s: f64| -> Result<Option<f64>, QuadError> {
            let u = FRAC_PI_2 * s.sinh();
            let e = (-2.0 * u.abs()).exp();
            let small = 2.0 * e / (1.0 + e);
            let flagged = if s < 0.0 { singular.left } else { singular.right };
            if s != 0.0 && !flagged && small < REGULAR_CUTOFF {
                return Ok(None);
            }
            let near = r * small;
            if near == 0.0 {
                return Ok(None);
            }
            let far = r * (2.0 - small);
            let p = if s < 0.0 {
                Abscissa {
                    x: a + near,
                    from_a: near,
                    from_b: far,
                }
            } else {
                Abscissa {
                    x: b - near,
                    from_a: far,
                    from_b: near,
                }
            };
            let w = FRAC_PI_2 * s.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
            let y = f(p);
            if !y.is_finite() {
                return Err(QuadError::NonFinite { x: p.x });
            }
            Ok(Some(w * y))
        };

        // Level 0: step 1, all integer nodes.
        let centre = node(0.0)?.unwrap_or(0.0);
        let mut sum = centre + side(&mut node, 1.0, 1, -1.0, centre.abs())? + side(&mut node, 1.0, 1, 1.0, centre.abs())?;
        let mut prev = r * sum;
        let mut level = 0;
        let mut diff = f64::INFINITY;
        while level < self.max_level {
            level += 1;
            let h = 0.5f64.powi(level as i32);
            let scale = sum.abs();
            let fresh = side(&mut node, h, 2, -1.0, scale)? + side(&mut node, h, 2, 1.0, scale)?;
            sum = 0.5 * sum + h * fresh;
            let cur = r * sum;
            diff = (cur - prev).abs();
            prev = cur;
            if level >= self.min_level && diff <= self.tol {
                return Ok(QuadratureResult {
                    value: cur,
                    error_estimate: diff,
                    panels_used: level as usize,
                    rule: Rule::TanhSinh,
                    singular_endpoints: singular,
                });
            }
        }
        Err(QuadError::NonConvergence {
            value: prev,
            error_estimate: diff,
            panels: level as usize,
        })
    }
}

/// Sums the nodes s = ±j·h, j = 1, 1+stride, …, on one side of the centre
/// until the transformed abscissa leaves the useful range or the terms
/// become negligible.
fn side<N>(node: &mut N, h: f64, stride: u64, sign: f64, acc_scale: f64) -> Result<f64, QuadError>
where
    N: FnMut(f64) -> Result<Option<f64>, QuadError>,
{
    let mut acc = NeumaierSum::new();
    let mut small_run = 0;
    let mut j = 1u64;
    loop {
        let s = sign * j as f64 * h;
        if s.abs() > S_MAX {
            break;
        }
        let Some(term) = node(s)? else { break };
        acc.add(term);
        if s.abs() >= 1.0 && term.abs() <= TAIL_RATIO * acc_scale.max(acc.value().abs()) {
            small_run += 1;
            if small_run >= 2 {
                break;
            }
        } else {
            small_run = 0;
        }
        j += stride;
    }
    Ok(acc.value())
}
