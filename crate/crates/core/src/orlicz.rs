//! Orlicz (Young) functions: evaluation, right-continuous inverse,
//! complementary function and growth-condition probes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::{bisect_predicate, golden_min, log_grid};

/// Absolute tolerance of the right inverse.
pub const INVERSE_TOL: f64 = 1e-12;
/// Largest maximizer the conjugate bracket may expand to.
pub const CONJUGATE_BRACKET_CAP: f64 = 1e9;
/// Ratio `phi(2x)/phi(x)` above which the doubling condition is reported as failing.
pub const DELTA2_RATIO_CAP: f64 = 1e6;

const DELTA2_PROBE: (f64, f64) = (1e-6, 1e6);
const DELTA2_POINTS: usize = 400;
const CONVEXITY_TOL: f64 = 1e-12;

/// Closed-form families plus a convex piecewise-linear fallback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// `c * x^p`, `p > 1`, `c > 0`.
    Power {
        p: f64,
        #[serde(default = "one")]
        c: f64,
    },
    /// `e^x - x - 1`.
    ExpMinus,
    /// `x^p * ln(1 + x)`, `p >= 1`.
    PowerLog { p: f64 },
    /// Linear interpolation through `knots`, first knot `(0, 0)`,
    /// extrapolated past the last knot with the last slope.
    Tabulated { knots: Vec<[f64; 2]> },
}

fn one() -> f64 {
    1.0
}

/// Outcome of the doubling-condition probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Delta2 {
    Holds { k: f64 },
    Fails,
    Unknown,
}

impl Delta2 {
    pub fn holds(&self) -> bool {
        matches!(self, Delta2::Holds { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta2Verdict {
    Holds,
    Fails,
}

/// Result of probing `phi(2x) <= K phi(x)` on a log grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Delta2Report {
    pub verdict: Delta2Verdict,
    /// Largest finite ratio observed on the grid.
    pub k_estimate: f64,
    pub counterexample_x: Option<f64>,
    pub probe_range: (f64, f64),
}

/// A validated Orlicz function.
///
/// Construction runs the structural audit (zero at the origin, positivity,
/// monotonicity and midpoint convexity on a probe grid) and records the
/// doubling and superlinear-growth flags. Values are immutable afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct OrliczFunction {
    family: Family,
    delta2: Delta2,
    superlinear: bool,
    young_limits: bool,
}

impl From<OrliczFunction> for Family {
    fn from(phi: OrliczFunction) -> Self {
        phi.family
    }
}

impl TryFrom<Family> for OrliczFunction {
    type Error = Error;

    fn try_from(family: Family) -> Result<Self> {
        OrliczFunction::new(family)
    }
}

impl OrliczFunction {
    pub fn new(family: Family) -> Result<Self> {
        validate_parameters(&family)?;
        let mut phi = OrliczFunction {
            family,
            delta2: Delta2::Unknown,
            superlinear: false,
            young_limits: false,
        };
        phi.audit_shape()?;
        phi.young_limits = phi.check_young_limits();
        if !phi.young_limits && !matches!(phi.family, Family::Tabulated { .. }) {
            return Err(Error::InvalidOrlicz(
                "phi(x)/x must decrease toward 0 at the origin and grow at infinity".into(),
            ));
        }
        phi.delta2 = match &phi.family {
            Family::Power { p, .. } => Delta2::Holds { k: 2f64.powf(*p) },
            Family::PowerLog { p } => Delta2::Holds {
                k: 2f64.powf(p + 1.0),
            },
            Family::ExpMinus => Delta2::Fails,
            Family::Tabulated { .. } => {
                let report = phi.check_delta2();
                match report.verdict {
                    Delta2Verdict::Holds if report.k_estimate.is_finite() => Delta2::Holds {
                        k: report.k_estimate,
                    },
                    Delta2Verdict::Holds => Delta2::Unknown,
                    Delta2Verdict::Fails => Delta2::Fails,
                }
            }
        };
        phi.superlinear = phi.check_superlinear();
        Ok(phi)
    }

    pub fn power(p: f64, c: f64) -> Result<Self> {
        Self::new(Family::Power { p, c })
    }

    pub fn exp_minus() -> Self {
        Self::new(Family::ExpMinus).expect("e^x - x - 1 is an Orlicz function")
    }

    pub fn power_log(p: f64) -> Result<Self> {
        Self::new(Family::PowerLog { p })
    }

    pub fn tabulated(knots: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(Family::Tabulated { knots })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn delta2(&self) -> Delta2 {
        self.delta2
    }

    /// `phi(x) ≻≻ x` as decided by [`OrliczFunction::check_superlinear`].
    pub fn superlinear(&self) -> bool {
        self.superlinear
    }

    /// Whether `phi(x)/x` was seen decreasing at `10^-k` and increasing at
    /// `10^k` for `k = 1..8`. Always true for the closed-form families.
    pub fn young_limits(&self) -> bool {
        self.young_limits
    }

    /// `phi(x)` for `x >= 0`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("phi evaluated at {x}")));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the domain check. `x` must be nonnegative.
    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match &self.family {
            Family::Power { p, c } => c * x.powf(*p),
            Family::ExpMinus => exp_minus(x),
            Family::PowerLog { p } => x.powf(*p) * x.ln_1p(),
            Family::Tabulated { knots } => interpolate(knots, x),
        }
    }

    /// Right derivative of `phi` at `x >= 0`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("phi' evaluated at {x}")));
        }
        Ok(match &self.family {
            Family::Power { p, c } => c * p * x.powf(p - 1.0),
            Family::ExpMinus => x.exp_m1(),
            Family::PowerLog { p } => {
                p * x.powf(p - 1.0) * x.ln_1p() + x.powf(*p) / (1.0 + x)
            }
            Family::Tabulated { knots } => {
                let i = segment_index(knots, x);
                slope(knots, i)
            }
        })
    }

    /// `inf { s > 0 : phi(s) > t }` with the default tolerance.
    pub fn right_inverse(&self, t: f64) -> Result<f64> {
        self.right_inverse_tol(t, INVERSE_TOL)
    }

    /// Right-continuous inverse, bracketed bisection to absolute `tol`.
    /// Power families use the closed form.
    pub fn right_inverse_tol(&self, t: f64, tol: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("phi^-1 evaluated at {t}")));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if t == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        match &self.family {
            Family::Power { p, c } => Ok((t / c).powf(1.0 / p)),
            Family::Tabulated { knots } => Ok(tabulated_inverse(knots, t)),
            _ => {
                let mut hi = 1.0;
                while self.eval_unchecked(hi) <= t {
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Ok(f64::INFINITY);
                    }
                }
                let lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
                let (s, _) = bisect_predicate(
                    |s| self.eval_unchecked(s) > t,
                    lo,
                    hi,
                    tol,
                    4.0 * f64::EPSILON,
                    4096,
                );
                Ok(s)
            }
        }
    }

    /// `psi(y) = sup_{x >= 0} (x y - phi(x))` by golden-section search on the
    /// bracket where `phi'` first reaches `y`.
    pub fn conjugate_value(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::Domain(format!("conjugate evaluated at {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let mut hi = 1.0;
        while self.derivative(hi)? < y {
            hi *= 2.0;
            if hi > CONJUGATE_BRACKET_CAP {
                return Err(Error::UnboundedConjugate { y });
            }
        }
        let gain = |x: f64| x * y - self.eval_unchecked(x);
        let r = golden_min(|x| -gain(x), 0.0, hi, 1e-13 * hi, 400);
        let mut best = (-r.value).max(0.0).max(gain(hi));
        if let Family::Tabulated { knots } = &self.family {
            for k in knots.iter().take_while(|k| k[0] <= hi) {
                best = best.max(gain(k[0]));
            }
        }
        Ok(best)
    }

    /// Complementary function.
    ///
    /// Power families map to the closed-form conjugate power. Other families
    /// are tabulated from [`OrliczFunction::conjugate_value`] on a default grid.
    pub fn conjugate(&self) -> Result<OrliczFunction> {
        match &self.family {
            Family::Power { p, c } => {
                let (p, c) = (*p, *c);
                let q = p / (p - 1.0);
                let coeff = (1.0 - 1.0 / p) * (c * p).powf(-(q - 1.0));
                OrliczFunction::power(q, coeff)
            }
            Family::Tabulated { knots } => {
                let last = slope(knots, knots.len() - 1);
                let grid = log_grid(slope(knots, 0) * 1e-3, last, 256);
                self.conjugate_on(&grid)
            }
            _ => self.conjugate_on(&log_grid(1e-3, 1e3, 256)),
        }
    }

    /// Tabulated complementary function on the positive, increasing `grid`.
    pub fn conjugate_on(&self, grid: &[f64]) -> Result<OrliczFunction> {
        let mut knots = vec![[0.0, 0.0]];
        for &y in grid {
            if !(y > knots.last().unwrap()[0]) {
                return Err(Error::Domain("conjugate grid must be positive and increasing".into()));
            }
            knots.push([y, self.conjugate_value(y)?]);
        }
        OrliczFunction::tabulated(knots)
    }

    /// Probes `r(x) = phi(2x)/phi(x)` on 400 log-spaced points of
    /// `[1e-6, 1e6]`. Fails when the ratio exceeds [`DELTA2_RATIO_CAP`] or is
    /// not finite, or when it still trends upward over the top decade.
    pub fn check_delta2(&self) -> Delta2Report {
        let grid = log_grid(DELTA2_PROBE.0, DELTA2_PROBE.1, DELTA2_POINTS);
        let mut k_estimate: f64 = 0.0;
        let mut counterexample = None;
        let mut top = Vec::new();
        for &x in &grid {
            let ratio = self.eval_unchecked(2.0 * x) / self.eval_unchecked(x);
            if !ratio.is_finite() || ratio > DELTA2_RATIO_CAP {
                counterexample = Some(x);
                break;
            }
            k_estimate = k_estimate.max(ratio);
            if x >= DELTA2_PROBE.1 / 10.0 {
                top.push((x.log10(), ratio));
            }
        }
        if counterexample.is_none() && top.len() >= 2 {
            let n = top.len() as f64;
            let mx = top.iter().map(|t| t.0).sum::<f64>() / n;
            let my = top.iter().map(|t| t.1).sum::<f64>() / n;
            let sxy: f64 = top.iter().map(|t| (t.0 - mx) * (t.1 - my)).sum();
            let sxx: f64 = top.iter().map(|t| (t.0 - mx) * (t.0 - mx)).sum();
            if sxy / sxx > 1e-3 * k_estimate {
                counterexample = Some(DELTA2_PROBE.1);
            }
        }
        Delta2Report {
            verdict: if counterexample.is_some() {
                Delta2Verdict::Fails
            } else {
                Delta2Verdict::Holds
            },
            k_estimate,
            counterexample_x: counterexample,
            probe_range: DELTA2_PROBE,
        }
    }

    /// `phi^-1(x)/x` at `x = 10^k`, `k = 1..8`, strictly decreasing with the
    /// last sample below `1e-2`.
    pub fn check_superlinear(&self) -> bool {
        let samples: Vec<f64> = (1..=8)
            .map(|k| {
                let x = 10f64.powi(k);
                self.right_inverse(x).map(|s| s / x).unwrap_or(f64::NAN)
            })
            .collect();
        samples.windows(2).all(|w| w[1] < w[0]) && samples[7] < 1e-2
    }

    fn audit_shape(&self) -> Result<()> {
        if self.eval_unchecked(0.0) != 0.0 {
            return Err(Error::InvalidOrlicz("phi(0) must be 0".into()));
        }
        let grid = log_grid(1e-8, 1e8, 161);
        let mut prev = 0.0;
        for (i, &x) in grid.iter().enumerate() {
            let v = self.eval_unchecked(x);
            if v.is_nan() {
                return Err(Error::InvalidOrlicz(format!("phi({x}) is NaN")));
            }
            if !(v > 0.0) {
                return Err(Error::InvalidOrlicz(format!("phi({x}) = {v} is not positive")));
            }
            if v < prev {
                return Err(Error::InvalidOrlicz(format!("phi decreases at {x}")));
            }
            prev = v;
            if i > 0 {
                let a = grid[i - 1];
                let (fa, fm) = (self.eval_unchecked(a), self.eval_unchecked(0.5 * (a + x)));
                let chord = 0.5 * (fa + v);
                if chord.is_finite() && fm > chord + CONVEXITY_TOL * chord.max(1.0) {
                    return Err(Error::InvalidOrlicz(format!(
                        "midpoint convexity fails on [{a}, {x}]"
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_young_limits(&self) -> bool {
        let near_zero: Vec<f64> = (1..=8)
            .map(|k| {
                let x = 10f64.powi(-k);
                self.eval_unchecked(x) / x
            })
            .collect();
        let at_infinity: Vec<f64> = (1..=8)
            .map(|k| {
                let x = 10f64.powi(k);
                self.eval_unchecked(x) / x
            })
            .collect();
        near_zero.windows(2).all(|w| w[1] < w[0])
            && at_infinity
                .windows(2)
                .all(|w| w[1] > w[0] || (w[0].is_infinite() && w[1].is_infinite()))
    }
}

fn validate_parameters(family: &Family) -> Result<()> {
    match family {
        Family::Power { p, c } => {
            if !(p.is_finite() && *p > 1.0) {
                return Err(Error::config("p", format!("power exponent must be > 1, got {p}")));
            }
            if !(c.is_finite() && *c > 0.0) {
                return Err(Error::config("c", format!("coefficient must be > 0, got {c}")));
            }
        }
        Family::PowerLog { p } => {
            if !(p.is_finite() && *p >= 1.0) {
                return Err(Error::config("p", format!("power_log exponent must be >= 1, got {p}")));
            }
        }
        Family::ExpMinus => {}
        Family::Tabulated { knots } => audit_knots(knots)?,
    }
    Ok(())
}

fn audit_knots(knots: &[[f64; 2]]) -> Result<()> {
    if knots.len() < 2 {
        return Err(Error::config("knots", "need at least two knots"));
    }
    if knots[0] != [0.0, 0.0] {
        return Err(Error::config("knots[0]", "first knot must be [0, 0]"));
    }
    for (i, w) in knots.windows(2).enumerate() {
        if !(w[1][0].is_finite() && w[1][1].is_finite()) {
            return Err(Error::config(format!("knots[{}]", i + 1), "non-finite knot"));
        }
        if !(w[1][0] > w[0][0]) {
            return Err(Error::config(format!("knots[{}]", i + 1), "abscissae must increase strictly"));
        }
        if !(w[1][1] > w[0][1]) {
            return Err(Error::config(format!("knots[{}]", i + 1), "values must increase strictly"));
        }
    }
    for i in 1..knots.len() - 1 {
        let (left, right) = (slope(knots, i - 1), slope(knots, i));
        if right < left - CONVEXITY_TOL * left.abs().max(1.0) {
            return Err(Error::config(
                format!("knots[{i}]"),
                format!("convexity audit failed: slope drops from {left} to {right}"),
            ));
        }
    }
    Ok(())
}

/// `e^x - x - 1` without cancellation near the origin.
fn exp_minus(x: f64) -> f64 {
    if x < 0.1 {
        let mut term = x * x / 2.0;
        let mut sum = term;
        for k in 3..20 {
            term *= x / k as f64;
            sum += term;
        }
        sum
    } else {
        x.exp_m1() - x
    }
}

/// Index `i` of the segment `[knots[i], knots[i+1]]` containing `x`; the last
/// segment extends to infinity.
fn segment_index(knots: &[[f64; 2]], x: f64) -> usize {
    let n = knots.len();
    let i = knots.partition_point(|k| k[0] <= x);
    i.saturating_sub(1).min(n - 2)
}

fn slope(knots: &[[f64; 2]], i: usize) -> f64 {
    let i = i.min(knots.len() - 2);
    (knots[i + 1][1] - knots[i][1]) / (knots[i + 1][0] - knots[i][0])
}

fn interpolate(knots: &[[f64; 2]], x: f64) -> f64 {
    let i = segment_index(knots, x);
    knots[i][1] + slope(knots, i) * (x - knots[i][0])
}

fn tabulated_inverse(knots: &[[f64; 2]], t: f64) -> f64 {
    let n = knots.len();
    let i = knots.partition_point(|k| k[1] <= t).saturating_sub(1).min(n - 2);
    knots[i][0] + (t - knots[i][1]) / slope(knots, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> OrliczFunction {
        OrliczFunction::power(2.0, 1.0).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(sq().evaluate(3.0).unwrap(), 9.0);
        for phi in [sq(), OrliczFunction::exp_minus(), OrliczFunction::power_log(2.0).unwrap()] {
            assert_eq!(phi.evaluate(0.0).unwrap(), 0.0);
        }
        let e = OrliczFunction::exp_minus().evaluate(1.0).unwrap();
        assert!((e - (std::f64::consts::E - 2.0)).abs() < 1e-15);
        assert!(matches!(sq().evaluate(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_minus_series_matches_direct_form() {
        let phi = OrliczFunction::exp_minus();
        for x in [0.05f64, 0.0999, 0.1, 0.2] {
            let direct = x.exp() - x - 1.0;
            assert!((phi.eval_unchecked(x) - direct).abs() < 1e-15, "{x}");
        }
        let expected = 0.5e-12 + 1e-18 / 6.0 + 1e-24 / 24.0;
        assert!((phi.eval_unchecked(1e-6) - expected).abs() < 1e-15 * expected);
    }

    #[test]
    fn right_inverse_examples() {
        assert_eq!(sq().right_inverse(4.0).unwrap(), 2.0);
        assert_eq!(OrliczFunction::exp_minus().right_inverse(0.0).unwrap(), 0.0);
        assert!(sq().right_inverse(-1.0).is_err());
    }

    #[test]
    fn right_inverse_exp_minus_against_bisection_oracle() {
        let phi = OrliczFunction::exp_minus();
        // independent oracle: plain bisection on [0, 4] to 1e-14
        let (mut lo, mut hi) = (0.0f64, 4.0f64);
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if mid.exp() - mid - 1.0 > 1.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let s = phi.right_inverse(1.0).unwrap();
        assert!((s - hi).abs() < 1e-12);
        assert!((phi.eval_unchecked(s) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tabulated_inverse_and_extrapolation() {
        let phi = OrliczFunction::tabulated(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 3.0]]).unwrap();
        assert_eq!(phi.evaluate(0.5).unwrap(), 0.5);
        assert_eq!(phi.evaluate(1.5).unwrap(), 2.0);
        assert_eq!(phi.evaluate(3.0).unwrap(), 5.0);
        assert_eq!(phi.right_inverse(2.0).unwrap(), 1.5);
        assert_eq!(phi.right_inverse(5.0).unwrap(), 3.0);
        assert_eq!(phi.derivative(1.0).unwrap(), 2.0);
        assert!(!phi.young_limits());
    }

    #[test]
    fn tabulated_rejects_nonconvex_knots() {
        let err = OrliczFunction::tabulated(vec![[0.0, 0.0], [1.0, 2.0], [2.0, 3.0]]).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "knots[1]"), "{err}");
        assert!(OrliczFunction::tabulated(vec![[0.1, 0.0], [1.0, 1.0]]).is_err());
        assert!(OrliczFunction::tabulated(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 1.0]]).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(OrliczFunction::power(1.0, 1.0).is_err());
        assert!(OrliczFunction::power(2.0, 0.0).is_err());
        assert!(OrliczFunction::power_log(0.5).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let half_sq = OrliczFunction::power(2.0, 0.5).unwrap();
        let psi = half_sq.conjugate().unwrap();
        assert!((psi.evaluate(3.0).unwrap() - 4.5).abs() < 1e-12);
        assert_eq!(psi.evaluate(0.0).unwrap(), 0.0);

        let psi = sq().conjugate().unwrap();
        assert!((psi.evaluate(2.0).unwrap() - 1.0).abs() < 1e-12);
        // calculus oracle: x* = y/2, psi(y) = y^2/4; grid sup cross-check
        let grid_sup = (0..=200_000)
            .map(|i| i as f64 * 1e-5)
            .map(|x| 2.0 * x - x * x)
            .fold(f64::MIN, f64::max);
        assert!((grid_sup - 1.0).abs() < 1e-8);
        assert!((sq().conjugate_value(2.0).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn conjugate_of_exp_minus_matches_closed_form() {
        let phi = OrliczFunction::exp_minus();
        for y in [0.1, 1.0, 5.0, 50.0] {
            let expected = (1.0 + y) * f64::ln_1p(y) - y;
            let got = phi.conjugate_value(y).unwrap();
            assert!((got - expected).abs() < 1e-9 * expected.max(1.0), "y={y}: {got} vs {expected}");
        }
        let psi = phi.conjugate().unwrap();
        assert!(matches!(psi.family(), Family::Tabulated { .. }));
        assert!((psi.evaluate(1.0).unwrap() - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-3);
    }

    #[test]
    fn conjugate_of_tabulated_is_unbounded_past_last_slope() {
        let phi = OrliczFunction::tabulated(vec![[0.0, 0.0], [1.0, 1.0], [2.0, 3.0]]).unwrap();
        assert_eq!(phi.conjugate_value(2.0).unwrap(), 1.0);
        assert!(matches!(phi.conjugate_value(2.5), Err(Error::UnboundedConjugate { .. })));
        // psi vanishes on [0, first slope]
        assert!(phi.conjugate().is_err());
    }

    #[test]
    fn delta2_examples() {
        let r = OrliczFunction::power(3.0, 1.0).unwrap().check_delta2();
        assert_eq!(r.verdict, Delta2Verdict::Holds);
        assert!((r.k_estimate - 8.0).abs() < 1e-6);

        let r = OrliczFunction::exp_minus().check_delta2();
        assert_eq!(r.verdict, Delta2Verdict::Fails);
        assert!(r.counterexample_x.is_some());

        let r = OrliczFunction::power(1.5, 2.0).unwrap().check_delta2();
        assert_eq!(r.verdict, Delta2Verdict::Holds);
        assert!((r.k_estimate - 2f64.powf(1.5)).abs() < 1e-6);

        let r = OrliczFunction::power_log(2.0).unwrap().check_delta2();
        assert_eq!(r.verdict, Delta2Verdict::Holds);
        assert!(r.k_estimate <= 8.0 && r.k_estimate > 7.9);
    }

    #[test]
    fn superlinear_examples() {
        assert!(sq().superlinear());
        assert!(OrliczFunction::exp_minus().superlinear());
        let knots: Vec<[f64; 2]> = std::iter::once([0.0, 0.0])
            .chain((0..=40).map(|i| {
                let x = 10f64.powf(-2.0 + 0.25 * i as f64);
                [x, x * (1.0 + 1e-9 * x)]
            }))
            .collect();
        let near_linear = OrliczFunction::tabulated(knots).unwrap();
        assert!(!near_linear.superlinear());
        assert!(near_linear.delta2().holds());
    }

    #[test]
    fn descriptor_json() {
        let phi: OrliczFunction = serde_json::from_str(r#"{"family":"power","p":2.0,"c":1.0}"#).unwrap();
        assert_eq!(phi, sq());
        let phi: OrliczFunction = serde_json::from_str(r#"{"family":"exp_minus"}"#).unwrap();
        assert_eq!(phi.delta2(), Delta2::Fails);
        let phi: OrliczFunction = serde_json::from_str(r#"{"family":"power_log","p":2.0}"#).unwrap();
        assert!(phi.delta2().holds());
        let phi: OrliczFunction =
            serde_json::from_str(r#"{"family":"tabulated","knots":[[0,0],[1,1],[2,3]]}"#).unwrap();
        assert_eq!(phi.evaluate(1.5).unwrap(), 2.0);
        assert!(serde_json::from_str::<OrliczFunction>(r#"{"family":"power","p":0.5}"#).is_err());
        let back = serde_json::to_string(&sq()).unwrap();
        assert_eq!(back, r#"{"family":"power","p":2.0,"c":1.0}"#);
    }
}
