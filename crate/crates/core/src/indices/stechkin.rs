use crate::error::{Error, Result};
use crate::report::Report;

/// Outcome of a Stechkin-type bound check on an enumerated weight list.
#[derive(Clone, Debug, PartialEq)]
pub enum StechkinReport {
    /// `N = 0`, or no entries beyond the first `N`.
    NotApplicable {
        reason: String,
    },
    Checked(StechkinOutcome),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StechkinOutcome {
    pub n: usize,
    pub q: f64,
    /// `max_{i>N} c_i^{-1}`.
    pub left: f64,
    /// `N^{-1/q} ‖(c_i^{-1})‖_{ℓ^q}` over the supplied list.
    pub right: f64,
    pub holds: bool,
    /// Log-log slope of `c_i^{-q}` against `i` over the second half of the
    /// list; `None` if the list is too short to fit.
    pub tail_slope: Option<f64>,
    /// True when the terms `c_i^{-q}` do not visibly decay faster than
    /// `1/i`, so the `ℓ^q` premise is doubtful.
    pub non_summable: bool,
}

impl StechkinReport {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Self::NotApplicable { .. } => None,
            Self::Checked(o) => Some(o.holds),
        }
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        match self {
            Self::NotApplicable { reason } => {
                r.push("status", "not applicable").push("reason", reason);
            }
            Self::Checked(o) => {
                r.push("status", if o.holds { "pass" } else { "violation" })
                    .push("n", o.n)
                    .push_f64("q", o.q)
                    .push_f64("left", o.left)
                    .push_f64("right", o.right)
                    .push("non_summable", o.non_summable);
                if let Some(s) = o.tail_slope {
                    r.push_f64("tail_slope", s);
                }
            }
        }
        r
    }
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Checks `max_{i>N} c_i^{-1} ≤ N^{-1/q} ‖(c_i^{-1})‖_{ℓ^q}`, treating the
/// supplied list (in enumeration order, nondecreasing) as the whole universe.
pub fn stechkin_check(values: &[f64], q: f64, n: usize) -> Result<StechkinReport> {
    if !(q > 0.0) {
        return Err(Error::domain(format!("q = {q} must be positive")));
    }
    if values.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::domain("weights must be positive"));
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("weights must be listed in nondecreasing order"));
    }
    if n == 0 {
        return Ok(StechkinReport::NotApplicable { reason: "N = 0".into() });
    }
    if n >= values.len() {
        return Ok(StechkinReport::NotApplicable {
            reason: format!("no entries beyond N = {n}"),
        });
    }
    let left = values[n..].iter().map(|c| 1.0 / c).fold(0.0, f64::max);
    let lq = values.iter().map(|c| c.powf(-q)).sum::<f64>().powf(1.0 / q);
    let right = (n as f64).powf(-1.0 / q) * lq;

    let half = values.len() / 2;
    let tail_slope = (values.len() - half >= 3).then(|| {
        let xs: Vec<f64> = (half..values.len()).map(|i| ((i + 1) as f64).ln()).collect();
        let ys: Vec<f64> = values[half..].iter().map(|c| -q * c.ln()).collect();
        ls_slope(&xs, &ys)
    });
    let non_summable = tail_slope.is_none_or(|s| s >= -1.0);

    Ok(StechkinReport::Checked(StechkinOutcome {
        n,
        q,
        left,
        right,
        holds: left <= right * (1.0 + 1e-12),
        tail_slope,
        non_summable,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let c = [1.0, 4.0, 16.0, 36.0, 36.0];
        let StechkinReport::Checked(o) = stechkin_check(&c, 1.0, 2).unwrap() else {
            panic!("expected a checked report");
        };
        assert_eq!(o.left, 0.0625);
        let expect = 0.5 * (1.0 + 0.25 + 0.0625 + 2.0 / 36.0);
        assert!((o.right - expect).abs() < 1e-15);
        assert!((o.right - 0.684).abs() < 1e-3);
        assert!(o.holds);
    }

    #[test]
    fn zero_n_not_applicable() {
        let r = stechkin_check(&[1.0, 2.0], 1.0, 0).unwrap();
        assert!(matches!(r, StechkinReport::NotApplicable { .. }));
        assert_eq!(r.holds(), None);
    }

    #[test]
    fn constant_list_flagged() {
        let c = vec![1.0; 40];
        let StechkinReport::Checked(o) = stechkin_check(&c, 1.0, 5).unwrap() else {
            panic!("expected a checked report");
        };
        assert!(o.non_summable);
    }

    #[test]
    fn fast_growth_is_summable() {
        let c: Vec<f64> = (1..=100).map(|i| (i as f64).powi(3)).collect();
        let StechkinReport::Checked(o) = stechkin_check(&c, 1.0, 10).unwrap() else {
            panic!("expected a checked report");
        };
        assert!(!o.non_summable);
        assert!((o.tail_slope.unwrap() + 3.0).abs() < 1e-9);
        assert!(o.holds);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(stechkin_check(&[1.0, 2.0], 0.0, 1).is_err());
        assert!(stechkin_check(&[2.0, 1.0], 1.0, 1).is_err());
    }
}
