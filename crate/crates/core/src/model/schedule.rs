use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interpolation functions `(f, g)` for `H(s) = f(s) H_ini + g(s) H_fin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// f = 1 - s, g = s.
    Linear,
    /// g = (1 - tan((1 - 2s) pi / 4)) / 2, f = 1 - g.
    Brachistochrone,
    /// Frozen `(f, g)` for stationary checks; does not interpolate.
    Constant { f: f64, g: f64 },
}

/// Schedule values and analytic derivatives at one `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleValue {
    pub f: f64,
    pub g: f64,
    pub df: f64,
    pub dg: f64,
}

impl Schedule {
    pub fn eval(&self, s: f64) -> Result<ScheduleValue> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::InvalidArgument(format!("normalized time {s} outside [0, 1]")));
        }
        Ok(self.eval_unchecked(s))
    }

    pub(crate) fn eval_unchecked(&self, s: f64) -> ScheduleValue {
        match *self {
            Schedule::Linear => ScheduleValue { f: 1.0 - s, g: s, df: -1.0, dg: 1.0 },
            Schedule::Brachistochrone => {
                let x = (1.0 - 2.0 * s) * PI / 4.0;
                let g = 0.5 * (1.0 - x.tan());
                let c = x.cos();
                let dg = PI / (4.0 * c * c);
                ScheduleValue { f: 1.0 - g, g, df: -dg, dg }
            }
            Schedule::Constant { f, g } => ScheduleValue { f, g, df: 0.0, dg: 0.0 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn brachistochrone_landmarks() {
        let b = Schedule::Brachistochrone;
        let v0 = b.eval(0.0).unwrap();
        assert_abs_diff_eq!(v0.f, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v0.g, 0.0, epsilon = 1e-12);
        let vh = b.eval(0.5).unwrap();
        assert_abs_diff_eq!(vh.f, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(vh.g, 0.5, epsilon = 1e-15);
        let v1 = b.eval(1.0).unwrap();
        assert_abs_diff_eq!(v1.f, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v1.g, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn linear_values() {
        let v = Schedule::Linear.eval(0.25).unwrap();
        assert_eq!((v.f, v.g, v.df, v.dg), (0.75, 0.25, -1.0, 1.0));
        assert!(Schedule::Linear.eval(1.5).is_err());
        assert!(Schedule::Linear.eval(-0.1).is_err());
    }

    #[test]
    fn derivatives_match_central_differences() {
        let h = 1e-6;
        for sch in [Schedule::Linear, Schedule::Brachistochrone] {
            for k in 1..20 {
                let s = k as f64 / 20.0;
                let v = sch.eval(s).unwrap();
                let fd_g = (sch.eval(s + h).unwrap().g - sch.eval(s - h).unwrap().g) / (2.0 * h);
                let fd_f = (sch.eval(s + h).unwrap().f - sch.eval(s - h).unwrap().f) / (2.0 * h);
                assert_abs_diff_eq!(v.dg, fd_g, epsilon = 1e-7);
                assert_abs_diff_eq!(v.df, fd_f, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn monotone_and_summing_to_one() {
        let mut prev = Schedule::Brachistochrone.eval(0.0).unwrap();
        for k in 1..=200 {
            let v = Schedule::Brachistochrone.eval(k as f64 / 200.0).unwrap();
            assert!(v.g >= prev.g && v.f <= prev.f);
            assert_abs_diff_eq!(v.f + v.g, 1.0, epsilon = 1e-14);
            prev = v;
        }
    }
}
