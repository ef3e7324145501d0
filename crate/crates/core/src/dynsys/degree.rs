use serde::Serialize;

use super::{DynamicalSystem, IterateCache};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthClass {
    Bounded,
    #[serde(rename = "polynomial-suspected")]
    Polynomial,
    #[serde(rename = "exponential-suspected")]
    Exponential,
}

/// Degrees of `φ, φ², …, φᴺ` with a heuristic growth label.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeProfile {
    pub degrees: Vec<u32>,
    pub growth_class: GrowthClass,
    /// Least-squares slope of `ln deg` against the iterate index for exponential
    /// growth, against `ln` of the index for polynomial growth, and 0 when bounded.
    pub fitted_rate: f64,
}

/// Slope above which log-degrees count as growing linearly.
const EXPONENTIAL_SLOPE: f64 = 0.1;

pub fn degree_sequence(sys: &DynamicalSystem, n: usize) -> Result<DegreeProfile> {
    if n == 0 {
        return Err(Error::Precondition("degree sequence needs at least one iterate".into()));
    }
    let mut cache = IterateCache::new(sys);
    let mut degrees = Vec::with_capacity(n);
    for m in 1..=n as u64 {
        degrees.push(cache.get(m)?.degree());
    }
    let (growth_class, fitted_rate) = classify_growth(&degrees);
    Ok(DegreeProfile {
        degrees,
        growth_class,
        fitted_rate,
    })
}

/// Bounded when the trailing half takes at most two values and stays within the
/// maximum reached earlier; otherwise exponential or polynomial by the log-slope
/// over the trailing window.
pub(crate) fn classify_growth(degrees: &[u32]) -> (GrowthClass, f64) {
    let n = degrees.len();
    let tail_len = n.div_ceil(2);
    let (head, tail) = degrees.split_at(n - tail_len);
    let mut distinct: Vec<u32> = tail.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let tail_max = *distinct.last().unwrap_or(&0);
    let bounded = match head.iter().max() {
        Some(&hm) => distinct.len() <= 2 && tail_max <= hm,
        // A single observation is too little to call anything but degree one bounded.
        None => tail_max <= 1,
    };
    if bounded {
        return (GrowthClass::Bounded, 0.0);
    }
    let window = tail_len.max(2).min(n);
    let start = n - window;
    let idx: Vec<f64> = (start + 1..=n).map(|i| i as f64).collect();
    let logd: Vec<f64> = degrees[start..].iter().map(|&d| (d.max(1) as f64).ln()).collect();
    if window >= 2 {
        let slope = least_squares_slope(&idx, &logd);
        if slope > EXPONENTIAL_SLOPE {
            return (GrowthClass::Exponential, slope);
        }
        let logi: Vec<f64> = idx.iter().map(|i| i.ln()).collect();
        return (GrowthClass::Polynomial, least_squares_slope(&logi, &logd));
    }
    (GrowthClass::Polynomial, 0.0)
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, RationalFunction, Vars};

    #[test]
    fn growth_rule() {
        assert_eq!(classify_growth(&[1, 1, 1, 1]).0, GrowthClass::Bounded);
        assert_eq!(classify_growth(&[2, 4, 8, 16]).0, GrowthClass::Exponential);
        assert_eq!(classify_growth(&[3, 8, 21, 55]).0, GrowthClass::Exponential);
        assert_eq!(classify_growth(&[5, 5, 6, 6, 7, 7]).0, GrowthClass::Polynomial);
        assert_eq!(classify_growth(&[2, 3, 2, 3, 2, 3]).0, GrowthClass::Bounded);
        assert_eq!(classify_growth(&[1]).0, GrowthClass::Bounded);
        assert_eq!(classify_growth(&[2]).0, GrowthClass::Polynomial);
        let (_, rate) = classify_growth(&[2, 4, 8, 16]);
        assert!((rate - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn henon_doubles() {
        let v = Vars::new(["x", "y"]);
        let (x, y) = (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1));
        let h = DynamicalSystem::new(v, vec![y.clone(), y.pow(2).sub(&x)]).unwrap();
        let p = degree_sequence(&h, 4).unwrap();
        assert_eq!(p.degrees, vec![2, 4, 8, 16]);
        assert_eq!(p.growth_class, GrowthClass::Exponential);
    }

    #[test]
    fn affine_is_bounded() {
        let v = Vars::new(["x", "y"]);
        let (x, y) = (RationalFunction::var(&v, 0), RationalFunction::var(&v, 1));
        let one = RationalFunction::constant(&v, int(1));
        let s = DynamicalSystem::new(v, vec![x.add(&y), y.add(&one)]).unwrap();
        let p = degree_sequence(&s, 6).unwrap();
        assert_eq!(p.degrees, vec![1; 6]);
        assert_eq!(p.growth_class, GrowthClass::Bounded);
        assert!(degree_sequence(&s, 0).is_err());
    }
}
