use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::PolyL;
use super::rational::{format_rational, rat, ExactRational};
use super::CoeffError;

/// Fit the polynomial of degree at most `degree_bound` through `points` and
/// accept it only if it reproduces every remaining sample and the holdout.
pub fn interpolate(
    points: &[(ExactRational, ExactRational)],
    degree_bound: usize,
    holdout: (ExactRational, ExactRational),
) -> Result<PolyL, CoeffError> {
    let needed = degree_bound + 1;
    if points.len() < needed {
        return Err(CoeffError::InsufficientPoints {
            needed,
            got: points.len(),
        });
    }
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) || *x == holdout.0 {
            return Err(CoeffError::DuplicatePoint(format_rational(x)));
        }
    }

    let fit = &points[..needed];
    let xs: Vec<&ExactRational> = fit.iter().map(|(x, _)| x).collect();
    // divided differences, in place
    let mut dd: Vec<ExactRational> = fit.iter().map(|(_, v)| v.clone()).collect();
    for j in 1..needed {
        for i in (j..needed).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut poly = PolyL::constant(dd[needed - 1].clone());
    for i in (0..needed - 1).rev() {
        let factor = PolyL::from_coeffs(vec![-xs[i].clone(), rat(1, 1)]);
        poly = &(&poly * &factor) + &PolyL::constant(dd[i].clone());
    }

    for (x, v) in points[needed..].iter().chain(std::iter::once(&holdout)) {
        let fitted = poly.eval(x);
        if fitted != *v {
            return Err(CoeffError::HoldoutMismatch {
                point: format_rational(x),
                fitted: format_rational(&fitted),
                observed: format_rational(v),
            });
        }
    }
    Ok(poly)
}

/// Sampling plan for turning per-prime counts into a polynomial in `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSamples {
    pub primes: Vec<u64>,
    pub holdout: u64,
}

impl Default for CountSamples {
    fn default() -> Self {
        CountSamples {
            primes: vec![2, 3, 5, 7],
            holdout: 11,
        }
    }
}

impl CountSamples {
    pub fn max_degree(&self) -> usize {
        self.primes.len().saturating_sub(1)
    }

    /// All primes the plan touches, holdout last.
    pub fn all_primes(&self) -> Vec<u64> {
        let mut v = self.primes.clone();
        v.push(self.holdout);
        v
    }
}

/// Evaluate `count` at every sample prime and the holdout, then interpolate.
pub fn interpolate_counts<F>(
    samples: &CountSamples,
    degree_bound: usize,
    mut count: F,
) -> Result<PolyL, CoeffError>
where
    F: FnMut(u64) -> ExactRational,
{
    let points: Vec<_> = samples
        .primes
        .iter()
        .map(|&p| (ExactRational::from_integer(p.into()), count(p)))
        .collect();
    let h = samples.holdout;
    let holdout = (ExactRational::from_integer(h.into()), count(h));
    if points.iter().all(|(_, v)| v.is_zero()) && holdout.1.is_zero() {
        return Ok(PolyL::zero());
    }
    interpolate(&points, degree_bound, holdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(ExactRational, ExactRational)> {
        v.iter().map(|&(x, y)| (rat(x, 1), rat(y, 1))).collect()
    }

    #[test]
    fn linear_fit() {
        let p = interpolate(&pts(&[(2, 3), (3, 4), (5, 6)]), 1, (rat(7, 1), rat(8, 1))).unwrap();
        assert_eq!(p, PolyL::from_ints(&[1, 1]));
    }

    #[test]
    fn square_is_not_linear() {
        let r = interpolate(&pts(&[(2, 4), (3, 9)]), 1, (rat(5, 1), rat(25, 1)));
        assert!(matches!(r, Err(CoeffError::HoldoutMismatch { .. })));
    }

    #[test]
    fn too_few_points() {
        let r = interpolate(&pts(&[(2, 4)]), 1, (rat(5, 1), rat(25, 1)));
        assert_eq!(r, Err(CoeffError::InsufficientPoints { needed: 2, got: 1 }));
        let r = interpolate(&pts(&[(2, 4), (2, 4)]), 1, (rat(5, 1), rat(25, 1)));
        assert!(matches!(r, Err(CoeffError::DuplicatePoint(_))));
    }

    // number of 1-dimensional subspaces of F_q^2, by enumerating nonzero
    // vectors and normalising the first nonzero entry
    fn lines_in_plane(q: u64) -> u64 {
        let mut n = 0;
        for a in 0..q {
            for b in 0..q {
                let first = if a != 0 { a } else { b };
                if first == 1 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn projective_line_count() {
        let plan = CountSamples {
            primes: vec![2, 3, 5],
            holdout: 7,
        };
        let p = interpolate_counts(&plan, 1, |q| rat(lines_in_plane(q) as i64, 1)).unwrap();
        assert_eq!(p, PolyL::from_ints(&[1, 1]));
    }

    #[test]
    fn rational_values() {
        // (q^2 - 1)/2
        let plan = CountSamples::default();
        let p = interpolate_counts(&plan, 3, |q| rat((q * q - 1) as i64, 2)).unwrap();
        assert_eq!(p, PolyL::from_coeffs(vec![rat(-1, 2), rat(0, 1), rat(1, 2)]));
    }
}
