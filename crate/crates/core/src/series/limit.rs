use std::collections::BTreeMap;

use crate::coeff::Scalar;
use crate::grading::{DegreeVector, TruncationWindow};

use super::{GradedSeries, SeriesError};

/// For each degree, an index after which the producer promises the
/// sequence is constant in that degree.
pub type StabilizationCertificate = BTreeMap<DegreeVector, usize>;

/// Per-degree limit of a finite prefix of a sequence. Every in-window degree
/// needs a certificate; terms past the certified index are checked against
/// it.
pub fn limit<S: Scalar>(
    sequence: impl IntoIterator<Item = GradedSeries<S>>,
    window: &TruncationWindow,
    certificate: &StabilizationCertificate,
) -> Result<GradedSeries<S>, SeriesError> {
    let seq: Vec<GradedSeries<S>> = sequence.into_iter().collect();
    let mut terms = Vec::new();
    for g in window.degrees() {
        let &idx = certificate
            .get(&g)
            .ok_or_else(|| SeriesError::NoCertificate(g.to_string()))?;
        let base = seq
            .get(idx)
            .ok_or_else(|| SeriesError::NoCertificate(g.to_string()))?
            .component(&g)?;
        for (i, s) in seq.iter().enumerate().skip(idx + 1) {
            let c = s.component(&g)?;
            if GradedSeries::from_terms(window.clone(), [(g.clone(), c)])
                != GradedSeries::from_terms(window.clone(), [(g.clone(), base.clone())])
            {
                return Err(SeriesError::CertificateViolated {
                    degree: g.to_string(),
                    index: i,
                });
            }
        }
        terms.push((g, base));
    }
    Ok(GradedSeries::from_terms(window.clone(), terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, ExactRational};

    fn s(c: &[i64]) -> GradedSeries<ExactRational> {
        GradedSeries::from_terms(
            TruncationWindow::points_up_to(2),
            c.iter()
                .enumerate()
                .map(|(i, &x)| (DegreeVector::point(i as i64), vec![rat(x, 1)])),
        )
    }

    fn cert(idx: &[usize]) -> StabilizationCertificate {
        idx.iter()
            .enumerate()
            .map(|(i, &k)| (DegreeVector::point(i as i64), k))
            .collect()
    }

    #[test]
    fn constant_sequence() {
        let w = TruncationWindow::points_up_to(2);
        let a = s(&[1, 2, 3]);
        let l = limit(vec![a.clone(); 4], &w, &cert(&[0, 0, 0])).unwrap();
        assert_eq!(l, a);
    }

    #[test]
    fn eventually_equal_sequences() {
        let w = TruncationWindow::points_up_to(2);
        let seq1 = vec![s(&[0, 0, 0]), s(&[1, 0, 0]), s(&[1, 2, 0]), s(&[1, 2, 3])];
        let seq2 = vec![s(&[5, 5, 5]), s(&[1, 5, 5]), s(&[1, 2, 5]), s(&[1, 2, 3])];
        let c = cert(&[1, 2, 3]);
        assert_eq!(limit(seq1, &w, &c).unwrap(), limit(seq2, &w, &c).unwrap());
    }

    #[test]
    fn missing_or_false_certificates() {
        let w = TruncationWindow::points_up_to(2);
        let seq = vec![s(&[0, 0, 0]), s(&[1, 0, 0])];
        assert!(matches!(
            limit(seq.clone(), &w, &cert(&[1, 1])),
            Err(SeriesError::NoCertificate(_))
        ));
        assert!(matches!(
            limit(seq, &w, &cert(&[0, 0, 0])),
            Err(SeriesError::CertificateViolated { index: 1, .. })
        ));
    }
}
