use serde::{Deserialize, Serialize};

use crate::coeff::Scalar;
use crate::grading::{DegreeVector, GradingContext};

use super::GradedRing;

/// Integer bilinear form on degree vectors `(beta_1..beta_r, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BilinearForm {
    pub matrix: Vec<Vec<i64>>,
}

impl BilinearForm {
    pub fn new(matrix: Vec<Vec<i64>>) -> Self {
        BilinearForm { matrix }
    }

    pub fn zero(dim: usize) -> Self {
        BilinearForm {
            matrix: vec![vec![0; dim]; dim],
        }
    }

    fn coords(g: &DegreeVector) -> Vec<i64> {
        let mut v = g.beta.clone();
        v.push(g.n);
        v
    }

    pub fn eval(&self, d: &DegreeVector, e: &DegreeVector) -> i64 {
        let (x, y) = (Self::coords(d), Self::coords(e));
        let mut s = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                s += x[i] * m * y[j];
            }
        }
        s
    }

    pub fn transpose(&self) -> Self {
        let n = self.matrix.len();
        BilinearForm {
            matrix: (0..n)
                .map(|i| (0..n).map(|j| self.matrix[j][i]).collect())
                .collect(),
        }
    }

    pub fn negate(&self) -> Self {
        BilinearForm {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    /// `s(d,e) - s(e,d)`.
    pub fn antisymmetrization(&self) -> Self {
        let t = self.transpose();
        BilinearForm {
            matrix: self
                .matrix
                .iter()
                .zip(&t.matrix)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect(),
        }
    }
}

/// Quantum torus: `x^d x^e = L^{s(d,e)} x^{d+e}` over the effective cone.
/// The zero form gives the commutative monoid algebra.
#[derive(Debug, Clone)]
pub struct Torus<S> {
    ctx: GradingContext,
    lefschetz: S,
    form: BilinearForm,
}

impl<S: Scalar> Torus<S> {
    pub fn new(ctx: GradingContext, lefschetz: S, form: BilinearForm) -> Self {
        Torus {
            ctx,
            lefschetz,
            form,
        }
    }

    pub fn commutative(ctx: GradingContext, lefschetz: S) -> Self {
        let dim = ctx.rank + 1;
        Torus::new(ctx, lefschetz, BilinearForm::zero(dim))
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    /// Same form over another scalar ring.
    pub fn with_scalar<T: Scalar>(&self, lefschetz: T) -> Torus<T> {
        Torus::new(self.ctx.clone(), lefschetz, self.form.clone())
    }
}

impl<S: Scalar> GradedRing for Torus<S> {
    type Scalar = S;

    fn grading(&self) -> &GradingContext {
        &self.ctx
    }

    fn piece_len(&self, deg: &DegreeVector) -> usize {
        usize::from(self.ctx.is_effective(deg))
    }

    fn mul_pieces(&self, da: &DegreeVector, a: &[S], db: &DegreeVector, b: &[S], out: &mut [S]) {
        let e = self.form.eval(da, db);
        let c = if e == 0 {
            a[0].clone() * b[0].clone()
        } else {
            let l = self.lefschetz.pow_i(e).expect("L is invertible");
            l * a[0].clone() * b[0].clone()
        };
        out[0] = out[0].clone() + c;
    }

    fn lefschetz(&self) -> S {
        self.lefschetz.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, ExactRational, RatFunL};
    use crate::grading::TruncationWindow;
    use crate::series::GradedSeries;
    use num_traits::One;
    use proptest::prelude::*;

    fn kron_ctx() -> GradingContext {
        GradingContext::quiver(vec![1, -1], vec![1, 1]).unwrap()
    }

    fn euler() -> BilinearForm {
        BilinearForm::new(vec![vec![1, -2, 0], vec![0, 1, 0], vec![0, 0, 0]])
    }

    fn arb_box_series(top: [i64; 2]) -> impl Strategy<Value = GradedSeries<ExactRational>> {
        let w = TruncationWindow::quiver_box(&top);
        let n = w.len();
        prop::collection::vec(-4i64..=4, n).prop_map(move |v| {
            GradedSeries::from_terms(
                w.clone(),
                w.degrees().into_iter().zip(v).map(|(g, c)| (g, vec![rat(c, 1)])),
            )
        })
    }

    proptest! {
        #[test]
        fn quantum_torus_is_associative(
            a in arb_box_series([2, 2]),
            b in arb_box_series([2, 2]),
            c in arb_box_series([2, 2]),
        ) {
            let t = Torus::new(kron_ctx(), rat(3, 1), euler());
            prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
        }
    }

    #[test]
    fn monomial_rule() {
        let t = Torus::new(kron_ctx(), RatFunL::l(), euler());
        let w = TruncationWindow::quiver_box(&[2, 2]);
        let d = DegreeVector::dim(&[1, 0]);
        let e = DegreeVector::dim(&[0, 1]);
        let xd = GradedSeries::monomial(w.clone(), d.clone(), RatFunL::one());
        let xe = GradedSeries::monomial(w.clone(), e.clone(), RatFunL::one());
        let de = t.mul(&xd, &xe).coeff(&DegreeVector::dim(&[1, 1])).unwrap();
        let ed = t.mul(&xe, &xd).coeff(&DegreeVector::dim(&[1, 1])).unwrap();
        assert_eq!(de, RatFunL::l_pow(-2));
        assert_eq!(ed, RatFunL::one());
    }
}
