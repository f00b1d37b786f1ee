use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::expr::{SymExpr, VarKind};
use super::field::Chart;
use crate::exact::{q, Rational};

/// A point of the chart: line values or cosines, and sines of angle coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub values: Vec<Rational>,
    pub sines: Vec<Rational>,
}

impl SamplePoint {
    pub fn origin(chart: &Chart) -> Self {
        let values = chart
            .kinds
            .iter()
            .map(|k| match k {
                VarKind::Line => Rational::from_integer(0.into()),
                VarKind::Angle => Rational::one(),
            })
            .collect();
        Self {
            values,
            sines: vec![Rational::from_integer(0.into()); chart.dim()],
        }
    }

    pub fn eval(&self, e: &SymExpr) -> Rational {
        e.eval(&self.values, &self.sines)
    }
}

/// The origin and three seeded random rational points. Angles use the
/// rational parametrization `c = (1−t²)/(1+t²)`, `s = 2t/(1+t²)`.
pub fn sample_points(chart: &Chart, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![SamplePoint::origin(chart)];
    for _ in 0..3 {
        let mut values = Vec::with_capacity(chart.dim());
        let mut sines = Vec::with_capacity(chart.dim());
        for kind in &chart.kinds {
            let t = q(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            match kind {
                VarKind::Line => {
                    values.push(t);
                    sines.push(Rational::from_integer(0.into()));
                }
                VarKind::Angle => {
                    let d = Rational::one() + &t * &t;
                    values.push((Rational::one() - &t * &t) / &d);
                    sines.push((&t + &t) / d);
                }
            }
        }
        out.push(SamplePoint { values, sines });
    }
    out
}
