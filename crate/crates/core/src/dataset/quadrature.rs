//! Symmetric Gauss rules on the reference triangle, in barycentric form.
//!
//! Only point locations matter for sample enrichment; weights are kept so the
//! rules can be checked against exact monomial integrals.

/// A triangle quadrature rule. Weights sum to one (fractions of the area).
#[derive(Debug)]
pub struct TriangleRule {
    pub degree: usize,
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl TriangleRule {
    /// Rule with `n` points, for `n` in {1, 3, 16}.
    pub fn with_points(n: usize) -> Option<TriangleRule> {
        match n {
            1 => Some(TriangleRule {
                degree: 1,
                points: vec![[1.0 / 3.0; 3]],
                weights: vec![1.0],
            }),
            3 => {
                let mut r = TriangleRule {
                    degree: 2,
                    points: vec![],
                    weights: vec![],
                };
                r.orbit3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
                Some(r)
            }
            16 => Some(Self::degree8()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn orbit3(&mut self, a: f64, b: f64, w: f64) {
        for p in [[a, b, b], [b, a, b], [b, b, a]] {
            self.points.push(p);
            self.weights.push(w);
        }
    }

    fn orbit6(&mut self, a: f64, b: f64, c: f64, w: f64) {
        for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            self.points.push(p);
            self.weights.push(w);
        }
    }

    /// 16-point, degree-8 symmetric rule.
    fn degree8() -> TriangleRule {
        let mut r = TriangleRule {
            degree: 8,
            points: vec![[1.0 / 3.0; 3]],
            weights: vec![0.144_315_607_677_787],
        };
        r.orbit3(0.081_414_823_414_554, 0.459_292_588_292_723, 0.095_091_634_267_285);
        r.orbit3(0.658_861_384_496_480, 0.170_569_307_751_760, 0.103_217_370_534_718);
        r.orbit3(0.898_905_543_365_938, 0.050_547_228_317_031, 0.032_458_497_623_198);
        r.orbit6(
            0.008_394_777_409_958,
            0.263_112_829_634_638,
            0.728_492_392_955_404,
            0.027_230_314_174_435,
        );
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// ∫ x^a y^b over the unit right triangle, divided by its area 1/2.
    fn exact_mean(a: u32, b: u32) -> f64 {
        2.0 * factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn rules_integrate_monomials_to_their_degree() {
        for n in [1, 3, 16] {
            let rule = TriangleRule::with_points(n).unwrap();
            assert_eq!(rule.len(), n);
            assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for a in 0..=rule.degree as u32 {
                for b in 0..=(rule.degree as u32 - a) {
                    let q: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(p, w)| w * p[1].powi(a as i32) * p[2].powi(b as i32))
                        .sum();
                    let exact = exact_mean(a, b);
                    assert!(
                        (q - exact).abs() <= 1e-12 * exact.max(1e-3),
                        "n={n} x^{a} y^{b}: {q} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn points_are_strictly_interior() {
        for n in [1, 3, 16] {
            for p in TriangleRule::with_points(n).unwrap().points {
                assert!(p.iter().all(|&w| w > 0.0));
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            }
        }
        assert!(TriangleRule::with_points(7).is_none());
    }
}
