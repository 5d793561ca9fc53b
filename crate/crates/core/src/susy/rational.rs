//! Small polynomial and rational-function helpers for the explicit
//! fourth-order model.

/// Polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    /// From (power, coefficient) pairs.
    pub fn from_terms(terms: &[(usize, f64)]) -> Self {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut c = vec![0.0; deg + 1];
        for &(p, v) in terms {
            c[p] += v;
        }
        Poly(c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut c = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly(c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|k| self.0.get(k).unwrap_or(&0.0) - other.0.get(k).unwrap_or(&0.0)).collect())
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }
}

/// num / den
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Self {
        Rational { num, den }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn derivative(&self) -> Rational {
        let num = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Rational { num, den: self.den.mul(&self.den) }
    }

    /// [r, r′, ..., r^{(order)}] as rationals.
    pub fn derivatives(&self, order: usize) -> Vec<Rational> {
        let mut out = vec![self.clone()];
        for _ in 0..order {
            let next = out.last().unwrap().derivative();
            out.push(next);
        }
        out
    }
}

/// e^{−x²/2} R(x) with R rational; value and first two derivatives.
#[derive(Debug, Clone)]
pub struct GaussRational {
    r: [Rational; 3],
}

impl GaussRational {
    pub fn new(r: Rational) -> Self {
        let d = r.derivatives(2);
        GaussRational { r: [d[0].clone(), d[1].clone(), d[2].clone()] }
    }

    pub fn eval(&self, x: f64) -> [f64; 3] {
        let g = (-0.5 * x * x).exp();
        let (r0, r1, r2) = (self.r[0].eval(x), self.r[1].eval(x), self.r[2].eval(x));
        [g * r0, g * (r1 - x * r0), g * (r2 - 2.0 * x * r1 + (x * x - 1.0) * r0)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_arithmetic() {
        let p = Poly::from_terms(&[(0, 1.0), (2, 3.0)]);
        assert_eq!(p.eval(2.0), 13.0);
        assert_eq!(p.derivative().eval(2.0), 12.0);
        assert_eq!(p.mul(&p).eval(2.0), 169.0);
        assert_eq!(p.sub(&Poly(vec![1.0])).eval(2.0), 12.0);
    }

    #[test]
    fn rational_derivatives_match_finite_differences() {
        let r = Rational::new(Poly::from_terms(&[(1, 1.0), (3, -2.0)]), Poly::from_terms(&[(0, 3.0), (4, 1.0)]));
        let g = GaussRational::new(r.clone());
        let x = 0.7;
        let h = 1e-5;
        let f = |t: f64| g.eval(t)[0];
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let v = g.eval(x);
        assert!((v[1] - d1).abs() < 1e-8);
        assert!((v[2] - d2).abs() < 1e-5);
    }
}
