//! Univariate polynomials over the rationals, with exact sign analysis.
//!
//! Positivity over the whole real line is decided symbolically: a Sturm
//! sequence counts distinct real roots of the square-free part, and Yun's
//! algorithm separates roots of odd multiplicity (the only places a
//! polynomial can change sign).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{format_rat, parse_rat, Rat};
use crate::error::{Error, Result};

/// Coefficients in increasing degree; the leading coefficient is nonzero.
/// The zero polynomial is the empty coefficient list.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

/// Sign behaviour of a nonzero polynomial over all of R.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    PositiveEverywhere,
    /// Nonnegative with at least one real zero.
    NonnegativeWithZeros,
    /// Takes both strictly positive and strictly negative values.
    ChangesSign,
    /// Nonpositive with at least one real zero.
    NonpositiveWithZeros,
    NegativeEverywhere,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `t` itself.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn monomial(deg: usize, c: Rat) -> Self {
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `t - a`.
    pub fn linear_root(a: &Rat) -> Self {
        Poly::from_coeffs(vec![-a.clone(), Rat::one()])
    }

    /// The product of `(t - a)^2` over the given values.
    pub fn from_roots_squared(roots: &[Rat]) -> Self {
        let mut p = Poly::one();
        for a in roots {
            let lin = Poly::linear_root(a);
            p = &(&p * &lin) * &lin;
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rat::from_integer((i as i64 + 1).into()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().expect("nonzero divisor");
        let dl = d.leading().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let f = rem.last().expect("nonempty") / &dl;
            if !f.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let v = &rem[k + i] - &f * dc;
                    rem[k + i] = v;
                }
                quo[k] = f;
            }
            rem.pop();
        }
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free part (same real roots, all simple).
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        let (q, r) = self.divmod(&g);
        debug_assert!(r.is_zero(), "gcd must divide");
        q.monic()
    }

    /// Yun's square-free decomposition: returns `f_1, f_2, ...` (monic,
    /// pairwise coprime, possibly constant) with `self ~ prod f_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<Poly> {
        assert!(!self.is_zero(), "decomposition of the zero polynomial");
        let a = self.monic();
        if a.degree() == Some(0) {
            return vec![];
        }
        let da = a.derivative();
        let g = Poly::gcd(&a, &da);
        if g.degree() == Some(0) {
            return vec![a];
        }
        let mut out = Vec::new();
        let (mut b, r) = a.divmod(&g);
        debug_assert!(r.is_zero());
        let (c0, r) = da.divmod(&g);
        debug_assert!(r.is_zero());
        let mut c = &c0 - &b.derivative();
        while b.degree() > Some(0) {
            let f = Poly::gcd(&b, &c);
            out.push(f.clone());
            let (nb, r) = b.divmod(&f);
            debug_assert!(r.is_zero());
            let (cq, r) = c.divmod(&f);
            debug_assert!(r.is_zero());
            b = nb;
            c = &cq - &b.derivative();
        }
        out
    }

    /// Product of the square-free factors of odd multiplicity. Sign changes
    /// of the polynomial happen exactly at the real roots of this part.
    pub fn odd_multiplicity_part(&self) -> Poly {
        let mut p = Poly::one();
        for (i, f) in self.squarefree_decomposition().iter().enumerate() {
            if i % 2 == 0 {
                // index i holds the multiplicity-(i+1) factor
                p = &p * f;
            }
        }
        p.monic()
    }

    /// Number of distinct real roots, by a Sturm sequence on the square-free
    /// part evaluated at -inf and +inf.
    pub fn count_distinct_real_roots(&self) -> usize {
        assert!(!self.is_zero(), "root count of the zero polynomial");
        let p = self.squarefree_part();
        if p.degree() <= Some(0) {
            return 0;
        }
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let last = &chain[chain.len() - 1];
            if last.is_zero() {
                chain.pop();
                break;
            }
            let prev = &chain[chain.len() - 2];
            let (_, r) = prev.divmod(last);
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        let sign_at = |p: &Poly, plus: bool| -> i8 {
            let lc = p.leading().expect("nonzero chain entry");
            let s: i8 = if lc.is_positive() { 1 } else { -1 };
            if plus || p.degree().unwrap_or(0) % 2 == 0 {
                s
            } else {
                -s
            }
        };
        let variations = |plus: bool| -> usize {
            let signs: Vec<i8> = chain.iter().filter(|p| !p.is_zero()).map(|p| sign_at(p, plus)).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        variations(false) - variations(true)
    }
}

/// Exact sign classification of a nonzero polynomial over all of R.
pub fn poly_positivity(p: &Poly) -> Result<Positivity> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let deg = p.degree().expect("nonzero");
    let lc_positive = p.leading().expect("nonzero").is_positive();
    if deg == 0 {
        return Ok(if lc_positive {
            Positivity::PositiveEverywhere
        } else {
            Positivity::NegativeEverywhere
        });
    }
    if deg % 2 == 1 {
        return Ok(Positivity::ChangesSign);
    }
    let odd_part = p.odd_multiplicity_part();
    if odd_part.degree() > Some(0) && odd_part.count_distinct_real_roots() > 0 {
        return Ok(Positivity::ChangesSign);
    }
    let has_zeros = p.count_distinct_real_roots() > 0;
    Ok(match (lc_positive, has_zeros) {
        (true, false) => Positivity::PositiveEverywhere,
        (true, true) => Positivity::NonnegativeWithZeros,
        (false, false) => Positivity::NegativeEverywhere,
        (false, true) => Positivity::NonpositiveWithZeros,
    })
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

/// Serialized as the coefficient list in increasing degree, canonical "p/q"
/// strings, so certificates survive a JSON round trip exactly.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(format_rat).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let coeffs = strings
            .iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<Rat>, _>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rat(c),
                1 => format!("{}*t", format_rat(c)),
                _ => format!("{}*t^{}", format_rat(c), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, ratio};

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (t^2 - 1) = (t + 1)(t - 1)
        let a = p(&[-1, 0, 1]);
        let (q, r) = a.divmod(&p(&[1, 1]));
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(Poly::gcd(&a, &p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(Poly::gcd(&a, &p(&[1, 1])), p(&[1, 1]));
    }

    #[test]
    fn root_counts() {
        assert_eq!(p(&[-1, 0, 1]).count_distinct_real_roots(), 2); // t^2-1
        assert_eq!(p(&[1, 0, 1]).count_distinct_real_roots(), 0); // t^2+1
        assert_eq!(p(&[0, 0, 1]).count_distinct_real_roots(), 1); // t^2
        assert_eq!(p(&[0, -1, 0, 1]).count_distinct_real_roots(), 3); // t^3-t
        // (t-1)^2 (t+2), double root counted once
        let q = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(q.count_distinct_real_roots(), 2);
    }

    #[test]
    fn positivity_classification() {
        use Positivity::*;
        assert_eq!(poly_positivity(&p(&[1, 0, 1])).unwrap(), PositiveEverywhere); // t^2+1
        assert_eq!(poly_positivity(&p(&[0, 0, 1])).unwrap(), NonnegativeWithZeros); // t^2
        assert_eq!(poly_positivity(&p(&[-1, 0, 1])).unwrap(), ChangesSign); // t^2-1
        assert_eq!(poly_positivity(&p(&[0, 1])).unwrap(), ChangesSign); // t
        assert_eq!(poly_positivity(&p(&[-1, 0, -1])).unwrap(), NegativeEverywhere);
        assert_eq!(poly_positivity(&p(&[0, 0, -1])).unwrap(), NonpositiveWithZeros);
        assert_eq!(poly_positivity(&p(&[5])).unwrap(), PositiveEverywhere);
        assert!(poly_positivity(&Poly::zero()).is_err());
        // (t-1)^2 (t-3)^2 touches zero twice
        let f = Poly::from_roots_squared(&[rat(1), rat(3)]);
        assert_eq!(poly_positivity(&f).unwrap(), NonnegativeWithZeros);
        // (t-1)^2 + tiny constant is strictly positive
        let g = &f + &Poly::constant(ratio(1, 1000000));
        assert_eq!(poly_positivity(&g).unwrap(), PositiveEverywhere);
    }

    #[test]
    fn quartic_with_quadruple_root_does_not_change_sign() {
        // (t-2)^4
        let l = Poly::linear_root(&rat(2));
        let f = &(&l * &l) * &(&l * &l);
        assert_eq!(poly_positivity(&f).unwrap(), Positivity::NonnegativeWithZeros);
        assert_eq!(f.count_distinct_real_roots(), 1);
    }

    #[test]
    fn positive_quadratic_with_negative_discriminant() {
        // t^2 + 18t + 261 has discriminant 324 - 1044 = -720 < 0
        let f = p(&[261, 18, 1]);
        assert_eq!(poly_positivity(&f).unwrap(), Positivity::PositiveEverywhere);
        let disc = f.coeff(1).clone() * f.coeff(1) - rat(4) * f.coeff(2) * f.coeff(0);
        assert_eq!(disc, rat(-720));
    }

    #[test]
    fn squarefree_decomposition_multiplicities() {
        // (t-1)(t-2)^2(t-3)^3
        let f = |a: i64| Poly::linear_root(&rat(a));
        let prod = vec![f(1), f(2), f(2), f(3), f(3), f(3)]
            .into_iter()
            .fold(Poly::one(), |acc, g| &acc * &g);
        let dec = prod.squarefree_decomposition();
        assert_eq!(dec.len(), 3);
        assert_eq!(dec[0], f(1));
        assert_eq!(dec[1], f(2));
        assert_eq!(dec[2], f(3));
        assert_eq!(prod.odd_multiplicity_part(), &f(1) * &f(3));
    }

    #[test]
    fn eval_horner() {
        let f = p(&[1, -2, 0, 1]); // t^3 - 2t + 1
        assert_eq!(f.eval(&rat(2)), rat(5));
        assert_eq!(f.eval(&ratio(1, 2)), ratio(1, 8));
    }
}
