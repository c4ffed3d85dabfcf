use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{poly_discriminant, IntPoly};
use crate::error::{Error, Result};

/// Integer polynomial in `(t, u)`, stored as coefficients in `Z[t]` indexed by
/// the power of `u`. Trimmed like [`IntPoly`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivPoly {
    by_u: Vec<IntPoly>,
}

impl BivPoly {
    pub fn new(mut by_u: Vec<IntPoly>) -> Self {
        while by_u.last().is_some_and(IntPoly::is_zero) {
            by_u.pop();
        }
        BivPoly { by_u }
    }

    pub fn zero() -> Self {
        BivPoly { by_u: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![IntPoly::constant(c)])
    }

    pub fn var_t() -> Self {
        Self::new(vec![IntPoly::monomial(1, 1)])
    }

    pub fn var_u() -> Self {
        Self::new(vec![IntPoly::zero(), IntPoly::constant(1)])
    }

    /// Builds from `(t_power, u_power, coefficient)` triples.
    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let mut out = BivPoly::zero();
        for &(i, j, c) in terms {
            let mut by_u = vec![IntPoly::zero(); j + 1];
            by_u[j] = IntPoly::monomial(c, i);
            out = out.add(&BivPoly::new(by_u));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.by_u.is_empty()
    }

    /// Coefficients in `Z[t]`, index = power of `u`.
    pub fn u_coeffs(&self) -> &[IntPoly] {
        &self.by_u
    }

    pub fn deg_u(&self) -> usize {
        self.by_u.len().saturating_sub(1)
    }

    pub fn deg_t(&self) -> usize {
        self.by_u.iter().map(IntPoly::deg).max().unwrap_or(0)
    }

    /// Leading coefficient in `u`, a polynomial in `t`.
    pub fn lc_u(&self) -> IntPoly {
        self.by_u.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.by_u
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&c.content()))
    }

    pub fn add(&self, other: &BivPoly) -> BivPoly {
        let n = self.by_u.len().max(other.by_u.len());
        let zero = IntPoly::zero();
        BivPoly::new(
            (0..n)
                .map(|j| {
                    let a = self.by_u.get(j).unwrap_or(&zero);
                    let b = other.by_u.get(j).unwrap_or(&zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> BivPoly {
        BivPoly::new(self.by_u.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &BivPoly) -> BivPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BivPoly) -> BivPoly {
        if self.is_zero() || other.is_zero() {
            return BivPoly::zero();
        }
        let mut out = vec![IntPoly::zero(); self.by_u.len() + other.by_u.len() - 1];
        for (i, a) in self.by_u.iter().enumerate() {
            for (j, b) in other.by_u.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BivPoly::new(out)
    }

    pub fn pow(&self, mut e: u32) -> BivPoly {
        let mut base = self.clone();
        let mut acc = BivPoly::constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to `u`.
    pub fn derivative_u(&self) -> BivPoly {
        BivPoly::new(
            self.by_u
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(&BigInt::from(j)))
                .collect(),
        )
    }

    /// Substitutes `t := n`, giving a polynomial in `u`.
    pub fn specialize_t(&self, n: &BigInt) -> IntPoly {
        IntPoly::new(self.by_u.iter().map(|c| c.eval(n)).collect())
    }

    fn div_scalar_exact(&self, s: &BigInt) -> BivPoly {
        BivPoly::new(self.by_u.iter().map(|c| c.div_scalar_exact(s)).collect())
    }
}

impl fmt::Display for BivPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(usize, usize, BigInt)> = Vec::new();
        for (j, c) in self.by_u.iter().enumerate().rev() {
            for (i, a) in c.coeffs().iter().enumerate().rev() {
                if !a.is_zero() {
                    terms.push((i, j, a.clone()));
                }
            }
        }
        let mut out = String::new();
        for (i, j, a) in terms {
            let neg = a.is_negative();
            let a = a.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || (i == 0 && j == 0) {
                factors.push(a.to_string());
            }
            match j {
                0 => {}
                1 => factors.push("u".into()),
                _ => factors.push(format!("u^{j}")),
            }
            match i {
                0 => {}
                1 => factors.push("t".into()),
                _ => factors.push(format!("t^{i}")),
            }
            out.push_str(&factors.join("*"));
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for BivPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivPoly({})", self)
    }
}

/// Plane model `g(t, u) = 0` of a degree-`nu` cover of the `t`-line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveCover {
    g: BivPoly,
}

impl CurveCover {
    /// Validates and normalizes `g`: content is divided out, `nu = deg_u g`
    /// must be at least 2, and `g` must be squarefree in `u` over `Q(t)`.
    pub fn new(g: BivPoly) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::InvalidCover("zero polynomial".into()));
        }
        let nu = g.deg_u();
        if nu < 2 {
            return Err(Error::InvalidCover(format!(
                "degree in u is {nu}, need at least 2"
            )));
        }
        let mut g = g.div_scalar_exact(&g.content());
        if g.lc_u().lc().is_negative() {
            g = g.neg();
        }
        if disc_u(&g).is_zero() {
            return Err(Error::InvalidCover(
                "not squarefree as a polynomial in u".into(),
            ));
        }
        Ok(CurveCover { g })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(super::parse_bivariate(text)?)
    }

    pub fn poly(&self) -> &BivPoly {
        &self.g
    }

    /// Degree of the cover, i.e. the degree of `g` in `u`.
    pub fn nu(&self) -> usize {
        self.g.deg_u()
    }

    pub fn lc_u(&self) -> IntPoly {
        self.g.lc_u()
    }
}

impl fmt::Display for CurveCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.g.fmt(f)
    }
}

/// `disc_u(g)` as a polynomial in `t`.
///
/// Evaluates the univariate discriminant at enough integer points where the
/// leading coefficient in `u` does not vanish and interpolates. At such points
/// specialization commutes with the resultant, so the result is exact.
fn disc_u(g: &BivPoly) -> IntPoly {
    let nu = g.deg_u();
    let bound = (2 * nu - 2) * g.deg_t();
    let lc = g.lc_u();
    let mut xs: Vec<BigInt> = Vec::with_capacity(bound + 1);
    let mut ys: Vec<BigInt> = Vec::with_capacity(bound + 1);
    let mut t = 0i64;
    while xs.len() < bound + 1 {
        let tb = BigInt::from(t);
        if !lc.eval(&tb).is_zero() {
            let fiber = g.specialize_t(&tb);
            ys.push(poly_discriminant(&fiber).expect("fiber has degree nu >= 2"));
            xs.push(tb);
        }
        t += 1;
    }
    interpolate(&xs, &ys)
}

/// Newton interpolation over `Q`; the caller guarantees an integer result.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> IntPoly {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - level]);
            dd[i] = num / den;
        }
    }
    // Horner on the Newton form, in rational coefficients.
    let mut acc: Vec<BigRational> = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        // acc = acc * (T - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        let xi = BigRational::from_integer(xs[i].clone());
        for (k, a) in acc.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * &xi;
        }
        next[0] += &dd[i];
        acc = next;
    }
    IntPoly::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.is_integer(), "discriminant interpolation left a fraction");
                c.to_integer()
            })
            .collect(),
    )
}

/// `disc_u(g(t, u))` as an [`IntPoly`] in `t`. Zero when `g` is not
/// squarefree in `u`; covers built through [`CurveCover::new`] never are.
pub fn discriminant_in_u(cover: &CurveCover) -> IntPoly {
    disc_u(&cover.g)
}

/// `f / gcd(f, f')`, made primitive with positive leading coefficient.
pub fn squarefree_primitive_part(f: &IntPoly) -> Result<IntPoly> {
    if f.is_zero() {
        return Err(Error::Domain("squarefree part of the zero polynomial".into()));
    }
    if f.is_constant() {
        return Ok(IntPoly::constant(1));
    }
    let g = f.gcd(&f.derivative());
    let (q, _) = f.primitive_part().pseudo_divrem(&g.primitive_part());
    Ok(q.primitive_part())
}

/// The separable primitive polynomial whose roots are the finite critical
/// values of `t`, over-approximated by the roots of `lc_u(g)`.
pub fn critical_polynomial(cover: &CurveCover) -> Result<IntPoly> {
    let disc = discriminant_in_u(cover);
    let f = squarefree_primitive_part(&(&disc * &cover.lc_u()))?;
    if f.is_constant() {
        return Err(Error::NoCriticalValue);
    }
    Ok(f)
}
