//! Factorization over `Z[T]`: squarefree decomposition, a good prime,
//! multifactor Hensel lifting and exhaustive subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{factor_modpoly, ModPoly};
use super::is_prime_u64;
use crate::algebra::IntPoly;
use crate::error::{Error, Result};

/// `input = content * prod factor^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZFactorization {
    /// Signed content; the factors all have positive leading coefficient.
    pub content: BigInt,
    /// Primitive irreducible factors, sorted by degree then coefficients.
    pub factors: Vec<(IntPoly, usize)>,
}

impl ZFactorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = &acc * f;
            }
        }
        acc
    }

    /// True when the input was a primitive irreducible of positive degree,
    /// up to a unit or constant factor.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Complete factorization of a nonzero integer polynomial.
pub fn factor_over_z(f: &IntPoly) -> Result<ZFactorization> {
    if f.is_zero() {
        return Err(Error::Domain("factorization of the zero polynomial".into()));
    }
    let mut content = f.content();
    if f.lc().is_negative() {
        content = -content;
    }
    let prim = f.primitive_part();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition_z(&prim) {
        for g in factor_squarefree(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(ZFactorization { content, factors })
}

/// Musser's squarefree decomposition of a primitive polynomial.
fn squarefree_decomposition_z(f: &IntPoly) -> Vec<(IntPoly, usize)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides");
        if z.deg() > 0 {
            out.push((z.primitive_part(), i));
        }
        c = c.div_exact(&y).expect("gcd divides");
        w = y;
        i += 1;
    }
    out
}

/// Smallest prime `p >= 3` with `p` not dividing the leading coefficient and
/// `f mod p` squarefree. `f` must be squarefree, or no such prime exists.
pub fn good_prime(f: &IntPoly) -> u64 {
    let lc = f.lc();
    let mut p = 3u64;
    loop {
        if is_prime_u64(p) && !(&lc % p).is_zero() {
            let fp = ModPoly::from_int_poly(f, p);
            if fp.gcd(&fp.derivative()).degree() == 0 {
                return p;
            }
        }
        p += 2;
    }
}

fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.deg();
    if n <= 1 {
        return vec![f.primitive_part()];
    }
    let p = good_prime(f);
    let fp = ModPoly::from_int_poly(f, p);
    let modular: Vec<ModPoly> = factor_modpoly(&fp)
        .factors
        .into_iter()
        .map(|(g, e)| {
            debug_assert_eq!(e, 1);
            g
        })
        .collect();
    if modular.len() == 1 {
        return vec![f.primitive_part()];
    }

    // Coefficients of lc(f) * g for any factor g of f are bounded by
    // |lc| * 2^n * ||f||_2; lift until p^a exceeds twice that.
    let lc = f.lc();
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let bound = lc.abs() * (BigInt::one() << n) * (norm2.sqrt() + 1u32);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut a = 1u32;
    while modulus <= &bound * 2u32 {
        modulus *= &pb;
        a += 1;
    }

    let lc_inv = mod_inverse(&lc, &modulus);
    let target = reduce(&f.scale(&lc_inv), &modulus);
    let lifted = hensel_lift(&target, &modular, p, a);
    recombine(f, lifted, &modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.mod_floor(m).extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

fn reduce(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &IntPoly, m: &BigInt) -> IntPoly {
    let half = m >> 1u32;
    IntPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn to_modpoly(f: &IntPoly, p: u64) -> ModPoly {
    ModPoly::from_int_poly(f, p)
}

/// Lifts `target = prod factors (mod p)` to a factorization mod `p^a`;
/// `target` and all factors are monic.
fn hensel_lift(target: &IntPoly, factors: &[ModPoly], p: u64, a: u32) -> Vec<IntPoly> {
    if factors.len() == 1 {
        return vec![target.clone()];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[ModPoly]| {
        fs.iter()
            .skip(1)
            .fold(fs[0].clone(), |acc, g| acc.mul(g))
    };
    let (g, h) = lift_pair(target, &prod(&factors[..mid]), &prod(&factors[mid..]), p, a);
    let mut out = hensel_lift(&g, &factors[..mid], p, a);
    out.extend(hensel_lift(&h, &factors[mid..], p, a));
    out
}

/// Linear Hensel lifting of `target = g0 * h0 (mod p)` to `mod p^a`.
fn lift_pair(target: &IntPoly, g0: &ModPoly, h0: &ModPoly, p: u64, a: u32) -> (IntPoly, IntPoly) {
    let (one, s, t) = g0.xgcd(h0);
    debug_assert_eq!(one.degree(), 0);
    let pb = BigInt::from(p);
    let mut g = g0.to_int_poly();
    let mut h = h0.to_int_poly();
    let mut pk = pb.clone();
    for _ in 1..a {
        let next = &pk * &pb;
        let err = reduce(&(target - &(&g * &h)), &next);
        let e = to_modpoly(&err.div_scalar_exact(&pk), p);
        let (q, r) = e.mul(&s).divrem(h0);
        let dg = e.mul(&t).add(&q.mul(g0));
        g = reduce(&(&g + &dg.to_int_poly().scale(&pk)), &next);
        h = reduce(&(&h + &r.to_int_poly().scale(&pk)), &next);
        pk = next;
    }
    (g, h)
}

fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = f.primitive_part();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found: Option<(Vec<usize>, IntPoly)> = None;
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = rest.lc();
            let mut cand = IntPoly::constant(lc);
            for &i in &idx {
                cand = reduce(&(&cand * &lifted[i]), modulus);
            }
            let cand = symmetric(&cand, modulus).primitive_part();
            if cand.deg() > 0 {
                if let Some(q) = rest.div_exact(&cand) {
                    rest = q;
                    found = Some((idx.clone(), cand));
                    break;
                }
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        match found {
            Some((idx, g)) => {
                out.push(g);
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if rest.deg() > 0 {
        out.push(rest.primitive_part());
    }
    out
}

/// Advances `idx` (strictly increasing indices below `n`) to the next
/// combination in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Irreducibility certificate cheaper than full factorization: the first
/// prime among `tries` good primes at which `f` stays irreducible.
pub fn irreducible_mod_some_prime(f: &IntPoly, tries: usize) -> Option<u64> {
    let n = f.deg();
    // no prime is good for a polynomial with a repeated factor
    if n == 0 || f.gcd(&f.derivative()).deg() > 0 {
        return None;
    }
    let lc = f.lc();
    let mut p = 3u64;
    let mut seen = 0;
    while seen < tries && p < (1 << 20) {
        if is_prime_u64(p) && !(&lc % p).is_zero() {
            let fp = ModPoly::from_int_poly(f, p);
            if fp.gcd(&fp.derivative()).degree() == 0 {
                seen += 1;
                if n == 2 {
                    // quadratic: irreducible iff no root
                    if !super::modp::has_root_modpoly(&fp) {
                        return Some(p);
                    }
                } else if factor_modpoly(&fp).is_irreducible() {
                    return Some(p);
                }
            }
        }
        p += 2;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::factor_mod_p;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn examples() {
        let f = factor_over_z(&p(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.content, BigInt::one());
        assert_eq!(
            f.factors,
            vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]
        );

        let f = factor_over_z(&p(&[1, 0, 1])).unwrap();
        assert!(f.is_irreducible());

        let f = factor_over_z(&p(&[0, 6])).unwrap();
        assert_eq!(f.content, BigInt::from(6));
        assert_eq!(f.factors, vec![(p(&[0, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like_polynomial_is_irreducible() {
        // x^4 - 10x^2 + 1 splits into quadratics or linears mod every prime
        let f = factor_over_z(&p(&[1, 0, -10, 0, 1])).unwrap();
        assert!(f.is_irreducible());
    }

    #[test]
    fn nonmonic_and_repeated_factors() {
        let a = p(&[3, -2, 5]);
        let b = p(&[-7, 4]);
        let c = p(&[1, 1, 0, 1]);
        let f = &(&(&a * &a) * &(&b * &c)).scale(&BigInt::from(-10)) * &b;
        let fac = factor_over_z(&f).unwrap();
        assert_eq!(fac.expand(), f);
        assert_eq!(fac.content, BigInt::from(-10));
        let degs: Vec<(usize, usize)> = fac.factors.iter().map(|(g, e)| (g.deg(), *e)).collect();
        assert_eq!(degs, vec![(1, 2), (2, 2), (3, 1)]);
    }

    #[test]
    fn cyclotomic_product() {
        // x^12 - 1 has six cyclotomic factors
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let fac = factor_over_z(&p(&c)).unwrap();
        assert_eq!(fac.factors.len(), 6);
        assert_eq!(fac.expand(), p(&c));
    }

    #[test]
    fn combinations_enumerate_binomial() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }

    fn random_factor() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-6i64..=6, 2..4)
            .prop_map(|c| IntPoly::from_i64s(&c))
            .prop_filter("positive degree", |f| f.deg() >= 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn product_reassembles_and_refines_mod_p(fs in prop::collection::vec(random_factor(), 1..4)) {
            let f = fs.iter().skip(1).fold(fs[0].clone(), |acc, g| &acc * g);
            let fac = factor_over_z(&f).unwrap();
            prop_assert_eq!(fac.expand(), f.clone());
            // at least as many factors as the known construction has
            // irreducible pieces
            let total: usize = fac.factors.iter().map(|(_, e)| e).sum();
            let lower: usize = fs.iter().map(|g| factor_over_z(g).unwrap().factors.iter().map(|(_, e)| e).sum::<usize>()).sum();
            prop_assert_eq!(total, lower);
            // each rational factor's mod-p pattern is a union of parts of
            // the full mod-p pattern at a good prime
            let sqf = fac.factors.iter().fold(IntPoly::constant(1), |acc, (g, _)| &acc * g);
            let q = good_prime(&sqf);
            let full = factor_mod_p(&sqf, q).unwrap().degree_pattern();
            let mut pieces: Vec<usize> = Vec::new();
            for (g, _) in &fac.factors {
                pieces.extend(factor_mod_p(g, q).unwrap().degree_pattern());
            }
            pieces.sort_unstable();
            prop_assert_eq!(pieces, full);
        }
    }

    #[test]
    fn repeated_factors_have_no_certificate() {
        assert_eq!(irreducible_mod_some_prime(&IntPoly::from_i64s(&[0, 0, 1]), 10), None);
        assert_eq!(irreducible_mod_some_prime(&IntPoly::from_i64s(&[1, 2, 1]), 10), None);
    }
}
