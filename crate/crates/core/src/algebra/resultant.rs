use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPoly;
use crate::error::{Error, Result};

/// Resultant of two nonzero integer polynomials via the subresultant
/// remainder sequence.
pub fn resultant(f: &IntPoly, h: &IntPoly) -> Result<BigInt> {
    if f.is_zero() || h.is_zero() {
        return Err(Error::Domain("resultant of the zero polynomial".into()));
    }
    Ok(subresultant(f, h))
}

fn subresultant(f: &IntPoly, h: &IntPoly) -> BigInt {
    let (mut a, mut b) = (f.clone(), h.clone());
    let mut sign = BigInt::one();
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
    }
    if b.deg() == 0 {
        return sign * b.lc().pow(a.deg() as u32);
    }

    let ca = a.content();
    let cb = b.content();
    let scale = ca.pow(b.deg() as u32) * cb.pow(a.deg() as u32);
    a = a.div_scalar_exact(&ca);
    b = b.div_scalar_exact(&cb);

    let mut g = BigInt::one();
    let mut hh = BigInt::one();
    loop {
        let delta = (a.deg() - b.deg()) as u32;
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return BigInt::zero();
        }
        let denom = &g * hh.pow(delta);
        b = r.div_scalar_exact(&denom);
        g = a.lc();
        // h <- g^delta / h^(delta - 1)
        hh = if delta == 0 {
            hh
        } else {
            g.pow(delta) / hh.pow(delta - 1)
        };
        if b.deg() == 0 {
            let da = a.deg() as u32;
            let last = if da == 0 {
                BigInt::one()
            } else {
                b.lc().pow(da) / hh.pow(da - 1)
            };
            return sign * scale * last;
        }
    }
}

/// Discriminant `(-1)^(d(d-1)/2) Res(f, f') / lc(f)`.
pub fn poly_discriminant(f: &IntPoly) -> Result<BigInt> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::Domain(
                "discriminant of a constant polynomial".into(),
            ))
        }
    };
    if d == 1 {
        return Ok(BigInt::one());
    }
    let res = subresultant(f, &f.derivative());
    let disc = res / f.lc();
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -disc } else { disc })
}
