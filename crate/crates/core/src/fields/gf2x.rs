//! Polynomials over GF(2) of degree at most 127, packed into a `u128`.

/// Carry-less product of two 64-bit polynomials.
#[inline]
pub fn clmul(a: u64, mut b: u64) -> u128 {
    let a = a as u128;
    let mut r = 0u128;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    r
}

/// Degree of `p`, or `None` for the zero polynomial.
pub fn degree(p: u128) -> Option<u32> {
    (p != 0).then(|| 127 - p.leading_zeros())
}

pub fn rem(mut a: u128, m: u128) -> u128 {
    let dm = degree(m).expect("division by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// `a * b mod m` for `deg m <= 64` and reduced operands.
pub fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(a >> 64 == 0 && b >> 64 == 0);
    rem(clmul(a as u64, b as u64), m)
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over GF(2) for `1 <= deg m <= 64`: `m` is irreducible iff
/// `gcd(m, x^(2^i) - x mod m) = 1` for every `1 <= i <= deg(m)/2`.
pub fn is_irreducible(m: u128) -> bool {
    let Some(d) = degree(m) else { return false };
    if d == 0 || d > 64 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = rem(0b10, m);
    let mut xp = x;
    for _ in 1..=d / 2 {
        xp = mulmod(xp, xp, m);
        if gcd(m, xp ^ x) != 1 {
            return false;
        }
    }
    true
}

/// Builds a polynomial from the list of exponents with coefficient 1.
pub const fn from_exponents(exps: &[u32]) -> u128 {
    let mut r = 0u128;
    let mut i = 0;
    while i < exps.len() {
        r |= 1u128 << exps[i];
        i += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    // Schoolbook oracle: explicit convolution over coefficient bits.
    fn naive_mul(a: u64, b: u64) -> u128 {
        let mut r = 0u128;
        for i in 0..64 {
            for j in 0..64 {
                let bit = ((a >> i) & (b >> j) & 1) as u128;
                r ^= bit << (i + j);
            }
        }
        r
    }

    #[test]
    fn clmul_matches_convolution() {
        let samples = [0u64, 1, 3, 0xdead_beef, u64::MAX, 0x8000_0000_0000_0001];
        for &a in &samples {
            for &b in &samples {
                assert_eq!(clmul(a, b), naive_mul(a, b));
            }
        }
    }

    #[test]
    fn small_irreducibles() {
        // x^3+x+1, x^8+x^4+x^3+x+1 irreducible; x^2+1 = (x+1)^2 and x^4+x^2+1 are not.
        assert!(is_irreducible(0b1011));
        assert!(is_irreducible(0x11b));
        assert!(!is_irreducible(0b101));
        assert!(!is_irreducible(0b10101));
        assert!(!is_irreducible(0b1010)); // divisible by x
    }

    #[test]
    fn irreducible_count_degree_8() {
        // There are 30 irreducible polynomials of degree 8 over GF(2).
        let n = (256u128..512).filter(|&m| is_irreducible(m)).count();
        assert_eq!(n, 30);
    }

    #[test]
    fn nist_base_modulus_is_irreducible() {
        assert!(is_irreducible(from_exponents(&[48, 28, 27, 1, 0])));
    }
}
