use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// n (n-1) ... (n-k+1)
pub fn falling_factorial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    Rational::from_integer(acc)
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Parses `p`, `-p` or `p/q` with decimal integers.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

pub(crate) fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(3, -6), rat(-1, 2));
        assert_eq!(rat(0, 5), Rational::zero());
        assert_eq!(rat(0, 5).denom(), &BigInt::one());
        assert_eq!(rat(-4, -6).to_string(), "2/3");
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(2, 5), int(0));
        assert_eq!(falling_factorial(5, 2), int(20));
        assert_eq!(falling_factorial(3, 3), int(6));
        assert_eq!(falling_factorial(2, 3), int(0));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("7/6"), Some(rat(7, 6)));
        assert_eq!(parse_rational("-2/4"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("12"), Some(int(12)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
