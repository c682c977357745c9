//! Double-double arithmetic: each value is the unevaluated sum `hi + lo` of
//! two `f64`s, giving roughly 31 significant decimal digits.
//!
//! The special-function series in [`crate::specfun`] alternate with terms that
//! grow like `e^{|z|}` before they decay, so plain `f64` accumulation loses
//! about `0.43·|z|` digits to cancellation. Accumulating in double-double
//! keeps those series honest across their validated domains.
//!
//! Only the operations the series kernels need are provided: field ops,
//! `exp`/`ln` for real values, `sin`/`cos` with a single `2π` reduction, a
//! complex variant, and a Newton-corrected complex logarithm off the negative
//! real axis.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// ln 2 to double-double precision.
    pub const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };

    /// 2π to double-double precision.
    pub const TAU: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqr(self) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (s, e) = quick_two_sum(p1, p2);
        Dd::new(s, e)
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn ldexp(self, n: i32) -> Dd {
        let f = (n as f64).exp2();
        Dd::new(self.hi * f, self.lo * f)
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd::new(s1, s2)
    }
}

impl std::ops::Add<f64> for Dd {
    type Output = Dd;
    fn add(self, o: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, o);
        let (s1, s2) = quick_two_sum(s1, s2 + self.lo);
        Dd::new(s1, s2)
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl std::ops::Sub<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: f64) -> Dd {
        self + (-o)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, o.hi);
        p2 += self.hi * o.lo + self.lo * o.hi;
        let (s, e) = quick_two_sum(p1, p2);
        Dd::new(s, e)
    }
}

impl std::ops::Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, o: f64) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, o);
        p2 += self.lo * o;
        let (s, e) = quick_two_sum(p1, p2);
        Dd::new(s, e)
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * q1;
        let q2 = r.hi / o.hi;
        let r = r - o * q2;
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e) + q3
    }
}

impl std::ops::Div<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, o: f64) -> Dd {
        self / Dd::from_f64(o)
    }
}

impl std::ops::AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, o: Dd) {
        *self = *self + o;
    }
}

/// `e^a` for a double-double argument, `|a| ≲ 700`.
pub fn exp(a: Dd) -> Dd {
    if a.hi < -745.0 {
        return Dd::ZERO;
    }
    if a.hi == 0.0 && a.lo == 0.0 {
        return Dd::ONE;
    }
    let m = (a.hi / Dd::LN2.hi).round();
    // |r| ≤ ln2/1024 after the 2^-9 scaling
    let r = (a - Dd::LN2 * m).ldexp(-9);
    // e^r − 1 by Taylor
    let mut term = r;
    let mut sum = r;
    let mut k = 1.0;
    loop {
        k += 1.0;
        term = term * r / k;
        sum += term;
        if term.hi.abs() <= 1e-35 || k > 24.0 {
            break;
        }
    }
    // (1 + s)^(2^9): s ← s² + 2s, nine times
    for _ in 0..9 {
        sum = sum.sqr() + sum.ldexp(1);
    }
    (sum + 1.0).ldexp(m as i32)
}

/// `ln a` for `a > 0`, by Newton refinement of the `f64` logarithm.
pub fn ln(a: Dd) -> Dd {
    assert!(a.hi > 0.0, "dd::ln requires a positive argument");
    let mut x = Dd::from_f64(a.hi.ln());
    for _ in 0..2 {
        x = x + a * exp(-x) - 1.0;
    }
    x
}

/// `(sin a, cos a)` after a single reduction modulo 2π.
///
/// The reduction keeps full double-double accuracy for `|a| ≲ 1e6`, which
/// covers every phase this crate produces.
pub fn sincos(a: Dd) -> (Dd, Dd) {
    let k = (a.hi / Dd::TAU.hi).round();
    let r = a - Dd::TAU * k;

    // sin by Taylor on |r| ≤ π
    let r2 = r.sqr();
    let mut term = r;
    let mut s = r;
    let mut n = 1.0;
    loop {
        term = term * r2 / (-((n + 1.0) * (n + 2.0)));
        s += term;
        n += 2.0;
        if term.hi.abs() <= 1e-35 || n > 60.0 {
            break;
        }
    }

    // cos by Taylor
    let mut term = Dd::ONE;
    let mut c = Dd::ONE;
    let mut n = 0.0;
    loop {
        term = term * r2 / (-((n + 1.0) * (n + 2.0)));
        c += term;
        n += 2.0;
        if term.hi.abs() <= 1e-35 || n > 60.0 {
            break;
        }
    }
    (s, c)
}

/// Euler's constant γ to double-double precision.
pub fn euler_gamma() -> Dd {
    // Parsed digit-by-digit; the handful of divisions by ten cost ~1e-31
    // relative, far below what the K₁ series needs.
    dd_from_decimal_digits("577215664901532860606512090082402", -1)
}

/// Parse a decimal digit string `d₁d₂…dₙ · 10^(exp10 − n + 1)` — i.e. the
/// digits followed by a power-of-ten shift placing the decimal point after
/// the first digit when `exp10 = 0`.
fn dd_from_decimal_digits(digits: &str, exp10: i32) -> Dd {
    let mut v = Dd::ZERO;
    let mut count = 0i32;
    for c in digits.chars() {
        let d = c.to_digit(10).expect("decimal digit") as f64;
        v = v * 10.0 + d;
        count += 1;
    }
    let shift = exp10 - (count - 1);
    match shift.cmp(&0) {
        std::cmp::Ordering::Equal => v,
        std::cmp::Ordering::Greater => {
            for _ in 0..shift {
                v = v * 10.0;
            }
            v
        }
        std::cmp::Ordering::Less => {
            for _ in 0..(-shift) {
                v = v / 10.0;
            }
            v
        }
    }
}

/// Complex double-double value.
#[derive(Clone, Copy, Debug, Default)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> Cdd {
        Cdd { re, im }
    }

    #[inline]
    pub fn from_c64(z: Complex64) -> Cdd {
        Cdd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Cheap L1 magnitude of the leading components, used for tail bounds.
    #[inline]
    pub fn norm1(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }

    pub fn sqr(self) -> Cdd {
        Cdd {
            re: self.re.sqr() - self.im.sqr(),
            im: (self.re * self.im).ldexp(1),
        }
    }

    /// `e^z` — requires `|Im z| ≲ 1e6` (one 2π reduction).
    pub fn exp(self) -> Cdd {
        let m = exp(self.re);
        let (s, c) = sincos(self.im);
        Cdd {
            re: m * c,
            im: m * s,
        }
    }
}

impl std::ops::Neg for Cdd {
    type Output = Cdd;
    #[inline]
    fn neg(self) -> Cdd {
        Cdd::new(-self.re, -self.im)
    }
}

impl std::ops::Add for Cdd {
    type Output = Cdd;
    #[inline]
    fn add(self, o: Cdd) -> Cdd {
        Cdd::new(self.re + o.re, self.im + o.im)
    }
}

impl std::ops::Sub for Cdd {
    type Output = Cdd;
    #[inline]
    fn sub(self, o: Cdd) -> Cdd {
        Cdd::new(self.re - o.re, self.im - o.im)
    }
}

impl std::ops::Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl std::ops::Mul<Dd> for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, o: Dd) -> Cdd {
        Cdd::new(self.re * o, self.im * o)
    }
}

impl std::ops::Div<f64> for Cdd {
    type Output = Cdd;
    #[inline]
    fn div(self, o: f64) -> Cdd {
        Cdd::new(self.re / o, self.im / o)
    }
}

impl std::ops::Div for Cdd {
    type Output = Cdd;
    fn div(self, o: Cdd) -> Cdd {
        let d = o.re.sqr() + o.im.sqr();
        let num = self * Cdd::new(o.re, -o.im);
        Cdd::new(num.re / d, num.im / d)
    }
}

impl std::ops::AddAssign for Cdd {
    #[inline]
    fn add_assign(&mut self, o: Cdd) {
        *self = *self + o;
    }
}

/// `ln w` for a complex `f64` value off the closed negative real axis,
/// Newton-corrected to double-double accuracy.
pub fn ln_complex(w: Complex64) -> Cdd {
    assert!(
        w.im != 0.0 || w.re > 0.0,
        "dd::ln_complex requires an argument off the closed negative real axis"
    );
    let seed = Complex64::new(0.5 * w.norm_sqr().ln(), w.im.atan2(w.re));
    let mut x = Cdd::from_c64(seed);
    // x ← x + w·e^(−x) − 1; the seed is ~1e-16 accurate so one step suffices,
    // a second costs little and adds margin.
    for _ in 0..2 {
        let t = Cdd::from_c64(w) * (-x).exp();
        x = x + (t - Cdd::ONE);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn field_ops() {
        let a = Dd::from_f64(0.1) + Dd::from_f64(0.2);
        // hi carries the rounded sum, lo the residual of 0.1 + 0.2
        assert_eq!(a.hi, 0.1 + 0.2);
        assert!(a.lo != 0.0);

        let third = Dd::ONE / 3.0;
        let one = third * 3.0;
        assert!((one - Dd::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn exp_matches_f64_and_identities() {
        for &x in &[0.0, 1.0, -1.0, 0.3, -7.5, 3.25, 10.0, -30.0] {
            let e = exp(Dd::from_f64(x));
            assert!(close(e.to_f64(), x.exp(), 1e-14), "exp({x})");
        }
        // exp(a)·exp(−a) = 1 to dd accuracy
        let a = Dd::from_f64(2.341_592_653_5);
        let p = exp(a) * exp(-a);
        assert!((p - Dd::ONE).to_f64().abs() < 1e-30);
    }

    #[test]
    fn ln_inverts_exp() {
        for &x in &[1.0, 0.5, 2.0, 13.7, 1e-4, 250.0] {
            let l = ln(Dd::from_f64(x));
            let back = exp(l);
            assert!((back - Dd::from_f64(x)).to_f64().abs() <= 1e-28 * x);
        }
    }

    #[test]
    fn sincos_pythagoras_and_values() {
        for &x in &[0.0, 0.5, -1.2, 3.0, -3.1, 2.9, 100.0, -55.5] {
            let (s, c) = sincos(Dd::from_f64(x));
            assert!(close(s.to_f64(), x.sin(), 5e-14), "sin({x})");
            assert!(close(c.to_f64(), x.cos(), 5e-14), "cos({x})");
            let one = s.sqr() + c.sqr();
            assert!((one - Dd::ONE).to_f64().abs() < 1e-29);
        }
    }

    #[test]
    fn gamma_digits() {
        let g = euler_gamma();
        assert!((g.to_f64() - 0.577_215_664_901_532_9).abs() < 1e-16);
        // check the low component is consistent: γ − hi should be ~6e-18
        let residual = g.lo;
        assert!(residual.abs() < 1e-16 && residual != 0.0);
    }

    #[test]
    fn complex_ln_exponentiates_back() {
        let samples = [
            Complex64::new(0.5, 0.0),
            Complex64::new(3.0, 4.0),
            Complex64::new(0.01, -2.0),
            Complex64::new(7.0, -0.5),
            Complex64::new(0.2, 12.0),
        ];
        for &w in &samples {
            let l = ln_complex(w);
            let back = l.exp().to_c64();
            assert!((back - w).norm() <= 1e-28 * w.norm(), "ln({w})");
        }
    }

    #[test]
    fn complex_division() {
        let a = Cdd::from_c64(Complex64::new(1.0, 2.0));
        let b = Cdd::from_c64(Complex64::new(-0.3, 0.7));
        let q = a / b;
        let back = q * b;
        assert!((back.to_c64() - Complex64::new(1.0, 2.0)).norm() < 1e-30);
    }
}
