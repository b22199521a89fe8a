//! Small numeric kernels: compensated (double-double) arithmetic, order-stable
//! summation, bisection, Newton polishing, cubic roots, and sign-change
//! bracketing on a logarithmic grid.

/// Double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
///
/// Used where a polynomial expression suffers catastrophic cancellation in
/// plain f64 (the quadratic discriminant near its zero set). Not a general
/// extended-precision type; only the operations needed here are provided.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        self.mul(Dd::from_f64(other))
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut acc = Dd::from_f64(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient accurate to roughly double-double precision (one refinement
    /// step of the leading-term estimate).
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.value() / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn abs(self) -> f64 {
        self.value().abs()
    }
}

/// Sums a small buffer after sorting it ascending by value.
///
/// Two calls fed permutations of the same multiset return bit-identical
/// results, which is what makes exact identities like `F_0(0) = 0` hold:
/// the 0 <-> m spin flip permutes the weight terms but leaves the sum
/// unchanged bit for bit.
#[inline]
pub(crate) fn sum_sorted(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(f64::total_cmp);
    terms.iter().sum()
}

/// Bisection on `[lo, hi]`; requires a sign change (or a zero endpoint).
///
/// Shrinks the interval until its width is below `tol_for(lo, hi)` and
/// returns the midpoint.
pub(crate) fn bisect<F, T>(mut lo: f64, mut hi: f64, f: F, tol_for: T) -> f64
where
    F: Fn(f64) -> f64,
    T: Fn(f64, f64) -> f64,
{
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    debug_assert!(flo.signum() != f(hi).signum(), "bisect needs a bracket");
    // 200 iterations halve well past f64 resolution for any finite interval
    for _ in 0..200 {
        if hi - lo < tol_for(lo, hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A few Newton steps on `f` with derivative `df`, starting at `x0`.
///
/// Stops early when the step stalls; falls back to the last iterate if the
/// derivative vanishes or an update is not finite.
pub(crate) fn newton_polish<F, D>(f: F, df: D, x0: f64, max_steps: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut x = x0;
    for _ in 0..max_steps {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        let dfx = df(x);
        if dfx == 0.0 || !dfx.is_finite() {
            return x;
        }
        let next = x - fx / dfx;
        if !next.is_finite() {
            return x;
        }
        if (next - x).abs() <= 1e-16 * x.abs().max(1.0) {
            return next;
        }
        x = next;
    }
    x
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0` with `c3 != 0`.
///
/// Trigonometric branch for three real roots, Cardano otherwise
/// (Numerical Recipes 5.6). Roots are returned unordered and unpolished.
pub(crate) fn cubic_real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    debug_assert!(c3 != 0.0);
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let q3 = q * q * q;
    if r * r <= q3 {
        // three real roots (double roots land here via the clamp)
        let theta = (r / q3.sqrt()).clamp(-1.0, 1.0).acos();
        let m = -2.0 * q.sqrt();
        let shift = a / 3.0;
        vec![
            m * (theta / 3.0).cos() - shift,
            m * ((theta + 2.0 * std::f64::consts::PI) / 3.0).cos() - shift,
            m * ((theta - 2.0 * std::f64::consts::PI) / 3.0).cos() - shift,
        ]
    } else {
        let big_a = -r.signum() * ((r.abs() + (r * r - q3).sqrt()).cbrt());
        let big_b = if big_a != 0.0 { q / big_a } else { 0.0 };
        vec![(big_a + big_b) - a / 3.0]
    }
}

/// Scans `[lo, hi]` in `panels` equal steps and returns each sub-interval
/// carrying a sign change of `f`, plus zero-width brackets for exact zeros
/// at grid nodes.
pub(crate) fn bracket_sign_changes<F>(f: F, lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    assert!(panels >= 1 && hi > lo);
    let step = (hi - lo) / panels as f64;
    let mut brackets = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    if f_prev == 0.0 {
        brackets.push((lo, lo));
    }
    for i in 1..=panels {
        let x = if i == panels {
            hi
        } else {
            lo + i as f64 * step
        };
        let fx = f(x);
        if fx == 0.0 {
            brackets.push((x, x));
        } else if f_prev != 0.0 && fx.signum() != f_prev.signum() {
            brackets.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    brackets
}

/// Merges values closer than `rel_tol` (relative to the larger magnitude)
/// into one representative. Input need not be sorted; output is ascending.
pub(crate) fn dedup_sorted(mut values: Vec<f64>, rel_tol: f64) -> Vec<f64> {
    values.sort_unstable_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for v in values {
        match out.last() {
            Some(&last) if (v - last).abs() <= rel_tol * v.abs().max(last.abs()) => {}
            _ => out.push(v),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancelled_discriminant() {
        // b^2 - 4ac with b^2 ~ 4ac and dyadic inputs: the exact difference
        // is 2^-25 + 2^-54, whose tail plain f64 squaring must lose
        let eps = 2f64.powi(-27);
        let b = 2.0 + eps;
        let exact = 2f64.powi(-25) + 2f64.powi(-54);
        let dd = Dd::from_f64(b)
            .mul(Dd::from_f64(b))
            .sub(Dd::from_f64(4.0))
            .value();
        assert_eq!(dd, exact);
        assert_ne!(b * b - 4.0, exact, "plain f64 should round the tail away");
    }

    #[test]
    fn dd_division_round_trips() {
        let a = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let back = a.mul(Dd::from_f64(3.0)).value();
        assert!((back - 1.0).abs() < 1e-30);
    }

    #[test]
    fn dd_pow_matches_f64_for_exact_inputs() {
        let x = Dd::from_f64(0.5);
        assert_eq!(x.powi(8).value(), 0.5f64.powi(8));
    }

    #[test]
    fn sum_sorted_is_permutation_invariant() {
        let mut a = [0.1, 0.3, 7.0, 1e-9];
        let mut b = [7.0, 1e-9, 0.1, 0.3];
        assert_eq!(sum_sorted(&mut a).to_bits(), sum_sorted(&mut b).to_bits());
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let root = bisect(1.0, 2.0, |x| x * x - 2.0, |_, _| 1e-14);
        assert!((root - 2.0f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn newton_polish_tightens_root() {
        let rough = 1.414;
        let polished = newton_polish(|x| x * x - 2.0, |x| 2.0 * x, rough, 8);
        assert!((polished - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cubic_roots_simple_and_double() {
        // (z - 1)(z + 2)^2 = z^3 + 3z^2 - 4
        let mut roots = cubic_real_roots(1.0, 3.0, 0.0, -4.0);
        roots.sort_unstable_by(f64::total_cmp);
        assert_eq!(roots.len(), 3);
        assert!((roots[0] + 2.0).abs() < 1e-7 && (roots[1] + 2.0).abs() < 1e-7);
        assert!((roots[2] - 1.0).abs() < 1e-9);

        // one real root: z^3 - z - 6 = (z - 2)(z^2 + 2z + 3)
        let roots = cubic_real_roots(1.0, 0.0, -1.0, -6.0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bracket_scan_locates_sign_changes() {
        let brackets = bracket_sign_changes(|x| x * x - 2.0, -2.0, 2.0, 64);
        assert_eq!(brackets.len(), 2);
        for (lo, hi) in brackets {
            assert!(lo <= hi && (lo.abs() - 2.0f64.sqrt()).abs() < 0.1);
        }
    }

    #[test]
    fn dedup_merges_close_values() {
        let vals = vec![1.0, 1.0 + 1e-12, 3.0, 0.5];
        let out = dedup_sorted(vals, 1e-8);
        assert_eq!(out, vec![0.5, 1.0, 3.0]);
    }
}
