//! Real root isolation by Sturm sequences, and a cheaper sign-change root
//! finder for low-degree slices.

use super::poly::{rem, Poly1};

/// Width at which bisection stops.
const ROOT_TOL: f64 = 1e-14;
/// Roots this close to an interval endpoint are merged into it.
const ENDPOINT_MERGE: f64 = 1e-12;
/// Remainders whose normalized coefficients all fall below this are zero.
const REMAINDER_ZERO: f64 = 1e-11;

fn normalized(p: &Poly1) -> Poly1 {
    let m = p.max_abs_coeff();
    if m == 0.0 {
        Poly1::zero()
    } else {
        p.scale(1.0 / m)
    }
}

/// The Sturm chain `p_0 = h, p_1 = h', p_{k+1} = -(p_{k-1} mod p_k)`, each
/// element rescaled to unit max coefficient (positive scaling keeps signs).
#[derive(Debug)]
pub struct SturmChain {
    chain: Vec<Poly1>,
}

impl SturmChain {
    pub fn new(h: &Poly1) -> Self {
        let mut chain = vec![normalized(h)];
        let d = normalized(&h.derivative());
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            if chain[n - 1].degree() == Some(0) {
                break;
            }
            let r = rem(&chain[n - 2], &chain[n - 1]);
            if r.max_abs_coeff() <= REMAINDER_ZERO {
                break;
            }
            chain.push(normalized(&(-&r)));
        }
        Self { chain }
    }

    fn sign_variations(&self, x: f64) -> usize {
        let mut count = 0;
        let mut last = 0.0f64;
        for p in &self.chain {
            let v = p.eval(x);
            if v == 0.0 {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: f64, b: f64) -> usize {
        self.sign_variations(a).saturating_sub(self.sign_variations(b))
    }
}

/// Distinct real roots of `h` in the open interval `(a, b)`, ascending.
///
/// Intervals are split until each holds one root by Sturm count, then the
/// root is refined by sign-change bisection (or by Sturm-count bisection for
/// roots of even multiplicity). Roots within `1e-12` of `a` or `b` are
/// dropped.
pub fn real_roots_in(h: &Poly1, a: f64, b: f64) -> Vec<f64> {
    match h.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => {
            let c = h.coeffs();
            let r = -c[0] / c[1];
            return if r > a + ENDPOINT_MERGE && r < b - ENDPOINT_MERGE {
                vec![r]
            } else {
                Vec::new()
            };
        }
        _ => {}
    }
    let sturm = SturmChain::new(h);
    let mut roots = Vec::new();
    // Counting starts just inside the interval so that a root sitting exactly
    // on an endpoint cannot skew the sign variations.
    let (lo, hi) = (a + ENDPOINT_MERGE, b - ENDPOINT_MERGE);
    if lo >= hi {
        return Vec::new();
    }
    let mut stack = vec![(lo, hi, sturm.count(lo, hi))];
    while let Some((lo, hi, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            roots.push(refine(h, &sturm, lo, hi));
            continue;
        }
        if hi - lo <= ROOT_TOL {
            // A cluster narrower than the resolution counts as one root.
            roots.push(0.5 * (lo + hi));
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi, sturm.count(mid, hi)));
        stack.push((lo, mid, sturm.count(lo, mid)));
    }
    roots.sort_by(f64::total_cmp);
    roots.retain(|&r| r > a + ENDPOINT_MERGE && r < b - ENDPOINT_MERGE);
    roots.dedup_by(|x, y| (*x - *y).abs() <= ROOT_TOL);
    roots
}

fn refine(h: &Poly1, sturm: &SturmChain, mut lo: f64, mut hi: f64) -> f64 {
    let fhi = h.eval(hi);
    if fhi == 0.0 {
        return hi;
    }
    let flo = h.eval(lo);
    if flo != 0.0 && (flo > 0.0) != (fhi > 0.0) {
        let lo_positive = flo > 0.0;
        while hi - lo > ROOT_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = h.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if (fm > 0.0) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
    // No sign change: even multiplicity, locate by counting.
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm.count(lo, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots of `h` in `(a, b)` at which `h` changes sign, ascending.
///
/// The interval is cut at the sign-change roots of `h'` (found recursively),
/// leaving monotone pieces that hold at most one root each; those are
/// bisected. Roots of even multiplicity are skipped. Much cheaper than a
/// Sturm chain for the low degrees met when slicing tensor polynomials.
pub fn sign_change_roots(h: &Poly1, a: f64, b: f64) -> Vec<f64> {
    match h.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => {
            let c = h.coeffs();
            let r = -c[0] / c[1];
            return if r > a && r < b { vec![r] } else { Vec::new() };
        }
        _ => {}
    }
    let mut knots = vec![a];
    knots.extend(sign_change_roots(&h.derivative(), a, b));
    knots.push(b);
    let values: Vec<f64> = knots.iter().map(|&x| h.eval(x)).collect();
    let mut out = Vec::new();
    for k in 0..knots.len() - 1 {
        let (lo, hi) = (values[k], values[k + 1]);
        if lo != 0.0 && hi != 0.0 && (lo > 0.0) != (hi > 0.0) {
            out.push(bisect(h, knots[k], knots[k + 1], lo > 0.0));
        } else if hi == 0.0 && k + 2 < knots.len() {
            // Zero exactly at an interior critical point.
            let next = values[k + 2];
            if lo != 0.0 && next != 0.0 && (lo > 0.0) != (next > 0.0) {
                out.push(knots[k + 1]);
            }
        }
    }
    out
}

fn bisect(h: &Poly1, mut lo: f64, mut hi: f64, lo_positive: bool) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h.eval(mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(roots: &[f64]) -> Poly1 {
        roots
            .iter()
            .fold(Poly1::constant(1.0), |acc, &r| &acc * &Poly1::linear(-r, 1.0))
    }

    #[test]
    fn simple_roots() {
        let h = from_roots(&[0.2, 0.5, 0.7, 1.5, -0.3]);
        let r = real_roots_in(&h, 0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([0.2, 0.5, 0.7]) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn double_root() {
        let h = from_roots(&[0.4, 0.4, 0.9]);
        let r = real_roots_in(&h, 0.0, 1.0);
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[0] - 0.4).abs() < 1e-7);
        assert!((r[1] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn no_real_roots() {
        let h = Poly1::new(vec![1.0, 0.0, 1.0]);
        assert!(real_roots_in(&h, -5.0, 5.0).is_empty());
        assert!(real_roots_in(&Poly1::constant(3.0), 0.0, 1.0).is_empty());
    }

    #[test]
    fn endpoint_roots_merged() {
        let h = from_roots(&[0.0, 1.0, 0.5]);
        let r = real_roots_in(&h, 0.0, 1.0);
        assert_eq!(r.len(), 1, "{r:?}");
        assert!((r[0] - 0.5).abs() < 1e-13);
    }

    #[test]
    fn close_roots_separated() {
        let h = from_roots(&[0.3, 0.3 + 1e-3, 0.8]);
        let r = real_roots_in(&h, 0.0, 1.0);
        assert_eq!(r.len(), 3, "{r:?}");
    }

    #[test]
    fn sturm_counts() {
        let h = from_roots(&[0.1, 0.2, 0.3]);
        let s = SturmChain::new(&h);
        assert_eq!(s.count(0.0, 1.0), 3);
        assert_eq!(s.count(0.15, 1.0), 2);
        assert_eq!(s.count(0.35, 1.0), 0);
    }

    #[test]
    fn sign_change_roots_match_sturm() {
        let cubic = &(&Poly1::linear(-0.2, 1.0) * &Poly1::linear(-0.5, 1.0)) * &Poly1::linear(-0.9, 1.0);
        let r = sign_change_roots(&cubic, 0.0, 1.0);
        let s = real_roots_in(&cubic, 0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip(&s) {
            assert!((a - b).abs() < 1e-12);
        }
        // Triple root at a critical point, and a double root with no sign change.
        let triple = Poly1::linear(-0.5, 1.0).pow(3);
        assert_eq!(sign_change_roots(&triple, 0.0, 1.0), vec![0.5]);
        let double = Poly1::linear(-0.5, 1.0).pow(2);
        assert!(sign_change_roots(&double, 0.0, 1.0).is_empty());
    }
}
