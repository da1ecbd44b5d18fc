//! Dynnikov coordinates of multicurves on the `n`-punctured disk.
//!
//! Convention: punctures sit on a horizontal line, ordered left to right.
//! A multicurve is encoded by `2n − 4` integers `(a₁…a_{n−2}, b₁…b_{n−2})`
//! with `aᵢ = (α_{2i} − α_{2i−1}) / 2` and `bᵢ = (β_i − β_{i+1}) / 2`. Here `α`
//! counts intersections with the arcs above and below punctures `2..n−1`, and
//! `β` counts intersections with the vertical lines between consecutive
//! punctures. The piecewise-linear update rules below are those of
//! Thiffeault's braid/loop-coordinate formalism; `σᵢ` is the clockwise
//! interchange of punctures `i` and `i+1`.
//!
//! Mirroring the disk in the horizontal axis sends `a ↦ −a`, fixes `b`, and
//! conjugates `σᵢ` to `σᵢ⁻¹`. Negative letters are computed that way, which
//! makes inverse cancellation an identity of the formulas rather than a
//! separately maintained table.
//!
//! All arithmetic is on [`BigInt`]: coordinates grow like `λᵏ` under a
//! pseudo-Anosov braid.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::braid::{BraidWord, Letter, Sign};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopCoords {
    a: Vec<BigInt>,
    b: Vec<BigInt>,
}

/// ℓ¹ size of a coordinate vector. Same exponential growth rate as the
/// minimal length of the multicurve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoopNorm(pub BigInt);

impl LoopNorm {
    /// Natural logarithm, valid far past the `f64` range.
    pub fn ln(&self) -> f64 {
        big_ln(&self.0)
    }
}

impl fmt::Display for LoopNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `ln |x|` for arbitrarily large integers; `-inf` for zero.
pub fn big_ln(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let x = x.abs();
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = &x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl LoopCoords {
    pub fn new(a: Vec<BigInt>, b: Vec<BigInt>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::CoordinateLength {
                expected: a.len().max(b.len()).max(1),
                a: a.len(),
                b: b.len(),
            });
        }
        Ok(LoopCoords { a, b })
    }

    pub fn from_i64(a: &[i64], b: &[i64]) -> Result<Self> {
        LoopCoords::new(
            a.iter().map(|&v| BigInt::from(v)).collect(),
            b.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    /// The generating multiloop `a ≡ 0, b ≡ −1`.
    pub fn initial_multiloop(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPunctures { required: 3, got: n });
        }
        Ok(LoopCoords {
            a: vec![BigInt::zero(); n - 2],
            b: vec![BigInt::from(-1); n - 2],
        })
    }

    /// The round curve enclosing punctures `j` and `j + 1` only.
    pub fn pair_curve(n: usize, j: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPunctures { required: 3, got: n });
        }
        if j == 0 || j >= n {
            return Err(Error::GeneratorOutOfRange { index: j, strands: n });
        }
        // Crosses only the vertical line between punctures j and j+1, twice.
        let mut b = vec![BigInt::zero(); n - 2];
        if j <= n - 2 {
            b[j - 1] = BigInt::from(1);
        }
        if j >= 2 {
            b[j - 2] = BigInt::from(-1);
        }
        Ok(LoopCoords {
            a: vec![BigInt::zero(); n - 2],
            b,
        })
    }

    pub fn punctures(&self) -> usize {
        self.a.len() + 2
    }

    pub fn a(&self) -> &[BigInt] {
        &self.a
    }

    pub fn b(&self) -> &[BigInt] {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(Zero::is_zero)
    }

    /// Rejects the empty multicurve; used for iteration seeds.
    pub fn validate_seed(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::EmptyMulticurve)
        } else {
            Ok(())
        }
    }

    pub fn norm(&self) -> LoopNorm {
        LoopNorm(self.a.iter().chain(&self.b).map(|v| v.abs()).sum())
    }

    pub fn apply_generator(&self, letter: Letter) -> Result<LoopCoords> {
        let n = self.punctures();
        if letter.index == 0 || letter.index >= n {
            return Err(Error::GeneratorOutOfRange {
                index: letter.index,
                strands: n,
            });
        }
        let mut out = self.clone();
        match letter.sign {
            Sign::Pos => sigma_pos(&mut out.a, &mut out.b, letter.index),
            Sign::Neg => {
                mirror(&mut out.a);
                sigma_pos(&mut out.a, &mut out.b, letter.index);
                mirror(&mut out.a);
            }
        }
        Ok(out)
    }

    /// Left-to-right fold of [`apply_generator`](Self::apply_generator).
    pub fn apply_braid(&self, braid: &BraidWord) -> Result<LoopCoords> {
        if braid.strands() != self.punctures() {
            return Err(Error::StrandMismatch {
                left: braid.strands(),
                right: self.punctures(),
            });
        }
        let mut out = self.clone();
        for &l in braid.letters() {
            out = out.apply_generator(l)?;
        }
        Ok(out)
    }

    /// Parses the `a`-block-then-`b`-block line format.
    pub fn parse(text: &str) -> Result<LoopCoords> {
        let mut vals = Vec::new();
        for (position, tok) in text.split_ascii_whitespace().enumerate() {
            let v: BigInt = tok.parse().map_err(|_| Error::BraidParse {
                position,
                token: tok.to_string(),
                reason: "not a signed decimal integer".into(),
            })?;
            vals.push(v);
        }
        if vals.is_empty() || vals.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "expected an even, nonzero number of coordinates, got {}",
                vals.len()
            )));
        }
        let b = vals.split_off(vals.len() / 2);
        LoopCoords::new(vals, b)
    }
}

impl fmt::Display for LoopCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.a.iter().chain(&self.b).enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn mirror(a: &mut [BigInt]) {
    for v in a {
        *v = -std::mem::take(v);
    }
}

fn pos(x: &BigInt) -> BigInt {
    if x.is_positive() {
        x.clone()
    } else {
        BigInt::zero()
    }
}

fn neg(x: &BigInt) -> BigInt {
    if x.is_negative() {
        x.clone()
    } else {
        BigInt::zero()
    }
}

/// In-place action of `σ_i` (1-based `i`) on `(a, b)` of length `n − 2`.
fn sigma_pos(a: &mut [BigInt], b: &mut [BigInt], i: usize) {
    let m = a.len();
    if i == 1 {
        let a1 = &a[0];
        let b1 = &b[0];
        let t = a1 + pos(b1);
        let new_a = -b1 + pos(&t);
        b[0] = t;
        a[0] = new_a;
    } else if i == m + 1 {
        let an = &a[m - 1];
        let bn = &b[m - 1];
        let t = an + neg(bn);
        let new_a = -bn + neg(&t);
        b[m - 1] = t;
        a[m - 1] = new_a;
    } else {
        // Interior generator couples slots i-2 and i-1 (0-based).
        let (j, k) = (i - 2, i - 1);
        let (ap, bp, ai, bi) = (&a[j], &b[j], &a[k], &b[k]);
        let c = ap - ai - pos(bi) + neg(bp);
        let new_ap = ap - pos(bp) - pos(&(pos(bi) + &c));
        let new_bp = bi + neg(&c);
        let new_ai = ai - neg(bi) - neg(&(neg(bp) - &c));
        let new_bi = bp - neg(&c);
        a[j] = new_ap;
        b[j] = new_bp;
        a[k] = new_ai;
        b[k] = new_bi;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;

    #[test]
    fn initial_multiloop_examples() {
        let u = LoopCoords::initial_multiloop(3).unwrap();
        assert_eq!(u.to_string(), "0 -1");
        let u = LoopCoords::initial_multiloop(5).unwrap();
        assert_eq!(u.to_string(), "0 0 0 -1 -1 -1");
        assert!(matches!(
            LoopCoords::initial_multiloop(2),
            Err(Error::TooFewPunctures { .. })
        ));
    }

    #[test]
    fn pair_curve_is_fixed_by_its_half_twist() {
        for n in 3..8 {
            for j in 1..n {
                let c = LoopCoords::pair_curve(n, j).unwrap();
                assert_eq!(c.norm().0, BigInt::from(if j == 1 || j == n - 1 { 1 } else { 2 }));
                for s in [Sign::Pos, Sign::Neg] {
                    assert_eq!(c.apply_generator(Letter::new(j, s)).unwrap(), c);
                }
                for i in (1..n).filter(|&i| i + 1 == j || i == j + 1) {
                    assert_ne!(c.apply_generator(Letter::new(i, Sign::Pos)).unwrap(), c);
                }
            }
        }
        assert_eq!(LoopCoords::pair_curve(3, 2).unwrap(), LoopCoords::initial_multiloop(3).unwrap());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(LoopCoords::initial_multiloop(3).unwrap().norm().0, BigInt::from(1));
        assert_eq!(LoopCoords::initial_multiloop(6).unwrap().norm().0, BigInt::from(4));
    }

    #[test]
    fn index_out_of_range() {
        let u = LoopCoords::initial_multiloop(4).unwrap();
        assert!(u.apply_generator(Letter::new(4, Sign::Pos)).is_err());
        assert!(u.apply_generator(Letter::new(0, Sign::Neg)).is_err());
        let b = BraidWord::from_signed(3, &[1]).unwrap();
        assert!(u.apply_braid(&b).is_err());
    }

    #[test]
    fn identity_braid_fixes_loop() {
        let u = LoopCoords::from_i64(&[3, -7], &[2, 5]).unwrap();
        let id = BraidWord::identity(4).unwrap();
        assert_eq!(u.apply_braid(&id).unwrap(), u);
    }

    #[test]
    fn zero_vector_rejected_as_seed() {
        let z = LoopCoords::from_i64(&[0], &[0]).unwrap();
        assert_eq!(z.validate_seed(), Err(Error::EmptyMulticurve));
        assert!(LoopCoords::from_i64(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn parse_round_trip_big() {
        let big: BigInt = "-123456789012345678901234567890".parse().unwrap();
        let u = LoopCoords::new(vec![big.clone(), 1.into()], vec![0.into(), big]).unwrap();
        assert_eq!(LoopCoords::parse(&u.to_string()).unwrap(), u);
        assert!(LoopCoords::parse("1 2 3").is_err());
    }

    #[test]
    fn big_ln_matches_f64_and_scales() {
        let x = BigInt::from(12345u64);
        assert!((big_ln(&x) - 12345f64.ln()).abs() < 1e-14);
        let huge = BigInt::from(3) << 5000usize;
        let expect = 3f64.ln() + 5000.0 * std::f64::consts::LN_2;
        assert!((big_ln(&huge) - expect).abs() < 1e-9);
    }

    #[test]
    fn pseudo_anosov_norms_grow() {
        let b = BraidWord::from_signed(3, &[1, -2]).unwrap();
        let mut u = LoopCoords::initial_multiloop(3).unwrap();
        let mut norms = vec![];
        for _ in 0..8 {
            u = u.apply_braid(&b).unwrap();
            norms.push(u.norm().0);
        }
        assert!(norms.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn forward_backward_500_periods_is_exact() {
        let b = BraidWord::from_signed(4, &[1, -2, 3, -2]).unwrap();
        let seed = LoopCoords::initial_multiloop(4).unwrap();
        let mut u = seed.clone();
        for _ in 0..500 {
            u = u.apply_braid(&b).unwrap();
        }
        assert!(u.norm().0.bits() > 500);
        let inv = b.inverse();
        for _ in 0..500 {
            u = u.apply_braid(&inv).unwrap();
        }
        assert_eq!(u, seed);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Empirical single-step inflation bound, see `norm_inflation_bounded`.
        const INFLATION: u32 = 3;

        fn arb_loop(n: std::ops::Range<usize>) -> impl Strategy<Value = LoopCoords> {
            n.prop_flat_map(|n| {
                let block = prop::collection::vec(-1_000_000i64..=1_000_000, n - 2);
                (block.clone(), block)
                    .prop_map(|(a, b)| LoopCoords::from_i64(&a, &b).unwrap())
                    .prop_filter("nonzero", |u| !u.is_zero())
            })
        }

        fn small_loop() -> impl Strategy<Value = LoopCoords> {
            (3usize..9).prop_flat_map(|n| {
                let block = prop::collection::vec(-3i64..=3, n - 2);
                (block.clone(), block)
                    .prop_map(|(a, b)| LoopCoords::from_i64(&a, &b).unwrap())
                    .prop_filter("nonzero", |u| !u.is_zero())
            })
        }

        fn with_index(
            u: impl Strategy<Value = LoopCoords>,
        ) -> impl Strategy<Value = (LoopCoords, usize, bool)> {
            u.prop_flat_map(|u| {
                let n = u.punctures();
                (Just(u), 1..n, any::<bool>())
            })
        }

        fn far_pair() -> impl Strategy<Value = (LoopCoords, i64, i64, bool)> {
            arb_loop(4..9).prop_flat_map(|u| {
                let n = u.punctures() as i64;
                (1..n - 2).prop_flat_map(move |i| {
                    (Just(u.clone()), Just(i), i + 2..n, any::<bool>())
                })
            })
        }

        fn word(n: usize, v: &[i64]) -> BraidWord {
            BraidWord::from_signed(n, v).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn inverse_cancellation((u, i, s) in with_index(arb_loop(3..9))) {
                let l = Letter::new(i, if s { Sign::Pos } else { Sign::Neg });
                let v = u.apply_generator(l).unwrap();
                prop_assert_eq!(v.apply_generator(l.inverse()).unwrap(), u);
            }

            #[test]
            fn artin_relation(u in arb_loop(3..9), pick in any::<prop::sample::Index>()) {
                let n = u.punctures();
                let i = 1 + pick.index(n - 2) as i64;
                let lhs = u.apply_braid(&word(n, &[i, i + 1, i])).unwrap();
                let rhs = u.apply_braid(&word(n, &[i + 1, i, i + 1])).unwrap();
                prop_assert_eq!(lhs, rhs);
                let lhs = u.apply_braid(&word(n, &[-i, -(i + 1), -i])).unwrap();
                let rhs = u.apply_braid(&word(n, &[-(i + 1), -i, -(i + 1)])).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn far_commutation((u, i, j, s) in far_pair()) {
                let n = u.punctures();
                let j = if s { j } else { -j };
                let lhs = u.apply_braid(&word(n, &[i, j])).unwrap();
                let rhs = u.apply_braid(&word(n, &[j, i])).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn far_commutation_n4(u in arb_loop(4..5)) {
                let lhs = u.apply_braid(&word(4, &[1, 3])).unwrap();
                let rhs = u.apply_braid(&word(4, &[3, 1])).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn norm_inflation_bounded((u, i, s) in with_index(prop_oneof![small_loop(), arb_loop(3..9)])) {
                let l = Letter::new(i, if s { Sign::Pos } else { Sign::Neg });
                let v = u.apply_generator(l).unwrap();
                prop_assert!(v.norm().0 <= u.norm().0 * INFLATION);
                // A generator followed by its inverse leaves the norm unchanged.
                prop_assert_eq!(v.apply_generator(l.inverse()).unwrap().norm(), u.norm());
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn full_twist_is_trivial(u in arb_loop(3..6)) {
                let n = u.punctures();
                let twist: Vec<i64> = (0..n).flat_map(|_| 1..n as i64).collect();
                prop_assert_eq!(u.apply_braid(&word(n, &twist)).unwrap(), u);
            }

            #[test]
            fn full_twist_3_is_cube_of_sigma1_sigma2(u in arb_loop(3..4)) {
                let b = word(3, &[1, 2]).pow(3);
                prop_assert_eq!(u.apply_braid(&b).unwrap(), u);
            }
        }
    }
}
