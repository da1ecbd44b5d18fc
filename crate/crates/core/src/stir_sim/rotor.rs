use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, Letter, Permutation, Sign};
use crate::error::{Error, Result};
use crate::num::{Point, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Radial profile of a rotor: rigid half-turn inside `r0`, smoothstep decay
/// to rest at `r1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotorParams<T> {
    pub r0: T,
    pub r1: T,
}

impl<T: Real> Default for RotorParams<T> {
    fn default() -> Self {
        RotorParams {
            r0: T::lit(0.6),
            r1: T::lit(0.95),
        }
    }
}

impl<T: Real> RotorParams<T> {
    /// Requires `0.5 < r0 < r1 < 1.5`, so the core holds both punctures of
    /// its letter and the support misses every other puncture.
    pub fn new(r0: T, r1: T) -> Result<Self> {
        if !(T::lit(0.5) < r0 && r0 < r1 && r1 < T::lit(1.5)) {
            return Err(Error::InvalidRotor {
                r0: r0.as_f64(),
                r1: r1.as_f64(),
            });
        }
        Ok(RotorParams { r0, r1 })
    }

    pub fn validate(&self) -> Result<()> {
        RotorParams::new(self.r0, self.r1).map(|_| ())
    }

    /// Rotation angle at radius `r`.
    pub fn theta(&self, r: T) -> T {
        if r <= self.r0 {
            T::PI()
        } else if r >= self.r1 {
            T::zero()
        } else {
            let w = (r - self.r0) / (self.r1 - self.r0);
            let s = w * w * (T::lit(3.0) - T::lit(2.0) * w);
            T::PI() * (T::one() - s)
        }
    }
}

/// Rotation by `angle(r)` about `center`. Points with zero angle are
/// returned untouched.
#[inline]
pub(crate) fn swirl<T: Real>(p: Point<T>, center: Point<T>, angle: impl Fn(T) -> T) -> Point<T> {
    let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
    let a = angle(dx.hypot(dy));
    if a == T::zero() {
        return p;
    }
    let (s, c) = a.sin_cos();
    [center[0] + c * dx - s * dy, center[1] + s * dx + c * dy]
}

/// Position of puncture `i` (1-based) among `n`.
pub fn puncture_position<T: Real>(n: usize, i: usize) -> Point<T> {
    let x = T::from_usize(i).unwrap() - T::from_usize(n + 1).unwrap() / T::lit(2.0);
    [x, T::zero()]
}

/// Midpoint of punctures `i` and `i + 1`.
pub fn rotor_center<T: Real>(n: usize, i: usize) -> Point<T> {
    let p = puncture_position::<T>(n, i);
    [p[0] + T::lit(0.5), p[1]]
}

/// The closed-form map of one generator: counterclockwise rotation by
/// `θ(r)` about the rotor center for `σᵢ`, clockwise for `σᵢ⁻¹`.
pub fn rotor_map<T: Real>(
    p: Point<T>,
    n: usize,
    letter: Letter,
    params: &RotorParams<T>,
    direction: Direction,
) -> Point<T> {
    let forward = matches!(direction, Direction::Forward);
    let ccw = (letter.sign == Sign::Pos) == forward;
    let center = rotor_center(n, letter.index);
    swirl(p, center, |r| {
        let t = params.theta(r);
        if ccw {
            t
        } else {
            -t
        }
    })
}

/// A braid realized as a time-periodic sequence of rotor maps, one letter
/// after another within each period.
#[derive(Debug, Clone, PartialEq)]
pub struct StirProtocol<T> {
    pub braid: BraidWord,
    pub rotor: RotorParams<T>,
}

impl<T: Real> StirProtocol<T> {
    pub fn new(braid: BraidWord, rotor: RotorParams<T>) -> Result<Self> {
        rotor.validate()?;
        Ok(StirProtocol { braid, rotor })
    }

    pub fn strands(&self) -> usize {
        self.braid.strands()
    }

    pub fn punctures(&self) -> Vec<Point<T>> {
        (1..=self.strands()).map(|i| puncture_position(self.strands(), i)).collect()
    }

    pub fn letter_map(&self, p: Point<T>, letter: Letter, direction: Direction) -> Point<T> {
        rotor_map(p, self.strands(), letter, &self.rotor, direction)
    }

    /// Time-one map.
    pub fn period_map(&self, p: Point<T>) -> Point<T> {
        self.braid
            .letters()
            .iter()
            .fold(p, |q, &l| self.letter_map(q, l, Direction::Forward))
    }

    /// Inverse of the time-one map: inverse letters in reverse order.
    pub fn period_inverse(&self, p: Point<T>) -> Point<T> {
        self.braid
            .letters()
            .iter()
            .rev()
            .fold(p, |q, &l| self.letter_map(q, l, Direction::Inverse))
    }

    /// Permutation of the puncture points after one period, found by
    /// matching each image to its nearest puncture.
    pub fn puncture_permutation(&self) -> Result<Permutation> {
        let pts = self.punctures();
        let image = pts
            .iter()
            .map(|&p| {
                let q = self.period_map(p);
                let dist = |j: usize| (pts[j][0] - q[0]).hypot(pts[j][1] - q[1]);
                let nearest = (0..pts.len())
                    .min_by(|&a, &b| dist(a).partial_cmp(&dist(b)).unwrap())
                    .unwrap();
                nearest + 1
            })
            .collect();
        Permutation::from_image(image)
    }
}
