//! Growth of conjugacy classes in the free group `π₁(D_n) = F⟨x₁…x_n⟩`.
//!
//! An independent route to the topological growth rate: the braid acts on
//! the free group by `σᵢ: xᵢ ↦ xᵢ xᵢ₊₁ xᵢ⁻¹, xᵢ₊₁ ↦ xᵢ` (others fixed). A simple
//! closed curve around punctures `j, j+1` is the conjugacy class of `xⱼ xⱼ₊₁`,
//! and its cyclically reduced length grows at the dilation of the braid.
//! The generators themselves are not tracked: their images are conjugates of
//! generators and always cyclically reduce to length one.

use crate::braid::{BraidWord, Sign};
use crate::error::{Error, Result};
use crate::growth::GrowthSeries;

/// Number of trailing steps in the growth fit.
pub const TAIL_WINDOW: usize = 3;

/// Letter `+j` is `x_j`, `-j` is `x_j⁻¹`.
type Word = Vec<i32>;

#[derive(Debug, Clone, Copy)]
pub struct FreeGroupOptions {
    /// Stop once the total word length at a step would exceed this.
    pub max_letters: usize,
}

impl Default for FreeGroupOptions {
    fn default() -> Self {
        FreeGroupOptions {
            max_letters: 1 << 23,
        }
    }
}

fn push_reduced(out: &mut Word, x: i32) {
    if out.last() == Some(&-x) {
        out.pop();
    } else {
        out.push(x);
    }
}

fn inverse_word(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

/// Cyclic reduction of a freely reduced word.
pub fn cyclically_reduce(w: &[i32]) -> &[i32] {
    let (mut lo, mut hi) = (0, w.len());
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    &w[lo..hi]
}

/// Free-group automorphism as the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    images: Vec<Word>,
    inverses: Vec<Word>,
}

impl Substitution {
    fn identity(n: usize) -> Self {
        let images: Vec<Word> = (1..=n as i32).map(|j| vec![j]).collect();
        let inverses = images.iter().map(|w| inverse_word(w)).collect();
        Substitution { images, inverses }
    }

    /// Automorphism of one braid period, earlier letters applied first.
    pub fn of_braid(braid: &BraidWord) -> Self {
        let n = braid.strands();
        let mut images: Vec<Word> = (1..=n as i32).map(|j| vec![j]).collect();
        for l in braid.letters() {
            let step = Substitution::of_letter(n, l.index, l.sign);
            images = images.iter().map(|w| step.apply(w)).collect();
        }
        let inverses = images.iter().map(|w| inverse_word(w)).collect();
        Substitution { images, inverses }
    }

    fn of_letter(n: usize, i: usize, sign: Sign) -> Self {
        let mut s = Substitution::identity(n);
        let (a, b) = (i as i32, i as i32 + 1);
        let (img_a, img_b) = match sign {
            Sign::Pos => (vec![a, b, -a], vec![a]),
            Sign::Neg => (vec![b], vec![-b, a, b]),
        };
        s.inverses[i - 1] = inverse_word(&img_a);
        s.inverses[i] = inverse_word(&img_b);
        s.images[i - 1] = img_a;
        s.images[i] = img_b;
        s
    }

    fn image(&self, x: i32) -> &[i32] {
        if x > 0 {
            &self.images[x as usize - 1]
        } else {
            &self.inverses[(-x) as usize - 1]
        }
    }

    fn image_len(&self, w: &[i32]) -> usize {
        w.iter().map(|&x| self.image(x).len()).sum()
    }

    /// Freely reduced image of `w`.
    pub fn apply(&self, w: &[i32]) -> Word {
        let mut out = Vec::with_capacity(self.image_len(w));
        for &x in w {
            for &y in self.image(x) {
                push_reduced(&mut out, y);
            }
        }
        out
    }
}

/// Iterates the period automorphism `k` times on the pair-curve words and
/// records the total cyclically reduced length per step (`k + 1` values).
/// The fit covers the last [`TAIL_WINDOW`] recorded steps: word lengths hit
/// the letter cap after a handful of steps for large dilations, and earlier
/// steps still carry the transient.
pub fn free_group_growth(
    braid: &BraidWord,
    k: usize,
    opts: FreeGroupOptions,
) -> Result<GrowthSeries<f64>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = braid.strands() as i32;
    let phi = Substitution::of_braid(braid);
    let mut words: Vec<Word> = (1..n).map(|j| vec![j, j + 1]).collect();
    let total = |ws: &[Word]| ws.iter().map(Vec::len).sum::<usize>();
    let mut values = vec![total(&words) as f64];
    let mut truncated = false;
    for _ in 0..k {
        let upcoming: usize = words.iter().map(|w| phi.image_len(w)).sum();
        if upcoming > opts.max_letters {
            truncated = true;
            break;
        }
        words = words
            .iter()
            .map(|w| cyclically_reduce(&phi.apply(w)).to_vec())
            .collect();
        values.push(total(&words) as f64);
    }
    let len = values.len();
    let window = (len >= TAIL_WINDOW).then(|| (len - TAIL_WINDOW, len - 1));
    GrowthSeries::new(values, window, truncated)
}
