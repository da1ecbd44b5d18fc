use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::growth::GrowthSeries;
use crate::num::{Point, Real};

use super::rotor::StirProtocol;

pub const MIN_GRID: usize = 64;
pub const DEFAULT_GRID: usize = 1024;
/// Seed of the ChaCha8 stream behind [`ScalarGrid::trig_seed`] when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Fourier modes per axis in the seed field.
pub const SEED_MODES: usize = 6;

/// Cell-centered values on the square `[−L, L]²`, `L = (n+1)/2 + 2`, stored
/// row-major with `y` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid<T> {
    size: usize,
    half_width: T,
    values: Vec<T>,
}

impl<T: Real> ScalarGrid<T> {
    /// Half-width of the square domain for `n` punctures.
    pub fn domain_half_width(n: usize) -> T {
        T::from_usize(n + 1).unwrap() / T::lit(2.0) + T::lit(2.0)
    }

    pub fn from_fn(punctures: usize, size: usize, f: impl Fn(Point<T>) -> T + Sync) -> Result<Self> {
        if size < MIN_GRID {
            return Err(Error::InvalidArgument(format!(
                "grid must be at least {MIN_GRID} cells across, got {size}"
            )));
        }
        let mut g = ScalarGrid {
            size,
            half_width: Self::domain_half_width(punctures),
            values: Vec::new(),
        };
        g.values = (0..size * size).into_par_iter().map(|k| f(g.center_of(k))).collect();
        if let Some(k) = g.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(g)
    }

    /// Random trigonometric polynomial `Σ c_jk sin(jκx + φ_jk) sin(kκy + ψ_jk)`
    /// over `j, k ∈ 1..=6`, `κ = 2π / (2L)`, normalized to `max |α| = 1` on
    /// the grid. Coefficients are uniform in `[−1, 1]`, phases in `[0, 2π)`,
    /// drawn in that order from `ChaCha8Rng::seed_from_u64(seed)`.
    pub fn trig_seed(punctures: usize, size: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::with_capacity(SEED_MODES * SEED_MODES);
        for j in 1..=SEED_MODES {
            for k in 1..=SEED_MODES {
                let c: f64 = rng.random_range(-1.0..=1.0);
                let phx: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let phy: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                terms.push((j as f64, k as f64, T::lit(c), T::lit(phx), T::lit(phy)));
            }
        }
        let kappa = T::PI() / Self::domain_half_width(punctures);
        let mut g = ScalarGrid::from_fn(punctures, size, |p| {
            terms.iter().fold(T::zero(), |acc, &(j, k, c, phx, phy)| {
                acc + c * (T::lit(j) * kappa * p[0] + phx).sin() * (T::lit(k) * kappa * p[1] + phy).sin()
            })
        })?;
        let top = g.values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if top > T::zero() {
            g.values.iter_mut().for_each(|v| *v = *v / top);
        }
        Ok(g)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn cell_size(&self) -> T {
        T::lit(2.0) * self.half_width / T::from_usize(self.size).unwrap()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.size + i]
    }

    pub fn center(&self, i: usize, j: usize) -> Point<T> {
        let h = self.cell_size();
        let c = |m: usize| -self.half_width + (T::from_usize(m).unwrap() + T::lit(0.5)) * h;
        [c(i), c(j)]
    }

    fn center_of(&self, k: usize) -> Point<T> {
        self.center(k % self.size, k / self.size)
    }

    pub fn min_max(&self) -> (T, T) {
        self.values.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Bilinear interpolation between cell centers; positions beyond the
    /// outermost centers are clamped to them.
    pub fn sample(&self, p: Point<T>) -> T {
        let h = self.cell_size();
        let last = T::from_usize(self.size - 1).unwrap();
        let coord = |x: T| {
            let u = ((x + self.half_width) / h - T::lit(0.5)).max(T::zero()).min(last);
            let i = u.floor().to_usize().unwrap().min(self.size - 2);
            (i, u - T::from_usize(i).unwrap())
        };
        let (i, s) = coord(p[0]);
        let (j, t) = coord(p[1]);
        let lerp = |a: T, b: T, w: T| a + w * (b - a);
        let lower = lerp(self.get(i, j), self.get(i + 1, j), s);
        let upper = lerp(self.get(i, j + 1), self.get(i + 1, j + 1), s);
        lerp(lower, upper, t)
    }

    /// Per-cell gradient magnitude from centered differences, one-sided on
    /// the outermost cells.
    fn gradient_row(&self, j: usize) -> impl Iterator<Item = T> + '_ {
        let n = self.size;
        let h = self.cell_size();
        let diff = move |m: usize, at: &dyn Fn(usize) -> T| {
            if m == 0 {
                (at(1) - at(0)) / h
            } else if m == n - 1 {
                (at(n - 1) - at(n - 2)) / h
            } else {
                (at(m + 1) - at(m - 1)) / (T::lit(2.0) * h)
            }
        };
        (0..n).map(move |i| {
            let gx = diff(i, &|m| self.get(m, j));
            let gy = diff(j, &|m| self.get(i, m));
            gx.hypot(gy)
        })
    }

    /// `(sup |∇α|, ∫ |∇α|)`. Each row is reduced serially and rows are summed
    /// in index order, so the result is the same at any thread count.
    pub fn gradient_norms(&self) -> (T, T) {
        let rows: Vec<(T, T)> = (0..self.size)
            .into_par_iter()
            .map(|j| {
                self.gradient_row(j)
                    .fold((T::zero(), T::zero()), |(m, s), g| (m.max(g), s + g))
            })
            .collect();
        let (sup, sum) = rows
            .into_iter()
            .fold((T::zero(), T::zero()), |(m, s), (rm, rs)| (m.max(rm), s + rs));
        let h = self.cell_size();
        (sup, sum * h * h)
    }

    /// Row-major little-endian values.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.values.len() * 8);
        for v in &self.values {
            out.extend_from_slice(&v.as_f64().to_le_bytes());
        }
        out
    }
}

/// Semi-Lagrangian transport `α_{t+1} = α_t ∘ φ⁻¹` under a fixed protocol.
/// The departure point of every cell center is computed once, through the
/// exact inverse rotor maps; cells outside every rotor keep their value.
pub struct ScalarAdvection<T> {
    grid: ScalarGrid<T>,
    departures: Vec<Option<Point<T>>>,
    period: usize,
}

impl<T: Real> ScalarAdvection<T> {
    pub fn new(grid: ScalarGrid<T>, proto: &StirProtocol<T>) -> Self {
        let departures = (0..grid.values.len())
            .into_par_iter()
            .map(|k| {
                let c = grid.center_of(k);
                let p = proto.period_inverse(c);
                (p != c).then_some(p)
            })
            .collect();
        ScalarAdvection {
            grid,
            departures,
            period: 0,
        }
    }

    pub fn grid(&self) -> &ScalarGrid<T> {
        &self.grid
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn step(&mut self) -> &ScalarGrid<T> {
        let g = &self.grid;
        let values = self
            .departures
            .par_iter()
            .zip(g.values.par_iter())
            .map(|(d, &v)| d.map_or(v, |p| g.sample(p)))
            .collect();
        self.grid.values = values;
        self.period += 1;
        &self.grid
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarRun<T> {
    pub sup: GrowthSeries<T>,
    pub l1: GrowthSeries<T>,
    /// Last period with `sup |∇α| · h ≤ 1`; fits stop there.
    pub last_resolved: usize,
    pub final_grid: ScalarGrid<T>,
}

/// Fit window of a gradient series: from period 0 up to the last period
/// with `sup · h ≤ 1`. `None` when fewer than three periods qualify.
pub fn saturation_window<T: Real>(sup: &[T], h: T) -> (usize, Option<(usize, usize)>) {
    let resolved = sup.iter().take_while(|&&s| s * h <= T::one()).count();
    let last = resolved.saturating_sub(1);
    (last, (resolved >= 3).then_some((0, last)))
}

/// Advects `grid0` for `periods` periods and fits the growth of both gradient
/// norms over the unsaturated periods. `observe` sees every field, starting
/// with the initial one.
pub fn advect_scalar_with<T: Real>(
    grid0: ScalarGrid<T>,
    proto: &StirProtocol<T>,
    periods: usize,
    mut observe: impl FnMut(usize, &ScalarGrid<T>),
) -> Result<ScalarRun<T>> {
    if periods == 0 {
        return Err(Error::InvalidArgument("periods must be at least 1".into()));
    }
    let h = grid0.cell_size();
    let mut adv = ScalarAdvection::new(grid0, proto);
    observe(0, adv.grid());
    let (s0, l0) = adv.grid().gradient_norms();
    let (mut sup, mut l1) = (vec![s0], vec![l0]);
    for t in 1..=periods {
        let g = adv.step();
        observe(t, g);
        let (s, l) = g.gradient_norms();
        sup.push(s);
        l1.push(l);
    }
    let (last_resolved, window) = saturation_window(&sup, h);
    let no_growth = sup.iter().all(|&s| s == T::zero());
    let window = if no_growth { None } else { window };
    Ok(ScalarRun {
        sup: GrowthSeries::new(sup, window, false)?,
        l1: GrowthSeries::new(l1, window, false)?,
        last_resolved,
        final_grid: adv.grid,
    })
}

pub fn advect_scalar<T: Real>(
    grid0: ScalarGrid<T>,
    proto: &StirProtocol<T>,
    periods: usize,
) -> Result<ScalarRun<T>> {
    advect_scalar_with(grid0, proto, periods, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;
    use crate::stir_sim::rotor::RotorParams;

    fn proto(n: usize, v: &[i64]) -> StirProtocol<f64> {
        StirProtocol::new(BraidWord::from_signed(n, v).unwrap(), RotorParams::default()).unwrap()
    }

    #[test]
    fn linear_field_gradient() {
        let g = ScalarGrid::<f64>::from_fn(3, 128, |p| p[0]).unwrap();
        let (sup, l1) = g.gradient_norms();
        assert!((sup - 1.0).abs() < 1e-10);
        let area = 64.0;
        assert!((l1 - area).abs() < 0.01 * area);
    }

    #[test]
    fn constant_field_gradient() {
        let g = ScalarGrid::<f64>::from_fn(3, 64, |_| 2.5).unwrap();
        assert_eq!(g.gradient_norms(), (0.0, 0.0));
    }

    #[test]
    fn sine_field_gradient() {
        let g = ScalarGrid::<f64>::from_fn(3, 256, |p| p[0].sin()).unwrap();
        let h = g.cell_size();
        let (sup, l1) = g.gradient_norms();
        let grid_max = (0..g.size()).map(|i| g.center(i, 0)[0].cos().abs()).fold(0.0, f64::max);
        assert!((sup - grid_max).abs() < h * h);
        // ∫_{-4}^{4} |cos x| dx = 2(2 − sin 4), times the y-extent 8.
        let exact = 8.0 * 2.0 * (2.0 - 4f64.sin());
        assert!((l1 - exact).abs() < 0.01 * exact, "{l1} {exact}");
    }

    #[test]
    fn too_small_grid() {
        assert!(ScalarGrid::<f64>::from_fn(3, 32, |_| 0.0).is_err());
    }

    #[test]
    fn sample_at_centers() {
        let g = ScalarGrid::<f64>::trig_seed(3, 64, 1).unwrap();
        for (i, j) in [(0, 0), (5, 7), (63, 63), (63, 0), (30, 62)] {
            assert!((g.sample(g.center(i, j)) - g.get(i, j)).abs() < 1e-12);
        }
        let x = 0.5 * (g.center(5, 7)[0] + g.center(6, 7)[0]);
        let mid = g.sample([x, g.center(5, 7)[1]]);
        assert!((mid - 0.5 * (g.get(5, 7) + g.get(6, 7))).abs() < 1e-12);
    }

    #[test]
    fn trig_seed_is_normalized_and_seeded() {
        let a = ScalarGrid::<f64>::trig_seed(3, 64, 9).unwrap();
        let b = ScalarGrid::<f64>::trig_seed(3, 64, 9).unwrap();
        let c = ScalarGrid::<f64>::trig_seed(3, 64, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let (lo, hi) = a.min_max();
        assert_eq!(lo.abs().max(hi.abs()), 1.0);
    }

    #[test]
    fn constant_stays_constant() {
        let g = ScalarGrid::<f64>::from_fn(3, 64, |_| 0.25).unwrap();
        let run = advect_scalar(g, &proto(3, &[1, -2]), 3).unwrap();
        assert!(run.final_grid.values().iter().all(|&v| v == 0.25));
        assert!(run.sup.values.iter().all(|&v| v == 0.0));
        assert!(run.l1.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn identity_protocol_is_identity() {
        let g = ScalarGrid::<f64>::trig_seed(3, 64, 1).unwrap();
        let run = advect_scalar(g.clone(), &proto(3, &[]), 2).unwrap();
        assert_eq!(run.final_grid, g);
    }

    #[test]
    fn max_principle() {
        let g = ScalarGrid::<f64>::trig_seed(4, 96, 2).unwrap();
        let (lo, hi) = g.min_max();
        let mut seen = 0;
        advect_scalar_with(g, &proto(4, &[1, -2, 3]), 4, |_, f| {
            let (a, b) = f.min_max();
            assert!(a >= lo && b <= hi);
            seen += 1;
        })
        .unwrap();
        assert_eq!(seen, 5);
    }

    #[test]
    fn saturation_window_rule() {
        assert_eq!(saturation_window(&[1.0, 2.0, 4.0, 8.0, 16.0], 0.2), (2, Some((0, 2))));
        assert_eq!(saturation_window(&[1.0, 2.0, 4.0], 0.2), (2, Some((0, 2))));
        assert_eq!(saturation_window(&[1.0, 8.0], 0.2).1, None);
    }

    #[test]
    fn single_precision_grid() {
        let g = ScalarGrid::<f32>::from_fn(3, 64, |p| p[1]).unwrap();
        let (sup, _) = g.gradient_norms();
        assert!((sup - 1.0).abs() < 1e-3);
    }
}
