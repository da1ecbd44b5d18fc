use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::growth::GrowthSeries;
use crate::num::{Point, Real};

use super::rotor::{swirl, Direction, StirProtocol};

/// Segments handed to one rayon task. Fixed so that chunking, and hence
/// every reduction order, does not depend on the thread count.
const CHUNK: usize = 1 << 12;

/// Bisection depth limit for one original segment during one letter.
const MAX_DEPTH: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline<T> {
    pub vertices: Vec<Point<T>>,
    pub closed: bool,
}

impl<T: Real> Polyline<T> {
    pub fn open(vertices: Vec<Point<T>>) -> Self {
        Polyline {
            vertices,
            closed: false,
        }
    }

    /// Closed polygon on the circle, with spacing at most `h_max` and at
    /// least 16 vertices.
    pub fn circle(center: Point<T>, radius: T, h_max: T) -> Self {
        let by_spacing = (T::TAU() * radius / h_max).ceil().to_usize().unwrap_or(0) + 1;
        let count = by_spacing.max(16);
        let step = T::TAU() / T::from_usize(count).unwrap();
        let vertices = (0..count)
            .map(|k| {
                let (s, c) = (step * T::from_usize(k).unwrap()).sin_cos();
                [center[0] + radius * c, center[1] + radius * s]
            })
            .collect();
        Polyline {
            vertices,
            closed: true,
        }
    }

    /// Straight segment split so consecutive vertices are at most `h_max` apart.
    pub fn segment(a: Point<T>, b: Point<T>, h_max: T) -> Self {
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let pieces = (len / h_max).ceil().to_usize().unwrap_or(1).max(1);
        let vertices = (0..=pieces)
            .map(|k| {
                let t = T::from_usize(k).unwrap() / T::from_usize(pieces).unwrap();
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
            })
            .collect();
        Polyline::open(vertices)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn segment_count(&self) -> usize {
        match (self.closed, self.vertices.len()) {
            (_, 0 | 1) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    fn endpoints(&self, k: usize) -> (Point<T>, Point<T>) {
        let v = &self.vertices;
        (v[k], v[(k + 1) % v.len()])
    }

    /// Polygonal length, summed chunk by chunk in a fixed order.
    pub fn length(&self) -> T {
        let segs = self.segment_count();
        let partial: Vec<T> = (0..segs)
            .into_par_iter()
            .chunks(CHUNK)
            .map(|ks| {
                ks.into_iter().fold(T::zero(), |acc, k| {
                    let (a, b) = self.endpoints(k);
                    acc + (b[0] - a[0]).hypot(b[1] - a[1])
                })
            })
            .collect();
        partial.into_iter().fold(T::zero(), |a, b| a + b)
    }

    pub fn max_spacing(&self) -> T {
        (0..self.segment_count())
            .map(|k| {
                let (a, b) = self.endpoints(k);
                (b[0] - a[0]).hypot(b[1] - a[1])
            })
            .fold(T::zero(), T::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvectOptions<T> {
    pub h_max: T,
    pub max_vertices: usize,
}

impl<T: Real> Default for AdvectOptions<T> {
    fn default() -> Self {
        AdvectOptions {
            h_max: T::lit(1e-2),
            max_vertices: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolylineRun<T> {
    /// Length at period 0 and after each completed period.
    pub lengths: Vec<T>,
    pub curve: Polyline<T>,
    pub truncated: bool,
}

impl<T: Real> PolylineRun<T> {
    /// Length series with a fit over `window`, or over the whole run.
    pub fn series(&self, window: Option<(usize, usize)>) -> Result<GrowthSeries<T>> {
        GrowthSeries::new(self.lengths.clone(), window, self.truncated)
    }
}

fn dist<T: Real>(a: Point<T>, b: Point<T>) -> T {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn midpoint<T: Real>(a: Point<T>, b: Point<T>) -> Point<T> {
    let half = T::lit(0.5);
    [half * (a[0] + b[0]), half * (a[1] + b[1])]
}

/// Pushes the image of the open segment `(pa, pb]`, bisecting in the
/// preimage wherever the image spacing exceeds `h`.
#[allow(clippy::too_many_arguments)]
fn refine<T: Real, F: Fn(Point<T>) -> Point<T>>(
    f: &F,
    pa: Point<T>,
    pb: Point<T>,
    qa: Point<T>,
    qb: Point<T>,
    h: T,
    depth: u32,
    out: &mut Vec<Point<T>>,
) {
    if depth < MAX_DEPTH && dist(qa, qb) > h {
        let pm = midpoint(pa, pb);
        let qm = f(pm);
        refine(f, pa, pm, qa, qm, h, depth + 1, out);
        refine(f, pm, pb, qm, qb, h, depth + 1, out);
    } else {
        out.push(qb);
    }
}

/// Applies `f` to every vertex and refines the image to spacing `h`.
fn map_refined<T: Real, F>(curve: &Polyline<T>, f: &F, h: T) -> Polyline<T>
where
    F: Fn(Point<T>) -> Point<T> + Sync,
{
    let v = &curve.vertices;
    if v.len() < 2 {
        return Polyline {
            vertices: v.iter().map(|&p| f(p)).collect(),
            closed: curve.closed,
        };
    }
    let images: Vec<Point<T>> = v.par_iter().map(|&p| f(p)).collect();
    let segs = curve.segment_count();
    let pieces: Vec<Vec<Point<T>>> = (0..segs)
        .into_par_iter()
        .chunks(CHUNK)
        .map(|ks| {
            let mut out = Vec::with_capacity(ks.len() * 2);
            for k in ks {
                let k1 = (k + 1) % v.len();
                refine(f, v[k], v[k1], images[k], images[k1], h, 0, &mut out);
            }
            out
        })
        .collect();
    let mut vertices = Vec::with_capacity(pieces.iter().map(Vec::len).sum::<usize>() + 1);
    if !curve.closed {
        vertices.push(images[0]);
    }
    for p in pieces {
        vertices.extend(p);
    }
    if curve.closed {
        // The last segment ends at the first vertex, which was pushed last.
        vertices.rotate_right(1);
    }
    Polyline {
        vertices,
        closed: curve.closed,
    }
}

/// Advects `curve` through `periods` repetitions of `stages` (each one a map
/// followed by refinement) and records the length after every period.
pub fn advect_stages<T: Real, F>(
    curve: &Polyline<T>,
    stages: &[F],
    periods: usize,
    opts: &AdvectOptions<T>,
) -> Result<PolylineRun<T>>
where
    F: Fn(Point<T>) -> Point<T> + Sync,
{
    if periods == 0 {
        return Err(Error::InvalidArgument("periods must be at least 1".into()));
    }
    if opts.h_max.is_nan() || opts.h_max <= T::zero() {
        return Err(Error::InvalidArgument(format!("h_max must be positive, got {}", opts.h_max)));
    }
    let mut cur = curve.clone();
    let mut lengths = vec![cur.length()];
    let mut truncated = false;
    'periods: for _ in 0..periods {
        for f in stages {
            let next = map_refined(&cur, f, opts.h_max);
            if next.len() > opts.max_vertices {
                truncated = true;
                break 'periods;
            }
            cur = next;
        }
        lengths.push(cur.length());
    }
    Ok(PolylineRun {
        lengths,
        curve: cur,
        truncated,
    })
}

/// Material line under a rotor protocol. When the vertex cap is hit, the
/// run stops at the last completed period and is flagged as truncated.
pub fn advect_polyline<T: Real>(
    curve: &Polyline<T>,
    proto: &StirProtocol<T>,
    periods: usize,
    opts: &AdvectOptions<T>,
) -> Result<PolylineRun<T>> {
    let stages: Vec<_> = proto
        .braid
        .letters()
        .iter()
        .map(|&l| move |p| proto.letter_map(p, l, Direction::Forward))
        .collect();
    if stages.is_empty() {
        let identity = [|p: Point<T>| p];
        return advect_stages(curve, &identity, periods, opts);
    }
    advect_stages(curve, &stages, periods, opts)
}

/// Rotation profile of the steady reference shear.
pub fn reference_shear<T: Real>(r: T) -> T {
    T::one() / (T::one() + r * r)
}

/// Asymptotic length growth per period of the radial segment `[ra, rb]`
/// under the reference shear: `∫ |r θ̃′(r)| dr = [atan r − r/(1+r²)]`.
pub fn reference_shear_constant<T: Real>(ra: T, rb: T) -> T {
    let g = |r: T| r.atan() - r / (T::one() + r * r);
    g(rb) - g(ra)
}

/// Material line under the steady, integrable map `(r, φ) ↦ (r, φ + θ̃(r))`
/// about the origin. The radius is conserved, so lengths grow at most linearly.
pub fn integrable_reference<T: Real>(
    curve: &Polyline<T>,
    periods: usize,
    opts: &AdvectOptions<T>,
) -> Result<PolylineRun<T>> {
    let map = [|p: Point<T>| swirl(p, [T::zero(), T::zero()], reference_shear)];
    advect_stages(curve, &map, periods, opts)
}
