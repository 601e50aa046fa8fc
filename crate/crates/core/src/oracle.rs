//! Ground-truth disagreement probabilities, independent of Monte Carlo.
//!
//! For single-layer two-class networks on a 2-D input space the decision
//! boundary is a line: the class-1 region is a half-plane obtained by
//! subtracting the two pre-activation scores (any strictly increasing
//! activation preserves their order, so it drops out). Disagreement between
//! two such classifiers is then the measure of a wedge or strip, which this
//! module computes in closed form: polygon clipping for uniform laws,
//! 1-D normal CDFs for truncated Gaussians with axis-aligned boundaries.
//!
//! Everything else goes through [`quad_disagreement`], a dense midpoint-rule
//! integration of `density(x) * 1[region indices differ]` over the domain's
//! bounding box. The two oracles and the Monte Carlo estimators triangulate
//! each other in the test suite.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{InputDomain, InputMeasure, MeasureLaw};
use crate::net::{Evaluator, NetworkParams};

/// Grid resolution used when a closed form is unavailable and
/// [`exact_disagreement`] falls through to quadrature.
const FALLBACK_GRID_RES: usize = 4096;

// ======================================================================
// Half-planes
// ======================================================================

/// Decision rule "class 1 iff `a*x1 + b*x2 + c > 0`".
///
/// `degenerate` records `a = b = 0`: the decision is then constant (`c != 0`)
/// or an everywhere-tie (`c = 0`), and there is no boundary line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub degenerate: bool,
}

impl HalfPlane {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        HalfPlane {
            a,
            b,
            c,
            degenerate: a == 0.0 && b == 0.0,
        }
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.a * x1 + self.b * x2 + self.c
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::NonFinite("half-plane coefficients"));
        }
        Ok(())
    }
}

/// Extracts the decision half-plane of a single-layer 2-in 2-out network.
///
/// Valid for any of the supported activations: they are strictly increasing,
/// so the class order of the two outputs equals the order of the two
/// pre-activation scores, whose difference is affine in the input.
pub fn halfplane_of(params: &NetworkParams) -> Result<HalfPlane> {
    if params.layer_dims() != [2, 2] {
        return Err(Error::InvalidArgument(format!(
            "half-plane extraction needs a single-layer 2-in 2-out network, \
             got layer dims {:?}",
            params.layer_dims()
        )));
    }
    Ok(HalfPlane::new(
        params.weight(0, 0, 0) - params.weight(0, 1, 0),
        params.weight(0, 0, 1) - params.weight(0, 1, 1),
        params.bias(0, 0) - params.bias(0, 1),
    ))
}

// ======================================================================
// Closed-form disagreement
// ======================================================================

/// Measure of the set where the two half-plane classifiers disagree.
///
/// Uniform laws are evaluated by exact polygon/disk geometry. Truncated
/// Gaussians on a box with axis-aligned boundaries reduce to 1-D normal
/// CDFs; the remaining Gaussian cases (oblique boundaries, ball domain)
/// fall through to dense quadrature, which is what makes this function
/// total over the supported measures.
pub fn exact_disagreement(h1: &HalfPlane, h2: &HalfPlane, measure: &InputMeasure) -> Result<f64> {
    h1.validate()?;
    h2.validate()?;
    if h1.degenerate || h2.degenerate {
        return Err(Error::DegenerateHalfPlane);
    }
    if measure.dim() != 2 {
        return Err(Error::Unsupported(
            "half-plane oracles require a 2-D input space".into(),
        ));
    }
    let value = match (measure.domain(), measure.law()) {
        (InputDomain::Box { bounds }, MeasureLaw::Uniform) => {
            let poly = rect_poly(bounds[0], bounds[1]);
            let area = polygon_area(&clip(&clip(&poly, h1, 1.0), h2, -1.0))
                + polygon_area(&clip(&clip(&poly, h1, -1.0), h2, 1.0));
            area / measure.domain().volume()
        }
        (InputDomain::Ball { radius, .. }, MeasureLaw::Uniform) => {
            let poly = rect_poly([-radius, *radius], [-radius, *radius]);
            let area = polygon_disk_area(&clip(&clip(&poly, h1, 1.0), h2, -1.0), *radius)
                + polygon_disk_area(&clip(&clip(&poly, h1, -1.0), h2, 1.0), *radius);
            area / measure.domain().volume()
        }
        (InputDomain::Box { .. }, MeasureLaw::TruncatedGaussian { .. }) => {
            match (axis_form(h1), axis_form(h2)) {
                (Some((ax1, t1, s1)), Some((ax2, t2, s2))) if ax1 == ax2 => {
                    // Both boundaries perpendicular to the same axis: the
                    // disagreement set is the strip between them (same
                    // orientation) or its complement (opposite).
                    let strip = (measure.axis_cdf(ax1, t2) - measure.axis_cdf(ax1, t1)).abs();
                    if s1 == s2 {
                        strip
                    } else {
                        1.0 - strip
                    }
                }
                (Some((ax1, t1, s1)), Some((ax2, t2, s2))) => {
                    // Perpendicular axis-aligned boundaries: the law is a
                    // product on the box, so the events are independent.
                    let pa = half_mass(measure, ax1, t1, s1);
                    let pb = half_mass(measure, ax2, t2, s2);
                    pa * (1.0 - pb) + (1.0 - pa) * pb
                }
                _ => quad_halfplanes(h1, h2, measure, FALLBACK_GRID_RES),
            }
        }
        (InputDomain::Ball { .. }, MeasureLaw::TruncatedGaussian { .. }) => {
            quad_halfplanes(h1, h2, measure, FALLBACK_GRID_RES)
        }
    };
    Ok(value.clamp(0.0, 1.0))
}

/// `h` as an axis-aligned rule `sign * (x_axis - t) > 0`, if it is one.
fn axis_form(h: &HalfPlane) -> Option<(usize, f64, i8)> {
    if h.b == 0.0 {
        Some((0, -h.c / h.a, h.a.signum() as i8))
    } else if h.a == 0.0 {
        Some((1, -h.c / h.b, h.b.signum() as i8))
    } else {
        None
    }
}

/// Mass of `sign * (x_axis - t) > 0` under a product law on a box.
fn half_mass(measure: &InputMeasure, axis: usize, t: f64, sign: i8) -> f64 {
    let below = measure.axis_cdf(axis, t);
    if sign > 0 {
        1.0 - below
    } else {
        below
    }
}

// ======================================================================
// Quadrature
// ======================================================================

/// Midpoint-rule estimate of the disagreement probability of two networks.
///
/// Integrates `density(x) * 1[region_index(w,x) != region_index(w2,x)]` on a
/// `grid_res x grid_res` grid over the domain's bounding box. The density is
/// zero outside the domain, so the bounding box introduces no bias. Rows are
/// evaluated in parallel and reduced in fixed order.
pub fn quad_disagreement(
    w: &NetworkParams,
    w2: &NetworkParams,
    measure: &InputMeasure,
    grid_res: usize,
) -> Result<f64> {
    if w.input_dim() != 2 || w2.input_dim() != 2 || measure.dim() != 2 {
        return Err(Error::Unsupported(
            "quadrature oracle requires a 2-D input space".into(),
        ));
    }
    if w.class_count() != w2.class_count() {
        return Err(Error::DimensionMismatch {
            expected: w.class_count(),
            got: w2.class_count(),
            context: "class counts of compared networks",
        });
    }
    if grid_res < 64 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 64, got {grid_res}"
        )));
    }
    let value = quad_over_grid(measure, grid_res, || {
        let mut ea = Evaluator::new(w);
        let mut eb = Evaluator::new(w2);
        move |p: &[f64; 2]| {
            let ra = region_of(ea.outputs(p));
            let rb = region_of(eb.outputs(p));
            ra != rb
        }
    });
    Ok(value.clamp(0.0, 1.0))
}

/// Region index from raw scores with zero tie tolerance; grid points are
/// generic, so NaN cannot arise from the validated networks used here.
fn region_of(out: &[f64]) -> u32 {
    let mut max = f64::NEG_INFINITY;
    let mut arg = 0usize;
    for (j, &v) in out.iter().enumerate() {
        if v > max {
            max = v;
            arg = j;
        }
    }
    let winners = out.iter().filter(|&&v| v >= max).count();
    if winners > 1 {
        0
    } else {
        arg as u32 + 1
    }
}

fn quad_halfplanes(h1: &HalfPlane, h2: &HalfPlane, measure: &InputMeasure, res: usize) -> f64 {
    let (h1, h2) = (*h1, *h2);
    quad_over_grid(measure, res, move || {
        move |p: &[f64; 2]| {
            let s1 = h1.eval(p[0], p[1]);
            let s2 = h2.eval(p[0], p[1]);
            let r1 = if s1 > 0.0 { 1u32 } else if s1 < 0.0 { 2 } else { 0 };
            let r2 = if s2 > 0.0 { 1u32 } else if s2 < 0.0 { 2 } else { 0 };
            r1 != r2
        }
    })
}

/// Shared midpoint-rule driver: integrates `density * 1[differ(x)]`.
fn quad_over_grid<F, G>(measure: &InputMeasure, res: usize, make_differ: G) -> f64
where
    G: Fn() -> F + Sync,
    F: FnMut(&[f64; 2]) -> bool,
{
    let bb = measure.domain().bounding_box();
    let [x_lo, x_hi] = bb[0];
    let [y_lo, y_hi] = bb[1];
    let hx = (x_hi - x_lo) / res as f64;
    let hy = (y_hi - y_lo) / res as f64;
    let row_sums: Vec<f64> = (0..res)
        .into_par_iter()
        .map_init(|| make_differ(), |differ, i| {
            let x = x_lo + (i as f64 + 0.5) * hx;
            let mut acc = 0.0;
            let mut p = [x, 0.0];
            for j in 0..res {
                p[1] = y_lo + (j as f64 + 0.5) * hy;
                let dens = measure.density_raw(&p);
                if dens > 0.0 && differ(&p) {
                    acc += dens;
                }
            }
            acc
        })
        .collect();
    row_sums.iter().sum::<f64>() * hx * hy
}

// ======================================================================
// Exact geometry
// ======================================================================

type Pt = [f64; 2];

fn rect_poly(x: [f64; 2], y: [f64; 2]) -> Vec<Pt> {
    vec![[x[0], y[0]], [x[1], y[0]], [x[1], y[1]], [x[0], y[1]]]
}

/// Sutherland-Hodgman clip of a convex polygon against
/// `side * (a*x1 + b*x2 + c) >= 0`.
fn clip(poly: &[Pt], h: &HalfPlane, side: f64) -> Vec<Pt> {
    let f = |p: &Pt| side * h.eval(p[0], p[1]);
    let mut out = Vec::with_capacity(poly.len() + 2);
    for (i, q) in poly.iter().enumerate() {
        let p = &poly[(i + poly.len() - 1) % poly.len()];
        let (fp, fq) = (f(p), f(q));
        if fq >= 0.0 {
            if fp < 0.0 {
                out.push(intersect(p, q, fp, fq));
            }
            out.push(*q);
        } else if fp > 0.0 {
            out.push(intersect(p, q, fp, fq));
        }
    }
    out
}

fn intersect(p: &Pt, q: &Pt, fp: f64, fq: f64) -> Pt {
    let t = fp / (fp - fq);
    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
}

/// Shoelace area, orientation-independent.
fn polygon_area(poly: &[Pt]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (i, p) in poly.iter().enumerate() {
        let q = &poly[(i + 1) % poly.len()];
        acc += p[0] * q[1] - p[1] * q[0];
    }
    (acc / 2.0).abs()
}

/// Area of the intersection of a simple polygon with the origin-centered
/// disk of radius `r`.
///
/// Fan decomposition: each directed edge contributes the signed area of the
/// intersection of triangle (origin, p, q) with the disk. Chord parts
/// contribute triangles, parts outside the disk contribute circular sectors.
fn polygon_disk_area(poly: &[Pt], r: f64) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (i, p) in poly.iter().enumerate() {
        let q = &poly[(i + 1) % poly.len()];
        acc += edge_disk_contribution(p, q, r);
    }
    acc.abs()
}

fn cross(u: &Pt, v: &Pt) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn dot(u: &Pt, v: &Pt) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

/// Signed sector area swept from `u` to `v` along the disk boundary.
fn sector(u: &Pt, v: &Pt, r: f64) -> f64 {
    0.5 * r * r * cross(u, v).atan2(dot(u, v))
}

fn edge_disk_contribution(p: &Pt, q: &Pt, r: f64) -> f64 {
    let d = [q[0] - p[0], q[1] - p[1]];
    let dd = dot(&d, &d);
    if dd == 0.0 {
        return 0.0;
    }
    // Solve |p + t d|^2 = r^2 for the interval of t where the segment is
    // inside the disk.
    let pd = dot(p, &d);
    let pp = dot(p, p);
    let disc = pd * pd - dd * (pp - r * r);
    if disc <= 0.0 {
        return sector(p, q, r);
    }
    let sq = disc.sqrt();
    let t_in = ((-pd - sq) / dd).max(0.0);
    let t_out = ((-pd + sq) / dd).min(1.0);
    if t_in >= t_out {
        return sector(p, q, r);
    }
    let a = [p[0] + t_in * d[0], p[1] + t_in * d[1]];
    let b = [p[0] + t_out * d[0], p[1] + t_out * d[1]];
    let mut acc = 0.5 * cross(&a, &b);
    if t_in > 0.0 {
        acc += sector(p, &a, r);
    }
    if t_out < 1.0 {
        acc += sector(&b, q, r);
    }
    acc
}
