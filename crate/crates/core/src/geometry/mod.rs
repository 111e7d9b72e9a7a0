//! The boundary arc as a graph curve, together with chords, arc length,
//! perpendicular feet, and the smallness hypotheses.
//!
//! Everything is expressed in the root frame `R0 = (A, e1, e2)`: the curve is
//! the graph of a strictly concave `f : [0, eta] -> R+` with `f(0) = f(eta) = 0`,
//! the root chord `[AB]` being the segment `[0, eta] x {0}`.

pub mod checks;
pub mod quad;
pub mod root;

use std::sync::Arc as Shared;

use crate::error::{Error, Result};

/// Absolute tolerance for the arc-length quadrature.
pub const ARC_TOL: f64 = 1e-12;
/// Abscissa tolerance for the perpendicular-foot root finder.
pub const ROOT_TOL: f64 = 1e-13;

// ---------------------------------------------------------------------------
// Points, vectors, frames
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (other - self).norm()
    }
}

impl Vector {
    pub fn new(x: f64, y: f64) -> Self {
        Vector { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Vector) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product (signed area spanned with `other`).
    pub fn cross(self, other: Vector) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Vector {
        Vector::new(-self.y, self.x)
    }

    pub fn scale(self, t: f64) -> Vector {
        Vector::new(t * self.x, t * self.y)
    }

    pub fn unit(self) -> Vector {
        let n = self.norm();
        Vector::new(self.x / n, self.y / n)
    }
}

impl std::ops::Sub for Point {
    type Output = Vector;
    fn sub(self, rhs: Point) -> Vector {
        Vector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add<Vector> for Point {
    type Output = Point;
    fn add(self, v: Vector) -> Point {
        Point::new(self.x + v.x, self.y + v.y)
    }
}

impl std::ops::Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        Vector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        Vector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// A direct orthonormal frame (origin, e1, e2).
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub origin: Point,
    pub e1: Vector,
    pub e2: Vector,
}

impl Frame {
    pub fn new(origin: Point, e1: Vector, e2: Vector) -> Result<Self> {
        if (e1.norm() - 1.0).abs() > 1e-12 || (e2.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("frame axes must be unit vectors".into()));
        }
        if e1.dot(e2).abs() > 1e-12 {
            return Err(Error::InvalidInput("frame axes must be orthogonal".into()));
        }
        if e1.cross(e2) < 0.0 {
            return Err(Error::InvalidInput("frame must be direct".into()));
        }
        Ok(Frame { origin, e1, e2 })
    }

    /// The identity frame (world coordinates).
    pub fn identity() -> Self {
        Frame {
            origin: Point::new(0.0, 0.0),
            e1: Vector::new(1.0, 0.0),
            e2: Vector::new(0.0, 1.0),
        }
    }

    pub fn to_world(&self, local: Point) -> Point {
        self.origin + self.e1.scale(local.x) + self.e2.scale(local.y)
    }

    pub fn to_local(&self, world: Point) -> Point {
        let d = world - self.origin;
        Point::new(d.dot(self.e1), d.dot(self.e2))
    }
}

// ---------------------------------------------------------------------------
// Chords
// ---------------------------------------------------------------------------

/// Segment joining two curve points, oriented by increasing abscissa.
#[derive(Clone, Copy, Debug)]
pub struct Chord {
    /// Endpoint abscissas in the root frame, `a < b`.
    pub a: f64,
    pub b: f64,
    /// Curve points over `a` and `b`, root-frame coordinates.
    pub start: Point,
    pub end: Point,
    /// Euclidean length.
    pub len: f64,
}

impl Chord {
    /// Unit direction from `start` to `end`.
    pub fn dir(&self) -> Vector {
        (self.end - self.start).scale(1.0 / self.len)
    }

    /// Unit normal on the curve side (the curve lies above its chords).
    pub fn normal(&self) -> Vector {
        self.dir().perp()
    }

    /// Signed coordinate of `p` along the chord, 0 at `start`.
    pub fn coord_of(&self, p: Point) -> f64 {
        (p - self.start).dot(self.dir())
    }

    /// Point at chord coordinate `s`.
    pub fn at(&self, s: f64) -> Point {
        self.start + self.dir().scale(s)
    }

    /// Whether `p` lies on the chord segment within `tol` (distance to segment).
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let s = self.coord_of(p);
        if s < -tol || s > self.len + tol {
            return false;
        }
        (p - self.at(s)).norm() <= tol
    }
}

// ---------------------------------------------------------------------------
// Curve profiles and the arc
// ---------------------------------------------------------------------------

/// Evaluators of the graph function and its first two derivatives.
pub trait CurveProfile: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn deriv(&self, x: f64) -> f64;
    fn second(&self, x: f64) -> f64;
    fn name(&self) -> &'static str;
}

/// Graph of a circular arc of the given radius, subtending a chord of
/// length `eta`: `f(x) = sqrt(r^2 - (x - eta/2)^2) - sqrt(r^2 - eta^2/4)`.
#[derive(Clone, Debug)]
pub struct CircleProfile {
    pub radius: f64,
    pub eta: f64,
}

impl CurveProfile for CircleProfile {
    fn value(&self, x: f64) -> f64 {
        let c = x - 0.5 * self.eta;
        (self.radius * self.radius - c * c).sqrt()
            - (self.radius * self.radius - 0.25 * self.eta * self.eta).sqrt()
    }

    fn deriv(&self, x: f64) -> f64 {
        let c = x - 0.5 * self.eta;
        -c / (self.radius * self.radius - c * c).sqrt()
    }

    fn second(&self, x: f64) -> f64 {
        let c = x - 0.5 * self.eta;
        let s = self.radius * self.radius - c * c;
        -self.radius * self.radius / (s * s.sqrt())
    }

    fn name(&self) -> &'static str {
        "circle"
    }
}

/// `f(x) = x (eta - x)`; constant curvature of the graph function.
#[derive(Clone, Debug)]
pub struct ParabolaProfile {
    pub eta: f64,
}

impl CurveProfile for ParabolaProfile {
    fn value(&self, x: f64) -> f64 {
        x * (self.eta - x)
    }

    fn deriv(&self, x: f64) -> f64 {
        self.eta - 2.0 * x
    }

    fn second(&self, _x: f64) -> f64 {
        -2.0
    }

    fn name(&self) -> &'static str {
        "parabola"
    }
}

/// Result of checking the smallness hypotheses on the curve.
///
/// `main_ok` is the chord-replacement condition
/// `eta < min{1/2, 1/(16 sup|f''|^2), 1/(2 sup|f'| sup|f''|)}`;
/// `cap_ok` is `1 + 4 sup|f''|^2 diam(cap) < 16/9`;
/// `strict_ok` is the stricter triangle-separation condition
/// `eta < min{1/2, (4 sup|f''|^2)^{-2}, 1/(16 sup|f''|^2)}`.
///
/// The separation estimate comes in two non-equivalent forms, with the
/// `(4 sup|f''|^2)^{-2}` bound on one hand and `1/(16 sup|f''|^2)` on the
/// other; the two coincide only when
/// `sup|f''| = 1`, so `strict_ok` enforces the minimum of both and downstream
/// reports record the discrepancy rather than resolve it.
#[derive(Clone, Copy, Debug)]
pub struct HypothesesReport {
    pub eta: f64,
    pub sup_fp: f64,
    pub sup_fpp: f64,
    pub cap_diameter: f64,
    pub main_bound: f64,
    pub main_ok: bool,
    pub cap_value: f64,
    pub cap_ok: bool,
    pub strict_bound: f64,
    pub strict_ok: bool,
    /// Whether the sup norms were supplied analytically (vs sampled).
    pub certified: bool,
}

impl HypothesesReport {
    pub fn all_ok(&self) -> bool {
        self.main_ok && self.cap_ok && self.strict_ok
    }
}

/// The concave boundary arc: graph of `f` over `[0, eta]` in the root frame.
#[derive(Clone)]
pub struct ConcaveArc {
    eta: f64,
    profile: Shared<dyn CurveProfile>,
    sup_fp: f64,
    sup_fpp: f64,
    certified: bool,
    frame: Frame,
    hypotheses: HypothesesReport,
}

impl ConcaveArc {
    /// Builds and validates an arc. `sup_norms = Some((sup|f'|, sup|f''|))`
    /// marks the bounds as certified; with `None` they are estimated by dense
    /// sampling with a 1.001 safety factor and flagged as uncertified.
    pub fn new(
        profile: Shared<dyn CurveProfile>,
        eta: f64,
        frame: Frame,
        sup_norms: Option<(f64, f64)>,
    ) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidCurve("eta must be positive and finite".into()));
        }
        if profile.value(0.0).abs() > 1e-12 || profile.value(eta).abs() > 1e-12 {
            return Err(Error::InvalidCurve("f must vanish at 0 and eta".into()));
        }

        const SAMPLES: usize = 100_000;
        let mut max_fp: f64 = 0.0;
        let mut max_fpp: f64 = 0.0;
        for i in 0..=SAMPLES {
            let x = eta * (i as f64) / (SAMPLES as f64);
            let v = profile.value(x);
            let fpp = profile.second(x);
            if i > 0 && i < SAMPLES && !(v > 0.0) {
                return Err(Error::InvalidCurve(format!(
                    "f must be positive inside (0, eta); f({x}) = {v}"
                )));
            }
            if !(fpp < 0.0) {
                return Err(Error::InvalidCurve(format!(
                    "f'' must be negative on [0, eta]; f''({x}) = {fpp}"
                )));
            }
            max_fp = max_fp.max(profile.deriv(x).abs());
            max_fpp = max_fpp.max(fpp.abs());
        }

        let (sup_fp, sup_fpp, certified) = match sup_norms {
            Some((fp, fpp)) => {
                if fp < max_fp || fpp < max_fpp {
                    return Err(Error::InvalidCurve(format!(
                        "supplied sup norms ({fp}, {fpp}) below sampled maxima ({max_fp}, {max_fpp})"
                    )));
                }
                (fp, fpp, true)
            }
            None => (max_fp * 1.001, max_fpp * 1.001, false),
        };

        let mut arc = ConcaveArc {
            eta,
            profile,
            sup_fp,
            sup_fpp,
            certified,
            frame,
            // placeholder, replaced below once the cap diameter is known
            hypotheses: HypothesesReport {
                eta,
                sup_fp,
                sup_fpp,
                cap_diameter: 0.0,
                main_bound: 0.0,
                main_ok: false,
                cap_value: 0.0,
                cap_ok: false,
                strict_bound: 0.0,
                strict_ok: false,
                certified,
            },
        };
        let cap_diameter = arc.cap_diameter();
        arc.hypotheses = arc.compute_hypotheses(cap_diameter);
        Ok(arc)
    }

    /// The default scenario: unit disc, circular graph arc with `eta = 0.05`.
    /// The root frame places `A = (-eta/2, sqrt(1 - eta^2/4))` in disc
    /// coordinates, so the chord is horizontal and the arc lies above it.
    pub fn circle_default() -> (ConcaveArc, CircleBoundary) {
        let eta = 0.05_f64;
        let yc = (1.0 - 0.25 * eta * eta).sqrt();
        let frame = Frame::new(
            Point::new(-0.5 * eta, yc),
            Vector::new(1.0, 0.0),
            Vector::new(0.0, 1.0),
        )
        .expect("identity-aligned frame");
        let sup_fp = (0.5 * eta) / yc;
        let sup_fpp = 1.0 / (yc * yc * yc);
        let arc = ConcaveArc::new(
            Shared::new(CircleProfile { radius: 1.0, eta }),
            eta,
            frame,
            Some((sup_fp, sup_fpp)),
        )
        .expect("default scenario is valid");
        let boundary = CircleBoundary {
            center: Point::new(0.5 * eta, -yc),
            radius: 1.0,
            band: 0.5,
        };
        (arc, boundary)
    }

    /// Parabolic arc `f(x) = x (eta - x)` with analytic sup norms.
    pub fn parabola(eta: f64) -> Result<ConcaveArc> {
        ConcaveArc::new(
            Shared::new(ParabolaProfile { eta }),
            eta,
            Frame::identity(),
            Some((eta, 2.0)),
        )
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn sup_fp(&self) -> f64 {
        self.sup_fp
    }

    pub fn sup_fpp(&self) -> f64 {
        self.sup_fpp
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn profile_name(&self) -> &'static str {
        self.profile.name()
    }

    pub fn f(&self, x: f64) -> f64 {
        self.profile.value(x)
    }

    pub fn fp(&self, x: f64) -> f64 {
        self.profile.deriv(x)
    }

    pub fn fpp(&self, x: f64) -> f64 {
        self.profile.second(x)
    }

    /// Curve point over abscissa `x`, root-frame coordinates.
    pub fn point_at(&self, x: f64) -> Point {
        Point::new(x, self.profile.value(x))
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !(0.0..=self.eta).contains(&x) || !x.is_finite() {
            return Err(Error::OutOfDomain {
                value: x,
                eta: self.eta,
            });
        }
        Ok(())
    }

    /// `H^1` of the arc between abscissas `a <= b`, absolute tolerance 1e-12.
    pub fn arc_length(&self, a: f64, b: f64) -> Result<f64> {
        self.check_domain(a)?;
        self.check_domain(b)?;
        if a > b {
            return Err(Error::InvalidInput(format!("arc_length needs a <= b, got {a} > {b}")));
        }
        if a == b {
            return Ok(0.0);
        }
        let integrand = |x: f64| {
            let d = self.profile.deriv(x);
            (1.0 + d * d).sqrt()
        };
        quad::adaptive_simpson(&integrand, a, b, ARC_TOL)
    }

    /// Chord joining the curve points over `a < b`.
    pub fn chord(&self, a: f64, b: f64) -> Result<Chord> {
        self.check_domain(a)?;
        self.check_domain(b)?;
        if !(a < b) {
            return Err(Error::InvalidInput(format!("chord needs a < b, got {a}, {b}")));
        }
        let start = self.point_at(a);
        let end = self.point_at(b);
        Ok(Chord {
            a,
            b,
            start,
            end,
            len: start.dist(end),
        })
    }

    /// The root chord `[AB]`.
    pub fn root_chord(&self) -> Chord {
        self.chord(0.0, self.eta).expect("root chord")
    }

    /// Unique point where the line through `m`, orthogonal to `chord`, meets
    /// the arc between the chord endpoints. Requires validated hypotheses
    /// (which guarantee existence and uniqueness of the intersection).
    pub fn perpendicular_intersection(&self, chord: &Chord, m: Point) -> Result<Point> {
        if !self.hypotheses.main_ok {
            return Err(Error::HypothesesFailed(
                "perpendicular feet need the chord-replacement condition".into(),
            ));
        }
        if !chord.contains(m, 1e-12) {
            return Err(Error::InvalidInput("m must lie on the chord".into()));
        }
        let u = chord.dir();
        // P(x) lies on the perpendicular through m iff its chord coordinate
        // equals m's: g(x) = (P(x) - m) . u = 0. Under the hypotheses g is
        // strictly increasing on [a, b], so the root is unique.
        let g = |x: f64| (self.point_at(x) - m).dot(u);
        let gp = |x: f64| u.x + self.profile.deriv(x) * u.y;
        // Monotonicity makes endpoint clamping sound: when rounding pushes
        // the root a few ulps outside [a, b] (m at a chord endpoint), the
        // intersection is the endpoint itself.
        if g(chord.a) >= 0.0 {
            return Ok(self.point_at(chord.a));
        }
        if g(chord.b) <= 0.0 {
            return Ok(self.point_at(chord.b));
        }
        let x = root::bisect_then_newton(&g, &gp, chord.a, chord.b, ROOT_TOL)?;
        Ok(self.point_at(x))
    }

    /// Sampled sup norms of `|f'|`, `|f''|` on a subinterval.
    pub fn sup_on_interval(&self, a: f64, b: f64, samples: usize) -> (f64, f64) {
        let mut fp: f64 = 0.0;
        let mut fpp: f64 = 0.0;
        for i in 0..=samples {
            let x = a + (b - a) * (i as f64) / (samples as f64);
            fp = fp.max(self.profile.deriv(x).abs());
            fpp = fpp.max(self.profile.second(x).abs());
        }
        (fp, fpp)
    }

    /// Diameter of the root cap (region between the arc and the root chord).
    /// The cap is convex (concave graph over a segment), so the diameter is
    /// attained between boundary points; dense sampling suffices.
    pub fn cap_diameter(&self) -> f64 {
        const M: usize = 512;
        let mut pts = Vec::with_capacity(M + 1);
        for i in 0..=M {
            let x = self.eta * (i as f64) / (M as f64);
            pts.push(self.point_at(x));
        }
        let mut best: f64 = 0.0;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                best = best.max(pts[i].dist(pts[j]));
            }
        }
        best
    }

    fn compute_hypotheses(&self, cap_diameter: f64) -> HypothesesReport {
        let fp = self.sup_fp;
        let fpp = self.sup_fpp;
        let main_bound = (0.5_f64)
            .min(1.0 / (16.0 * fpp * fpp))
            .min(1.0 / (2.0 * fp * fpp));
        let cap_value = 1.0 + 4.0 * fpp * fpp * cap_diameter;
        let strict_bound = (0.5_f64)
            .min((4.0 * fpp * fpp).powi(-2))
            .min(1.0 / (16.0 * fpp * fpp));
        HypothesesReport {
            eta: self.eta,
            sup_fp: fp,
            sup_fpp: fpp,
            cap_diameter,
            main_bound,
            main_ok: self.eta < main_bound,
            cap_value,
            cap_ok: cap_value < 16.0 / 9.0,
            strict_bound,
            strict_ok: self.eta < strict_bound,
            certified: self.certified,
        }
    }

    /// The smallness hypotheses, checked at construction.
    pub fn hypotheses(&self) -> &HypothesesReport {
        &self.hypotheses
    }
}

// ---------------------------------------------------------------------------
// The disc boundary
// ---------------------------------------------------------------------------

/// Circular domain boundary, coordinates in the curve's root frame.
/// Orthogonal projection and outward normal are exact.
#[derive(Clone, Copy, Debug)]
pub struct CircleBoundary {
    pub center: Point,
    pub radius: f64,
    /// Width of the tubular band on which the projection is used.
    pub band: f64,
}

impl CircleBoundary {
    pub fn project(&self, p: Point) -> Result<Point> {
        let d = p - self.center;
        let n = d.norm();
        if n == 0.0 {
            return Err(Error::InvalidInput("projection undefined at the center".into()));
        }
        Ok(self.center + d.scale(self.radius / n))
    }

    pub fn outward_normal(&self, p: Point) -> Result<Vector> {
        let d = p - self.center;
        if d.norm() == 0.0 {
            return Err(Error::InvalidInput("normal undefined at the center".into()));
        }
        Ok(d.unit())
    }

    /// Distance to the boundary, positive inside.
    pub fn inner_distance(&self, p: Point) -> f64 {
        self.radius - (p - self.center).norm()
    }

    pub fn contains(&self, p: Point) -> bool {
        (p - self.center).norm() <= self.radius
    }
}
