//! Relative boundedness of a relation S against a relation T.
//!
//! Everything is computed on a common orthonormal basis of D(T) (the
//! precondition D(T) subset of D(S) is checked first), where |x| equals the
//! coordinate norm and |T(x)|, |S(x)| are realized by the single-valued-part
//! matrices Mt and Ms. Three bound forms are supported:
//!
//! - the pure bound: the least b with |S(x)| <= b |T(x)|,
//! - the quadratic form: the least b' with
//!   |S(x)|^2 <= a'^2 |x|^2 + b'^2 |T(x)|^2, exact via a Hermitian pencil,
//! - the mixed form: the least b with |S(x)| <= a |x| + b |T(x)|, evaluated
//!   along a grid of a values as a certified upper bound paired with a
//!   sampled lower bound.
//!
//! The mixed form has no closed-form solution. The upper bound takes the
//! smaller of two certificates: the quadratic-form value (valid since
//! sqrt(a^2|x|^2 + b^2|Tx|^2) <= a|x| + b|Tx|), and an outer polyhedral
//! approximation of the joint range
//! Omega = { (|Ms c|^2, |Mt c|^2) : |c| = 1 },
//! which is a convex planar set; each multiplier mu >= 0 contributes the
//! supporting half-plane p <= lambda_max(Ms^H Ms - mu Mt^H Mt) + mu q. The
//! lower bound evaluates genuine witness vectors: the extremal eigenvectors
//! of the same pencil sweep plus random unit vectors polished by projected
//! gradient ascent.

use crate::quotient::SingleValuedPart;
use crate::relation::{Relation, RelationError};
use crate::subspace::{nullspace, Matrix, RankScale, Scalar, SetRelation, Vector};
use nalgebra::linalg::SymmetricEigen;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("relations live on different spaces: C^{left} vs C^{right}")]
    SpaceDimMismatch { left: usize, right: usize },
    #[error("D(T) is not contained in D(S)")]
    DomainNotContained,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// One grid entry of the mixed-form bound curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub a: f64,
    /// Certified upper bound on b_min(a).
    pub b_certified: f64,
    /// Largest witnessed lower bound on b_min(a).
    pub b_sampled: f64,
}

/// Result of a relative-bound computation.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// Least b in |S(x)| <= b |T(x)|; infinite when T annihilates a
    /// direction S does not.
    pub pure_b: f64,
    /// Mixed-form bound per grid value of a; both columns are
    /// non-increasing in a.
    pub curve: Vec<CurvePoint>,
    /// Infimum of achievable b over all a. With D(T) contained in D(S) on a
    /// finite-dimensional space S is always T-bounded with bound 0: any
    /// a >= |S restricted to D(T)| admits b = 0.
    pub t_bound: f64,
    /// Quadratic-form bound (a', b') evaluated at a' = 0.
    pub quadratic: Option<(f64, f64)>,
}

/// Single-valued parts of S and T restricted to a common basis of D(T).
struct RestrictedPair {
    mt: Matrix,
    ms: Matrix,
    k: usize,
    rank_tol: f64,
    angle_tol: f64,
}

fn sigma_max(m: &Matrix) -> f64 {
    crate::numeric::sigma_max(m)
}

fn hermitian_part(m: &Matrix) -> Matrix {
    (m + m.adjoint()).scale(0.5)
}

fn lambda_max(h: &Matrix) -> f64 {
    if h.nrows() == 0 {
        return f64::NEG_INFINITY;
    }
    SymmetricEigen::new(hermitian_part(h))
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
}

fn lambda_range(h: &Matrix) -> (f64, f64) {
    if h.nrows() == 0 {
        return (0.0, 0.0);
    }
    let eig = SymmetricEigen::new(hermitian_part(h));
    let lo = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let hi = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn restricted_pair(s: &Relation, t: &Relation) -> Result<RestrictedPair, BoundError> {
    if s.space_dim() != t.space_dim() {
        return Err(BoundError::SpaceDimMismatch {
            left: s.space_dim(),
            right: t.space_dim(),
        });
    }
    let dom_t = t.components().domain;
    let dom_s = s.components().domain;
    let contained = matches!(
        dom_t
            .compare(&dom_s)
            .expect("same ambient dimension")
            .relation,
        SetRelation::Equal | SetRelation::LeftInRight
    );
    if !contained {
        return Err(BoundError::DomainNotContained);
    }
    let svp_t = SingleValuedPart::on_domain(t, &dom_t)?;
    let svp_s = SingleValuedPart::on_domain(s, &dom_t)?;
    Ok(RestrictedPair {
        k: dom_t.dim(),
        mt: svp_t.matrix().clone(),
        ms: svp_s.matrix().clone(),
        rank_tol: t.tol().rank_rel_tol,
        angle_tol: t.tol().angle_tol,
    })
}

/// Kernel of Mt inside D(T)-coordinates, and how strongly S acts on it.
struct KernelInfo {
    has_kernel: bool,
    /// sigma_max of Ms restricted to the kernel of Mt; 0 without a kernel.
    null_gain: f64,
}

impl RestrictedPair {
    fn tol(&self) -> crate::tol::TolerancePolicy {
        crate::tol::TolerancePolicy {
            rank_rel_tol: self.rank_tol,
            angle_tol: self.angle_tol,
        }
    }

    fn kernel_info(&self) -> KernelInfo {
        if self.k == 0 {
            return KernelInfo {
                has_kernel: false,
                null_gain: 0.0,
            };
        }
        let null = nullspace(&self.mt, self.tol(), RankScale::Relative);
        if null.is_zero() {
            KernelInfo {
                has_kernel: false,
                null_gain: 0.0,
            }
        } else {
            KernelInfo {
                has_kernel: true,
                null_gain: sigma_max(&(&self.ms * null.basis())),
            }
        }
    }

    /// Whether `gain` counts as a genuinely nonzero action of S.
    fn gain_is_nonzero(&self, gain: f64) -> bool {
        gain > self.rank_tol * sigma_max(&self.ms).max(1.0)
    }
}

/// Least b >= 0 with |S(x)| <= b |T(x)| on D(T); +infinity when some
/// direction has T(x) ~ 0 but S(x) != 0. Requires D(T) contained in D(S).
pub fn pure_relative_bound(s: &Relation, t: &Relation) -> Result<f64, BoundError> {
    let pair = restricted_pair(s, t)?;
    if pair.k == 0 {
        return Ok(0.0);
    }
    let kernel = pair.kernel_info();
    if kernel.has_kernel && pair.gain_is_nonzero(kernel.null_gain) {
        return Ok(f64::INFINITY);
    }
    let coimage = nullspace(&pair.mt, pair.tol(), RankScale::Relative).complement();
    if coimage.is_zero() {
        return Ok(0.0);
    }
    let bt = &pair.mt * coimage.basis();
    let bs = &pair.ms * coimage.basis();
    // on the coimage Mt has full column rank: with Mt V = Q R the ratio
    // |Ms V d| / |Mt V d| becomes |(Ms V R^-1) e| / |e|
    let qr = bt.qr();
    let r_inv = qr.r().try_inverse().ok_or_else(|| {
        BoundError::InvalidParameter("rank decision produced a singular factor".into())
    })?;
    Ok(sigma_max(&(bs * r_inv)))
}

/// Least tau >= 0 with Ms^H Ms - a^2 I - tau Mt^H Mt negative semidefinite,
/// or +infinity when no tau works (S exceeds a on the kernel of Mt).
/// This is exactly b'^2 for the quadratic form at a' = a.
fn min_quadratic_multiplier(pair: &RestrictedPair, a: f64, kernel: &KernelInfo) -> f64 {
    let k = pair.k;
    if k == 0 {
        return 0.0;
    }
    let gram_s = pair.ms.adjoint() * &pair.ms;
    let gram_t = pair.mt.adjoint() * &pair.mt;
    let shifted = &gram_s - Matrix::identity(k, k).scale(a * a);

    if !kernel.has_kernel {
        // definite pencil: tau* = lambda_max(R^-H (Ms^H Ms - a^2 I) R^-1)
        let qr = pair.mt.clone().qr();
        return match qr.r().try_inverse() {
            Some(r_inv) => lambda_max(&(r_inv.adjoint() * &shifted * &r_inv)).max(0.0),
            None => f64::INFINITY,
        };
    }

    let kernel_excess = kernel.null_gain * kernel.null_gain - a * a;
    let feas_floor = pair.rank_tol * (1.0 + a * a + kernel.null_gain * kernel.null_gain);
    if kernel_excess > feas_floor {
        return f64::INFINITY;
    }
    // the map tau -> lambda_max(shifted - tau gram_t) is convex and
    // non-increasing, so the feasible taus form a ray: bisect onto its tip.
    // Feasibility is decided up to the eigensolver noise floor, which keeps
    // boundary instances (kernel action exactly equal to a) finite.
    let noise_floor = 1e-12 * (lambda_max(&gram_s).max(0.0) + a * a).max(1e-300);
    let feasible =
        |tau: f64| lambda_max(&(&shifted - &gram_t * Scalar::new(tau, 0.0))) <= noise_floor;
    if feasible(0.0) {
        return 0.0;
    }
    let mut hi = 1.0f64.max(lambda_max(&shifted));
    let cap = 1e30;
    while !feasible(hi) {
        hi *= 2.0;
        if hi > cap {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

/// Least b' >= 0 with |S(x)|^2 <= a'^2 |x|^2 + b'^2 |T(x)|^2 on D(T).
/// Exact (no grid): the quadratic form linearizes into a Hermitian pencil.
/// +infinity when T is degenerate in a direction where |S(x)| exceeds a'|x|.
pub fn quadratic_bound(s: &Relation, t: &Relation, a_prime: f64) -> Result<f64, BoundError> {
    if !(a_prime >= 0.0 && a_prime.is_finite()) {
        return Err(BoundError::InvalidParameter(format!(
            "a' must be finite and nonnegative, got {a_prime}"
        )));
    }
    let pair = restricted_pair(s, t)?;
    let kernel = pair.kernel_info();
    Ok(min_quadratic_multiplier(&pair, a_prime, &kernel).sqrt())
}

/// Conversion of a linear-form witness (a, b) into a quadratic-form
/// witness: a'^2 = (1 + 1/eps) a^2, b'^2 = (1 + eps) b^2 for any eps > 0.
pub fn convert_bounds(a: f64, b: f64, eps: f64) -> Result<(f64, f64), BoundError> {
    for (name, v) in [("a", a), ("b", b)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(BoundError::InvalidParameter(format!(
                "{name} must be finite and nonnegative, got {v}"
            )));
        }
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(BoundError::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(((1.0 + eps.recip()).sqrt() * a, (1.0 + eps).sqrt() * b))
}

/// Reverse direction: a quadratic-form witness (a', b') is already a
/// linear-form witness with a = a', b = b'.
pub fn quadratic_to_linear(a_prime: f64, b_prime: f64) -> (f64, f64) {
    (a_prime, b_prime)
}

/// Supporting line p <= ell + mu q of the joint range, from multiplier mu.
#[derive(Debug, Clone, Copy)]
struct SupportLine {
    mu: f64,
    ell: f64,
}

/// A witnessed point (p, q) = (|Ms c|^2, |Mt c|^2) for some unit c.
#[derive(Debug, Clone, Copy)]
struct RangeSample {
    p: f64,
    q: f64,
}

/// The b needed at this witness for mixed-form parameter a:
/// (sqrt(p) - a)+ / sqrt(q).
fn sample_ratio(sample: RangeSample, a: f64, q_floor: f64) -> f64 {
    let excess = sample.p.max(0.0).sqrt() - a;
    if excess <= 0.0 {
        return 0.0;
    }
    if sample.q <= q_floor {
        return f64::INFINITY;
    }
    excess / sample.q.sqrt()
}

struct EnvelopeData {
    lines: Vec<SupportLine>,
    samples: Vec<RangeSample>,
    gram_s: Matrix,
    gram_t: Matrix,
    q_lo: f64,
    q_hi: f64,
}

impl EnvelopeData {
    fn new(pair: &RestrictedPair) -> Self {
        let gram_s = hermitian_part(&(pair.ms.adjoint() * &pair.ms));
        let gram_t = hermitian_part(&(pair.mt.adjoint() * &pair.mt));
        let (q_lo, q_hi) = lambda_range(&gram_t);
        Self {
            lines: Vec::new(),
            samples: Vec::new(),
            gram_s,
            gram_t,
            q_lo: q_lo.max(0.0),
            q_hi: q_hi.max(0.0),
        }
    }

    /// Evaluate the pencil at mu: record the supporting line and the
    /// extremal eigenvector as a witnessed sample. Returns the sample.
    fn probe(&mut self, mu: f64) -> RangeSample {
        let pencil = &self.gram_s - &self.gram_t * Scalar::new(mu, 0.0);
        let eig = SymmetricEigen::new(hermitian_part(&pencil));
        let (mut best, mut ell) = (0usize, f64::NEG_INFINITY);
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            if l > ell {
                ell = l;
                best = i;
            }
        }
        self.lines.push(SupportLine { mu, ell });
        let u = eig.eigenvectors.column(best).into_owned();
        let p = (u.adjoint() * &self.gram_s * &u)[(0, 0)].re.max(0.0);
        let q = (u.adjoint() * &self.gram_t * &u)[(0, 0)].re.max(0.0);
        let sample = RangeSample { p, q };
        self.samples.push(sample);
        sample
    }

    fn record_vector(&mut self, pair: &RestrictedPair, c: &Vector) {
        let norm = c.norm();
        if norm < 1e-14 {
            return;
        }
        let unit = c.unscale(norm);
        let p = (&pair.ms * &unit).norm_squared();
        let q = (&pair.mt * &unit).norm_squared();
        self.samples.push(RangeSample { p, q });
    }

    /// Certified upper bound on sup (sqrt(p) - a)+ / sqrt(q) over the
    /// polyhedral outer approximation cut out by the recorded lines.
    ///
    /// Writing h(q) = min_j (ell_j + mu_j q) for the lower envelope, the
    /// target is max over q in [q_lo, q_hi] of (sqrt(h(q)) - a)+ / sqrt(q).
    /// On each linear piece of h the derivative sign of the objective is
    /// that of (a sqrt(h) - ell), which changes at most once and only from
    /// negative to positive: pieces carry interior minima, never maxima, so
    /// the maximum sits at an envelope vertex or an interval endpoint.
    fn certificate(&self, a: f64) -> f64 {
        assert!(!self.lines.is_empty());
        let h_at = |q: f64| {
            self.lines
                .iter()
                .map(|l| l.ell + l.mu * q)
                .fold(f64::INFINITY, f64::min)
        };
        let value_at = |q: f64| {
            if q <= 0.0 {
                // limit q -> 0+: infinite when the zero-slice cap exceeds a^2
                return if h_at(0.0) > a * a {
                    f64::INFINITY
                } else {
                    0.0
                };
            }
            let h = h_at(q).max(0.0);
            ((h.sqrt() - a).max(0.0)) / q.sqrt()
        };

        let mut best = value_at(self.q_lo).max(value_at(self.q_hi));
        for &q in &self.envelope_vertices() {
            if q > self.q_lo && q < self.q_hi {
                best = best.max(value_at(q));
            }
        }
        best
    }

    /// Breakpoints of the lower envelope of the recorded lines, by the
    /// convex-hull trick: slopes descending, a stacked line is dropped when
    /// the incoming shallower line overtakes it before its own start.
    fn envelope_vertices(&self) -> Vec<f64> {
        // per slope, only the lowest intercept can ever be active
        let mut sorted: Vec<SupportLine> = self.lines.clone();
        sorted.sort_by(|a, b| {
            b.mu.partial_cmp(&a.mu)
                .unwrap()
                .then(a.ell.partial_cmp(&b.ell).unwrap())
        });
        sorted.dedup_by(|next, kept| (next.mu - kept.mu).abs() <= f64::EPSILON * kept.mu.abs());

        // stack of (line, q where it becomes active), slopes descending
        let mut stack: Vec<(SupportLine, f64)> = Vec::new();
        for line in sorted {
            let mut start = f64::NEG_INFINITY;
            while let Some(&(top, top_start)) = stack.last() {
                // slopes strictly decrease down the stack, so top.mu > line.mu
                let cross = (line.ell - top.ell) / (top.mu - line.mu);
                if cross <= top_start {
                    stack.pop();
                } else {
                    start = cross;
                    break;
                }
            }
            stack.push((line, start));
        }
        stack
            .iter()
            .map(|&(_, start)| start)
            .filter(|q| q.is_finite())
            .collect()
    }

    fn sampled(&self, a: f64) -> f64 {
        let q_floor = 1e-26 * self.q_hi.max(1.0);
        self.samples
            .iter()
            .map(|&s| sample_ratio(s, a, q_floor))
            .fold(0.0f64, f64::max)
    }
}

fn random_unit(rng: &mut ChaCha8Rng, k: usize) -> Vector {
    loop {
        let v = Vector::from_fn(k, |_, _| {
            Scalar::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = v.norm();
        if n > 1e-6 {
            return v.unscale(n);
        }
    }
}

/// Projected gradient ascent on (|Ms c| - a |c|) / |Mt c| over the unit
/// sphere, starting from c.
fn polish_sample(pair: &RestrictedPair, a: f64, mut c: Vector, steps: usize) -> Vector {
    let objective = |c: &Vector| {
        let num = (&pair.ms * c).norm() - a * c.norm();
        let den = (&pair.mt * c).norm();
        if den < 1e-14 {
            return if num > 0.0 { f64::INFINITY } else { 0.0 };
        }
        num / den
    };
    let mut value = objective(&c);
    let mut step = 0.5f64;
    for _ in 0..steps {
        if !value.is_finite() {
            break;
        }
        let sc = &pair.ms * &c;
        let tc = &pair.mt * &c;
        let (ns, nt) = (sc.norm().max(1e-14), tc.norm().max(1e-14));
        let grad = (pair.ms.adjoint() * sc.unscale(ns) - c.scale(a)).unscale(nt)
            - (pair.mt.adjoint() * tc).scale(value.max(0.0) / (nt * nt));
        let trial = &c + grad.scale(step);
        let tn = trial.norm();
        if tn < 1e-14 {
            break;
        }
        let trial = trial.unscale(tn);
        let trial_value = objective(&trial);
        if trial_value > value {
            c = trial;
            value = trial_value;
            step *= 1.5;
        } else {
            step *= 0.5;
            if step < 1e-10 {
                break;
            }
        }
    }
    c
}

/// Default geometric grid of a values: zero followed by 31 points covering
/// the singular-value range of S on D(T).
pub fn default_a_grid(s: &Relation, t: &Relation) -> Result<Vec<f64>, BoundError> {
    let pair = restricted_pair(s, t)?;
    let hi = sigma_max(&pair.ms);
    if hi <= 0.0 || pair.k == 0 {
        return Ok(vec![0.0]);
    }
    let smin_pos = crate::numeric::singular_values_squared(&pair.ms)
        .iter()
        .map(|&x| x.sqrt())
        .filter(|&x| x > pair.rank_tol * hi)
        .fold(f64::INFINITY, f64::min);
    let lo = if smin_pos.is_finite() {
        (smin_pos * 0.5).min(hi / 2.0)
    } else {
        hi * 1e-3
    };
    let count = 31usize;
    let mut grid = vec![0.0];
    let ratio = (hi / lo).powf(1.0 / (count as f64 - 1.0));
    let mut value = lo;
    for _ in 0..count {
        grid.push(value.min(hi));
        value *= ratio;
    }
    grid.dedup_by(|x, y| (*x - *y).abs() < 1e-15 * hi);
    Ok(grid)
}

/// Mixed-form bound curve over `a_grid`: per grid point a certified upper
/// bound and a witnessed lower bound for b_min(a). Reproducible for a fixed
/// `seed`.
pub fn bound_curve(
    s: &Relation,
    t: &Relation,
    a_grid: &[f64],
    seed: u64,
) -> Result<BoundReport, BoundError> {
    for w in a_grid.windows(2) {
        if w[1] < w[0] {
            return Err(BoundError::InvalidParameter(
                "a grid must be ascending".into(),
            ));
        }
    }
    if a_grid.iter().any(|&a| !(a >= 0.0 && a.is_finite())) {
        return Err(BoundError::InvalidParameter(
            "a grid must be finite and nonnegative".into(),
        ));
    }
    let pair = restricted_pair(s, t)?;
    let pure_b = pure_relative_bound(s, t)?;
    let kernel = pair.kernel_info();
    let quad_zero = min_quadratic_multiplier(&pair, 0.0, &kernel).sqrt();

    if pair.k == 0 {
        let curve = a_grid
            .iter()
            .map(|&a| CurvePoint {
                a,
                b_certified: 0.0,
                b_sampled: 0.0,
            })
            .collect();
        return Ok(BoundReport {
            pure_b,
            curve,
            t_bound: 0.0,
            quadratic: Some((0.0, quad_zero)),
        });
    }

    let mut env = EnvelopeData::new(&pair);
    // coarse multiplier sweep; a kernel pushes the sweep further out so the
    // zero-slice cap min_j ell_j tightens toward sigma_max(Ms on ker Mt)^2
    let scale = lambda_max(&env.gram_s).max(1e-12) / env.q_hi.max(1e-12);
    let (lo_fac, hi_fac, count) = if kernel.has_kernel {
        (1e-6, 1e9, 220usize)
    } else {
        (1e-6, 1e6, 180usize)
    };
    env.probe(0.0);
    let mu_lo = scale * lo_fac;
    let mu_hi = scale * hi_fac;
    let ratio = (mu_hi / mu_lo).powf(1.0 / (count as f64 - 1.0));
    let mut mu = mu_lo;
    for _ in 0..count {
        env.probe(mu);
        mu *= ratio;
    }

    // per-a refinement: golden-section on mu around the best coarse sample,
    // plus random sphere samples polished by ascent; every evaluation feeds
    // the shared pools, so certificates and witnesses only improve and both
    // curve columns stay monotone in a
    let golden = 0.5 * (5.0f64.sqrt() - 1.0);
    for (idx, &a) in a_grid.iter().enumerate() {
        let center = env
            .lines
            .iter()
            .zip(env.samples.iter())
            .max_by(|(_, x), (_, y)| {
                sample_ratio(**x, a, 0.0)
                    .partial_cmp(&sample_ratio(**y, a, 0.0))
                    .unwrap()
            })
            .map(|(l, _)| l.mu)
            .unwrap();
        let mut lo = (center / ratio.powi(2)).max(0.0);
        let mut hi = center * ratio.powi(2);
        if !hi.is_finite() || hi <= lo {
            hi = lo + 1.0;
        }
        let mut x1 = hi - golden * (hi - lo);
        let mut x2 = lo + golden * (hi - lo);
        let mut f1 = sample_ratio(env.probe(x1), a, 0.0);
        let mut f2 = sample_ratio(env.probe(x2), a, 0.0);
        for _ in 0..36 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = sample_ratio(env.probe(x2), a, 0.0);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = sample_ratio(env.probe(x1), a, 0.0);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(idx as u64));
        let sphere_count = (10 * (2 * pair.k) * (2 * pair.k)).min(2000);
        for i in 0..sphere_count {
            let c = random_unit(&mut rng, pair.k);
            if i % 16 == 0 {
                let polished = polish_sample(&pair, a, c.clone(), 40);
                env.record_vector(&pair, &polished);
            }
            env.record_vector(&pair, &c);
        }
    }

    let curve: Vec<CurvePoint> = a_grid
        .iter()
        .map(|&a| {
            let cert_quad = min_quadratic_multiplier(&pair, a, &kernel).sqrt();
            let cert_env = env.certificate(a);
            CurvePoint {
                a,
                b_certified: cert_quad.min(cert_env),
                b_sampled: env.sampled(a),
            }
        })
        .collect();

    Ok(BoundReport {
        pure_b,
        curve,
        t_bound: 0.0,
        quadratic: Some((0.0, quad_zero)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::TolerancePolicy;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn rv(entries: &[f64]) -> Vector {
        Vector::from_iterator(entries.len(), entries.iter().map(|&re| c(re, 0.0)))
    }

    fn diag_rel(entries: &[f64]) -> Relation {
        let diag = Matrix::from_diagonal(&Vector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| c(x, 0.0)),
        ));
        Relation::from_operator(&diag, TolerancePolicy::default()).unwrap()
    }

    #[test]
    fn pure_bound_of_self_is_one() {
        let t = diag_rel(&[1.0, 2.0]);
        assert!((pure_relative_bound(&t, &t).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pure_bound_diagonal_pair() {
        // generalized singular values of the pair are 1/1 and 1/2:
        // the supremum of |S x| / |T x| is 1
        let t = diag_rel(&[1.0, 2.0]);
        let s = diag_rel(&[1.0, 1.0]);
        assert!((pure_relative_bound(&s, &t).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pure_bound_infinite_on_kernel() {
        let t = diag_rel(&[0.0, 1.0]);
        let s = diag_rel(&[1.0, 1.0]);
        assert_eq!(pure_relative_bound(&s, &t).unwrap(), f64::INFINITY);
    }

    #[test]
    fn pure_bound_rejects_smaller_domain() {
        let t = Relation::identity(2, TolerancePolicy::default());
        let s = Relation::from_pairs(
            2,
            &[(rv(&[1.0, 0.0]), rv(&[1.0, 0.0]))],
            TolerancePolicy::default(),
        )
        .unwrap();
        assert!(matches!(
            pure_relative_bound(&s, &t),
            Err(BoundError::DomainNotContained)
        ));
    }

    #[test]
    fn quadratic_bound_examples() {
        let t = diag_rel(&[1.0, 2.0]);
        assert!((quadratic_bound(&t, &t, 0.0).unwrap() - 1.0).abs() < 1e-10);
        let s = diag_rel(&[1.0, 1.0]);
        assert!((quadratic_bound(&s, &t, 0.0).unwrap() - 1.0).abs() < 1e-10);
        // a' = 1 absorbs |S x| = |x| entirely; the squared form resolves
        // b' only down to the square root of the eigensolver noise
        assert!(quadratic_bound(&s, &t, 1.0).unwrap() < 1e-6);
        assert!(quadratic_bound(&s, &t, -1.0).is_err());
    }

    #[test]
    fn quadratic_bound_kernel_cases() {
        let t = diag_rel(&[0.0, 1.0]);
        let s = diag_rel(&[1.0, 1.0]);
        // a' below the kernel action of S: impossible
        assert_eq!(quadratic_bound(&s, &t, 0.5).unwrap(), f64::INFINITY);
        // a' at or above it: the kernel direction is absorbed
        assert!(quadratic_bound(&s, &t, 1.0).unwrap() < 1e-5);
        assert!(quadratic_bound(&s, &t, 2.0).unwrap() < 1e-5);
    }

    #[test]
    fn convert_bounds_examples() {
        let (ap, bp) = convert_bounds(1.0, 1.0, 1.0).unwrap();
        assert!((ap - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((bp - std::f64::consts::SQRT_2).abs() < 1e-15);

        let (_, bp) = convert_bounds(3.0, 0.0, 0.7).unwrap();
        assert_eq!(bp, 0.0);

        let (ap, bp) = convert_bounds(0.0, 0.5, 4.0).unwrap();
        assert_eq!(ap, 0.0);
        assert!((bp - 0.5 * 5.0f64.sqrt()).abs() < 1e-15);

        assert!(convert_bounds(1.0, 1.0, 0.0).is_err());
        assert!(convert_bounds(1.0, 1.0, -2.0).is_err());
        assert_eq!(quadratic_to_linear(1.5, 0.25), (1.5, 0.25));
    }

    #[test]
    fn curve_zero_entry_matches_pure_bound() {
        let t = diag_rel(&[1.0, 2.0]);
        let s = diag_rel(&[1.0, 1.0]);
        let report = bound_curve(&s, &t, &[0.0], 7).unwrap();
        let point = report.curve[0];
        assert!((point.b_certified - report.pure_b).abs() < 1e-8);
        assert!(point.b_sampled <= point.b_certified + 1e-12);
        assert!(point.b_sampled > report.pure_b - 1e-6);
    }

    #[test]
    fn curve_absorbs_large_a() {
        // |S x| = 2 |x| exactly, so a = 2 gives b = 0
        let t = diag_rel(&[1.0, 10.0]);
        let s = diag_rel(&[2.0, 2.0]);
        let report = bound_curve(&s, &t, &[2.0], 11).unwrap();
        assert!(report.curve[0].b_certified < 1e-9);
        assert!(report.curve[0].b_sampled < 1e-9);
        assert_eq!(report.t_bound, 0.0);
    }

    #[test]
    fn curve_scalar_case_is_tight() {
        // 1-dimensional sanity: T = 2, S = 1 on C: b_min(a) = (1 - a)+ / 2
        let t = diag_rel(&[2.0]);
        let s = diag_rel(&[1.0]);
        let grid = [0.0, 0.25, 0.5, 0.9, 1.0];
        let report = bound_curve(&s, &t, &grid, 3).unwrap();
        for point in &report.curve {
            let truth = (1.0 - point.a).max(0.0) / 2.0;
            assert!(
                point.b_certified >= truth - 1e-10,
                "a={} cert={} truth={}",
                point.a,
                point.b_certified,
                truth
            );
            assert!(
                point.b_certified - truth < 1e-6 + 0.01 * truth,
                "a={} cert={} truth={}",
                point.a,
                point.b_certified,
                truth
            );
            assert!((point.b_sampled - truth).abs() < 1e-6 + 0.01 * truth);
        }
    }

    #[test]
    fn curve_certified_dominates_sampled_and_decreases() {
        let t = diag_rel(&[1.0, 3.0, 0.5]);
        let s = diag_rel(&[0.7, 1.1, 0.2]);
        let grid = default_a_grid(&s, &t).unwrap();
        let report = bound_curve(&s, &t, &grid, 13).unwrap();
        let mut prev_cert = f64::INFINITY;
        let mut prev_samp = f64::INFINITY;
        for point in &report.curve {
            assert!(point.b_sampled <= point.b_certified + 1e-6);
            assert!(point.b_certified <= prev_cert + 1e-9);
            assert!(point.b_sampled <= prev_samp + 1e-9);
            prev_cert = point.b_certified;
            prev_samp = point.b_sampled;
        }
    }

    #[test]
    fn curve_deterministic_for_fixed_seed() {
        let t = diag_rel(&[1.0, 2.0]);
        let s = diag_rel(&[0.5, 1.5]);
        let grid = [0.0, 0.5, 1.0];
        let r1 = bound_curve(&s, &t, &grid, 99).unwrap();
        let r2 = bound_curve(&s, &t, &grid, 99).unwrap();
        for (p1, p2) in r1.curve.iter().zip(r2.curve.iter()) {
            assert_eq!(p1.b_certified.to_bits(), p2.b_certified.to_bits());
            assert_eq!(p1.b_sampled.to_bits(), p2.b_sampled.to_bits());
        }
    }

    #[test]
    fn curve_rejects_bad_grid() {
        let t = diag_rel(&[1.0]);
        assert!(bound_curve(&t, &t, &[1.0, 0.5], 0).is_err());
        assert!(bound_curve(&t, &t, &[-1.0], 0).is_err());
    }
}
