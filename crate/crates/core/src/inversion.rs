//! Laplace inversion along the rotated Bromwich contour `Γ(a)`.
//!
//! `Γ(a)` is the vertical line through `a > 0` with each half rotated by
//! `π/4` toward the left half-plane, so the rays leave the vertex at angles
//! `±3π/4`. Along a ray `λ = a + σ·e^{±i3π/4}`, `Re λ` falls at rate `1/√2`
//! per unit arc length, which gives an explicit truncation budget for
//! `|e^{tλ}|`. Nodes are composite Gauss–Legendre panels, geometrically
//! graded toward the vertex where the integrand varies fastest, and stored
//! as conjugate pairs: the node set is closed under conjugation with
//! conjugate weights (the weights absorb `1/(2πi)` and the orientation), so
//! the accumulated sum is real up to rounding.
//!
//! Above the critical coupling the moment integrand has a simple pole at
//! `λ₀`; the contour either keeps the pole strictly to its left (direct
//! evaluation) or is moved to `Γ(1/(16t))` with the pole's residue added
//! back (residue-plus-background split).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, KahanComplex};
use crate::resolvent::{moment_numerator, resolvent_moment, resolvent_u};
use crate::spectral::{ground_state, Coupling, GroundState, SpectralPoint};

/// Ray angle of the upper half of `Γ(a)` (π/4 rotation of the vertical).
pub const RAY_ANGLE: f64 = 3.0 * std::f64::consts::FRAC_PI_4;

/// Default Gauss–Legendre nodes per ray.
pub const DEFAULT_NODES_PER_RAY: usize = 128;

/// Decay budget: truncate once `|e^{tλ}|` has fallen by 18 decades.
const DECAY_DECADES: f64 = 18.0;

/// Minimum admissible distance between a contour node and the pole.
const POLE_NODE_GUARD: f64 = 1e-10;

/// One quadrature node `λ` with its complex weight. Weights include the
/// `1/(2πi)` prefactor and the contour orientation, so an inversion is just
/// `Σ wⱼ F(λⱼ)`.
#[derive(Debug, Clone, Copy)]
pub struct ContourNode {
    pub lambda: Complex64,
    pub weight: Complex64,
}

/// Rotated contour `Γ(a)` with its quadrature rule.
#[derive(Debug, Clone)]
pub struct ContourSpec {
    vertex: f64,
    ray_angle: f64,
    nodes_per_ray: usize,
    truncation_length: f64,
    nodes: Vec<ContourNode>,
}

impl ContourSpec {
    pub fn vertex(&self) -> f64 {
        self.vertex
    }

    pub fn ray_angle(&self) -> f64 {
        self.ray_angle
    }

    pub fn nodes_per_ray(&self) -> usize {
        self.nodes_per_ray
    }

    pub fn truncation_length(&self) -> f64 {
        self.truncation_length
    }

    pub fn nodes(&self) -> &[ContourNode] {
        &self.nodes
    }

    /// `Σ wⱼ F(λⱼ)` with compensated accumulation in fixed node order.
    pub fn integrate<F>(&self, mut f: F) -> Result<Complex64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        let mut acc = KahanComplex::new();
        for node in &self.nodes {
            acc.add(node.weight * f(node.lambda)?);
        }
        Ok(acc.sum())
    }

    fn min_distance_to(&self, lambda0: f64) -> f64 {
        let p = Complex64::new(lambda0, 0.0);
        self.nodes
            .iter()
            .map(|n| (n.lambda - p).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Build `Γ(a)` for inversion at time `t` with roughly `nodes_per_ray` nodes
/// per ray.
///
/// The truncation length is `18·ln10·√2 / t`, making `|e^{tλ}|` at the cut
/// end at most `1e-18·e^{ta}`. Panels double in length away from the vertex,
/// starting no coarser than half the smaller of the vertex scale `a` (where
/// the `1/λ` factors of the moment integrands vary) and the decay scale
/// `1/t`.
pub fn make_contour(a: f64, t: f64, nodes_per_ray: usize) -> Result<ContourSpec> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidParams(format!("contour vertex must be > 0, got {a}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParams(format!("time must be > 0, got {t}")));
    }
    if nodes_per_ray < 16 {
        return Err(Error::InvalidParams(format!(
            "need at least 16 nodes per ray, got {nodes_per_ray}"
        )));
    }

    let truncation = DECAY_DECADES * std::f64::consts::LN_10 * std::f64::consts::SQRT_2 / t;
    let h0 = 0.5 * a.min(1.0 / t);
    let panels = ((truncation / h0 + 1.0).log2().ceil() as usize).max(4);
    let per_panel = nodes_per_ray.div_ceil(panels).max(4);

    let scale = truncation / ((1u64 << panels) as f64 - 1.0);
    let edges: Vec<f64> = (0..=panels)
        .map(|j| scale * ((1u64 << j) as f64 - 1.0))
        .collect();

    let (gl_nodes, gl_weights) = gauss_legendre(per_panel);
    let dir = Complex64::from_polar(1.0, RAY_ANGLE);
    // weights absorb 1/(2πi) and the ray orientation
    let prefactor = dir / Complex64::new(0.0, 2.0 * std::f64::consts::PI);

    let mut nodes = Vec::with_capacity(2 * panels * per_panel);
    for w in edges.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        let mid = 0.5 * (w[1] + w[0]);
        for (x, gw) in gl_nodes.iter().zip(&gl_weights) {
            let sigma = mid + half * x;
            let lambda = a + sigma * dir;
            let weight = half * gw * prefactor;
            nodes.push(ContourNode { lambda, weight });
            nodes.push(ContourNode {
                lambda: lambda.conj(),
                weight: weight.conj(),
            });
        }
    }

    Ok(ContourSpec {
        vertex: a,
        ray_angle: RAY_ANGLE,
        nodes_per_ray: panels * per_panel,
        truncation_length: truncation,
        nodes,
    })
}

/// Contour vertex policy: `λ₀ + 4/t` when a ground state exists, `4/t`
/// otherwise, keeping `e^{ta}` within `e⁴` of the pole growth.
pub fn default_vertex(c: &Coupling, t: f64) -> Result<f64> {
    if c.delta() > 0.0 {
        let gs = ground_state(c)?;
        Ok(gs.lambda0.unwrap_or(0.0) + 4.0 / t)
    } else {
        Ok(4.0 / t)
    }
}

/// [`make_contour`] at the default vertex and node count.
pub fn default_contour(c: &Coupling, t: f64) -> Result<ContourSpec> {
    make_contour(default_vertex(c, t)?, t, DEFAULT_NODES_PER_RAY)
}

/// Inverted density value with its quadrature diagnostic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DensityEstimate {
    pub value: f64,
    pub imag_residual: f64,
}

/// Provenance of a [`MomentSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    DirectContour,
    ResiduePlusBackground,
}

/// Time-domain moments `p⁽⁰⁾` (the partition function) and `p⁽²⁾`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentSet {
    pub t: f64,
    pub p0: f64,
    pub p2: f64,
    /// Max `|Im|` of the raw complex results, a quadrature diagnostic.
    pub imag_residual: f64,
    pub method: MomentMethod,
}

/// Ground state when one exists in the window, `None` below criticality.
fn supercritical_ground_state(c: &Coupling) -> Result<Option<GroundState>> {
    if c.delta() > 0.0 {
        ground_state(c).map(Some)
    } else {
        Ok(None)
    }
}

fn check_pole_clearance(c: &Coupling, spec: &ContourSpec) -> Result<Option<GroundState>> {
    let gs = supercritical_ground_state(c)?;
    if let Some(gs) = &gs {
        let lambda0 = gs.lambda0.unwrap_or(0.0);
        if lambda0 >= spec.vertex() {
            return Err(Error::InvalidParams(format!(
                "contour vertex {} does not exceed lambda0 = {lambda0}",
                spec.vertex()
            )));
        }
        let dist = spec.min_distance_to(lambda0);
        if dist < POLE_NODE_GUARD {
            return Err(Error::PoleOnContour { distance: dist });
        }
    }
    Ok(gs)
}

/// Density `p_β(t, 0, x) = (1/2πi) ∫_{Γ(a)} e^{tλ} u(λ, r) dλ`, `r = |x|`.
pub fn invert_density(c: &Coupling, t: f64, r: f64, spec: &ContourSpec) -> Result<DensityEstimate> {
    if !(t > 0.0) || !(r > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need t > 0 and r > 0, got t = {t}, r = {r}"
        )));
    }
    check_pole_clearance(c, spec)?;
    let total = spec.integrate(|lambda| {
        let p = SpectralPoint::new(lambda)?;
        Ok((t * lambda).exp() * resolvent_u(c, &p, r)?.value)
    })?;
    Ok(DensityEstimate {
        value: total.re,
        imag_residual: total.im.abs(),
    })
}

/// Moments by direct contour quadrature (vertex right of any pole).
pub fn moments_direct(c: &Coupling, t: f64, spec: &ContourSpec) -> Result<MomentSet> {
    if !(t > 0.0) {
        return Err(Error::InvalidParams(format!("need t > 0, got {t}")));
    }
    check_pole_clearance(c, spec)?;
    let mut results = [Complex64::default(); 2];
    for (slot, nu) in results.iter_mut().zip([0u32, 2u32]) {
        *slot = spec.integrate(|lambda| {
            let p = SpectralPoint::new(lambda)?;
            Ok((t * lambda).exp() * resolvent_moment(c, &p, nu)?.value)
        })?;
    }
    Ok(MomentSet {
        t,
        p0: results[0].re,
        p2: results[1].re,
        imag_residual: results[0].im.abs().max(results[1].im.abs()),
        method: MomentMethod::DirectContour,
    })
}

/// Pole contribution `v₁⁽ᵛ⁾ = e^{λ₀ t} · N⁽ᵛ⁾(λ₀) / d′(λ₀)` with `N⁽ᵛ⁾` the
/// `d`-free numerator of `U⁽ᵛ⁾`.
pub(crate) fn residue_contribution(c: &Coupling, gs: &GroundState, t: f64, nu: u32) -> Result<f64> {
    let lambda0 = gs.lambda0.ok_or_else(|| {
        Error::WrongRegime("residue contribution needs a supercritical ground state".into())
    })?;
    let d_prime = gs.d_lambda_deriv.ok_or_else(|| {
        Error::WrongRegime("degenerate ground state at criticality has no residue".into())
    })?;
    let p = SpectralPoint::real(lambda0)?;
    let numerator = moment_numerator(c, &p, nu, crate::resolvent::INTERIOR_QUAD_NODES)?;
    Ok((lambda0 * t).exp() * numerator.re / d_prime)
}

/// Moments by the residue-plus-background split: the contour is moved to
/// `Γ(1/(16t))` and the pole at `λ₀` contributes its residue.
///
/// Valid in the supercritical regime `(β − β_cr)√t ≥ 1`, which guarantees
/// `λ₀ > 1/(16t)` (pole between the contours).
pub fn moments_residue_split(c: &Coupling, t: f64) -> Result<MomentSet> {
    moments_residue_split_with_nodes(c, t, DEFAULT_NODES_PER_RAY)
}

/// [`moments_residue_split`] with an explicit node count per ray.
pub fn moments_residue_split_with_nodes(
    c: &Coupling,
    t: f64,
    nodes_per_ray: usize,
) -> Result<MomentSet> {
    if !(t > 0.0) {
        return Err(Error::InvalidParams(format!("need t > 0, got {t}")));
    }
    let product = c.delta() * t.sqrt();
    if c.delta() <= 0.0 || product < 1.0 {
        return Err(Error::WrongRegime(format!(
            "residue split needs beta > beta_cr and (beta - beta_cr)·sqrt(t) >= 1, got product {product:.3}"
        )));
    }
    let gs = ground_state(c)?;
    let background = make_contour(1.0 / (16.0 * t), t, nodes_per_ray)?;
    debug_assert!(gs.lambda0.unwrap_or(0.0) > background.vertex());
    let dist = background.min_distance_to(gs.lambda0.unwrap_or(0.0));
    if dist < POLE_NODE_GUARD {
        return Err(Error::PoleOnContour { distance: dist });
    }

    let mut totals = [0.0f64; 2];
    let mut residual = 0.0f64;
    for (slot, nu) in totals.iter_mut().zip([0u32, 2u32]) {
        let v1 = residue_contribution(c, &gs, t, nu)?;
        let v2 = background.integrate(|lambda| {
            let p = SpectralPoint::new(lambda)?;
            Ok((t * lambda).exp() * resolvent_moment(c, &p, nu)?.value)
        })?;
        *slot = v1 + v2.re;
        residual = residual.max(v2.im.abs());
    }
    Ok(MomentSet {
        t,
        p0: totals[0],
        p2: totals[1],
        imag_residual: residual,
        method: MomentMethod::ResiduePlusBackground,
    })
}


/// Split diagnostics: the pole and background parts of `p⁽ᵛ⁾` (test support).
#[doc(hidden)]
pub fn residue_debug(c: &Coupling, t: f64, nu: u32) -> Result<(f64, f64)> {
    let gs = ground_state(c)?;
    let v1 = residue_contribution(c, &gs, t, nu)?;
    let background = make_contour(1.0 / (16.0 * t), t, DEFAULT_NODES_PER_RAY)?;
    let v2 = background.integrate(|lambda| {
        let p = SpectralPoint::new(lambda)?;
        Ok((t * lambda).exp() * resolvent_moment(c, &p, nu)?.value)
    })?;
    Ok((v1, v2.re))
}
