//! The long exact cohomology sequence of a short exact sequence of
//! complexes.
//!
//! Per degree p the ladder
//!
//! ```text
//!   coker d_E^(p-1) --xi'--> coker d_F^(p-1) --c--> coker(xi')
//!        |                        |                     |
//!       v_E                      v_F                 v_tilde
//!        v                        v                     v
//!   ker d_E^(p+1) --xi''--> ker d_F^(p+1) ---------> ker d_G^(p+1)
//! ```
//!
//! is a snake diagram by construction; its kernels and cokernels are
//! canonically isomorphic to cohomology objects, except for the third
//! kernel, which is a pseudo-isomorphic cover of H^p(G). The glued
//! six-term outputs form the long sequence
//!
//! ```text
//!   ... -> H^p(E) -> H^p(F) -> T^p -->> H^p(G)
//!                               \
//!                              delta
//!                                 \-> H^(p+1)(E) -> H^(p+1)(F) -> ...
//! ```
//!
//! exact everywhere when the middle complex is strong; without
//! strongness, exactness at T^p weakens to the kernel of delta
//! containing the image, everything else surviving.

use crate::category::Belian;
use crate::complex::{CohomologyAt, Complex, ComplexMap};
use crate::error::{Error, Result};
use crate::snake::{weak_snake, SnakeInput, SnakeOutput};

/// A short exact sequence of complexes E >--e--> F --f-->> G:
/// degreewise mono, epi, and exact in the middle.
#[derive(Debug)]
pub struct SesOfComplexes<C: Belian> {
    pub e: ComplexMap<C>,
    pub f: ComplexMap<C>,
}

impl<C: Belian> SesOfComplexes<C> {
    pub fn new(cat: &C, e: ComplexMap<C>, f: ComplexMap<C>) -> Result<Self> {
        if e.target != f.source {
            return Err(Error::structural(
                "the two maps do not share the middle complex",
            ));
        }
        let lo = e.source.lo.min(f.target.lo).min(e.target.lo);
        let hi = e.source.hi().max(f.target.hi()).max(e.target.hi());
        for p in lo..=hi {
            let ep = e.component(cat, p);
            let fp = f.component(cat, p);
            if !cat.is_mono(&ep) {
                return Err(Error::precondition(format!(
                    "left map is not mono in degree {p}"
                )));
            }
            if !cat.is_epi(&fp) {
                return Err(Error::precondition(format!(
                    "right map is not epi in degree {p}"
                )));
            }
            if !cat.is_exact_pair(&ep, &fp) {
                return Err(Error::precondition(format!(
                    "sequence is not exact in the middle in degree {p}"
                )));
            }
        }
        Ok(SesOfComplexes { e, f })
    }

    pub fn lo(&self) -> i64 {
        self.e
            .source
            .lo
            .min(self.e.target.lo)
            .min(self.f.target.lo)
    }

    pub fn hi(&self) -> i64 {
        self.e
            .source
            .hi()
            .max(self.e.target.hi())
            .max(self.f.target.hi())
    }
}

/// One degree of the long sequence, with every map expressed against
/// the canonical cohomology presentations.
#[derive(Debug)]
pub struct LesStage<C: Belian> {
    pub degree: i64,
    pub h_e: CohomologyAt<C>,
    pub h_f: CohomologyAt<C>,
    pub h_g: CohomologyAt<C>,
    /// The cover object T^p = ker(v_tilde).
    pub tilde: C::Obj,
    /// T^p -> H^p(G), a pseudo-isomorphism.
    pub cover: C::Mor,
    /// H^p(E) -> H^p(F), the map induced by e.
    pub a: C::Mor,
    /// H^p(F) -> T^p.
    pub alpha: C::Mor,
    /// T^p -> H^(p+1)(E), the connecting morphism.
    pub delta: C::Mor,
    /// Whether the middle vertical of this degree's snake is strong;
    /// exactness at T^p is guaranteed exactly then.
    pub middle_strong: bool,
    /// ker(delta) with its inclusion into T^p and the corestriction
    /// of alpha, for the weak form of the sequence.
    pub ker_delta: C::Obj,
    pub ker_delta_incl: C::Mor,
    pub alpha_into_ker_delta: C::Mor,
    /// The raw per-degree snake and the presentation isomorphisms,
    /// for diagnostics and cross-checks.
    pub raw: SnakeOutput<C>,
    /// H^p(X) -> ker(v_X) for X = E, F, G.
    pub phi_e: C::Mor,
    pub phi_f: C::Mor,
    pub phi_g: C::Mor,
    /// coker(v_X) -> H^(p+1)(X) for X = E, F.
    pub psi_e: C::Mor,
    pub psi_f: C::Mor,
}

#[derive(Debug)]
pub struct Les<C: Belian> {
    pub lo: i64,
    pub stages: Vec<LesStage<C>>,
}

impl<C: Belian> Les<C> {
    pub fn stage(&self, p: i64) -> Option<&LesStage<C>> {
        let idx = p - self.lo;
        if idx < 0 {
            None
        } else {
            self.stages.get(idx as usize)
        }
    }

    /// Violations of the guarantees: per degree, exactness at H^p(F)
    /// and at H^(p+1)(E), the cover being a pseudo-isomorphism, the
    /// factorization of H^p(f) through the cover, exactness of the
    /// weak row into ker(delta), and, where the middle is strong,
    /// exactness at T^p with a strong delta.
    pub fn violations(&self, cat: &C, e: &ComplexMap<C>, f: &ComplexMap<C>) -> Vec<String> {
        let mut out = Vec::new();
        for (i, st) in self.stages.iter().enumerate() {
            let p = st.degree;
            if !cat.is_exact_pair(&st.a, &st.alpha) {
                out.push(format!("not exact at H^{p}(F)"));
            }
            if let Some(next) = self.stages.get(i + 1) {
                if !cat.is_exact_pair(&st.delta, &next.a) {
                    out.push(format!("not exact at H^{}(E)", p + 1));
                }
            }
            if !cat.is_pseudo_iso(&st.cover) {
                out.push(format!("cover of H^{p}(G) is not a pseudo-isomorphism"));
            }
            let h_f_map = f.on_cohomology(cat, p, &st.h_f, &st.h_g);
            if cat.compose(&st.cover, &st.alpha) != h_f_map {
                out.push(format!("H^{p}(f) does not factor through the cover"));
            }
            let h_e_map = e.on_cohomology(cat, p, &st.h_e, &st.h_f);
            if h_e_map != st.a {
                out.push(format!("induced map on H^{p} disagrees with the snake"));
            }
            if !cat.is_exact_pair(&st.a, &st.alpha_into_ker_delta) {
                out.push(format!("weak row is not exact at H^{p}(F)"));
            }
            if st.middle_strong {
                if !cat.is_exact_pair(&st.alpha, &st.delta) {
                    out.push(format!("not exact at the cover T^{p}"));
                }
                if !cat.is_strong(&st.delta) {
                    out.push(format!("connecting morphism out of T^{p} is not strong"));
                }
            }
        }
        out
    }
}

/// The vertical of the per-degree ladder: coker d^(p-1) -> ker d^(p+1)
/// induced by d^p, with the two legs it factors through.
fn vertical<C: Belian>(
    cat: &C,
    complex: &Complex<C>,
    p: i64,
) -> (C::Mor, C::Mor, C::Mor) {
    let d_in = complex.differential(cat, p - 1);
    let d_out = complex.differential(cat, p);
    let d_next = complex.differential(cat, p + 1);
    let (_, coker_proj) = cat.cokernel(&d_in);
    let (_, ker_incl) = cat.kernel(&d_next);
    let into_kernel = cat
        .factor_through_mono(&ker_incl, &d_out)
        .expect("d.d = 0 lands d in the next kernel");
    let v = cat
        .factor_through_epi(&coker_proj, &into_kernel)
        .expect("d kills the previous image");
    (v, coker_proj, ker_incl)
}

/// H^p -> ker(v): the canonical comparison, an isomorphism.
fn phi<C: Belian>(
    cat: &C,
    h: &CohomologyAt<C>,
    v: &C::Mor,
    coker_proj: &C::Mor,
) -> Result<C::Mor> {
    let (_, ker_v_incl) = cat.kernel(v);
    let to_coker = cat.compose(coker_proj, &h.kernel_incl);
    let into_ker_v = cat
        .factor_through_mono(&ker_v_incl, &to_coker)
        .ok_or_else(|| Error::structural("kernel classes escape ker(v)"))?;
    let phi = cat
        .factor_through_epi(&h.proj, &into_ker_v)
        .ok_or_else(|| Error::structural("comparison not constant on H classes"))?;
    if !cat.is_iso(&phi) {
        return Err(Error::structural("cohomology comparison is not iso"));
    }
    Ok(phi)
}

/// coker(v) -> H^(p+1): the canonical comparison, an isomorphism.
fn psi<C: Belian>(cat: &C, h_next: &CohomologyAt<C>, v: &C::Mor) -> Result<C::Mor> {
    let (_, coker_v_proj) = cat.cokernel(v);
    let psi = cat
        .factor_through_epi(&coker_v_proj, &h_next.proj)
        .ok_or_else(|| Error::structural("H projection not constant on coker(v) classes"))?;
    if !cat.is_iso(&psi) {
        return Err(Error::structural("cokernel comparison is not iso"));
    }
    Ok(psi)
}

pub fn les_of_complexes<C: Belian>(cat: &C, ses: &SesOfComplexes<C>) -> Result<Les<C>> {
    let e = &ses.e;
    let f = &ses.f;
    let lo = ses.lo() - 1;
    let hi = ses.hi() + 1;
    let mut stages = Vec::new();
    for p in lo..=hi {
        // Verticals of the three complexes.
        let (v_e, coker_proj_e, ker_incl_e) = vertical(cat, &e.source, p);
        let (v_f, coker_proj_f, ker_incl_f) = vertical(cat, &e.target, p);
        let (v_g, coker_proj_g, ker_incl_g) = vertical(cat, &f.target, p);
        // Horizontal maps induced on cokernels and kernels.
        let xi_c = cat
            .factor_through_epi(
                &coker_proj_e,
                &cat.compose(&coker_proj_f, &e.component(cat, p)),
            )
            .ok_or_else(|| Error::structural("e does not descend to cokernels"))?;
        let xi_k = cat
            .factor_through_mono(
                &ker_incl_f,
                &cat.compose(&e.component(cat, p + 1), &ker_incl_e),
            )
            .ok_or_else(|| Error::structural("e does not restrict to kernels"))?;
        let f_c = cat
            .factor_through_epi(
                &coker_proj_f,
                &cat.compose(&coker_proj_g, &f.component(cat, p)),
            )
            .ok_or_else(|| Error::structural("f does not descend to cokernels"))?;
        let f_k = cat
            .factor_through_mono(
                &ker_incl_g,
                &cat.compose(&f.component(cat, p + 1), &ker_incl_f),
            )
            .ok_or_else(|| Error::structural("f does not restrict to kernels"))?;
        // Replace the third column with the cover coker(xi_c).
        let (_, c) = cat.cokernel(&xi_c);
        let v_tilde = cat
            .factor_through_epi(&c, &cat.compose(&f_k, &v_f))
            .ok_or_else(|| Error::structural("vertical does not descend to the cover"))?;
        let input = SnakeInput {
            g1: xi_c,
            g2: c.clone(),
            h1: xi_k,
            h2: f_k,
            f1: v_e,
            f2: v_f.clone(),
            f3: v_tilde,
        };
        let weak = weak_snake(cat, &input)?;
        let raw = weak.snake;
        // Comparison from the cover's kernel onto ker(v_G).
        let g_bar = cat
            .factor_through_epi(&c, &f_c)
            .ok_or_else(|| Error::structural("f does not descend to the cover"))?;
        let (_, ker_vg_incl) = cat.kernel(&v_g);
        let pi_g = cat
            .factor_through_mono(&ker_vg_incl, &cat.compose(&g_bar, &raw.ker_incl3))
            .ok_or_else(|| Error::structural("cover kernel escapes ker(v_G)"))?;
        // Cohomology presentations and the canonical isomorphisms.
        let h_e = e.source.cohomology(cat, p);
        let h_f = e.target.cohomology(cat, p);
        let h_g = f.target.cohomology(cat, p);
        let h_e_next = e.source.cohomology(cat, p + 1);
        let phi_e = phi(cat, &h_e, &input.f1, &coker_proj_e)?;
        let phi_f = phi(cat, &h_f, &input.f2, &coker_proj_f)?;
        let phi_g = phi(cat, &h_g, &v_g, &coker_proj_g)?;
        let psi_e = psi(cat, &h_e_next, &input.f1)?;
        let psi_f = psi(cat, &e.target.cohomology(cat, p + 1), &input.f2)?;
        let phi_g_inv = cat
            .inverse(&phi_g)
            .ok_or_else(|| Error::structural("cohomology comparison not invertible"))?;
        // Canonical stage maps.
        let a = e.on_cohomology(cat, p, &h_e, &h_f);
        let alpha = cat.compose(&raw.top2, &phi_f);
        let delta = cat.compose(&psi_e, &raw.delta);
        let cover = cat.compose(&phi_g_inv, &pi_g);
        // ker(delta) against the canonical presentation.
        let (ker_delta, ker_delta_incl) = cat.kernel(&delta);
        let alpha_into_ker_delta = cat
            .factor_through_mono(&ker_delta_incl, &alpha)
            .ok_or_else(|| Error::structural("alpha escapes ker(delta)"))?;
        let middle_strong = cat.is_strong(&v_f);
        stages.push(LesStage {
            degree: p,
            h_e,
            h_f,
            h_g,
            tilde: raw.ker3.clone(),
            cover,
            a,
            alpha,
            delta,
            middle_strong,
            ker_delta,
            ker_delta_incl,
            alpha_into_ker_delta,
            raw,
            phi_e,
            phi_f,
            phi_g,
            psi_e,
            psi_f,
        });
    }
    Ok(Les { lo, stages })
}
