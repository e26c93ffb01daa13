use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{essential_finiteness_nf, GenericSubmanifoldNF};
use crate::series::Series;
use crate::tuple::SeriesTuple;

use super::map::{check_sends, FormalMapNF};
use super::segre_hom::{finite_map_test, FiniteMapReport};

#[derive(Clone, Debug, PartialEq)]
pub enum Dichotomy {
    ZeroMap,
    /// `z ↦ F(z, 0)` is finite, so the Segre homomorphism is injective.
    SegreInjective(FiniteMapReport),
    /// `G ≡ 0` yet `F ≢ 0`; `curve` is `z ↦ F(z, 0)`, whose image lies in `M′ ∩ {w′ = 0}`.
    Violation { reason: String, curve: SeriesTuple },
    /// `G ≢ 0` but finiteness of `z ↦ F(z, 0)` was not established within the bounds.
    Undetermined(FiniteMapReport),
}

/// For hypersurfaces: either `H ≡ 0` or the Segre homomorphism of `H` is injective.
pub fn hypersurface_dichotomy(m: &GenericSubmanifoldNF, target: &GenericSubmanifoldNF, h: &FormalMapNF) -> Result<Dichotomy> {
    if m.d() != 1 || target.d() != 1 {
        return Err(Error::Precondition("both manifolds must be hypersurfaces".into()));
    }
    let alpha_bound = 2 * m.prec() / 3;
    if !essential_finiteness_nf(m, alpha_bound, m.prec()).is_finite() {
        return Err(Error::Precondition("source is not essentially finite within the bounds".into()));
    }
    let sends = check_sends(m, target, h)?;
    if !sends.sends {
        return Err(Error::Precondition("map does not send the source into the target".into()));
    }
    if h.g().is_zero() {
        // Q′(F(z,w), F̄(χ,τ), 0) must vanish on M
        let ly = m.layout();
        let amb = ly.ambient();
        let big_n = ly.big_n();
        let holo: Vec<usize> = (0..big_n).collect();
        let anti: Vec<usize> = (big_n..2 * big_n).collect();
        let f = h.f().remap(amb, &holo).with_nvars(amb);
        let f_bar = h.f().bar_conjugate().remap(amb, &anti).with_nvars(amb);
        let zero = SeriesTuple::new(alloc::vec![Series::zero(amb, m.prec())])?;
        let subs = f.concat(&f_bar)?.concat(&zero)?;
        let image = target.q().compose(&subs)?;
        for s in image.iter() {
            if !m.reduce_mod_m(s)?.is_zero() {
                return Err(Error::Precondition("Q′(F, F̄, 0) does not vanish on the source".into()));
            }
        }
        if h.f().is_zero() {
            return Ok(Dichotomy::ZeroMap);
        }
        return Ok(Dichotomy::Violation {
            reason: "G vanishes but F does not; the target contains a formal curve".into(),
            curve: h.f_on_segre(),
        });
    }
    let fz = h.f_on_segre();
    let rep = finite_map_test(&fz, fz.prec())?;
    if rep.staircase.is_finite() {
        Ok(Dichotomy::SegreInjective(rep))
    } else {
        Ok(Dichotomy::Undetermined(rep))
    }
}
