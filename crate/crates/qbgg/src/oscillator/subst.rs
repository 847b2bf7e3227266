//! Substitutions of oscillator generators (algebra homomorphisms).

use std::sync::Arc;

use super::poly::{same_space, NormalPoly, OscSpace};
use crate::coeff::Scalar;
use crate::error::{QbggError, Result};

/// A map sending each generator `ā_p`, `a_p` of a source space to a
/// polynomial over a target space.
///
/// Construction through [`Substitution::new`] or [`SubstitutionBuilder::build`]
/// verifies that the images satisfy the canonical commutation relations, so
/// the map extends to an algebra homomorphism.
#[derive(Debug, Clone)]
pub struct Substitution<S> {
    source: Arc<OscSpace>,
    target: Arc<OscSpace>,
    creation: Vec<NormalPoly<S>>,
    annihilation: Vec<NormalPoly<S>>,
}

impl<S: Scalar> Substitution<S> {
    /// Builds a substitution from explicit images, checking the commutation relations.
    pub fn new(
        source: &Arc<OscSpace>,
        target: &Arc<OscSpace>,
        creation: Vec<NormalPoly<S>>,
        annihilation: Vec<NormalPoly<S>>,
    ) -> Result<Self> {
        if creation.len() != source.len() || annihilation.len() != source.len() {
            return Err(QbggError::InvalidParameter(
                "one image per generator is required".into(),
            ));
        }
        for img in creation.iter().chain(annihilation.iter()) {
            if !same_space(img.space(), target) {
                return Err(QbggError::MismatchedSpaces(
                    "generator image lives over the wrong space".into(),
                ));
            }
        }
        let s = Substitution {
            source: source.clone(),
            target: target.clone(),
            creation,
            annihilation,
        };
        s.check_relations()?;
        Ok(s)
    }

    /// Starts a substitution that maps every label to the same label of `target`.
    pub fn builder(source: &Arc<OscSpace>, target: &Arc<OscSpace>) -> Result<SubstitutionBuilder<S>> {
        let mut creation = Vec::with_capacity(source.len());
        let mut annihilation = Vec::with_capacity(source.len());
        for label in source.labels() {
            match target.index_of(label) {
                Some(j) => {
                    creation.push(NormalPoly::creation(target, j));
                    annihilation.push(NormalPoly::annihilation(target, j));
                }
                None => {
                    creation.push(NormalPoly::zero(target));
                    annihilation.push(NormalPoly::zero(target));
                }
            }
        }
        Ok(SubstitutionBuilder {
            source: source.clone(),
            target: target.clone(),
            creation,
            annihilation,
        })
    }

    /// The identity substitution.
    pub fn identity(space: &Arc<OscSpace>) -> Self {
        Self::builder(space, space)
            .and_then(SubstitutionBuilder::build)
            .expect("identity is an automorphism")
    }

    /// The particle–hole transformation `ā_p ↦ −a_p`, `a_p ↦ ā_p` on the given pairs.
    pub fn particle_hole(space: &Arc<OscSpace>, pairs: &[usize]) -> Result<Self> {
        let mut b = Self::builder(space, space)?;
        for &p in pairs {
            if p >= space.len() {
                return Err(QbggError::InvalidParameter(format!("pair index {p} out of range")));
            }
            b.creation[p] = -&NormalPoly::annihilation(space, p);
            b.annihilation[p] = NormalPoly::creation(space, p);
        }
        b.build()
    }

    /// Source space.
    pub fn source(&self) -> &Arc<OscSpace> {
        &self.source
    }

    /// Target space.
    pub fn target(&self) -> &Arc<OscSpace> {
        &self.target
    }

    /// Image of `ā_p`.
    pub fn creation_image(&self, p: usize) -> &NormalPoly<S> {
        &self.creation[p]
    }

    /// Image of `a_p`.
    pub fn annihilation_image(&self, p: usize) -> &NormalPoly<S> {
        &self.annihilation[p]
    }

    fn check_relations(&self) -> Result<()> {
        let n = self.source.len();
        let labels = self.source.labels();
        for p in 0..n {
            for q in 0..n {
                let ca = self.annihilation[p].commutator(&self.creation[q])?;
                let expected = if p == q { 1 } else { 0 };
                if ca != NormalPoly::int(&self.target, expected) {
                    return Err(QbggError::NotAnAutomorphism(format!(
                        "[a{}, ā{}] maps to {ca}",
                        labels[p], labels[q]
                    )));
                }
                if q > p {
                    let aa = self.annihilation[p].commutator(&self.annihilation[q])?;
                    let bb = self.creation[p].commutator(&self.creation[q])?;
                    if !aa.is_zero() || !bb.is_zero() {
                        return Err(QbggError::NotAnAutomorphism(format!(
                            "generators of pairs {} and {} stop commuting",
                            labels[p], labels[q]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Composition `other ∘ self` (apply `self` first, then `other`).
    pub fn then(&self, other: &Substitution<S>) -> Result<Substitution<S>> {
        let creation = self
            .creation
            .iter()
            .map(|x| substitute_generators(x, other))
            .collect::<Result<Vec<_>>>()?;
        let annihilation = self
            .annihilation
            .iter()
            .map(|x| substitute_generators(x, other))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(&self.source, &other.target, creation, annihilation)
    }
}

/// Incremental construction of a [`Substitution`].
#[derive(Debug, Clone)]
pub struct SubstitutionBuilder<S> {
    source: Arc<OscSpace>,
    target: Arc<OscSpace>,
    creation: Vec<NormalPoly<S>>,
    annihilation: Vec<NormalPoly<S>>,
}

impl<S: Scalar> SubstitutionBuilder<S> {
    /// Sets the image of `ā` for a source label.
    pub fn creation(mut self, label: &str, image: NormalPoly<S>) -> Result<Self> {
        let p = self.source.require(label)?;
        self.creation[p] = image;
        Ok(self)
    }

    /// Sets the image of `a` for a source label.
    pub fn annihilation(mut self, label: &str, image: NormalPoly<S>) -> Result<Self> {
        let p = self.source.require(label)?;
        self.annihilation[p] = image;
        Ok(self)
    }

    /// Target space, for building images.
    pub fn target(&self) -> &Arc<OscSpace> {
        &self.target
    }

    /// Validates the commutation relations and returns the substitution.
    pub fn build(self) -> Result<Substitution<S>> {
        Substitution::new(&self.source, &self.target, self.creation, self.annihilation)
    }
}

/// Applies a substitution to a polynomial over its source space.
///
/// Each normal-ordered monomial `∏ ā_p^{c_p} ∏ a_p^{k_p}` maps to the product
/// of the images in the same order.
pub fn substitute_generators<S: Scalar>(
    x: &NormalPoly<S>,
    subst: &Substitution<S>,
) -> Result<NormalPoly<S>> {
    if !same_space(x.space(), &subst.source) {
        return Err(QbggError::MismatchedSpaces(
            "polynomial does not live over the substitution source".into(),
        ));
    }
    let n = subst.source.len();
    let mut cre_pows: Vec<Vec<NormalPoly<S>>> = vec![Vec::new(); n];
    let mut ann_pows: Vec<Vec<NormalPoly<S>>> = vec![Vec::new(); n];
    let power = |cache: &mut Vec<NormalPoly<S>>, base: &NormalPoly<S>, e: u32| -> NormalPoly<S> {
        if cache.is_empty() {
            cache.push(NormalPoly::int(&subst.target, 1));
        }
        while cache.len() <= e as usize {
            let next = cache.last().unwrap() * base;
            cache.push(next);
        }
        cache[e as usize].clone()
    };
    let mut out = NormalPoly::zero(&subst.target);
    for (m, c) in x.terms() {
        let mut term = NormalPoly::scalar(&subst.target, c.clone());
        for p in 0..n {
            if m.creation[p] > 0 {
                term = &term * &power(&mut cre_pows[p], &subst.creation[p], m.creation[p]);
            }
        }
        for p in 0..n {
            if m.annihilation[p] > 0 {
                term = &term * &power(&mut ann_pows[p], &subst.annihilation[p], m.annihilation[p]);
            }
        }
        out = &out + &term;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    type P = NormalPoly<BigRational>;

    #[test]
    fn particle_hole_on_number_operator() {
        // ā ↦ −a, a ↦ ā sends āa to −aā = −āa − 1.
        let s = OscSpace::new(["1"]).unwrap();
        let ph = Substitution::particle_hole(&s, &[0]).unwrap();
        let img = substitute_generators(&P::number(&s, 0), &ph).unwrap();
        assert_eq!(img, &(-&P::number(&s, 0)) - &P::int(&s, 1));
    }

    #[test]
    fn non_automorphism_is_rejected() {
        let s = OscSpace::new(["1"]).unwrap();
        let b = Substitution::builder(&s, &s)
            .unwrap()
            .creation("1", P::annihilation(&s, 0))
            .unwrap();
        assert!(matches!(b.build(), Err(QbggError::NotAnAutomorphism(_))));
    }

    #[test]
    fn particle_hole_squared_is_negation() {
        let s = OscSpace::new(["1", "2"]).unwrap();
        let ph = Substitution::particle_hole(&s, &[1]).unwrap();
        let twice = ph.then(&ph).unwrap();
        assert_eq!(twice.creation_image(1), &-&P::creation(&s, 1));
        assert_eq!(twice.annihilation_image(1), &-&P::annihilation(&s, 1));
        assert_eq!(twice.creation_image(0), &P::creation(&s, 0));
    }
}
