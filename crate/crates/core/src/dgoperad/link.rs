use super::presentation::Presentation;
use super::truncated::{symmetry_defect, TruncatedOperad};
use crate::error::{Error, Result};
use crate::symtree::{GenId, GeneratorSymbol, OperadElement};

/// Generators adjoined in one linking step, with their attaching cycles and
/// any relations among them. Attaching maps are written in the signature of
/// the operad being linked onto; relations in the extended signature.
#[derive(Clone, Debug, Default)]
pub struct LinkStep {
    pub generators: Vec<GeneratorSymbol>,
    pub attaching: Vec<OperadElement>,
    pub relations: Vec<OperadElement>,
}

/// An operand list: a base operad followed by successive linking steps.
#[derive(Clone, Debug)]
pub struct LinkSpec {
    pub base: Presentation,
    pub steps: Vec<LinkStep>,
}

/// `lu(⟨G⟩, q)` for the attaching map `g ↦ φ(g)`: adjoins `G` to `q` and
/// extends the differential by `d(g) = φ(g)`.
pub fn link_universal(q: &Presentation, gens: &[GeneratorSymbol], phi: &[OperadElement]) -> Result<Presentation> {
    link_step(
        q,
        &LinkStep {
            generators: gens.to_vec(),
            attaching: phi.to_vec(),
            relations: Vec::new(),
        },
    )
}

/// One linking step. Relations `R` of the adjoined operad are imposed
/// together with their images `d(R)` under the attaching map.
pub fn link_step(q: &Presentation, step: &LinkStep) -> Result<Presentation> {
    if step.generators.len() != step.attaching.len() {
        return Err(Error::SizeMismatch(format!(
            "{} generators but {} attaching images",
            step.generators.len(),
            step.attaching.len()
        )));
    }
    let mut base = TruncatedOperad::new(q);
    for (g, phi) in step.generators.iter().zip(&step.attaching) {
        if phi.field() != q.field {
            return Err(Error::FieldMismatch);
        }
        if phi.arity() != g.arity {
            return Err(Error::ArityMismatch(format!(
                "φ({}) has arity {}, expected {}",
                g.name,
                phi.arity(),
                g.arity
            )));
        }
        if !phi.is_zero() && phi.degree(q.signature()) != Some(g.degree - 1) {
            return Err(Error::DegreeMismatch(format!(
                "φ({}) must have degree {}",
                g.name,
                g.degree - 1
            )));
        }
        let dphi = q.apply_differential(phi);
        if !base.is_zero_in_quotient(&dphi)? {
            return Err(Error::NotACycle(format!(
                "φ({}) = {} is not a cycle",
                g.name,
                phi.format(q.signature())
            )));
        }
        if symmetry_defect(&mut base, g.symmetry, g.arity, phi)? {
            return Err(Error::Invalid(format!(
                "φ({}) does not have the symmetry `{}` of the generator",
                g.name, g.symmetry
            )));
        }
    }
    let mut out = q.clone();
    out.name = format!("lu({})", q.name);
    let mut ids = Vec::with_capacity(step.generators.len());
    for g in &step.generators {
        ids.push(out.add_generator(g.clone())?);
    }
    for (id, phi) in ids.iter().zip(&step.attaching) {
        out.set_differential(*id, phi.clone())?;
    }
    for r in &step.relations {
        out.add_relation(r.clone())?;
    }
    for r in &step.relations {
        let dr = out.apply_differential(r);
        out.add_relation(dr)?;
    }
    Ok(out)
}

/// `lu_G(o) = lu(⟨sG⟩, o)`: adjoins `s.g` with `d(s.g) = g` for each named
/// generator `g` of `o`.
pub fn lu_generating(o: &Presentation, gens: &[GenId]) -> Result<Presentation> {
    let sig = o.signature();
    let new: Vec<GeneratorSymbol> = gens.iter().map(|g| sig.get(*g).suspended()).collect();
    let phi: Vec<OperadElement> = gens.iter().map(|g| o.generator_element(*g)).collect();
    let mut out = link_universal(o, &new, &phi)?;
    out.name = format!("lu({})", o.name);
    Ok(out)
}

/// Folds [`link_step`] over the operand list.
pub fn link_chain(spec: &LinkSpec) -> Result<Presentation> {
    let mut cur = spec.base.clone();
    for step in &spec.steps {
        cur = link_step(&cur, step)?;
    }
    if !spec.steps.is_empty() {
        cur.name = format!("link({}, {} steps)", spec.base.name, spec.steps.len());
    }
    Ok(cur)
}
