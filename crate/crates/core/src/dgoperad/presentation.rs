use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::symtree::{GenId, GeneratorSymbol, OperadElement, Signature, Symmetry};

/// A presented (dg) operad `⟨G | R⟩` with an optional differential on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub field: Field,
    pub planar: bool,
    /// User assertion that the operad has no zero divisors under `∘_1`.
    pub integral: bool,
    sig: Signature,
    relations: Vec<OperadElement>,
    differential: BTreeMap<GenId, OperadElement>,
    /// Named elements (`class NAME = expr`) kept as source text; they are
    /// resolved against whatever signature the consumer builds.
    classes: Vec<(String, String)>,
}

impl Presentation {
    pub fn new(name: impl Into<String>, field: Field, planar: bool) -> Presentation {
        Presentation {
            name: name.into(),
            field,
            planar,
            integral: false,
            sig: Signature::new(),
            relations: Vec::new(),
            differential: BTreeMap::new(),
            classes: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn relations(&self) -> &[OperadElement] {
        &self.relations
    }

    pub fn differential_map(&self) -> &BTreeMap<GenId, OperadElement> {
        &self.differential
    }

    pub fn has_differential(&self) -> bool {
        !self.differential.is_empty()
    }

    pub fn classes(&self) -> &[(String, String)] {
        &self.classes
    }

    pub fn add_class(&mut self, name: impl Into<String>, expr: impl Into<String>) {
        self.classes.push((name.into(), expr.into()));
    }

    pub fn generator(&self, name: &str) -> Result<GenId> {
        self.sig.lookup(name)
    }

    pub fn add_generator(&mut self, g: GeneratorSymbol) -> Result<GenId> {
        if self.planar && g.symmetry != Symmetry::None {
            return Err(Error::Invalid(format!(
                "planar presentations only admit symmetry=none (generator `{}`)",
                g.name
            )));
        }
        self.sig.push(g)
    }

    pub fn add_relation(&mut self, r: OperadElement) -> Result<()> {
        self.check_element(&r, "relation")?;
        if r.is_zero() {
            return Ok(());
        }
        if r.degree(&self.sig).is_none() {
            return Err(Error::DegreeMismatch(format!(
                "relation {} is not homogeneous",
                r.format(&self.sig)
            )));
        }
        self.relations.push(r);
        Ok(())
    }

    /// Sets `d(g)`; the image must have arity of `g` and degree `|g| - 1`.
    pub fn set_differential(&mut self, g: GenId, image: OperadElement) -> Result<()> {
        self.check_element(&image, "differential")?;
        let gen = self.sig.get(g);
        if image.arity() != gen.arity {
            return Err(Error::ArityMismatch(format!(
                "d({}) has arity {}, expected {}",
                gen.name,
                image.arity(),
                gen.arity
            )));
        }
        if !image.is_zero() && image.degree(&self.sig) != Some(gen.degree - 1) {
            return Err(Error::DegreeMismatch(format!(
                "d({}) must have degree {}",
                gen.name,
                gen.degree - 1
            )));
        }
        if image.is_zero() {
            self.differential.remove(&g);
        } else {
            self.differential.insert(g, image);
        }
        Ok(())
    }

    fn check_element(&self, e: &OperadElement, what: &str) -> Result<()> {
        if e.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        for (t, _) in e.terms() {
            t.validate(&self.sig)?;
            if self.planar && !t.is_planar_ordered() {
                return Err(Error::Invalid(format!(
                    "{what} term {} is not planar",
                    t.format(&self.sig)
                )));
            }
        }
        Ok(())
    }

    /// `d` on a generator as a closure suitable for [`OperadElement::differential`].
    pub fn d_of(&self, g: GenId) -> Option<OperadElement> {
        self.differential.get(&g).cloned()
    }

    /// Applies the Leibniz extension of the differential in the free operad.
    pub fn apply_differential(&self, e: &OperadElement) -> OperadElement {
        e.differential(&|g| self.d_of(g), &self.sig)
    }

    pub fn generator_element(&self, g: GenId) -> OperadElement {
        OperadElement::generator(g, self.field, &self.sig)
    }

    pub fn max_relation_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity()).max().unwrap_or(0)
    }

    /// Same generators and differential, no relations.
    pub fn without_relations(&self) -> Presentation {
        let mut out = self.clone();
        out.relations.clear();
        out
    }

    /// Same generators, relations replaced, differential dropped.
    pub fn with_relations(&self, relations: Vec<OperadElement>) -> Result<Presentation> {
        let mut out = self.clone();
        out.relations.clear();
        out.differential.clear();
        for r in relations {
            out.add_relation(r)?;
        }
        Ok(out)
    }
}
