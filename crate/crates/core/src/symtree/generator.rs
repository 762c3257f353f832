use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the symmetric group acts on a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// Free Σ-module on one generator.
    None,
    Symmetric,
    Antisymmetric,
    /// Invariant under rotation of the inputs.
    Cyclic,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::None => "none",
            Symmetry::Symmetric => "symmetric",
            Symmetry::Antisymmetric => "antisymmetric",
            Symmetry::Cyclic => "cyclic",
        })
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Symmetry> {
        match s {
            "none" => Ok(Symmetry::None),
            "symmetric" => Ok(Symmetry::Symmetric),
            "antisymmetric" => Ok(Symmetry::Antisymmetric),
            "cyclic" => Ok(Symmetry::Cyclic),
            _ => Err(Error::Invalid(format!("unknown symmetry `{s}`"))),
        }
    }
}

/// Index of a generator inside a [`Signature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u16);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub name: String,
    pub arity: usize,
    pub degree: i32,
    pub symmetry: Symmetry,
}

impl GeneratorSymbol {
    pub fn new(name: impl Into<String>, arity: usize, degree: i32, symmetry: Symmetry) -> Self {
        GeneratorSymbol {
            name: name.into(),
            arity,
            degree,
            symmetry,
        }
    }

    /// Suspended copy `s.name`, one degree higher.
    pub fn suspended(&self) -> GeneratorSymbol {
        GeneratorSymbol {
            name: format!("s.{}", self.name),
            arity: self.arity,
            degree: self.degree + 1,
            symmetry: self.symmetry,
        }
    }

    /// Desuspended copy `ds.name`, one degree lower.
    pub fn desuspended(&self) -> GeneratorSymbol {
        GeneratorSymbol {
            name: format!("ds.{}", self.name),
            arity: self.arity,
            degree: self.degree - 1,
            symmetry: self.symmetry,
        }
    }
}

/// An ordered generator table. Ids are positions; extending a signature
/// never renumbers existing generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    gens: Vec<GeneratorSymbol>,
    markers: Vec<bool>,
    by_name: HashMap<String, GenId>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn from_generators(gens: impl IntoIterator<Item = GeneratorSymbol>) -> Result<Signature> {
        let mut sig = Signature::new();
        for g in gens {
            sig.push(g)?;
        }
        Ok(sig)
    }

    pub fn push(&mut self, g: GeneratorSymbol) -> Result<GenId> {
        self.push_with_marker(g, false)
    }

    /// Adds an internal placeholder generator, counted by enumeration marks.
    pub(crate) fn push_marker(&mut self, g: GeneratorSymbol) -> Result<GenId> {
        self.push_with_marker(g, true)
    }

    fn push_with_marker(&mut self, g: GeneratorSymbol, marker: bool) -> Result<GenId> {
        if g.arity < 2 {
            return Err(Error::Invalid(format!(
                "generator `{}` has arity {}; arities must be at least 2",
                g.name, g.arity
            )));
        }
        if self.by_name.contains_key(&g.name) {
            return Err(Error::Invalid(format!("duplicate generator `{}`", g.name)));
        }
        let id = GenId(self.gens.len() as u16);
        self.by_name.insert(g.name.clone(), id);
        self.gens.push(g);
        self.markers.push(marker);
        Ok(id)
    }

    pub fn get(&self, id: GenId) -> &GeneratorSymbol {
        &self.gens[id.0 as usize]
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<GenId> {
        self.find(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn degree(&self, id: GenId) -> i32 {
        self.gens[id.0 as usize].degree
    }

    pub fn arity(&self, id: GenId) -> usize {
        self.gens[id.0 as usize].arity
    }

    pub fn symmetry(&self, id: GenId) -> Symmetry {
        self.gens[id.0 as usize].symmetry
    }

    pub fn is_marker(&self, id: GenId) -> bool {
        self.markers[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.gens.len() as u16).map(GenId)
    }

    pub fn generators(&self) -> impl Iterator<Item = (GenId, &GeneratorSymbol)> {
        self.gens
            .iter()
            .enumerate()
            .map(|(i, g)| (GenId(i as u16), g))
    }
}
