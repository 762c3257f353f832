use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactla::{Echelon, Field, Scalar, SparseVec};

/// Finite chain complex with a global basis; `d` lowers degree by one.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteChainComplex {
    pub field: Field,
    labels: Vec<String>,
    degrees: Vec<i32>,
    /// `d[i]` is the image of basis element `i`.
    d: Vec<SparseVec>,
}

impl FiniteChainComplex {
    /// Builds a complex from `(label, degree)` pairs and differential
    /// entries `(from, to, coef)` given by label.
    pub fn new(field: Field, basis: Vec<(String, i32)>, d: &[(String, String, Scalar)]) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (i, (l, deg)) in basis.iter().enumerate() {
            if *deg < 0 {
                return Err(Error::Invalid(format!("cell `{l}` has negative degree")));
            }
            if seen.insert(l.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate cell `{l}`")));
            }
        }
        let (labels, degrees): (Vec<String>, Vec<i32>) = basis.into_iter().unzip();
        let mut pairs: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); labels.len()];
        for (from, to, c) in d {
            let f = *seen.get(from).ok_or_else(|| Error::Invalid(format!("unknown cell `{from}`")))?;
            let t = *seen.get(to).ok_or_else(|| Error::Invalid(format!("unknown cell `{to}`")))?;
            if degrees[t] != degrees[f] - 1 {
                return Err(Error::DegreeMismatch(format!("d({from}) = {to} does not lower degree by one")));
            }
            pairs[f].push((t, c.clone()));
        }
        let c = FiniteChainComplex {
            field,
            labels,
            degrees,
            d: pairs.into_iter().map(SparseVec::from_pairs).collect(),
        };
        for i in 0..c.dim() {
            if !c.apply_d(&c.d[i]).is_zero() {
                return Err(Error::Invalid(format!("d∘d is nonzero on `{}`", c.labels[i])));
            }
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn d_of(&self, i: usize) -> &SparseVec {
        &self.d[i]
    }

    /// Distinct degrees carrying basis elements, ascending.
    pub fn degrees(&self) -> Vec<i32> {
        let mut v = self.degrees.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn apply_d(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.entries() {
            out = out.axpy(c, &self.d[*i]);
        }
        out
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn vector_degree(&self, v: &SparseVec) -> Result<Option<i32>> {
        let mut deg = None;
        for (i, _) in v.entries() {
            match deg {
                None => deg = Some(self.degrees[*i]),
                Some(d) if d != self.degrees[*i] => {
                    return Err(Error::DegreeMismatch("inhomogeneous vector".into()))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// For each basis index `i`, the pairs `(j, c)` with `d(e_j) ∋ c·e_i`.
    pub(crate) fn d_preimages(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut pre = vec![Vec::new(); self.dim()];
        for (j, v) in self.d.iter().enumerate() {
            for (i, c) in v.entries() {
                pre[*i].push((j, c.clone()));
            }
        }
        pre
    }

    /// Parses a vector such as `S4+ - 2*S4-` or `[S4+]-[S4-]`. Labels may
    /// contain sign characters; the longest known label wins.
    pub fn parse_vector(&self, text: &str) -> Result<SparseVec> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let mut pairs = Vec::new();
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                break;
            }
            let mut sign = 1;
            while pos < chars.len() && matches!(chars[pos], '+' | '-') {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
                skip_ws(&mut pos);
            }
            let mut coef = self.field.one();
            let rest: String = chars[pos..].iter().collect();
            if let Some(star) = rest.find('*') {
                let head = rest[..star].trim();
                if !head.is_empty() && head.chars().all(|c| c.is_ascii_digit() || c == '/') {
                    coef = self
                        .field
                        .parse(head)
                        .ok_or_else(|| Error::Invalid(format!("bad coefficient `{head}`")))?;
                    pos += rest[..=star].chars().count();
                    skip_ws(&mut pos);
                }
            }
            let bracket = pos < chars.len() && matches!(chars[pos], '[' | '⟨');
            if bracket {
                pos += 1;
            }
            let rest: String = chars[pos..].iter().collect();
            let label = self
                .labels
                .iter()
                .filter(|l| rest.starts_with(l.as_str()))
                .max_by_key(|l| l.len())
                .ok_or_else(|| Error::Invalid(format!("no cell label at `{rest}`")))?;
            let i = self.index(label).expect("label present");
            pos += label.chars().count();
            if bracket {
                if pos < chars.len() && matches!(chars[pos], ']' | '⟩') {
                    pos += 1;
                } else {
                    return Err(Error::Invalid(format!("unclosed bracket after `{label}`")));
                }
            }
            pairs.push((i, coef.signed(sign)));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    pub fn format_vector(&self, v: &SparseVec) -> String {
        format_combination(v, |i| self.labels[i].clone())
    }

    /// Reads the JSON complex format (`degrees`, `d`, optional `field`); the
    /// `algebra` section is read separately.
    pub fn from_json(value: &Value) -> Result<Self> {
        let raw: RawComplex =
            serde_json::from_value(value.clone()).map_err(|e| Error::Invalid(format!("complex JSON: {e}")))?;
        let field = match &raw.field {
            Some(f) => crate::syntax::parse_field(f).ok_or_else(|| Error::Invalid(format!("unknown field `{f}`")))?,
            None => Field::Rational,
        };
        let mut basis = Vec::new();
        for (deg, labels) in &raw.degrees {
            let d: i32 = deg
                .parse()
                .map_err(|_| Error::Invalid(format!("degree key `{deg}` is not an integer")))?;
            for l in labels {
                basis.push((l.clone(), d));
            }
        }
        basis.sort_by_key(|(_, d)| *d);
        let mut d = Vec::new();
        for entry in &raw.d {
            if entry.len() != 3 {
                return Err(Error::Invalid("differential entries are [from, to, coef]".into()));
            }
            let from = as_label(&entry[0])?;
            let to = as_label(&entry[1])?;
            d.push((from, to, json_scalar(&entry[2], field)?));
        }
        FiniteChainComplex::new(field, basis, &d)
    }

    pub fn to_json(&self) -> Value {
        let mut degrees: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (l, d) in self.labels.iter().zip(&self.degrees) {
            degrees.entry(d.to_string()).or_default().push(l.clone());
        }
        let mut d = Vec::new();
        for (i, v) in self.d.iter().enumerate() {
            for (j, c) in v.entries() {
                d.push(serde_json::json!([self.labels[i], self.labels[*j], c.to_string()]));
            }
        }
        serde_json::json!({ "field": self.field.to_string(), "degrees": degrees, "d": d })
    }

    /// Homology with chosen cycle representatives.
    pub fn homology(&self) -> ChainHomology {
        ChainHomology::new(self)
    }
}

#[derive(Deserialize)]
struct RawComplex {
    #[serde(default)]
    field: Option<String>,
    degrees: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    d: Vec<Vec<Value>>,
}

pub(crate) fn as_label(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        other => Err(Error::Invalid(format!("expected a cell label, found {other}"))),
    }
}

pub(crate) fn json_scalar(v: &Value, field: Field) -> Result<Scalar> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::Invalid(format!("bad coefficient {other}"))),
    };
    field
        .parse(&text)
        .ok_or_else(|| Error::Invalid(format!("bad coefficient `{text}`")))
}

pub(crate) fn format_combination(v: &SparseVec, label: impl Fn(usize) -> String) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in v.entries().iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { c.neg() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "-" } else { "+" });
        }
        if !abs.is_one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&label(*i));
    }
    out
}

/// Homology of a [`FiniteChainComplex`], degree by degree.
#[derive(Clone, Debug)]
pub struct ChainHomology {
    field: Field,
    /// Cycles whose classes form a basis, in ascending degree.
    pub representatives: Vec<SparseVec>,
    pub rep_degrees: Vec<i32>,
    classes: Echelon,
    d: Vec<SparseVec>,
}

impl ChainHomology {
    fn new(c: &FiniteChainComplex) -> Self {
        let field = c.field;
        let mut reps = Vec::new();
        let mut rep_degrees = Vec::new();
        let mut classes = Echelon::new(field);
        for v in &c.d {
            classes.insert(v);
        }
        // kernel of d, degree by degree
        for deg in c.degrees() {
            let idx: Vec<usize> = (0..c.dim()).filter(|&i| c.degrees[i] == deg).collect();
            let mut img = Echelon::new(field);
            for &i in &idx {
                if let Some(rel) = img.insert_tagged(&c.d[i], &SparseVec::unit(i, field)) {
                    let t = reps.len();
                    if classes.insert_tagged(&rel, &SparseVec::unit(t, field)).is_none() {
                        reps.push(rel);
                        rep_degrees.push(deg);
                    }
                }
            }
        }
        ChainHomology {
            field,
            representatives: reps,
            rep_degrees,
            classes,
            d: c.d.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn dim_in(&self, degree: i32) -> usize {
        self.rep_degrees.iter().filter(|&&d| d == degree).count()
    }

    pub fn is_cycle(&self, v: &SparseVec) -> bool {
        let mut out = SparseVec::new();
        for (i, c) in v.entries() {
            out = out.axpy(c, &self.d[*i]);
        }
        out.is_zero()
    }

    /// Coordinates of the class of a cycle in the representative basis.
    pub fn class_of(&self, v: &SparseVec) -> Result<SparseVec> {
        if !self.is_cycle(v) {
            return Err(Error::NotACycle("chain has nonzero differential".into()));
        }
        let red = self.classes.reduce_tagged(v, &SparseVec::new());
        if !red.residue.is_zero() {
            return Err(Error::Internal("cycle outside classes and boundaries".into()));
        }
        Ok(red.tag.scale(&self.field.one().neg()))
    }

    /// Cycle representing the given class coordinates.
    pub fn cycle(&self, coords: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in coords.entries() {
            out = out.axpy(c, &self.representatives[*i]);
        }
        out
    }

    /// `[a]+[b]` style rendering of class coordinates.
    pub fn format_class(&self, c: &FiniteChainComplex, coords: &SparseVec) -> String {
        format_combination(coords, |i| format!("[{}]", c.format_vector(&self.representatives[i])))
    }
}
