use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::format::{entries_to_map, entries_to_tensor, nums_to_scalar, Entry, Num};
use crate::ainf::{build_as_koszul_cooperad, contraction_from_complex, mu_name, AInfinityStructure, Contraction, PivotOrder};
use crate::error::{Error, Result};
use crate::exact_algebra::{is_prime, ChainComplex, ExactField, GradedModule, Scalar, SparseMap};
use crate::ns_operadic::{ConvElement, NsCooperad, NsCooperadBuilder, COUNIT};

/// `Q` or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// Accepts `Q`, `Fp:<p>`, `F<p>` and `F<p>:<p>`.
    pub fn parse(s: &str, path: &str) -> Result<FieldSpec> {
        let s = s.trim();
        if s == "Q" || s == "QQ" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = match (s.strip_prefix("Fp:"), s.strip_prefix('F')) {
            (Some(p), _) => p.to_string(),
            (None, Some(rest)) => match rest.split_once(':') {
                Some((a, b)) if a == b => a.to_string(),
                Some(_) => return Err(Error::parse(path, format!("inconsistent field spec `{s}`"))),
                None => rest.to_string(),
            },
            _ => return Err(Error::parse(path, format!("unknown field `{s}`; use Q or Fp:<p>"))),
        };
        let p: u64 = digits.parse().map_err(|_| Error::parse(path, format!("unknown field `{s}`; use Q or Fp:<p>")))?;
        if !is_prime(p) {
            return Err(Error::parse(path, format!("{p} is not prime, so F{p} is not a prime field")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn exact(&self) -> ExactField {
        match self {
            FieldSpec::Rationals => ExactField::Rationals,
            FieldSpec::Prime(p) => ExactField::PrimeField(*p),
        }
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub name: String,
    pub weight: usize,
    pub arity: usize,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionSpec {
    pub element: String,
    pub root: String,
    pub leaves: Vec<String>,
    pub coeff: [Num; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialSpec {
    pub element: String,
    pub terms: Vec<(String, Num, Num)>,
}

/// Structure constants of a cooperad; the counit is named `I` and its terms are implicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineCooperad {
    pub elements: Vec<ElementSpec>,
    #[serde(default)]
    pub decompositions: Vec<DecompositionSpec>,
    #[serde(default)]
    pub differential: Vec<DifferentialSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CooperadSpec {
    Builtin(String),
    Inline(InlineCooperad),
}

impl Default for CooperadSpec {
    fn default() -> Self {
        CooperadSpec::Builtin(AS_KOSZUL.into())
    }
}

pub const AS_KOSZUL: &str = "as-koszul";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionSpec {
    pub homology_degrees: Vec<i32>,
    pub i: Vec<Entry>,
    pub p: Vec<Entry>,
    #[serde(default)]
    pub h: Vec<Entry>,
}

/// On-disk problem description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_cap: Option<usize>,
    pub degrees: Vec<i32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<Entry>,
    /// `m_n` keyed by `n`, entries `[input…, output, num, den]`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operations: BTreeMap<String, Vec<Entry>>,
    /// Components keyed by cooperad element name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub structure: BTreeMap<String, Vec<Entry>>,
    #[serde(default)]
    pub cooperad: CooperadSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionSpec>,
    /// Automorphism of the homology for the criteria, `[row, col, num, den]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub automorphism: Vec<Entry>,
}

/// A parsed problem with the hash of its canonical JSON form.
#[derive(Clone, Debug)]
pub struct ParsedProblem {
    pub file: ProblemFile,
    pub hash: String,
}

pub fn parse_problem_str(text: &str) -> Result<ParsedProblem> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ProblemFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::parse(path, format!("{inner} (line {}, column {})", inner.line(), inner.column()))
    })?;
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::parse(".", e.to_string()))?;
    Ok(ParsedProblem { file, hash: canonical_hash(&value) })
}

pub fn parse_problem(path: &Path) -> Result<ParsedProblem> {
    let text = std::fs::read_to_string(path)?;
    parse_problem_str(&text)
}

/// SHA-256 of the compact JSON with sorted keys.
pub fn canonical_hash(value: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(value).expect("JSON values serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

impl ProblemFile {
    /// Largest arity among the declared operations or inline elements.
    pub fn max_arity(&self) -> usize {
        let ops = self.operations.keys().filter_map(|k| k.parse::<usize>().ok()).max().unwrap_or(1);
        let inline = match &self.cooperad {
            CooperadSpec::Inline(c) => c.elements.iter().map(|e| e.arity).max().unwrap_or(1),
            CooperadSpec::Builtin(_) => 1,
        };
        ops.max(inline)
    }

    /// Largest weight with a declared component.
    pub fn max_weight(&self) -> usize {
        match &self.cooperad {
            CooperadSpec::Inline(c) => c
                .elements
                .iter()
                .filter(|e| self.structure.contains_key(&e.name))
                .map(|e| e.weight)
                .max()
                .unwrap_or(1),
            CooperadSpec::Builtin(_) => {
                let from_names = self.structure.keys().filter_map(|k| k.strip_prefix("mu")?.parse::<usize>().ok());
                self.max_arity().max(from_names.max().unwrap_or(1)).saturating_sub(1).max(1)
            }
        }
    }

    pub fn is_as_koszul(&self) -> bool {
        matches!(&self.cooperad, CooperadSpec::Builtin(s) if s == AS_KOSZUL)
    }
}

/// Domain objects built from a problem at a fixed field and weight cap.
#[derive(Clone, Debug)]
pub struct Problem<F> {
    pub space: Arc<ChainComplex<F>>,
    pub coop: Arc<NsCooperad<F>>,
    pub structure: ConvElement<F>,
    pub ainf: Option<AInfinityStructure<F>>,
    pub contraction: Option<Contraction<F>>,
}

fn build_cooperad<F: Scalar>(spec: &CooperadSpec, cap: usize) -> Result<Arc<NsCooperad<F>>> {
    match spec {
        CooperadSpec::Builtin(name) if name == AS_KOSZUL => build_as_koszul_cooperad(cap),
        CooperadSpec::Builtin(name) => Err(Error::parse("cooperad", format!("unknown builtin cooperad `{name}`"))),
        CooperadSpec::Inline(c) => {
            let mut b = NsCooperadBuilder::<F>::new(cap);
            for (j, e) in c.elements.iter().enumerate() {
                if e.name == "I" || b.find(&e.name).is_some() {
                    return Err(Error::parse(format!("cooperad.elements[{j}]"), format!("duplicate name `{}`", e.name)));
                }
                if e.weight == 0 || e.arity == 0 {
                    return Err(Error::parse(format!("cooperad.elements[{j}]"), "elements have positive weight and arity"));
                }
                if e.weight <= cap {
                    b.add_element(e.name.clone(), e.weight, e.arity, e.degree);
                }
            }
            let known = |b: &NsCooperadBuilder<F>, name: &str| b.find(name);
            for (j, d) in c.decompositions.iter().enumerate() {
                let path = format!("cooperad.decompositions[{j}]");
                let Some(el) = known(&b, &d.element) else {
                    if c.elements.iter().any(|e| e.name == d.element) {
                        continue;
                    }
                    return Err(Error::parse(path, format!("unknown element `{}`", d.element)));
                };
                let root = known(&b, &d.root).ok_or_else(|| Error::parse(&path, format!("unknown root `{}`", d.root)))?;
                let leaves = d
                    .leaves
                    .iter()
                    .map(|l| known(&b, l).ok_or_else(|| Error::parse(&path, format!("unknown leaf `{l}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let coeff = nums_to_scalar(&d.coeff[0], &d.coeff[1], &path)?;
                b.add_decomposition(el, root, leaves, coeff).map_err(|e| Error::parse(&path, e.to_string()))?;
            }
            for (j, d) in c.differential.iter().enumerate() {
                let path = format!("cooperad.differential[{j}]");
                let Some(el) = known(&b, &d.element) else {
                    if c.elements.iter().any(|e| e.name == d.element) {
                        continue;
                    }
                    return Err(Error::parse(path, format!("unknown element `{}`", d.element)));
                };
                let terms = d
                    .terms
                    .iter()
                    .map(|(name, n, den)| {
                        let t = known(&b, name).ok_or_else(|| Error::parse(&path, format!("unknown element `{name}`")))?;
                        Ok((t, nums_to_scalar(n, den, &path)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                b.set_differential(el, terms).map_err(|e| Error::parse(&path, e.to_string()))?;
            }
            Ok(Arc::new(b.build()?))
        }
    }
}

fn build_contraction<F: Scalar>(spec: &ContractionSpec, a: &Arc<ChainComplex<F>>) -> Result<Contraction<F>> {
    let (n, m) = (a.dim(), spec.homology_degrees.len());
    let homology = Arc::new(ChainComplex::with_zero_differential(GradedModule::new(F::field(), spec.homology_degrees.clone())));
    let c = Contraction {
        homology,
        complex: a.clone(),
        i: entries_to_map(n, m, &spec.i, "contraction.i")?,
        p: entries_to_map(m, n, &spec.p, "contraction.p")?,
        h: entries_to_map(n, n, &spec.h, "contraction.h")?,
    };
    if let Some(name) = c.first_failure()? {
        return Err(Error::parse("contraction", format!("fails {name}")));
    }
    Ok(c)
}

/// Builds the domain objects; `cap` is the weight cap of the cooperad.
pub fn load<F: Scalar>(file: &ProblemFile, cap: usize) -> Result<Problem<F>> {
    if cap == 0 {
        return Err(Error::parse("weight_cap", "the weight cap must be at least 1"));
    }
    let n = file.degrees.len();
    let d = entries_to_map::<F>(n, n, &file.differential, "differential")?;
    let space = Arc::new(
        ChainComplex::new(GradedModule::new(F::field(), file.degrees.clone()), d)
            .map_err(|e| Error::parse("differential", e.to_string()))?,
    );
    let coop = build_cooperad::<F>(&file.cooperad, cap)?;
    let mut structure = ConvElement::zero(coop.clone(), space.clone(), space.clone(), -1);
    let mut ainf = None;
    if !file.operations.is_empty() {
        if !file.is_as_koszul() {
            return Err(Error::parse("operations", "operations m_n need the as-koszul cooperad; use `structure`"));
        }
        if !file.structure.is_empty() {
            return Err(Error::parse("structure", "give either `operations` or `structure`, not both"));
        }
        let mut a = AInfinityStructure::new(space.clone());
        for (key, entries) in &file.operations {
            let path = format!("operations.{key}");
            let k: usize = key.parse().map_err(|_| Error::parse(&path, "keys are arities"))?;
            if k < 2 {
                return Err(Error::parse(&path, "m_1 is the differential"));
            }
            if k > cap + 1 {
                return Err(Error::parse(&path, format!("m_{k} needs weight cap at least {}", k - 1)));
            }
            let t = entries_to_tensor(k, k as i32 - 2, (n, n), entries, &path)?;
            a.set_operation(k, t).map_err(|e| Error::parse(&path, e.to_string()))?;
        }
        structure = crate::ainf::ainf_to_conv(&a, &coop)?;
        ainf = Some(a);
    } else {
        for (name, entries) in &file.structure {
            let path = format!("structure.{name}");
            let Some(c) = coop.find(name) else {
                let declared = match &file.cooperad {
                    CooperadSpec::Inline(ic) => ic.elements.iter().any(|e| &e.name == name),
                    CooperadSpec::Builtin(_) => name.strip_prefix("mu").and_then(|s| s.parse::<usize>().ok()).is_some(),
                };
                if declared {
                    return Err(Error::parse(&path, format!("component `{name}` lies above the weight cap {cap}")));
                }
                return Err(Error::parse(&path, format!("no cooperad element named `{name}`")));
            };
            if c == COUNIT {
                return Err(Error::parse(&path, "structures have no counit component"));
            }
            let t = entries_to_tensor(coop.arity(c), coop.degree(c) - 1, (n, n), entries, &path)?;
            structure.set(c, t).map_err(|e| Error::parse(&path, e.to_string()))?;
        }
        if file.is_as_koszul() {
            let mut a = AInfinityStructure::new(space.clone());
            for k in 2..=cap + 1 {
                if let Some(c) = coop.find(&mu_name(k)) {
                    a.set_operation(k, structure.component(c))?;
                }
            }
            ainf = Some(a);
        }
    }
    let contraction = file.contraction.as_ref().map(|c| build_contraction(c, &space)).transpose()?;
    Ok(Problem { space, coop, structure, ainf, contraction })
}

impl<F: Scalar> Problem<F> {
    /// The file's contraction, or one generated from the complex.
    pub fn contraction_or_auto(&self, order: PivotOrder) -> Result<Contraction<F>> {
        match &self.contraction {
            Some(c) => Ok(c.clone()),
            None => contraction_from_complex(&self.space, order),
        }
    }

    /// `u` on the homology, from the file entries.
    pub fn automorphism_map(&self, entries: &[Entry], dim: usize, path: &str) -> Result<SparseMap<F>> {
        entries_to_map(dim, dim, entries, path)
    }
}
