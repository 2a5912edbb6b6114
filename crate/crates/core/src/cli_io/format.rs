use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{ChainComplex, Scalar, SparseMap};
use crate::ns_operadic::{ConvElement, NsCooperad, Tensor};

/// JSON integer, or a decimal string when it does not fit in 64 bits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Big(String),
}

impl Num {
    pub fn from_bigint(n: &BigInt) -> Num {
        n.to_i64().map(Num::Int).unwrap_or_else(|| Num::Big(n.to_string()))
    }

    pub fn to_bigint(&self, path: &str) -> Result<BigInt> {
        match self {
            Num::Int(v) => Ok(BigInt::from(*v)),
            Num::Big(s) => s.trim().parse().map_err(|_| Error::parse(path, format!("`{s}` is not an integer"))),
        }
    }

    fn index(&self, path: &str) -> Result<usize> {
        match self {
            Num::Int(v) if *v >= 0 => Ok(*v as usize),
            _ => Err(Error::parse(path, "indices are non-negative integers")),
        }
    }
}

/// `[index…, numerator, denominator]`.
pub type Entry = Vec<Num>;

pub fn scalar_to_nums<F: Scalar>(x: &F) -> [Num; 2] {
    let (n, d) = x.to_ratio();
    [Num::from_bigint(&n), Num::from_bigint(&d)]
}

pub fn nums_to_scalar<F: Scalar>(num: &Num, den: &Num, path: &str) -> Result<F> {
    let (n, d) = (num.to_bigint(path)?, den.to_bigint(path)?);
    F::from_ratio(&n, &d).ok_or_else(|| Error::parse(path, format!("denominator {d} is not invertible in {}", F::field())))
}

fn split_entry<F: Scalar>(e: &Entry, n_idx: usize, path: &str) -> Result<(Vec<usize>, F)> {
    if e.len() != n_idx + 2 {
        return Err(Error::parse(path, format!("expected {n_idx} indices then numerator and denominator")));
    }
    let idx = e[..n_idx].iter().map(|x| x.index(path)).collect::<Result<Vec<_>>>()?;
    Ok((idx, nums_to_scalar(&e[n_idx], &e[n_idx + 1], path)?))
}

pub fn tensor_to_entries<F: Scalar>(t: &Tensor<F>) -> Vec<Entry> {
    t.entries()
        .iter()
        .map(|(k, v)| k.iter().map(|i| Num::Int(*i as i64)).chain(scalar_to_nums(v)).collect())
        .collect()
}

/// Entries are `[input…, output, num, den]`.
pub fn entries_to_tensor<F: Scalar>(
    arity: usize,
    degree: i32,
    (src, tgt): (usize, usize),
    entries: &[Entry],
    path: &str,
) -> Result<Tensor<F>> {
    let mut t = Tensor::zero(arity, degree);
    for (j, e) in entries.iter().enumerate() {
        let p = format!("{path}[{j}]");
        let (key, v) = split_entry::<F>(e, arity + 1, &p)?;
        if key[..arity].iter().any(|i| *i >= src) || key[arity] >= tgt {
            return Err(Error::parse(p, "basis index out of range"));
        }
        t.add_term(key, &v);
    }
    Ok(t)
}

pub fn map_to_entries<F: Scalar>(m: &SparseMap<F>) -> Vec<Entry> {
    m.entries()
        .iter()
        .map(|(r, c, v)| [Num::Int(*r as i64), Num::Int(*c as i64)].into_iter().chain(scalar_to_nums(v)).collect())
        .collect()
}

/// Entries are `[row, col, num, den]`.
pub fn entries_to_map<F: Scalar>(rows: usize, cols: usize, entries: &[Entry], path: &str) -> Result<SparseMap<F>> {
    let mut trip = Vec::new();
    for (j, e) in entries.iter().enumerate() {
        let p = format!("{path}[{j}]");
        let (idx, v) = split_entry::<F>(e, 2, &p)?;
        if idx[0] >= rows || idx[1] >= cols {
            return Err(Error::parse(p, format!("entry outside a {rows}x{cols} matrix")));
        }
        trip.push((idx[0], idx[1], v));
    }
    SparseMap::from_triplets(rows, cols, trip)
}

/// A convolution element keyed by cooperad element names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub degree: i32,
    pub components: BTreeMap<String, Vec<Entry>>,
}

impl ElementJson {
    pub fn from_element<F: Scalar>(x: &ConvElement<F>) -> Self {
        let coop = x.cooperad();
        ElementJson {
            degree: x.degree(),
            components: x.components().map(|(c, t)| (coop.element(c).name.clone(), tensor_to_entries(t))).collect(),
        }
    }

    pub fn to_element<F: Scalar>(
        &self,
        coop: &Arc<NsCooperad<F>>,
        src: &Arc<ChainComplex<F>>,
        tgt: &Arc<ChainComplex<F>>,
        path: &str,
    ) -> Result<ConvElement<F>> {
        let mut x = ConvElement::zero(coop.clone(), src.clone(), tgt.clone(), self.degree);
        for (name, entries) in &self.components {
            let p = format!("{path}.components.{name}");
            let c = coop.find(name).ok_or_else(|| Error::parse(&p, format!("no cooperad element named `{name}`")))?;
            let dims = (src.dim(), tgt.dim());
            let t = entries_to_tensor(coop.arity(c), self.degree + coop.degree(c), dims, entries, &p)?;
            x.set(c, t).map_err(|e| Error::parse(&p, e.to_string()))?;
        }
        Ok(x)
    }
}

/// Pretty JSON with arrays of scalars kept on one line.
pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let items: Vec<String> = xs.iter().map(|x| serde_json::to_string(x).expect("serializable")).collect();
            out.push_str(&format!("[{}]", items.join(", ")));
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (j, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if j + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (j, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("serializable"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if j + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("serializable")),
    }
}
