use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use clap::ValueEnum;
use num_rational::Ratio;
use serde::de::DeserializeOwned;
use serde::Serialize;

use super::certificate::*;
use super::format::{entries_to_map, tensor_to_entries, to_json_text, ElementJson, Entry};
use super::problem::{load, parse_problem, ContractionSpec, FieldSpec, ParsedProblem, Problem, ProblemFile};
use super::{Cli, Command, CriterionKind, Outcome, SUPPORTED_PRIMES, WEIGHT_CAP_ENV};
use crate::ainf::{conv_to_ainf, homotopy_transfer, PivotOrder};
use crate::criteria::{self, CriterionReport, HomologyAutomorphism};
use crate::error::{Error, Result};
use crate::exact_algebra::{scalar_from_str, ChainComplex, Scalar};
use crate::ns_operadic::{
    act_on_structure, bounded_weight_cap, check_infinity_morphism, decide_gauge_formal_bounded, decide_gauge_n_formal,
    is_isotopy, operadic_trivialize, ConvElement, ConvLie, FormalityVerdict,
};
use crate::wg_dglie::{class_rank_data, class_vanishes, truncated_kaledin_class, KaledinClassRep};
use crate::{Fp, Rational};

macro_rules! with_field {
    ($spec:expr, $func:ident $args:tt) => {
        match $spec {
            FieldSpec::Rationals => $func::<Rational> $args,
            FieldSpec::Prime(p) => with_field!(@prime p, $func $args;
                2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 97, 101, 997, 65521),
        }
    };
    (@prime $p:expr, $func:ident $args:tt; $($q:literal),*) => {
        match $p {
            $( $q => $func::<Fp<$q>> $args, )*
            other => Err(Error::parse(
                "field",
                format!("F{other} is not compiled in; supported primes are {SUPPORTED_PRIMES:?}"),
            )),
        }
    };
}

fn resolve_field(flag: Option<&str>, file: Option<&str>) -> Result<FieldSpec> {
    let from_flag = flag.map(|s| FieldSpec::parse(s, "--field")).transpose()?;
    let from_file = file.map(|s| FieldSpec::parse(s, "field")).transpose()?;
    match (from_flag, from_file) {
        (Some(a), Some(b)) if a != b => Err(Error::parse("field", format!("the file declares {b} but --field is {a}"))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Ok(FieldSpec::Rationals),
    }
}

fn resolve_cap(flag: Option<usize>, file: &ProblemFile, needed: usize) -> Result<usize> {
    if let Some(c) = flag.or(file.weight_cap) {
        return Ok(c);
    }
    if let Ok(v) = std::env::var(WEIGHT_CAP_ENV) {
        return v.trim().parse().map_err(|_| Error::parse(WEIGHT_CAP_ENV, format!("`{v}` is not a weight cap")));
    }
    Ok(needed.max(file.max_weight()))
}

struct Session<F> {
    problem: Problem<F>,
    homology: Arc<ChainComplex<F>>,
    phi_t: ConvElement<F>,
}

/// Loads the problem and transfers its structure to homology.
fn session<F: Scalar>(file: &ProblemFile, cap: usize, contraction: Option<&ContractionSpec>) -> Result<Session<F>> {
    let mut file = file.clone();
    if let Some(c) = contraction {
        file.contraction = Some(c.clone());
    }
    let problem = load::<F>(&file, cap)?;
    if let Some(weight) = problem.structure.mc_defect()? {
        return Err(Error::NotMaurerCartan { weight });
    }
    match &problem.ainf {
        Some(a) => {
            let c = problem.contraction_or_auto(PivotOrder::LowestIndex)?;
            let t = homotopy_transfer(a, &c, &problem.coop)?;
            Ok(Session { homology: c.homology.clone(), phi_t: t.structure, problem })
        }
        None if problem.space.has_zero_differential() => Ok(Session {
            homology: problem.space.clone(),
            phi_t: problem.structure.clone(),
            problem,
        }),
        None => Err(Error::contract("transfer is implemented for the as-koszul cooperad; other inputs need d = 0")),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let p = e.path().to_string();
        Error::parse(format!("{}:{p}", path.display()), e.into_inner().to_string())
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json_text(value))?;
    Ok(())
}

pub(super) fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify { problem, cert } => {
            let parsed = parse_problem(problem)?;
            let cert: Certificate = read_json(cert)?;
            Ok(if verify_certificate(&parsed, &cert)? {
                Outcome::new(0, format!("certificate verified ({:?})\n", cert.kind))
            } else {
                Outcome::new(1, format!("certificate rejected ({:?})\n", cert.kind))
            })
        }
        cmd => {
            let file = match cmd {
                Command::CheckMc { file }
                | Command::Transfer { file, .. }
                | Command::Class { file, .. }
                | Command::Formality { file, .. }
                | Command::Trivialize { file, .. }
                | Command::Criteria { file, .. } => file,
                Command::Verify { .. } => unreachable!(),
            };
            let parsed = parse_problem(file)?;
            let field = resolve_field(cli.field.as_deref(), parsed.file.field.as_deref())?;
            with_field!(field, run_typed(cli, &parsed, field))
        }
    }
}

fn run_typed<F: Scalar>(cli: &Cli, parsed: &ParsedProblem, field: FieldSpec) -> Result<Outcome> {
    let file = &parsed.file;
    let cert_header = |kind, cap, truncation, payload: serde_json::Value| Certificate {
        kind,
        tool_version: TOOL_VERSION.into(),
        problem_hash: parsed.hash.clone(),
        field: field.to_string(),
        weight_cap: cap,
        truncation,
        payload,
    };
    match &cli.command {
        Command::CheckMc { .. } => {
            let cap = resolve_cap(cli.weight_cap, file, file.max_weight() + 1)?;
            let problem = load::<F>(file, cap)?;
            Ok(match problem.structure.mc_defect()? {
                None => Outcome::new(0, format!("maurer-cartan: yes (weights 1..={cap})\n")),
                Some(w) => Outcome::new(1, format!("maurer-cartan: no (first defect in weight {w})\n")),
            })
        }
        Command::Transfer { contraction, .. } => {
            let cap = resolve_cap(cli.weight_cap, file, 1)?;
            let spec: Option<ContractionSpec> = contraction.as_deref().map(read_json).transpose()?;
            let s = session::<F>(file, cap, spec.as_ref())?;
            let mut out = ProblemFile {
                field: Some(field.to_string()),
                weight_cap: Some(cap),
                degrees: s.homology.degrees().to_vec(),
                differential: vec![],
                operations: BTreeMap::new(),
                structure: BTreeMap::new(),
                cooperad: file.cooperad.clone(),
                contraction: None,
                automorphism: vec![],
            };
            if s.problem.ainf.is_some() {
                let a = conv_to_ainf(&s.phi_t)?;
                out.operations = a.operations().iter().map(|(k, t)| (k.to_string(), tensor_to_entries(t))).collect();
            } else {
                out.structure = ElementJson::from_element(&s.phi_t).components;
            }
            Ok(Outcome::new(0, to_json_text(&out)))
        }
        Command::Class { truncation, .. } => {
            let n = *truncation;
            let cap = resolve_cap(cli.weight_cap, file, n + 1)?;
            let s = session::<F>(file, cap, None)?;
            let g = ConvLie::new(s.problem.coop.clone(), s.homology.clone())?;
            let rep = truncated_kaledin_class(&g, &s.phi_t, n)?;
            let (zero, _) = class_vanishes(&g, &rep)?;
            let (rank, aug) = class_rank_data(&g, &rep)?;
            let cycle: Vec<ElementJson> = rep.cycle.iter().map(ElementJson::from_element).collect();
            let text = format!(
                "class K^{n}: {}\nrank {rank}, augmented rank {aug}\ncycle: {}\n",
                if zero { "zero" } else { "nonzero" },
                serde_json::to_string(&cycle).expect("serializable"),
            );
            Ok(Outcome::new(if zero { 0 } else { 1 }, text))
        }
        Command::Formality { truncation, full, certificate, .. } => {
            let (s, cap) = if *full {
                let probe = load::<F>(file, resolve_cap(cli.weight_cap, file, 1)?)?;
                let degrees = match &probe.ainf {
                    Some(_) => probe.contraction_or_auto(PivotOrder::LowestIndex)?.homology.degrees().to_vec(),
                    None => probe.space.degrees().to_vec(),
                };
                let w0 = bounded_weight_cap(&degrees)
                    .ok_or_else(|| Error::Undecided("homology in negative degrees has unbounded weight support".into()))?;
                let cap = resolve_cap(cli.weight_cap, file, w0)?;
                (session::<F>(file, cap, None)?, cap)
            } else {
                let n = truncation.expect("clap requires --truncation without --full");
                let cap = resolve_cap(cli.weight_cap, file, n + 1)?;
                (session::<F>(file, cap, None)?, cap)
            };
            let verdict = if *full { decide_gauge_formal_bounded(&s.phi_t)? } else { decide_gauge_n_formal(&s.phi_t, truncation.unwrap())? };
            let (code, text, cert) = match &verdict {
                FormalityVerdict::Formal(c) => {
                    let payload = IsotopyPayload {
                        isotopy: ElementJson::from_element(&c.isotopy),
                        trivialized: ElementJson::from_element(&c.trivialized),
                    };
                    let label = if *full { "gauge formal".to_string() } else { format!("gauge {}-formal", c.truncation) };
                    let cert = cert_header(CertificateKind::Isotopy, cap, c.truncation, serde_json::to_value(payload).unwrap());
                    (0, format!("{label}: yes\n"), cert)
                }
                FormalityVerdict::NotFormal(o) => {
                    let payload = ObstructionPayload {
                        delta: o.class.delta,
                        twist: o.class.twist.iter().map(ElementJson::from_element).collect(),
                        cycle: o.class.cycle.iter().map(ElementJson::from_element).collect(),
                        rank: o.rank,
                        augmented_rank: o.augmented_rank,
                    };
                    let label = if *full { "gauge formal".to_string() } else { format!("gauge {}-formal", o.truncation) };
                    let cert =
                        cert_header(CertificateKind::ObstructionCycle, cap, o.truncation, serde_json::to_value(payload).unwrap());
                    let text = format!(
                        "{label}: no\nobstruction K^{} is not a boundary (rank {} < augmented rank {})\n",
                        o.truncation, o.rank, o.augmented_rank
                    );
                    (1, text, cert)
                }
            };
            if let Some(path) = certificate {
                write_json(path, &cert)?;
            }
            Ok(Outcome::new(code, text))
        }
        Command::Trivialize { truncation, certificate, .. } => {
            let n = *truncation;
            let cap = resolve_cap(cli.weight_cap, file, n + 1)?;
            let s = session::<F>(file, cap, None)?;
            match operadic_trivialize(&s.phi_t, n)? {
                None => Ok(Outcome::new(1, format!("obstructed: some K^k with k <= {n} is nonzero\n"))),
                Some((f, psi)) => {
                    let payload = GaugePayload { isotopy: ElementJson::from_element(&f) };
                    if let Some(path) = certificate {
                        let cert = cert_header(CertificateKind::Gauge, cap, n, serde_json::to_value(&payload).unwrap());
                        write_json(path, &cert)?;
                    }
                    let out = serde_json::json!({
                        "isotopy": payload.isotopy,
                        "trivialized": ElementJson::from_element(&psi),
                    });
                    Ok(Outcome::new(0, to_json_text(&out)))
                }
            }
        }
        Command::Criteria { kind, truncation, alpha, theta, automorphism, cross_check, certificate, .. } => {
            let n = *truncation;
            let cap = resolve_cap(cli.weight_cap, file, n + 1)?;
            let s = session::<F>(file, cap, None)?;
            let entries: Vec<Entry> = match automorphism {
                Some(path) => read_json(path)?,
                None => file.automorphism.clone(),
            };
            let params = CriterionParams {
                criterion: kind.to_possible_value().expect("named").get_name().to_string(),
                alpha: (*kind == CriterionKind::Purity).then(|| alpha.clone()),
                theta: (*kind == CriterionKind::Purity).then(|| theta.clone()),
                automorphism: if matches!(kind, CriterionKind::AutLift | CriterionKind::Spectrum) { entries } else { vec![] },
                cross_check: *cross_check,
            };
            let report = run_criterion(&s, &params, n)?;
            if let Some(path) = certificate {
                let payload = CriterionPayload { params, report: report.clone() };
                let cert = cert_header(CertificateKind::CriterionReport, cap, n, serde_json::to_value(payload).unwrap());
                write_json(path, &cert)?;
            }
            Ok(Outcome::new(if report.passed() { 0 } else { 1 }, report.render()))
        }
        Command::Verify { .. } => unreachable!("handled before field dispatch"),
    }
}

fn parse_theta(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::parse("--theta", format!("`{s}` is not a rational number"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

fn run_criterion<F: Scalar>(s: &Session<F>, params: &CriterionParams, n: usize) -> Result<CriterionReport> {
    let automorphism = || -> Result<HomologyAutomorphism<F>> {
        if params.automorphism.is_empty() {
            return Err(Error::parse("automorphism", "this criterion needs an automorphism of the homology"));
        }
        let dim = s.homology.dim();
        let m = entries_to_map(dim, dim, &params.automorphism, "automorphism")?;
        HomologyAutomorphism::from_matrix(s.homology.clone(), m)
    };
    let mut report = match params.criterion.as_str() {
        "purity" => {
            let a = params.alpha.as_deref().unwrap_or("2");
            let alpha = scalar_from_str::<F>(a).ok_or_else(|| Error::parse("--alpha", format!("`{a}` is not a scalar")))?;
            criteria::purity_criterion(&alpha, parse_theta(params.theta.as_deref().unwrap_or("1"))?, &s.phi_t, n)?
        }
        "aut-lift" => criteria::aut_lift_criterion(&automorphism()?, &s.phi_t, n)?,
        "spectrum" => criteria::spectrum_criterion(&automorphism()?, &s.phi_t, n)?,
        "intrinsic" => criteria::intrinsic_criterion(&s.phi_t, n)?,
        other => return Err(Error::Certificate(format!("unknown criterion `{other}`"))),
    };
    if params.cross_check {
        criteria::cross_check(&mut report, &s.phi_t)?;
    }
    Ok(report)
}

/// Re-derives the certified property from the problem alone.
pub fn verify_certificate(problem: &ParsedProblem, cert: &Certificate) -> Result<bool> {
    if cert.problem_hash != problem.hash {
        return Err(Error::HashMismatch { expected: cert.problem_hash.clone(), found: problem.hash.clone() });
    }
    let field = FieldSpec::parse(&cert.field, "certificate.field")?;
    with_field!(field, verify_typed(problem, cert))
}

fn payload<T: DeserializeOwned>(cert: &Certificate) -> Result<T> {
    serde_path_to_error::deserialize(cert.payload.clone())
        .map_err(|e| Error::Certificate(format!("payload at {}: {}", e.path(), e.inner())))
}

fn middle_weights_vanish<F: Scalar>(psi: &ConvElement<F>, n: usize) -> bool {
    (2..=n + 1).all(|w| psi.weight_part(w).is_zero())
}

fn verify_typed<F: Scalar>(problem: &ParsedProblem, cert: &Certificate) -> Result<bool> {
    let s = session::<F>(&problem.file, cert.weight_cap, None)?;
    let (coop, h) = (&s.problem.coop, &s.homology);
    let n = cert.truncation;
    match cert.kind {
        CertificateKind::Gauge => {
            let p: GaugePayload = payload(cert)?;
            let f = p.isotopy.to_element(coop, h, h, "payload.isotopy")?;
            if f.degree() != 0 || !is_isotopy(&f) {
                return Ok(false);
            }
            let psi = act_on_structure(&f, &s.phi_t)?;
            Ok(middle_weights_vanish(&psi, n))
        }
        CertificateKind::Isotopy => {
            let p: IsotopyPayload = payload(cert)?;
            let f = p.isotopy.to_element(coop, h, h, "payload.isotopy")?;
            let psi = p.trivialized.to_element(coop, h, h, "payload.trivialized")?;
            if f.degree() != 0 || psi.degree() != -1 || !is_isotopy(&f) {
                return Ok(false);
            }
            Ok(check_infinity_morphism(&f, &s.phi_t, &psi)?
                && psi.weight_part(1) == s.phi_t.weight_part(1)
                && middle_weights_vanish(&psi, n))
        }
        CertificateKind::ObstructionCycle => {
            let p: ObstructionPayload = payload(cert)?;
            let series = |xs: &[ElementJson], name: &str| -> Result<Vec<ConvElement<F>>> {
                xs.iter().enumerate().map(|(j, x)| x.to_element(coop, h, h, &format!("payload.{name}[{j}]"))).collect()
            };
            let rep = KaledinClassRep { truncation: n, delta: p.delta, twist: series(&p.twist, "twist")?, cycle: series(&p.cycle, "cycle")? };
            let g = ConvLie::new(coop.clone(), h.clone())?;
            let expected = truncated_kaledin_class(&g, &s.phi_t, n)?;
            if rep.delta != expected.delta || rep.twist != expected.twist || rep.cycle != expected.cycle {
                return Ok(false);
            }
            let (vanishes, _) = class_vanishes(&g, &rep)?;
            Ok(!vanishes && class_rank_data(&g, &rep)? == (p.rank, p.augmented_rank))
        }
        CertificateKind::CriterionReport => {
            let p: CriterionPayload = payload(cert)?;
            if p.report.truncation != n {
                return Ok(false);
            }
            Ok(run_criterion(&s, &p.params, n)? == p.report)
        }
    }
}
