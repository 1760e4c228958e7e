//! Machine-readable check reports.
//!
//! A report is a list of named checks, each with a verdict. Every failing
//! check carries a witness. Reports contain no timing or other run-dependent
//! data unless a caller adds it explicitly, so they are byte-identical across
//! runs and thread counts.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chow::GradedChowRing;
use crate::cohomology::{build_cochain_complex, CellularCochains, CochainComplexQ, TangentCellComplex};
use crate::complex::WeightedComplex;
use crate::error::{Error, Result};
use crate::formats::rationals_to_strings;
use crate::hodge::{default_lefschetz_class, random_vector, MetrizedComplex};
use crate::linalg::Q;
use crate::matroid::{elements_of, Matroid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Warn => "WARN",
            Self::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub detail: Value,
}

impl CheckResult {
    pub fn pass(name: &str, detail: Value) -> Self {
        Self { name: name.into(), verdict: Verdict::Pass, witness: None, detail }
    }

    pub fn warn(name: &str, detail: Value) -> Self {
        Self { name: name.into(), verdict: Verdict::Warn, witness: None, detail }
    }

    pub fn fail(name: &str, witness: Value, detail: Value) -> Self {
        Self { name: name.into(), verdict: Verdict::Fail, witness: Some(witness), detail }
    }

    /// Pass if `ok`, otherwise fail with the witness.
    pub fn from_bool(name: &str, ok: bool, witness: impl FnOnce() -> Value, detail: Value) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, witness(), detail)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, checks: Vec<CheckResult>) -> Self {
        let verdict = checks.iter().map(|c| c.verdict).max().unwrap_or(Verdict::Pass);
        Self { command: command.into(), verdict, checks, timing_ms: None }
    }

    /// 0 unless some check failed.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.verdict == Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.verdict.label());
        for c in &self.checks {
            let _ = writeln!(out, "  [{}] {}: {}", c.verdict.label(), c.name, c.detail);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "         witness: {w}");
            }
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "  time: {t} ms");
        }
        out
    }
}

fn set_to_string(mask: u32) -> String {
    let e: Vec<String> = elements_of(mask).iter().map(ToString::to_string).collect();
    format!("{{{}}}", e.join(","))
}

pub fn matroid_info(m: &Matroid) -> Report {
    let lattice = m.flat_lattice();
    let mut by_rank = vec![0usize; m.rank() + 1];
    for &r in &lattice.ranks {
        by_rank[r] += 1;
    }
    let detail = json!({
        "label": m.label(),
        "n": m.n(),
        "rank": m.rank(),
        "bases": m.bases().len(),
        "loops": m.loops(),
        "flats_by_rank": by_rank,
    });
    let ok = lattice.verify(m);
    let lattice_check = CheckResult::from_bool(
        "flat_lattice",
        ok,
        || json!({"flats": lattice.flats.iter().map(|&f| set_to_string(f)).collect::<Vec<_>>()}),
        json!({"flats": lattice.len()}),
    );
    Report::new("matroid info", vec![CheckResult::pass("matroid", detail), lattice_check])
}

pub fn matroid_chi(m: &Matroid) -> Report {
    let mobius = m.characteristic_polynomial();
    let dc = m.characteristic_polynomial_deletion_contraction();
    let detail = json!({"chi": mobius.to_string(), "coefficients": mobius.coeffs()});
    let check = CheckResult::from_bool(
        "chi_mobius_vs_deletion_contraction",
        mobius == dc,
        || json!({"mobius": mobius.coeffs(), "deletion_contraction": dc.coeffs()}),
        detail,
    );
    Report::new("matroid chi", vec![check])
}

pub fn matroid_logconcave(m: &Matroid) -> Report {
    let lc = m.check_log_concavity();
    let check = CheckResult::from_bool(
        "whitney_log_concavity",
        lc.holds,
        || json!({"violations": lc.violations}),
        json!({"whitney": lc.whitney}),
    );
    Report::new("matroid logconcave", vec![check])
}

/// Which Kähler-package checks to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KahlerChecks {
    pub hl: bool,
    pub hr: bool,
}

impl FromStr for KahlerChecks {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "hl" => out.hl = true,
                "hr" => out.hr = true,
                other => return Err(Error::Parse(format!("unknown check {other:?} (expected hl, hr)"))),
            }
        }
        Ok(out)
    }
}

/// Kähler-package checks for the default ample class in the given degrees
/// (every `p ≤ r/2` when `ps` is `None`).
pub fn matroid_chow(m: &Matroid, ps: Option<&[usize]>, checks: KahlerChecks) -> Result<Report> {
    let ring = GradedChowRing::build(m)?;
    let r = ring.top_degree();
    let l = default_lefschetz_class(&ring);
    let degrees: Vec<usize> = ps.map_or_else(|| (0..=r / 2).collect(), <[usize]>::to_vec);
    let dims = ring.dims();
    let mut out = vec![CheckResult::from_bool(
        "poincare_duality_dims",
        (0..=r).all(|p| dims[p] == dims[r - p]),
        || json!({"dims": dims}),
        json!({"top_degree": r, "dims": dims}),
    )];
    for &p in &degrees {
        if checks.hl {
            let hl = ring.check_hard_lefschetz(&l, p)?;
            out.push(CheckResult::from_bool(
                &format!("hard_lefschetz_p{p}"),
                hl.is_iso,
                || json!({"rank": hl.rank, "source_dim": hl.source_dim, "target_dim": hl.target_dim}),
                json!({"rank": hl.rank, "source_dim": hl.source_dim, "target_dim": hl.target_dim}),
            ));
        }
        if checks.hr {
            let hr = ring.check_hodge_riemann(&l, p)?;
            let detail = json!({
                "primitive_dim": hr.primitive_dim,
                "signature": hr.signature,
                "full_signature": hr.full_signature,
                "pivots": rationals_to_strings(&hr.pivots),
            });
            out.push(CheckResult::from_bool(
                &format!("hodge_riemann_p{p}"),
                hr.holds,
                || json!({"signature": hr.signature, "pivots": rationals_to_strings(&hr.pivots)}),
                detail,
            ));
        }
    }
    Ok(Report::new("matroid chow", out))
}

/// Validity, plus balancing and ℚ-smoothness if requested.
pub fn complex_validate(c: &WeightedComplex, balancing: bool, qsmooth: bool) -> Report {
    let v = match c.validate() {
        Ok(v) => v,
        Err(e) => {
            let check = CheckResult::fail("valid", json!({"error": e.to_string()}), json!({"cells": c.cells.len()}));
            return Report::new("complex validate", vec![check]);
        }
    };
    let mut out = vec![CheckResult::pass(
        "valid",
        json!({"cells": c.cells.len(), "maximal_cells": v.maximal_cells().len(), "dim": v.dim(), "pure_dim": v.pure_dim()}),
    )];
    if !v.warnings.is_empty() {
        out.push(CheckResult::warn("pure", json!({"warnings": v.warnings})));
    }
    let bal = if balancing || qsmooth { Some(v.check_balancing()) } else { None };
    if balancing {
        out.push(match bal.as_ref().expect("computed above") {
            Ok(rep) => {
                let bad: Vec<Value> = rep
                    .entries
                    .iter()
                    .filter(|e| !e.balanced)
                    .map(|e| json!({"cell": e.cell, "defect": big_strings(&e.defect), "defect_lift": big_strings(&e.defect_lift)}))
                    .collect();
                CheckResult::from_bool(
                    "balancing",
                    rep.balanced,
                    || json!({"unbalanced": bad}),
                    json!({"codim1_cells": rep.entries.len()}),
                )
            }
            Err(e) => CheckResult::fail("balancing", json!({"error": e.to_string()}), json!({})),
        });
    }
    if qsmooth {
        out.push(match v.check_q_smooth_codim1() {
            Ok(rep) => {
                let kernel_dims: Vec<(usize, usize)> = rep.entries.iter().map(|e| (e.cell, e.kernel_dim)).collect();
                let bad: Vec<Value> =
                    rep.entries.iter().filter(|e| !e.smooth).map(|e| json!({"cell": e.cell, "kernel_dim": e.kernel_dim})).collect();
                CheckResult::from_bool(
                    "q_smooth_codim1",
                    rep.smooth,
                    || {
                        json!({
                            "cells": bad,
                            "note": "the uniquely p-balanced refinement is not evaluated",
                        })
                    },
                    json!({"kernel_dims": kernel_dims}),
                )
            }
            Err(e) => CheckResult::fail("q_smooth_codim1", json!({"error": e.to_string()}), json!({})),
        });
    }
    Report::new("complex validate", out)
}

fn big_strings(v: &[num_bigint::BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Cellular model of a complex: bounded complexes directly, fans through their
/// canonical compactification when `compactify` is set.
pub fn tangent_complex(c: &WeightedComplex, compactify: bool) -> Result<TangentCellComplex> {
    let v = c.validate()?;
    if v.is_bounded() {
        return TangentCellComplex::from_bounded(&v);
    }
    if !compactify {
        return Err(Error::UnboundedInput);
    }
    Ok(TangentCellComplex::from_compactified(&v.canonical_compactification()?))
}

pub fn complex_cohomology(c: &WeightedComplex, p: usize, compactify: bool) -> Result<Report> {
    let tc = tangent_complex(c, compactify)?;
    let cochains = build_cochain_complex(&tc, p)?;
    let dims = cochains.complex.cohomology_dims();
    let cells: Vec<usize> = (0..=tc.dim()).map(|d| tc.cells_of_dim(d).len()).collect();
    let detail = json!({"p": p, "h": dims, "cochain_dims": cochains.complex.dims(), "cells_by_dim": cells});
    Ok(Report::new("complex cohomology", vec![CheckResult::pass("cohomology", detail)]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramChoice {
    Identity,
    Weighted,
    Seed(u64),
}

impl FromStr for GramChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Self::Identity),
            "weighted" => Ok(Self::Weighted),
            _ => s
                .strip_prefix("seed:")
                .and_then(|k| k.parse().ok())
                .map(Self::Seed)
                .ok_or_else(|| Error::Parse(format!("unknown gram {s:?} (identity, weighted, seed:K)"))),
        }
    }
}

/// Metrizes cellular cochains; `Weighted` uses `Σ |m_P|` over maximal cells containing each cell.
pub fn metrize_cellular(tc: &TangentCellComplex, cochains: &CellularCochains, gram: GramChoice) -> Result<MetrizedComplex> {
    match gram {
        GramChoice::Weighted => MetrizedComplex::diagonal(cochains.complex.clone(), &cochains.weights(tc)),
        other => metrize(&cochains.complex, other),
    }
}

pub fn metrize(c: &CochainComplexQ, gram: GramChoice) -> Result<MetrizedComplex> {
    match gram {
        GramChoice::Identity => Ok(MetrizedComplex::identity(c.clone())),
        GramChoice::Seed(k) => Ok(MetrizedComplex::seeded(c.clone(), k)),
        GramChoice::Weighted => Err(Error::InvalidParameters("weighted Grams need a cell complex, not bare cochains".into())),
    }
}

/// Hodge isomorphism, adjunction on seeded random vectors, and exact decompositions.
pub fn hodge_verify(mc: &MetrizedComplex, samples: usize, seed: u64) -> Result<Report> {
    let iso = mc.verify_hodge_isomorphism()?;
    let mut out = vec![CheckResult::from_bool(
        "hodge_isomorphism",
        iso.holds,
        || json!({"degrees": iso.degrees.iter().filter(|d| !d.equal || !d.harmonic_is_closed_and_coclosed).collect::<Vec<_>>()}),
        json!({"harmonic_dims": iso.degrees.iter().map(|d| d.harmonic_dim).collect::<Vec<_>>(),
               "cohomology_dims": iso.degrees.iter().map(|d| d.cohomology_dim).collect::<Vec<_>>()}),
    )];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = mc.complex().dims().to_vec();
    let mut adjunction_failures = Vec::new();
    let mut tested = 0;
    for q in 0..dims.len().saturating_sub(1) {
        for _ in 0..samples {
            let w = random_vector(&mut rng, dims[q]);
            let e = random_vector(&mut rng, dims[q + 1]);
            let defect = mc.adjunction_defect(q, &w, &e)?;
            tested += 1;
            if defect != Q::from_integer(0.into()) {
                adjunction_failures.push(json!({"q": q, "defect": defect.to_string()}));
            }
        }
    }
    out.push(CheckResult::from_bool(
        "adjunction",
        adjunction_failures.is_empty(),
        || json!({"failures": adjunction_failures}),
        json!({"pairs_tested": tested}),
    ));
    let mut decomposition_failures = Vec::new();
    for (q, &n) in dims.iter().enumerate() {
        for _ in 0..samples {
            let w = random_vector(&mut rng, n);
            let dec = mc.hodge_decompose(q, &w)?;
            if !dec.verify(mc)? {
                decomposition_failures.push(json!({"q": q, "omega": rationals_to_strings(&w)}));
            }
        }
    }
    out.push(CheckResult::from_bool(
        "orthogonal_decomposition",
        decomposition_failures.is_empty(),
        || json!({"failures": decomposition_failures}),
        json!({"cochains_tested": samples * dims.len()}),
    ));
    Ok(Report::new("hodge verify", out))
}

pub fn hodge_decompose(mc: &MetrizedComplex, q: usize, omega: &[Q]) -> Result<Report> {
    let dec = mc.hodge_decompose(q, omega)?;
    let ok = dec.verify(mc)?;
    let detail = json!({
        "q": q,
        "exact": rationals_to_strings(&dec.exact),
        "coexact": rationals_to_strings(&dec.coexact),
        "harmonic": rationals_to_strings(&dec.harmonic),
        "alpha": rationals_to_strings(&dec.alpha),
        "beta": rationals_to_strings(&dec.beta),
    });
    let cross = dec.cross_inner_products(mc);
    let check = CheckResult::from_bool(
        "orthogonal_decomposition",
        ok,
        || json!({"cross_inner_products": rationals_to_strings(&cross)}),
        detail,
    );
    Ok(Report::new("hodge decompose", vec![check]))
}
