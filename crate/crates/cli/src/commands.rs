//! Per-command solvers and verifiers.
//!
//! Every verifier reads the result back from its JSON form, so a stored output
//! document re-verifies through exactly the same code path.

use mpinv_core::classical::{
    pinv, pinv_factorization, pinv_quaternion, pinv_real, verify_penrose, verify_penrose_quaternion,
};
use mpinv_core::complexes::{certify_complex, componentwise_pinv, graded_check, ChainTuple};
use mpinv_core::forms::{
    form_pinv, hermitian_pinv, hermitian_pinv_quaternion, hermitian_pinv_real, pseudo_euclidean_case,
    pseudo_euclidean_pinv, pseudo_euclidean_triple, vector_case, vector_pinv, vector_triple, BilinearForm,
    EmbeddedCheck, HermitianClass, PseudoEuclideanSpace, VectorCase,
};
use mpinv_core::graded::{
    characteristic_space, jordan_nilpotent, minimal_characteristic, mp_element_report, non_hermitian_conjugate,
    orbit_height, GradedAlgebra, Sl2Triple,
};
use mpinv_core::homform::{
    certificate, classify_orbit, mp_inverse_homform, orbit_certificate, verify_homform, OrbitLabel, WITNESS_THRESHOLD,
};
use mpinv_core::jordan::{
    default_start, jordan_equation_inverse, mp_inverse_jordan, triple_product, verify_jordan_mp, CartanInvolution,
    JordanPair, Side,
};
use mpinv_core::numcore::{rank_decomposition, spectral_norm};
use mpinv_core::{sample, ComplexMatrix, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::encoding::*;
use crate::error::CliError;
use crate::options::{Command, Options, MAX_AMBIENT};

/// Residuals compared against `threshold = tol_residual · scale`, plus boolean checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub residuals: Vec<(String, f64)>,
    pub diagnostics: Vec<(String, f64)>,
    pub checks: Vec<(String, bool)>,
    pub scale: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Verification {
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        let nums =
            |items: &[(String, f64)]| Value::Object(items.iter().map(|(k, v)| (k.clone(), number(*v))).collect());
        m.insert("residuals".into(), nums(&self.residuals));
        if !self.diagnostics.is_empty() {
            m.insert("diagnostics".into(), nums(&self.diagnostics));
        }
        if !self.checks.is_empty() {
            m.insert(
                "checks".into(),
                Value::Object(self.checks.iter().map(|(k, v)| (k.clone(), Value::Bool(*v))).collect()),
            );
        }
        m.insert("scale".into(), number(self.scale));
        m.insert("threshold".into(), number(self.threshold));
        m.insert("passed".into(), Value::Bool(self.passed));
        Value::Object(m)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }
}

struct Verifier {
    residual_tol: f64,
    scale: f64,
    residuals: Vec<(String, f64)>,
    diagnostics: Vec<(String, f64)>,
    checks: Vec<(String, bool)>,
}

impl Verifier {
    fn new(tol: &Tolerance, scale: f64) -> Self {
        Self {
            residual_tol: tol.residual_tol,
            scale,
            residuals: Vec::new(),
            diagnostics: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn residual(&mut self, name: &str, value: f64) -> &mut Self {
        self.residuals.push((name.to_string(), value));
        self
    }

    fn diagnostic(&mut self, name: &str, value: f64) -> &mut Self {
        self.diagnostics.push((name.to_string(), value));
        self
    }

    fn check(&mut self, name: &str, ok: bool) -> &mut Self {
        self.checks.push((name.to_string(), ok));
        self
    }

    fn triple(&mut self, t: &Sl2Triple) -> &mut Self {
        self.residual("ef_bracket_minus_h", t.residuals[0])
            .residual("he_bracket_minus_2e", t.residuals[1])
            .residual("hf_bracket_plus_2f", t.residuals[2])
    }

    fn finish(self) -> Verification {
        let threshold = self.residual_tol * self.scale;
        let passed = self.residuals.iter().all(|(_, r)| r.is_finite() && *r <= threshold)
            && self.checks.iter().all(|(_, ok)| *ok);
        Verification {
            residuals: self.residuals,
            diagnostics: self.diagnostics,
            checks: self.checks,
            scale: self.scale,
            threshold,
            passed,
        }
    }
}

/// A computed result; `not_mp` marks the orbit-obstruction outcome.
pub struct Solved {
    pub result: Value,
    pub not_mp: bool,
}

impl Solved {
    fn ok(result: Value) -> Self {
        Self { result, not_mp: false }
    }
}

pub fn parse_text<T: DeserializeOwned>(src: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(src);
    let value: T = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        CliError::Parse {
            line: inner.line(),
            column: inner.column(),
            path: e.path().to_string(),
            message: strip_position(&inner.to_string()),
        }
    })?;
    Ok(value)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(k) => msg[..k].to_string(),
        None => msg.to_string(),
    }
}

pub fn parse_value<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v.clone()).map_err(|e| CliError::Parse {
        line: 0,
        column: 0,
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn field<'a>(result: &'a Value, name: &str) -> Result<&'a Value, CliError> {
    result
        .get(name)
        .ok_or_else(|| CliError::input(&format!("result.{name}"), "missing"))
}

fn field_bool(result: &Value, name: &str) -> Result<bool, CliError> {
    field(result, name)?
        .as_bool()
        .ok_or_else(|| CliError::input(&format!("result.{name}"), "expected a boolean"))
}

fn field_usize(result: &Value, name: &str) -> Result<usize, CliError> {
    field(result, name)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| CliError::input(&format!("result.{name}"), "expected a non-negative integer"))
}

fn seeded(opts: &Options) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed)
}

/// Fixed stream for randomized searches whose output is part of the result.
const SEARCH_SEED: u64 = 0x006d_706f_7262_6974;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Field {
    #[default]
    Complex,
    Real,
    Quaternion,
}

// ---- pinv -------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixInput {
    #[serde(default)]
    field: Field,
    matrix: Rows,
}

fn solve_pinv(input: &MatrixInput, tol: &Tolerance) -> Result<Solved, CliError> {
    let (x, x_complex, a_complex) = match input.field {
        Field::Complex => {
            let a = complex_matrix("matrix", &input.matrix)?;
            let x = pinv(&a, tol);
            (encode_complex_matrix(&x), x, a)
        }
        Field::Real => {
            let a = real_matrix("matrix", &input.matrix)?;
            let x = pinv_real(&a, tol)?;
            (encode_real_matrix(&x), x.to_complex(), a.to_complex())
        }
        Field::Quaternion => {
            let a = quaternion_matrix("matrix", &input.matrix)?;
            let x = pinv_quaternion(&a, tol)?;
            (encode_quaternion_matrix(&x), x.embed(), a.embed())
        }
    };
    let other = pinv_factorization(&a_complex, tol);
    let agreement = (&other - &x_complex).frobenius_norm();
    Ok(Solved::ok(
        json!({ "pinv": x, "factorization_agreement": number(agreement) }),
    ))
}

fn verify_pinv(input: &MatrixInput, result: &Value, tol: &Tolerance) -> Result<Verification, CliError> {
    let stored = field(result, "pinv")?;
    let (rep, a_complex, x_complex) = match input.field {
        Field::Complex => {
            let a = complex_matrix("matrix", &input.matrix)?;
            let x = value_complex_matrix("result.pinv", stored)?;
            (verify_penrose(&a, &x, tol)?, a, x)
        }
        Field::Real => {
            let a = real_matrix("matrix", &input.matrix)?.to_complex();
            let x = value_real_matrix("result.pinv", stored)?.to_complex();
            (verify_penrose(&a, &x, tol)?, a, x)
        }
        Field::Quaternion => {
            let a = quaternion_matrix("matrix", &input.matrix)?;
            let x = value_quaternion_matrix("result.pinv", stored)?;
            (verify_penrose_quaternion(&a, &x, tol)?, a.embed(), x.embed())
        }
    };
    let mut v = Verifier::new(tol, rep.scale);
    v.residual("axa_minus_a", rep.r1)
        .residual("xax_minus_x", rep.r2)
        .residual("ax_hermitian_defect", rep.r3)
        .residual("xa_hermitian_defect", rep.r4)
        .residual(
            "factorization_agreement",
            (&pinv_factorization(&a_complex, tol) - &x_complex).frobenius_norm(),
        );
    Ok(v.finish())
}

// ---- form-pinv --------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GramInput {
    gram: Rows,
}

fn solve_form_pinv(input: &GramInput, opts: &Options, tol: &Tolerance) -> Result<Solved, CliError> {
    let w = BilinearForm::new(opts.symmetry(), complex_matrix("gram", &input.gram)?, tol)?;
    let p = form_pinv(&w, tol)?;
    Ok(Solved::ok(json!({ "pinv": encode_complex_matrix(p.gram()) })))
}

fn verify_form_pinv(
    input: &GramInput,
    result: &Value,
    opts: &Options,
    tol: &Tolerance,
) -> Result<Verification, CliError> {
    let a = complex_matrix("gram", &input.gram)?;
    let x = value_complex_matrix("result.pinv", field(result, "pinv")?)?;
    let rep = verify_penrose(&a, &x, tol)?;
    let sign = opts.symmetry().sign();
    let mut v = Verifier::new(tol, rep.scale);
    v.residual("axa_minus_a", rep.r1)
        .residual("xax_minus_x", rep.r2)
        .residual("ax_hermitian_defect", rep.r3)
        .residual("xa_hermitian_defect", rep.r4)
        .residual("symmetry_defect", (&x - &x.transpose().scale_re(sign)).frobenius_norm());
    Ok(v.finish())
}

// ---- vector-pinv / pseudo-pinv ----------------------------------------------

fn case_name(c: VectorCase) -> &'static str {
    match c {
        VectorCase::Zero => "zero",
        VectorCase::Isotropic => "isotropic",
        VectorCase::Anisotropic => "anisotropic",
    }
}

fn embedded_checks(v: &mut Verifier, chk: &EmbeddedCheck) {
    v.triple(&chk.triple)
        .residual("h_hermitian_defect", chk.hermitian_defect);
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorInput {
    vector: Vec<Scalar>,
}

fn solve_vector(input: &VectorInput, tol: &Tolerance) -> Result<Solved, CliError> {
    let v = complex_vector("vector", &input.vector)?;
    let w = vector_pinv(&v, tol);
    Ok(Solved::ok(json!({
        "case": case_name(vector_case(&v, tol)),
        "pinv": encode_complex_vector(&w),
    })))
}

fn verify_vector(input: &VectorInput, result: &Value, tol: &Tolerance) -> Result<Verification, CliError> {
    let v = complex_vector("vector", &input.vector)?;
    let w = value_complex_vector("result.pinv", field(result, "pinv")?)?;
    if w.len() != v.len() {
        return Err(CliError::input("result.pinv", "length differs from the input vector"));
    }
    let chk = vector_triple(&v, &w)?;
    let mut ver = Verifier::new(tol, chk.triple.scale());
    embedded_checks(&mut ver, &chk);
    ver.check(
        "case_matches",
        field(result, "case")? == case_name(vector_case(&v, tol)),
    );
    Ok(ver.finish())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PseudoInput {
    signature: [usize; 2],
    vector: Vec<f64>,
}

impl PseudoInput {
    fn space(&self) -> Result<(PseudoEuclideanSpace, Vec<f64>), CliError> {
        let space = PseudoEuclideanSpace::new(self.signature[0], self.signature[1]);
        let v = real_vector("vector", &self.vector)?;
        if v.len() != space.dim() {
            return Err(CliError::input(
                "vector",
                format!("length {} does not match signature ({}, {})", v.len(), space.n, space.m),
            ));
        }
        Ok((space, v))
    }
}

fn solve_pseudo(input: &PseudoInput, tol: &Tolerance) -> Result<Solved, CliError> {
    let (space, v) = input.space()?;
    let w = pseudo_euclidean_pinv(&space, &v, tol)?;
    Ok(Solved::ok(json!({
        "case": case_name(pseudo_euclidean_case(&space, &v, tol)),
        "pinv": w,
    })))
}

fn verify_pseudo(input: &PseudoInput, result: &Value, tol: &Tolerance) -> Result<Verification, CliError> {
    let (space, v) = input.space()?;
    let w = value_real_vector("result.pinv", field(result, "pinv")?)?;
    if w.len() != v.len() {
        return Err(CliError::input("result.pinv", "length differs from the input vector"));
    }
    let chk = pseudo_euclidean_triple(&space, &v, &w)?;
    let mut ver = Verifier::new(tol, chk.triple.scale());
    embedded_checks(&mut ver, &chk);
    ver.check(
        "case_matches",
        field(result, "case")? == case_name(pseudo_euclidean_case(&space, &v, tol)),
    );
    Ok(ver.finish())
}

// ---- hermitian-pinv ---------------------------------------------------------

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ClassName {
    Hermitian,
    SkewHermitian,
}

impl ClassName {
    fn class(self) -> HermitianClass {
        match self {
            ClassName::Hermitian => HermitianClass::Hermitian,
            ClassName::SkewHermitian => HermitianClass::SkewHermitian,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HermitianInput {
    class: ClassName,
    #[serde(default)]
    field: Field,
    matrix: Rows,
}

fn solve_hermitian(input: &HermitianInput, tol: &Tolerance) -> Result<Solved, CliError> {
    let class = input.class.class();
    let x = match input.field {
        Field::Complex => {
            encode_complex_matrix(&hermitian_pinv(&complex_matrix("matrix", &input.matrix)?, class, tol)?)
        }
        Field::Real => encode_real_matrix(&hermitian_pinv_real(
            &real_matrix("matrix", &input.matrix)?,
            class,
            tol,
        )?),
        Field::Quaternion => encode_quaternion_matrix(&hermitian_pinv_quaternion(
            &quaternion_matrix("matrix", &input.matrix)?,
            class,
            tol,
        )?),
    };
    Ok(Solved::ok(json!({ "pinv": x })))
}

fn verify_hermitian(input: &HermitianInput, result: &Value, tol: &Tolerance) -> Result<Verification, CliError> {
    let stored = field(result, "pinv")?;
    let (a, x) = match input.field {
        Field::Complex => (
            complex_matrix("matrix", &input.matrix)?,
            value_complex_matrix("result.pinv", stored)?,
        ),
        Field::Real => (
            real_matrix("matrix", &input.matrix)?.to_complex(),
            value_real_matrix("result.pinv", stored)?.to_complex(),
        ),
        Field::Quaternion => (
            quaternion_matrix("matrix", &input.matrix)?.embed(),
            value_quaternion_matrix("result.pinv", stored)?.embed(),
        ),
    };
    let rep = mpinv_core::forms::verify_star(&a, &x, input.class.class(), tol)?;
    let mut v = Verifier::new(tol, rep.scale);
    v.residual("axa_minus_a", rep.r1)
        .residual("xax_minus_x", rep.r2)
        .residual("commutator", rep.commutator)
        .residual("class_defect", rep.class_defect);
    Ok(v.finish())
}

// ---- sl2-complete / mp-element ----------------------------------------------

fn one() -> i32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementInput {
    element: Rows,
    #[serde(default = "one")]
    degree: i32,
}

impl ElementInput {
    fn load(&self, opts: &Options) -> Result<(GradedAlgebra, ComplexMatrix), CliError> {
        let alg = opts.algebra(None)?;
        let e = complex_matrix("element", &self.element)?;
        if self.degree < 0 || self.degree > alg.max_degree() {
            return Err(CliError::input(
                "degree",
                format!("must lie in 0..={} for this grading", alg.max_degree()),
            ));
        }
        Ok((alg, e))
    }
}

fn hermitian_flag(h: &ComplexMatrix, tol: &Tolerance) -> bool {
    h.hermitian_defect() <= tol.residual_tol * (1.0 + h.frobenius_norm())
}

fn solve_sl2(input: &ElementInput, opts: &Options, tol: &Tolerance) -> Result<Solved, CliError> {
    let (alg, e) = input.load(opts)?;
    let mc = minimal_characteristic(&alg, &e, input.degree, tol)?;
    Ok(Solved::ok(json!({
        "h": encode_complex_matrix(mc.h0()),
        "f": encode_complex_matrix(mc.f()),
        "hermitian": mc.is_hermitian,
        "hermitian_defect": number(mc.hermitian_defect),
    })))
}

/// Checks a stored (h, f) against e and the grading; shared by sl2-complete and mp-element.
fn verify_characteristic(
    input: &ElementInput,
    result: &Value,
    opts: &Options,
    tol: &Tolerance,
) -> Result<(Verifier, GradedAlgebra, ComplexMatrix, ComplexMatrix), CliError> {
    let (alg, e) = input.load(opts)?;
    let n = alg.ambient_dim();
    let h = value_complex_matrix("result.h", field(result, "h")?)?;
    let f = value_complex_matrix("result.f", field(result, "f")?)?;
    if h.shape() != (n, n) || f.shape() != (n, n) {
        return Err(CliError::input("result", format!("h and f must be {n}x{n}")));
    }
    let t = Sl2Triple::new(e.clone(), h.clone(), f.clone());
    let mut v = Verifier::new(tol, t.scale());
    v.triple(&t)
        .residual(
            "f_degree_defect",
            (&f - &alg.project_degree(&f, -input.degree)).frobenius_norm(),
        )
        .residual("h_degree_defect", (&h - &alg.project_degree(&h, 0)).frobenius_norm())
        .diagnostic("hermitian_defect", h.hermitian_defect());
    Ok((v, alg, e, h))
}

/// min over seeded feasible perturbations δ of (‖h0+δ‖² − ‖h0‖²)/‖δ‖²; `None` if h0 is unique.
fn minimality_ratio(
    alg: &GradedAlgebra,
    e: &ComplexMatrix,
    k: i32,
    h: &ComplexMatrix,
    opts: &Options,
    tol: &Tolerance,
) -> Result<Option<f64>, CliError> {
    if e.frobenius_norm() == 0.0 {
        return Ok(None);
    }
    let space = characteristic_space(alg, e, k, tol)?;
    if space.directions.is_empty() {
        return Ok(None);
    }
    let mut rng = seeded(opts);
    let n = alg.ambient_dim();
    let base = h.frobenius_norm().powi(2);
    let mut worst = f64::INFINITY;
    for _ in 0..16 {
        let coeffs = sample::complex_vector(&mut rng, space.directions.len());
        let delta = GradedAlgebra::combine(&space.directions, &coeffs, n);
        let d2 = delta.frobenius_norm().powi(2);
        let moved = (h + &delta).frobenius_norm().powi(2);
        worst = worst.min((moved - base) / d2);
    }
    Ok(Some(worst))
}

fn verify_sl2(input: &ElementInput, result: &Value, opts: &Options, tol: &Tolerance) -> Result<Verification, CliError> {
    let (mut v, alg, e, h) = verify_characteristic(input, result, opts, tol)?;
    v.check(
        "hermitian_flag_matches",
        field_bool(result, "hermitian")? == hermitian_flag(&h, tol),
    );
    if let Some(ratio) = minimality_ratio(&alg, &e, input.degree, &h, opts, tol)? {
        v.diagnostic("minimality_ratio", ratio).check("minimal", ratio > 0.0);
    }
    Ok(v.finish())
}

fn solve_mp_element(input: &ElementInput, opts: &Options, tol: &Tolerance) -> Result<Solved, CliError> {
    let (alg, e) = input.load(opts)?;
    let rep = mp_element_report(&alg, &e, input.degree, tol)?;
    Ok(Solved::ok(json!({
        "moore_penrose": rep.characteristic.is_hermitian,
        "hermitian_defect": number(rep.characteristic.hermitian_defect),
        "criterion": {
            "positive_dim": rep.criterion.positive_dim,
            "residual": number(rep.criterion.residual),
            "holds": rep.criterion.holds,
        },
        "agrees": rep.agrees(),
        "h": encode_complex_matrix(rep.characteristic.h0()),
        "f": encode_complex_matrix(rep.characteristic.f()),
    })))
}

fn verify_mp_element(
    input: &ElementInput,
    result: &Value,
    opts: &Options,
    tol: &Tolerance,
) -> Result<Verification, CliError> {
    let (mut v, _, _, h) = verify_characteristic(input, result, opts, tol)?;
    v.check(
        "moore_penrose_flag_matches",
        field_bool(result, "moore_penrose")? == hermitian_flag(&h, tol),
    );
    Ok(v.finish())
}

// ---- orbit-height -----------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeightInput {
    element: Rows,
}

impl HeightInput {
    fn load(&self, opts: &Options) -> Result<(GradedAlgebra, ComplexMatrix), CliError> {
        let e = complex_matrix("element", &self.element)?;
        if e.rows() > MAX_AMBIENT {
            return Err(CliError::input("element", format!("dimension above {MAX_AMBIENT}")));
        }
        Ok((opts.algebra(Some(e.rows()))?, e))
    }
}

fn solve_height(input: &HeightInput, opts: &Options, tol: &Tolerance) -> Result<Solved, CliError> {
    let (alg, e) = input.load(opts)?;
    let height = orbit_height(&alg, &e, tol)?;
    Ok(Solved::ok(
        json!({ "height": height, "moore_penrose_orbit": height == 2 }),
    ))
}

/// ‖ad(e)^k‖ / ‖ad(e)‖^k in spectral norm.
fn power_ratio(ad: &ComplexMatrix, k: usize) -> f64 {
    let base = spectral_norm(ad);
    if base == 0.0 {
        return 0.0;
    }
    spectral_norm(&ad.pow(k)) / base.powi(k as i32)
}

fn verify_height(
    input: &HeightInput,
    result: &Value,
    opts: &Options,
    tol: &Tolerance,
) -> Result<Verification, CliError> {
    let (alg, e) = input.load(opts)?;
    let height = field_usize(result, "height")?;
    let ad = alg.ad_matrix(&e);
    let mut v = Verifier::new(tol, 1.0);
    v.residual("power_above_height", power_ratio(&ad, height + 1));
    if height > 0 {
        let at = power_ratio(&ad, height);
        v.diagnostic("power_at_height", at)
            .check("power_at_height_nonzero", at > tol.residual_tol);
    }
    v.check(
        "mp_flag_matches",
        field_bool(result, "moore_penrose_orbit")? == (height == 2),
    );
    Ok(v.finish())
}

// ---- mp-orbit ---------------------------------------------------------------

const MAX_PARTITION: usize = 8;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionInput {
    partition: Vec<usize>,
}

impl PartitionInput {
    fn parts(&self) -> Result<Vec<usize>, CliError> {
        let mut parts = self.partition.clone();
        if parts.is_empty() || parts.contains(&0) {
            return Err(CliError::input("partition", "parts must be positive"));
        }
        let n: usize = parts.iter().sum();
        if n > MAX_PARTITION {
            return Err(CliError::input(
                "partition",
                format!("size {n} is above {MAX_PARTITION}"),
            ));
        }
        if parts.iter().all(|&p| p == 1) {
            return Err(mpinv_core::Error::ZeroElement.into());
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(parts)
    }
}

fn power_ranks(e: &ComplexMatrix, tol: &Tolerance) -> Vec<usize> {
    (1..=e.rows())
        .map(|k| rank_decomposition(&e.pow(k), tol).rank)
        .collect()
}

fn solve_mp_orbit(input: &PartitionInput, tol: &Tolerance) -> Result<Solved, CliError> {
    let parts = input.parts()?;
    let n: usize = parts.iter().sum();
    let alg = GradedAlgebra::sl(&[n])?;
    let j = jordan_nilpotent(&parts);
    let height = orbit_height(&alg, &j, tol)?;
    let witness = match non_hermitian_conjugate(&mut ChaCha8Rng::seed_from_u64(SEARCH_SEED), &parts, tol)? {
        Some(w) => json!({
            "element": encode_complex_matrix(&w.element),
            "xi_degree": w.degree,
            "hermitian_defect": number(w.hermitian_defect),
        }),
        None => Value::Null,
    };
    Ok(Solved::ok(json!({
        "partition": parts,
        "height": height,
        "expected_height": 2 * (parts[0] - 1),
        "moore_penrose_orbit": height == 2,
        "witness": witness,
    })))
}

fn verify_mp_orbit(input: &PartitionInput, result: &Value, tol: &Tolerance) -> Result<Verification, CliError> {
    let parts = input.parts()?;
    let n: usize = parts.iter().sum();
    let alg = GradedAlgebra::sl(&[n])?;
    let j = jordan_nilpotent(&parts);
    let height = field_usize(result, "height")?;
    let mut v = Verifier::new(tol, 1.0);
    v.residual("power_above_height", power_ratio(&alg.ad_matrix(&j), height + 1))
        .check("height_is_twice_largest_part_minus_two", height == 2 * (parts[0] - 1))
        .check(
            "mp_flag_matches",
            field_bool(result, "moore_penrose_orbit")? == (parts[0] <= 2),
        );
    let witness = field(result, "witness")?;
    if parts[0] <= 2 {
        let mc = minimal_characteristic(&alg, &j, 0, tol)?;
        v.diagnostic("jordan_form_hermitian_defect", mc.hermitian_defect)
            .check("jordan_form_is_mp", mc.is_hermitian)
            .check("no_witness", witness.is_null());
    } else if witness.is_null() {
        v.check("witness_found", false);
    } else {
        let e = value_complex_matrix("result.witness.element", field(witness, "element")?)?;
        if e.shape() != (n, n) {
            return Err(CliError::input("result.witness.element", format!("must be {n}x{n}")));
        }
        let mc = minimal_characteristic(&alg, &e, 0, tol)?;
        v.diagnostic("witness_hermitian_defect", mc.hermitian_defect)
            .check("witness_in_orbit", power_ranks(&e, tol) == power_ranks(&j, tol))
            .check("witness_not_hermitian", mc.hermitian_defect > WITNESS_THRESHOLD);
    }
    Ok(v.finish())
}

// ---- homform ----------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomformInput {
    gram: Rows,
    map: Rows,
}

impl HomformInput {
    fn load(&self, opts: &Options, tol: &Tolerance) -> Result<(BilinearForm, ComplexMatrix), CliError> {
        let w = BilinearForm::new(opts.symmetry(), complex_matrix("gram", &self.gram)?, tol)?;
        let f = complex_matrix("map", &self.map)?;
        if f.rows() != w.dim() {
            return Err(CliError::input(
                "map",
                format!("has {} rows but the form has dimension {}", f.rows(), w.dim()),
            ));
        }
        Ok((w, f))
    }
}

fn label_value(l: OrbitLabel) -> Value {
    json!({ "a": l.a, "b": l.b })
}

fn certificates(
    w: &BilinearForm,
    f: &ComplexMatrix,
    label: OrbitLabel,
    tol: &Tolerance,
) -> Result<(Option<f64>, f64), CliError> {
    // The element-level certificate needs an orthogonal gram matrix; other forms skip it.
    let element = certificate(w, f, tol).ok();
    let orbit = orbit_certificate(w.symmetry(), w.dim(), f.cols(), label, tol)?;
    Ok((element, orbit))
}

fn solve_homform(input: &HomformInput, opts: &Options, tol: &Tolerance) -> Result<Solved, CliError> {
    let (w, f) = input.load(opts, tol)?;
    let label = classify_orbit(&w, &f, tol)?;
    if label.is_moore_penrose() {
        let g = mp_inverse_homform(&w, &f, tol)?;
        return Ok(Solved::ok(json!({
            "label": label_value(label),
            "moore_penrose": true,
            "inverse": encode_complex_matrix(&g),
        })));
    }
    let (element, orbit) = certificates(&w, &f, label, tol)?;
    Ok(Solved {
        result: json!({
            "label": label_value(label),
            "moore_penrose": false,
            "certificate": {
                "element_defect": element.map_or(Value::Null, number),
                "orbit_defect": number(orbit),
                "threshold": number(WITNESS_THRESHOLD),
            },
        }),
        not_mp: true,
    })
}

fn verify_homform_result(
    input: &HomformInput,
    result: &Value,
    opts: &Options,
    tol: &Tolerance,
) -> Result<Verification, CliError> {
    let (w, f) = input.load(opts, tol)?;
    let label = classify_orbit(&w, &f, tol)?;
    let stored = field(result, "label")?;
    let same_label = field_usize(stored, "a")? == label.a && field_usize(stored, "b")? == label.b;
    if field_bool(result, "moore_penrose")? {
        let g = value_complex_matrix("result.inverse", field(result, "inverse")?)?;
        let rep = verify_homform(&w, &f, &g, tol)?;
        let mut v = Verifier::new(tol, rep.scale);
        v.residual("gf_hermitian_defect", rep.residual_gf_hermitian)
            .residual("fg_minus_sharp_hermitian_defect", rep.residual_fg_diff_hermitian)
            .residual("first_pair_equation", rep.residual_star1)
            .residual("second_pair_equation", rep.residual_star2)
            .check("label_matches", same_label)
            .check("label_is_moore_penrose", label.is_moore_penrose());
        return Ok(v.finish());
    }
    let (element, orbit) = certificates(&w, &f, label, tol)?;
    let best = element.unwrap_or(0.0).max(orbit);
    let mut v = Verifier::new(tol, 1.0);
    if let Some(e) = element {
        v.diagnostic("element_defect", e);
    }
    v.diagnostic("orbit_defect", orbit)
        .check("label_matches", same_label)
        .check("label_is_not_moore_penrose", !label.is_moore_penrose())
        .check("certificate_exceeds_threshold", best > WITNESS_THRESHOLD);
    Ok(v.finish())
}

// ---- complex-pinv -----------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexInput {
    sizes: Vec<usize>,
    maps: Vec<Rows>,
}

impl ComplexInput {
    fn load(&self) -> Result<ChainTuple, CliError> {
        if self.sizes.iter().sum::<usize>() > MAX_AMBIENT {
            return Err(CliError::input("sizes", format!("total above {MAX_AMBIENT}")));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| complex_matrix(&format!("maps[{i}]"), m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChainTuple::new(self.sizes.clone(), maps)?)
    }
}

fn encode_tuple(t: &ChainTuple) -> Value {
    json!({
        "sizes": t.sizes(),
        "maps": t.maps().iter().map(encode_complex_matrix).collect::<Vec<_>>(),
    })
}

fn solve_complex(input: &ComplexInput, tol: &Tolerance) -> Result<Solved, CliError> {
    let t = input.load()?;
    let cert = certify_complex(&t, tol);
    let inverse = componentwise_pinv(&t, tol);
    Ok(Solved::ok(json!({
        "complex": cert.is_complex,
        "ranks": cert.ranks,
        "composition_residuals": cert.composition_residuals.iter().map(|&r| number(r)).collect::<Vec<_>>(),
        "inverse": encode_tuple(&inverse),
    })))
}

fn verify_complex(input: &ComplexInput, result: &Value, tol: &Tolerance) -> Result<Verification, CliError> {
    let t = input.load()?;
    let inv = field(result, "inverse")?;
    let sizes: Vec<usize> = parse_value(field(inv, "sizes")?)?;
    let maps_v = field(inv, "maps")?
        .as_array()
        .ok_or_else(|| CliError::input("result.inverse.maps", "expected an array"))?;
    let maps = maps_v
        .iter()
        .enumerate()
        .map(|(i, m)| value_complex_matrix(&format!("result.inverse.maps[{i}]"), m))
        .collect::<Result<Vec<_>, _>>()?;
    let inverse = ChainTuple::new(sizes, maps)?;
    let chk = graded_check(&t, &inverse, tol)?;
    let cert = certify_complex(&t, tol);
    let mut v = Verifier::new(tol, chk.triple.scale());
    v.triple(&chk.triple)
        .residual("h_hermitian_defect", chk.hermitian_defect)
        .check("input_is_complex", cert.is_complex)
        .check("inverse_is_complex", certify_complex(&inverse, tol).is_complex)
        .check(
            "complex_flag_matches",
            field_bool(result, "complex")? == cert.is_complex,
        );
    Ok(v.finish())
}

// ---- jordan-mp --------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JordanInput {
    element: Rows,
    #[serde(default)]
    levi: Option<Rows>,
}

impl JordanInput {
    fn load(&self, opts: &Options, tol: &Tolerance) -> Result<(JordanPair, CartanInvolution, ComplexMatrix), CliError> {
        let pair = JordanPair::new(opts.algebra(None)?)?;
        let inv = match &self.levi {
            None => CartanInvolution::standard(&pair),
            Some(y) => CartanInvolution::twisted(&pair, &complex_matrix("levi", y)?, tol)?,
        };
        let a = complex_matrix("element", &self.element)?;
        pair.side_of(&a, tol)?;
        Ok((pair, inv, a))
    }
}

fn side_name(s: Option<Side>) -> &'static str {
    match s {
        Some(Side::Plus) => "plus",
        Some(Side::Minus) => "minus",
        None => "zero",
    }
}

fn solve_jordan(input: &JordanInput, opts: &Options, tol: &Tolerance) -> Result<Solved, CliError> {
    let (pair, inv, a) = input.load(opts, tol)?;
    let x = mp_inverse_jordan(&pair, &inv, &a, tol)?;
    let it = jordan_equation_inverse(&pair, &inv, &a, None, tol)?;
    Ok(Solved::ok(json!({
        "side": side_name(pair.side_of(&a, tol)?),
        "inverse": encode_complex_matrix(&x),
        "iteration": {
            "inverse": encode_complex_matrix(&it.x),
            "iterations": it.iterations,
            "converged": it.converged,
        },
    })))
}

/// Newton–Schulz run from a seeded start α·ω(A)/ρ + β·ω({A, ωA, A})/ρ².
fn random_start_run(
    pair: &JordanPair,
    inv: &CartanInvolution,
    a: &ComplexMatrix,
    side: Side,
    opts: &Options,
    tol: &Tolerance,
) -> Result<ComplexMatrix, CliError> {
    let mut rng = seeded(opts);
    let base = default_start(pair, inv, a, side);
    let wa = inv.apply(pair, side, a);
    let rho_inv = base.frobenius_norm() / wa.frobenius_norm();
    let cube = inv.apply(pair, side, &triple_product(pair, a, &wa, a, tol)?);
    let alpha = rng.random_range(0.2..1.0);
    let beta = rng.random_range(0.0..0.5);
    let x0 = &base.scale_re(alpha) + &cube.scale_re(beta * rho_inv * rho_inv);
    Ok(jordan_equation_inverse(pair, inv, a, Some(&x0), tol)?.x)
}

fn verify_jordan(
    input: &JordanInput,
    result: &Value,
    opts: &Options,
    tol: &Tolerance,
) -> Result<Verification, CliError> {
    let (pair, inv, a) = input.load(opts, tol)?;
    let n = pair.algebra().ambient_dim();
    let x = value_complex_matrix("result.inverse", field(result, "inverse")?)?;
    let iteration = field(result, "iteration")?;
    let xi = value_complex_matrix("result.iteration.inverse", field(iteration, "inverse")?)?;
    if x.shape() != (n, n) || xi.shape() != (n, n) {
        return Err(CliError::input("result", format!("inverses must be {n}x{n}")));
    }
    let rep = verify_jordan_mp(&pair, &inv, &a, &x, tol)?;
    let mut v = Verifier::new(tol, rep.scale);
    v.residual("axa_minus_a", rep.r_axa)
        .residual("xax_minus_x", rep.r_xax)
        .residual("ax_operator_hermitian_defect", rep.herm_ax)
        .residual("xa_operator_hermitian_defect", rep.herm_xa)
        .residual("route_agreement", (&xi - &x).frobenius_norm())
        .check("iteration_converged", field_bool(iteration, "converged")?);
    if let Some(side) = pair.side_of(&a, tol)? {
        let xr = random_start_run(&pair, &inv, &a, side, opts, tol)?;
        v.residual("random_start_agreement", (&xr - &x).frobenius_norm());
    }
    Ok(v.finish())
}

// ---- dispatch ---------------------------------------------------------------

/// Parses the input text for `command` and computes the result.
pub fn solve(command: Command, src: &str, opts: &Options) -> Result<Solved, CliError> {
    let tol = opts.tolerance()?;
    let tol = &tol;
    match command {
        Command::Pinv => solve_pinv(&parse_text(src)?, tol),
        Command::FormPinv => solve_form_pinv(&parse_text(src)?, opts, tol),
        Command::VectorPinv => solve_vector(&parse_text(src)?, tol),
        Command::PseudoPinv => solve_pseudo(&parse_text(src)?, tol),
        Command::HermitianPinv => solve_hermitian(&parse_text(src)?, tol),
        Command::Sl2Complete => solve_sl2(&parse_text(src)?, opts, tol),
        Command::MpElement => solve_mp_element(&parse_text(src)?, opts, tol),
        Command::OrbitHeight => solve_height(&parse_text(src)?, opts, tol),
        Command::MpOrbit => solve_mp_orbit(&parse_text(src)?, tol),
        Command::Homform => solve_homform(&parse_text(src)?, opts, tol),
        Command::ComplexPinv => solve_complex(&parse_text(src)?, tol),
        Command::JordanMp => solve_jordan(&parse_text(src)?, opts, tol),
        Command::ReportTable => Err(CliError::Option("report-table takes no input".into())),
    }
}

/// Checks a result value against the input value.
pub fn verify(command: Command, input: &Value, result: &Value, opts: &Options) -> Result<Verification, CliError> {
    let tol = opts.tolerance()?;
    let tol = &tol;
    match command {
        Command::Pinv => verify_pinv(&parse_value(input)?, result, tol),
        Command::FormPinv => verify_form_pinv(&parse_value(input)?, result, opts, tol),
        Command::VectorPinv => verify_vector(&parse_value(input)?, result, tol),
        Command::PseudoPinv => verify_pseudo(&parse_value(input)?, result, tol),
        Command::HermitianPinv => verify_hermitian(&parse_value(input)?, result, tol),
        Command::Sl2Complete => verify_sl2(&parse_value(input)?, result, opts, tol),
        Command::MpElement => verify_mp_element(&parse_value(input)?, result, opts, tol),
        Command::OrbitHeight => verify_height(&parse_value(input)?, result, opts, tol),
        Command::MpOrbit => verify_mp_orbit(&parse_value(input)?, result, tol),
        Command::Homform => verify_homform_result(&parse_value(input)?, result, opts, tol),
        Command::ComplexPinv => verify_complex(&parse_value(input)?, result, tol),
        Command::JordanMp => verify_jordan(&parse_value(input)?, result, opts, tol),
        Command::ReportTable => Err(CliError::Option("report-table has nothing to verify".into())),
    }
}
