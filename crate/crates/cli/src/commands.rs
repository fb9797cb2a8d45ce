use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use qcp_core::channel::{apply, choi, kraus_from_choi, validate, AffineChannel, ChannelFile};
use qcp_core::cp::{
    check_cp_choi_with, check_cp_qft_with, depolarizing_channel_n, depolarizing_cp_range,
    mu_vector, qubit_inequalities, sufficient_displacement_bound, unot_fidelity, CpReport, Method,
    Verdict,
};
use qcp_core::io::{complex_to_pairs, pairs_to_complex, sig12, ComplexPair};
use qcp_core::linalg::C64;
use qcp_core::sdp::{lambda_from_mu, max_ray_parameter, RayScanRecord};
use qcp_core::state::{density_from_bloch, is_valid_bloch, StateFile};

use crate::args::{CheckCpArgs, MethodArg};

/// Exit status 2: bad input. Exit status 1: internal failure or disagreement.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub status: u8,
}

impl CliError {
    pub fn input(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.to_string(),
            message: message.into(),
            status: 2,
        }
    }
}

impl From<qcp_core::Error> for CliError {
    fn from(e: qcp_core::Error) -> Self {
        let status = match e {
            qcp_core::Error::NoConvergence(_) => 1,
            _ => 2,
        };
        CliError {
            code: e.code().to_string(),
            message: e.to_string(),
            status,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Rendered command result.
pub struct Output {
    pub json: String,
    pub text: String,
    pub status: u8,
}

impl Output {
    fn new<T: Serialize>(value: &T, text: String) -> CliResult<Self> {
        let json = serde_json::to_string(value)
            .map_err(|e| CliError { code: "serialize".into(), message: e.to_string(), status: 1 })?;
        Ok(Output { json, text, status: 0 })
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| CliError::input("malformed_json", format!("{}: {e}", path.display())))
}

fn load_channel(path: &Path) -> CliResult<AffineChannel> {
    let file: ChannelFile = read_json(path)?;
    let ch = file.to_channel()?;
    let diag = validate(&ch);
    if let Some(bad) = diag.failures().next() {
        return Err(CliError::input("invalid_channel", format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(ch)
}

fn fmt_num(x: f64) -> String {
    let y = sig12(x);
    if y != 0.0 && !(1e-4..1e12).contains(&y.abs()) {
        format!("{y:e}")
    } else {
        format!("{y}")
    }
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(", ")
}

fn fmt_complex(z: C64) -> String {
    let (re, im) = (sig12(z.re), sig12(z.im));
    if im == 0.0 {
        fmt_num(re)
    } else if im < 0.0 {
        format!("{}-{}i", fmt_num(re), fmt_num(-im))
    } else {
        format!("{}+{}i", fmt_num(re), fmt_num(im))
    }
}

// ---- validate ----

#[derive(Deserialize)]
struct Probe {
    lambda: Option<serde_json::Value>,
    bloch: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct CheckRecord {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct ChannelValidation {
    kind: &'static str,
    valid: bool,
    unital: bool,
    checks: Vec<CheckRecord>,
}

#[derive(Serialize)]
struct StateValidation {
    kind: &'static str,
    valid: bool,
    #[serde(with = "opt_sig12")]
    min_eigenvalue: Option<f64>,
    diagnostics: Vec<String>,
}

mod opt_sig12 {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&qcp_core::io::sig12(*v)),
            None => s.serialize_none(),
        }
    }
}

pub fn validate_file(path: &Path) -> CliResult<Output> {
    let probe: Probe = read_json(path)?;
    match (probe.lambda.is_some(), probe.bloch.is_some()) {
        (true, false) => {
            let file: ChannelFile = read_json(path)?;
            let ch = file.to_channel()?;
            let diag = validate(&ch);
            let record = ChannelValidation {
                kind: "channel",
                valid: diag.passed(),
                unital: ch.is_unital(),
                checks: diag
                    .checks
                    .iter()
                    .map(|c| CheckRecord { name: c.name, passed: c.passed, detail: c.detail.clone() })
                    .collect(),
            };
            let mut text = format!("channel d={} n={}: {}\n", ch.d(), ch.n(), if record.valid { "valid" } else { "invalid" });
            for c in &record.checks {
                let _ = writeln!(text, "  [{}] {} {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
            }
            let mut out = Output::new(&record, text)?;
            if !record.valid {
                out.status = 2;
            }
            Ok(out)
        }
        (false, true) => {
            let file: StateFile = read_json(path)?;
            let r = file.to_bloch()?;
            let v = is_valid_bloch(&r);
            let record = StateValidation {
                kind: "state",
                valid: v.valid,
                min_eigenvalue: v.min_eigenvalue,
                diagnostics: v.diagnostics.clone(),
            };
            let mut text = format!("state d={} n={}: {}\n", r.d(), r.n(), if v.valid { "valid" } else { "invalid" });
            if let Some(m) = v.min_eigenvalue {
                let _ = writeln!(text, "  min eigenvalue {}", fmt_num(m));
            }
            for d in &v.diagnostics {
                let _ = writeln!(text, "  {d}");
            }
            let mut out = Output::new(&record, text)?;
            if !v.valid {
                out.status = 2;
            }
            Ok(out)
        }
        _ => Err(CliError::input(
            "malformed_json",
            format!("{}: expected a channel (\"lambda\") or a state (\"bloch\")", path.display()),
        )),
    }
}

// ---- check-cp ----

#[derive(Serialize)]
struct BothReport {
    verdict: Verdict,
    method: &'static str,
    agreement: bool,
    qft: CpReport,
    choi: CpReport,
}

fn report_text(r: &CpReport) -> String {
    format!(
        "verdict: {}\nmethod: {}\nmargin: {}\nspectrum: {}\n",
        r.verdict.as_str(),
        r.method.as_str(),
        fmt_num(r.margin),
        fmt_list(&r.spectrum)
    )
}

fn qubit_text(ch: &AffineChannel) -> String {
    if ch.d() != 2 || ch.n() != 1 || !ch.is_unital() {
        return String::new();
    }
    match qubit_inequalities(ch.lambda()) {
        Ok(v) => {
            let labels = ["1+a+b+c", "1-a+b-c", "1+a-b-c", "1-a-b+c"];
            let mut s = String::from("qubit inequalities (a=λ01, b=λ10, c=λ11), all must be >= 0:\n");
            for (l, x) in labels.iter().zip(v) {
                let _ = writeln!(s, "  {l} = {}", fmt_num(x));
            }
            s
        }
        Err(_) => String::new(),
    }
}

pub fn check_cp(args: &CheckCpArgs, tolerance: f64) -> CliResult<Output> {
    let ch = match (&args.file, args.depolarizing) {
        (Some(path), _) => load_channel(path)?,
        (None, Some(p)) => {
            let d = args.d.ok_or_else(|| CliError::input("missing_argument", "--depolarizing needs --d"))?;
            depolarizing_channel_n(d, args.n, p)?
        }
        (None, None) => return Err(CliError::input("missing_argument", "give a channel file or --depolarizing")),
    };
    let method = args.method.unwrap_or(if ch.is_unital() { MethodArg::Qft } else { MethodArg::Choi });
    let extra = qubit_text(&ch);
    match method {
        MethodArg::Qft => {
            let r = check_cp_qft_with(&ch, tolerance)?;
            Output::new(&r, report_text(&r) + &extra)
        }
        MethodArg::Choi => {
            let r = check_cp_choi_with(&ch, tolerance)?;
            Output::new(&r, report_text(&r) + &extra)
        }
        MethodArg::Both => {
            let q = check_cp_qft_with(&ch, tolerance)?;
            let k = check_cp_choi_with(&ch, tolerance)?;
            let gap = q
                .spectrum
                .iter()
                .zip(&k.spectrum)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let agreement = q.verdict == k.verdict && gap <= tolerance;
            let text = format!(
                "verdict: {}\nagreement: {}\nmax spectrum gap: {}\n\n[qft]\n{}\n[choi]\n{}{}",
                q.verdict.as_str(),
                agreement,
                fmt_num(gap),
                report_text(&q),
                report_text(&k),
                extra
            );
            let both = BothReport { verdict: q.verdict, method: "both", agreement, qft: q, choi: k };
            let mut out = Output::new(&both, text)?;
            if !agreement {
                out.status = 1;
            }
            Ok(out)
        }
    }
}

// ---- choi-spectrum ----

#[derive(Serialize, Deserialize)]
struct SpectrumFile {
    d: usize,
    #[serde(default = "one")]
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_sig12_vec")]
    mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "qcp_core::io::sig12_vec")]
    spectrum: Vec<f64>,
}

fn one() -> usize {
    1
}

mod opt_sig12_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<f64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(xs) => s.collect_seq(xs.iter().map(|&x| qcp_core::io::sig12(x))),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<f64>>, D::Error> {
        Option::<Vec<f64>>::deserialize(d)
    }
}

/// Drops rounding residue so that inverted channels print cleanly.
fn snap(z: C64) -> C64 {
    let clean = |x: f64| if x.abs() < 1e-14 { 0.0 } else { x };
    C64::new(clean(z.re), clean(z.im))
}

pub fn choi_spectrum(path: &Path, invert: bool) -> CliResult<Output> {
    if invert {
        let input: SpectrumFile = read_json(path)?;
        let mu = input
            .mu
            .ok_or_else(|| CliError::input("malformed_json", "--invert needs a \"mu\" array in label order"))?;
        let lam: Vec<C64> = lambda_from_mu(&mu, input.d, input.n)?.into_iter().map(snap).collect();
        let ch = AffineChannel::new(input.d, input.n, lam, None)?;
        let file = ChannelFile::from_channel(&ch);
        let text = format!(
            "channel d={} n={}\nlambda: {}\n",
            ch.d(),
            ch.n(),
            ch.lambda().iter().map(|&z| fmt_complex(z)).collect::<Vec<_>>().join(", ")
        );
        return Output::new(&file, text);
    }
    let ch = load_channel(path)?;
    let spectrum = check_cp_choi_with(&ch, 0.0)?.spectrum;
    let mu = if ch.is_unital() { Some(mu_vector(ch.lambda(), ch.d(), ch.n())?) } else { None };
    let mut text = String::new();
    if let Some(m) = &mu {
        let _ = writeln!(text, "mu (label order): {}", fmt_list(m));
    }
    let _ = writeln!(text, "choi spectrum: {}", fmt_list(&spectrum));
    let record = SpectrumFile { d: ch.d(), n: ch.n(), mu, spectrum };
    Output::new(&record, text)
}

// ---- kraus ----

#[derive(Serialize)]
struct KrausRecord {
    d: usize,
    n: usize,
    operators: Vec<Vec<Vec<ComplexPair>>>,
    #[serde(with = "qcp_core::io::sig12_f64")]
    completeness_residual: f64,
}

pub fn kraus(path: &Path) -> CliResult<Output> {
    let ch = load_channel(path)?;
    let k = kraus_from_choi(&choi(&ch)?)?;
    let dim = ch.hilbert_dim();
    let rounded = |z: C64| [sig12(z.re), sig12(z.im)];
    let operators: Vec<Vec<Vec<ComplexPair>>> = k
        .operators
        .iter()
        .map(|a| (0..dim).map(|i| a.row(i).iter().map(|&z| rounded(z)).collect()).collect())
        .collect();
    let mut text = format!(
        "{} Kraus operators, completeness residual {}\n",
        operators.len(),
        fmt_num(k.completeness_residual)
    );
    for (idx, a) in k.operators.iter().enumerate() {
        let _ = writeln!(text, "A{idx} =");
        for i in 0..dim {
            let row: Vec<String> = a.row(i).iter().map(|&z| fmt_complex(z)).collect();
            let _ = writeln!(text, "  [{}]", row.join(", "));
        }
    }
    let record = KrausRecord { d: ch.d(), n: ch.n(), operators, completeness_residual: k.completeness_residual };
    Output::new(&record, text)
}

// ---- apply ----

#[derive(Serialize)]
struct ApplyRecord {
    d: usize,
    n: usize,
    #[serde(with = "qcp_core::io::sig12_pairs")]
    bloch: Vec<ComplexPair>,
    positive: bool,
    #[serde(with = "qcp_core::io::sig12_f64")]
    min_eigenvalue: f64,
}

pub fn apply_channel(channel: &Path, state: &Path) -> CliResult<Output> {
    let ch = load_channel(channel)?;
    let file: StateFile = read_json(state)?;
    let rho = density_from_bloch(&file.to_bloch()?)?;
    let out = apply(&ch, &rho)?;
    let record = ApplyRecord {
        d: ch.d(),
        n: ch.n(),
        bloch: complex_to_pairs(out.bloch.coeffs()),
        positive: out.positive,
        min_eigenvalue: out.min_eigenvalue,
    };
    let mut text = format!(
        "output bloch: {}\nmin eigenvalue: {}\n",
        out.bloch.coeffs().iter().map(|&z| fmt_complex(z)).collect::<Vec<_>>().join(", "),
        fmt_num(out.min_eigenvalue)
    );
    if !out.positive {
        text.push_str("warning: output is not positive semidefinite\n");
    }
    Output::new(&record, text)
}

// ---- depolarizing-range, unot-fidelity ----

#[derive(Serialize)]
struct RangeRecord {
    d: usize,
    #[serde(with = "qcp_core::io::sig12_f64")]
    p_min: f64,
    #[serde(with = "qcp_core::io::sig12_f64")]
    p_max: f64,
}

pub fn depolarizing_range(d: usize) -> CliResult<Output> {
    let (p_min, p_max) = depolarizing_cp_range(d)?;
    let text = format!("p_min = {}\np_max = {}\n", fmt_num(p_min), fmt_num(p_max));
    Output::new(&RangeRecord { d, p_min, p_max }, text)
}

#[derive(Serialize)]
struct FidelityRecord {
    d: usize,
    #[serde(with = "qcp_core::io::sig12_f64")]
    fidelity: f64,
}

pub fn unot(d: usize) -> CliResult<Output> {
    let fidelity = unot_fidelity(d)?;
    Output::new(&FidelityRecord { d, fidelity }, format!("{fidelity:.10}\n"))
}

// ---- sufficient-c ----

#[derive(Serialize)]
struct BoundRecord {
    method: &'static str,
    applies: bool,
    #[serde(with = "qcp_core::io::sig12_f64")]
    mu_min: f64,
    #[serde(with = "qcp_core::io::sig12_f64")]
    c_norm: f64,
}

pub fn sufficient_c(path: &Path) -> CliResult<Output> {
    let ch = load_channel(path)?;
    let b = sufficient_displacement_bound(&ch)?;
    let text = format!(
        "method: {}\n|c| = {} {} mu_min = {}\n{}\n",
        Method::SufficientBound.as_str(),
        fmt_num(b.c_norm),
        if b.applies { "<=" } else { ">" },
        fmt_num(b.mu_min),
        if b.applies { "bound holds: channel is CP" } else { "bound does not hold: inconclusive" }
    );
    Output::new(
        &BoundRecord { method: Method::SufficientBound.as_str(), applies: b.applies, mu_min: b.mu_min, c_norm: b.c_norm },
        text,
    )
}

// ---- ray-scan ----

#[derive(Deserialize)]
#[serde(untagged)]
enum DirectionFile {
    Bare(Vec<ComplexPair>),
    Wrapped { direction: Vec<ComplexPair> },
}

pub fn ray_scan(channel: &Path, direction: &Path, bracket: &[f64]) -> CliResult<Output> {
    let ch = load_channel(channel)?;
    let dir = match read_json::<DirectionFile>(direction)? {
        DirectionFile::Bare(v) | DirectionFile::Wrapped { direction: v } => pairs_to_complex(&v),
    };
    let [lo, hi] = bracket else {
        return Err(CliError::input("invalid_bracket", "--bracket takes two values"));
    };
    let r = max_ray_parameter(&ch, &dir, *lo, *hi)?;
    let record = RayScanRecord::from(&r);
    let text = format!(
        "t_max = {}\niterations = {}\nmargin = {}\n",
        fmt_num(r.t_max),
        r.iterations,
        fmt_num(r.margin_at_t_max)
    );
    Output::new(&record, text)
}
