use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Serialize;

use s2t_core::config::RunConfig;
use s2t_core::embed::{CertKind, EmbeddingCertificate};
use s2t_core::exactlin::format_rational;
use s2t_core::tower::{run_tower, Budget, StepCase, TowerError, TowerState};
use s2t_core::verify::{run_all, VerificationReport, VerifyRadii};

use crate::files::{read, write_atomic, write_json, StateLock};
use crate::{Failure, Outcome, WithCode};

pub const DEFAULT_OUT: &str = "out";

fn tower_failure(e: TowerError) -> Failure {
    let code = if e.is_precondition() || matches!(e, TowerError::Persist(_)) { 2 } else { 3 };
    Failure::new(code, anyhow!(e))
}

fn cert_path<'a>(dir: &Path, state: &'a TowerState) -> Option<(PathBuf, &'a EmbeddingCertificate)> {
    let rec = state.history.last()?;
    let name = match rec.case {
        StepCase::Bootstrap => "bootstrap",
        _ => rec.letter.as_str(),
    };
    Some((dir.join("certs").join(format!("{:04}-{name}.json", rec.stage)), &rec.certificate))
}

fn persist(state_path: &Path, state: &TowerState) -> anyhow::Result<()> {
    let dir = state_path.parent().unwrap_or(Path::new("."));
    if let Some((path, cert)) = cert_path(dir, state) {
        write_json(&path, cert)?;
    }
    write_atomic(state_path, &(state.to_json() + "\n"))
}

fn load_state(path: &Path) -> Result<TowerState, Failure> {
    let text = read(path).code(2)?;
    TowerState::from_json(&text).with_context(|| format!("parsing {}", path.display())).code(2)
}

pub fn bootstrap(config: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Outcome {
    let mut cfg = RunConfig::from_json(&read(config).code(2)?).code(2)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = out.or_else(|| cfg.out.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    cfg.out = None;
    cfg.validate().code(2)?;
    let state_path = dir.join("tower.json");
    let _lock = StateLock::acquire(&state_path).code(2)?;
    if state_path.exists() {
        return Err(Failure::new(2, anyhow!("{} already exists; choose another --out", state_path.display())));
    }
    let state = cfg.bootstrap().map_err(tower_failure)?;
    write_atomic(&dir.join("config.json"), &cfg.to_json()).code(2)?;
    persist(&state_path, &state).code(2)?;

    let cert = &state.history[0].certificate;
    let rows = state.t.matrix().to_rows();
    let diag: Vec<String> = rows.iter().enumerate().map(|(i, r)| format_rational(&r[i])).collect();
    println!("t = diag({})", diag.join(", "));
    println!("L = {}", format_rational(cert.scheme.scale()));
    println!(
        "radius {} (exponent cap {}, alphabet radius {}), involution conjugacy radius {}",
        cert.radius, cert.exponent_cap, cert.alphabet_radius, cert.involution_conjugacy_radius
    );
    println!("{} words checked, {} ball involutions conjugated to t", cert.checked_words, cert.involutions.len());
    println!("wrote {}", state_path.display());
    Ok(())
}

pub struct TowerArgs {
    pub config: Option<PathBuf>,
    pub state: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub stages: Option<u64>,
    pub resume: bool,
}

pub fn state_path(state: Option<PathBuf>, out: Option<&Path>) -> PathBuf {
    state.unwrap_or_else(|| out.unwrap_or(Path::new(DEFAULT_OUT)).join("tower.json"))
}

pub fn tower(args: TowerArgs) -> Outcome {
    let path = state_path(args.state, args.out.as_deref());
    let _lock = StateLock::acquire(&path).code(2)?;
    let mut state = load_state(&path)?;
    let config = args.config.or_else(|| {
        let sibling = path.with_file_name("config.json");
        sibling.exists().then_some(sibling)
    });
    let cfg = match config {
        Some(c) => Some(RunConfig::from_json(&read(&c).code(2)?).code(2)?),
        None => None,
    };
    if let Some(cfg) = &cfg {
        if cfg.hash() != state.config_hash {
            return Err(Failure::new(
                2,
                anyhow!("the config hash {} does not match the state's {}", cfg.hash(), state.config_hash),
            ));
        }
    }
    let stages = match (args.stages, &cfg) {
        (Some(s), _) => s,
        (None, Some(cfg)) => cfg.budgets.stages as u64,
        (None, None) => return Err(Failure::new(2, anyhow!("no --stages given and no config found"))),
    };
    if !args.resume && state.stage > 0 {
        return Err(Failure::new(
            2,
            anyhow!("the state is already at stage {}; pass --resume to continue it", state.stage),
        ));
    }
    let report = run_tower(&mut state, Budget { stages }, |s| persist(&path, s).map_err(|e| format!("{e:#}")))
        .map_err(tower_failure)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.exhausted && report.stage_reached < stages {
        return Err(Failure::new(3, anyhow!("candidates exhausted at stage {} of {stages}", report.stage_reached)));
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyFile<'a> {
    config_hash: &'a str,
    seed: u64,
    stage: u64,
    pass: bool,
    radii: VerifyRadii,
    checks: &'a [VerificationReport],
}

pub fn verify(state: Option<PathBuf>, out: Option<PathBuf>, radius: Option<usize>) -> Outcome {
    let path = state_path(state, out.as_deref());
    let state = load_state(&path)?;
    let radii = radius.map(VerifyRadii::uniform).unwrap_or_default();
    let reports = run_all(&state, &radii).code(2)?;
    let pass = reports.iter().all(|r| r.pass);
    let dir = out.unwrap_or_else(|| path.parent().unwrap_or(Path::new(".")).to_path_buf());
    let file = VerifyFile {
        config_hash: &state.config_hash,
        seed: state.seed,
        stage: state.stage,
        pass,
        radii,
        checks: &reports,
    };
    write_json(&dir.join("report.json"), &file).code(2)?;
    for r in &reports {
        match r.witnesses.first() {
            None => println!("PASS {}", r.check),
            Some(w) if r.pass => println!("PASS {} ({})", r.check, w.detail),
            Some(w) => println!("FAIL {}: {}", r.check, w.detail),
        }
    }
    if pass {
        Ok(())
    } else {
        let failed = reports.iter().filter(|r| !r.pass).count();
        Err(Failure::new(1, anyhow!("{failed} of {} checks failed", reports.len())))
    }
}

fn load_cert(path: &Path) -> Result<EmbeddingCertificate, Failure> {
    let text = read(path).code(2)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).code(2)
}

pub fn cert_show(path: &Path) -> Outcome {
    let c = load_cert(path)?;
    let kind = match c.kind {
        CertKind::Free => "free product",
        CertKind::Hnn => "HNN extension",
    };
    println!("kind: {kind}{}", if c.letter.is_empty() { String::new() } else { format!(" (letter {})", c.letter) });
    println!("stage: {}", c.timestamp);
    println!("seed: {}, config hash: {}", c.seed, c.config_hash);
    println!("L = {}", format_rational(c.scheme.scale()));
    println!("radius: {}, exponent cap: {}, alphabet radius: {}", c.radius, c.exponent_cap, c.alphabet_radius);
    println!("words checked: {}, violations: {}", c.checked_words, c.violations.len());
    println!("auxiliary condition: {}", if c.aux { "holds" } else { "fails" });
    println!(
        "ball involutions conjugated to t: {} (conjugacy radius {})",
        c.involutions.len(),
        c.involution_conjugacy_radius
    );
    println!("base generators: {}, attached: {}", c.base.len(), c.attached.len());
    Ok(())
}

pub fn cert_replay(path: &Path) -> Outcome {
    let c = load_cert(path)?;
    let r = c.replay().context("replay failed").code(1)?;
    if r.agree {
        println!("replay agrees: {} words, radius {}", c.checked_words, c.radius);
        Ok(())
    } else {
        for m in &r.mismatches {
            println!("mismatch: {m}");
        }
        Err(Failure::new(1, anyhow!("{} mismatches on replay", r.mismatches.len())))
    }
}
