use std::io::Write;
use std::path::Path;

use chanmask::channels::{bloch_affine, pure_fixed_points, PureFixedPointResult};
use chanmask::linalg::{DECISION_TOL, VERIFY_TOL};
use chanmask::masking::{classical_no_go_search, synthesize_classical_masker, SearchReport};
use chanmask::verify::{reduced_channel_choi, verify_masking, VerificationReport};
use chanmask::{
    sample, ChannelSpec, ClassicalChannel, ComplexMatrix, Family, MaskingDecision, Subsystem,
};
use serde::Serialize;

use crate::args::{Cli, Command, Flags};
use crate::files::{ChannelFile, FamilyFile, FileOptions, MaskerFile};
use crate::{render, CliError, Exit};

/// Effective tolerances after merging defaults, file options and flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub tol: f64,
    pub verify_tol: f64,
    pub seed: u64,
    #[serde(skip)]
    pub json: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: DECISION_TOL,
            verify_tol: VERIFY_TOL,
            seed: 0,
            json: false,
        }
    }
}

impl Settings {
    /// Flags win over file options, which win over the defaults.
    pub fn resolve(file: &FileOptions, flags: &Flags) -> Result<Self, CliError> {
        let d = Self::default();
        let s = Self {
            tol: flags.tol.or(file.tol).unwrap_or(d.tol),
            verify_tol: flags.verify_tol.or(file.verify_tol).unwrap_or(d.verify_tol),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            json: flags.json,
        };
        for (name, v) in [("tol", s.tol), ("verify_tol", s.verify_tol)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::schema(format!(
                    "{name} must be a finite non-negative number, got {v}"
                )));
            }
        }
        Ok(s)
    }
}

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Exit, CliError> {
    match &cli.command {
        Command::Decide { family, flags } => cmd_decide(family, flags, out),
        Command::Synthesize {
            family,
            output,
            flags,
        } => cmd_synthesize(family, output, flags, out),
        Command::Verify {
            family,
            masker,
            flags,
        } => cmd_verify(family, masker, flags, out),
        Command::Bloch { channel, flags } => cmd_bloch(channel, flags, out),
        Command::DemoClassical {
            d,
            perms,
            samples,
            flags,
        } => {
            let perms = perms
                .iter()
                .map(|p| parse_perm(p))
                .collect::<Result<Vec<_>, _>>()?;
            let opts = DemoOptions {
                d: *d,
                perms,
                samples: *samples,
            };
            cmd_demo_classical(&opts, flags, out)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write report: {e}")))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = crate::json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
    emit(out, &text)
}

fn load_family(path: &Path, flags: &Flags) -> Result<(FamilyFile, Family, Settings), CliError> {
    let file = FamilyFile::read(path)?;
    let family = file.to_family()?;
    let settings = Settings::resolve(&file.options, flags)?;
    Ok((file, family, settings))
}

#[derive(Serialize)]
struct DecideReport<'a> {
    command: &'static str,
    kind: &'static str,
    members: usize,
    settings: Settings,
    decision: &'a MaskingDecision,
}

pub fn cmd_decide(
    family_path: &Path,
    flags: &Flags,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let (file, family, settings) = load_family(family_path, flags)?;
    let decision = family.decide(settings.tol, settings.seed)?;
    if settings.json {
        emit_json(
            out,
            &DecideReport {
                command: "decide",
                kind: file.kind.name(),
                members: file.members.len(),
                settings,
                decision: &decision,
            },
        )?;
    } else {
        emit(
            out,
            &render::family_header(file.kind.name(), file.members.len()),
        )?;
        emit(out, &render::decision(&decision))?;
    }
    Ok(if decision.is_maskable() {
        Exit::Positive
    } else {
        Exit::Negative
    })
}

#[derive(Serialize)]
struct SynthesizeReport<'a> {
    command: &'static str,
    kind: &'static str,
    settings: Settings,
    decision: &'a MaskingDecision,
    output: Option<String>,
    verification: Option<&'a VerificationReport>,
}

pub fn cmd_synthesize(
    family_path: &Path,
    out_path: &Path,
    flags: &Flags,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let (file, family, settings) = load_family(family_path, flags)?;
    let decision = family.decide(settings.tol, settings.seed)?;
    let mut report = SynthesizeReport {
        command: "synthesize",
        kind: file.kind.name(),
        settings,
        decision: &decision,
        output: None,
        verification: None,
    };
    let Some(cert) = decision.certificate() else {
        if settings.json {
            emit_json(out, &report)?;
        } else {
            emit(
                out,
                &render::family_header(file.kind.name(), file.members.len()),
            )?;
            emit(out, &render::decision(&decision))?;
            emit(out, "no masker written\n")?;
        }
        return Ok(Exit::Negative);
    };
    let masker = family.synthesize(cert, settings.tol)?;
    let check = verify_masking(&masker, &family.channels(), settings.verify_tol)?;
    if !check.pass {
        return Err(CliError::Consistency(format!(
            "synthesized masker fails verification (deviations {:e} / {:e})",
            check.max_deviation_a, check.max_deviation_b
        )));
    }
    MaskerFile::write(&masker, out_path)?;
    report.output = Some(out_path.display().to_string());
    report.verification = Some(&check);
    if settings.json {
        emit_json(out, &report)?;
    } else {
        emit(
            out,
            &render::family_header(file.kind.name(), file.members.len()),
        )?;
        emit(out, &render::decision(&decision))?;
        emit(out, &render::masker(&masker))?;
        emit(out, &render::verification(&check))?;
        emit(out, &format!("wrote {}\n", out_path.display()))?;
    }
    Ok(Exit::Positive)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    command: &'static str,
    kind: &'static str,
    members: usize,
    verification: &'a VerificationReport,
}

pub fn cmd_verify(
    family_path: &Path,
    masker_path: &Path,
    flags: &Flags,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let (file, family, settings) = load_family(family_path, flags)?;
    let masker = MaskerFile::read(masker_path)?;
    let channels = family.channels();
    let report = verify_masking(&masker, &channels, settings.verify_tol)?;
    if settings.json {
        emit_json(
            out,
            &VerifyReport {
                command: "verify",
                kind: file.kind.name(),
                members: channels.len(),
                verification: &report,
            },
        )?;
    } else {
        emit(
            out,
            &render::family_header(file.kind.name(), file.members.len()),
        )?;
        emit(out, &render::verification(&report))?;
    }
    Ok(if report.pass {
        Exit::Positive
    } else {
        Exit::Negative
    })
}

#[derive(Serialize)]
struct BlochReport {
    command: &'static str,
    a: [[f64; 3]; 3],
    b: [f64; 3],
    unital: bool,
    pure_fixed_points: PureFixedPointResult,
}

pub fn cmd_bloch(
    channel_path: &Path,
    flags: &Flags,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let spec = ChannelFile::read(channel_path)?;
    let settings = Settings::resolve(&FileOptions::default(), flags)?;
    let affine = bloch_affine(&spec)?;
    let fixed = pure_fixed_points(&spec, settings.tol)?;
    let report = BlochReport {
        command: "bloch",
        a: affine.a,
        b: affine.b,
        unital: affine.b_norm() <= settings.tol,
        pure_fixed_points: fixed,
    };
    if settings.json {
        emit_json(out, &report)?;
    } else {
        emit(
            out,
            &render::bloch(
                &report.a,
                &report.b,
                report.unital,
                &report.pure_fixed_points,
            ),
        )?;
    }
    Ok(Exit::Positive)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoOptions {
    pub d: usize,
    /// Empty means the identity and the cyclic shift.
    pub perms: Vec<Vec<usize>>,
    pub samples: usize,
}

fn parse_perm(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| {
                CliError::schema(format!(
                    "--perm {text:?}: expected comma-separated integers"
                ))
            })
        })
        .collect()
}

fn default_perms(d: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..d).collect();
    let shift: Vec<usize> = (0..d).map(|x| (x + 1) % d).collect();
    if shift == id {
        vec![id]
    } else {
        vec![id, shift]
    }
}

#[derive(Serialize)]
struct QuantumCheck {
    channels: usize,
    /// Largest Frobenius distance between a reduced Choi matrix and `1/d`.
    max_marginal_deviation: f64,
    verification: VerificationReport,
}

#[derive(Serialize)]
struct DemoReport<'a> {
    command: &'static str,
    d: usize,
    perms: &'a [Vec<usize>],
    injections: usize,
    classical_maskers: usize,
    first_counterexample: Option<chanmask::masking::Counterexample>,
    quantum: QuantumCheck,
}

pub fn cmd_demo_classical(
    opts: &DemoOptions,
    flags: &Flags,
    out: &mut dyn Write,
) -> Result<Exit, CliError> {
    let settings = Settings::resolve(&FileOptions::default(), flags)?;
    let d = opts.d;
    let perms = if opts.perms.is_empty() {
        default_perms(d)
    } else {
        opts.perms.clone()
    };
    let search: SearchReport = classical_no_go_search(d, &perms)?;

    let masker = synthesize_classical_masker(d)?;
    let mut channels = perms
        .iter()
        .map(|p| ClassicalChannel::permutation(p).map(ChannelSpec::Classical))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = sample::seeded(settings.seed);
    channels.extend(
        (0..opts.samples)
            .map(|_| ChannelSpec::Classical(sample::classical_channel(&mut rng, d, d))),
    );

    let constant = ComplexMatrix::identity(d * d).scale_real(1.0 / d as f64);
    let mut max_marginal_deviation: f64 = 0.0;
    for e in &channels {
        for side in Subsystem::BOTH {
            let choi = reduced_channel_choi(&masker, e, side)?;
            max_marginal_deviation = max_marginal_deviation.max(choi.distance(&constant));
        }
    }
    let verification = verify_masking(&masker, &channels, settings.verify_tol)?;
    let verified = verification.pass && max_marginal_deviation <= settings.verify_tol;

    let report = DemoReport {
        command: "demo-classical",
        d,
        perms: &perms,
        injections: search.injection_count,
        classical_maskers: search.masking_injections(),
        first_counterexample: search
            .first_counterexample_per_injection
            .iter()
            .flatten()
            .next()
            .copied(),
        quantum: QuantumCheck {
            channels: channels.len(),
            max_marginal_deviation,
            verification,
        },
    };
    if settings.json {
        emit_json(out, &report)?;
    } else {
        emit(
            out,
            &render::demo(
                d,
                &perms,
                &search,
                report.quantum.channels,
                max_marginal_deviation,
                &report.quantum.verification,
            ),
        )?;
    }
    Ok(if verified {
        Exit::Positive
    } else {
        Exit::Negative
    })
}
