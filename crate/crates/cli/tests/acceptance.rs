//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//!
//! Every criterion runs on seeded inputs, so a failure reproduces exactly.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chanmask::channels::KrausChannel;
use chanmask::linalg::{commutator_norm, eig_hermitian, is_isometry, partial_trace};
use chanmask::masking::{
    classical_no_go_search, decide_depolarized_family, decide_gate_family, decide_identity_family,
    decide_identity_pair, synthesize_classical_masker, synthesize_gate_masker,
    synthesize_identity_masker, synthesize_pauli_masker,
};
use chanmask::verify::{
    local_orthogonality_check, reduced_channel_choi, verify_identity_masking, verify_masking,
    VerificationReport,
};
use chanmask::{
    gates, sample, Axis, BipartiteDims, Certificate, ChannelSpec, ClassicalChannel, ComplexMatrix,
    Family, GateFamily, Masker, MaskingDecision, PauliFourVector, Subsystem, Witness,
};
use chanmask_cli::files::MaskerFile;
use rand::Rng;

const DECISION_TOL: f64 = 1e-8;
const VERIFY_TOL: f64 = 1e-9;
const GATE_DIMS: [usize; 4] = [2, 3, 4, 6];

type Outcome = Result<String, String>;

/// Maskers produced along the way together with the families they hide,
/// re-checked structurally by the last criterion.
#[derive(Default)]
struct Produced {
    maskers: Vec<(Masker, Vec<ChannelSpec>)>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: chanmask::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn gate_masker(
    us: &[ComplexMatrix],
    seed: u64,
) -> Result<(GateFamily, MaskingDecision, Option<Masker>), String> {
    let fam = core(GateFamily::new(us.to_vec()))?;
    let decision = core(decide_gate_family(&fam, DECISION_TOL, seed))?;
    let masker = match decision.certificate() {
        Some(Certificate::CommonEigenbasis {
            basis,
            reference_index,
        }) => Some(core(synthesize_gate_masker(&fam, basis, *reference_index))?),
        Some(Certificate::Trivial) => Some(core(
            Family::Gates(fam.clone()).synthesize(&Certificate::Trivial, DECISION_TOL),
        )?),
        Some(other) => return Err(format!("unexpected certificate {other:?}")),
        None => None,
    };
    Ok((fam, decision, masker))
}

fn unitary_channels(us: &[ComplexMatrix]) -> Vec<ChannelSpec> {
    us.iter()
        .map(|u| ChannelSpec::Unitary { matrix: u.clone() })
        .collect()
}

fn check_report(r: &VerificationReport, bound: f64, what: &str) -> Result<(), String> {
    ensure(r.pass && r.max_deviation() <= bound, || {
        format!(
            "{what}: deviations {:e} / {:e} exceed {bound:e}",
            r.max_deviation_a, r.max_deviation_b
        )
    })
}

fn criterion_1(produced: &mut Produced, pairs: &mut Vec<(Masker, ComplexMatrix)>) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for trial in 0..200u64 {
        let mut rng = sample::seeded(1000 + trial);
        let d = GATE_DIMS[(trial % 4) as usize];
        let size = rng.random_range(2..=6);
        let us = sample::commuting_gate_family(&mut rng, d, size);
        let (_, decision, masker) = gate_masker(&us, trial)?;
        let m =
            masker.ok_or_else(|| format!("trial {trial}: commuting family judged {decision:?}"))?;
        let channels = unitary_channels(&us);
        let report = core(verify_masking(&m, &channels, VERIFY_TOL))?;
        check_report(
            &report,
            VERIFY_TOL,
            &format!("trial {trial} (d={d}, size={size})"),
        )?;
        worst = worst.max(report.max_deviation());
        // M·U₁ hides {1, U₁†Uₙ} for every n
        let base = core(Masker::new(m.matrix() * &us[0], m.dims()))?;
        for u in &us[1..] {
            pairs.push((base.clone(), &us[0].adjoint() * u));
        }
        produced.maskers.push((m, channels));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}, limit 10 s")
    })?;
    Ok(format!(
        "200 families maskable, worst deviation {worst:.2e}, {elapsed:.2?}"
    ))
}

fn criterion_2() -> Outcome {
    let mut worst_mismatch: f64 = 0.0;
    for trial in 0..200u64 {
        let mut rng = sample::seeded(5000 + trial);
        let d = GATE_DIMS[(trial % 4) as usize];
        let us = loop {
            let us: Vec<ComplexMatrix> = (0..3).map(|_| sample::unitary(&mut rng, d)).collect();
            let r = us[0].adjoint();
            if core(commutator_norm(&(&r * &us[1]), &(&r * &us[2])))? >= 0.1 {
                break us;
            }
        };
        let (_, decision, _) = gate_masker(&us, trial)?;
        let MaskingDecision::NotMaskable(Witness::NoncommutingPair { i, j, comm_norm }) = decision
        else {
            return Err(format!(
                "trial {trial}: expected a noncommuting witness, got {decision:?}"
            ));
        };
        let r = us[0].adjoint();
        let recomputed = core(commutator_norm(&(&r * &us[i]), &(&r * &us[j])))?;
        let mismatch = (recomputed - comm_norm).abs();
        ensure(mismatch <= 1e-12, || {
            format!("trial {trial}: witness norm {comm_norm} vs recomputed {recomputed}")
        })?;
        worst_mismatch = worst_mismatch.max(mismatch);
    }
    Ok(format!(
        "200 triples rejected, worst witness mismatch {worst_mismatch:.1e}"
    ))
}

fn criterion_3(pairs: &[(Masker, ComplexMatrix)]) -> Outcome {
    for (k, (m, u)) in pairs.iter().enumerate() {
        let fam = [
            ChannelSpec::identity(u.rows()),
            ChannelSpec::Unitary { matrix: u.clone() },
        ];
        check_report(
            &core(verify_masking(m, &fam, VERIFY_TOL))?,
            VERIFY_TOL,
            &format!("pair {k}"),
        )?;
        ensure(core(local_orthogonality_check(m, u, VERIFY_TOL))?, || {
            format!("pair {k}: masked eigenstates are not locally orthogonal")
        })?;
    }
    Ok(format!(
        "{} pairs {{1, U}} map distinct eigenspaces to locally orthogonal states",
        pairs.len()
    ))
}

fn criterion_4(produced: &mut Produced) -> Outcome {
    let c = 0.6;
    let mut fam = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            let mu = c * a as f64 / 4.0;
            let nu = (1.0 - c) * b as f64 / 4.0;
            fam.push(core(PauliFourVector::new(mu, c - mu, nu, 1.0 - c - nu))?);
        }
    }
    match core(Family::Pauli(fam.clone()).decide(DECISION_TOL, 0))? {
        MaskingDecision::Maskable(Certificate::PauliAxis {
            axis: Axis::X,
            c: got,
        }) => ensure((got - c).abs() <= 1e-12, || {
            format!("certificate c = {got}, expected {c}")
        })?,
        other => return Err(format!("grid family: unexpected {other:?}")),
    }
    let m = synthesize_pauli_masker(Axis::X);
    let channels: Vec<ChannelSpec> = fam.iter().copied().map(ChannelSpec::Pauli).collect();
    let grid = core(verify_masking(&m, &channels, 1e-12))?;
    check_report(&grid, 1e-12, "grid family")?;
    produced.maskers.push((m.clone(), channels));

    let depol: Vec<PauliFourVector> = [0.2, 0.8]
        .iter()
        .map(|&p| PauliFourVector::new(1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p))
        .collect::<chanmask::Result<_>>()
        .map_err(|e| e.to_string())?;
    let decision = core(Family::Pauli(depol.clone()).decide(DECISION_TOL, 0))?;
    ensure(
        matches!(
            decision,
            MaskingDecision::NotMaskable(Witness::NoConstantAxis { .. })
        ),
        || format!("depolarizing family: unexpected {decision:?}"),
    )?;
    let depol_channels: Vec<ChannelSpec> = depol.into_iter().map(ChannelSpec::Pauli).collect();
    let fail = core(verify_masking(&m, &depol_channels, VERIFY_TOL))?;
    ensure(!fail.pass && fail.max_deviation() >= 0.05, || {
        format!(
            "x masker on depolarizing family: deviation {:e}",
            fail.max_deviation()
        )
    })?;
    Ok(format!(
        "grid c = 0.6 on axis x, deviation {:.1e}; depolarizing {{0.2, 0.8}} rejected, x masker deviation {:.3}",
        grid.max_deviation(),
        fail.max_deviation()
    ))
}

fn dephasing_about(n: [f64; 3], p: f64) -> Result<ChannelSpec, String> {
    let ops = vec![
        ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
        gates::bloch_operator(n).scale_real(p.sqrt()),
    ];
    core(KrausChannel::new(2, 2, ops)).map(ChannelSpec::Kraus)
}

fn rotation_mixture<R: Rng>(rng: &mut R, n: [f64; 3]) -> Result<ChannelSpec, String> {
    let k = rng.random_range(2..=4);
    let weights = sample::probability_vector(rng, k);
    let ops = weights
        .iter()
        .map(|&w| {
            gates::rotation(
                n,
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
            .scale_real(w.sqrt())
        })
        .collect();
    core(KrausChannel::new(2, 2, ops)).map(ChannelSpec::Kraus)
}

fn identity_masker(es: &[ChannelSpec]) -> Result<Masker, String> {
    match core(decide_identity_family(es, DECISION_TOL))? {
        MaskingDecision::Maskable(Certificate::FixedPointAxis { axis }) => {
            core(synthesize_identity_masker(es, axis, DECISION_TOL))
        }
        other => Err(format!("unexpected {other:?}")),
    }
}

fn with_identity(es: &[ChannelSpec]) -> Vec<ChannelSpec> {
    std::iter::once(ChannelSpec::identity(2))
        .chain(es.iter().cloned())
        .collect()
}

fn criterion_5(produced: &mut Produced) -> Outcome {
    let mut worst_dephasing: f64 = 0.0;
    for k in 1..=9 {
        let p = k as f64 / 10.0;
        let e = core(ChannelSpec::dephasing(p))?;
        let m =
            identity_masker(std::slice::from_ref(&e)).map_err(|s| format!("dephasing {p}: {s}"))?;
        let r = core(verify_identity_masking(&m, &e, 1e-12))?;
        check_report(&r, 1e-12, &format!("dephasing {p}"))?;
        worst_dephasing = worst_dephasing.max(r.max_deviation());
        produced.maskers.push((m, with_identity(&[e])));
    }

    let ad = core(decide_identity_pair(
        &core(ChannelSpec::amplitude_damping(0.3))?,
        DECISION_TOL,
    ))?;
    ensure(
        matches!(ad, MaskingDecision::NotMaskable(Witness::NonUnital { .. })),
        || format!("amplitude damping: unexpected {ad:?}"),
    )?;
    let dp = core(decide_identity_pair(
        &core(ChannelSpec::depolarizing(0.5))?,
        DECISION_TOL,
    ))?;
    ensure(
        matches!(
            dp,
            MaskingDecision::NotMaskable(Witness::NoPureFixedPoint { .. })
        ),
        || format!("depolarizing: unexpected {dp:?}"),
    )?;

    let mut worst_random: f64 = 0.0;
    for trial in 0..100u64 {
        let mut rng = sample::seeded(9000 + trial);
        let n = sample::unit_vector3(&mut rng);
        let e = rotation_mixture(&mut rng, n)?;
        let m = identity_masker(std::slice::from_ref(&e))
            .map_err(|s| format!("rotation mixture {trial}: {s}"))?;
        let r = core(verify_identity_masking(&m, &e, VERIFY_TOL))?;
        check_report(&r, VERIFY_TOL, &format!("rotation mixture {trial}"))?;
        worst_random = worst_random.max(r.max_deviation());
        produced.maskers.push((m, with_identity(&[e])));
    }
    Ok(format!(
        "dephasing 0.1..0.9 deviation {worst_dephasing:.1e}; non-unital and depolarizing witnesses correct; \
         100 rotation mixtures verified, worst {worst_random:.1e}"
    ))
}

fn criterion_6(produced: &mut Produced) -> Outcome {
    let mut worst: f64 = 0.0;
    for trial in 0..50u64 {
        let mut rng = sample::seeded(12000 + trial);
        let n = sample::unit_vector3(&mut rng);
        let es = (0..3)
            .map(|_| dephasing_about(n, rng.random_range(0.05..0.95)))
            .collect::<Result<Vec<_>, _>>()?;
        let m = identity_masker(&es).map_err(|s| format!("common axis {trial}: {s}"))?;
        let fam = with_identity(&es);
        let r = core(verify_masking(&m, &fam, VERIFY_TOL))?;
        check_report(&r, VERIFY_TOL, &format!("common axis {trial}"))?;
        worst = worst.max(r.max_deviation());
        produced.maskers.push((m, fam));

        let other = loop {
            let v = sample::unit_vector3(&mut rng);
            if v.iter().zip(n).map(|(a, b)| a * b).sum::<f64>().abs() < 0.99 {
                break v;
            }
        };
        let mixed = [
            dephasing_about(n, rng.random_range(0.05..0.95))?,
            dephasing_about(other, rng.random_range(0.05..0.95))?,
        ];
        let d = core(decide_identity_family(&mixed, DECISION_TOL))?;
        ensure(
            matches!(
                d,
                MaskingDecision::NotMaskable(Witness::NoCommonFixedPoint { .. })
            ),
            || format!("mixed axes {trial}: unexpected {d:?}"),
        )?;
    }
    Ok(format!(
        "50 common-axis families verified (worst {worst:.1e}); 50 mixed-axis families rejected"
    ))
}

fn criterion_7(produced: &mut Produced) -> Outcome {
    let start = Instant::now();
    let search = core(classical_no_go_search(2, &[vec![0, 1], vec![1, 0]]))?;
    ensure(search.injection_count == 12 && search.violating_all, || {
        format!(
            "search: {} injections, {} masking",
            search.injection_count,
            search.masking_injections()
        )
    })?;
    let mut worst_dev: f64 = 0.0;
    let mut worst_marginal: f64 = 0.0;
    for trial in 0..50u64 {
        let mut rng = sample::seeded(15000 + trial);
        let d = rng.random_range(2..=6);
        let m = core(synthesize_classical_masker(d))?;
        let shift: Vec<usize> = (0..d).map(|x| (x + 1) % d).collect();
        let fam = vec![
            ChannelSpec::Classical(sample::classical_channel(&mut rng, d, d)),
            ChannelSpec::Classical(core(ClassicalChannel::permutation(
                &(0..d).collect::<Vec<_>>(),
            ))?),
            ChannelSpec::Classical(core(ClassicalChannel::permutation(&shift))?),
        ];
        let r = core(verify_masking(&m, &fam, VERIFY_TOL))?;
        check_report(&r, VERIFY_TOL, &format!("classical {trial} (d={d})"))?;
        worst_dev = worst_dev.max(r.max_deviation());
        let constant = ComplexMatrix::identity(d * d).scale_real(1.0 / d as f64);
        for side in Subsystem::BOTH {
            let dist = core(reduced_channel_choi(&m, &fam[0], side))?.distance(&constant);
            ensure(dist <= VERIFY_TOL, || {
                format!("classical {trial}: marginal off 1/d by {dist:e}")
            })?;
            worst_marginal = worst_marginal.max(dist);
        }
        produced.maskers.push((m, fam));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}, limit 5 s")
    })?;
    Ok(format!(
        "no classical masker among 12 injections; 50 Fourier checks, deviation {worst_dev:.1e}, \
         marginal {worst_marginal:.1e}, {elapsed:.2?}"
    ))
}

fn criterion_8(produced: &mut Produced) -> Outcome {
    let mut compared = 0;
    let mut verified = 0;
    for trial in 0..30u64 {
        let mut rng = sample::seeded(18000 + trial);
        let d = rng.random_range(2..=4);
        let size = rng.random_range(2..=4);
        let us: Vec<ComplexMatrix> = if trial % 2 == 0 {
            sample::commuting_gate_family(&mut rng, d, size)
        } else {
            (0..size).map(|_| sample::unitary(&mut rng, d)).collect()
        };
        let (fam, gate_decision, masker) = gate_masker(&us, trial)?;
        for p in [0.1, 0.5, 1.0] {
            let dep = core(decide_depolarized_family(p, &fam, DECISION_TOL, trial))?;
            ensure(dep.is_maskable() == gate_decision.is_maskable(), || {
                format!("trial {trial}, p = {p}: depolarized verdict differs from gate verdict")
            })?;
            compared += 1;
            if let Some(m) = &masker {
                let channels = us
                    .iter()
                    .map(|u| ChannelSpec::depolarized_unitary(p, u.clone()))
                    .collect::<chanmask::Result<Vec<_>>>()
                    .map_err(|e| e.to_string())?;
                check_report(
                    &core(verify_masking(m, &channels, VERIFY_TOL))?,
                    VERIFY_TOL,
                    &format!("trial {trial}, p = {p}"),
                )?;
                verified += 1;
                produced.maskers.push((m.clone(), channels));
            }
        }
        let channels = us
            .iter()
            .map(|u| ChannelSpec::depolarized_unitary(0.0, u.clone()))
            .collect::<chanmask::Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let any = core(Masker::new(
            sample::isometry(&mut rng, d * d, d),
            core(BipartiteDims::new(d, d))?,
        ))?;
        check_report(
            &core(verify_masking(&any, &channels, VERIFY_TOL))?,
            VERIFY_TOL,
            &format!("trial {trial}, p = 0"),
        )?;
    }
    Ok(format!("{compared} verdicts agree, {verified} depolarized families verified, p = 0 hidden by random isometries"))
}

fn choi_ok(choi: &ComplexMatrix, din: usize, dout: usize) -> Result<(), String> {
    let min = core(eig_hermitian(choi))?.values[0];
    ensure(min >= -1e-10, || format!("Choi minimum eigenvalue {min:e}"))?;
    let marginal = core(partial_trace(
        choi,
        core(BipartiteDims::new(din, dout))?,
        Subsystem::B,
    ))?;
    let dev = marginal.distance(&ComplexMatrix::identity(din));
    ensure(dev <= 1e-10, || {
        format!("Choi input marginal off identity by {dev:e}")
    })
}

fn criterion_9(produced: &Produced) -> Outcome {
    let mut chois = 0;
    for (k, (m, fam)) in produced.maskers.iter().enumerate() {
        ensure(is_isometry(m.matrix(), 1e-10), || {
            format!("masker {k} is not an isometry")
        })?;
        let back =
            MaskerFile::parse(&MaskerFile::render(m)).map_err(|e| format!("masker {k}: {e}"))?;
        let exact = back.dims() == m.dims()
            && back
                .matrix()
                .as_slice()
                .iter()
                .zip(m.matrix().as_slice())
                .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        ensure(exact, || {
            format!("masker {k}: file round-trip is not bit-exact")
        })?;
        for e in fam {
            choi_ok(&e.choi(), e.din(), e.dout())
                .map_err(|s| format!("masker {k}, channel: {s}"))?;
            for side in Subsystem::BOTH {
                let out = match side {
                    Subsystem::A => m.dims().dim_b,
                    Subsystem::B => m.dims().dim_a,
                };
                let choi = core(reduced_channel_choi(m, e, side))?;
                choi_ok(&choi, e.din(), out)
                    .map_err(|s| format!("masker {k}, reduced channel: {s}"))?;
                chois += 1;
            }
        }
    }
    Ok(format!(
        "{} maskers isometric and round-trip exactly; {chois} reduced Choi matrices PSD",
        produced.maskers.len()
    ))
}

fn main() -> ExitCode {
    let mut produced = Produced::default();
    let mut pairs = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        (
            "commuting gate families are maskable and verify",
            criterion_1(&mut produced, &mut pairs),
        ),
        (
            "noncommuting triples are rejected with exact witnesses",
            criterion_2(),
        ),
        (
            "masked eigenspaces are locally orthogonal",
            criterion_3(&pairs),
        ),
        (
            "Pauli families: two-parameter grid and depolarizing",
            criterion_4(&mut produced),
        ),
        (
            "identity masking of unital qubit channels",
            criterion_5(&mut produced),
        ),
        (
            "identity families with common and mixed axes",
            criterion_6(&mut produced),
        ),
        (
            "classical no-go and quantum Fourier masker",
            criterion_7(&mut produced),
        ),
        (
            "depolarized unitaries reduce to gate families",
            criterion_8(&mut produced),
        ),
        (
            "structural checks and file round-trips",
            criterion_9(&produced),
        ),
    ];
    let mut failed = 0;
    for (k, (title, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {title} ({detail})", k + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL criterion {}: {title} ({reason})", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
