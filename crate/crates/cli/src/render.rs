//! Human-readable report text.

use std::fmt::Write;

use chanmask::masking::SearchReport;
use chanmask::verify::VerificationReport;
use chanmask::{
    Certificate, Complex64, ComplexMatrix, Masker, MaskingDecision, PureFixedPointResult, Witness,
};

fn complex(z: Complex64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:+.6}")).collect();
    format!("({})", parts.join(", "))
}

fn matrix(m: &ComplexMatrix, indent: &str) -> String {
    let mut s = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| complex(m[(r, c)])).collect();
        let _ = writeln!(s, "{indent}[{}]", row.join("  "));
    }
    s
}

pub fn family_header(kind: &str, members: usize) -> String {
    format!(
        "family: {kind} ({members} member{})\n",
        if members == 1 { "" } else { "s" }
    )
}

pub fn decision(d: &MaskingDecision) -> String {
    let mut s = String::new();
    match d {
        MaskingDecision::Maskable(cert) => {
            s.push_str("verdict: maskable\n");
            match cert {
                Certificate::Trivial => s.push_str("certificate: trivial (single channel)\n"),
                Certificate::CommonEigenbasis {
                    basis,
                    reference_index,
                } => {
                    let _ = writeln!(
                        s,
                        "certificate: common eigenbasis of U_ref^dag U_n (reference member {reference_index}), columns:"
                    );
                    s.push_str(&matrix(basis, "  "));
                }
                Certificate::PauliAxis { axis, c } => {
                    let _ = writeln!(s, "certificate: p0 + p_{axis} is constant, c = {c:.12}");
                }
                Certificate::FixedPointAxis { axis } => {
                    let _ = writeln!(
                        s,
                        "certificate: common pure fixed point n = {}",
                        vector(axis)
                    );
                }
                Certificate::Fourier { d } => {
                    let _ = writeln!(s, "certificate: Fourier masker, d = {d}");
                }
            }
        }
        MaskingDecision::NotMaskable(w) => {
            s.push_str("verdict: not maskable\n");
            match w {
                Witness::NoncommutingPair { i, j, comm_norm } => {
                    let _ = writeln!(
                        s,
                        "witness: quotients of members {i} and {j} do not commute, ||[W_{i}, W_{j}]||_F = {comm_norm:.6e}"
                    );
                }
                Witness::NoConstantAxis { spreads } => {
                    let _ = writeln!(
                        s,
                        "witness: p0 + p_k varies on every axis, spreads x/y/z = {:.6e} / {:.6e} / {:.6e}",
                        spreads[0], spreads[1], spreads[2]
                    );
                }
                Witness::NonUnital { member, b } => {
                    let _ = writeln!(
                        s,
                        "witness: member {member} is not unital, b = {}",
                        vector(b)
                    );
                }
                Witness::NoPureFixedPoint {
                    member,
                    eigenvalues,
                } => {
                    let evs: Vec<String> = eigenvalues.iter().map(|&z| complex(z)).collect();
                    let _ = writeln!(
                        s,
                        "witness: member {member} has no pure fixed point, eigenvalues of A: {}",
                        evs.join(", ")
                    );
                }
                Witness::NoCommonFixedPoint { axes } => {
                    s.push_str("witness: no pure fixed point shared by all members\n");
                    for (k, set) in axes.iter().enumerate() {
                        let _ = writeln!(s, "  member {k}: {}", fixed_points(set));
                    }
                }
            }
        }
    }
    s
}

fn fixed_points(set: &PureFixedPointResult) -> String {
    match set {
        PureFixedPointResult::None => "none".into(),
        PureFixedPointResult::AllDirections => "every direction".into(),
        PureFixedPointResult::Directions(ds) => {
            ds.iter().map(|d| vector(d)).collect::<Vec<_>>().join(", ")
        }
    }
}

pub fn masker(m: &Masker) -> String {
    let dims = m.dims();
    let mut s = format!(
        "masker: {}x{} isometry into {} (x) {}\n",
        m.matrix().rows(),
        m.matrix().cols(),
        dims.dim_a,
        dims.dim_b
    );
    s.push_str(&matrix(m.matrix(), "  "));
    s
}

pub fn verification(r: &VerificationReport) -> String {
    format!(
        "verification: {} (tol {:e})\n  max deviation A: {:.6e}\n  max deviation B: {:.6e}\n  worst pair: ({}, {})\n",
        if r.pass { "pass" } else { "FAIL" },
        r.tol,
        r.max_deviation_a,
        r.max_deviation_b,
        r.worst_pair.0,
        r.worst_pair.1
    )
}

pub fn bloch(
    a: &[[f64; 3]; 3],
    b: &[f64; 3],
    unital: bool,
    fixed: &PureFixedPointResult,
) -> String {
    let mut s = String::from("A =\n");
    for row in a {
        let _ = writeln!(s, "  {}", vector(row));
    }
    let _ = writeln!(s, "b = {}", vector(b));
    let _ = writeln!(s, "unital: {}", if unital { "yes" } else { "no" });
    let _ = writeln!(s, "pure fixed points: {}", fixed_points(fixed));
    s
}

pub fn demo(
    d: usize,
    perms: &[Vec<usize>],
    search: &SearchReport,
    channels: usize,
    marginal_deviation: f64,
    check: &VerificationReport,
) -> String {
    let mut s = format!("alphabet size d = {d}, permutations {perms:?}\n");
    let found = search.masking_injections();
    if found == 0 {
        let _ = writeln!(
            s,
            "classical: no classical masker among {} injections",
            search.injection_count
        );
    } else {
        let _ = writeln!(
            s,
            "classical: {found} of {} injections mask every permutation{}",
            search.injection_count,
            if d == 1 || perms.len() == 1 {
                " (degenerate family)"
            } else {
                ""
            }
        );
    }
    if let Some(ce) = search
        .first_counterexample_per_injection
        .iter()
        .flatten()
        .next()
    {
        let _ = writeln!(
            s,
            "  first counterexample: input {} under permutations {} and {} encodes to {:?} vs {:?}",
            ce.input, ce.perms.0, ce.perms.1, ce.pairs.0, ce.pairs.1
        );
    }
    let _ = writeln!(
        s,
        "quantum: Fourier masker {} on {channels} channels, marginal deviation from 1/d = {marginal_deviation:.3e}",
        if check.pass { "verified" } else { "FAILED" }
    );
    s
}
