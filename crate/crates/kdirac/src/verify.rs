//! Verification campaigns: run the checks over random sections or covectors
//! and assemble deterministic reports.
//!
//! Trials fan out across worker threads (capped by the `KDIRAC_THREADS`
//! environment variable); every trial derives its own seed from the master
//! seed and its index, and results are merged in index order, so reports are
//! byte-identical for a fixed command line.

use crate::casimir::{splitting_check, CasimirError, SplittingOutcome};
use crate::clifford::{blade_name, CliffordElement};
use crate::flatmodel::{mono_to_string, random_section, Poly};
use crate::report::{Finding, Report, Status};
use crate::scalar::FieldScalar;
use crate::sequences::{
    compositions, covector_rows, node_symbols, search_repairs, symbol_matrix, CompKind,
    Composition, Edition, OperatorSet, SequenceError, SymbolMatrix,
};
use crate::weights::{casimir_alphas, klimyk_multiplicity, young_symmetry_holds, Weight, WeightError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

const SEED_STRIDE: u64 = 0x9E3779B97F4A7C15;

/// Deterministic per-task seed derived from the master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    master ^ SEED_STRIDE.wrapping_mul(index.wrapping_add(1))
}

fn thread_cap() -> usize {
    if let Ok(v) = std::env::var("KDIRAC_THREADS") {
        if let Ok(parsed) = v.trim().parse::<usize>() {
            return parsed.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(1)
}

/// Maps `f` over `0..count`, possibly in parallel, preserving index order.
fn parallel_map<T: Send, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync,
{
    let cap = thread_cap().min(count.max(1));
    if cap <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, T)>> = Mutex::new(Vec::with_capacity(count));
    std::thread::scope(|scope| {
        for _ in 0..cap {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= count {
                    break;
                }
                let value = f(idx);
                results.lock().unwrap().push((idx, value));
            });
        }
    });
    let mut v = results.into_inner().unwrap();
    v.sort_by_key(|(i, _)| *i);
    v.into_iter().map(|(_, t)| t).collect()
}

/// First nonzero coefficient of a component list, with full provenance.
fn first_nonzero(out: &[Poly], labels: &[&'static str]) -> Option<(String, String, String, String)> {
    for (p, label) in out.iter().zip(labels) {
        for (mono, coeff) in p.terms() {
            if coeff.is_zero() {
                continue;
            }
            if let Some((blade, value)) = coeff.terms().next() {
                return Some((
                    label.to_string(),
                    mono_to_string(mono),
                    blade_name(blade),
                    value.to_string(),
                ));
            }
        }
    }
    None
}

struct TrialFailure {
    trial: usize,
    output: String,
    monomial: String,
    blade: String,
    coefficient: String,
}

/// Applies every composition of the k-Dirac sequence to random sections and
/// reports, per composition, either an exact zero or the first residue.
pub fn verify_complex(
    k: u16,
    n: u16,
    degree: u32,
    trials: usize,
    seed: u64,
    edition: Edition,
) -> Result<Report, SequenceError> {
    let set = OperatorSet::new(k, n, edition)?;
    let comps = compositions(k);
    let q_pullback = k == 3;
    let mut report = Report::new("verify complex");
    report.param("k", k);
    report.param("n", n);
    report.param("degree", degree);
    report.param("trials", trials);
    report.param("seed", seed);
    report.param("tables", edition);

    let outcomes: Vec<Vec<Option<TrialFailure>>> = parallel_map(trials, |t| {
        comps
            .iter()
            .enumerate()
            .map(|(ci, comp)| {
                let inputs = set.composition_inputs(comp).len();
                let s_seed = derive_seed(seed, (t * 16 + ci) as u64);
                let section = random_section(k, n, degree, inputs, s_seed, q_pullback);
                let out = set
                    .apply_composition(comp, &section)
                    .expect("generated section fits the composition");
                first_nonzero(&out, set.composition_outputs(comp)).map(
                    |(output, monomial, blade, coefficient)| TrialFailure {
                        trial: t,
                        output,
                        monomial,
                        blade,
                        coefficient,
                    },
                )
            })
            .collect()
    });

    for (ci, comp) in comps.iter().enumerate() {
        let failures: Vec<&TrialFailure> = outcomes
            .iter()
            .filter_map(|per_comp| per_comp[ci].as_ref())
            .collect();
        let convention = if matches!(comp.kind, CompKind::MidSquare) {
            " (convention: D6*D3 + D5*D4)"
        } else {
            ""
        };
        if failures.is_empty() {
            report.push_check(
                comp.id,
                Status::ExactZero,
                format!("zero on all {trials} random degree-{degree} sections{convention}"),
            );
        } else {
            let f = failures[0];
            report.push_check(
                comp.id,
                Status::Finding,
                format!(
                    "nonzero on {} of {trials} sections; first residue in trial {}{convention}",
                    failures.len(),
                    f.trial
                ),
            );
            let suggestions = search_repairs(&set, comp);
            let suggestion_text = if suggestions.is_empty() {
                None
            } else {
                Some(
                    suggestions
                        .iter()
                        .map(|s| s.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                )
            };
            report.push_finding(Finding {
                check: comp.id.to_string(),
                location: format!("trial {}, output {}", f.trial, f.output),
                term: format!("blade {}", f.blade),
                monomial: Some(f.monomial.clone()),
                coefficient: Some(f.coefficient.clone()),
                suggestion: suggestion_text,
            });
        }
    }
    report.finalize();
    Ok(report)
}

/// Draws integer covector rows in [-4, 4], resampling any all-zero row.
fn sample_covector(k: u16, n: u16, seed: u64) -> (Vec<CliffordElement>, usize) {
    let m = u32::from(n) + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resampled = 0usize;
    let mut rows = Vec::with_capacity(k as usize);
    for _ in 0..k {
        loop {
            let coords: Vec<FieldScalar> = (0..n)
                .map(|_| FieldScalar::from_int(rng.gen_range(-4..=4), m))
                .collect();
            if coords.iter().all(|c| c.is_zero()) {
                resampled += 1;
                continue;
            }
            rows.push(coords);
            break;
        }
    }
    (covector_rows(&rows, n), resampled)
}

fn expected_ranks(k: u16, n: u16) -> (Vec<usize>, Vec<usize>) {
    let dim = 1usize << n;
    match k {
        2 => (vec![dim, dim, dim], vec![dim, 2 * dim, 2 * dim, dim]),
        _ => (
            vec![dim, 2 * dim, 6 * dim, 6 * dim, 2 * dim, dim],
            vec![dim, 3 * dim, 8 * dim, 12 * dim, 8 * dim, 3 * dim, dim],
        ),
    }
}

fn symbol_composition(set: &OperatorSet, comp: &Composition, rows: &[CliffordElement]) -> SymbolMatrix {
    match comp.kind {
        CompKind::Chain(list) => {
            let mut acc = symbol_matrix(set.op(list[0]), rows);
            for &i in &list[1..] {
                acc = symbol_matrix(set.op(i), rows).mul(&acc);
            }
            acc
        }
        CompKind::MidSquare => {
            let a = symbol_matrix(set.op(6), rows).mul(&symbol_matrix(set.op(3), rows));
            let b = symbol_matrix(set.op(5), rows).mul(&symbol_matrix(set.op(4), rows));
            a.add(&b)
        }
    }
}

struct SampleOutcome {
    resampled: usize,
    product_failures: Vec<(usize, String, String)>,
    ranks: Vec<usize>,
}

/// Checks, at random covectors, that consecutive symbols compose to zero and
/// that the stacked node maps have the ranks of an exact sequence.
pub fn verify_symbol_exactness(
    k: u16,
    n: u16,
    samples: usize,
    seed: u64,
    edition: Edition,
) -> Result<Report, SequenceError> {
    let set = OperatorSet::new(k, n, edition)?;
    let comps = compositions(k);
    let (want_ranks, node_dims) = expected_ranks(k, n);
    let mut report = Report::new("verify symbol");
    report.param("k", k);
    report.param("n", n);
    report.param("samples", samples);
    report.param("seed", seed);
    report.param("tables", edition);

    let outcomes: Vec<SampleOutcome> = parallel_map(samples, |s| {
        let (rows, resampled) = sample_covector(k, n, derive_seed(seed, s as u64));
        let mut product_failures = Vec::new();
        for (ci, comp) in comps.iter().enumerate() {
            let product = symbol_composition(&set, comp, &rows);
            if !product.is_zero() {
                'outer: for (o, out) in product.outputs.iter().enumerate() {
                    for (i, inp) in product.inputs.iter().enumerate() {
                        if !product.block(o, i).is_zero() {
                            product_failures.push((
                                ci,
                                format!("sample {s}, entry [{out} <- {inp}]"),
                                product.block(o, i).to_string(),
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        let ranks = node_symbols(&set, &rows).iter().map(|m| m.rank()).collect();
        SampleOutcome {
            resampled,
            product_failures,
            ranks,
        }
    });

    let resampled: usize = outcomes.iter().map(|o| o.resampled).sum();
    report.param("resampled-rows", resampled);

    for (ci, comp) in comps.iter().enumerate() {
        let fails: Vec<&(usize, String, String)> = outcomes
            .iter()
            .flat_map(|o| o.product_failures.iter())
            .filter(|(c, _, _)| *c == ci)
            .collect();
        if fails.is_empty() {
            report.push_check(
                comp.id,
                Status::ExactZero,
                format!("symbol product zero at all {samples} covectors"),
            );
        } else {
            let (_, location, term) = fails[0];
            report.push_check(
                comp.id,
                Status::Finding,
                format!("symbol product nonzero at {} of {samples} covectors", fails.len()),
            );
            let suggestions = search_repairs(&set, comp);
            let suggestion_text = if suggestions.is_empty() {
                None
            } else {
                Some(
                    suggestions
                        .iter()
                        .map(|sg| sg.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                )
            };
            report.push_finding(Finding {
                check: comp.id.to_string(),
                location: location.clone(),
                term: term.clone(),
                monomial: None,
                coefficient: None,
                suggestion: suggestion_text,
            });
        }
    }

    let rank_ok = outcomes.iter().all(|o| o.ranks == want_ranks);
    if rank_ok {
        report.push_check(
            "rank-profile",
            Status::RankOk,
            format!("ranks {want_ranks:?} at all {samples} covectors"),
        );
    } else {
        let bad = outcomes.iter().position(|o| o.ranks != want_ranks).unwrap();
        report.push_check(
            "rank-profile",
            Status::Finding,
            format!(
                "expected ranks {want_ranks:?}, sample {bad} gave {:?}",
                outcomes[bad].ranks
            ),
        );
        report.push_finding(Finding {
            check: "rank-profile".to_string(),
            location: format!("sample {bad}"),
            term: format!("{:?}", outcomes[bad].ranks),
            monomial: None,
            coefficient: None,
            suggestion: None,
        });
    }

    let node_ok = outcomes.iter().all(|o| {
        (0..o.ranks.len() - 1).all(|i| o.ranks[i] + o.ranks[i + 1] == node_dims[i + 1])
            && o.ranks[0] == node_dims[0]
            && *o.ranks.last().unwrap() == *node_dims.last().unwrap()
    });
    if node_ok {
        report.push_check(
            "node-exactness",
            Status::RankOk,
            format!("incoming + outgoing rank matches node dimensions {node_dims:?}"),
        );
    } else {
        report.push_check(
            "node-exactness",
            Status::Finding,
            format!("rank sums do not match node dimensions {node_dims:?}"),
        );
        report.push_finding(Finding {
            check: "node-exactness".to_string(),
            location: "rank sums".to_string(),
            term: format!("{node_dims:?}"),
            monomial: None,
            coefficient: None,
            suggestion: None,
        });
    }

    report.finalize();
    Ok(report)
}

/// Runs the Casimir factor-product derivation on random sections and compares
/// the surviving top row against the explicit second operator.
pub fn run_splitting(n: u16, degree: u32, trials: usize, seed: u64) -> Result<Report, CasimirError> {
    let alphas = crate::casimir::splitting_alphas(n)?;
    let mut report = Report::new("splitting");
    report.param("n", n);
    report.param("degree", degree);
    report.param("trials", trials);
    report.param("seed", seed);
    let alpha_list: Vec<String> = alphas.chain_order().iter().map(|v| v.to_string()).collect();
    report.push_check(
        "eigenvalues",
        Status::Match,
        format!("chain order [{}]", alpha_list.join(", ")),
    );

    let outcomes: Vec<SplittingOutcome> = parallel_map(trials, |t| {
        let s = random_section(2, n, degree, 2, derive_seed(seed, t as u64), false);
        splitting_check(&[s[0].clone(), s[1].clone()]).expect("valid rank checked above")
    });

    let stage_bad = outcomes
        .iter()
        .enumerate()
        .find_map(|(t, o)| o.first_mismatch.as_ref().map(|m| (t, m.clone())));
    match stage_bad {
        None => {
            let constants: Vec<String> = outcomes
                .iter()
                .filter_map(|o| o.stage_constant.as_ref().map(|c| c.to_string()))
                .collect();
            let uniform = constants.windows(2).all(|w| w[0] == w[1]);
            let shown = constants.first().cloned().unwrap_or_else(|| "undetermined".to_string());
            if uniform {
                report.push_check(
                    "stage-rows",
                    Status::Match,
                    format!("all stage rows match; uniform stage constant {shown}"),
                );
            } else {
                report.push_check(
                    "stage-rows",
                    Status::Finding,
                    format!("stage constants differ across trials: {constants:?}"),
                );
                report.push_finding(Finding {
                    check: "stage-rows".to_string(),
                    location: "stage constants".to_string(),
                    term: format!("{constants:?}"),
                    monomial: None,
                    coefficient: None,
                    suggestion: None,
                });
            }
        }
        Some((t, label)) => {
            report.push_check(
                "stage-rows",
                Status::Finding,
                format!("first mismatching stage in trial {t}: {label}"),
            );
            report.push_finding(Finding {
                check: "stage-rows".to_string(),
                location: format!("trial {t}"),
                term: label,
                monomial: None,
                coefficient: None,
                suggestion: None,
            });
        }
    }

    let all_zero = outcomes.iter().all(|o| o.derived_is_zero);
    let ratios: Vec<String> = outcomes
        .iter()
        .filter_map(|o| o.derived_ratio.as_ref().map(|r| r.to_string()))
        .collect();
    let consistent = outcomes.iter().all(|o| o.ratio_consistent)
        && ratios.windows(2).all(|w| w[0] == w[1]);
    if all_zero {
        report.push_check(
            "derived-vs-explicit",
            Status::Finding,
            "derived top operator is identically zero while the explicit one is not; no nonzero global scalar exists",
        );
        report.push_finding(Finding {
            check: "derived-vs-explicit".to_string(),
            location: "top row".to_string(),
            term: "derived operator = 0".to_string(),
            monomial: None,
            coefficient: None,
            suggestion: None,
        });
    } else if consistent && !ratios.is_empty() {
        report.push_check(
            "derived-vs-explicit",
            Status::Match,
            format!("derived = ({}) * explicit on all {trials} sections", ratios[0]),
        );
    } else {
        report.push_check(
            "derived-vs-explicit",
            Status::Finding,
            format!("no single global scalar: ratios {ratios:?}"),
        );
        report.push_finding(Finding {
            check: "derived-vs-explicit".to_string(),
            location: "top row".to_string(),
            term: format!("{ratios:?}"),
            monomial: None,
            coefficient: None,
            suggestion: None,
        });
    }

    report.finalize();
    Ok(report)
}

/// Computes the five Casimir eigenvalue offsets for a weight.
pub fn run_casimir(lambda: &Weight, n: u16, k: u16, i: usize, j: usize) -> Result<Report, WeightError> {
    let alphas = casimir_alphas(lambda, n, k as usize, i, j)?;
    let mut report = Report::new("casimir");
    report.param("k", k);
    report.param("n", n);
    report.param("lambda", lambda);
    report.param("i", i);
    report.param("j", j);
    report.push_check("casimir-alphas", Status::Match, alphas.to_string());
    let ij_zero = alphas.alpha_ij == num::BigRational::from_integer(0.into());
    let young = young_symmetry_holds(lambda, n, i, j);
    report.push_check(
        "alpha-ij",
        Status::Match,
        format!(
            "alpha_ij = {} ({}zero); young symmetry condition: {}",
            alphas.alpha_ij,
            if ij_zero { "" } else { "non" },
            if young { "holds" } else { "fails" }
        ),
    );
    report.finalize();
    Ok(report)
}

/// Computes the multiplicity of the raised weight in the tensor decomposition.
pub fn run_klimyk(lambda: &Weight, k: u16, i: usize, j: usize) -> Result<Report, WeightError> {
    let mult = klimyk_multiplicity(lambda, i, j, k as usize)?;
    let mut report = Report::new("klimyk");
    report.param("k", k);
    report.param("lambda", lambda);
    report.param("i", i);
    report.param("j", j);
    let target = crate::weights::raise_weight(lambda, i, j)?;
    report.push_check(
        "klimyk-multiplicity",
        Status::Match,
        format!(
            "multiplicity {mult}; raised weight {target} is {}dominant",
            if target.is_dominant() { "" } else { "not " }
        ),
    );
    report.finalize();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_k2_report_passes() {
        let r = verify_complex(2, 4, 3, 3, 7, Edition::Given).unwrap();
        assert!(r.all_pass(), "{}", r.human_table());
        assert_eq!(r.checks.len(), 3);
        assert!(r.checks.iter().all(|c| c.status == Status::ExactZero));
    }

    #[test]
    fn complex_k3_given_flags_findings_at_degree_three() {
        let r = verify_complex(3, 6, 3, 2, 1, Edition::Given).unwrap();
        assert!(!r.all_pass());
        let failing: Vec<&str> = r
            .checks
            .iter()
            .filter(|c| c.status == Status::Finding)
            .map(|c| c.id.as_str())
            .collect();
        assert!(failing.contains(&"D8D7"), "failing: {failing:?}");
        let d8d7 = r.findings.iter().find(|f| f.check == "D8D7").unwrap();
        let sg = d8d7.suggestion.as_deref().unwrap_or("");
        assert!(sg.contains("word d3 d1 -> d1 d3"), "suggestion: {sg}");
        assert!(sg.contains("word d2 d2 -> d1 d1"), "suggestion: {sg}");
    }

    #[test]
    fn complex_k3_amended_passes_at_degree_three() {
        let r = verify_complex(3, 6, 3, 2, 1, Edition::Amended).unwrap();
        assert!(r.all_pass(), "{}", r.human_table());
    }

    #[test]
    fn complex_k3_given_is_vacuously_zero_at_degree_two() {
        let r = verify_complex(3, 6, 2, 2, 1, Edition::Given).unwrap();
        assert!(r.all_pass(), "{}", r.human_table());
    }

    #[test]
    fn symbol_k2_report_passes() {
        let r = verify_symbol_exactness(2, 4, 3, 3, Edition::Given).unwrap();
        assert!(r.all_pass(), "{}", r.human_table());
        assert!(r
            .checks
            .iter()
            .any(|c| c.id == "rank-profile" && c.status == Status::RankOk));
    }

    #[test]
    fn splitting_report_matches_at_n6() {
        let r = run_splitting(6, 2, 2, 9).unwrap();
        assert!(r.all_pass(), "{}", r.human_table());
        let derived = r.checks.iter().find(|c| c.id == "derived-vs-explicit").unwrap();
        assert!(derived.details.contains("-1/256*sqrt(8)"), "{}", derived.details);
    }

    #[test]
    fn splitting_report_finds_degeneration_at_n4() {
        let r = run_splitting(4, 2, 2, 9).unwrap();
        assert!(!r.all_pass());
        let derived = r.checks.iter().find(|c| c.id == "derived-vs-explicit").unwrap();
        assert_eq!(derived.status, Status::Finding);
        let stages = r.checks.iter().find(|c| c.id == "stage-rows").unwrap();
        assert_eq!(stages.status, Status::Match);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = verify_complex(2, 4, 2, 2, 5, Edition::Given).unwrap().to_json();
        let b = verify_complex(2, 4, 2, 2, 5, Edition::Given).unwrap().to_json();
        assert_eq!(a, b);
        std::env::set_var("KDIRAC_THREADS", "3");
        let c = verify_complex(2, 4, 2, 2, 5, Edition::Given).unwrap().to_json();
        std::env::remove_var("KDIRAC_THREADS");
        assert_eq!(a, c);
    }

    #[test]
    fn klimyk_and_casimir_reports() {
        let lambda = Weight::from_ints(&[3, 1]);
        let r = run_klimyk(&lambda, 2, 1, 2).unwrap();
        assert!(r.checks[0].details.starts_with("multiplicity 1"));
        let spin = Weight::half(&[5, 3]);
        let r = run_casimir(&spin, 4, 2, 1, 2).unwrap();
        let detail = &r.checks.iter().find(|c| c.id == "alpha-ij").unwrap().details;
        assert!(detail.contains("alpha_ij = 0 (zero)"), "{detail}");
        assert!(detail.contains("young symmetry condition: holds"), "{detail}");
    }
}
