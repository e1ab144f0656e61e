//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use clique_spectra::enumeration::{argmax_energy, evaluate, EnumSpec};
use clique_spectra::graph::{build_clique_tree, BlockSpec};
use clique_spectra::lemmas::{
    abg, path_radius, DIFFERENCE_MATCHES_DIRECT, DIFFERENCE_POSITIVE, RADIUS_ORDER,
};
use clique_spectra::report::{Check, VerificationReport};
use clique_spectra::sweep;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from_checks<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Self {
        let mut total = 0usize;
        let mut failed = Vec::new();
        let mut worst = f64::INFINITY;
        for c in checks {
            total += 1;
            worst = worst.min(c.margin);
            if !c.pass {
                failed.push(c.name.clone());
            }
        }
        let detail = if failed.is_empty() {
            format!("{total} checks, min margin {worst:.3e}")
        } else {
            failed.dedup();
            let shown: Vec<_> = failed.iter().take(3).cloned().collect();
            format!("{} of {total} checks failed, e.g. {}", failed.len(), shown.join(" | "))
        };
        Outcome {
            pass: total > 0 && failed.is_empty(),
            detail,
        }
    }

    fn from_reports(reports: &[VerificationReport]) -> Self {
        Self::from_checks(reports.iter().flat_map(|r| &r.checks))
    }

    fn and(self, other: Outcome) -> Outcome {
        Outcome {
            pass: self.pass && other.pass,
            detail: format!("{}; {}", self.detail, other.detail),
        }
    }
}

fn spot(name: &str, got: f64, want: f64, tol: f64) -> Outcome {
    let err = (got - want).abs();
    Outcome {
        pass: err <= tol,
        detail: format!("{name} = {got:.12} (want {want:.12}, |err| {err:.1e} <= {tol:.0e})"),
    }
}

fn fail(e: impl std::fmt::Display) -> Outcome {
    Outcome {
        pass: false,
        detail: format!("error: {e}"),
    }
}

fn criterion(id: &str, title: &str, run: impl FnOnce() -> Outcome, results: &mut Vec<bool>) {
    let start = Instant::now();
    let out = run();
    println!(
        "criterion {id:<3} {} {title} [{:.1}s] {}",
        if out.pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        out.detail
    );
    results.push(out.pass);
}

fn main() -> ExitCode {
    let mut results = Vec::new();

    criterion(
        "1",
        "tree distance determinants, n <= 9",
        || match sweep::graham_pollak_sweep(9) {
            Ok(r) => Outcome::from_reports(&r),
            Err(e) => fail(e),
        },
        &mut results,
    );

    let built = Instant::now();
    let population = sweep::clique_tree_population(2, 10);
    let build_secs = built.elapsed().as_secs_f64();
    criterion(
        "2",
        "inertia (1, 0, n-1), n <= 10",
        || match &population {
            Ok(p) => Outcome::from_reports(&sweep::inertia_reports(p)).and(Outcome {
                pass: true,
                detail: format!(
                    "{} classes generated in {build_secs:.1}s",
                    p.iter().map(|(_, _, c)| c.len()).sum::<usize>()
                ),
            }),
            Err(e) => fail(e),
        },
        &mut results,
    );
    criterion(
        "3",
        "energy = 2 lambda_1 within 1e-8, n <= 10",
        || match &population {
            Ok(p) => Outcome::from_reports(&sweep::energy_reports(p)),
            Err(e) => fail(e),
        },
        &mut results,
    );

    criterion(
        "4",
        "quotient matrix, n1,n2 in 1..5, k in 2..8",
        || match sweep::quotient_sweep(5, 8) {
            Ok(r) => Outcome::from_reports(&r),
            Err(e) => fail(e),
        },
        &mut results,
    );

    criterion(
        "5",
        "resolvent identities, exact norm k in 3..50, x samples k in 3..12",
        || {
            let norm = Outcome::from_reports(&sweep::norm_identity_sweep(3, 50));
            match sweep::resolvent_identity_sweep(3, 12) {
                Ok(r) => norm.and(Outcome::from_reports(&r)),
                Err(e) => fail(e),
            }
        },
        &mut results,
    );

    criterion(
        "6",
        "determinant factorization within 1e-8",
        || match sweep::factorization_sweep(5, 8) {
            Ok(r) => {
                let hand = r
                    .iter()
                    .filter(|rep| {
                        let p = |key: &str| rep.params.get(key).and_then(|v| v.as_f64());
                        (p("n1"), p("n2"), p("k"), p("x")) == (Some(2.0), Some(1.0), Some(2.0), Some(6.0))
                    })
                    .count();
                Outcome::from_reports(&r).and(Outcome {
                    pass: hand > 0,
                    detail: format!("hand point (2,1,2,6) evaluated: {}", hand > 0),
                })
            }
            Err(e) => fail(e),
        },
        &mut results,
    );

    criterion(
        "7",
        "lambda(P_k) > (k-1)(k+1)/3, k in 3..100",
        || match (sweep::path_radius_bound_sweep(3, 100), path_radius(3)) {
            (Ok(r), Ok(l3)) => {
                Outcome::from_reports(&r).and(spot("lambda(P_3)", l3, 1.0 + 3f64.sqrt(), 1e-9))
            }
            (Err(e), _) | (_, Err(e)) => fail(e),
        },
        &mut results,
    );

    criterion(
        "8",
        "gamma chain at x = lambda(P_k), k in 3..30",
        || {
            let chain = match sweep::gamma_chain_sweep(3, 30) {
                Ok(r) => Outcome::from_reports(&r),
                Err(e) => return fail(e),
            };
            let x = 1.0 + 3f64.sqrt();
            match abg(3, x) {
                Ok(v) => chain.and(spot("gamma_2(1+sqrt3)", v.gamma, 1.0 / (x + 1.0), 1e-10)),
                Err(e) => fail(e),
            }
        },
        &mut results,
    );

    criterion(
        "9",
        "energy maximiser is the balanced clique path, 4 <= n <= 11",
        || {
            let grid = match sweep::conjecture_sweep(4, 11) {
                Ok(r) => Outcome::from_reports(&r),
                Err(e) => return fail(e),
            };
            let winner = match argmax_energy(&EnumSpec::by_nk(4, 3)) {
                Ok(res) => res,
                Err(e) => return fail(e),
            };
            let star = build_clique_tree(&[
                BlockSpec::root(2),
                BlockSpec::attached(2, 0, 0),
                BlockSpec::attached(2, 0, 0),
            ])
            .and_then(|g| evaluate(&g));
            let star = match star {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let is_path = Outcome {
                pass: winner.winner_path_sizes.as_deref() == Some(&[2, 2, 2][..]),
                detail: format!("(4,3) winner path sizes {:?}", winner.winner_path_sizes),
            };
            grid.and(is_path)
                .and(spot("E(P_4)", winner.winner_energy, 4.0 + 2.0 * 10f64.sqrt(), 1e-6))
                .and(spot("E(K_1,3)", star.energy, 2.0 * (2.0 + 7f64.sqrt()), 1e-6))
        },
        &mut results,
    );

    let mono = sweep::monotonicity_sweep(2, 6, 2, 10);
    let named = |prefix: &'static str| {
        move |r: &Vec<VerificationReport>| {
            Outcome::from_checks(
                r.iter()
                    .flat_map(|rep| &rep.checks)
                    .filter(|c| c.name.starts_with(prefix))
                    .collect::<Vec<_>>(),
            )
        }
    };
    criterion(
        "10a",
        "spectral radius increases as the split balances, k in 2..6, s in 2..10",
        || match &mono {
            Ok(r) => named(RADIUS_ORDER)(r).and(named(DIFFERENCE_MATCHES_DIRECT)(r)),
            Err(e) => fail(e),
        },
        &mut results,
    );
    criterion(
        "10b",
        "factored characteristic polynomial difference is positive at x >= lambda(P_k)",
        || match &mono {
            Ok(r) => named(DIFFERENCE_POSITIVE)(r),
            Err(e) => fail(e),
        },
        &mut results,
    );

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
