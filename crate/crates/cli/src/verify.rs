//! Independent check of `f ∘ φ = f`, either symbolically or by sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratdyn_core::dynsys::DynamicalSystem;
use ratdyn_core::exactalg::{RationalFunction, Scalar};
use serde::Serialize;

use crate::error::{CliError, CliResult, ErrorCode};
use crate::parser::scalar_text;

/// Seed used when neither `--seed` nor `RATDYN_SEED` is given.
pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_TRIALS: usize = 32;
/// Sample coordinates are integers in `[-POOL_RADIUS, POOL_RADIUS]`.
pub const POOL_RADIUS: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    /// Refutation only: never reports `invariant`.
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Invariant,
    NotInvariant,
    /// Randomized mode found no counterexample.
    NotRefuted,
    /// Randomized mode could not evaluate both sides at any sample.
    UndefinedAtSamples,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOutcome {
    pub verdict: Verdict,
    pub mode: Mode,
    /// Samples at which both sides were defined and compared.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// A point where the two sides differ, when one was found by sampling.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
}

pub fn verify_invariant(
    sys: &DynamicalSystem,
    f: &RationalFunction,
    mode: Mode,
    trials: usize,
    seed: u64,
) -> CliResult<VerifyOutcome> {
    if f.vars() != sys.vars() {
        return Err(CliError::new(
            ErrorCode::Structural,
            "function and system use different variables",
        ));
    }
    match mode {
        Mode::Exact => {
            let verdict = if sys.pullback(f)?.sub(f).is_zero() {
                Verdict::Invariant
            } else {
                Verdict::NotInvariant
            };
            Ok(VerifyOutcome {
                verdict,
                mode,
                samples: None,
                counterexample: None,
            })
        }
        Mode::Randomized => {
            if trials == 0 {
                return Err(CliError::new(
                    ErrorCode::Usage,
                    "randomized verification needs at least one trial",
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = sys.dim();
            let mut samples = 0;
            // Points where something is undefined are skipped, up to a fixed allowance.
            for _ in 0..4 * trials {
                if samples == trials {
                    break;
                }
                let pt: Vec<Scalar> = (0..n)
                    .map(|_| Scalar::from_integer(rng.gen_range(-POOL_RADIUS..=POOL_RADIUS).into()))
                    .collect();
                let Some(image) = sys.eval(&pt) else { continue };
                let (Some(a), Some(b)) = (f.eval(&pt), f.eval(&image)) else {
                    continue;
                };
                samples += 1;
                if a != b {
                    return Ok(VerifyOutcome {
                        verdict: Verdict::NotInvariant,
                        mode,
                        samples: Some(samples),
                        counterexample: Some(pt.iter().map(scalar_text).collect()),
                    });
                }
            }
            let verdict = if samples == 0 {
                Verdict::UndefinedAtSamples
            } else {
                Verdict::NotRefuted
            };
            Ok(VerifyOutcome {
                verdict,
                mode,
                samples: Some(samples),
                counterexample: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression;
    use ratdyn_core::exactalg::Vars;

    fn system(vars: &[&str], coords: &[&str]) -> DynamicalSystem {
        let v = Vars::new(vars.iter().copied());
        let cs = coords.iter().map(|c| parse_expression(c, &v).unwrap()).collect();
        DynamicalSystem::new(v, cs).unwrap()
    }

    #[test]
    fn exact_and_sampled_agree_on_examples() {
        let shift = system(&["x", "y"], &["x + 1", "y + 1"]);
        let f = parse_expression("x - y", shift.vars()).unwrap();
        assert_eq!(
            verify_invariant(&shift, &f, Mode::Exact, 1, 0).unwrap().verdict,
            Verdict::Invariant
        );
        let r = verify_invariant(&shift, &f, Mode::Randomized, 32, DEFAULT_SEED).unwrap();
        assert_eq!((r.verdict, r.samples), (Verdict::NotRefuted, Some(32)));

        let dbl = system(&["x"], &["2*x"]);
        let x = parse_expression("x", dbl.vars()).unwrap();
        assert_eq!(
            verify_invariant(&dbl, &x, Mode::Exact, 1, 0).unwrap().verdict,
            Verdict::NotInvariant
        );
        let r = verify_invariant(&dbl, &x, Mode::Randomized, 8, 5).unwrap();
        assert_eq!(r.verdict, Verdict::NotInvariant);
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn sampling_is_seeded() {
        let s = system(&["x", "y"], &["y", "x"]);
        let f = parse_expression("x*y + x", s.vars()).unwrap();
        let a = verify_invariant(&s, &f, Mode::Randomized, 4, 11).unwrap();
        let b = verify_invariant(&s, &f, Mode::Randomized, 4, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.verdict, Verdict::NotInvariant);
        assert!(verify_invariant(&s, &f, Mode::Randomized, 0, 11).is_err());
    }
}
