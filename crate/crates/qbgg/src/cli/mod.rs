//! The suite runner behind the `qbgg` binary.
//!
//! ```text
//! qbgg check <suite> [parameters]   run one check, or the whole grid when no family is selected
//! qbgg char  --alg D --case spinor --r 3 --t 1/2 --tau 4,9,25
//! qbgg trace --alg A --n 2 --family verma --lambda 1,0 --N 1 --tau 2,7
//! qbgg list
//! ```
//!
//! Reports are JSON lines on stdout or in `--out FILE`. Parameters may also
//! come from a TOML file (`--config`) whose keys mirror the flags; flags win.
//! `QBGG_SEED` overrides the sampling seed. The exit status is 1 when any
//! acceptance-grade check fails and 2 for invalid input.

pub mod suites;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::coeff::{format_rational, parse_rational, seed_from_env, Sampler};
use crate::error::{QbggError, Result};
use crate::lax::checks::{
    lax_factorisation_check, lie_algebra_check, renormalized_limit_check, rtt_check, FactorisationCase, LimitCase,
};
use crate::lax::{families, LaxMatrix};
use crate::report::{CheckReport, Status};
use crate::transfer::cases::module_lax;
use crate::transfer::checks::{
    bgg_identity_check, character_suite_check, character_t_property_check, commutativity_check,
    degenerate_twist_checks, determinant_identity_check, expected_vanishing_probe, factorisation_identity_check,
    qq_relation_check, t_reflection, t_symmetry_check, weyl_generated_q_check, CommutingPair, DeterminantKind,
    Factorisation, WeylQIndex,
};
use crate::transfer::finite::{build_finite_module, transfer_finite};
use crate::transfer::trace::{q_operator, transfer_plus};
use crate::transfer::twist::TwistSpec;
use crate::weyl::{check_dominant, truncated_bgg_character, weyl_character, AlgebraType, ModuleCase};
use suites::Runner;

type Q = BigRational;

/// Default sampling seed when neither `--seed`, the config file nor `QBGG_SEED` sets one.
pub const DEFAULT_SEED: u64 = 42;

/// Command line of the `qbgg` binary.
#[derive(Debug, Parser)]
#[command(name = "qbgg", version, about = "Exact checks of BGG-type identities for transfer matrices and Q-operators")]
pub struct Cli {
    /// What to run.
    #[command(subcommand)]
    pub command: Command,
    /// Sampling seed (overridden by QBGG_SEED).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write JSON lines to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with default parameters; flags win on conflict.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record wall times in the reports (makes the stream non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Allow the floating-point oracle suite.
    #[arg(long, global = true)]
    pub oracle: bool,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a check suite.
    Check {
        /// Suite name; may come from the config file instead.
        suite: Option<Suite>,
        /// Parameters of a single check.
        #[command(flatten)]
        params: Params,
    },
    /// Print the character of a finite-dimensional module as an exact rational.
    Char {
        /// Module parameters.
        #[command(flatten)]
        params: Params,
    },
    /// Print a transfer matrix or Q-operator as JSON.
    Trace {
        /// Lax family parameters.
        #[command(flatten)]
        params: Params,
    },
    /// Print the index of formulas and the suites checking them.
    List,
}

/// Check suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// RTT relation of a Lax matrix.
    Rtt,
    /// Lie-algebra relations of the generators.
    Lie,
    /// Lax-level factorisation.
    Laxfac,
    /// Renormalised limit.
    Limit,
    /// Finite transfer matrix as alternating coset sum.
    Bgg,
    /// Transfer matrix as product of Q-operators.
    Tviaqq,
    /// QQ-relation.
    Qq,
    /// Determinant formulas.
    Det,
    /// Commutativity.
    Comm,
    /// Symmetry in the module parameter.
    Tsym,
    /// Vanishing probe (informational).
    Vanish,
    /// Character identities.
    Chars,
    /// Weyl-generated Q-operators.
    Qweyl,
    /// Twist conjugation condition of degenerate families.
    Twistconj,
    /// Property oracles (requires --oracle).
    Oracle,
    /// Every acceptance criterion.
    All,
}

impl std::str::FromStr for Suite {
    type Err = QbggError;

    fn from_str(s: &str) -> Result<Self> {
        <Suite as ValueEnum>::from_str(s, true).map_err(|_| QbggError::InvalidParameter(format!("unknown suite {s}")))
    }
}

/// Parameters shared by all subcommands; every field is optional so that a
/// config file can supply it.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Algebra type: A, B, C, D or BD (orthogonal, sized by --K).
    #[arg(long)]
    pub alg: Option<String>,
    /// Rank parameter of gl_n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Rank of types B, C, D.
    #[arg(long)]
    pub r: Option<usize>,
    /// Defining dimension K of so_K (selects the orthogonal vector families).
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub kk: Option<usize>,
    /// Size a of the first block (type A rectangular modules).
    #[arg(long)]
    pub a: Option<usize>,
    /// Module parameter(s) t, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Chain length N.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub sites: Option<usize>,
    /// Explicit twist τ, comma separated.
    #[arg(long)]
    pub tau: Option<String>,
    /// Number of random twists when --tau is absent.
    #[arg(long)]
    pub tau_count: Option<usize>,
    /// Lax family: verma, rect, degenerate, partonic, nondeg, mu, quadratic, vector-k.
    #[arg(long)]
    pub family: Option<String>,
    /// Module case: rect, symplectic, spinor, spinor-odd, vector.
    #[arg(long)]
    pub case: Option<String>,
    /// Determinant formula: tdet or qi.
    #[arg(long)]
    pub kind: Option<String>,
    /// Highest weight λ, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Sign vector μ, e.g. "+-" or "1,-1".
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Subset I of {1..n}, comma separated (empty string for ∅).
    #[arg(long)]
    pub subset: Option<String>,
    /// Index i.
    #[arg(long)]
    pub i: Option<usize>,
    /// Index j.
    #[arg(long)]
    pub j: Option<usize>,
    /// Orthogonal index k ∈ {1..r} ∪ {r'..1'} (primed values are K+1−k).
    #[arg(long)]
    pub index: Option<usize>,
    /// Commuting pair: verma, qt or sign-vector.
    #[arg(long)]
    pub pair: Option<String>,
    /// Select the second degenerate family (L_−, L_K, or the second block).
    #[arg(long)]
    pub minus: bool,
    /// Select the quadratic orthogonal families for types B/D.
    #[arg(long)]
    pub quadratic: bool,
    /// For `trace`: the normalized trace of a degenerate family (Q-operator).
    #[arg(long)]
    pub normalized: bool,
}

/// The config file: the parameters plus run-level settings.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Suite to run for `check`.
    pub suite: Option<Suite>,
    /// Sampling seed.
    pub seed: Option<u64>,
    /// Output path.
    pub out: Option<PathBuf>,
    /// Record wall times.
    pub timings: bool,
    /// `exact` (default) or `float-oracle`.
    pub backend: Option<String>,
    /// Check parameters.
    #[serde(flatten)]
    pub params: Params,
}

impl SuiteConfig {
    /// Parses a TOML config file.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| QbggError::Parse(format!("config: {e}")))
    }
}

impl Params {
    /// Fills every unset field from `other`.
    pub fn or(self, other: Params) -> Params {
        Params {
            alg: self.alg.or(other.alg),
            n: self.n.or(other.n),
            r: self.r.or(other.r),
            kk: self.kk.or(other.kk),
            a: self.a.or(other.a),
            t: self.t.or(other.t),
            sites: self.sites.or(other.sites),
            tau: self.tau.or(other.tau),
            tau_count: self.tau_count.or(other.tau_count),
            family: self.family.or(other.family),
            case: self.case.or(other.case),
            kind: self.kind.or(other.kind),
            lambda: self.lambda.or(other.lambda),
            mu: self.mu.or(other.mu),
            subset: self.subset.or(other.subset),
            i: self.i.or(other.i),
            j: self.j.or(other.j),
            index: self.index.or(other.index),
            pair: self.pair.or(other.pair),
            minus: self.minus || other.minus,
            quadratic: self.quadratic || other.quadratic,
            normalized: self.normalized || other.normalized,
        }
    }

    /// True when no parameter selects a particular check, so that the whole
    /// grid of the suite runs.
    pub fn selects_nothing(&self) -> bool {
        self.alg.is_none() && self.n.is_none() && self.r.is_none() && self.kk.is_none() && self.kind.is_none()
            && self.pair.is_none()
    }

    fn require<T: Clone>(value: &Option<T>, name: &str) -> Result<T> {
        value.clone().ok_or_else(|| QbggError::InvalidParameter(format!("missing --{name}")))
    }

    /// The algebra selected by `--alg` with `--n`, `--r` or `--K`.
    pub fn algebra(&self) -> Result<AlgebraType> {
        let letter = Self::require(&self.alg, "alg")?;
        let upper = letter.to_ascii_uppercase();
        match (upper.as_str(), self.n, self.r, self.kk) {
            ("A", Some(n), _, _) | ("A", None, Some(n), _) => AlgebraType::from_letter("A", n, false),
            ("A", None, None, _) => Err(QbggError::InvalidParameter("type A needs --n".into())),
            (_, _, _, Some(k)) => AlgebraType::from_letter(&upper, k, true),
            ("BD", _, _, None) => Err(QbggError::InvalidParameter("type BD needs --K".into())),
            (_, _, Some(r), None) => AlgebraType::from_letter(&upper, r, false),
            _ => Err(QbggError::InvalidParameter(format!("type {letter} needs --r or --K"))),
        }
    }

    /// True when the orthogonal vector families are meant (types B, BD, or D with `--K`/`--quadratic`).
    pub fn orthogonal(&self, alg: &AlgebraType) -> bool {
        match alg {
            AlgebraType::B(_) => true,
            AlgebraType::D(_) => {
                self.kk.is_some()
                    || self.quadratic
                    || matches!(self.case.as_deref(), Some("vector"))
                    || matches!(self.family.as_deref(), Some("quadratic" | "vector-k"))
                    || self.alg.as_deref().is_some_and(|a| a.eq_ignore_ascii_case("BD"))
            }
            _ => false,
        }
    }

    /// Module parameters `t` (at least one required).
    pub fn t_values(&self) -> Result<Vec<Q>> {
        parse_list(&Self::require(&self.t, "t")?)
    }

    /// Module parameters `t`, or `count` random ones.
    pub fn t_values_or_random(&self, s: &mut Sampler, count: usize) -> Result<Vec<Q>> {
        match &self.t {
            Some(_) => self.t_values(),
            None => Ok((0..count).map(|_| suites::random_t(s)).collect()),
        }
    }

    /// Chain length (default 1).
    pub fn sites(&self) -> usize {
        self.sites.unwrap_or(1)
    }

    /// The module case, defaulting per type.
    pub fn module_case(&self, alg: &AlgebraType) -> Result<ModuleCase> {
        let case = match self.case.as_deref() {
            Some("rect") | None if matches!(alg, AlgebraType::A(_)) => ModuleCase::Rect { a: self.a.unwrap_or(1) },
            Some("symplectic") | None if matches!(alg, AlgebraType::C(_)) => ModuleCase::Symplectic,
            None if self.orthogonal(alg) => ModuleCase::Vector,
            Some("spinor") | None => ModuleCase::Spinor { odd: false },
            Some("spinor-odd") => ModuleCase::Spinor { odd: true },
            Some("vector") => ModuleCase::Vector,
            Some(other) => return Err(QbggError::InvalidParameter(format!("unknown case {other}"))),
        };
        case.validate(alg)?;
        Ok(case)
    }

    /// The twists: `--tau`, or `--tau-count` random ones (perfect squares when `squares`).
    pub fn twists(&self, alg: &AlgebraType, s: &mut Sampler, squares: bool, default_count: usize) -> Result<Vec<TwistSpec>> {
        match &self.tau {
            Some(text) => Ok(vec![TwistSpec::new(*alg, parse_list(text)?)?]),
            None => Ok((0..self.tau_count.unwrap_or(default_count))
                .map(|_| if squares { TwistSpec::random_squares(*alg, s) } else { TwistSpec::random(*alg, s) })
                .collect()),
        }
    }

    /// Highest weight `λ`.
    pub fn lambda(&self) -> Result<Vec<Q>> {
        parse_list(&Self::require(&self.lambda, "lambda")?)
    }

    /// Subset `I` (empty when absent).
    pub fn subset(&self) -> Result<Vec<usize>> {
        match self.subset.as_deref() {
            None | Some("") => Ok(Vec::new()),
            Some(text) => text
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| QbggError::Parse(format!("bad subset entry {x}"))))
                .collect(),
        }
    }

    /// Sign vector `μ`.
    pub fn mu(&self) -> Result<Vec<i8>> {
        let text = Self::require(&self.mu, "mu")?;
        if text.chars().all(|c| c == '+' || c == '-') {
            return Ok(text.chars().map(|c| if c == '+' { 1 } else { -1 }).collect());
        }
        text.split(',')
            .map(|x| match x.trim() {
                "1" | "+1" | "+" => Ok(1),
                "-1" | "-" => Ok(-1),
                other => Err(QbggError::Parse(format!("bad sign {other}"))),
            })
            .collect()
    }

    /// The Lax matrix selected by `--family` at module parameter `t`.
    pub fn lax(&self, alg: &AlgebraType, t: Option<&Q>) -> Result<LaxMatrix<Q>> {
        let need_t = || t.cloned().ok_or_else(|| QbggError::InvalidParameter("missing --t".into()));
        let orthogonal = self.orthogonal(alg);
        let family = self.family.clone().unwrap_or_else(|| {
            match (alg, orthogonal) {
                (AlgebraType::A(_), _) => "rect",
                (_, true) => "quadratic",
                _ => "nondeg",
            }
            .to_string()
        });
        match (alg, family.as_str(), orthogonal) {
            (AlgebraType::A(n), "verma", _) => families::a_verma(*n, &self.lambda()?),
            (AlgebraType::A(n), "rect", _) => families::a_rect(*n, self.a.unwrap_or(1), &need_t()?),
            (AlgebraType::A(n), "degenerate", _) => families::a_degenerate(*n, &self.subset()?),
            (AlgebraType::A(n), "partonic", _) => families::a_partonic(*n, Self::require(&self.i, "i")?),
            (_, "quadratic", true) => families::bd_nondegenerate(alg.dim_k(), &need_t()?),
            (_, "degenerate", true) => families::bd_degenerate(alg.dim_k(), !self.minus),
            (_, "vector-k", true) => families::bd_k(alg.dim_k(), &need_t()?, Self::require(&self.index, "index")?),
            (AlgebraType::C(_) | AlgebraType::D(_), "nondeg", false) => families::cd_nondegenerate(alg, &need_t()?),
            (AlgebraType::C(_) | AlgebraType::D(_), "degenerate", false) => families::cd_degenerate(alg, !self.minus),
            (AlgebraType::C(_) | AlgebraType::D(_), "mu", false) => families::cd_mu(alg, &need_t()?, &self.mu()?),
            _ => Err(QbggError::InvalidParameter(format!("family {family} is not available for {alg}"))),
        }
    }
}

/// Comma-separated rationals.
pub fn parse_list(text: &str) -> Result<Vec<Q>> {
    text.split(',').map(parse_rational).collect()
}

/// Formula index shown by `qbgg list`: formula name and the command checking it.
pub const FORMULA_INDEX: &[(&str, &str)] = &[
    ("RTT relation of every Lax family", "check rtt --alg A|B|C|D --family ..."),
    ("Lie-algebra relations of the Lax generators", "check lie --alg A|B|C|D --family ..."),
    ("orthogonal free term G through M", "check lie --alg B|D --K 5|6 --family quadratic"),
    ("Lax factorisation, type A", "check laxfac --alg A --n N --a A"),
    ("Lax factorisation, types C and D", "check laxfac --alg C|D --r R"),
    ("Lax factorisation, orthogonal quadratic", "check laxfac --alg B|D --quadratic"),
    ("degenerate Lax matrices as renormalised limits", "check limit --alg A|C|D|BD"),
    ("type A transfer matrix as alternating coset sum", "check bgg --alg A"),
    ("type C transfer matrix as alternating coset sum", "check bgg --alg C"),
    ("type D spinor transfer matrix as alternating coset sum", "check bgg --alg D --case spinor|spinor-odd"),
    ("orthogonal vector transfer matrix as alternating coset sum", "check bgg --alg B|D --case vector"),
    ("full-flag transfer matrix as product of single-index Q", "check tviaqq --alg A --lambda ..."),
    ("type A transfer matrix as Q_I Q_Ī", "check tviaqq --alg A --subset ..."),
    ("types C/D transfer matrix as Q_μ Q_μ̄", "check tviaqq --alg C|D --mu ..."),
    ("orthogonal transfer matrix as Q_k Q_k'", "check tviaqq --alg B|D --K K --index k"),
    ("QQ-relation", "check qq --n N --subset I --i i --j j"),
    ("finite transfer matrix as determinant of Q", "check det --kind tdet"),
    ("Q_I as determinant of single-index Q", "check det --kind qi"),
    ("commutativity of transfer matrices and Q-operators", "check comm --pair verma|qt|sign-vector"),
    ("symmetry in the module parameter t", "check tsym --alg C|D|B --case ..."),
    ("expected vanishing at special t (informational)", "check vanish --alg C|D|B --case ..."),
    ("characters and their t-properties", "check chars --alg ... --t ..."),
    ("Weyl-generated Q-operators", "check qweyl --alg C|D --mu ... | --alg B|D --K K --index k"),
    ("twist conjugation condition of degenerate families", "check twistconj --alg ..."),
    ("oracles: normal ordering, Fock traces, R-matrix", "check oracle --oracle"),
];

fn single_report(check: &str, result: Result<CheckReport>) -> CheckReport {
    result.unwrap_or_else(|e| {
        let mut r = CheckReport::new(check, "invalid");
        r.fail_with(&e);
        r
    })
}

/// Runs one suite: the full grid, or the single check selected by `params`.
pub fn run_suite(suite: Suite, params: &Params, seed: u64, timings: bool, oracle: bool) -> Result<Vec<CheckReport>> {
    if suite == Suite::Oracle && !oracle {
        return Err(QbggError::InvalidParameter("the oracle suite uses floating point; pass --oracle".into()));
    }
    let mut run = Runner::new(seed, timings);
    if suite == Suite::All {
        let mut out = Vec::new();
        for k in 1..=9 {
            if k == 9 && !oracle {
                continue;
            }
            out.extend(suites::criterion(k, seed, timings));
        }
        return Ok(out);
    }
    if params.selects_nothing() {
        match suite {
            Suite::Rtt => suites::rtt_suite(&mut run),
            Suite::Lie => suites::lie_suite(&mut run),
            Suite::Laxfac => suites::laxfac_suite(&mut run),
            Suite::Limit => suites::limit_suite(&mut run),
            Suite::Bgg => suites::bgg_suite(&mut run),
            Suite::Tviaqq => suites::tviaqq_suite(&mut run),
            Suite::Qq => suites::qq_suite(&mut run),
            Suite::Det => suites::det_suite(&mut run),
            Suite::Comm => suites::comm_suite(&mut run),
            Suite::Tsym => suites::tsym_suite(&mut run),
            Suite::Vanish => suites::vanish_suite(&mut run),
            Suite::Chars => suites::character_suite(&mut run, params.tau_count.unwrap_or(10)),
            Suite::Qweyl => suites::qweyl_suite(&mut run),
            Suite::Twistconj => suites::twistconj_suite(&mut run),
            Suite::Oracle => suites::oracle_suite(&mut run),
            Suite::All => unreachable!("handled above"),
        }
        return Ok(run.into_reports());
    }
    single_check(suite, params, &mut run)?;
    Ok(run.into_reports())
}

fn single_check(suite: Suite, p: &Params, run: &mut Runner) -> Result<()> {
    let alg = || p.algebra();
    let sites = p.sites();
    match suite {
        Suite::Rtt | Suite::Lie => {
            let alg = alg()?;
            let ts = match &p.t {
                Some(_) => p.t_values()?.into_iter().map(Some).collect(),
                None => vec![None],
            };
            for t in ts {
                let lax = p.lax(&alg, t.as_ref())?;
                if suite == Suite::Rtt {
                    run.run(|_| single_report("rtt", rtt_check(&lax, &lax)));
                } else {
                    run.run(|_| single_report("lie", lie_algebra_check(&lax)));
                }
            }
        }
        Suite::Laxfac => {
            let alg = alg()?;
            let case = match alg {
                AlgebraType::A(n) => FactorisationCase::A { n, a: p.a.unwrap_or(1) },
                _ if p.orthogonal(&alg) => FactorisationCase::BD { k: alg.dim_k() },
                AlgebraType::C(r) => FactorisationCase::C { r },
                AlgebraType::D(r) => FactorisationCase::D { r },
                AlgebraType::B(_) => unreachable!("type B is orthogonal"),
            };
            for t in p.t_values_or_random(run.sampler(), 1)? {
                run.run(|_| single_report("laxfac", lax_factorisation_check(case, &t)));
            }
        }
        Suite::Limit => {
            let alg = alg()?;
            let case = match alg {
                AlgebraType::A(n) => LimitCase::A { n, a: p.a.unwrap_or(1), first: !p.minus },
                _ if p.orthogonal(&alg) => LimitCase::BD { k: alg.dim_k(), first: !p.minus },
                AlgebraType::C(r) => LimitCase::C { r, plus: !p.minus },
                AlgebraType::D(r) => LimitCase::D { r, plus: !p.minus },
                AlgebraType::B(_) => unreachable!("type B is orthogonal"),
            };
            run.run(|_| single_report("limit", renormalized_limit_check(case)));
        }
        Suite::Bgg | Suite::Tsym | Suite::Vanish => {
            let alg = alg()?;
            let case = p.module_case(&alg)?;
            let twists = p.twists(&alg, run.sampler(), false, 1)?;
            let ts = match suite {
                Suite::Bgg => dominant_t_values(p, &alg, &case)?,
                Suite::Tsym => p.t_values_or_random(run.sampler(), 3)?,
                _ => vec![BigRational::from_integer(0.into())],
            };
            for tw in &twists {
                for t in &ts {
                    match suite {
                        Suite::Bgg => run.run(|_| bgg_identity_check(&alg, &case, t, sites, tw)),
                        Suite::Tsym => run.run(|_| t_symmetry_check(&alg, &case, t, sites, tw)),
                        _ => run.run(|_| expected_vanishing_probe(&alg, &case, sites, tw)),
                    }
                }
            }
        }
        Suite::Tviaqq => {
            let alg = alg()?;
            let kind = match alg {
                AlgebraType::A(n) if p.lambda.is_some() => Factorisation::Verma { n, lambda: p.lambda()? },
                AlgebraType::A(n) => Factorisation::Rect { n, subset: p.subset()? },
                _ if p.orthogonal(&alg) => Factorisation::Orthogonal {
                    kk: alg.dim_k(),
                    k: Params::require(&p.index, "index")?,
                },
                _ => Factorisation::SignVector { alg, mu: p.mu()? },
            };
            let twists = p.twists(&alg, run.sampler(), false, 1)?;
            let ts = p.t_values_or_random(run.sampler(), 2)?;
            for tw in &twists {
                for t in &ts {
                    run.run(|_| factorisation_identity_check(&kind, t, sites, tw));
                }
            }
        }
        Suite::Qq => {
            let n = Params::require(&p.n, "n")?;
            let alg = AlgebraType::from_letter("A", n, false)?;
            let (i, j) = (Params::require(&p.i, "i")?, Params::require(&p.j, "j")?);
            let subset = p.subset()?;
            for tw in p.twists(&alg, run.sampler(), false, 1)? {
                run.run(|_| qq_relation_check(n, &subset, i, j, sites, &tw));
            }
        }
        Suite::Det => {
            let n = Params::require(&p.n, "n")?;
            let alg = AlgebraType::from_letter("A", n, false)?;
            let kind = match p.kind.as_deref() {
                Some("tdet") => DeterminantKind::Transfer {
                    n,
                    lambda: p
                        .lambda()?
                        .iter()
                        .map(|l| {
                            if l.is_integer() {
                                Ok(l.to_integer().try_into().unwrap_or(i64::MAX))
                            } else {
                                Err(QbggError::NotDominant(format!("λ entry {} is not integral", format_rational(l))))
                            }
                        })
                        .collect::<Result<_>>()?,
                },
                Some("qi") => DeterminantKind::Subset { n, subset: p.subset()? },
                other => return Err(QbggError::InvalidParameter(format!("--kind must be tdet or qi, not {other:?}"))),
            };
            for tw in p.twists(&alg, run.sampler(), false, 1)? {
                run.run(|_| determinant_identity_check(&kind, sites, &tw));
            }
        }
        Suite::Comm => {
            let pair = match p.pair.as_deref() {
                Some("verma") => {
                    let lambda = p.lambda()?;
                    let n = lambda.len();
                    let mu = suites::random_weight(run.sampler(), n);
                    CommutingPair::Verma { n, lambda, mu }
                }
                Some("qt") => CommutingPair::QWithFundamental {
                    n: Params::require(&p.n, "n")?,
                    i: Params::require(&p.i, "i")?,
                },
                Some("sign-vector") => CommutingPair::SignVector { alg: alg()?, mu: p.mu()? },
                other => {
                    return Err(QbggError::InvalidParameter(format!(
                        "--pair must be verma, qt or sign-vector, not {other:?}"
                    )))
                }
            };
            let alg = match &pair {
                CommutingPair::Verma { n, .. } | CommutingPair::QWithFundamental { n, .. } => AlgebraType::A(*n),
                CommutingPair::SignVector { alg, .. } => *alg,
            };
            for tw in p.twists(&alg, run.sampler(), false, 1)? {
                run.run(|_| commutativity_check(&pair, sites, &tw));
            }
        }
        Suite::Chars => {
            let alg = alg()?;
            let case = p.module_case(&alg)?;
            let ts = dominant_t_values(p, &alg, &case)?;
            let twists = p.twists(&alg, run.sampler(), true, 10)?;
            for t in ts {
                run.run(|_| character_suite_check(&alg, &case, &t, &twists));
            }
            if t_reflection(&alg, &case, &BigRational::from_integer(0.into())).is_ok() {
                let t = suites::random_t(run.sampler());
                run.run(|_| character_t_property_check(&alg, &case, &t, &twists[0]));
            }
        }
        Suite::Qweyl => {
            let alg = alg()?;
            let index = if p.orthogonal(&alg) {
                WeylQIndex::Orthogonal(Params::require(&p.index, "index")?)
            } else {
                WeylQIndex::SignVector(p.mu()?)
            };
            for tw in p.twists(&alg, run.sampler(), false, 1)? {
                run.run(|_| weyl_generated_q_check(&alg, &index, sites, &tw));
            }
        }
        Suite::Twistconj => {
            let alg = alg()?;
            run.extend("twistconj", &alg.to_string(), |_| degenerate_twist_checks(&alg));
        }
        Suite::Oracle => suites::oracle_suite(run),
        Suite::All => unreachable!("handled by run_suite"),
    }
    Ok(())
}

/// The `t` values of a finite-dimensional module, rejected before dispatch
/// unless the highest weight is dominant integral.
fn dominant_t_values(p: &Params, alg: &AlgebraType, case: &ModuleCase) -> Result<Vec<Q>> {
    let ts = p.t_values()?;
    for t in &ts {
        check_dominant(alg, &case.highest_weight(alg, t))?;
    }
    Ok(ts)
}

/// `char`: the Weyl character of the finite-dimensional module, cross-checked
/// against the truncated alternating sum and the finite-module trace.
pub fn character_value(p: &Params) -> Result<Value> {
    let alg = p.algebra()?;
    let case = p.module_case(&alg)?;
    let t = dominant_t_values(p, &alg, &case)?.remove(0);
    let tau = parse_list(&Params::require(&p.tau, "tau")?)?;
    let twist = TwistSpec::new(alg, tau)?;
    let hw = case.highest_weight(&alg, &t);
    let value = weyl_character(&alg, &hw, twist.tau())?;
    let truncated = truncated_bgg_character(&alg, &case, &t, twist.tau())?;
    let finite = build_finite_module(&module_lax(&alg, &case, &t)?)?.character(&twist)?.evaluate()?;
    if truncated != value || finite != value {
        return Err(QbggError::InvalidParameter(format!(
            "character mismatch: weyl {} truncated {} finite {}",
            format_rational(&value),
            format_rational(&truncated),
            format_rational(&finite)
        )));
    }
    Ok(json!({
        "command": "char",
        "alg": alg.to_string(),
        "case": format!("{case:?}"),
        "t": format_rational(&t),
        "tau": twist.tau().iter().map(format_rational).collect::<Vec<_>>(),
        "value": format_rational(&value),
    }))
}

/// `trace`: `T⁺` of a nondegenerate family, the finite transfer matrix
/// (`--family finite`), or the Q-operator of a degenerate family (`--normalized`).
pub fn trace_value(p: &Params, seed: u64) -> Result<Value> {
    let alg = p.algebra()?;
    let mut sampler = Sampler::new(seed);
    let twist = p.twists(&alg, &mut sampler, false, 1)?.remove(0);
    let sites = p.sites();
    let t = match &p.t {
        Some(_) => Some(p.t_values()?.remove(0)),
        None => None,
    };
    let classes = if p.family.as_deref() == Some("finite") {
        let case = p.module_case(&alg)?;
        let t = t.ok_or_else(|| QbggError::InvalidParameter("missing --t".into()))?;
        transfer_finite(&build_finite_module(&module_lax(&alg, &case, &t)?)?, &twist, sites)?
    } else {
        let lax = p.lax(&alg, t.as_ref())?;
        if p.normalized {
            crate::transfer::Twisted::plain(twist.tau(), q_operator(&lax, &twist, sites)?)
        } else {
            transfer_plus(&lax, &twist, sites)?
        }
    };
    let terms: Vec<Value> = classes
        .terms()
        .iter()
        .map(|(class, op)| json!({"class": class.iter().map(format_rational).collect::<Vec<_>>(), "operator": op.to_json()}))
        .collect();
    Ok(json!({
        "command": "trace",
        "alg": alg.to_string(),
        "tau": twist.tau().iter().map(format_rational).collect::<Vec<_>>(),
        "N": sites,
        "seed": seed,
        "terms": terms,
    }))
}

/// Executes a parsed command line, writing to `out`; returns the exit status.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let config = match &cli.config {
        Some(path) => SuiteConfig::from_toml(&fs::read_to_string(path)?)?,
        None => SuiteConfig::default(),
    };
    if let Some(backend) = config.backend.as_deref() {
        if backend != "exact" && !(backend == "float-oracle" && cli.oracle) {
            return Err(QbggError::InvalidParameter(format!(
                "backend {backend} is not available (the float oracle also needs --oracle)"
            )));
        }
    }
    let seed = std::env::var("QBGG_SEED")
        .ok()
        .map(|_| seed_from_env(DEFAULT_SEED))
        .or(cli.seed)
        .or(config.seed)
        .unwrap_or(DEFAULT_SEED);
    let timings = cli.timings || config.timings;
    let out_path = cli.out.clone().or(config.out.clone());
    let mut file;
    let sink: &mut dyn Write = match &out_path {
        Some(path) => {
            file = fs::File::create(path)?;
            &mut file
        }
        None => out,
    };
    match cli.command {
        Command::Check { suite, params } => {
            let suite = suite
                .or(config.suite)
                .ok_or_else(|| QbggError::InvalidParameter("no suite given".into()))?;
            let params = params.or(config.params);
            let reports = run_suite(suite, &params, seed, timings, cli.oracle)?;
            for r in &reports {
                writeln!(sink, "{}", r.to_json_line())?;
            }
            Ok(i32::from(reports.iter().any(|r| r.status == Status::Fail)))
        }
        Command::Char { params } => {
            writeln!(sink, "{}", character_value(&params.or(config.params))?)?;
            Ok(0)
        }
        Command::Trace { params } => {
            writeln!(sink, "{}", trace_value(&params.or(config.params), seed)?)?;
            Ok(0)
        }
        Command::List => {
            let width = FORMULA_INDEX.iter().map(|(f, _)| f.chars().count()).max().unwrap_or(0);
            for (formula, command) in FORMULA_INDEX {
                let pad = width - formula.chars().count();
                writeln!(sink, "{formula}{} → {command}", " ".repeat(pad))?;
            }
            Ok(0)
        }
    }
}

/// Entry point of the binary: parses `args`, runs, and maps errors to exit status 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qbgg: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        let cli = Cli::try_parse_from(std::iter::once("qbgg").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = execute(cli, &mut buf).unwrap();
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn single_bgg_check_passes() {
        let (code, out) = run(&["check", "bgg", "--alg", "C", "--r", "2", "--t", "1", "--N", "1", "--seed", "42"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().count(), 1);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["check"], "bgg");
    }

    #[test]
    fn character_command_prints_a_rational() {
        let (_, out) = run(&["char", "--alg", "D", "--case", "spinor", "--r", "3", "--t", "1/2", "--tau", "4,9,25"]);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        // Spinor of so_6 = defining rep of sl_4: Σ over sign patterns with an even number of minus signs.
        // τ^{1/2} = (2,3,5): 30 + 2/15 + 3/10 + 5/6.
        assert_eq!(v["value"], "469/15");
        let cli = Cli::try_parse_from(["qbgg", "char", "--alg", "D", "--r", "3", "--t", "1/2", "--tau", "2,3,5"]).unwrap();
        assert!(matches!(execute(cli, &mut Vec::new()), Err(QbggError::InexactRoot(_))));
    }

    #[test]
    fn list_contains_the_formula_index() {
        let (_, out) = run(&["list"]);
        assert!(out.contains("type A transfer matrix as alternating coset sum"));
        assert!(out.contains("check bgg --alg A"));
        assert!(out.contains("check det --kind tdet"));
        assert!(out.contains("check laxfac --alg B|D --quadratic"));
    }

    #[test]
    fn config_file_supplies_parameters_and_flags_win() {
        let cfg = SuiteConfig::from_toml("suite = \"det\"\nkind = \"qi\"\nn = 3\nsubset = \"1,2\"\nN = 1\n").unwrap();
        assert_eq!(cfg.suite, Some(Suite::Det));
        assert_eq!(cfg.params.sites, Some(1));
        let flags = Params { subset: Some("1,3".into()), ..Default::default() };
        let merged = flags.or(cfg.params);
        assert_eq!(merged.subset().unwrap(), vec![1, 3]);
        assert_eq!(merged.n, Some(3));
        assert!(SuiteConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn oracle_suite_needs_the_flag() {
        assert!(run_suite(Suite::Oracle, &Params::default(), 1, false, false).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let args = ["check", "tsym", "--alg", "C", "--r", "2", "--seed", "7"];
        assert_eq!(run(&args), run(&args));
    }

    #[test]
    fn invalid_parameters_are_usage_errors() {
        let cli = Cli::try_parse_from(["qbgg", "check", "bgg", "--alg", "A", "--n", "2", "--a", "2", "--t", "1"]).unwrap();
        assert!(execute(cli, &mut Vec::new()).is_err());
        let cli = Cli::try_parse_from(["qbgg", "check", "bgg", "--alg", "A", "--n", "2", "--t", "1/2"]).unwrap();
        assert!(matches!(execute(cli, &mut Vec::new()), Err(QbggError::NotDominant(_))));
        assert_eq!(main_with_args(["qbgg", "check", "bogus"]), 2);
    }
}
