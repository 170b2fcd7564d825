//! Triangle-finding strategies and the pipeline that runs them in turn.
//!
//! Every method ends in a rational point on `Y^2 = X^3 - n^2 X`. The point is
//! mapped to a triangle and the pair is re-checked exactly before it is
//! returned, so heuristic substitutions can never produce a wrong answer.

mod descents;
mod factor;
mod hartley;
mod searches;
mod zagier;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::budget::Deadline;
use crate::curve::{naive_height, on_curve, point_to_triangle, CurvePoint, Model};
use crate::numth::{rat_int, squarefree_decompose, Integer, Rational};
use crate::qsearch::SearchOptions;
use crate::triangle::Triangle;
use crate::tunnell::{tunnell_test, TunnellVerdict};

pub use descents::{kww_instances, solve_eqdesc, solve_isogeny_descent, solve_kww, KwwInstance};
pub use factor::solve_factor;
pub use hartley::{hartley_chain, hartley_quartic, solve_hartley, HartleyChain};
pub use searches::{direct_certificates, solve_direct, solve_naive, solve_pythagorean};
pub use zagier::{solve_zagier, zagier_quartic, zagier_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Naive,
    Pythagorean,
    Direct,
    Hartley,
    Eqdesc,
    Zagier,
    IsogenyDescent,
    Kww,
    Factor,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Naive,
        Method::Pythagorean,
        Method::Direct,
        Method::Hartley,
        Method::Eqdesc,
        Method::Zagier,
        Method::IsogenyDescent,
        Method::Kww,
        Method::Factor,
    ];

    /// Cheap searches first, kww before factor.
    pub const DEFAULT_ORDER: [Method; 9] = [
        Method::Pythagorean,
        Method::Naive,
        Method::Direct,
        Method::Hartley,
        Method::Eqdesc,
        Method::Zagier,
        Method::IsogenyDescent,
        Method::Kww,
        Method::Factor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Pythagorean => "pythagorean",
            Method::Direct => "direct",
            Method::Hartley => "hartley",
            Method::Eqdesc => "eqdesc",
            Method::Zagier => "zagier",
            Method::IsogenyDescent => "isogeny_descent",
            Method::Kww => "kww",
            Method::Factor => "factor",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = SolveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| SolveError::InvalidInput(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("method does not apply: {0}")]
    MethodInapplicable(String),
    #[error("{0} is not a sum of two squares")]
    NoTwoSquareRepresentation(Integer),
    #[error("no initial solution within the seed bounds")]
    NoInitialSolution,
    #[error("every initial solution failed the coprimality condition")]
    CoprimalityFailure,
    #[error("{0} is not congruent (Tunnell)")]
    NotCongruentByTunnell(Integer),
    #[error("no method found a triangle for {0}")]
    Unsolved(Integer),
    #[error(transparent)]
    Math(#[from] crate::Error),
}

/// Which signed squarefree divisors `d` the direct search loops over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisorSet {
    /// `d` in `{1, -1, n, -n}`.
    Trivial,
    /// Every signed squarefree divisor of `n`.
    All,
}

/// Per-method settings that override the shared ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MethodOverride {
    pub limit: Option<u64>,
    pub budget: Option<Duration>,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Bound on the height `|p| + q` of searched parameters.
    pub limit: u64,
    pub methods: Vec<Method>,
    pub overrides: BTreeMap<Method, MethodOverride>,
    /// Wall-clock budget per method.
    pub budget: Duration,
    pub workers: usize,
    pub tunnell_screen: bool,
    pub direct_divisors: DivisorSet,
    /// Let hartley fall back to the two-conic descent.
    pub hartley_descent: bool,
    /// Largest `|p0| + q0` of a starting point on a conic.
    pub seed_bound: u64,
    /// Starting points tried per conic and `k`.
    pub seeds: usize,
    /// Initial solutions tried per divisor in kww.
    pub kww_instances: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let mut overrides = BTreeMap::new();
        // An O(L^2) scan; keep it a quick first pass.
        overrides.insert(Method::Pythagorean, MethodOverride { limit: Some(1000), budget: None });
        SearchConfig {
            limit: 9999,
            methods: Method::DEFAULT_ORDER.to_vec(),
            overrides,
            budget: Duration::from_secs(60),
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            tunnell_screen: true,
            direct_divisors: DivisorSet::All,
            hartley_descent: false,
            seed_bound: 60,
            seeds: 3,
            kww_instances: 3,
        }
    }
}

impl SearchConfig {
    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = limit.max(1);
        self.overrides.values_mut().for_each(|o| o.limit = None);
        self
    }

    pub fn with_methods(mut self, methods: &[Method]) -> Self {
        self.methods = methods.to_vec();
        self
    }

    pub fn limit_for(&self, m: Method) -> u64 {
        self.overrides.get(&m).and_then(|o| o.limit).unwrap_or(self.limit).max(1)
    }

    pub fn budget_for(&self, m: Method) -> Duration {
        self.overrides.get(&m).and_then(|o| o.budget).unwrap_or(self.budget)
    }

    pub(crate) fn search_options(&self, m: Method, deadline: Deadline) -> SearchOptions {
        SearchOptions::new(self.limit_for(m)).workers(self.workers).deadline(deadline)
    }
}

/// A named witness value.
pub type Witness = (String, Rational);

/// A found triangle, the curve point it came from and the parameters that
/// led there.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionCertificate {
    pub n: Integer,
    pub method: Method,
    pub witnesses: Vec<Witness>,
    pub point: CurvePoint,
    pub triangle: Triangle,
    pub height: f64,
}

impl SolutionCertificate {
    /// Builds a certificate from a point, or `None` if the point is torsion
    /// or the exact checks fail.
    pub fn from_point(method: Method, witnesses: Vec<Witness>, point: CurvePoint) -> Option<Self> {
        let triangle = point_to_triangle(&point).ok()?;
        let height = naive_height(&point).ok()?;
        let cert = SolutionCertificate { n: point.curve().n().clone(), method, witnesses, point, triangle, height };
        cert.verify().then_some(cert)
    }

    /// Exact on-curve check, exact triangle check and agreement of the two.
    pub fn verify(&self) -> bool {
        self.point.curve().model() == Model::Congruent
            && self.point.curve().n() == &self.n
            && on_curve(&self.point)
            && self.triangle.area() == &self.n
            && self.triangle.verify()
            && point_to_triangle(&self.point).is_ok_and(|t| t == self.triangle)
    }

    pub fn witness(&self, name: &str) -> Option<&Rational> {
        self.witnesses.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    /// The scale `f` with original input `n f^2`, when the input was not squarefree.
    pub fn scale(&self) -> Integer {
        self.witness("scale").map(|s| s.to_integer()).unwrap_or_else(Integer::one)
    }

    /// The triangle for the original input, whose area is `n f^2`.
    pub fn scaled_triangle(&self) -> Triangle {
        self.triangle.scaled(&self.scale())
    }
}

pub(crate) fn w<T: Into<Integer>>(name: &str, v: T) -> Witness {
    (name.to_string(), rat_int(v.into()))
}

pub(crate) fn wq(name: &str, v: &Rational) -> Witness {
    (name.to_string(), v.clone())
}

pub(crate) fn check_squarefree(n: &Integer) -> Result<(), SolveError> {
    if !n.is_positive() {
        return Err(SolveError::InvalidInput(format!("{n} must be positive")));
    }
    let (s, _) = squarefree_decompose(n)?;
    if &s != n {
        return Err(SolveError::Math(crate::Error::NotSquarefree(n.clone())));
    }
    Ok(())
}

/// Deadline for one method run, from the configured budget.
pub(crate) fn deadline_for(cfg: &SearchConfig, m: Method) -> Deadline {
    Deadline::after(cfg.budget_for(m))
}

/// Runs one method on squarefree `n`.
pub fn solve_with(n: &Integer, m: Method, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    match m {
        Method::Naive => solve_naive(n, cfg),
        Method::Pythagorean => solve_pythagorean(n, cfg),
        Method::Direct => solve_direct(n, cfg),
        Method::Hartley => solve_hartley(n, cfg),
        Method::Eqdesc => solve_eqdesc(n, cfg),
        Method::Zagier => solve_zagier(n, cfg),
        Method::IsogenyDescent => solve_isogeny_descent(n, cfg),
        Method::Kww => solve_kww(n, cfg),
        Method::Factor => solve_factor(n, cfg),
    }
}

/// Reduces `n` to its squarefree part, screens it with Tunnell's criterion,
/// then runs the configured methods in order and returns the first
/// certificate. A `scale` witness records the square factor removed.
pub fn solve(n: &Integer, cfg: &SearchConfig) -> Result<SolutionCertificate, SolveError> {
    if !n.is_positive() {
        return Err(SolveError::InvalidInput(format!("{n} must be positive")));
    }
    let (s, f) = squarefree_decompose(n)?;
    if cfg.tunnell_screen {
        // Counting is only feasible for machine-sized n.
        if let Ok(TunnellVerdict::NotCongruent) = tunnell_test(&s) {
            return Err(SolveError::NotCongruentByTunnell(s));
        }
    }
    for &m in &cfg.methods {
        let found = match solve_with(&s, m, cfg) {
            Ok(found) => found,
            Err(SolveError::Math(e)) => return Err(SolveError::Math(e)),
            Err(_) => None,
        };
        if let Some(mut cert) = found {
            if !f.is_one() {
                cert.witnesses.insert(0, w("scale", f.clone()));
            }
            assert!(cert.verify(), "certificate for {s} failed re-verification");
            return Ok(cert);
        }
    }
    Err(SolveError::Unsolved(s))
}
