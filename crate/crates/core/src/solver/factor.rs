//! Composite `n = a b`: a common rational `x` with `a x^2 + b` and
//! `a x^2 - b` both squares gives `X = (a x)^2`.

use std::ops::ControlFlow;

use num_traits::{One, Zero};

use super::{check_squarefree, deadline_for, w, wq, Method, SearchConfig, SolutionCertificate, SolveError};
use crate::curve::Curve;
use crate::numth::{factorize, Integer, Rational};
use crate::qsearch::{descent_search, Conic, QuadricPair};

/// Nontrivial splits `n = a b`, by `a` ascending.
fn splits(n: &Integer) -> Result<Vec<(Integer, Integer)>, SolveError> {
    let mut divs = vec![Integer::one()];
    for p in factorize(n)?.primes() {
        let extra: Vec<Integer> = divs.iter().map(|d| d * p).collect();
        divs.extend(extra);
    }
    divs.sort();
    Ok(divs.into_iter().filter(|a| !a.is_one() && a != n).map(|a| (a.clone(), n / a)).collect())
}

pub fn solve_factor(n: &Integer, cfg: &SearchConfig) -> Result<Option<SolutionCertificate>, SolveError> {
    check_squarefree(n)?;
    let splits = splits(n)?;
    if splits.is_empty() {
        return Err(SolveError::MethodInapplicable(format!("{n} has no nontrivial factorization")));
    }
    let curve = Curve::congruent(n.clone())?;
    let deadline = deadline_for(cfg, Method::Factor);
    let opts = cfg.search_options(Method::Factor, deadline);
    for (a, b) in splits {
        if deadline.expired() {
            break;
        }
        let z = Integer::zero();
        let Ok(pair) = QuadricPair::new(Conic::new(a.clone(), z.clone(), b.clone()), Conic::new(a.clone(), z, -b.clone()))
        else {
            continue;
        };
        let found = descent_search(&pair, &opts, cfg.seed_bound, cfg.seeds, |hit| {
            if hit.x.is_zero() {
                return ControlFlow::Continue(());
            }
            let u = Rational::from_integer(a.clone()) * &hit.x;
            let Some(point) = curve.lift_x(&u * &u) else {
                return ControlFlow::Continue(());
            };
            let mut witnesses = vec![w("a", a.clone()), w("b", b.clone()), w("k", hit.k.clone())];
            let (p0, w0, q0) = &hit.start;
            witnesses.extend([w("p0", p0.clone()), w("w0", w0.clone()), w("q0", q0.clone())]);
            if let Some(t) = &hit.t {
                witnesses.push(wq("t", t));
            }
            witnesses.push(wq("x", &hit.x));
            match SolutionCertificate::from_point(Method::Factor, witnesses, point) {
                Some(cert) => ControlFlow::Break(cert),
                None => ControlFlow::Continue(()),
            }
        });
        if let Some(cert) = found.found() {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::int;

    #[test]
    fn split_lists() {
        assert_eq!(splits(&int(30)).unwrap().len(), 6);
        assert_eq!(splits(&int(6)).unwrap(), vec![(int(2), int(3)), (int(3), int(2))]);
        assert!(splits(&int(7)).unwrap().is_empty());
    }
}
