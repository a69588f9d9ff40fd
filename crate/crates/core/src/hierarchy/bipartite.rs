use num_bigint::BigUint;

use super::{run_system, Certificate, CertifyOptions, Subspace, Target, Verdict};
use crate::error::{domain, Result};
use crate::linalg::{singular_values_reshaped, Scalar, C64};
use crate::projectors::{phi_rk_column, BipartiteLevelShape};
use crate::tensor::binomial;

/// Number of singular values of the `d_A x d_B` reshape of `x` above
/// `rel_tol * σ_max`.
pub fn schmidt_rank(x: &[C64], d_a: usize, d_b: usize, rel_tol: f64) -> Result<usize> {
    let s = singular_values_reshaped(x, d_a, d_b)?;
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return domain("the zero vector has no Schmidt rank");
    }
    Ok(s.iter().filter(|&&v| v > rel_tol * top).count())
}

/// `(max(r, 2) + 1)^{d_A d_B} - r`, the level by which the hierarchy is
/// guaranteed to decide r-entanglement.
pub fn bipartite_level_cap(d_a: usize, d_b: usize, r: usize) -> BigUint {
    BigUint::from(r.max(2) + 1).pow((d_a * d_b) as u32) - BigUint::from(r)
}

/// Largest `d_S` with `C(d_S + r, r + 1) <= C(d_A, r + 1) C(d_B, r + 1)`.
pub fn max_level1_dimension(d_a: usize, d_b: usize, r: usize) -> Result<usize> {
    if r == 0 || r + 1 > d_a.min(d_b) {
        return domain(format!("need 1 <= r and r + 1 <= min(d_A, d_B), got r = {r} for {d_a}x{d_b}"));
    }
    let rows = binomial(d_a, r + 1) * binomial(d_b, r + 1);
    let mut d_s = 1;
    while binomial(d_s + 1 + r, r + 1) <= rows {
        d_s += 1;
    }
    Ok(d_s)
}

fn bipartite_dims<T: Scalar>(s: &Subspace<T>) -> Result<(usize, usize)> {
    match s.space().dims() {
        &[a, b] => Ok((a, b)),
        d => domain(format!("expected a bipartite space, got {} parties", d.len())),
    }
}

/// Level-`k` test for r-entanglement: certified iff `Φ_r^k` restricted to the
/// symmetric span of `S` has full column rank.
pub fn certify_bipartite<T: Scalar>(s: &Subspace<T>, r: usize, k: usize, opts: &CertifyOptions) -> Result<Certificate> {
    let (d_a, d_b) = bipartite_dims(s)?;
    if r == 0 || k == 0 {
        return domain("r and k must both be at least 1");
    }
    if r + 1 > d_a.min(d_b) {
        return domain(format!(
            "r + 1 = {} exceeds min(d_A, d_B) = {}; every vector has Schmidt rank at most {}",
            r + 1,
            d_a.min(d_b),
            d_a.min(d_b)
        ));
    }
    let shape = BipartiteLevelShape::new(d_a, d_b, r, k)?;
    let cap = bipartite_level_cap(d_a, d_b, r);
    let report = run_system(
        format!("r={r} k={k}"),
        shape.nominal_rows(),
        shape.nominal_cols(s.dim()),
        s.basis(),
        r + k,
        &cap,
        opts,
        |m| phi_rk_column(&shape, s.basis(), m),
    )?;
    Ok(Certificate::from_systems(Target::REntangled { r }, k, vec![report], T::MODE, opts.tol, cap.to_string()))
}

/// Tries `k = 1, 2, ...` up to `min(k_max, cap)` and stops at the first
/// certified level or the first level whose system is too large.
pub fn certify_bipartite_auto<T: Scalar>(
    s: &Subspace<T>,
    r: usize,
    k_max: usize,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    let (d_a, d_b) = bipartite_dims(s)?;
    let cap = bipartite_level_cap(d_a, d_b, r);
    escalate(k_max, &cap, |k| certify_bipartite(s, r, k, opts))
}

pub(super) fn escalate<F>(k_max: usize, cap: &BigUint, mut run: F) -> Result<Certificate>
where
    F: FnMut(usize) -> Result<Certificate>,
{
    if k_max == 0 {
        return domain("k_max must be at least 1");
    }
    let last = usize::try_from(cap).map_or(k_max, |c| k_max.min(c.max(1)));
    let mut tried = Vec::new();
    let mut cert = None;
    for k in 1..=last {
        let c = run(k)?;
        tried.push(k);
        let stop = matches!(c.verdict, Verdict::Certified | Verdict::SystemTooLarge);
        cert = Some(c);
        if stop {
            break;
        }
    }
    let mut cert = cert.expect("at least one level runs");
    cert.levels_tried = tried;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::TensorSpace;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn schmidt_ranks() {
        let mut x = vec![c(0.0); 4];
        x[1] = c(1.0);
        assert_eq!(schmidt_rank(&x, 2, 2, 1e-10).unwrap(), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![c(h), c(0.0), c(0.0), c(h)];
        assert_eq!(schmidt_rank(&bell, 2, 2, 1e-10).unwrap(), 2);
        assert!(schmidt_rank(&[c(0.0); 4], 2, 2, 1e-10).is_err());
    }

    #[test]
    fn level_caps() {
        assert_eq!(bipartite_level_cap(2, 2, 1), BigUint::from(80u32));
        assert_eq!(bipartite_level_cap(2, 2, 3), BigUint::from(253u32));
    }

    #[test]
    fn product_line_is_not_certified() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let sub = Subspace::new(s, vec![vec![c(1.0), c(0.0), c(0.0), c(0.0)]]).unwrap();
        for k in 1..=3 {
            let cert = certify_bipartite(&sub, 1, k, &CertifyOptions::default()).unwrap();
            assert_eq!(cert.verdict, Verdict::NotCertifiedAtLevel { level: k });
        }
    }

    #[test]
    fn bell_line_is_certified() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let sub = Subspace::new(s, vec![vec![c(h), c(0.0), c(0.0), c(h)]]).unwrap();
        let cert = certify_bipartite(&sub, 1, 1, &CertifyOptions::default()).unwrap();
        assert!(cert.is_certified());
        assert_eq!(cert.system_dims(), vec![(1, 1)]);
    }

    #[test]
    fn trivial_r_is_rejected() {
        let s = TensorSpace::bipartite(2, 3).unwrap();
        let sub = Subspace::new(s, vec![vec![c(1.0); 6]]).unwrap();
        assert!(certify_bipartite(&sub, 2, 1, &CertifyOptions::default()).is_err());
    }

    #[test]
    fn guardrail_reports_too_large() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sub = Subspace::new(s, vec![vec![c(h), c(0.0), c(0.0), c(h)]]).unwrap();
        let opts = CertifyOptions { guardrail_rows: 10, ..Default::default() };
        let cert = certify_bipartite(&sub, 1, 3, &opts).unwrap();
        assert_eq!(cert.verdict, Verdict::SystemTooLarge);
    }
}
