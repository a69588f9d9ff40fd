use num_bigint::BigUint;

use super::bipartite::escalate;
use super::{run_system, Certificate, CertifyOptions, Subspace, Target};
use crate::error::{domain, Result};
use crate::linalg::Scalar;
use crate::projectors::{build_ces_projector, phi_ces_column, phi_rk_column, BipartiteLevelShape};
use crate::tensor::binomial;

/// `3^D - 1` for total dimension `D`, used as the completeness level for the
/// CES and GES hierarchies.
pub fn multipartite_level_cap(total_dim: usize) -> BigUint {
    BigUint::from(3u32).pow(total_dim as u32) - 1u32
}

fn party_label(parties: &[usize]) -> String {
    parties.iter().map(|&q| party_letter(q)).collect()
}

fn party_letter(q: usize) -> String {
    if q < 26 {
        char::from(b'A' + q as u8).to_string()
    } else {
        format!("[{q}]")
    }
}

fn check_multipartite<T: Scalar>(s: &Subspace<T>, k: usize) -> Result<()> {
    if s.space().parties() < 3 {
        return domain(format!("need at least 3 parties, got {}", s.space().parties()));
    }
    if k == 0 {
        return domain("level k must be at least 1");
    }
    Ok(())
}

/// Left party sets of every bipartition, each listed once: the subsets of
/// `{0, ..., p-2}` that are nonempty, so the last party is always on the right.
pub fn bipartitions(parties: usize) -> Vec<Vec<usize>> {
    if parties < 2 {
        return Vec::new();
    }
    (1u64..1 << (parties - 1)).map(|mask| (0..parties - 1).filter(|q| mask >> q & 1 == 1).collect()).collect()
}

/// Level-`k` test for complete entanglement.
pub fn certify_ces<T: Scalar>(s: &Subspace<T>, k: usize, opts: &CertifyOptions) -> Result<Certificate> {
    check_multipartite(s, k)?;
    let ces = build_ces_projector::<T>(s.space().dims())?;
    let d = s.space().total_dim();
    let cap = multipartite_level_cap(d);
    let rows = BigUint::from(ces.dim()) * BigUint::from(d).pow((k - 1) as u32);
    let cols = binomial(s.dim() + k, k + 1);
    let report = run_system(format!("CES k={k}"), rows, cols, s.basis(), k + 1, &cap, opts, |m| {
        phi_ces_column(&ces, s.basis(), m, k)
    })?;
    Ok(Certificate::from_systems(Target::CompletelyEntangled, k, vec![report], T::MODE, opts.tol, cap.to_string()))
}

pub fn certify_ces_auto<T: Scalar>(s: &Subspace<T>, k_max: usize, opts: &CertifyOptions) -> Result<Certificate> {
    check_multipartite(s, 1)?;
    let cap = multipartite_level_cap(s.space().total_dim());
    escalate(k_max, &cap, |k| certify_ces(s, k, opts))
}

/// Level-`k` test for genuine entanglement: the r = 1 bipartite system must
/// have full column rank across every bipartition.
pub fn certify_ges<T: Scalar>(s: &Subspace<T>, k: usize, opts: &CertifyOptions) -> Result<Certificate> {
    check_multipartite(s, k)?;
    let space = s.space();
    let cap = multipartite_level_cap(space.total_dim());
    let mut reports = Vec::new();
    for left in bipartitions(space.parties()) {
        let right: Vec<usize> = (0..space.parties()).filter(|q| !left.contains(q)).collect();
        let (bi, perm) = space.regroup_bipartition(&left)?;
        let (d_l, d_r) = (bi.dims()[0], bi.dims()[1]);
        let basis: Vec<Vec<T>> = s.basis().iter().map(|x| perm.iter().map(|&p| x[p].clone()).collect()).collect();
        let shape = BipartiteLevelShape::new(d_l, d_r, 1, k)?;
        let report = run_system(
            format!("{}|{}", party_label(&left), party_label(&right)),
            shape.nominal_rows(),
            shape.nominal_cols(s.dim()),
            &basis,
            k + 1,
            &cap,
            opts,
            |m| phi_rk_column(&shape, &basis, m),
        )?;
        let failed = report.failed();
        reports.push(report);
        if failed && opts.short_circuit {
            break;
        }
    }
    Ok(Certificate::from_systems(Target::GenuinelyEntangled, k, reports, T::MODE, opts.tol, cap.to_string()))
}

pub fn certify_ges_auto<T: Scalar>(s: &Subspace<T>, k_max: usize, opts: &CertifyOptions) -> Result<Certificate> {
    check_multipartite(s, 1)?;
    let cap = multipartite_level_cap(s.space().total_dim());
    escalate(k_max, &cap, |k| certify_ges(s, k, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::Verdict;
    use crate::linalg::C64;
    use crate::tensor::TensorSpace;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn three_party_bipartitions() {
        assert_eq!(bipartitions(3), vec![vec![0], vec![1], vec![0, 1]]);
        assert_eq!(bipartitions(4).len(), 7);
    }

    #[test]
    fn ghz_line_is_genuinely_entangled() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut x = vec![c(0.0); 8];
        x[0] = c(h);
        x[7] = c(h);
        let s = Subspace::new(TensorSpace::new(vec![2, 2, 2]).unwrap(), vec![x]).unwrap();
        let cert = certify_ges(&s, 1, &CertifyOptions::default()).unwrap();
        assert!(cert.is_certified());
        let labels: Vec<_> = cert.systems.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, vec!["A|BC", "B|AC", "AB|C"]);
    }

    #[test]
    fn biseparable_line_fails_one_cut() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut x = vec![c(0.0); 8];
        x[0] = c(h);
        x[3] = c(h);
        let s = Subspace::new(TensorSpace::new(vec![2, 2, 2]).unwrap(), vec![x]).unwrap();
        let cert = certify_ges(&s, 1, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::NotCertifiedAtLevel { level: 1 });
        assert_eq!(cert.systems.len(), 3);
        assert!(cert.systems[0].failed());
        assert!(!cert.systems[1].failed());
        let short = CertifyOptions { short_circuit: true, ..Default::default() };
        assert_eq!(certify_ges(&s, 1, &short).unwrap().systems.len(), 1);
    }

    #[test]
    fn product_line_is_not_completely_entangled() {
        let mut x = vec![c(0.0); 8];
        x[5] = c(1.0);
        let s = Subspace::new(TensorSpace::new(vec![2, 2, 2]).unwrap(), vec![x]).unwrap();
        for k in 1..=2 {
            assert!(!certify_ces(&s, k, &CertifyOptions::default()).unwrap().is_certified());
        }
    }

    #[test]
    fn bipartite_input_is_rejected() {
        let s = Subspace::new(TensorSpace::bipartite(2, 2).unwrap(), vec![vec![c(1.0); 4]]).unwrap();
        assert!(certify_ces(&s, 1, &CertifyOptions::default()).is_err());
        assert!(certify_ges(&s, 1, &CertifyOptions::default()).is_err());
    }
}
