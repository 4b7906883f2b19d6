//! Exact verification of the defining relations on matrices.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hecke::{geometric_terms, MatrixRep, XMonomials};
use crate::linalg::{Matrix, Scalar};
use crate::roots::RootSystem;
use crate::scalar::FieldElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply (e.g. an operator is undefined).
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: None,
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skipped,
            detail: Some(why.into()),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        write!(f, "{s:4} {}", self.name)?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

/// A list of named checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn alternating<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>, m: usize) -> Matrix<F> {
    let mut out = Matrix::identity(a.rows());
    for k in 0..m {
        out = out.mul(if k % 2 == 0 { a } else { b }).expect("square");
    }
    out
}

/// Checks the quadratic, braid, Bernstein (for each `ω_k`) and
/// commutativity relations, with `qq = q − q⁻¹` in the scalar field.
pub fn verify_matrices<F: Scalar>(
    rs: &RootSystem,
    t: &[Matrix<F>],
    x: &[Matrix<F>],
    qq: &F,
) -> Report {
    let mut report = Report::default();
    let n = rs.rank();
    if t.len() != n || x.len() != n {
        report.push(Check::new("generator count", false));
        return report;
    }
    let dim = t[0].rows();
    let id = Matrix::<F>::identity(dim);
    for (i, ti) in t.iter().enumerate() {
        let lhs = ti.mul(ti).expect("square");
        let rhs = ti.scale(qq).add(&id).expect("square");
        report.push(Check::new(format!("quadratic T{}", i + 1), lhs == rhs));
    }
    for i in 0..n {
        for j in i + 1..n {
            let m = rs.braid_order(i, j).expect("distinct indices");
            let ok = alternating(&t[i], &t[j], m) == alternating(&t[j], &t[i], m);
            report.push(Check::new(format!("braid T{} T{} (m={})", i + 1, j + 1, m), ok));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let ok = x[a].mul(&x[b]).unwrap() == x[b].mul(&x[a]).unwrap();
            report.push(Check::new(format!("commute X{} X{}", a + 1, b + 1), ok));
        }
    }
    let xs = match XMonomials::new(x) {
        Ok(xs) => xs,
        Err(_) => {
            report.push(Check::new("X invertible", false));
            return report;
        }
    };
    for (i, ti) in t.iter().enumerate() {
        for k in 0..n {
            let mut omega = vec![0i64; n];
            omega[k] = 1;
            let lhs = xs.generator(k).mul(ti).unwrap();
            let mut rhs = ti.mul(&xs.monomial(&rs.reflect_weight(i, &omega))).unwrap();
            for (mu, sign) in geometric_terms(rs, i, &omega) {
                let term = xs.monomial(&mu).scale(qq);
                rhs = if sign > 0 { rhs.add(&term) } else { rhs.sub(&term) }.unwrap();
            }
            report.push(Check::new(
                format!("Bernstein X^w{} T{}", k + 1, i + 1),
                lhs == rhs,
            ));
        }
    }
    report
}

/// All defining relations on a module, exactly.
pub fn verify_defining_relations(rs: &RootSystem, m: &MatrixRep) -> Report {
    verify_matrices(rs, &m.t, &m.x, &FieldElem::q_minus_qinv())
}

/// The same relations after substituting `u ← u0`.
pub fn verify_at_point(rs: &RootSystem, m: &MatrixRep, u0: &BigRational) -> Result<Report> {
    let (d, t, x) = m.evaluate(u0)?;
    let qq = crate::hecke::q_minus_qinv_at(d, u0);
    Ok(verify_matrices(rs, &t, &x, &qq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{principal_series, HeckeAlgebra};
    use crate::roots::{CartanKind, Family};
    use crate::scalar::rat;
    use crate::torus::real_weight;

    #[test]
    fn principal_series_relations_hold() {
        for (f, c) in [
            (Family::A, vec![rat(1, 5), rat(1, 7)]),
            (Family::C, vec![rat(1, 2), rat(1, 3)]),
            (Family::G, vec![rat(1, 3), rat(0, 1)]),
        ] {
            let rs = RootSystem::new(CartanKind::new(f, 2).unwrap()).unwrap();
            let h = HeckeAlgebra::new(&rs, 100).unwrap();
            let m = principal_series(&h, &real_weight(&rs, &c).unwrap()).unwrap();
            let r = verify_defining_relations(&rs, &m);
            assert!(r.all_passed(), "{r}");
            assert!(verify_at_point(&rs, &m, &rat(13, 10)).unwrap().all_passed());
        }
    }

    #[test]
    fn perturbation_is_caught() {
        let rs = RootSystem::new(CartanKind::new(Family::A, 2).unwrap()).unwrap();
        let h = HeckeAlgebra::new(&rs, 100).unwrap();
        let mut m = principal_series(&h, &real_weight(&rs, &[rat(1, 5), rat(1, 7)]).unwrap()).unwrap();
        let e = m.t[0].get(0, 0).add_ref(&FieldElem::one());
        m.t[0].set(0, 0, e);
        let r = verify_defining_relations(&rs, &m);
        let bad: Vec<_> = r.failures().iter().map(|c| c.name.clone()).collect();
        assert!(bad.contains(&"quadratic T1".to_string()));
        assert!(!bad.contains(&"quadratic T2".to_string()));
    }
}
