use nalgebra::DMatrix;

use super::geomean;
use crate::error::Result;
use crate::linalg::{riemannian_dist, SymMatrix};

const REL_TOL: f64 = 1e-8;

/// Inputs for [`geomean_properties_check`].
#[derive(Debug, Clone)]
pub struct PropertyInputs {
    pub a: SymMatrix,
    pub b: SymMatrix,
    pub c: SymMatrix,
    pub d: SymMatrix,
    pub t: f64,
    /// Second curve parameter for the continuity bound.
    pub s: f64,
    pub lambda: f64,
    /// Positive scalars for the homogeneity law.
    pub alpha: f64,
    pub beta: f64,
    /// Invertible matrix for the congruence law.
    pub congruence: DMatrix<f64>,
}

/// One flag per listed property of the two-variable weighted mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GeomeanProperties {
    /// `A #ₜ B = A^{1−t} B^t` for commuting arguments (`B` replaced by the
    /// matrix with `B`'s spectrum on `A`'s eigenbasis).
    pub commuting_power_law: bool,
    pub homogeneity: bool,
    pub reversal: bool,
    /// `A #ₜ B ≤ (A + C) #ₜ (B + D)`.
    pub monotonicity: bool,
    /// `δ(A #ₛ B, C #ₜ D) ≤ |s − t| δ(A, B) + (1 − t) δ(A, C) + t δ(B, D)`.
    pub continuity: bool,
    pub congruence: bool,
    pub joint_concavity: bool,
    pub inversion: bool,
    pub determinant: bool,
    pub agm_sandwich: bool,
}

impl GeomeanProperties {
    pub fn as_array(&self) -> [(&'static str, bool); 10] {
        [
            ("commuting power law", self.commuting_power_law),
            ("homogeneity", self.homogeneity),
            ("reversal", self.reversal),
            ("monotonicity", self.monotonicity),
            ("continuity", self.continuity),
            ("congruence invariance", self.congruence),
            ("joint concavity", self.joint_concavity),
            ("inversion", self.inversion),
            ("determinant identity", self.determinant),
            ("AGM sandwich", self.agm_sandwich),
        ]
    }

    pub fn all(&self) -> bool {
        self.as_array().iter().all(|(_, ok)| *ok)
    }
}

fn approx_eq(x: &SymMatrix, y: &SymMatrix) -> bool {
    (x - y).fro_norm() <= REL_TOL * y.fro_norm().max(1.0)
}

/// `lo ≤ hi` in the Loewner order up to `REL_TOL` relative to the operands.
fn loewner_le(lo: &SymMatrix, hi: &SymMatrix) -> Result<bool> {
    let scale = lo.op_norm().max(hi.op_norm()).max(1.0);
    Ok((hi - lo).min_eigenvalue()? >= -REL_TOL * scale)
}

/// Evaluates the ten classical properties of the weighted geometric mean at
/// relative tolerance `1e-8`.
pub fn geomean_properties_check(p: &PropertyInputs) -> Result<GeomeanProperties> {
    let (a, b, c, d, t) = (&p.a, &p.b, &p.c, &p.d, p.t);
    let ab = geomean(a, b, t)?;

    let commuting_power_law = {
        let ea = a.eig()?;
        let spec_b = b.eigenvalues()?;
        let b_comm = SymMatrix::from_decomp(
            &crate::linalg::EigenDecomp {
                values: spec_b,
                vectors: ea.vectors.clone(),
            },
            |x| x,
        );
        let lhs = geomean(a, &b_comm, t)?;
        let rhs = a.powf(1.0 - t)?.jordan_product(&b_comm.powf(t)?);
        approx_eq(&lhs, &rhs)
    };

    let homogeneity = {
        let lhs = geomean(&(p.alpha * a), &(p.beta * b), t)?;
        let rhs = (p.alpha.powf(1.0 - t) * p.beta.powf(t)) * &ab;
        approx_eq(&lhs, &rhs)
    };

    let reversal = approx_eq(&ab, &geomean(b, a, 1.0 - t)?);

    let monotonicity = loewner_le(&ab, &geomean(&(a + c), &(b + d), t)?)?;

    let continuity = {
        let lhs = riemannian_dist(&geomean(a, b, p.s)?, &geomean(c, d, t)?)?;
        let rhs = (p.s - t).abs() * riemannian_dist(a, b)?
            + (1.0 - t) * riemannian_dist(a, c)?
            + t * riemannian_dist(b, d)?;
        lhs <= rhs + REL_TOL * rhs.max(1.0)
    };

    let congruence = {
        let s = &p.congruence;
        let lhs = ab.congruence(s)?;
        let rhs = geomean(&a.congruence(s)?, &b.congruence(s)?, t)?;
        approx_eq(&lhs, &rhs)
    };

    let joint_concavity = {
        let l = p.lambda;
        let mix = |x: &SymMatrix, y: &SymMatrix| &((1.0 - l) * x) + &(l * y);
        let lhs = geomean(&mix(a, b), &mix(c, d), t)?;
        let rhs = mix(&geomean(a, c, t)?, &geomean(b, d, t)?);
        loewner_le(&rhs, &lhs)?
    };

    let inversion = approx_eq(&ab.inverse()?, &geomean(&a.inverse()?, &b.inverse()?, t)?);

    let determinant = {
        let lhs = ab.det();
        let rhs = a.det().powf(1.0 - t) * b.det().powf(t);
        (lhs - rhs).abs() <= REL_TOL * rhs.abs()
    };

    let agm_sandwich = {
        let harmonic = (&((1.0 - t) * &a.inverse()?) + &(t * &b.inverse()?)).inverse()?;
        let arithmetic = &((1.0 - t) * a) + &(t * b);
        loewner_le(&harmonic, &ab)? && loewner_le(&ab, &arithmetic)?
    };

    Ok(GeomeanProperties {
        commuting_power_law,
        homogeneity,
        reversal,
        monotonicity,
        continuity,
        congruence,
        joint_concavity,
        inversion,
        determinant,
        agm_sandwich,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_properties_on_a_fixed_quadruple() {
        let a = SymMatrix::from_rows([[2.0, 0.5, 0.1], [0.5, 1.5, 0.2], [0.1, 0.2, 1.0]]).unwrap();
        let b = SymMatrix::from_rows([[1.0, -0.3, 0.0], [-0.3, 2.0, 0.4], [0.0, 0.4, 3.0]]).unwrap();
        let c = SymMatrix::from_diagonal(&[0.5, 1.0, 2.0]);
        let d = SymMatrix::from_rows([[1.2, 0.1, 0.2], [0.1, 0.9, 0.0], [0.2, 0.0, 1.1]]).unwrap();
        let s = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, -1.0, 3.0, 0.0, 1.0]);
        let report = geomean_properties_check(&PropertyInputs {
            a,
            b,
            c,
            d,
            t: 0.3,
            s: 0.75,
            lambda: 0.4,
            alpha: 2.5,
            beta: 0.2,
            congruence: s,
        })
        .unwrap();
        for (name, ok) in report.as_array() {
            assert!(ok, "{name} failed");
        }
    }
}
