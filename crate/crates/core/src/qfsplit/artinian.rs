//! Complete decisions for finite-dimensional algebras.

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::field;
use crate::linalg::{solve_linear, FpMatrix};
use crate::witt::WbarSpace;

use super::{
    Decision, Height, HeightReport, LevelVerdict, Method, NonSplitCertificate, SplitKind,
    SplittingWitness,
};

/// Unknown φ is a d × D matrix; row r, column c is unknown r·D + c.
/// Collects equations φ·M_g = L_g·φ for each generator and φ(u) = 1.
fn splitting_system(a: &FiniteAlgebra, actions: &[FpMatrix], unit_image: &[u32]) -> (FpMatrix, Vec<u32>) {
    let p = a.p();
    let d = a.dim();
    let big_d = unit_image.len();
    let nunk = d * big_d;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    for (g, m_g) in a.generators().iter().zip(actions) {
        let l_g = a.mul_matrix(g);
        for r in 0..d {
            for c in 0..big_d {
                let mut row = vec![0u32; nunk];
                for s in 0..big_d {
                    let v = m_g.get(s, c);
                    if v != 0 {
                        row[r * big_d + s] = field::add(row[r * big_d + s], v, p);
                    }
                }
                for t in 0..d {
                    let v = l_g.get(r, t);
                    if v != 0 {
                        row[t * big_d + c] = field::sub(row[t * big_d + c], v, p);
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                    rhs.push(0);
                }
            }
        }
    }
    let one = a.one();
    for r in 0..d {
        let mut row = vec![0u32; nunk];
        for (s, &u) in unit_image.iter().enumerate() {
            row[r * big_d + s] = u;
        }
        rows.push(row);
        rhs.push(one[r]);
    }
    (FpMatrix::from_rows(p, &rows, nunk), rhs)
}

fn phi_from_solution(p: u32, d: usize, big_d: usize, sol: &[u32]) -> FpMatrix {
    let rows: Vec<Vec<u32>> = (0..d).map(|r| sol[r * big_d..(r + 1) * big_d].to_vec()).collect();
    FpMatrix::from_rows(p, &rows, big_d)
}

fn augmented_rank(m: &FpMatrix, rhs: &[u32]) -> usize {
    let rows: Vec<Vec<u32>> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(rhs[i]);
            r
        })
        .collect();
    FpMatrix::from_rows(m.p, &rows, m.cols + 1).rank()
}

fn decide(
    a: &FiniteAlgebra,
    n: usize,
    kind: SplitKind,
    actions: &[FpMatrix],
    unit_image: &[u32],
    kernel: Vec<Vec<u32>>,
) -> Decision {
    let (m, rhs) = splitting_system(a, actions, unit_image);
    match solve_linear(&m, &rhs) {
        Some(sol) => Decision::Split {
            witness: SplittingWitness {
                kind,
                n,
                phi: phi_from_solution(a.p(), a.dim(), unit_image.len(), &sol),
            },
        },
        None => {
            let certificate = match kernel.into_iter().next() {
                Some(x) => NonSplitCertificate::FrobeniusKernel {
                    n,
                    x_display: a.format_elem(&x),
                    x,
                },
                None => NonSplitCertificate::LinearSystemInconsistent {
                    n,
                    unknowns: m.cols,
                    equations: m.rows,
                    rank: m.rank(),
                    augmented_rank: augmented_rank(&m, &rhs),
                },
            };
            Decision::NotSplit { certificate }
        }
    }
}

/// Does F: A → F_*A admit an A-linear retraction?
pub fn is_f_split(a: &FiniteAlgebra) -> Result<Decision> {
    let actions: Vec<FpMatrix> = a
        .generators()
        .iter()
        .map(|g| a.mul_matrix(&a.frobenius(g)))
        .collect();
    let decision = decide(a, 1, SplitKind::FSplit, &actions, &a.one(), a.frobenius_kernel());
    check_decision(a, &decision, None)?;
    Ok(decision)
}

/// Does F: A → F_*W̄_n(A) admit a retraction linear for a·m = [a^p]·m?
pub fn is_quasi_f_split(a: &FiniteAlgebra, n: usize) -> Result<Decision> {
    let w = WbarSpace::new(a, n)?;
    is_quasi_f_split_in(&w)
}

pub(crate) fn is_quasi_f_split_in(w: &WbarSpace<'_>) -> Result<Decision> {
    let a = w.algebra();
    let actions: Vec<FpMatrix> = a.generators().iter().map(|g| w.action_matrix(g)).collect();
    let unit_image = w.coord(&w.ring().one());
    let decision = decide(
        a,
        w.n(),
        SplitKind::QuasiFSplit,
        &actions,
        &unit_image,
        w.frobenius_kernel(),
    );
    check_decision(a, &decision, Some(w))?;
    Ok(decision)
}

fn check_decision(a: &FiniteAlgebra, d: &Decision, w: Option<&WbarSpace<'_>>) -> Result<()> {
    match d {
        Decision::Split { witness } => match w {
            Some(w) => validate_quasi_f_split(witness, w),
            None => validate_f_split(witness, a),
        },
        Decision::NotSplit {
            certificate: NonSplitCertificate::FrobeniusKernel { x, .. },
        } => {
            let zero = match w {
                Some(w) => w.frobenius_of(x).iter().all(|&c| c == 0),
                None => a.is_zero(&a.frobenius(x)),
            };
            if zero && !a.is_zero(x) {
                Ok(())
            } else {
                Err(Error::WitnessInvalid("Frobenius kernel certificate does not replay".into()))
            }
        }
        Decision::NotSplit { .. } => Ok(()),
    }
}

/// φ(1) = 1 and φ(g^p·m) = g·φ(m) on F_*A.
pub fn validate_f_split(wit: &SplittingWitness, a: &FiniteAlgebra) -> Result<()> {
    let phi = &wit.phi;
    if phi.rows != a.dim() || phi.cols != a.dim() {
        return Err(Error::WitnessInvalid("shape mismatch".into()));
    }
    if phi.apply(&a.one()) != a.one() {
        return Err(Error::WitnessInvalid("φ(1) ≠ 1".into()));
    }
    for g in a.generators() {
        let gp = a.frobenius(g);
        for k in 0..a.dim() {
            let m = a.basis_elem(k);
            if phi.apply(&a.mul(&gp, &m)) != a.mul(g, &phi.apply(&m)) {
                return Err(Error::WitnessInvalid(format!(
                    "φ not linear for generator {}",
                    a.format_elem(g)
                )));
            }
        }
    }
    Ok(())
}

/// φ(F(1)) = 1 and φ([g^p]·m) = g·φ(m) on F_*W̄_n(A), by direct substitution.
pub fn validate_quasi_f_split(wit: &SplittingWitness, w: &WbarSpace<'_>) -> Result<()> {
    let a = w.algebra();
    let phi = &wit.phi;
    if phi.rows != a.dim() || phi.cols != w.dim() {
        return Err(Error::WitnessInvalid("shape mismatch".into()));
    }
    if phi.apply(&w.frobenius_of(&a.one())) != a.one() {
        return Err(Error::WitnessInvalid("φ(F(1)) ≠ 1".into()));
    }
    let ring = w.ring();
    for g in a.generators() {
        let t = ring.teichmuller(&a.frobenius(g));
        for i in 0..w.dim() {
            let moved = w.coord(&ring.mul(&t, w.rep(i))?);
            let mut e = vec![0; w.dim()];
            e[i] = 1;
            if phi.apply(&moved) != a.mul(g, &phi.apply(&e)) {
                return Err(Error::WitnessInvalid(format!(
                    "φ not linear for generator {} at level {}",
                    a.format_elem(g),
                    w.n()
                )));
            }
        }
    }
    Ok(())
}

/// A level-n retraction composed with W̄_{n+1} → W̄_n is a level-(n+1) retraction.
pub fn lift_witness(wit: &SplittingWitness, lower: &WbarSpace<'_>, upper: &WbarSpace<'_>) -> Result<SplittingWitness> {
    let r = upper.truncation_matrix(lower)?;
    let lifted = SplittingWitness {
        kind: SplitKind::QuasiFSplit,
        n: upper.n(),
        phi: wit.phi.compose(&r),
    };
    validate_quasi_f_split(&lifted, upper)?;
    Ok(lifted)
}

/// Least n ≤ n_max with A n-quasi-F-split.
pub fn height_artinian(a: &FiniteAlgebra, n_max: usize) -> Result<HeightReport> {
    let mut report = HeightReport {
        subject: a.name().to_string(),
        method: Method::ArtinianDecision,
        height: Height::Above(n_max as u32),
        n_max,
        bound: None,
        witness: None,
        certificate: None,
        levels: Vec::new(),
        notes: Vec::new(),
    };
    if !a.is_reduced() {
        // [x]^p = [x^p] = 0 for x^p = 0, at every level
        let x = a.frobenius_kernel().remove(0);
        report.height = Height::Infinite;
        report.certificate = Some(NonSplitCertificate::FrobeniusKernel {
            n: 1,
            x_display: a.format_elem(&x),
            x,
        });
        report.notes.push("non-reduced: the Frobenius kernel persists at every level".into());
        return Ok(report);
    }
    for n in 1..=n_max {
        let d = is_quasi_f_split(a, n)?;
        let split = d.is_split();
        report.levels.push(LevelVerdict {
            n,
            split,
            evidence: if split { "witness validated".into() } else { "linear system inconsistent".into() },
        });
        match d {
            Decision::Split { witness } => {
                report.height = Height::Finite(n as u32);
                report.witness = Some(witness);
                return Ok(report);
            }
            Decision::NotSplit { certificate } => report.certificate = Some(certificate),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(vars: &[&str], rels: &[&str], p: u32) -> FiniteAlgebra {
        FiniteAlgebra::from_presentation(vars, rels, p).unwrap()
    }

    #[test]
    fn fields_split() {
        let f4 = FiniteAlgebra::finite_field(2, 2).unwrap();
        assert!(is_f_split(&f4).unwrap().is_split());
        for n in 1..=3 {
            assert!(is_quasi_f_split(&f4, n).unwrap().is_split());
        }
        let r = height_artinian(&f4, 3).unwrap();
        assert_eq!(r.height, Height::Finite(1));
    }

    #[test]
    fn dual_numbers_not_split() {
        let a = alg(&["x"], &["x^2"], 2);
        assert!(matches!(
            is_f_split(&a).unwrap().certificate(),
            Some(NonSplitCertificate::FrobeniusKernel { .. })
        ));
        for n in 1..=3 {
            let d = is_quasi_f_split(&a, n).unwrap();
            assert!(matches!(d.certificate(), Some(NonSplitCertificate::FrobeniusKernel { .. })));
        }
        assert_eq!(height_artinian(&a, 3).unwrap().height, Height::Infinite);
    }

    #[test]
    fn reduced_examples() {
        let a = alg(&["t"], &["t^3 - 1"], 2);
        assert!(is_f_split(&a).unwrap().is_split());
        let b = alg(&["t"], &["t^3 - t"], 3);
        assert_eq!(height_artinian(&b, 3).unwrap().height, Height::Finite(1));
        let c = alg(&["x", "y"], &["x^2", "y^2"], 2);
        assert!(!is_quasi_f_split(&c, 2).unwrap().is_split());
    }

    #[test]
    fn witnesses_lift() {
        let a = alg(&["t"], &["t^3 - 1"], 2);
        let w1 = WbarSpace::new(&a, 1).unwrap();
        let w2 = WbarSpace::new(&a, 2).unwrap();
        let d = is_quasi_f_split_in(&w1).unwrap();
        let lifted = lift_witness(d.witness().unwrap(), &w1, &w2).unwrap();
        assert_eq!(lifted.n, 2);
    }

    #[test]
    fn zero_map_rejected() {
        let f4 = FiniteAlgebra::finite_field(2, 2).unwrap();
        let w = WbarSpace::new(&f4, 2).unwrap();
        let bad = SplittingWitness {
            kind: SplitKind::QuasiFSplit,
            n: 2,
            phi: FpMatrix::zeros(2, 2, w.dim()),
        };
        assert!(validate_quasi_f_split(&bad, &w).is_err());
    }
}
