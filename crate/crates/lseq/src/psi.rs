//! The contraction branches `psi_i` of the unit interval and their
//! compositions.
//!
//! For digits `0 <= i <= L-1` (long branches) `psi_i(x) = gamma*x + i*gamma`
//! on `[0, 1)`; for `L <= i <= L+S-1` (short branches)
//! `psi_i(x) = gamma*x + L*gamma + (i-L)*gamma^2` on `[0, gamma)`. The long
//! branches map onto `[i*gamma, (i+1)*gamma)` and the short ones onto
//! `[L*gamma + (i-L)*gamma^2, L*gamma + (i-L+1)*gamma^2)`, so together they
//! tile `[0, 1)` and a composition `psi_i . psi_j` is defined exactly when
//! `(i, j)` avoids the forbidden pair set.

use num_rational::BigRational;

use crate::digits::ForbiddenSet;
use crate::{Error, LsParams, QGamma, Result};

fn ratio(n: u32) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Exact image `psi_i(x)`, with the branch domain checked exactly.
///
/// A domain violation signals a forbidden composition.
pub fn psi(index: u32, x: &QGamma, params: &LsParams) -> Result<QGamma> {
    let base = params.base();
    if index >= base {
        return Err(Error::DigitOutOfRange { digit: index, base });
    }
    let zero = QGamma::zero(*params);
    let upper = if index < params.l() {
        QGamma::one(*params)
    } else {
        params.gamma()
    };
    if *x < zero || *x >= upper {
        return Err(Error::PsiDomain {
            index,
            value: x.to_f64(),
        });
    }
    let gx = x.mul_gamma();
    let offset = branch_offset(index, params);
    Ok(&gx + &offset)
}

/// The additive part of `psi_i`: `i*gamma` for long branches,
/// `L*gamma + (i-L)*gamma^2` for short ones.
pub fn branch_offset(index: u32, params: &LsParams) -> QGamma {
    let gamma = params.gamma();
    if index < params.l() {
        gamma.scale(&ratio(index))
    } else {
        let gamma2 = gamma.mul_gamma();
        &gamma.scale(&ratio(params.l())) + &gamma2.scale(&ratio(index - params.l()))
    }
}

/// Left endpoint of the branch image (`psi_i` applied to the domain
/// infimum); the images tile `[0, 1)` in index order.
pub fn branch_image_left(index: u32, params: &LsParams) -> QGamma {
    branch_offset(index, params)
}

fn check_tuple(indices: &[u32], params: &LsParams) -> Result<()> {
    let base = params.base();
    let forbidden = ForbiddenSet::new(params);
    for &i in indices {
        if i >= base {
            return Err(Error::DigitOutOfRange { digit: i, base });
        }
    }
    for pair in indices.windows(2) {
        if forbidden.contains(pair[0], pair[1]) {
            return Err(Error::ForbiddenPair {
                lower: pair[0],
                upper: pair[1],
            });
        }
    }
    Ok(())
}

/// `psi_{i_1} . psi_{i_2} . ... . psi_{i_n}(0)` by iterated application
/// (innermost branch first), failing on any forbidden composition.
pub fn compose_iterated(indices: &[u32], params: &LsParams) -> Result<QGamma> {
    let mut x = QGamma::zero(*params);
    for h in (0..indices.len()).rev() {
        x = psi(indices[h], &x, params).map_err(|e| match e {
            // The argument escaped the branch domain, which can only happen
            // through a forbidden pair with the previously applied branch.
            Error::PsiDomain { .. } => Error::ForbiddenPair {
                lower: indices[h],
                upper: indices[h + 1],
            },
            other => other,
        })?;
    }
    Ok(x)
}

/// The same composition by the closed form
/// `sum_k b_k * gamma^k` with `b_k = i_k` for long digits and
/// `b_k = L + (i_k - L)*gamma` for short ones.
pub fn compose_closed_form(indices: &[u32], params: &LsParams) -> Result<QGamma> {
    check_tuple(indices, params)?;
    let mut acc = QGamma::zero(*params);
    let mut power = params.gamma(); // gamma^k, starting at k = 1
    for &i in indices {
        let term = if i < params.l() {
            power.scale(&ratio(i))
        } else {
            let next_power = power.mul_gamma();
            &power.scale(&ratio(params.l())) + &next_power.scale(&ratio(i - params.l()))
        };
        acc = &acc + &term;
        power = power.mul_gamma();
    }
    Ok(acc)
}

/// Evaluates the composition both ways and checks they agree exactly.
pub fn compose_psi(indices: &[u32], params: &LsParams) -> Result<QGamma> {
    let iterated = compose_iterated(indices, params)?;
    let closed = compose_closed_form(indices, params)?;
    assert_eq!(
        iterated, closed,
        "iterated and closed-form composition disagree on {indices:?}"
    );
    Ok(iterated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::is_admissible;
    use crate::digits::DigitString;

    fn params(l: u32, s: u32) -> LsParams {
        LsParams::new(l, s).unwrap()
    }

    #[test]
    fn psi_examples() {
        let pr = params(1, 1);
        let zero = QGamma::zero(pr);
        assert!(psi(0, &zero, &pr).unwrap().is_zero());
        assert_eq!(psi(1, &zero, &pr).unwrap(), pr.gamma());
        // psi_0(psi_1(0)) = gamma^2; (0, 1) is not forbidden.
        let inner = psi(1, &zero, &pr).unwrap();
        assert_eq!(psi(0, &inner, &pr).unwrap(), QGamma::pow_gamma(2, pr));
    }

    #[test]
    fn short_branch_domain_is_checked() {
        let pr = params(1, 1);
        let g = pr.gamma();
        // psi_1 is only defined on [0, gamma).
        assert!(matches!(
            psi(1, &g, &pr),
            Err(Error::PsiDomain { index: 1, .. })
        ));
        assert!(psi(0, &g, &pr).is_ok());
        assert!(matches!(
            psi(5, &QGamma::zero(pr), &pr),
            Err(Error::DigitOutOfRange { .. })
        ));
    }

    #[test]
    fn branch_images_tile_the_unit_interval() {
        for (l, s) in [(1, 1), (2, 1), (1, 3), (3, 2), (2, 0), (4, 0)] {
            let pr = params(l, s);
            // Each branch image must start where the previous one ends; the
            // last must end at exactly 1. Long branches have width gamma,
            // short ones gamma^2.
            let gamma = pr.gamma();
            let gamma2 = gamma.mul_gamma();
            let mut cursor = QGamma::zero(pr);
            for i in 0..pr.base() {
                assert_eq!(branch_image_left(i, &pr), cursor, "({l},{s}) branch {i}");
                let width = if i < l { &gamma } else { &gamma2 };
                cursor = &cursor + width;
            }
            assert_eq!(cursor, QGamma::one(pr));
        }
    }

    #[test]
    fn composition_examples() {
        let pr = params(1, 1);
        assert!(compose_psi(&[0, 0, 0, 0], &pr).unwrap().is_zero());
        assert_eq!(compose_psi(&[0, 1], &pr).unwrap(), QGamma::pow_gamma(2, pr));
        let expected = &pr.gamma() + &QGamma::pow_gamma(3, pr);
        assert_eq!(compose_psi(&[1, 0, 1], &pr).unwrap(), expected);
    }

    #[test]
    fn forbidden_tuple_is_rejected_by_both_routes() {
        let pr = params(1, 1);
        assert!(matches!(
            compose_iterated(&[1, 1], &pr),
            Err(Error::ForbiddenPair { .. })
        ));
        assert!(matches!(
            compose_closed_form(&[1, 1], &pr),
            Err(Error::ForbiddenPair { .. })
        ));
    }

    #[test]
    fn closed_form_equals_iterated_exhaustively() {
        // All admissible tuples of length <= 8 for small bases.
        for (l, s) in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 2), (4, 0)] {
            let pr = params(l, s);
            let base = pr.base() as u128;
            for len in 1..=8u32 {
                if base.pow(len) > 70_000 {
                    break;
                }
                for code in 0..base.pow(len) {
                    let mut digits = Vec::with_capacity(len as usize);
                    let mut rest = code;
                    for _ in 0..len {
                        digits.push((rest % base) as u32);
                        rest /= base;
                    }
                    let admissible =
                        is_admissible(&DigitString::from_raw(digits.clone(), pr.base()), &pr);
                    let iterated = compose_iterated(&digits, &pr);
                    let closed = compose_closed_form(&digits, &pr);
                    if admissible {
                        assert_eq!(iterated.as_ref().unwrap(), closed.as_ref().unwrap());
                    } else {
                        assert!(iterated.is_err() && closed.is_err());
                    }
                }
            }
        }
    }
}
