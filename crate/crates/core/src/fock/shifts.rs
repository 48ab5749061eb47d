use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weights::{commutant_sup, MuSystem, Verdict, WeightSystem};

use super::{GradedOperator, TruncatedFock};

/// Sweep depth used to refuse diverging commutant weights.
const DIVERGENCE_CHECK_DEPTH: usize = 6;

/// Which creation operator to build.
#[derive(Clone, Copy, Debug)]
pub enum ShiftKind<'a> {
    /// `T_i ξ_w = λ_{i,w} ξ_{iw}`.
    Left(&'a WeightSystem),
    /// `S_i ξ_w = μ_{i,w} ξ_{wi}`.
    Right(&'a MuSystem),
    /// `L_i ξ_w = ξ_{iw}`.
    LeftUnweighted,
    /// `R_i ξ_w = ξ_{wi}`.
    RightUnweighted,
}

/// Errors if `mu` is the commutant of a system whose ratio `W(i,w)/W(e,w)`
/// is unbounded.
pub(crate) fn refuse_diverging(mu: &MuSystem) -> Result<()> {
    match mu {
        MuSystem::Commutant(ws) => {
            let depth = ws.table_depth().map_or(DIVERGENCE_CHECK_DEPTH, |d| d.clamp(1, DIVERGENCE_CHECK_DEPTH));
            let c6 = commutant_sup(ws, depth)?;
            if c6.verdict == Verdict::Diverging {
                let cert = c6.certificate.map(|c| {
                    format!(
                        "W({}, w)/W(e, w) grows by a factor {} per repetition of {} in w = {}^m {}",
                        c.letter,
                        c.growth_per_cycle,
                        c.cycle.format(ws.n()),
                        c.cycle.format(ws.n()),
                        c.prefix.format(ws.n())
                    )
                });
                return Err(Error::Precondition {
                    message: "the commutant weights are unbounded".into(),
                    certificate: cert,
                });
            }
            Ok(())
        }
        MuSystem::Explicit(_) => Ok(()),
        MuSystem::Perturbed { base, .. } => refuse_diverging(base),
    }
}

/// The compression of a creation operator for letter `i`. Columns at the top
/// level are zero.
pub fn build_shift(space: &TruncatedFock, kind: ShiftKind<'_>, i: u8) -> Result<GradedOperator> {
    let n = space.n();
    if i == 0 || i as usize > n {
        return Err(Error::domain(format!("letter {i} outside 1..={n}")));
    }
    let depth = space.depth();
    match kind {
        ShiftKind::Left(ws) => {
            if ws.n() != n {
                return Err(Error::domain("weight system and space use different alphabets"));
            }
            ws.ensure_defined_up_to(depth.saturating_sub(1))?;
        }
        ShiftKind::Right(mu) => {
            if mu.n() != n {
                return Err(Error::domain("right weights and space use different alphabets"));
            }
            mu.ensure_defined_up_to(depth.saturating_sub(1))?;
            refuse_diverging(mu)?;
        }
        _ => {}
    }
    let basis = space.basis();
    let one = Complex64::new(1.0, 0.0);
    GradedOperator::from_columns(space, |c| {
        let left = matches!(kind, ShiftKind::Left(_) | ShiftKind::LeftUnweighted);
        let target = if left {
            basis.prepend_index(i, c)
        } else {
            basis.append_index(c, i)
        };
        let Some(r) = target else {
            return Vec::new();
        };
        let value = match kind {
            ShiftKind::Left(ws) => Complex64::new(ws.weight(i, &basis.letters_at(c)), 0.0),
            ShiftKind::Right(mu) => Complex64::new(mu.mu(i, &basis.letters_at(c)), 0.0),
            _ => one,
        };
        vec![(r, value)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn unweighted_left_shift() {
        let sp = TruncatedFock::new(2, 2).unwrap();
        let l1 = build_shift(&sp, ShiftKind::LeftUnweighted, 1).unwrap();
        let col = l1.column(0);
        assert_eq!(col, &[(sp.index_of(&w("1")).unwrap(), Complex64::new(1.0, 0.0))]);
        for c in sp.basis().level_range(2) {
            assert!(l1.column(c).is_empty());
        }
        assert_eq!(l1.bands().into_iter().collect::<Vec<_>>(), vec![-1]);
    }

    #[test]
    fn periodic_left_shift_entry() {
        let ws = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let sp = TruncatedFock::new(2, 3).unwrap();
        let t1 = build_shift(&sp, ShiftKind::Left(&ws), 1).unwrap();
        let r = sp.index_of(&w("11")).unwrap();
        let c = sp.index_of(&w("1")).unwrap();
        assert_eq!(t1.get(r, c).re, 2.0);
    }

    #[test]
    fn right_shift_from_unweighted_is_r() {
        let ws = WeightSystem::unweighted(2).unwrap();
        let sp = TruncatedFock::new(2, 3).unwrap();
        let s2 = build_shift(&sp, ShiftKind::Right(&ws.mu_system()), 2).unwrap();
        let r2 = build_shift(&sp, ShiftKind::RightUnweighted, 2).unwrap();
        assert_eq!(s2, r2);
        let r = sp.index_of(&w("12")).unwrap();
        let c = sp.index_of(&w("1")).unwrap();
        assert_eq!(r2.get(r, c).re, 1.0);
    }

    #[test]
    fn adjoint_of_shift() {
        let ws = WeightSystem::periodic2(1.0, 1.0, 2.0, 2.0, 2.0, 2.0).unwrap();
        let sp = TruncatedFock::new(2, 3).unwrap();
        let t1 = build_shift(&sp, ShiftKind::Left(&ws), 1).unwrap().adjoint();
        assert!(t1.column(0).is_empty());
        let c = sp.index_of(&w("12")).unwrap();
        let r = sp.index_of(&w("2")).unwrap();
        assert_eq!(t1.get(r, c).re, ws.lambda_of(1, &w("2")).unwrap());
    }

    #[test]
    fn refuses_diverging_right_weights() {
        let ws = WeightSystem::two_letter_m(4.0, 1.0).unwrap();
        let sp = TruncatedFock::new(2, 3).unwrap();
        let err = build_shift(&sp, ShiftKind::Right(&ws.mu_system()), 1).unwrap_err();
        assert!(matches!(err, Error::Precondition { certificate: Some(_), .. }));
    }
}
