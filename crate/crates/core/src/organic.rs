//! Organic and weakly organic theorems.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formula::{is_tautology_tableau, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Organicity {
    pub organic: bool,
    pub weakly_organic: bool,
}

impl Organicity {
    /// Organic or weakly organic.
    pub fn at_least_weakly(&self) -> bool {
        self.organic || self.weakly_organic
    }
}

/// No strict subterm of `f` is a tautology.
pub fn is_organic(f: &Formula) -> Result<bool> {
    for s in f.subterms().into_iter().skip(1) {
        if matches!(s, Formula::Imp(..)) && is_tautology_tableau(s) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f` is organic; or `f = C p t` with a variable `p` not in `t`, `t`
/// organic, and `f` itself not organic.
pub fn organicity(f: &Formula) -> Result<Organicity> {
    let organic = is_organic(f)?;
    let weakly_organic = !organic
        && match f {
            Formula::Imp(a, t) => match a.as_ref() {
                Formula::Var(v) => !t.contains_var(v) && is_organic(t)?,
                _ => false,
            },
            _ => false,
        };
    Ok(Organicity { organic, weakly_organic })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Organicity {
        organicity(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn table_examples() {
        assert_eq!(o("CCCpqrCCrpCsp"), Organicity { organic: true, weakly_organic: false });
        // Row 4 of the MER property table (D31).
        assert_eq!(o("CpCCpqCrq"), Organicity { organic: true, weakly_organic: false });
        assert_eq!(o("CCpCqrCCCpsrCqr"), Organicity { organic: true, weakly_organic: false });
        assert_eq!(o("CpCqp"), Organicity { organic: true, weakly_organic: false });
        assert_eq!(o("CpCqCrq"), Organicity { organic: false, weakly_organic: true });
        assert_eq!(o("CCpCqqCrr"), Organicity { organic: false, weakly_organic: false });
    }
}
