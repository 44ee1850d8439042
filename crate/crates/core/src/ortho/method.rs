use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Mgs,
    Cgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Naive,
    /// High accuracy: one sequential application per column.
    Ha,
    /// High performance: one block application up front.
    Hp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// Left-looking: column `j` is fully projected, then normalized.
    Col,
    /// Right-looking: column `i` is normalized, then removed from the rest.
    Row,
}

/// A factorization method. Textual form is `{mgs|cgs}-{naive|ha|hp}-{col|row}`
/// or `cholqr`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Gs {
        family: Family,
        variant: Variant,
        orientation: Orientation,
    },
    CholeskyQr,
}

impl Method {
    pub const fn gs(family: Family, variant: Variant, orientation: Orientation) -> Self {
        Method::Gs {
            family,
            variant,
            orientation,
        }
    }

    pub const MGS_NAIVE: Method = Method::gs(Family::Mgs, Variant::Naive, Orientation::Col);
    pub const MGS_HA: Method = Method::gs(Family::Mgs, Variant::Ha, Orientation::Col);
    pub const MGS_HP: Method = Method::gs(Family::Mgs, Variant::Hp, Orientation::Col);
    pub const CGS_NAIVE: Method = Method::gs(Family::Cgs, Variant::Naive, Orientation::Col);
    pub const CGS_HA: Method = Method::gs(Family::Cgs, Variant::Ha, Orientation::Col);
    pub const CGS_HP: Method = Method::gs(Family::Cgs, Variant::Hp, Orientation::Col);

    /// The seven column-oriented methods used by the accuracy sweeps.
    pub fn standard_set() -> Vec<Method> {
        vec![
            Self::MGS_NAIVE,
            Self::MGS_HA,
            Self::MGS_HP,
            Self::CGS_NAIVE,
            Self::CGS_HA,
            Self::CGS_HP,
            Method::CholeskyQr,
        ]
    }

    /// All twelve Gram-Schmidt combinations plus Cholesky QR.
    pub fn all() -> Vec<Method> {
        let mut v = Vec::with_capacity(13);
        for family in [Family::Mgs, Family::Cgs] {
            for variant in [Variant::Naive, Variant::Ha, Variant::Hp] {
                for orientation in [Orientation::Col, Orientation::Row] {
                    v.push(Method::gs(family, variant, orientation));
                }
            }
        }
        v.push(Method::CholeskyQr);
        v
    }

    /// Operator applications this method performs on an `n`-column input.
    pub fn expected_mv_count(&self, n: usize) -> u64 {
        match self {
            Method::Gs {
                variant: Variant::Naive,
                ..
            } => 2 * n as u64,
            _ => n as u64,
        }
    }

    /// Flop model: `2mn²` for naive and HA, `3mn²` for HP (the extra
    /// x-recurrence), `3mn² + n³/3` for Cholesky QR (Gram matrix, triangular
    /// solve, factorization).
    pub fn flop_model(&self, m: usize, n: usize) -> u64 {
        let (m, n) = (m as u64, n as u64);
        match self {
            Method::Gs {
                variant: Variant::Hp,
                ..
            } => 3 * m * n * n,
            Method::Gs { .. } => 2 * m * n * n,
            Method::CholeskyQr => 3 * m * n * n + n * n * n / 3,
        }
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            Method::Gs { family, .. } => Some(*family),
            Method::CholeskyQr => None,
        }
    }

    pub fn variant(&self) -> Option<Variant> {
        match self {
            Method::Gs { variant, .. } => Some(*variant),
            Method::CholeskyQr => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::CholeskyQr => f.write_str("cholqr"),
            Method::Gs {
                family,
                variant,
                orientation,
            } => {
                let fam = match family {
                    Family::Mgs => "mgs",
                    Family::Cgs => "cgs",
                };
                let var = match variant {
                    Variant::Naive => "naive",
                    Variant::Ha => "ha",
                    Variant::Hp => "hp",
                };
                let ori = match orientation {
                    Orientation::Col => "col",
                    Orientation::Row => "row",
                };
                write!(f, "{fam}-{var}-{ori}")
            }
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidArgument(format!("unknown method `{s}`"));
        let lower = s.trim().to_ascii_lowercase();
        if lower == "cholqr" {
            return Ok(Method::CholeskyQr);
        }
        let parts: Vec<&str> = lower.split('-').collect();
        let [fam, var, ori] = parts[..] else {
            return Err(bad());
        };
        let family = match fam {
            "mgs" => Family::Mgs,
            "cgs" => Family::Cgs,
            _ => return Err(bad()),
        };
        let variant = match var {
            "naive" => Variant::Naive,
            "ha" => Variant::Ha,
            "hp" => Variant::Hp,
            _ => return Err(bad()),
        };
        let orientation = match ori {
            "col" => Orientation::Col,
            "row" => Orientation::Row,
            _ => return Err(bad()),
        };
        Ok(Method::gs(family, variant, orientation))
    }
}

/// Parses a comma-separated method list. `all` expands to the standard
/// seven-method set and `every` to all thirteen methods.
pub fn parse_method_list(s: &str) -> Result<Vec<Method>, Error> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok {
            "all" => out.extend(Method::standard_set()),
            "every" => out.extend(Method::all()),
            t => out.push(t.parse()?),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("empty method list".into()));
    }
    Ok(out)
}
