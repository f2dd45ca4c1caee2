//! Per-point evidence and local sharing verdicts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::SymConst;
use crate::expr::Expr;
use crate::laurent::{local_order, LocalOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Vanishing,
    Value,
}

/// Sharing weight: `Finite(0)` is IM, `Infinite` is CM.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weight {
    Finite(u32),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SharingMode {
    pub sense: Sense,
    pub weight: Weight,
}

impl SharingMode {
    pub fn new(sense: Sense, weight: Weight) -> SharingMode {
        SharingMode { sense, weight }
    }

    pub fn im(sense: Sense) -> SharingMode {
        SharingMode::new(sense, Weight::Finite(0))
    }

    pub fn cm(sense: Sense) -> SharingMode {
        SharingMode::new(sense, Weight::Infinite)
    }

    pub fn weighted(sense: Sense, m: u32) -> SharingMode {
        SharingMode::new(sense, Weight::Finite(m))
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Vanishing => "vanishing",
            Sense::Value => "value",
        })
    }
}

impl FromStr for Sense {
    type Err = String;

    fn from_str(s: &str) -> Result<Sense, String> {
        match s {
            "vanishing" => Ok(Sense::Vanishing),
            "value" => Ok(Sense::Value),
            _ => Err(format!("unknown sense `{s}` (expected vanishing or value)")),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(m) => write!(f, "{m}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Weight {
    type Err = String;

    fn from_str(s: &str) -> Result<Weight, String> {
        if s == "inf" {
            return Ok(Weight::Infinite);
        }
        s.parse().map(Weight::Finite).map_err(|_| format!("invalid weight `{s}` (expected an integer or inf)"))
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Weight::Finite(m) => s.serialize_u32(*m),
            Weight::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Weight, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(m) => Ok(Weight::Finite(m)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl fmt::Display for SharingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.sense, self.weight)
    }
}

/// A value on the Riemann sphere.
#[derive(Clone, Debug)]
pub enum SphereValue {
    Finite(SymConst),
    Infinity,
    Unknown,
}

impl SphereValue {
    fn from_order(o: &LocalOrder) -> SphereValue {
        match o {
            LocalOrder::Zero(_) => SphereValue::Finite(SymConst::zero()),
            LocalOrder::Regular(v) => SphereValue::Finite(v.clone()),
            LocalOrder::Pole(_) => SphereValue::Infinity,
            _ => SphereValue::Unknown,
        }
    }
}

impl fmt::Display for SphereValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereValue::Finite(v) => write!(f, "{v}"),
            SphereValue::Infinity => f.write_str("inf"),
            SphereValue::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointClassification {
    pub point: SymConst,
    pub ord_alpha: LocalOrder,
    pub ord_f_minus_alpha: LocalOrder,
    pub ord_g_minus_alpha: LocalOrder,
    /// Orders of `1/f - 1/alpha` and `1/g - 1/alpha`, present at poles of alpha.
    pub ord_recip_f: Option<LocalOrder>,
    pub ord_recip_g: Option<LocalOrder>,
    pub value_f: SphereValue,
    pub value_g: SphereValue,
    pub value_alpha: SphereValue,
}

impl PointClassification {
    /// The same record with the roles of `f` and `g` exchanged.
    pub fn swapped(&self) -> PointClassification {
        PointClassification {
            ord_f_minus_alpha: self.ord_g_minus_alpha.clone(),
            ord_g_minus_alpha: self.ord_f_minus_alpha.clone(),
            ord_recip_f: self.ord_recip_g.clone(),
            ord_recip_g: self.ord_recip_f.clone(),
            value_f: self.value_g.clone(),
            value_g: self.value_f.clone(),
            ..self.clone()
        }
    }
}

fn reciprocal_difference(f: &Expr, alpha: &Expr, z0: &SymConst) -> LocalOrder {
    match (Expr::reciprocal_of(f), Expr::reciprocal_of(alpha)) {
        (Ok(rf), Ok(ra)) => local_order(&Expr::sub(rf, ra), z0),
        _ => LocalOrder::Undecided("reciprocal of the zero function".into()),
    }
}

pub fn classify_point(f: &Expr, g: &Expr, alpha: &Expr, z0: &SymConst) -> PointClassification {
    let ord_alpha = local_order(alpha, z0);
    let ord_f = local_order(f, z0);
    let ord_g = local_order(g, z0);
    let ord_f_minus_alpha = local_order(&Expr::sub(f.clone(), alpha.clone()), z0);
    let ord_g_minus_alpha = local_order(&Expr::sub(g.clone(), alpha.clone()), z0);
    let (ord_recip_f, ord_recip_g) = if ord_alpha.is_pole() {
        (Some(reciprocal_difference(f, alpha, z0)), Some(reciprocal_difference(g, alpha, z0)))
    } else {
        (None, None)
    };
    PointClassification {
        point: z0.clone(),
        value_alpha: SphereValue::from_order(&ord_alpha),
        value_f: SphereValue::from_order(&ord_f),
        value_g: SphereValue::from_order(&ord_g),
        ord_alpha,
        ord_f_minus_alpha,
        ord_g_minus_alpha,
        ord_recip_f,
        ord_recip_g,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalVerdict {
    Shared,
    NotShared,
    Undecided,
}

/// Zero order of a decisive local order, 0 for "no zero".
fn zero_multiplicity(o: &LocalOrder) -> Option<u32> {
    match o {
        LocalOrder::Zero(m) => Some(*m),
        LocalOrder::Regular(_) | LocalOrder::Pole(_) => Some(0),
        LocalOrder::VanishesToDepth(_) | LocalOrder::Undecided(_) => None,
    }
}

/// Whether zero multiplicities `a` and `b` (0 meaning no zero) are
/// compatible under `weight`.
pub fn multiplicities_agree(a: u32, b: u32, weight: Weight) -> bool {
    match weight {
        Weight::Infinite => a == b,
        Weight::Finite(m) => {
            if a <= m || b <= m {
                a == b
            } else {
                true
            }
        }
    }
}

pub fn local_verdict(c: &PointClassification, mode: SharingMode) -> LocalVerdict {
    let pair = match mode.sense {
        Sense::Vanishing => Some((&c.ord_f_minus_alpha, &c.ord_g_minus_alpha)),
        Sense::Value => match &c.ord_alpha {
            LocalOrder::Pole(_) => c.ord_recip_f.as_ref().zip(c.ord_recip_g.as_ref()),
            o if o.is_decisive() => Some((&c.ord_f_minus_alpha, &c.ord_g_minus_alpha)),
            _ => None,
        },
    };
    let Some((a, b)) = pair else {
        return LocalVerdict::Undecided;
    };
    match (zero_multiplicity(a), zero_multiplicity(b)) {
        (Some(a), Some(b)) if multiplicities_agree(a, b, mode.weight) => LocalVerdict::Shared,
        (Some(_), Some(_)) => LocalVerdict::NotShared,
        _ => LocalVerdict::Undecided,
    }
}
