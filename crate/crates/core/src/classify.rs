use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::system::{is_complete, is_homogeneous, SteinerSystem};

/// One of the four classes of Steiner systems: weak or strong subobjects,
/// unordered or ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassTag {
    pub ordered: bool,
    pub strong: bool,
}

impl ClassTag {
    pub const WEAK: ClassTag = ClassTag {
        ordered: false,
        strong: false,
    };
    pub const WEAK_ORDERED: ClassTag = ClassTag {
        ordered: true,
        strong: false,
    };
    pub const STRONG: ClassTag = ClassTag {
        ordered: false,
        strong: true,
    };
    pub const STRONG_ORDERED: ClassTag = ClassTag {
        ordered: true,
        strong: true,
    };

    pub const ALL: [ClassTag; 4] = [
        ClassTag::WEAK,
        ClassTag::WEAK_ORDERED,
        ClassTag::STRONG,
        ClassTag::STRONG_ORDERED,
    ];
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.strong, self.ordered) {
            (false, false) => "S",
            (false, true) => "S<",
            (true, false) => "S◀",
            (true, true) => "S◀<",
        };
        f.write_str(s)
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    /// Accepts `S`, `S<`, `S◀`, `S◀<`, with `^` or `s` as ASCII stand-ins for `◀`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let ascii = s.trim().replace('◀', "^");
        match ascii.as_str() {
            "S" => Ok(ClassTag::WEAK),
            "S<" => Ok(ClassTag::WEAK_ORDERED),
            "S^" | "Ss" => Ok(ClassTag::STRONG),
            "S^<" | "Ss<" => Ok(ClassTag::STRONG_ORDERED),
            _ => Err(Error::Format(format!("unknown class `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    /// Unordered classes need a homogeneous pattern.
    Homogeneity,
    /// Weak classes with t < r need a complete pattern.
    Completeness,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Homogeneity => f.write_str("unordered class requires F homogeneous"),
            Clause::Completeness => {
                f.write_str("weak class with t < r requires F complete")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyStatus {
    pub class: ClassTag,
    pub has_property: bool,
    pub applied: Vec<Clause>,
    pub failing: Vec<Clause>,
}

impl RamseyStatus {
    pub fn reason(&self) -> String {
        if self.has_property {
            if self.applied.is_empty() {
                format!("{}: no condition applies, every pattern is Ramsey", self.class)
            } else {
                let held: Vec<String> = self.applied.iter().map(|c| c.to_string()).collect();
                format!("{}: satisfied ({})", self.class, held.join("; "))
            }
        } else {
            let failed: Vec<String> = self.failing.iter().map(|c| c.to_string()).collect();
            format!("{}: fails ({})", self.class, failed.join("; "))
        }
    }
}

/// Decides whether `class` has the F-Ramsey property for the pattern `f`.
pub fn f_ramsey_status(class: ClassTag, f: &SteinerSystem) -> RamseyStatus {
    let mut applied = Vec::new();
    let mut failing = Vec::new();
    if !class.ordered {
        applied.push(Clause::Homogeneity);
        if !is_homogeneous(f) {
            failing.push(Clause::Homogeneity);
        }
    }
    if !class.strong && f.t() < f.r() {
        applied.push(Clause::Completeness);
        if !is_complete(f) {
            failing.push(Clause::Completeness);
        }
    }
    RamseyStatus {
        class,
        has_property: failing.is_empty(),
        applied,
        failing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn strong_ordered_always_ramsey() {
        for f in [fixtures::fano(), fixtures::p3(), fixtures::h5()] {
            assert!(f_ramsey_status(ClassTag::STRONG_ORDERED, &f).has_property);
        }
    }

    #[test]
    fn fano_cases() {
        let f = fixtures::fano();
        assert!(f_ramsey_status(ClassTag::WEAK_ORDERED, &f).has_property);
        let s = f_ramsey_status(ClassTag::STRONG, &f);
        assert!(!s.has_property);
        assert_eq!(s.failing, vec![Clause::Homogeneity]);
    }

    #[test]
    fn both_clauses_can_fail() {
        let s = f_ramsey_status(ClassTag::WEAK, &fixtures::h5());
        assert_eq!(s.failing, vec![Clause::Homogeneity, Clause::Completeness]);
        assert!(s.reason().contains("fails"));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for c in ClassTag::ALL {
            assert_eq!(c.to_string().parse::<ClassTag>().unwrap(), c);
        }
        assert_eq!("Ss<".parse::<ClassTag>().unwrap(), ClassTag::STRONG_ORDERED);
        assert!("T".parse::<ClassTag>().is_err());
    }
}
