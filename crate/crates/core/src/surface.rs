use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Homeomorphism type of a closed connected surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurfaceClass {
    orientable: bool,
    euler_char: i64,
}

impl SurfaceClass {
    pub fn new(orientable: bool, euler_char: i64) -> Result<SurfaceClass> {
        if euler_char > 2 || (orientable && euler_char % 2 != 0) || (!orientable && euler_char > 1) {
            return Err(Error::Inconsistent(format!(
                "no closed surface is {} with Euler characteristic {euler_char}",
                if orientable { "orientable" } else { "nonorientable" }
            )));
        }
        Ok(SurfaceClass { orientable, euler_char })
    }

    pub const SPHERE: SurfaceClass = SurfaceClass { orientable: true, euler_char: 2 };
    pub const TORUS: SurfaceClass = SurfaceClass { orientable: true, euler_char: 0 };
    pub const PROJECTIVE_PLANE: SurfaceClass = SurfaceClass { orientable: false, euler_char: 1 };
    pub const KLEIN_BOTTLE: SurfaceClass = SurfaceClass { orientable: false, euler_char: 0 };

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn euler_char(&self) -> i64 {
        self.euler_char
    }

    /// Number of handles `h` with `chi = 2 - 2h`, for orientable surfaces.
    pub fn genus(&self) -> Option<u64> {
        self.orientable.then(|| ((2 - self.euler_char) / 2) as u64)
    }

    /// Number of crosscaps `c` with `chi = 2 - c`, for nonorientable surfaces.
    pub fn crosscaps(&self) -> Option<u64> {
        (!self.orientable).then(|| (2 - self.euler_char) as u64)
    }

    /// First Z2 Betti number of the surface.
    pub fn betti1(&self) -> u64 {
        (2 - self.euler_char) as u64
    }

    pub fn name(&self) -> String {
        match (self.orientable, self.euler_char) {
            (true, 2) => "sphere".into(),
            (true, 0) => "torus".into(),
            (false, 1) => "projective plane".into(),
            (false, 0) => "Klein bottle".into(),
            (true, _) => format!("orientable surface of genus {}", self.genus().unwrap()),
            (false, _) => format!("nonorientable surface with {} crosscaps", self.crosscaps().unwrap()),
        }
    }
}

impl SurfaceClass {
    /// Short code: `S<genus>` or `N<crosscaps>`.
    pub fn code(&self) -> String {
        match (self.genus(), self.crosscaps()) {
            (Some(g), _) => format!("S{g}"),
            (_, Some(c)) => format!("N{c}"),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Serialize)]
struct OrientableJson {
    orientable: bool,
    chi: i64,
    genus: u64,
}

#[derive(Serialize)]
struct NonorientableJson {
    orientable: bool,
    chi: i64,
    crosscaps: u64,
}

impl Serialize for SurfaceClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match (self.genus(), self.crosscaps()) {
            (Some(genus), _) => OrientableJson { orientable: true, chi: self.euler_char, genus }.serialize(s),
            (_, Some(crosscaps)) => {
                NonorientableJson { orientable: false, chi: self.euler_char, crosscaps }.serialize(s)
            }
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let kb = SurfaceClass::new(false, 0).unwrap();
        assert_eq!(kb, SurfaceClass::KLEIN_BOTTLE);
        assert_eq!(kb.crosscaps(), Some(2));
        assert_eq!(kb.genus(), None);
        assert_eq!(SurfaceClass::new(true, -4).unwrap().genus(), Some(3));
        assert_eq!(SurfaceClass::PROJECTIVE_PLANE.betti1(), 1);
    }

    #[test]
    fn impossible_classes() {
        assert!(SurfaceClass::new(true, 1).is_err());
        assert!(SurfaceClass::new(true, 4).is_err());
        assert!(SurfaceClass::new(false, 2).is_err());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&SurfaceClass::TORUS).unwrap();
        assert_eq!(s, r#"{"orientable":true,"chi":0,"genus":1}"#);
        let s = serde_json::to_string(&SurfaceClass::PROJECTIVE_PLANE).unwrap();
        assert_eq!(s, r#"{"orientable":false,"chi":1,"crosscaps":1}"#);
    }
}
