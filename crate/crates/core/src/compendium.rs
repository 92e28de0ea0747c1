//! Named function families with exact constructors, plus a registry that can
//! absorb functions discovered by the search.

use crate::pwl::{self, make_pwl, Breakpoint, PwlFunction};
use crate::rational::{floor_int, format_rational, frac, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompendiumError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("unknown family or entry `{0}`")]
    UnknownName(String),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("compendium io: {0}")]
    Io(String),
    #[error("stored `{0}` failed its recorded verdict on reload")]
    VerdictDrift(String),
}

pub type Params = BTreeMap<String, Rational>;

/// The identity function, the unique strictly increasing extreme function.
pub fn identity() -> PwlFunction {
    pwl::identity()
}

/// The Burdett-Johnson family: floor(C*x) plus a linear correction on the
/// upper part of each cell, normalized by floor(C). Continuous, two slopes
/// (0 and C/((1-frac(C))*floor(C))), breakpoints at k/C and (k+frac(C))/C.
pub fn phi_bj_1(c: &Rational) -> Result<PwlFunction, CompendiumError> {
    if *c <= Rational::one() || c.is_integer() {
        return Err(CompendiumError::BadParameter(format!(
            "need C > 1 and C not an integer, got {}",
            format_rational(c)
        )));
    }
    let n = Rational::from_integer(floor_int(c));
    let f = frac(c);
    let mut points: Vec<(Rational, Rational)> = vec![(Rational::zero(), Rational::zero())];
    let mut k = Rational::zero();
    while k <= n {
        points.push(((&k + &f) / c, &k / &n));
        if k >= Rational::one() {
            points.push((&k / c, &k / &n));
        }
        k += Rational::one();
    }
    points.sort();
    points.dedup();
    make_pwl(
        points
            .into_iter()
            .map(|(x, v)| Breakpoint::continuous(x, v))
            .collect(),
    )
    .map_err(|e| CompendiumError::BadParameter(e.to_string()))
}

pub struct FamilyEntry {
    pub name: &'static str,
    pub parameter_spec: &'static str,
    pub provenance: &'static str,
    constructor: fn(&Params) -> Result<PwlFunction, CompendiumError>,
}

impl FamilyEntry {
    pub fn construct(&self, params: &Params) -> Result<PwlFunction, CompendiumError> {
        (self.constructor)(params)
    }
}

fn require<'a>(params: &'a Params, key: &str) -> Result<&'a Rational, CompendiumError> {
    params
        .get(key)
        .ok_or_else(|| CompendiumError::MissingParameter(key.to_owned()))
}

/// Registry of the built-in families; search results are registered as
/// stored functions alongside them.
pub struct Registry {
    families: Vec<FamilyEntry>,
    stored: BTreeMap<String, (PwlFunction, String)>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry {
            families: vec![
                FamilyEntry {
                    name: "identity",
                    parameter_spec: "none",
                    provenance: "builtin",
                    constructor: |_| Ok(identity()),
                },
                FamilyEntry {
                    name: "phi_bj_1",
                    parameter_spec: "C: rational, C > 1, C not an integer",
                    provenance: "builtin",
                    constructor: |p| phi_bj_1(require(p, "C")?),
                },
            ],
            stored: BTreeMap::new(),
        }
    }
}

impl Registry {
    pub fn list(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.families.iter().map(|f| f.name).collect();
        names.extend(self.stored.keys().map(String::as_str));
        names
    }

    pub fn get(&self, name: &str, params: &Params) -> Result<PwlFunction, CompendiumError> {
        if let Some(fam) = self.families.iter().find(|f| f.name == name) {
            return fam.construct(params);
        }
        if let Some((f, _)) = self.stored.get(name) {
            return Ok(f.clone());
        }
        Err(CompendiumError::UnknownName(name.to_owned()))
    }

    pub fn register(&mut self, name: String, f: PwlFunction, provenance: String) {
        self.stored.insert(name, (f, provenance));
    }

    pub fn stored_provenance(&self, name: &str) -> Option<&str> {
        self.stored.get(name).map(|(_, p)| p.as_str())
    }
}

// ---------------------------------------------------------------------------
// On-disk compendium: one dff-pwl-v1 file per entry plus a manifest.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub parameters: BTreeMap<String, String>,
    pub provenance: String,
    pub maximal: bool,
    /// "extreme", "not_extreme", "inconclusive", or "unknown".
    pub extremality: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub entries: Vec<ManifestEntry>,
}

pub const MANIFEST_FORMAT: &str = "dff-compendium-v1";

pub fn write_compendium(
    dir: &std::path::Path,
    entries: &[(ManifestEntry, PwlFunction)],
) -> Result<(), CompendiumError> {
    let io_err = |e: std::io::Error| CompendiumError::Io(e.to_string());
    std::fs::create_dir_all(dir).map_err(io_err)?;
    for (meta, f) in entries {
        std::fs::write(dir.join(&meta.file), pwl::to_json(f)).map_err(io_err)?;
    }
    let manifest = Manifest {
        format: MANIFEST_FORMAT.to_owned(),
        entries: entries.iter().map(|(m, _)| m.clone()).collect(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("serialization cannot fail");
    std::fs::write(dir.join("manifest.json"), json).map_err(io_err)?;
    Ok(())
}

/// Loads a compendium directory. Entries recorded as extreme are re-verified
/// to guard against format drift.
pub fn load_compendium(
    dir: &std::path::Path,
) -> Result<Vec<(ManifestEntry, PwlFunction)>, CompendiumError> {
    let io_err = |e: std::io::Error| CompendiumError::Io(e.to_string());
    let manifest: Manifest = serde_json::from_str(
        &std::fs::read_to_string(dir.join("manifest.json")).map_err(io_err)?,
    )
    .map_err(|e| CompendiumError::Io(e.to_string()))?;
    if manifest.format != MANIFEST_FORMAT {
        return Err(CompendiumError::Io(format!(
            "unexpected manifest format {}",
            manifest.format
        )));
    }
    let mut out = Vec::new();
    for meta in manifest.entries {
        let text = std::fs::read_to_string(dir.join(&meta.file)).map_err(io_err)?;
        let f = pwl::from_json(&text).map_err(|e| CompendiumError::Io(e.to_string()))?;
        if meta.extremality == "extreme" {
            let verdict = crate::extremality::extremality_test(&f)
                .map_err(|e| CompendiumError::Io(e.to_string()))?;
            if !matches!(verdict.status, crate::extremality::Status::Extreme) {
                return Err(CompendiumError::VerdictDrift(meta.name.clone()));
            }
        }
        if meta.maximal && !crate::maximality::maximality_test(&f).is_maximal {
            return Err(CompendiumError::VerdictDrift(meta.name.clone()));
        }
        out.push((meta, f));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn phi_bj_1_at_five_halves() {
        let f = phi_bj_1(&rat(5, 2)).unwrap();
        assert_eq!(
            f.grid_values(5).unwrap(),
            vec![int(0), int(0), rat(1, 2), rat(1, 2), int(1), int(1)]
        );
        assert_eq!(f.evaluate(&rat(3, 10)).unwrap(), rat(1, 4));
        assert_eq!(f.evaluate(&int(1)).unwrap(), int(1));
        assert_eq!(f.distinct_slope_count(), 2);
    }

    #[test]
    fn phi_bj_1_at_three_halves() {
        let f = phi_bj_1(&rat(3, 2)).unwrap();
        assert_eq!(f.breakpoint_xs(), vec![int(0), rat(1, 3), rat(2, 3), int(1)]);
        assert_eq!(f.evaluate(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(f.slopes(), vec![int(0), int(3), int(0)]);
        // Symmetry at breakpoints, forced by maximality.
        for x in f.breakpoint_xs() {
            let sum = f.evaluate(&x).unwrap() + f.evaluate(&(int(1) - &x)).unwrap();
            assert_eq!(sum, int(1));
        }
    }

    #[test]
    fn phi_bj_1_rejects_bad_parameters() {
        assert!(phi_bj_1(&int(2)).is_err());
        assert!(phi_bj_1(&rat(1, 2)).is_err());
        assert!(phi_bj_1(&int(1)).is_err());
    }

    #[test]
    fn registry_lists_and_constructs() {
        let mut reg = Registry::default();
        assert!(reg.list().contains(&"identity"));
        assert!(reg.list().contains(&"phi_bj_1"));
        let mut params = Params::new();
        params.insert("C".to_owned(), rat(5, 2));
        let f = reg.get("phi_bj_1", &params).unwrap();
        assert_eq!(f, phi_bj_1(&rat(5, 2)).unwrap());
        assert!(matches!(
            reg.get("nope", &params),
            Err(CompendiumError::UnknownName(_))
        ));
        assert!(matches!(
            reg.get("phi_bj_1", &Params::new()),
            Err(CompendiumError::MissingParameter(_))
        ));

        reg.register("search:q=5,vertex=1".into(), identity(), "search:q=5,vertex=1".into());
        let got = reg.get("search:q=5,vertex=1", &Params::new()).unwrap();
        assert_eq!(got, identity());
    }
}
