//! JSON descriptors for systems, pseudo-orbits and conjugacies.
//!
//! Rationals are strings (`"13/21"`, `"0.001"`, `"2"`). Enclosed parameters
//! are `{"enclosure": [lo, hi], "shift": s}`; two enclosures with the same
//! bounds denote the same unknown number.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homogeneity::Homeomorphism;
use crate::ifs::{IFSystem, MapKind, MapSpec, Param, PseudoOrbit};
use crate::pl::PlLift;
use crate::rational::{format_rat, parse_rat, Rat};
use crate::space::{Point, SpaceDescriptor, SpaceKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamJson {
    Exact(String),
    Enclosed {
        enclosure: [String; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shift: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MapJson {
    Affine { id: String, slope: String, offset: ParamJson },
    Rotation { id: String, angle: ParamJson },
    Pl { id: String, knots: Vec<[String; 2]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub space: SpaceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<String>,
    pub maps: Vec<MapJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Exact(String),
    Enclosure { enclosure: [String; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudoOrbitJson {
    pub delta: String,
    pub points: Vec<PointJson>,
    #[serde(default)]
    pub index_offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugacyJson {
    pub space: SpaceKind,
    pub breakpoints: Vec<[String; 2]>,
}

fn field(name: &str, s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

fn param(name: &str, p: &ParamJson) -> Result<Param> {
    match p {
        ParamJson::Exact(s) => Ok(Param::Exact(field(name, s)?)),
        ParamJson::Enclosed { enclosure: [lo, hi], shift } => {
            let lo = field(&format!("{name}.enclosure[0]"), lo)?;
            let hi = field(&format!("{name}.enclosure[1]"), hi)?;
            let base = Param::enclosed(lo, hi).map_err(|_| Error::Parse(format!("{name}.enclosure: lo > hi")))?;
            match shift {
                Some(s) => Ok(base.plus(&field(&format!("{name}.shift"), s)?)),
                None => Ok(base),
            }
        }
    }
}

fn param_json(p: &Param) -> ParamJson {
    match p {
        Param::Exact(v) => ParamJson::Exact(format_rat(v)),
        Param::Enclosed { lo, hi, shift } => ParamJson::Enclosed {
            enclosure: [format_rat(lo), format_rat(hi)],
            shift: (!num_traits::Zero::is_zero(shift)).then(|| format_rat(shift)),
        },
    }
}

fn knots(name: &str, ks: &[[String; 2]]) -> Result<Vec<(Rat, Rat)>> {
    ks.iter()
        .enumerate()
        .map(|(i, [x, y])| Ok((field(&format!("{name}[{i}][0]"), x)?, field(&format!("{name}[{i}][1]"), y)?)))
        .collect()
}

fn knots_json(ks: &[(Rat, Rat)]) -> Vec<[String; 2]> {
    ks.iter().map(|(x, y)| [format_rat(x), format_rat(y)]).collect()
}

impl SystemJson {
    pub fn build(&self) -> Result<IFSystem> {
        let kind = self.space;
        let mut alphabet = Vec::with_capacity(self.maps.len());
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, m) in self.maps.iter().enumerate() {
            let at = |f: &str| format!("maps[{i}].{f}");
            let (id, spec) = match m {
                MapJson::Affine { id, slope, offset } => {
                    (id, MapSpec::affine(kind, field(&at("slope"), slope)?, param(&at("offset"), offset)?))
                }
                MapJson::Rotation { id, angle } => {
                    if kind != SpaceKind::Circle {
                        return Err(Error::Parse(format!("{}: rotations live on the circle", at("kind"))));
                    }
                    (id, Ok(MapSpec::rotation(param(&at("angle"), angle)?)))
                }
                MapJson::Pl { id, knots: ks } => {
                    (id, PlLift::new(kind, knots(&at("knots"), ks)?).map(MapSpec::piecewise_linear))
                }
            };
            alphabet.push(id.clone());
            maps.push(spec.map_err(|e| Error::InvalidMap(format!("maps[{i}] ({id}): {e}")))?);
        }
        let space = match &self.resolution {
            Some(r) => SpaceDescriptor::new(kind, field("resolution", r)?)?,
            None => match kind {
                SpaceKind::Circle => SpaceDescriptor::circle(),
                SpaceKind::Interval => SpaceDescriptor::interval(),
            },
        };
        IFSystem::new(space, alphabet, maps)
    }

    /// Descriptor of a system whose maps are single affine or PL stages.
    pub fn describe(system: &IFSystem) -> Result<SystemJson> {
        let maps = system
            .maps()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let id = system.symbol_id(i).to_string();
                match m.kind() {
                    MapKind::Affine { slope, offset } => Ok(MapJson::Affine { id, slope: format_rat(slope), offset: param_json(offset) }),
                    _ => match m.as_pl() {
                        Some(f) => Ok(MapJson::Pl { id, knots: knots_json(f.knots()) }),
                        None => Err(Error::InvalidMap(format!("map {id} has no single-stage descriptor"))),
                    },
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SystemJson { space: system.kind(), resolution: Some(format_rat(&system.space().resolution)), maps })
    }
}

impl PseudoOrbitJson {
    pub fn points(&self, kind: SpaceKind) -> Result<Vec<Point>> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let name = format!("points[{i}]");
                match p {
                    PointJson::Exact(s) => Point::on(kind, field(&name, s)?),
                    PointJson::Enclosure { enclosure: [lo, hi] } => {
                        Point::enclosure(kind, field(&format!("{name}.enclosure[0]"), lo)?, field(&format!("{name}.enclosure[1]"), hi)?)
                    }
                }
                .map_err(|e| Error::Parse(format!("{name}: {e}")))
            })
            .collect()
    }

    pub fn build(&self, system: &IFSystem) -> Result<PseudoOrbit> {
        let delta = field("delta", &self.delta)?;
        let mut p = PseudoOrbit::new(system, self.points(system.kind())?, delta)?;
        p.index_offset = self.index_offset;
        Ok(p)
    }

    pub fn describe(p: &PseudoOrbit) -> PseudoOrbitJson {
        let points = p
            .points
            .iter()
            .map(|x| match x.value() {
                Some(v) => PointJson::Exact(format_rat(v)),
                None => PointJson::Enclosure { enclosure: [format_rat(x.lo()), format_rat(x.hi())] },
            })
            .collect();
        PseudoOrbitJson { delta: format_rat(&p.delta), points, index_offset: p.index_offset }
    }
}

impl ConjugacyJson {
    /// Rejects breakpoint lists that are not strictly monotone.
    pub fn build(&self) -> Result<Homeomorphism> {
        Homeomorphism::from_knots(self.space, knots("breakpoints", &self.breakpoints)?)
    }

    pub fn describe(h: &Homeomorphism) -> ConjugacyJson {
        ConjugacyJson { space: h.kind(), breakpoints: knots_json(h.breakpoints()) }
    }
}

fn from_str<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_system(text: &str) -> Result<IFSystem> {
    from_str::<SystemJson>("system descriptor", text)?.build()
}

pub fn parse_pseudo_orbit(text: &str, system: &IFSystem) -> Result<PseudoOrbit> {
    from_str::<PseudoOrbitJson>("pseudo-orbit", text)?.build(system)
}

pub fn parse_conjugacy(text: &str) -> Result<Homeomorphism> {
    from_str::<ConjugacyJson>("conjugacy descriptor", text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::systems;

    #[test]
    fn example_descriptor_parses() {
        let text = r#"{"space": "circle", "maps": [
            {"id": "1", "kind": "affine", "slope": "1/1", "offset": {"enclosure": ["6180339887/10000000000", "6180339888/10000000000"]}},
            {"id": "2", "kind": "rotation", "angle": {"enclosure": ["6180339887/10000000000", "6180339888/10000000000"], "shift": "1/2"}}
        ]}"#;
        let sys = parse_system(text).unwrap();
        let (a, b) = (sys.maps()[0].as_rotation().unwrap(), sys.maps()[1].as_rotation().unwrap());
        assert_eq!(a.exact_difference(&b).map(|d| crate::rational::frac(&d)), Some(rat(1, 2)));
        assert_eq!(sys.alphabet(), &["1".to_string(), "2".to_string()]);
    }

    #[test]
    fn errors_name_the_field() {
        let err = parse_system(r#"{"space": "circle", "maps": [{"id": "a", "kind": "affine", "slope": "x", "offset": "0"}]}"#).unwrap_err();
        assert!(err.to_string().contains("maps[0].slope"), "{err}");
        let err = parse_system(r#"{"space": "circle"}"#).unwrap_err();
        assert!(err.to_string().contains("maps"), "{err}");
    }

    #[test]
    fn system_round_trip() {
        for sys in [systems::cantor(), systems::doubling_pair(), systems::golden_rotations().unwrap()] {
            let json = serde_json::to_string(&SystemJson::describe(&sys).unwrap()).unwrap();
            assert_eq!(parse_system(&json).unwrap(), sys);
        }
    }

    #[test]
    fn pseudo_orbit_round_trip() {
        let sys = systems::doubling();
        let text = r#"{"delta": "1/100", "points": ["1/3", "2/3", {"enclosure": ["1/3", "34/100"]}]}"#;
        let p = parse_pseudo_orbit(text, &sys).unwrap();
        assert_eq!(p.witness, vec![0, 0]);
        let again = serde_json::to_string(&PseudoOrbitJson::describe(&p)).unwrap();
        assert_eq!(parse_pseudo_orbit(&again, &sys).unwrap(), p);
    }

    #[test]
    fn non_monotone_conjugacy_is_refused() {
        let text = r#"{"space": "interval", "breakpoints": [["0", "0"], ["1/2", "3/4"], ["3/4", "1/2"], ["1", "1"]]}"#;
        assert!(parse_conjugacy(text).is_err());
        let ok = r#"{"space": "interval", "breakpoints": [["0", "0"], ["1/2", "1/4"], ["1", "1"]]}"#;
        assert_eq!(parse_conjugacy(ok).unwrap().apply(&rat(1, 2)), rat(1, 4));
    }
}
