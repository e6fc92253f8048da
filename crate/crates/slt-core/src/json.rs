//! JSON interchange formats.
//!
//! - Scalars serialize as rational literals `"±p/q"` (`/q` omitted when 1);
//!   Gaussian rationals as `{"re": "p/q", "im": "r/s"}`. Bare JSON
//!   integers are accepted on input; floats are rejected — nothing in
//!   this toolkit rounds.
//! - Matrices are row-major arrays of literal arrays.
//! - A subspace is `{"dim": n, "basis": [[...vector...], ...]}` where each
//!   inner array is one basis vector's coordinates.
//! - A lattice literal is `{"dim": n, "elements": [{"basis": ...}, ...]}`;
//!   the alternative `{"dim": n, "generators": [...]}` form triggers
//!   closure on load.
//! - An operator space is `{"dim": n, "basis": [matrix, ...]}`; an atom
//!   map is `{"atoms": [subspace, ...], "values": [subspace, ...]}`.

use crate::error::{Error, Result};
use crate::lattice::ProjectionLattice;
use crate::matrix::Matrix;
use crate::opalg::OperatorSpace;
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;
use crate::tensor::AtomMap;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_real() {
            serializer.serialize_str(&self.rational_literal())
        } else {
            let mut map = serializer.serialize_map(Some(2))?;
            map.serialize_entry("re", &self.rational_literal())?;
            map.serialize_entry("im", &self.im_literal())?;
            map.end()
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational literal \"p/q\", an integer, or {\"re\", \"im\"}")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        Scalar::parse_rational(v).map_err(|e| E::custom(e.to_string()))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        i64::try_from(v)
            .map(Scalar::from_int)
            .map_err(|_| E::custom("integer too large"))
    }

    fn visit_f64<E: de::Error>(self, _: f64) -> std::result::Result<Scalar, E> {
        Err(E::custom(
            "floating point literals are not accepted; use \"p/q\"",
        ))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Scalar, A::Error> {
        let mut re: Option<String> = None;
        let mut im: Option<String> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "re" => re = Some(map.next_value()?),
                "im" => im = Some(map.next_value()?),
                other => return Err(de::Error::custom(format!("unexpected key `{other}`"))),
            }
        }
        let parse = |s: Option<String>| -> std::result::Result<Scalar, A::Error> {
            match s {
                Some(s) => Scalar::parse_rational(&s).map_err(|e| de::Error::custom(e.to_string())),
                None => Ok(Scalar::zero()),
            }
        };
        let re = parse(re)?;
        let im = parse(im)?;
        Ok(Scalar::new(re.re().clone(), im.re().clone()))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows()))?;
        for i in 0..self.rows() {
            seq.serialize_element(&self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Matrix, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(deserializer)?;
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(de::Error::custom("matrix rows have unequal lengths"));
        }
        Ok(Matrix::from_rows(rows))
    }
}

/// Basis-only payload shared by subspace and lattice element encodings.
#[derive(Serialize, Deserialize)]
struct BasisJson {
    basis: Vec<Vec<Scalar>>,
}

fn basis_vectors(s: &Subspace) -> Vec<Vec<Scalar>> {
    (0..s.dim()).map(|j| s.basis().column(j)).collect()
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("dim", &self.ambient_dim())?;
        map.serialize_entry("basis", &basis_vectors(self))?;
        map.end()
    }
}

#[derive(Deserialize)]
struct SubspaceJson {
    dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Subspace, D::Error> {
        let raw = SubspaceJson::deserialize(deserializer)?;
        Subspace::from_vectors(raw.dim, &raw.basis).map_err(|e| de::Error::custom(e.to_string()))
    }
}

impl Serialize for ProjectionLattice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let elements: Vec<BasisJson> = self
            .elements()
            .iter()
            .map(|s| BasisJson {
                basis: basis_vectors(s),
            })
            .collect();
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("dim", &self.ambient_dim())?;
        map.serialize_entry("elements", &elements)?;
        map.end()
    }
}

#[derive(Deserialize)]
struct LatticeJson {
    dim: usize,
    #[serde(default)]
    elements: Option<Vec<BasisJson>>,
    #[serde(default)]
    generators: Option<Vec<BasisJson>>,
}

/// Loads a lattice literal. The `elements` form is validated as given;
/// the `generators` form runs the closure engine with `cap`.
pub fn lattice_from_value(value: &serde_json::Value, cap: usize) -> Result<ProjectionLattice> {
    let raw: LatticeJson = serde_json::from_value(value.clone())?;
    let to_subspaces = |items: Vec<BasisJson>| -> Result<Vec<Subspace>> {
        items
            .into_iter()
            .map(|b| Subspace::from_vectors(raw.dim, &b.basis))
            .collect()
    };
    match (raw.elements, raw.generators) {
        (Some(elements), None) => {
            ProjectionLattice::from_elements(raw.dim, to_subspaces(elements)?)
        }
        (None, Some(generators)) => {
            ProjectionLattice::closure(raw.dim, &to_subspaces(generators)?, cap)
        }
        _ => Err(Error::invalid(
            "lattice literal needs exactly one of `elements` or `generators`",
        )),
    }
}

pub fn lattice_from_str(s: &str, cap: usize) -> Result<ProjectionLattice> {
    lattice_from_value(&serde_json::from_str(s)?, cap)
}

impl Serialize for OperatorSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("dim", &self.ambient_dim())?;
        map.serialize_entry("basis", &self.basis())?;
        map.end()
    }
}

#[derive(Deserialize)]
struct OperatorSpaceJson {
    dim: usize,
    basis: Vec<Matrix>,
    #[serde(default)]
    is_algebra: bool,
}

impl<'de> Deserialize<'de> for OperatorSpace {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<OperatorSpace, D::Error> {
        let raw = OperatorSpaceJson::deserialize(deserializer)?;
        for m in &raw.basis {
            if m.rows() != raw.dim || m.cols() != raw.dim {
                return Err(de::Error::custom("basis matrix shape does not match dim"));
            }
        }
        Ok(OperatorSpace::from_spanning(
            raw.dim,
            &raw.basis,
            raw.is_algebra,
        ))
    }
}

impl Serialize for AtomMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("atoms", self.atoms())?;
        map.serialize_entry("values", self.values())?;
        map.end()
    }
}

#[derive(Deserialize)]
struct AtomMapJson {
    atoms: Vec<Subspace>,
    values: Vec<Subspace>,
}

impl<'de> Deserialize<'de> for AtomMap {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<AtomMap, D::Error> {
        let raw = AtomMapJson::deserialize(deserializer)?;
        let k_dim = raw.values.first().map_or(0, Subspace::ambient_dim);
        AtomMap::new(k_dim, raw.atoms, raw.values).map_err(|e| de::Error::custom(e.to_string()))
    }
}

/// Rejects Gaussian entries when the declared field is Q.
pub fn enforce_field_subspace(s: &Subspace, field: Field) -> Result<()> {
    if field == Field::Rational && s.has_gaussian_entries() {
        return Err(Error::invalid(
            "input contains Gaussian entries but the field is Q (use --field Qi)",
        ));
    }
    Ok(())
}

pub fn enforce_field_lattice(lat: &ProjectionLattice, field: Field) -> Result<()> {
    for s in lat.elements() {
        enforce_field_subspace(s, field)?;
    }
    Ok(())
}

pub fn enforce_field_atom_map(f: &AtomMap, field: Field) -> Result<()> {
    for s in f.atoms().iter().chain(f.values()) {
        enforce_field_subspace(s, field)?;
    }
    Ok(())
}

pub fn enforce_field_scalars(values: &[Scalar], field: Field) -> Result<()> {
    if field == Field::Rational && values.iter().any(|v| !v.is_real()) {
        return Err(Error::invalid(
            "input contains Gaussian entries but the field is Q (use --field Qi)",
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_literal_forms() {
        let j = serde_json::to_string(&Scalar::from_ratio(-3, 4)).unwrap();
        assert_eq!(j, "\"-3/4\"");
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, Scalar::from_ratio(-3, 4));

        let g = Scalar::gaussian(1, -2);
        let j = serde_json::to_string(&g).unwrap();
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, g);

        let from_int: Scalar = serde_json::from_str("5").unwrap();
        assert_eq!(from_int, Scalar::from_int(5));
        assert!(serde_json::from_str::<Scalar>("0.5").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let j = serde_json::to_string(&m).unwrap();
        assert_eq!(j, r#"[["1","2"],["3","4"]]"#);
        let back: Matrix = serde_json::from_str(&j).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Matrix>(r#"[["1"],["2","3"]]"#).is_err());
    }

    #[test]
    fn subspace_round_trip_canonicalizes() {
        let j = r#"{"dim": 2, "basis": [["2","2"],["1","1"]]}"#;
        let s: Subspace = serde_json::from_str(j).unwrap();
        assert_eq!(s.dim(), 1);
        let out = serde_json::to_string(&s).unwrap();
        let back: Subspace = serde_json::from_str(&out).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn lattice_literal_and_generator_forms() {
        let lit = r#"{"dim": 2, "elements": [{"basis": [["1","0"]]}]}"#;
        let lat = lattice_from_str(lit, 16).unwrap();
        assert_eq!(lat.len(), 3); // 0 and I are added

        let gens = r#"{"dim": 2, "generators": [{"basis": [["1","0"]]}, {"basis": [["1","1"]]}]}"#;
        let lat = lattice_from_str(gens, 16).unwrap();
        assert_eq!(lat.len(), 4);
        assert!(lat.flags().is_absl);

        assert!(lattice_from_str(r#"{"dim": 2}"#, 16).is_err());
    }

    #[test]
    fn lattice_serialization_round_trips() {
        let lat = crate::fixtures::two_atom2();
        let j = serde_json::to_string(&lat).unwrap();
        let back = lattice_from_str(&j, 16).unwrap();
        assert_eq!(back.elements(), lat.elements());
    }

    #[test]
    fn operator_space_round_trip() {
        let alg = crate::opalg::alg_of(&crate::fixtures::nest2()).unwrap();
        let j = serde_json::to_string(&alg).unwrap();
        let back: OperatorSpace = serde_json::from_str(&j).unwrap();
        assert_eq!(back.basis(), alg.basis());
    }

    #[test]
    fn atom_map_round_trip() {
        let m = crate::fixtures::two_atom2();
        let atoms = m.atoms().unwrap();
        let f = AtomMap::constant(&atoms, &Subspace::full(2)).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        let back: AtomMap = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn field_enforcement() {
        let gauss =
            Subspace::from_vectors(2, &[vec![Scalar::one(), Scalar::gaussian(0, 1)]]).unwrap();
        assert!(enforce_field_subspace(&gauss, Field::Rational).is_err());
        assert!(enforce_field_subspace(&gauss, Field::Gaussian).is_ok());
    }
}
