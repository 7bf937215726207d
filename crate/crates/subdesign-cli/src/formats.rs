//! JSON schemas for towers, subspaces, designs, strong designs and codes, plus CSV and
//! DOT writers. Field elements are written as nested arrays of base-p digits
//! (little-endian); expression strings such as "i+1" are accepted on input only.

use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use subdesign::design::SubspaceDesign;
use subdesign::gf::{parse_expr, Code, FieldTower};
use subdesign::strongbridge::StrongSubspaceDesign;
use subdesign::subspace::{AmbientSpace, FqSubspace, FqmSubspace};
use subdesign::sumrank::SumRankCode;

use crate::CliError;

/// F_q-coordinate expansion of F_{q^m}: 1, y, …, y^{m−1}.
pub const EXPANSION_BASIS: &str = "power";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerJson {
    pub p: u32,
    pub h: usize,
    pub m: usize,
    /// Monic F_p-polynomial defining F_q, little-endian.
    pub fq_modulus: Vec<u32>,
    /// Monic F_q-polynomial defining F_{q^m}; each coefficient as h base-p digits.
    pub fqm_modulus: Vec<Vec<u32>>,
    pub expansion_basis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientJson {
    pub tower: TowerJson,
    pub k: usize,
}

/// An F_q-subspace: RREF rows of length mk, each F_q coordinate as h base-p digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    pub ambient: AmbientJson,
    pub rows: Vec<Vec<Vec<u32>>>,
}

/// An F_{q^m}-element on input: digits (m × h) or an expression string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Digits(Vec<Vec<u32>>),
    Expr(String),
}

/// A design member: canonical F_q rows, or (input only) F_q-spanning vectors of F_{q^m}^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemberJson {
    Rows { rows: Vec<Vec<Vec<u32>>> },
    Span { span: Vec<Vec<ElementJson>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignJson {
    pub format: String,
    pub ambient: AmbientJson,
    pub members: Vec<MemberJson>,
}

/// Strong design: RREF rows over F_{q^m}, elements as m × h digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrongDesignJson {
    pub format: String,
    pub ambient: AmbientJson,
    pub members: Vec<Vec<Vec<ElementJson>>>,
}

/// Sum-rank code with blocks in non-increasing length order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeJson {
    pub format: String,
    pub tower: TowerJson,
    pub lengths: Vec<usize>,
    pub generator: Vec<Vec<ElementJson>>,
}

pub const DESIGN_FORMAT: &str = "subspace-design";
pub const STRONG_FORMAT: &str = "strong-subspace-design";
pub const CODE_FORMAT: &str = "sumrank-code";

fn fq_from_digits(tower: &FieldTower, d: &[u32]) -> Result<Code, CliError> {
    if d.len() != tower.h() || d.iter().any(|&x| x >= tower.p()) {
        return Err(CliError::Format(format!("{d:?} is not {} base-{} digits", tower.h(), tower.p())));
    }
    Ok(d.iter().rev().fold(0, |acc, &x| acc * tower.p() + x))
}

pub fn tower_to_json(t: &FieldTower) -> TowerJson {
    TowerJson {
        p: t.p(),
        h: t.h(),
        m: t.m(),
        fq_modulus: t.fq_modulus().to_vec(),
        fqm_modulus: t.fqm_modulus().iter().map(|&c| t.base().digits(c)).collect(),
        expansion_basis: EXPANSION_BASIS.into(),
    }
}

pub fn tower_from_json(j: &TowerJson) -> Result<Arc<FieldTower>, CliError> {
    if j.expansion_basis != EXPANSION_BASIS {
        return Err(CliError::Format(format!("unsupported expansion basis `{}`", j.expansion_basis)));
    }
    let base = FieldTower::new(j.p, j.h, 1, &j.fq_modulus, &[0, 1])?;
    let coeffs = j.fqm_modulus.iter().map(|d| fq_from_digits(&base, d)).collect::<Result<Vec<_>, _>>()?;
    Ok(FieldTower::new(j.p, j.h, j.m, &j.fq_modulus, &coeffs)?)
}

pub fn ambient_to_json(a: &AmbientSpace) -> AmbientJson {
    AmbientJson { tower: tower_to_json(a.tower()), k: a.k() }
}

pub fn ambient_from_json(j: &AmbientJson) -> Result<AmbientSpace, CliError> {
    Ok(AmbientSpace::new(&tower_from_json(&j.tower)?, j.k)?)
}

pub fn element_to_json(t: &FieldTower, a: Code) -> ElementJson {
    ElementJson::Digits(t.digits(a))
}

pub fn element_from_json(t: &FieldTower, e: &ElementJson) -> Result<Code, CliError> {
    Ok(match e {
        ElementJson::Digits(d) => t.from_digits(d)?,
        ElementJson::Expr(s) => parse_expr(t, s)?,
    })
}

fn fq_rows_to_json(t: &FieldTower, rows: &[Vec<Code>]) -> Vec<Vec<Vec<u32>>> {
    rows.iter().map(|r| r.iter().map(|&c| t.base().digits(c)).collect()).collect()
}

fn fq_rows_from_json(t: &FieldTower, rows: &[Vec<Vec<u32>>]) -> Result<Vec<Vec<Code>>, CliError> {
    rows.iter().map(|r| r.iter().map(|d| fq_from_digits(t, d)).collect()).collect()
}

pub fn subspace_to_json(u: &FqSubspace) -> SubspaceJson {
    SubspaceJson { ambient: ambient_to_json(u.ambient()), rows: fq_rows_to_json(u.ambient().tower(), u.rows()) }
}

pub fn subspace_from_json(j: &SubspaceJson) -> Result<FqSubspace, CliError> {
    let a = ambient_from_json(&j.ambient)?;
    Ok(FqSubspace::from_canonical_rows(&a, fq_rows_from_json(a.tower(), &j.rows)?)?)
}

pub fn design_to_json(d: &SubspaceDesign) -> DesignJson {
    let t = d.tower();
    DesignJson {
        format: DESIGN_FORMAT.into(),
        ambient: ambient_to_json(d.ambient()),
        members: d.members().iter().map(|u| MemberJson::Rows { rows: fq_rows_to_json(t, u.rows()) }).collect(),
    }
}

pub fn design_from_json(j: &DesignJson) -> Result<SubspaceDesign, CliError> {
    check_format(&j.format, DESIGN_FORMAT)?;
    let a = ambient_from_json(&j.ambient)?;
    let t = a.tower();
    let members = j
        .members
        .iter()
        .map(|m| match m {
            MemberJson::Rows { rows } => Ok(FqSubspace::from_canonical_rows(&a, fq_rows_from_json(t, rows)?)?),
            MemberJson::Span { span } => {
                let vs = span.iter().map(|v| v.iter().map(|e| element_from_json(t, e)).collect()).collect::<Result<Vec<Vec<Code>>, _>>()?;
                Ok(FqSubspace::span(&a, &vs)?)
            }
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(SubspaceDesign::new(&a, members)?)
}

fn fqm_rows_to_json(t: &FieldTower, rows: &[Vec<Code>]) -> Vec<Vec<ElementJson>> {
    rows.iter().map(|r| r.iter().map(|&c| element_to_json(t, c)).collect()).collect()
}

fn fqm_rows_from_json(t: &FieldTower, rows: &[Vec<ElementJson>]) -> Result<Vec<Vec<Code>>, CliError> {
    rows.iter().map(|r| r.iter().map(|e| element_from_json(t, e)).collect()).collect()
}

pub fn strong_to_json(s: &StrongSubspaceDesign) -> StrongDesignJson {
    let t = s.ambient().tower();
    StrongDesignJson {
        format: STRONG_FORMAT.into(),
        ambient: ambient_to_json(s.ambient()),
        members: s.members().iter().map(|v| fqm_rows_to_json(t, v.rows())).collect(),
    }
}

/// Rows are re-canonicalized; digit-form rows must already be RREF.
pub fn strong_from_json(j: &StrongDesignJson) -> Result<StrongSubspaceDesign, CliError> {
    check_format(&j.format, STRONG_FORMAT)?;
    let a = ambient_from_json(&j.ambient)?;
    let members = j
        .members
        .iter()
        .map(|rows| {
            let codes = fqm_rows_from_json(a.tower(), rows)?;
            let all_digits = rows.iter().flatten().all(|e| matches!(e, ElementJson::Digits(_)));
            Ok(if all_digits { FqmSubspace::from_canonical_rows(&a, codes)? } else { FqmSubspace::new(&a, codes)? })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(StrongSubspaceDesign::new(&a, members)?)
}

pub fn code_to_json(c: &SumRankCode) -> CodeJson {
    CodeJson {
        format: CODE_FORMAT.into(),
        tower: tower_to_json(c.tower()),
        lengths: c.n().to_vec(),
        generator: fqm_rows_to_json(c.tower(), c.generator()),
    }
}

pub fn code_from_json(j: &CodeJson) -> Result<SumRankCode, CliError> {
    check_format(&j.format, CODE_FORMAT)?;
    let t = tower_from_json(&j.tower)?;
    Ok(SumRankCode::new(&t, fqm_rows_from_json(&t, &j.generator)?, &j.lengths)?)
}

fn check_format(got: &str, want: &str) -> Result<(), CliError> {
    if got != want {
        return Err(CliError::Format(format!("expected format `{want}`, found `{got}`")));
    }
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_text(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Two-column CSV with a header.
pub fn write_csv<W: Write, A: ToString, B: ToString>(
    out: W,
    header: [&str; 2],
    rows: impl IntoIterator<Item = (A, B)>,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for (a, b) in rows {
        w.write_record([a.to_string(), b.to_string()]).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Undirected graph in DOT.
pub fn dot_graph(name: &str, vertices: usize, edges: &[(usize, usize)]) -> String {
    let mut s = format!("graph {name} {{\n");
    for v in 0..vertices {
        s.push_str(&format!("  {v};\n"));
    }
    for (u, w) in edges {
        s.push_str(&format!("  {u} -- {w};\n"));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use subdesign::design::construct_pseudoregulus;

    #[test]
    fn design_round_trip_is_byte_stable() {
        let t = FieldTower::with_defaults(3, 1, 2).unwrap();
        let a = AmbientSpace::new(&t, 2).unwrap();
        let mu = parse_expr(&t, "i+1").unwrap();
        let d = construct_pseudoregulus(&a, 1, &[1, mu]).unwrap();
        let text = to_pretty(&design_to_json(&d));
        let back = design_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, d);
        assert_eq!(to_pretty(&design_to_json(&back)), text);
    }

    #[test]
    fn span_input_and_bad_rows() {
        let t = FieldTower::with_defaults(2, 1, 2).unwrap();
        let a = ambient_to_json(&AmbientSpace::new(&t, 2).unwrap());
        let j = DesignJson {
            format: DESIGN_FORMAT.into(),
            ambient: a.clone(),
            members: vec![MemberJson::Span { span: vec![vec![ElementJson::Expr("1".into()), ElementJson::Expr("w".into())]] }],
        };
        assert_eq!(design_from_json(&j).unwrap().dims(), vec![1]);
        let not_rref = DesignJson {
            format: DESIGN_FORMAT.into(),
            ambient: a,
            members: vec![MemberJson::Rows { rows: vec![vec![vec![0], vec![1], vec![0], vec![0]], vec![vec![1], vec![0], vec![0], vec![0]]] }],
        };
        assert!(design_from_json(&not_rref).is_err());
    }

    #[test]
    fn tower_json_rejects_reducible_modulus() {
        let mut j = tower_to_json(&FieldTower::with_defaults(2, 1, 3).unwrap());
        j.fqm_modulus = vec![vec![1], vec![0], vec![0], vec![1]];
        assert!(tower_from_json(&j).is_err());
    }
}
