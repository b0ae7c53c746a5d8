//! Named workspaces: the declarative definition language and the JSON
//! envelope.
//!
//! A workspace is a theta declaration plus named algebras, morphisms,
//! covers and braided derivations. Two on-disk formats are supported and
//! detected by sniffing the first non-space byte:
//!
//! ```text
//! theta [[0,1],[-1,0]];
//! algebra T = free(x:(1,0), xs:(-1,0)) / { xs*x - 1 };
//! morphism f : T -> T = [ x, xs ];
//! cover C on S2 = { elements [ (1-z)/2, (1+z)/2 ], witnesses [ 1, 1 ] };
//! derivation L on T = [ x, -xs ];
//! note "cap" = "4";
//! normalize T "xs*x*xs";          # command statements run under `check`
//! ```
//!
//! and the `{"version": 1, ...}` JSON envelope produced by `export`. Every
//! object re-validates on load; loading a file that defines an invalid
//! morphism or cover fails with the underlying validation error.

use crate::algebra::{Element, GeneratorSpec};
use crate::command::Command;
use crate::cover::ZariskiCover;
use crate::deformation::{DeformationData, DegreeVector};
use crate::derivation::BraidedDerivation;
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::presentation::Presentation;
use crate::textform::{tokenize, Cursor};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct NamedMorphism {
    pub source_name: String,
    pub target_name: String,
    pub morphism: Morphism,
}

#[derive(Debug)]
pub struct NamedCover {
    pub base_name: String,
    pub cover: ZariskiCover,
}

#[derive(Clone, Debug)]
pub struct NamedDerivation {
    pub algebra_name: String,
    pub derivation: BraidedDerivation,
}

/// A validated collection of named objects over one deformation.
#[derive(Debug, Default)]
pub struct Workspace {
    pub deformation: Option<DeformationData>,
    pub algebras: BTreeMap<String, Arc<Presentation>>,
    pub morphisms: BTreeMap<String, NamedMorphism>,
    pub covers: BTreeMap<String, NamedCover>,
    pub derivations: BTreeMap<String, NamedDerivation>,
    pub notes: BTreeMap<String, String>,
    /// Command statements found in the source file, in order; they are
    /// executed by the `check` command.
    pub commands: Vec<Command>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.deformation == other.deformation
            && self.algebras.len() == other.algebras.len()
            && self
                .algebras
                .iter()
                .zip(&other.algebras)
                .all(|((n1, a1), (n2, a2))| n1 == n2 && **a1 == **a2)
            && self.morphisms.len() == other.morphisms.len()
            && self.morphisms.iter().zip(&other.morphisms).all(|((n1, m1), (n2, m2))| {
                n1 == n2
                    && m1.source_name == m2.source_name
                    && m1.target_name == m2.target_name
                    && m1.morphism == m2.morphism
            })
            && self.covers.len() == other.covers.len()
            && self.covers.iter().zip(&other.covers).all(|((n1, c1), (n2, c2))| {
                n1 == n2
                    && c1.base_name == c2.base_name
                    && c1.cover.elements() == c2.cover.elements()
                    && c1.cover.witnesses() == c2.cover.witnesses()
            })
            && self.derivations.len() == other.derivations.len()
            && self.derivations.iter().zip(&other.derivations).all(|((n1, d1), (n2, d2))| {
                n1 == n2
                    && d1.algebra_name == d2.algebra_name
                    && d1.derivation == d2.derivation
            })
            && self.notes == other.notes
    }
}

impl Workspace {
    pub fn theta(&self) -> Result<&DeformationData> {
        self.deformation.as_ref().ok_or(Error::MissingTheta)
    }

    pub fn algebra(&self, name: &str) -> Result<&Arc<Presentation>> {
        self.algebras
            .get(name)
            .ok_or_else(|| Error::UnknownObject { kind: "algebra", name: name.to_string() })
    }

    pub fn morphism(&self, name: &str) -> Result<&NamedMorphism> {
        self.morphisms
            .get(name)
            .ok_or_else(|| Error::UnknownObject { kind: "morphism", name: name.to_string() })
    }

    pub fn cover(&self, name: &str) -> Result<&NamedCover> {
        self.covers
            .get(name)
            .ok_or_else(|| Error::UnknownObject { kind: "cover", name: name.to_string() })
    }

    pub fn derivation(&self, name: &str) -> Result<&NamedDerivation> {
        self.derivations
            .get(name)
            .ok_or_else(|| Error::UnknownObject { kind: "derivation", name: name.to_string() })
    }

    fn insert_unique<T>(map: &mut BTreeMap<String, T>, kind: &'static str, name: String, v: T) -> Result<()> {
        if map.contains_key(&name) {
            return Err(Error::DuplicateObject { kind, name });
        }
        map.insert(name, v);
        Ok(())
    }

    /// Re-validate every stored object.
    pub fn validate(&self) -> Result<()> {
        for a in self.algebras.values() {
            a.validate()?;
        }
        for m in self.morphisms.values() {
            m.morphism.validate()?;
        }
        for c in self.covers.values() {
            c.cover.validate()?;
        }
        for d in self.derivations.values() {
            d.derivation.validate()?;
        }
        Ok(())
    }
}

// ---- DSL parsing ----

/// Parse workspace text (DSL or JSON envelope, auto-detected).
pub fn parse_workspace(text: &str) -> Result<Workspace> {
    if text.trim_start().starts_with('{') {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            col: e.column(),
            msg: format!("invalid JSON: {e}"),
        })?;
        return workspace_from_json(&value);
    }
    parse_workspace_dsl(text)
}

fn parse_workspace_dsl(text: &str) -> Result<Workspace> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut ws = Workspace::default();
    while !cur.at_end() {
        if cur.eat_keyword("theta") {
            let theta = parse_int_matrix(&mut cur)?;
            cur.expect_sym(';')?;
            if ws.deformation.is_some() {
                return Err(cur.err("duplicate theta declaration"));
            }
            ws.deformation = Some(DeformationData::new(theta)?);
        } else if cur.eat_keyword("algebra") {
            parse_algebra_stmt(&mut cur, &mut ws)?;
        } else if cur.eat_keyword("morphism") {
            parse_morphism_stmt(&mut cur, &mut ws)?;
        } else if cur.eat_keyword("cover") {
            parse_cover_stmt(&mut cur, &mut ws)?;
        } else if cur.eat_keyword("derivation") {
            parse_derivation_stmt(&mut cur, &mut ws)?;
        } else if cur.eat_keyword("note") {
            let key = cur.expect_str()?;
            cur.expect_sym('=')?;
            let value = cur.expect_str()?;
            cur.expect_sym(';')?;
            ws.notes.insert(key, value);
        } else {
            // otherwise a command statement, terminated by `;`
            let cmd = Command::parse_tokens(&mut cur)?;
            cur.expect_sym(';')?;
            ws.commands.push(cmd);
        }
    }
    Ok(ws)
}

fn parse_int_matrix(cur: &mut Cursor) -> Result<Vec<Vec<i64>>> {
    cur.expect_sym('[')?;
    let mut rows = Vec::new();
    loop {
        cur.expect_sym('[')?;
        let mut row = Vec::new();
        if !cur.eat_sym(']') {
            loop {
                row.push(cur.expect_int()?);
                if cur.eat_sym(']') {
                    break;
                }
                cur.expect_sym(',')?;
            }
        }
        rows.push(row);
        if cur.eat_sym(']') {
            break;
        }
        cur.expect_sym(',')?;
    }
    Ok(rows)
}

fn parse_degree(cur: &mut Cursor) -> Result<DegreeVector> {
    cur.expect_sym('(')?;
    let mut comps = Vec::new();
    loop {
        comps.push(cur.expect_int()?);
        if cur.eat_sym(')') {
            break;
        }
        cur.expect_sym(',')?;
    }
    Ok(DegreeVector(comps))
}

fn parse_algebra_stmt(cur: &mut Cursor, ws: &mut Workspace) -> Result<()> {
    let name = cur.expect_ident()?;
    cur.expect_sym('=')?;
    cur.expect_keyword("free")?;
    cur.expect_sym('(')?;
    let mut gens = Vec::new();
    if !cur.eat_sym(')') {
        loop {
            let gname = cur.expect_ident()?;
            cur.expect_sym(':')?;
            let degree = parse_degree(cur)?;
            let mut invertible = false;
            if cur.eat_sym('^') {
                let e = cur.expect_int()?;
                if e != -1 {
                    return Err(cur.err("generator flag must be ^-1"));
                }
                invertible = true;
            }
            gens.push(GeneratorSpec { name: gname, degree, invertible });
            if cur.eat_sym(')') {
                break;
            }
            cur.expect_sym(',')?;
        }
    }
    let deformation = ws.theta()?.clone();
    let free = Presentation::free(
        deformation.clone(),
        gens.iter()
            .map(|g| GeneratorSpec::new(g.name.clone(), g.degree.clone()))
            .collect(),
    )?;
    let mut relation_elems = Vec::new();
    if cur.eat_sym('/') {
        cur.expect_sym('{')?;
        loop {
            let e = crate::textform::parse_element_expr(cur, &free)?;
            relation_elems.push(e);
            if cur.eat_sym('}') {
                break;
            }
            cur.expect_sym(',')?;
        }
    }
    cur.expect_sym(';')?;
    let algebra = Presentation::presented(
        deformation,
        gens,
        relation_elems.into_iter().map(|e| e.into_terms()).collect(),
    )
    .map_err(|e| Error::Validation { object: name.clone(), msg: e.to_string() })?;
    Workspace::insert_unique(&mut ws.algebras, "algebra", name, algebra)
}

fn parse_morphism_stmt(cur: &mut Cursor, ws: &mut Workspace) -> Result<()> {
    let name = cur.expect_ident()?;
    cur.expect_sym(':')?;
    let src_name = cur.expect_ident()?;
    if !cur.eat_arrow() {
        return Err(cur.err("expected `->`"));
    }
    let tgt_name = cur.expect_ident()?;
    cur.expect_sym('=')?;
    cur.expect_sym('[')?;
    let source = ws.algebra(&src_name)?.clone();
    let target = ws.algebra(&tgt_name)?.clone();
    let mut images = Vec::new();
    if !cur.eat_sym(']') {
        loop {
            images.push(crate::textform::parse_element_expr(cur, &target)?);
            if cur.eat_sym(']') {
                break;
            }
            cur.expect_sym(',')?;
        }
    }
    cur.expect_sym(';')?;
    let morphism = Morphism::new(source, target, images)
        .map_err(|e| Error::Validation { object: name.clone(), msg: e.to_string() })?;
    Workspace::insert_unique(
        &mut ws.morphisms,
        "morphism",
        name,
        NamedMorphism { source_name: src_name, target_name: tgt_name, morphism },
    )
}

fn parse_element_list(cur: &mut Cursor, p: &Arc<Presentation>) -> Result<Vec<Element>> {
    cur.expect_sym('[')?;
    let mut out = Vec::new();
    if !cur.eat_sym(']') {
        loop {
            out.push(crate::textform::parse_element_expr(cur, p)?);
            if cur.eat_sym(']') {
                break;
            }
            cur.expect_sym(',')?;
        }
    }
    Ok(out)
}

fn parse_cover_stmt(cur: &mut Cursor, ws: &mut Workspace) -> Result<()> {
    let name = cur.expect_ident()?;
    cur.expect_keyword("on")?;
    let base_name = cur.expect_ident()?;
    cur.expect_sym('=')?;
    cur.expect_sym('{')?;
    cur.expect_keyword("elements")?;
    let base = ws.algebra(&base_name)?.clone();
    let elements = parse_element_list(cur, &base)?;
    cur.expect_sym(',')?;
    cur.expect_keyword("witnesses")?;
    let witnesses = parse_element_list(cur, &base)?;
    cur.expect_sym('}')?;
    cur.expect_sym(';')?;
    let cover = ZariskiCover::new(base, elements, witnesses)
        .map_err(|e| Error::Validation { object: name.clone(), msg: e.to_string() })?;
    Workspace::insert_unique(&mut ws.covers, "cover", name, NamedCover { base_name, cover })
}

fn parse_derivation_stmt(cur: &mut Cursor, ws: &mut Workspace) -> Result<()> {
    let name = cur.expect_ident()?;
    cur.expect_keyword("on")?;
    let algebra_name = cur.expect_ident()?;
    cur.expect_sym('=')?;
    let algebra = ws.algebra(&algebra_name)?.clone();
    let coeffs = parse_element_list(cur, &algebra)?;
    cur.expect_sym(';')?;
    let derivation = BraidedDerivation::new(&algebra, coeffs, None)
        .map_err(|e| Error::Validation { object: name.clone(), msg: e.to_string() })?;
    Workspace::insert_unique(
        &mut ws.derivations,
        "derivation",
        name,
        NamedDerivation { algebra_name, derivation },
    )
}

// ---- canonical DSL writer ----

fn render_degree(d: &DegreeVector) -> String {
    format!("{d}")
}

fn render_theta(t: &DeformationData) -> String {
    let rows: Vec<String> = t
        .theta()
        .iter()
        .map(|row| {
            format!(
                "[{}]",
                row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// Serialize to canonical DSL text; `parse_workspace` inverts this exactly.
pub fn serialize_workspace(ws: &Workspace) -> Result<String> {
    let mut out = String::new();
    if let Some(t) = &ws.deformation {
        out.push_str(&format!("theta {};\n", render_theta(t)));
    }
    for (name, a) in &ws.algebras {
        let gens: Vec<String> = a
            .generators()
            .iter()
            .map(|g| {
                format!(
                    "{}:{}{}",
                    g.name,
                    render_degree(&g.degree),
                    if g.invertible { "^-1" } else { "" }
                )
            })
            .collect();
        out.push_str(&format!("algebra {} = free({})", name, gens.join(", ")));
        let rels = a.relations();
        if !rels.is_empty() {
            let rs: Vec<String> = rels.iter().map(|r| r.render()).collect();
            out.push_str(&format!(" / {{ {} }}", rs.join(", ")));
        }
        out.push_str(";\n");
    }
    for (name, m) in &ws.morphisms {
        let imgs: Vec<String> = m.morphism.images().iter().map(|e| e.render()).collect();
        out.push_str(&format!(
            "morphism {} : {} -> {} = [ {} ];\n",
            name,
            m.source_name,
            m.target_name,
            imgs.join(", ")
        ));
    }
    for (name, c) in &ws.covers {
        let els: Vec<String> = c.cover.elements().iter().map(|e| e.render()).collect();
        let wits: Vec<String> = c.cover.witnesses().iter().map(|e| e.render()).collect();
        out.push_str(&format!(
            "cover {} on {} = {{ elements [ {} ], witnesses [ {} ] }};\n",
            name,
            c.base_name,
            els.join(", "),
            wits.join(", ")
        ));
    }
    for (name, d) in &ws.derivations {
        let cs: Vec<String> = d.derivation.coeffs().iter().map(|e| e.render()).collect();
        out.push_str(&format!(
            "derivation {} on {} = [ {} ];\n",
            name,
            d.algebra_name,
            cs.join(", ")
        ));
    }
    for (k, v) in &ws.notes {
        out.push_str(&format!("note \"{}\" = \"{}\";\n", escape(k), escape(v)));
    }
    for cmd in &ws.commands {
        out.push_str(&format!("{};\n", cmd.render()));
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

// ---- JSON envelope ----

fn presentation_to_json(p: &Arc<Presentation>) -> Value {
    json!({
        "rank": p.deformation().rank(),
        "theta": p.deformation().theta(),
        "generators": p.generators().iter().map(|g| json!({
            "name": g.name,
            "degree": g.degree.0,
            "invertible": g.invertible,
        })).collect::<Vec<_>>(),
        "relations": p.relations().iter().map(|r| Value::String(r.render())).collect::<Vec<_>>(),
    })
}

/// JSON envelope `{"version": 1, ...}` with all named objects.
pub fn workspace_to_json(ws: &Workspace) -> Result<Value> {
    let mut algebras = serde_json::Map::new();
    for (name, a) in &ws.algebras {
        algebras.insert(name.clone(), presentation_to_json(a));
    }
    let mut morphisms = serde_json::Map::new();
    for (name, m) in &ws.morphisms {
        morphisms.insert(
            name.clone(),
            json!({
                "source": m.source_name,
                "target": m.target_name,
                "images": m.morphism.images().iter().map(|e| Value::String(e.render())).collect::<Vec<_>>(),
            }),
        );
    }
    let mut covers = serde_json::Map::new();
    for (name, c) in &ws.covers {
        covers.insert(
            name.clone(),
            json!({
                "base": c.base_name,
                "elements": c.cover.elements().iter().map(|e| Value::String(e.render())).collect::<Vec<_>>(),
                "witnesses": c.cover.witnesses().iter().map(|e| Value::String(e.render())).collect::<Vec<_>>(),
            }),
        );
    }
    let mut derivations = serde_json::Map::new();
    for (name, d) in &ws.derivations {
        let mut obj = serde_json::Map::new();
        obj.insert("algebra".into(), Value::String(d.algebra_name.clone()));
        obj.insert(
            "coeffs".into(),
            Value::Array(
                d.derivation.coeffs().iter().map(|e| Value::String(e.render())).collect(),
            ),
        );
        if let Some(cap) = d.derivation.cap() {
            obj.insert("cap".into(), json!(cap));
        }
        derivations.insert(name.clone(), Value::Object(obj));
    }
    let mut root = serde_json::Map::new();
    root.insert("version".into(), json!(1));
    if let Some(t) = &ws.deformation {
        root.insert("theta".into(), json!(t.theta()));
    }
    root.insert("algebras".into(), Value::Object(algebras));
    root.insert("morphisms".into(), Value::Object(morphisms));
    root.insert("covers".into(), Value::Object(covers));
    root.insert("derivations".into(), Value::Object(derivations));
    root.insert("notes".into(), json!(ws.notes));
    if !ws.commands.is_empty() {
        root.insert(
            "commands".into(),
            Value::Array(ws.commands.iter().map(|c| Value::String(c.render())).collect()),
        );
    }
    Ok(Value::Object(root))
}

fn as_str<'a>(v: &'a Value, ctx: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::Validation { object: ctx.into(), msg: "expected string".into() })
}

fn as_obj<'a>(v: &'a Value, ctx: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Validation { object: ctx.into(), msg: "expected object".into() })
}

fn parse_json_theta(v: &Value) -> Result<DeformationData> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Validation { object: "theta".into(), msg: "expected array".into() })?;
    let mut theta = Vec::new();
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Validation { object: "theta".into(), msg: "expected row array".into() })?;
        theta.push(
            row.iter()
                .map(|x| {
                    x.as_i64().ok_or_else(|| Error::Validation {
                        object: "theta".into(),
                        msg: "expected integer entry".into(),
                    })
                })
                .collect::<Result<Vec<i64>>>()?,
        );
    }
    DeformationData::new(theta)
}

fn presentation_from_json(name: &str, v: &Value) -> Result<Arc<Presentation>> {
    let obj = as_obj(v, name)?;
    let theta = parse_json_theta(
        obj.get("theta")
            .ok_or_else(|| Error::Validation { object: name.into(), msg: "missing theta".into() })?,
    )?;
    let gens_v = obj
        .get("generators")
        .and_then(|g| g.as_array())
        .ok_or_else(|| Error::Validation { object: name.into(), msg: "missing generators".into() })?;
    let mut gens = Vec::new();
    for g in gens_v {
        let g = as_obj(g, name)?;
        let gname = as_str(
            g.get("name")
                .ok_or_else(|| Error::Validation { object: name.into(), msg: "generator missing name".into() })?,
            name,
        )?;
        let degree: Vec<i64> = g
            .get("degree")
            .and_then(|d| d.as_array())
            .ok_or_else(|| Error::Validation { object: name.into(), msg: "generator missing degree".into() })?
            .iter()
            .map(|x| {
                x.as_i64().ok_or_else(|| Error::Validation {
                    object: name.into(),
                    msg: "degree entries must be integers".into(),
                })
            })
            .collect::<Result<_>>()?;
        let invertible = g.get("invertible").and_then(|b| b.as_bool()).unwrap_or(false);
        gens.push(GeneratorSpec { name: gname.to_string(), degree: DegreeVector(degree), invertible });
    }
    let free = Presentation::free(
        theta.clone(),
        gens.iter()
            .map(|g| GeneratorSpec::new(g.name.clone(), g.degree.clone()))
            .collect(),
    )?;
    let mut relations = Vec::new();
    if let Some(rels) = obj.get("relations").and_then(|r| r.as_array()) {
        for r in rels {
            let text = as_str(r, name)?;
            relations.push(free.parse_element(text)?.into_terms());
        }
    }
    Presentation::presented(theta, gens, relations)
        .map_err(|e| Error::Validation { object: name.into(), msg: e.to_string() })
}

fn workspace_from_json(v: &Value) -> Result<Workspace> {
    let obj = as_obj(v, "workspace")?;
    match obj.get("version").and_then(|x| x.as_i64()) {
        Some(1) => {}
        _ => {
            return Err(Error::Validation {
                object: "workspace".into(),
                msg: "missing or unsupported version (expected 1)".into(),
            })
        }
    }
    let mut ws = Workspace::default();
    if let Some(t) = obj.get("theta") {
        ws.deformation = Some(parse_json_theta(t)?);
    }
    if let Some(algs) = obj.get("algebras").and_then(|a| a.as_object()) {
        for (name, a) in algs {
            let p = presentation_from_json(name, a)?;
            Workspace::insert_unique(&mut ws.algebras, "algebra", name.clone(), p)?;
        }
    }
    if let Some(mors) = obj.get("morphisms").and_then(|a| a.as_object()) {
        for (name, m) in mors {
            let m = as_obj(m, name)?;
            let src = as_str(m.get("source").ok_or_else(|| missing(name, "source"))?, name)?;
            let tgt = as_str(m.get("target").ok_or_else(|| missing(name, "target"))?, name)?;
            let source = ws.algebra(src)?.clone();
            let target = ws.algebra(tgt)?.clone();
            let images = m
                .get("images")
                .and_then(|i| i.as_array())
                .ok_or_else(|| missing(name, "images"))?
                .iter()
                .map(|t| target.parse_element(as_str(t, name)?))
                .collect::<Result<Vec<_>>>()?;
            let morphism = Morphism::new(source, target, images)
                .map_err(|e| Error::Validation { object: name.clone(), msg: e.to_string() })?;
            Workspace::insert_unique(
                &mut ws.morphisms,
                "morphism",
                name.clone(),
                NamedMorphism {
                    source_name: src.to_string(),
                    target_name: tgt.to_string(),
                    morphism,
                },
            )?;
        }
    }
    if let Some(covs) = obj.get("covers").and_then(|a| a.as_object()) {
        for (name, c) in covs {
            let c = as_obj(c, name)?;
            let base_name = as_str(c.get("base").ok_or_else(|| missing(name, "base"))?, name)?;
            let base = ws.algebra(base_name)?.clone();
            let parse_list = |key: &str| -> Result<Vec<Element>> {
                c.get(key)
                    .and_then(|l| l.as_array())
                    .ok_or_else(|| missing(name, key))?
                    .iter()
                    .map(|t| base.parse_element(as_str(t, name)?))
                    .collect()
            };
            let cover = ZariskiCover::new(base.clone(), parse_list("elements")?, parse_list("witnesses")?)
                .map_err(|e| Error::Validation { object: name.clone(), msg: e.to_string() })?;
            Workspace::insert_unique(
                &mut ws.covers,
                "cover",
                name.clone(),
                NamedCover { base_name: base_name.to_string(), cover },
            )?;
        }
    }
    if let Some(ders) = obj.get("derivations").and_then(|a| a.as_object()) {
        for (name, d) in ders {
            let d = as_obj(d, name)?;
            let alg_name = as_str(d.get("algebra").ok_or_else(|| missing(name, "algebra"))?, name)?;
            let algebra = ws.algebra(alg_name)?.clone();
            let coeffs = d
                .get("coeffs")
                .and_then(|l| l.as_array())
                .ok_or_else(|| missing(name, "coeffs"))?
                .iter()
                .map(|t| algebra.parse_element(as_str(t, name)?))
                .collect::<Result<Vec<_>>>()?;
            let cap = d.get("cap").and_then(|x| x.as_u64()).map(|x| x as usize);
            let derivation = BraidedDerivation::new(&algebra, coeffs, cap)
                .map_err(|e| Error::Validation { object: name.clone(), msg: e.to_string() })?;
            Workspace::insert_unique(
                &mut ws.derivations,
                "derivation",
                name.clone(),
                NamedDerivation { algebra_name: alg_name.to_string(), derivation },
            )?;
        }
    }
    if let Some(notes) = obj.get("notes").and_then(|a| a.as_object()) {
        for (k, v) in notes {
            ws.notes.insert(k.clone(), as_str(v, k)?.to_string());
        }
    }
    if let Some(cmds) = obj.get("commands").and_then(|a| a.as_array()) {
        for c in cmds {
            let text = as_str(c, "commands")?;
            let mut cur = Cursor::new(tokenize(text)?);
            ws.commands.push(Command::parse_tokens(&mut cur)?);
            if !cur.at_end() {
                return Err(Error::Validation {
                    object: "commands".into(),
                    msg: format!("trailing input in command `{text}`"),
                });
            }
        }
    }
    Ok(ws)
}

fn missing(name: &str, field: &str) -> Error {
    Error::Validation { object: name.into(), msg: format!("missing field `{field}`") }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS_WS: &str = r#"
        theta [[0,1],[-1,0]];
        algebra T = free(x:(1,0), xs:(-1,0)) / { xs*x - 1 };
        algebra Fm = free(x:(1,0));
        morphism id_T : T -> T = [ x, xs ];
        derivation L on T = [ x, -xs ];
    "#;

    #[test]
    fn parse_torus_workspace() {
        let ws = parse_workspace(TORUS_WS).unwrap();
        assert!(ws.deformation.is_some());
        assert_eq!(ws.algebras.len(), 2);
        let t = ws.algebra("T").unwrap();
        assert_eq!(t.num_gens(), 2);
        assert_eq!(t.num_relations(), 1);
        assert!(ws.morphism("id_T").is_ok());
        assert!(ws.derivation("L").is_ok());
        ws.validate().unwrap();
    }

    #[test]
    fn empty_input_has_no_theta() {
        let ws = parse_workspace("").unwrap();
        assert_eq!(ws.theta().unwrap_err(), Error::MissingTheta);
        // defining an algebra without theta is an error
        let err = parse_workspace("algebra A = free(x:(1));").unwrap_err();
        assert_eq!(err, Error::MissingTheta);
    }

    #[test]
    fn mismatched_relation_degree_rejected() {
        let src = r#"
            theta [[0,1],[-1,0]];
            algebra Bad = free(a:(1,0), b:(0,1)) / { a + b };
        "#;
        let err = parse_workspace(src).unwrap_err();
        match err {
            Error::Validation { object, msg } => {
                assert_eq!(object, "Bad");
                assert!(msg.contains("homogeneous"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dsl_round_trip() {
        let ws = parse_workspace(TORUS_WS).unwrap();
        let text = serialize_workspace(&ws).unwrap();
        let back = parse_workspace(&text).unwrap();
        assert_eq!(back, ws);
    }

    #[test]
    fn json_round_trip() {
        let src = r#"
            theta [[0,1],[-1,0]];
            algebra S2 = free(x1:(1,0), xs1:(-1,0), z:(0,0)) / { x1*xs1 + z^2 - 1 };
            cover C on S2 = { elements [ 1/2 - 1/2*z, 1/2 + 1/2*z ], witnesses [ 1, 1 ] };
            note "cap" = "4";
        "#;
        let ws = parse_workspace(src).unwrap();
        let v = workspace_to_json(&ws).unwrap();
        let text = serde_json::to_string_pretty(&v).unwrap();
        let back = parse_workspace(&text).unwrap();
        assert_eq!(back, ws);
        assert_eq!(back.notes.get("cap").map(|s| s.as_str()), Some("4"));
    }

    #[test]
    fn command_statements_collected() {
        let src = r#"
            theta [[0,1],[-1,0]];
            algebra T = free(x:(1,0), xs:(-1,0)) / { xs*x - 1 };
            normalize T "xs*x*xs";
        "#;
        let ws = parse_workspace(src).unwrap();
        assert_eq!(ws.commands.len(), 1);
    }

    #[test]
    fn duplicate_names_rejected() {
        let src = r#"
            theta [[0]];
            algebra A = free(t:(0));
            algebra A = free(u:(0));
        "#;
        assert_eq!(
            parse_workspace(src).unwrap_err(),
            Error::DuplicateObject { kind: "algebra", name: "A".into() }
        );
    }
}
