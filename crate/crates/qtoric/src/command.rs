//! Command dispatch: the CLI verbs and DSL command statements.
//!
//! Every command takes `--cap N` (default 4) for degree-truncated
//! computations and `--q1` to print coefficients specialized at q = 1.
//! Reports are deterministic byte-for-byte for a fixed workspace and flags.

use crate::algebra::Element;
use crate::deformation::DegreeVector;
use crate::derivation::{der_bracket, der_basis, verify_xi_iso};
use crate::error::{Error, Result};
use crate::mapping::{te_aut_basis, MappingStage};
use crate::morphism::{graded_points, hom_constraints, Morphism};
use crate::textform::{tokenize, Cursor, Tok};
use crate::workspace::{parse_workspace, serialize_workspace, workspace_to_json, Workspace};

pub const DEFAULT_CAP: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmdOpts {
    pub cap: usize,
    pub q1: bool,
}

impl Default for CmdOpts {
    fn default() -> Self {
        CmdOpts { cap: DEFAULT_CAP, q1: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Check,
    Normalize { algebra: String, element: String },
    Groebner { algebra: String },
    Basis { algebra: String, degree: String },
    HomConstraints { source: String, target: String },
    GradedPoints { target: String, degree: String },
    CoverCheck { algebra: Option<String>, cover: String },
    Glue { cover: String, parts: Vec<String> },
    PullbackCover { cover: String, morphism: String },
    Compose { outer: String, inner: String },
    InverseCheck { space: String, stage: String, map: String, inverse: String },
    TeAut { space: String, stage: String },
    DerBasis { algebra: String },
    Bracket { left: String, right: String },
    XiCheck { space: String, stage: String },
    Export { path: Option<String> },
    Import { path: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub action: Action,
    pub opts: CmdOpts,
}

impl Command {
    /// Parse a command from a token stream (DSL command statements). Stops
    /// before the terminating `;`.
    pub(crate) fn parse_tokens(cur: &mut Cursor) -> Result<Command> {
        let mut name = cur.expect_ident()?;
        while matches!(cur.peek(), Some(Tok::Sym('-')))
            && matches!(cur.peek2(), Some(Tok::Ident(_)))
        {
            cur.eat_sym('-');
            name.push('-');
            name.push_str(&cur.expect_ident()?);
        }
        fn need(cur: &mut Cursor, what: &str) -> Result<String> {
            match cur.peek() {
                Some(Tok::Ident(s)) => {
                    let s = s.clone();
                    cur.next();
                    Ok(s)
                }
                Some(Tok::Str(s)) => {
                    let s = s.clone();
                    cur.next();
                    Ok(s)
                }
                _ => Err(cur.err(format!("expected {what}"))),
            }
        }
        let action = match name.as_str() {
            "check" => Action::Check,
            "normalize" => Action::Normalize { algebra: need(cur, "algebra name")?, element: need(cur, "element text")? },
            "groebner" => Action::Groebner { algebra: need(cur, "algebra name")? },
            "basis" => Action::Basis { algebra: need(cur, "algebra name")?, degree: need(cur, "degree like \"(1,0)\"")? },
            "hom-constraints" => {
                Action::HomConstraints { source: need(cur, "source algebra")?, target: need(cur, "target algebra")? }
            }
            "graded-points" => {
                Action::GradedPoints { target: need(cur, "target algebra")?, degree: need(cur, "degree like \"(1,0)\"")? }
            }
            "cover-check" => {
                let first = need(cur, "cover name")?;
                // one name = cover; two names = algebra then cover
                match cur.peek() {
                    Some(Tok::Ident(_)) | Some(Tok::Str(_)) => {
                        let second = need(cur, "cover name")?;
                        Action::CoverCheck { algebra: Some(first), cover: second }
                    }
                    _ => Action::CoverCheck { algebra: None, cover: first },
                }
            }
            "glue" => {
                let cover = need(cur, "cover name")?;
                let mut parts = Vec::new();
                while matches!(cur.peek(), Some(Tok::Str(_))) {
                    parts.push(need(cur, "part")?);
                }
                Action::Glue { cover, parts }
            }
            "pullback-cover" => {
                Action::PullbackCover { cover: need(cur, "cover name")?, morphism: need(cur, "morphism name")? }
            }
            "compose" => Action::Compose { outer: need(cur, "outer morphism")?, inner: need(cur, "inner morphism")? },
            "inverse-check" => Action::InverseCheck {
                space: need(cur, "space algebra")?,
                stage: need(cur, "stage algebra")?,
                map: need(cur, "morphism name")?,
                inverse: need(cur, "morphism name")?,
            },
            "te-aut" => Action::TeAut { space: need(cur, "space algebra")?, stage: need(cur, "stage algebra")? },
            "der-basis" => Action::DerBasis { algebra: need(cur, "algebra name")? },
            "bracket" => Action::Bracket { left: need(cur, "derivation name")?, right: need(cur, "derivation name")? },
            "xi-check" => Action::XiCheck { space: need(cur, "space algebra")?, stage: need(cur, "stage algebra")? },
            "export" => {
                let path = match cur.peek() {
                    Some(Tok::Str(_)) => Some(need(cur, "path")?),
                    _ => None,
                };
                Action::Export { path }
            }
            "import" => Action::Import { path: need(cur, "path")? },
            other => return Err(Error::UnknownCommand(other.to_string())),
        };
        let mut opts = CmdOpts::default();
        loop {
            if matches!(cur.peek(), Some(Tok::Sym('-'))) && matches!(cur.peek2(), Some(Tok::Sym('-'))) {
                cur.eat_sym('-');
                cur.eat_sym('-');
                let flag = cur.expect_ident()?;
                match flag.as_str() {
                    "cap" => {
                        let v = cur.expect_int()?;
                        if v < 0 {
                            return Err(cur.err("--cap must be nonnegative"));
                        }
                        opts.cap = v as usize;
                    }
                    "q1" => opts.q1 = true,
                    other => return Err(cur.err(format!("unknown option --{other}"))),
                }
            } else {
                break;
            }
        }
        Ok(Command { action, opts })
    }

    /// Parse a command from CLI arguments (after the workspace file).
    pub fn parse_argv(args: &[String]) -> Result<Command> {
        // split off options first
        let mut positional: Vec<String> = Vec::new();
        let mut opts = CmdOpts::default();
        let mut it = args.iter();
        while let Some(a) = it.next() {
            match a.as_str() {
                "--q1" => opts.q1 = true,
                "--cap" => {
                    let v = it
                        .next()
                        .ok_or_else(|| Error::UnknownCommand("--cap needs a value".into()))?;
                    opts.cap = v.parse().map_err(|_| Error::Syntax {
                        line: 1,
                        col: 1,
                        msg: format!("invalid --cap value `{v}`"),
                    })?;
                }
                _ if a.starts_with("--cap=") => {
                    let v = &a["--cap=".len()..];
                    opts.cap = v.parse().map_err(|_| Error::Syntax {
                        line: 1,
                        col: 1,
                        msg: format!("invalid --cap value `{v}`"),
                    })?;
                }
                _ => positional.push(a.clone()),
            }
        }
        let Some((verb, rest)) = positional.split_first() else {
            return Err(Error::UnknownCommand("<none>".into()));
        };
        let arg = |i: usize, what: &str| -> Result<String> {
            rest.get(i).cloned().ok_or_else(|| Error::Syntax {
                line: 1,
                col: 1,
                msg: format!("`{verb}` needs {what}"),
            })
        };
        let exactly = |n: usize| -> Result<()> {
            if rest.len() != n {
                return Err(Error::Syntax {
                    line: 1,
                    col: 1,
                    msg: format!("`{verb}` takes {n} argument(s), got {}", rest.len()),
                });
            }
            Ok(())
        };
        let action = match verb.as_str() {
            "check" => {
                exactly(0)?;
                Action::Check
            }
            "normalize" => {
                exactly(2)?;
                Action::Normalize { algebra: arg(0, "an algebra")?, element: arg(1, "an element")? }
            }
            "groebner" => {
                exactly(1)?;
                Action::Groebner { algebra: arg(0, "an algebra")? }
            }
            "basis" => {
                exactly(2)?;
                Action::Basis { algebra: arg(0, "an algebra")?, degree: arg(1, "a degree")? }
            }
            "hom-constraints" => {
                exactly(2)?;
                Action::HomConstraints { source: arg(0, "a source")?, target: arg(1, "a target")? }
            }
            "graded-points" => {
                exactly(2)?;
                Action::GradedPoints { target: arg(0, "a target")?, degree: arg(1, "a degree")? }
            }
            "cover-check" => match rest.len() {
                1 => Action::CoverCheck { algebra: None, cover: arg(0, "a cover")? },
                2 => Action::CoverCheck { algebra: Some(arg(0, "an algebra")?), cover: arg(1, "a cover")? },
                _ => {
                    return Err(Error::Syntax {
                        line: 1,
                        col: 1,
                        msg: "`cover-check` takes [ALGEBRA] COVER".into(),
                    })
                }
            },
            "glue" => {
                let cover = arg(0, "a cover")?;
                Action::Glue { cover, parts: rest[1..].to_vec() }
            }
            "pullback-cover" => {
                exactly(2)?;
                Action::PullbackCover { cover: arg(0, "a cover")?, morphism: arg(1, "a morphism")? }
            }
            "compose" => {
                exactly(2)?;
                Action::Compose { outer: arg(0, "a morphism")?, inner: arg(1, "a morphism")? }
            }
            "inverse-check" => {
                exactly(4)?;
                Action::InverseCheck {
                    space: arg(0, "a space")?,
                    stage: arg(1, "a stage")?,
                    map: arg(2, "a morphism")?,
                    inverse: arg(3, "a morphism")?,
                }
            }
            "te-aut" => {
                exactly(2)?;
                Action::TeAut { space: arg(0, "a space")?, stage: arg(1, "a stage")? }
            }
            "der-basis" => {
                exactly(1)?;
                Action::DerBasis { algebra: arg(0, "an algebra")? }
            }
            "bracket" => {
                exactly(2)?;
                Action::Bracket { left: arg(0, "a derivation")?, right: arg(1, "a derivation")? }
            }
            "xi-check" => {
                exactly(2)?;
                Action::XiCheck { space: arg(0, "a space")?, stage: arg(1, "a stage")? }
            }
            "export" => match rest.len() {
                0 => Action::Export { path: None },
                1 => Action::Export { path: Some(arg(0, "a path")?) },
                _ => {
                    return Err(Error::Syntax { line: 1, col: 1, msg: "`export` takes [PATH]".into() })
                }
            },
            "import" => {
                exactly(1)?;
                Action::Import { path: arg(0, "a path")? }
            }
            other => return Err(Error::UnknownCommand(other.to_string())),
        };
        Ok(Command { action, opts })
    }

    /// Canonical text of the command (inverse of `parse_tokens`).
    pub fn render(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        let mut out = match &self.action {
            Action::Check => "check".to_string(),
            Action::Normalize { algebra, element } => format!("normalize {algebra} {}", quote(element)),
            Action::Groebner { algebra } => format!("groebner {algebra}"),
            Action::Basis { algebra, degree } => format!("basis {algebra} {}", quote(degree)),
            Action::HomConstraints { source, target } => format!("hom-constraints {source} {target}"),
            Action::GradedPoints { target, degree } => format!("graded-points {target} {}", quote(degree)),
            Action::CoverCheck { algebra: Some(a), cover } => format!("cover-check {a} {cover}"),
            Action::CoverCheck { algebra: None, cover } => format!("cover-check {cover}"),
            Action::Glue { cover, parts } => {
                let ps: Vec<String> = parts.iter().map(|p| quote(p)).collect();
                format!("glue {cover} {}", ps.join(" "))
            }
            Action::PullbackCover { cover, morphism } => format!("pullback-cover {cover} {morphism}"),
            Action::Compose { outer, inner } => format!("compose {outer} {inner}"),
            Action::InverseCheck { space, stage, map, inverse } => {
                format!("inverse-check {space} {stage} {map} {inverse}")
            }
            Action::TeAut { space, stage } => format!("te-aut {space} {stage}"),
            Action::DerBasis { algebra } => format!("der-basis {algebra}"),
            Action::Bracket { left, right } => format!("bracket {left} {right}"),
            Action::XiCheck { space, stage } => format!("xi-check {space} {stage}"),
            Action::Export { path: Some(p) } => format!("export {}", quote(p)),
            Action::Export { path: None } => "export".to_string(),
            Action::Import { path } => format!("import {}", quote(path)),
        };
        if self.opts.cap != DEFAULT_CAP {
            out.push_str(&format!(" --cap {}", self.opts.cap));
        }
        if self.opts.q1 {
            out.push_str(" --q1");
        }
        out
    }
}

fn parse_degree_text(text: &str, rank: usize) -> Result<DegreeVector> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut comps = Vec::new();
    if cur.eat_sym('(') {
        loop {
            comps.push(cur.expect_int()?);
            if cur.eat_sym(')') {
                break;
            }
            cur.expect_sym(',')?;
        }
    } else {
        loop {
            comps.push(cur.expect_int()?);
            if cur.at_end() {
                break;
            }
            cur.expect_sym(',')?;
        }
    }
    if !cur.at_end() {
        return Err(cur.err("trailing input after degree"));
    }
    if comps.len() != rank {
        return Err(Error::DimensionMismatch { expected: rank, got: comps.len() });
    }
    Ok(DegreeVector(comps))
}

fn show(e: &Element, opts: &CmdOpts) -> Result<String> {
    if opts.q1 {
        Ok(e.specialize_q1()?.render())
    } else {
        Ok(e.render())
    }
}

/// Execute one command against a workspace; the report is deterministic.
pub fn run_command(ws: &Workspace, cmd: &Command) -> Result<String> {
    let opts = &cmd.opts;
    match &cmd.action {
        Action::Check => {
            let mut out = String::new();
            match &ws.deformation {
                Some(t) => out.push_str(&format!("theta: rank {}\n", t.rank())),
                None => out.push_str("theta: not declared\n"),
            }
            for (name, a) in &ws.algebras {
                a.validate()?;
                out.push_str(&format!(
                    "algebra {name}: ok ({} generators, {} relations)\n",
                    a.num_gens(),
                    a.num_relations()
                ));
            }
            for (name, m) in &ws.morphisms {
                m.morphism.validate()?;
                out.push_str(&format!(
                    "morphism {name}: ok ({} -> {})\n",
                    m.source_name, m.target_name
                ));
            }
            for (name, c) in &ws.covers {
                c.cover.validate()?;
                out.push_str(&format!(
                    "cover {name}: ok ({} charts on {})\n",
                    c.cover.len(),
                    c.base_name
                ));
            }
            for (name, d) in &ws.derivations {
                d.derivation.validate()?;
                out.push_str(&format!("derivation {name}: ok (on {})\n", d.algebra_name));
            }
            for c in &ws.commands {
                out.push_str(&format!("> {}\n", c.render()));
                out.push_str(&run_command(ws, c)?);
                if !out.ends_with('\n') {
                    out.push('\n');
                }
            }
            Ok(out)
        }
        Action::Normalize { algebra, element } => {
            let p = ws.algebra(algebra)?;
            let e = p.parse_element(element)?;
            let nf = p.reduce(&e)?;
            Ok(format!("{}\n", show(&nf, opts)?))
        }
        Action::Groebner { algebra } => {
            let p = ws.algebra(algebra)?;
            let gb = p.groebner();
            let mut out = format!(
                "groebner basis: {} elements (degrevlex, complete)\n",
                gb.len()
            );
            for (i, g) in gb.basis_elements().iter().enumerate() {
                out.push_str(&format!("  g{}: {}\n", i + 1, show(g, opts)?));
            }
            Ok(out)
        }
        Action::Basis { algebra, degree } => {
            let p = ws.algebra(algebra)?;
            let d = parse_degree_text(degree, p.deformation().rank())?;
            let monos = p.standard_monomials(&d, opts.cap);
            let mut out = format!(
                "standard monomials at degree {} (cap {}): dimension {}\n",
                d,
                opts.cap,
                monos.len()
            );
            for m in &monos {
                let e = p.monomial_element(m.clone(), crate::scalar::Scalar::one())?;
                out.push_str(&format!("  {}\n", e.render()));
            }
            Ok(out)
        }
        Action::HomConstraints { source, target } => {
            let s = ws.algebra(source)?;
            let t = ws.algebra(target)?;
            let sys = hom_constraints(s, t, opts.cap)?;
            let mut out = format!(
                "unknowns: {} (cap {}), constraints: {}, max degree {}\n",
                sys.unknowns.len(),
                opts.cap,
                sys.constraints.len(),
                sys.max_constraint_degree()
            );
            for (i, u) in sys.unknowns.iter().enumerate() {
                let mono = t
                    .monomial_element(u.monomial.clone(), crate::scalar::Scalar::one())?
                    .render();
                out.push_str(&format!(
                    "  c{}: {} -> {}\n",
                    i + 1,
                    s.generators()[u.generator].name,
                    mono
                ));
            }
            for c in &sys.constraints {
                let mono = t
                    .monomial_element(c.monomial.clone(), crate::scalar::Scalar::one())?
                    .render();
                out.push_str(&format!(
                    "  relation {} at {}: {} = 0\n",
                    c.relation + 1,
                    mono,
                    c.poly.render(&sys.unknowns)
                ));
            }
            Ok(out)
        }
        Action::GradedPoints { target, degree } => {
            let t = ws.algebra(target)?;
            let d = parse_degree_text(degree, t.deformation().rank())?;
            let pts = graded_points(t, &d, opts.cap);
            let mut out = format!(
                "graded points at degree {} (cap {}): {}\n",
                d,
                opts.cap,
                pts.len()
            );
            for p in &pts {
                out.push_str(&format!("  {}\n", p.render()));
            }
            Ok(out)
        }
        Action::CoverCheck { algebra, cover } => {
            let named = ws.cover(cover)?;
            if let Some(a) = algebra {
                let base = ws.algebra(a)?;
                if !crate::algebra::same_algebra(base, named.cover.base()) {
                    return Err(Error::Validation {
                        object: cover.clone(),
                        msg: format!("cover base is {}, not {}", named.base_name, a),
                    });
                }
            }
            named.cover.validate()?;
            let kernel = named.cover.restriction_kernel_dim(opts.cap)?;
            let mut out = format!("cover {cover}: ok ({} charts)\n", named.cover.len());
            out.push_str("partition of unity: ok\n");
            out.push_str(&format!(
                "separation kernel at cap {}: {}\n",
                opts.cap, kernel
            ));
            Ok(out)
        }
        Action::Glue { cover, parts } => {
            let named = ws.cover(cover)?;
            if parts.len() != named.cover.len() {
                return Err(Error::DimensionMismatch {
                    expected: named.cover.len(),
                    got: parts.len(),
                });
            }
            let elems = parts
                .iter()
                .enumerate()
                .map(|(i, text)| named.cover.chart(i)?.algebra.parse_element(text))
                .collect::<Result<Vec<_>>>()?;
            let glued = named.cover.glue(&elems, opts.cap)?;
            Ok(format!("glued (cap {}): {}\n", opts.cap, show(&glued, opts)?))
        }
        Action::PullbackCover { cover, morphism } => {
            let named = ws.cover(cover)?;
            let m = ws.morphism(morphism)?;
            let pulled = named.cover.pullback(&m.morphism)?;
            let mut out = format!(
                "pullback of {cover} along {morphism}: ok ({} charts)\n",
                pulled.len()
            );
            for (i, (s, a)) in pulled.elements().iter().zip(pulled.witnesses()).enumerate() {
                out.push_str(&format!(
                    "  s{}: {}  witness: {}\n",
                    i + 1,
                    show(s, opts)?,
                    show(a, opts)?
                ));
            }
            Ok(out)
        }
        Action::Compose { outer, inner } => {
            let f = ws.morphism(outer)?;
            let g = ws.morphism(inner)?;
            let c = Morphism::compose(&f.morphism, &g.morphism)?;
            let mut out = format!(
                "composite {} o {} : {} -> {}\n",
                outer, inner, g.source_name, f.target_name
            );
            for (gen, img) in c.source().generators().iter().zip(c.images()) {
                out.push_str(&format!("  {} -> {}\n", gen.name, show(img, opts)?));
            }
            Ok(out)
        }
        Action::InverseCheck { space, stage, map, inverse } => {
            let a = ws.algebra(space)?;
            let b = ws.algebra(stage)?;
            let ms = MappingStage::new(a, b)?;
            let g = ms.from_morphism(ws.morphism(map)?.morphism.clone())?;
            let gi = ms.from_morphism(ws.morphism(inverse)?.morphism.clone())?;
            let ok = ms.verify_inverse(&g, &gi)?;
            Ok(format!("inverse: {}\n", if ok { "yes" } else { "no" }))
        }
        Action::TeAut { space, stage } => {
            let a = ws.algebra(space)?;
            let b = ws.algebra(stage)?;
            let basis = te_aut_basis(a, b, opts.cap)?;
            let mut out = format!("tangent dimension {} (cap {})\n", basis.len(), opts.cap);
            for (i, v) in basis.iter().enumerate() {
                let imgs: Vec<String> = a
                    .generators()
                    .iter()
                    .zip(v.images())
                    .map(|(g, e)| Ok(format!("{} -> {}", g.name, show(e, opts)?)))
                    .collect::<Result<_>>()?;
                out.push_str(&format!("  v{}: {}\n", i + 1, imgs.join(", ")));
            }
            Ok(out)
        }
        Action::DerBasis { algebra } => {
            let p = ws.algebra(algebra)?;
            let basis = der_basis(p, opts.cap)?;
            let mut out = format!("der(A) dimension {} (cap {})\n", basis.len(), opts.cap);
            for (i, l) in basis.iter().enumerate() {
                out.push_str(&format!("  L{}: {}\n", i + 1, l));
            }
            Ok(out)
        }
        Action::Bracket { left, right } => {
            let l = ws.derivation(left)?;
            let r = ws.derivation(right)?;
            let b = der_bracket(&l.derivation, &r.derivation)?;
            Ok(format!("[{}, {}] = {}\n", left, right, b))
        }
        Action::XiCheck { space, stage } => {
            let a = ws.algebra(space)?;
            let b = ws.algebra(stage)?;
            let report = verify_xi_iso(a, b, opts.cap)?;
            Ok(format!("{report}"))
        }
        Action::Export { path } => {
            let v = workspace_to_json(ws)?;
            let text = serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(e.to_string()))?;
            match path {
                None => Ok(format!("{text}\n")),
                Some(p) => {
                    std::fs::write(p, text.as_bytes()).map_err(|e| Error::Validation {
                        object: p.clone(),
                        msg: e.to_string(),
                    })?;
                    Ok(format!("exported to {p}\n"))
                }
            }
        }
        Action::Import { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Validation {
                object: path.clone(),
                msg: e.to_string(),
            })?;
            let imported = parse_workspace(&text)?;
            imported.validate()?;
            let mut out = format!(
                "imported {path}: {} algebras, {} morphisms, {} covers, {} derivations\n",
                imported.algebras.len(),
                imported.morphisms.len(),
                imported.covers.len(),
                imported.derivations.len()
            );
            out.push_str(&serialize_workspace(&imported)?);
            Ok(out)
        }
    }
}
