//! Text formats: ditalgebras, path elements, modules and morphisms.

use crate::bigraph::{ArrowKind, BigraphError, Component, Ditalgebra, Path, PathElem, Sym};
use crate::linalg::Mat;
use crate::scalars::{Field, Poly, RationalAlgebra, Scalar};
use std::fmt::Write;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> BigraphError {
    BigraphError::Parse { line, col, msg: msg.into() }
}

fn sym_to_string(d: &Ditalgebra, s: &Sym) -> String {
    match s {
        Sym::Arrow(a) => d.arrow(*a).name.clone(),
        Sym::X(p) => format!("x@{}", p + 1),
    }
}

pub fn path_to_string(d: &Ditalgebra, p: &Path) -> String {
    if p.syms.is_empty() {
        return format!("e{}", p.start + 1);
    }
    p.syms.iter().rev().map(|s| sym_to_string(d, s)).collect::<Vec<_>>().join("*")
}

pub fn path_elem_to_string(d: &Ditalgebra, e: &PathElem) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (p, c)) in e.terms.iter().enumerate() {
        let word = path_to_string(d, p);
        let (neg, mag) = if c.is_negative_literal() { (true, c.neg()) } else { (false, c.clone()) };
        let body = if mag.is_one() { word } else { format!("{mag}*{word}") };
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => write!(out, "-{body}").unwrap(),
            (_, false) => write!(out, " + {body}").unwrap(),
            (_, true) => write!(out, " - {body}").unwrap(),
        }
    }
    out
}

/// Splits at top-level `+`/`-` (a sign directly after `*` or `/` belongs to the number).
fn split_terms(s: &str) -> Vec<(bool, usize, String)> {
    let mut out = vec![];
    let mut cur = String::new();
    let mut neg = false;
    let mut start = 0;
    let mut prev = ' ';
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && !matches!(prev, '*' | '/' | '^') {
            if !cur.trim().is_empty() {
                out.push((neg, start, cur.trim().to_string()));
            }
            cur.clear();
            neg = ch == '-';
            start = i + 1;
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    if !cur.trim().is_empty() || out.is_empty() {
        out.push((neg, start, cur.trim().to_string()));
    }
    out
}

pub fn parse_path_elem(d: &Ditalgebra, s: &str, line: usize) -> Result<PathElem, BigraphError> {
    let field = d.field;
    let mut out = PathElem::zero(field);
    if s.trim() == "0" {
        return Ok(out);
    }
    for (neg, col, term) in split_terms(s) {
        if term.is_empty() {
            return Err(perr(line, col + 1, "empty term"));
        }
        let mut coef = if neg { field.int(-1) } else { field.one() };
        let mut syms: Vec<Sym> = vec![];
        let mut idem: Option<usize> = None;
        for f in term.split('*').map(str::trim) {
            if f.starts_with(|c: char| c.is_ascii_digit() || c == '(') {
                let v = field.parse_scalar(f.trim_matches(|c| c == '(' || c == ')')).map_err(|e| perr(line, col + 1, e.to_string()))?;
                coef = coef.mul(&v);
            } else if let Some(p) = f.strip_prefix("x@") {
                let p: usize = p.parse().map_err(|_| perr(line, col + 1, format!("bad point in {f}")))?;
                if p == 0 || p > d.points() || !d.base.is_rational(p - 1) {
                    return Err(perr(line, col + 1, format!("{f}: not a rational point")));
                }
                syms.push(Sym::X(p - 1));
            } else if f.len() > 1 && f.starts_with('e') && f[1..].chars().all(|c| c.is_ascii_digit()) {
                let p: usize = f[1..].parse().unwrap();
                if p == 0 || p > d.points() {
                    return Err(perr(line, col + 1, format!("point {p} out of range")));
                }
                if idem.is_some_and(|q| q != p - 1) {
                    coef = field.zero();
                }
                idem = Some(p - 1);
            } else if let Some(a) = d.bigraph.arrow_index(f) {
                syms.push(Sym::Arrow(a));
            } else {
                return Err(perr(line, col + 1, format!("unknown symbol '{f}'")));
            }
        }
        // written left to right as composition; the rightmost acts first
        syms.reverse();
        let mut path: Option<Path> = None;
        for s in syms {
            let step = match s {
                Sym::Arrow(a) => Path::arrow(&d.bigraph, a),
                Sym::X(p) => Path::x(p),
            };
            path = Some(match path {
                None => step,
                Some(p) => match step.after(&p) {
                    Some(q) => q,
                    None => return Err(perr(line, col + 1, format!("non-composable path in '{term}'"))),
                },
            });
        }
        let path = match (path, idem) {
            (None, Some(p)) => Path::trivial(p),
            (None, None) => return Err(perr(line, col + 1, "a term needs a path")),
            (Some(p), None) => p,
            (Some(p), Some(q)) => {
                if p.start != q && p.end != q {
                    coef = field.zero();
                }
                p
            }
        };
        out.add_term(path, coef);
    }
    Ok(out)
}

fn list_items(s: &str) -> Option<&str> {
    let s = s.trim();
    s.strip_prefix('[')?.strip_suffix(']')
}

pub fn ditalgebra_to_string(d: &Ditalgebra) -> String {
    let mut out = String::new();
    writeln!(out, "field {}", d.field).unwrap();
    writeln!(out, "points {}", d.points()).unwrap();
    for (p, c) in d.base.components.iter().enumerate() {
        if let Component::Rational(r) = c {
            writeln!(out, "rational {} {}", p + 1, r.g).unwrap();
        }
    }
    for a in &d.bigraph.arrows {
        let kind = if a.kind == ArrowKind::Full { "full" } else { "dashed" };
        writeln!(out, "{kind} {} {} {}", a.name, a.source + 1, a.target + 1).unwrap();
    }
    for (i, e) in d.delta.iter().enumerate() {
        if !e.is_zero() {
            writeln!(out, "delta {} = {}", d.arrow(i).name, path_elem_to_string(d, e)).unwrap();
        }
    }
    if !d.ideal.is_empty() {
        let gens: Vec<String> = d.ideal.iter().map(|g| path_elem_to_string(d, g)).collect();
        writeln!(out, "ideal = [{}]", gens.join(", ")).unwrap();
    }
    if !d.absorbed.is_empty() {
        let names: Vec<&str> = d.absorbed.iter().map(|&a| d.arrow(a).name.as_str()).collect();
        writeln!(out, "absorbed = [{}]", names.join(", ")).unwrap();
    }
    if let Some(f) = &d.filtration {
        let stages: Vec<String> = f.iter().map(|st| st.iter().map(|&a| d.arrow(a).name.clone()).collect::<Vec<_>>().join(", ")).collect();
        writeln!(out, "triangular-filtration = [{}]", stages.join("; ")).unwrap();
    }
    out
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    let head_ok = cs.next().is_some_and(|c| c.is_ascii_alphabetic());
    let is_idem = s.len() > 1 && s.starts_with('e') && s[1..].chars().all(|c| c.is_ascii_digit());
    head_ok && !is_idem && s != "x" && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub fn parse_ditalgebra(src: &str) -> Result<Ditalgebra, BigraphError> {
    let mut field: Option<Field> = None;
    let mut d: Option<Ditalgebra> = None;
    let mut pending: Vec<(usize, String)> = vec![];
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match kw {
            "field" => {
                field = Some(rest.parse().map_err(|e: crate::scalars::ScalarError| perr(line, 7, e.to_string()))?);
            }
            "points" => {
                let n: usize = rest.parse().map_err(|_| perr(line, 8, "expected a point count"))?;
                d = Some(Ditalgebra::new(field.unwrap_or(Field::Rationals), n));
            }
            "rational" | "full" | "dashed" => {
                let dd = d.as_mut().ok_or_else(|| perr(line, 1, "'points' must come first"))?;
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let point = |s: &str, col: usize| -> Result<usize, BigraphError> {
                    match s.parse::<usize>() {
                        Ok(p) if p >= 1 && p <= dd.points() => Ok(p - 1),
                        _ => Err(perr(line, col, format!("bad point '{s}'"))),
                    }
                };
                if kw == "rational" {
                    if parts.len() < 2 {
                        return Err(perr(line, 1, "usage: rational <point> <poly>"));
                    }
                    let p = point(parts[0], 10)?;
                    let gtext = rest[parts[0].len()..].trim();
                    let g = Poly::parse(dd.field, gtext).map_err(|e| perr(line, 12, e.to_string()))?;
                    if g.is_zero() {
                        return Err(perr(line, 12, "localizer must be nonzero"));
                    }
                    dd.base.components[p] = Component::Rational(RationalAlgebra::new(g.monic()));
                } else {
                    if parts.len() != 3 {
                        return Err(perr(line, 1, format!("usage: {kw} <id> <source> <target>")));
                    }
                    if !valid_name(parts[0]) {
                        return Err(perr(line, kw.len() + 2, format!("invalid arrow id '{}'", parts[0])));
                    }
                    if dd.bigraph.arrow_index(parts[0]).is_some() {
                        return Err(perr(line, kw.len() + 2, format!("duplicate arrow id '{}'", parts[0])));
                    }
                    let s = point(parts[1], 1)?;
                    let t = point(parts[2], 1)?;
                    let kind = if kw == "full" { ArrowKind::Full } else { ArrowKind::Dashed };
                    dd.add_arrow(parts[0], kind, s, t);
                }
            }
            "delta" | "ideal" | "absorbed" | "triangular-filtration" => pending.push((line, text.to_string())),
            _ => return Err(perr(line, 1, format!("unknown directive '{kw}'"))),
        }
    }
    let mut d = d.ok_or_else(|| perr(1, 1, "missing 'points' line"))?;
    if let Some(f) = field {
        d.field = f;
    }
    for (line, text) in pending {
        let (lhs, rhs) = text.split_once('=').ok_or_else(|| perr(line, 1, "expected '='"))?;
        let col = lhs.len() + 2;
        let lhs = lhs.trim();
        if let Some(name) = lhs.strip_prefix("delta") {
            let name = name.trim();
            let a = d.bigraph.arrow_index(name).ok_or_else(|| perr(line, 7, format!("unknown arrow '{name}'")))?;
            d.delta[a] = parse_path_elem(&d, rhs, line)?;
            continue;
        }
        let items = list_items(rhs).ok_or_else(|| perr(line, col, "expected a bracketed list"))?;
        match lhs {
            "ideal" => {
                for g in items.split(',').filter(|g| !g.trim().is_empty()) {
                    d.ideal.push(parse_path_elem(&d, g, line)?);
                }
            }
            "absorbed" => {
                for n in items.split(',').map(str::trim).filter(|n| !n.is_empty()) {
                    let a = d.bigraph.arrow_index(n).ok_or_else(|| perr(line, col, format!("unknown arrow '{n}'")))?;
                    d.absorbed.insert(a);
                }
            }
            _ => {
                let mut stages = vec![];
                for st in items.split(';') {
                    let mut stage = vec![];
                    for n in st.split(',').map(str::trim).filter(|n| !n.is_empty()) {
                        stage.push(d.bigraph.arrow_index(n).ok_or_else(|| perr(line, col, format!("unknown arrow '{n}'")))?);
                    }
                    stages.push(stage);
                }
                d.filtration = Some(stages);
            }
        }
    }
    d.validate(false)?;
    Ok(d)
}

pub fn parse_scalar_at(field: Field, s: &str, line: usize) -> Result<Scalar, BigraphError> {
    field.parse_scalar(s.trim()).map_err(|e| perr(line, 1, e.to_string()))
}

fn at_line(e: BigraphError, line: usize) -> BigraphError {
    match e {
        BigraphError::Parse { col, msg, .. } => BigraphError::Parse { line, col, msg },
        other => other,
    }
}

/// Lines between `module` and `end`, with their line numbers.
fn blocks(src: &str) -> Result<Vec<Vec<(usize, String)>>, BigraphError> {
    let mut out = vec![];
    let mut cur: Option<Vec<(usize, String)>> = None;
    for (ln, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        match (text, cur.as_mut()) {
            ("module", None) => cur = Some(vec![]),
            ("module", Some(_)) => return Err(perr(ln + 1, 1, "nested 'module'")),
            ("end", Some(_)) => out.push(cur.take().unwrap()),
            ("end", None) => return Err(perr(ln + 1, 1, "'end' without 'module'")),
            (_, Some(b)) => b.push((ln + 1, text.to_string())),
            (_, None) => return Err(perr(ln + 1, 1, "expected 'module'")),
        }
    }
    if cur.is_some() {
        return Err(perr(src.lines().count(), 1, "missing 'end'"));
    }
    Ok(out)
}

fn usizes(s: &str, line: usize) -> Result<Vec<usize>, BigraphError> {
    s.split_whitespace().map(|t| t.parse().map_err(|_| perr(line, 1, format!("expected a number, found '{t}'")))).collect()
}

/// Module over a ditalgebra: `dims`, one `arrow <id> = <mat>` per nonzero full arrow,
/// `x <point> = <mat>` at rational points.
pub fn module_to_string(d: &Ditalgebra, m: &crate::ditmod::Module) -> String {
    let mut out = String::from("module\n");
    writeln!(out, "dims {}", m.dims.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).unwrap();
    for (a, mat) in &m.arrows {
        if !mat.is_zero() {
            writeln!(out, "arrow {} = {}", d.arrow(*a).name, mat_to_string(mat)).unwrap();
        }
    }
    for (p, mat) in &m.xs {
        if !mat.is_zero() {
            writeln!(out, "x {} = {}", p + 1, mat_to_string(mat)).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

pub fn parse_modules(d: &Ditalgebra, src: &str) -> Result<Vec<crate::ditmod::Module>, BigraphError> {
    let field = d.field;
    let mut out = vec![];
    for b in blocks(src)? {
        let Some((l0, first)) = b.first() else {
            return Err(perr(0, 1, "empty module block"));
        };
        let dims = match first.strip_prefix("dims") {
            Some(r) => usizes(r, *l0)?,
            None => return Err(perr(*l0, 1, "expected 'dims'")),
        };
        if dims.len() != d.points() {
            return Err(perr(*l0, 6, format!("expected {} dimensions", d.points())));
        }
        let mut m = crate::ditmod::Module::with_dims(d, &field, &dims);
        for (line, text) in &b[1..] {
            let (lhs, rhs) = text.split_once('=').ok_or_else(|| perr(*line, 1, "expected '='"))?;
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            match parts.as_slice() {
                ["arrow", name] => {
                    let a = d.bigraph.arrow_index(name).filter(|&a| d.arrow(a).kind == ArrowKind::Full).ok_or_else(|| perr(*line, 7, format!("unknown full arrow '{name}'")))?;
                    let ar = d.arrow(a);
                    m.arrows.insert(a, parse_mat(field, dims[ar.target], dims[ar.source], rhs).map_err(|e| at_line(e, *line))?);
                }
                ["x", p] => {
                    let p = p.parse::<usize>().ok().filter(|&p| p >= 1 && p <= d.points() && d.base.is_rational(p - 1)).ok_or_else(|| perr(*line, 3, format!("'{p}' is not a rational point")))?;
                    m.xs.insert(p - 1, parse_mat(field, dims[p - 1], dims[p - 1], rhs).map_err(|e| at_line(e, *line))?);
                }
                _ => return Err(perr(*line, 1, format!("unknown directive '{lhs}'"))),
            }
        }
        m.validate(d).map_err(|e| perr(*l0, 1, e.to_string()))?;
        out.push(m);
    }
    Ok(out)
}

fn vec_to_string(v: &[Scalar]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_vec(field: Field, n: usize, s: &str, line: usize) -> Result<Vec<Scalar>, BigraphError> {
    let m = parse_mat(field, 1, n, s).map_err(|e| at_line(e, line))?;
    Ok(m.row(0))
}

/// Structure constants: `dim`, `one <vec>`, `mul i j = <vec>` for nonzero products b_i·b_j (1-based).
pub fn fdalgebra_to_string(a: &crate::fdalg::FdAlgebra) -> String {
    let mut out = String::new();
    writeln!(out, "field {}", a.field).unwrap();
    writeln!(out, "dim {}", a.dim).unwrap();
    if a.labels.len() == a.dim && a.dim > 0 {
        writeln!(out, "labels {}", a.labels.join(" ")).unwrap();
    }
    writeln!(out, "one {}", vec_to_string(&a.one)).unwrap();
    for (i, row) in a.table.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if v.iter().any(|c| !c.is_zero()) {
                writeln!(out, "mul {} {} = {}", i + 1, j + 1, vec_to_string(v)).unwrap();
            }
        }
    }
    out
}

pub fn parse_fdalgebra(src: &str) -> Result<crate::fdalg::FdAlgebra, BigraphError> {
    let mut field = Field::Rationals;
    let mut dim: Option<usize> = None;
    let mut labels = vec![];
    let mut one = None;
    let mut table: Vec<Vec<Vec<Scalar>>> = vec![];
    for (ln, raw) in src.lines().enumerate() {
        let line = ln + 1;
        let text = raw.split('#').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        let need = |dim: Option<usize>| dim.ok_or_else(|| perr(line, 1, "'dim' must come first"));
        match kw {
            "field" => field = rest.parse().map_err(|e: crate::scalars::ScalarError| perr(line, 7, e.to_string()))?,
            "dim" => {
                let n: usize = rest.parse().map_err(|_| perr(line, 5, "expected a dimension"))?;
                dim = Some(n);
                table = vec![vec![vec![field.zero(); n]; n]; n];
            }
            "labels" => labels = rest.split_whitespace().map(String::from).collect(),
            "one" => one = Some(parse_vec(field, need(dim)?, rest, line)?),
            "mul" => {
                let n = need(dim)?;
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| perr(line, 1, "expected '='"))?;
                let ij = usizes(lhs, line)?;
                match ij.as_slice() {
                    [i, j] if (1..=n).contains(i) && (1..=n).contains(j) => table[i - 1][j - 1] = parse_vec(field, n, rhs, line)?,
                    _ => return Err(perr(line, 5, "expected two basis indices")),
                }
            }
            _ => return Err(perr(line, 1, format!("unknown directive '{kw}'"))),
        }
    }
    let n = dim.ok_or_else(|| perr(1, 1, "missing 'dim'"))?;
    let one = one.ok_or_else(|| perr(1, 1, "missing 'one'"))?;
    let mut a = crate::fdalg::FdAlgebra::from_table(field, table, one);
    if labels.len() == n {
        a.labels = labels;
    }
    if !a.validate() {
        return Err(perr(1, 1, "structure constants do not define a unital associative algebra"));
    }
    Ok(a)
}

/// `dim`, then `act i = <mat>` per basis element with nonzero action (1-based).
pub fn fdmodule_to_string(m: &crate::fdalg::FdModule) -> String {
    let mut out = String::from("module\n");
    writeln!(out, "dim {}", m.dim).unwrap();
    for (i, a) in m.act.iter().enumerate() {
        if !a.is_zero() {
            writeln!(out, "act {} = {}", i + 1, mat_to_string(a)).unwrap();
        }
    }
    out.push_str("end\n");
    out
}

pub fn parse_fdmodules(alg: &crate::fdalg::FdAlgebra, src: &str) -> Result<Vec<crate::fdalg::FdModule>, BigraphError> {
    let field = alg.field;
    let mut out = vec![];
    for b in blocks(src)? {
        let Some((l0, first)) = b.first() else {
            return Err(perr(0, 1, "empty module block"));
        };
        let n = match first.strip_prefix("dim").map(|r| usizes(r, *l0)) {
            Some(Ok(v)) if v.len() == 1 => v[0],
            _ => return Err(perr(*l0, 1, "expected 'dim <n>'")),
        };
        let mut act = vec![Mat::zeros(&field, n, n); alg.dim];
        for (line, text) in &b[1..] {
            let (lhs, rhs) = text.split_once('=').ok_or_else(|| perr(*line, 1, "expected '='"))?;
            let idx = lhs.trim().strip_prefix("act").map(|r| usizes(r, *line));
            match idx {
                Some(Ok(v)) if v.len() == 1 && (1..=alg.dim).contains(&v[0]) => act[v[0] - 1] = parse_mat(field, n, n, rhs).map_err(|e| at_line(e, *line))?,
                _ => return Err(perr(*line, 1, "expected 'act <i> = <matrix>'")),
            }
        }
        let m = crate::fdalg::FdModule { field, dim: n, act };
        if !m.is_module_over(alg) {
            return Err(perr(*l0, 1, "matrices do not define a module"));
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::fixtures;

    #[test]
    fn round_trip_fixtures() {
        for f in [Field::Rationals, Field::Prime(2)] {
            for d in [fixtures::ss(f), fixtures::a2(f), fixtures::reg(f), fixtures::kron(f)] {
                let t = d.canonical_text();
                let back = parse_ditalgebra(&t).unwrap();
                assert_eq!(back, d);
                assert_eq!(back.canonical_text(), t);
            }
        }
    }

    #[test]
    fn parse_with_extras() {
        let src = "field q\npoints 3\nrational 3 x^2 - 1\nfull a 1 2\nfull b 2 3\ndashed v 1 3\nideal = [b*a - 2*v*e1]\n";
        assert!(parse_ditalgebra(src).is_err(), "ideal generators of degree 1 are rejected");
        let src = "field q\npoints 3\nrational 3 x^2 - 1\nfull a 1 2\nfull b 2 3\ndashed v 1 3\nideal = [x@3*b*a - 1/2*b*a]\ntriangular-filtration = [a, b; v]\n";
        let d = parse_ditalgebra(src).unwrap();
        assert_eq!(d.elem_to_string(&d.ideal[0]), "-1/2*b*a + x@3*b*a");
        assert_eq!(parse_ditalgebra(&d.canonical_text()).unwrap(), d);
    }

    #[test]
    fn malformed_delta_reports_position() {
        let src = "field q\npoints 2\nfull a 1 2\ndashed v 1 2\ndelta a = w\n";
        match parse_ditalgebra(src) {
            Err(BigraphError::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}

/// Row-major matrix text: entries separated by `,`, rows by `;`.
pub fn mat_to_string(m: &Mat<Scalar>) -> String {
    (0..m.rows).map(|i| m.row(i).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";")
}

pub fn parse_mat(field: Field, rows: usize, cols: usize, s: &str) -> Result<Mat<Scalar>, BigraphError> {
    let s = s.trim();
    if rows == 0 || cols == 0 {
        return Ok(Mat::zeros(&field, rows, cols));
    }
    let rs: Vec<&str> = s.split(';').collect();
    if rs.len() != rows {
        return Err(perr(0, 0, format!("expected {rows} rows, found {}", rs.len())));
    }
    let mut out = vec![];
    for r in rs {
        let cs: Vec<&str> = r.split(',').collect();
        if cs.len() != cols {
            return Err(perr(0, 0, format!("expected {cols} columns, found {}", cs.len())));
        }
        out.push(cs.iter().map(|c| parse_scalar_at(field, c.trim(), 0)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(Mat::from_rows(&field, out, cols))
}

#[cfg(test)]
mod text_tests {
    use super::*;
    use crate::bigraph::fixtures;

    #[test]
    fn module_and_algebra_round_trips() {
        use crate::ditmod::enumerate_indecomposables;
        use crate::fdalg::FdAlgebra;
        let d = fixtures::kron(Field::Prime(3));
        let mods = enumerate_indecomposables(&d, 3, 1 << 20).unwrap();
        let text: String = mods.iter().map(|m| module_to_string(&d, m)).collect();
        assert_eq!(parse_modules(&d, &text).unwrap(), mods);
        assert!(parse_modules(&d, "module\ndims 1 1\narrow a = 1,1\nend\n").is_err());
        assert!(parse_modules(&d, "module\ndims 1 1\n").is_err());
        let t = FdAlgebra::truncated_polynomials(Field::Rationals, 3);
        let back = parse_fdalgebra(&fdalgebra_to_string(&t)).unwrap();
        assert_eq!((back.dim, &back.table, &back.one), (t.dim, &t.table, &t.one));
        let reg = t.regular_module();
        let ms = parse_fdmodules(&t, &fdmodule_to_string(&reg)).unwrap();
        assert_eq!(ms[0].act, reg.act);
        assert!(parse_fdalgebra("dim 1\none 0\nmul 1 1 = 1\n").is_err());
        assert!(parse_fdmodules(&t, "module\ndim 1\nact 2 = 1\nend\n").is_err());
    }
}
