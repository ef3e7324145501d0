//! System files: a line-oriented text format and an equivalent JSON form.
//!
//! Text form, statements terminated by `;`, `#` starts a comment:
//!
//! ```text
//! system shift;
//! description "translation on the line";
//! var x;
//! x -> x + 1;
//! expect adim = 0;
//! ```
//!
//! JSON form: `{"name", "description"?, "variables": [..], "map": [..], "expect"?: {..}}`
//! with `map` listed in variable order.

use std::collections::BTreeMap;
use std::path::Path;

use ratdyn_core::dynsys::DynamicalSystem;
use ratdyn_core::exactalg::Vars;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, ErrorCode};
use crate::parser::{is_identifier, parse_expression};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemFile {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub variables: Vec<String>,
    /// One expression per variable, in variable order.
    pub map: Vec<String>,
    /// Regression expectations, in file order.
    pub expect: Vec<(String, String)>,
    /// Where each map expression starts, for error positions. `(1, 1)` for JSON input.
    #[serde(skip)]
    pub map_pos: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSystem {
    name: String,
    #[serde(default)]
    description: Option<String>,
    variables: Vec<String>,
    map: Vec<String>,
    #[serde(default)]
    expect: BTreeMap<String, serde_json::Value>,
}

struct Statement {
    text: String,
    line: usize,
    column: usize,
}

/// Splits on `;` outside string literals, dropping comments. Each statement keeps
/// the position of its first non-blank character.
fn statements(src: &str) -> CliResult<Vec<Statement>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start: Option<(usize, usize)> = None;
    let (mut line, mut col) = (1usize, 1usize);
    let mut in_str = false;
    let mut in_comment = false;
    let mut escaped = false;
    let mut str_start = (0, 0);
    for c in src.chars() {
        let here = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
        if in_comment {
            if c == '\n' {
                in_comment = false;
                if start.is_some() {
                    cur.push('\n');
                }
            }
            continue;
        }
        if in_str {
            cur.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_str = false;
            } else if c == '\n' {
                return Err(CliError::at(
                    ErrorCode::SystemFormat,
                    "unterminated string",
                    str_start.0,
                    str_start.1,
                ));
            }
            continue;
        }
        match c {
            '#' => in_comment = true,
            ';' => {
                match start.take() {
                    Some((l, c)) => out.push(Statement {
                        text: std::mem::take(&mut cur),
                        line: l,
                        column: c,
                    }),
                    None => return Err(CliError::at(ErrorCode::SystemFormat, "empty statement", here.0, here.1)),
                }
                cur.clear();
            }
            _ => {
                if start.is_none() {
                    if c.is_whitespace() {
                        continue;
                    }
                    start = Some(here);
                }
                if c == '"' {
                    in_str = true;
                    str_start = here;
                }
                cur.push(c);
            }
        }
    }
    if in_str {
        return Err(CliError::at(
            ErrorCode::SystemFormat,
            "unterminated string",
            str_start.0,
            str_start.1,
        ));
    }
    if let Some((l, c)) = start {
        return Err(CliError::at(
            ErrorCode::SystemFormat,
            "missing ';' after statement",
            l,
            c,
        ));
    }
    Ok(out)
}

fn unquote(s: &str, line: usize, column: usize) -> CliResult<String> {
    let s = s.trim();
    let inner = s
        .strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .ok_or_else(|| CliError::at(ErrorCode::SystemFormat, "expected a quoted string", line, column))?;
    let mut out = String::new();
    let mut it = inner.chars();
    while let Some(c) = it.next() {
        if c == '\\' {
            match it.next() {
                Some('n') => out.push('\n'),
                Some(e @ ('"' | '\\')) => out.push(e),
                _ => {
                    return Err(CliError::at(
                        ErrorCode::SystemFormat,
                        "bad escape in string",
                        line,
                        column,
                    ))
                }
            }
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

/// Position of byte offset `off` inside a statement that starts at `(line, column)`.
fn offset_pos(text: &str, off: usize, line: usize, column: usize) -> (usize, usize) {
    let before = &text[..off];
    let nl = before.matches('\n').count();
    if nl == 0 {
        (line, column + before.chars().count())
    } else {
        let tail = before.rsplit('\n').next().unwrap_or("");
        (line + nl, 1 + tail.chars().count())
    }
}

pub fn parse_text(src: &str, default_name: &str) -> CliResult<SystemFile> {
    let mut name = None;
    let mut description = None;
    let mut variables: Option<Vec<String>> = None;
    let mut assigns: Vec<(String, String, (usize, usize))> = Vec::new();
    let mut expect = Vec::new();
    for st in statements(src)? {
        let (l, c) = (st.line, st.column);
        let text = st.text.trim_end();
        let (head, rest) = match text.find(char::is_whitespace) {
            Some(i) => (&text[..i], &text[i..]),
            None => (text, ""),
        };
        let rest = rest.trim();
        match head {
            "system" => {
                if !is_identifier(rest) {
                    return Err(CliError::at(
                        ErrorCode::SystemFormat,
                        "system name must be an identifier",
                        l,
                        c,
                    ));
                }
                name = Some(rest.to_string());
            }
            "description" => description = Some(unquote(rest, l, c)?),
            "var" => {
                if variables.is_some() {
                    return Err(CliError::at(ErrorCode::SystemFormat, "variables declared twice", l, c));
                }
                let vs: Vec<String> = rest.split(',').map(|v| v.trim().to_string()).collect();
                variables = Some(vs);
            }
            "expect" => {
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| CliError::at(ErrorCode::SystemFormat, "expected 'expect KEY = VALUE'", l, c))?;
                let v = v.trim();
                let v = if v.starts_with('"') {
                    unquote(v, l, c)?
                } else {
                    v.to_string()
                };
                expect.push((k.trim().to_string(), v));
            }
            _ => {
                let Some(arrow) = text.find("->") else {
                    return Err(CliError::at(
                        ErrorCode::SystemFormat,
                        format!("unknown statement '{head}'"),
                        l,
                        c,
                    ));
                };
                let target = text[..arrow].trim();
                let expr_text = &text[arrow + 2..];
                let lead = expr_text.len() - expr_text.trim_start().len();
                let pos = offset_pos(text, arrow + 2 + lead, l, c);
                assigns.push((target.to_string(), expr_text.trim().to_string(), pos));
            }
        }
    }
    let variables = variables.ok_or_else(|| CliError::new(ErrorCode::SystemFormat, "missing 'var' declaration"))?;
    let mut map = vec![None; variables.len()];
    for (target, expr, pos) in assigns {
        let Some(i) = variables.iter().position(|v| *v == target) else {
            return Err(CliError::at(
                ErrorCode::SystemFormat,
                format!("assignment to undeclared variable '{target}'"),
                pos.0,
                pos.1,
            ));
        };
        if map[i].is_some() {
            return Err(CliError::at(
                ErrorCode::SystemFormat,
                format!("'{target}' assigned twice"),
                pos.0,
                pos.1,
            ));
        }
        map[i] = Some((expr, pos));
    }
    let mut exprs = Vec::new();
    let mut map_pos = Vec::new();
    for (v, m) in variables.iter().zip(map) {
        let (e, p) = m.ok_or_else(|| CliError::new(ErrorCode::SystemFormat, format!("no assignment for '{v}'")))?;
        exprs.push(e);
        map_pos.push(p);
    }
    let out = SystemFile {
        name: name.unwrap_or_else(|| default_name.to_string()),
        description,
        variables,
        map: exprs,
        expect,
        map_pos,
    };
    check_variables(&out)?;
    Ok(out)
}

pub fn parse_json(src: &str) -> CliResult<SystemFile> {
    let j: JsonSystem = serde_json::from_str(src)
        .map_err(|e| CliError::at(ErrorCode::SystemFormat, e.to_string(), e.line(), e.column()))?;
    if j.map.len() != j.variables.len() {
        return Err(CliError::new(
            ErrorCode::SystemFormat,
            "map must have one expression per variable",
        ));
    }
    let expect = j
        .expect
        .into_iter()
        .map(|(k, v)| {
            let v = match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            (k, v)
        })
        .collect();
    let out = SystemFile {
        name: j.name,
        description: j.description,
        map_pos: vec![(1, 1); j.map.len()],
        variables: j.variables,
        map: j.map,
        expect,
    };
    check_variables(&out)?;
    Ok(out)
}

fn check_variables(f: &SystemFile) -> CliResult<()> {
    if f.variables.is_empty() {
        return Err(CliError::new(ErrorCode::SystemFormat, "no variables declared"));
    }
    for (i, v) in f.variables.iter().enumerate() {
        if !is_identifier(v) {
            return Err(CliError::new(
                ErrorCode::SystemFormat,
                format!("'{v}' is not a valid identifier"),
            ));
        }
        if f.variables[..i].contains(v) {
            return Err(CliError::new(
                ErrorCode::SystemFormat,
                format!("variable '{v}' declared twice"),
            ));
        }
    }
    Ok(())
}

/// Reads either format; JSON is recognized by a leading `{`.
pub fn parse_system_source(src: &str, default_name: &str) -> CliResult<SystemFile> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src, default_name)
    }
}

pub fn load_system_file(path: &Path) -> CliResult<SystemFile> {
    let src =
        std::fs::read_to_string(path).map_err(|e| CliError::new(ErrorCode::Io, format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("system");
    parse_system_source(&src, stem)
}

impl SystemFile {
    pub fn vars(&self) -> Vars {
        Vars::new(self.variables.iter().map(String::as_str))
    }

    pub fn to_system(&self) -> CliResult<DynamicalSystem> {
        let vars = self.vars();
        let coords = self
            .map
            .iter()
            .zip(&self.map_pos)
            .map(|(e, &(l, c))| parse_expression(e, &vars).map_err(|err| err.relocate(l, c)))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(DynamicalSystem::new(vars, coords)?)
    }

    pub fn expectation(&self, key: &str) -> Option<&str> {
        self.expect.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIFT: &str = "# a comment\nsystem shift;\ndescription \"x; then \\\"y\\\"\";\nvar x, y;\ny -> y + 1;  x -> x +\n   1;\nexpect adim = 0;\n";

    #[test]
    fn text_format() {
        let f = parse_text(SHIFT, "fallback").unwrap();
        assert_eq!(f.name, "shift");
        assert_eq!(f.description.as_deref(), Some("x; then \"y\""));
        assert_eq!(f.variables, ["x", "y"]);
        assert_eq!(f.map, ["x +\n   1", "y + 1"]);
        assert_eq!(f.expectation("adim"), Some("0"));
        assert_eq!(f.to_system().unwrap().coords()[0].to_string(), "x + 1");
    }

    #[test]
    fn json_format_matches_text() {
        let j = r#"{"name": "shift", "variables": ["x", "y"], "map": ["x + 1", "y + 1"], "expect": {"adim": 0}}"#;
        let f = parse_json(j).unwrap();
        assert_eq!(f.expectation("adim"), Some("0"));
        let t = parse_text(SHIFT, "s").unwrap();
        assert_eq!(f.to_system().unwrap(), t.to_system().unwrap());
    }

    #[test]
    fn errors_point_into_the_file() {
        let e = parse_text("var x;\nx -> x +\n  z;", "s")
            .unwrap()
            .to_system()
            .unwrap_err();
        assert_eq!(
            (e.code, e.line, e.column),
            (ErrorCode::UndeclaredIdentifier, Some(3), Some(3))
        );
        let e = parse_text("var x;\nx ->  x / (x-x);", "s")
            .unwrap()
            .to_system()
            .unwrap_err();
        assert_eq!(
            (e.code, e.line, e.column),
            (ErrorCode::DivisionByZero, Some(2), Some(9))
        );
        let e = parse_text("var x, x;\nx -> x;", "s").unwrap_err();
        assert_eq!(e.code, ErrorCode::SystemFormat);
        let e = parse_text("var x;\nx -> x", "s").unwrap_err();
        assert_eq!((e.line, e.column), (Some(2), Some(1)));
        let e = parse_text("var x, y;\nx -> y;", "s").unwrap_err();
        assert!(e.message.contains("'y'"));
        assert!(parse_text("var 1x;\n1x -> 1;", "s").is_err());
    }
}
