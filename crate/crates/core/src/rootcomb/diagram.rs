use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{marks, MarkedSet, ParabolicType, Root};
use crate::error::{Error, Result};

const BASE_MARK: char = '⊗';
const CROSS_MARK: char = '×';

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramFormat {
    Text,
    Latex,
    Json,
}

impl FromStr for DiagramFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(DiagramFormat::Text),
            "latex" => Ok(DiagramFormat::Latex),
            "json" => Ok(DiagramFormat::Json),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// JSON diagram: `{n, blocks, base, phi, marks}`. `phi` holds the crossed
/// positions; `marks` says whether they are the Phi or the Psi roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub n: usize,
    pub blocks: Vec<usize>,
    pub base: Vec<Root>,
    pub phi: Vec<Root>,
    #[serde(default)]
    pub marks: MarkedSet,
}

impl DiagramDoc {
    pub fn new(ty: &ParabolicType, set: MarkedSet) -> Self {
        let (base, phi) = marks(ty, set);
        DiagramDoc {
            n: ty.n(),
            blocks: ty.sizes().to_vec(),
            base,
            phi,
            marks: set,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    Diagonal,
    Reductive,
    Empty,
    Base,
    Cross,
}

impl Cell {
    fn symbol(self) -> char {
        match self {
            Cell::Diagonal => '1',
            Cell::Reductive => '-',
            Cell::Empty => '.',
            Cell::Base => BASE_MARK,
            Cell::Cross => CROSS_MARK,
        }
    }
}

fn cells(ty: &ParabolicType, doc: &DiagramDoc) -> Vec<Vec<Cell>> {
    let n = ty.n();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let r = Root::new(i, j);
                    if i == j {
                        Cell::Diagonal
                    } else if !ty.in_nilradical(i, j) {
                        Cell::Reductive
                    } else if doc.base.contains(&r) {
                        Cell::Base
                    } else if doc.phi.contains(&r) {
                        Cell::Cross
                    } else {
                        Cell::Empty
                    }
                })
                .collect()
        })
        .collect()
}

/// Renders the diagram of `ty`: diagonal blocks, `⊗` on the base and `×` on
/// the chosen marked set.
pub fn render_diagram(ty: &ParabolicType, format: DiagramFormat, set: MarkedSet) -> String {
    let doc = DiagramDoc::new(ty, set);
    match format {
        DiagramFormat::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("diagram serializes");
            s.push('\n');
            s
        }
        DiagramFormat::Text => render_text(ty, &doc),
        DiagramFormat::Latex => render_latex(ty, &doc),
    }
}

fn render_text(ty: &ParabolicType, doc: &DiagramDoc) -> String {
    let n = ty.n();
    let width = n.to_string().len();
    let grid = cells(ty, doc);
    let mut out = format!("type: {ty}\n");
    for (i, row) in grid.iter().enumerate() {
        write!(out, "{:>width$} |", i + 1).unwrap();
        for (j, c) in row.iter().enumerate() {
            if j > 0 && ty.block_of(j) != ty.block_of(j + 1) {
                out.push_str(" |");
            }
            out.push(' ');
            out.push(c.symbol());
        }
        out.push('\n');
    }
    out
}

fn render_latex(ty: &ParabolicType, doc: &DiagramDoc) -> String {
    let n = ty.n();
    let grid = cells(ty, doc);
    let mut out = String::new();
    writeln!(out, "\\begin{{tabular}}{{|{}l}}", "p{0.1cm}|".repeat(n)).unwrap();
    let header: Vec<String> = (1..=n)
        .map(|j| format!("\\multicolumn{{1}}{{c}}{{\\small {j}}}"))
        .collect();
    writeln!(out, "{}&\\\\", header.join("&")).unwrap();
    for (idx, row) in grid.iter().enumerate() {
        let i = idx + 1;
        if i == 1 || ty.block_of(i - 1) != ty.block_of(i) {
            writeln!(out, "\\cline{{1-{n}}}").unwrap();
        } else {
            let first = ty.block_indices(ty.block_of(i)).end() + 1;
            if first <= n {
                writeln!(out, "\\cline{{{first}-{n}}}").unwrap();
            }
        }
        let cells: Vec<&str> = row
            .iter()
            .map(|c| match c {
                Cell::Diagonal => "1",
                Cell::Base => "$\\otimes$",
                Cell::Cross => "$\\times$",
                Cell::Reductive | Cell::Empty => "",
            })
            .collect();
        writeln!(out, "{}&{{\\small {i}}}\\\\", cells.join("&")).unwrap();
    }
    writeln!(out, "\\cline{{1-{n}}}").unwrap();
    writeln!(out, "\\multicolumn{{{n}}}{{c}}{{Diagram ({ty})}}\\\\").unwrap();
    out.push_str("\\end{tabular}\n");
    out
}

/// Reads back a text or JSON diagram. The marks must be the base and either
/// the Phi or the Psi set of the declared type.
pub fn parse_diagram(text: &str) -> Result<DiagramDoc> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let err = |m: String| Error::Parse(m);
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let head = lines.next().ok_or_else(|| err("empty diagram".into()))?;
    let ty: ParabolicType = head
        .trim()
        .strip_prefix("type:")
        .ok_or_else(|| err("missing 'type:' header".into()))?
        .trim()
        .parse()?;
    let n = ty.n();
    let mut base = Vec::new();
    let mut phi = Vec::new();
    let mut seen = 0;
    for (idx, line) in lines.enumerate() {
        let i = idx + 1;
        if i > n {
            return Err(err(format!("more than {n} rows")));
        }
        let mut toks = line.split_whitespace();
        let label = toks
            .next()
            .ok_or_else(|| err(format!("row {i} is empty")))?;
        if label != i.to_string() {
            return Err(err(format!("row {i} labelled {label:?}")));
        }
        let symbols: Vec<&str> = toks.filter(|t| *t != "|").collect();
        if symbols.len() != n {
            return Err(err(format!(
                "row {i} has {} cells, expected {n}",
                symbols.len()
            )));
        }
        for (jdx, sym) in symbols.iter().enumerate() {
            let j = jdx + 1;
            let mut chars = sym.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(err(format!("bad cell {sym:?} at ({i},{j})")));
            };
            let nil = ty.in_nilradical(i, j);
            match c {
                '1' if i == j => {}
                '-' if i != j && !nil => {}
                '.' if nil => {}
                BASE_MARK if nil => base.push(Root::new(i, j)),
                CROSS_MARK if nil => phi.push(Root::new(i, j)),
                _ => return Err(err(format!("cell {c:?} not allowed at ({i},{j})"))),
            }
        }
        seen = i;
    }
    if seen != n {
        return Err(err(format!("expected {n} rows, found {seen}")));
    }
    base.sort();
    phi.sort();
    identify(&ty, base, phi)
}

fn parse_json(text: &str) -> Result<DiagramDoc> {
    let doc: DiagramDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("diagram json: {e}")))?;
    let ty = ParabolicType::new(doc.blocks.clone())?;
    if ty.n() != doc.n {
        return Err(Error::Parse(format!(
            "n = {} but blocks sum to {}",
            doc.n,
            ty.n()
        )));
    }
    if doc != DiagramDoc::new(&ty, doc.marks) {
        return Err(Error::Parse(format!("marks do not match type {ty}")));
    }
    Ok(doc)
}

fn identify(ty: &ParabolicType, base: Vec<Root>, crossed: Vec<Root>) -> Result<DiagramDoc> {
    for set in [MarkedSet::Phi, MarkedSet::Psi] {
        let doc = DiagramDoc::new(ty, set);
        if doc.base == base && doc.phi == crossed {
            return Ok(doc);
        }
    }
    Err(Error::Parse(format!("marks do not match type {ty}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> ParabolicType {
        s.parse().unwrap()
    }

    #[test]
    fn text_layout_2132() {
        let t = render_diagram(&ty("2,1,3,2"), DiagramFormat::Text, MarkedSet::Phi);
        let expected = "\
type: 2,1,3,2
1 | 1 - | . | . ⊗ . | . .
2 | - 1 | ⊗ | . . . | . .
3 | - - | 1 | ⊗ . . | . .
4 | - - | - | 1 - - | × ×
5 | - - | - | - 1 - | × ⊗
6 | - - | - | - - 1 | ⊗ .
7 | - - | - | - - - | 1 -
8 | - - | - | - - - | - 1
";
        assert_eq!(t, expected);
    }

    #[test]
    fn text_roundtrip_recovers_marks() {
        for s in [
            "2,1,3,2",
            "2,2,2,1,1",
            "2,4,2",
            "9",
            "1,1,1,1,1,1,1,1,1,1,1",
        ] {
            let t = ty(s);
            for set in [MarkedSet::Phi, MarkedSet::Psi] {
                for format in [DiagramFormat::Text, DiagramFormat::Json] {
                    let doc = parse_diagram(&render_diagram(&t, format, set)).unwrap();
                    let expected = DiagramDoc::new(&t, set);
                    if expected.phi != DiagramDoc::new(&t, MarkedSet::Phi).phi {
                        assert_eq!(doc, expected, "{s}");
                    }
                    assert_eq!((doc.base, doc.phi), (expected.base, expected.phi), "{s}");
                }
            }
        }
    }

    #[test]
    fn single_block_has_no_marks() {
        let doc = DiagramDoc::new(&ty("9"), MarkedSet::Phi);
        assert!(doc.base.is_empty() && doc.phi.is_empty());
        let latex = render_diagram(&ty("9"), DiagramFormat::Latex, MarkedSet::Phi);
        assert!(!latex.contains("otimes"));
    }

    #[test]
    fn latex_marks_2211() {
        let latex = render_diagram(&ty("2,2,1,1"), DiagramFormat::Latex, MarkedSet::Phi);
        assert_eq!(latex.matches("$\\otimes$").count(), 4);
        assert_eq!(latex.matches("$\\times$").count(), 1);
        assert!(latex.contains("Diagram (2,2,1,1)"));
        assert!(latex.starts_with("\\begin{tabular}"));
    }

    #[test]
    fn parser_rejects_inconsistent_cells() {
        let good = render_diagram(&ty("1,1"), DiagramFormat::Text, MarkedSet::Phi);
        assert!(parse_diagram(&good).is_ok());
        assert!(parse_diagram(&good.replace('⊗', "1")).is_err());
        assert!(parse_diagram("type: 1,1\n1 | 1 | ⊗\n").is_err());
        assert!(parse_diagram("").is_err());
        assert!(parse_diagram("type: 2\n1 | 1 ×\n2 | - 1\n").is_err());
        assert!(parse_diagram("type: 1,1\n1 | 1 | .\n2 | - | 1\n").is_err());
        assert!(parse_diagram(r#"{"n": 3, "blocks": [1,1], "base": [[1,2]], "phi": []}"#).is_err());
    }

    #[test]
    fn unknown_format() {
        assert_eq!(
            "svg".parse::<DiagramFormat>(),
            Err(Error::UnknownFormat("svg".into()))
        );
    }
}
