use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::Hierarchy;
use crate::{Error, Result, Vocabulary};

/// Reads an edge-list file: `parent TAB child` per line, a bare `tag` line
/// declares a tag, `#` starts a comment line.
pub fn load_hierarchy(path: impl AsRef<Path>) -> Result<Hierarchy> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_hierarchy(BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_hierarchy<R: BufRead>(reader: R) -> Result<Hierarchy> {
    let mut vocab = Vocabulary::new();
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            [tag] => {
                vocab.intern(tag);
            }
            [parent, child] if !parent.is_empty() && !child.is_empty() => {
                edges.push((vocab.intern(parent), vocab.intern(child)));
            }
            _ => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected `parent<TAB>child` or a single tag".into(),
                })
            }
        }
    }
    Hierarchy::from_edges(vocab, edges)
}

impl Hierarchy {
    /// Writes the edge list. Tags without any link are written as bare lines
    /// first, followed by the links in parent/child id order.
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for t in self.vocab.ids() {
            if self.parents(t).is_empty() && self.children(t).is_empty() {
                writeln!(out, "{}", self.vocab.name(t))?;
            }
        }
        for (p, c) in self.edges() {
            writeln!(out, "{}\t{}", self.vocab.name(p), self.vocab.name(c))?;
        }
        out.flush()
    }
}

pub fn save_hierarchy(h: &Hierarchy, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    h.write(BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TagId;

    #[test]
    fn parses_edges_and_isolated_tags() {
        let h = parse_hierarchy("# tree\nr\ta\nr\tb\n\nlonely\n".as_bytes()).unwrap();
        assert_eq!(h.tag_count(), 4);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.roots(), vec![TagId(0), TagId(3)]);
    }

    #[test]
    fn simple_tree() {
        let h = parse_hierarchy("r\ta\nr\tb".as_bytes()).unwrap();
        assert_eq!((h.tag_count(), h.edge_count()), (3, 2));
        assert_eq!(h.roots(), vec![h.vocab().get("r").unwrap()]);
    }

    #[test]
    fn two_cycle_is_an_error() {
        let err = parse_hierarchy("a\tb\nb\ta\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Cycle(_)), "{err}");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_hierarchy("a\tb\tc\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_hierarchy("a\tb\n\tb\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn save_then_load_keeps_edges() {
        let h = parse_hierarchy("r\ta\na\tb\nr\tc\nx\n".as_bytes()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.tsv");
        save_hierarchy(&h, &path).unwrap();
        let back = load_hierarchy(&path).unwrap();
        let named = |h: &Hierarchy| {
            let mut e: Vec<(String, String)> = h
                .edges()
                .map(|(p, c)| (h.vocab().name(p).to_owned(), h.vocab().name(c).to_owned()))
                .collect();
            e.sort();
            e
        };
        assert_eq!(named(&back), named(&h));
        assert_eq!(back.tag_count(), h.tag_count());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_hierarchy("/nonexistent/h.tsv"), Err(Error::Io { .. })));
    }
}
