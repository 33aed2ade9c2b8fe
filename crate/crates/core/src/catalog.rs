//! Group catalogs.
//!
//! Text format, one record per group, records separated by blank lines:
//!
//! ```text
//! name S3
//! degree 3
//! gen (0 1)
//! gen (0 1 2)
//! ```
//!
//! Lines starting with `#` are comments. Cycle notation is 0-based.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Caps, FiniteGroup};
use crate::perm::Permutation;
use crate::subgroup::is_power_of;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Builtin,
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub source: Source,
}

/// An ordered collection of named groups with unique names.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

/// A parsed but not yet closed record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRecord {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

pub fn parse_records(text: &str) -> Result<Vec<GroupRecord>> {
    let mut out = Vec::new();
    let mut name: Option<String> = None;
    let mut degree: Option<usize> = None;
    let mut gens: Vec<(usize, String)> = Vec::new();
    let mut start = 0;

    let mut flush = |name: &mut Option<String>,
                     degree: &mut Option<usize>,
                     gens: &mut Vec<(usize, String)>,
                     start: usize|
     -> Result<()> {
        if name.is_none() && degree.is_none() && gens.is_empty() {
            return Ok(());
        }
        let n = name.take().ok_or(Error::Parse {
            line: start,
            message: "record has no `name` line".into(),
        })?;
        let d = degree.take().ok_or(Error::Parse {
            line: start,
            message: format!("record {n:?} has no `degree` line"),
        })?;
        let generators = gens
            .drain(..)
            .map(|(line, text)| {
                Permutation::parse_cycles(d, &text).map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(GroupRecord {
            name: n,
            degree: d,
            generators,
        });
        Ok(())
    };

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut name, &mut degree, &mut gens, start)?;
            continue;
        }
        if name.is_none() && degree.is_none() && gens.is_empty() {
            start = line_no;
        }
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let value = value.trim();
        match key {
            "name" if !value.is_empty() => {
                if name.replace(value.to_string()).is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "second `name` in one record".into(),
                    });
                }
            }
            "degree" => {
                let d = value.parse::<usize>().ok().filter(|&d| d > 0).ok_or(Error::Parse {
                    line: line_no,
                    message: format!("bad degree {value:?}"),
                })?;
                degree = Some(d);
            }
            "gen" => gens.push((line_no, value.to_string())),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unrecognized line {line:?}"),
                })
            }
        }
    }
    flush(&mut name, &mut degree, &mut gens, start)?;
    Ok(out)
}

const BUILTIN: &str = "\
name C1
degree 1

name C2
degree 2
gen (0 1)

name C3
degree 3
gen (0 1 2)

name C4
degree 4
gen (0 1 2 3)

name C5
degree 5
gen (0 1 2 3 4)

name C6
degree 6
gen (0 1 2 3 4 5)

name C7
degree 7
gen (0 1 2 3 4 5 6)

name C8
degree 8
gen (0 1 2 3 4 5 6 7)

name C9
degree 9
gen (0 1 2 3 4 5 6 7 8)

name C10
degree 10
gen (0 1 2 3 4 5 6 7 8 9)

name C11
degree 11
gen (0 1 2 3 4 5 6 7 8 9 10)

name C12
degree 12
gen (0 1 2 3 4 5 6 7 8 9 10 11)

# dihedral groups, named by order
name D8
degree 4
gen (0 1 2 3)
gen (1 3)

name D10
degree 5
gen (0 1 2 3 4)
gen (1 4)(2 3)

name D12
degree 6
gen (0 1 2 3 4 5)
gen (1 5)(2 4)

name D14
degree 7
gen (0 1 2 3 4 5 6)
gen (1 6)(2 5)(3 4)

name D16
degree 8
gen (0 1 2 3 4 5 6 7)
gen (1 7)(2 6)(3 5)

# quaternion group, regular representation
name Q8
degree 8
gen (0 1 2 3)(4 5 6 7)
gen (0 4 2 6)(1 7 3 5)

name S3
degree 3
gen (0 1)
gen (0 1 2)

name S4
degree 4
gen (0 1)
gen (0 1 2 3)

name S5
degree 5
gen (0 1)
gen (0 1 2 3 4)

name A4
degree 4
gen (0 1 2)
gen (1 2 3)

name A5
degree 5
gen (0 1 2)
gen (0 1 2 3 4)

# elementary abelian groups of rank 2 and 3 (rank 1 is C2, C3)
name E4
degree 4
gen (0 1)
gen (2 3)

name E8
degree 6
gen (0 1)
gen (2 3)
gen (4 5)

name E9
degree 6
gen (0 1 2)
gen (3 4 5)

name E27
degree 9
gen (0 1 2)
gen (3 4 5)
gen (6 7 8)
";

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// The built-in catalog, closed under the given caps.
    pub fn builtin(caps: Caps) -> Result<Self> {
        let mut c = Catalog::new();
        c.extend_from_text(BUILTIN, Source::Builtin, caps)?;
        Ok(c)
    }

    pub fn builtin_text() -> &'static str {
        BUILTIN
    }

    pub fn load_file(&mut self, path: &Path, caps: Caps) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        self.extend_from_text(&text, Source::File(path.to_path_buf()), caps)
    }

    pub fn extend_from_text(&mut self, text: &str, source: Source, caps: Caps) -> Result<()> {
        let records = parse_records(text)?;
        let mut names: HashSet<String> = self.entries.iter().map(|e| e.name.clone()).collect();
        for r in records {
            if !names.insert(r.name.clone()) {
                return Err(Error::DuplicateName(r.name));
            }
            let group = FiniteGroup::closure(r.name.clone(), r.degree, r.generators, caps)?;
            self.entries.push(CatalogEntry {
                name: r.name,
                group: Arc::new(group),
                source: source.clone(),
            });
        }
        Ok(())
    }

    pub fn push(&mut self, entry: CatalogEntry) -> Result<()> {
        if self.get(&entry.name).is_some() {
            return Err(Error::DuplicateName(entry.name));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn groups(&self) -> Vec<Arc<FiniteGroup>> {
        self.entries.iter().map(|e| e.group.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Arc<FiniteGroup>> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.group)
    }

    pub fn lookup(&self, name: &str) -> Result<Arc<FiniteGroup>> {
        self.get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    /// Non-trivial `p`-groups of the catalog, by order then catalog position.
    pub fn p_groups(&self, p: u64) -> Vec<Arc<FiniteGroup>> {
        let mut v: Vec<(usize, usize, Arc<FiniteGroup>)> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.group.order() > 1 && is_power_of(e.group.order(), p))
            .map(|(i, e)| (e.group.order(), i, e.group.clone()))
            .collect();
        v.sort_by_key(|(o, i, _)| (*o, *i));
        v.into_iter().map(|(_, _, g)| g).collect()
    }
}
