//! Instance files: one delimiter-separated table per file.
//!
//! | file            | columns                                   | required |
//! |-----------------|-------------------------------------------|----------|
//! | merit.csv       | list_id,rank,candidate_id                 | yes      |
//! | courses.csv     | course_id,list_id,category,capacity       | yes      |
//! | candidates.csv  | candidate_id,is_female,categories         | yes      |
//! | prefs.csv       | candidate_id,pref_rank,course_id          | yes      |
//! | quotas.csv      | course_id,female_quota                    | no       |
//! | categories.csv  | category,parent                           | no       |
//!
//! `categories` is a `;`-separated list; `is_female` is `0`/`1`.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::model::{
    validate_instance, CandidateRow, CategoryParentRow, CourseRow, Instance, InstanceOptions,
    MeritRow, Origin, PrefRow, QuotaRow, RawInstance, SourceFile, ValidationErrors,
};

pub const MERIT_HEADER: [&str; 3] = ["list_id", "rank", "candidate_id"];
pub const COURSES_HEADER: [&str; 4] = ["course_id", "list_id", "category", "capacity"];
pub const CANDIDATES_HEADER: [&str; 3] = ["candidate_id", "is_female", "categories"];
pub const PREFS_HEADER: [&str; 3] = ["candidate_id", "pref_rank", "course_id"];
pub const QUOTAS_HEADER: [&str; 2] = ["course_id", "female_quota"];
pub const CATEGORIES_HEADER: [&str; 2] = ["category", "parent"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file, self.line, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}", join_lines(.0))]
    Parse(Vec<ParseError>),
    #[error(transparent)]
    Validation(#[from] ValidationErrors),
}

fn join_lines(errs: &[ParseError]) -> String {
    errs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Reads and validates the instance files in `dir`.
pub fn load_instance(dir: &Path, options: &InstanceOptions) -> Result<Instance, LoadError> {
    let raw = read_raw(dir)?;
    Ok(validate_instance(&raw, options)?)
}

struct Table<'a> {
    file: SourceFile,
    errors: &'a mut Vec<ParseError>,
}

impl Table<'_> {
    fn err(&mut self, line: u64, reason: impl Into<String>) {
        self.errors.push(ParseError {
            file: self.file.file_name().to_string(),
            line,
            reason: reason.into(),
        });
    }

    /// Parses every data row; `row` returns `None` after reporting an error.
    fn read<T>(
        &mut self,
        path: &Path,
        header: &[&str],
        mut row: impl FnMut(&csv::StringRecord, Origin, &mut Self) -> Option<T>,
    ) -> Result<Vec<T>, LoadError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| io_error(path, e))?;
        let got: Vec<String> = rdr
            .headers()
            .map_err(|e| io_error(path, e))?
            .iter()
            .map(str::to_string)
            .collect();
        if got != header {
            self.err(
                1,
                format!(
                    "expected header {:?}, found {:?}",
                    header.join(","),
                    got.join(",")
                ),
            );
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut record = csv::StringRecord::new();
        loop {
            match rdr.read_record(&mut record) {
                Ok(false) => break,
                Ok(true) => {
                    let line = record.position().map_or(0, |p| p.line());
                    if record.len() == 1 && record[0].is_empty() {
                        continue;
                    }
                    if record.len() != header.len() {
                        self.err(
                            line,
                            format!("expected {} fields, found {}", header.len(), record.len()),
                        );
                        continue;
                    }
                    let origin = Origin::new(self.file, line.min(u32::MAX as u64) as u32);
                    if let Some(v) = row(&record, origin, self) {
                        out.push(v);
                    }
                }
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line());
                    self.err(line, e.to_string());
                    if !matches!(e.kind(), csv::ErrorKind::Utf8 { .. }) {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    fn field<T: FromStr>(
        &mut self,
        rec: &csv::StringRecord,
        i: usize,
        name: &str,
        line: u32,
    ) -> Option<T> {
        match rec[i].parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.err(line as u64, format!("invalid {name} {:?}", &rec[i]));
                None
            }
        }
    }
}

fn io_error(path: &Path, e: csv::Error) -> LoadError {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
    };
    LoadError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "1" | "true" | "TRUE" | "yes" | "F" => Some(true),
        "0" | "false" | "FALSE" | "no" | "M" | "" => Some(false),
        _ => None,
    }
}

/// Parses the instance files without cross-checking them. Parse errors from
/// all files are collected before failing.
pub fn read_raw(dir: &Path) -> Result<RawInstance, LoadError> {
    let mut errors = Vec::new();
    let mut raw = RawInstance::default();

    let mut t = Table {
        file: SourceFile::Merit,
        errors: &mut errors,
    };
    raw.merit = t.read(&dir.join("merit.csv"), &MERIT_HEADER, |r, o, t| {
        Some(MeritRow {
            list_id: t.field(r, 0, "list_id", o.line)?,
            rank: t.field(r, 1, "rank", o.line)?,
            candidate_id: t.field(r, 2, "candidate_id", o.line)?,
            origin: o,
        })
    })?;

    t.file = SourceFile::Courses;
    raw.courses = t.read(&dir.join("courses.csv"), &COURSES_HEADER, |r, o, t| {
        let course_id = t.field(r, 0, "course_id", o.line);
        let list_id = t.field(r, 1, "list_id", o.line);
        let capacity = t.field(r, 3, "capacity", o.line);
        if r[2].is_empty() {
            t.err(o.line as u64, "empty category");
            return None;
        }
        Some(CourseRow {
            course_id: course_id?,
            list_id: list_id?,
            category: r[2].to_string(),
            capacity: capacity?,
            origin: o,
        })
    })?;

    t.file = SourceFile::Candidates;
    raw.candidates = t.read(
        &dir.join("candidates.csv"),
        &CANDIDATES_HEADER,
        |r, o, t| {
            let candidate_id = t.field(r, 0, "candidate_id", o.line);
            let is_female = parse_bool(&r[1]);
            if is_female.is_none() {
                t.err(o.line as u64, format!("invalid is_female {:?}", &r[1]));
            }
            Some(CandidateRow {
                candidate_id: candidate_id?,
                is_female: is_female?,
                categories: r[2]
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect(),
                origin: o,
            })
        },
    )?;

    t.file = SourceFile::Prefs;
    raw.prefs = t.read(&dir.join("prefs.csv"), &PREFS_HEADER, |r, o, t| {
        Some(PrefRow {
            candidate_id: t.field(r, 0, "candidate_id", o.line)?,
            pref_rank: t.field(r, 1, "pref_rank", o.line)?,
            course_id: t.field(r, 2, "course_id", o.line)?,
            origin: o,
        })
    })?;

    let quotas = dir.join("quotas.csv");
    if quotas.exists() {
        t.file = SourceFile::Quotas;
        raw.quotas = t.read(&quotas, &QUOTAS_HEADER, |r, o, t| {
            Some(QuotaRow {
                course_id: t.field(r, 0, "course_id", o.line)?,
                female_quota: t.field(r, 1, "female_quota", o.line)?,
                origin: o,
            })
        })?;
    }

    let categories = dir.join("categories.csv");
    if categories.exists() {
        t.file = SourceFile::Categories;
        raw.category_parents = t.read(&categories, &CATEGORIES_HEADER, |r, o, _| {
            Some(CategoryParentRow {
                category: r[0].to_string(),
                parent: r[1].to_string(),
                origin: o,
            })
        })?;
    }

    if errors.is_empty() {
        Ok(raw)
    } else {
        Err(LoadError::Parse(errors))
    }
}

fn create(path: &Path) -> io::Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(
        path,
    )?)))
}

fn finish<W: Write>(w: csv::Writer<W>) -> io::Result<()> {
    w.into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?
        .flush()
}

/// Writes `raw` as instance files into `dir` (which must exist). Optional
/// tables are only written when non-empty.
pub fn write_raw(raw: &RawInstance, dir: &Path) -> io::Result<()> {
    let mut w = create(&dir.join("merit.csv"))?;
    w.write_record(MERIT_HEADER)?;
    for r in &raw.merit {
        w.write_record([
            r.list_id.to_string(),
            r.rank.to_string(),
            r.candidate_id.to_string(),
        ])?;
    }
    finish(w)?;

    let mut w = create(&dir.join("courses.csv"))?;
    w.write_record(COURSES_HEADER)?;
    for r in &raw.courses {
        w.write_record([
            r.course_id.to_string(),
            r.list_id.to_string(),
            r.category.clone(),
            r.capacity.to_string(),
        ])?;
    }
    finish(w)?;

    let mut w = create(&dir.join("candidates.csv"))?;
    w.write_record(CANDIDATES_HEADER)?;
    for r in &raw.candidates {
        w.write_record([
            r.candidate_id.to_string(),
            u8::from(r.is_female).to_string(),
            r.categories.join(";"),
        ])?;
    }
    finish(w)?;

    let mut w = create(&dir.join("prefs.csv"))?;
    w.write_record(PREFS_HEADER)?;
    for r in &raw.prefs {
        w.write_record([
            r.candidate_id.to_string(),
            r.pref_rank.to_string(),
            r.course_id.to_string(),
        ])?;
    }
    finish(w)?;

    if !raw.quotas.is_empty() {
        let mut w = create(&dir.join("quotas.csv"))?;
        w.write_record(QUOTAS_HEADER)?;
        for r in &raw.quotas {
            w.write_record([r.course_id.to_string(), r.female_quota.to_string()])?;
        }
        finish(w)?;
    }
    if !raw.category_parents.is_empty() {
        let mut w = create(&dir.join("categories.csv"))?;
        w.write_record(CATEGORIES_HEADER)?;
        for r in &raw.category_parents {
            w.write_record([r.category.as_str(), r.parent.as_str()])?;
        }
        finish(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ValidationError;
    use std::fs;

    fn put(dir: &Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    fn fixture(dir: &Path) {
        put(
            dir,
            "merit.csv",
            "list_id,rank,candidate_id\n1,1,10\n1,2,11\n2,1,11\n",
        );
        put(
            dir,
            "courses.csv",
            "course_id,list_id,category,capacity\n100,1,UR,1\n100,1,RES,1\n200,2,UR,2\n",
        );
        put(
            dir,
            "candidates.csv",
            "candidate_id,is_female,categories\n10,0,\n11,1,RES\n",
        );
        put(
            dir,
            "prefs.csv",
            "candidate_id,pref_rank,course_id\n10,1,100\n11,1,200\n11,2,100\n",
        );
    }

    #[test]
    fn well_formed_fixture_loads() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path());
        let inst = load_instance(dir.path(), &InstanceOptions::default()).unwrap();
        assert_eq!(inst.num_candidates(), 2);
        assert_eq!(inst.num_courses(), 2);
        assert_eq!(inst.num_lists(), 2);
        assert_eq!(inst.num_pools(), 3);
        assert_eq!(inst.total_pref_entries(), 4);
    }

    #[test]
    fn header_only_prefs_file() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path());
        put(
            dir.path(),
            "prefs.csv",
            "candidate_id,pref_rank,course_id\n",
        );
        let inst = load_instance(dir.path(), &InstanceOptions::default()).unwrap();
        assert_eq!(inst.total_pref_entries(), 0);
    }

    #[test]
    fn negative_capacity_reports_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path());
        put(
            dir.path(),
            "courses.csv",
            "course_id,list_id,category,capacity\n100,1,UR,1\n100,1,RES,1\n200,2,UR,-1\n",
        );
        let err = load_instance(dir.path(), &InstanceOptions::default()).unwrap_err();
        let LoadError::Validation(v) = &err else {
            panic!("{err}")
        };
        assert!(matches!(
            &v.0[..],
            [ValidationError::NegativeCapacity { value: -1, .. }]
        ));
        assert!(err.to_string().starts_with("courses.csv:4:"), "{err}");
    }

    #[test]
    fn parse_errors_are_collected_across_files() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path());
        put(
            dir.path(),
            "merit.csv",
            "list_id,rank,candidate_id\n1,x,10\n",
        );
        put(dir.path(), "prefs.csv", "candidate_id,course_id\n");
        put(
            dir.path(),
            "candidates.csv",
            "candidate_id,is_female,categories\n10,maybe,\n",
        );
        let err = load_instance(dir.path(), &InstanceOptions::default()).unwrap_err();
        let LoadError::Parse(errs) = &err else {
            panic!("{err}")
        };
        assert_eq!(errs.len(), 3, "{err}");
        assert_eq!((errs[0].file.as_str(), errs[0].line), ("merit.csv", 2));
        assert_eq!(errs[1].file, "candidates.csv");
        assert_eq!((errs[2].file.as_str(), errs[2].line), ("prefs.csv", 1));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path());
        fs::remove_file(dir.path().join("prefs.csv")).unwrap();
        assert!(matches!(
            load_instance(dir.path(), &InstanceOptions::default()),
            Err(LoadError::Io { .. })
        ));
    }

    #[test]
    fn write_then_read_preserves_tables() {
        let p = crate::io::gen::GenParams {
            reservations: true,
            quotas: true,
            candidates: 30,
            ..Default::default()
        };
        let raw = crate::io::gen::generate_instance(&p).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_raw(&raw, dir.path()).unwrap();
        let back = read_raw(dir.path()).unwrap();
        let strip = |mut r: RawInstance| {
            r.merit
                .iter_mut()
                .for_each(|x| x.origin = Origin::default());
            r.courses
                .iter_mut()
                .for_each(|x| x.origin = Origin::default());
            r.candidates
                .iter_mut()
                .for_each(|x| x.origin = Origin::default());
            r.prefs
                .iter_mut()
                .for_each(|x| x.origin = Origin::default());
            r.quotas
                .iter_mut()
                .for_each(|x| x.origin = Origin::default());
            r.category_parents
                .iter_mut()
                .for_each(|x| x.origin = Origin::default());
            r
        };
        assert_eq!(strip(back), raw);
    }
}
