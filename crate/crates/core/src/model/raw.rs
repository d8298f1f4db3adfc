//! Unvalidated input tables, one row type per input file.

use std::fmt;

/// Input file a row came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SourceFile {
    #[default]
    Unknown,
    Merit,
    Courses,
    Quotas,
    Candidates,
    Prefs,
    Categories,
}

impl SourceFile {
    pub fn file_name(self) -> &'static str {
        match self {
            SourceFile::Unknown => "<input>",
            SourceFile::Merit => "merit.csv",
            SourceFile::Courses => "courses.csv",
            SourceFile::Quotas => "quotas.csv",
            SourceFile::Candidates => "candidates.csv",
            SourceFile::Prefs => "prefs.csv",
            SourceFile::Categories => "categories.csv",
        }
    }
}

/// Source location of a row, used in diagnostics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Origin {
    pub file: SourceFile,
    /// 1-based line number; 0 when the row did not come from a file.
    pub line: u32,
}

impl Origin {
    pub fn new(file: SourceFile, line: u32) -> Self {
        Origin { file, line }
    }
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            0 => f.write_str(self.file.file_name()),
            l => write!(f, "{}:{l}", self.file.file_name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeritRow {
    pub list_id: u64,
    pub rank: u64,
    pub candidate_id: u64,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourseRow {
    pub course_id: u64,
    pub list_id: u64,
    pub category: String,
    pub capacity: i64,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotaRow {
    pub course_id: u64,
    pub female_quota: i64,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateRow {
    pub candidate_id: u64,
    pub is_female: bool,
    pub categories: Vec<String>,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefRow {
    pub candidate_id: u64,
    pub pref_rank: u64,
    pub course_id: u64,
    pub origin: Origin,
}

/// Declares `category` as nested inside `parent` (e.g. PwD within a reserved category).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryParentRow {
    pub category: String,
    pub parent: String,
    pub origin: Origin,
}

/// All input tables as parsed, before any cross-referencing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub merit: Vec<MeritRow>,
    pub courses: Vec<CourseRow>,
    pub quotas: Vec<QuotaRow>,
    pub candidates: Vec<CandidateRow>,
    pub prefs: Vec<PrefRow>,
    pub category_parents: Vec<CategoryParentRow>,
}
