use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! dense_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            #[inline]
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

dense_id!(
    /// Dense candidate index, assigned in ascending order of the raw candidate id.
    CandidateId
);
dense_id!(
    /// Dense course index, assigned in ascending order of the raw course id.
    CourseId
);
dense_id!(
    /// Dense merit-list index, in declaration order.
    ListId
);
dense_id!(CategoryId);
dense_id!(
    /// A seat pool is one (course, category) pair.
    PoolId
);

impl CategoryId {
    pub const UNRESERVED: CategoryId = CategoryId(0);
    pub const FEMALE_SUPERNUMERARY: CategoryId = CategoryId(1);

    pub fn is_supernumerary(self) -> bool {
        self == Self::FEMALE_SUPERNUMERARY
    }
}

pub const UNRESERVED_NAME: &str = "UR";
pub const FEMALE_SUPERNUMERARY_NAME: &str = "FEM-SUP";

/// 1-based position in a candidate's expanded joint preference list.
///
/// `PrefRank::NONE` is the sentinel for "nothing allotted" and compares worse
/// than every real position, so "strictly better" is plain `<`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrefRank(pub u32);

impl PrefRank {
    pub const NONE: PrefRank = PrefRank(u32::MAX);

    #[inline]
    pub fn is_none(self) -> bool {
        self == Self::NONE
    }

    #[inline]
    pub fn get(self) -> Option<u32> {
        (!self.is_none()).then_some(self.0)
    }

    /// Index into the candidate's preference slice.
    #[inline]
    pub fn slot(self) -> usize {
        debug_assert!(!self.is_none());
        (self.0 - 1) as usize
    }

    pub fn from_option(v: Option<u32>) -> Self {
        v.map_or(Self::NONE, PrefRank)
    }
}

impl fmt::Display for PrefRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(r) => write!(f, "{r}"),
            None => f.write_str("-"),
        }
    }
}
