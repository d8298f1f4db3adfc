use crate::model::{CandidateId, ListId, PoolId, PrefRank};

/// Which part of a run produced an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Step1,
    Improve(ListId),
    Cascade,
    Withdraw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Seat taken directly during a merit-order scan.
    Allot,
    Enqueue,
    /// A vacant seat offered to the head of a waiting list.
    Offer,
    /// Offer declined; the entry is consumed.
    Skip,
    /// Offer taken.
    Accept,
    /// Previous seat released after a move or withdrawal.
    Vacate,
    /// One supernumerary seat created (no candidate).
    SupCreate,
    Withdraw,
}

/// One elementary, replayable action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditEvent {
    pub seq: u64,
    pub phase: Phase,
    pub kind: EventKind,
    pub candidate: Option<CandidateId>,
    pub pool: Option<PoolId>,
    pub pref_before: PrefRank,
    pub pref_after: PrefRank,
}

/// Destination for audit events.
pub trait AuditSink {
    fn record(&mut self, event: &AuditEvent);
}

/// Discards events.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullSink;

impl AuditSink for NullSink {
    #[inline]
    fn record(&mut self, _event: &AuditEvent) {}
}

impl AuditSink for Vec<AuditEvent> {
    fn record(&mut self, event: &AuditEvent) {
        self.push(*event);
    }
}

impl<S: AuditSink + ?Sized> AuditSink for &mut S {
    fn record(&mut self, event: &AuditEvent) {
        (**self).record(event)
    }
}
