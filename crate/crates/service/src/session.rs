//! In-memory group sessions with a time-to-live.
//!
//! The map lock is held only to look sessions up; each session has its own
//! mutex, so a long solve blocks nothing but its own session.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use hflpr_core::{ConsistencyParams, Hflpr, PerfectMethod, SimilarityMeasure};
use serde::Serialize;
use tokio::sync::{Mutex, RwLock};
use uuid::Uuid;

use crate::api::SolveResponse;

/// Lifecycle of a session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionState {
    Collecting,
    Solved,
}

/// One group decision being assembled expert by expert.
#[derive(Debug, Clone)]
pub struct Session {
    pub id: Uuid,
    pub n: usize,
    pub tau: u32,
    pub gamma: f64,
    pub zeta_mod: f64,
    pub params: ConsistencyParams,
    pub perfect_method: PerfectMethod,
    pub similarity: SimilarityMeasure,
    pub submitted: Vec<Hflpr>,
    pub state: SessionState,
    pub result: Option<SolveResponse>,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    pub last_access: Instant,
}

impl Session {
    pub fn touch(&mut self) {
        self.last_access = Instant::now();
    }
}

pub type SharedSession = Arc<Mutex<Session>>;

/// All live sessions.
#[derive(Debug)]
pub struct SessionStore {
    ttl: Duration,
    sessions: RwLock<HashMap<Uuid, SharedSession>>,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        Self {
            ttl,
            sessions: RwLock::new(HashMap::new()),
        }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    /// Registers a new session built by `make` from a fresh random id.
    pub async fn insert<F: FnOnce(Uuid, u64) -> Session>(&self, make: F) -> SharedSession {
        let id = Uuid::new_v4();
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let s = Arc::new(Mutex::new(make(id, created)));
        self.sessions.write().await.insert(id, s.clone());
        s
    }

    /// Looks a live session up and refreshes its access time. Expired
    /// sessions are removed and reported as missing.
    pub async fn get(&self, id: &Uuid) -> Option<SharedSession> {
        let s = self.sessions.read().await.get(id).cloned()?;
        let expired = s.lock().await.last_access.elapsed() > self.ttl;
        if expired {
            self.sessions.write().await.remove(id);
            return None;
        }
        s.lock().await.touch();
        Some(s)
    }

    /// Drops every expired session and returns how many were removed.
    pub async fn purge_expired(&self) -> usize {
        let snapshot: Vec<(Uuid, SharedSession)> = self
            .sessions
            .read()
            .await
            .iter()
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let mut dead = Vec::new();
        for (id, s) in snapshot {
            if s.lock().await.last_access.elapsed() > self.ttl {
                dead.push(id);
            }
        }
        let mut map = self.sessions.write().await;
        for id in &dead {
            map.remove(id);
        }
        dead.len()
    }

    pub async fn len(&self) -> usize {
        self.sessions.read().await.len()
    }

    pub async fn is_empty(&self) -> bool {
        self.len().await == 0
    }
}
