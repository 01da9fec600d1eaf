//! Runtime configuration, read from the environment by the binaries.

use std::net::SocketAddr;
use std::time::Duration;

/// Default session lifetime.
pub const DEFAULT_TTL: Duration = Duration::from_secs(24 * 60 * 60);

/// Largest relation and group accepted while portal limits are on.
pub const PORTAL_MAX_ALTERNATIVES: usize = 5;
pub const PORTAL_MAX_DECISION_MAKERS: usize = 5;

/// Service settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub bind: SocketAddr,
    /// Sessions idle longer than this are dropped.
    pub session_ttl: Duration,
    /// Enforce `3 <= n <= 5` and at most five experts per session.
    pub portal_limits: bool,
    /// Allowed browser origin; `None` allows any origin.
    pub cors_origin: Option<String>,
    /// Shared `(user, password)` for HTTP basic authentication.
    pub credentials: Option<(String, String)>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            bind: SocketAddr::from(([127, 0, 0, 1], 8080)),
            session_ttl: DEFAULT_TTL,
            portal_limits: true,
            cors_origin: None,
            credentials: None,
        }
    }
}

impl Config {
    /// Reads `HFLPR_BIND`, `HFLPR_SESSION_TTL_SECS`, `HFLPR_PORTAL_LIMITS`,
    /// `HFLPR_CORS_ORIGIN` and `HFLPR_CREDENTIALS` (`user:password`),
    /// falling back to the defaults.
    pub fn from_env() -> Result<Self, String> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    /// As [`Config::from_env`] with an injectable variable source.
    pub fn from_lookup<F: Fn(&str) -> Option<String>>(get: F) -> Result<Self, String> {
        let mut c = Self::default();
        if let Some(v) = get("HFLPR_BIND") {
            c.bind = v.parse().map_err(|e| format!("HFLPR_BIND={v}: {e}"))?;
        }
        if let Some(v) = get("HFLPR_SESSION_TTL_SECS") {
            let secs: u64 = v.parse().map_err(|e| format!("HFLPR_SESSION_TTL_SECS={v}: {e}"))?;
            c.session_ttl = Duration::from_secs(secs);
        }
        if let Some(v) = get("HFLPR_PORTAL_LIMITS") {
            c.portal_limits = match v.to_ascii_lowercase().as_str() {
                "1" | "true" | "yes" | "on" => true,
                "0" | "false" | "no" | "off" => false,
                _ => return Err(format!("HFLPR_PORTAL_LIMITS={v}: expected true or false")),
            };
        }
        c.cors_origin = get("HFLPR_CORS_ORIGIN").filter(|v| !v.is_empty());
        if let Some(v) = get("HFLPR_CREDENTIALS").filter(|v| !v.is_empty()) {
            let (user, pass) = v
                .split_once(':')
                .ok_or_else(|| "HFLPR_CREDENTIALS: expected user:password".to_string())?;
            c.credentials = Some((user.to_string(), pass.to_string()));
        }
        Ok(c)
    }
}
