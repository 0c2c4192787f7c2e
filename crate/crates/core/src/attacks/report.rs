use std::fmt::{self, Write as _};
use std::time::Duration;

use crate::image::Image;
use crate::keyspace::CanonicalKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackKind {
    Brute,
    Cycle,
    Cpa,
    Kpa,
    Timing,
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::Brute => "brute",
            AttackKind::Cycle => "cycle",
            AttackKind::Cpa => "cpa",
            AttackKind::Kpa => "kpa",
            AttackKind::Timing => "timing",
        })
    }
}

/// What an attack observed on the way to its result. Fields that do not
/// apply to a given attack stay empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Evidence {
    /// Keys decrypted and scored (brute force).
    pub candidates_tried: Option<u64>,
    /// Oracle queries spent.
    pub queries: Option<u64>,
    /// Re-encryptions until the orbit closed (cycle), or scrambling-only
    /// steps until the plaintext reappeared (known plaintext).
    pub cycle_n: Option<u64>,
    /// Values of `T` consistent with the observations.
    pub rounds_candidates: Vec<u64>,
    /// Values of `S` consistent with the observations.
    pub offset_candidates: Vec<u64>,
    /// First keystream byte, `plain(0,0) ^ cipher(0,0)`.
    pub first_mask_byte: Option<u8>,
    pub best_score: Option<f64>,
    pub estimated_rounds: Option<u64>,
    pub elapsed: Duration,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AttackReport {
    pub attack: AttackKind,
    pub recovered_key: Option<CanonicalKey>,
    pub recovered_plaintext: Option<Image>,
    pub evidence: Evidence,
}

fn set(values: &[u64]) -> String {
    let items: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl AttackReport {
    pub(crate) fn new(attack: AttackKind) -> Self {
        Self {
            attack,
            recovered_key: None,
            recovered_plaintext: None,
            evidence: Evidence::default(),
        }
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.evidence.elapsed.as_secs_f64() * 1e3
    }

    /// Machine-readable `key=value` pairs. Only fields with a value are
    /// emitted; `elapsed_ms` is omitted unless `with_elapsed` is set so the
    /// remaining output is reproducible.
    pub fn key_values(&self, with_elapsed: bool) -> Vec<(&'static str, String)> {
        let ev = &self.evidence;
        let mut kv = vec![("attack", self.attack.to_string())];
        if let Some(k) = &self.recovered_key {
            kv.push(("key_T", k.rounds.to_string()));
            kv.push(("key_S", k.offset.to_string()));
            kv.push(("period", k.period.to_string()));
        }
        if let Some(q) = ev.queries {
            kv.push(("queries", q.to_string()));
        }
        if let Some(n) = ev.cycle_n {
            kv.push(("cycle_n", n.to_string()));
        }
        let candidates = match self.attack {
            AttackKind::Kpa => Some(set(&ev.offset_candidates)),
            AttackKind::Brute => ev.candidates_tried.map(|c| c.to_string()),
            AttackKind::Cpa if !ev.offset_candidates.is_empty() => Some(set(&ev.offset_candidates)),
            _ if !ev.rounds_candidates.is_empty() => Some(set(&ev.rounds_candidates)),
            _ => None,
        };
        if let Some(c) = candidates {
            kv.push(("candidates", c));
        }
        if let Some(s0) = ev.first_mask_byte {
            kv.push(("s0", s0.to_string()));
        }
        if let Some(t) = ev.estimated_rounds {
            kv.push(("estimated_T", t.to_string()));
        }
        if let Some(score) = ev.best_score {
            kv.push(("score", score.to_string()));
        }
        if with_elapsed {
            kv.push(("elapsed_ms", format!("{:.3}", self.elapsed_ms())));
        }
        kv
    }

    pub fn to_kv(&self, with_elapsed: bool) -> String {
        let mut out = String::new();
        for (k, v) in self.key_values(with_elapsed) {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    /// Human-readable summary block.
    pub fn to_text(&self) -> String {
        let ev = &self.evidence;
        let mut out = format!("attack: {}\n", self.attack);
        if let Some(k) = &self.recovered_key {
            let _ = writeln!(out, "recovered key: {k}");
        }
        if let Some(s0) = ev.first_mask_byte {
            let _ = writeln!(out, "s0={s0}");
        }
        if !ev.offset_candidates.is_empty() {
            let _ = writeln!(out, "S candidates: {}", set(&ev.offset_candidates));
        }
        if let Some(n) = ev.cycle_n {
            let _ = writeln!(out, "cycle n={n}");
        }
        if !ev.rounds_candidates.is_empty() {
            let _ = writeln!(out, "T candidates: {}", set(&ev.rounds_candidates));
        }
        if let Some(t) = ev.estimated_rounds {
            let _ = writeln!(out, "estimated T={t}");
        }
        if let Some(c) = ev.candidates_tried {
            let _ = writeln!(out, "candidates tried: {c}");
        }
        if let Some(q) = ev.queries {
            let _ = writeln!(out, "oracle queries: {q}");
        }
        for note in &ev.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}
