//! Command drivers behind the `e2sieve` binary.
//!
//! Each driver returns a [`CommandOutput`]: a stream of serializable
//! [`RunRecord`]s (one per configuration processed), a human-readable summary
//! block, and the process exit status. Argument parsing and printing live in
//! the binary; everything here is callable from integration tests.
//!
//! Output is deterministic by construction: records are emitted in a fixed
//! order regardless of worker scheduling, random draws are seeded, and wall
//! times are attached only when explicitly requested.

pub mod commands;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Options shared by every subcommand.
#[derive(Debug, Clone)]
pub struct GlobalOpts {
    /// First rung of the certification precision schedule.
    pub precision_bits: u32,
    /// Last rung of the certification precision schedule.
    pub max_precision_bits: u32,
    /// Seed for every randomized component (Monte Carlo, tuple search).
    pub seed: u64,
    /// Largest denominator allowed when snapping float vectors to rationals.
    pub denominator_bound: BigInt,
    /// Attach wall-clock times to records (breaks byte-identical reruns).
    pub timings: bool,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            precision_bits: 256,
            max_precision_bits: 1024,
            seed: 1,
            denominator_bound: e2sieve::optimizer::default_denominator_bound(),
            timings: false,
        }
    }
}

impl GlobalOpts {
    /// Precision escalation schedule: doubling steps from `precision_bits`
    /// up to `max_precision_bits` (always ending there when it is larger).
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![self.precision_bits];
        let mut cur = self.precision_bits;
        while cur.saturating_mul(2) <= self.max_precision_bits {
            cur = cur.saturating_mul(2);
            out.push(cur);
        }
        if cur < self.max_precision_bits {
            out.push(self.max_precision_bits);
        }
        out
    }
}

/// Process exit contract: 0 pass, 2 certification fail, 3 inconclusive,
/// 4 input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Everything requested was established.
    Pass,
    /// A certification or verification came out false.
    CertificationFailed,
    /// An enclosure could not separate the quantity from its bar.
    Inconclusive,
    /// Arguments, files, or configuration were unusable.
    InputError,
}

impl ExitStatus {
    /// The numeric process exit code.
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::CertificationFailed => 2,
            ExitStatus::Inconclusive => 3,
            ExitStatus::InputError => 4,
        }
    }

    /// Combines row-level statuses: fail dominates inconclusive dominates pass.
    pub fn merge(self, other: ExitStatus) -> ExitStatus {
        use ExitStatus::*;
        match (self, other) {
            (InputError, _) | (_, InputError) => InputError,
            (CertificationFailed, _) | (_, CertificationFailed) => CertificationFailed,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (Pass, Pass) => Pass,
        }
    }
}

/// One serialized unit of work: what ran, on what, and what came out.
///
/// Round-trips through JSON unchanged; `wall_time_ms` is present only when
/// timings were requested, so default runs stay byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Subcommand path, e.g. `"table"` or `"oracle monomials"`.
    pub command: String,
    /// The configuration this record covers.
    pub config: serde_json::Value,
    /// File paths or inline descriptions of the inputs used.
    pub inputs: Vec<String>,
    /// Certificate or report payload.
    pub outputs: serde_json::Value,
    /// First rung of the precision schedule in effect.
    pub precision_bits: u32,
    /// Seed in effect (meaningful only for randomized commands).
    pub seed: u64,
    /// Wall-clock time, attached only under `--timings`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

/// What a command hands back to the binary for printing.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    /// One record per configuration, in deterministic order.
    pub records: Vec<RunRecord>,
    /// Human-readable summary block.
    pub summary: String,
    /// Aggregated exit status.
    pub status: ExitStatus,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_doubles_to_the_cap() {
        let opts = GlobalOpts::default();
        assert_eq!(opts.schedule(), vec![256, 512, 1024]);
        let wide = GlobalOpts {
            precision_bits: 192,
            max_precision_bits: 1000,
            ..GlobalOpts::default()
        };
        assert_eq!(wide.schedule(), vec![192, 384, 768, 1000]);
        let single = GlobalOpts {
            precision_bits: 2048,
            max_precision_bits: 1024,
            ..GlobalOpts::default()
        };
        assert_eq!(single.schedule(), vec![2048]);
    }

    #[test]
    fn exit_status_merge_prefers_worse_outcomes() {
        use ExitStatus::*;
        assert_eq!(Pass.merge(Pass), Pass);
        assert_eq!(Pass.merge(Inconclusive), Inconclusive);
        assert_eq!(Inconclusive.merge(CertificationFailed), CertificationFailed);
        assert_eq!(CertificationFailed.merge(InputError), InputError);
        assert_eq!(Pass.code(), 0);
        assert_eq!(CertificationFailed.code(), 2);
        assert_eq!(Inconclusive.code(), 3);
        assert_eq!(InputError.code(), 4);
    }

    #[test]
    fn run_records_round_trip() {
        let rec = RunRecord {
            command: "certify".into(),
            config: serde_json::json!({"k": 10, "theta": "1", "nu": 3}),
            inputs: vec!["fixtures/k10.json".into()],
            outputs: serde_json::json!({"verdict": "pass"}),
            precision_bits: 256,
            seed: 1,
            wall_time_ms: None,
        };
        let text = serde_json::to_string(&rec).unwrap();
        let back: RunRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        // no timing field leaks into the default serialization
        assert!(!text.contains("wall_time"));
    }

}
