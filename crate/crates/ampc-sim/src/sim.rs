use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, SimConfig};

pub type Key = u64;

/// Size of a stored value in machine words.
pub trait Words {
    fn words(&self) -> u64;
}

impl Words for u64 {
    fn words(&self) -> u64 {
        1
    }
}

impl Words for Vec<u64> {
    fn words(&self) -> u64 {
        self.len() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimFault {
    #[error("round {round}, machine {machine}: {what}")]
    Budget {
        round: u64,
        machine: usize,
        what: String,
    },
    #[error("round {round}: {what}")]
    Round { round: u64, what: String },
    #[error(transparent)]
    Config(#[from] ConfigErrorText),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ConfigErrorText(pub String);

impl From<ConfigError> for SimFault {
    fn from(e: ConfigError) -> Self {
        SimFault::Config(ConfigErrorText(e.to_string()))
    }
}

/// Per-machine accounting for one round.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineStats {
    pub reads: u64,
    pub writes: u64,
    pub peak_words: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub label: String,
    pub machines: Vec<MachineStats>,
    /// Words in the generation this round produced.
    pub table_words: u64,
    /// Rounds stood in for by an opaque subroutine charge (0 for real rounds).
    pub charged: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub label: String,
    pub rounds: u64,
}

/// Stable JSON report of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub rounds: u64,
    pub phases: Vec<PhaseReport>,
    pub peak_machine_words: u64,
    pub total_words: u64,
    pub dht_reads: u64,
    pub dht_writes: u64,
    pub violations: Vec<String>,
}

impl Metrics {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics serialize")
    }
}

#[derive(Debug, Clone, Default)]
pub struct RoundLedger {
    pub rounds: Vec<RoundRecord>,
    pub phases: Vec<PhaseReport>,
    pub violations: Vec<String>,
    open_phase: Option<(String, u64)>,
}

/// Handle given to a machine program for one round.
pub struct Machine<'a, V> {
    pub id: usize,
    round: u64,
    prev: &'a HashMap<Key, V>,
    out: Vec<(Key, V)>,
    stats: MachineStats,
    held: u64,
    implicit: u64,
    faults: Vec<String>,
}

impl<'a, V: Words> Machine<'a, V> {
    /// Adaptive read from the previous generation. A miss costs one word.
    pub fn read(&mut self, key: Key) -> Option<&'a V> {
        let v = self.prev.get(&key);
        let w = v.map_or(1, Words::words);
        self.stats.reads += w;
        self.hold(w);
        v
    }

    pub fn write(&mut self, key: Key, value: V) {
        let w = value.words();
        self.stats.writes += w;
        self.hold(w);
        self.out.push((key, value));
    }

    /// Write addressed to an explicit generation; only the one being built is writable.
    pub fn write_generation(&mut self, generation: u64, key: Key, value: V) {
        if generation != self.round {
            self.faults.push(format!(
                "write to frozen generation {generation} while building {}",
                self.round
            ));
            return;
        }
        self.write(key, value);
    }

    /// Declares local working memory beyond what was read or written.
    pub fn hold(&mut self, words: u64) {
        self.held += words;
        self.stats.peak_words = self.stats.peak_words.max(self.held);
    }

    /// Drops words no longer needed locally (streaming).
    pub fn release(&mut self, words: u64) {
        self.held = self.held.saturating_sub(words);
    }

    pub fn generation(&self) -> u64 {
        self.round
    }

    /// Access to a record of which only some entries are inspected. The
    /// caller charges the inspected words with [`Machine::charge_read`].
    pub fn read_partial(&mut self, key: Key) -> Option<&'a V> {
        self.prev.get(&key)
    }

    pub fn charge_read(&mut self, words: u64) {
        self.stats.reads += words;
        self.hold(words);
    }

    /// Rewrites a record of which only `changed` words differ; the rest is
    /// charged to copy machines like any other carried entry.
    pub fn write_partial(&mut self, key: Key, value: V, changed: u64) {
        let w = value.words();
        let changed = changed.min(w);
        self.stats.writes += changed;
        self.hold(changed);
        self.implicit += w - changed;
        self.out.push((key, value));
    }

    pub fn fault(&mut self, what: String) {
        self.faults.push(what);
    }
}

pub type Program<'p, V> = Box<dyn for<'a> FnOnce(&mut Machine<'a, V>) + Send + 'p>;

/// Round-synchronous AMPC simulator over a sequence of hash-table generations.
pub struct Simulator<V> {
    cfg: SimConfig,
    table: Arc<HashMap<Key, V>>,
    round: u64,
    ledger: RoundLedger,
    pool: Option<rayon::ThreadPool>,
}

impl<V> Simulator<V>
where
    V: Words + Clone + PartialEq + Send + Sync,
{
    pub fn new(cfg: SimConfig) -> Result<Self, SimFault> {
        cfg.validate()?;
        let pool = match cfg.threads {
            Some(t) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| SimFault::Round {
                        round: 0,
                        what: e.to_string(),
                    })?,
            ),
            None => None,
        };
        Ok(Simulator {
            cfg,
            table: Arc::new(HashMap::new()),
            round: 0,
            ledger: RoundLedger::default(),
            pool,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    /// Latest frozen generation, as seen by the orchestrator.
    pub fn table(&self) -> &HashMap<Key, V> {
        &self.table
    }

    /// Installs the input as generation 0 without charging rounds.
    pub fn load(&mut self, input: HashMap<Key, V>) {
        self.table = Arc::new(input);
    }

    /// Moves matching entries out of the latest generation (archival).
    pub fn drain<F: Fn(Key, &V) -> bool>(&mut self, pred: F) -> Vec<(Key, V)> {
        let table = Arc::make_mut(&mut self.table);
        let mut keys: Vec<Key> = table
            .iter()
            .filter(|(k, v)| pred(**k, v))
            .map(|(k, _)| *k)
            .collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|k| {
                let v = table.remove(&k).expect("drained key present");
                (k, v)
            })
            .collect()
    }

    pub fn ledger(&self) -> &RoundLedger {
        &self.ledger
    }

    pub fn begin_phase(&mut self, label: &str) {
        self.end_phase();
        self.ledger.open_phase = Some((label.to_string(), self.round));
    }

    pub fn end_phase(&mut self) {
        if let Some((label, start)) = self.ledger.open_phase.take() {
            self.ledger.phases.push(PhaseReport {
                label,
                rounds: self.round - start,
            });
        }
    }

    /// Records an externally detected violation.
    pub fn violation(&mut self, what: String) -> Result<(), SimFault> {
        self.ledger.violations.push(what.clone());
        if self.cfg.strict {
            return Err(SimFault::Round {
                round: self.round,
                what,
            });
        }
        Ok(())
    }

    /// Executes one round: every program reads the frozen table and their
    /// writes become the next generation.
    pub fn run_round(
        &mut self,
        label: &str,
        programs: Vec<Program<'_, V>>,
    ) -> Result<(), SimFault> {
        self.run_round_carry(label, programs, |_, _| false)
    }

    /// Like [`Simulator::run_round`], but entries of the previous generation
    /// that were not rewritten and satisfy `keep` are copied forward by
    /// streaming copy machines, each moving at most `S` words.
    pub fn run_round_carry<F>(
        &mut self,
        label: &str,
        programs: Vec<Program<'_, V>>,
        keep: F,
    ) -> Result<(), SimFault>
    where
        F: Fn(Key, &V) -> bool,
    {
        let round = self.round + 1;
        let prev = std::mem::take(&mut self.table);
        let run = |(id, p): (usize, Program<'_, V>)| {
            let mut m = Machine {
                id,
                round,
                prev: &prev,
                out: Vec::new(),
                stats: MachineStats::default(),
                held: 0,
                implicit: 0,
                faults: Vec::new(),
            };
            p(&mut m);
            (m.stats, m.out, m.faults, m.implicit)
        };
        let indexed: Vec<(usize, Program<'_, V>)> = programs.into_iter().enumerate().collect();
        let results: Vec<_> = match (&self.pool, indexed.len()) {
            (_, 0 | 1) => indexed.into_iter().map(run).collect(),
            (Some(pool), _) => pool.install(|| indexed.into_par_iter().map(run).collect()),
            (None, _) => indexed.into_par_iter().map(run).collect(),
        };

        let space = self.cfg.space();
        let io = self.cfg.io_limit();
        let mut violations = Vec::new();
        let mut next: HashMap<Key, V> = HashMap::new();
        let mut owner: HashMap<Key, usize> = HashMap::new();
        let mut stats = Vec::with_capacity(results.len());
        let mut implicit = 0;
        for (id, (s, out, faults, imp)) in results.into_iter().enumerate() {
            implicit += imp;
            for f in faults {
                violations.push(format!("round {round} ({label}), machine {id}: {f}"));
            }
            if s.reads > io {
                violations.push(format!(
                    "round {round} ({label}), machine {id}: {} reads exceed {io}",
                    s.reads
                ));
            }
            if s.writes > io {
                violations.push(format!(
                    "round {round} ({label}), machine {id}: {} writes exceed {io}",
                    s.writes
                ));
            }
            if s.peak_words > space {
                violations.push(format!(
                    "round {round} ({label}), machine {id}: {} local words exceed {space}",
                    s.peak_words
                ));
            }
            for (k, v) in out {
                match next.get(&k) {
                    Some(old) if *old != v => violations.push(format!(
                        "round {round} ({label}): conflicting writes to key {k} by machines {} and {id}",
                        owner[&k]
                    )),
                    Some(_) => {}
                    None => {
                        owner.insert(k, id);
                        next.insert(k, v);
                    }
                }
            }
            stats.push(s);
        }

        let mut prev = Arc::try_unwrap(prev).unwrap_or_else(|a| (*a).clone());
        let mut carried: Vec<Key> = prev
            .iter()
            .filter(|(k, v)| !next.contains_key(k) && keep(**k, v))
            .map(|(k, _)| *k)
            .collect();
        carried.sort_unstable();
        let mut copy_words = implicit;
        for k in carried {
            let v = prev.remove(&k).expect("carried key present");
            copy_words += v.words();
            next.insert(k, v);
        }
        while copy_words > 0 {
            let w = copy_words.min(space);
            copy_words -= w;
            stats.push(MachineStats {
                reads: w,
                writes: w,
                peak_words: 2,
            });
        }
        if stats.len() as u64 > self.cfg.max_machines() {
            violations.push(format!(
                "round {round} ({label}): {} machines exceed bound {}",
                stats.len(),
                self.cfg.max_machines()
            ));
        }
        let table_words: u64 = next.values().map(Words::words).sum();
        if table_words > self.cfg.total_limit() {
            violations.push(format!(
                "round {round} ({label}): table holds {table_words} words, limit {}",
                self.cfg.total_limit()
            ));
        }
        self.ledger.rounds.push(RoundRecord {
            round,
            label: label.to_string(),
            machines: stats,
            table_words,
            charged: 0,
        });
        self.table = Arc::new(next);
        self.round = round;
        self.flush(violations)
    }

    /// Advances the clock for an opaque subroutine. The current generation
    /// stays readable as the subroutine's output.
    pub fn charge_subroutine(&mut self, name: &str, rounds: u64) {
        assert!(rounds >= 1, "a charged subroutine costs at least one round");
        let table_words = self.table.values().map(Words::words).sum();
        self.round += rounds;
        self.ledger.rounds.push(RoundRecord {
            round: self.round,
            label: name.to_string(),
            machines: Vec::new(),
            table_words,
            charged: rounds,
        });
    }

    fn flush(&mut self, violations: Vec<String>) -> Result<(), SimFault> {
        if violations.is_empty() {
            return Ok(());
        }
        let first = violations[0].clone();
        self.ledger.violations.extend(violations);
        if self.cfg.strict {
            return Err(SimFault::Round {
                round: self.round,
                what: first,
            });
        }
        Ok(())
    }

    pub fn snapshot_metrics(&self) -> Metrics {
        let mut phases = self.ledger.phases.clone();
        if let Some((label, start)) = &self.ledger.open_phase {
            phases.push(PhaseReport {
                label: label.clone(),
                rounds: self.round - start,
            });
        }
        let machines = self.ledger.rounds.iter().flat_map(|r| r.machines.iter());
        let (mut peak, mut reads, mut writes) = (0, 0, 0);
        for m in machines {
            peak = u64::max(peak, m.peak_words);
            reads += m.reads;
            writes += m.writes;
        }
        Metrics {
            rounds: self.round,
            phases,
            peak_machine_words: peak,
            total_words: self
                .ledger
                .rounds
                .iter()
                .map(|r| r.table_words)
                .max()
                .unwrap_or(0),
            dht_reads: reads,
            dht_writes: writes,
            violations: self.ledger.violations.clone(),
        }
    }
}
