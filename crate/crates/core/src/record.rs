//! Machine-readable solve records, as JSON lines or CSV rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::ProblemClass;
use crate::mcts::SolveResult;

pub const CSV_COLUMNS: [&str; 10] = [
    "instance",
    "class",
    "objective",
    "assignment",
    "satisfied",
    "hard_violations",
    "n_explore",
    "executions",
    "seed",
    "wall_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub instance: String,
    pub class: ProblemClass,
    pub objective: u64,
    pub assignment: Vec<u8>,
    /// Number of satisfied clauses.
    pub satisfied: usize,
    /// Indices of violated hard clauses.
    pub hard_violations: Vec<usize>,
    /// Episodes run in total.
    pub n_explore: u64,
    pub executions: usize,
    pub seed: u64,
    pub wall_ms: f64,
}

impl ResultRecord {
    pub fn from_solve(instance: &str, class: ProblemClass, r: &SolveResult, seed: u64) -> Self {
        ResultRecord {
            instance: instance.to_string(),
            class,
            objective: r.objective,
            assignment: r.assignment.clone(),
            satisfied: r.satisfied_count(),
            hard_violations: r.hard_violations.clone(),
            n_explore: r.stats.episodes,
            executions: 1,
            seed,
            wall_ms: r.stats.wall_ms,
        }
    }
}

/// One JSON object on a single line.
pub fn write_result(r: &ResultRecord) -> String {
    serde_json::to_string(r).expect("record serialization cannot fail")
}

pub fn parse_result(line: &str) -> Result<ResultRecord> {
    serde_json::from_str(line).map_err(|e| Error::Record(e.to_string()))
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn split<T: std::str::FromStr>(field: &str) -> Result<Vec<T>> {
    field
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Record(format!("bad list entry '{t}'")))
        })
        .collect()
}

pub fn csv_row(r: &ResultRecord) -> Vec<String> {
    vec![
        r.instance.clone(),
        r.class.to_string(),
        r.objective.to_string(),
        join(&r.assignment),
        r.satisfied.to_string(),
        join(&r.hard_violations),
        r.n_explore.to_string(),
        r.executions.to_string(),
        r.seed.to_string(),
        r.wall_ms.to_string(),
    ]
}

/// Header plus one row per record. Lists are space separated inside a field.
pub fn write_csv(records: &[ResultRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in records {
        w.write_record(csv_row(r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Record(e.to_string()))?;
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Record(format!("unexpected header {header:?}")));
    }
    let num = |s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::Record(format!("bad number '{s}'")))
    };
    reader
        .records()
        .map(|row| {
            let row = row.map_err(|e| Error::Record(e.to_string()))?;
            Ok(ResultRecord {
                instance: row[0].to_string(),
                class: row[1].parse()?,
                objective: num(&row[2])?,
                assignment: split(&row[3])?,
                satisfied: num(&row[4])? as usize,
                hard_violations: split(&row[5])?,
                n_explore: num(&row[6])?,
                executions: num(&row[7])? as usize,
                seed: num(&row[8])?,
                wall_ms: row[9]
                    .parse()
                    .map_err(|_| Error::Record(format!("bad wall time '{}'", &row[9])))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> ResultRecord {
        ResultRecord {
            instance: "x.cnf".into(),
            class: ProblemClass::MaxSat,
            objective: 2,
            assignment: vec![1, 0],
            satisfied: 2,
            hard_violations: vec![],
            n_explore: 28,
            executions: 1,
            seed: 9,
            wall_ms: 0.25,
        }
    }

    #[test]
    fn csv_line_carries_objective_and_assignment() {
        let text = write_csv(&[sample()]);
        let line = text.lines().nth(1).unwrap();
        assert!(line.contains(",2,"));
        assert!(line.contains("1 0"));
    }

    #[test]
    fn json_keys() {
        let v: serde_json::Value = serde_json::from_str(&write_result(&sample())).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expected: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
        expected.sort();
        let mut keys_sorted = keys;
        keys_sorted.sort();
        assert_eq!(keys_sorted, expected);
        assert_eq!(v["assignment"], serde_json::json!([1, 0]));
        assert_eq!(v["class"], "maxsat");
    }

    #[test]
    fn empty_stats_record() {
        let r = ResultRecord {
            assignment: vec![],
            objective: 0,
            satisfied: 0,
            n_explore: 0,
            wall_ms: 0.0,
            ..sample()
        };
        assert_eq!(parse_result(&write_result(&r)).unwrap(), r);
        assert_eq!(parse_csv(&write_csv(&[r.clone()])).unwrap(), vec![r]);
    }

    fn arb_class() -> impl Strategy<Value = ProblemClass> {
        prop::sample::select(ProblemClass::ALL.to_vec())
    }

    prop_compose! {
        fn arb_record()(
            instance in "[a-z0-9_,\" .-]{0,12}",
            class in arb_class(),
            objective in any::<u64>(),
            assignment in prop::collection::vec(0u8..=1, 0..30),
            satisfied in 0usize..10_000,
            hard_violations in prop::collection::vec(0usize..500, 0..5),
            n_explore in any::<u64>(),
            executions in 0usize..100,
            seed in any::<u64>(),
            wall_ms in 0.0f64..1e7,
        ) -> ResultRecord {
            ResultRecord { instance, class, objective, assignment, satisfied, hard_violations,
                           n_explore, executions, seed, wall_ms }
        }
    }

    proptest! {
        #[test]
        fn json_round_trip(r in arb_record()) {
            prop_assert_eq!(parse_result(&write_result(&r)).unwrap(), r);
        }

        #[test]
        fn csv_round_trip(records in prop::collection::vec(arb_record(), 1..5)) {
            prop_assert_eq!(parse_csv(&write_csv(&records)).unwrap(), records);
        }
    }
}
