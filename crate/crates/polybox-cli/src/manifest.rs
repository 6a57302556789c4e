//! Run manifest: command line, parameters, input and result digests,
//! budget, and elapsed time. Emitted on stderr as one JSON line so the
//! report itself stays byte-reproducible.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Display;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use polybox::Budget;
use serde::Serialize;

#[derive(Serialize)]
pub struct RunManifest {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    parameters: Vec<(String, String)>,
    budget_nodes: Option<u64>,
    budget_seconds: Option<u64>,
    workers: Option<usize>,
    input_digests: Vec<String>,
    result_digest: Option<String>,
    elapsed_millis: u128,
    #[serde(skip)]
    started: Instant,
}

impl RunManifest {
    pub fn start(common: &crate::Common, budget: Budget) -> RunManifest {
        RunManifest {
            tool: "polybox",
            version: env!("CARGO_PKG_VERSION"),
            command: std::env::args().collect(),
            parameters: Vec::new(),
            budget_nodes: budget.max_nodes,
            budget_seconds: budget.max_seconds,
            workers: common.workers,
            input_digests: Vec::new(),
            result_digest: None,
            elapsed_millis: 0,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    pub fn input(&mut self, text: &str) {
        self.input_digests.push(digest(text));
    }

    pub fn finish(&mut self, rendered: &str) {
        self.result_digest = Some(digest(rendered));
        self.elapsed_millis = self.started.elapsed().as_millis();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }
}

fn digest(text: &str) -> String {
    let mut hasher = DefaultHasher::new();
    text.hash(&mut hasher);
    format!("{:016x}", hasher.finish())
}
