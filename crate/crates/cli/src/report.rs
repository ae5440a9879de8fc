//! Report blocks and their text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub queries: Vec<Entry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub kind: &'static str,
    pub inputs: Inputs,
    pub result: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBlock>,
    pub warnings: Vec<String>,
    /// Echo of the query or declaration used as the text header.
    #[serde(skip)]
    pub header: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBlock {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip)]
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Inputs {
    Declaration { name: String },
    Jet { order: usize },
    Ram { action: String, prime: String, upto: usize },
    Poly { poly: String, prime: String, order: usize },
    Verify { action: String, prime: String, order: usize, depth: usize },
    Fiber { prime: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Level {
    pub s: usize,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Image {
    pub variable: String,
    pub image: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Induced {
    pub generator: String,
    pub images: Vec<Image>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyLevel {
    pub depth: usize,
    pub s: usize,
    pub site: Vec<String>,
    pub elements: Vec<String>,
    pub verdict: &'static str,
    pub closure_size: usize,
    pub induced: Vec<Induced>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisLine {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Jet {
        ring: Vec<String>,
        ideal: Vec<String>,
    },
    Ram {
        levels: Vec<Level>,
    },
    Taylor {
        value: String,
        a0: String,
        a1: String,
    },
    Kernel {
        value: String,
        kernel: bool,
        power: String,
        power_member: bool,
        agree: bool,
    },
    Verify {
        group_order: usize,
        base: Level,
        levels: Vec<VerifyLevel>,
        hypotheses: Vec<HypothesisLine>,
    },
    Fiber {
        free_fiber_rank: Option<usize>,
        cotangent_dimension: usize,
    },
}

impl Report {
    /// Exit status taken from the first failed block, `0` when none failed.
    pub fn exit_code(&self) -> i32 {
        self.queries.iter().find_map(|e| e.error.as_ref().map(|b| b.exit_code)).unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# format: {FORMAT_VERSION}\n");
        for e in &self.queries {
            out.push('\n');
            render_entry(&mut out, e);
        }
        out
    }
}

fn set(words: &[String]) -> String {
    format!("{{ {} }}", words.join(", "))
}

fn render_entry(out: &mut String, e: &Entry) {
    let _ = writeln!(out, "== {}", e.header);
    if let Some(err) = &e.error {
        let _ = writeln!(out, "ERROR {}: {}", err.kind, err.message);
    }
    match &e.result {
        None => {}
        Some(Outcome::Jet { ring, ideal }) => {
            let _ = writeln!(out, "ring: {}", ring.join(", "));
            if ideal.is_empty() {
                let _ = writeln!(out, "ideal: (empty)");
            } else {
                let _ = writeln!(out, "ideal: {}", ideal.join(", "));
            }
        }
        Some(Outcome::Ram { levels }) => {
            for l in levels {
                let _ = writeln!(out, "G_{} = {}", l.s, set(&l.elements));
            }
        }
        Some(Outcome::Taylor { value, .. }) => {
            let _ = writeln!(out, "value: {value}");
        }
        Some(Outcome::Kernel { value, kernel, power, power_member, agree }) => {
            let _ = writeln!(out, "value: {value}");
            let _ = writeln!(out, "kernel: {kernel}");
            let _ = writeln!(out, "in {power}: {power_member}");
            let _ = writeln!(out, "agree: {agree}");
        }
        Some(Outcome::Verify { group_order, base, levels, hypotheses }) => {
            let _ = writeln!(out, "group order: {group_order}");
            let _ = writeln!(out, "base G_{} = {}", base.s, set(&base.elements));
            for l in levels {
                let k = l.depth;
                let _ = writeln!(out, "depth {k} site: ({})", l.site.join(", "));
                let _ = writeln!(out, "depth {k} closure: {} elements", l.closure_size);
                for ind in &l.induced {
                    let maps: Vec<String> = ind.images.iter().map(|i| format!("{} -> {}", i.variable, i.image)).collect();
                    let body = if maps.is_empty() { "identity".to_string() } else { maps.join("; ") };
                    let _ = writeln!(out, "depth {k} induced {}: {body}", ind.generator);
                }
                let _ = writeln!(out, "depth {k} G_{} = {}", l.s, set(&l.elements));
                let _ = writeln!(out, "LEVEL {k}: {}", l.verdict);
            }
            for h in hypotheses {
                let state = if h.holds { "holds" } else { "fails" };
                let _ = writeln!(out, "hypothesis {}: {state} ({})", h.name, h.detail);
            }
        }
        Some(Outcome::Fiber { free_fiber_rank, cotangent_dimension }) => {
            match free_fiber_rank {
                Some(r) => {
                    let _ = writeln!(out, "free_fiber_rank: {r}");
                }
                None => {
                    let _ = writeln!(out, "free_fiber_rank: undetermined");
                }
            }
            let _ = writeln!(out, "cotangent_dimension: {cotangent_dimension}");
        }
    }
    for w in &e.warnings {
        let _ = writeln!(out, "WARNING {w}");
    }
}
