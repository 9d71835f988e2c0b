//! Line-oriented checkpoint files.
//!
//! ```text
//! sgforest-checkpoint v1
//! <policy descriptor>
//! <partial counts, comma separated>
//! <nodes visited>
//! <pending gap set>        one per line, possibly empty (ℕ)
//! violation <gap set>      only if the partial report holds violations
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::explore::ExplorationReport;
use crate::kernel::GapSet;
use crate::trim::TrimPolicy;

pub const HEADER: &str = "sgforest-checkpoint v1";
const VIOLATION: &str = "violation ";

/// Subtrees still to explore plus everything counted so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub policy_descriptor: String,
    pub pending: Vec<GapSet>,
    pub partial: ExplorationReport,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&self.policy_descriptor);
        out.push('\n');
        let counts: Vec<String> = self.partial.counts.iter().map(u64::to_string).collect();
        out.push_str(&counts.join(","));
        out.push('\n');
        out.push_str(&self.partial.nodes_visited.to_string());
        out.push('\n');
        for g in &self.pending {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        for v in &self.partial.violations {
            out.push_str(VIOLATION);
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, reason: String| Error::Checkpoint {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, HEADER)) => {}
            Some((n, other)) => {
                return Err(err(n, format!("expected {HEADER:?}, found {other:?}")))
            }
            None => return Err(err(1, "empty file".into())),
        }
        let (_, descriptor) = lines
            .next()
            .ok_or_else(|| err(2, "missing policy descriptor".into()))?;
        let (n, counts_line) = lines
            .next()
            .ok_or_else(|| err(3, "missing counts".into()))?;
        let counts = counts_line
            .split(',')
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|e| err(n, format!("bad count {t:?}: {e}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        let (n, visited_line) = lines
            .next()
            .ok_or_else(|| err(4, "missing node total".into()))?;
        let nodes_visited = visited_line
            .parse::<u64>()
            .map_err(|e| err(n, format!("bad node total {visited_line:?}: {e}")))?;
        let sum = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| err(3, "counts overflow".into()))?;
        if sum != nodes_visited {
            return Err(err(
                n,
                format!("node total {nodes_visited} differs from the count sum {sum}"),
            ));
        }
        let mut pending = Vec::new();
        let mut violations = Vec::new();
        for (n, line) in lines {
            if let Some(rest) = line.strip_prefix(VIOLATION) {
                violations.push(rest.parse::<GapSet>().map_err(|e| err(n, e.to_string()))?);
            } else {
                if !violations.is_empty() {
                    return Err(err(n, "pending entry after violations".into()));
                }
                pending.push(line.parse::<GapSet>().map_err(|e| err(n, e.to_string()))?);
            }
        }
        violations.sort();
        let mut partial =
            ExplorationReport::with_descriptor(counts.len() as u32 - 1, descriptor.to_string());
        partial.counts = counts;
        partial.nodes_visited = nodes_visited;
        partial.violations = violations;
        Ok(Checkpoint {
            policy_descriptor: descriptor.to_string(),
            pending,
            partial,
        })
    }

    /// Writes via a temporary sibling file and a rename, so readers never
    /// observe a partial checkpoint.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = tmp_path(path);
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    /// Rejects a checkpoint written for another policy or depth.
    pub fn ensure_matches(&self, policy: &TrimPolicy, depth: u32, path: &Path) -> Result<()> {
        let expected = policy.to_string();
        if self.policy_descriptor != expected {
            return Err(Error::Checkpoint {
                path: path.to_path_buf(),
                line: 2,
                reason: format!(
                    "policy {:?} does not match the requested {:?}",
                    self.policy_descriptor, expected
                ),
            });
        }
        if self.partial.genus_bound != depth {
            return Err(Error::Checkpoint {
                path: path.to_path_buf(),
                line: 3,
                reason: format!(
                    "checkpoint depth {} does not match the requested {depth}",
                    self.partial.genus_bound
                ),
            });
        }
        Ok(())
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

pub fn save_checkpoint(path: &Path, pending: &[GapSet], partial: &ExplorationReport) -> Result<()> {
    Checkpoint {
        policy_descriptor: partial.policy_descriptor.clone(),
        pending: pending.to_vec(),
        partial: partial.clone(),
    }
    .save(path)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    Checkpoint::load(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let policy = TrimPolicy::none(6);
        let mut partial = ExplorationReport::empty(6, &policy);
        partial.counts = vec![1, 1, 2, 4, 0, 0, 0];
        partial.nodes_visited = 8;
        Checkpoint {
            policy_descriptor: policy.to_string(),
            pending: vec![
                GapSet::empty(),
                "1,2,3,4".parse().unwrap(),
                "1,3,5,7".parse().unwrap(),
            ],
            partial,
        }
    }

    #[test]
    fn text_layout() {
        assert_eq!(
            sample().to_text(),
            "sgforest-checkpoint v1\n\
             bound=6 denominator=none left-size=off special=off ordinary-embedding=on\n\
             1,1,2,4,0,0,0\n\
             8\n\
             \n\
             1,2,3,4\n\
             1,3,5,7\n"
        );
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt");
        let mut ck = sample();
        ck.partial.violations = vec!["1,2".parse().unwrap()];
        ck.save(&path).unwrap();
        assert!(!dir.path().join("run.ckpt.tmp").exists());
        assert_eq!(load_checkpoint(&path).unwrap(), ck);
        ck.ensure_matches(&TrimPolicy::none(6), 6, &path).unwrap();
        assert!(ck.ensure_matches(&TrimPolicy::none(7), 6, &path).is_err());
        assert!(ck.ensure_matches(&TrimPolicy::none(6), 5, &path).is_err());
    }

    fn line_of(text: &str) -> usize {
        match Checkpoint::parse(text, Path::new("x")) {
            Err(Error::Checkpoint { line, .. }) => line,
            other => panic!("expected a checkpoint error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_files_name_the_line() {
        assert_eq!(line_of("sgforest-checkpoint v2\nx\n1\n1\n"), 1);
        assert_eq!(line_of(""), 1);
        assert_eq!(line_of("sgforest-checkpoint v1\nd\n1,x\n1\n"), 3);
        assert_eq!(line_of("sgforest-checkpoint v1\nd\n1,1\n3\n"), 4);
        assert_eq!(line_of("sgforest-checkpoint v1\nd\n1,1\n2\n1\n2,1\n"), 6);
        assert_eq!(line_of("sgforest-checkpoint v1\nd\n"), 3);
    }
}
