//! Provenance block written at the top of every output file.

use sha2::{Digest, Sha256};

/// Ordered key/value echo of a run configuration.
#[derive(Clone, Debug, Default)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        let mut p = Provenance::default();
        p.push("command", command);
        p
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    /// SHA-256 over the echoed entries, hex encoded.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.entries {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        format!("{:x}", h.finalize())
    }

    /// Comment lines without the leading marker.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("gfactor {}", env!("CARGO_PKG_VERSION")),
            format!("config_hash {}", self.config_hash()),
        ];
        out.extend(self.entries.iter().map(|(k, v)| format!("{k} = {v}")));
        out
    }

    /// The block as `# `-prefixed lines.
    pub fn header(&self) -> String {
        self.lines().iter().map(|l| format!("# {l}\n")).collect()
    }
}

/// SHA-256 of a file's bytes, so that the hash changes with the parameters it names.
pub fn file_digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}
