//! The four built-in example manifests and their golden reports.

use crate::engine::{run, Backend, RunError};
use crate::manifest::{parse_manifest, Manifest};
use crate::report::Report;

pub struct Builtin {
    pub name: &'static str,
    pub source: &'static str,
    pub golden_text: &'static str,
    pub golden_machine: &'static str,
}

macro_rules! builtin {
    ($name:literal) => {
        Builtin {
            name: $name,
            source: include_str!(concat!("../manifests/", $name, ".gman")),
            golden_text: include_str!(concat!("../manifests/golden/", $name, ".txt")),
            golden_machine: include_str!(concat!("../manifests/golden/", $name, ".json")),
        }
    };
}

pub const BUILTINS: [Builtin; 4] = [builtin!("heisenberg"), builtin!("mk"), builtin!("s6"), builtin!("s5s1")];

impl Builtin {
    pub fn manifest(&self) -> Manifest {
        parse_manifest(self.source).expect("built-in manifests parse")
    }

    /// Exact report of this manifest alone.
    pub fn report(&self) -> Result<Report, RunError> {
        run(&[self.manifest()], Backend::Exact)
    }
}

/// First line where two texts differ, 1-based, with both sides.
pub fn first_difference(expected: &str, actual: &str) -> Option<(usize, String, String)> {
    let (mut e, mut a) = (expected.lines(), actual.lines());
    let mut n = 0;
    loop {
        n += 1;
        match (e.next(), a.next()) {
            (None, None) => {
                return (expected != actual).then(|| (n, "<end of file>".into(), "<trailing difference>".into()));
            }
            (x, y) if x == y => continue,
            (x, y) => {
                return Some((n, x.unwrap_or("<end of file>").into(), y.unwrap_or("<end of file>").into()));
            }
        }
    }
}
