use std::collections::HashSet;
use std::fmt::Write as _;

use super::IdMap;
use crate::destinations::DestinationSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PseudoSpec {
    pub id: i64,
    pub must_visit: bool,
}

/// Destinations of one planning query, in external node ids.
///
/// Text form, one record per line, `#` comments:
///
/// ```text
/// scenario v1
/// source 101
/// target 202
/// objectives 7 8 9
/// pseudo 55
/// pseudo 56 must_visit
/// ```
///
/// `objectives` may repeat; its ids accumulate in order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScenarioSpec {
    pub source: i64,
    pub target: i64,
    pub objectives: Vec<i64>,
    pub pseudo: Vec<PseudoSpec>,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.source == self.target {
            return Err(Error::Scenario("source and target must differ".into()));
        }
        let mut seen = HashSet::from([self.source, self.target]);
        for id in self.objectives.iter().chain(self.pseudo.iter().map(|p| &p.id)) {
            if !seen.insert(*id) {
                return Err(Error::DuplicateDestination(*id));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("scenario v1\n");
        writeln!(out, "source {}", self.source).unwrap();
        writeln!(out, "target {}", self.target).unwrap();
        if !self.objectives.is_empty() {
            let ids: Vec<String> = self.objectives.iter().map(i64::to_string).collect();
            writeln!(out, "objectives {}", ids.join(" ")).unwrap();
        }
        for p in &self.pseudo {
            if p.must_visit {
                writeln!(out, "pseudo {} must_visit", p.id).unwrap();
            } else {
                writeln!(out, "pseudo {}", p.id).unwrap();
            }
        }
        out
    }
}

fn bad(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn id(tok: Option<&str>, line: usize) -> Result<i64> {
    let tok = tok.ok_or_else(|| bad(line, "missing node id"))?;
    tok.parse().map_err(|_| bad(line, format!("invalid node id `{tok}`")))
}

pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let mut source = None;
    let mut target = None;
    let mut objectives = Vec::new();
    let mut pseudo = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut toks = content.split_whitespace();
        let Some(key) = toks.next() else { continue };
        match key {
            "scenario" => {
                if toks.next() != Some("v1") {
                    return Err(bad(line, "unsupported scenario version"));
                }
            }
            "source" | "target" => {
                let v = id(toks.next(), line)?;
                let slot = if key == "source" { &mut source } else { &mut target };
                if slot.replace(v).is_some() {
                    return Err(bad(line, format!("`{key}` given twice")));
                }
            }
            "objectives" => {
                for tok in toks.by_ref() {
                    objectives.push(id(Some(tok), line)?);
                }
            }
            "pseudo" => {
                let pid = id(toks.next(), line)?;
                let must_visit = match toks.next() {
                    None => false,
                    Some("must_visit") => true,
                    Some(other) => return Err(bad(line, format!("unknown pseudo flag `{other}`"))),
                };
                pseudo.push(PseudoSpec { id: pid, must_visit });
            }
            other => return Err(bad(line, format!("unknown key `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(bad(line, "trailing fields"));
        }
    }

    let spec = ScenarioSpec {
        source: source.ok_or_else(|| Error::Scenario("missing `source`".into()))?,
        target: target.ok_or_else(|| Error::Scenario("missing `target`".into()))?,
        objectives,
        pseudo,
    };
    spec.validate()?;
    Ok(spec)
}

/// Maps a scenario onto internal node ids.
pub fn resolve_scenario(spec: &ScenarioSpec, ids: &IdMap) -> Result<DestinationSet> {
    spec.validate()?;
    let objectives = spec
        .objectives
        .iter()
        .map(|&o| ids.resolve(o))
        .collect::<Result<Vec<_>>>()?;
    let pseudo = spec
        .pseudo
        .iter()
        .map(|p| Ok((ids.resolve(p.id)?, p.must_visit)))
        .collect::<Result<Vec<_>>>()?;
    DestinationSet::new(ids.resolve(spec.source)?, ids.resolve(spec.target)?, &objectives)?
        .add_pseudo_destinations(&pseudo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let text = "scenario v1\nsource 1\ntarget 2 # end\nobjectives 3 4\nobjectives 5\npseudo 6\npseudo 7 must_visit\n";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.objectives, vec![3, 4, 5]);
        assert_eq!(s.pseudo[1], PseudoSpec { id: 7, must_visit: true });
        assert_eq!(parse_scenario(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn empty_objectives_resolve_to_two() {
        let ids = IdMap::identity(5);
        let s = parse_scenario("source 0\ntarget 4\n").unwrap();
        assert_eq!(resolve_scenario(&s, &ids).unwrap().len(), 2);
    }

    #[test]
    fn rejects_duplicates_and_unknowns() {
        assert_eq!(
            parse_scenario("source 0\ntarget 4\nobjectives 2 2\n"),
            Err(Error::DuplicateDestination(2))
        );
        assert!(parse_scenario("source 0\ntarget 0\n").is_err());
        assert!(parse_scenario("source 0\n").is_err());
        assert!(parse_scenario("source 0\ntarget 1\npseudo 3 maybe\n").is_err());
        let ids = IdMap::identity(3);
        let s = parse_scenario("source 0\ntarget 1\nobjectives 99\n").unwrap();
        assert_eq!(resolve_scenario(&s, &ids), Err(Error::UnknownId(99)));
    }

    #[test]
    fn twenty_five_objectives() {
        let ids = IdMap::identity(100);
        let objectives: Vec<String> = (10..35).map(|i| i.to_string()).collect();
        let text = format!("source 0\ntarget 99\nobjectives {}\n", objectives.join(" "));
        let dests = resolve_scenario(&parse_scenario(&text).unwrap(), &ids).unwrap();
        assert_eq!(dests.len(), 27);
    }
}
