use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use dendrodyn::action::GeneratorSet;
use dendrodyn::dendrite::{DPoint, Dendrite, EdgeId, FiniteClosedSet, VertexId};
use dendrodyn::homeo::Homeo;
use dendrodyn::rational::parse_q;
use dendrodyn::zoo::{lookup, ZooSystem};

use crate::cli::SystemArgs;

/// A loaded system: raw generators (unvalidated), plus zoo metadata when
/// the system came from the zoo.
pub struct Loaded {
    pub label: String,
    pub dendrite: Arc<Dendrite>,
    pub raw: Vec<(String, Homeo)>,
    pub zoo: Option<ZooSystem>,
}

impl Loaded {
    pub fn gens(&self) -> Result<GeneratorSet> {
        if let Some(z) = &self.zoo {
            return Ok(z.gens.clone());
        }
        GeneratorSet::new(self.raw.clone()).context("generators do not form a valid action")
    }

    pub fn base_point(&self) -> DPoint {
        match &self.zoo {
            Some(z) => z.base_point.clone(),
            None => DPoint::Vertex(self.dendrite.root()),
        }
    }

    pub fn point(&self, arg: Option<&str>) -> Result<DPoint> {
        match arg {
            Some(s) => parse_point(&self.dendrite, s),
            None => Ok(self.base_point()),
        }
    }

    /// The explicit point set, or the zoo system's minimal set.
    pub fn set(&self, args: &[String]) -> Result<FiniteClosedSet> {
        if !args.is_empty() {
            return args.iter().map(|s| parse_point(&self.dendrite, s)).collect();
        }
        match self.zoo.as_ref().and_then(|z| z.minimal_set.clone()) {
            Some(m) => Ok(m),
            None => bail!("ConfigInvalid: --points is required for a custom system"),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("ConfigInvalid: cannot read {}", path.display()))
}

pub fn load(args: &SystemArgs) -> Result<Loaded> {
    match (&args.system, &args.dendrite) {
        (Some(name), None) => {
            if !args.homeos.is_empty() {
                bail!("ConfigInvalid: --homeo only applies with --dendrite");
            }
            let z = lookup(name).with_context(|| format!("ConfigInvalid: system {name:?}"))?;
            Ok(Loaded {
                label: z.name.clone(),
                dendrite: z.gens.dendrite().clone(),
                raw: z.gens.generators().map(|(n, h)| (n.to_string(), h.clone())).collect(),
                zoo: Some(z),
            })
        }
        (None, Some(path)) => {
            let d = Dendrite::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            let d = Arc::new(d);
            if args.homeos.is_empty() {
                bail!("ConfigInvalid: at least one --homeo NAME=FILE is required");
            }
            let mut raw = Vec::new();
            for spec in &args.homeos {
                let (name, file) = spec
                    .split_once('=')
                    .with_context(|| format!("ConfigInvalid: expected NAME=FILE, got {spec:?}"))?;
                let h = Homeo::from_json(d.clone(), &read(Path::new(file))?)
                    .with_context(|| format!("parsing homeomorphism {file}"))?;
                raw.push((name.to_string(), h));
            }
            Ok(Loaded {
                label: path.display().to_string(),
                dendrite: d,
                raw,
                zoo: None,
            })
        }
        (Some(_), Some(_)) => bail!("ConfigInvalid: give either --system or --dendrite, not both"),
        (None, None) => bail!("ConfigInvalid: a system is required (--system NAME or --dendrite FILE)"),
    }
}

/// `v7`, `e3@1/2`, or a bare rational on a one-edge dendrite.
pub fn parse_point(d: &Dendrite, s: &str) -> Result<DPoint> {
    let s = s.trim();
    let p = if let Some(v) = s.strip_prefix('v') {
        DPoint::Vertex(VertexId(v.parse().with_context(|| format!("bad vertex {s:?}"))?))
    } else if let Some(rest) = s.strip_prefix('e') {
        let (e, t) = rest.split_once('@').with_context(|| format!("bad edge point {s:?}"))?;
        let e = EdgeId(e.parse().with_context(|| format!("bad edge id in {s:?}"))?);
        d.edge_point(e, parse_q(t)?)?
    } else if d.edges().len() == 1 {
        d.edge_point(d.edges()[0].id, parse_q(s)?)?
    } else {
        bail!("bad point {s:?}: use v<id> or e<id>@<t>");
    };
    d.check_point(&p).with_context(|| format!("point {s}"))?;
    Ok(p)
}
