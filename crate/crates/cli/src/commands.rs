use std::fs;

use anyhow::{bail, ensure, Context, Result};
use dendrodyn::action::{
    classify_minimal_set, detect_finite_orbit, detect_recurrence, evaluate_word, minimal_set_approx, orbit,
    FiniteOrbitOutcome, GeneratorSet, Letter, Word,
};
use dendrodyn::dendrite::DPoint;
use dendrodyn::homeo::{validate_with_seed, DEFAULT_SEED};
use dendrodyn::measure::{
    canonical_measure, folner_average, folner_ratio, invariance_defect, probe_dictionary, push_forward,
    uniform_orbit_measure, FolnerScheme, PLMeasure,
};
use dendrodyn::rational::{fmt_q, qi, Q};
use dendrodyn::structure::{
    build_tree_tower, equicontinuity_certificate_with, frontier_cover, strong_proximality_scan,
    verify_cover_equivariance, CertificateOptions, Verdict,
};
use dendrodyn::zoo::{self, verify_paradox_partition};
use num::Zero;
use serde_json::{json, Value};

use crate::cli::*;
use crate::report::{Report, Table};
use crate::system::{load, Loaded};

pub const MAX_RADIUS: usize = 4096;
pub const MAX_LEVELS: usize = 32;
pub const MAX_WORD_LEN: usize = 10;
/// Radius used when a command needs the finite orbit of a point.
pub const ORBIT_SEARCH_RADIUS: usize = 512;

pub fn run(cmd: &Command, seed: Option<u64>) -> Result<Report> {
    match cmd {
        Command::Orbit(a) => run_orbit(a),
        Command::FiniteOrbit(a) => run_finite_orbit(a),
        Command::MinimalSet(a) => run_minimal_set(a),
        Command::Classify(a) => run_classify(a),
        Command::Tower(a) => run_tower(a),
        Command::Cover(a) => run_cover(a),
        Command::Certify(a) => run_certify(a),
        Command::Measure(a) => run_measure(a),
        Command::Pushforward(a) => run_pushforward(a),
        Command::FolnerAverage(a) => run_folner_average(a),
        Command::Defect(a) => run_defect(a),
        Command::ParadoxCheck(a) => run_paradox(a),
        Command::FolnerRatio(a) => run_folner_ratio(a),
        Command::Proximal(a) => run_proximal(a),
        Command::Recurrence(a) => run_recurrence(a),
        Command::Validate(a) => run_validate(a, seed.unwrap_or(DEFAULT_SEED)),
        Command::Zoo(z) => run_zoo(z),
        Command::Plot(a) => run_plot(a),
    }
}

fn bound(name: &str, value: usize, lo: usize, hi: usize) -> Result<()> {
    ensure!(
        (lo..=hi).contains(&value),
        "ConfigInvalid: {name} must be in {lo}..={hi}, got {value}"
    );
    Ok(())
}

fn positive(name: &str, x: &Q) -> Result<()> {
    ensure!(*x > Q::zero(), "ConfigInvalid: {name} must be positive, got {}", fmt_q(x));
    Ok(())
}

fn run_orbit(a: &OrbitArgs) -> Result<Report> {
    bound("radius", a.radius, 0, MAX_RADIUS)?;
    let sys = load(&a.system)?;
    let x = sys.point(a.point.point.as_deref())?;
    let rep = orbit(&sys.gens()?, &x, a.radius)?;
    let mut t = Table::new(&["R", "size"]);
    for (r, n) in rep.growth.iter().enumerate() {
        t.push(vec![r.to_string(), n.to_string()]);
    }
    Ok(Report::new("orbit", Some(sys.label), &rep)?.with_table(t))
}

fn run_finite_orbit(a: &FiniteOrbitArgs) -> Result<Report> {
    bound("radius", a.radius, 0, MAX_RADIUS)?;
    let sys = load(&a.system)?;
    let x = sys.point(a.point.point.as_deref())?;
    let out = detect_finite_orbit(&sys.gens()?, &x, a.radius)?;
    let mut t = Table::new(&["point"]);
    if let Some(o) = out.orbit() {
        for p in o.iter() {
            t.push(vec![p.to_string()]);
        }
    }
    let result = json!({ "base": x, "outcome": out, "found": out.orbit().is_some() });
    Ok(Report::new("finite-orbit", Some(sys.label), result)?.with_table(t))
}

fn run_minimal_set(a: &MinimalSetArgs) -> Result<Report> {
    bound("radius", a.radius, 0, MAX_RADIUS)?;
    positive("eps", &a.eps.0)?;
    let sys = load(&a.system)?;
    let x = sys.point(a.point.point.as_deref())?;
    let rep = minimal_set_approx(&sys.gens()?, &x, a.radius, &a.eps.0)?;
    let mut t = Table::new(&["R", "increment"]);
    for (i, inc) in rep.increments.iter().enumerate() {
        t.push(vec![(i + 1).to_string(), fmt_q(inc)]);
    }
    Ok(Report::new("minimal-set", Some(sys.label), &rep)?.with_table(t))
}

fn run_classify(a: &ClassifyArgs) -> Result<Report> {
    positive("eps", &a.eps.0)?;
    let sys = load(&a.system)?;
    let m = sys.set(&a.set.points)?;
    let c = classify_minimal_set(&sys.dendrite, &m, &a.eps.0, a.certified)?;
    let mut t = Table::new(&["eps", "verdict"]);
    t.push(vec![fmt_q(&a.eps.0), serde_json::to_value(c.verdict)?.as_str().unwrap_or_default().to_string()]);
    Ok(Report::new("classify", Some(sys.label), &c)?.with_table(t))
}

fn run_tower(a: &TowerArgs) -> Result<Report> {
    bound("n_max", a.n_max, 1, MAX_LEVELS)?;
    let sys = load(&a.system)?;
    let m = sys.set(&a.set.points)?;
    let tower = build_tree_tower(&sys.gens()?, &m, a.n_max)?;
    let mut t = Table::new(&["n", "hausdorff"]);
    for l in &tower.levels {
        t.push(vec![l.n.to_string(), fmt_q(&l.hausdorff_to_m)]);
    }
    Ok(Report::new("tower", Some(sys.label), &tower)?.with_table(t))
}

fn run_cover(a: &CoverArgs) -> Result<Report> {
    bound("level", a.level, 1, MAX_LEVELS)?;
    let sys = load(&a.system)?;
    let gens = sys.gens()?;
    let m = sys.set(&a.set.points)?;
    let tower = build_tree_tower(&gens, &m, a.level)?;
    let Some(level) = tower.level(a.level) else {
        bail!("tower has only {} levels; level {} does not exist", tower.levels.len(), a.level);
    };
    let cover = frontier_cover(&sys.dendrite, &m, &level.subtree)?;
    let eq = verify_cover_equivariance(&gens, &cover)?;
    let mut t = Table::new(&["n", "mesh"]);
    t.push(vec![a.level.to_string(), fmt_q(&cover.mesh)]);
    let failed = !eq.equivariant;
    let result = json!({ "cover": cover, "equivariance": eq });
    Ok(Report::new("cover", Some(sys.label), result)?.with_table(t).failed_if(failed))
}

fn run_certify(a: &CertifyArgs) -> Result<Report> {
    bound("n_max", a.n_max, 1, MAX_LEVELS)?;
    let sys = load(&a.system)?;
    let m = sys.set(&a.set.points)?;
    let mut opts = CertificateOptions::default();
    if let Some(th) = &a.threshold {
        positive("threshold", &th.0)?;
        opts.threshold = th.0.clone();
    }
    let cert = equicontinuity_certificate_with(&sys.gens()?, &m, a.n_max, &opts)?;
    log::info!("certificate verdict {:?}: {}", cert.verdict, cert.explanation);
    let mut t = Table::new(&["n", "mesh"]);
    for l in &cert.levels {
        t.push(vec![l.n.to_string(), fmt_q(&l.mesh)]);
    }
    let failed = cert.verdict == Verdict::Failed;
    Ok(Report::new("certify", Some(sys.label), &cert)?.with_table(t).failed_if(failed))
}

/// The finite orbit through `x`, or an error naming the search radius.
fn finite_orbit_of(gens: &GeneratorSet, x: &DPoint) -> Result<dendrodyn::dendrite::FiniteClosedSet> {
    match detect_finite_orbit(gens, x, ORBIT_SEARCH_RADIUS)? {
        FiniteOrbitOutcome::Found { orbit, .. } => Ok(orbit),
        FiniteOrbitOutcome::NotDetected { .. } => {
            bail!("no finite orbit through {x} within radius {ORBIT_SEARCH_RADIUS}")
        }
    }
}

fn measure_table(mu: &PLMeasure) -> Table {
    let mut t = Table::new(&["atoms", "total_mass"]);
    t.push(vec![mu.atoms().len().to_string(), fmt_q(&mu.total_mass())]);
    t
}

fn run_measure(a: &MeasureArgs) -> Result<Report> {
    let sys = load(&a.system)?;
    let d = sys.dendrite.clone();
    let mu = match a.kind {
        MeasureKind::Canonical => canonical_measure(d),
        MeasureKind::Dirac => PLMeasure::dirac(d, &sys.point(a.point.point.as_deref())?)?,
        MeasureKind::Orbit => {
            let gens = sys.gens()?;
            let o = finite_orbit_of(&gens, &sys.point(a.point.point.as_deref())?)?;
            uniform_orbit_measure(&gens, &o)?
        }
    };
    let t = measure_table(&mu);
    Ok(Report::new("measure", Some(sys.label), &mu)?.with_table(t))
}

fn run_pushforward(a: &PushforwardArgs) -> Result<Report> {
    let sys = load(&a.system)?;
    let gens = sys.gens()?;
    let w = gens.parse_word(&a.word)?;
    let mu = match &a.measure {
        Some(p) => {
            let s = fs::read_to_string(p).with_context(|| format!("ConfigInvalid: cannot read {}", p.display()))?;
            PLMeasure::from_json(sys.dendrite.clone(), &s).with_context(|| format!("parsing {}", p.display()))?
        }
        None => canonical_measure(sys.dendrite.clone()),
    };
    let image = push_forward(&evaluate_word(&w, &gens)?, &mu)?;
    let (before, after) = (mu.total_mass(), image.total_mass());
    let mut t = Table::new(&["word", "mass_in", "mass_out"]);
    t.push(vec![w.to_string(), fmt_q(&before), fmt_q(&after)]);
    let result = json!({
        "word": w,
        "input": mu,
        "output": image,
        "mass_in": fmt_q(&before),
        "mass_out": fmt_q(&after),
        "conserved": before == after,
    });
    Ok(Report::new("pushforward", Some(sys.label), result)?.with_table(t))
}

/// The zoo system's scheme, or the cyclic scheme in the first generator.
fn scheme_for(sys: &Loaded, gens: &GeneratorSet, n_max: usize) -> FolnerScheme {
    match sys.zoo.as_ref().and_then(|z| z.folner.clone()) {
        Some(s) if s.n_max() >= n_max => s,
        Some(s) => FolnerScheme::cyclic(s.generator(), n_max),
        None => FolnerScheme::cyclic(gens.names()[0].clone(), n_max),
    }
}

fn run_folner_average(a: &FolnerAverageArgs) -> Result<Report> {
    bound("n", a.n, 0, MAX_RADIUS)?;
    let sys = load(&a.system)?;
    let gens = sys.gens()?;
    let scheme = scheme_for(&sys, &gens, a.n);
    let x = sys.point(a.point.point.as_deref())?;
    let nu = folner_average(&gens, &scheme, &PLMeasure::dirac(sys.dendrite.clone(), &x)?, a.n)?;
    let t = measure_table(&nu);
    let result = json!({ "generator": scheme.generator(), "n": a.n, "base": x, "average": nu });
    Ok(Report::new("folner-average", Some(sys.label), result)?.with_table(t))
}

fn run_defect(a: &DefectArgs) -> Result<Report> {
    ensure!(!a.ns.is_empty(), "ConfigInvalid: ns must not be empty");
    for n in &a.ns {
        bound("n", *n, 1, MAX_RADIUS)?;
    }
    let sys = load(&a.system)?;
    let gens = sys.gens()?;
    let n_max = *a.ns.iter().max().expect("nonempty");
    let scheme = scheme_for(&sys, &gens, n_max);
    let x = sys.point(a.point.point.as_deref())?;
    let fns = probe_dictionary(&gens, &x)?;
    let sup = fns.iter().map(|f| f.sup_norm()).max().expect("dictionary is nonempty");
    let mu0 = PLMeasure::dirac(sys.dendrite.clone(), &x)?;
    let mut t = Table::new(&["n", "defect", "bound"]);
    let mut rows = Vec::new();
    let mut defects: Vec<Q> = Vec::new();
    for &n in &a.ns {
        let nu = folner_average(&gens, &scheme, &mu0, n)?;
        let defect = invariance_defect(&gens, &nu, &fns)?;
        let b = qi(2) * &sup / qi(2 * n as i64 + 1);
        t.push(vec![n.to_string(), fmt_q(&defect), fmt_q(&b)]);
        rows.push(json!({ "n": n, "defect": fmt_q(&defect), "bound": fmt_q(&b), "within_bound": defect <= b }));
        defects.push(defect);
    }
    let orbit_defect = match detect_finite_orbit(&gens, &x, ORBIT_SEARCH_RADIUS)? {
        FiniteOrbitOutcome::Found { orbit, .. } => {
            Some(fmt_q(&invariance_defect(&gens, &uniform_orbit_measure(&gens, &orbit)?, &fns)?))
        }
        FiniteOrbitOutcome::NotDetected { .. } => None,
    };
    let result = json!({
        "generator": scheme.generator(),
        "base": x,
        "sup_norm": fmt_q(&sup),
        "rows": rows,
        "non_increasing": defects.windows(2).all(|w| w[1] <= w[0]),
        "orbit_measure_defect": orbit_defect,
    });
    Ok(Report::new("defect", Some(sys.label), result)?.with_table(t))
}

fn run_paradox(a: &ParadoxArgs) -> Result<Report> {
    bound("max_len", a.max_len, 0, MAX_WORD_LEN)?;
    let rep = verify_paradox_partition(a.max_len);
    let mut t = Table::new(&["L", "count"]);
    for (l, c) in rep.cumulative_counts.iter().enumerate() {
        t.push(vec![l.to_string(), c.to_string()]);
    }
    let failed = !(rep.bt1.exact && rep.two_piece.exact);
    Ok(Report::new("paradox-check", None, &rep)?.with_table(t).failed_if(failed))
}

fn run_folner_ratio(a: &FolnerRatioArgs) -> Result<Report> {
    ensure!(!a.ns.is_empty(), "ConfigInvalid: ns must not be empty");
    for n in &a.ns {
        bound("n", *n, 0, MAX_RADIUS)?;
    }
    let n_max = *a.ns.iter().max().expect("nonempty");
    let scheme = FolnerScheme::cyclic(a.generator.clone(), n_max);
    let g = Word(vec![Letter::new(a.generator.clone(), false)]);
    let mut t = Table::new(&["n", "ratio"]);
    let mut rows = Vec::new();
    for &n in &a.ns {
        let r = folner_ratio(&scheme, &g, n)?;
        t.push(vec![n.to_string(), fmt_q(&r)]);
        rows.push(json!({ "n": n, "ratio": fmt_q(&r) }));
    }
    let result = json!({ "generator": a.generator, "rows": rows });
    Ok(Report::new("folner-ratio", None, result)?.with_table(t))
}

fn run_proximal(a: &ProximalArgs) -> Result<Report> {
    bound("radius", a.radius, 0, MAX_RADIUS)?;
    let sys = load(&a.system)?;
    let gens = sys.gens()?;
    let tr = strong_proximality_scan(&gens, &canonical_measure(sys.dendrite.clone()), a.radius)?;
    let mut t = Table::new(&["R", "spread"]);
    for (r, s) in tr.trace.iter().enumerate() {
        t.push(vec![r.to_string(), fmt_q(s)]);
    }
    Ok(Report::new("proximal", Some(sys.label), &tr)?.with_table(t))
}

fn run_recurrence(a: &RecurrenceArgs) -> Result<Report> {
    bound("max_len", a.max_len, 1, MAX_WORD_LEN)?;
    positive("eps", &a.eps.0)?;
    let sys = load(&a.system)?;
    let x = sys.point(a.point.point.as_deref())?;
    let rep = detect_recurrence(&sys.gens()?, &x, &a.eps.0, a.max_len)?;
    let mut t = Table::new(&["word", "distance"]);
    for w in &rep.witnesses {
        t.push(vec![w.word.to_string(), fmt_q(&w.distance)]);
    }
    Ok(Report::new("recurrence", Some(sys.label), &rep)?.with_table(t))
}

fn run_validate(a: &ValidateArgs, seed: u64) -> Result<Report> {
    let sys = load(&a.system)?;
    let mut t = Table::new(&["generator", "status"]);
    let mut per = serde_json::Map::new();
    let mut failed = false;
    for (name, h) in &sys.raw {
        let entry = match validate_with_seed(h, seed, a.samples) {
            Ok(cert) => {
                t.push(vec![name.clone(), "ok".into()]);
                json!({ "ok": true, "certificate": cert })
            }
            Err(v) => {
                failed = true;
                log::warn!("{name}: {v}");
                t.push(vec![name.clone(), v.to_string()]);
                json!({ "ok": false, "violation": v, "message": v.to_string() })
            }
        };
        per.insert(name.clone(), entry);
    }
    let result = json!({ "seed": seed, "samples": a.samples, "generators": per, "valid": !failed });
    Ok(Report::new("validate", Some(sys.label), result)?.with_table(t).failed_if(failed))
}

fn run_zoo(z: &ZooCommand) -> Result<Report> {
    match z {
        ZooCommand::List => {
            let mut t = Table::new(&["name", "description"]);
            let mut rows = Vec::new();
            for (name, desc) in zoo::list() {
                t.push(vec![name.to_string(), desc.to_string()]);
                rows.push(json!({ "name": name, "description": desc }));
            }
            Ok(Report::new("zoo", None, rows)?.with_table(t))
        }
        ZooCommand::Export { name } => {
            let sys = zoo::lookup(name).with_context(|| format!("ConfigInvalid: system {name:?}"))?;
            let d = sys.gens.dendrite();
            let mut gens = serde_json::Map::new();
            let mut t = Table::new(&["file"]);
            let mut files = vec![("dendrite.json".to_string(), d.to_json() + "\n")];
            for (g, h) in sys.gens.generators() {
                gens.insert(g.to_string(), serde_json::from_str(&h.to_json())?);
                files.push((format!("{g}.json"), h.to_json() + "\n"));
            }
            for (f, _) in &files {
                t.push(vec![f.clone()]);
            }
            let result = json!({
                "dendrite": serde_json::from_str::<Value>(&d.to_json())?,
                "generators": gens,
                "base_point": sys.base_point,
                "minimal_set": sys.minimal_set,
            });
            let mut r = Report::new("zoo", Some(sys.name.clone()), result)?.with_table(t);
            r.attachments = files;
            Ok(r)
        }
    }
}

fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value> {
    let mut cur = v;
    for key in path {
        cur = cur.get(*key).with_context(|| format!("report has no field {:?}", path.join(".")))?;
    }
    Ok(cur)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn run_plot(a: &PlotArgs) -> Result<Report> {
    let raw = fs::read_to_string(&a.report).with_context(|| format!("ReportMissing: {}", a.report.display()))?;
    let v: Value = serde_json::from_str(&raw).with_context(|| format!("parsing {}", a.report.display()))?;
    let (header, rows): (&[&'static str], Vec<Vec<String>>) = match a.kind {
        PlotKind::Mesh => (
            &["n", "mesh"],
            array(field(&v, &["result", "levels"])?)?
                .iter()
                .map(|l| Ok(vec![scalar(field(l, &["n"])?), scalar(field(l, &["mesh"])?)]))
                .collect::<Result<_>>()?,
        ),
        PlotKind::Defect => (
            &["n", "defect"],
            array(field(&v, &["result", "rows"])?)?
                .iter()
                .map(|r| Ok(vec![scalar(field(r, &["n"])?), scalar(field(r, &["defect"])?)]))
                .collect::<Result<_>>()?,
        ),
        PlotKind::Growth => (
            &["R", "orbit"],
            array(field(&v, &["result", "growth"])?)?
                .iter()
                .enumerate()
                .map(|(r, n)| Ok(vec![r.to_string(), scalar(n)]))
                .collect::<Result<_>>()?,
        ),
        PlotKind::Delta => (
            &["eps", "delta"],
            array(field(&v, &["result", "delta_table"])?)?
                .iter()
                .map(|e| {
                    let pair = array(e)?;
                    ensure!(pair.len() == 2, "delta entries are [eps, delta] pairs");
                    Ok(vec![scalar(&pair[0]), scalar(&pair[1])])
                })
                .collect::<Result<_>>()?,
        ),
    };
    let mut t = Table::new(header);
    for r in rows {
        t.push(r);
    }
    let name = match a.kind {
        PlotKind::Mesh => "plot-mesh",
        PlotKind::Defect => "plot-defect",
        PlotKind::Growth => "plot-growth",
        PlotKind::Delta => "plot-delta",
    };
    let result = json!({ "source": a.report.display().to_string(), "header": header, "rows": t.rows });
    Ok(Report::new(name, None, result)?.with_table(t))
}

fn array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().context("expected an array in the report")
}
