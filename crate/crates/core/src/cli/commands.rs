use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::*;
use crate::catalog;
use crate::code_model::{
    build_md_matrix, build_sc_matrix, edge_distribution,
    io::{format_relocation, parse_lifting, parse_partition, parse_relocation, write_code, CodeDescriptor},
    CodeParams, DesignTriple, RelocationMatrix,
};
use crate::flcount::{
    cache, count_objects_md, count_objects_md_direct, count_objects_sc, list_active_objects, ObjectList,
};
use crate::grade::{concat_probability, forecast, lambda_coeffs, run_md_grade, ConcatWeights, GradeConfig, Objective};
use crate::mcmc::{quantize_init, run_mcmc, McmcConfig, McmcManifest, ObjectiveWeights, SurvivorObjective};
use crate::patterns::{census, expected_active, write_census_csv, BipartiteObject};
use crate::polyalg::ProbabilityMatrix;
use crate::simchan::{fer_sweep, write_fer_csv, DecoderConfig};

struct Code {
    params: CodeParams,
    triple: Option<DesignTriple>,
    pstar: Option<Vec<f64>>,
    probability: Option<Vec<Vec<f64>>>,
}

impl Code {
    fn triple(&self) -> Result<&DesignTriple> {
        self.triple
            .as_ref()
            .ok_or_else(|| Error::InvalidParams("this command needs partition and lifting matrices".into()))
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidParams(format!("{}: {e}", path.display())))
}

fn resolve(a: &CodeArgs) -> Result<Code> {
    let mut code = if let Some(name) = &a.catalog {
        let c = catalog::by_name(name).ok_or_else(|| Error::InvalidParams(format!("unknown catalog code {name:?}")))?;
        Some(Code { params: c.params, triple: Some(c.triple), pstar: None, probability: Some(c.probability) })
    } else if let Some(path) = &a.code {
        let d = CodeDescriptor::load(path)?;
        let triple = if d.partition.is_some() && d.lifting.is_some() { Some(d.read_triple()?) } else { None };
        Some(Code { params: d.params, triple, pstar: d.pstar.clone(), probability: None })
    } else {
        None
    };
    if let Some(files) = &a.triple {
        let k = parse_partition(&read(&files[0])?)?;
        let lf = parse_lifting(&read(&files[1])?)?;
        let mr = files.get(2).map(|f| read(f).and_then(|t| parse_relocation(&t))).transpose()?;
        let params = match &code {
            Some(c) => c.params,
            None => {
                let coupling = a
                    .coupling
                    .ok_or_else(|| Error::InvalidParams("--triple without --code needs --coupling".into()))?;
                let aux = mr.as_ref().map(|m| m.bound()).ok_or_else(|| {
                    Error::InvalidParams("--triple without --code needs a relocation file to fix M".into())
                })?;
                CodeParams::new(k.rows(), k.cols(), lf.circulant_size(), coupling, k.memory(), aux)?
            }
        };
        let mr = mr.unwrap_or_else(|| RelocationMatrix::zeros(params.gamma, params.kappa, params.aux));
        let t = DesignTriple::new(k, lf, mr);
        t.validate(&params)?;
        match &mut code {
            Some(c) => c.triple = Some(t),
            None => code = Some(Code { params, triple: Some(t), pstar: None, probability: None }),
        }
    }
    let mut code =
        code.ok_or_else(|| Error::InvalidParams("one of --code, --catalog or --triple is required".into()))?;
    if let Some(d) = a.depth {
        code.params = code.params.with_depth(d)?;
    }
    Ok(code)
}

fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<PathBuf> {
    fs::write(out.join(name), serde_json::to_string_pretty(value)? + "\n")?;
    Ok(PathBuf::from(name))
}

fn create(out: &Path, name: &str) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(out.join(name))?))
}

/// Runs one command, returning the files it wrote relative to `out`.
pub fn execute(cmd: &Command, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    match cmd {
        Command::Grade(a) => grade(a, out),
        Command::Build(a) => build(a, out),
        Command::Count(a) => count(a, out),
        Command::ListObjects(a) => list(a, out),
        Command::Mcmc(a) => mcmc(a, seed, out),
        Command::Forecast(a) => cmd_forecast(a, out),
        Command::Census(a) => cmd_census(a, out),
        Command::Fer(a) => fer(a, seed, out),
        Command::Replay { .. } => Err(Error::InvalidParams("a manifest cannot replay another replay".into())),
    }
}

fn concat_weights(w: &Option<Vec<f64>>) -> ConcatWeights {
    w.as_ref().map_or_else(ConcatWeights::default, |w| ConcatWeights { w66: w[0], w68: w[1], w88: w[2] })
}

#[derive(Serialize)]
struct Exact66 {
    dominant: f64,
    exact: f64,
}

fn grade(a: &GradeArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let code = resolve(&a.code)?;
    let p = &code.params;
    let pstar = if let Some(ps) = &a.pstar {
        ps.clone()
    } else if let Some(k) = &a.k {
        edge_distribution(&parse_partition(&read(k)?)?, p.m)?
    } else if a.pstar_from_code {
        edge_distribution(&code.triple()?.partition, p.m)?
    } else {
        code.pstar
            .clone()
            .ok_or_else(|| Error::InvalidParams("one of --pstar, --K or --pstar-from-code is required".into()))?
    };
    let cfg = GradeConfig {
        target: a.target,
        tmax: a.tmax,
        epsilon: a.epsilon,
        alpha: a.alpha,
        max_iters: a.max_iters,
        weights: concat_weights(&a.concat_weights),
        zero_w1: a.zero_w1,
    };
    let r = run_md_grade(p, &pstar, &cfg)?;
    r.write_json(create(out, "P.json")?)?;
    r.write_trace_csv(create(out, "trace.csv")?)?;
    println!(
        "objective {:.6} -> {:.6} after {} iterations ({:?}), density {:.4}",
        r.initial_objective, r.objective, r.iterations, r.stop, r.md_density
    );
    let mut files = vec![PathBuf::from("P.json"), PathBuf::from("trace.csv")];
    if a.exact66 {
        let pm = r.probability()?;
        let e = Exact66 {
            dominant: lambda_coeffs(p.gamma, p.kappa)?[0] * concat_probability(&pm, 3, 3)?,
            exact: expected_active(&BipartiteObject::concatenation(3, 3)?, p.gamma, p.kappa, &pm)?,
        };
        println!("6-6 expectation: dominant {:.6}, exact {:.6}", e.dominant, e.exact);
        files.push(write_json(out, "exact66.json", &e)?);
    }
    Ok(files)
}

fn build(a: &BuildArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let code = resolve(&a.code)?;
    let t = code.triple()?;
    match a.export {
        ExportFormat::Alist => {
            let (h, name) = if a.sc {
                (build_sc_matrix(&t.partition, &t.lifting, &code.params)?, "H_sc.alist")
            } else {
                (build_md_matrix(t, &code.params)?, "H.alist")
            };
            fs::write(out.join(name), h.to_alist())?;
            println!("{name}: {} x {}, {} ones", h.rows(), h.cols(), h.nnz());
            Ok(vec![name.into()])
        }
        ExportFormat::Text => {
            write_code(out, &code.params, t)?;
            Ok(["K.txt", "L.txt", "M.txt", "code.json"].into_iter().map(PathBuf::from).collect())
        }
    }
}

fn count(a: &CountArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let code = resolve(&a.code)?;
    let t = code.triple()?;
    let md = count_objects_md_direct(t, &code.params, &a.kinds)?;
    let sc = if a.sc { Some(count_objects_sc(&t.partition, &t.lifting, &code.params, &a.kinds)?) } else { None };
    let mut csv = String::from(if a.sc { "kind,md_count,sc_count\n" } else { "kind,md_count\n" });
    for k in &a.kinds {
        let line = match &sc {
            Some(s) => format!("{k},{},{}\n", md[k], s[k]),
            None => format!("{k},{}\n", md[k]),
        };
        print!("{line}");
        csv.push_str(&line);
    }
    fs::write(out.join("counts.csv"), csv)?;
    Ok(vec!["counts.csv".into()])
}

fn load_or_list(code: &Code, kinds: &[crate::flcount::ObjectKind], cache_path: &Path) -> Result<ObjectList> {
    let t = code.triple()?;
    let hash = cache::code_hash(&code.params, &t.partition, &t.lifting, kinds);
    if let Ok(f) = fs::File::open(cache_path) {
        match cache::read_cache(std::io::BufReader::new(f), Some(&hash)) {
            Ok(list) => return Ok(list),
            Err(e) => log::warn!("ignoring cache {}: {e}", cache_path.display()),
        }
    }
    log::info!("enumerating {kinds:?}");
    let list = list_active_objects(&t.partition, &t.lifting, &code.params, kinds)?;
    cache::write_cache(&mut BufWriter::new(fs::File::create(cache_path)?), &list, &hash)?;
    Ok(list)
}

fn list(a: &ListArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let code = resolve(&a.code)?;
    let path = a.cache.clone().unwrap_or_else(|| out.join("objects.bin"));
    let _ = fs::remove_file(&path);
    let list = load_or_list(&code, &a.kinds, &path)?;
    let mut csv = String::from("kind,sc_count\n");
    let counts = list.counts();
    for k in &a.kinds {
        csv.push_str(&format!("{k},{}\n", counts.get(k).copied().unwrap_or(0)));
    }
    print!("{csv}");
    fs::write(out.join("objects.csv"), csv)?;
    let cache_name = if a.cache.is_some() { path } else { PathBuf::from("objects.bin") };
    Ok(vec![cache_name, "objects.csv".into()])
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DistributionFile {
    Grade {
        #[serde(rename = "P")]
        p: Vec<Vec<f64>>,
    },
    Raw(Vec<Vec<f64>>),
}

fn read_distribution(path: &Path) -> Result<ProbabilityMatrix> {
    let rows = match serde_json::from_str::<DistributionFile>(&read(path)?)? {
        DistributionFile::Grade { p } | DistributionFile::Raw(p) => p,
    };
    ProbabilityMatrix::unchecked(rows)
}

fn distribution(code: &Code, file: Option<&PathBuf>) -> Result<ProbabilityMatrix> {
    match (file, &code.probability) {
        (Some(f), _) => read_distribution(f),
        (None, Some(p)) => ProbabilityMatrix::unchecked(p.clone()),
        (None, None) => Err(Error::InvalidParams("no distribution: pass a grade result or use a catalog code".into())),
    }
}

#[derive(Serialize)]
struct McmcReport {
    #[serde(flatten)]
    manifest: McmcManifest,
    initial_md_counts: std::collections::BTreeMap<crate::flcount::ObjectKind, u64>,
    best_md_counts: std::collections::BTreeMap<crate::flcount::ObjectKind, u64>,
}

fn mcmc(a: &McmcArgs, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    use crate::flcount::ObjectKind::*;
    let code = resolve(&a.code)?;
    let p = &code.params;
    let t = code.triple()?;
    let kinds = match (&a.kinds, a.objective) {
        (Some(k), _) => k.clone(),
        (None, ObjectiveKind::Lexicographic) => vec![Cycle4, Cycle6, Cycle8],
        (None, ObjectiveKind::Concat) => vec![Cfg66, Cfg68, Cfg88],
        (None, ObjectiveKind::Uniform) => return Err(Error::InvalidParams("--objective uniform needs --kinds".into())),
    };
    let weights = match a.objective {
        ObjectiveKind::Lexicographic => ObjectiveWeights::Lexicographic,
        ObjectiveKind::Uniform => ObjectiveWeights::uniform(&kinds),
        ObjectiveKind::Concat => {
            let w = concat_weights(&a.concat_weights);
            ObjectiveWeights::concat(w.w66, w.w68, w.w88)
        }
    };
    let cache_path = a.cache.clone().unwrap_or_else(|| out.join("objects.bin"));
    let list = load_or_list(&code, &kinds, &cache_path)?;
    let bound = p.relocation_bound();
    let init = match a.init {
        InitKind::Zero => RelocationMatrix::zeros(p.gamma, p.kappa, bound),
        InitKind::Code => t.relocation.clone(),
        InitKind::Quantize => {
            let dist = distribution(&code, a.grade.as_ref())?;
            let involvement = SurvivorObjective::new(&list, p.aux, &weights).involvement();
            quantize_init(&dist, &t.partition, &involvement, seed)?
        }
    };
    let cfg = McmcConfig {
        delta: a.delta,
        beta_init: a.beta_init,
        max_iters: a.max_iters,
        l1_bound: a.l1,
        linf_bound: a.linf,
        density_cap: a.density_cap,
        depth: p.depth,
        weights,
        seed: seed.wrapping_add(1),
        ..Default::default()
    };
    let r = run_mcmc(&init, &list, p.aux, &cfg)?;
    let best = r.best_matrix(p.gamma, p.kappa, init.bound())?;
    fs::write(out.join("init_Mr.txt"), format_relocation(&init))?;
    fs::write(out.join("Mr.txt"), format_relocation(&best))?;
    r.write_trace_csv(&mut create(out, "mcmc_trace.csv")?)?;
    let report = McmcReport {
        manifest: McmcManifest::new(&cfg, init.grid().as_slice(), &r, Some(Path::new("Mr.txt"))),
        initial_md_counts: count_objects_md(&list, &init, p.aux)?,
        best_md_counts: count_objects_md(&list, &best, p.aux)?,
    };
    println!(
        "objective {} -> {} in {} block updates; MD survivors {:?}",
        r.initial_value, r.best_value, r.iterations, report.best_md_counts
    );
    let report_file = write_json(out, "mcmc.json", &report)?;
    let cache_name = if a.cache.is_some() { cache_path } else { PathBuf::from("objects.bin") };
    Ok(vec!["init_Mr.txt".into(), "Mr.txt".into(), "mcmc_trace.csv".into(), report_file, cache_name])
}

#[derive(Serialize)]
struct ForecastReport {
    len: usize,
    expected_candidates: f64,
    #[serde(flatten)]
    forecast: crate::grade::Forecast,
}

fn cmd_forecast(a: &ForecastArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let code = resolve(&a.code)?;
    let target = match a.len {
        6 => GradeTarget::Cycle6,
        8 => GradeTarget::Cycle8,
        l => return Err(Error::InvalidParams(format!("--len must be 6 or 8, got {l}"))),
    };
    let dist = distribution(&code, a.p.as_ref())?;
    let cfg = GradeConfig { target, zero_w1: a.zero_w1, ..GradeConfig::default() };
    let n = Objective::new(&code.params, &cfg)?.value(&dist)?;
    let f = forecast(n, a.len, &code.params)?;
    println!("N{} = {n:.4}: estimate {:.0}, bounds [{:.0}, {:.0}]", a.len, f.estimate, f.lower, f.upper);
    Ok(vec![write_json(out, "forecast.json", &ForecastReport { len: a.len, expected_candidates: n, forecast: f })?])
}

fn cmd_census(a: &CensusArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let mut rows = Vec::new();
    for &k in &a.config {
        rows.extend(census(k, a.gamma_max, a.all_strata)?);
    }
    write_census_csv(&rows, create(out, "census.csv")?)?;
    write_census_csv(&rows, std::io::stdout().lock())?;
    Ok(vec!["census.csv".into()])
}

fn fer(a: &FerArgs, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    let code = resolve(&a.code)?;
    let h = build_md_matrix(code.triple()?, &code.params)?;
    let cfg = DecoderConfig { max_iters: a.max_iters, early_stop: !a.no_early_stop, llr_clip: a.llr_clip };
    let table = fer_sweep(&h, &a.snr, a.frames, &cfg, seed)?;
    write_fer_csv(&mut create(out, "fer.csv")?, &table)?;
    write_fer_csv(&mut std::io::stdout().lock(), &table)?;
    Ok(vec!["fer.csv".into()])
}
