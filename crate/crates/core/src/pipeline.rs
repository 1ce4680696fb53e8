//! Staged verification runner. Every stage reads its prerequisites from the
//! cache directory, writes its own artifacts there, and records a list of
//! claims with expected and computed values compared as exact strings.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cosetrw::{
    coset_table_from_map, low_index_subgroups, rewrite_kernel_presentation, todd_coxeter, AbelianCoordinates,
    ChainRewriter, CosetError, CosetTable, EnumerationResult, SchreierRewriter, Simplified, TietzeOptions,
};
use crate::eisen::{module_structure, EisError, EisScalar};
use crate::fpcore::{lambda_presentation, GroupElement, Presentation, Word};
use crate::linalg::{all_positive, leading_minors, same_span, Mat};
use crate::nilquot::{cyclic_quotient_trivial, gamma2_over_gamma3, NilError};
use crate::permgrp::{gamma_images, group_closure, solve_extension, verify_homomorphism, GElem, GroupMap, Perm, PermError};
use crate::polyring::{radical_membership, GroebnerError};
use crate::repchar::{
    algebra_span_rank, character_of, commutant_dimension, conjugacy_classes, decompose, dixon_character_table,
    isotypic_projector, label_characters, product, rho3, table_json, verify_orthogonality, CharTableJson, ClassData,
    Cyclo, IMat, MatGroup, RepError,
};
use crate::wedgegeo::{
    eval_quadric, extract_quadric, find_eisenstein_point, finite_field_precheck, image_minus_identity, kernel_subspace,
    no_decomposables_certificate, point_to_wedge, quadratic_form_poly, quadric_points, reference_kernel,
    reference_quadric, row_wedge, seed_point, subspace_wedge_intersection, support, vector_rank, wedge_square,
    WedgeError,
};
use crate::zlat::{abelian_invariants, charpoly, IntMat, IntPoly, ZlatError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Phi,
    Subgroups,
    Rewrite,
    H1,
    Nilq,
    Albanese,
    Chars,
    Kernel,
    Quadric,
    Lagrangian,
    Report,
}

impl Stage {
    /// Every computing stage, in dependency order (`report` excluded).
    pub const COMPUTING: [Stage; 10] = [
        Stage::Phi,
        Stage::Subgroups,
        Stage::Rewrite,
        Stage::H1,
        Stage::Nilq,
        Stage::Albanese,
        Stage::Chars,
        Stage::Kernel,
        Stage::Quadric,
        Stage::Lagrangian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Phi => "phi",
            Stage::Subgroups => "subgroups",
            Stage::Rewrite => "rewrite",
            Stage::H1 => "h1",
            Stage::Nilq => "nilq",
            Stage::Albanese => "albanese",
            Stage::Chars => "chars",
            Stage::Kernel => "kernel",
            Stage::Quadric => "quadric",
            Stage::Lagrangian => "lagrangian",
            Stage::Report => "report",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A stage or `all`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    One(Stage),
    All,
}

impl FromStr for Target {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(Target::All);
        }
        Stage::COMPUTING
            .iter()
            .chain([Stage::Report].iter())
            .find(|st| st.name() == s)
            .map(|&st| Target::One(st))
            .ok_or_else(|| PipelineError::UnknownStage(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub tietze_budget: u64,
    pub max_cosets: usize,
    pub groebner_pairs: usize,
    /// 0 keeps rayon's default.
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: PathBuf::from("stover-cache"),
            tietze_budget: TietzeOptions::default().budget,
            max_cosets: 2_000_000,
            groebner_pairs: 1_000_000,
            threads: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub id: String,
    pub claim: String,
    pub expected: String,
    pub computed: String,
    #[serde(rename = "match")]
    pub matched: bool,
    /// A certificate hit a resource cap; counts as a failure.
    pub inconclusive: bool,
    pub ms: u64,
    pub cache: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub stages: Vec<StageReport>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(stages: Vec<StageReport>) -> Self {
        let mut summary = Summary::default();
        for r in &stages {
            if r.matched {
                summary.passed += 1;
            } else if r.inconclusive {
                summary.inconclusive += 1;
            } else {
                summary.failed += 1;
            }
        }
        RunReport { stages, summary }
    }

    pub fn all_match(&self) -> bool {
        self.summary.failed == 0 && self.summary.inconclusive == 0
    }

    /// The report with every timing field zeroed.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        r.stages.iter_mut().for_each(|s| s.ms = 0);
        r
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("unknown stage '{0}'")]
    UnknownStage(String),
    #[error("stage {stage} needs the output of stage '{prerequisite}' ({file} not found); run --stage {prerequisite} first")]
    MissingDependency { stage: Stage, prerequisite: Stage, file: String },
    #[error("cache directory is locked by another run ({0}); remove it if no run is active")]
    Locked(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed cache file {file}: {msg}")]
    Format { file: String, msg: String },
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Nil(#[from] NilError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Zlat(#[from] ZlatError),
    #[error(transparent)]
    Eis(#[from] EisError),
    #[error("thread pool: {0}")]
    Threads(String),
}

/// Invariant tables used by the bookkeeping stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedInvariants {
    pub e: i64,
    pub q: i64,
    pub p_g: i64,
    pub h11_s: i64,
    pub b2_s: i64,
    pub h20_a: i64,
    pub h11_a: i64,
    pub b2_a: i64,
    pub kernel_total: i64,
    pub k: i64,
    pub d: i64,
}

pub const EXPECTED: ExpectedInvariants = ExpectedInvariants {
    e: 63,
    q: 7,
    p_g: 27,
    h11_s: 35,
    b2_s: 89,
    h20_a: 21,
    h11_a: 49,
    b2_a: 91,
    kernel_total: 28,
    k: 14,
    d: 7,
};

impl ExpectedInvariants {
    pub fn consistent(&self) -> bool {
        self.kernel_total == self.k + 2 * self.d
            && self.h11_a - self.h11_s == self.k
            && self.b2_a == 2 * self.h20_a + self.h11_a
    }
}

// ---------------------------------------------------------------- cache

struct Cache {
    dir: PathBuf,
}

impl Cache {
    fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }

    fn has(&self, file: &str) -> bool {
        self.path(file).is_file()
    }

    fn read(&self, stage: Stage, prerequisite: Stage, file: &str) -> Result<String, PipelineError> {
        let p = self.path(file);
        if !p.is_file() {
            return Err(PipelineError::MissingDependency { stage, prerequisite, file: file.to_string() });
        }
        fs::read_to_string(&p).map_err(|source| PipelineError::Io { path: p, source })
    }

    /// Write through a temporary file so readers never see partial output.
    fn write(&self, file: &str, contents: &str) -> Result<(), PipelineError> {
        let p = self.path(file);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent).map_err(|source| PipelineError::Io { path: parent.to_path_buf(), source })?;
        }
        let tmp = p.with_extension("partial");
        fs::write(&tmp, contents).map_err(|source| PipelineError::Io { path: tmp.clone(), source })?;
        fs::rename(&tmp, &p).map_err(|source| PipelineError::Io { path: p, source })
    }
}

fn fmt_err(file: &str, e: impl fmt::Display) -> PipelineError {
    PipelineError::Format { file: file.to_string(), msg: e.to_string() }
}

/// Held for the duration of a run; one pipeline per cache directory.
struct Lock {
    path: PathBuf,
}

impl Lock {
    fn acquire(dir: &Path) -> Result<Lock, PipelineError> {
        fs::create_dir_all(dir).map_err(|source| PipelineError::Io { path: dir.to_path_buf(), source })?;
        let path = dir.join(".lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Lock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(PipelineError::Locked(path)),
            Err(source) => Err(PipelineError::Io { path, source }),
        }
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

const PHI: &str = "phi.txt";
const GAMMA_TABLE: &str = "gamma_table.txt";
const GAMMA: &str = "gamma.txt";
const PI_TABLE: &str = "pi_table.txt";
const PI: &str = "pi.txt";
const J_MATRIX: &str = "j_matrix.txt";
const PIPRIME_TABLE: &str = "piprime_table.txt";
const PIPRIME: &str = "piprime.txt";
const CHARTABLE: &str = "chartable.json";
const KERNEL: &str = "kernel.txt";
const QUADRIC: &str = "quadric.txt";

fn report_file(stage: Stage) -> String {
    format!("reports/{}.json", stage.name())
}

fn rat_matrix_text(m: &Mat<BigRational>) -> String {
    let mut s = format!("{} {}\n", m.rows, m.cols);
    for i in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|j| m.get(i, j).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn parse_rat_matrix(text: &str, file: &str) -> Result<Mat<BigRational>, PipelineError> {
    let mut it = text.split_whitespace();
    let mut dim = || -> Result<usize, PipelineError> {
        it.next().ok_or_else(|| fmt_err(file, "missing dimension"))?.parse::<usize>().map_err(|e| fmt_err(file, e))
    };
    let (r, c) = (dim()?, dim()?);
    let entries: Vec<BigRational> =
        text.split_whitespace().skip(2).map(|t| t.parse::<BigRational>().map_err(|e| fmt_err(file, e))).collect::<Result<_, _>>()?;
    if entries.len() != r * c {
        return Err(fmt_err(file, format!("expected {} entries, found {}", r * c, entries.len())));
    }
    Ok(Mat::from_fn(r, c, |i, j| entries[i * c + j].clone()))
}

fn matrix_string(m: &Mat<BigRational>) -> String {
    let rows: Vec<String> =
        (0..m.rows).map(|i| format!("[{}]", (0..m.cols).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>().join(","))).collect();
    format!("[{}]", rows.join(","))
}

// ---------------------------------------------------------------- claims

struct Claims {
    stage: Stage,
    rows: Vec<StageReport>,
    cache: Vec<String>,
}

impl Claims {
    fn new(stage: Stage) -> Self {
        Claims { stage, rows: Vec::new(), cache: Vec::new() }
    }

    fn push(&mut self, id: &str, claim: &str, expected: impl ToString, computed: impl ToString, detail: impl Into<String>) {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        self.rows.push(StageReport {
            name: self.stage.name().to_string(),
            id: format!("{}.{id}", self.stage.name()),
            claim: claim.to_string(),
            matched: expected == computed,
            expected,
            computed,
            inconclusive: false,
            ms: 0,
            cache: Vec::new(),
            detail: detail.into(),
        });
    }

    fn inconclusive(&mut self, id: &str, claim: &str, expected: impl ToString, why: impl Into<String>) {
        self.push(id, claim, expected, "inconclusive", why);
        self.rows.last_mut().unwrap().inconclusive = true;
    }

    fn cached(&mut self, file: &str) {
        self.cache.push(file.to_string());
    }

    fn finish(mut self, started: Instant) -> Vec<StageReport> {
        let ms = started.elapsed().as_millis() as u64;
        for r in &mut self.rows {
            r.ms = ms;
            r.cache = self.cache.clone();
        }
        self.rows
    }
}

// ---------------------------------------------------------------- entry point

/// Run one stage (or all of them) against the cache directory.
pub fn run(target: Target, cfg: &Config) -> Result<Vec<StageReport>, PipelineError> {
    let _lock = Lock::acquire(&cfg.cache_dir)?;
    if cfg.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| PipelineError::Threads(e.to_string()))?;
        pool.install(|| run_unlocked(target, cfg))
    } else {
        run_unlocked(target, cfg)
    }
}

fn run_unlocked(target: Target, cfg: &Config) -> Result<Vec<StageReport>, PipelineError> {
    let cache = Cache { dir: cfg.cache_dir.clone() };
    match target {
        Target::One(Stage::Report) => report(&cache),
        Target::One(st) => run_stage(st, &cache, cfg),
        Target::All => {
            for st in Stage::COMPUTING {
                run_stage(st, &cache, cfg)?;
            }
            report(&cache)
        }
    }
}

fn run_stage(stage: Stage, cache: &Cache, cfg: &Config) -> Result<Vec<StageReport>, PipelineError> {
    let started = Instant::now();
    log::info!("stage {stage}");
    let mut c = Claims::new(stage);
    match stage {
        Stage::Phi => phi(cache, cfg, &mut c)?,
        Stage::Subgroups => subgroups(cache, &mut c)?,
        Stage::Rewrite => rewrite(cache, cfg, &mut c)?,
        Stage::H1 => h1(cache, &mut c)?,
        Stage::Nilq => nilq(cache, &mut c)?,
        Stage::Albanese => albanese(cache, cfg, &mut c)?,
        Stage::Chars => chars(cache, &mut c)?,
        Stage::Kernel => kernel(cache, &mut c)?,
        Stage::Quadric => quadric(cache, cfg, &mut c)?,
        Stage::Lagrangian => lagrangian(cache, &mut c)?,
        Stage::Report => unreachable!("report is handled by the caller"),
    }
    let rows = c.finish(started);
    let json = serde_json::to_string_pretty(&rows).expect("reports serialize");
    cache.write(&report_file(stage), &json)?;
    log::info!("stage {stage} done in {} ms", started.elapsed().as_millis());
    Ok(rows)
}

// ---------------------------------------------------------------- φ and Γ

fn phi_text(map: &GroupMap) -> String {
    let labels = map.source.labels();
    labels.iter().zip(&map.images).map(|(l, e)| format!("{l} {} {}\n", e.perm, e.twist)).collect()
}

fn load_phi(cache: &Cache, stage: Stage, lam: &Presentation) -> Result<GroupMap, PipelineError> {
    let text = cache.read(stage, Stage::Phi, PHI)?;
    let mut images = vec![None; lam.ngens()];
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [label, cycles, twist] = parts[..] else { return Err(fmt_err(PHI, line)) };
        let g = lam.gen_index(label).ok_or_else(|| fmt_err(PHI, format!("unknown generator {label}")))?;
        let perm = Perm::from_cycles(cycles, 28)?;
        let twist: u8 = twist.parse().map_err(|e| fmt_err(PHI, e))?;
        images[g] = Some(GElem::new(perm, twist));
    }
    let images: Vec<GElem> = images.into_iter().collect::<Option<_>>().ok_or_else(|| fmt_err(PHI, "missing generator"))?;
    Ok(verify_homomorphism(lam, images)?)
}

fn phi(cache: &Cache, cfg: &Config, c: &mut Claims) -> Result<(), PipelineError> {
    let lam = lambda_presentation();
    let [u, jb, bj] = gamma_images();
    let words: Vec<Word> = ["u", "j*b", "b*j"].iter().map(|w| lam.word(w).expect("generator words")).collect();
    let gamma = match todd_coxeter(&lam, &words, cfg.max_cosets) {
        EnumerationResult::Complete(t) => t.standardize(),
        EnumerationResult::Inconclusive { defined } => {
            c.inconclusive("extension", "the images of u, jb, bj extend to a homomorphism", true, format!("enumeration of ⟨u, jb, bj⟩ stopped at {defined} cosets"));
            return Ok(());
        }
    };
    let id = u.identity_like();
    let u33 = group_closure(&[u.clone(), jb.clone(), bj.clone()], &id, 1_000_000)?;
    let ext = if gamma.n == 3 { solve_extension(&lam, &u, &jb, &bj, &gamma).ok() } else { None };
    let found = ext.as_ref().map_or(0, |e| e.solutions_found);
    c.push(
        "extension",
        "the images of u, jb, bj extend to a verified homomorphism Λ → U₃(3)×ℤ/3",
        true,
        ext.as_ref().is_some_and(|e| e.map.verified),
        format!("{found} candidate images of j satisfy every relator; ⟨u, jb, bj⟩ has index {} in Λ", gamma.n),
    );
    c.push("image_order", "order of φ(Λ)", 18144, ext.as_ref().map_or(0, |e| e.map.image_order), "");
    c.push("u33_order", "order of ⟨φ(u), φ(jb), φ(bj)⟩", 6048, u33.order(), "");
    if let Some(e) = ext {
        cache.write(PHI, &phi_text(&e.map))?;
        c.cached(PHI);
    }
    Ok(())
}

fn subgroups(cache: &Cache, c: &mut Claims) -> Result<(), PipelineError> {
    let lam = lambda_presentation();
    let map = load_phi(cache, Stage::Subgroups, &lam)?;
    let tables = low_index_subgroups(&lam, 3);
    let proper: Vec<&CosetTable> = tables.iter().filter(|t| t.n > 1).collect();
    let words: Vec<Word> = ["u", "j*b", "b*j"].iter().map(|w| lam.word(w).expect("generator words")).collect();
    c.push("proper_classes", "conjugacy classes of proper subgroups of index ≤ 3 in Λ", 1, proper.len(), "");
    let unique = (proper.len() == 1).then(|| proper[0]);
    c.push(
        "contains",
        "the unique class contains u, jb, bj",
        true,
        unique.is_some_and(|t| words.iter().all(|w| t.contains(w))),
        unique.map(|t| format!("index {}", t.n)).unwrap_or_default(),
    );
    // Γ is the preimage of U₃(3): every generator word has trivial twist
    c.push(
        "preimage",
        "Γ is the preimage of U₃(3) under φ",
        true,
        unique.is_some_and(|t| t.n == 3 && words.iter().all(|w| map.image_of(w).twist == 0)),
        "",
    );
    if let Some(t) = unique {
        cache.write(GAMMA_TABLE, &t.to_text())?;
        c.cached(GAMMA_TABLE);
    }
    Ok(())
}

// ---------------------------------------------------------------- Γ and Π presentations

struct Tower {
    lam: Presentation,
    phi: GroupMap,
    gamma_table: CosetTable,
    gamma: Simplified,
    pi_table: CosetTable,
    pi: Simplified,
}

fn load_gamma_table(cache: &Cache, stage: Stage) -> Result<CosetTable, PipelineError> {
    let text = cache.read(stage, Stage::Subgroups, GAMMA_TABLE)?;
    CosetTable::from_text(&text, "Gamma").map_err(|e| fmt_err(GAMMA_TABLE, e))
}

fn gamma_map(gamma: &Simplified, phi: &GroupMap) -> Result<GroupMap, PipelineError> {
    let images: Vec<GElem> = gamma.result.gen_words.iter().map(|w| phi.image_of(w)).collect();
    Ok(verify_homomorphism(&gamma.result.pres, images)?)
}

fn load_tower(cache: &Cache, stage: Stage) -> Result<Tower, PipelineError> {
    let lam = lambda_presentation();
    let phi = load_phi(cache, stage, &lam)?;
    let gamma_table = load_gamma_table(cache, stage)?;
    let gamma = Simplified::from_text(&cache.read(stage, Stage::Rewrite, GAMMA)?, "Gamma", &lam).map_err(|e| fmt_err(GAMMA, e))?;
    let pi_table = CosetTable::from_text(&cache.read(stage, Stage::Rewrite, PI_TABLE)?, "Pi").map_err(|e| fmt_err(PI_TABLE, e))?;
    let pi = Simplified::from_text(&cache.read(stage, Stage::Rewrite, PI)?, "Pi", &gamma.result.pres).map_err(|e| fmt_err(PI, e))?;
    Ok(Tower { lam, phi, gamma_table, gamma, pi_table, pi })
}

fn rewrite(cache: &Cache, cfg: &Config, c: &mut Claims) -> Result<(), PipelineError> {
    let lam = lambda_presentation();
    let phi = load_phi(cache, Stage::Rewrite, &lam)?;
    let gamma_table = load_gamma_table(cache, Stage::Rewrite)?;
    let opts = TietzeOptions { budget: cfg.tietze_budget, ..TietzeOptions::default() };
    let claim = "Reidemeister–Schreier and Tietze complete within budget";
    let tower = if cache.has(GAMMA) && cache.has(PI_TABLE) && cache.has(PI) {
        load_tower(cache, Stage::Rewrite)?
    } else {
        let raw = rewrite_kernel_presentation(&gamma_table, &lam, "Gamma");
        let gamma = crate::cosetrw::tietze_simplify(&raw, &opts);
        if gamma.budget_exhausted {
            c.inconclusive("tietze", claim, true, "Tietze budget exhausted on Γ");
            return Ok(());
        }
        let gmap = gamma_map(&gamma, &phi)?;
        let id = gmap.images[0].identity_like();
        let pi_table = coset_table_from_map(&gmap, &[id], "Pi")?;
        if pi_table.n > cfg.max_cosets {
            c.inconclusive("tietze", claim, true, format!("Π has {} cosets, above --max-cosets", pi_table.n));
            return Ok(());
        }
        let raw = rewrite_kernel_presentation(&pi_table, &gamma.result.pres, "Pi");
        let pi = crate::cosetrw::tietze_simplify(&raw, &opts);
        if pi.budget_exhausted {
            c.inconclusive("tietze", claim, true, "Tietze budget exhausted on Π");
            return Ok(());
        }
        cache.write(GAMMA, &gamma.to_text(&lam.labels()))?;
        cache.write(PI_TABLE, &pi_table.to_text())?;
        cache.write(PI, &pi.to_text(&gamma.result.pres.labels()))?;
        Tower { lam, phi, gamma_table, gamma, pi_table, pi }
    };
    for f in [GAMMA, PI_TABLE, PI] {
        c.cached(f);
    }
    let gmap = gamma_map(&tower.gamma, &tower.phi)?;
    c.push("gamma_onto", "φ maps Γ onto U₃(3)", 6048, gmap.image_order, "");
    c.push("pi_index", "index of Π = ker(φ|Γ) in Γ", 6048, tower.pi_table.n, "");
    c.push(
        "tietze",
        claim,
        true,
        true,
        format!(
            "Γ: {} → {} generators; Π: {} → {} generators, {} relators",
            tower.gamma.original_gens,
            tower.gamma.result.pres.ngens(),
            tower.pi.original_gens,
            tower.pi.result.pres.ngens(),
            tower.pi.result.pres.relators.len()
        ),
    );
    Ok(())
}

fn h1(cache: &Cache, c: &mut Claims) -> Result<(), PipelineError> {
    let t = load_tower(cache, Stage::H1)?;
    c.push("invariants", "abelian invariants of Π", "Z^14", abelian_invariants(&t.pi.result.pres), "");
    Ok(())
}

fn nilq(cache: &Cache, c: &mut Claims) -> Result<(), PipelineError> {
    let t = load_tower(cache, Stage::Nilq)?;
    let g2 = gamma2_over_gamma3(&t.pi.result.pres)?;
    c.push(
        "gamma2",
        "γ₂Π/γ₃Π",
        "Z/4 + Z^28",
        &g2.invariants,
        format!("{} generators, {} central relation rows", g2.ngens, g2.central_rows),
    );
    c.push("real_kernel", "dimension of the real kernel of the cup product", 28, g2.invariants.free_rank, "");
    Ok(())
}

// ---------------------------------------------------------------- Albanese

fn compute_j(t: &Tower) -> Result<IntMat, PipelineError> {
    let exp = t.gamma.word_expansions(1_000_000).ok_or_else(|| fmt_err(GAMMA, "generator expansions too long"))?;
    let chain = ChainRewriter::new(vec![(SchreierRewriter::new(&t.gamma_table), exp)], SchreierRewriter::new(&t.pi_table), &t.pi);
    let coords = AbelianCoordinates::new(&t.pi.result.pres);
    let mut sub = t.pi.result.clone();
    sub.gen_words = sub.gen_words.iter().map(|w| w.substitute(&t.gamma.result.gen_words)).collect();
    let j4 = t.lam.word("j^4").expect("j is a generator");
    Ok(crate::cosetrw::induced_abelian_action(&sub, &chain, &coords, &j4)?)
}

fn albanese(cache: &Cache, cfg: &Config, c: &mut Claims) -> Result<(), PipelineError> {
    let t = load_tower(cache, Stage::Albanese)?;
    let j = if cache.has(J_MATRIX) {
        IntMat::from_text(&cache.read(Stage::Albanese, Stage::Albanese, J_MATRIX)?)?
    } else {
        let j = compute_j(&t)?;
        cache.write(J_MATRIX, &j.to_text())?;
        j
    };
    c.cached(J_MATRIX);
    let n = j.rows();
    let order3 = j.mul(&j).add(&j).add(&IntMat::identity(n)).is_zero();
    c.push("order3", "J² + J + I = 0 for J induced by j⁴", true, order3, format!("J is {n}×{n}"));
    let cp = charpoly(&j);
    let target = IntPoly::from_i64(&[1, 1, 1]).pow(7);
    c.push(
        "charpoly",
        "characteristic polynomial of J",
        "(x^2+x+1)^7",
        if cp == target { "(x^2+x+1)^7".to_string() } else { cp.to_string() },
        "",
    );
    let (basis_ok, detail) = match module_structure(&j) {
        Ok(m) => (m.determinant.magnitude().is_one(), format!("{} basis, determinant {}", m.method, m.determinant)),
        Err(e) => (false, e.to_string()),
    };
    c.push("basis", "unimodular basis {vᵢ, vᵢJ} making H₁(Π) a free ℤ[α]-module", true, basis_ok, detail);

    // Π′ = ker(φ) ⋊ ⟨j⁴⟩
    let j4 = t.lam.word("j^4").expect("j is a generator");
    let s = t.phi.image_of(&j4);
    let table = if cache.has(PIPRIME_TABLE) {
        CosetTable::from_text(&cache.read(Stage::Albanese, Stage::Albanese, PIPRIME_TABLE)?, "PiPrime")
            .map_err(|e| fmt_err(PIPRIME_TABLE, e))?
    } else {
        let table = coset_table_from_map(&t.phi, &[s], "PiPrime")?;
        if table.n > cfg.max_cosets {
            c.inconclusive("piprime_trivial", "Π′/Π′_tors is trivial", "trivial", "Π′ index above --max-cosets");
            return Ok(());
        }
        cache.write(PIPRIME_TABLE, &table.to_text())?;
        table
    };
    c.cached(PIPRIME_TABLE);
    c.push("piprime_index", "index of Π′ = φ⁻¹⟨φ(j⁴)⟩ in Λ", 6048, table.n, "");
    let pp = if cache.has(PIPRIME) {
        Simplified::from_text(&cache.read(Stage::Albanese, Stage::Albanese, PIPRIME)?, "PiPrime", &t.lam)
            .map_err(|e| fmt_err(PIPRIME, e))?
    } else {
        let raw = rewrite_kernel_presentation(&table, &t.lam, "PiPrime");
        let pp = crate::cosetrw::tietze_simplify(&raw, &TietzeOptions { budget: cfg.tietze_budget, ..TietzeOptions::default() });
        if pp.budget_exhausted {
            c.inconclusive("piprime_trivial", "Π′/Π′_tors is trivial", "trivial", "Tietze budget exhausted on Π′");
            return Ok(());
        }
        cache.write(PIPRIME, &pp.to_text(&t.lam.labels()))?;
        pp
    };
    c.cached(PIPRIME);
    let p = &pp.result.pres;
    // bases of proper-power relators are torsion elements
    let mut killed: Vec<Word> = p.relators.iter().filter_map(|r| r.as_proper_power().map(|(b, _)| b)).collect();
    killed.sort_by(|a, b| a.letters().cmp(b.letters()));
    killed.dedup();
    let detail = format!(
        "{} generators, {} relators, H₁(Π′) = {}; {} proper-power relators killed",
        p.ngens(),
        p.relators.len(),
        abelian_invariants(p),
        killed.len()
    );
    match cyclic_quotient_trivial(p, &killed) {
        Ok(trivial) => c.push("piprime_trivial", "Π′/Π′_tors is trivial", "trivial", if trivial { "trivial" } else { "nontrivial" }, detail),
        Err(e) => c.inconclusive("piprime_trivial", "Π′/Π′_tors is trivial", "trivial", format!("{detail}; {e}")),
    }
    Ok(())
}

// ---------------------------------------------------------------- characters

struct Rho3 {
    group: MatGroup,
    classes: ClassData,
}

fn rho3_group() -> Result<Rho3, PipelineError> {
    let r = rho3();
    let group = MatGroup::enumerate(&r, 100_000)?;
    let classes = conjugacy_classes(&group);
    Ok(Rho3 { group, classes })
}

fn chars(cache: &Cache, c: &mut Claims) -> Result<(), PipelineError> {
    let r = rho3_group()?;
    let (g, cd) = (&r.group, &r.classes);
    let t = dixon_character_table(g, cd, 1_000_000)?;
    let orth = verify_orthogonality(cd, &t);
    let chi3 = character_of(g, cd, |m| m.clone());
    let order = label_characters(cd, &t, &chi3).ok_or_else(|| fmt_err(CHARTABLE, "cannot label the degree-7 characters"))?;
    let chi = |k: usize| &t.values[order[k - 1]];
    let label = |i: usize| format!("chi{}", order.iter().position(|&x| x == i).unwrap() + 1);

    c.push("classes", "conjugacy classes of ⟨A, B⟩", 14, cd.count(), format!("group order {}", g.order()));
    let mut degrees = t.degrees.clone();
    degrees.sort_unstable();
    let degrees: Vec<String> = degrees.iter().map(i64::to_string).collect();
    c.push("degrees", "degrees of the irreducible characters", "1,6,7,7,7,14,21,21,21,27,28,28,32,32", degrees.join(","), format!("Dixon prime {}", t.prime));
    c.push("orthogonality", "row orthogonality holds exactly", true, orth.is_ok(), orth.err().map(|e| e.to_string()).unwrap_or_default());

    // ∧²ρ₃ and ρ₃⊗ρ₃
    let wedge = wedge_square(&rho3());
    c.push("wedge_commutant", "dimension of the commutant of ∧²ρ₃", 2, commutant_dimension(&wedge)?, "");
    let tensor = rho3().derive("rho3⊗rho3", |m| m.kron(m));
    c.push("tensor_commutant", "dimension of the commutant of ρ₃⊗ρ₃", 4, commutant_dimension(&tensor)?, "");

    let wedge_f = |m: &IMat| row_wedge(m);
    let tensor_f = |m: &IMat| m.kron(m);
    for (id, claim, expected, f) in [
        ("wedge_ranks", "isotypic projector ranks on ∧²ρ₃", "7+14", &wedge_f as &(dyn Fn(&IMat) -> IMat + Sync)),
        ("tensor_ranks", "isotypic projector ranks on ρ₃⊗ρ₃", "1+7+14+27", &tensor_f),
    ] {
        let psi = character_of(g, cd, f);
        let mult = decompose(cd, &t, &psi);
        let mut parts = Vec::new();
        let mut labels = Vec::new();
        for (k, &i) in order.iter().enumerate() {
            if mult[i].is_zero() {
                continue;
            }
            let proj = isotypic_projector(g, cd, &t.values[i], t.degrees[i], f)?;
            parts.push(proj.rank());
            labels.push(format!("chi{}", k + 1));
        }
        parts.sort_unstable();
        let computed: Vec<String> = parts.iter().map(usize::to_string).collect();
        c.push(id, claim, expected, computed.join("+"), format!("constituents {}", labels.join(", ")));
    }

    let prod = product(chi(4), chi(5));
    let mult = decompose(cd, &t, &prod);
    let mut terms = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let m = &mult[i];
        if !m.is_zero() {
            terms.push(if m.is_one() { format!("chi{}", k + 1) } else { format!("{m}*chi{}", k + 1) });
        }
    }
    c.push("chi4chi5", "decomposition of χ₄χ₅", "chi1+chi7+chi10", terms.join("+"), format!("χ₃ is {}", label(order[2])));

    let json = serde_json::to_string_pretty(&table_json(g, cd, &t, &order)).expect("table serializes");
    cache.write(CHARTABLE, &json)?;
    c.cached(CHARTABLE);
    Ok(())
}

fn load_chi3(cache: &Cache, stage: Stage) -> Result<Vec<Cyclo>, PipelineError> {
    let table: CharTableJson = serde_json::from_str(&cache.read(stage, Stage::Chars, CHARTABLE)?).map_err(|e| fmt_err(CHARTABLE, e))?;
    let row = table.characters.iter().find(|ch| ch.label == "chi3").ok_or_else(|| fmt_err(CHARTABLE, "no chi3"))?;
    Ok(row.values.iter().map(|(n, v)| Cyclo::from_multiplicities(*n, v.clone())).collect())
}

// ---------------------------------------------------------------- wedge geometry

fn kernel(cache: &Cache, c: &mut Claims) -> Result<(), PipelineError> {
    let chi3 = load_chi3(cache, Stage::Kernel)?;
    let r = rho3_group()?;
    let direct = character_of(&r.group, &r.classes, |m| m.clone());
    if direct != chi3 {
        return Err(fmt_err(CHARTABLE, "chi3 does not match the character of ρ₃"));
    }
    let k = kernel_subspace(&r.group, &r.classes, &chi3, 7)?;
    let m: Mat<BigRational> = reference_kernel();
    c.push("rank", "rank of the χ₃-isotypic part of ∧²ρ₃", 7, k.cols, "");
    c.push("span", "it equals the column span of (N, 2I₇)ᵀ", true, same_span(&k, &m), "");
    cache.write(KERNEL, &rat_matrix_text(&k))?;
    c.cached(KERNEL);
    Ok(())
}

/// The printed basis M when it spans the cached kernel.
fn kernel_basis(cache: &Cache, stage: Stage) -> Result<Option<Mat<BigRational>>, PipelineError> {
    let k = parse_rat_matrix(&cache.read(stage, Stage::Kernel, KERNEL)?, KERNEL)?;
    let m: Mat<BigRational> = reference_kernel();
    Ok(same_span(&k, &m).then_some(m))
}

fn quadric(cache: &Cache, cfg: &Config, c: &mut Claims) -> Result<(), PipelineError> {
    let Some(m) = kernel_basis(cache, Stage::Quadric)? else {
        c.push("divides", "a common quadric divides the seven 6×6 sub-Pfaffians", true, false, "cached kernel differs from (N, 2I₇)ᵀ");
        return Ok(());
    };
    let gens = rho3().gens;
    let rec = match extract_quadric(&m, &gens) {
        Ok(r) => r,
        Err(e) => {
            c.push("divides", "a common quadric divides the seven 6×6 sub-Pfaffians", true, false, e.to_string());
            return Ok(());
        }
    };
    let printed: Mat<BigRational> = reference_quadric();
    let printed_poly = quadratic_form_poly(&printed);
    let printed_divides = rec.cubics.iter().filter(|cub| crate::polyring::exact_divide(cub, &printed_poly).is_some()).count();
    let printed_radical = radical_membership(&printed_poly, &rec.cubics, cfg.groebner_pairs);
    let ours_radical = radical_membership(&rec.poly, &rec.cubics, cfg.groebner_pairs);
    let seed = seed_point();
    c.push(
        "divides",
        "a common quadric divides the seven 6×6 sub-Pfaffians",
        true,
        true,
        format!("invariant form found in the {} convention; it is the only invariant symmetric form", rec.convention),
    );
    c.push(
        "matrix",
        "normalized symmetric matrix of the quadric",
        matrix_string(&printed),
        matrix_string(&rec.q),
        format!(
            "printed matrix divides {printed_divides} of 7 sub-Pfaffians; printed form in radical: {}; derived form in radical: {}; \
             printed form at the reference point: {}",
            fmt_radical(&printed_radical),
            fmt_radical(&ours_radical),
            eval_quadric(&printed, &seed)
        ),
    );
    c.push("cofactor_rank", "rank of the linear cofactors", 7, rec.cofactor_rank, "");
    c.push(
        "seed_value",
        "value of the quadric at (10+8α, −7, 0, 0, 7, 0, 0)",
        EisScalar::int(0, 0),
        eval_quadric(&rec.q, &seed),
        format!("2-vector rank at that point: {}", vector_rank(&point_to_wedge(&m, &seed))),
    );
    let minors: Vec<String> = rec.leading_minors.iter().map(ToString::to_string).collect();
    c.push("leading_minors", "leading principal minors of the quadric are positive", true, all_positive(&rec.leading_minors), format!("minors {}", minors.join(", ")));
    let printed_minors = leading_minors(&printed);
    let pm: Vec<String> = printed_minors.iter().map(ToString::to_string).collect();
    c.push("printed_minors", "leading principal minors of the printed matrix are positive", true, all_positive(&printed_minors), format!("minors {}", pm.join(", ")));

    // no decomposable vectors in span(K)
    let claim = "every coordinate has a power in the ideal of 4×4 sub-Pfaffians";
    match no_decomposables_certificate(&m, cfg.groebner_pairs, 20) {
        Ok(cert) => {
            let powers: Vec<String> = cert.powers.iter().map(|p| p.map_or("-".into(), |k| k.to_string())).collect();
            c.push(
                "no_decomposables",
                claim,
                true,
                cert.certified(),
                format!("{} quadrics, Gröbner basis of {} after {} pairs, powers {}", cert.generators, cert.basis_size, cert.pairs_processed, powers.join(",")),
            );
        }
        Err(WedgeError::Groebner(GroebnerError::EffortCap(n))) => c.inconclusive("no_decomposables", claim, true, format!("pair cap {n} reached")),
        Err(e) => return Err(e.into()),
    }
    let id21: Mat<BigRational> = Mat::identity(21);
    let claim = "negative control: the same certificate on all of ∧²ℚ⁷";
    match no_decomposables_certificate(&id21, cfg.groebner_pairs, 4) {
        Ok(cert) => c.push("negative_control", claim, false, cert.certified(), "decomposable vectors exist there, so no power may enter the ideal"),
        Err(WedgeError::Groebner(GroebnerError::EffortCap(n))) => c.inconclusive("negative_control", claim, false, format!("pair cap {n} reached")),
        Err(e) => return Err(e.into()),
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(31);
    let (sampled, bad) = finite_field_precheck(&m, &rec.q, 100, &mut rng);
    c.push("f31", "𝔽₃₁-points of the quadric where all 4×4 sub-Pfaffians vanish", 0, bad, format!("{sampled} points sampled"));

    cache.write(QUADRIC, &rat_matrix_text(&rec.q))?;
    c.cached(QUADRIC);
    Ok(())
}

fn fmt_radical(r: &Result<bool, GroebnerError>) -> String {
    match r {
        Ok(b) => b.to_string(),
        Err(e) => format!("unknown ({e})"),
    }
}

fn lagrangian(cache: &Cache, c: &mut Claims) -> Result<(), PipelineError> {
    let Some(m) = kernel_basis(cache, Stage::Lagrangian)? else {
        c.push("points", "quadric points with 4-dimensional support meeting ∧²W ∩ K", "10 of 10", "0 of 0", "cached kernel differs from (N, 2I₇)ᵀ");
        return Ok(());
    };
    let q = parse_rat_matrix(&cache.read(Stage::Lagrangian, Stage::Quadric, QUADRIC)?, QUADRIC)?;
    let me: Mat<EisScalar> = m.map(<EisScalar as crate::linalg::Scalar>::from_rational);
    let seed = find_eisenstein_point(&q, 3, 3);
    let pts = seed.as_ref().map(|s| quadric_points(&q, s, 10)).unwrap_or_default();
    let mut good = 0;
    let mut shapes = Vec::new();
    for p in &pts {
        let w = point_to_wedge(&m, p);
        let s = support(&w);
        let inter = subspace_wedge_intersection(&s, &me);
        if s.cols == 4 && inter.cols > 0 {
            good += 1;
        }
        shapes.push(format!("{}/{}/{}", vector_rank(&w), s.cols, inter.cols));
    }
    c.push(
        "points",
        "quadric points with 4-dimensional support meeting ∧²W ∩ K",
        "10 of 10",
        format!("{good} of {}", pts.len()),
        format!(
            "seed {}; rank/support/witness dims {}",
            seed.map(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).unwrap_or_else(|| "none".into()),
            shapes.join(" ")
        ),
    );

    let r = rho3_group()?;
    let order2: Vec<usize> = (0..r.classes.count()).filter(|&k| r.classes.classes[k].order == 2).collect();
    let chi3 = character_of(&r.group, &r.classes, |x| x.clone());
    let traces: Vec<String> = order2.iter().map(|&k| chi3[k].to_string()).collect();
    c.push("traces", "χ₃ on elements of order 2", "-1", traces.join(","), format!("{} classes of order 2", order2.len()));
    let mut dims = Vec::new();
    for &k in &order2 {
        let sigma = &r.group.elements[r.classes.classes[k].rep];
        // vectors transform by the transpose, matching the action that preserves span(K)
        let w = image_minus_identity(&sigma.transpose());
        dims.push(subspace_wedge_intersection(&w, &m).cols);
    }
    let max_dim = dims.iter().copied().max().unwrap_or(0);
    c.push("sigma", "∧²im(ρ₃(σ)−I) ∩ K for σ of order 2", 0, max_dim, format!("dim im(ρ₃(σ)−I) = {}", order2.first().map_or(0, |&k| image_minus_identity(&r.group.elements[r.classes.classes[k].rep]).cols)));
    c.push("algebra_span", "dimension of the span of ρ₃(G) in M₇(ℚ)", 49, algebra_span_rank(&r.group, &|x| x.clone()), "");
    Ok(())
}

// ---------------------------------------------------------------- bookkeeping

fn computed_of(rows: &[StageReport], id: &str) -> Option<String> {
    rows.iter().find(|r| r.id == id).map(|r| r.computed.clone())
}

fn report(cache: &Cache) -> Result<Vec<StageReport>, PipelineError> {
    let started = Instant::now();
    let mut all = Vec::new();
    for st in Stage::COMPUTING {
        let text = cache.read(Stage::Report, st, &report_file(st))?;
        let rows: Vec<StageReport> = serde_json::from_str(&text).map_err(|e| fmt_err(&report_file(st), e))?;
        all.extend(rows);
    }
    let ex = EXPECTED;
    let mut c = Claims::new(Stage::Report);
    let int = |id: &str| computed_of(&all, id).and_then(|s| s.parse::<i64>().ok());
    let b1 = computed_of(&all, "h1.invariants").and_then(|s| s.strip_prefix("Z^").and_then(|r| r.parse::<i64>().ok()));
    let total = int("nilq.real_kernel");
    let d = int("kernel.rank");
    c.push("expected_tables", "the expected invariant tables are internally consistent", true, ex.consistent(), "");
    match (b1, total, d) {
        (Some(b1), Some(total), Some(d)) => {
            let q = b1 / 2;
            let (h20_a, h11_a) = (q * (q - 1) / 2, q * q);
            let k = h11_a - ex.h11_s;
            let rel = if total == k + 2 * d { "=" } else { "≠" };
            c.push(
                "elimination",
                "kernel_total = k + 2d with k = h¹¹(A) − h¹¹(S) and d = dim of the χ₃ part",
                format!("{} = {} + 2*{}", ex.kernel_total, ex.k, ex.d),
                format!("{total} {rel} {k} + 2*{d}"),
                "",
            );
            let b2_s = 2 * ex.p_g + ex.h11_s;
            let e = 2 - 2 * b1 + b2_s;
            c.push(
                "surface_table",
                "e, q, b₂ of the surface from b₁, p_g, h¹¹",
                format!("e={} q={} b2={}", ex.e, ex.q, ex.b2_s),
                format!("e={e} q={q} b2={b2_s}"),
                "",
            );
            let b2_a = 2 * h20_a + h11_a;
            let direct = (2 * q) * (2 * q - 1) / 2;
            c.push(
                "albanese_table",
                "h²⁰, h¹¹, b₂ of the Albanese variety from q",
                format!("h20={} h11={} b2={} b2=C(2q,2)", ex.h20_a, ex.h11_a, ex.b2_a),
                format!("h20={h20_a} h11={h11_a} b2={b2_a} {}", if b2_a == direct { "b2=C(2q,2)" } else { "b2≠C(2q,2)" }),
                "",
            );
        }
        _ => c.push(
            "elimination",
            "kernel_total = k + 2d",
            format!("{} = {} + 2*{}", ex.kernel_total, ex.k, ex.d),
            "unavailable",
            "an upstream stage did not produce the needed value",
        ),
    }
    let rows = c.finish(started);
    all.extend(rows);
    Ok(all)
}
