//! The solver driver.
//!
//! Vertices are added one at a time. Whenever the running solution stops
//! being a multicut and is already full, the solution plus the new vertex
//! (`W`, of size `p + 1`) is compressed: guess which part of `W` is kept in
//! the new solution and how the rest of `W` is grouped, then solve the
//! resulting instances in which the solution must also be a multiway cut of
//! `W`. Each of those is made shadowless by a set `Z`, reduced to bipedal
//! instances, and finished with a 2-CNF encoding.

use std::ops::ControlFlow;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bipedal::{base_case, bipedal_visit, BaseAnswer, Event};
use crate::encode::{decode, encode, strip_legless};
use crate::graph::{Graph, PairSet, VertexSet};
use crate::instance::{
    first_unseparated, is_multicut, is_star_solution, MulticutInstance, StarInstance,
};
use crate::oracle::{verify, Certificate, Target};
use crate::rng::stream;
use crate::separators::count_flows;
use crate::shadow::{
    cut_shadow_sets, deterministic_sets, exhaustive_sets, random_set, DeterministicSets,
    DEFAULT_EMISSION_CAP, EXHAUSTIVE_LIMIT,
};
use crate::twosat::almost2sat_vars;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sampled,
    Deterministic,
    ExhaustiveZ,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sampled => "sampled",
            Mode::Deterministic => "deterministic",
            Mode::ExhaustiveZ => "exhaustive-z",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sampled" => Ok(Mode::Sampled),
            "deterministic" => Ok(Mode::Deterministic),
            "exhaustive-z" => Ok(Mode::ExhaustiveZ),
            other => Err(format!(
                "unknown mode '{other}' (sampled|deterministic|exhaustive-z)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub mode: Mode,
    pub seed: u64,
    /// Restart budget for sampled mode; `None` uses [`default_restarts`].
    pub restarts: Option<u64>,
    pub threads: usize,
    pub emission_cap: u128,
    /// In sampled mode, use exhaustive-Z whenever `|V \ W|` is small
    /// enough, which makes No answers authoritative.
    pub upgrade_small: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mode: Mode::Sampled,
            seed: 0,
            restarts: None,
            threads: 1,
            emission_cap: DEFAULT_EMISSION_CAP,
            upgrade_small: true,
        }
    }
}

impl SolveOptions {
    pub fn with_mode(mode: Mode) -> Self {
        SolveOptions {
            mode,
            ..Default::default()
        }
    }
}

/// `max(1024, 4^(p³))`, capped at one million.
pub fn default_restarts(p: usize) -> u64 {
    const CAP: u64 = 1_000_000;
    let exp = (p * p * p) as u32;
    let big = if exp >= 10 { CAP } else { 4u64.pow(exp) };
    big.clamp(1024, CAP)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Solved(VertexSet),
    No,
    Inconclusive(String),
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Solved(_) => "solved",
            Status::No => "no",
            Status::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub flow_calls: u64,
    pub instances_emitted: u64,
    pub restarts_used: u64,
    pub wall_ms: u64,
}

impl Stats {
    fn add(&mut self, o: &Stats) {
        self.flow_calls += o.flow_calls;
        self.instances_emitted += o.instances_emitted;
        self.restarts_used += o.restarts_used;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub status: Status,
    pub stats: Stats,
    /// Present when solved; checked against the input instance.
    pub certificate: Option<Certificate>,
}

/// `I/Z`: the torso on `V \ Z`, with every terminal inside a component `C`
/// of `G[Z]` replaced by each vertex of `N(C)`.
pub fn reduce_by_torso(i: &StarInstance, z: &VertexSet) -> StarInstance {
    assert!(z.is_disjoint(&i.w), "Z must avoid W");
    let z = z.intersection(i.g.vertices());
    if z.is_empty() {
        return i.clone();
    }
    let keep = i.g.vertices().difference(&z);
    let torso = i.g.torso(&keep);
    let mut phi: Vec<Option<Vec<usize>>> = vec![None; i.g.universe()];
    let gz = i.g.induced(&z);
    for c in gz.components(&i.g.empty_set()) {
        let nb = i.g.open_neighborhood(&c).to_vec();
        for v in &c {
            phi[v] = Some(nb.clone());
        }
    }
    let image = |v: usize| phi[v].clone().unwrap_or_else(|| vec![v]);
    let mut t = PairSet::new();
    for (a, b) in i.t.iter() {
        for x in image(a) {
            for y in image(b) {
                t.push(x, y);
            }
        }
    }
    StarInstance::new_unchecked(torso, t, i.w.clone(), i.p)
}

/// A compression branch: solutions of `instance` lift by adding `kept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarBranch {
    pub instance: StarInstance,
    pub kept: VertexSet,
    /// Classes of `W \ kept`, each merged into its smallest member.
    pub classes: Vec<Vec<usize>>,
}

/// Set partitions in restricted-growth order.
fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(items: &[usize], i: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..cur.len() {
            cur[c].push(items[i]);
            rec(items, i + 1, cur, out);
            cur[c].pop();
        }
        cur.push(vec![items[i]]);
        rec(items, i + 1, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(items, 0, &mut Vec::new(), &mut out);
    out
}

/// Every guess of `X = W ∩ S` (at most `p` vertices, deleted with the budget
/// reduced) and every grouping of `W \ X` by the components of `G \ S`.
/// Guesses that leave a class holding both ends of a pair, or leave the
/// merged `W` failing to separate the remaining pairs, are dropped.
pub fn compression_to_star(g: &Graph, t: &PairSet, w: &VertexSet, p: usize) -> Vec<StarBranch> {
    let mut out = Vec::new();
    let wl = w.to_vec();
    for size in 0..=p.min(wl.len()) {
        crate::oracle::scan_subsets::<()>(g.universe(), &wl, size, |x| {
            if x.len() != size {
                return None;
            }
            let g1 = g.remove_vertices(x);
            let t1 = t.without_vertices(x);
            let rest: Vec<usize> = wl.iter().copied().filter(|v| !x.contains(*v)).collect();
            for classes in partitions(&rest) {
                let mut f = Vec::new();
                let mut w2 = g.empty_set();
                for c in &classes {
                    let rep = c[0];
                    w2.insert(rep);
                    f.extend(c[1..].iter().map(|&b| (b, rep)));
                }
                let mut map: Vec<usize> = (0..g.universe()).collect();
                for &(b, r) in &f {
                    map[b] = r;
                }
                let g2 = g1.contract(&f);
                let t2 = t1.map_vertices(|v| map[v]);
                if t2.iter().any(|(a, b)| a == b && w2.contains(a)) {
                    continue;
                }
                if first_unseparated(&g2, &t2, &w2).is_some() {
                    continue;
                }
                out.push(StarBranch {
                    instance: StarInstance::new_unchecked(g2, t2, w2, p - size),
                    kept: x.clone(),
                    classes,
                });
            }
            None
        });
    }
    out
}

/// Outcome of one `Z` candidate.
struct Attempt {
    solution: Option<VertexSet>,
    stats: Stats,
}

/// Solves `I/Z` through the bipedal reduction and the 2-CNF encoding.
fn attempt(i: &StarInstance, z: &VertexSet) -> Attempt {
    let mut stats = Stats {
        instances_emitted: 1,
        ..Default::default()
    };
    let reduced = reduce_by_torso(i, z);
    let mut found = None;
    let (_, flows) = count_flows(|| {
        let _ = bipedal_visit(&reduced, &mut |e| {
            let candidate = match e {
                Event::Solved(s) => s,
                Event::Leaf(leaf) => {
                    stats.instances_emitted += 1;
                    let inst = strip_legless(&leaf.instance);
                    let Ok(enc) = encode(&inst) else {
                        return ControlFlow::Continue(());
                    };
                    match almost2sat_vars(&enc.formula, inst.p) {
                        Some(vars) => decode(&enc, &vars).union(&leaf.deleted),
                        None => return ControlFlow::Continue(()),
                    }
                }
                _ => return ControlFlow::Continue(()),
            };
            if candidate.len() <= i.p && is_star_solution(i, &candidate) {
                found = Some(candidate);
                return ControlFlow::Break(());
            }
            debug_assert!(false, "lifted solution failed verification");
            ControlFlow::Continue(())
        });
    });
    stats.flow_calls += flows;
    Attempt {
        solution: found,
        stats,
    }
}

/// Runs candidates in fixed-size batches, in order, and returns the first
/// success. Statistics cover exactly the candidates up to the winner, so
/// they do not depend on the thread count.
fn first_success<C: Sync>(
    candidates: &mut dyn Iterator<Item = C>,
    threads: usize,
    run: &(dyn Fn(&C) -> Attempt + Sync),
    stats: &mut Stats,
) -> Option<VertexSet> {
    let batch = if threads <= 1 { 1 } else { 4 * threads };
    loop {
        let chunk: Vec<C> = (&mut *candidates).take(batch).collect();
        if chunk.is_empty() {
            return None;
        }
        let results: Vec<Attempt> = if threads <= 1 {
            chunk.iter().map(run).collect()
        } else {
            chunk.par_iter().map(run).collect()
        };
        for r in results {
            stats.add(&r.stats);
            if r.solution.is_some() {
                return r.solution;
            }
        }
    }
}

/// Where the `Z` candidates of one branch come from.
enum Source {
    Fixed(std::vec::IntoIter<VertexSet>),
    Splitter(Box<DeterministicSets>),
    Restarts { next: u64, budget: u64 },
}

/// One unit of work: a branch and a way to obtain its `Z`.
enum Job {
    /// `Z` plus the flow calls spent producing it.
    Fixed(VertexSet, u64),
    /// Restart number; restart 0 uses `Z = ∅`.
    Restart(u64),
}

struct Lane {
    branch: usize,
    source: Source,
}

impl Lane {
    fn next_job(&mut self) -> Option<Job> {
        match &mut self.source {
            Source::Fixed(it) => it.next().map(|z| Job::Fixed(z, 0)),
            Source::Splitter(sets) => {
                let (z, flows) = count_flows(|| sets.next());
                z.map(|z| Job::Fixed(z, flows))
            }
            Source::Restarts { next, budget } => {
                if *next > *budget {
                    return None;
                }
                *next += 1;
                Some(Job::Restart(*next - 1))
            }
        }
    }
}

/// Takes one job from each live lane in turn, dropping exhausted lanes.
struct RoundRobin {
    lanes: Vec<Lane>,
    at: usize,
}

impl Iterator for RoundRobin {
    type Item = (usize, Job);

    fn next(&mut self) -> Option<(usize, Job)> {
        while !self.lanes.is_empty() {
            if self.at >= self.lanes.len() {
                self.at = 0;
            }
            match self.lanes[self.at].next_job() {
                Some(job) => {
                    let branch = self.lanes[self.at].branch;
                    self.at += 1;
                    return Some((branch, job));
                }
                None => {
                    self.lanes.remove(self.at);
                }
            }
        }
        None
    }
}

/// A branch that still needs a search, or an early verdict.
enum Setup {
    Search(Source),
    Solved(VertexSet),
    No,
    Inconclusive(String),
}

fn setup(i: &StarInstance, opts: &SolveOptions, stats: &mut Stats) -> Setup {
    // root base cases describe the instance itself and hold for every Z
    let (base, flows) = count_flows(|| base_case(i));
    stats.flow_calls += flows;
    match base {
        Some(BaseAnswer::Solved(s)) if is_star_solution(i, &s) && s.len() <= i.p => {
            return Setup::Solved(s)
        }
        Some(BaseAnswer::No(_)) => return Setup::No,
        _ => {}
    }
    // all subsets when few vertices are free, otherwise shadows of small cuts
    let exhaustive = || {
        let listed = if i.free_vertices().len() <= EXHAUSTIVE_LIMIT {
            exhaustive_sets(&i.g, &i.w, i.p)
        } else {
            cut_shadow_sets(&i.g, &i.w, i.p, opts.emission_cap)
        };
        match listed {
            Ok(zs) => Setup::Search(Source::Fixed(zs.into_iter())),
            Err(e) => Setup::Inconclusive(e.to_string()),
        }
    };
    match opts.mode {
        Mode::ExhaustiveZ => exhaustive(),
        Mode::Sampled if opts.upgrade_small && i.free_vertices().len() <= EXHAUSTIVE_LIMIT => {
            exhaustive()
        }
        Mode::Sampled => Setup::Search(Source::Restarts {
            next: 0,
            budget: opts.restarts.unwrap_or_else(|| default_restarts(i.p)),
        }),
        Mode::Deterministic => {
            let (made, flows) =
                count_flows(|| deterministic_sets(&i.g, &i.w, i.p, opts.emission_cap));
            stats.flow_calls += flows;
            match made {
                Ok(sets) => Setup::Search(Source::Splitter(Box::new(sets))),
                Err(e) => Setup::Inconclusive(e.to_string()),
            }
        }
    }
}

/// Searches several branches at once, interleaving their candidates so a
/// branch that is cheap to solve is not starved by hopeless ones. Returns
/// the first verified solution in that interleaved order, lifted by the
/// branch's kept vertices.
fn solve_branches(branches: &[StarBranch], opts: &SolveOptions, ctx: &[u64]) -> (Status, Stats) {
    let mut stats = Stats::default();
    let mut lanes = Vec::new();
    let mut unsure: Option<String> = None;
    for (bi, b) in branches.iter().enumerate() {
        stats.instances_emitted += 1;
        match setup(&b.instance, opts, &mut stats) {
            Setup::Solved(s) => return (Status::Solved(s.union(&b.kept)), stats),
            Setup::No => {}
            Setup::Inconclusive(why) => {
                unsure.get_or_insert(why);
            }
            Setup::Search(source) => {
                if let Source::Restarts { budget, .. } = &source {
                    unsure.get_or_insert(format!("no solution after {budget} restarts"));
                }
                lanes.push(Lane { branch: bi, source });
            }
        }
    }
    let run = |(bi, job): &(usize, Job)| {
        let b = &branches[*bi];
        let i = &b.instance;
        let mut a = match job {
            Job::Fixed(z, gen) => {
                let mut a = attempt(i, z);
                a.stats.flow_calls += gen;
                a
            }
            Job::Restart(0) => attempt(i, &i.g.empty_set()),
            Job::Restart(j) => {
                let mut path = ctx.to_vec();
                path.extend([*bi as u64, *j]);
                let (z, flows) =
                    count_flows(|| random_set(&i.g, &i.w, i.p, &mut stream(opts.seed, &path)));
                let mut a = attempt(i, &z);
                a.stats.flow_calls += flows;
                a.stats.restarts_used = 1;
                a
            }
        };
        a.solution = a.solution.map(|s| s.union(&b.kept));
        a
    };
    let mut jobs = RoundRobin { lanes, at: 0 };
    let status = match first_success(&mut jobs, opts.threads, &run, &mut stats) {
        Some(s) => Status::Solved(s),
        None => match unsure {
            Some(why) => Status::Inconclusive(why),
            None => Status::No,
        },
    };
    (status, stats)
}

/// Solves one instance that asks for a multicut that is also a multiway cut
/// of `W` and avoids `W`. `ctx` names the random stream.
pub fn solve_star(i: &StarInstance, opts: &SolveOptions, ctx: &[u64]) -> (Status, Stats) {
    let branch = StarBranch {
        instance: i.clone(),
        kept: i.g.empty_set(),
        classes: Vec::new(),
    };
    solve_branches(std::slice::from_ref(&branch), opts, ctx)
}

/// Adds vertices in id order, compressing whenever the running solution
/// would exceed the budget.
pub fn iterative_compression_solve(
    inst: &MulticutInstance,
    opts: &SolveOptions,
) -> (Status, Stats) {
    let g = &inst.g;
    let p = inst.p;
    let mut stats = Stats::default();
    let mut sol = g.empty_set();
    let mut present = g.empty_set();
    for (step, v) in g.vertices().iter().enumerate() {
        present.insert(v);
        let gi = g.induced(&present);
        let ti = PairSet::from_pairs(
            inst.t
                .iter()
                .filter(|&(a, b)| present.contains(a) && present.contains(b)),
        );
        if is_multicut(&gi, &ti, &sol) {
            continue;
        }
        if sol.len() < p {
            sol.insert(v);
            continue;
        }
        let branches = compression_to_star(&gi, &ti, &sol.with(v), p);
        let (status, st) = solve_branches(&branches, opts, &[step as u64]);
        stats.add(&st);
        match status {
            Status::Solved(s) => sol = s,
            other => return (other, stats),
        }
    }
    (Status::Solved(sol), stats)
}

/// Solves a multicut instance and checks the answer against the input.
pub fn solve(inst: &MulticutInstance, opts: &SolveOptions) -> SolveReport {
    let start = Instant::now();
    let (status, mut stats) = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool");
        pool.install(|| iterative_compression_solve(inst, opts))
    } else {
        iterative_compression_solve(inst, opts)
    };
    stats.wall_ms = start.elapsed().as_millis() as u64;
    let certificate = match &status {
        Status::Solved(s) => {
            let cert = verify(Target::Multicut(inst), s);
            assert!(cert.all_pass, "solver produced an invalid cutset {s:?}");
            Some(cert)
        }
        _ => None,
    };
    SolveReport {
        status,
        stats,
        certificate,
    }
}
