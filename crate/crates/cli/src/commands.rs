use std::cell::RefCell;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qitw_core::corpus::{self, Family};
use qitw_core::decomposition::min_centred_parts;
use qitw_core::exact::{exact_domination_number, exact_treewidth};
use qitw_core::io;
use qitw_core::pipeline::{
    augment, bipartite_partition, push_decomposition, quotient, quotient_map, PartitionStrategy, PipelineOptions,
};
use qitw_core::report::Check;
use qitw_core::simwidth::{branch_width_sim, max_cut_induced_matching, sim_to_td, simwidth_pipeline, SIMVAL_CAP};
use qitw_core::{
    bag_metrics, centred_check, centred_check_decomposition, compose, is_bipartite, pullback_decomposition,
    qi_constant, run_pipeline, BranchDecomposition, Caps, Centred, CentredMode, Error, Graph, Partition,
    QuasiIsometryMap, Report, Shape, TreeDecomposition, Vertex,
};
use sha2::{Digest, Sha256};

use crate::{Cli, Command, FamilyArg, GraphTd, ModeArg, ShapeArg, StrategyArg};

/// Reads input files and hashes their contents in order.
struct Inputs {
    hasher: RefCell<Option<Sha256>>,
    shape: Shape,
}

impl Inputs {
    fn read(&self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.hasher.borrow_mut().get_or_insert_with(Sha256::new).update(text.as_bytes());
        Ok(text)
    }

    fn graph(&self, path: &Path) -> Result<Graph> {
        io::parse_graph(&self.read(path)?).with_context(|| format!("parsing {}", path.display()))
    }

    fn td(&self, path: &Path, n: usize) -> Result<TreeDecomposition> {
        io::parse_td(&self.read(path)?, n, self.shape).with_context(|| format!("parsing {}", path.display()))
    }

    fn bd(&self, path: &Path) -> Result<BranchDecomposition> {
        io::parse_bd(&self.read(path)?).with_context(|| format!("parsing {}", path.display()))
    }

    fn map(&self, path: &Path, n: usize, host_n: usize) -> Result<Vec<Vertex>> {
        io::parse_map(&self.read(path)?, n, host_n).with_context(|| format!("parsing {}", path.display()))
    }

    fn partition(&self, path: &Path, g: &Graph) -> Result<Partition> {
        let parts = io::parse_partition(&self.read(path)?, g.n()).with_context(|| format!("parsing {}", path.display()))?;
        Ok(Partition::new(g, parts)?)
    }

    fn graph_td(&self, input: &GraphTd) -> Result<(Graph, TreeDecomposition)> {
        let g = self.graph(&input.graph)?;
        let td = self.td(&input.td, g.n())?;
        Ok((g, td))
    }

    fn digest(&self) -> Option<String> {
        self.hasher.borrow().clone().map(|h| hex::encode(h.finalize()))
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// 1-based ids from the command line to 0-based vertices.
fn vertex_set(ids: &[usize], n: usize) -> Result<Vec<Vertex>> {
    let mut set = Vec::with_capacity(ids.len());
    for &v in ids {
        if v == 0 || v > n {
            bail!("vertex {v} outside 1..={n}");
        }
        set.push(v - 1);
    }
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

fn one_based(set: &[Vertex]) -> Vec<usize> {
    set.iter().map(|v| v + 1).collect()
}

fn strategy(s: StrategyArg) -> PartitionStrategy {
    match s {
        StrategyArg::Layering => PartitionStrategy::Layering,
        StrategyArg::Exact => PartitionStrategy::Exact,
        StrategyArg::Best => PartitionStrategy::Best,
    }
}

fn validity(r: &mut Report, g: &Graph, td: &TreeDecomposition) {
    let result = td.validate(g);
    if let Err(v) = &result {
        r.value("violation", v.to_string());
    }
    r.check(Check::holds("valid_decomposition", "tree-decomposition", result.is_ok()));
}

pub fn run(cli: &Cli) -> Result<Report> {
    let shape = match cli.shape {
        ShapeArg::Tree => Shape::Tree,
        ShapeArg::Path => Shape::Path,
    };
    let inputs = Inputs { hasher: RefCell::new(None), shape };
    let caps = Caps::with_exact(cli.cap);
    let opts = PipelineOptions { caps, ..PipelineOptions::default() };
    let mut report = match &cli.command {
        Command::ValidateTd(input) => {
            let (g, td) = inputs.graph_td(input)?;
            let mut r = Report::new("validate-td");
            r.value("n", g.n()).value("bags", td.node_count()).value("width", td.width()).value("shape", td.shape());
            validity(&mut r, &g, &td);
            r
        }
        Command::Metrics(input) => {
            let (g, td) = inputs.graph_td(input)?;
            td.validate(&g).map_err(Error::from)?;
            let m = bag_metrics(&g, &td, cli.cap)?;
            let mut r = Report::new("metrics");
            r.value("width", m.width)
                .value("independence", m.independence)
                .value("domination", m.domination)
                .value("bags", &m.bags);
            r
        }
        Command::CentredCheck { graph, td, set, k, d, mode } => {
            let g = inputs.graph(graph)?;
            let mode = match mode {
                ModeArg::Exact => CentredMode::Exact,
                ModeArg::Heuristic => CentredMode::Heuristic,
            };
            let mut r = Report::new("centred-check");
            r.value("k", k).value("d", d);
            if let Some(ids) = set {
                let s = vertex_set(ids, g.n())?;
                let c = centred_check(&g, &s, *k, *d, mode, cli.cap)?;
                describe_centred(&mut r, &c);
                r.check(Check::holds("centred", "(k,d)", c.holds()));
            } else {
                let td = inputs.td(td.as_deref().expect("clap requires td or set"), g.n())?;
                let cd = centred_check_decomposition(&g, &td, *k, *d, mode, cli.cap)?;
                if let Some(t) = cd.first_failure() {
                    r.value("first_failing_bag", t + 1);
                    describe_centred(&mut r, &cd.bags[t]);
                }
                if let Some(p) = cd.max_parts() {
                    r.value("max_parts", p);
                }
                r.check(Check::holds("centred", "(k,d)", cd.holds()));
            }
            r
        }
        Command::Augment { input, d, output } => {
            let (g, td) = inputs.graph_td(input)?;
            let a = augment(&g, &td, *d)?;
            write(output, &io::emit_graph(&a.graph))?;
            let mut r = Report::new("augment");
            r.value("d", d).value("added_edges", a.added.len()).value("m_out", a.graph.m());
            if let Some(c) = a.map.measured() {
                r.value("identity_constant", c);
                r.check(Check::at_most("identity_constant", "d", c as u64, (*d).max(1) as u64));
            }
            r
        }
        Command::Quotient { graph, part, d, output, map } => {
            let g = inputs.graph(graph)?;
            let p = inputs.partition(part, &g)?;
            let mut r = Report::new("quotient");
            let h = match d {
                Some(d) => {
                    let (h, phi) = quotient_map(&g, &p, *d)?;
                    if let Some(path) = map {
                        write(path, &io::emit_map(phi.as_slice()))?;
                    }
                    if let Some(c) = phi.measured() {
                        r.value("map_constant", c);
                        r.check(Check::at_most("map_constant", "d", c as u64, (*d).max(1) as u64));
                    }
                    h
                }
                None => {
                    let h = quotient(&g, &p)?;
                    if let Some(path) = map {
                        let phi: Vec<Vertex> = g.vertices().map(|v| p.part_of(v)).collect();
                        write(path, &io::emit_map(&phi))?;
                    }
                    h
                }
            };
            write(output, &io::emit_graph(&h))?;
            r.value("parts", p.len()).value("m_out", h.m()).value("bipartite", is_bipartite(&h).is_bipartite());
            r
        }
        Command::BipartitePartition { input, strategy: s, budget, output } => {
            let (g, td) = inputs.graph_td(input)?;
            let bp = bipartite_partition(&g, &td, strategy(*s), *budget, caps)?;
            write(output, &io::emit_partition(bp.partition.parts()))?;
            let q = quotient(&g, &bp.partition)?;
            let mut r = Report::new("bipartite-partition");
            r.value("parts", bp.partition.len())
                .value("max_weak_diameter", bp.max_diameter)
                .value("strategy", bp.strategy)
                .value("domination", bp.domination);
            r.check(Check::holds("quotient_bipartite", "bipartite quotient", is_bipartite(&q).is_bipartite()));
            r.check(Check::holds(
                "parts_connected",
                "connected parts",
                bp.partition.parts().iter().all(|p| g.induces_connected(p)),
            ));
            if let Some(b) = budget {
                r.check(Check::at_most("max_weak_diameter", "budget", bp.max_diameter as u64, *b as u64));
            }
            r
        }
        Command::PushTd { input, part, output } => {
            let (g, td) = inputs.graph_td(input)?;
            let p = inputs.partition(part, &g)?;
            let h = quotient(&g, &p)?;
            let pushed = push_decomposition(&g, &td, &p)?;
            write(output, &io::emit_td(&pushed, h.n()))?;
            let mut r = Report::new("push-td");
            r.value("width", pushed.width()).value("bags", pushed.node_count());
            validity(&mut r, &h, &pushed);
            r
        }
        Command::Pipeline { input, k, d, budget, strategy: s, waive_centred_check, output } => {
            let (g, td) = inputs.graph_td(input)?;
            let opts = PipelineOptions {
                strategy: strategy(*s),
                budget: *budget,
                waive_centred_check: *waive_centred_check,
                ..opts
            };
            let p = run_pipeline(&g, &td, *k, *d, &opts)?;
            write(&output.join("h.gr"), &io::emit_graph(&p.output))?;
            write(&output.join("h.td"), &io::emit_td(&p.output_decomposition, p.output.n()))?;
            write(&output.join("map.map"), &io::emit_map(p.composed_map.as_slice()))?;
            let mut r = p.to_report();
            r.inputs_digest = inputs.digest();
            write(&output.join("report.json"), &r.to_json())?;
            r
        }
        Command::Pullback { graph, host, map, host_td, c, output } => {
            let g = inputs.graph(graph)?;
            let h = inputs.graph(host)?;
            let phi = QuasiIsometryMap::new(&g, &h, inputs.map(map, g.n(), h.n())?)?;
            let td_h = inputs.td(host_td, h.n())?;
            let td = pullback_decomposition(&g, &h, &phi, &td_h, *c)?;
            write(output, &io::emit_td(&td, g.n()))?;
            let parts = td_h.width() + 1;
            let d = 3 * c * c;
            let mut r = Report::new("pullback");
            r.value("c", c).value("host_width", td_h.width()).value("width", td.width()).value("d", d);
            validity(&mut r, &g, &td);
            let cd = centred_check_decomposition(&g, &td, parts, d, CentredMode::Exact, cli.cap)?;
            let used = td
                .bags()
                .iter()
                .map(|b| min_centred_parts(&g, b, d, cli.cap))
                .collect::<qitw_core::Result<Vec<_>>>()?;
            r.check(Check::at_most("centred_parts", "k+1", used.into_iter().max().unwrap_or(0) as u64, parts as u64));
            r.check(Check::holds("centred", "3c^2", cd.holds()));
            r
        }
        Command::QiConstant { graph, host, map, qmax } => {
            let g = inputs.graph(graph)?;
            let h = inputs.graph(host)?;
            let phi = QuasiIsometryMap::new(&g, &h, inputs.map(map, g.n(), h.n())?)?;
            let mut r = Report::new("qi-constant");
            r.value("qmax", qmax);
            match qi_constant(&g, &h, &phi, *qmax) {
                Ok(q) => {
                    r.value("q", q);
                    r.check(Check::at_most("q", "qmax", q as u64, *qmax as u64));
                }
                Err(Error::NotWithin(_)) => {
                    r.value("q", serde_json::Value::Null);
                    r.check(Check::holds("q", "qmax", false));
                }
                Err(e) => return Err(e.into()),
            }
            r
        }
        Command::Compose { graph, mid, host, map1, map2, qmax, output } => {
            let g = inputs.graph(graph)?;
            let g1 = inputs.graph(mid)?;
            let g2 = inputs.graph(host)?;
            let phi1 = QuasiIsometryMap::new(&g, &g1, inputs.map(map1, g.n(), g1.n())?)?.measure(&g, &g1, *qmax)?;
            let phi2 = QuasiIsometryMap::new(&g1, &g2, inputs.map(map2, g1.n(), g2.n())?)?.measure(&g1, &g2, *qmax)?;
            let (c, q) = (phi1.measured().unwrap(), phi2.measured().unwrap());
            let mut r = Report::new("compose");
            r.value("c", c).value("q", q).value("bound", q as u64 * (c as u64 + 2));
            match compose(&g, &g1, &g2, &phi1, &phi2) {
                Ok((composed, bound)) => {
                    if let Some(path) = output {
                        write(path, &io::emit_map(composed.as_slice()))?;
                    }
                    r.value("measured", bound.measured);
                    r.check(Check::at_most("composed_constant", "q(c+2)", bound.measured as u64, bound.bound));
                }
                Err(Error::BoundViolated { measured, bound, .. }) => {
                    r.value("measured", measured);
                    r.check(Check::at_most("composed_constant", "q(c+2)", measured, bound));
                }
                Err(e) => return Err(e.into()),
            }
            r
        }
        Command::Simval { graph, set } => {
            let g = inputs.graph(graph)?;
            let side = vertex_set(set, g.n())?;
            let m = max_cut_induced_matching(&g, &side, SIMVAL_CAP)?;
            let mut r = Report::new("simval");
            r.value("simval", m.len())
                .value("matching", m.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>());
            r
        }
        Command::SimToTd { graph, bd, output } => {
            let g = inputs.graph(graph)?;
            let bd = inputs.bd(bd)?;
            let k = branch_width_sim(&g, &bd, SIMVAL_CAP)?;
            let td = sim_to_td(&g, &bd)?;
            write(output, &io::emit_td(&td, g.n()))?;
            let mut gamma = 0;
            for (t, bag) in td.bags().iter().enumerate().filter(|(_, b)| !b.is_empty()) {
                gamma = gamma.max(exact_domination_number(&g.induced(bag), cli.cap).with_context(|| format!("bag {}", t + 1))?);
            }
            let mut r = Report::new("sim-to-td");
            r.value("sim_width", k).value("width", td.width()).value("max_bag_domination", gamma);
            validity(&mut r, &g, &td);
            r.check(Check::at_most("max_bag_domination", "6k", gamma as u64, 6 * k.max(1) as u64));
            r
        }
        Command::SimPipeline { graph, bd, output } => {
            let g = inputs.graph(graph)?;
            let bd = inputs.bd(bd)?;
            let s = simwidth_pipeline(&g, &bd, &opts)?;
            let p = &s.pipeline;
            write(&output.join("sim.td"), &io::emit_td(&s.decomposition, g.n()))?;
            write(&output.join("h.gr"), &io::emit_graph(&p.output))?;
            write(&output.join("h.td"), &io::emit_td(&p.output_decomposition, p.output.n()))?;
            write(&output.join("map.map"), &io::emit_map(p.composed_map.as_slice()))?;
            let mut r = s.to_report();
            r.inputs_digest = inputs.digest();
            write(&output.join("report.json"), &r.to_json())?;
            r
        }
        Command::ExactTw { graph, tw_cap, output } => {
            let g = inputs.graph(graph)?;
            let tw = exact_treewidth(&g, *tw_cap)?;
            if let Some(path) = output {
                write(path, &io::emit_td(&tw.decomposition, g.n()))?;
            }
            let mut r = Report::new("exact-tw");
            r.value("treewidth", tw.width).value("elimination_order", one_based(&tw.order));
            validity(&mut r, &g, &tw.decomposition);
            r.check(Check::at_most("witness_width", "treewidth", tw.decomposition.width() as u64, tw.width as u64));
            r
        }
        Command::Gen { family, n, k, s, rows, cols, output } => {
            let fam = match family {
                FamilyArg::Path => Family::Path { n: *n },
                FamilyArg::Cycle => Family::Cycle { n: *n },
                FamilyArg::RandomTree => Family::RandomTree { n: *n },
                FamilyArg::KTree => Family::KTree { k: *k, n: *n },
                FamilyArg::KPath => Family::KPath { k: *k, n: *n },
                FamilyArg::SubdividedKTree => Family::SubdividedKTree { k: *k, n: *n, s: *s },
                FamilyArg::GridSlice => Family::GridSlice { rows: *rows, cols: *cols },
                FamilyArg::RandomBranchDecomposition => Family::RandomBranchDecomposition { n: *n },
            };
            let inst = corpus::generate(fam, &mut corpus::rng(cli.seed))?;
            let mut files = vec!["g.gr"];
            write(&output.join("g.gr"), &io::emit_graph(&inst.graph))?;
            if let Some(td) = &inst.td {
                write(&output.join("g.td"), &io::emit_td(td, inst.graph.n()))?;
                files.push("g.td");
            }
            if let Some(bd) = &inst.bd {
                write(&output.join("g.bd"), &io::emit_bd(bd))?;
                files.push("g.bd");
            }
            if let Some((host, map, host_td)) = &inst.host {
                write(&output.join("host.gr"), &io::emit_graph(host))?;
                write(&output.join("host.td"), &io::emit_td(host_td, host.n()))?;
                write(&output.join("map.map"), &io::emit_map(map))?;
                files.extend(["host.gr", "host.td", "map.map"]);
            }
            let mut r = Report::new("gen");
            r.value("family", format!("{family:?}"))
                .value("seed", cli.seed)
                .value("n", inst.graph.n())
                .value("m", inst.graph.m())
                .value("files", files);
            if let FamilyArg::SubdividedKTree = family {
                r.value("c", *s + 1);
            }
            r
        }
    };
    if report.inputs_digest.is_none() {
        report.inputs_digest = inputs.digest();
    }
    Ok(report)
}

fn describe_centred(r: &mut Report, c: &Centred) {
    match c {
        Centred::Yes(parts) => {
            r.value("parts", parts.iter().map(|p| one_based(p)).collect::<Vec<_>>());
        }
        Centred::No { min_parts } => {
            r.value("min_parts", min_parts);
        }
        Centred::Unknown { greedy_parts } => {
            r.value("greedy_parts", greedy_parts);
        }
    }
}
