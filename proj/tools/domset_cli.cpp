#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "domset/affinity.hpp"
#include "domset/bench.hpp"
#include "domset/cdsc.hpp"
#include "domset/dsets.hpp"
#include "domset/io.hpp"
#include "domset/scod.hpp"

using namespace domset;

namespace {

// Primary output is held back until the command succeeds.
std::ostringstream out;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join(const IndexSet& s) {
  std::string out;
  for (Index v : s) out += (out.empty() ? "" : ",") + std::to_string(v);
  return out.empty() ? "-" : out;
}

class Timer {
 public:
  explicit Timer(std::string phase) : phase_(std::move(phase)) {}
  ~Timer() {
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::cerr << "# time " << phase_ << " " << num(s) << "s\n";
  }

 private:
  std::string phase_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Input {
  std::string text;
  std::string path;
  AffinityMatrix A;
  std::optional<std::vector<Index>> labels;
};

Input load(const std::string& path, bool symmetrize) {
  Timer t("parse");
  Input in;
  in.path = path;
  in.text = read_file(path);
  switch (detect_input_kind(in.text)) {
    case InputKind::DenseMatrix: {
      const Eigen::MatrixXd raw = parse_dense_matrix(in.text, path);
      in.A = build_affinity(raw, symmetrize ? BuildMode::Symmetrize : BuildMode::Strict).matrix;
      break;
    }
    case InputKind::EdgeList:
      in.A = parse_edge_list(in.text, path);
      break;
    case InputKind::PointCloud: {
      PointCloud pc = parse_point_cloud(in.text, path);
      in.A = point_affinity(pc.points);
      in.labels = std::move(pc.labels);
      break;
    }
  }
  return in;
}

void header(const std::string& command, const std::string& digest_source,
            const std::vector<std::pair<std::string, std::string>>& config) {
  out << "# command " << command << "\n";
  out << "# input-digest " << hex64(fnv1a64(digest_source)) << "\n";
  out << "# config";
  for (const auto& [k, v] : config) out << ' ' << k << '=' << v;
  out << "\n";
}

void print_labels(const std::vector<Index>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ' ' << labels[i] << "\n";
}

void print_clusters(const std::vector<Cluster>& clusters) {
  out << "# clusters " << clusters.size() << "\n";
  for (std::size_t c = 0; c < clusters.size(); ++c)
    out << "# cluster " << c << " size " << clusters[c].support.size() << " cohesiveness "
              << num(clusters[c].cohesiveness) << "\n";
}

void print_metrics(const std::vector<Index>& predicted, const std::vector<Index>& truth) {
  out << "# jaccard " << num(jaccard(outlier_indices(predicted), outlier_indices(truth)))
            << "\n";
  out << "# v-measure " << num(v_measure(predicted, truth)) << "\n";
  out << "# purity " << num(purity(predicted, truth)) << "\n";
}

IndexSet parse_constraints(const std::string& list, Index n) {
  std::vector<Index> ids;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty())
      throw Error(ErrorCode::Parse, "--constraints: '" + tok + "' is not an integer");
    if (v < 0 || v >= n)
      throw Error(ErrorCode::OutOfRange,
                  "--constraints: id " + tok + " outside [0, " + std::to_string(n) + ")");
    ids.push_back(static_cast<Index>(v));
  }
  if (ids.empty()) throw Error(ErrorCode::EmptySet, "--constraints is empty");
  return IndexSet(std::move(ids));
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConstraintUnsatisfied:
      return 4;
    case ErrorCode::Internal:
    case ErrorCode::NotDominant:
    case ErrorCode::NotOnSimplex:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::UnassignedVertex:
      return 3;
    default:
      return 2;
  }
}

struct SolverOpts {
  std::string solver = "inimdyn";
  double tolerance = SolverConfig{}.tolerance;
  Index max_iterations = SolverConfig{}.max_iterations;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--solver", solver, "replicator or inimdyn")
        ->check(CLI::IsMember({"replicator", "inimdyn"}));
    app->add_option("--tolerance", tolerance);
    app->add_option("--max-iterations", max_iterations);
    app->add_option("--seed", seed);
  }
  SolverConfig config() const {
    SolverConfig c;
    c.tolerance = tolerance;
    c.max_iterations = max_iterations;
    c.validate();
    return c;
  }
  void echo(std::vector<std::pair<std::string, std::string>>& cfg) const {
    cfg.emplace_back("solver", solver);
    cfg.emplace_back("tolerance", num(tolerance));
    cfg.emplace_back("max-iterations", std::to_string(max_iterations));
    cfg.emplace_back("seed", std::to_string(seed));
  }
};

int run_cluster(const std::string& path, const SolverOpts& so, const std::string& mode,
                Index min_size, bool symmetrize) {
  const Input in = load(path, symmetrize);
  std::vector<std::pair<std::string, std::string>> cfg{{"mode", mode}};
  so.echo(cfg);
  cfg.emplace_back("min-size", std::to_string(min_size));
  header("cluster", in.text, cfg);

  const Index n = in.A.size();
  std::vector<Index> labels(static_cast<std::size_t>(n), -1);
  std::vector<Cluster> clusters;
  if (mode == "peel") {
    Timer t("peel");
    PeelConfig pc;
    pc.extract.solver = parse_solver(so.solver);
    pc.extract.solver_cfg = so.config();
    pc.extract.seed = so.seed;
    pc.min_cluster_size = min_size;
    clusters = peel_off_enumerate(in.A, pc).clusters;
  } else {
    Timer t("enumerate");
    EnumerateConfig ec;
    ec.cdsc.solver = parse_solver(so.solver);
    ec.cdsc.solver_cfg = so.config();
    ec.cdsc.seed = so.seed;
    const auto found = enumerate_all_constrained(in.A, ec);
    const std::vector<Index> owner = resolve_overlaps(found);
    std::vector<std::vector<Index>> members(found.size());
    for (Index v = 0; v < n; ++v) members[static_cast<std::size_t>(owner[v])].push_back(v);
    for (std::size_t c = 0; c < found.size(); ++c) {
      if (members[c].empty() || static_cast<Index>(members[c].size()) < min_size) continue;
      const IndexSet s(std::move(members[c]));
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (Index v : s) x(v) = found[c].memberships[v];
      if (!(x.sum() > 0.0)) x = scatter(barycenter(s.size()).values(), s, n);
      SimplexVector xs = SimplexVector::normalized(x);
      const double coh = quadratic_value(in.A.values(), xs.values());
      clusters.push_back(Cluster{s, std::move(xs), coh});
    }
  }
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (Index v : clusters[c].support) labels[static_cast<std::size_t>(v)] = static_cast<Index>(c);
  print_labels(labels);
  print_clusters(clusters);
  Index unassigned = 0;
  for (Index l : labels) unassigned += l < 0;
  out << "# unassigned " << unassigned << "\n";
  if (in.labels) print_metrics(labels, *in.labels);
  return 0;
}

int run_cdsc(const std::string& path, const SolverOpts& so, const std::string& constraints,
             const std::string& alpha_arg, const std::string& bound, bool fast, bool symmetrize) {
  const Input in = load(path, symmetrize);
  const Index n = in.A.size();
  const IndexSet Q = parse_constraints(constraints, n);
  AlphaPolicy policy;
  policy.mode = bound == "eigen" ? AlphaMode::Eigen : AlphaMode::MaxDegree;
  if (alpha_arg != "auto") {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(alpha_arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != alpha_arg.size() || !(v >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "--alpha must be 'auto' or a nonnegative number");
    policy.fixed = v;
  }
  std::vector<std::pair<std::string, std::string>> cfg{
      {"constraints", join(Q)}, {"alpha", alpha_arg}, {"alpha-bound", bound},
      {"fast", fast ? "true" : "false"}};
  so.echo(cfg);
  header("cdsc", in.text, cfg);

  ConstrainedCluster result;
  std::vector<Index> sizes;
  if (fast) {
    Timer t("fast-cdsc");
    FastCdscConfig fc;
    fc.solver_cfg = so.config();
    fc.seed = so.seed;
    fc.alpha = policy;
    FastCdscResult r = fast_cdsc(in.A, Q, fc);
    result = std::move(r.cluster);
    sizes = std::move(r.subgraph_sizes);
  } else {
    Timer t("cdsc");
    const ConstrainedProgram prog(in.A, Q, choose_alpha(in.A, Q, policy));
    CdscConfig cc;
    cc.solver = parse_solver(so.solver);
    cc.solver_cfg = so.config();
    cc.seed = so.seed;
    result = solve_cdsc(prog, cc);
  }
  std::vector<Index> labels(static_cast<std::size_t>(n), -1);
  for (Index v : result.support) labels[static_cast<std::size_t>(v)] = 0;
  print_labels(labels);
  out << "# alpha " << num(result.alpha) << "\n";
  out << "# support " << join(result.support) << "\n";
  out << "# satisfied-constraints " << join(result.satisfied_constraints) << "\n";
  out << "# objective " << num(result.objective) << "\n";
  if (fast) {
    out << "# outer-iterations " << sizes.size() << "\n";
    out << "# subgraph-sizes";
    for (Index s : sizes) out << ' ' << s;
    out << "\n";
  }
  return 0;
}

int run_scod(const std::string& path, const SolverOpts& so, double fraction,
             const std::string& gate, bool symmetrize) {
  ScodConfig sc;
  sc.neighbor_fraction = fraction;
  sc.solver = parse_solver(so.solver);
  sc.solver_cfg = so.config();
  sc.seed = so.seed;
  sc.gate = parse_gate(gate);
  sc.validate();
  const Input in = load(path, symmetrize);
  std::vector<std::pair<std::string, std::string>> cfg{{"neighbor-fraction", num(fraction)},
                                                       {"gate", gate}};
  so.echo(cfg);
  header("scod", in.text, cfg);

  ScodResult r;
  {
    Timer t("scod");
    r = scod(in.A, sc);
  }
  const std::vector<Index> labels = r.labels(in.A.size());
  print_labels(labels);
  print_clusters(r.clusters);
  out << "# outlier-sets " << r.outlier_sets.size() << "\n";
  out << "# outliers " << r.outliers().size() << "\n";
  out << "# global-cohesiveness " << num(r.global_cohesiveness) << "\n";
  out << "# learned-global-cohesiveness " << num(r.learned_global_cohesiveness) << "\n";
  if (in.labels) print_metrics(labels, *in.labels);
  return 0;
}

int run_consensus(const std::string& path, const SolverOpts& so, Index min_size) {
  std::string text;
  std::vector<std::vector<Index>> ens;
  {
    Timer t("parse");
    text = read_file(path);
    ens = parse_labelings(text, path);
  }
  std::vector<std::pair<std::string, std::string>> cfg;
  so.echo(cfg);
  cfg.emplace_back("min-size", std::to_string(min_size));
  header("consensus", text, cfg);

  PeelConfig pc;
  pc.extract.solver = parse_solver(so.solver);
  pc.extract.solver_cfg = so.config();
  pc.extract.seed = so.seed;
  pc.min_cluster_size = min_size;
  PeelResult r;
  Index n = 0;
  {
    Timer t("consensus");
    const CoassociationMatrix c = coassociation(ens);
    n = c.values.size();
    r = consensus(c, pc);
  }
  std::vector<Index> labels(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < r.clusters.size(); ++c)
    for (Index v : r.clusters[c].support) labels[static_cast<std::size_t>(v)] = static_cast<Index>(c);
  print_labels(labels);
  print_clusters(r.clusters);
  out << "# ensemble-size " << ens.size() << "\n";
  return 0;
}

struct BenchOpts {
  std::string suite = "scod-synthetic";
  Index runs = 30;
  std::uint64_t seed = 1;
  Index jobs = 0;
  std::string sweep = "all";
  Index cliques = 20;
  Index clique_size = 100;
  Index queries = 100;
};

int run_bench(const BenchOpts& b) {
  if (b.runs < 0) throw Error(ErrorCode::InvalidArgument, "--runs must be >= 0");
  const Index jobs =
      b.jobs > 0 ? b.jobs : std::max<Index>(1, static_cast<Index>(std::thread::hardware_concurrency()));
  std::vector<std::pair<std::string, std::string>> cfg{{"suite", b.suite},
                                                       {"seed", std::to_string(b.seed)}};

  if (b.suite == "fastcdsc-speed") {
    cfg.emplace_back("cliques", std::to_string(b.cliques));
    cfg.emplace_back("clique-size", std::to_string(b.clique_size));
    cfg.emplace_back("queries", std::to_string(b.queries));
    header("bench", "fastcdsc-speed", cfg);
    const auto rows = run_fastcdsc_speed({b.cliques, b.clique_size, b.queries, b.seed});
    // Wall times are not reproducible, so they go to the diagnostic stream.
    out << "query support_size max_subgraph same_support\n";
    std::cerr << "query full_seconds fast_seconds ratio\n";
    double worst = 0.0;
    bool first = true;
    for (const auto& r : rows) {
      out << r.query << ' ' << r.support_size << ' ' << r.max_subgraph << ' '
                << (r.same_support ? 1 : 0) << "\n";
      const double ratio = r.full_seconds / std::max(r.fast_seconds, 1e-12);
      std::cerr << r.query << ' ' << num(r.full_seconds) << ' ' << num(r.fast_seconds) << ' '
                << num(ratio) << "\n";
      if (first || ratio < worst) worst = ratio;
      first = false;
    }
    out << "# queries " << rows.size() << "\n";
    if (!rows.empty()) std::cerr << "# min-ratio " << num(worst) << "\n";
    return 0;
  }

  std::vector<SweepPoint> grid;
  for (const auto& p : scod_sweep_grid())
    if (b.sweep == "all" || b.sweep == p.sweep) grid.push_back(p);
  cfg.emplace_back("runs", std::to_string(b.runs));
  cfg.emplace_back("sweep", b.sweep);
  header("bench", "scod-synthetic", cfg);
  std::vector<ScodRun> runs;
  {
    Timer t("bench");
    runs = run_scod_suite(grid, b.runs, b.seed, jobs);
  }
  out << "sweep k m d sigma l seed jaccard v_measure purity clusters outliers\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> jac, vm, pur;
    for (Index r = 0; r < b.runs; ++r) {
      const ScodRun& run = runs[g * static_cast<std::size_t>(b.runs) + static_cast<std::size_t>(r)];
      const GenParams& p = run.params;
      out << grid[g].sweep << ' ' << p.k << ' ' << p.m << ' ' << p.d << ' ' << num(p.sigma)
                << ' ' << p.l << ' ' << p.seed << ' ' << num(run.jaccard) << ' '
                << num(run.v_measure) << ' ' << num(run.purity) << ' ' << run.clusters << ' '
                << run.outliers << "\n";
      jac.push_back(run.jaccard);
      vm.push_back(run.v_measure);
      pur.push_back(run.purity);
    }
    if (b.runs == 0) continue;
    const GenParams& p = grid[g].params;
    out << "# median " << grid[g].sweep << " d=" << p.d << " sigma=" << num(p.sigma)
              << " l=" << p.l << " jaccard " << num(median(jac)) << " v_measure "
              << num(median(vm)) << " purity " << num(median(pur)) << "\n";
  }
  out << "# runs " << runs.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dominant set clustering, constrained queries and outlier detection"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file with [subcommand] sections")->envname("DOMSET_CONFIG");

  std::string input;
  bool symmetrize = false;
  SolverOpts so;

  auto* cluster = app.add_subcommand("cluster", "Enumerate dominant sets");
  std::string mode = "peel";
  Index min_size = 2;
  cluster->add_option("input", input, "dense matrix, edge list or point cloud")->required();
  cluster->add_option("--mode", mode)->check(CLI::IsMember({"peel", "constrained"}));
  cluster->add_option("--min-size", min_size)->check(CLI::NonNegativeNumber);
  cluster->add_flag("--symmetrize", symmetrize, "repair asymmetric or negative dense input");
  so.attach(cluster);

  auto* cdsc = app.add_subcommand("cdsc", "Constrained dominant set for a query");
  std::string constraints, alpha = "auto", bound = "max-degree";
  bool fast = false;
  cdsc->add_option("input", input)->required();
  cdsc->add_option("--constraints", constraints, "comma separated vertex ids")->required();
  cdsc->add_option("--alpha", alpha, "auto or a value");
  cdsc->add_option("--alpha-bound", bound)->check(CLI::IsMember({"eigen", "max-degree"}));
  cdsc->add_flag("--fast", fast, "localized solver; prints working subgraph sizes");
  cdsc->add_flag("--symmetrize", symmetrize);
  so.attach(cdsc);

  auto* scod_cmd = app.add_subcommand("scod", "Clusters and outliers");
  double fraction = ScodConfig{}.neighbor_fraction;
  std::string gate = "per-matrix";
  scod_cmd->add_option("input", input)->required();
  scod_cmd->add_option("--neighbor-fraction", fraction);
  scod_cmd->add_option("--gate", gate)->check(CLI::IsMember({"per-matrix", "literal"}));
  scod_cmd->add_flag("--symmetrize", symmetrize);
  so.attach(scod_cmd);

  auto* cons = app.add_subcommand("consensus", "Consensus of several labelings");
  cons->add_option("input", input, "one labeling per line")->required();
  cons->add_option("--min-size", min_size)->check(CLI::NonNegativeNumber);
  so.attach(cons);

  auto* bench = app.add_subcommand("bench", "Synthetic benchmarks");
  BenchOpts bo;
  bench->add_option("--suite", bo.suite)->check(CLI::IsMember({"scod-synthetic", "fastcdsc-speed"}));
  bench->add_option("--runs", bo.runs);
  bench->add_option("--seed", bo.seed);
  bench->add_option("--jobs", bo.jobs, "0 uses every core");
  bench->add_option("--sweep", bo.sweep)->check(CLI::IsMember({"all", "l", "d", "sigma"}));
  bench->add_option("--cliques", bo.cliques);
  bench->add_option("--clique-size", bo.clique_size);
  bench->add_option("--queries", bo.queries);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  int rc = 0;
  try {
    if (*cluster) rc = run_cluster(input, so, mode, min_size, symmetrize);
    if (*cdsc) rc = run_cdsc(input, so, constraints, alpha, bound, fast, symmetrize);
    if (*scod_cmd) rc = run_scod(input, so, fraction, gate, symmetrize);
    if (*cons) rc = run_consensus(input, so, min_size);
    if (*bench) rc = run_bench(bo);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  std::cout << out.str();
  return rc;
}
