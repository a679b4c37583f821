#include "domset/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include "domset/random.hpp"

namespace domset {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_lengths(const std::vector<Index>& a, const std::vector<Index>& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::LengthMismatch, "label vectors differ in length (" +
                                               std::to_string(a.size()) + " vs " +
                                               std::to_string(b.size()) + ")");
}

double entropy(const std::map<Index, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts)
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  return h;
}

}  // namespace

LabeledDataset gen_synthetic(const GenParams& p) {
  if (p.k < 0 || p.m < 0 || p.l < 0 || p.d < 1 || p.sigma < 0.0)
    throw Error(ErrorCode::InvalidArgument, "generator parameters out of range");
  Rng centers(p.seed, Stream::Centers);
  Rng members(p.seed, Stream::Members);
  Rng outliers(p.seed, Stream::Outliers);
  const Index n = p.k * p.m + p.l;
  LabeledDataset ds;
  ds.params = p;
  ds.points.resize(n, p.d);
  ds.labels.resize(static_cast<std::size_t>(n));
  Index row = 0;
  for (Index c = 0; c < p.k; ++c) {
    Eigen::RowVectorXd center(p.d);
    for (Index j = 0; j < p.d; ++j) center(j) = centers.uniform();
    for (Index i = 0; i < p.m; ++i, ++row) {
      for (Index j = 0; j < p.d; ++j) ds.points(row, j) = center(j) + p.sigma * members.normal();
      ds.labels[row] = c;
    }
  }
  for (Index i = 0; i < p.l; ++i, ++row) {
    for (Index j = 0; j < p.d; ++j) ds.points(row, j) = outliers.uniform();
    ds.labels[row] = kOutlierLabel;
  }
  return ds;
}

double jaccard(const IndexSet& predicted, const IndexSet& truth) {
  const Index uni = predicted.united(truth).size();
  if (uni == 0) return 1.0;
  return static_cast<double>(predicted.intersected(truth).size()) / static_cast<double>(uni);
}

double v_measure(const std::vector<Index>& predicted, const std::vector<Index>& truth) {
  check_lengths(predicted, truth);
  const double n = static_cast<double>(truth.size());
  if (truth.empty()) return 1.0;
  std::map<Index, double> pc, tc;
  std::map<std::pair<Index, Index>, double> joint;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    pc[predicted[i]] += 1.0;
    tc[truth[i]] += 1.0;
    joint[{truth[i], predicted[i]}] += 1.0;
  }
  const double h_c = entropy(tc, n);
  const double h_k = entropy(pc, n);
  double h_c_given_k = 0.0, h_k_given_c = 0.0;
  for (const auto& [key, c] : joint) {
    h_c_given_k -= (c / n) * std::log(c / pc[key.second]);
    h_k_given_c -= (c / n) * std::log(c / tc[key.first]);
  }
  const double hom = h_c > 0.0 ? 1.0 - h_c_given_k / h_c : 1.0;
  const double com = h_k > 0.0 ? 1.0 - h_k_given_c / h_k : 1.0;
  return hom + com > 0.0 ? 2.0 * hom * com / (hom + com) : 0.0;
}

double purity(const std::vector<Index>& predicted, const std::vector<Index>& truth) {
  check_lengths(predicted, truth);
  if (truth.empty()) return 1.0;
  std::map<Index, std::map<Index, Index>> table;
  for (std::size_t i = 0; i < truth.size(); ++i) ++table[predicted[i]][truth[i]];
  Index total = 0;
  for (const auto& [cluster, classes] : table) {
    Index best = 0;
    for (const auto& [label, c] : classes) best = std::max(best, c);
    total += best;
  }
  return static_cast<double>(total) / static_cast<double>(truth.size());
}

IndexSet outlier_indices(const std::vector<Index>& labels) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == kOutlierLabel) out.push_back(static_cast<Index>(i));
  return IndexSet(std::move(out));
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X) {
  const Eigen::VectorXd sq = X.rowwise().squaredNorm();
  Eigen::MatrixXd D = (-2.0 * X * X.transpose()).colwise() + sq;
  D.rowwise() += sq.transpose();
  D = D.cwiseMax(0.0);
  D = 0.5 * (D + D.transpose()).eval();
  D.diagonal().setZero();
  return D;
}

AffinityMatrix point_affinity(const Eigen::MatrixXd& X) {
  return gaussian_affinity(squared_distances(X));
}

ScodRun run_scod_once(const GenParams& p, const ScodConfig& cfg) {
  const auto t0 = Clock::now();
  const LabeledDataset ds = gen_synthetic(p);
  const AffinityMatrix A = point_affinity(ds.points);
  const ScodResult r = scod(A, cfg);
  const std::vector<Index> pred = r.labels(A.size());
  ScodRun run;
  run.params = p;
  run.jaccard = jaccard(r.outliers(), outlier_indices(ds.labels));
  run.v_measure = v_measure(pred, ds.labels);
  run.purity = purity(pred, ds.labels);
  run.clusters = static_cast<Index>(r.clusters.size());
  run.outliers = r.outliers().size();
  run.seconds = seconds_since(t0);
  return run;
}

std::vector<SweepPoint> scod_sweep_grid() {
  std::vector<SweepPoint> grid;
  for (Index l : {50, 100, 150, 200}) grid.push_back({"l", GenParams{10, 100, 32, 0.2, l, 0}});
  for (Index d : {2, 4, 8, 16, 32}) grid.push_back({"d", GenParams{10, 100, d, 0.1, 100, 0}});
  for (double s : {0.05, 0.1, 0.2, 0.4}) grid.push_back({"sigma", GenParams{10, 100, 32, s, 100, 0}});
  return grid;
}

std::vector<ScodRun> run_scod_suite(const std::vector<SweepPoint>& grid, Index runs,
                                    std::uint64_t seed, Index jobs, const ScodConfig& cfg) {
  const std::size_t total = grid.size() * static_cast<std::size_t>(std::max<Index>(runs, 0));
  std::vector<ScodRun> out(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      GenParams p = grid[t / runs].params;
      p.seed = seed + t % runs;
      out[t] = run_scod_once(p, cfg);
    }
  };
  const Index threads = std::clamp<Index>(jobs, 1, static_cast<Index>(std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (Index i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

AffinityMatrix clique_grid(Index cliques, Index clique_size) {
  const Index n = cliques * clique_size;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Index c = 0; c < cliques; ++c)
    M.block(c * clique_size, c * clique_size, clique_size, clique_size).setOnes();
  M.diagonal().setZero();
  return make_trusted_affinity(std::move(M));
}

std::vector<SpeedRow> run_fastcdsc_speed(const SpeedConfig& cfg) {
  const AffinityMatrix A = clique_grid(cfg.cliques, cfg.clique_size);
  Rng rng(cfg.seed, Stream::Queries);
  std::vector<SpeedRow> rows;
  for (Index q = 0; q < cfg.queries; ++q) {
    const Index clique = q % cfg.cliques;
    const Index v = clique * cfg.clique_size +
                    static_cast<Index>(rng.below(static_cast<std::uint64_t>(cfg.clique_size)));
    const IndexSet Q{v};
    SpeedRow row;
    row.query = v;

    auto t0 = Clock::now();
    AlphaPolicy eigen{AlphaMode::Eigen, 1.01, {}};
    const ConstrainedProgram prog(A, Q, choose_alpha(A, Q, eigen));
    const ConstrainedCluster full = solve_cdsc(prog);
    row.full_seconds = seconds_since(t0);

    t0 = Clock::now();
    const FastCdscResult fast = fast_cdsc(A, Q);
    row.fast_seconds = seconds_since(t0);

    for (Index s : fast.subgraph_sizes) row.max_subgraph = std::max(row.max_subgraph, s);
    row.same_support = full.support == fast.cluster.support;
    row.support_size = fast.cluster.support.size();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace domset
