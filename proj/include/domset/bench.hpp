#ifndef DOMSET_BENCH_HPP
#define DOMSET_BENCH_HPP

#include <cstdint>
#include <vector>

#include "domset/cdsc.hpp"
#include "domset/core.hpp"
#include "domset/scod.hpp"

namespace domset {

inline constexpr Index kOutlierLabel = -1;

struct GenParams {
  Index k = 10;
  Index m = 100;
  Index d = 32;
  double sigma = 0.2;
  Index l = 100;
  std::uint64_t seed = 1;
};

struct LabeledDataset {
  /// One point per row.
  Eigen::MatrixXd points;
  /// Cluster id, or kOutlierLabel.
  std::vector<Index> labels;
  GenParams params;
};

/// k uniform centers in [0,1]^d with m Gaussian members each, then l uniform outliers.
LabeledDataset gen_synthetic(const GenParams& p);

/// |O n O*| / |O u O*|; 1 when both are empty.
double jaccard(const IndexSet& predicted, const IndexSet& truth);
double v_measure(const std::vector<Index>& predicted, const std::vector<Index>& truth);
/// Every distinct predicted label (outliers included) counts as one cluster.
double purity(const std::vector<Index>& predicted, const std::vector<Index>& truth);

IndexSet outlier_indices(const std::vector<Index>& labels);

/// Pairwise squared Euclidean distances between rows.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X);

/// Gaussian affinity used by the harness: squared distances, sigma = their median.
AffinityMatrix point_affinity(const Eigen::MatrixXd& X);

struct ScodRun {
  GenParams params;
  double jaccard = 0.0;
  double v_measure = 0.0;
  double purity = 0.0;
  Index clusters = 0;
  Index outliers = 0;
  double seconds = 0.0;
};

ScodRun run_scod_once(const GenParams& p, const ScodConfig& cfg = {});

struct SweepPoint {
  const char* sweep;
  GenParams params;
};

/// The l, d and sigma sweeps at full scale.
std::vector<SweepPoint> scod_sweep_grid();

/// Runs `runs` seeds per grid point on up to `jobs` threads. Results are in
/// grid order, then seed order, independent of `jobs`.
std::vector<ScodRun> run_scod_suite(const std::vector<SweepPoint>& grid, Index runs,
                                    std::uint64_t seed, Index jobs, const ScodConfig& cfg = {});

double median(std::vector<double> v);

/// Disjoint cliques with unit weights inside each clique.
AffinityMatrix clique_grid(Index cliques, Index clique_size);

struct SpeedRow {
  Index query = 0;
  double full_seconds = 0.0;
  double fast_seconds = 0.0;
  Index max_subgraph = 0;
  bool same_support = false;
  Index support_size = 0;
};

struct SpeedConfig {
  Index cliques = 20;
  Index clique_size = 100;
  Index queries = 100;
  std::uint64_t seed = 1;
};

/// Full solve uses the eigenvalue bound and InImDyn on the whole graph; the
/// fast solve uses fast_cdsc with its default max-degree bound.
std::vector<SpeedRow> run_fastcdsc_speed(const SpeedConfig& cfg);

}  // namespace domset

#endif  // DOMSET_BENCH_HPP
