#ifndef DOMSET_IO_HPP
#define DOMSET_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domset/core.hpp"

namespace domset {

/// Parse functions take the file contents plus a name used in messages, and
/// throw Error(Parse) with the offending line number.

/// `n`, then n rows of n numbers.
Eigen::MatrixXd parse_dense_matrix(const std::string& text, const std::string& source = "<input>");

/// Lines `i j w`, 0-based and undirected. The vertex count is one more than
/// the largest id unless n is given.
AffinityMatrix parse_edge_list(const std::string& text, const std::string& source = "<input>",
                               std::optional<Index> n = {});

struct PointCloud {
  Eigen::MatrixXd points;
  /// Present when every row carries a `Ck` or `OUT` token (OUT maps to -1).
  std::optional<std::vector<Index>> labels;
};

/// Header `n d`, then n lines of d coordinates with an optional label token.
PointCloud parse_point_cloud(const std::string& text, const std::string& source = "<input>");

/// One whitespace-separated integer label vector per line.
std::vector<std::vector<Index>> parse_labelings(const std::string& text,
                                                const std::string& source = "<input>");

struct DescriptorRow {
  std::string id;
  std::vector<double> values;
};

/// Lines `id v1 ... vd`.
std::vector<DescriptorRow> parse_descriptors(const std::string& text,
                                             const std::string& source = "<input>");

/// Lines `entity_id group_id`; returns group_of indexed by entity.
std::vector<Index> parse_groups(const std::string& text, const std::string& source = "<input>");

enum class InputKind { DenseMatrix, PointCloud, EdgeList };

/// Looks at the first non-blank line: one token is a dense matrix, two a
/// point cloud, three an edge list.
InputKind detect_input_kind(const std::string& text);

std::string read_file(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace domset

#endif  // DOMSET_IO_HPP
