#include "domset/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace domset {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

// Non-blank lines, split on whitespace. Text after '#' is ignored.
std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::Parse, source + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& tok, const std::string& source, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = first + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(source, line, "'" + tok + "' is not a number");
  if (!std::isfinite(v)) fail(source, line, "'" + tok + "' is not finite");
  return v;
}

Index to_index(const std::string& tok, const std::string& source, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail(source, line, "'" + tok + "' is not an integer");
  return static_cast<Index>(v);
}

void need_lines(const std::vector<Line>& lines, const std::string& source) {
  if (lines.empty()) throw Error(ErrorCode::Parse, source + ": file is empty");
}

}  // namespace

Eigen::MatrixXd parse_dense_matrix(const std::string& text, const std::string& source) {
  const auto lines = tokenize(text);
  need_lines(lines, source);
  const Line& head = lines.front();
  if (head.tokens.size() != 1) fail(source, head.number, "expected the matrix size n");
  const Index n = to_index(head.tokens[0], source, head.number);
  if (n < 1) fail(source, head.number, "matrix size must be at least 1");
  if (static_cast<Index>(lines.size()) - 1 != n)
    fail(source, lines.back().number,
         "expected " + std::to_string(n) + " rows, found " + std::to_string(lines.size() - 1));
  Eigen::MatrixXd M(n, n);
  for (Index r = 0; r < n; ++r) {
    const Line& l = lines[static_cast<std::size_t>(r) + 1];
    if (static_cast<Index>(l.tokens.size()) != n)
      fail(source, l.number, "row " + std::to_string(r) + " has " +
                                 std::to_string(l.tokens.size()) + " entries, expected " +
                                 std::to_string(n));
    for (Index c = 0; c < n; ++c) M(r, c) = to_double(l.tokens[c], source, l.number);
  }
  return M;
}

AffinityMatrix parse_edge_list(const std::string& text, const std::string& source,
                               std::optional<Index> n) {
  const auto lines = tokenize(text);
  std::vector<AffinityMatrix::Edge> edges;
  std::set<std::pair<Index, Index>> seen;
  Index top = -1;
  for (const Line& l : lines) {
    if (l.tokens.size() != 3) fail(source, l.number, "expected 'i j w'");
    const Index i = to_index(l.tokens[0], source, l.number);
    const Index j = to_index(l.tokens[1], source, l.number);
    const double w = to_double(l.tokens[2], source, l.number);
    if (i < 0 || j < 0) fail(source, l.number, "vertex ids must be nonnegative");
    if (i == j) fail(source, l.number, "self loop on vertex " + std::to_string(i));
    if (w < 0.0) fail(source, l.number, "negative weight");
    if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
      fail(source, l.number, "duplicate edge " + std::to_string(i) + " " + std::to_string(j));
    top = std::max({top, i, j});
    edges.push_back({i, j, w});
  }
  const Index size = n ? *n : top + 1;
  if (top >= size) throw Error(ErrorCode::Parse, source + ": vertex id exceeds the vertex count");
  if (size < 1) throw Error(ErrorCode::Parse, source + ": no edges");
  return AffinityMatrix::from_edges(size, edges);
}

PointCloud parse_point_cloud(const std::string& text, const std::string& source) {
  const auto lines = tokenize(text);
  need_lines(lines, source);
  const Line& head = lines.front();
  if (head.tokens.size() != 2) fail(source, head.number, "expected header 'n d'");
  const Index n = to_index(head.tokens[0], source, head.number);
  const Index d = to_index(head.tokens[1], source, head.number);
  if (n < 1 || d < 1) fail(source, head.number, "n and d must be positive");
  if (static_cast<Index>(lines.size()) - 1 != n)
    fail(source, lines.back().number,
         "expected " + std::to_string(n) + " points, found " + std::to_string(lines.size() - 1));
  PointCloud pc;
  pc.points.resize(n, d);
  std::vector<Index> labels;
  Index labeled = 0;
  for (Index r = 0; r < n; ++r) {
    const Line& l = lines[static_cast<std::size_t>(r) + 1];
    const auto count = static_cast<Index>(l.tokens.size());
    if (count != d && count != d + 1)
      fail(source, l.number, "expected " + std::to_string(d) + " coordinates and an optional label");
    for (Index c = 0; c < d; ++c) pc.points(r, c) = to_double(l.tokens[c], source, l.number);
    if (count == d + 1) {
      const std::string& tok = l.tokens[d];
      if (tok == "OUT") {
        labels.push_back(-1);
      } else if (tok.size() > 1 && tok[0] == 'C') {
        const Index k = to_index(tok.substr(1), source, l.number);
        if (k < 0) fail(source, l.number, "cluster label must be nonnegative");
        labels.push_back(k);
      } else {
        fail(source, l.number, "label '" + tok + "' is neither Ck nor OUT");
      }
      ++labeled;
    }
  }
  if (labeled == n) {
    pc.labels = std::move(labels);
  } else if (labeled != 0) {
    throw Error(ErrorCode::Parse, source + ": labels must be given for all points or none");
  }
  return pc;
}

std::vector<std::vector<Index>> parse_labelings(const std::string& text,
                                                const std::string& source) {
  const auto lines = tokenize(text);
  need_lines(lines, source);
  std::vector<std::vector<Index>> out;
  for (const Line& l : lines) {
    std::vector<Index> labels;
    for (const auto& t : l.tokens) labels.push_back(to_index(t, source, l.number));
    if (!out.empty() && labels.size() != out.front().size())
      fail(source, l.number, "labeling has " + std::to_string(labels.size()) +
                                 " entries, expected " + std::to_string(out.front().size()));
    out.push_back(std::move(labels));
  }
  return out;
}

std::vector<DescriptorRow> parse_descriptors(const std::string& text, const std::string& source) {
  std::vector<DescriptorRow> rows;
  for (const Line& l : tokenize(text)) {
    if (l.tokens.size() < 2) fail(source, l.number, "expected an id followed by values");
    DescriptorRow row{l.tokens[0], {}};
    for (std::size_t k = 1; k < l.tokens.size(); ++k)
      row.values.push_back(to_double(l.tokens[k], source, l.number));
    if (!rows.empty() && row.values.size() != rows.front().values.size())
      fail(source, l.number, "descriptor length differs from the first line");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Index> parse_groups(const std::string& text, const std::string& source) {
  std::vector<std::pair<Index, Index>> pairs;
  Index top = -1;
  for (const Line& l : tokenize(text)) {
    if (l.tokens.size() != 2) fail(source, l.number, "expected 'entity_id group_id'");
    const Index e = to_index(l.tokens[0], source, l.number);
    const Index g = to_index(l.tokens[1], source, l.number);
    if (e < 0 || g < 0) fail(source, l.number, "ids must be nonnegative");
    pairs.emplace_back(e, g);
    top = std::max(top, e);
  }
  std::vector<Index> group_of(static_cast<std::size_t>(top + 1), -1);
  for (const auto& [e, g] : pairs) {
    if (group_of[e] >= 0)
      throw Error(ErrorCode::Parse, source + ": entity " + std::to_string(e) + " listed twice");
    group_of[e] = g;
  }
  for (std::size_t e = 0; e < group_of.size(); ++e)
    if (group_of[e] < 0)
      throw Error(ErrorCode::Parse, source + ": entity " + std::to_string(e) + " has no group");
  return group_of;
}

InputKind detect_input_kind(const std::string& text) {
  const auto lines = tokenize(text);
  if (lines.empty()) return InputKind::DenseMatrix;
  switch (lines.front().tokens.size()) {
    case 2:
      return InputKind::PointCloud;
    case 3:
      return InputKind::EdgeList;
    default:
      return InputKind::DenseMatrix;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace domset
