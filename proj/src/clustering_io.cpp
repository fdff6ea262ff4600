#include "stoc/clustering_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "stoc/error.hpp"

namespace stoc {

void write_clustering(const AttributedGraph& g, const Clustering& clustering, std::ostream& out) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.label(v) << '\t' << clustering.assignment.at(v) << '\n';
  }
}

Clustering read_clustering(const AttributedGraph& g, std::istream& in, const std::string& source) {
  constexpr ClusterId kMissing = static_cast<ClusterId>(-1);
  std::vector<ClusterId> assignment(g.node_count(), kMissing);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string id;
    std::string cluster;
    if (!(fields >> id >> cluster)) throw DataError(source, line_no, "expected '<id>\\t<cluster>'");
    const auto v = g.find(id);
    if (!v) throw DataError(source, line_no, "unknown node id '" + id + "'");
    ClusterId c = 0;
    const auto res = std::from_chars(cluster.data(), cluster.data() + cluster.size(), c);
    if (res.ec != std::errc() || res.ptr != cluster.data() + cluster.size() || c == kMissing) {
      throw DataError(source, line_no, "invalid cluster id '" + cluster + "'");
    }
    if (assignment[*v] != kMissing) throw DataError(source, line_no, "node '" + id + "' listed twice");
    assignment[*v] = c;
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (assignment[v] == kMissing) {
      throw DataError(source, 0, "node '" + g.label(v) + "' has no cluster");
    }
  }
  try {
    return Clustering::from_assignment(std::move(assignment));
  } catch (const std::invalid_argument& e) {
    throw DataError(source, 0, e.what());
  }
}

}  // namespace stoc
