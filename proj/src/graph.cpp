#include "stoc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "stoc/error.hpp"

namespace stoc {

std::string_view to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::quantitative:
      return "quantitative";
    case AttributeKind::categorical:
      return "categorical";
    case AttributeKind::categorical_set:
      return "categorical-set";
  }
  return "unknown";
}

AttributeSchema::AttributeSchema(std::vector<AttributeDescriptor> descriptors) {
  std::stable_partition(descriptors.begin(), descriptors.end(), [](const auto& d) {
    return d.kind == AttributeKind::quantitative;
  });
  quantitative_ = static_cast<std::size_t>(
      std::count_if(descriptors.begin(), descriptors.end(),
                    [](const auto& d) { return d.kind == AttributeKind::quantitative; }));
  for (const auto& d : descriptors) {
    if (d.kind == AttributeKind::quantitative && d.min > d.max) {
      throw std::invalid_argument("attribute '" + d.name + "': min > max");
    }
  }
  descriptors_ = std::move(descriptors);
}

// ---------------------------------------------------------------------------
// AttributedGraph

AttributedGraph AttributedGraph::build(const GraphParts& parts, const BuildOptions& options) {
  AttributedGraph g;
  const std::size_t n = parts.node_ids.size();
  g.directed_ = parts.directed;
  g.labels_ = parts.node_ids;
  g.index_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    if (!g.index_.emplace(g.labels_[v], v).second) {
      throw DataError("", 0, "duplicate node id '" + g.labels_[v] + "'");
    }
  }

  // Canonical order: quantitative columns first.
  std::vector<const ColumnData*> ordered;
  for (const auto& c : parts.columns) {
    if (c.kind == AttributeKind::quantitative) ordered.push_back(&c);
  }
  for (const auto& c : parts.columns) {
    if (c.kind != AttributeKind::quantitative) ordered.push_back(&c);
  }

  std::vector<AttributeDescriptor> descriptors;
  g.attributes_.assign(n, SemanticVector{});
  for (const ColumnData* column : ordered) {
    AttributeDescriptor d;
    d.name = column->name;
    d.kind = column->kind;
    d.set_delimiter = column->set_delimiter;
    if (column->kind == AttributeKind::quantitative) {
      if (column->numbers.size() != n) {
        throw DataError("", 0, "column '" + column->name + "' has wrong length");
      }
      if (n > 0) {
        const auto [lo, hi] = std::minmax_element(column->numbers.begin(), column->numbers.end());
        d.min = *lo;
        d.max = *hi;
      }
      const double span = d.max - d.min;
      for (NodeId v = 0; v < n; ++v) {
        double x = column->numbers[v];
        if (options.normalize_quantitative) x = span > 0.0 ? (x - d.min) / span : 0.0;
        g.attributes_[v].quantitative.push_back(x);
      }
    } else {
      if (column->values.size() != n) {
        throw DataError("", 0, "column '" + column->name + "' has wrong length");
      }
      std::unordered_map<std::string, std::uint32_t> dictionary;
      for (NodeId v = 0; v < n; ++v) {
        std::vector<std::uint32_t> ids;
        for (const auto& value : column->values[v]) {
          auto [it, inserted] =
              dictionary.emplace(value, static_cast<std::uint32_t>(d.values.size()));
          if (inserted) d.values.push_back(value);
          ids.push_back(it->second);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        g.attributes_[v].categorical.push_back(std::move(ids));
      }
    }
    descriptors.push_back(std::move(d));
  }
  g.schema_ = AttributeSchema(std::move(descriptors));

  // CSR adjacency, deduplicated, self-loops dropped.
  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(parts.edges.size() * (parts.directed ? 1 : 2));
  for (auto [a, b] : parts.edges) {
    if (a >= n || b >= n) throw DataError("", 0, "edge endpoint out of range");
    if (a == b) continue;
    arcs.emplace_back(a, b);
    if (!parts.directed) arcs.emplace_back(b, a);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  g.offsets_.assign(n + 1, 0);
  for (auto [a, b] : arcs) ++g.offsets_[a + 1];
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.targets_.resize(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) g.targets_[i] = arcs[i].second;
  g.edge_count_ = parts.directed ? arcs.size() : arcs.size() / 2;
  return g;
}

std::span<const NodeId> AttributedGraph::neighbors(NodeId v) const {
  if (v >= node_count()) throw std::out_of_range("node index out of range");
  return std::span<const NodeId>(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

const SemanticVector& AttributedGraph::attributes(NodeId v) const {
  if (v >= node_count()) throw std::out_of_range("node index out of range");
  return attributes_[v];
}

std::optional<NodeId> AttributedGraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t AttributedGraph::topology_digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(node_count());
  mix(directed_ ? 1 : 0);
  for (auto o : offsets_) mix(o);
  for (auto t : targets_) mix(t);
  return h;
}

// ---------------------------------------------------------------------------
// ActiveView

ActiveView::ActiveView(const AttributedGraph& graph) : graph_(&graph) {
  const std::size_t n = graph.node_count();
  active_.resize(n);
  position_.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    active_[v] = v;
    position_[v] = v;
  }
}

void ActiveView::deactivate(NodeId v) {
  if (v >= position_.size()) throw std::out_of_range("node index out of range");
  const std::size_t pos = position_[v];
  if (pos == kInactive) return;
  const NodeId last = active_.back();
  active_[pos] = last;
  position_[last] = pos;
  active_.pop_back();
  position_[v] = kInactive;
}

// ---------------------------------------------------------------------------
// Neighborhoods

std::vector<NodeId> neighbors(const AttributedGraph& g, NodeId v, const ActiveView* view) {
  if (view != nullptr && !view->active(v)) throw std::invalid_argument("node is not active");
  std::vector<NodeId> out;
  for (NodeId u : g.neighbors(v)) {
    if (view == nullptr || view->active(u)) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> exact_l_neighborhood(const AttributedGraph& g, NodeId v, int radius) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  if (v >= g.node_count()) throw std::out_of_range("node index out of range");
  BallScratch scratch(g.node_count());
  std::vector<NodeId> ball;
  scratch.visit(g, v, radius, [&](NodeId u) { ball.push_back(u); });
  std::sort(ball.begin(), ball.end());
  return ball;
}

BallScratch::BallScratch(std::size_t node_count) : stamp_(node_count, 0) {}

void BallScratch::next_epoch() {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

struct SchemaEntry {
  std::string name;
  AttributeKind kind;
  char set_delimiter;
  std::size_t line;
};

std::vector<SchemaEntry> parse_schema(std::istream& in, const std::string& source) {
  std::vector<SchemaEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() != 2) {
      throw DataError(source, line_no, "expected '<column-name> <kind>'");
    }
    SchemaEntry e{std::string(tokens[0]), AttributeKind::quantitative, '\0', line_no};
    const auto kind = tokens[1];
    if (kind == "quantitative") {
      e.kind = AttributeKind::quantitative;
    } else if (kind == "categorical") {
      e.kind = AttributeKind::categorical;
    } else if (kind.starts_with("categorical-set:") && kind.size() == 17) {
      e.kind = AttributeKind::categorical_set;
      e.set_delimiter = kind.back();
    } else {
      throw DataError(source, line_no, "unknown attribute kind '" + std::string(kind) + "'");
    }
    for (const auto& prev : out) {
      if (prev.name == e.name) {
        throw DataError(source, line_no, "attribute '" + e.name + "' declared twice");
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

GraphParts parse_graph(std::istream& edges, std::istream& attrs, std::istream& schema_in,
                       const LoadOptions& options) {
  GraphParts parts;
  parts.directed = options.directed;
  const auto schema = parse_schema(schema_in, options.schema_source);

  // Attribute table.
  std::string line;
  std::size_t line_no = 0;
  char delim = '\t';
  std::vector<int> column_of_field;  // header field -> index into parts.columns, -1 for id
  bool have_header = false;
  std::unordered_map<std::string, NodeId> index;
  while (std::getline(attrs, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!have_header) {
      have_header = true;
      if (line.find('\t') != std::string::npos) {
        delim = '\t';
      } else if (line.find(',') != std::string::npos) {
        delim = ',';
      } else if (line.find(';') != std::string::npos) {
        delim = ';';
      }
      const auto header = split(line, delim);
      column_of_field.assign(header.size(), -1);
      for (std::size_t f = 1; f < header.size(); ++f) {
        const auto name = trim(header[f]);
        const auto it = std::find_if(schema.begin(), schema.end(),
                                     [&](const auto& e) { return e.name == name; });
        if (it == schema.end()) {
          throw DataError(options.attr_source, line_no,
                          "column '" + std::string(name) + "' is not declared in the schema");
        }
        for (const auto& c : parts.columns) {
          if (c.name == name) {
            throw DataError(options.attr_source, line_no,
                            "column '" + std::string(name) + "' appears twice");
          }
        }
        column_of_field[f] = static_cast<int>(parts.columns.size());
        ColumnData c;
        c.name = it->name;
        c.kind = it->kind;
        c.set_delimiter = it->set_delimiter;
        parts.columns.push_back(std::move(c));
      }
      for (const auto& e : schema) {
        const bool present = std::any_of(parts.columns.begin(), parts.columns.end(),
                                         [&](const auto& c) { return c.name == e.name; });
        if (!present) {
          throw DataError(options.attr_source, line_no,
                          "schema attribute '" + e.name + "' has no column");
        }
      }
      continue;
    }
    const auto fields = split(line, delim);
    if (fields.size() != column_of_field.size()) {
      throw DataError(options.attr_source, line_no,
                      "expected " + std::to_string(column_of_field.size()) + " fields, found " +
                          std::to_string(fields.size()));
    }
    const std::string id(trim(fields[0]));
    if (id.empty()) throw DataError(options.attr_source, line_no, "empty node id");
    if (!index.emplace(id, static_cast<NodeId>(parts.node_ids.size())).second) {
      throw DataError(options.attr_source, line_no, "duplicate node id '" + id + "'");
    }
    parts.node_ids.push_back(id);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      ColumnData& c = parts.columns[static_cast<std::size_t>(column_of_field[f])];
      const auto cell = trim(fields[f]);
      switch (c.kind) {
        case AttributeKind::quantitative: {
          double x = 0.0;
          const auto* end = cell.data() + cell.size();
          const auto res = std::from_chars(cell.data(), end, x);
          if (cell.empty() || res.ec != std::errc() || res.ptr != end) {
            throw DataError(options.attr_source, line_no,
                            "non-numeric value '" + std::string(cell) + "' in quantitative column '" +
                                c.name + "'");
          }
          c.numbers.push_back(x);
          break;
        }
        case AttributeKind::categorical: {
          std::vector<std::string> set;
          if (!cell.empty()) set.emplace_back(cell);
          c.values.push_back(std::move(set));
          break;
        }
        case AttributeKind::categorical_set: {
          std::vector<std::string> set;
          if (!cell.empty()) {
            for (auto part : split(cell, c.set_delimiter)) {
              part = trim(part);
              if (part.empty()) continue;
              std::string value(part);
              if (std::find(set.begin(), set.end(), value) == set.end()) {
                set.push_back(std::move(value));
              }
            }
          }
          c.values.push_back(std::move(set));
          break;
        }
      }
    }
  }
  if (!have_header) {
    if (!schema.empty()) throw DataError(options.attr_source, 0, "missing header row");
  }

  // Edge list.
  line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() != 2) {
      throw DataError(options.edge_source, line_no, "expected two node tokens");
    }
    NodeId ends[2];
    for (int i = 0; i < 2; ++i) {
      const auto it = index.find(std::string(tokens[i]));
      if (it == index.end()) {
        throw DataError(options.edge_source, line_no,
                        "unknown node id '" + std::string(tokens[i]) + "'");
      }
      ends[i] = it->second;
    }
    parts.edges.emplace_back(ends[0], ends[1]);
  }
  return parts;
}

AttributedGraph load_graph(std::istream& edges, std::istream& attrs, std::istream& schema,
                           const LoadOptions& options) {
  return AttributedGraph::build(parse_graph(edges, attrs, schema, options), options.build);
}

AttributedGraph load_graph_files(const std::string& edge_path, const std::string& attr_path,
                                 const std::string& schema_path, const LoadOptions& options) {
  std::ifstream edges(edge_path);
  if (!edges) throw DataError(edge_path, 0, "cannot open file");
  std::ifstream attrs(attr_path);
  if (!attrs) throw DataError(attr_path, 0, "cannot open file");
  std::ifstream schema(schema_path);
  if (!schema) throw DataError(schema_path, 0, "cannot open file");
  LoadOptions named = options;
  named.edge_source = edge_path;
  named.attr_source = attr_path;
  named.schema_source = schema_path;
  return load_graph(edges, attrs, schema, named);
}

void write_graph(const GraphParts& parts, std::ostream& edges, std::ostream& attrs,
                 std::ostream& schema) {
  for (const auto& c : parts.columns) {
    schema << c.name << ' ';
    if (c.kind == AttributeKind::categorical_set) {
      schema << "categorical-set:" << c.set_delimiter;
    } else {
      schema << to_string(c.kind);
    }
    schema << '\n';
  }

  attrs << "id";
  for (const auto& c : parts.columns) attrs << '\t' << c.name;
  attrs << '\n';
  char buf[64];
  for (std::size_t v = 0; v < parts.node_ids.size(); ++v) {
    attrs << parts.node_ids[v];
    for (const auto& c : parts.columns) {
      attrs << '\t';
      if (c.kind == AttributeKind::quantitative) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), c.numbers[v]);
        attrs.write(buf, res.ptr - buf);
      } else {
        const auto& set = c.values[v];
        for (std::size_t i = 0; i < set.size(); ++i) {
          if (i > 0) attrs << c.set_delimiter;
          attrs << set[i];
        }
      }
    }
    attrs << '\n';
  }

  for (auto [a, b] : parts.edges) {
    edges << parts.node_ids[a] << ' ' << parts.node_ids[b] << '\n';
  }
}

}  // namespace stoc
