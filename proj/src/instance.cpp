#include "pcfp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pcfp {
namespace {

using nlohmann::json;

std::size_t find_in(const std::unordered_map<std::string, std::size_t>& ids,
                    std::string_view id) {
  auto it = ids.find(std::string(id));
  return it == ids.end() ? kNone : it->second;
}

template <typename T, typename Key>
void sort_by(std::vector<T>& items, Key key) {
  std::stable_sort(items.begin(), items.end(),
                   [&](const T& x, const T& y) { return key(x) < key(y); });
}

void sort_unique(std::vector<std::string>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

// Topological order of the pr-graph, or nullopt when it has a cycle or an
// edge with a dangling endpoint.
std::optional<std::vector<std::size_t>> topological_order(const PrGraph& g) {
  const std::size_t n = g.vertices.size();
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const PrEdge& e : g.edges) {
    std::size_t u = g.vertex_index(e.from);
    std::size_t v = g.vertex_index(e.to);
    if (u == kNone || v == kNone) return std::nullopt;
    out[u].push_back(v);
    ++indegree[v];
  }
  std::vector<std::size_t> order;
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    std::size_t u = ready.back();
    ready.pop_back();
    order.push_back(u);
    for (std::size_t v : out[u]) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

// Lines and columns are 1-based, counted in bytes.
std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + " is missing field '" + key + "'");
  }
  return *it;
}

std::string string_field(const json& obj, const char* key,
                         const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) {
    throw ParseError(where + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

double positive_field(const json& obj, const char* key, const std::string& where,
                      const std::string& id) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) {
    throw ParseError(where + "." + key + " must be a number (id '" + id + "')");
  }
  double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ParseError("nonpositive " + std::string(key) + " for '" + id + "'");
  }
  return x;
}

const json& array_field(const json& obj, const char* key,
                        const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw ParseError(where + "." + key + " must be an array");
  return v;
}

std::vector<std::string> id_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + " must be an array of ids");
  std::vector<std::string> ids;
  for (const json& x : v) {
    if (!x.is_string()) throw ParseError(where + " must contain only strings");
    ids.push_back(x.get<std::string>());
  }
  return ids;
}

Request parse_request(const json& r, std::size_t pos,
                      const std::set<std::string>& node_ids,
                      const std::set<std::string>& edge_ids) {
  const std::string where = "requests[" + std::to_string(pos) + "]";
  Request req;
  req.id = string_field(r, "id", where);
  req.demand = positive_field(r, "demand", where, req.id);
  req.benefit = positive_field(r, "benefit", where, req.id);

  std::set<std::string> vertex_ids;
  for (const json& x : array_field(r, "pr_vertices", where)) {
    std::string id = string_field(x, "id", where + ".pr_vertices");
    vertex_ids.insert(id);
    req.graph.vertices.push_back(std::move(id));
  }
  std::set<std::string> pr_edge_ids;
  for (const json& y : array_field(r, "pr_edges", where)) {
    PrEdge e{string_field(y, "id", where + ".pr_edges"),
             string_field(y, "from", where + ".pr_edges"),
             string_field(y, "to", where + ".pr_edges")};
    for (const std::string* end : {&e.from, &e.to}) {
      if (!vertex_ids.count(*end)) {
        throw ParseError("pr-edge '" + e.id + "' of request '" + req.id +
                         "' references unknown pr-vertex '" + *end + "'");
      }
    }
    pr_edge_ids.insert(e.id);
    req.graph.edges.push_back(std::move(e));
  }
  req.graph.source = string_field(r, "source", where);
  req.graph.sink = string_field(r, "sink", where);
  for (const std::string* end : {&req.graph.source, &req.graph.sink}) {
    if (!vertex_ids.count(*end)) {
      throw ParseError("request '" + req.id +
                       "' references unknown pr-vertex '" + *end + "'");
    }
  }

  const json& an = field(r, "allowed_nodes", where);
  if (!an.is_object()) throw ParseError(where + ".allowed_nodes must be an object");
  for (const auto& [key, value] : an.items()) {
    if (!vertex_ids.count(key)) {
      throw ParseError("request '" + req.id +
                       "' allows nodes for unknown pr-vertex '" + key + "'");
    }
    auto ids = id_list(value, where + ".allowed_nodes." + key);
    for (const std::string& id : ids) {
      if (!node_ids.count(id)) {
        throw ParseError("request '" + req.id + "' references unknown node '" +
                         id + "'");
      }
    }
    req.allowed_nodes[key] = std::move(ids);
  }
  const json& ae = field(r, "allowed_edges", where);
  if (!ae.is_object()) throw ParseError(where + ".allowed_edges must be an object");
  for (const auto& [key, value] : ae.items()) {
    if (!pr_edge_ids.count(key)) {
      throw ParseError("request '" + req.id +
                       "' allows edges for unknown pr-edge '" + key + "'");
    }
    auto ids = id_list(value, where + ".allowed_edges." + key);
    for (const std::string& id : ids) {
      if (!edge_ids.count(id)) {
        throw ParseError("request '" + req.id + "' references unknown edge '" +
                         id + "'");
      }
    }
    req.allowed_edges[key] = std::move(ids);
  }
  return req;
}

}  // namespace

std::size_t PrGraph::vertex_index(std::string_view id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] == id) return i;
  }
  return kNone;
}

std::size_t PrGraph::edge_index(std::string_view id) const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].id == id) return i;
  }
  return kNone;
}

int pr_diameter(const PrGraph& g) {
  auto order = topological_order(g);
  if (!order) throw InvalidArgument("pr-graph not acyclic");
  const std::size_t s = g.vertex_index(g.source);
  const std::size_t t = g.vertex_index(g.sink);
  if (s == kNone || t == kNone) {
    throw InvalidArgument("pr-graph source or sink is not a pr-vertex");
  }
  // Longest path from s, -1 marks vertices not reachable from s.
  std::vector<int> longest(g.vertices.size(), -1);
  longest[s] = 0;
  std::vector<std::vector<std::size_t>> out(g.vertices.size());
  for (const PrEdge& e : g.edges) {
    out[g.vertex_index(e.from)].push_back(g.vertex_index(e.to));
  }
  for (std::size_t u : *order) {
    if (longest[u] < 0) continue;
    for (std::size_t v : out[u]) longest[v] = std::max(longest[v], longest[u] + 1);
  }
  if (longest[t] < 0) throw InvalidArgument("pr-graph sink unreachable from source");
  return longest[t];
}

DerivedScalars derive_scalars(const SubstrateNetwork& substrate,
                              const std::vector<Request>& requests) {
  DerivedScalars d;
  d.edge_count = substrate.edges.size();
  for (const SubstrateEdge& e : substrate.edges) {
    d.c_min = std::min(d.c_min, e.capacity);
  }
  d.c_min_all = d.c_min;
  for (const SubstrateNode& v : substrate.nodes) {
    d.c_min_all = std::min(d.c_min_all, v.capacity);
  }
  for (const Request& r : requests) {
    d.d_max = std::max(d.d_max, r.demand);
    d.b_max = std::max(d.b_max, r.benefit);
    try {
      d.delta_max = std::max(d.delta_max, pr_diameter(r.graph));
    } catch (const InvalidArgument&) {
      // Invalid pr-graphs are reported by validate_instance().
    }
  }
  return d;
}

Instance::Instance(SubstrateNetwork substrate, std::vector<Request> requests)
    : substrate_(std::move(substrate)), requests_(std::move(requests)) {
  sort_by(substrate_.nodes, [](const SubstrateNode& v) { return v.id; });
  sort_by(substrate_.edges, [](const SubstrateEdge& e) { return e.id; });
  sort_by(requests_, [](const Request& r) { return r.id; });
  for (Request& r : requests_) {
    std::sort(r.graph.vertices.begin(), r.graph.vertices.end());
    sort_by(r.graph.edges, [](const PrEdge& e) { return e.id; });
    for (auto& [key, ids] : r.allowed_nodes) sort_unique(ids);
    for (auto& [key, ids] : r.allowed_edges) sort_unique(ids);
  }
  for (std::size_t i = 0; i < substrate_.nodes.size(); ++i) {
    node_ids_.emplace(substrate_.nodes[i].id, i);
  }
  for (std::size_t i = 0; i < substrate_.edges.size(); ++i) {
    edge_ids_.emplace(substrate_.edges[i].id, i);
  }
  for (std::size_t i = 0; i < requests_.size(); ++i) {
    request_ids_.emplace(requests_[i].id, i);
  }
  scalars_ = derive_scalars(substrate_, requests_);
}

std::size_t Instance::node_index(std::string_view id) const {
  return find_in(node_ids_, id);
}

std::size_t Instance::edge_index(std::string_view id) const {
  return find_in(edge_ids_, id);
}

std::size_t Instance::request_index(std::string_view id) const {
  return find_in(request_ids_, id);
}

Instance Instance::with_capacities_scaled(double factor) const {
  SubstrateNetwork scaled = substrate_;
  for (SubstrateNode& v : scaled.nodes) {
    if (std::isfinite(v.capacity)) v.capacity *= factor;
  }
  for (SubstrateEdge& e : scaled.edges) {
    if (std::isfinite(e.capacity)) e.capacity *= factor;
  }
  return Instance(std::move(scaled), requests_);
}

bool operator==(const Instance& lhs, const Instance& rhs) {
  return lhs.substrate_ == rhs.substrate_ && lhs.requests_ == rhs.requests_ &&
         lhs.scalars_ == rhs.scalars_;
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto violation = [&](const std::string& subject, const std::string& message) {
    report.violations.push_back({subject, message});
  };
  const SubstrateNetwork& net = inst.substrate();

  std::set<std::string> seen;
  for (const SubstrateNode& v : net.nodes) {
    if (!seen.insert(v.id).second) violation(v.id, "duplicate node id");
    if (!(v.capacity > 0.0)) violation(v.id, "nonpositive node capacity");
  }
  seen.clear();
  for (const SubstrateEdge& e : net.edges) {
    if (!seen.insert(e.id).second) violation(e.id, "duplicate edge id");
    if (!(e.capacity > 0.0)) violation(e.id, "nonpositive edge capacity");
    for (const std::string* end : {&e.a, &e.b}) {
      if (inst.node_index(*end) == kNone) {
        violation(e.id, "edge references unknown node '" + *end + "'");
      }
    }
  }
  seen.clear();
  for (const Request& r : inst.requests()) {
    if (!seen.insert(r.id).second) violation(r.id, "duplicate request id");
    if (!(r.demand > 0.0) || !std::isfinite(r.demand)) {
      violation(r.id, "nonpositive demand");
    }
    if (!(r.benefit > 0.0) || !std::isfinite(r.benefit)) {
      violation(r.id, "nonpositive benefit");
    }
    const PrGraph& g = r.graph;
    std::set<std::string> ids;
    for (const std::string& x : g.vertices) {
      if (!ids.insert(x).second) violation(r.id, "duplicate pr-vertex '" + x + "'");
    }
    ids.clear();
    bool dangling = false;
    for (const PrEdge& y : g.edges) {
      if (!ids.insert(y.id).second) violation(r.id, "duplicate pr-edge '" + y.id + "'");
      if (g.vertex_index(y.from) == kNone || g.vertex_index(y.to) == kNone) {
        violation(r.id, "pr-edge '" + y.id + "' references unknown pr-vertex");
        dangling = true;
      }
    }
    const std::size_t s = g.vertex_index(g.source);
    const std::size_t t = g.vertex_index(g.sink);
    if (s == kNone) violation(r.id, "source '" + g.source + "' is not a pr-vertex");
    if (t == kNone) violation(r.id, "sink '" + g.sink + "' is not a pr-vertex");
    if (g.edges.empty()) violation(r.id, "pr-graph has no pr-edges");

    if (!dangling) {
      const std::size_t n = g.vertices.size();
      std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
      std::vector<std::vector<std::size_t>> out(n), in(n);
      for (const PrEdge& y : g.edges) {
        std::size_t u = g.vertex_index(y.from), v = g.vertex_index(y.to);
        ++outdeg[u];
        ++indeg[v];
        out[u].push_back(v);
        in[v].push_back(u);
      }
      if (!topological_order(g)) violation(r.id, "pr-graph not acyclic");
      std::vector<std::size_t> sources, sinks;
      for (std::size_t v = 0; v < n; ++v) {
        if (indeg[v] == 0) sources.push_back(v);
        if (outdeg[v] == 0) sinks.push_back(v);
      }
      if (sources.size() != 1 || (s != kNone && sources[0] != s)) {
        violation(r.id, "pr-graph must have exactly one in-degree-0 vertex, the source");
      }
      if (sinks.size() != 1 || (t != kNone && sinks[0] != t)) {
        violation(r.id, "pr-graph must have exactly one out-degree-0 vertex, the sink");
      }
      if (s != kNone && t != kNone) {
        auto reach = [n](std::size_t start,
                         const std::vector<std::vector<std::size_t>>& adj) {
          std::vector<char> seen_v(n, 0);
          std::vector<std::size_t> stack{start};
          seen_v[start] = 1;
          while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : adj[u]) {
              if (!seen_v[v]) {
                seen_v[v] = 1;
                stack.push_back(v);
              }
            }
          }
          return seen_v;
        };
        auto fwd = reach(s, out);
        auto bwd = reach(t, in);
        for (std::size_t v = 0; v < n; ++v) {
          if (!fwd[v] || !bwd[v]) {
            violation(r.id, "pr-vertex '" + g.vertices[v] +
                                "' is not on a source-to-sink path");
          }
        }
      }
    }

    for (const std::string& x : g.vertices) {
      auto it = r.allowed_nodes.find(x);
      if (it == r.allowed_nodes.end() || it->second.empty()) {
        violation(r.id, "empty allowed set for pr-vertex '" + x + "'");
        continue;
      }
      for (const std::string& v : it->second) {
        if (inst.node_index(v) == kNone) {
          violation(r.id, "allowed node '" + v + "' does not exist");
        }
      }
    }
    for (const PrEdge& y : g.edges) {
      auto it = r.allowed_edges.find(y.id);
      if (it == r.allowed_edges.end() || it->second.empty()) {
        violation(r.id, "empty allowed set for pr-edge '" + y.id + "'");
        continue;
      }
      for (const std::string& e : it->second) {
        if (inst.edge_index(e) == kNone) {
          violation(r.id, "allowed edge '" + e + "' does not exist");
        }
      }
    }
    for (const auto& [key, ids] : r.allowed_nodes) {
      if (g.vertex_index(key) == kNone) {
        violation(r.id, "allowed nodes given for unknown pr-vertex '" + key + "'");
      }
    }
    for (const auto& [key, ids] : r.allowed_edges) {
      if (g.edge_index(key) == kNone) {
        violation(r.id, "allowed edges given for unknown pr-edge '" + key + "'");
      }
    }
  }

  const DerivedScalars& d = inst.scalars();
  std::ostringstream note;
  note << "c_min(edges) = " << d.c_min << ", c_min(all) = " << d.c_min_all;
  report.notes.push_back(note.str());
  if (std::isfinite(d.c_min_all)) {
    std::ostringstream n2;
    n2 << "capacity normalization factor (min capacity -> 1): 1/" << d.c_min_all;
    report.notes.push_back(n2.str());
  }
  double b_min = kUnbounded;
  for (const Request& r : inst.requests()) b_min = std::min(b_min, r.benefit);
  if (std::isfinite(b_min)) {
    std::ostringstream n3;
    n3 << "benefit normalization factor (min benefit -> 1): 1/" << b_min;
    report.notes.push_back(n3.str());
  }
  return report;
}

Instance parse_instance(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(document, e.byte);
    throw ParseError("syntax error at line " + std::to_string(line) +
                         ", column " + std::to_string(column) + ": " + e.what(),
                     line, column);
  }
  if (!doc.is_object()) throw ParseError("instance document must be an object");

  SubstrateNetwork net;
  const json& sub = field(doc, "substrate", "document");
  std::set<std::string> node_ids;
  for (const json& v : array_field(sub, "nodes", "substrate")) {
    SubstrateNode node;
    node.id = string_field(v, "id", "substrate.nodes");
    auto cap = v.find("capacity");
    if (cap != v.end() && !cap->is_null()) {
      node.capacity = positive_field(v, "capacity", "substrate.nodes", node.id);
    }
    node_ids.insert(node.id);
    net.nodes.push_back(std::move(node));
  }
  std::set<std::string> edge_ids;
  for (const json& e : array_field(sub, "edges", "substrate")) {
    SubstrateEdge edge;
    edge.id = string_field(e, "id", "substrate.edges");
    edge.a = string_field(e, "a", "substrate.edges");
    edge.b = string_field(e, "b", "substrate.edges");
    edge.capacity = positive_field(e, "capacity", "substrate.edges", edge.id);
    for (const std::string* end : {&edge.a, &edge.b}) {
      if (!node_ids.count(*end)) {
        throw ParseError("edge '" + edge.id + "' references unknown node '" +
                         *end + "'");
      }
    }
    edge_ids.insert(edge.id);
    net.edges.push_back(std::move(edge));
  }

  std::vector<Request> requests;
  auto reqs = doc.find("requests");
  if (reqs != doc.end()) {
    if (!reqs->is_array()) throw ParseError("requests must be an array");
    for (std::size_t i = 0; i < reqs->size(); ++i) {
      requests.push_back(parse_request((*reqs)[i], i, node_ids, edge_ids));
    }
  }
  return Instance(std::move(net), std::move(requests));
}

std::string serialize_instance(const Instance& inst) {
  json nodes = json::array();
  for (const SubstrateNode& v : inst.substrate().nodes) {
    json node = {{"id", v.id}};
    if (std::isfinite(v.capacity)) node["capacity"] = v.capacity;
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const SubstrateEdge& e : inst.substrate().edges) {
    edges.push_back({{"id", e.id}, {"a", e.a}, {"b", e.b}, {"capacity", e.capacity}});
  }
  json requests = json::array();
  for (const Request& r : inst.requests()) {
    json vertices = json::array();
    for (const std::string& x : r.graph.vertices) vertices.push_back({{"id", x}});
    json pr_edges = json::array();
    for (const PrEdge& y : r.graph.edges) {
      pr_edges.push_back({{"id", y.id}, {"from", y.from}, {"to", y.to}});
    }
    json allowed_nodes = json::object();
    for (const auto& [key, ids] : r.allowed_nodes) allowed_nodes[key] = ids;
    json allowed_edges = json::object();
    for (const auto& [key, ids] : r.allowed_edges) allowed_edges[key] = ids;
    requests.push_back({{"id", r.id},
                        {"demand", r.demand},
                        {"benefit", r.benefit},
                        {"pr_vertices", std::move(vertices)},
                        {"pr_edges", std::move(pr_edges)},
                        {"source", r.graph.source},
                        {"sink", r.graph.sink},
                        {"allowed_nodes", std::move(allowed_nodes)},
                        {"allowed_edges", std::move(allowed_edges)}});
  }
  json doc = {{"substrate", {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}},
              {"requests", std::move(requests)}};
  return doc.dump(2) + "\n";
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace pcfp
