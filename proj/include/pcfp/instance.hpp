#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcfp/errors.hpp"

namespace pcfp {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct SubstrateNode {
  std::string id;
  double capacity = kUnbounded;  // absent in the file means unbounded

  bool operator==(const SubstrateNode&) const = default;
};

// Undirected link. Parallel links between the same endpoints are allowed.
struct SubstrateEdge {
  std::string id;
  std::string a;
  std::string b;
  double capacity = 0.0;

  bool operator==(const SubstrateEdge&) const = default;
};

struct SubstrateNetwork {
  std::vector<SubstrateNode> nodes;
  std::vector<SubstrateEdge> edges;

  bool operator==(const SubstrateNetwork&) const = default;
};

struct PrEdge {
  std::string id;
  std::string from;
  std::string to;

  bool operator==(const PrEdge&) const = default;
};

// Place-and-route graph: a DAG of processing stages with a single source and
// a single sink.
struct PrGraph {
  std::vector<std::string> vertices;
  std::vector<PrEdge> edges;
  std::string source;
  std::string sink;

  std::size_t vertex_index(std::string_view id) const;
  std::size_t edge_index(std::string_view id) const;

  bool operator==(const PrGraph&) const = default;
};

struct Request {
  std::string id;
  PrGraph graph;
  double demand = 0.0;
  double benefit = 0.0;
  // pr-vertex id -> substrate node ids allowed to perform that stage.
  std::map<std::string, std::vector<std::string>> allowed_nodes;
  // pr-edge id -> substrate edge ids allowed for the routing between stages.
  std::map<std::string, std::vector<std::string>> allowed_edges;

  bool operator==(const Request&) const = default;
};

struct DerivedScalars {
  double c_min = kUnbounded;      // minimum edge capacity
  double c_min_all = kUnbounded;  // minimum over edge and node capacities
  double d_max = 0.0;
  double b_max = 0.0;
  int delta_max = 0;
  std::size_t edge_count = 0;

  bool operator==(const DerivedScalars&) const = default;
};

// Number of edges on a longest source-to-sink path. Throws InvalidArgument on
// a cycle or when the sink is unreachable from the source.
int pr_diameter(const PrGraph& g);

// Immutable problem instance. Construction canonicalizes every list by id
// (lexicographic) and derives the scalar summaries; references are resolved
// but not validated, see validate_instance().
class Instance {
 public:
  Instance() = default;
  Instance(SubstrateNetwork substrate, std::vector<Request> requests);

  const SubstrateNetwork& substrate() const { return substrate_; }
  const std::vector<Request>& requests() const { return requests_; }
  const DerivedScalars& scalars() const { return scalars_; }

  std::size_t node_index(std::string_view id) const;
  std::size_t edge_index(std::string_view id) const;
  std::size_t request_index(std::string_view id) const;

  // Copy with every finite edge and node capacity multiplied by `factor`.
  Instance with_capacities_scaled(double factor) const;

  friend bool operator==(const Instance& lhs, const Instance& rhs);

 private:
  SubstrateNetwork substrate_;
  std::vector<Request> requests_;
  DerivedScalars scalars_;
  std::unordered_map<std::string, std::size_t> node_ids_;
  std::unordered_map<std::string, std::size_t> edge_ids_;
  std::unordered_map<std::string, std::size_t> request_ids_;
};

DerivedScalars derive_scalars(const SubstrateNetwork& substrate,
                              const std::vector<Request>& requests);

struct Violation {
  std::string subject;  // offending id (request, edge, ...)
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;  // informational, never a failure

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const Instance& inst);

// Instance file I/O (JSON syntax). parse_instance throws ParseError for
// syntax problems, unknown references and nonpositive quantities.
Instance parse_instance(std::string_view document);
std::string serialize_instance(const Instance& inst);
Instance load_instance_file(const std::string& path);

}  // namespace pcfp
