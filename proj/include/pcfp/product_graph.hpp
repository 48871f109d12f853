#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pcfp/instance.hpp"

namespace pcfp {

enum class ProductEdgeKind {
  kSourceLink,  // super-source s* -> source layer
  kRouting,     // inside a layer, projects to a substrate edge
  kProcessing,  // between layers at one substrate node, runs a pr-vertex
  kSinkLink,    // sink layer -> super-sink t*
};

// A product node is a copy (v, y) of substrate node v in the layer of pr-edge
// y. The two super nodes have substrate_node == layer == kNone.
struct ProductNode {
  std::size_t substrate_node = kNone;
  std::size_t layer = kNone;  // pr-edge index within the request
};

struct ProductEdge {
  std::size_t from = kNone;
  std::size_t to = kNone;
  ProductEdgeKind kind = ProductEdgeKind::kRouting;
  std::size_t substrate_edge = kNone;  // routing edges only
  std::size_t substrate_node = kNone;  // every edge except routing edges
  std::size_t pr_vertex = kNone;       // processing edges only
};

// Layered directed graph pn(N, r) of one request. Built once, never mutated.
// Only the part reachable from s* and co-reachable to t* is kept, so every
// node and edge lies on some s*-to-t* walk.
class ProductNetwork {
 public:
  static constexpr std::size_t kSuperSource = 0;
  static constexpr std::size_t kSuperSink = 1;

  std::size_t request() const { return request_; }
  bool routable() const { return routable_; }
  const std::vector<ProductNode>& nodes() const { return nodes_; }
  const std::vector<ProductEdge>& edges() const { return edges_; }
  const std::vector<std::size_t>& out_edges(std::size_t node) const {
    return out_[node];
  }
  const std::vector<std::size_t>& in_edges(std::size_t node) const {
    return in_[node];
  }
  std::size_t layer_count() const { return layer_count_; }

  // Index of the node (v, layer), or kNone.
  std::size_t find_node(std::size_t substrate_node, std::size_t layer) const;

  friend ProductNetwork build_product_network(const Instance& inst,
                                              std::size_t request);

 private:
  std::size_t request_ = kNone;
  bool routable_ = false;
  std::size_t layer_count_ = 0;
  std::vector<ProductNode> nodes_;
  std::vector<ProductEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

ProductNetwork build_product_network(const Instance& inst, std::size_t request);
std::vector<ProductNetwork> build_product_networks(const Instance& inst);

// Sequence of product edges from s* to t*, super links included.
struct ProductPath {
  std::size_t request = kNone;
  std::vector<std::size_t> edges;

  bool operator==(const ProductPath&) const = default;
};

struct WalkStep {
  enum class Kind { kRoute, kProcess };
  Kind kind = Kind::kRoute;
  std::size_t from = kNone;       // substrate node
  std::size_t to = kNone;         // substrate node (== from when processing)
  std::size_t edge = kNone;       // substrate edge, routing steps only
  std::size_t pr_vertex = kNone;  // processing steps only
};

// Projection of a product path: starting substrate node plus one step per
// non-super product edge. May revisit nodes and edges.
struct SubstrateWalk {
  std::size_t start = kNone;
  std::vector<WalkStep> steps;
};

// Throws InvalidArgument on an empty path, unknown edges or a broken chain.
SubstrateWalk project_path(const ProductNetwork& pn, const ProductPath& p);

int multiplicity_edge(const ProductNetwork& pn, const ProductPath& p,
                      std::size_t substrate_edge);
int multiplicity_vertex(const ProductNetwork& pn, const ProductPath& p,
                        std::size_t substrate_node);

// True iff p is a simple s*-to-t* path in pn.
bool is_valid_realization(const ProductNetwork& pn, const ProductPath& p);

// Pr-edge indices of the layers the path visits, in order.
std::vector<std::size_t> realized_pr_path(const ProductNetwork& pn,
                                          const ProductPath& p);

// "source_link", "routing", "processing" or "sink_link".
const char* edge_kind_name(ProductEdgeKind kind);

std::string node_label(const Instance& inst, const ProductNetwork& pn,
                       std::size_t node);

// Debug dump of a product network (nodes, edges, projections) as JSON text.
std::string dump_product_networks(const Instance& inst,
                                  std::span<const ProductNetwork> networks);

}  // namespace pcfp
