#include "pcfp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace pcfp {
namespace {

// Own uniform helpers: std distributions are not reproducible across
// standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double real(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(unit() * static_cast<double>(n)));
  }
  // k distinct values of [0, n), ascending.
  std::vector<std::size_t> subset(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + index(n - i)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

std::string padded(const char* prefix, std::size_t i, std::size_t count) {
  std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::string digits = std::to_string(i);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

void check_range(const char* what, double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw InvalidArgument(std::string("invalid ") + what + " range [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

std::size_t share(double fraction, std::size_t n) {
  auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace

SubstrateFamily parse_family(const std::string& name) {
  if (name == "path") return SubstrateFamily::kPath;
  if (name == "grid") return SubstrateFamily::kGrid;
  if (name == "random") return SubstrateFamily::kRandom;
  throw InvalidArgument("unknown substrate family '" + name + "'");
}

const char* family_name(SubstrateFamily family) {
  switch (family) {
    case SubstrateFamily::kPath: return "path";
    case SubstrateFamily::kGrid: return "grid";
    case SubstrateFamily::kRandom: return "random";
  }
  return "?";
}

Instance generate_instance(const GeneratorParams& p, std::uint64_t seed) {
  const bool grid = p.family == SubstrateFamily::kGrid;
  if (grid ? (p.rows < 1 || p.cols < 1) : p.nodes < 1) {
    throw InvalidArgument("substrate size must be at least 1");
  }
  check_range("capacity", p.capacity_min, p.capacity_max);
  check_range("demand", p.demand_min, p.demand_max);
  check_range("benefit", p.benefit_min, p.benefit_max);
  const bool node_caps = p.node_capacity_max > 0.0;
  if (node_caps) check_range("node capacity", p.node_capacity_min, p.node_capacity_max);
  if (!(p.stage_node_fraction > 0.0 && p.stage_node_fraction <= 1.0) ||
      !(p.edge_fraction > 0.0 && p.edge_fraction <= 1.0)) {
    throw InvalidArgument("allowed-set fractions must lie in (0, 1]");
  }
  if (!(p.extra_edge_probability >= 0.0 && p.extra_edge_probability <= 1.0)) {
    throw InvalidArgument("extra edge probability must lie in [0, 1]");
  }

  Draw draw(seed);
  auto value = [&](double lo, double hi) {
    double x = draw.real(lo, hi);
    return p.integral ? std::max(1.0, std::round(x)) : x;
  };

  const std::size_t n = grid ? p.rows * p.cols : p.nodes;
  std::vector<std::pair<std::size_t, std::size_t>> links;
  switch (p.family) {
    case SubstrateFamily::kPath:
      for (std::size_t i = 0; i + 1 < n; ++i) links.emplace_back(i, i + 1);
      break;
    case SubstrateFamily::kGrid:
      for (std::size_t r = 0; r < p.rows; ++r) {
        for (std::size_t c = 0; c < p.cols; ++c) {
          std::size_t v = r * p.cols + c;
          if (c + 1 < p.cols) links.emplace_back(v, v + 1);
          if (r + 1 < p.rows) links.emplace_back(v, v + p.cols);
        }
      }
      break;
    case SubstrateFamily::kRandom: {
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (std::size_t i = 1; i < n; ++i) {
        std::size_t j = draw.index(i);
        links.emplace_back(j, i);
        seen.insert({j, i});
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (seen.count({i, j}) == 0 && draw.unit() < p.extra_edge_probability) {
            links.emplace_back(i, j);
          }
        }
      }
      break;
    }
  }

  SubstrateNetwork net;
  for (std::size_t i = 0; i < n; ++i) {
    SubstrateNode node{padded("n", i, n), kUnbounded};
    if (node_caps) node.capacity = value(p.node_capacity_min, p.node_capacity_max);
    net.nodes.push_back(node);
  }
  for (std::size_t e = 0; e < links.size(); ++e) {
    net.edges.push_back({padded("e", e, links.size()), net.nodes[links[e].first].id,
                         net.nodes[links[e].second].id,
                         value(p.capacity_min, p.capacity_max)});
  }

  if (net.edges.empty() && p.requests > 0) {
    throw InvalidArgument("requests need at least one substrate edge for their allowed sets");
  }
  const std::size_t k = p.chain_length;
  std::vector<Request> requests;
  for (std::size_t r = 0; r < p.requests; ++r) {
    Request req;
    req.id = padded("r", r, p.requests);
    req.demand = value(p.demand_min, p.demand_max);
    req.benefit = value(p.benefit_min, p.benefit_max);

    std::vector<std::string> chain{"s"};
    for (std::size_t j = 1; j <= k; ++j) chain.push_back("w" + std::to_string(j));
    chain.push_back("t");
    req.graph.vertices = chain;
    req.graph.source = "s";
    req.graph.sink = "t";
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      req.graph.edges.push_back({padded("y", j, k + 1), chain[j], chain[j + 1]});
    }

    std::size_t src = draw.index(n);
    std::size_t dst = src;
    if (n > 1) {
      dst = draw.index(n - 1);
      if (dst >= src) ++dst;
    }
    req.allowed_nodes["s"] = {net.nodes[src].id};
    req.allowed_nodes["t"] = {net.nodes[dst].id};
    for (std::size_t j = 1; j <= k; ++j) {
      auto& allowed = req.allowed_nodes[chain[j]];
      for (std::size_t v : draw.subset(n, share(p.stage_node_fraction, n))) {
        allowed.push_back(net.nodes[v].id);
      }
    }
    for (const PrEdge& y : req.graph.edges) {
      auto& allowed = req.allowed_edges[y.id];
      for (std::size_t e : draw.subset(net.edges.size(),
                                       share(p.edge_fraction, net.edges.size()))) {
        allowed.push_back(net.edges[e].id);
      }
    }
    requests.push_back(std::move(req));
  }
  return Instance(std::move(net), std::move(requests));
}

}  // namespace pcfp
