#include "pcfp/rounding.hpp"

#include <algorithm>

namespace pcfp {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kPruneRelative = 1e-12;
constexpr double kAmountSlack = 1e-9;

}  // namespace

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RoundingRng::RoundingRng(std::uint64_t seed, std::string_view request_id)
    : engine_(splitmix64(seed ^ splitmix64(stable_hash(request_id)))) {}

RoundingRng::RoundingRng(std::uint64_t stream_seed)
    : engine_(splitmix64(stream_seed)) {}

double RoundingRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

bool flip_supply_bit(double amount, double demand, RoundingRng& rng) {
  if (!(demand > 0.0)) throw InvalidArgument("demand must be positive");
  if (amount < -kAmountSlack * demand || amount > demand * (1.0 + kAmountSlack)) {
    throw InvalidArgument("flow amount must lie in [0, demand]");
  }
  const double p = std::clamp(amount / demand, 0.0, 1.0);
  return rng.uniform() < p;
}

FlowSupport::FlowSupport(const ProductNetwork& pn, const ProductFlow& f)
    : pn_(&pn), amount_(flow_amount(pn, f.edge_flow)) {
  if (!(amount_ > 0.0)) throw InvalidArgument("flow has no positive amount");
  const std::size_t n = pn.nodes().size();
  const double cutoff = kPruneRelative * amount_;
  flow_.assign(pn.edges().size(), 0.0);
  for (std::size_t e = 0; e < flow_.size(); ++e) {
    if (f.edge_flow[e] > cutoff) flow_[e] = f.edge_flow[e];
  }

  // Acyclicity of the support (Kahn).
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t e = 0; e < flow_.size(); ++e) {
    if (flow_[e] > 0.0) ++indegree[pn.edges()[e].to];
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t sorted = 0;
  while (!ready.empty()) {
    std::size_t u = ready.back();
    ready.pop_back();
    ++sorted;
    for (std::size_t e : pn.out_edges(u)) {
      if (flow_[e] > 0.0 && --indegree[pn.edges()[e].to] == 0) {
        ready.push_back(pn.edges()[e].to);
      }
    }
  }
  if (sorted != n) {
    throw InvalidArgument("flow support has a directed cycle; eliminate cycles first");
  }

  // Drop support edges whose head cannot reach t*.
  std::vector<char> alive(n, 0);
  std::vector<std::size_t> stack{ProductNetwork::kSuperSink};
  alive[ProductNetwork::kSuperSink] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t e : pn.in_edges(v)) {
      std::size_t u = pn.edges()[e].from;
      if (flow_[e] > 0.0 && !alive[u]) {
        alive[u] = 1;
        stack.push_back(u);
      }
    }
  }
  for (std::size_t e = 0; e < flow_.size(); ++e) {
    if (!alive[pn.edges()[e].to]) flow_[e] = 0.0;
  }

  out_.resize(n);
  cumulative_.resize(n);
  out_total_.assign(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t e : pn.out_edges(u)) {
      if (flow_[e] > 0.0) {
        out_total_[u] += flow_[e];
        out_[u].push_back(e);
        cumulative_[u].push_back(out_total_[u]);
      }
    }
  }
  if (out_[ProductNetwork::kSuperSource].empty()) {
    throw InvalidArgument("flow support does not reach t*");
  }
}

Step choose_next_vertex(const FlowSupport& support, std::size_t node,
                        RoundingRng& rng) {
  const auto& outs = support.out_edges(node);
  if (node == ProductNetwork::kSuperSink || outs.empty()) {
    throw InvalidArgument("node has no outgoing support flow");
  }
  const auto& cum = support.cumulative(node);
  const double roll = rng.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), roll);
  std::size_t k = std::min<std::size_t>(it - cum.begin(), outs.size() - 1);
  Step step;
  step.edge = outs[k];
  step.node = support.network().edges()[step.edge].to;
  return step;
}

ProductPath assign_path(const FlowSupport& support, RoundingRng& rng) {
  const ProductNetwork& pn = support.network();
  ProductPath path;
  path.request = pn.request();
  std::size_t at = ProductNetwork::kSuperSource;
  while (at != ProductNetwork::kSuperSink) {
    Step step = choose_next_vertex(support, at, rng);
    path.edges.push_back(step.edge);
    at = step.node;
    if (path.edges.size() > pn.nodes().size()) {
      throw InvalidArgument("walk did not terminate; support is not acyclic");
    }
  }
  return path;
}

Rounder::Rounder(const Instance& inst, std::span<const ProductNetwork> networks,
                 const FractionalSolution& sol)
    : inst_(&inst), networks_(networks) {
  const std::size_t n = inst.requests().size();
  amount_.assign(n, 0.0);
  supports_.resize(n);
  for (const ProductFlow& f : sol.flows) {
    amount_[f.request] = f.amount;
    if (f.amount > 0.0) supports_[f.request].emplace(networks[f.request], f);
  }
}

IntegralSolution Rounder::round(std::uint64_t seed) const {
  IntegralSolution out;
  const auto& requests = inst_->requests();
  out.outcomes.resize(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    RequestOutcome& o = out.outcomes[i];
    o.path.request = i;
    if (!supports_[i]) continue;
    RoundingRng rng(seed, requests[i].id);
    if (!flip_supply_bit(amount_[i], requests[i].demand, rng)) continue;
    o.accepted = true;
    o.path = assign_path(*supports_[i], rng);
    out.benefit += requests[i].benefit;
    out.flow_benefit += requests[i].benefit * requests[i].demand;
  }
  return out;
}

IntegralSolution round_solution(const Instance& inst,
                                std::span<const ProductNetwork> networks,
                                const FractionalSolution& sol, std::uint64_t seed) {
  return Rounder(inst, networks, sol).round(seed);
}

}  // namespace pcfp
