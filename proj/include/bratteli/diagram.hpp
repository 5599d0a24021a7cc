#pragma once

// Bratteli diagrams truncated at a finite depth: levels 0..N of vertices and
// levels 1..N of edges. Vertices and edges are addressed by (level, ordinal).

#include <bratteli/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bratteli {

/// An edge of E(n): source in V(n-1), range in V(n). The weight is the
/// quasi-product labeling Phi(e); unweighted diagrams carry 1.0.
struct Edge {
  std::size_t source = 0;
  std::size_t range = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class BratteliDiagram {
 public:
  /// vertex_names has one entry per level 0..N, edges one entry per level
  /// 1..N. Only the shape is checked here; use validate() for the diagram
  /// invariants.
  BratteliDiagram(std::vector<std::vector<std::string>> vertex_names,
                  std::vector<std::vector<Edge>> edges)
      : names_(std::move(vertex_names)), edges_(std::move(edges)) {
    if (edges_.empty()) {
      throw InvalidArgument("diagram needs at least one level of edges");
    }
    if (names_.size() != edges_.size() + 1) {
      throw InvalidArgument("diagram with " + std::to_string(edges_.size()) +
                            " edge levels needs " +
                            std::to_string(edges_.size() + 1) +
                            " vertex levels, got " +
                            std::to_string(names_.size()));
    }
    index_outgoing();
  }

  /// Anonymous vertices: vertex_counts[n] = |V(n)|.
  static BratteliDiagram from_counts(std::span<const std::size_t> vertex_counts,
                                     std::vector<std::vector<Edge>> edges) {
    std::vector<std::vector<std::string>> names;
    names.reserve(vertex_counts.size());
    for (std::size_t n = 0; n < vertex_counts.size(); ++n) {
      std::vector<std::string> level;
      level.reserve(vertex_counts[n]);
      for (std::size_t i = 0; i < vertex_counts[n]; ++i) {
        level.push_back(std::to_string(n) + ":" + std::to_string(i));
      }
      names.push_back(std::move(level));
    }
    return BratteliDiagram(std::move(names), std::move(edges));
  }

  std::size_t level_count() const noexcept { return edges_.size(); }

  std::size_t vertex_count(std::size_t level) const {
    return names_.at(level).size();
  }

  const std::vector<std::string>& vertex_names(std::size_t level) const {
    return names_.at(level);
  }

  /// E(level), level in [1, level_count].
  std::span<const Edge> edges(std::size_t level) const {
    check_edge_level(level);
    return edges_[level - 1];
  }

  const Edge& edge(std::size_t level, std::size_t index) const {
    check_edge_level(level);
    return edges_[level - 1].at(index);
  }

  /// Ordinals of the edges of E(level) whose source is v, ascending.
  /// Edges with a dangling source are never listed.
  std::span<const std::size_t> outgoing(std::size_t level, std::size_t v) const {
    check_edge_level(level);
    return outgoing_[level - 1].at(v);
  }

  friend bool operator==(const BratteliDiagram& a, const BratteliDiagram& b) {
    return a.names_ == b.names_ && a.edges_ == b.edges_;
  }

 private:
  void check_edge_level(std::size_t level) const {
    if (level == 0 || level > edges_.size()) {
      throw InvalidArgument("edge level " + std::to_string(level) +
                            " outside [1, " + std::to_string(edges_.size()) +
                            "]");
    }
  }

  void index_outgoing() {
    outgoing_.resize(edges_.size());
    for (std::size_t n = 1; n <= edges_.size(); ++n) {
      auto& out = outgoing_[n - 1];
      out.assign(names_[n - 1].size(), {});
      const auto& level = edges_[n - 1];
      for (std::size_t i = 0; i < level.size(); ++i) {
        if (level[i].source < out.size()) out[level[i].source].push_back(i);
      }
    }
  }

  std::vector<std::vector<std::string>> names_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<std::vector<std::size_t>>> outgoing_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationKind {
  EmptyLevel,
  DanglingEndpoint,
  NoOutgoingEdge,
  UnreachedVertex,
  NonPositiveWeight,
};

inline std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyLevel: return "empty level";
    case ViolationKind::DanglingEndpoint: return "dangling endpoint";
    case ViolationKind::NoOutgoingEdge: return "vertex emits no edge";
    case ViolationKind::UnreachedVertex: return "unreached vertex";
    case ViolationKind::NonPositiveWeight: return "non-positive weight";
  }
  return "unknown";
}

/// `index` is a vertex ordinal for vertex violations and an edge ordinal for
/// edge violations; `level` is the level of that vertex or edge.
struct Violation {
  ViolationKind kind;
  std::size_t level;
  std::size_t index;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

inline ValidationReport validate(const BratteliDiagram& d) {
  ValidationReport report;
  const std::size_t levels = d.level_count();
  for (std::size_t n = 0; n <= levels; ++n) {
    if (d.vertex_count(n) == 0) {
      report.push_back({ViolationKind::EmptyLevel, n, 0,
                        "level " + std::to_string(n) + " has no vertices"});
    }
  }
  for (std::size_t n = 1; n <= levels; ++n) {
    const auto edges = d.edges(n);
    std::vector<bool> emits(d.vertex_count(n - 1), false);
    std::vector<bool> receives(d.vertex_count(n), false);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      const bool source_ok = e.source < emits.size();
      const bool range_ok = e.range < receives.size();
      if (!source_ok || !range_ok) {
        report.push_back(
            {ViolationKind::DanglingEndpoint, n, i,
             "edge " + std::to_string(i) + " of level " + std::to_string(n) +
                 " references " + (source_ok ? "range " : "source ") +
                 std::to_string(source_ok ? e.range : e.source) +
                 " which does not exist"});
      }
      if (source_ok) emits[e.source] = true;
      if (range_ok) receives[e.range] = true;
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        report.push_back({ViolationKind::NonPositiveWeight, n, i,
                          "edge " + std::to_string(i) + " of level " +
                              std::to_string(n) + " has weight " +
                              std::to_string(e.weight)});
      }
    }
    for (std::size_t v = 0; v < emits.size(); ++v) {
      if (!emits[v]) {
        report.push_back({ViolationKind::NoOutgoingEdge, n - 1, v,
                          "vertex " + std::to_string(v) + " of level " +
                              std::to_string(n - 1) + " emits no edge"});
      }
    }
    for (std::size_t w = 0; w < receives.size(); ++w) {
      if (!receives[w]) {
        report.push_back({ViolationKind::UnreachedVertex, n, w,
                          "vertex " + std::to_string(w) + " of level " +
                              std::to_string(n) + " receives no edge"});
      }
    }
  }
  return report;
}

inline void require_valid(const BratteliDiagram& d) {
  const auto report = validate(d);
  if (!report.empty()) {
    throw InvalidArgument("invalid diagram: " + report.front().message +
                          (report.size() > 1
                               ? " (+" + std::to_string(report.size() - 1) +
                                     " more)"
                               : std::string()));
  }
}

/// Same vertex count on every level and the same edge list (endpoints and
/// weights) on every edge level.
inline bool is_stationary(const BratteliDiagram& d) {
  for (std::size_t n = 1; n <= d.level_count(); ++n) {
    if (d.vertex_count(n) != d.vertex_count(0)) return false;
    const auto first = d.edges(1);
    const auto level = d.edges(n);
    if (!std::equal(first.begin(), first.end(), level.begin(), level.end())) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Finite paths
// ---------------------------------------------------------------------------

/// Connected edges x_{m+1} ... x_n with x_k an ordinal of E(k). An empty
/// path names the vertex start_vertex of V(start_level).
struct FinitePath {
  std::size_t start_level = 0;
  std::size_t start_vertex = 0;
  std::vector<std::size_t> edges;

  std::size_t end_level() const noexcept { return start_level + edges.size(); }

  friend bool operator==(const FinitePath&, const FinitePath&) = default;
};

inline FinitePath path_from_edges(const BratteliDiagram& d, std::size_t start_level,
                                  std::vector<std::size_t> edges) {
  FinitePath p{start_level, 0, std::move(edges)};
  if (!p.edges.empty()) {
    p.start_vertex = d.edge(start_level + 1, p.edges.front()).source;
  }
  return p;
}

inline bool is_admissible(const BratteliDiagram& d, const FinitePath& p) {
  if (p.end_level() > d.level_count()) return false;
  if (p.start_vertex >= d.vertex_count(p.start_level)) return false;
  std::size_t at = p.start_vertex;
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    const std::size_t level = p.start_level + k + 1;
    const auto edges = d.edges(level);
    if (p.edges[k] >= edges.size()) return false;
    const Edge& e = edges[p.edges[k]];
    if (e.source != at || e.range >= d.vertex_count(level)) return false;
    at = e.range;
  }
  return true;
}

inline std::size_t end_vertex(const BratteliDiagram& d, const FinitePath& p) {
  if (!is_admissible(d, p)) {
    throw InvalidArgument("path is not admissible in the diagram");
  }
  if (p.edges.empty()) return p.start_vertex;
  return d.edge(p.end_level(), p.edges.back()).range;
}

namespace detail {

inline void check_level_span(const BratteliDiagram& d, std::size_t from,
                             std::size_t to) {
  if (from > to || to > d.level_count()) {
    throw InvalidArgument("level span [" + std::to_string(from) + ", " +
                          std::to_string(to) + "] invalid for a diagram of " +
                          std::to_string(d.level_count()) + " levels");
  }
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

/// reach[k - from][w]: vertex w of level k has a path to `target` at level
/// `to`. Without a target every vertex qualifies.
inline std::vector<std::vector<bool>> backward_reach(const BratteliDiagram& d,
                                                     std::size_t from, std::size_t to,
                                                     std::size_t target) {
  std::vector<std::vector<bool>> reach(to - from + 1);
  reach.back().assign(d.vertex_count(to), false);
  reach.back().at(target) = true;
  for (std::size_t k = to; k > from; --k) {
    auto& prev = reach[k - 1 - from];
    prev.assign(d.vertex_count(k - 1), false);
    const auto& next = reach[k - from];
    for (const Edge& e : d.edges(k)) {
      if (e.source < prev.size() && e.range < next.size() && next[e.range]) {
        prev[e.source] = true;
      }
    }
  }
  return reach;
}

template <class Visitor>
void visit_paths(const BratteliDiagram& d, std::size_t from, std::size_t to,
                 const std::vector<std::vector<bool>>* reach, Visitor& visit) {
  std::vector<std::size_t> stack;
  stack.reserve(to - from);
  std::size_t origin = 0;
  auto descend = [&](auto& self, std::size_t level, std::size_t at) -> void {
    if (level == to) {
      visit(std::span<const std::size_t>(stack), origin, at);
      return;
    }
    const auto edges = d.edges(level + 1);
    for (std::size_t i : d.outgoing(level + 1, at)) {
      const std::size_t next = edges[i].range;
      if (next >= d.vertex_count(level + 1)) continue;
      if (reach && !(*reach)[level + 1 - from][next]) continue;
      stack.push_back(i);
      self(self, level + 1, next);
      stack.pop_back();
    }
  };
  if (from == to) {
    for (std::size_t v = 0; v < d.vertex_count(from); ++v) {
      if (reach && !(*reach)[0][v]) continue;
      origin = v;
      descend(descend, from, v);
    }
    return;
  }
  // First edges in ordinal order, so paths come out lexicographically.
  const auto first = d.edges(from + 1);
  for (std::size_t i = 0; i < first.size(); ++i) {
    const Edge& e = first[i];
    if (e.source >= d.vertex_count(from) || e.range >= d.vertex_count(from + 1)) continue;
    if (reach && (!(*reach)[0][e.source] || !(*reach)[1][e.range])) continue;
    origin = e.source;
    stack.push_back(i);
    descend(descend, from + 1, e.range);
    stack.pop_back();
  }
}

}  // namespace detail

/// Calls visit(edges, start_vertex, end_vertex) for every connected path from
/// level `from` to level `to`, in lexicographic order of edge ordinals.
template <class Visitor>
void for_each_path(const BratteliDiagram& d, std::size_t from, std::size_t to,
                   Visitor&& visit) {
  detail::check_level_span(d, from, to);
  detail::visit_paths(d, from, to, nullptr, visit);
}

/// Number of paths from any vertex of level `from` to vertex v of level `to`,
/// saturating at 2^64 - 1.
inline std::uint64_t count_paths(const BratteliDiagram& d, std::size_t from,
                                 std::size_t to, std::size_t v) {
  detail::check_level_span(d, from, to);
  if (v >= d.vertex_count(to)) {
    throw InvalidArgument("end vertex " + std::to_string(v) + " not in level " +
                          std::to_string(to));
  }
  std::vector<std::uint64_t> counts(d.vertex_count(from), 1);
  for (std::size_t k = from + 1; k <= to; ++k) {
    std::vector<std::uint64_t> next(d.vertex_count(k), 0);
    for (const Edge& e : d.edges(k)) {
      if (e.source < counts.size() && e.range < next.size()) {
        next[e.range] = detail::saturating_add(next[e.range], counts[e.source]);
      }
    }
    counts = std::move(next);
  }
  return counts[v];
}

/// All paths from level `from` ending at vertex v of level `to`, in
/// lexicographic order of edge ordinals. Throws CapacityError when there are
/// more than `cap`.
inline std::vector<FinitePath> enumerate_paths(const BratteliDiagram& d,
                                               std::size_t from, std::size_t to,
                                               std::size_t v, std::size_t cap) {
  const std::uint64_t count = count_paths(d, from, to, v);
  if (count > cap) {
    throw CapacityError("path enumeration from level " + std::to_string(from) +
                            " to vertex " + std::to_string(v) + " of level " +
                            std::to_string(to) + " yields " +
                            std::to_string(count) + " paths, cap is " +
                            std::to_string(cap),
                        static_cast<std::size_t>(count));
  }
  std::vector<FinitePath> out;
  out.reserve(static_cast<std::size_t>(count));
  const auto reach = detail::backward_reach(d, from, to, v);
  auto collect = [&](std::span<const std::size_t> edges, std::size_t start,
                     std::size_t) {
    out.push_back(FinitePath{from, start, {edges.begin(), edges.end()}});
  };
  detail::visit_paths(d, from, to, &reach, collect);
  return out;
}

// ---------------------------------------------------------------------------
// Telescoping
// ---------------------------------------------------------------------------

/// Result of contracting a diagram along cut levels n_0 = 0 < n_1 < ... .
/// provenance[k - 1][i] lists the original edge ordinals (levels n_{k-1}+1
/// .. n_k) making up edge i of the new level k. Weights are the products of
/// the original weights along that path.
struct TelescopedDiagram {
  BratteliDiagram diagram;
  std::vector<std::size_t> cut_levels;
  std::vector<std::vector<std::vector<std::size_t>>> provenance;
};

inline TelescopedDiagram telescope(const BratteliDiagram& d,
                                   std::span<const std::size_t> cut_levels,
                                   std::size_t edge_cap = std::size_t{1} << 22) {
  if (cut_levels.size() < 2) {
    throw InvalidArgument("telescoping needs at least two cut levels");
  }
  if (cut_levels.front() != 0) {
    throw InvalidArgument("cut levels must start at 0");
  }
  for (std::size_t k = 1; k < cut_levels.size(); ++k) {
    if (cut_levels[k] <= cut_levels[k - 1]) {
      throw InvalidArgument("cut levels must be strictly increasing");
    }
  }
  if (cut_levels.back() > d.level_count()) {
    throw InvalidArgument("cut level " + std::to_string(cut_levels.back()) +
                          " exceeds diagram depth " +
                          std::to_string(d.level_count()));
  }

  std::vector<std::vector<std::string>> names;
  for (std::size_t cut : cut_levels) names.push_back(d.vertex_names(cut));

  std::vector<std::vector<Edge>> edges(cut_levels.size() - 1);
  std::vector<std::vector<std::vector<std::size_t>>> provenance(edges.size());
  for (std::size_t k = 1; k < cut_levels.size(); ++k) {
    const std::size_t from = cut_levels[k - 1];
    const std::size_t to = cut_levels[k];
    auto& level = edges[k - 1];
    auto& origin = provenance[k - 1];
    for_each_path(d, from, to,
                  [&](std::span<const std::size_t> path, std::size_t start,
                      std::size_t end) {
                    if (level.size() >= edge_cap) {
                      throw CapacityError(
                          "telescoped level " + std::to_string(k) +
                              " exceeds the edge cap " + std::to_string(edge_cap),
                          level.size() + 1);
                    }
                    double weight = 1.0;
                    for (std::size_t j = 0; j < path.size(); ++j) {
                      weight *= d.edge(from + j + 1, path[j]).weight;
                    }
                    level.push_back(Edge{start, end, weight});
                    origin.emplace_back(path.begin(), path.end());
                  });
  }
  return TelescopedDiagram{BratteliDiagram(std::move(names), std::move(edges)),
                           {cut_levels.begin(), cut_levels.end()},
                           std::move(provenance)};
}

}  // namespace bratteli
