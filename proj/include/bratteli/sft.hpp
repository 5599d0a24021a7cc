#pragma once

// One-sided edge shifts of finite type with locally constant potentials: the
// Ruelle operator on depth-k cylinder functions, its eigen-measure, the
// stationary conditional expectations and the Walters-condition certificate.

#include <bratteli/catalog.hpp>
#include <bratteli/contraction.hpp>
#include <bratteli/diagram.hpp>
#include <bratteli/errors.hpp>
#include <bratteli/spectral.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bratteli::sft {

struct GraphEdge {
  std::size_t source = 0;
  std::size_t range = 0;
};

/// Finite directed multigraph; every vertex must emit and receive an edge.
struct Graph {
  std::size_t vertex_count = 0;
  std::vector<GraphEdge> edges;
  std::vector<std::string> vertex_names;
};

/// Sequence of edge ordinals e_1 ... e_m with r(e_i) = s(e_{i+1}).
using Word = std::vector<std::size_t>;

inline void validate_graph(const Graph& g) {
  if (g.vertex_count == 0) throw InvalidArgument("graph has no vertices");
  std::vector<bool> emits(g.vertex_count, false);
  std::vector<bool> receives(g.vertex_count, false);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const GraphEdge& e = g.edges[i];
    if (e.source >= g.vertex_count || e.range >= g.vertex_count) {
      throw InvalidArgument("edge " + std::to_string(i) + " has a dangling endpoint");
    }
    emits[e.source] = true;
    receives[e.range] = true;
  }
  for (std::size_t v = 0; v < g.vertex_count; ++v) {
    if (!emits[v] || !receives[v]) {
      throw InvalidArgument("vertex " + std::to_string(v) +
                            (emits[v] ? " receives no edge" : " emits no edge"));
    }
  }
}

inline bool is_admissible(const Graph& g, std::span<const std::size_t> word) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= g.edges.size()) return false;
    if (i > 0 && g.edges[word[i - 1]].range != g.edges[word[i]].source) return false;
  }
  return true;
}

/// Admissible words of the given length in lexicographic order.
inline std::vector<Word> admissible_words(const Graph& g, std::size_t length) {
  std::vector<Word> out;
  if (length == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<std::vector<std::size_t>> outgoing(g.vertex_count);
  for (std::size_t i = 0; i < g.edges.size(); ++i) outgoing[g.edges[i].source].push_back(i);
  Word current;
  auto extend = [&](auto& self) -> void {
    if (current.size() == length) {
      out.push_back(current);
      return;
    }
    const std::size_t at = g.edges[current.back()].range;
    for (std::size_t i : outgoing[at]) {
      current.push_back(i);
      self(self);
      current.pop_back();
    }
  };
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    current.assign(1, i);
    extend(extend);
  }
  return out;
}

/// Shift space of a graph with a strictly positive potential g of depth k,
/// i.e. g(x) = g(x_1 ... x_k).
class SftSystem {
 public:
  SftSystem(Graph graph, std::size_t depth, const std::map<Word, double>& values)
      : graph_(std::move(graph)), depth_(depth) {
    validate_graph(graph_);
    if (depth_ == 0) throw InvalidArgument("potential depth must be at least 1");
    words_ = admissible_words(graph_, depth_);
    if (words_.empty()) throw InvalidArgument("graph has no admissible words");
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
    for (const auto& [word, value] : values) {
      if (word.size() != depth_ || !index_.contains(word)) {
        throw InvalidArgument("potential given on an inadmissible or wrong-length word");
      }
    }
    potential_.reserve(words_.size());
    for (const Word& w : words_) {
      const auto it = values.find(w);
      if (it == values.end()) {
        throw InvalidArgument("potential missing on an admissible word");
      }
      if (!(it->second > 0.0) || !std::isfinite(it->second)) {
        throw InvalidArgument("potential values must be strictly positive");
      }
      potential_.push_back(it->second);
    }
  }

  /// Potential given by a function of the depth-k word.
  static SftSystem from_function(Graph graph, std::size_t depth,
                                 const std::function<double(const Word&)>& g) {
    std::map<Word, double> values;
    for (const Word& w : admissible_words(graph, depth)) values.emplace(w, g(w));
    return SftSystem(std::move(graph), depth, values);
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t depth() const noexcept { return depth_; }
  const std::vector<Word>& words() const noexcept { return words_; }
  const std::vector<double>& potential() const noexcept { return potential_; }

  std::optional<std::size_t> word_index(const Word& w) const {
    const auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  double potential(const Word& w) const {
    const auto i = word_index(w);
    if (!i) throw InvalidArgument("word is not an admissible depth-k word");
    return potential_[*i];
  }

  /// Same potential seen at depth new_depth >= depth() (trailing coordinates
  /// ignored).
  SftSystem lifted(std::size_t new_depth) const {
    if (new_depth < depth_) throw InvalidArgument("cannot lift to a smaller depth");
    return from_function(graph_, new_depth, [this](const Word& w) {
      return potential(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(depth_)));
    });
  }

 private:
  Graph graph_;
  std::size_t depth_;
  std::vector<Word> words_;
  std::map<Word, std::size_t> index_;
  std::vector<double> potential_;
};

/// Transfer operator (L f)(x) = sum_{Ty = x} g(y) f(y) on depth-k functions:
/// (L f)(c) = sum_{c'} matrix(c, c') f(c'), indices into `words`. Row c has
/// the entry g(c') at c' = e c_1 ... c_{k-1} for each e with r(e) = s(c_1).
struct RuelleMatrix {
  Matrix matrix;
  std::vector<Word> words;
};

inline RuelleMatrix build_ruelle_matrix(const SftSystem& s) {
  const auto& words = s.words();
  const auto& edges = s.graph().edges;
  const auto dim = static_cast<Eigen::Index>(words.size());
  RuelleMatrix out{Matrix::Zero(dim, dim), words};
  Word preimage(s.depth());
  for (Eigen::Index r = 0; r < dim; ++r) {
    const Word& c = words[static_cast<std::size_t>(r)];
    const std::size_t at = edges[c.front()].source;
    std::copy(c.begin(), c.end() - 1, preimage.begin() + 1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].range != at) continue;
      preimage.front() = e;
      const auto col = static_cast<Eigen::Index>(*s.word_index(preimage));
      out.matrix(r, col) += s.potential()[static_cast<std::size_t>(col)];
    }
  }
  return out;
}

struct EigenMeasure {
  double lambda = 0.0;
  /// Probability vector on the depth-k words, L^T mu = lambda mu.
  Vector mu;
  /// ||L^T mu - lambda mu||_1
  double residual = 0.0;
  /// mu(L 1) / mu(1), which equals lambda for an exact eigen-measure.
  double lambda_from_mass = 0.0;
  std::size_t iterations = 0;
  std::size_t exponent = 0;
  double contraction_bound = 1.0;
  bool converged = false;
};

/// Unique probability measure with L^* mu = lambda mu, restricted to the
/// depth-k cylinders. Requires the k-word support to be primitive.
inline EigenMeasure eigen_measure(const SftSystem& s, double tol, std::size_t max_iter) {
  const RuelleMatrix l = build_ruelle_matrix(s);
  PerronResult pf;
  try {
    pf = perron(l.matrix, tol, max_iter);
  } catch (const UnsupportedInput&) {
    throw UnsupportedInput("transfer operator support is not primitive");
  }
  EigenMeasure out;
  out.lambda = pf.lambda;
  out.residual = pf.residual;
  out.iterations = pf.iterations;
  out.exponent = pf.exponent;
  out.contraction_bound = pf.contraction_bound;
  out.converged = pf.converged;
  const Vector row_sums = l.matrix.rowwise().sum();
  out.lambda_from_mass = pf.left_vector.dot(row_sums) / pf.left_vector.sum();
  out.mu = std::move(pf.left_vector);
  return out;
}

/// mu(Z(w)) for an admissible word of length m >= k: iterating
/// mu(1_{Z(w)}) = lambda^{-1} mu(L 1_{Z(w)}) = lambda^{-1} g(w_1..w_k) mu(Z(w_2..w_m))
/// down to the trailing k-word.
inline double extend_cylinder_measure(const SftSystem& s, double lambda, const Vector& mu,
                                      const Word& w) {
  const std::size_t k = s.depth();
  if (w.size() < k || !is_admissible(s.graph(), w)) {
    throw InvalidArgument("word must be admissible and at least as long as the potential depth");
  }
  if (mu.size() != static_cast<Eigen::Index>(s.words().size())) {
    throw InvalidArgument("measure vector does not match the word space");
  }
  double log_mass = 0.0;
  const std::size_t steps = w.size() - k;
  for (std::size_t i = 0; i < steps; ++i) {
    const Word window(w.begin() + static_cast<std::ptrdiff_t>(i),
                      w.begin() + static_cast<std::ptrdiff_t>(i + k));
    log_mass += std::log(s.potential(window)) - std::log(lambda);
  }
  const Word tail(w.end() - static_cast<std::ptrdiff_t>(k), w.end());
  return std::exp(log_mass) * mu(static_cast<Eigen::Index>(*s.word_index(tail)));
}

/// Function of the first `depth` edges; values aligned with
/// admissible_words(graph, depth).
struct WordFunction {
  std::size_t depth = 0;
  std::vector<double> values;
};

struct StationaryExpectation {
  /// max(k, depth(f)): the word length the result is indexed by.
  std::size_t word_length = 0;
  std::vector<Word> words;
  /// E_n(f)(x) = (L^n f)(x) / (L^n 1)(x), which depends on x only through
  /// its first word_length edges.
  Vector values;
};

inline StationaryExpectation stationary_expectation(const SftSystem& s,
                                                    const WordFunction& f,
                                                    std::size_t n) {
  if (n < f.depth) {
    throw InvalidArgument("expectation step " + std::to_string(n) +
                          " is below the function depth " + std::to_string(f.depth));
  }
  const std::size_t length = std::max(s.depth(), f.depth);
  const SftSystem lifted = length == s.depth() ? s : s.lifted(length);
  const RuelleMatrix l = build_ruelle_matrix(lifted);

  const auto base_words = admissible_words(s.graph(), f.depth);
  if (f.values.size() != base_words.size()) {
    throw InvalidArgument("word function has " + std::to_string(f.values.size()) +
                          " values; the graph has " + std::to_string(base_words.size()) +
                          " words of length " + std::to_string(f.depth));
  }
  std::map<Word, double> lookup;
  for (std::size_t i = 0; i < base_words.size(); ++i) lookup.emplace(base_words[i], f.values[i]);

  const auto dim = static_cast<Eigen::Index>(l.words.size());
  Vector num(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Word& c = l.words[static_cast<std::size_t>(i)];
    num(i) = lookup.at(Word(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(f.depth)));
  }
  Vector den = Vector::Ones(dim);
  for (std::size_t step = 0; step < n; ++step) {
    num = l.matrix * num;
    den = l.matrix * den;
    const double scale = den.maxCoeff();
    num /= scale;
    den /= scale;
  }
  return {length, l.words, num.cwiseQuotient(den)};
}

/// Structural Walters certificate for a locally constant potential of depth
/// k: g_n(x) = g(x) g(Tx) ... g(T^{n-1} x) depends only on x_1 ... x_{n+k-1},
/// so agreement on n + (k - 1) coordinates forces g_n(x) / g_n(y) = 1 and
/// Walters' condition holds with lag N = k - 1 for every epsilon.
struct WaltersCertificate {
  std::size_t potential_depth = 0;
  std::size_t lag = 0;
  /// Primitivity exponent of the vertex adjacency matrix of the graph.
  std::optional<std::size_t> graph_exponent;
  /// Walters' condition plus a primitive graph (minimal tail relation).
  bool uniquely_ergodic = false;
};

inline Matrix vertex_adjacency(const Graph& g) {
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(g.vertex_count),
                          static_cast<Eigen::Index>(g.vertex_count));
  for (const GraphEdge& e : g.edges) {
    a(static_cast<Eigen::Index>(e.source), static_cast<Eigen::Index>(e.range)) += 1.0;
  }
  return a;
}

inline WaltersCertificate walters_check_locally_constant(const SftSystem& s) {
  WaltersCertificate c;
  c.potential_depth = s.depth();
  c.lag = s.depth() - 1;
  c.graph_exponent = primitivity_exponent(vertex_adjacency(s.graph()));
  c.uniquely_ergodic = c.graph_exponent.has_value();
  return c;
}

/// Edge shift as a stationary Bratteli diagram with Phi(e) = g(e); needs k = 1.
inline BratteliDiagram to_stationary_diagram(const SftSystem& s, std::size_t levels) {
  if (s.depth() != 1) {
    throw InvalidArgument("stationary diagram encoding needs a depth-1 potential");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < s.graph().edges.size(); ++i) {
    const GraphEdge& e = s.graph().edges[i];
    edges.push_back({e.source, e.range, s.potential()[i]});
  }
  return catalog::stationary(s.graph().vertex_count, edges, levels);
}

}  // namespace bratteli::sft
