#pragma once

// File formats of the command-line front end and a JSON writer that prints
// every floating-point value with 17 significant digits.

#include <bratteli/bratteli.hpp>

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bratteli::cli {

using Json = nlohmann::ordered_json;

/// Malformed input file; `where` names the file and a JSON pointer or byte.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& file, const std::string& where, const std::string& what)
      : std::runtime_error(file + (where.empty() ? "" : ": " + where) + ": " + what) {}
};

struct InputFile {
  std::string path;
  std::string sha256;
  Json document;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

inline InputFile load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "", "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  InputFile file{path, sha256_hex(text), {}};
  try {
    file.document = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(path, "byte " + std::to_string(e.byte), "malformed JSON");
  }
  return file;
}

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write(std::ostream& os, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(key).dump() << ": ";
        write(os, value, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      os << (flat ? "[" : "[\n");
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",\n");
        first = false;
        if (!flat) os << pad;
        write(os, v, depth + 1);
      }
      if (!flat) os << "\n" << close;
      os << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline void write_json(std::ostream& os, const Json& j) {
  detail::write(os, j, 0);
  os << "\n";
}

// ---------------------------------------------------------------------------
// Field helpers
// ---------------------------------------------------------------------------

namespace detail {

inline const Json& field(const InputFile& f, const Json& obj, const std::string& ptr,
                         const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(f.path, ptr.empty() ? "/" : ptr, "missing field \"" + key + "\"");
  }
  return obj.at(key);
}

inline std::size_t as_index(const InputFile& f, const Json& j, const std::string& ptr) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw InputError(f.path, ptr, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline double as_number(const InputFile& f, const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw InputError(f.path, ptr, "expected a number");
  return j.get<double>();
}

}  // namespace detail

/// {"levels": N, "vertices": [[names] x N+1], "edges": [[{source, range,
/// weight?}] x N]}
inline BratteliDiagram parse_diagram(const InputFile& f) {
  const Json& doc = f.document;
  const std::size_t levels =
      detail::as_index(f, detail::field(f, doc, "", "levels"), "/levels");
  if (levels == 0) throw InputError(f.path, "/levels", "expected at least one level");
  const Json& vertices = detail::field(f, doc, "", "vertices");
  const Json& edges = detail::field(f, doc, "", "edges");
  if (!vertices.is_array() || vertices.size() != levels + 1) {
    throw InputError(f.path, "/vertices",
                     "expected an array of " + std::to_string(levels + 1) + " levels");
  }
  if (!edges.is_array() || edges.size() != levels) {
    throw InputError(f.path, "/edges", "expected an array of " + std::to_string(levels) +
                                           " levels");
  }
  std::vector<std::vector<std::string>> names;
  for (std::size_t n = 0; n <= levels; ++n) {
    const std::string ptr = "/vertices/" + std::to_string(n);
    if (!vertices[n].is_array()) throw InputError(f.path, ptr, "expected an array");
    std::vector<std::string> level;
    for (std::size_t i = 0; i < vertices[n].size(); ++i) {
      const Json& v = vertices[n][i];
      if (!v.is_string()) {
        throw InputError(f.path, ptr + "/" + std::to_string(i), "expected a string");
      }
      level.push_back(v.get<std::string>());
    }
    names.push_back(std::move(level));
  }
  std::vector<std::vector<Edge>> edge_levels;
  for (std::size_t n = 0; n < levels; ++n) {
    const std::string ptr = "/edges/" + std::to_string(n);
    if (!edges[n].is_array()) throw InputError(f.path, ptr, "expected an array");
    std::vector<Edge> level;
    for (std::size_t i = 0; i < edges[n].size(); ++i) {
      const std::string eptr = ptr + "/" + std::to_string(i);
      const Json& e = edges[n][i];
      Edge edge;
      edge.source = detail::as_index(f, detail::field(f, e, eptr, "source"), eptr + "/source");
      edge.range = detail::as_index(f, detail::field(f, e, eptr, "range"), eptr + "/range");
      if (e.contains("weight")) {
        edge.weight = detail::as_number(f, e.at("weight"), eptr + "/weight");
      }
      level.push_back(edge);
    }
    edge_levels.push_back(std::move(level));
  }
  return BratteliDiagram(std::move(names), std::move(edge_levels));
}

inline Json diagram_to_json(const BratteliDiagram& d) {
  Json vertices = Json::array();
  for (std::size_t n = 0; n <= d.level_count(); ++n) vertices.push_back(d.vertex_names(n));
  Json edges = Json::array();
  for (std::size_t n = 1; n <= d.level_count(); ++n) {
    Json level = Json::array();
    for (const Edge& e : d.edges(n)) {
      level.push_back(Json{{"source", e.source}, {"range", e.range}, {"weight", e.weight}});
    }
    edges.push_back(std::move(level));
  }
  return Json{{"levels", d.level_count()}, {"vertices", vertices}, {"edges", edges}};
}

/// Dense matrix as an array of equal-length arrays of numbers.
inline Matrix parse_matrix(const InputFile& f) {
  const Json& doc = f.document;
  if (!doc.is_array() || doc.empty()) throw InputError(f.path, "/", "expected an array of rows");
  const std::size_t cols = doc[0].is_array() ? doc[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(doc.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ptr = "/" + std::to_string(i);
    if (!doc[i].is_array() || doc[i].size() != cols || cols == 0) {
      throw InputError(f.path, ptr, "expected a row of " + std::to_string(cols) + " numbers");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::as_number(f, doc[i][j], ptr + "/" + std::to_string(j));
    }
  }
  return m;
}

/// {"vertices": [names], "edges": [{"source": index|name, "range": index|name}]}
inline sft::Graph parse_graph(const InputFile& f) {
  const Json& doc = f.document;
  const Json& vertices = detail::field(f, doc, "", "vertices");
  const Json& edges = detail::field(f, doc, "", "edges");
  if (!vertices.is_array()) throw InputError(f.path, "/vertices", "expected an array");
  if (!edges.is_array()) throw InputError(f.path, "/edges", "expected an array");
  sft::Graph g;
  g.vertex_count = vertices.size();
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!vertices[i].is_string()) {
      throw InputError(f.path, "/vertices/" + std::to_string(i), "expected a string");
    }
    g.vertex_names.push_back(vertices[i].get<std::string>());
    by_name.emplace(g.vertex_names.back(), i);
  }
  auto endpoint = [&](const Json& j, const std::string& ptr) -> std::size_t {
    if (j.is_string()) {
      const auto it = by_name.find(j.get<std::string>());
      if (it == by_name.end()) throw InputError(f.path, ptr, "unknown vertex name");
      return it->second;
    }
    return detail::as_index(f, j, ptr);
  };
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ptr = "/edges/" + std::to_string(i);
    g.edges.push_back({endpoint(detail::field(f, edges[i], ptr, "source"), ptr + "/source"),
                       endpoint(detail::field(f, edges[i], ptr, "range"), ptr + "/range")});
  }
  return g;
}

/// Comma-separated nonnegative integers; "" is the empty list.
inline std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || item.front() == '-') {
      throw InvalidArgument("\"" + text + "\" is not a comma-separated list of indices");
    }
    out.push_back(static_cast<std::size_t>(value));
  }
  return out;
}

inline std::string join_indices(std::span<const std::size_t> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

/// {"depth": d, "values": {"e1,...,ed": number}} (keys are edge ordinals);
/// depth 0 takes a single key "".
struct KeyedValues {
  std::size_t depth = 0;
  std::map<std::vector<std::size_t>, double> values;
};

inline KeyedValues parse_keyed_values(const InputFile& f) {
  const Json& doc = f.document;
  KeyedValues out;
  out.depth = detail::as_index(f, detail::field(f, doc, "", "depth"), "/depth");
  const Json& values = detail::field(f, doc, "", "values");
  if (!values.is_object()) throw InputError(f.path, "/values", "expected an object");
  for (const auto& [key, value] : values.items()) {
    const std::string ptr = "/values/" + key;
    std::vector<std::size_t> word;
    try {
      word = parse_index_list(key);
    } catch (const InvalidArgument& e) {
      throw InputError(f.path, ptr, e.what());
    }
    if (word.size() != out.depth) {
      throw InputError(f.path, ptr, "key length differs from depth " + std::to_string(out.depth));
    }
    out.values.emplace(std::move(word), detail::as_number(f, value, ptr));
  }
  return out;
}

inline CylinderFunction parse_cylinder_function(const InputFile& f, const BratteliDiagram& d) {
  const KeyedValues kv = parse_keyed_values(f);
  if (kv.depth > d.level_count()) {
    throw InputError(f.path, "/depth", "depth exceeds the diagram depth");
  }
  return CylinderFunction::tabulate(
      d, kv.depth, [&](std::span<const std::size_t> edges, std::size_t, std::size_t) {
        const auto it = kv.values.find({edges.begin(), edges.end()});
        if (it == kv.values.end()) {
          throw InputError(f.path, "/values",
                           "no value for path \"" + join_indices(edges) + "\"");
        }
        return it->second;
      });
}

inline sft::WordFunction parse_word_function(const InputFile& f, const sft::Graph& g) {
  const KeyedValues kv = parse_keyed_values(f);
  sft::WordFunction out{kv.depth, {}};
  for (const sft::Word& w : sft::admissible_words(g, kv.depth)) {
    const auto it = kv.values.find(w);
    if (it == kv.values.end()) {
      throw InputError(f.path, "/values", "no value for word \"" + join_indices(w) + "\"");
    }
    out.values.push_back(it->second);
  }
  return out;
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

inline Json to_json(const std::vector<TracePoint>& trace) {
  Json out = Json::array();
  for (const auto& p : trace) out.push_back(Json{{"n", p.level}, {"value", p.value}});
  return out;
}

}  // namespace bratteli::cli
