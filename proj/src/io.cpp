#include "jsr/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace jsr {

using ojson = nlohmann::ordered_json;

// ----------------------------------------------------------------- PRNG

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int SplitMix64::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

std::vector<MatrixSet> generate_instance(const GeneratorParams& p) {
  if (p.dim < 1 || p.set_count < 1 || p.set_size < 1)
    throw DomainError("generator: dim, set_count and set_size must be positive");
  if (!(p.density > 0.0 && p.density <= 1.0))
    throw DomainError("generator: density must lie in (0, 1]");
  if (!(p.entry_scale > 0.0) || !std::isfinite(p.entry_scale))
    throw DomainError("generator: entry_scale must be positive");
  SplitMix64 rng(p.seed);
  std::vector<MatrixSet> out;
  for (std::size_t s = 0; s < p.set_count; ++s) {
    std::vector<NonnegMatrix> members;
    for (std::size_t k = 0; k < p.set_size; ++k) {
      Eigen::MatrixXd a(p.dim, p.dim);
      for (Index i = 0; i < p.dim; ++i)
        for (Index j = 0; j < p.dim; ++j) {
          const double u1 = rng.uniform();
          a(i, j) = u1 < p.density ? p.entry_scale * (1.0 - rng.uniform()) : 0.0;
        }
      members.emplace_back(std::move(a));
    }
    out.emplace_back(std::move(members), "S" + std::to_string(s + 1));
  }
  return out;
}

ojson generator_metadata(const GeneratorParams& p) {
  ojson g;
  g["dim"] = p.dim;
  g["set_count"] = p.set_count;
  g["set_size"] = p.set_size;
  g["density"] = p.density;
  g["entry_scale"] = p.entry_scale;
  ojson m;
  m["seed"] = p.seed;
  m["generator"] = std::move(g);
  return m;
}

// -------------------------------------------------------------- parsing

namespace {

struct Pos {
  std::size_t line = 0;
  std::size_t column = 0;
};

Pos position_of(std::string_view text, std::size_t offset) {
  Pos p{1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

// Start offsets of every JSON value (containers and scalars, not object
// keys) in document order. The text is already known to be valid JSON.
std::vector<std::size_t> value_offsets(std::string_view t) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  auto skip_ws = [&](std::size_t k) {
    while (k < t.size() && std::isspace(static_cast<unsigned char>(t[k]))) ++k;
    return k;
  };
  while (i < t.size()) {
    const char c = t[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ':' || c == ']' ||
        c == '}') {
      ++i;
    } else if (c == '[' || c == '{') {
      out.push_back(i++);
    } else if (c == '"') {
      const std::size_t start = i++;
      while (i < t.size() && t[i] != '"') i += t[i] == '\\' ? 2 : 1;
      ++i;
      const std::size_t next = skip_ws(i);
      if (next >= t.size() || t[next] != ':') out.push_back(start);
    } else {
      out.push_back(i);
      while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != ',' &&
             t[i] != ']' && t[i] != '}')
        ++i;
    }
  }
  return out;
}

void index_nodes(const ojson& j, std::unordered_map<const ojson*, std::size_t>& idx,
                 std::size_t& counter) {
  idx[&j] = counter++;
  if (j.is_structured())
    for (const auto& child : j) index_nodes(child, idx, counter);
}

class Locator {
 public:
  Locator(std::string_view text, const ojson& root) : text_(text), offsets_(value_offsets(text)) {
    std::size_t c = 0;
    index_nodes(root, idx_, c);
  }
  [[noreturn]] void fail(const ojson& node, const std::string& what) const {
    const auto it = idx_.find(&node);
    if (it == idx_.end() || it->second >= offsets_.size()) throw ParseError(what, 0, 0);
    const Pos p = position_of(text_, offsets_[it->second]);
    throw ParseError(what, p.line, p.column);
  }

 private:
  std::string_view text_;
  std::vector<std::size_t> offsets_;
  std::unordered_map<const ojson*, std::size_t> idx_;
};

}  // namespace

Instance parse_instance_file(std::string_view text) {
  ojson root;
  try {
    root = ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    if (const auto col = msg.find("column "); col != std::string::npos)
      if (const auto colon = msg.find(": ", col); colon != std::string::npos)
        msg = msg.substr(colon + 2);
    const std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    const Pos p = position_of(text, off);
    throw ParseError("syntax error: " + msg, p.line, p.column);
  } catch (const nlohmann::json::out_of_range& e) {
    // number overflow: the exception carries the token but no offset
    const std::string msg = e.what();
    std::size_t line = 0, column = 0;
    if (const auto q = msg.find('\''); q != std::string::npos) {
      const auto token = msg.substr(q + 1, msg.rfind('\'') - q - 1);
      if (const auto at = text.find(token); !token.empty() && at != std::string_view::npos) {
        const Pos p = position_of(text, at);
        line = p.line;
        column = p.column;
      }
    }
    throw ParseError("non-finite entry: " + msg.substr(msg.find(']') + 2), line, column);
  }
  const Locator loc(text, root);

  if (!root.is_object()) loc.fail(root, "top level must be an object");
  if (!root.contains("dim")) loc.fail(root, "missing \"dim\"");
  const auto& jd = root["dim"];
  if (!jd.is_number_integer() || jd.get<long long>() < 1)
    loc.fail(jd, "\"dim\" must be a positive integer");
  const auto dim = static_cast<Index>(jd.get<long long>());
  if (!root.contains("sets")) loc.fail(root, "missing \"sets\"");
  const auto& js = root["sets"];
  if (!js.is_array() || js.empty()) loc.fail(js, "\"sets\" must be a nonempty array");

  Instance inst;
  for (std::size_t s = 0; s < js.size(); ++s) {
    const auto& set = js[s];
    const std::string where = "set " + std::to_string(s);
    if (!set.is_object()) loc.fail(set, where + ": must be an object");
    std::string name;
    if (set.contains("name")) {
      if (!set["name"].is_string()) loc.fail(set["name"], where + ": \"name\" must be a string");
      name = set["name"].get<std::string>();
    }
    const std::string label = name.empty() ? where : where + " ('" + name + "')";
    if (!set.contains("matrices")) loc.fail(set, label + ": missing \"matrices\"");
    const auto& jm = set["matrices"];
    if (!jm.is_array() || jm.empty()) loc.fail(jm, label + ": \"matrices\" must be a nonempty array");

    std::vector<NonnegMatrix> members;
    for (std::size_t k = 0; k < jm.size(); ++k) {
      const auto& mat = jm[k];
      const std::string mw = label + ", matrix " + std::to_string(k);
      if (!mat.is_array() || mat.size() != static_cast<std::size_t>(dim))
        loc.fail(mat, mw + ": expected " + std::to_string(dim) + " rows");
      Eigen::MatrixXd a(dim, dim);
      for (Index i = 0; i < dim; ++i) {
        const auto& row = mat[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
          loc.fail(row, mw + ", row " + std::to_string(i) + ": expected " + std::to_string(dim) +
                            " entries");
        for (Index j = 0; j < dim; ++j) {
          const auto& e = row[static_cast<std::size_t>(j)];
          const std::string ew =
              mw + ", entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
          if (!e.is_number()) loc.fail(e, ew + ": not a number");
          const double v = e.get<double>();
          if (!std::isfinite(v)) loc.fail(e, ew + ": not finite");
          if (v < 0.0) loc.fail(e, ew + ": negative entry " + format_double(v));
          a(i, j) = v;
        }
      }
      members.emplace_back(std::move(a));
    }
    inst.sets.emplace_back(std::move(members), name);
  }
  if (root.contains("metadata")) inst.metadata = root["metadata"];
  return inst;
}

std::vector<MatrixSet> parse_instance(std::string_view text) {
  return parse_instance_file(text).sets;
}

// -------------------------------------------------------------- writing

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string serialize_instance(const std::vector<MatrixSet>& sets, const ojson& metadata) {
  if (sets.empty()) throw DimensionError("serialize_instance: no sets");
  const Index dim = sets.front().dim();
  std::ostringstream os;
  os << "{\n  \"dim\": " << dim << ",\n  \"sets\": [\n";
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (sets[s].dim() != dim) throw DimensionError("serialize_instance: dimension mismatch");
    os << "    {\n      \"name\": " << ojson(sets[s].name()).dump() << ",\n      \"matrices\": [\n";
    for (std::size_t k = 0; k < sets[s].size(); ++k) {
      const auto& a = sets[s][k];
      os << "        [";
      for (Index i = 0; i < dim; ++i) {
        os << (i ? ", [" : "[");
        for (Index j = 0; j < dim; ++j) os << (j ? ", " : "") << format_double(a(i, j));
        os << "]";
      }
      os << "]" << (k + 1 < sets[s].size() ? "," : "") << "\n";
    }
    os << "      ]\n    }" << (s + 1 < sets.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"metadata\": " << metadata.dump() << "\n}\n";
  return os.str();
}

ojson to_json(const RadiusBracket& b) {
  ojson j;
  j["lo"] = b.lo;
  j["hi"] = b.hi;
  j["depth"] = b.depth;
  j["norm"] = std::string(to_string(b.norm));
  return j;
}

ojson to_json(const ChainReport& r) {
  ojson j;
  j["theorem_id"] = r.theorem_id;
  ojson links = ojson::array();
  for (const auto& l : r.links) {
    ojson x;
    x["label"] = l.label;
    x["bracket"] = to_json(l.bracket);
    x["relation_to_next"] = std::string(to_string(l.relation_to_next));
    links.push_back(std::move(x));
  }
  j["links"] = std::move(links);
  j["verdict"] = std::string(to_string(r.verdict));
  j["margins"] = r.margins;
  ojson skipped = ojson::array();
  for (const auto& s : r.skipped) skipped.push_back({{"label", s.label}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped);
  j["notes"] = r.notes;
  ojson st;
  st["seed"] = r.settings.seed;
  st["depth"] = r.settings.depth;
  st["norm"] = std::string(to_string(r.settings.norm));
  st["word_cap"] = r.settings.estimator.word_cap;
  st["word_budget"] = r.settings.estimator.word_budget;
  st["set_cap"] = r.settings.estimator.set_cap;
  st["word_tol"] = r.settings.estimator.word_tol;
  st["le_tol"] = r.settings.le_tol;
  st["eq_tol"] = r.settings.eq_tol;
  j["settings"] = std::move(st);
  return j;
}

std::string report_json(const ChainReport& r) { return to_json(r).dump(2) + "\n"; }

std::string gelfand_csv(const GelfandSequence& g) {
  std::string out = "m,lower_m,upper_m,lower_envelope,upper_envelope\n";
  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    const auto& e = g.entries[i];
    out += std::to_string(e.m) + "," + format_double(e.lower) + "," + format_double(e.upper) +
           "," + format_double(g.lower_envelope(i)) + "," + format_double(g.upper_envelope(i)) +
           "\n";
  }
  return out;
}

std::string symmetrization_csv(const SymmetrizationSequence& s) {
  std::string out = "n,members,lower,upper\n";
  for (const auto& l : s.levels)
    out += std::to_string(l.n) + "," + std::to_string(l.members) + "," + format_double(l.r.lo) +
           "," + format_double(l.r.hi) + "\n";
  out += "target,," + format_double(s.target.lo) + "," + format_double(s.target.hi) + "\n";
  return out;
}

}  // namespace jsr
