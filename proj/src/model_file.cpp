#include "surgery/model_file.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace surgery {

using nlohmann::ordered_json;

namespace {

template <typename T>
T field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where + ": field '" + key + "' has the wrong type");
  }
}

double probability(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  double p = v.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) throw ParseError(where + ": probability " + v.dump() + " outside [0, 1]");
  return p;
}

}  // namespace

ModelFile parse_model_file(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");

  ModelFile out;
  if (!doc.contains("variables") || !doc["variables"].is_array()) throw ParseError("missing 'variables' array");
  for (std::size_t i = 0; i < doc["variables"].size(); ++i) {
    const auto& v = doc["variables"][i];
    const std::string where = "variables[" + std::to_string(i) + "]";
    if (!v.is_object()) throw ParseError(where + ": expected an object");
    NodeDecl n;
    n.name = field<std::string>(v, "name", where);
    auto card = field<long long>(v, "cardinality", where);
    if (card < 1) throw ParseError(where + ": cardinality must be positive");
    n.card = static_cast<std::size_t>(card);
    n.latent = v.contains("latent") ? field<bool>(v, "latent", where) : false;
    out.variables.push_back(std::move(n));
  }

  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw ParseError("'edges' must be an array");
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
      const auto& e = doc["edges"][i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        throw ParseError("edges[" + std::to_string(i) + "]: expected [parent, child]");
      }
      out.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }

  if (doc.contains("cpts")) {
    if (!doc["cpts"].is_object()) throw ParseError("'cpts' must be an object");
    CptColumns cpts;
    for (const auto& [name, cols] : doc["cpts"].items()) {
      const std::string where = "cpts." + name;
      if (!cols.is_array()) throw ParseError(where + ": expected a list of columns");
      auto& dst = cpts[name];
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!cols[c].is_array()) throw ParseError(where + "[" + std::to_string(c) + "]: expected a column");
        std::vector<double> col;
        for (std::size_t r = 0; r < cols[c].size(); ++r) {
          col.push_back(probability(cols[c][r], where + "[" + std::to_string(c) + "][" + std::to_string(r) + "]"));
        }
        if (!dst.empty() && dst.front().size() != col.size()) throw ParseError(where + ": columns differ in length");
        dst.push_back(std::move(col));
      }
    }
    out.cpts = std::move(cpts);
  }

  if (doc.contains("joint")) {
    if (!doc["joint"].is_array()) throw ParseError("'joint' must be an array");
    std::vector<double> joint;
    for (std::size_t i = 0; i < doc["joint"].size(); ++i) {
      joint.push_back(probability(doc["joint"][i], "joint[" + std::to_string(i) + "]"));
    }
    std::size_t dim = 1;
    for (const auto& n : out.variables) {
      if (!n.latent) dim *= n.card;
    }
    if (joint.size() != dim) {
      throw ParseError("joint has " + std::to_string(joint.size()) + " entries, observed variables need " +
                       std::to_string(dim));
    }
    out.joint = std::move(joint);
  }
  return out;
}

ModelFile load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_file(buf.str());
}

ordered_json to_json(const ModelFile& f) {
  ordered_json doc;
  doc["variables"] = ordered_json::array();
  for (const auto& n : f.variables) {
    doc["variables"].push_back({{"name", n.name}, {"cardinality", n.card}, {"latent", n.latent}});
  }
  doc["edges"] = ordered_json::array();
  for (const auto& [p, c] : f.edges) doc["edges"].push_back({p, c});
  if (f.cpts) {
    doc["cpts"] = ordered_json::object();
    // Declaration order rather than map order.
    for (const auto& n : f.variables) {
      if (auto it = f.cpts->find(n.name); it != f.cpts->end()) doc["cpts"][n.name] = it->second;
    }
  }
  if (f.joint) doc["joint"] = *f.joint;
  return doc;
}

CausalDag build_dag(const ModelFile& f) { return CausalDag(f.variables, f.edges); }

Model build_model(const ModelFile& f) {
  if (!f.cpts) throw ParseError("this command needs 'cpts'");
  return make_model(build_dag(f), *f.cpts);
}

VarSpace observed_space(const ModelFile& f) {
  std::vector<Var> vars;
  for (const auto& n : f.variables) {
    if (!n.latent) vars.push_back({n.name, n.card});
  }
  return VarSpace(std::move(vars));
}

JointState build_joint(const ModelFile& f) {
  if (f.joint) return JointState(observed_space(f), *f.joint);
  if (!f.cpts) throw ParseError("the file has neither 'joint' nor 'cpts'");
  Model m = build_model(f);
  return evaluate(network_diagram(m.dag), m);
}

CptColumns cpt_columns(const Model& m) {
  CptColumns out;
  for (const auto& [name, cpt] : m.interp) {
    auto& cols = out[name];
    for (std::size_t c = 0; c < cpt.cols(); ++c) {
      std::vector<double> col(cpt.rows());
      for (std::size_t r = 0; r < cpt.rows(); ++r) col[r] = cpt(r, c);
      cols.push_back(std::move(col));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Result documents

ordered_json space_json(const VarSpace& s) {
  ordered_json out = ordered_json::array();
  for (const auto& v : s.vars()) out.push_back({{"name", v.name}, {"cardinality", v.card}});
  return out;
}

ordered_json state_json(const JointState& s, double tol) {
  double sum = s.values().sum();
  return ordered_json{{"kind", "state"},
                      {"variables", space_json(s.vars())},
                      {"entries", s.to_vector()},
                      {"diagnostics", {{"min_entry", s.matrix().min_entry()}, {"sum", sum}, {"tolerance", tol}}}};
}

ordered_json columns_json(const RMatrix& m) {
  ordered_json cols = ordered_json::array();
  for (std::size_t c = 0; c < m.cols(); ++c) {
    ordered_json col = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    cols.push_back(std::move(col));
  }
  return cols;
}

ordered_json factorisation_json(const SurgeryFactorisation& f) {
  return ordered_json{{"kind", "factorisation"},
                      {"target", f.target},
                      {"f1", f.f1},
                      {"g", f.g},
                      {"f2", f.f2},
                      {"grouping",
                       {{"context", f.grouping.context}, {"A", f.grouping.a}, {"B", f.grouping.b}, {"C", f.grouping.c}}}};
}

namespace {

void emit(const ordered_json& v, int precision, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (v.type()) {
    case ordered_json::value_t::number_float: {
      double x = v.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        break;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", precision, x);
      std::string s = buf;
      if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
      // Tiny tolerances would print as 0 in fixed notation.
      if (x != 0.0 && s.find_first_not_of("-0.") == std::string::npos) {
        std::snprintf(buf, sizeof buf, "%.*e", precision, x);
        s = buf;
      }
      out += s;
      break;
    }
    case ordered_json::value_t::array: {
      bool flat = std::all_of(v.begin(), v.end(), [](const ordered_json& e) { return e.is_primitive(); });
      if (v.empty()) {
        out += "[]";
      } else if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          emit(v[i], precision, depth + 1, out);
        }
        out += "]";
      } else {
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
          out += pad;
          emit(v[i], precision, depth + 1, out);
          out += i + 1 < v.size() ? ",\n" : "\n";
        }
        out += close_pad + "]";
      }
      break;
    }
    case ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      // Short records such as {"name": .., "cardinality": ..} stay on one line.
      if (v.size() <= 2 && std::all_of(v.begin(), v.end(), [](const ordered_json& e) { return e.is_primitive(); })) {
        out += "{";
        std::size_t i = 0;
        for (const auto& [key, val] : v.items()) {
          out += (i++ ? ", " : "") + ordered_json(key).dump() + ": ";
          emit(val, precision, depth + 1, out);
        }
        out += "}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, val] : v.items()) {
        out += pad + ordered_json(key).dump() + ": ";
        emit(val, precision, depth + 1, out);
        out += ++i < v.size() ? ",\n" : "\n";
      }
      out += close_pad + "}";
      break;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string render(const ordered_json& doc, int precision) {
  std::string out;
  emit(doc, precision, 0, out);
  out += "\n";
  return out;
}

}  // namespace surgery
