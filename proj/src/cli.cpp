#include "surgery/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <variant>

#include "surgery/error.hpp"
#include "surgery/model_file.hpp"
#include "surgery/random_models.hpp"

namespace surgery {

using nlohmann::ordered_json;

namespace {

struct Options {
  int precision = 6;
  double tol = kTolStoch;
  std::string output;
};

/// A failure that already has a report document to print.
struct Reported {
  int code;
  ordered_json doc;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty variable name in '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw ParseError("expected a comma-separated list of variables");
  return out;
}

/// The marginal of omega on `names`, in that order.
JointState project(const JointState& omega, const std::vector<std::string>& names) {
  return permute_state(marginalize(omega, names), names);
}

ordered_json error_json(std::string_view kind, std::string_view detail) {
  return ordered_json{{"kind", "report"}, {"ok", false}, {"error", kind}, {"detail", detail}};
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::NoFullSupport ? kExitNoSupport : kExitFailure; }

ordered_json cmd_validate(const std::string& path, const Options& opt) {
  ModelFile f = load_model_file(path);
  ordered_json violations = ordered_json::array();
  CausalDag dag = build_dag(f);
  if (f.cpts) {
    for (const auto& v : validate(make_model(dag, *f.cpts), opt.tol)) {
      ordered_json entry{{"kind", to_string(v.kind)}, {"node", v.node}, {"detail", v.detail}};
      if (v.column) entry["column"] = *v.column;
      violations.push_back(std::move(entry));
    }
  }
  if (f.joint) {
    double sum = 0.0;
    for (double p : *f.joint) sum += p;
    if (std::abs(sum - 1.0) > opt.tol) {
      violations.push_back({{"kind", "StochasticityViolation"}, {"node", "joint"}, {"detail", "entries sum to " + std::to_string(sum)}});
    }
  }
  ordered_json doc{{"kind", "report"},
                   {"ok", violations.empty()},
                   {"variables", f.variables.size()},
                   {"edges", f.edges.size()},
                   {"semi_markovian", is_semi_markovian(dag)},
                   {"violations", violations}};
  if (!violations.empty()) throw Reported{kExitFailure, std::move(doc)};
  return doc;
}

ordered_json cmd_interpret(const std::string& path, const Options& opt) {
  ModelFile f = load_model_file(path);
  Model m = build_model(f);
  return state_json(evaluate(network_diagram(m.dag), m), opt.tol);
}

ordered_json cmd_marginal(const std::string& path, const std::string& keep, const Options& opt) {
  return state_json(project(build_joint(load_model_file(path)), split_names(keep)), opt.tol);
}

ordered_json cmd_disintegrate(const std::string& path, const std::string& split, const Options& opt) {
  auto bar = split.find('|');
  if (bar == std::string::npos) throw ParseError("--split expects 'A,..|B,..'");
  auto a = split_names(split.substr(0, bar));
  auto b = split_names(split.substr(bar + 1));
  std::vector<std::string> order = a;
  order.insert(order.end(), b.begin(), b.end());
  Disintegration d = disintegrate(project(build_joint(load_model_file(path)), order), a.size());
  return ordered_json{{"kind", "channel"},
                      {"dom", space_json(d.channel.dom())},
                      {"cod", space_json(d.channel.cod())},
                      {"prior", d.prior.to_vector()},
                      {"columns", columns_json(d.channel)},
                      {"diagnostics",
                       {{"min_entry", d.channel.matrix().min_entry()},
                        {"stochastic_defect", d.channel.matrix().stochastic_defect()},
                        {"tolerance", opt.tol}}}};
}

ordered_json cmd_comb(const std::string& path, const std::vector<std::string>& grouping, const Options& opt) {
  if (grouping.size() != 3) throw ParseError("--grouping expects three groups A B C");
  auto a = split_names(grouping[0]);
  auto b = split_names(grouping[1]);
  auto c = split_names(grouping[2]);
  std::vector<std::string> order = a;
  order.insert(order.end(), b.begin(), b.end());
  order.insert(order.end(), c.begin(), c.end());
  CombDisintegration cd = comb_disintegrate(project(build_joint(load_model_file(path)), order), a.size(), b.size());
  const double defect = comb_defect(cd.comb.map(), cd.comb.a().dim());
  return ordered_json{{"kind", "comb"},
                      {"A", space_json(cd.comb.a())},
                      {"B", space_json(cd.comb.b())},
                      {"C", space_json(cd.comb.c())},
                      {"f", columns_json(cd.comb.map())},
                      {"g", columns_json(cd.channel)},
                      {"diagnostics",
                       {{"comb_defect", defect}, {"is_comb", defect <= kTolComb}, {"tolerance", opt.tol}}}};
}

ordered_json cmd_intervene(const std::string& path, const std::string& target, const std::string& mode,
                           const Options& opt) {
  ModelFile f = load_model_file(path);
  if (mode == "oracle") {
    Model m = build_model(f);
    ordered_json doc = state_json(intervene_oracle(m, target), opt.tol);
    doc["intervention"] = {{"target", target}, {"mode", "oracle"}};
    return doc;
  }
  CausalDag dag = build_dag(f);
  FactorizeResult r = factorize_single(network_diagram(dag), target);
  if (const auto* ni = std::get_if<NotIdentifiable>(&r)) {
    ordered_json diag{{"witness", ni->witness}, {"reason", ni->reason}};
    // Rejections the confounding-path criterion would still allow are flagged.
    if (is_semi_markovian(dag)) {
      diag["confounding_path_criterion"] = confounded_with_child(dag, target) ? "not identifiable" : "identifiable";
    }
    throw Reported{kExitNotIdentifiable, ordered_json{{"kind", "report"},
                                                      {"ok", false},
                                                      {"error", "NotIdentifiable"},
                                                      {"target", ni->target},
                                                      {"diagnostics", std::move(diag)}}};
  }
  const auto& fact = std::get<SurgeryFactorisation>(r);
  InterventionReport rep = intervene_from_observational(build_joint(f), fact);
  ordered_json doc = state_json(rep.state, opt.tol);
  doc["intervention"] = {{"target", target}, {"mode", "observational"}};
  doc["factorisation"] = factorisation_json(fact);
  doc["diagnostics"]["input_min_entry"] = rep.min_input_entry;
  doc["diagnostics"]["comb_defect"] = rep.comb_defect;
  return doc;
}

ordered_json cmd_randcheck(std::uint64_t seed, std::size_t count, std::size_t max_nodes, const Options& opt) {
  RandcheckReport r = randcheck(seed, count, max_nodes, kTolComb);
  ordered_json doc{{"kind", "report"},
                   {"ok", r.deviations == 0},
                   {"seed", r.seed},
                   {"models", r.models},
                   {"targets", r.targets},
                   {"identifiable", r.identifiable},
                   {"not_identifiable", r.not_identifiable},
                   {"deviations", r.deviations},
                   {"max_deviation", r.max_deviation},
                   {"criterion_mismatches", r.criterion_mismatches},
                   {"notes", r.notes},
                   {"diagnostics", {{"tolerance", r.tol}, {"precision", opt.precision}}}};
  if (r.deviations > 0) throw Reported{kExitFailure, std::move(doc)};
  return doc;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interventional distributions via comb disintegration", "surgery"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--precision", opt.precision, "Decimals in printed numbers")->check(CLI::Range(0, 17));
  app.add_option("--tol", opt.tol, "Tolerance for stochasticity checks")->check(CLI::PositiveNumber);
  app.add_option("--output", opt.output, "Write the result here instead of stdout");

  std::string path, keep, split, target, mode = "observational";
  std::vector<std::string> grouping;
  std::uint64_t seed = 0;
  std::size_t count = 200, max_nodes = 5;

  auto* validate_cmd = app.add_subcommand("validate", "Check a model file");
  validate_cmd->add_option("model", path)->required();
  auto* interpret_cmd = app.add_subcommand("interpret", "Observed joint of a model");
  interpret_cmd->add_option("model", path)->required();
  auto* marginal_cmd = app.add_subcommand("marginal", "Marginal of a joint");
  marginal_cmd->add_option("file", path)->required();
  marginal_cmd->add_option("--keep", keep, "Variables to keep, comma-separated")->required();
  auto* disint_cmd = app.add_subcommand("disintegrate", "Prior and channel of a joint");
  disint_cmd->add_option("file", path)->required();
  disint_cmd->add_option("--split", split, "A,..|B,..")->required();
  auto* comb_cmd = app.add_subcommand("comb", "Comb disintegration of a joint");
  comb_cmd->add_option("file", path)->required();
  comb_cmd->add_option("--grouping", grouping, "Three groups A B C")->required()->expected(3);
  auto* intervene_cmd = app.add_subcommand("intervene", "Randomised intervention at one variable");
  intervene_cmd->add_option("file", path)->required();
  intervene_cmd->add_option("--do", target, "Variable to intervene on")->required();
  intervene_cmd->add_option("--mode", mode)->check(CLI::IsMember({"observational", "oracle"}));
  auto* randcheck_cmd = app.add_subcommand("randcheck", "Pipeline against the oracle on random models");
  randcheck_cmd->add_option("--seed", seed);
  randcheck_cmd->add_option("--count", count);
  randcheck_cmd->add_option("--max-nodes", max_nodes)->check(CLI::Range(2, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  int code = kExitOk;
  ordered_json doc;
  try {
    if (*validate_cmd) {
      doc = cmd_validate(path, opt);
    } else if (*interpret_cmd) {
      doc = cmd_interpret(path, opt);
    } else if (*marginal_cmd) {
      doc = cmd_marginal(path, keep, opt);
    } else if (*disint_cmd) {
      doc = cmd_disintegrate(path, split, opt);
    } else if (*comb_cmd) {
      doc = cmd_comb(path, grouping, opt);
    } else if (*intervene_cmd) {
      doc = cmd_intervene(path, target, mode, opt);
    } else {
      doc = cmd_randcheck(seed, count, max_nodes, opt);
    }
  } catch (Reported& r) {
    code = r.code;
    doc = std::move(r.doc);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    doc = error_json(to_string(e.kind()), e.what());
    err << e.what() << "\n";
  }

  const std::string text = render(doc, opt.precision);
  if (opt.output.empty()) {
    out << text;
  } else {
    std::ofstream file(opt.output, std::ios::binary);
    if (!file) {
      err << "cannot write '" << opt.output << "'\n";
      return kExitFailure;
    }
    file << text;
  }
  return code;
}

}  // namespace surgery
