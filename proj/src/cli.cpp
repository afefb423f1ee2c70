#include "msflow/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "msflow/acceptance.hpp"
#include "msflow/flow_lab.hpp"
#include "msflow/homology.hpp"
#include "msflow/planner.hpp"

namespace msflow::cli {

namespace {

using nlohmann::json;

struct Outcome {
  json payload;
  int code = kExitOk;
};

struct SeifertOptions {
  std::string spec;
  long long genus = -1;
  long long euler = std::numeric_limits<long long>::min();
  std::string fibers;
};

void add_seifert_options(CLI::App* app, SeifertOptions& o) {
  app->add_option("--spec", o.spec, "compact spec g=G,e=E[,fibers=p/q;...]");
  app->add_option("--genus", o.genus, "genus of the base surface");
  app->add_option("--euler", o.euler, "Euler number");
  app->add_option("--fibers", o.fibers, "exceptional fibers p/q separated by ',' or ';'");
}

SeifertClosed seifert_from(const SeifertOptions& o) {
  if (!o.spec.empty()) return parse_seifert(o.spec);
  if (o.genus < 0 || o.euler == std::numeric_limits<long long>::min())
    throw Error(ErrorKind::MalformedSpec, "need --genus and --euler (or --spec)");
  std::string text = "g=" + std::to_string(o.genus) + ",e=" + std::to_string(o.euler);
  std::string fibers = o.fibers;
  std::replace(fibers.begin(), fibers.end(), ',', ';');
  fibers.erase(std::remove(fibers.begin(), fibers.end(), ' '), fibers.end());
  if (!fibers.empty()) text += ",fibers=" + fibers;
  return parse_seifert(text);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedSpec, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphManifold graph_from_file(const std::string& path) { return parse_graph(read_file(path)); }

json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return v.convert_to<long long>();
  return v.str();
}

json group_json(const H1Group& g) {
  json factors = json::array();
  for (const auto& d : g.invariant_factors) factors.push_back(big_to_json(d));
  return {{"group", g.to_string()},
          {"free_rank", g.free_rank},
          {"invariant_factors", factors},
          {"generators", g.generator_names}};
}

json vector_json(const IntVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(big_to_json(v(i)));
  return out;
}

bool is_verification_failure(ErrorKind k) {
  return k == ErrorKind::OrbitNotClosed || k == ErrorKind::RepairFailed || k == ErrorKind::VanishingField;
}

void write_out(const std::string& path, const json& doc) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::MalformedSpec, "cannot write '" + path + "'");
  f << doc.dump(2) << "\n";
}

// plan output, or a short summary when the ledger goes to a file
Outcome finish_plan(json ledger, bool maximal, Coeff bound, const std::string& out_path) {
  const auto total = ledger.at("total").get<Coeff>();
  ledger["maximal"] = maximal;
  ledger["bound"] = bound;
  const bool match = total == bound;
  if (maximal) ledger["bound_match"] = match;
  const int code = maximal && !match ? kExitFailed : kExitOk;
  if (out_path.empty()) return {std::move(ledger), code};
  write_out(out_path, ledger);
  json summary = {{"out", out_path}, {"total", total}, {"maximal", maximal}, {"bound", bound}};
  if (maximal) summary["bound_match"] = match;
  return {summary, code};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  CLI::App app{"Orbit bounds, plans, homology and model checks for non-singular Morse-Smale fields", "msflow"};
  app.require_subcommand(1);
  std::function<Outcome()> action;

  // bound
  auto* bound = app.add_subcommand("bound", "closed-form orbit bounds");
  bound->require_subcommand(1);
  SeifertOptions bound_seifert_opts;
  auto* bound_seifert_cmd = bound->add_subcommand("seifert", "closed Seifert manifold");
  add_seifert_options(bound_seifert_cmd, bound_seifert_opts);
  bound_seifert_cmd->callback([&] {
    action = [&] {
      const auto m = seifert_from(bound_seifert_opts);
      return Outcome{{{"bound", bound_seifert(m.genus(), m.euler(), m.exceptional_count())}}};
    };
  });
  std::string bound_graph_file;
  auto* bound_graph_cmd = bound->add_subcommand("graph", "graph manifold from a JSON file");
  bound_graph_cmd->add_option("file", bound_graph_file)->required();
  bound_graph_cmd->callback([&] {
    action = [&] { return Outcome{{{"bound", bound_graph(graph_from_file(bound_graph_file))}}}; };
  });
  std::vector<std::string> sum_files;
  auto* bound_sum_cmd = bound->add_subcommand("sum", "connected sum of graph manifolds");
  bound_sum_cmd->add_option("files", sum_files)->required();
  bound_sum_cmd->callback([&] {
    action = [&] {
      std::vector<GraphManifold> parts;
      for (const auto& f : sum_files) parts.push_back(graph_from_file(f));
      return Outcome{{{"bound", bound_sum(parts)}}};
    };
  });

  // plan
  auto* plan = app.add_subcommand("plan", "orbit ledger of the construction");
  plan->require_subcommand(1);
  SeifertOptions plan_seifert_opts;
  std::string plan_class, plan_out, plan_graph_file;
  auto* plan_seifert_cmd = plan->add_subcommand("seifert", "closed Seifert manifold");
  add_seifert_options(plan_seifert_cmd, plan_seifert_opts);
  plan_seifert_cmd->add_option("--class", plan_class, "class spec or 'max'")->required();
  plan_seifert_cmd->add_option("--out", plan_out, "write the ledger to this file");
  plan_seifert_cmd->callback([&] {
    action = [&] {
      const auto m = seifert_from(plan_seifert_opts);
      const auto c = plan_class == "max" ? maximal_class(m) : parse_class(plan_class);
      const auto ledger = plan_seifert(m, c);
      return finish_plan(to_json(ledger), class_is_maximal(m, c),
                         bound_seifert(m.genus(), m.euler(), m.exceptional_count()), plan_out);
    };
  });
  auto* plan_graph_cmd = plan->add_subcommand("graph", "graph manifold from a JSON file");
  plan_graph_cmd->add_option("file", plan_graph_file)->required();
  plan_graph_cmd->add_option("--class", plan_class, "per-piece class specs joined by '|', or 'max'")->required();
  plan_graph_cmd->add_option("--out", plan_out, "write the ledger to this file");
  plan_graph_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_file(plan_graph_file);
      const auto c = plan_class == "max" ? maximal_class(g) : parse_graph_class(plan_class);
      const auto ledger = plan_graph(g, c);
      return finish_plan(to_json(ledger), class_is_maximal(g, c), bound_graph(g), plan_out);
    };
  });

  // homology
  auto* homology = app.add_subcommand("homology", "first homology, maximality, admissibility");
  homology->require_subcommand(1);
  SeifertOptions hom_seifert_opts;
  std::string hom_class, hom_graph_file;
  auto* hom_seifert_cmd = homology->add_subcommand("seifert", "closed Seifert manifold");
  add_seifert_options(hom_seifert_cmd, hom_seifert_opts);
  hom_seifert_cmd->add_option("--class", hom_class, "class spec or 'max'");
  hom_seifert_cmd->callback([&] {
    action = [&] {
      const auto m = seifert_from(hom_seifert_opts);
      const auto h = seifert_h1(m);
      json doc = group_json(h);
      doc = {{"manifold", print_seifert(m)}, {"h1", doc}};
      if (!hom_class.empty()) {
        const auto c = validate_class(m, hom_class == "max" ? maximal_class(m) : parse_class(hom_class));
        const IntVector v = h.embed(c);
        doc["class"] = {{"spec", print_class(c)},
                        {"element", vector_json(v)},
                        {"zero", h.is_zero(v)},
                        {"maximal", class_is_maximal(m, c)},
                        {"admissible", true}};
      }
      return Outcome{doc};
    };
  });
  auto* hom_graph_cmd = homology->add_subcommand("graph", "graph manifold from a JSON file");
  hom_graph_cmd->add_option("file", hom_graph_file)->required();
  hom_graph_cmd->add_option("--class", hom_class, "per-piece class specs joined by '|', or 'max'");
  hom_graph_cmd->callback([&] {
    action = [&] {
      const auto g = graph_from_file(hom_graph_file);
      const auto h = graph_h1(g);
      json doc = {{"manifold", graph_to_json(g)}, {"h1", group_json(h.group)}, {"cycle_rank", g.cycle_rank()}};
      if (!hom_class.empty()) {
        const auto c = validate_class(g, hom_class == "max" ? maximal_class(g) : parse_graph_class(hom_class));
        const IntVector v = h.embed(c);
        doc["class"] = {{"element", vector_json(v)},
                        {"zero", h.group.is_zero(v)},
                        {"cycle_coordinates", vector_json(h.project(v))},
                        {"maximal", class_is_maximal(g, c)},
                        {"admissible", class_is_admissible(h, v)}};
      }
      return Outcome{doc};
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "numerical checks of the model fields");
  verify->require_subcommand(1);
  long lambda = 0;
  double dt = kDefaultDt;
  std::string csv;
  auto* torus_cmd = verify->add_subcommand("torus-model", "torus destruction model");
  torus_cmd->add_option("--lambda", lambda, "integer slope lambda != 0")->required();
  torus_cmd->add_option("--dt", dt, "RK4 step");
  torus_cmd->add_option("--csv", csv, "dump the first detected orbit");
  torus_cmd->callback([&] {
    action = [&] {
      auto r = verify_torus_model(lambda, dt, csv);
      const bool pass = r.at("pass").get<bool>();
      return Outcome{std::move(r), pass ? kExitOk : kExitFailed};
    };
  });
  auto* round_cmd = verify->add_subcommand("round-handle", "round handle model");
  round_cmd->add_option("--csv", csv, "dump the attracting trajectory");
  round_cmd->callback([&] {
    action = [&] {
      auto r = verify_round_handle(csv);
      const bool pass = r.at("pass").get<bool>();
      return Outcome{std::move(r), pass ? kExitOk : kExitFailed};
    };
  });
  auto* glue_cmd = verify->add_subcommand("glue-demo", "transversality repair of gluing curves");
  glue_cmd->callback([&] {
    action = [&] {
      auto r = verify_glue_demo();
      const bool pass = r.at("pass").get<bool>();
      return Outcome{std::move(r), pass ? kExitOk : kExitFailed};
    };
  });
  auto* collar_cmd = verify->add_subcommand("collar", "collar reference field");
  collar_cmd->callback([&] {
    action = [&] {
      auto r = verify_collar();
      const bool pass = r.at("pass").get<bool>();
      return Outcome{std::move(r), pass ? kExitOk : kExitFailed};
    };
  });

  auto* selftest = app.add_subcommand("selftest", "run the acceptance grid");
  selftest->callback([&] {
    action = [&] {
      const auto results = run_acceptance();
      for (const auto& r : results) err << format_line(r) << "\n";
      auto doc = to_json(results);
      const bool pass = doc.at("pass").get<bool>();
      return Outcome{std::move(doc), pass ? kExitOk : kExitFailed};
    };
  });

  Outcome outcome;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (!action) throw Error(ErrorKind::MalformedSpec, "no command given");
    outcome = action();
  } catch (const CLI::CallForHelp&) {
    const std::string help = app.help();
    err << help;
    out << json{{"usage", help}}.dump() << "\n";
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    const std::string help = app.help("", CLI::AppFormatMode::All);
    err << help;
    out << json{{"usage", help}}.dump() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "msflow: " << e.what() << "\n";
    out << json{{"error", "Usage"}, {"message", e.what()}}.dump() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "msflow: " << e.what() << "\n";
    out << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return is_verification_failure(e.kind()) ? kExitFailed : kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "msflow: " << e.what() << "\n";
    out << json{{"error", "MalformedSpec"}, {"message", e.what()}}.dump() << "\n";
    return kExitInvalid;
  }

  out << outcome.payload.dump() << "\n";
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  err << "msflow: done in " << ms << " ms\n";
  return outcome.code;
}

}  // namespace msflow::cli
