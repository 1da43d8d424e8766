#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heyting/bellissima.hpp"
#include "heyting/charform.hpp"
#include "heyting/formula.hpp"
#include "heyting/interval.hpp"
#include "heyting/io.hpp"
#include "heyting/kripke.hpp"
#include "heyting/negative.hpp"
#include "heyting/nishimura.hpp"
#include "heyting/omega.hpp"
#include "heyting/poset.hpp"
#include "heyting/prover.hpp"
#include "heyting/selfcheck.hpp"

namespace heyting::cli {
namespace {

using nlohmann::json;

constexpr int kYes = 0, kNo = 1, kError = 2;
// Longer formulas are shown as a size summary in text mode.
constexpr std::size_t kTextCap = 1 << 20;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Output {
  bool as_json = false;
  std::ostream& out;
  json doc = json::object();
  std::ostringstream text;

  void line(const std::string& s) { text << s << "\n"; }
  int finish(int code) {
    if (as_json)
      out << doc.dump(2) << "\n";
    else
      out << text.str();
    return code;
  }
};

std::string formula_text(Formula f) {
  if (auto s = print_limited(f, kTextCap)) return *s;
  return "<formula with dag_size " + std::to_string(dag_size(f)) + " and tree_size " + std::to_string(tree_size(f)) +
         "; use --json for the shared DAG>";
}

std::uint32_t vars_of(std::initializer_list<Formula> fs) {
  std::uint32_t n = 1;
  for (Formula f : fs) n = std::max(n, max_variable(f));
  return n;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << j.dump(2) << "\n";
  if (!file) throw std::runtime_error("write to " + path + " failed");
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

// The up-set of `root` as a finite model; node 0 is the root.
FiniteModel generated_model(const ModelSlice& slice, NodeId root) {
  std::vector<NodeId> nodes(slice.up_set(root).begin(), slice.up_set(root).end());
  std::sort(nodes.begin(), nodes.end());
  std::iter_swap(nodes.begin(), std::find(nodes.begin(), nodes.end(), root));
  auto index = [&](NodeId u) { return static_cast<std::uint32_t>(std::find(nodes.begin(), nodes.end(), u) - nodes.begin()); };
  std::vector<std::vector<std::uint32_t>> succ, val;
  for (NodeId u : nodes) {
    std::vector<std::uint32_t> s;
    for (NodeId t : slice.successors(u)) s.push_back(index(t));
    succ.push_back(std::move(s));
    val.push_back(varset_indices(slice.w(u)));
  }
  return FiniteModel(std::move(succ), std::move(val));
}

int cmd_prove(Output& o, bool classical, const std::vector<std::string>& premise_text, const std::string& goal_text,
              std::int64_t budget_ms) {
  std::vector<Formula> premises;
  for (const std::string& p : premise_text) premises.push_back(parse(p));
  const Formula goal = parse(goal_text);
  ProverLimits limits;
  limits.time_budget = std::chrono::milliseconds(budget_ms);
  const bool ok = classical ? prove_classical(premises, goal) : prove_ipc(premises, goal, limits);
  json ps = json::array();
  for (Formula p : premises) ps.push_back(print(p));
  o.doc = {{"command", "prove"}, {"logic", classical ? "classical" : "intuitionistic"},
           {"premises", ps},     {"goal", print(goal)},
           {"provable", ok}};
  o.line(ok ? "provable" : "unprovable");
  return ok ? kYes : kNo;
}

int cmd_countermodel(Output& o, std::optional<std::uint32_t> levels, const std::string& a_text,
                     const std::string& b_text) {
  const Formula a = parse(a_text), b = parse(b_text);
  const std::uint32_t n = vars_of({a, b});
  // Levels up to the implication depth suffice for an exact answer.
  const auto depth = static_cast<std::uint32_t>(std::max(implication_depth(a), implication_depth(b)));
  const std::uint32_t bound = levels.value_or(depth);
  const ModelSlice slice(n, bound);
  const std::vector<bool> ka = truth_set(slice, a), kb = truth_set(slice, b);
  std::optional<NodeId> witness;
  for (NodeId u : slice.nodes_up_to(bound))
    if (ka[u] && !kb[u]) {
      witness = u;
      break;
    }
  const bool exact = bound >= depth;
  o.doc = {{"command", "countermodel"}, {"premise", print(a)}, {"goal", print(b)},
           {"vars", n},                 {"levels", bound},     {"exact", exact}};
  if (!witness) {
    o.doc["found"] = false;
    o.line("no countermodel in K_" + std::to_string(n) + " up to level " + std::to_string(bound) +
           (exact ? "; the consequence holds" : "; inconclusive below the implication depth"));
    return kNo;
  }
  const FiniteModel m = generated_model(slice, *witness);
  o.doc["found"] = true;
  o.doc["node"] = node_json(slice, *witness);
  o.doc["model"] = m.to_json();
  o.line("countermodel at node " + std::to_string(*witness) + " (level " + std::to_string(slice.level(*witness)) +
         ") of K_" + std::to_string(n));
  o.line("generated model, root 0:");
  for (std::uint32_t u = 0; u < m.size(); ++u) {
    std::string row = "  " + std::to_string(u) + ": above";
    for (std::uint32_t s : m.immediate_successors(u)) row += " " + std::to_string(s);
    row += "; forces";
    for (std::uint32_t v : m.valuation(u)) row += " x" + std::to_string(v);
    o.line(row);
  }
  return kYes;
}

int cmd_bellissima(Output& o, std::uint32_t vars, std::uint32_t levels, const std::string& export_path) {
  const ModelSlice slice(vars, levels);
  json counts = json::array();
  for (std::uint32_t l = 0; l <= levels; ++l) counts.push_back(slice.level_nodes(l).size());
  o.doc = {{"command", "bellissima"}, {"vars", vars}, {"levels", levels}, {"nodes", slice.size()},
           {"level_counts", counts}};
  o.line("K_" + std::to_string(vars) + " up to level " + std::to_string(levels) + ": " +
         std::to_string(slice.size()) + " nodes");
  for (std::uint32_t l = 0; l <= levels; ++l) o.line("  level " + std::to_string(l) + ": " + counts[l].dump());
  if (!export_path.empty()) {
    write_file(export_path, slice.to_json());
    o.doc["exported"] = export_path;
    o.line("wrote " + export_path);
  }
  return kYes;
}

int cmd_charform(Output& o, std::uint32_t vars, NodeId id, bool primed) {
  // Grow the slice until it holds the node.
  std::uint32_t level = 0;
  std::optional<ModelSlice> slice;
  for (;; ++level) {
    slice.emplace(vars, level);
    if (id < slice->size()) break;
  }
  CharTable table(*slice);
  const Formula f = primed ? table.phi_prime(id) : table.phi(id);
  o.doc = {{"command", "charform"}, {"vars", vars},
           {"node", node_json(*slice, id)}, {"primed", primed},
           {"formula", formula_json(f, kTextCap)}};
  o.line(formula_text(f));
  return kYes;
}

int cmd_nishimura(Output& o, const std::string& classify_text, std::optional<std::uint32_t> ladder_index) {
  o.doc["command"] = "nishimura";
  if (ladder_index) {
    const auto [phi, psi] = ladder(*ladder_index);
    o.doc["index"] = *ladder_index;
    o.doc["phi"] = print(phi);
    o.doc["psi"] = print(psi);
    o.line("phi_" + std::to_string(*ladder_index) + " = " + print(phi));
    o.line("psi_" + std::to_string(*ladder_index) + " = " + print(psi));
    return kYes;
  }
  const Formula f = parse(classify_text);
  const LadderPoint p = classify(f);
  o.doc["formula"] = print(f);
  o.doc["point"] = p.str();
  o.doc["representative"] = print(ladder_formula(p));
  o.line(p.str() + " = " + print(ladder_formula(p)));
  return kYes;
}

int cmd_interval(Output& o, std::uint32_t m, const std::string& translate, const std::string& inverse,
                 const std::string& export_path) {
  ModelSlice k2(2, 1);
  Interval iv(k2, m);
  o.doc = {{"command", "interval"}, {"m", m}};
  if (!translate.empty()) {
    const Formula f = parse(translate);
    const Formula image = iv.f(f);
    o.doc["formula"] = print(f);
    o.doc["image"] = formula_json(image, kTextCap);
    o.line(formula_text(image));
  } else if (!inverse.empty()) {
    const Formula f = parse(inverse);
    const Formula image = iv.h(f);
    o.doc["formula"] = formula_json(f, kTextCap);
    o.doc["image"] = formula_json(image, kTextCap);
    o.line(formula_text(image));
  } else {
    const IntervalSpec& s = iv.spec();
    o.doc["phi_dag_size"] = dag_size(s.phi);
    o.doc["psi_dag_size"] = dag_size(s.psi);
    o.doc["maxS"] = s.maxS;
    o.line("interval for m = " + std::to_string(m) + ": phi dag_size " + std::to_string(dag_size(s.phi)) +
           ", psi dag_size " + std::to_string(dag_size(s.psi)) + ", " + std::to_string(s.maxS.size()) +
           " maximal S nodes");
  }
  if (!export_path.empty()) {
    write_file(export_path, iv.to_json());
    o.doc["exported"] = export_path;
    o.line("wrote " + export_path);
  }
  return kYes;
}

int cmd_omega(Output& o, std::optional<std::uint32_t> vars, const std::string& translate, const std::string& check,
              std::int64_t budget_ms) {
  const Formula a = parse(translate);
  const std::optional<Formula> b = check.empty() ? std::nullopt : std::optional<Formula>(parse(check));
  const std::uint32_t bound = vars.value_or(b ? vars_of({a, *b}) : vars_of({a}));
  ModelSlice k2(2, 1);
  Omega om(k2, bound);
  const Formula image = om.f(a);
  o.doc = {{"command", "omega"}, {"vars", bound}, {"formula", print(a)}, {"image", formula_json(image, kTextCap)}};
  if (!b) {
    o.line(formula_text(image));
    return kYes;
  }
  ProverLimits limits;
  limits.time_budget = std::chrono::milliseconds(budget_ms);
  const bool source = prove_ipc({a}, *b, limits);
  const bool target = prove_ipc({image}, om.f(*b), limits);
  o.doc["check"] = print(*b);
  o.doc["source_consequence"] = source;
  o.doc["image_consequence"] = target;
  o.line(std::string(source ? "" : "not ") + print(a) + " |- " + print(*b));
  o.line(std::string(target ? "" : "not ") + "f(" + print(a) + ") |- f(" + print(*b) + ")");
  if (source != target) throw std::runtime_error("the omega image disagrees with the source consequence");
  return target ? kYes : kNo;
}

int cmd_poset(Output& o, const std::string& input, const std::string& verify, bool formulas) {
  const std::string content = read_file(input);
  const json parsed = json::parse(content, nullptr, false);
  PosetEmbedder emb;
  if (!parsed.is_discarded() && parsed.is_object()) {
    emb = embed_poset(parse_poset_json(parsed));
  } else {
    std::istringstream in(content);
    emb = embed_poset_stream(in);
  }
  ModelSlice k2(2, 1);
  SigmaTree tree(k2);
  const bool need_tree = formulas || verify == "prover";
  o.doc = embedding_json(emb, need_tree && formulas ? &tree : nullptr, kTextCap);
  o.doc["command"] = "poset embed";
  for (std::size_t i = 0; i < emb.names().size(); ++i) {
    std::string row = emb.names()[i] + ":";
    for (const std::string& d : emb.set().elements()[i]) row += " " + (d.empty() ? std::string("e") : d);
    o.line(row);
  }
  if (verify.empty()) return kYes;
  const auto mismatches = verify_embedding(emb, verify == "prover" ? Verify::Prover : Verify::Fast, &tree);
  o.doc["verify"] = verify;
  o.doc["mismatches"] = json::array();
  for (const RelationMismatch& m : mismatches) {
    o.doc["mismatches"].push_back({{"a", emb.names()[m.a]}, {"b", emb.names()[m.b]}, {"expected", m.expected}});
    o.line("mismatch: " + emb.names()[m.a] + (m.expected ? " <= " : " not <= ") + emb.names()[m.b]);
  }
  o.line(std::to_string(mismatches.size()) + " mismatches (" + verify + ")");
  return mismatches.empty() ? kYes : kNo;
}

int cmd_classical(Output& o, const std::string& mode, const std::string& text) {
  const Formula f = parse(text);
  Formula image;
  if (mode == "gg") {
    image = godel_gentzen(f);
  } else if (mode == "glivenko") {
    image = glivenko(f);
  } else {
    ModelSlice k2(2, 1);
    Omega om(k2, vars_of({f}));
    image = classical_to_ipc2(om, f);
  }
  o.doc = {{"command", "classical"}, {"mode", mode}, {"formula", print(f)}, {"image", formula_json(image, kTextCap)}};
  o.line(formula_text(image));
  return kYes;
}

std::vector<std::string> suite_list(const std::vector<std::string>& requested) {
  const auto& names = suite_names();
  std::vector<std::string> out;
  for (const std::string& r : requested) {
    if (std::find(names.begin(), names.end(), r) != names.end()) {
      out.push_back(r);
      continue;
    }
    std::size_t row = 0;
    const auto [end, ec] = std::from_chars(r.data(), r.data() + r.size(), row);
    if (ec != std::errc() || end != r.data() + r.size() || row < 1 || row > names.size())
      throw UsageError("unknown suite " + r);
    out.push_back(names[row - 1]);
  }
  return out;
}

int cmd_selfcheck(Output& o, const std::vector<std::string>& requested, std::uint64_t seed) {
  const std::vector<std::string> names = requested.empty() ? suite_names() : suite_list(requested);
  o.doc = {{"command", "selfcheck"}, {"seed", seed}, {"rows", json::array()}};
  bool all = true;
  for (const std::string& n : names) {
    const SuiteResult r = run_suite(n, seed);
    all = all && r.passed;
    o.doc["rows"].push_back(result_json(r));
    if (!o.as_json) o.out << format_row(r) << std::endl;
  }
  o.doc["passed"] = all;
  o.line(all ? "all rows passed" : "some rows failed");
  return all ? kYes : kNo;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free Heyting algebra constructions: universal models, embeddings and provers.", "heyting"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit one JSON document on stdout");

  std::int64_t budget_ms = 0;
  auto* prove = app.add_subcommand("prove", "Decide provability; exit 1 when unprovable");
  bool classical = false;
  std::vector<std::string> premises;
  std::string goal;
  prove->add_flag("--classical", classical, "Classical instead of intuitionistic logic");
  prove->add_option("--premise", premises, "Premise formula (repeatable)");
  prove->add_option("--time-budget", budget_ms, "Prover time limit in ms, 0 for none")->capture_default_str();
  prove->add_option("formula", goal, "Goal formula")->required();

  auto* counter = app.add_subcommand("countermodel", "Find a universal-model node forcing F but not G");
  std::optional<std::uint32_t> levels_opt;
  std::string cm_a, cm_b;
  counter->add_option("--levels", levels_opt, "Slice depth (default: the larger implication depth)");
  counter->add_option("F", cm_a, "Premise")->required();
  counter->add_option("G", cm_b, "Goal")->required();

  auto* bell = app.add_subcommand("bellissima", "Enumerate the universal model K_n level by level");
  std::uint32_t vars = 2, levels = 1;
  std::string export_path;
  bool stats = false;
  bell->add_option("--vars", vars, "Number of variables")->required();
  bell->add_option("--levels", levels, "Highest level")->required();
  auto* stats_flag = bell->add_flag("--stats", stats, "Print node counts (the default)");
  bell->add_option("--export,--out", export_path, "Write the slice as JSON to this path")->excludes(stats_flag);

  auto* charform = app.add_subcommand("charform", "Characteristic formula of a node");
  NodeId node = 0;
  bool primed = false;
  charform->add_option("--vars", vars, "Number of variables")->required();
  charform->add_option("--node", node, "Node id in canonical order")->required();
  charform->add_flag("--primed", primed, "Give phi' (not below the node) instead of phi");

  auto* nish = app.add_subcommand("nishimura", "One-variable ladder");
  std::string classify_text;
  std::optional<std::uint32_t> ladder_index;
  auto* classify_opt = nish->add_option("--classify", classify_text, "Formula in x1 to place on the ladder");
  auto* ladder_opt = nish->add_option("--ladder", ladder_index, "Print phi_i and psi_i");
  classify_opt->excludes(ladder_opt);
  nish->require_option(1);

  auto* interval = app.add_subcommand("interval", "Embedding of the m-variable algebra into an interval of H_2");
  std::uint32_t m = 2;
  std::string translate, inverse;
  interval->add_option("--m", m, "Source variable count (1, 2 or 3)")->required();
  auto* tr = interval->add_option("--translate", translate, "Print f(F)");
  auto* inv = interval->add_option("--inverse", inverse, "Print h(F)");
  tr->excludes(inv);
  auto* iv_export = interval->add_option("--export,--out", export_path, "Write the construction as JSON to this path");
  iv_export->excludes(tr)->excludes(inv);

  auto* omega = app.add_subcommand("omega", "Translation of countably many variables into two");
  std::optional<std::uint32_t> omega_vars;
  std::string om_translate, om_check;
  omega->add_option("--vars", omega_vars, "Variable bound (default: the largest variable used)");
  omega->add_option("--translate", om_translate, "Formula to translate")->required();
  omega->add_option("--check", om_check, "Compare F |- G with f(F) |- f(G); exit 1 when it fails");
  omega->add_option("--time-budget", budget_ms, "Prover time limit in ms, 0 for none")->capture_default_str();

  auto* poset = app.add_subcommand("poset", "Posets in the two-variable algebra");
  poset->require_subcommand(1);
  auto* embed = poset->add_subcommand("embed", "Embed a poset given as JSON or as lines 'name below a above b'");
  std::string input, verify;
  bool formulas = false;
  embed->add_option("--input", input, "Input file")->required()->check(CLI::ExistingFile);
  embed->add_option("--verify", verify, "Check every pair")->check(CLI::IsMember({"prover", "fast"}));
  embed->add_flag("--formulas", formulas, "Include the image formulas in JSON output");

  auto* cls = app.add_subcommand("classical", "Classical logic into intuitionistic logic");
  std::string mode, cls_formula;
  cls->add_option("mode", mode, "gg, glivenko or to-ipc2")->required()->check(CLI::IsMember({"gg", "glivenko", "to-ipc2"}));
  cls->add_option("formula", cls_formula, "Formula")->required();

  auto* self = app.add_subcommand("selfcheck", "Run the acceptance rows; exit 1 if any fails");
  std::vector<std::string> suites;
  std::uint64_t seed = kDefaultSeed;
  self->add_option("--suite", suites, "Row name or number (repeatable; default all)");
  self->add_option("--seed", seed, "Base seed; row k draws from seed + k")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    const std::vector<CLI::App*> parsed = app.get_subcommands();
    const CLI::App* context = parsed.empty() ? &app : parsed.back();
    err << "error: " << e.what() << "\n\n" << context->help();
    if (std::any_of(argv + 1, argv + argc, [](const char* a) { return std::strcmp(a, "--json") == 0; }))
      out << json{{"error", e.what()}}.dump(2) << "\n";
    return kError;
  }

  Output o{as_json, out, json::object(), {}};
  try {
    if (*prove) return o.finish(cmd_prove(o, classical, premises, goal, budget_ms));
    if (*counter) return o.finish(cmd_countermodel(o, levels_opt, cm_a, cm_b));
    if (*bell) return o.finish(cmd_bellissima(o, vars, levels, export_path));
    if (*charform) return o.finish(cmd_charform(o, vars, node, primed));
    if (*nish) return o.finish(cmd_nishimura(o, classify_text, ladder_index));
    if (*interval) return o.finish(cmd_interval(o, m, translate, inverse, export_path));
    if (*omega) return o.finish(cmd_omega(o, omega_vars, om_translate, om_check, budget_ms));
    if (*embed) return o.finish(cmd_poset(o, input, verify, formulas));
    if (*cls) return o.finish(cmd_classical(o, mode, cls_formula));
    if (*self) return o.finish(cmd_selfcheck(o, suites, seed));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    if (as_json) out << json{{"error", e.what()}}.dump(2) << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (as_json) out << json{{"error", e.what()}}.dump(2) << "\n";
    return kError;
  }
  return kError;
}

}  // namespace heyting::cli
