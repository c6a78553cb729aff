// The `zw` command-line surface: thin wrappers that load documents, call one
// module and print its report.

#include "zw/cli.hpp"

#include <charconv>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_format.hpp"
#include "zw/bridge.hpp"
#include "zw/io.hpp"
#include "zw/minimality.hpp"
#include "zw/normal_form.hpp"
#include "zw/rules.hpp"
#include "zw/semantics.hpp"

namespace zw {
namespace {

using json = nlohmann::json;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_text(path, text);
}

bool parse_flavor(const std::string& s) {
  if (s == "qudit") return false;
  if (s == "mixed") return true;
  throw ZwError(ErrorKind::RangeViolation, "--flavor must be qudit or mixed");
}

std::string pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

// ---- commands -----------------------------------------------------------------

struct Options {
  std::string file, file2, output, semantics = "standard", flavor = "qudit", d_range = "2..5",
              caps_range = "1..4", rule;
  std::optional<double> tol;
  double eps = kPruneEps;
  int samples = 50, d = 3, context = 2;
  std::uint64_t seed = 7;
  bool as_json = false;

  double tolerance() const { return tol ? *tol : default_tolerance(); }
};

int cmd_interpret(const Options& o, std::ostream& out) {
  SemanticsFlavor sem;
  if (o.semantics == "standard")
    sem = SemanticsFlavor::Standard;
  else if (o.semantics == "asymmetric")
    sem = SemanticsFlavor::Asymmetric;
  else
    throw ZwError(ErrorKind::RangeViolation, "--semantics must be standard or asymmetric");
  emit(tensor_to_json(interpret(load(o.file), sem)), o.output, out);
  return kExitOk;
}

int cmd_normalize(const Options& o, std::ostream& out) {
  const Diagram d = load(o.file);
  emit(table_to_json(normalize(d, o.eps).table, d.flavor), o.output, out);
  return kExitOk;
}

int cmd_eq(const Options& o, std::ostream& out) {
  const EqualityResult r = diagrams_equal(load(o.file), load(o.file2), o.tolerance());
  json j;
  j["equal"] = r.equal;
  j["tolerance"] = o.tolerance();
  if (r.witness) {
    j["witness"] = *r.witness;
    j["lhs"] = complex_json(r.lhs_coeff);
    j["rhs"] = complex_json(r.rhs_coeff);
  } else {
    j["witness"] = nullptr;
  }
  out << format_json(j);
  return r.equal ? kExitOk : kExitNegative;
}

int cmd_check_axioms(const Options& o, std::ostream& out) {
  const bool mixed = parse_flavor(o.flavor);
  const auto [lo, hi] = parse_int_range(mixed ? o.caps_range : o.d_range);
  if (lo < (mixed ? 1 : 2)) throw ZwError(ErrorKind::RangeViolation, mixed ? "--caps starts at 1" : "--d starts at 2");
  if (o.samples < 1) throw ZwError(ErrorKind::RangeViolation, "--samples must be >= 1");
  json rows = json::array();
  bool all = true;
  std::ostringstream table;
  table << std::left << std::setw(14) << "rule" << std::setw(8) << (mixed ? "caps" : "d")
        << std::setw(9) << "samples" << std::setw(14) << "max_dev" << "result\n";
  for (int v = lo; v <= hi; ++v) {
    SampleBounds bounds;
    if (mixed)
      bounds.max_cap = v;
    else
      bounds.d = v;
    for (const RuleId& rule : axioms(mixed)) {
      const SoundnessReport rep = check_rule_soundness(rule, bounds, o.samples, o.seed, o.tolerance());
      all = all && rep.pass();
      std::ostringstream dev;
      dev << std::setprecision(3) << rep.max_deviation;
      table << std::setw(14) << rule.name() << std::setw(8) << v << std::setw(9) << rep.samples
            << std::setw(14) << dev.str() << pass_word(rep.pass()) << "\n";
      rows.push_back({{"rule", rule.name()}, {mixed ? "caps" : "d", v}, {"samples", rep.samples},
                      {"failures", rep.failures}, {"max_deviation", rep.max_deviation},
                      {"pass", rep.pass()}});
    }
  }
  if (o.as_json)
    out << format_json(json{{"results", rows}, {"all_pass", all}, {"seed", o.seed}});
  else
    out << table.str() << (all ? "all PASS\n" : "some rules FAILED\n");
  return all ? kExitOk : kExitNegative;
}

int cmd_minimality(const Options& o, std::ostream& out) {
  const bool mixed = parse_flavor(o.flavor);
  std::vector<RuleId> targets;
  if (o.rule.empty())
    targets = axioms(mixed);
  else
    targets = {parse_rule(o.rule, mixed)};
  NecessityOptions opts;
  opts.samples = o.samples;
  opts.d = o.d;
  opts.seed = o.seed;
  opts.context_nodes = o.context;
  json rows = json::array();
  bool all = true;
  std::ostringstream table;
  for (const RuleId& target : targets) {
    const NecessityReport rep = necessity_report(target, opts);
    all = all && rep.pass();
    int sampled = 0;
    json others = json::array();
    for (const RuleCheck& c : rep.others) {
      if (!c.excluded) ++sampled;
      json oc = {{"rule", c.rule.name()}, {"samples", c.samples}, {"mismatches", c.mismatches},
                 {"excluded", c.excluded}};
      if (c.excluded) oc["reason"] = c.reason;
      if (!c.notes.empty()) oc["notes"] = c.notes;
      others.push_back(oc);
    }
    const bool probe_relative = rep.alt.id == AltId::EffectiveZPath;
    table << target.name() << " via " << alt_name(rep.alt.id) << ": preserved " << rep.preserved_count()
          << "/" << sampled << " other rules; violated instance " << rep.counterexample << " ("
          << rep.lhs_value << " vs " << rep.rhs_value << ") " << pass_word(rep.pass()) << "\n";
    for (const RuleCheck& c : rep.others)
      if (c.mismatches > 0)
        table << "  " << c.rule.name() << ": " << c.mismatches << "/" << c.samples << " mismatches"
              << (c.notes.empty() ? "" : ", e.g. " + c.notes.front()) << "\n";
    if (probe_relative) table << "  note: negative path checks are relative to the probe set\n";
    json row = {{"target", target.name()},
                {"alt", alt_name(rep.alt.id)},
                {"counterexample", rep.counterexample},
                {"lhs_value", rep.lhs_value},
                {"rhs_value", rep.rhs_value},
                {"violated", rep.violated},
                {"preserved", rep.preserved_count()},
                {"others", others},
                {"pass", rep.pass()}};
    if (probe_relative) row["probe_relative"] = true;
    rows.push_back(row);
  }
  if (o.as_json)
    out << format_json(json{{"results", rows}, {"all_pass", all}, {"seed", o.seed}});
  else
    out << table.str();
  return all ? kExitOk : kExitNegative;
}

int cmd_bridge(const Options& o, std::ostream& out) {
  const Diagram d = load(o.file);
  json j;
  bool pass = false;
  if (!d.flavor.mixed) {
    const BridgeReport rep = check_commuting_square(d, o.tolerance());
    j = {{"mode", "commuting-square"}, {"max_deviation", rep.max_deviation}, {"log", rep.log},
         {"pass", rep.pass}};
    pass = rep.pass;
    if (!o.output.empty()) save(rep.translated, o.output);
  } else {
    const UniformSplit split = to_uniform(d);
    const Diagram composite = split.composite();
    const double dev = rel_deviation(interpret(composite), interpret(d));
    pass = dev <= o.tolerance();
    j = {{"mode", "to-uniform"}, {"core_dimension", split.core.flavor.d}, {"max_deviation", dev},
         {"pass", pass}};
    if (!o.output.empty()) save(split.core, o.output);
  }
  out << format_json(j);
  return pass ? kExitOk : kExitNegative;
}

int cmd_render(const Options& o, std::ostream& out) {
  emit(render_dot(load(o.file)), o.output, out);
  return kExitOk;
}

void write_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

std::pair<int, int> parse_int_range(const std::string& text) {
  auto number = [&](std::string_view s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
      throw ZwError(ErrorKind::RangeViolation, "bad range \"" + text + "\"");
    return v;
  };
  const std::string_view sv(text);
  const auto dots = sv.find("..");
  if (dots == std::string_view::npos) {
    const int v = number(sv);
    return {v, v};
  }
  const int lo = number(sv.substr(0, dots)), hi = number(sv.substr(dots + 2));
  if (lo > hi) throw ZwError(ErrorKind::RangeViolation, "empty range \"" + text + "\"");
  return {lo, hi};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ZW-calculus diagrams: semantics, normal forms, rule checks"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&)> action;

  auto sub = [&](const char* name, const char* help, auto fn) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&action, fn] { action = fn; });
    return s;
  };
  auto with_tol = [&](CLI::App* s) {
    s->add_option("--tol", o.tol, "Relative tolerance (default: ZW_DEFAULT_TOL or 1e-9)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* s = sub("interpret", "Tensor of a diagram (.zwt document)", cmd_interpret);
  s->add_option("file", o.file, "Diagram document (.zw)")->required();
  s->add_option("-o,--output", o.output, "Write to this file instead of stdout");
  s->add_option("--semantics", o.semantics, "standard or asymmetric");

  s = sub("normalize", "Normal form coefficient table (.zwnf document)", cmd_normalize);
  s->add_option("file", o.file, "Diagram document (.zw)")->required();
  s->add_option("-o,--output", o.output, "Write to this file instead of stdout");
  s->add_option("--eps", o.eps, "Relative pruning threshold")->check(CLI::NonNegativeNumber);

  s = sub("eq", "Decide semantic equality through normal forms (exit 0 equal, 1 different)", cmd_eq);
  s->add_option("lhs", o.file, "First diagram")->required();
  s->add_option("rhs", o.file2, "Second diagram")->required();
  with_tol(s);

  s = sub("check-axioms", "Sampled soundness check of every axiom", cmd_check_axioms);
  s->add_option("--flavor", o.flavor, "qudit or mixed");
  s->add_option("--d", o.d_range, "Qudit dimensions, e.g. 2..5");
  s->add_option("--caps", o.caps_range, "Mixed capacity bounds, e.g. 1..4");
  s->add_option("--samples", o.samples, "Bindings per rule and range value");
  s->add_option("--seed", o.seed, "Random seed");
  s->add_flag("--json", o.as_json, "Machine-readable output");
  with_tol(s);

  s = sub("minimality", "Necessity report of each axiom under its alternative semantics", cmd_minimality);
  s->add_option("--rule", o.rule, "Single target rule, e.g. plus or b1 (default: all)");
  s->add_option("--flavor", o.flavor, "qudit or mixed");
  s->add_option("--d", o.d, "Qudit dimension")->check(CLI::Range(2, 6));
  s->add_option("--samples", o.samples, "Instances per other rule")->check(CLI::PositiveNumber);
  s->add_option("--context", o.context, "Context nodes around non-compositional checks")
      ->check(CLI::Range(0, 4));
  s->add_option("--seed", o.seed, "Random seed");
  s->add_flag("--json", o.as_json, "Machine-readable output");

  s = sub("bridge", "Qudit diagram: iota commuting square; mixed state: uniform core", cmd_bridge);
  s->add_option("file", o.file, "Diagram document (.zw)")->required();
  s->add_option("-o,--output", o.output, "Also save the translated diagram here");
  with_tol(s);

  s = sub("render", "Graphviz DOT text", cmd_render);
  s->add_option("file", o.file, "Diagram document (.zw)")->required();
  s->add_option("-o,--output", o.output, "Write to this file instead of stdout");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "UsageError", e.what());
    return kExitError;
  }

  try {
    return action(o, out);
  } catch (const ZwError& e) {
    write_error(err, error_kind_name(e.kind()), e.what());
  } catch (const std::exception& e) {
    write_error(err, "InternalError", e.what());
  }
  return kExitError;
}

}  // namespace zw
