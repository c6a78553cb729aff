#pragma once

#include <string>
#include <vector>

#include "zw/diagram.hpp"
#include "zw/random.hpp"
#include "zw/tensor.hpp"

namespace zw {

enum class RuleTag {
  S,      // spider fusion
  A,      // W associativity
  O,      // W associativity, complementary capacity regime (mixed only)
  Id,     // 1->1 W is the identity
  H,      // Hopf law merged with the vacuum
  B1,     // Z/W bialgebra
  B2,     // W/W bialgebra
  Plus,   // sum of spider states
  E,      // erasing a ket (qudit only)
  Cp,     // copying |1> through a spider
  Loop,   // spider self-loop removal in a <=1 particle context
  I,      // |1> injected into a larger capacity (mixed only)
  U,      // decomposition of the 0->1 spider
  ScalarMerge,
  FlexPermute,
};

struct RuleId {
  bool mixed = false;
  RuleTag tag = RuleTag::S;

  std::string name() const;  // e.g. "qudit/b1"
  bool structural() const { return tag == RuleTag::ScalarMerge || tag == RuleTag::FlexPermute; }
  bool operator==(const RuleId& o) const { return mixed == o.mixed && tag == o.tag; }
};

const char* tag_name(RuleTag t);
/** Parses "s", "b1", "plus", "scalar-merge", ...; throws UnknownRule. */
RuleId parse_rule(const std::string& tag, bool mixed);
/** The axioms of a flavor (structural rules excluded). */
std::vector<RuleId> axioms(bool mixed);
/** Axioms followed by the two structural rules. */
std::vector<RuleId> all_rules(bool mixed);

struct RuleInfo {
  RuleId id;
  std::string summary;
  std::string side_condition;
};
RuleInfo rule_info(const RuleId& id);

enum class Direction { LeftToRight, RightToLeft };
const char* direction_name(Direction d);

/**
 * Metavariables of a rule schema. Which fields matter depends on the rule:
 * complex parameters r, s; arities n, m, p; capacities a, b, c; capacity
 * lists as, bs (mixed); k for the erased ket; d is the qudit dimension.
 */
struct Binding {
  int d = 2;
  cplx r{1.0, 0.0};
  cplx s{1.0, 0.0};
  int n = 0, m = 0, p = 0, k = 0;
  int a = 1, b = 1, c = 1;
  std::vector<int> as, bs;

  std::string describe() const;
};

struct RulePair {
  Diagram lhs, rhs;
};

/** True iff the binding satisfies the rule's side conditions. */
bool admissible(const RuleId& id, const Binding& b, std::string* why = nullptr);
/** Both sides with identical boundary signatures (every boundary position is
 *  an output). Throws RangeViolation for inadmissible bindings. */
RulePair instantiate(const RuleId& id, const Binding& b);
Diagram instantiate_side(const RuleId& id, const Binding& b, bool lhs);

struct SampleBounds {
  int d = 3;        // qudit dimension
  int max_cap = 3;  // mixed capacities
  int max_arity = 3;
};
/** Random admissible binding; parameters from the fixed sample set. */
Binding sample_binding(const RuleId& id, const SampleBounds& bounds, Rng& rng);

struct Match {
  RuleId rule;
  Direction dir = Direction::LeftToRight;
  Binding binding;
  /** Template node i is host node node_map[i]. */
  std::vector<int> node_map;
  /** Template boundary position i is attached to host port attach[i]. */
  std::vector<End> attach;
  /** For templates that are a single bare wire: the host wire replaced. */
  int bare_wire = -1;
  std::uint64_t host_fingerprint = 0;
};

std::vector<Match> find_matches(const Diagram& d, const RuleId& rule, Direction dir);
/** All matches of every rule of the flavor, both directions. */
std::vector<Match> find_all_matches(const Diagram& d, bool include_structural = true);
Diagram apply(const Diagram& d, const Match& m);

struct RewriteStep {
  RuleId rule;
  Direction dir;
  Match match;
};

struct RewriteTrace {
  Diagram initial;
  std::vector<RewriteStep> steps;
  Diagram final_diagram;

  /** Re-applies every step from `initial`; true iff the result is
   *  structurally equal to `final_diagram`. */
  bool replay_ok() const;
};

struct SoundnessReport {
  RuleId rule;
  int samples = 0;
  int failures = 0;
  double max_deviation = 0;
  std::vector<std::string> failure_notes;
  bool pass() const { return failures == 0 && samples > 0; }
};

/** Instantiates sampled bindings and compares both sides' tensors. */
SoundnessReport check_rule_soundness(const RuleId& rule, const SampleBounds& bounds, int samples,
                                     std::uint64_t seed, double tol = 1e-9);
/** Embeds sampled instances into random contexts (up to `context_size` extra
 *  nodes), rewrites through find_matches/apply and compares host tensors. */
SoundnessReport check_in_context_soundness(const RuleId& rule, const SampleBounds& bounds,
                                           int context_size, int samples, std::uint64_t seed,
                                           double tol = 1e-9);

/** Places `side` (all outputs) into a random context with that many
 *  inputs; returns the host and the context used. */
struct Embedding {
  Diagram host;
  Diagram context;
};
Embedding embed_in_context(const Diagram& side, int context_nodes, Rng& rng);
Diagram plug_into(const Diagram& side, const Diagram& context);

// ---- derived equations ------------------------------------------------------

struct LemmaResult {
  std::string name;
  std::string instance;
  bool up_to_scalar = false;
  double deviation = 0;
  bool pass = false;
};

struct LemmaReport {
  std::vector<LemmaResult> results;
  bool all_pass() const;
};

/** Instantiates the derived equations of the flavor over their parameter
 *  ranges (qudit: d; mixed: capacities up to `bound`) and checks them
 *  numerically. */
LemmaReport derive_lemma_corpus(bool mixed, int bound);

}  // namespace zw
