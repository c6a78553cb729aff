#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zw/diagram.hpp"
#include "zw/rules.hpp"
#include "zw/tensor.hpp"

namespace zw {

/**
 * Non-standard interpretations, each sound for every rule of its flavor
 * except one target rule. Tensor-valued ones modify the generator values;
 * the others are discrete invariants of the port graph.
 */
enum class AltId {
  RePart,          // spider parameters and scalars -> real part        (target s)
  ArityFlag,       // a non-trivial W-node of large arity exists        (target a)
  BarePairs,       // boundary positions joined by a bare wire          (target id)
  CapacityProc,    // boundary annotations of the capacity procedure    (target h)
  EffectiveZPath,  // an effective Z-path exists                        (target b1)
  WPath,           // a W-path exists               (target b2; o in mixed flavor)
  AbsPart,         // spider parameters and scalars -> absolute value   (target +)
  NonEmpty,        // the diagram is non-empty      (target e; b2 in mixed flavor)
  NonRealScalar,   // a non-real global scalar exists                   (target cp)
  OmegaTwist,      // |1> -> w|1>, Z(r) with L legs -> Z(r w^(L-2))     (target loop)
  KetOneToZero,    // |1> -> |0>, scalars -> 1, up to scalar            (target u)
  CapacityGrowth,  // max(1, largest wire capacity); mixed only         (target b2)
  KetOneCapacity,  // a |1> on capacity != 1 exists; mixed only         (target i)
};

const char* alt_name(AltId id);
/** Parses the names printed by alt_name; throws UnknownRule. */
AltId parse_alt(const std::string& name);

enum class Codomain { Tensor, Boolean, Annotation, PairSet };
enum class SoundnessMode { Exact, UpToScalar };

struct AltSemantics {
  AltId id = AltId::RePart;
  Flavor flavor = Flavor::qudit(2);

  /** Throws UndefinedForFlavor for the mixed-only interpretations. */
  RuleId target() const;
  Codomain codomain() const;
  SoundnessMode mode() const;
  /** Whether equal values on both rule sides imply equal values in every
   *  context; otherwise preservation is checked on host diagrams. */
  bool compositional() const;
};

/** The interpretation used to show that `rule` cannot be derived. */
AltSemantics designated_alt(const RuleId& rule, int d = 3);

/** The twist root: exp(i pi/(d-1)) for qudit d > 2, otherwise i. */
cplx omega_root(Flavor f);

using PairSet = std::set<std::pair<int, int>>;

struct AltValue {
  Codomain kind = Codomain::Tensor;
  Tensor tensor;
  bool flag = false;
  std::vector<int> tuple;
  PairSet pairs;

  std::string describe() const;
};

/** Throws UndefinedForFlavor if the interpretation does not exist for the
 *  diagram's flavor. */
AltValue eval_alt(const Diagram& d, const AltSemantics& alt);
bool alt_values_agree(const AltSemantics& alt, const AltValue& a, const AltValue& b,
                      double tol = 1e-9);

// ---- graph predicates -------------------------------------------------------

/** Signed boundary positions: input i is -(i+1), output j is j+1. */
PairSet bare_pairs(const Diagram& d);

enum class AnnotationSchedule { Canonical, Reverse };

struct CapacityAnnotation {
  /** One annotation per wire, in wire order. */
  std::vector<int> wires;
  /** Annotations of the input positions followed by the output positions. */
  std::vector<int> boundary;
  /** Rule applications that lowered at least one annotation. */
  int steps = 0;
};

/**
 * Starts every wire at d-1 (qudit) or at its capacity (mixed) and lowers
 * annotations until nothing changes: a wire on |0> drops to 0, a wire on
 * |1> to at most 1, W outputs to at most the input, a W input to at most the
 * sum of its outputs, and all legs of a Z-spider to their minimum.
 */
CapacityAnnotation capacity_annotation(const Diagram& d,
                                       AnnotationSchedule schedule = AnnotationSchedule::Canonical);

/** A boundary-to-boundary path that never crosses a Z-spider and never uses
 *  two outputs of one W-node. */
bool has_w_path(const Diagram& d);

/** Whether a W-node could be replaced by a wire from its input to one of its
 *  outputs, with |0> fed to the others, without changing the tensor. */
bool is_trivial_w(const Diagram& d, int node, double tol = 1e-9);

struct ZPathOptions {
  int max_nodes = 8;
  int max_dim = 4;
  double tol = 1e-9;
};

struct ZPathWitness {
  bool found = false;
  /** Signed boundary positions of the two ends. */
  int from = 0, to = 0;
  std::vector<int> nodes;
  std::string probe;
};

/**
 * Searches for a boundary pair joined by a path through Z-spiders and
 * W-nodes (input plus one output each) such that the used outputs are jointly
 * the sole effective outputs, and that a probe state other than |0>, |1>
 * inhabits. Probes: |k> for 2 <= k <= d-1, and the uniform superposition,
 * which only counts when its result differs from that of |0> and of |1>.
 * A negative answer is relative to this probe set. Throws TooLarge beyond
 * the option limits.
 */
ZPathWitness find_effective_z_path(const Diagram& d, const ZPathOptions& opts = {});
bool has_effective_z_path(const Diagram& d, const ZPathOptions& opts = {});

// ---- necessity --------------------------------------------------------------

struct NecessityOptions {
  int samples = 50;
  int context_nodes = 2;
  int d = 3;
  int max_cap = 3;
  int max_arity = 3;
  std::uint64_t seed = 1;
};

struct RuleCheck {
  RuleId rule;
  int samples = 0;
  int mismatches = 0;
  /** Boolean codomains: samples whose left host evaluated to 1, so the
   *  agreement was not vacuous. */
  int positives = 0;
  std::vector<std::string> notes;
  /** Rules outside the interpretation's scope (e.g. scalar merging under
   *  RePart) are listed but not sampled. */
  bool excluded = false;
  std::string reason;
};

struct NecessityReport {
  RuleId target;
  AltSemantics alt;
  std::vector<RuleCheck> others;
  std::string counterexample;
  std::string lhs_value, rhs_value;
  bool violated = false;

  int preserved_count() const;
  bool pass() const;
};

/** Fixed binding on which the target rule breaks its interpretation. */
Binding counterexample_binding(const RuleId& rule, int d = 3);

/**
 * Evaluates the rule's designated interpretation on sampled instances of
 * every other rule (inside random contexts when the interpretation is not
 * compositional) and on the target's counterexample.
 */
NecessityReport necessity_report(const RuleId& rule, const NecessityOptions& opts = {});

// ---- the double W lemma ------------------------------------------------------

struct DoubleWReport {
  int n = 0, m = 0, d = 2;
  /** Dimension of the space of states D'' satisfying the hypothesis; the
   *  lemma says it is spanned by |0...0>. */
  int kernel_dim = 0;
  bool kernel_is_vacuum = false;
  int sampled = 0;
  int hypothesis_held = 0;
  int conclusion_held = 0;
  double max_deviation = 0;
  bool pass = false;
};

/**
 * The gadget wrapping an (n+m)-legged state D'': n W-nodes on the first legs,
 * m on the others, each exposing one output and joined pairwise by one wire.
 * Inputs are the legs of D''; outputs are the n+m exposed wires.
 */
Diagram double_w_gadget(int n, int m, int d);

/** Samples states D'' (random ones, and ones projected onto |0...0>),
 *  keeps those satisfying the lemma's hypothesis and checks its conclusion;
 *  also computes the hypothesis space exactly. */
DoubleWReport double_w_simplification_check(int n, int m, int d, int samples = 40,
                                            std::uint64_t seed = 7);

}  // namespace zw
