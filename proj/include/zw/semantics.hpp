#pragma once

#include <string>
#include <vector>

#include "zw/diagram.hpp"
#include "zw/tensor.hpp"

namespace zw {

enum class SemanticsFlavor { Standard, Asymmetric };

/** One nonzero entry of a generator tensor, indexed by port. */
struct Entry {
  std::vector<int> key;
  cplx value;
};

/**
 * A way of assigning tensors to generators. The standard interpretation is
 * the default; alternative interpretations (used to witness the necessity of
 * rules) override individual hooks.
 */
class Model {
 public:
  virtual ~Model() = default;

  virtual cplx z_value(const Node& n, int k) const;
  virtual cplx w_value(const Node& n, int total, const std::vector<int>& parts) const;
  virtual void ket_one_entries(const Node& n, std::vector<Entry>& out) const;
  virtual cplx scalar_value(const Node& n) const { return n.param; }

  /** Per-wire weight on k particles; only consulted if has_wire_weights(). */
  virtual bool has_wire_weights() const { return false; }
  virtual cplx wire_weight(const Diagram& d, int wire, int k) const;

  void node_entries(const Node& n, std::vector<Entry>& out) const;
};

/** The standard interpretation: Z = sum r^k sqrt(k!)^(n+m-2) |k..k><k..k|,
 *  W = sqrt(multinomial), KetOne = |1>. */
const Model& standard_model();

/**
 * The rescaled interpretation on qudit diagrams, evaluated per generator:
 * Z = r^k k!^(n-1), W 1->n = multinomial, and each wire joining two sources
 * (resp. sinks) carries k! (resp. 1/k!). Z legs are all oriented as inputs,
 * or all as outputs when `z_legs_as_outputs` is set; the result does not
 * depend on that choice.
 */
class AsymmetricModel : public Model {
 public:
  explicit AsymmetricModel(bool z_legs_as_outputs = false) : z_out_(z_legs_as_outputs) {}

  cplx z_value(const Node& n, int k) const override;
  cplx w_value(const Node& n, int total, const std::vector<int>& parts) const override;
  bool has_wire_weights() const override { return true; }
  cplx wire_weight(const Diagram& d, int wire, int k) const override;

 private:
  bool is_source(const Diagram& d, const End& e) const;
  bool z_out_;
};

enum class ContractionOrder { Greedy, NodeOrder };

Tensor interpret_with(const Diagram& d, const Model& model,
                      ContractionOrder order = ContractionOrder::Greedy);
Tensor interpret(const Diagram& d, SemanticsFlavor sem = SemanticsFlavor::Standard);
/** Tensor of a single generator with n inputs and m outputs (Z only uses
 *  both; W is 1 -> k; KetOne 0 -> 1; Scalar 0 -> 0). */
Tensor interpret_generator(const Node& kind, Flavor f, int n, int m,
                           SemanticsFlavor sem = SemanticsFlavor::Standard);

struct AsymmetricReport {
  bool ok = true;
  double max_closed_deviation = 0;
  double max_ket_deviation = 0;
  std::vector<std::string> failures;
};

/** Checks that both interpretations agree on closed diagrams built from `d`
 *  (d composed with its dagger) and on the derived kets and bras. */
AsymmetricReport interpret_asymmetric_consistency(const Diagram& d, double tol = 1e-10);

/** The semantic identities satisfied by kets, bras, W and Z. */
enum class SemanticIdentity { Eq1, Eq2, Eq3, Eq4, Eq5 };

struct IdentityParams {
  int k = 0;
  int l = 0;
  int n = 2;
  cplx r = 1.0;
};

/** Eq1: W 1->n on ket_k spreads into multinomial-weighted ket products.
 *  Eq2: W n->1 on ket_k (x) ket_l regroups to ket_{k+l} (0 past capacity).
 *  Eq3: Z(r) 1->n on ket_k copies to r^k ket_k^{(x)n}.
 *  Eq4: bra_k ket_l = k! delta_{kl}.
 *  Eq5: id = sum_k (1/k!) ket_k bra_k.  */
bool check_semantic_identity(SemanticIdentity id, int d, const IdentityParams& p,
                             double tol = 1e-10);

/** Tolerance from ZW_DEFAULT_TOL, or 1e-9. */
double default_tolerance();

}  // namespace zw
