#pragma once

#include <map>
#include <optional>
#include <vector>

#include "zw/diagram.hpp"
#include "zw/tensor.hpp"

namespace zw {

/** Default pruning threshold, relative to the largest coefficient. */
inline constexpr double kPruneEps = 1e-12;

/** A state sum_i r_i |x^i>, keyed by exponent vector in lexicographic order. */
struct CoefficientTable {
  std::vector<int> caps;
  std::map<std::vector<int>, cplx> entries;

  int arity() const { return static_cast<int>(caps.size()); }
  /** Drops entries with |r| <= eps * max|r|. */
  void prune(double eps = kPruneEps);
  /** Dense state with one axis of size cap+1 per output. */
  Tensor to_tensor() const;
  static CoefficientTable from_tensor(const Tensor& t, const std::vector<int>& caps,
                                      double eps = kPruneEps);
};

struct NormalFormDiagram {
  CoefficientTable table;
  Diagram realization;
};

/**
 * Builds the normal form of a table: a KetOne feeds a selector W whose
 * outputs each reach one Z spider per term; the spider of term x carries
 * r / prod_j sqrt(x_j!) and joins output collector W_j through x_j parallel
 * wires. In the mixed flavor the selector, spiders and parallel wires have
 * capacity 1. An empty table yields the scalar 0 next to |0..0>.
 */
NormalFormDiagram n_functor(const CoefficientTable& table, Flavor f);
Diagram nf_to_diagram(const NormalFormDiagram& nf);
/** Reads the table back from a diagram built by n_functor; throws
 *  NotInNormalForm for any other shape. */
CoefficientTable table_of(const Diagram& d);

/** Semantic normalization; inputs are bent to outputs first. */
NormalFormDiagram normalize(const Diagram& d, double eps = kPruneEps);

NormalFormDiagram nf_tensor(const NormalFormDiagram& a, const NormalFormDiagram& b);
/** Caps outputs j1 and j2 together (they must share a capacity). */
NormalFormDiagram nf_cup(const NormalFormDiagram& nf, int j1, int j2);
/**
 * Merges outputs j1 and j2 through a 2 -> 1 W node of capacity `target_cap`
 * (qudit: forced to d-1; mixed: must be given and bound both capacities).
 * The merged output takes position min(j1, j2).
 */
NormalFormDiagram nf_w21(const NormalFormDiagram& nf, int j1, int j2, int target_cap = -1);

struct EqualityResult {
  bool equal = false;
  /** First differing exponent vector when not equal. */
  std::optional<std::vector<int>> witness;
  cplx lhs_coeff{0.0}, rhs_coeff{0.0};
};

/** Decides equality of interpretations by comparing normal forms; the
 *  tolerance is relative to the largest coefficient of either side. */
EqualityResult diagrams_equal(const Diagram& d1, const Diagram& d2, double tol = 1e-10);

}  // namespace zw
