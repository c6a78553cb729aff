#pragma once

#include <string>
#include <vector>

#include "zw/diagram.hpp"
#include "zw/normal_form.hpp"

namespace zw {

/** The same graph read in the mixed flavor with every capacity d-1. */
Diagram iota(const Diagram& d);

struct UniformSplit {
  /** Qudit diagram at d = 1 + max capacity, every output of capacity d-1. */
  Diagram core;
  /** Per output j, a mixed 1 -> 1 W node from capacity d-1 down to cap_j. */
  std::vector<Diagram> adapters;

  /** iota(core) followed by the adapters; semantically equal to the source. */
  Diagram composite() const;
};

/**
 * Rewrites a mixed state over the uniform capacity of its largest wire: Z
 * spiders become restricted spiders, W nodes get projections onto their
 * port capacities, KetOne is lifted unchanged. Throws HasInputs for maps.
 */
UniformSplit to_uniform(const Diagram& d);

/** Deletes terms with an exponent above its target capacity and reads the
 *  rest as a mixed normal form at the target capacities. */
NormalFormDiagram qudit_nf_to_mixed_nf(const NormalFormDiagram& nf,
                                       const std::vector<int>& target_caps);

/** Mixed normal form obtained through the uniform core. */
NormalFormDiagram normalize_mixed(const Diagram& d);

struct BridgeReport {
  Diagram source;
  Diagram translated;
  double max_deviation = 0;
  std::vector<std::string> log;
  bool pass = false;
};

/** Compares the qudit interpretation of D with the mixed one of iota(D). */
BridgeReport check_commuting_square(const Diagram& d, double tol = 1e-10);

}  // namespace zw
