#pragma once

#include <random>
#include <vector>

#include "zw/diagram.hpp"

namespace zw {

using Rng = std::mt19937_64;

struct RandomSpec {
  int nodes = 4;
  int inputs = 1;
  int outputs = 1;
  int max_z_legs = 3;
  int max_w_outputs = 2;
  int max_cap = 3;          // mixed flavor only
  bool allow_scalars = true;
  bool allow_zero_params = false;
};

/** Fixed complex sample set used for spider parameters. */
const std::vector<cplx>& sample_params(bool include_zero = false);
cplx random_param(Rng& rng, bool include_zero = false);

/**
 * Random well-formed diagram: random generators, ports paired uniformly at
 * random (equal capacities in mixed flavor), the first `inputs + outputs`
 * shuffled ports exposed on the boundary. Unpairable leftovers become extra
 * outputs, so the boundary may be larger than requested.
 */
Diagram random_diagram(Flavor f, const RandomSpec& spec, Rng& rng);

/** Random state (no inputs) with exactly `outputs` outputs: missing ones are
 *  single-leg spiders, leftover ones are closed with <0| effects. */
Diagram random_state(Flavor f, int outputs, int nodes, Rng& rng);

}  // namespace zw
