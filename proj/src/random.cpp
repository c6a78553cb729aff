#include "zw/random.hpp"

#include <algorithm>
#include <map>

namespace zw {

const std::vector<cplx>& sample_params(bool include_zero) {
  static const std::vector<cplx> base = {
      {1.0, 0.0},  {-1.0, 0.0}, {2.0, 0.0},  {0.5, 0.0},   {0.0, 1.0},
      {1.0, 1.0},  {-0.5, 0.3}, {0.7, -1.2}, {-1.3, -0.4}, {0.25, 0.8},
  };
  static const std::vector<cplx> with_zero = [] {
    std::vector<cplx> v = base;
    v.push_back({0.0, 0.0});
    return v;
  }();
  return include_zero ? with_zero : base;
}

cplx random_param(Rng& rng, bool include_zero) {
  const auto& ps = sample_params(include_zero);
  return ps[std::uniform_int_distribution<std::size_t>(0, ps.size() - 1)(rng)];
}

Diagram random_diagram(Flavor f, const RandomSpec& spec, Rng& rng) {
  Diagram d = empty_diagram(f);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto cap = [&]() { return f.mixed ? uni(1, std::max(1, spec.max_cap)) : f.uniform_cap(); };
  for (int i = 0; i < spec.nodes; ++i) {
    const int roll = uni(0, 99);
    if (roll < 40) {
      d.add_node(Node::z(random_param(rng, spec.allow_zero_params), uni(1, spec.max_z_legs), cap()));
    } else if (roll < 78) {
      const int c = cap();
      std::vector<int> outs(uni(0, spec.max_w_outputs));
      for (int& o : outs) o = f.mixed ? uni(1, c) : c;
      d.add_node(Node::w(c, outs));
    } else if (roll < 92 || !spec.allow_scalars) {
      d.add_node(Node::ket_one(cap()));
    } else {
      d.add_node(Node::scalar(random_param(rng, spec.allow_zero_params)));
    }
  }
  std::vector<End> ports;
  for (int i = 0; i < static_cast<int>(d.nodes.size()); ++i)
    for (int p = 0; p < d.nodes[i].num_ports(); ++p) ports.push_back(End::port(i, p));
  std::shuffle(ports.begin(), ports.end(), rng);
  const int nb = std::min<int>(spec.inputs + spec.outputs, static_cast<int>(ports.size()));
  const int n_in = std::min(spec.inputs, nb);
  for (int b = 0; b < nb; ++b) {
    const int c = d.cap_of(ports[b]);
    if (b < n_in) {
      d.in_caps.push_back(c);
      d.connect(End::in(b), ports[b]);
    } else {
      d.out_caps.push_back(c);
      d.connect(ports[b], End::out(b - n_in));
    }
  }
  std::map<int, std::vector<End>> by_cap;
  for (std::size_t i = nb; i < ports.size(); ++i) by_cap[d.cap_of(ports[i])].push_back(ports[i]);
  for (auto& [c, group] : by_cap) {
    std::size_t i = 0;
    for (; i + 1 < group.size(); i += 2) d.connect(group[i], group[i + 1]);
    if (i < group.size()) {
      d.out_caps.push_back(c);
      d.connect(group[i], End::out(d.num_outputs() - 1));
    }
  }
  return d;
}

Diagram random_state(Flavor f, int outputs, int nodes, Rng& rng) {
  RandomSpec spec;
  spec.nodes = nodes;
  spec.inputs = 0;
  spec.outputs = outputs;
  Diagram d = random_diagram(f, spec, rng);
  // Too few ports: pad with random single-leg spiders.
  while (d.num_outputs() < outputs) {
    const int cap = f.mixed ? 1 + static_cast<int>(rng() % spec.max_cap) : -1;
    d = compose_par(d, z_spider(f, random_param(rng), 0, 1, cap));
  }
  if (d.num_outputs() == outputs) return d;
  // Leftover outputs are closed with <0| effects.
  auto cap = [&](int j) { return f.mixed ? d.out_caps[j] : -1; };
  Diagram closing = empty_diagram(f);
  for (int j = 0; j < d.num_outputs(); ++j)
    closing = compose_par(closing, j < outputs ? identity_wire(f, cap(j)) : w_node(f, 0, cap(j)));
  return compose_seq(d, closing);
}

}  // namespace zw
