// Translations between the qudit and the mixed-capacity flavors.

#include "zw/bridge.hpp"

#include <algorithm>
#include <sstream>

#include "zw/semantics.hpp"

namespace zw {

Diagram iota(const Diagram& d) {
  if (d.flavor.mixed) throw ZwError(ErrorKind::FlavorMismatch, "iota expects a qudit diagram");
  Diagram out = d;
  out.flavor = Flavor::mixed_dims();
  return out;
}

Diagram UniformSplit::composite() const {
  Diagram adapt = empty_diagram(Flavor::mixed_dims());
  for (const Diagram& a : adapters) adapt = compose_par(adapt, a);
  return compose_seq(iota(core), adapt);
}

namespace {

/** Appends a state's nodes to `host` and returns, per output of the state,
 *  the port that output was wired to. */
std::vector<End> splice(Diagram& host, const Diagram& part) {
  const int base = static_cast<int>(host.nodes.size());
  for (const Node& n : part.nodes) host.nodes.push_back(n);
  std::vector<End> outs(part.num_outputs());
  auto shift = [&](End e) {
    if (e.is_port()) e.node += base;
    return e;
  };
  for (const Wire& w : part.wires) {
    if (w.a.type == End::Out && w.b.type == End::Out)
      throw ZwError(ErrorKind::InvalidDiagram, "macro contains a bare wire");
    if (w.a.type == End::Out)
      outs[w.a.index] = shift(w.b);
    else if (w.b.type == End::Out)
      outs[w.b.index] = shift(w.a);
    else
      host.wires.push_back({shift(w.a), shift(w.b)});
  }
  return outs;
}

/** Projector onto |0>..|a> of a (d-1)-wire, as a two-output state. */
Diagram projector_state(int a, int d) { return restricted_z_spider(a, 1.0, 0, 2, d); }

}  // namespace

UniformSplit to_uniform(const Diagram& src) {
  if (src.num_inputs() != 0)
    throw ZwError(ErrorKind::HasInputs, "to_uniform needs a state; bend inputs first");
  require_valid(src);
  const Diagram d = src.flavor.mixed ? src : iota(src);
  int top = 1;
  for (int c : d.out_caps) top = std::max(top, c);
  for (const Node& n : d.nodes)
    for (int p = 0; p < n.num_ports(); ++p) top = std::max(top, n.port_cap(p));
  const int dim = top + 1;
  const Flavor q = Flavor::qudit(dim);

  UniformSplit res;
  Diagram& core = res.core;
  core = empty_diagram(q);
  core.out_caps.assign(d.num_outputs(), top);
  // Where each original port now lives in the core.
  std::vector<std::vector<End>> where(d.nodes.size());
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const Node& n = d.nodes[i];
    switch (n.kind) {
      case Kind::Scalar:
        core.add_node(n);
        break;
      case Kind::KetOne: {
        const int k = core.add_node(Node::ket_one(top));
        where[i] = {End::port(k, 0)};
        break;
      }
      case Kind::Z:
        where[i] = splice(core, restricted_z_spider(n.cap, n.param, 0, n.legs, dim));
        break;
      case Kind::W: {
        // Uniform W whose every port passes through a projector onto the
        // original port capacity.
        const int np = n.num_ports();
        const int w = core.add_node(Node::w(top, std::vector<int>(np - 1, top)));
        for (int p = 0; p < np; ++p) {
          const std::vector<End> proj = splice(core, projector_state(n.port_cap(p), dim));
          core.connect(End::port(w, p), proj[0]);
          where[i].push_back(proj[1]);
        }
        break;
      }
    }
  }
  auto map_end = [&](const End& e) {
    return e.is_port() ? where[e.node][e.index] : End::out(e.index);
  };
  for (const Wire& w : d.wires) core.connect(map_end(w.a), map_end(w.b));
  for (int c : d.out_caps) res.adapters.push_back(w_node(Flavor::mixed_dims(), 1, top, {c}));
  return res;
}

NormalFormDiagram qudit_nf_to_mixed_nf(const NormalFormDiagram& nf,
                                       const std::vector<int>& target_caps) {
  const CoefficientTable& t = nf.table;
  if (target_caps.size() != t.caps.size())
    throw ZwError(ErrorKind::BoundaryMismatch, "one target capacity per output is required");
  for (std::size_t j = 0; j < t.caps.size(); ++j)
    if (target_caps[j] < 0 || target_caps[j] > t.caps[j])
      throw ZwError(ErrorKind::CapacityMismatch, "target capacity above the source capacity");
  CoefficientTable out;
  out.caps = target_caps;
  for (const auto& [x, r] : t.entries) {
    bool keep = true;
    for (std::size_t j = 0; j < x.size(); ++j) keep = keep && x[j] <= target_caps[j];
    if (keep) out.entries[x] = r;
  }
  return n_functor(out, Flavor::mixed_dims());
}

NormalFormDiagram normalize_mixed(const Diagram& d) {
  const Diagram s = d.num_inputs() > 0 ? bend_to_state(d) : d;
  const UniformSplit split = to_uniform(s);
  return qudit_nf_to_mixed_nf(normalize(split.core), s.out_caps);
}

BridgeReport check_commuting_square(const Diagram& d, double tol) {
  BridgeReport rep;
  rep.source = d;
  rep.translated = iota(d);
  const Tensor a = interpret(d);
  const Tensor b = interpret(rep.translated);
  rep.max_deviation = rel_deviation(a, b);
  std::ostringstream os;
  os << "qudit d=" << d.flavor.d << ", " << d.nodes.size() << " nodes; mixed deviation "
     << rep.max_deviation;
  rep.log.push_back(os.str());
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace zw
