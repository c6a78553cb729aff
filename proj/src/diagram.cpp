#include "zw/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <tuple>

#include "glue.hpp"
#include "zw/combinatorics.hpp"

namespace zw {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CapacityViolation: return "CapacityViolation";
    case ErrorKind::FlavorMismatch: return "FlavorMismatch";
    case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::InvalidDiagram: return "InvalidDiagram";
    case ErrorKind::StaleMatch: return "StaleMatch";
    case ErrorKind::NotInNormalForm: return "NotInNormalForm";
    case ErrorKind::CapacityMismatch: return "CapacityMismatch";
    case ErrorKind::PartsMismatch: return "PartsMismatch";
    case ErrorKind::HasInputs: return "HasInputs";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::UndefinedForFlavor: return "UndefinedForFlavor";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownRule: return "UnknownRule";
  }
  return "Unknown";
}

Flavor Flavor::qudit(int d) {
  if (d < 2) throw ZwError(ErrorKind::RangeViolation, "qudit dimension must be >= 2");
  return Flavor{false, d};
}

Flavor Flavor::mixed_dims() { return Flavor{true, 0}; }

std::string Flavor::name() const {
  return mixed ? std::string("mixed") : "qudit(d=" + std::to_string(d) + ")";
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Z: return "Z";
    case Kind::W: return "W";
    case Kind::KetOne: return "KetOne";
    case Kind::Scalar: return "Scalar";
  }
  return "?";
}

int Node::num_ports() const {
  switch (kind) {
    case Kind::Z: return legs;
    case Kind::W: return 1 + static_cast<int>(out_caps.size());
    case Kind::KetOne: return 1;
    case Kind::Scalar: return 0;
  }
  return 0;
}

int Node::port_cap(int port) const {
  if (kind == Kind::W && port > 0) return out_caps.at(port - 1);
  return cap;
}

Node Node::z(cplx r, int legs, int cap) {
  Node n;
  n.kind = Kind::Z;
  n.param = r;
  n.legs = legs;
  n.cap = cap;
  return n;
}

Node Node::w(int in_cap, std::vector<int> out_caps) {
  Node n;
  n.kind = Kind::W;
  n.cap = in_cap;
  n.out_caps = std::move(out_caps);
  return n;
}

Node Node::ket_one(int cap) {
  Node n;
  n.kind = Kind::KetOne;
  n.cap = cap;
  return n;
}

Node Node::scalar(cplx r) {
  Node n;
  n.kind = Kind::Scalar;
  n.param = r;
  n.cap = 0;
  return n;
}

bool Node::operator==(const Node& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Z: return param == o.param && legs == o.legs && cap == o.cap;
    case Kind::W: return cap == o.cap && out_caps == o.out_caps;
    case Kind::KetOne: return cap == o.cap;
    case Kind::Scalar: return param == o.param;
  }
  return false;
}

bool End::operator<(const End& o) const {
  return std::tie(type, node, index) < std::tie(o.type, o.node, o.index);
}

int Diagram::cap_of(const End& e) const {
  switch (e.type) {
    case End::Port: return nodes.at(e.node).port_cap(e.index);
    case End::In: return in_caps.at(e.index);
    case End::Out: return out_caps.at(e.index);
  }
  return 0;
}

int Diagram::add_node(const Node& n) {
  nodes.push_back(n);
  return static_cast<int>(nodes.size()) - 1;
}

void Diagram::connect(const End& a, const End& b) { wires.push_back({a, b}); }

Incidence::Incidence(const Diagram& d) : d_(&d) {
  port_wire_.resize(d.nodes.size());
  for (size_t i = 0; i < d.nodes.size(); ++i) port_wire_[i].assign(d.nodes[i].num_ports(), -1);
  in_wire_.assign(d.in_caps.size(), -1);
  out_wire_.assign(d.out_caps.size(), -1);
  for (size_t w = 0; w < d.wires.size(); ++w) {
    for (const End* e : {&d.wires[w].a, &d.wires[w].b}) {
      int* slot = nullptr;
      if (e->type == End::Port) {
        if (e->node < 0 || e->node >= static_cast<int>(d.nodes.size()) || e->index < 0 ||
            e->index >= d.nodes[e->node].num_ports())
          continue;
        slot = &port_wire_[e->node][e->index];
      } else if (e->type == End::In) {
        if (e->index < 0 || e->index >= d.num_inputs()) continue;
        slot = &in_wire_[e->index];
      } else {
        if (e->index < 0 || e->index >= d.num_outputs()) continue;
        slot = &out_wire_[e->index];
      }
      *slot = static_cast<int>(w);
    }
  }
}

int Incidence::wire_at(const End& e) const {
  switch (e.type) {
    case End::Port: return port_wire_.at(e.node).at(e.index);
    case End::In: return in_wire_.at(e.index);
    case End::Out: return out_wire_.at(e.index);
  }
  return -1;
}

End Incidence::other(const End& e) const {
  int w = wire_at(e);
  if (w < 0) throw ZwError(ErrorKind::InvalidDiagram, "uncovered endpoint");
  const Wire& wr = d_->wires[w];
  // A self-loop on a single node has distinct port indices, so comparing
  // against `a` picks the right far end.
  return wr.a == e ? wr.b : wr.a;
}

// ---- constructors ----------------------------------------------------------

namespace {

int resolve_cap(Flavor f, int cap) {
  if (!f.mixed) {
    if (cap >= 0 && cap != f.uniform_cap())
      throw ZwError(ErrorKind::FlavorMismatch,
                    "qudit flavor requires capacity " + std::to_string(f.uniform_cap()) +
                        ", got " + std::to_string(cap));
    return f.uniform_cap();
  }
  if (cap < 1)
    throw ZwError(ErrorKind::CapacityViolation, "capacities must be >= 1");
  return cap;
}

void check_node(const Node& n, Flavor f) {
  auto check = [&](int c) { resolve_cap(f, c); };
  switch (n.kind) {
    case Kind::Z:
      check(n.cap);
      if (n.legs < 0) throw ZwError(ErrorKind::RangeViolation, "negative leg count");
      break;
    case Kind::KetOne:
      check(n.cap);
      break;
    case Kind::W:
      for (int c : n.out_caps) {
        if (c < 1) throw ZwError(ErrorKind::CapacityViolation, "capacities must be >= 1");
        if (c > n.cap)
          throw ZwError(ErrorKind::CapacityViolation,
                        "W output capacity " + std::to_string(c) + " exceeds input capacity " +
                            std::to_string(n.cap));
      }
      check(n.cap);
      for (int c : n.out_caps) check(c);
      break;
    case Kind::Scalar:
      break;
  }
}

}  // namespace

Diagram empty_diagram(Flavor f) {
  Diagram d;
  d.flavor = f;
  return d;
}

Diagram identity_wire(Flavor f, int cap) {
  return identity(f, {resolve_cap(f, cap)});
}

Diagram identity(Flavor f, const std::vector<int>& caps) {
  Diagram d = empty_diagram(f);
  for (size_t i = 0; i < caps.size(); ++i) {
    int c = resolve_cap(f, caps[i]);
    d.in_caps.push_back(c);
    d.out_caps.push_back(c);
    d.connect(End::in(static_cast<int>(i)), End::out(static_cast<int>(i)));
  }
  return d;
}

Diagram make_generator(const Node& kind, Flavor f, int n, int m) {
  Node node = kind;
  if (!f.mixed) {
    if (node.kind == Kind::Z || node.kind == Kind::KetOne || node.kind == Kind::W) {
      if (node.cap <= 0) node.cap = f.uniform_cap();
    }
    if (node.kind == Kind::W)
      for (int& c : node.out_caps)
        if (c <= 0) c = f.uniform_cap();
  }
  if (node.kind == Kind::Z) node.legs = n + m;
  check_node(node, f);
  Diagram d = empty_diagram(f);
  int id = d.add_node(node);
  switch (node.kind) {
    case Kind::Z:
      for (int i = 0; i < n; ++i) {
        d.in_caps.push_back(node.cap);
        d.connect(End::in(i), End::port(id, i));
      }
      for (int j = 0; j < m; ++j) {
        d.out_caps.push_back(node.cap);
        d.connect(End::port(id, n + j), End::out(j));
      }
      break;
    case Kind::W:
      d.in_caps.push_back(node.cap);
      d.connect(End::in(0), End::port(id, 0));
      for (size_t j = 0; j < node.out_caps.size(); ++j) {
        d.out_caps.push_back(node.out_caps[j]);
        d.connect(End::port(id, static_cast<int>(j) + 1), End::out(static_cast<int>(j)));
      }
      break;
    case Kind::KetOne:
      d.out_caps.push_back(node.cap);
      d.connect(End::port(id, 0), End::out(0));
      break;
    case Kind::Scalar:
      break;
  }
  return d;
}

Diagram z_spider(Flavor f, cplx r, int n, int m, int cap) {
  return make_generator(Node::z(r, n + m, resolve_cap(f, cap)), f, n, m);
}

Diagram w_node(Flavor f, int n_out, int in_cap, std::vector<int> out_caps) {
  int c = resolve_cap(f, in_cap);
  if (out_caps.empty()) out_caps.assign(n_out, c);
  if (static_cast<int>(out_caps.size()) != n_out)
    throw ZwError(ErrorKind::RangeViolation, "W output capacity list has wrong length");
  return make_generator(Node::w(c, out_caps), f);
}

Diagram ket_one(Flavor f, int cap) { return make_generator(Node::ket_one(resolve_cap(f, cap)), f); }

Diagram global_scalar(Flavor f, cplx r) { return make_generator(Node::scalar(r), f); }

Diagram cup_state(Flavor f, int cap) {
  int c = resolve_cap(f, cap);
  Diagram d = empty_diagram(f);
  d.out_caps = {c, c};
  d.connect(End::out(0), End::out(1));
  return d;
}

Diagram cap_effect(Flavor f, int cap) { return dagger(cup_state(f, cap)); }

namespace detail {

/**
 * Fuse chains of segments through junctions (each junction touches exactly
 * two segment ends). Closed junction-only cycles are traces of identities and
 * become scalar nodes of value cap+1.
 */
void fuse_segments(Diagram& out, const std::vector<Segment>& segs, const std::vector<int>& jcap) {
  std::vector<std::vector<std::pair<int, int>>> at(jcap.size());
  for (size_t s = 0; s < segs.size(); ++s) {
    if (segs[s].a.junction) at[segs[s].a.j].push_back({static_cast<int>(s), 0});
    if (segs[s].b.junction) at[segs[s].b.j].push_back({static_cast<int>(s), 1});
  }
  for (size_t j = 0; j < at.size(); ++j)
    if (at[j].size() != 2)
      throw ZwError(ErrorKind::BoundaryMismatch, "junction touched by wrong number of wires");
  std::vector<bool> used(segs.size(), false);
  auto walk = [&](int s, int from_side) -> End {
    // Walk from side `from_side` of segment s towards its other side.
    while (true) {
      used[s] = true;
      const GEnd& far = from_side == 0 ? segs[s].b : segs[s].a;
      if (!far.junction) return far.end;
      int far_side = from_side == 0 ? 1 : 0;
      const auto& inc = at[far.j];
      std::pair<int, int> next = inc[0];
      if (next.first == s && next.second == far_side) next = inc[1];
      s = next.first;
      from_side = next.second;
    }
  };
  for (size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    if (!segs[s].a.junction) {
      End start = segs[s].a.end;
      End fin = walk(static_cast<int>(s), 0);
      out.connect(start, fin);
    } else if (!segs[s].b.junction) {
      End start = segs[s].b.end;
      End fin = walk(static_cast<int>(s), 1);
      out.connect(start, fin);
    }
  }
  for (size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    int cap = jcap[segs[s].a.j];
    int cur = static_cast<int>(s), side = 0;
    while (!used[cur]) {
      used[cur] = true;
      const GEnd& far = side == 0 ? segs[cur].b : segs[cur].a;
      int far_side = side == 0 ? 1 : 0;
      const auto& inc = at[far.j];
      std::pair<int, int> next = inc[0];
      if (next.first == cur && next.second == far_side) next = inc[1];
      cur = next.first;
      side = next.second;
    }
    out.add_node(Node::scalar(cplx(cap + 1, 0)));
  }
}

}  // namespace detail

namespace {

using detail::GEnd;
using detail::Segment;
using detail::fuse_segments;

End shift(End e, int node_off, int in_off, int out_off) {
  switch (e.type) {
    case End::Port: e.node += node_off; break;
    case End::In: e.index += in_off; break;
    case End::Out: e.index += out_off; break;
  }
  return e;
}

void require_same_flavor(const Diagram& a, const Diagram& b) {
  if (!(a.flavor == b.flavor))
    throw ZwError(ErrorKind::FlavorMismatch,
                  "flavors differ: " + a.flavor.name() + " vs " + b.flavor.name());
}

}  // namespace

Diagram compose_seq(const Diagram& first, const Diagram& second) {
  require_same_flavor(first, second);
  if (first.out_caps != second.in_caps)
    throw ZwError(ErrorKind::BoundaryMismatch, "output boundary of the first diagram (" +
                                                   std::to_string(first.num_outputs()) +
                                                   " wires) does not match the input boundary of "
                                                   "the second (" +
                                                   std::to_string(second.num_inputs()) + ")");
  Diagram out = empty_diagram(first.flavor);
  out.nodes = first.nodes;
  out.nodes.insert(out.nodes.end(), second.nodes.begin(), second.nodes.end());
  out.in_caps = first.in_caps;
  out.out_caps = second.out_caps;
  const int off = static_cast<int>(first.nodes.size());
  std::vector<Segment> segs;
  auto conv1 = [&](const End& e) {
    GEnd g;
    if (e.type == End::Out) {
      g.junction = true;
      g.j = e.index;
    } else {
      g.end = e;
    }
    return g;
  };
  auto conv2 = [&](const End& e) {
    GEnd g;
    if (e.type == End::In) {
      g.junction = true;
      g.j = e.index;
    } else {
      g.end = shift(e, off, 0, 0);
    }
    return g;
  };
  for (const Wire& w : first.wires) segs.push_back({conv1(w.a), conv1(w.b)});
  for (const Wire& w : second.wires) segs.push_back({conv2(w.a), conv2(w.b)});
  fuse_segments(out, segs, first.out_caps);
  return out;
}

Diagram compose_par(const Diagram& a, const Diagram& b) {
  require_same_flavor(a, b);
  Diagram out = a;
  const int off = static_cast<int>(a.nodes.size());
  out.nodes.insert(out.nodes.end(), b.nodes.begin(), b.nodes.end());
  out.in_caps.insert(out.in_caps.end(), b.in_caps.begin(), b.in_caps.end());
  out.out_caps.insert(out.out_caps.end(), b.out_caps.begin(), b.out_caps.end());
  for (const Wire& w : b.wires)
    out.connect(shift(w.a, off, a.num_inputs(), a.num_outputs()),
                shift(w.b, off, a.num_inputs(), a.num_outputs()));
  return out;
}

Diagram dagger(const Diagram& d) {
  Diagram out = d;
  std::swap(out.in_caps, out.out_caps);
  for (Node& n : out.nodes)
    if (n.kind == Kind::Z || n.kind == Kind::Scalar) n.param = std::conj(n.param);
  auto flip = [](End& e) {
    if (e.type == End::In)
      e.type = End::Out;
    else if (e.type == End::Out)
      e.type = End::In;
  };
  for (Wire& w : out.wires) {
    flip(w.a);
    flip(w.b);
  }
  return out;
}

Diagram permute_outputs(const Diagram& d, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != d.num_outputs())
    throw ZwError(ErrorKind::BoundaryMismatch, "permutation length differs from output count");
  std::vector<int> inv(perm.size(), -1);
  for (size_t j = 0; j < perm.size(); ++j) inv.at(perm[j]) = static_cast<int>(j);
  Diagram out = d;
  for (size_t j = 0; j < perm.size(); ++j) out.out_caps[j] = d.out_caps[perm[j]];
  for (Wire& w : out.wires)
    for (End* e : {&w.a, &w.b})
      if (e->type == End::Out) e->index = inv[e->index];
  return out;
}

namespace {

/** Adds ket_k on capacity `cap` to `d` and returns the port emitting it. */
End add_ket(Diagram& d, int k, int cap, bool mixed) {
  if (k == 0) return End::port(d.add_node(Node::w(cap, {})), 0);
  if (k == 1) return End::port(d.add_node(Node::ket_one(cap)), 0);
  const int sub_cap = mixed ? k - 1 : cap;
  const int leaf_cap = mixed ? 1 : cap;
  int w = d.add_node(Node::w(cap, {sub_cap, leaf_cap}));
  End sub = add_ket(d, k - 1, sub_cap, mixed);
  End leaf = End::port(d.add_node(Node::ket_one(leaf_cap)), 0);
  d.connect(End::port(w, 1), sub);
  d.connect(End::port(w, 2), leaf);
  return End::port(w, 0);
}

}  // namespace

Diagram derived_ket(int k, int cap, Flavor f) {
  int c = resolve_cap(f, cap);
  if (k < 0 || k > c)
    throw ZwError(ErrorKind::RangeViolation,
                  "ket_" + std::to_string(k) + " does not fit capacity " + std::to_string(c));
  Diagram d = empty_diagram(f);
  End e = add_ket(d, k, c, f.mixed);
  d.out_caps = {c};
  d.connect(e, End::out(0));
  return d;
}

Diagram bend_to_state(const Diagram& d) {
  Diagram out = d;
  const int n = d.num_inputs();
  out.in_caps.clear();
  out.out_caps.clear();
  for (int i = n - 1; i >= 0; --i) out.out_caps.push_back(d.in_caps[i]);
  out.out_caps.insert(out.out_caps.end(), d.out_caps.begin(), d.out_caps.end());
  for (Wire& w : out.wires)
    for (End* e : {&w.a, &w.b}) {
      if (e->type == End::In)
        *e = End::out(n - 1 - e->index);
      else if (e->type == End::Out)
        *e = End::out(n + e->index);
    }
  return out;
}

Diagram restricted_z_spider(int a, cplx r, int n, int m, int d) {
  Flavor f = Flavor::qudit(d);
  const int c = f.uniform_cap();
  if (a < 0 || a > c)
    throw ZwError(ErrorKind::RangeViolation,
                  "restriction " + std::to_string(a) + " outside 0.." + std::to_string(c));
  Diagram g = empty_diagram(f);
  g.add_node(Node::scalar(cplx(1.0 / static_cast<double>(factorial(a)), 0)));
  const int z = g.add_node(Node::z(r, n + m + 1, c));
  const int split = g.add_node(Node::w(c, {c, c}));
  const int erase = g.add_node(Node::z(1.0, 3, c));
  End ket = add_ket(g, a, c, false);
  g.connect(ket, End::port(split, 0));
  g.connect(End::port(split, 1), End::port(z, n + m));
  g.connect(End::port(split, 2), End::port(erase, 0));
  g.connect(End::port(erase, 1), End::port(erase, 2));
  for (int i = 0; i < n; ++i) {
    g.in_caps.push_back(c);
    g.connect(End::in(i), End::port(z, i));
  }
  for (int j = 0; j < m; ++j) {
    g.out_caps.push_back(c);
    g.connect(End::port(z, n + j), End::out(j));
  }
  return g;
}

// ---- validation -------------------------------------------------------------

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::PortUncovered: return "PortUncovered";
    case ViolationKind::PortOvercovered: return "PortOvercovered";
    case ViolationKind::BoundaryUncovered: return "BoundaryUncovered";
    case ViolationKind::BoundaryOvercovered: return "BoundaryOvercovered";
    case ViolationKind::CapacityMismatch: return "CapacityMismatch";
    case ViolationKind::FlavorViolation: return "FlavorViolation";
    case ViolationKind::CapacityViolation: return "CapacityViolation";
    case ViolationKind::BadEndpoint: return "BadEndpoint";
  }
  return "?";
}

std::vector<Violation> validate(const Diagram& d) {
  std::vector<Violation> v;
  auto report = [&](ViolationKind k, std::string s) { v.push_back({k, std::move(s)}); };
  const bool qudit = !d.flavor.mixed;
  const int uc = d.flavor.uniform_cap();
  auto check_cap = [&](int c, const std::string& where) {
    if (c < 1) report(ViolationKind::CapacityViolation, where + ": capacity < 1");
    else if (qudit && c != uc)
      report(ViolationKind::FlavorViolation,
             where + ": capacity " + std::to_string(c) + " in qudit(d=" + std::to_string(d.flavor.d) +
                 ")");
  };
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    const Node& n = d.nodes[i];
    const std::string where = "node " + std::to_string(i);
    if (n.kind == Kind::Z || n.kind == Kind::KetOne || n.kind == Kind::W) check_cap(n.cap, where);
    if (n.kind == Kind::W)
      for (int c : n.out_caps) {
        check_cap(c, where);
        if (c > n.cap) report(ViolationKind::CapacityViolation, where + ": output exceeds input");
      }
  }
  for (size_t i = 0; i < d.in_caps.size(); ++i) check_cap(d.in_caps[i], "input " + std::to_string(i));
  for (size_t j = 0; j < d.out_caps.size(); ++j)
    check_cap(d.out_caps[j], "output " + std::to_string(j));

  std::vector<std::vector<int>> port_count(d.nodes.size());
  for (size_t i = 0; i < d.nodes.size(); ++i) port_count[i].assign(d.nodes[i].num_ports(), 0);
  std::vector<int> in_count(d.in_caps.size(), 0), out_count(d.out_caps.size(), 0);
  for (size_t w = 0; w < d.wires.size(); ++w) {
    bool ok = true;
    for (const End* e : {&d.wires[w].a, &d.wires[w].b}) {
      if (e->type == End::Port) {
        if (e->node < 0 || e->node >= static_cast<int>(d.nodes.size()) || e->index < 0 ||
            e->index >= d.nodes[e->node].num_ports()) {
          report(ViolationKind::BadEndpoint, "wire " + std::to_string(w) + " names a missing port");
          ok = false;
        } else {
          ++port_count[e->node][e->index];
        }
      } else if (e->type == End::In) {
        if (e->index < 0 || e->index >= d.num_inputs()) {
          report(ViolationKind::BadEndpoint, "wire " + std::to_string(w) + " names a missing input");
          ok = false;
        } else {
          ++in_count[e->index];
        }
      } else {
        if (e->index < 0 || e->index >= d.num_outputs()) {
          report(ViolationKind::BadEndpoint, "wire " + std::to_string(w) + " names a missing output");
          ok = false;
        } else {
          ++out_count[e->index];
        }
      }
    }
    if (ok && d.cap_of(d.wires[w].a) != d.cap_of(d.wires[w].b))
      report(ViolationKind::CapacityMismatch,
             "wire " + std::to_string(w) + " joins capacities " +
                 std::to_string(d.cap_of(d.wires[w].a)) + " and " +
                 std::to_string(d.cap_of(d.wires[w].b)));
  }
  for (size_t i = 0; i < port_count.size(); ++i)
    for (size_t p = 0; p < port_count[i].size(); ++p) {
      const std::string where = "node " + std::to_string(i) + " port " + std::to_string(p);
      if (port_count[i][p] == 0) report(ViolationKind::PortUncovered, where);
      if (port_count[i][p] > 1) report(ViolationKind::PortOvercovered, where);
    }
  for (size_t i = 0; i < in_count.size(); ++i) {
    if (in_count[i] == 0) report(ViolationKind::BoundaryUncovered, "input " + std::to_string(i));
    if (in_count[i] > 1) report(ViolationKind::BoundaryOvercovered, "input " + std::to_string(i));
  }
  for (size_t j = 0; j < out_count.size(); ++j) {
    if (out_count[j] == 0) report(ViolationKind::BoundaryUncovered, "output " + std::to_string(j));
    if (out_count[j] > 1) report(ViolationKind::BoundaryOvercovered, "output " + std::to_string(j));
  }
  return v;
}

void require_valid(const Diagram& d) {
  auto v = validate(d);
  if (!v.empty())
    throw ZwError(ErrorKind::InvalidDiagram,
                  std::string(violation_name(v.front().kind)) + ": " + v.front().detail);
}

std::uint64_t fingerprint(const Diagram& d) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  auto mixd = [&](double x) {
    std::uint64_t b;
    static_assert(sizeof(b) == sizeof(x));
    std::memcpy(&b, &x, sizeof(b));
    mix(b);
  };
  mix(d.flavor.mixed);
  mix(static_cast<std::uint64_t>(d.flavor.d));
  for (const Node& n : d.nodes) {
    mix(static_cast<std::uint64_t>(n.kind));
    mixd(n.param.real());
    mixd(n.param.imag());
    mix(static_cast<std::uint64_t>(n.cap));
    mix(static_cast<std::uint64_t>(n.legs));
    for (int c : n.out_caps) mix(static_cast<std::uint64_t>(c));
    mix(0xfeed);
  }
  for (const Wire& w : d.wires)
    for (const End* e : {&w.a, &w.b}) {
      mix(e->type);
      mix(static_cast<std::uint64_t>(e->node));
      mix(static_cast<std::uint64_t>(e->index));
    }
  for (int c : d.in_caps) mix(static_cast<std::uint64_t>(c));
  mix(0xbeef);
  for (int c : d.out_caps) mix(static_cast<std::uint64_t>(c));
  return h;
}

}  // namespace zw
