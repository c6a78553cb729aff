// Normal forms of states: the table <-> diagram correspondence, the semantic
// normalizer, and the table-level combinators for tensor, cup and W-merge.

#include "zw/normal_form.hpp"

#include <algorithm>
#include <cmath>

#include "zw/combinatorics.hpp"
#include "zw/semantics.hpp"

namespace zw {

void CoefficientTable::prune(double eps) {
  double top = 0;
  for (const auto& [x, r] : entries) top = std::max(top, std::abs(r));
  const double cut = std::max(eps * top, 0.0);
  for (auto it = entries.begin(); it != entries.end();) {
    if (std::abs(it->second) <= cut || std::abs(it->second) == 0.0)
      it = entries.erase(it);
    else
      ++it;
  }
}

Tensor CoefficientTable::to_tensor() const {
  std::vector<int> shape;
  for (int c : caps) shape.push_back(c + 1);
  Tensor t(shape);
  for (const auto& [x, r] : entries) t.at(x) += r;
  return t;
}

CoefficientTable CoefficientTable::from_tensor(const Tensor& t, const std::vector<int>& caps,
                                               double eps) {
  CoefficientTable tab;
  tab.caps = caps;
  if (t.shape.size() != caps.size())
    throw ZwError(ErrorKind::BoundaryMismatch, "tensor rank differs from the capacity list");
  for (std::size_t j = 0; j < caps.size(); ++j)
    if (t.shape[j] != caps[j] + 1)
      throw ZwError(ErrorKind::CapacityMismatch, "tensor axis " + std::to_string(j) +
                                                     " does not match its capacity");
  std::vector<int> idx(caps.size(), 0);
  std::size_t k = 0;
  do {
    if (t.data[k] != cplx(0.0)) tab.entries[idx] = t.data[k];
    ++k;
  } while (Tensor::next_index(idx, t.shape));
  tab.prune(eps);
  return tab;
}

namespace {

void check_table(const CoefficientTable& t, Flavor f) {
  for (int c : t.caps) {
    if (c < 0) throw ZwError(ErrorKind::CapacityViolation, "negative capacity in table");
    if (!f.mixed && c != f.uniform_cap())
      throw ZwError(ErrorKind::CapacityMismatch,
                    "qudit table capacity " + std::to_string(c) + " differs from d-1");
  }
  for (const auto& [x, r] : t.entries) {
    if (x.size() != t.caps.size())
      throw ZwError(ErrorKind::BoundaryMismatch, "exponent vector of wrong length");
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] < 0 || x[j] > t.caps[j])
        throw ZwError(ErrorKind::RangeViolation, "exponent outside its capacity");
  }
}

}  // namespace

NormalFormDiagram n_functor(const CoefficientTable& table, Flavor f) {
  check_table(table, f);
  CoefficientTable tab = table;
  tab.prune();
  const int n = tab.arity();
  const int inner = f.mixed ? 1 : f.uniform_cap();
  Diagram g = empty_diagram(f);
  g.out_caps = tab.caps;

  if (tab.entries.empty()) {
    g.add_node(Node::scalar(0.0));
    for (int j = 0; j < n; ++j) {
      const int w = g.add_node(Node::w(tab.caps[j], {}));
      g.connect(End::port(w, 0), End::out(j));
    }
    return {tab, g};
  }

  const int terms = static_cast<int>(tab.entries.size());
  const int ket = g.add_node(Node::ket_one(inner));
  const int sel = g.add_node(Node::w(inner, std::vector<int>(terms, inner)));
  g.connect(End::port(ket, 0), End::port(sel, 0));

  // Wires per collector, needed before the collectors can be sized.
  std::vector<int> fan(n, 0);
  for (const auto& [x, r] : tab.entries)
    for (int j = 0; j < n; ++j) fan[j] += x[j];
  std::vector<int> zs;
  for (const auto& [x, r] : tab.entries) {
    int legs = 1;
    double norm = 1.0;
    for (int j = 0; j < n; ++j) {
      legs += x[j];
      norm *= sqrt_factorial(x[j]);
    }
    zs.push_back(g.add_node(Node::z(r / norm, legs, inner)));
  }
  std::vector<int> coll(n);
  for (int j = 0; j < n; ++j) {
    coll[j] = g.add_node(Node::w(tab.caps[j], std::vector<int>(fan[j], inner)));
    g.connect(End::port(coll[j], 0), End::out(j));
  }
  std::vector<int> next_out(n, 1);
  int i = 0;
  for (const auto& [x, r] : tab.entries) {
    g.connect(End::port(sel, 1 + i), End::port(zs[i], 0));
    int leg = 1;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < x[j]; ++k) g.connect(End::port(zs[i], leg++), End::port(coll[j], next_out[j]++));
    ++i;
  }
  return {tab, g};
}

Diagram nf_to_diagram(const NormalFormDiagram& nf) { return nf.realization; }

CoefficientTable table_of(const Diagram& d) {
  auto fail = [](const std::string& why) {
    return ZwError(ErrorKind::NotInNormalForm, "not a normal form: " + why);
  };
  if (d.num_inputs() != 0) throw fail("diagram has inputs");
  if (!validate(d).empty()) throw fail("diagram is not well formed");
  const Incidence inc(d);
  const int n = d.num_outputs();
  CoefficientTable tab;
  tab.caps = d.out_caps;

  // Each output must be driven by the input port of its own collector W.
  std::vector<int> coll(n);
  for (int j = 0; j < n; ++j) {
    const End e = inc.other(End::out(j));
    if (!e.is_port() || d.nodes[e.node].kind != Kind::W || e.index != 0)
      throw fail("output " + std::to_string(j) + " is not fed by a collector");
    coll[j] = e.node;
  }

  int kets = 0, scalars = 0;
  for (const Node& nd : d.nodes) {
    kets += nd.kind == Kind::KetOne;
    scalars += nd.kind == Kind::Scalar;
  }
  if (kets == 0) {
    // Empty support: the zero scalar beside bare collectors.
    if (scalars != 1 || static_cast<int>(d.nodes.size()) != n + 1)
      throw fail("no selector and not the zero form");
    for (const Node& nd : d.nodes)
      if (nd.kind == Kind::Scalar && nd.param != cplx(0.0)) throw fail("nonzero lone scalar");
  } else {
    if (kets != 1 || scalars != 0) throw fail("expected one KetOne and no scalars");
    int ket = -1;
    for (int i = 0; i < static_cast<int>(d.nodes.size()); ++i)
      if (d.nodes[i].kind == Kind::KetOne) ket = i;
    const End s = inc.other(End::port(ket, 0));
    if (!s.is_port() || d.nodes[s.node].kind != Kind::W || s.index != 0)
      throw fail("KetOne does not feed a selector");
    const int sel = s.node;
    std::vector<int> index_of(d.nodes.size(), -1);
    for (int j = 0; j < n; ++j) {
      if (index_of[coll[j]] != -1 || coll[j] == sel) throw fail("collector shared");
      index_of[coll[j]] = j;
    }
    for (int p = 1; p < d.nodes[sel].num_ports(); ++p) {
      const End z = inc.other(End::port(sel, p));
      if (!z.is_port() || d.nodes[z.node].kind != Kind::Z) throw fail("selector output not on a spider");
      const Node& zn = d.nodes[z.node];
      std::vector<int> x(n, 0);
      for (int leg = 0; leg < zn.legs; ++leg) {
        if (leg == z.index) continue;
        const End c = inc.other(End::port(z.node, leg));
        if (!c.is_port() || c.index == 0 || index_of[c.node] < 0)
          throw fail("spider leg not on a collector output");
        x[index_of[c.node]]++;
      }
      double norm = 1.0;
      for (int j = 0; j < n; ++j) {
        if (x[j] > tab.caps[j]) throw fail("exponent beyond capacity");
        norm *= sqrt_factorial(x[j]);
      }
      if (tab.entries.count(x)) throw fail("repeated exponent vector");
      tab.entries[x] = zn.param * norm;
    }
  }
  // The shape must be exactly the one the table rebuilds.
  const NormalFormDiagram rebuilt = n_functor(tab, d.flavor);
  if (rebuilt.table.entries.size() != tab.entries.size() ||
      !structurally_equal(rebuilt.realization, d))
    throw fail("structure differs from the canonical realization");
  return tab;
}

NormalFormDiagram normalize(const Diagram& d, double eps) {
  require_valid(d);
  const Diagram s = d.num_inputs() > 0 ? bend_to_state(d) : d;
  const Tensor t = interpret(s);
  return n_functor(CoefficientTable::from_tensor(t, s.out_caps, eps), s.flavor);
}

namespace {

Flavor flavor_of(const NormalFormDiagram& nf) { return nf.realization.flavor; }

}  // namespace

NormalFormDiagram nf_tensor(const NormalFormDiagram& a, const NormalFormDiagram& b) {
  const Flavor f = flavor_of(a);
  if (!(f == flavor_of(b))) throw ZwError(ErrorKind::FlavorMismatch, "tensor of different flavors");
  CoefficientTable t;
  t.caps = a.table.caps;
  t.caps.insert(t.caps.end(), b.table.caps.begin(), b.table.caps.end());
  for (const auto& [x, r] : a.table.entries)
    for (const auto& [y, s] : b.table.entries) {
      std::vector<int> xy = x;
      xy.insert(xy.end(), y.begin(), y.end());
      t.entries[xy] = r * s;
    }
  return n_functor(t, f);
}

namespace {

void check_positions(const CoefficientTable& t, int j1, int j2) {
  if (j1 < 0 || j2 < 0 || j1 >= t.arity() || j2 >= t.arity() || j1 == j2)
    throw ZwError(ErrorKind::RangeViolation, "output positions must be two distinct outputs");
}

std::vector<int> without(const std::vector<int>& v, int j1, int j2) {
  std::vector<int> r;
  for (int j = 0; j < static_cast<int>(v.size()); ++j)
    if (j != j1 && j != j2) r.push_back(v[j]);
  return r;
}

}  // namespace

NormalFormDiagram nf_cup(const NormalFormDiagram& nf, int j1, int j2) {
  const CoefficientTable& t = nf.table;
  check_positions(t, j1, j2);
  if (t.caps[j1] != t.caps[j2])
    throw ZwError(ErrorKind::CapacityMismatch, "cup joins outputs of different capacities");
  CoefficientTable out;
  out.caps = without(t.caps, j1, j2);
  for (const auto& [x, r] : t.entries)
    if (x[j1] == x[j2]) out.entries[without(x, j1, j2)] += r;
  return n_functor(out, flavor_of(nf));
}

NormalFormDiagram nf_w21(const NormalFormDiagram& nf, int j1, int j2, int target_cap) {
  const CoefficientTable& t = nf.table;
  const Flavor f = flavor_of(nf);
  check_positions(t, j1, j2);
  if (!f.mixed) {
    if (target_cap >= 0 && target_cap != f.uniform_cap())
      throw ZwError(ErrorKind::CapacityMismatch, "qudit merge capacity must be d-1");
    target_cap = f.uniform_cap();
  } else if (target_cap < 0) {
    throw ZwError(ErrorKind::CapacityMismatch, "mixed merge needs a target capacity");
  }
  if (target_cap < t.caps[j1] || target_cap < t.caps[j2])
    throw ZwError(ErrorKind::CapacityMismatch, "merge target smaller than an input capacity");
  const int pos = std::min(j1, j2);
  auto merged = [&](const std::vector<int>& v, int value) {
    std::vector<int> r;
    for (int j = 0; j < static_cast<int>(v.size()); ++j) {
      if (j == pos) r.push_back(value);
      else if (j != j1 && j != j2) r.push_back(v[j]);
    }
    return r;
  };
  CoefficientTable out;
  out.caps = merged(t.caps, target_cap);
  for (const auto& [x, r] : t.entries) {
    const int k = x[j1] + x[j2];
    if (k > target_cap) continue;
    out.entries[merged(x, k)] += std::sqrt(static_cast<double>(binomial(k, x[j1]))) * r;
  }
  return n_functor(out, f);
}

EqualityResult diagrams_equal(const Diagram& d1, const Diagram& d2, double tol) {
  if (!(d1.flavor == d2.flavor)) throw ZwError(ErrorKind::BoundaryMismatch, "flavors differ");
  if (d1.in_caps != d2.in_caps || d1.out_caps != d2.out_caps)
    throw ZwError(ErrorKind::BoundaryMismatch, "boundary signatures differ");
  const CoefficientTable a = normalize(d1).table;
  const CoefficientTable b = normalize(d2).table;
  double scale = 0;
  for (const auto* t : {&a, &b})
    for (const auto& [x, r] : t->entries) scale = std::max(scale, std::abs(r));
  const double cut = tol * std::max(scale, kZeroFloor);
  auto get = [](const CoefficientTable& t, const std::vector<int>& x) {
    auto it = t.entries.find(x);
    return it == t.entries.end() ? cplx(0.0) : it->second;
  };
  EqualityResult res;
  res.equal = true;
  // The witness scans the first diagram's support, then the second's.
  for (const auto* t : {&a, &b})
    for (const auto& [x, r] : t->entries) {
      const cplx l = get(a, x), rr = get(b, x);
      if (std::abs(l - rr) > cut) {
        res.equal = false;
        res.witness = x;
        res.lhs_coeff = l;
        res.rhs_coeff = rr;
        return res;
      }
    }
  return res;
}

}  // namespace zw
