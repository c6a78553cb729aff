// Rule schemas: names, side conditions, template instantiation, sampling.

#include <algorithm>
#include <numeric>
#include <sstream>

#include "zw/combinatorics.hpp"
#include "zw/rules.hpp"

namespace zw {

const char* tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::S: return "s";
    case RuleTag::A: return "a";
    case RuleTag::O: return "o";
    case RuleTag::Id: return "id";
    case RuleTag::H: return "h";
    case RuleTag::B1: return "b1";
    case RuleTag::B2: return "b2";
    case RuleTag::Plus: return "plus";
    case RuleTag::E: return "e";
    case RuleTag::Cp: return "cp";
    case RuleTag::Loop: return "loop";
    case RuleTag::I: return "i";
    case RuleTag::U: return "u";
    case RuleTag::ScalarMerge: return "scalar-merge";
    case RuleTag::FlexPermute: return "flex-permute";
  }
  return "?";
}

std::string RuleId::name() const { return std::string(mixed ? "mixed/" : "qudit/") + tag_name(tag); }

const char* direction_name(Direction d) { return d == Direction::LeftToRight ? "L->R" : "R->L"; }

std::vector<RuleId> axioms(bool mixed) {
  std::vector<RuleTag> tags =
      mixed ? std::vector<RuleTag>{RuleTag::S,  RuleTag::A,    RuleTag::O,  RuleTag::Id,
                                   RuleTag::B1, RuleTag::B2,   RuleTag::Plus, RuleTag::Cp,
                                   RuleTag::H,  RuleTag::Loop, RuleTag::I,  RuleTag::U}
            : std::vector<RuleTag>{RuleTag::S,    RuleTag::A, RuleTag::Id, RuleTag::H,
                                   RuleTag::B1,   RuleTag::B2, RuleTag::Plus, RuleTag::E,
                                   RuleTag::Cp,   RuleTag::Loop, RuleTag::U};
  std::vector<RuleId> out;
  for (RuleTag t : tags) out.push_back({mixed, t});
  return out;
}

std::vector<RuleId> all_rules(bool mixed) {
  auto v = axioms(mixed);
  v.push_back({mixed, RuleTag::ScalarMerge});
  v.push_back({mixed, RuleTag::FlexPermute});
  return v;
}

RuleId parse_rule(const std::string& tag, bool mixed) {
  for (const RuleId& r : all_rules(mixed))
    if (tag == tag_name(r.tag)) return r;
  if (tag == "+") return {mixed, RuleTag::Plus};
  if (tag == "l" || tag == "ell") return {mixed, RuleTag::Loop};
  throw ZwError(ErrorKind::UnknownRule,
                "no rule '" + tag + "' in the " + (mixed ? "mixed" : "qudit") + " theory");
}

RuleInfo rule_info(const RuleId& id) {
  RuleInfo info{id, "", "none"};
  switch (id.tag) {
    case RuleTag::S:
      info.summary = "two Z-spiders sharing one wire fuse, parameters multiply";
      if (id.mixed) info.side_condition = "both spiders have the same capacity";
      break;
    case RuleTag::A:
      info.summary = "a W-node fed by another W-node's output merges into one W-node";
      if (id.mixed) info.side_condition = "intermediate capacity b = c or b >= sum of inner outputs";
      break;
    case RuleTag::O:
      info.summary =
          "W-associativity when the intermediate wire is too small: a 1->1 spider guards it";
      info.side_condition = "b < c and b < sum of inner outputs";
      break;
    case RuleTag::Id:
      info.summary = "a 1->1 W-node with equal capacities is a bare wire";
      break;
    case RuleTag::H:
      info.summary =
          "Z(1) joined to a W-node by capacity+1 parallel wires: the spider meets a |0> and the "
          "W-node becomes <0|";
      if (id.mixed) info.side_condition = "spider capacity a <= W input capacity c";
      break;
    case RuleTag::B1:
      info.summary = "Z-spider feeding a W-node commutes past it (bialgebra)";
      info.side_condition = "the spider has n != 0 other legs";
      break;
    case RuleTag::B2:
      info.summary = "two W-nodes joined at their inputs become a bipartite W-network";
      info.side_condition = id.mixed ? "c >= min(sum a_i, sum b_j); l_ij = min(a_i, b_j)"
                                     : "qudit: the left group is copied to a merge erased by Z(1)";
      break;
    case RuleTag::Plus:
      info.summary = "Z(r) and Z(s) states merged by a W-node give Z(r+s)";
      break;
    case RuleTag::E:
      info.summary = "ket_k plugged into a one-legged Z(1) is the empty diagram";
      info.side_condition = "1 <= k <= d-1";
      break;
    case RuleTag::Cp:
      info.summary = "|1> into Z(r) gives r times copies of |1>";
      if (id.mixed) info.side_condition = "capacity 1";
      break;
    case RuleTag::Loop:
      info.summary =
          "a self-loop on a spider disappears when at most one particle can reach it";
      break;
    case RuleTag::I:
      info.summary = "|1> injected into a larger capacity is still |1>";
      info.side_condition = "a < b";
      break;
    case RuleTag::U:
      info.summary = "Z(1) state = 1/a! (ket_a split in two, one branch erased)";
      break;
    case RuleTag::ScalarMerge:
      info.summary = "two global scalars are their product";
      break;
    case RuleTag::FlexPermute:
      info.summary = "permuting the legs of a spider (identity on the port-graph quotient)";
      break;
  }
  return info;
}

std::string Binding::describe() const {
  std::ostringstream os;
  auto c2s = [](cplx z) {
    std::ostringstream o;
    o << z.real();
    if (z.imag() != 0) o << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    return o.str();
  };
  auto l2s = [](const std::vector<int>& v) {
    std::ostringstream o;
    o << "[";
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
    o << "]";
    return o.str();
  };
  os << "d=" << d << " r=" << c2s(r) << " s=" << c2s(s) << " n=" << n << " m=" << m << " p=" << p
     << " k=" << k << " a=" << a << " b=" << b << " c=" << c << " as=" << l2s(as)
     << " bs=" << l2s(bs);
  return os.str();
}

namespace {

int sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }
int maxv(const std::vector<int>& v) { return v.empty() ? 0 : *std::max_element(v.begin(), v.end()); }

/** Fills capacities from the qudit dimension and counts from lists. */
Binding normalise(const RuleId& id, Binding b) {
  if (!id.mixed) {
    const int c = b.d - 1;
    b.a = b.b = b.c = c;
    b.as.assign(std::max(0, b.n), c);
    b.bs.assign(std::max(0, b.m), c);
    switch (id.tag) {
      case RuleTag::A:
        b.as.assign(std::max(0, b.n), c);
        b.bs.assign(std::max(0, b.m), c);
        break;
      case RuleTag::B1:
        b.bs.assign(std::max(0, b.m), c);
        break;
      default:
        break;
    }
  } else {
    switch (id.tag) {
      case RuleTag::A:
      case RuleTag::O:
      case RuleTag::B2:
        b.n = static_cast<int>(b.as.size());
        b.m = static_cast<int>(b.bs.size());
        break;
      case RuleTag::B1:
        b.m = static_cast<int>(b.bs.size());
        break;
      default:
        break;
    }
    if (id.tag == RuleTag::Cp) b.a = 1;
  }
  return b;
}

/** Small builder for templates whose boundary positions are all outputs. */
struct Builder {
  Diagram g;
  explicit Builder(Flavor f) : g(empty_diagram(f)) {}
  int node(const Node& n) { return g.add_node(n); }
  void wire(int u, int pu, int v, int pv) { g.connect(End::port(u, pu), End::port(v, pv)); }
  void out(int u, int pu) {
    g.out_caps.push_back(g.nodes[u].port_cap(pu));
    g.connect(End::port(u, pu), End::out(g.num_outputs() - 1));
  }
  // ket_k in the same node order and shape as derived_ket.
  int ket(int k, int cap) {
    if (k == 0) return node(Node::w(cap, {}));
    if (k == 1) return node(Node::ket_one(cap));
    const bool mixed = g.flavor.mixed;
    const int sub_cap = mixed ? k - 1 : cap;
    const int leaf_cap = mixed ? 1 : cap;
    const int w = node(Node::w(cap, {sub_cap, leaf_cap}));
    const int sub = ket(k - 1, sub_cap);
    const int leaf = node(Node::ket_one(leaf_cap));
    wire(w, 1, sub, 0);
    wire(w, 2, leaf, 0);
    return w;
  }
};

}  // namespace

bool admissible(const RuleId& id0, const Binding& b0, std::string* why) {
  const RuleId id = id0;
  const Binding b = normalise(id, b0);
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (!id.mixed && b.d < 2) return fail("d must be >= 2");
  if (b.n < 0 || b.m < 0 || b.p < 0) return fail("negative arity");
  auto caps_ok = [&](const std::vector<int>& v, int bound) {
    for (int x : v)
      if (x < 1 || x > bound) return false;
    return true;
  };
  if (id.mixed && (b.a < 1 || b.b < 1 || b.c < 1)) return fail("capacities must be >= 1");
  if (b.n > 8 || b.m > 8 || b.p > 8) return fail("arity above 8");
  switch (id.tag) {
    case RuleTag::A:
      if (!caps_ok(b.as, b.c) || !caps_ok(b.bs, b.b) || b.b > b.c) return fail("W capacity rule");
      if (id.mixed && !(b.b == b.c || b.b >= sum(b.bs))) return fail("need b = c or b >= sum(Q)");
      return true;
    case RuleTag::O:
      if (!id.mixed) return fail("mixed-only rule");
      if (!caps_ok(b.as, b.c) || !caps_ok(b.bs, b.b)) return fail("W capacity rule");
      if (!(b.b < b.c && b.b < sum(b.bs))) return fail("need b < c and b < sum(Q)");
      return true;
    case RuleTag::H:
      if (b.a > b.c) return fail("need a <= c");
      return true;
    case RuleTag::B1:
      if (b.n < 1) return fail("need n != 0");
      if (!caps_ok(b.bs, b.a)) return fail("W capacity rule");
      return true;
    case RuleTag::B2:
      if (id.mixed) {
        if (!caps_ok(b.as, b.c) || !caps_ok(b.bs, b.c)) return fail("W capacity rule");
        if (b.c < std::min(sum(b.as), sum(b.bs))) return fail("need c >= min(sum a, sum b)");
      }
      return true;
    case RuleTag::E:
      if (id.mixed) return fail("qudit-only rule");
      if (b.k < 1 || b.k > b.d - 1) return fail("need 1 <= k <= d-1");
      return true;
    case RuleTag::I:
      if (!id.mixed) return fail("mixed-only rule");
      if (!(1 <= b.a && b.a < b.b)) return fail("need a < b");
      return true;
    case RuleTag::U:
      if (b.a > 20) return fail("capacity too large");
      return true;
    default:
      return true;
  }
}

Diagram instantiate_side(const RuleId& id, const Binding& b0, bool lhs) {
  std::string why;
  if (!admissible(id, b0, &why))
    throw ZwError(ErrorKind::RangeViolation, id.name() + ": inadmissible binding: " + why);
  const Binding b = normalise(id, b0);
  const Flavor f = id.mixed ? Flavor::mixed_dims() : Flavor::qudit(b.d);
  Builder t(f);
  switch (id.tag) {
    case RuleTag::S: {
      if (lhs) {
        const int z1 = t.node(Node::z(b.r, b.n + 1, b.a));
        const int z2 = t.node(Node::z(b.s, b.m + 1, b.a));
        t.wire(z1, 0, z2, 0);
        for (int i = 1; i <= b.n; ++i) t.out(z1, i);
        for (int i = 1; i <= b.m; ++i) t.out(z2, i);
      } else {
        const int z = t.node(Node::z(b.r * b.s, b.n + b.m, b.a));
        for (int i = 0; i < b.n + b.m; ++i) t.out(z, i);
      }
      break;
    }
    case RuleTag::A:
    case RuleTag::O: {
      const int nr = static_cast<int>(b.as.size()), nq = static_cast<int>(b.bs.size());
      if (lhs || id.tag == RuleTag::O) {
        std::vector<int> outer = {b.b};
        outer.insert(outer.end(), b.as.begin(), b.as.end());
        const int wo = t.node(Node::w(b.c, outer));
        const int wi = t.node(Node::w(b.b, b.bs));
        if (!lhs) {
          const int z = t.node(Node::z(1.0, 2, b.b));
          t.wire(wo, 1, z, 0);
          t.wire(z, 1, wi, 0);
        } else {
          t.wire(wo, 1, wi, 0);
        }
        t.out(wo, 0);
        for (int i = 0; i < nr; ++i) t.out(wo, 2 + i);
        for (int j = 0; j < nq; ++j) t.out(wi, 1 + j);
      } else {
        std::vector<int> outs = b.as;
        outs.insert(outs.end(), b.bs.begin(), b.bs.end());
        const int w = t.node(Node::w(b.c, outs));
        t.out(w, 0);
        for (int i = 0; i < nr + nq; ++i) t.out(w, 1 + i);
      }
      break;
    }
    case RuleTag::Id: {
      if (lhs) {
        const int w = t.node(Node::w(b.a, {b.a}));
        t.out(w, 0);
        t.out(w, 1);
      } else {
        t.g.out_caps = {b.a, b.a};
        t.g.connect(End::out(0), End::out(1));
      }
      break;
    }
    case RuleTag::H: {
      if (lhs) {
        const int z = t.node(Node::z(1.0, b.p + b.c + 1, b.a));
        const int w = t.node(Node::w(b.c, std::vector<int>(b.c + 1, b.a)));
        for (int i = 0; i <= b.c; ++i) t.wire(z, i, w, i + 1);
        for (int i = 0; i < b.p; ++i) t.out(z, b.c + 1 + i);
        t.out(w, 0);
      } else {
        const int z = t.node(Node::z(1.0, b.p + 1, b.a));
        const int k0 = t.node(Node::w(b.a, {}));
        const int e = t.node(Node::w(b.c, {}));
        t.wire(z, 0, k0, 0);
        for (int i = 0; i < b.p; ++i) t.out(z, 1 + i);
        t.out(e, 0);
      }
      break;
    }
    case RuleTag::B1: {
      const int m = static_cast<int>(b.bs.size());
      if (lhs) {
        const int z = t.node(Node::z(b.r, b.n + 1, b.a));
        const int w = t.node(Node::w(b.a, b.bs));
        t.wire(z, 0, w, 0);
        for (int i = 1; i <= b.n; ++i) t.out(z, i);
        for (int j = 0; j < m; ++j) t.out(w, 1 + j);
      } else {
        std::vector<int> ws, zs;
        for (int i = 0; i < b.n; ++i) ws.push_back(t.node(Node::w(b.a, b.bs)));
        for (int j = 0; j < m; ++j) zs.push_back(t.node(Node::z(b.r, b.n + 1, b.bs[j])));
        for (int i = 0; i < b.n; ++i)
          for (int j = 0; j < m; ++j) t.wire(ws[i], 1 + j, zs[j], i);
        for (int i = 0; i < b.n; ++i) t.out(ws[i], 0);
        for (int j = 0; j < m; ++j) t.out(zs[j], b.n);
      }
      break;
    }
    case RuleTag::B2: {
      const int n = static_cast<int>(b.as.size()), m = static_cast<int>(b.bs.size());
      if (lhs) {
        const int mg = t.node(Node::w(b.c, b.as));
        const int sp = t.node(Node::w(b.c, b.bs));
        t.wire(mg, 0, sp, 0);
        for (int i = 0; i < n; ++i) t.out(mg, 1 + i);
        for (int j = 0; j < m; ++j) t.out(sp, 1 + j);
      } else if (id.mixed) {
        std::vector<int> wi, mj;
        for (int i = 0; i < n; ++i) {
          std::vector<int> caps;
          for (int j = 0; j < m; ++j) caps.push_back(std::min(b.as[i], b.bs[j]));
          wi.push_back(t.node(Node::w(b.as[i], caps)));
        }
        for (int j = 0; j < m; ++j) {
          std::vector<int> caps;
          for (int i = 0; i < n; ++i) caps.push_back(std::min(b.as[i], b.bs[j]));
          mj.push_back(t.node(Node::w(b.bs[j], caps)));
        }
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < m; ++j) t.wire(wi[i], 1 + j, mj[j], 1 + i);
        for (int i = 0; i < n; ++i) t.out(wi[i], 0);
        for (int j = 0; j < m; ++j) t.out(mj[j], 0);
      } else {
        const int c = b.c;
        std::vector<int> zc, sp, mj;
        for (int i = 0; i < n; ++i) zc.push_back(t.node(Node::z(1.0, 3, c)));
        for (int i = 0; i < n; ++i) sp.push_back(t.node(Node::w(c, std::vector<int>(m, c))));
        for (int j = 0; j < m; ++j) mj.push_back(t.node(Node::w(c, std::vector<int>(n, c))));
        const int g = t.node(Node::w(c, std::vector<int>(n, c)));
        const int e = t.node(Node::z(1.0, 1, c));
        t.wire(g, 0, e, 0);
        for (int i = 0; i < n; ++i) {
          t.wire(zc[i], 1, sp[i], 0);
          t.wire(zc[i], 2, g, 1 + i);
          for (int j = 0; j < m; ++j) t.wire(sp[i], 1 + j, mj[j], 1 + i);
        }
        for (int i = 0; i < n; ++i) t.out(zc[i], 0);
        for (int j = 0; j < m; ++j) t.out(mj[j], 0);
      }
      break;
    }
    case RuleTag::Plus: {
      if (lhs) {
        const int z1 = t.node(Node::z(b.r, 1, b.a));
        const int z2 = t.node(Node::z(b.s, 1, b.a));
        const int w = t.node(Node::w(b.a, {b.a, b.a}));
        t.wire(z1, 0, w, 1);
        t.wire(z2, 0, w, 2);
        t.out(w, 0);
      } else {
        const int z = t.node(Node::z(b.r + b.s, 1, b.a));
        t.out(z, 0);
      }
      break;
    }
    case RuleTag::E: {
      if (lhs) {
        const int z = t.node(Node::z(1.0, 1, b.a));
        const int k = t.ket(b.k, b.a);
        t.wire(z, 0, k, 0);
      }
      break;
    }
    case RuleTag::Cp: {
      if (lhs) {
        const int k = t.node(Node::ket_one(b.a));
        const int z = t.node(Node::z(b.r, b.n + 1, b.a));
        t.wire(k, 0, z, 0);
        for (int i = 1; i <= b.n; ++i) t.out(z, i);
      } else {
        t.node(Node::scalar(b.r));
        std::vector<int> ks;
        for (int i = 0; i < b.n; ++i) ks.push_back(t.node(Node::ket_one(b.a)));
        for (int k : ks) t.out(k, 0);
      }
      break;
    }
    case RuleTag::Loop: {
      const int k = t.node(Node::ket_one(b.a));
      const int w = t.node(Node::w(b.a, {b.a, b.a}));
      const int extra = lhs ? 2 : 0;
      const int z = t.node(Node::z(b.r, b.n + 1 + extra, b.a));
      t.wire(k, 0, w, 0);
      t.wire(w, 1, z, 0);
      if (lhs) t.wire(z, 1, z, 2);
      t.out(w, 2);
      for (int i = 0; i < b.n; ++i) t.out(z, 1 + extra + i);
      break;
    }
    case RuleTag::U: {
      if (lhs) {
        const int z = t.node(Node::z(1.0, 1, b.a));
        t.out(z, 0);
      } else {
        t.node(Node::scalar(1.0 / static_cast<double>(factorial(b.a))));
        const int sp = t.node(Node::w(b.a, {b.a, b.a}));
        const int e = t.node(Node::z(1.0, 3, b.a));
        const int k = t.ket(b.a, b.a);
        t.wire(k, 0, sp, 0);
        t.wire(sp, 2, e, 0);
        t.wire(e, 1, e, 2);
        t.out(sp, 1);
      }
      break;
    }
    case RuleTag::I: {
      if (lhs) {
        const int k = t.node(Node::ket_one(b.a));
        const int w = t.node(Node::w(b.b, {b.a}));
        t.wire(k, 0, w, 1);
        t.out(w, 0);
      } else {
        const int k = t.node(Node::ket_one(b.b));
        t.out(k, 0);
      }
      break;
    }
    case RuleTag::ScalarMerge: {
      if (lhs) {
        t.node(Node::scalar(b.r));
        t.node(Node::scalar(b.s));
      } else {
        t.node(Node::scalar(b.r * b.s));
      }
      break;
    }
    case RuleTag::FlexPermute: {
      const int z = t.node(Node::z(b.r, b.n, b.a));
      for (int i = 0; i < b.n; ++i) t.out(z, lhs ? i : b.n - 1 - i);
      break;
    }
  }
  return t.g;
}

RulePair instantiate(const RuleId& id, const Binding& b) {
  return {instantiate_side(id, b, true), instantiate_side(id, b, false)};
}

Binding sample_binding(const RuleId& id, const SampleBounds& bounds, Rng& rng) {
  auto uni = [&](int lo, int hi) {
    if (hi < lo) hi = lo;
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int ar = std::max(1, bounds.max_arity);
  const int mc = std::max(2, bounds.max_cap);
  Binding b;
  b.d = bounds.d;
  b.r = random_param(rng, true);
  b.s = random_param(rng, true);
  auto caps = [&](int count, int hi) {
    std::vector<int> v(count);
    for (int& x : v) x = uni(1, hi);
    return v;
  };
  switch (id.tag) {
    case RuleTag::S:
      b.n = uni(0, ar);
      b.m = uni(0, ar);
      b.a = uni(1, mc);
      break;
    case RuleTag::A:
      b.n = uni(0, ar - 1);
      b.m = uni(0, ar);
      if (id.mixed) {
        b.c = uni(1, mc);
        b.b = uni(1, b.c);
        b.as = caps(b.n, b.c);
        b.bs = caps(b.m, b.b);
        if (b.b != b.c && sum(b.bs) > b.b) b.b = b.c;
      }
      break;
    case RuleTag::O:
      b.c = uni(2, mc);
      b.b = uni(1, b.c - 1);
      b.as = caps(uni(0, ar - 1), b.c);
      do {
        b.bs = caps(uni(2, std::max(2, ar)), b.b);
      } while (sum(b.bs) <= b.b);
      break;
    case RuleTag::Id:
      b.a = uni(1, mc);
      break;
    case RuleTag::H:
      b.p = uni(0, ar - 1);
      b.a = uni(1, mc);
      b.c = uni(b.a, mc);
      break;
    case RuleTag::B1:
      b.n = uni(1, ar);
      b.m = uni(0, ar);
      b.a = uni(1, mc);
      b.bs = caps(b.m, b.a);
      break;
    case RuleTag::B2:
      b.n = uni(0, ar);
      b.m = uni(0, ar);
      if (id.mixed) {
        b.as = caps(b.n, mc);
        b.bs = caps(b.m, mc);
        const int lo = std::max({maxv(b.as), maxv(b.bs), std::min(sum(b.as), sum(b.bs)), 1});
        b.c = uni(lo, std::max(lo, mc));
      }
      break;
    case RuleTag::Plus:
      b.a = uni(1, mc);
      break;
    case RuleTag::E:
      b.k = uni(1, b.d - 1);
      break;
    case RuleTag::Cp:
      b.n = uni(0, ar);
      b.a = id.mixed ? 1 : b.d - 1;
      break;
    case RuleTag::Loop:
      b.n = uni(0, ar - 1);
      b.a = uni(1, mc);
      break;
    case RuleTag::U:
      b.a = uni(1, mc);
      break;
    case RuleTag::I:
      b.a = uni(1, mc - 1);
      b.b = uni(b.a + 1, mc);
      break;
    case RuleTag::ScalarMerge:
      break;
    case RuleTag::FlexPermute:
      b.n = uni(0, ar);
      b.a = uni(1, mc);
      break;
  }
  return normalise(id, b);
}

}  // namespace zw
