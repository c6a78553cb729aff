// Rule matching (anchored subgraph embedding on port graphs) and rewriting.

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "glue.hpp"
#include "zw/rules.hpp"

namespace zw {
namespace {

/** Ports with equal class at a node are interchangeable. */
std::string port_class(const Node& n, int p) {
  switch (n.kind) {
    case Kind::Z: return "L";
    case Kind::W: return p == 0 ? "I" : "O" + std::to_string(n.out_caps[p - 1]);
    case Kind::KetOne: return "K";
    case Kind::Scalar: break;
  }
  return "?";
}

bool close(cplx a, cplx b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a) + std::abs(b));
}

bool node_matches(const Node& t, const Node& h) {
  if (t.kind != h.kind) return false;
  switch (t.kind) {
    case Kind::Z: return t.legs == h.legs && t.cap == h.cap && close(t.param, h.param);
    case Kind::W: {
      if (t.cap != h.cap || t.out_caps.size() != h.out_caps.size()) return false;
      auto x = t.out_caps, y = h.out_caps;
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      return x == y;
    }
    case Kind::KetOne: return t.cap == h.cap;
    case Kind::Scalar: return close(t.param, h.param);
  }
  return false;
}

struct HostView {
  const Diagram& d;
  Incidence inc;
  std::vector<std::vector<int>> adj;         // distinct neighbour nodes
  std::vector<std::vector<int>> node_wires;  // incident wires (self-loops once)

  explicit HostView(const Diagram& dg) : d(dg), inc(dg), adj(dg.nodes.size()),
                                         node_wires(dg.nodes.size()) {
    for (int w = 0; w < static_cast<int>(d.wires.size()); ++w) {
      const Wire& wr = d.wires[w];
      if (wr.a.is_port()) node_wires[wr.a.node].push_back(w);
      if (wr.b.is_port() && !(wr.a.is_port() && wr.a.node == wr.b.node))
        node_wires[wr.b.node].push_back(w);
      if (wr.a.is_port() && wr.b.is_port() && wr.a.node != wr.b.node) {
        adj[wr.a.node].push_back(wr.b.node);
        adj[wr.b.node].push_back(wr.a.node);
      }
    }
    for (auto& v : adj) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }

  const Node& node(int i) const { return d.nodes[i]; }
  End far(int node, int port) const { return inc.other(End::port(node, port)); }
  int wires_between(int u, int v) const {
    int c = 0;
    for (int w : node_wires[u]) {
      const Wire& wr = d.wires[w];
      if (!wr.a.is_port() || !wr.b.is_port()) continue;
      if (u == v ? (wr.a.node == u && wr.b.node == u)
                 : ((wr.a.node == u && wr.b.node == v) || (wr.a.node == v && wr.b.node == u)))
        ++c;
    }
    return c;
  }
};

struct Candidate {
  int anchor = 0;  // template node pinned to the host node
  Binding binding;
  std::map<int, std::vector<int>> prefs;  // host node -> preferred port order
};

struct Embedding1 {
  std::vector<int> node_map;
  std::vector<End> attach;
};

/** Backtracking embedding of a template into the host, anchored at one node. */
class Embedder {
 public:
  Embedder(const HostView& h, const Diagram& pat, const Candidate& c, int host_anchor, int limit)
      : H_(h), P_(pat), C_(c), limit_(limit) {
    const int n = static_cast<int>(P_.nodes.size());
    tadj_.assign(n, {});
    tcount_.assign(n, std::vector<int>(n, 0));
    for (const Wire& w : P_.wires) {
      if (!w.a.is_port() || !w.b.is_port()) continue;
      tadj_[w.a.node].push_back(w.b.node);
      tadj_[w.b.node].push_back(w.a.node);
      tcount_[w.a.node][w.b.node]++;
      if (w.a.node != w.b.node) tcount_[w.b.node][w.a.node]++;
    }
    // Visit order: BFS from the anchor, then remaining components.
    std::vector<bool> seen(n, false);
    parent_.assign(n, -1);
    auto bfs = [&](int root) {
      std::vector<int> q{root};
      seen[root] = true;
      for (std::size_t i = 0; i < q.size(); ++i) {
        order_.push_back(q[i]);
        for (int v : tadj_[q[i]])
          if (!seen[v]) {
            seen[v] = true;
            parent_[v] = q[i];
            q.push_back(v);
          }
      }
    };
    if (c.anchor >= n) throw ZwError(ErrorKind::InvalidDiagram, "anchor outside template");
    if (n > 0) bfs(c.anchor);
    for (int i = 0; i < n; ++i)
      if (!seen[i]) bfs(i);
    map_.assign(n, -1);
    used_.assign(H_.d.nodes.size(), false);
    host_anchor_ = host_anchor;
  }

  std::vector<Embedding1> run() {
    if (P_.nodes.empty()) return out_;
    const int t0 = order_[0];
    if (!node_matches(P_.nodes[t0], H_.node(host_anchor_))) return out_;
    if (tcount_[t0][t0] > H_.wires_between(host_anchor_, host_anchor_)) return out_;
    map_[t0] = host_anchor_;
    used_[host_anchor_] = true;
    extend(1);
    return out_;
  }

 private:
  void extend(std::size_t idx) {
    if (static_cast<int>(out_.size()) >= limit_) return;
    if (idx == order_.size()) {
      Embedding1 e;
      if (ports(e)) out_.push_back(std::move(e));
      return;
    }
    const int t = order_[idx];
    std::vector<int> all;
    const std::vector<int>* cands;
    if (parent_[t] >= 0) {
      cands = &H_.adj[map_[parent_[t]]];
    } else {
      all.resize(H_.d.nodes.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      cands = &all;
    }
    for (int h : *cands) {
      if (used_[h] || !node_matches(P_.nodes[t], H_.node(h))) continue;
      bool ok = tcount_[t][t] <= H_.wires_between(h, h);
      for (std::size_t j = 0; ok && j < idx; ++j) {
        const int u = order_[j];
        if (tcount_[t][u] > 0 && tcount_[t][u] > H_.wires_between(h, map_[u])) ok = false;
      }
      if (!ok) continue;
      map_[t] = h;
      used_[h] = true;
      extend(idx + 1);
      used_[h] = false;
      map_[t] = -1;
    }
  }

  /** Port-level assignment; greedy is complete since same-class ports are
   *  interchangeable. */
  bool ports(Embedding1& e) {
    std::set<std::pair<int, int>> taken;
    std::vector<bool> wire_used(H_.d.wires.size(), false);
    auto cls_h = [&](const End& x) { return port_class(H_.node(x.node), x.index); };
    for (const Wire& w : P_.wires) {
      if (!w.a.is_port() || !w.b.is_port()) continue;
      const int hu = map_[w.a.node], hv = map_[w.b.node];
      const std::string cu = port_class(P_.nodes[w.a.node], w.a.index);
      const std::string cv = port_class(P_.nodes[w.b.node], w.b.index);
      bool found = false;
      for (int hw : H_.node_wires[hu]) {
        if (wire_used[hw]) continue;
        const Wire& x = H_.d.wires[hw];
        if (!x.a.is_port() || !x.b.is_port()) continue;
        for (int flip = 0; flip < 2 && !found; ++flip) {
          const End& p = flip ? x.b : x.a;
          const End& q = flip ? x.a : x.b;
          if (p.node == hu && q.node == hv && cls_h(p) == cu && cls_h(q) == cv) {
            found = true;
            wire_used[hw] = true;
            taken.insert({p.node, p.index});
            taken.insert({q.node, q.index});
          }
        }
        if (found) break;
      }
      if (!found) return false;
    }
    Incidence pinc(P_);
    e.attach.assign(P_.num_outputs(), End{});
    for (int i = 0; i < P_.num_outputs(); ++i) {
      const End t = pinc.other(End::out(i));
      if (!t.is_port()) return false;
      const int h = map_[t.node];
      const std::string c = port_class(P_.nodes[t.node], t.index);
      std::vector<int> order;
      auto it = C_.prefs.find(h);
      if (it != C_.prefs.end()) {
        order = it->second;
      } else {
        for (int p = 0; p < H_.node(h).num_ports(); ++p) order.push_back(p);
      }
      bool found = false;
      for (int p : order) {
        if (taken.count({h, p}) || port_class(H_.node(h), p) != c) continue;
        taken.insert({h, p});
        e.attach[i] = End::port(h, p);
        found = true;
        break;
      }
      if (!found) return false;
    }
    e.node_map = map_;
    return true;
  }

  const HostView& H_;
  const Diagram& P_;
  const Candidate& C_;
  int limit_;
  int host_anchor_ = 0;
  std::vector<std::vector<int>> tadj_;
  std::vector<std::vector<int>> tcount_;
  std::vector<int> order_, parent_, map_;
  std::vector<bool> used_;
  std::vector<Embedding1> out_;
};

int total(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

std::vector<int> remove_one(std::vector<int> v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it != v.end()) v.erase(it);
  return v;
}

/** Subsets of `ports` (as bitmasks), one per multiset of far-end signatures. */
std::vector<unsigned> distinct_subsets(const HostView& H, int node, const std::vector<int>& ports) {
  const int k = static_cast<int>(ports.size());
  std::vector<std::string> sig(k);
  for (int i = 0; i < k; ++i) {
    const End e = H.far(node, ports[i]);
    sig[i] = std::to_string(e.type) + ":" + std::to_string(e.node) + ":" +
             (e.is_port() ? port_class(H.node(e.node), e.index) : std::to_string(e.index));
  }
  std::vector<unsigned> masks;
  std::set<std::vector<std::string>> seen;
  if (k <= 6) {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<std::string> key;
      for (int i = 0; i < k; ++i) key.push_back(((mask >> i) & 1 ? "1" : "0") + sig[i]);
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) masks.push_back(mask);
    }
  } else {
    for (int n = 0; n <= k; ++n) masks.push_back((1u << n) - 1);
  }
  return masks;
}

std::vector<Candidate> candidates(const HostView& H, const RuleId& r, Direction dir, int h) {
  std::vector<Candidate> out;
  const Node& n = H.node(h);
  const int d = H.d.flavor.d;
  auto add = [&](int anchor, Binding b, std::map<int, std::vector<int>> prefs = {}) {
    b.d = d;
    if (!admissible(r, b)) return;
    out.push_back({anchor, std::move(b), std::move(prefs)});
  };
  auto is_node_port = [&](const End& e, Kind k) {
    return e.is_port() && e.node != h && H.node(e.node).kind == k;
  };
  const bool lr = dir == Direction::LeftToRight;
  switch (r.tag) {
    case RuleTag::S:
      if (n.kind != Kind::Z) break;
      if (lr) {
        std::set<int> seen;
        for (int p = 0; p < n.legs; ++p) {
          const End e = H.far(h, p);
          if (!is_node_port(e, Kind::Z) || H.node(e.node).cap != n.cap) continue;
          if (e.node < h || !seen.insert(e.node).second) continue;
          Binding b;
          b.r = n.param;
          b.s = H.node(e.node).param;
          b.n = n.legs - 1;
          b.m = H.node(e.node).legs - 1;
          b.a = n.cap;
          add(0, b);
        }
      } else {
        std::vector<int> legs(n.legs);
        for (int i = 0; i < n.legs; ++i) legs[i] = i;
        for (unsigned mask : distinct_subsets(H, h, legs)) {
          std::vector<int> first, rest;
          for (int i = 0; i < n.legs; ++i) ((mask >> i) & 1 ? first : rest).push_back(i);
          Binding b;
          b.r = n.param;
          b.s = 1.0;
          b.n = static_cast<int>(first.size());
          b.m = static_cast<int>(rest.size());
          b.a = n.cap;
          first.insert(first.end(), rest.begin(), rest.end());
          add(0, b, {{h, first}});
        }
      }
      break;
    case RuleTag::A:
    case RuleTag::O:
      if (lr) {
        if (n.kind != Kind::W) break;
        const End e = H.far(h, 0);
        if (!is_node_port(e, Kind::W) || e.index == 0) break;
        const Node& wo = H.node(e.node);
        Binding b;
        b.c = wo.cap;
        b.b = n.cap;
        b.as = remove_one(wo.out_caps, n.cap);
        b.bs = n.out_caps;
        b.n = static_cast<int>(b.as.size());
        b.m = static_cast<int>(b.bs.size());
        add(1, b);
      } else if (r.tag == RuleTag::A) {
        if (n.kind != Kind::W) break;
        std::vector<int> outs;
        for (int i = 1; i < n.num_ports(); ++i) outs.push_back(i);
        for (unsigned mask : distinct_subsets(H, h, outs)) {
          std::vector<int> R, Q;
          for (std::size_t i = 0; i < outs.size(); ++i) ((mask >> i) & 1 ? Q : R).push_back(outs[i]);
          Binding b;
          b.c = b.b = n.cap;
          for (int p : R) b.as.push_back(n.port_cap(p));
          for (int p : Q) b.bs.push_back(n.port_cap(p));
          b.n = static_cast<int>(R.size());
          b.m = static_cast<int>(Q.size());
          std::vector<int> pref{0};
          pref.insert(pref.end(), R.begin(), R.end());
          pref.insert(pref.end(), Q.begin(), Q.end());
          add(0, b, {{h, pref}});
        }
      } else {
        if (n.kind != Kind::Z || n.legs != 2 || !close(n.param, 1.0)) break;
        for (int flip = 0; flip < 2; ++flip) {
          const End eo = H.far(h, flip), ei = H.far(h, 1 - flip);
          if (!is_node_port(eo, Kind::W) || eo.index == 0) continue;
          if (!is_node_port(ei, Kind::W) || ei.index != 0 || ei.node == eo.node) continue;
          Binding b;
          b.b = n.cap;
          b.c = H.node(eo.node).cap;
          b.as = remove_one(H.node(eo.node).out_caps, n.cap);
          b.bs = H.node(ei.node).out_caps;
          add(2, b);
        }
      }
      break;
    case RuleTag::Id:
      if (lr && n.kind == Kind::W && n.out_caps.size() == 1 && n.out_caps[0] == n.cap) {
        Binding b;
        b.a = n.cap;
        add(0, b);
      }
      break;
    case RuleTag::H:
      if (n.kind != Kind::W) break;
      if (lr) {
        const int outs = static_cast<int>(n.out_caps.size());
        if (outs != n.cap + 1) break;
        const int a = n.out_caps[0];
        int z = -1;
        bool ok = true;
        for (int p = 1; p <= outs && ok; ++p) {
          const End e = H.far(h, p);
          if (n.out_caps[p - 1] != a || !is_node_port(e, Kind::Z)) ok = false;
          else if (z == -1) z = e.node;
          else if (z != e.node) ok = false;
        }
        if (!ok || !close(H.node(z).param, 1.0) || H.node(z).cap != a) break;
        Binding b;
        b.a = a;
        b.c = n.cap;
        b.p = H.node(z).legs - outs;
        add(1, b);
      } else {
        if (!n.out_caps.empty()) break;
        const End e = H.far(h, 0);
        if (!is_node_port(e, Kind::Z) || !close(H.node(e.node).param, 1.0)) break;
        std::set<int> caps;
        for (int o = 0; o < static_cast<int>(H.d.nodes.size()); ++o) {
          const Node& x = H.node(o);
          if (o == h || x.kind != Kind::W || !x.out_caps.empty()) continue;
          if (!caps.insert(x.cap).second) continue;
          Binding b;
          b.a = n.cap;
          b.c = x.cap;
          b.p = H.node(e.node).legs - 1;
          add(1, b);
        }
      }
      break;
    case RuleTag::B1:
      if (lr) {
        if (n.kind != Kind::W) break;
        const End e = H.far(h, 0);
        if (!is_node_port(e, Kind::Z) || H.node(e.node).cap != n.cap) break;
        const Node& z = H.node(e.node);
        Binding b;
        b.r = z.param;
        b.n = z.legs - 1;
        b.a = n.cap;
        b.bs = n.out_caps;
        b.m = static_cast<int>(b.bs.size());
        add(1, b);
      } else if (n.kind == Kind::W && n.out_caps.empty()) {
        // m = 0: n separate |0> nodes of the same capacity.
        int count = 0;
        for (const Node& x : H.d.nodes)
          if (x.kind == Kind::W && x.out_caps.empty() && x.cap == n.cap) ++count;
        for (int k = 1; k <= std::min(count, 3); ++k) {
          Binding b;
          b.r = 1.0;
          b.n = k;
          b.a = n.cap;
          add(0, b);
        }
      } else if (n.kind == Kind::Z && n.legs >= 2) {
        std::set<std::pair<int, std::vector<int>>> seen;
        for (int p = 0; p < n.legs; ++p) {
          const End e = H.far(h, p);
          if (!is_node_port(e, Kind::W) || e.index == 0) continue;
          const Node& w = H.node(e.node);
          std::vector<int> bs = w.out_caps;
          auto it = std::find(bs.begin(), bs.end(), n.cap);
          if (it == bs.end()) continue;
          std::iter_swap(bs.begin(), it);
          std::vector<int> key = bs;
          std::sort(key.begin(), key.end());
          if (!seen.insert({w.cap, key}).second) continue;
          Binding b;
          b.r = n.param;
          b.n = n.legs - 1;
          b.a = w.cap;
          b.bs = bs;
          b.m = static_cast<int>(bs.size());
          add(b.n, b);
        }
      }
      break;
    case RuleTag::B2:
      if (n.kind != Kind::W) break;
      if (lr) {
        const End e = H.far(h, 0);
        if (!is_node_port(e, Kind::W) || e.index != 0) break;
        Binding b;
        b.c = n.cap;
        b.as = n.out_caps;
        b.bs = H.node(e.node).out_caps;
        b.n = static_cast<int>(b.as.size());
        b.m = static_cast<int>(b.bs.size());
        add(0, b);
      } else if (!r.mixed) {
        const int nn = static_cast<int>(n.out_caps.size());
        const End g0 = H.far(h, 0);
        if (!is_node_port(g0, Kind::Z) || H.node(g0.node).legs != 1 ||
            !close(H.node(g0.node).param, 1.0))
          break;
        if (nn == 0) {
          // No Zc/Sp layer: the merge nodes are plain |0>s.
          int count = 0;
          for (const Node& x : H.d.nodes)
            if (x.kind == Kind::W && x.out_caps.empty()) ++count;
          for (int m = 0; m <= std::min(count - 1, 3); ++m) {
            Binding b;
            b.m = m;
            add(m, b);
          }
          break;
        }
        const End z = H.far(h, 1);
        if (!is_node_port(z, Kind::Z) || H.node(z.node).legs != 3) break;
        std::set<int> ms;
        for (int q = 0; q < 3; ++q) {
          const End s = H.far(z.node, q);
          if (!s.is_port() || s.node == h || H.node(s.node).kind != Kind::W || s.index != 0)
            continue;
          if (!ms.insert(static_cast<int>(H.node(s.node).out_caps.size())).second) continue;
          Binding b;
          b.n = nn;
          b.m = static_cast<int>(H.node(s.node).out_caps.size());
          add(2 * b.n + b.m, b);
        }
      } else if (n.out_caps.empty()) {
        Binding b;
        b.bs = {n.cap};
        b.c = n.cap;
        add(0, b);
      } else {
        std::vector<int> bs;
        std::vector<int> mj;
        for (int p = 1; p < n.num_ports(); ++p) {
          const End e = H.far(h, p);
          if (!is_node_port(e, Kind::W) || e.index == 0) return out;
          mj.push_back(e.node);
          bs.push_back(H.node(e.node).cap);
        }
        std::vector<int> as;
        const Node& m0 = H.node(mj[0]);
        for (int p = 1; p < m0.num_ports(); ++p) {
          const End e = H.far(mj[0], p);
          if (!e.is_port() || H.node(e.node).kind != Kind::W || e.index == 0) return out;
          as.push_back(H.node(e.node).cap);
        }
        auto it = std::find(as.begin(), as.end(), n.cap);
        if (it == as.end()) break;
        std::iter_swap(as.begin(), it);
        Binding b;
        b.as = as;
        b.bs = bs;
        b.c = std::max({*std::max_element(as.begin(), as.end()),
                        *std::max_element(bs.begin(), bs.end()), std::min(total(as), total(bs))});
        add(0, b);
      }
      break;
    case RuleTag::Plus:
      if (lr) {
        if (n.kind != Kind::W || n.out_caps.size() != 2 || n.out_caps[0] != n.cap ||
            n.out_caps[1] != n.cap)
          break;
        const End e1 = H.far(h, 1), e2 = H.far(h, 2);
        if (!is_node_port(e1, Kind::Z) || !is_node_port(e2, Kind::Z) || e1.node == e2.node) break;
        if (H.node(e1.node).legs != 1 || H.node(e2.node).legs != 1) break;
        Binding b;
        b.r = H.node(e1.node).param;
        b.s = H.node(e2.node).param;
        b.a = n.cap;
        add(2, b);
      } else if (n.kind == Kind::Z && n.legs == 1) {
        Binding b;
        b.r = n.param;
        b.s = 0.0;
        b.a = n.cap;
        add(0, b);
      }
      break;
    case RuleTag::E:
      if (lr && n.kind == Kind::Z && n.legs == 1 && close(n.param, 1.0))
        for (int k = 1; k < d; ++k) {
          Binding b;
          b.k = k;
          add(0, b);
        }
      break;
    case RuleTag::Cp:
      if (lr) {
        if (n.kind != Kind::KetOne) break;
        const End e = H.far(h, 0);
        if (!is_node_port(e, Kind::Z) || H.node(e.node).cap != n.cap) break;
        Binding b;
        b.r = H.node(e.node).param;
        b.n = H.node(e.node).legs - 1;
        b.a = n.cap;
        add(0, b);
      } else if (n.kind == Kind::Scalar) {
        for (int k = 0; k <= 2; ++k) {
          Binding b;
          b.r = n.param;
          b.n = k;
          b.a = r.mixed ? 1 : d - 1;
          add(0, b);
        }
      }
      break;
    case RuleTag::Loop:
      if (lr) {
        if (n.kind != Kind::Z || n.legs < 3 || H.wires_between(h, h) == 0) break;
        Binding b;
        b.r = n.param;
        b.n = n.legs - 3;
        b.a = n.cap;
        add(2, b);
      } else {
        if (n.kind != Kind::KetOne) break;
        const End e = H.far(h, 0);
        if (!is_node_port(e, Kind::W) || e.index != 0) break;
        std::set<int> zs;
        for (int q = 1; q <= 2 && q < H.node(e.node).num_ports(); ++q) {
          const End z = H.far(e.node, q);
          if (!z.is_port() || z.node == h || H.node(z.node).kind != Kind::Z) continue;
          if (!zs.insert(z.node).second) continue;
          Binding b;
          b.r = H.node(z.node).param;
          b.n = H.node(z.node).legs - 1;
          b.a = n.cap;
          add(0, b);
        }
      }
      break;
    case RuleTag::U:
      if (lr) {
        if (n.kind == Kind::Z && n.legs == 1 && close(n.param, 1.0)) {
          Binding b;
          b.a = n.cap;
          add(0, b);
        }
      } else if (n.kind == Kind::W && n.out_caps.size() == 2 && n.out_caps[0] == n.cap &&
                 n.out_caps[1] == n.cap) {
        Binding b;
        b.a = n.cap;
        add(1, b);
      }
      break;
    case RuleTag::I:
      if (lr) {
        if (n.kind != Kind::W || n.out_caps.size() != 1 || n.out_caps[0] >= n.cap) break;
        if (!is_node_port(H.far(h, 1), Kind::KetOne)) break;
        Binding b;
        b.a = n.out_caps[0];
        b.b = n.cap;
        add(1, b);
      } else if (n.kind == Kind::KetOne && n.cap >= 2) {
        Binding b;
        b.a = 1;
        b.b = n.cap;
        add(0, b);
      }
      break;
    case RuleTag::ScalarMerge:
      if (n.kind != Kind::Scalar) break;
      if (lr) {
        for (int v = h + 1; v < static_cast<int>(H.d.nodes.size()); ++v) {
          if (H.node(v).kind != Kind::Scalar) continue;
          Binding b;
          b.r = n.param;
          b.s = H.node(v).param;
          add(0, b);
        }
      } else {
        Binding b;
        b.r = n.param;
        b.s = 1.0;
        add(0, b);
      }
      break;
    case RuleTag::FlexPermute:
      if (n.kind == Kind::Z) {
        Binding b;
        b.r = n.param;
        b.n = n.legs;
        b.a = n.cap;
        add(0, b);
      }
      break;
  }
  return out;
}

constexpr int kPerCandidateLimit = 4;
constexpr int kPerRuleLimit = 256;

}  // namespace

std::vector<Match> find_matches(const Diagram& d, const RuleId& rule, Direction dir) {
  if (rule.mixed != d.flavor.mixed)
    throw ZwError(ErrorKind::FlavorMismatch,
                  rule.name() + " does not apply to a " + d.flavor.name() + " diagram");
  require_valid(d);
  const std::uint64_t fp = fingerprint(d);
  std::vector<Match> out;
  const bool lr = dir == Direction::LeftToRight;
  // Bare-wire and empty patterns.
  if (rule.tag == RuleTag::Id && !lr) {
    for (int w = 0; w < static_cast<int>(d.wires.size()) && w < kPerRuleLimit; ++w) {
      for (int flip = 0; flip < 2; ++flip) {
        const End x = flip ? d.wires[w].b : d.wires[w].a, y = flip ? d.wires[w].a : d.wires[w].b;
        Match m{rule, dir, {}, {}, {x, y}, w, fp};
        m.binding.d = d.flavor.d;
        m.binding.a = d.cap_of(x);
        out.push_back(m);
      }
    }
    return out;
  }
  if (rule.tag == RuleTag::E && !lr) {
    if (rule.mixed) return out;
    Match m{rule, dir, {}, {}, {}, -1, fp};
    m.binding.d = d.flavor.d;
    m.binding.k = 1;
    out.push_back(m);
    return out;
  }
  HostView H(d);
  std::set<std::string> seen;
  for (int h = 0; h < static_cast<int>(d.nodes.size()); ++h) {
    for (const Candidate& c : candidates(H, rule, dir, h)) {
      const Diagram pat = instantiate_side(rule, c.binding, lr);
      Embedder emb(H, pat, c, h, kPerCandidateLimit);
      for (Embedding1& e : emb.run()) {
        std::vector<int> image = e.node_map;
        std::sort(image.begin(), image.end());
        std::string key = c.binding.describe();
        for (int x : image) key += "," + std::to_string(x);
        key += "|";
        for (const End& a : e.attach) key += std::to_string(a.node) + "." + std::to_string(a.index) + ";";
        if (!seen.insert(key).second) continue;
        out.push_back({rule, dir, c.binding, std::move(e.node_map), std::move(e.attach), -1, fp});
        if (static_cast<int>(out.size()) >= kPerRuleLimit) return out;
      }
    }
  }
  return out;
}

std::vector<Match> find_all_matches(const Diagram& d, bool include_structural) {
  std::vector<Match> out;
  const auto rules = include_structural ? all_rules(d.flavor.mixed) : axioms(d.flavor.mixed);
  for (const RuleId& r : rules)
    for (Direction dir : {Direction::LeftToRight, Direction::RightToLeft}) {
      auto ms = find_matches(d, r, dir);
      out.insert(out.end(), ms.begin(), ms.end());
    }
  return out;
}

Diagram apply(const Diagram& d, const Match& m) {
  if (fingerprint(d) != m.host_fingerprint)
    throw ZwError(ErrorKind::StaleMatch, "match was computed for a different diagram");
  const bool lr = m.dir == Direction::LeftToRight;
  const Diagram pat = instantiate_side(m.rule, m.binding, lr);
  const Diagram rep = instantiate_side(m.rule, m.binding, !lr);
  using detail::GEnd;
  using detail::Segment;

  std::vector<int> renum(d.nodes.size(), 0);
  std::vector<bool> removed(d.nodes.size(), false);
  for (int h : m.node_map) removed[h] = true;
  Diagram out = empty_diagram(d.flavor);
  out.in_caps = d.in_caps;
  out.out_caps = d.out_caps;
  for (int i = 0; i < static_cast<int>(d.nodes.size()); ++i) {
    if (removed[i]) continue;
    renum[i] = out.add_node(d.nodes[i]);
  }
  const int off = static_cast<int>(out.nodes.size());
  for (const Node& n : rep.nodes) out.add_node(n);

  std::map<End, int> junction_of;
  for (int i = 0; i < static_cast<int>(m.attach.size()); ++i) junction_of[m.attach[i]] = i;
  auto real = [&](const End& e) {
    GEnd g;
    g.end = e;
    if (e.is_port()) g.end.node = renum[e.node];
    return g;
  };
  auto junction = [](int j) {
    GEnd g;
    g.junction = true;
    g.j = j;
    return g;
  };
  std::vector<Segment> segs;
  for (int w = 0; w < static_cast<int>(d.wires.size()); ++w) {
    const Wire& x = d.wires[w];
    if (w == m.bare_wire) {
      segs.push_back({real(m.attach[0]), junction(0)});
      segs.push_back({junction(1), real(m.attach[1])});
      continue;
    }
    auto conv = [&](const End& e, bool& internal) {
      if (e.is_port() && removed[e.node]) {
        auto it = junction_of.find(e);
        if (it == junction_of.end()) {
          internal = true;
          return GEnd{};
        }
        return junction(it->second);
      }
      return real(e);
    };
    bool ia = false, ib = false;
    GEnd a = conv(x.a, ia), b = conv(x.b, ib);
    if (ia && ib) continue;
    if (ia || ib)
      throw ZwError(ErrorKind::InvalidDiagram, "match does not cover a wire of the pattern");
    segs.push_back({a, b});
  }
  for (const Wire& x : rep.wires) {
    auto conv = [&](const End& e) {
      if (e.type == End::Out) return junction(e.index);
      GEnd g;
      g.end = e;
      g.end.node += off;
      return g;
    };
    segs.push_back({conv(x.a), conv(x.b)});
  }
  detail::fuse_segments(out, segs, pat.out_caps);
  return out;
}

bool RewriteTrace::replay_ok() const {
  try {
    Diagram cur = initial;
    for (const RewriteStep& s : steps) cur = apply(cur, s.match);
    return structurally_equal(cur, final_diagram);
  } catch (const ZwError&) {
    return false;
  }
}

}  // namespace zw
