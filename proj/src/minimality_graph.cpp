// Graph predicates behind the necessity arguments: bare boundary pairs, the
// capacity annotation procedure, W-paths and effective Z-paths.

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "zw/minimality.hpp"
#include "zw/semantics.hpp"

namespace zw {
namespace {

int signed_pos(const End& e) { return e.type == End::In ? -(e.index + 1) : e.index + 1; }

End boundary_end(int pos) { return pos < 0 ? End::in(-pos - 1) : End::out(pos - 1); }

std::vector<int> boundary_positions(const Diagram& d) {
  std::vector<int> v;
  for (int i = 0; i < d.num_inputs(); ++i) v.push_back(-(i + 1));
  for (int j = 0; j < d.num_outputs(); ++j) v.push_back(j + 1);
  return v;
}

/** Tensor axis of a signed boundary position (outputs first). */
int axis_of(const Diagram& d, int pos) { return pos > 0 ? pos - 1 : d.num_outputs() - pos - 1; }

/**
 * Replaces each listed W-node by a 1 -> 1 W-node from its input to the chosen
 * output (the identity when capacities agree) and feeds |0> to its other
 * outputs.
 */
Diagram short_circuit(const Diagram& d, const std::vector<std::pair<int, int>>& choices) {
  Diagram out = d;
  std::map<int, int> chosen;
  for (auto [node, port] : choices) chosen[node] = port;
  for (auto [node, port] : chosen) {
    const Node& w = d.nodes[node];
    out.nodes[node] = Node::w(w.cap, {w.port_cap(port)});
  }
  for (Wire& wire : out.wires) {
    for (End* e : {&wire.a, &wire.b}) {
      if (!e->is_port()) continue;
      const auto it = chosen.find(e->node);
      if (it == chosen.end() || e->index == 0) continue;
      if (e->index == it->second) {
        e->index = 1;
      } else {
        const int cap = d.nodes[e->node].port_cap(e->index);
        *e = End::port(out.add_node(Node::w(cap, {})), 0);
      }
    }
  }
  return out;
}

/** Contracts two axes of t with the vectors u (axis a) and v (axis b). */
Tensor contract_pair(const Tensor& t, int a, const std::vector<cplx>& u, int b,
                     const std::vector<cplx>& v) {
  std::vector<int> rest_shape;
  for (int i = 0; i < static_cast<int>(t.shape.size()); ++i)
    if (i != a && i != b) rest_shape.push_back(t.shape[i]);
  Tensor out(rest_shape);
  std::vector<int> idx(t.shape.size(), 0), rest(rest_shape.size());
  if (t.size() == 0) return out;
  do {
    const int ka = idx[a], kb = idx[b];
    if (ka >= static_cast<int>(u.size()) || kb >= static_cast<int>(v.size())) continue;
    const cplx w = u[ka] * v[kb];
    if (w == cplx(0.0)) continue;
    int r = 0;
    for (int i = 0; i < static_cast<int>(idx.size()); ++i)
      if (i != a && i != b) rest[r++] = idx[i];
    out.at(rest) += w * t.at(idx);
  } while (Tensor::next_index(idx, t.shape));
  return out;
}

}  // namespace

PairSet bare_pairs(const Diagram& d) {
  PairSet s;
  for (const Wire& w : d.wires) {
    if (w.a.is_port() || w.b.is_port()) continue;
    const int x = signed_pos(w.a), y = signed_pos(w.b);
    s.insert({std::min(x, y), std::max(x, y)});
  }
  return s;
}

CapacityAnnotation capacity_annotation(const Diagram& d, AnnotationSchedule schedule) {
  CapacityAnnotation res;
  const Incidence inc(d);
  res.wires.resize(d.wires.size());
  for (std::size_t i = 0; i < d.wires.size(); ++i)
    res.wires[i] = d.flavor.mixed ? d.cap_of(d.wires[i].a) : d.flavor.uniform_cap();
  std::vector<int> order(d.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  if (schedule == AnnotationSchedule::Reverse) std::reverse(order.begin(), order.end());

  auto lower = [&](int wire, int value, bool& changed) {
    if (value < res.wires[wire]) {
      res.wires[wire] = value;
      changed = true;
    }
  };
  bool any = true;
  while (any) {
    any = false;
    for (int v : order) {
      const Node& n = d.nodes[v];
      bool changed = false;
      switch (n.kind) {
        case Kind::Scalar:
          break;
        case Kind::KetOne:
          lower(inc.wire_at(End::port(v, 0)), 1, changed);
          break;
        case Kind::Z: {
          int lo = n.legs > 0 ? res.wires[inc.wire_at(End::port(v, 0))] : 0;
          for (int p = 1; p < n.legs; ++p) lo = std::min(lo, res.wires[inc.wire_at(End::port(v, p))]);
          for (int p = 0; p < n.legs; ++p) lower(inc.wire_at(End::port(v, p)), lo, changed);
          break;
        }
        case Kind::W: {
          // With no outputs this is the |0> rule.
          const int in = inc.wire_at(End::port(v, 0));
          int total = 0;
          for (int p = 1; p < n.num_ports(); ++p) {
            const int w = inc.wire_at(End::port(v, p));
            lower(w, res.wires[in], changed);
            total += res.wires[w];
          }
          lower(in, total, changed);
          break;
        }
      }
      if (changed) {
        ++res.steps;
        any = true;
      }
    }
  }
  for (int pos : boundary_positions(d)) res.boundary.push_back(res.wires[inc.wire_at(boundary_end(pos))]);
  return res;
}

bool has_w_path(const Diagram& d) {
  // Reachability over arrival ends: a W-node entered through its input may be
  // left through any output, one entered through an output only through its
  // input. Nodes may be revisited, each crossing obeying that rule.
  const Incidence inc(d);
  for (int start : boundary_positions(d)) {
    std::set<std::pair<int, int>> seen;
    std::vector<End> todo = {inc.other(boundary_end(start))};
    while (!todo.empty()) {
      const End at = todo.back();
      todo.pop_back();
      if (!at.is_port()) {
        if (signed_pos(at) != start) return true;
        continue;
      }
      const Node& n = d.nodes[at.node];
      if (n.kind != Kind::W || !seen.insert({at.node, at.index}).second) continue;
      if (at.index == 0) {
        for (int p = 1; p < n.num_ports(); ++p) todo.push_back(inc.other(End::port(at.node, p)));
      } else {
        todo.push_back(inc.other(End::port(at.node, 0)));
      }
    }
  }
  return false;
}

bool is_trivial_w(const Diagram& d, int node, double tol) {
  const Node& n = d.nodes.at(node);
  if (n.kind != Kind::W || n.out_caps.empty()) return false;
  const Tensor t = interpret(d);
  for (int p = 1; p < n.num_ports(); ++p)
    if (rel_deviation(t, interpret(short_circuit(d, {{node, p}}))) <= tol) return true;
  return false;
}

ZPathWitness find_effective_z_path(const Diagram& d, const ZPathOptions& opts) {
  if (static_cast<int>(d.nodes.size()) > opts.max_nodes)
    throw ZwError(ErrorKind::TooLarge, "effective Z-path search limited to " +
                                           std::to_string(opts.max_nodes) + " nodes");
  for (const Wire& w : d.wires)
    if (d.cap_of(w.a) + 1 > opts.max_dim)
      throw ZwError(ErrorKind::TooLarge, "effective Z-path search limited to dimension " +
                                             std::to_string(opts.max_dim));
  const Incidence inc(d);

  struct Path {
    int to;
    std::vector<int> nodes;
    std::vector<std::pair<int, int>> w_outputs;
  };
  constexpr std::size_t kMaxPaths = 20000;
  std::map<std::pair<int, int>, std::vector<Path>> paths;
  std::size_t total = 0;
  std::vector<char> seen(d.nodes.size(), 0);
  Path cur;
  int from = 0;
  std::function<void(const End&)> walk = [&](const End& at) {
    if (!at.is_port()) {
      const int to = signed_pos(at);
      if (from < to) {
        cur.to = to;
        paths[{from, to}].push_back(cur);
        if (++total > kMaxPaths) throw ZwError(ErrorKind::TooLarge, "too many candidate paths");
      }
      return;
    }
    const Node& n = d.nodes[at.node];
    if (seen[at.node] || (n.kind != Kind::Z && n.kind != Kind::W)) return;
    seen[at.node] = 1;
    cur.nodes.push_back(at.node);
    if (n.kind == Kind::Z) {
      for (int p = 0; p < n.legs; ++p)
        if (p != at.index) walk(inc.other(End::port(at.node, p)));
    } else if (at.index == 0) {
      for (int p = 1; p < n.num_ports(); ++p) {
        cur.w_outputs.push_back({at.node, p});
        walk(inc.other(End::port(at.node, p)));
        cur.w_outputs.pop_back();
      }
    } else {
      cur.w_outputs.push_back({at.node, at.index});
      walk(inc.other(End::port(at.node, 0)));
      cur.w_outputs.pop_back();
    }
    cur.nodes.pop_back();
    seen[at.node] = 0;
  };
  for (int pos : boundary_positions(d)) {
    from = pos;
    walk(inc.other(boundary_end(pos)));
  }

  ZPathWitness res;
  if (paths.empty()) return res;
  const Tensor t = interpret(d);
  const double scale = max_abs(t);
  if (scale <= kZeroFloor) return res;
  std::map<std::vector<std::pair<int, int>>, bool> sole_cache;
  auto jointly_sole = [&](std::vector<std::pair<int, int>> outs) {
    std::sort(outs.begin(), outs.end());
    if (outs.empty()) return true;
    auto it = sole_cache.find(outs);
    if (it != sole_cache.end()) return it->second;
    const bool ok = rel_deviation(t, interpret(short_circuit(d, outs))) <= opts.tol;
    sole_cache[outs] = ok;
    return ok;
  };

  for (const auto& [ends, cands] : paths) {
    const int a = axis_of(d, ends.first), b = axis_of(d, ends.second);
    const int dim = std::min(t.shape[a], t.shape[b]);
    auto result_for = [&](const std::vector<cplx>& phi) { return contract_pair(t, a, phi, b, phi); };
    auto nonzero = [&](const Tensor& r) { return max_abs(r) > opts.tol * scale; };
    std::string probe;
    for (int k = 2; k < dim && probe.empty(); ++k) {
      std::vector<cplx> phi(dim, 0.0);
      phi[k] = 1.0;
      if (nonzero(result_for(phi))) probe = "|" + std::to_string(k) + ">";
    }
    if (probe.empty() && dim >= 2) {
      const Tensor u = result_for(std::vector<cplx>(dim, 1.0));
      std::vector<cplx> e0(dim, 0.0), e1(dim, 0.0);
      e0[0] = e1[1] = 1.0;
      auto differs = [&](const Tensor& r) { return max_abs(u + cplx(-1.0) * r) > opts.tol * scale; };
      if (nonzero(u) && differs(result_for(e0)) && differs(result_for(e1))) probe = "uniform";
    }
    if (probe.empty()) continue;
    for (const Path& p : cands) {
      if (!jointly_sole(p.w_outputs)) continue;
      res.found = true;
      res.from = ends.first;
      res.to = ends.second;
      res.nodes = p.nodes;
      res.probe = probe;
      return res;
    }
  }
  return res;
}

bool has_effective_z_path(const Diagram& d, const ZPathOptions& opts) {
  return find_effective_z_path(d, opts).found;
}

}  // namespace zw
