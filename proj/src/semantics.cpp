#include "zw/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <unordered_map>

#include "zw/combinatorics.hpp"

namespace zw {

// ---- generator models -------------------------------------------------------

cplx Model::z_value(const Node& n, int k) const {
  // r^k * sqrt(k!)^(legs-2); the exponent may be negative.
  const double sf = sqrt_factorial(k);
  return std::pow(n.param, k) * std::pow(sf, n.legs - 2);
}

cplx Model::w_value(const Node&, int total, const std::vector<int>& parts) const {
  return std::sqrt(static_cast<double>(multinomial(total, parts)));
}

void Model::ket_one_entries(const Node&, std::vector<Entry>& out) const {
  out.push_back({{1}, cplx(1.0)});
}

cplx Model::wire_weight(const Diagram&, int, int) const { return 1.0; }

void Model::node_entries(const Node& n, std::vector<Entry>& out) const {
  out.clear();
  switch (n.kind) {
    case Kind::Z:
      for (int k = 0; k <= n.cap; ++k) {
        const cplx v = z_value(n, k);
        if (v != cplx(0.0)) out.push_back({std::vector<int>(n.legs, k), v});
      }
      break;
    case Kind::W: {
      const int nout = static_cast<int>(n.out_caps.size());
      std::vector<int> parts(nout, 0);
      // Enumerate output occupations with sum <= input capacity.
      while (true) {
        int total = 0;
        for (int p : parts) total += p;
        if (total <= n.cap) {
          const cplx v = w_value(n, total, parts);
          if (v != cplx(0.0)) {
            std::vector<int> key;
            key.reserve(nout + 1);
            key.push_back(total);
            key.insert(key.end(), parts.begin(), parts.end());
            out.push_back({std::move(key), v});
          }
        }
        int i = nout - 1;
        for (; i >= 0; --i) {
          // Prune: skip digits that would exceed the input capacity.
          if (parts[i] < n.out_caps[i] && total < n.cap) {
            ++parts[i];
            break;
          }
          total -= parts[i];
          parts[i] = 0;
        }
        if (i < 0) break;
      }
      break;
    }
    case Kind::KetOne:
      ket_one_entries(n, out);
      break;
    case Kind::Scalar:
      out.push_back({{}, scalar_value(n)});
      break;
  }
}

const Model& standard_model() {
  static const Model m;
  return m;
}

cplx AsymmetricModel::z_value(const Node& n, int k) const {
  const double f = static_cast<double>(factorial(k));
  const int inputs = z_out_ ? 0 : n.legs;
  return std::pow(n.param, k) * std::pow(f, inputs - 1);
}

cplx AsymmetricModel::w_value(const Node&, int total, const std::vector<int>& parts) const {
  return static_cast<double>(multinomial(total, parts));
}

bool AsymmetricModel::is_source(const Diagram& d, const End& e) const {
  switch (e.type) {
    case End::In: return true;
    case End::Out: return false;
    case End::Port: break;
  }
  const Node& n = d.nodes[e.node];
  switch (n.kind) {
    case Kind::Z: return z_out_;
    case Kind::W: return e.index != 0;
    case Kind::KetOne: return true;
    case Kind::Scalar: return false;
  }
  return false;
}

cplx AsymmetricModel::wire_weight(const Diagram& d, int wire, int k) const {
  const bool sa = is_source(d, d.wires[wire].a), sb = is_source(d, d.wires[wire].b);
  if (sa != sb) return 1.0;
  const double f = static_cast<double>(factorial(k));
  return sa ? cplx(f) : cplx(1.0 / f);  // cup : cap
}

// ---- sparse contraction -----------------------------------------------------

namespace {

using Key = std::string;

struct STensor {
  std::vector<int> labels;
  std::unordered_map<Key, cplx> entries;
};

constexpr double kZero = 0.0;

void sum_out(STensor& t, const std::vector<bool>& drop) {
  bool any = false;
  for (std::size_t i = 0; i < t.labels.size(); ++i) any = any || drop[i];
  if (!any) return;
  STensor r;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < t.labels.size(); ++i)
    if (!drop[i]) {
      keep.push_back(i);
      r.labels.push_back(t.labels[i]);
    }
  for (const auto& [k, v] : t.entries) {
    Key nk(keep.size(), '\0');
    for (std::size_t i = 0; i < keep.size(); ++i) nk[i] = k[keep[i]];
    r.entries[nk] += v;
  }
  t = std::move(r);
}

STensor contract(const STensor& a, const STensor& b) {
  std::vector<std::size_t> sa, sb, ra, rb;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[i]);
    if (it != b.labels.end()) {
      sa.push_back(i);
      sb.push_back(static_cast<std::size_t>(it - b.labels.begin()));
    } else {
      ra.push_back(i);
    }
  }
  for (std::size_t j = 0; j < b.labels.size(); ++j)
    if (std::find(sb.begin(), sb.end(), j) == sb.end()) rb.push_back(j);
  STensor r;
  for (std::size_t i : ra) r.labels.push_back(a.labels[i]);
  for (std::size_t j : rb) r.labels.push_back(b.labels[j]);
  std::unordered_map<Key, std::vector<std::pair<Key, cplx>>> index;
  for (const auto& [k, v] : b.entries) {
    Key sk(sb.size(), '\0'), rk(rb.size(), '\0');
    for (std::size_t i = 0; i < sb.size(); ++i) sk[i] = k[sb[i]];
    for (std::size_t i = 0; i < rb.size(); ++i) rk[i] = k[rb[i]];
    index[sk].push_back({std::move(rk), v});
  }
  for (const auto& [k, v] : a.entries) {
    Key sk(sa.size(), '\0'), rk(ra.size(), '\0');
    for (std::size_t i = 0; i < sa.size(); ++i) sk[i] = k[sa[i]];
    for (std::size_t i = 0; i < ra.size(); ++i) rk[i] = k[ra[i]];
    auto it = index.find(sk);
    if (it == index.end()) continue;
    for (const auto& [bk, bv] : it->second) r.entries[rk + bk] += v * bv;
  }
  for (auto it = r.entries.begin(); it != r.entries.end();) {
    if (std::abs(it->second) == kZero)
      it = r.entries.erase(it);
    else
      ++it;
  }
  return r;
}


/**
 * Replaces every W node with more than three outputs by a chain of binary W
 * nodes. Under the standard model sqrt(multinomial) factors into sqrt
 * binomials along the chain, so the tensor is unchanged, but the chain's
 * entry lists stay small where the wide node's grow combinatorially.
 */
Diagram split_wide_w(const Diagram& d) {
  Diagram out = d;
  // port_map[node][port] = new end of that port.
  std::vector<std::vector<End>> port_map(d.nodes.size());
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const Node& n = d.nodes[i];
    const int np = n.num_ports();
    for (int p = 0; p < np; ++p) port_map[i].push_back(End::port(static_cast<int>(i), p));
    const int nout = static_cast<int>(n.out_caps.size());
    if (n.kind != Kind::W || nout <= 3) continue;
    std::vector<int> suffix(nout + 1, 0);
    for (int k = nout - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + n.out_caps[k];
    std::vector<int> chain;
    int cap = n.cap;
    for (int k = 0; k + 1 < nout; ++k) {
      const bool last = k + 2 == nout;
      const int next = std::min(cap, suffix[k + 1]);
      const Node link = Node::w(cap, {n.out_caps[k], last ? n.out_caps[k + 1] : next});
      if (k == 0) {
        out.nodes[i] = link;
        chain.push_back(static_cast<int>(i));
      } else {
        chain.push_back(out.add_node(link));
      }
      cap = next;
    }
    port_map[i][0] = End::port(chain[0], 0);
    for (int k = 0; k < nout; ++k)
      port_map[i][1 + k] = k + 1 < nout ? End::port(chain[k], 1) : End::port(chain[nout - 2], 2);
    for (int k = 0; k + 1 < static_cast<int>(chain.size()); ++k)
      out.wires.push_back({End::port(chain[k], 2), End::port(chain[k + 1], 0)});
  }
  for (std::size_t w = 0; w < d.wires.size(); ++w)
    for (End* e : {&out.wires[w].a, &out.wires[w].b})
      if (e->is_port()) *e = port_map[e->node][e->index];
  return out;
}

}  // namespace

Tensor interpret_with(const Diagram& d, const Model& model, ContractionOrder order) {
  require_valid(d);
  if (&model == &standard_model()) {
    bool wide = false;
    for (const Node& n : d.nodes) wide = wide || (n.kind == Kind::W && n.out_caps.size() > 3);
    if (wide) return interpret_with(split_wide_w(d), model, order);
  }
  const int nw = static_cast<int>(d.wires.size());
  // Wire labels; a boundary position shares the label of its wire.
  std::vector<int> label_cap(nw);
  std::vector<int> label_uses(nw, 0);
  for (int w = 0; w < nw; ++w) label_cap[w] = d.cap_of(d.wires[w].a);
  for (int w = 0; w < nw; ++w) {
    if (label_cap[w] > 250) throw ZwError(ErrorKind::TooLarge, "capacity too large to evaluate");
  }
  Incidence inc(d);
  std::vector<bool> is_boundary(nw, false);
  for (int w = 0; w < nw; ++w)
    is_boundary[w] = !d.wires[w].a.is_port() || !d.wires[w].b.is_port();

  std::vector<STensor> net;
  std::vector<bool> weighted(nw, false);
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const Node& node = d.nodes[i];
    model.node_entries(node, entries);
    const int np = node.num_ports();
    std::vector<int> labels(np);
    for (int p = 0; p < np; ++p) labels[p] = inc.wire_at(End::port(static_cast<int>(i), p));
    // Deduplicate repeated labels (self-loops) by restricting to the diagonal.
    std::vector<int> uniq;
    std::vector<int> pos(np);
    for (int p = 0; p < np; ++p) {
      auto it = std::find(uniq.begin(), uniq.end(), labels[p]);
      if (it == uniq.end()) {
        pos[p] = static_cast<int>(uniq.size());
        uniq.push_back(labels[p]);
      } else {
        pos[p] = static_cast<int>(it - uniq.begin());
      }
    }
    // Weighted wires are charged once, on the first tensor that sees them.
    std::vector<bool> charge(uniq.size(), false);
    if (model.has_wire_weights())
      for (std::size_t u = 0; u < uniq.size(); ++u)
        if (!weighted[uniq[u]]) {
          weighted[uniq[u]] = true;
          charge[u] = true;
        }
    STensor t;
    t.labels = uniq;
    for (const Entry& e : entries) {
      Key k(uniq.size(), '\0');
      std::vector<int> seen(uniq.size(), -1);
      bool ok = true;
      for (int p = 0; p < np && ok; ++p) {
        const int u = pos[p];
        if (seen[u] >= 0 && seen[u] != e.key[p]) ok = false;
        seen[u] = e.key[p];
        k[u] = static_cast<char>(e.key[p]);
      }
      if (!ok) continue;
      cplx v = e.value;
      for (std::size_t u = 0; u < uniq.size(); ++u)
        if (charge[u]) v *= model.wire_weight(d, uniq[u], seen[u]);
      if (v != cplx(0.0)) t.entries[k] += v;
    }
    for (int l : uniq) ++label_uses[l];
    net.push_back(std::move(t));
  }
  // Labels that only live inside one tensor and are not boundary are summed.
  auto prune = [&](STensor& t) {
    std::vector<bool> drop(t.labels.size(), false);
    for (std::size_t i = 0; i < t.labels.size(); ++i)
      drop[i] = !is_boundary[t.labels[i]] && label_uses[t.labels[i]] == 1;
    for (std::size_t i = 0; i < t.labels.size(); ++i)
      if (drop[i]) label_uses[t.labels[i]] = 0;
    sum_out(t, drop);
  };
  for (STensor& t : net) prune(t);

  auto shares = [](const STensor& a, const STensor& b) {
    for (int l : a.labels)
      if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end()) return true;
    return false;
  };
  auto merge = [&](std::size_t i, std::size_t j) {
    STensor r = contract(net[i], net[j]);
    for (int l : net[i].labels)
      if (std::find(net[j].labels.begin(), net[j].labels.end(), l) != net[j].labels.end())
        label_uses[l] -= 2;
    net[i] = std::move(r);
    net.erase(net.begin() + static_cast<long>(j));
    prune(net[i]);
  };
  while (net.size() > 1) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < net.size() && !(found && order == ContractionOrder::NodeOrder); ++i)
      for (std::size_t j = i + 1; j < net.size(); ++j) {
        if (!shares(net[i], net[j])) continue;
        // Estimated size of the result under independent shared labels.
        double cost = static_cast<double>(net[i].entries.size()) *
                      static_cast<double>(net[j].entries.size());
        for (int l : net[i].labels)
          if (std::find(net[j].labels.begin(), net[j].labels.end(), l) != net[j].labels.end())
            cost /= label_cap[l] + 1;
        cost += static_cast<double>(net[i].entries.size() + net[j].entries.size());
        if (order == ContractionOrder::NodeOrder) cost = static_cast<double>(i * net.size() + j);
        if (cost < best) {
          best = cost;
          bi = i;
          bj = j;
          found = true;
        }
        if (order == ContractionOrder::NodeOrder) break;
      }
    if (!found) break;
    merge(bi, bj);
  }
  // Remaining tensors are disconnected: outer products.
  while (net.size() > 1) {
    std::sort(net.begin(), net.end(),
              [](const STensor& a, const STensor& b) { return a.entries.size() < b.entries.size(); });
    STensor r = contract(net[0], net[1]);
    net.erase(net.begin(), net.begin() + 2);
    net.push_back(std::move(r));
  }
  STensor result;
  if (!net.empty()) {
    result = std::move(net[0]);
  } else {
    result.entries[Key()] = 1.0;
  }

  // Boundary axes: outputs first, then inputs.
  std::vector<int> shape, axis_label;
  for (int j = 0; j < d.num_outputs(); ++j) {
    shape.push_back(d.out_caps[j] + 1);
    axis_label.push_back(inc.wire_at(End::out(j)));
  }
  for (int i = 0; i < d.num_inputs(); ++i) {
    shape.push_back(d.in_caps[i] + 1);
    axis_label.push_back(inc.wire_at(End::in(i)));
  }
  double total = 1;
  for (int s : shape) total *= s;
  if (total > 1e7) throw ZwError(ErrorKind::TooLarge, "boundary tensor exceeds 1e7 entries");
  Tensor out(shape);
  // Bare boundary-to-boundary wires are not in the network.
  std::vector<int> free_labels;
  for (int w = 0; w < nw; ++w)
    if (!d.wires[w].a.is_port() && !d.wires[w].b.is_port()) free_labels.push_back(w);
  std::vector<int> value(nw, 0);
  std::vector<int> free_shape;
  for (int l : free_labels) free_shape.push_back(label_cap[l] + 1);
  for (const auto& [k, v] : result.entries) {
    for (std::size_t i = 0; i < result.labels.size(); ++i)
      value[result.labels[i]] = static_cast<unsigned char>(k[i]);
    std::vector<int> fidx(free_labels.size(), 0);
    do {
      cplx w = v;
      for (std::size_t f = 0; f < free_labels.size(); ++f) {
        value[free_labels[f]] = fidx[f];
        if (model.has_wire_weights()) w *= model.wire_weight(d, free_labels[f], fidx[f]);
      }
      std::vector<int> idx(axis_label.size());
      for (std::size_t a = 0; a < axis_label.size(); ++a) idx[a] = value[axis_label[a]];
      out.at(idx) += w;
    } while (!free_labels.empty() && Tensor::next_index(fidx, free_shape));
  }
  return out;
}

Tensor interpret(const Diagram& d, SemanticsFlavor sem) {
  if (sem == SemanticsFlavor::Asymmetric) {
    if (d.flavor.mixed)
      throw ZwError(ErrorKind::UndefinedForFlavor,
                    "the asymmetric interpretation is only defined for qudit diagrams");
    static const AsymmetricModel asym;
    return interpret_with(d, asym);
  }
  return interpret_with(d, standard_model());
}

Tensor interpret_generator(const Node& kind, Flavor f, int n, int m, SemanticsFlavor sem) {
  return interpret(make_generator(kind, f, n, m), sem);
}

double default_tolerance() {
  if (const char* s = std::getenv("ZW_DEFAULT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end != s && v > 0) return v;
  }
  return 1e-9;
}

}  // namespace zw
