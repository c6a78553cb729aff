// Canonical labeling of port graphs by colour refinement plus
// individualisation, used to decide structural equality.

#include <algorithm>
#include <cstring>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "zw/diagram.hpp"

namespace zw {
namespace {

struct Edge {
  int u, v;
  std::string lu, lv;  // port classes at each end
};

std::string hexd(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof b);
  std::ostringstream os;
  os << std::hex << b;
  return os.str();
}

std::string node_descriptor(const Node& n) {
  std::ostringstream os;
  os << kind_name(n.kind);
  switch (n.kind) {
    case Kind::Z:
      os << "(" << hexd(n.param.real()) << "," << hexd(n.param.imag()) << ";c" << n.cap << ";l"
         << n.legs << ")";
      break;
    case Kind::W: {
      std::vector<int> oc = n.out_caps;
      std::sort(oc.begin(), oc.end());
      os << "(c" << n.cap << ";";
      for (int c : oc) os << c << ",";
      os << ")";
      break;
    }
    case Kind::KetOne:
      os << "(c" << n.cap << ")";
      break;
    case Kind::Scalar:
      os << "(" << hexd(n.param.real()) << "," << hexd(n.param.imag()) << ")";
      break;
  }
  return os.str();
}

std::string port_class(const Diagram& d, const End& e) {
  if (e.type != End::Port) return "B";
  const Node& n = d.nodes[e.node];
  switch (n.kind) {
    case Kind::Z: return "L";
    case Kind::W: return e.index == 0 ? "I" : "O" + std::to_string(n.out_caps[e.index - 1]);
    case Kind::KetOne: return "K";
    case Kind::Scalar: return "S";
  }
  return "?";
}

class Canonizer {
 public:
  explicit Canonizer(const Diagram& d) : d_(d) {
    const int nn = static_cast<int>(d.nodes.size());
    nv_ = nn + d.num_inputs() + d.num_outputs();
    adj_.resize(nv_);
    std::vector<std::string> desc(nv_);
    for (int i = 0; i < nn; ++i) desc[i] = "N" + node_descriptor(d.nodes[i]);
    for (int i = 0; i < d.num_inputs(); ++i)
      desc[nn + i] = "I" + std::to_string(i) + "c" + std::to_string(d.in_caps[i]);
    for (int j = 0; j < d.num_outputs(); ++j)
      desc[nn + d.num_inputs() + j] = "O" + std::to_string(j) + "c" + std::to_string(d.out_caps[j]);
    auto vid = [&](const End& e) {
      if (e.type == End::Port) return e.node;
      if (e.type == End::In) return nn + e.index;
      return nn + d.num_inputs() + e.index;
    };
    for (const Wire& w : d.wires) {
      Edge e{vid(w.a), vid(w.b), port_class(d, w.a), port_class(d, w.b)};
      if (std::tie(e.u, e.lu) > std::tie(e.v, e.lv)) {
        std::swap(e.u, e.v);
        std::swap(e.lu, e.lv);
      }
      edges_.push_back(e);
      const int k = static_cast<int>(edges_.size()) - 1;
      adj_[e.u].push_back(k);
      if (e.v != e.u) adj_[e.v].push_back(k);
    }
    // Initial colours: rank of descriptor.
    std::vector<std::string> sorted = desc;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    colors_.resize(nv_);
    for (int v = 0; v < nv_; ++v)
      colors_[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), desc[v]) -
                                    sorted.begin());
    desc_ = desc;
  }

  std::string run() {
    std::vector<int> c = refine(colors_);
    best_.clear();
    have_best_ = false;
    search(c);
    return best_;
  }

 private:
  // Signature of vertex v's neighbourhood under colouring c.
  std::vector<std::tuple<std::string, std::string, int>> neigh(int v, const std::vector<int>& c) const {
    std::vector<std::tuple<std::string, std::string, int>> out;
    for (int k : adj_[v]) {
      const Edge& e = edges_[k];
      if (e.u == v && e.v == v) {
        out.emplace_back(e.lu, e.lv, -1);
      } else if (e.u == v) {
        out.emplace_back(e.lu, e.lv, c[e.v]);
      } else {
        out.emplace_back(e.lv, e.lu, c[e.u]);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<int> refine(std::vector<int> c) const {
    int ncol = count(c);
    while (true) {
      using Sig = std::pair<int, std::vector<std::tuple<std::string, std::string, int>>>;
      std::vector<Sig> sig(nv_);
      for (int v = 0; v < nv_; ++v) sig[v] = {c[v], neigh(v, c)};
      std::vector<Sig> s = sig;
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      std::vector<int> nc(nv_);
      for (int v = 0; v < nv_; ++v)
        nc[v] = static_cast<int>(std::lower_bound(s.begin(), s.end(), sig[v]) - s.begin());
      int k = static_cast<int>(s.size());
      c = std::move(nc);
      if (k == ncol) return c;
      ncol = k;
    }
  }

  static int count(const std::vector<int>& c) {
    std::vector<int> s = c;
    std::sort(s.begin(), s.end());
    return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
  }

  // Swapping u and v is an automorphism of the coloured graph.
  bool twins(int u, int v) const {
    auto image = [&](int x) { return x == u ? v : (x == v ? u : x); };
    std::vector<std::tuple<int, int, std::string, std::string>> eu, ev;
    for (int k : adj_[u]) {
      const Edge& e = edges_[k];
      eu.emplace_back(image(e.u), image(e.v), e.lu, e.lv);
    }
    for (int k : adj_[v]) {
      const Edge& e = edges_[k];
      ev.emplace_back(e.u, e.v, e.lu, e.lv);
    }
    auto norm = [](std::vector<std::tuple<int, int, std::string, std::string>>& es) {
      for (auto& t : es)
        if (std::tie(std::get<0>(t), std::get<2>(t)) > std::tie(std::get<1>(t), std::get<3>(t))) {
          std::swap(std::get<0>(t), std::get<1>(t));
          std::swap(std::get<2>(t), std::get<3>(t));
        }
      std::sort(es.begin(), es.end());
    };
    norm(eu);
    norm(ev);
    return eu == ev;
  }

  std::string certificate(const std::vector<int>& c) const {
    // c is discrete: c[v] is the canonical position of v.
    std::vector<int> order(nv_);
    for (int v = 0; v < nv_; ++v) order[c[v]] = v;
    std::ostringstream os;
    for (int p = 0; p < nv_; ++p) os << desc_[order[p]] << ";";
    os << "|";
    std::vector<std::tuple<int, std::string, int, std::string>> es;
    for (const Edge& e : edges_) {
      auto t = std::make_tuple(c[e.u], e.lu, c[e.v], e.lv);
      if (std::tie(std::get<0>(t), std::get<1>(t)) > std::tie(std::get<2>(t), std::get<3>(t)))
        t = std::make_tuple(c[e.v], e.lv, c[e.u], e.lu);
      es.push_back(t);
    }
    std::sort(es.begin(), es.end());
    for (const auto& [a, la, b, lb] : es) os << a << la << "-" << b << lb << ",";
    return os.str();
  }

  void search(const std::vector<int>& c) {
    // Find the first smallest non-singleton cell.
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < nv_; ++v) cells[c[v]].push_back(v);
    const std::vector<int>* target = nullptr;
    for (const auto& [col, vs] : cells)
      if (vs.size() > 1 && (!target || vs.size() < target->size())) target = &vs;
    if (!target) {
      std::string cert = certificate(c);
      if (!have_best_ || cert < best_) {
        best_ = cert;
        have_best_ = true;
      }
      return;
    }
    std::vector<int> cell = *target;
    bool all_twins = true;
    for (size_t i = 1; i < cell.size() && all_twins; ++i) all_twins = twins(cell[0], cell[i]);
    if (all_twins) cell.resize(1);
    for (int v : cell) {
      std::vector<int> nc(nv_);
      for (int w = 0; w < nv_; ++w) nc[w] = 2 * c[w] + (w == v ? 0 : 1);
      search(refine(nc));
    }
  }

  const Diagram& d_;
  int nv_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> colors_;
  std::vector<std::string> desc_;
  std::string best_;
  bool have_best_ = false;
};

}  // namespace

std::string canonical_form(const Diagram& d) {
  std::ostringstream os;
  os << d.flavor.name() << "#";
  Canonizer c(d);
  os << c.run();
  return os.str();
}

bool structurally_equal(const Diagram& a, const Diagram& b) {
  if (!(a.flavor == b.flavor) || a.nodes.size() != b.nodes.size() ||
      a.wires.size() != b.wires.size() || a.in_caps != b.in_caps || a.out_caps != b.out_caps)
    return false;
  return canonical_form(a) == canonical_form(b);
}

}  // namespace zw
