// Derived equations of both flavors, instantiated over their parameter ranges
// and checked by interpreting both sides.

#include <algorithm>
#include <functional>
#include <sstream>

#include "zw/combinatorics.hpp"
#include "zw/bridge.hpp"
#include "zw/normal_form.hpp"
#include "zw/rules.hpp"
#include "zw/semantics.hpp"

namespace zw {

bool LemmaReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const LemmaResult& r) { return r.pass; });
}

namespace {

constexpr double kLemmaTol = 1e-9;

const std::vector<cplx>& lemma_params() {
  static const std::vector<cplx> ps{cplx(2.0, 0), cplx(-0.5, 1.5), cplx(0, 1)};
  return ps;
}

class Corpus {
 public:
  explicit Corpus(LemmaReport& rep) : rep_(rep) {}

  void check(const std::string& name, const std::string& instance, const Diagram& lhs,
             const Diagram& rhs, bool up_to_scalar = false) {
    LemmaResult r;
    r.name = name;
    r.instance = instance;
    r.up_to_scalar = up_to_scalar;
    try {
      const Tensor a = interpret(lhs), b = interpret(rhs);
      if (up_to_scalar) {
        cplx factor = 1.0;
        const bool prop = proportional(a, b, kLemmaTol, &factor);
        r.deviation = prop && std::abs(factor) > kZeroFloor ? rel_deviation(a, factor * b) : 1.0;
      } else {
        r.deviation = rel_deviation(a, b);
      }
      r.pass = r.deviation <= kLemmaTol;
    } catch (const ZwError& e) {
      r.deviation = 1.0;
      r.instance += std::string(" [") + e.what() + "]";
    }
    rep_.results.push_back(std::move(r));
  }

 private:
  LemmaReport& rep_;
};

std::string args(std::initializer_list<std::pair<const char*, int>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    os << (first ? "" : " ") << k << "=" << v;
    first = false;
  }
  return os.str();
}

std::string param(cplx r) {
  std::ostringstream os;
  os << "r=" << r.real() << (r.imag() < 0 ? "" : "+") << r.imag() << "i";
  return os.str();
}

Diagram tensor_all(Flavor f, const std::vector<Diagram>& parts) {
  Diagram g = empty_diagram(f);
  for (const Diagram& p : parts) g = compose_par(g, p);
  return g;
}

Diagram bra(int k, int cap, Flavor f) { return dagger(derived_ket(k, cap, f)); }

/** Every way of writing n as an ordered sum of caps.size() parts within caps. */
void compositions(int n, const std::vector<int>& caps, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  const std::size_t j = cur.size();
  if (j == caps.size()) {
    if (n == 0) emit(cur);
    return;
  }
  for (int i = 0; i <= std::min(n, caps[j]); ++i) {
    cur.push_back(i);
    compositions(n - i, caps, cur, emit);
    cur.pop_back();
  }
}

/** ket_n pushed through W(a; caps) equals the sum over compositions of
 *  multinomial-weighted kets, written as a normal form. */
CoefficientTable pascal_table(int n, const std::vector<int>& caps) {
  CoefficientTable t;
  t.caps = caps;
  std::vector<int> cur;
  compositions(n, caps, cur, [&](const std::vector<int>& x) {
    double v = static_cast<double>(factorial(n));
    for (int i : x) v /= sqrt_factorial(i);
    t.entries[x] = v;
  });
  return t;
}

/** W n -> 1 followed by W 1 -> m, and the bipartite network of the same
 *  type, both as maps without any context (qudit). */
Diagram bare_bialgebra(Flavor f, int n, int m, bool lhs) {
  if (lhs) return compose_seq(dagger(w_node(f, n)), w_node(f, m));
  const int c = f.uniform_cap();
  Diagram g = empty_diagram(f);
  g.in_caps.assign(n, c);
  g.out_caps.assign(m, c);
  std::vector<int> split(n), merge(m);
  for (int i = 0; i < n; ++i) split[i] = g.add_node(Node::w(c, std::vector<int>(m, c)));
  for (int j = 0; j < m; ++j) merge[j] = g.add_node(Node::w(c, std::vector<int>(n, c)));
  for (int i = 0; i < n; ++i) g.connect(End::in(i), End::port(split[i], 0));
  for (int j = 0; j < m; ++j) g.connect(End::port(merge[j], 0), End::out(j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) g.connect(End::port(split[i], 1 + j), End::port(merge[j], 1 + i));
  return g;
}

/** The normal-form shape with internal capacity `inner` instead of 1. */
Diagram nf_with_inner(const CoefficientTable& t, int inner) {
  Diagram g = n_functor(t, Flavor::mixed_dims()).realization;
  // n_functor places the KetOne first and the selector second.
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    Node& n = g.nodes[i];
    if (n.kind == Kind::KetOne || n.kind == Kind::Z || i == 1) n.cap = inner;
    if (n.kind == Kind::W)
      for (int& o : n.out_caps) o = inner;
  }
  return g;
}

/** W(c; x_1, s_1) -> W(s_1; x_2, s_2) -> ... as a 1 -> n map. */
Diagram w_chain(int c, const std::vector<int>& outs, const std::vector<int>& links) {
  const Flavor f = Flavor::mixed_dims();
  const int n = static_cast<int>(outs.size());
  Diagram g = empty_diagram(f);
  g.in_caps = {c};
  g.out_caps = outs;
  int in_cap = c;
  End feed = End::in(0);
  for (int k = 0; k + 1 < n; ++k) {
    const bool last = k + 2 == n;
    const int w = g.add_node(Node::w(in_cap, {outs[k], last ? outs[k + 1] : links[k]}));
    g.connect(feed, End::port(w, 0));
    g.connect(End::port(w, 1), End::out(k));
    if (last) {
      g.connect(End::port(w, 2), End::out(k + 1));
    } else {
      feed = End::port(w, 2);
      in_cap = links[k];
    }
  }
  return g;
}

RulePair qudit_instance(RuleTag tag, Binding b) {
  RuleId id;
  id.mixed = false;
  id.tag = tag;
  return instantiate(id, b);
}

void qudit_corpus(Corpus& C, int d) {
  const Flavor f = Flavor::qudit(d);
  const int c = d - 1;
  const std::string D = "d=" + std::to_string(d);

  // Every presentation of the scalar 1.
  const Diagram one = empty_diagram(f);
  C.check("scalar-1", D + " global scalar", global_scalar(f, 1.0), one);
  C.check("scalar-1", D + " <0|0>", compose_seq(derived_ket(0, c, f), bra(0, c, f)), one);
  C.check("scalar-1", D + " <1|1>", compose_seq(ket_one(f), dagger(ket_one(f))), one);
  for (cplx r : lemma_params())
    C.check("scalar-1", D + " Z effect on |0> " + param(r),
            compose_seq(derived_ket(0, c, f), z_spider(f, r, 1, 0)), one);

  C.check("Z-id", D, z_spider(f, 1.0, 1, 1), identity_wire(f));

  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      Binding b;
      b.d = d;
      b.n = n;
      b.m = m;
      const RulePair p = qudit_instance(RuleTag::B2, b);
      C.check("W-bialgebra-gen", D + " " + args({{"n", n}, {"m", m}}), p.lhs, p.rhs);
    }

  C.check("vacuum", D, compose_seq(w_node(f, 2), compose_par(identity_wire(f), bra(0, c, f))),
          identity_wire(f));
  C.check("braket-1-1", D, compose_seq(ket_one(f), dagger(ket_one(f))), one);
  C.check("ket0", D, z_spider(f, 0.0, 0, 1), derived_ket(0, c, f));

  for (int k = 0; k <= c; ++k)
    for (int n = 0; n <= 3; ++n)
      for (cplx r : lemma_params()) {
        std::vector<Diagram> copies(n, derived_ket(k, c, f));
        const Diagram rhs = compose_par(global_scalar(f, std::pow(r, k)), tensor_all(f, copies));
        C.check("copy", D + " " + args({{"k", k}, {"n", n}}) + " " + param(r),
                compose_seq(derived_ket(k, c, f), z_spider(f, r, 1, n)), rhs);
      }

  for (int n = 0; n <= 3; ++n) {
    std::vector<Diagram> states;
    cplx total = 0;
    for (int i = 0; i < n; ++i) {
      const cplx r = lemma_params()[i % lemma_params().size()];
      states.push_back(z_spider(f, r, 0, 1));
      total += r;
    }
    C.check("sum-gen", D + " " + args({{"n", n}}),
            compose_seq(tensor_all(f, states), dagger(w_node(f, n))), z_spider(f, total, 0, 1));
  }

  for (int k = 0; k <= c; ++k)
    for (int l = 0; l <= c; ++l) {
      const Diagram lhs =
          compose_seq(compose_par(derived_ket(k, c, f), derived_ket(l, c, f)), dagger(w_node(f, 2)));
      const Diagram rhs = k + l < d ? derived_ket(k + l, c, f)
                                    : compose_par(global_scalar(f, 0.0), derived_ket(0, c, f));
      C.check("ket-sum", D + " " + args({{"k", k}, {"l", l}}), lhs, rhs);
    }

  if (d == 2)
    C.check("qubit-hopf", D, compose_seq(z_spider(f, 1.0, 1, 2), dagger(w_node(f, 2))),
            compose_seq(bra(0, c, f), derived_ket(0, c, f)));

  for (int n = 0; n <= c; ++n)
    for (int m = 1; m <= 3; ++m) {
      const std::vector<int> caps(m, c);
      C.check("Pascal", D + " " + args({{"n", n}, {"m", m}}),
              compose_seq(derived_ket(n, c, f), w_node(f, m)),
              n_functor(pascal_table(n, caps), f).realization);
    }

  for (int k = 0; k <= c; ++k)
    for (int l = 0; l <= c; ++l)
      C.check("dot-product", D + " " + args({{"k", k}, {"l", l}}),
              compose_seq(derived_ket(k, c, f), bra(l, c, f)),
              global_scalar(f, k == l ? static_cast<double>(factorial(k)) : 0.0));

  // The context-free W bialgebra holds on basis inputs whose total fits.
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      std::vector<int> ks(n, 0);
      std::vector<int> shape(n, d);
      do {
        int sum = 0;
        for (int k : ks) sum += k;
        if (sum > c) continue;
        std::vector<Diagram> kets;
        for (int k : ks) kets.push_back(derived_ket(k, c, f));
        const Diagram in = tensor_all(f, kets);
        std::ostringstream inst;
        inst << D << " n=" << n << " m=" << m << " k=(";
        for (int i = 0; i < n; ++i) inst << (i ? "," : "") << ks[i];
        inst << ")";
        C.check("W-bialgebra-on-kets", inst.str(), compose_seq(in, bare_bialgebra(f, n, m, true)),
                compose_seq(in, bare_bialgebra(f, n, m, false)));
      } while (Tensor::next_index(ks, shape));
    }
}

void mixed_corpus(Corpus& C, int bound) {
  const Flavor f = Flavor::mixed_dims();
  const Diagram one = empty_diagram(f);

  for (int a = 1; a <= bound; ++a) {
    const std::string A = "a=" + std::to_string(a);
    C.check("Z-id-qf", A, z_spider(f, 1.0, 1, 1, a), identity_wire(f, a));
    C.check("scalar-1-qf", A + " <1|1>", compose_seq(ket_one(f, a), dagger(ket_one(f, a))), one);
    C.check("scalar-1-qf", A + " <0|0>", compose_seq(derived_ket(0, a, f), bra(0, a, f)), one);
    for (cplx r : lemma_params())
      C.check("scalar-1-qf", A + " Z effect on |0> " + param(r),
              compose_seq(derived_ket(0, a, f), z_spider(f, r, 1, 0, a)), one);
    C.check("ket-0-qf", A, z_spider(f, 0.0, 0, 1, a), derived_ket(0, a, f));

    for (int n = 0; n <= 3; ++n)
      for (cplx r : lemma_params()) {
        std::vector<Diagram> zeros(n, derived_ket(0, a, f));
        C.check("copy-0-qf", A + " n=" + std::to_string(n) + " " + param(r),
                compose_seq(derived_ket(0, a, f), z_spider(f, r, 1, n, a)), tensor_all(f, zeros));
      }

    for (int k = 0; k <= a; ++k) {
      // Flat form: k copies of |1> merged by one W node.
      std::vector<Diagram> ones(k, ket_one(f, 1));
      const Diagram flat = compose_seq(tensor_all(f, ones), dagger(w_node(f, k, a, std::vector<int>(k, 1))));
      C.check("ket-k-forms", A + " k=" + std::to_string(k), derived_ket(k, a, f), flat);
      C.check("discard-ket-qf", A + " <k|k> k=" + std::to_string(k),
              compose_seq(derived_ket(k, a, f), bra(k, a, f)),
              global_scalar(f, static_cast<double>(factorial(k))));
    }

    for (int b = a; b <= bound; ++b) {
      const std::string AB = args({{"a", a}, {"b", b}});
      const Diagram down = w_node(f, 1, b, {a});  // b -> a
      C.check("embedding", AB, compose_seq(dagger(down), down), identity_wire(f, a));
      for (int k = 0; k <= a; ++k)
        C.check("ket-k-dim", AB + " k=" + std::to_string(k),
                compose_seq(derived_ket(k, a, f), dagger(down)), derived_ket(k, b, f));
    }

    // ket_n through W(a; b_1..b_m) as a multinomial sum.
    for (int n = 0; n <= a; ++n)
      for (int m = 1; m <= 3; ++m) {
        std::vector<int> caps(m);
        for (int j = 0; j < m; ++j) caps[j] = 1 + (a + j) % a;
        C.check("Pascal-qf", A + " n=" + std::to_string(n) + " m=" + std::to_string(m),
                compose_seq(derived_ket(n, a, f), w_node(f, m, a, caps)),
                n_functor(pascal_table(n, caps), f).realization);
      }
  }

  // Chained W nodes equal the flat node whenever every link can carry what
  // the remaining outputs can hold.
  for (int c = 1; c <= bound; ++c)
    for (int n = 2; n <= 4; ++n) {
      std::vector<int> outs(n);
      for (int j = 0; j < n; ++j) outs[j] = 1 + (c + j) % c;
      for (int slack = 0; slack <= 1; ++slack) {
        std::vector<int> links;
        int rest = 0;
        for (int j = n - 1; j >= 1; --j) rest += outs[j];
        for (int j = 1; j + 1 < n; ++j) {
          links.push_back(slack ? c : std::min(c, rest));
          rest -= outs[j];
        }
        std::ostringstream inst;
        inst << "c=" << c << " n=" << n << (slack ? " full links" : " tight links");
        C.check("W-assoc-gen", inst.str(), w_chain(c, outs, links),
                w_node(f, n, c, outs));
      }
    }

  // Rules of the uniform theory, read in the mixed flavor.
  Rng rng(7);
  for (int d = 2; d <= bound + 1; ++d) {
    const std::string D = "d=" + std::to_string(d);
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m) {
        Binding b;
        b.d = d;
        b.n = n;
        b.m = m;
        const RulePair p = qudit_instance(RuleTag::B2, b);
        C.check("W-bialgebra-ctxt", D + " " + args({{"n", n}, {"m", m}}), iota(p.lhs), iota(p.rhs));
      }
    SampleBounds sb;
    sb.d = d;
    RuleId loop;
    loop.tag = RuleTag::Loop;
    for (int s = 0; s < 4; ++s) {
      const Binding b = sample_binding(loop, sb, rng);
      const RulePair p = instantiate(loop, b);
      C.check("Z-loop-removal-qf", D + " " + b.describe(), iota(p.lhs), iota(p.rhs));
    }
    for (int k = 1; k < d; ++k) {
      Binding b;
      b.d = d;
      b.k = k;
      const RulePair p = qudit_instance(RuleTag::E, b);
      C.check("discard-ket-qf", D + " erase k=" + std::to_string(k), iota(p.lhs), iota(p.rhs));
    }
    // The restricted spider of the uniform theory is a smaller spider
    // embedded on every leg.
    const int delta = d - 1;
    for (int a = 1; a <= delta; ++a)
      for (int legs = 1; legs <= 3; ++legs) {
        const cplx r = lemma_params()[(a + legs) % lemma_params().size()];
        Diagram emb = empty_diagram(f);
        emb.out_caps.assign(legs, delta);
        const int z = emb.add_node(Node::z(r, legs, a));
        for (int l = 0; l < legs; ++l) {
          const int w = emb.add_node(Node::w(delta, {a}));
          emb.connect(End::port(z, l), End::port(w, 1));
          emb.connect(End::port(w, 0), End::out(l));
        }
        C.check("Z-restrict", D + " " + args({{"a", a}, {"legs", legs}}) + " " + param(r),
                iota(restricted_z_spider(a, r, 0, legs, d)), emb);
      }
  }

  // Normal forms do not depend on the capacity of their internal wires.
  for (int inner = 1; inner <= bound; ++inner) {
    CoefficientTable t;
    t.caps = {bound, std::max(inner, bound - 1)};
    t.entries = {{{0, 1}, 1.0}, {{1, 0}, cplx(0, 2)}};
    if (bound >= 2) t.entries[{2, 1}] = -0.5;
    C.check("NF-qf-other-dim", "inner=" + std::to_string(inner), nf_with_inner(t, inner),
            n_functor(t, f).realization);
  }

  // A 0 -> 1 spider state is copied by a W node with enough room.
  for (int b1 = 1; b1 <= bound; ++b1)
    for (int b2 = 1; b1 + b2 <= bound; ++b2)
      for (int c = b1 + b2; c <= bound; ++c)
        for (cplx r : lemma_params()) {
          const Diagram lhs = compose_seq(z_spider(f, r, 0, 1, c), w_node(f, 2, c, {b1, b2}));
          const Diagram rhs = compose_par(z_spider(f, r, 0, 1, b1), z_spider(f, r, 0, 1, b2));
          C.check("Z-copy", args({{"c", c}, {"b1", b1}, {"b2", b2}}) + " " + param(r), lhs, rhs);
        }
}

}  // namespace

LemmaReport derive_lemma_corpus(bool mixed, int bound) {
  LemmaReport rep;
  Corpus C(rep);
  if (mixed)
    mixed_corpus(C, std::max(1, bound));
  else
    qudit_corpus(C, std::max(2, bound));
  return rep;
}

}  // namespace zw
