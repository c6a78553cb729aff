// Alternative interpretations witnessing that no rule follows from the others.

#include "zw/minimality.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "zw/semantics.hpp"

namespace zw {

namespace {

struct AltEntry {
  AltId id;
  const char* name;
};

constexpr AltEntry kAlts[] = {
    {AltId::RePart, "rePart"},
    {AltId::ArityFlag, "arityFlag"},
    {AltId::BarePairs, "barePairs"},
    {AltId::CapacityProc, "capacityProc"},
    {AltId::EffectiveZPath, "effectiveZPath"},
    {AltId::WPath, "wPath"},
    {AltId::AbsPart, "absPart"},
    {AltId::NonEmpty, "nonEmpty"},
    {AltId::NonRealScalar, "nonRealScalar"},
    {AltId::OmegaTwist, "omegaTwist"},
    {AltId::KetOneToZero, "ketOneToZero"},
    {AltId::CapacityGrowth, "capacityGrowth"},
    {AltId::KetOneCapacity, "ketOneCapacity"},
};

bool mixed_only(AltId id) { return id == AltId::CapacityGrowth || id == AltId::KetOneCapacity; }

// ---- modified generator values ----------------------------------------------

class RePartModel : public Model {
 public:
  cplx z_value(const Node& n, int k) const override {
    Node m = n;
    m.param = n.param.real();
    return Model::z_value(m, k);
  }
  cplx scalar_value(const Node& n) const override { return n.param.real(); }
};

class AbsPartModel : public Model {
 public:
  cplx z_value(const Node& n, int k) const override {
    Node m = n;
    m.param = std::abs(n.param);
    return Model::z_value(m, k);
  }
  cplx scalar_value(const Node& n) const override { return std::abs(n.param); }
};

/** |1> -> w|1>; a spider with L legs and parameter r gets r w^(L-2). */
class OmegaModel : public Model {
 public:
  explicit OmegaModel(cplx w) : w_(w) {}
  cplx z_value(const Node& n, int k) const override {
    Node m = n;
    m.param = n.param * std::pow(w_, n.legs - 2);
    return Model::z_value(m, k);
  }
  void ket_one_entries(const Node&, std::vector<Entry>& out) const override {
    out.push_back({{1}, w_});
  }

 private:
  cplx w_;
};

/** |1> -> |0>; global scalars -> 1 (they are invisible up to scalars). */
class KetZeroModel : public Model {
 public:
  void ket_one_entries(const Node&, std::vector<Entry>& out) const override {
    out.push_back({{0}, cplx(1.0)});
  }
  cplx scalar_value(const Node&) const override { return 1.0; }
};

bool arity_flag(const Diagram& d) {
  for (int v = 0; v < static_cast<int>(d.nodes.size()); ++v) {
    const Node& n = d.nodes[v];
    if (n.kind != Kind::W) continue;
    const int arity = static_cast<int>(n.out_caps.size());
    const bool large = d.flavor.mixed ? arity >= 3 : arity > d.flavor.d;
    if (large && !is_trivial_w(d, v)) return true;
  }
  return false;
}

std::string tensor_summary(const Tensor& t) {
  std::ostringstream os;
  os << "tensor[";
  for (std::size_t i = 0; i < t.shape.size(); ++i) os << (i ? "x" : "") << t.shape[i];
  os << "] max|.|=" << max_abs(t);
  return os.str();
}

}  // namespace

const char* alt_name(AltId id) {
  for (const AltEntry& e : kAlts)
    if (e.id == id) return e.name;
  return "?";
}

AltId parse_alt(const std::string& name) {
  for (const AltEntry& e : kAlts)
    if (name == e.name) return e.id;
  throw ZwError(ErrorKind::UnknownRule, "unknown interpretation: " + name);
}

RuleId AltSemantics::target() const {
  const bool m = flavor.mixed;
  if (!m && mixed_only(id))
    throw ZwError(ErrorKind::UndefinedForFlavor, std::string(alt_name(id)) + " is mixed-only");
  switch (id) {
    case AltId::RePart: return {m, RuleTag::S};
    case AltId::ArityFlag: return {m, RuleTag::A};
    case AltId::BarePairs: return {m, RuleTag::Id};
    case AltId::CapacityProc: return {m, RuleTag::H};
    case AltId::EffectiveZPath: return {m, RuleTag::B1};
    case AltId::WPath: return {m, m ? RuleTag::O : RuleTag::B2};
    case AltId::AbsPart: return {m, RuleTag::Plus};
    case AltId::NonEmpty: return {m, m ? RuleTag::B2 : RuleTag::E};
    case AltId::NonRealScalar: return {m, RuleTag::Cp};
    case AltId::OmegaTwist: return {m, RuleTag::Loop};
    case AltId::KetOneToZero: return {m, RuleTag::U};
    case AltId::CapacityGrowth: return {m, RuleTag::B2};
    case AltId::KetOneCapacity: return {m, RuleTag::I};
  }
  return {m, RuleTag::S};
}

Codomain AltSemantics::codomain() const {
  switch (id) {
    case AltId::RePart:
    case AltId::AbsPart:
    case AltId::OmegaTwist:
    case AltId::KetOneToZero:
      return Codomain::Tensor;
    case AltId::CapacityProc:
    case AltId::CapacityGrowth:
      return Codomain::Annotation;
    case AltId::BarePairs:
      return Codomain::PairSet;
    default:
      return Codomain::Boolean;
  }
}

SoundnessMode AltSemantics::mode() const {
  if (id == AltId::KetOneToZero) return SoundnessMode::UpToScalar;
  // exp(i pi/(d-1)) squares to 1 at d = 2, and the mixed flavor has rules
  // of every capacity, so both fall back to w = i up to scalars.
  if (id == AltId::OmegaTwist && (flavor.mixed || flavor.d == 2)) return SoundnessMode::UpToScalar;
  return SoundnessMode::Exact;
}

bool AltSemantics::compositional() const {
  switch (id) {
    case AltId::ArityFlag:
    case AltId::CapacityProc:
    case AltId::EffectiveZPath:
    case AltId::WPath:
      return false;
    default:
      return true;
  }
}

AltSemantics designated_alt(const RuleId& rule, int d) {
  AltSemantics a;
  a.flavor = rule.mixed ? Flavor::mixed_dims() : Flavor::qudit(d);
  switch (rule.tag) {
    case RuleTag::S: a.id = AltId::RePart; break;
    case RuleTag::A: a.id = AltId::ArityFlag; break;
    case RuleTag::O: a.id = AltId::WPath; break;
    case RuleTag::Id: a.id = AltId::BarePairs; break;
    case RuleTag::H: a.id = AltId::CapacityProc; break;
    case RuleTag::B1: a.id = AltId::EffectiveZPath; break;
    case RuleTag::B2: a.id = rule.mixed ? AltId::CapacityGrowth : AltId::WPath; break;
    case RuleTag::Plus: a.id = AltId::AbsPart; break;
    case RuleTag::E: a.id = AltId::NonEmpty; break;
    case RuleTag::Cp: a.id = AltId::NonRealScalar; break;
    case RuleTag::Loop: a.id = AltId::OmegaTwist; break;
    case RuleTag::I: a.id = AltId::KetOneCapacity; break;
    case RuleTag::U: a.id = AltId::KetOneToZero; break;
    case RuleTag::ScalarMerge:
    case RuleTag::FlexPermute:
      throw ZwError(ErrorKind::RangeViolation,
                    rule.name() + " is structural and has no necessity argument");
  }
  return a;
}

cplx omega_root(Flavor f) {
  if (f.mixed || f.d == 2) return cplx(0.0, 1.0);
  return std::polar(1.0, M_PI / (f.d - 1));
}

std::string AltValue::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Codomain::Tensor:
      return tensor_summary(tensor);
    case Codomain::Boolean:
      return flag ? "1" : "0";
    case Codomain::Annotation:
      os << "(";
      for (std::size_t i = 0; i < tuple.size(); ++i) os << (i ? ", " : "") << tuple[i];
      os << ")";
      return os.str();
    case Codomain::PairSet:
      os << "{";
      {
        bool first = true;
        for (const auto& [a, b] : pairs) {
          os << (first ? "" : ", ") << "{" << a << ", " << b << "}";
          first = false;
        }
      }
      os << "}";
      return os.str();
  }
  return "";
}

AltValue eval_alt(const Diagram& d, const AltSemantics& alt) {
  if (d.flavor.mixed != alt.flavor.mixed || (!d.flavor.mixed && d.flavor.d != alt.flavor.d))
    throw ZwError(ErrorKind::FlavorMismatch, "diagram flavor " + d.flavor.name() +
                                                 " differs from the interpretation's " +
                                                 alt.flavor.name());
  if (!d.flavor.mixed && mixed_only(alt.id))
    throw ZwError(ErrorKind::UndefinedForFlavor,
                  std::string(alt_name(alt.id)) + " is only defined for mixed capacities");
  AltValue v;
  v.kind = alt.codomain();
  switch (alt.id) {
    case AltId::RePart:
      v.tensor = interpret_with(d, RePartModel());
      break;
    case AltId::AbsPart:
      v.tensor = interpret_with(d, AbsPartModel());
      break;
    case AltId::OmegaTwist:
      v.tensor = interpret_with(d, OmegaModel(omega_root(d.flavor)));
      break;
    case AltId::KetOneToZero:
      v.tensor = interpret_with(d, KetZeroModel());
      break;
    case AltId::ArityFlag:
      v.flag = arity_flag(d);
      break;
    case AltId::BarePairs:
      v.pairs = bare_pairs(d);
      break;
    case AltId::CapacityProc:
      v.tuple = capacity_annotation(d).boundary;
      break;
    case AltId::EffectiveZPath: {
      ZPathOptions o;
      o.max_nodes = 12;
      v.flag = has_effective_z_path(d, o);
      break;
    }
    case AltId::WPath:
      v.flag = has_w_path(d);
      break;
    case AltId::NonEmpty:
      v.flag = !d.nodes.empty() || !d.wires.empty();
      break;
    case AltId::NonRealScalar:
      for (const Node& n : d.nodes)
        if (n.kind == Kind::Scalar && std::abs(n.param.imag()) > 1e-12) v.flag = true;
      break;
    case AltId::CapacityGrowth: {
      int top = 1;
      for (const Node& n : d.nodes)
        for (int p = 0; p < n.num_ports(); ++p) top = std::max(top, n.port_cap(p));
      for (const Node& n : d.nodes)
        if (n.kind == Kind::Z) top = std::max(top, n.cap);
      for (const Wire& w : d.wires) top = std::max(top, d.cap_of(w.a));
      v.tuple = {top};
      break;
    }
    case AltId::KetOneCapacity:
      for (const Node& n : d.nodes)
        if (n.kind == Kind::KetOne && n.cap != 1) v.flag = true;
      break;
  }
  return v;
}

bool alt_values_agree(const AltSemantics& alt, const AltValue& a, const AltValue& b, double tol) {
  switch (alt.codomain()) {
    case Codomain::Tensor:
      if (a.tensor.shape != b.tensor.shape) return false;
      return alt.mode() == SoundnessMode::UpToScalar ? proportional(a.tensor, b.tensor, tol)
                                                     : rel_deviation(a.tensor, b.tensor) <= tol;
    case Codomain::Boolean:
      return a.flag == b.flag;
    case Codomain::Annotation:
      return a.tuple == b.tuple;
    case Codomain::PairSet:
      return a.pairs == b.pairs;
  }
  return false;
}

// ---- necessity ----------------------------------------------------------------

int NecessityReport::preserved_count() const {
  int c = 0;
  for (const RuleCheck& r : others)
    if (!r.excluded && r.samples > 0 && r.mismatches == 0) ++c;
  return c;
}

bool NecessityReport::pass() const {
  if (!violated) return false;
  for (const RuleCheck& r : others)
    if (!r.excluded && (r.samples == 0 || r.mismatches > 0)) return false;
  return true;
}

Binding counterexample_binding(const RuleId& rule, int d) {
  Binding b;
  b.d = d;
  const cplx i(0.0, 1.0);
  switch (rule.tag) {
    case RuleTag::S:
      b.r = b.s = i;
      b.n = b.m = 1;
      break;
    case RuleTag::A:
      if (rule.mixed) {
        b.c = b.b = 1;
        b.as = {1};
        b.bs = {1, 1};
      } else {
        b.n = d - 1;
        b.m = d;
      }
      break;
    case RuleTag::O:
      b.c = 2;
      b.b = 1;
      b.bs = {1, 1};
      break;
    case RuleTag::H:
      b.p = 1;
      break;
    case RuleTag::B1:
      b.n = 2;
      b.m = 2;
      b.bs = {1, 1};
      break;
    case RuleTag::B2:
      if (rule.mixed) {
        b.as = {1};
        b.bs = {1};
        b.c = 2;
      } else {
        b.n = b.m = 2;
      }
      break;
    case RuleTag::Plus:
      b.r = 1.0;
      b.s = -1.0;
      break;
    case RuleTag::E:
      b.k = 1;
      break;
    case RuleTag::Cp:
      b.r = i;
      b.n = 1;
      break;
    case RuleTag::Loop:
      b.n = 1;
      break;
    case RuleTag::I:
      b.a = 1;
      b.b = 2;
      break;
    case RuleTag::U:
      b.a = 2;
      break;
    default:
      break;
  }
  return b;
}

NecessityReport necessity_report(const RuleId& rule, const NecessityOptions& opts) {
  NecessityReport rep;
  rep.target = rule;
  rep.alt = designated_alt(rule, opts.d);
  const AltSemantics& alt = rep.alt;

  SampleBounds bounds;
  bounds.d = opts.d;
  bounds.max_cap = opts.max_cap;
  bounds.max_arity = opts.max_arity;
  int ctx_nodes = opts.context_nodes;
  if (alt.id == AltId::ArityFlag && !rule.mixed) bounds.max_arity = std::max(opts.max_arity, opts.d + 1);
  if (alt.id == AltId::EffectiveZPath) {
    // Semantic search over every candidate path: keep hosts small.
    bounds.max_arity = std::min(opts.max_arity, 2);
    bounds.max_cap = std::min(opts.max_cap, 2);
    ctx_nodes = std::min(ctx_nodes, 1);
  }

  Rng rng(opts.seed);
  for (const RuleId& other : all_rules(rule.mixed)) {
    if (other == rule) continue;
    RuleCheck rc;
    rc.rule = other;
    if (other.tag == RuleTag::ScalarMerge &&
        (alt.id == AltId::RePart || alt.id == AltId::NonRealScalar)) {
      rc.excluded = true;
      rc.reason = "merging two scalars multiplies them, which this interpretation does not respect";
      rep.others.push_back(rc);
      continue;
    }
    for (int s = 0; s < opts.samples; ++s) {
      const Binding b = sample_binding(other, bounds, rng);
      const RulePair p = instantiate(other, b);
      Diagram hl = p.lhs, hr = p.rhs;
      if (!alt.compositional()) {
        const int k = std::uniform_int_distribution<int>(0, std::max(0, ctx_nodes))(rng);
        const Embedding emb = embed_in_context(p.lhs, k, rng);
        hl = emb.host;
        hr = plug_into(p.rhs, emb.context);
      }
      AltValue vl, vr;
      try {
        vl = eval_alt(hl, alt);
        vr = eval_alt(hr, alt);
      } catch (const ZwError& e) {
        if (e.kind() != ErrorKind::TooLarge) throw;
        continue;
      }
      rc.samples++;
      if (vl.kind == Codomain::Boolean && vl.flag) rc.positives++;
      if (!alt_values_agree(alt, vl, vr)) {
        rc.mismatches++;
        if (rc.notes.size() < 4)
          rc.notes.push_back(b.describe() + ": " + vl.describe() + " vs " + vr.describe());
      }
    }
    rep.others.push_back(rc);
  }

  const Binding cb = counterexample_binding(rule, opts.d);
  const RulePair cp = instantiate(rule, cb);
  const AltValue vl = eval_alt(cp.lhs, alt), vr = eval_alt(cp.rhs, alt);
  rep.counterexample = cb.describe();
  rep.lhs_value = vl.describe();
  rep.rhs_value = vr.describe();
  rep.violated = !alt_values_agree(alt, vl, vr);
  return rep;
}

// ---- the double W lemma --------------------------------------------------------

Diagram double_w_gadget(int n, int m, int d) {
  const Flavor f = Flavor::qudit(d);
  const int c = d - 1;
  Diagram g = empty_diagram(f);
  g.in_caps.assign(n + m, c);
  g.out_caps.assign(n + m, c);
  std::vector<int> above, below;
  for (int i = 0; i < n; ++i) above.push_back(g.add_node(Node::w(c, std::vector<int>(1 + m, c))));
  for (int j = 0; j < m; ++j) below.push_back(g.add_node(Node::w(c, std::vector<int>(1 + n, c))));
  for (int i = 0; i < n; ++i) {
    g.connect(End::in(i), End::port(above[i], 0));
    g.connect(End::port(above[i], 1), End::out(i));
  }
  for (int j = 0; j < m; ++j) {
    g.connect(End::in(n + j), End::port(below[j], 0));
    g.connect(End::port(below[j], 1), End::out(n + j));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) g.connect(End::port(above[i], 2 + j), End::port(below[j], 2 + i));
  return g;
}

namespace {

/** Zeroes the entries whose indices on axes [lo, hi) are not all 0. */
Tensor keep_vacuum_on(const Tensor& t, int lo, int hi) {
  Tensor r = t;
  std::vector<int> idx(t.shape.size(), 0);
  std::size_t flat = 0;
  do {
    for (int a = lo; a < hi; ++a)
      if (idx[a] != 0) {
        r.data[flat] = 0.0;
        break;
      }
    ++flat;
  } while (Tensor::next_index(idx, t.shape));
  return r;
}

}  // namespace

DoubleWReport double_w_simplification_check(int n, int m, int d, int samples, std::uint64_t seed) {
  DoubleWReport rep;
  rep.n = n;
  rep.m = m;
  rep.d = d;
  const Flavor f = Flavor::qudit(d);
  const Diagram gadget = double_w_gadget(n, m, d);
  const int legs = n + m;

  // Exact hypothesis space: states L with G L = P_a0 G L = P_b0 G L.
  const Tensor g = interpret(gadget);
  std::size_t dim = 1;
  for (int i = 0; i < legs; ++i) dim *= static_cast<std::size_t>(d);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * dim, dim);
  std::vector<int> out_idx(legs, 0);
  std::size_t row = 0;
  do {
    bool a_zero = true, b_zero = true;
    for (int i = 0; i < n; ++i) a_zero = a_zero && out_idx[i] == 0;
    for (int j = 0; j < m; ++j) b_zero = b_zero && out_idx[n + j] == 0;
    for (std::size_t col = 0; col < dim; ++col) {
      const cplx v = g.data[row * dim + col];
      if (!b_zero) h(row, col) = v;
      if (!a_zero) h(dim + row, col) = v;
    }
    ++row;
  } while (Tensor::next_index(out_idx, std::vector<int>(legs, d)));
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(h);
  lu.setThreshold(1e-10);
  rep.kernel_dim = static_cast<int>(lu.dimensionOfKernel());
  if (rep.kernel_dim == 1) {
    const Eigen::VectorXcd k = lu.kernel().col(0);
    rep.kernel_is_vacuum = std::abs(k(0)) > (1.0 - 1e-9) * k.norm();
  }

  // Sampled states: half arbitrary, half projected onto the vacuum.
  Rng rng(seed);
  Diagram proj = empty_diagram(f);
  for (int i = 0; i < legs; ++i)
    proj = compose_par(proj, compose_seq(w_node(f, 0), dagger(w_node(f, 0))));
  for (int s = 0; s < samples; ++s) {
    Diagram state = random_state(f, legs, 2 + s % 4, rng);
    if (s % 2 == 1) state = compose_seq(state, proj);
    const Tensor lambda = interpret(state);
    const Tensor t = interpret(compose_seq(state, gadget));
    rep.sampled++;
    const bool hyp = rel_deviation(t, keep_vacuum_on(t, n, legs)) <= 1e-9 &&
                     rel_deviation(t, keep_vacuum_on(t, 0, n)) <= 1e-9;
    if (!hyp) continue;
    rep.hypothesis_held++;
    const double dev = rel_deviation(lambda, keep_vacuum_on(lambda, 0, legs));
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (dev <= 1e-9) rep.conclusion_held++;
  }
  rep.pass = rep.kernel_is_vacuum && rep.hypothesis_held > 0 &&
             rep.conclusion_held == rep.hypothesis_held;
  return rep;
}

}  // namespace zw
