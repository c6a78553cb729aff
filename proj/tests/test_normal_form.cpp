#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "oracle.hpp"
#include "zw/combinatorics.hpp"
#include "zw/normal_form.hpp"
#include "zw/random.hpp"
#include "zw/rules.hpp"
#include "zw/semantics.hpp"

using namespace zw;

namespace {

const Flavor kMixed = Flavor::mixed_dims();

CoefficientTable table(std::vector<int> caps, std::map<std::vector<int>, cplx> entries) {
  CoefficientTable t;
  t.caps = std::move(caps);
  t.entries = std::move(entries);
  return t;
}

CoefficientTable random_table(Flavor f, int n, Rng& rng) {
  std::uniform_int_distribution<int> cap(1, 3), coin(0, 2);
  CoefficientTable t;
  for (int j = 0; j < n; ++j) t.caps.push_back(f.mixed ? cap(rng) : f.uniform_cap());
  std::vector<int> shape;
  for (int c : t.caps) shape.push_back(c + 1);
  std::vector<int> x(n, 0);
  do {
    if (coin(rng) == 0) t.entries[x] = random_param(rng);
  } while (Tensor::next_index(x, shape));
  return t;
}

void expect_tables_near(const CoefficientTable& a, const CoefficientTable& b, double tol) {
  ASSERT_EQ(a.caps, b.caps);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  double scale = 1e-300;
  for (const auto& [x, r] : a.entries) scale = std::max(scale, std::abs(r));
  for (const auto& [x, r] : a.entries) {
    auto it = b.entries.find(x);
    ASSERT_NE(it, b.entries.end());
    EXPECT_LE(std::abs(it->second - r), tol * scale);
  }
}

/** Sum over k of T(.., j1=k, .., j2=k, ..) computed straight from a dense tensor. */
Tensor trace_axes(const Tensor& t, int j1, int j2) {
  std::vector<int> shape;
  for (int j = 0; j < static_cast<int>(t.shape.size()); ++j)
    if (j != j1 && j != j2) shape.push_back(t.shape[j]);
  Tensor r(shape);
  std::vector<int> idx(t.shape.size(), 0);
  std::size_t k = 0;
  do {
    if (idx[j1] == idx[j2]) {
      std::vector<int> o;
      for (int j = 0; j < static_cast<int>(idx.size()); ++j)
        if (j != j1 && j != j2) o.push_back(idx[j]);
      r.at(o) += t.data[k];
    }
    ++k;
  } while (Tensor::next_index(idx, t.shape));
  return r;
}

void expect_error(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
    FAIL() << "expected " << error_kind_name(kind);
  } catch (const ZwError& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(NormalForm, SingleKet) {
  const auto nf = n_functor(table({1}, {{{1}, 1.0}}), Flavor::qudit(2));
  const Tensor t = oracle::evaluate(nf.realization);
  EXPECT_NEAR(std::abs(t.at({0})), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(t.at({1}) - cplx(1.0)), 0.0, 1e-12);
}

TEST(NormalForm, TwoTermQubitMatchesOracle) {
  const auto nf = n_functor(table({1}, {{{0}, 1.0}, {{1}, 2.0}}), Flavor::qudit(2));
  const Tensor t = oracle::evaluate(nf.realization);
  EXPECT_NEAR(std::abs(t.at({0}) - cplx(1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(t.at({1}) - cplx(2.0)), 0.0, 1e-12);
}

TEST(NormalForm, BellTableMatchesOracle) {
  const auto tab = table({1, 1}, {{{0, 0}, 1.0}, {{1, 1}, 1.0}});
  const auto nf = n_functor(tab, Flavor::qudit(2));
  EXPECT_EQ(nf.table.entries.size(), 2u);
  EXPECT_LE(rel_deviation(oracle::evaluate(nf.realization), tab.to_tensor()), 1e-12);
  expect_tables_near(table_of(nf.realization), tab, 1e-12);
}

TEST(NormalForm, HigherExponentsMatchOracle) {
  // Parallel wires into the collectors must supply exactly sqrt(x!).
  const auto tab = table({2, 2}, {{{2, 1}, cplx(0.5, -1.0)}, {{0, 2}, 3.0}, {{1, 0}, 1.0}});
  const auto nf = n_functor(tab, Flavor::qudit(3));
  EXPECT_LE(rel_deviation(oracle::evaluate(nf.realization), tab.to_tensor()), 1e-12);
}

TEST(NormalForm, MixedCapacitiesMatchOracle) {
  const auto tab = table({2, 1, 3}, {{{2, 1, 3}, cplx(0, 1)}, {{1, 0, 2}, -2.0}, {{0, 0, 0}, 1.0}});
  const auto nf = n_functor(tab, kMixed);
  EXPECT_TRUE(validate(nf.realization).empty());
  EXPECT_LE(rel_deviation(interpret(nf.realization), tab.to_tensor()), 1e-12);
  for (const Node& n : nf.realization.nodes)
    if (n.kind == Kind::Z || n.kind == Kind::KetOne) EXPECT_EQ(n.cap, 1);
}

TEST(NormalForm, EmptyTableIsZeroState) {
  for (Flavor f : {Flavor::qudit(3), kMixed}) {
    const auto tab = table({2, 2}, {});
    const auto nf = n_functor(tab, f);
    EXPECT_TRUE(validate(nf.realization).empty());
    EXPECT_LE(max_abs(interpret(nf.realization)), 1e-15);
    EXPECT_TRUE(table_of(nf.realization).entries.empty());
  }
}

TEST(NormalForm, ScalarTable) {
  const auto nf = n_functor(table({}, {{{}, cplx(2.0, 1.0)}}), Flavor::qudit(2));
  EXPECT_NEAR(std::abs(interpret(nf.realization).data[0] - cplx(2.0, 1.0)), 0.0, 1e-12);
}

TEST(NormalForm, PruningIsRelative) {
  auto t = table({1}, {{{0}, 1.0}, {{1}, 1e-13}});
  t.prune();
  EXPECT_EQ(t.entries.size(), 1u);
  auto u = table({1}, {{{0}, 1e-13}, {{1}, 1e-13}});
  u.prune();
  EXPECT_EQ(u.entries.size(), 2u);
}

TEST(NormalForm, RejectsOutOfRangeTables) {
  expect_error(ErrorKind::RangeViolation, [] { n_functor(table({1}, {{{2}, 1.0}}), Flavor::qudit(2)); });
  expect_error(ErrorKind::CapacityMismatch, [] { n_functor(table({2}, {{{1}, 1.0}}), Flavor::qudit(2)); });
}

TEST(NormalForm, RandomTablesRoundTrip) {
  Rng rng(11);
  int checked = 0;
  for (int s = 0; s < 200; ++s) {
    const int d = 2 + s % 3;
    const Flavor f = s % 5 == 4 ? kMixed : Flavor::qudit(d);
    const int n = s % 4;
    const CoefficientTable tab = random_table(f, n, rng);
    const auto nf = n_functor(tab, f);
    ASSERT_TRUE(validate(nf.realization).empty());
    EXPECT_LE(rel_deviation(interpret(nf.realization), tab.to_tensor()), 1e-10) << s;
    const CoefficientTable back = table_of(nf_to_diagram(nf));
    expect_tables_near(back, nf.table, 1e-12);
    EXPECT_TRUE(structurally_equal(n_functor(back, f).realization, nf.realization));
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(NormalForm, UniversalityOnRandomTensors) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int s = 0; s < 40; ++s) {
    const std::vector<int> caps = s % 2 ? std::vector<int>{2, 2} : std::vector<int>{1, 3, 2};
    std::vector<int> shape;
    for (int c : caps) shape.push_back(c + 1);
    Tensor t(shape);
    for (cplx& v : t.data) v = cplx(u(rng), u(rng));
    const auto nf = n_functor(CoefficientTable::from_tensor(t, caps), s % 2 ? Flavor::qudit(3) : kMixed);
    EXPECT_LE(rel_deviation(interpret(nf.realization), t), 1e-10);
  }
}

TEST(NormalForm, TableOfRejectsOtherDiagrams) {
  const Flavor f = Flavor::qudit(2);
  Diagram g = compose_seq(ket_one(f), z_spider(f, 2.0, 1, 1));
  g = compose_seq(g, w_node(f, 2));
  expect_error(ErrorKind::NotInNormalForm, [&] { table_of(g); });
  expect_error(ErrorKind::NotInNormalForm, [&] { table_of(identity_wire(f)); });
  // A normal form next to a stray scalar is no longer in the image.
  const Diagram nf = n_functor(table({1}, {{{1}, 1.0}, {{0}, 1.0}}), f).realization;
  expect_error(ErrorKind::NotInNormalForm, [&] { table_of(compose_par(nf, global_scalar(f, 2.0))); });
  // Two spiders with the same exponent vector are not canonical.
  Diagram twice = empty_diagram(f);
  twice.out_caps = {1};
  const int k = twice.add_node(Node::ket_one(1));
  const int sel = twice.add_node(Node::w(1, {1, 1}));
  const int z1 = twice.add_node(Node::z(1.0, 2, 1));
  const int z2 = twice.add_node(Node::z(2.0, 2, 1));
  const int col = twice.add_node(Node::w(1, {1, 1}));
  twice.connect(End::port(k, 0), End::port(sel, 0));
  twice.connect(End::port(sel, 1), End::port(z1, 0));
  twice.connect(End::port(sel, 2), End::port(z2, 0));
  twice.connect(End::port(z1, 1), End::port(col, 1));
  twice.connect(End::port(z2, 1), End::port(col, 2));
  twice.connect(End::port(col, 0), End::out(0));
  expect_error(ErrorKind::NotInNormalForm, [&] { table_of(twice); });
}

TEST(Normalize, CupOfQubitWire) {
  const auto nf = normalize(bend_to_state(identity_wire(Flavor::qudit(2))));
  expect_tables_near(nf.table, table({1, 1}, {{{0, 0}, 1.0}, {{1, 1}, 1.0}}), 1e-12);
}

TEST(Normalize, DerivedKetTwo) {
  const auto nf = normalize(derived_ket(2, 2, Flavor::qudit(3)));
  expect_tables_near(nf.table, table({2}, {{{2}, std::sqrt(2.0)}}), 1e-12);
}

TEST(Normalize, ZeroState) {
  const Flavor f = Flavor::qudit(2);
  const auto nf = normalize(compose_par(global_scalar(f, 0.0), ket_one(f)));
  EXPECT_TRUE(nf.table.entries.empty());
  EXPECT_EQ(nf.table.caps, std::vector<int>{1});
}

TEST(Normalize, OperatorsAreBent) {
  const Flavor f = Flavor::qudit(3);
  const Diagram z = z_spider(f, cplx(0, 1), 1, 2);
  const auto nf = normalize(z);
  EXPECT_LE(rel_deviation(interpret(nf.realization), interpret(bend_to_state(z))), 1e-12);
}

TEST(Normalize, RejectsInvalidDiagram) {
  Diagram g = ket_one(Flavor::qudit(2));
  g.wires.clear();
  expect_error(ErrorKind::InvalidDiagram, [&] { normalize(g); });
}

TEST(Normalize, Idempotent) {
  Rng rng(21);
  for (int s = 0; s < 60; ++s) {
    const Flavor f = s % 3 == 2 ? kMixed : Flavor::qudit(2 + s % 3);
    RandomSpec spec;
    spec.nodes = 3 + s % 3;
    spec.inputs = s % 2;
    spec.outputs = 1 + (s / 2) % 2;
    const Diagram d = random_diagram(f, spec, rng);
    const auto once = normalize(d);
    const auto twice = normalize(nf_to_diagram(once));
    expect_tables_near(twice.table, once.table, 1e-10);
  }
}

TEST(NfTensor, Examples) {
  const Flavor f = Flavor::qudit(2);
  const auto a = n_functor(table({1}, {{{1}, 1.0}}), f);
  const auto b = n_functor(table({1}, {{{0}, 1.0}}), f);
  expect_tables_near(nf_tensor(a, b).table, table({1, 1}, {{{1, 0}, 1.0}}), 0);
  const auto plus = n_functor(table({1}, {{{0}, 1.0}, {{1}, 1.0}}), f);
  const auto pp = nf_tensor(plus, plus);
  EXPECT_EQ(pp.table.entries.size(), 4u);
  for (const auto& [x, r] : pp.table.entries) EXPECT_EQ(r, cplx(1.0));
}

TEST(NfTensor, CommutesWithInterpretation) {
  Rng rng(3);
  for (int s = 0; s < 30; ++s) {
    const Flavor f = s % 3 == 2 ? kMixed : Flavor::qudit(3);
    const auto a = n_functor(random_table(f, 1 + s % 2, rng), f);
    const auto b = n_functor(random_table(f, 1, rng), f);
    const auto ab = nf_tensor(a, b);
    EXPECT_LE(rel_deviation(interpret(ab.realization),
                            kron(interpret(a.realization), interpret(b.realization))),
              1e-10);
  }
  expect_error(ErrorKind::FlavorMismatch, [] {
    nf_tensor(n_functor(table({1}, {}), Flavor::qudit(2)), n_functor(table({2}, {}), Flavor::qudit(3)));
  });
}

TEST(NfCup, Examples) {
  const Flavor f = Flavor::qudit(2);
  const auto bell = n_functor(table({1, 1}, {{{0, 0}, 1.0}, {{1, 1}, 1.0}}), f);
  expect_tables_near(nf_cup(bell, 0, 1).table, table({}, {{{}, 2.0}}), 1e-12);
  const auto ket01 = n_functor(table({1, 1}, {{{0, 1}, 1.0}}), f);
  EXPECT_TRUE(nf_cup(ket01, 0, 1).table.entries.empty());
}

TEST(NfCup, CommutesWithInterpretation) {
  Rng rng(8);
  for (int s = 0; s < 30; ++s) {
    const Flavor f = Flavor::qudit(3);
    const auto nf = n_functor(random_table(f, 3, rng), f);
    const auto cupped = nf_cup(nf, 0, 2);
    const Tensor oracle_t = trace_axes(nf.table.to_tensor(), 0, 2);
    EXPECT_LE(rel_deviation(interpret(cupped.realization), oracle_t), 1e-10);
  }
}

TEST(NfCup, CapacityMismatch) {
  const auto nf = n_functor(table({1, 2}, {{{1, 1}, 1.0}}), kMixed);
  expect_error(ErrorKind::CapacityMismatch, [&] { nf_cup(nf, 0, 1); });
}

TEST(NfW21, Examples) {
  const auto q2 = n_functor(table({1, 1}, {{{1, 1}, 1.0}}), Flavor::qudit(2));
  EXPECT_TRUE(nf_w21(q2, 0, 1).table.entries.empty());
  const auto q10 = n_functor(table({1, 1}, {{{1, 0}, 1.0}}), Flavor::qudit(2));
  expect_tables_near(nf_w21(q10, 0, 1).table, table({1}, {{{1}, 1.0}}), 1e-12);
  const auto q3 = n_functor(table({2, 2}, {{{1, 1}, 1.0}}), Flavor::qudit(3));
  const auto merged = nf_w21(q3, 0, 1);
  expect_tables_near(merged.table, table({2}, {{{2}, std::sqrt(2.0)}}), 1e-12);
  EXPECT_LE(rel_deviation(interpret(merged.realization), interpret(derived_ket(2, 2, Flavor::qudit(3)))),
            1e-12);
}

TEST(NfW21, CommutesWithInterpretation) {
  Rng rng(13);
  for (int s = 0; s < 30; ++s) {
    const bool mixed = s % 2 == 1;
    const Flavor f = mixed ? kMixed : Flavor::qudit(3);
    const auto nf = n_functor(random_table(f, 3, rng), f);
    const int c0 = nf.table.caps[0], c1 = nf.table.caps[1];
    const int target = mixed ? std::max(c0, c1) + s % 3 : 2;
    const auto merged = nf_w21(nf, 0, 1, mixed ? target : -1);
    // Oracle: apply the dagger of W(target; c0, c1) to the dense state.
    const Diagram merge = dagger(w_node(f, 2, target, mixed ? std::vector<int>{c0, c1} : std::vector<int>{}));
    const Tensor m = interpret(merge);
    const Tensor state = nf.table.to_tensor();
    const int c2 = nf.table.caps[2];
    Tensor ref({target + 1, c2 + 1});
    for (int k = 0; k <= target; ++k)
      for (int k1 = 0; k1 <= c0; ++k1)
        for (int k2 = 0; k2 <= c1; ++k2)
          for (int z = 0; z <= c2; ++z) ref.at({k, z}) += m.at({k, k1, k2}) * state.at({k1, k2, z});
    EXPECT_LE(rel_deviation(interpret(merged.realization), ref), 1e-10) << s;
  }
}

TEST(NfW21, CapacityErrors) {
  const auto nf = n_functor(table({2, 3}, {{{1, 1}, 1.0}}), kMixed);
  expect_error(ErrorKind::CapacityMismatch, [&] { nf_w21(nf, 0, 1); });
  expect_error(ErrorKind::CapacityMismatch, [&] { nf_w21(nf, 0, 1, 2); });
  const auto q = n_functor(table({1, 1}, {}), Flavor::qudit(2));
  expect_error(ErrorKind::CapacityMismatch, [&] { nf_w21(q, 0, 1, 3); });
}

TEST(DiagramsEqual, SpiderIsWire) {
  const Flavor f = Flavor::qudit(2);
  EXPECT_TRUE(diagrams_equal(z_spider(f, 1.0, 1, 1), identity_wire(f)).equal);
}

TEST(DiagramsEqual, KetOneIsNotKetZero) {
  const Flavor f = Flavor::qudit(2);
  const auto r = diagrams_equal(ket_one(f), derived_ket(0, 1, f));
  EXPECT_FALSE(r.equal);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, std::vector<int>{1});
  EXPECT_EQ(r.lhs_coeff, cplx(1.0));
  EXPECT_EQ(r.rhs_coeff, cplx(0.0));
}

TEST(DiagramsEqual, BoundaryMismatch) {
  const Flavor f = Flavor::qudit(2);
  expect_error(ErrorKind::BoundaryMismatch, [&] { diagrams_equal(ket_one(f), identity_wire(f)); });
  expect_error(ErrorKind::BoundaryMismatch,
               [&] { diagrams_equal(ket_one(f), ket_one(Flavor::qudit(3))); });
}

TEST(DiagramsEqual, CompletenessUnderRewriting) {
  // Mutating a diagram by sound rewrites never changes its normal form.
  Rng rng(77);
  int pairs = 0;
  for (int s = 0; s < 80; ++s) {
    const Flavor f = s % 3 == 2 ? kMixed : Flavor::qudit(2 + s % 3);
    RandomSpec spec;
    spec.nodes = 3 + s % 3;
    spec.inputs = s % 2;
    spec.outputs = 1;
    Diagram d = random_diagram(f, spec, rng);
    Diagram e = d;
    const int steps = 1 + s % 5;
    int done = 0;
    for (int k = 0; k < steps; ++k) {
      std::vector<Match> ms = find_all_matches(e);
      if (ms.empty()) break;
      const Match& m = ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
      const Diagram next = apply(e, m);
      if (next.nodes.size() > 14) continue;
      e = next;
      ++done;
    }
    if (done == 0) continue;
    const auto a = normalize(d), b = normalize(e);
    expect_tables_near(b.table, a.table, 1e-9);
    EXPECT_TRUE(diagrams_equal(d, e).equal) << s;
    ++pairs;
  }
  EXPECT_GE(pairs, 60);
}
