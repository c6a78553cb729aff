#include <gtest/gtest.h>

#include "oracle.hpp"
#include "zw/diagram.hpp"
#include "zw/random.hpp"
#include "zw/semantics.hpp"

using namespace zw;

namespace {

const Flavor kQubit = Flavor::qudit(2);
const Flavor kMixed = Flavor::mixed_dims();

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ZwError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a ZwError";
  return ErrorKind::ValidationError;
}

}  // namespace

TEST(MakeGenerator, IdentityShapedSpider) {
  Diagram d = z_spider(kQubit, 1.0, 1, 1);
  EXPECT_EQ(d.nodes.size(), 1u);
  EXPECT_EQ(d.num_inputs(), 1);
  EXPECT_EQ(d.num_outputs(), 1);
  EXPECT_TRUE(validate(d).empty());
}

TEST(MakeGenerator, MixedWCapacityRule) {
  EXPECT_TRUE(validate(make_generator(Node::w(2, {1, 1}), kMixed)).empty());
  EXPECT_EQ(kind_of([] { make_generator(Node::w(1, {2}), kMixed); }), ErrorKind::CapacityViolation);
  EXPECT_EQ(kind_of([] { make_generator(Node::ket_one(0), kMixed); }), ErrorKind::CapacityViolation);
  EXPECT_EQ(kind_of([] { make_generator(Node::z(1.0, 0, 2), Flavor::qudit(2)); }),
            ErrorKind::FlavorMismatch);
}

TEST(ComposeSeq, IdentityChainFuses) {
  Diagram id = identity_wire(kQubit);
  Diagram c = compose_seq(id, id);
  EXPECT_EQ(c.wires.size(), 1u);
  EXPECT_TRUE(structurally_equal(c, id));
}

TEST(ComposeSeq, KetIntoWSplit) {
  Diagram c = compose_seq(ket_one(kMixed, 1), w_node(kMixed, 2, 1, {1, 1}));
  EXPECT_EQ(c.num_inputs(), 0);
  EXPECT_EQ(c.num_outputs(), 2);
  EXPECT_TRUE(validate(c).empty());
}

TEST(ComposeSeq, CapacityMismatchRejected) {
  EXPECT_EQ(kind_of([] {
              compose_seq(z_spider(kMixed, 1.0, 1, 1, 2), z_spider(kMixed, 1.0, 1, 1, 3));
            }),
            ErrorKind::BoundaryMismatch);
}

TEST(ComposePar, UnitAndConcatenation) {
  Diagram k = ket_one(kQubit);
  EXPECT_TRUE(structurally_equal(compose_par(empty_diagram(kQubit), k), k));
  EXPECT_EQ(compose_par(k, k).num_outputs(), 2);
  Diagram s = compose_par(global_scalar(kQubit, 2.0), global_scalar(kQubit, 3.0));
  EXPECT_EQ(s.nodes.size(), 2u);
  EXPECT_EQ(kind_of([&] { compose_par(k, ket_one(kMixed, 1)); }), ErrorKind::FlavorMismatch);
}

TEST(ComposePar, BoundaryOrderPreserved) {
  // Tag outputs by capacity so that positions are observable.
  Diagram a = compose_par(ket_one(kMixed, 1), ket_one(kMixed, 2));
  Diagram b = compose_par(ket_one(kMixed, 3), a);
  EXPECT_EQ(b.out_caps, (std::vector<int>{3, 1, 2}));
  Diagram c = compose_seq(b, identity(kMixed, {3, 1, 2}));
  EXPECT_EQ(c.out_caps, (std::vector<int>{3, 1, 2}));
  EXPECT_TRUE(structurally_equal(c, b));
}

TEST(Dagger, KetBecomesBra) {
  Diagram b = dagger(ket_one(kQubit));
  EXPECT_EQ(b.num_inputs(), 1);
  EXPECT_EQ(b.num_outputs(), 0);
  Diagram z = dagger(z_spider(kQubit, cplx(0, 1), 2, 1));
  EXPECT_EQ(z.nodes[0].param, cplx(0, -1));
  EXPECT_EQ(z.num_inputs(), 1);
  EXPECT_EQ(z.num_outputs(), 2);
}

TEST(Dagger, InvolutionOnRandomDiagrams) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    RandomSpec spec;
    spec.nodes = 5;
    Diagram d = random_diagram(t % 2 ? kMixed : Flavor::qudit(3), spec, rng);
    ASSERT_TRUE(validate(d).empty());
    EXPECT_TRUE(structurally_equal(dagger(dagger(d)), d));
  }
}

TEST(Snake, BendingBackIsStructuralIdentity) {
  for (Flavor f : {kQubit, Flavor::qudit(4)}) {
    Diagram id = identity_wire(f);
    // (id (x) cap) o (cup (x) id) on one wire.
    Diagram left = compose_par(id, cup_state(f));
    Diagram right = compose_par(cap_effect(f), id);
    Diagram snake = compose_seq(left, right);
    EXPECT_TRUE(structurally_equal(snake, id));
  }
  Diagram z = z_spider(kQubit, 2.0, 1, 1);
  Diagram bent = compose_seq(compose_par(z, cup_state(kQubit)),
                             compose_par(cap_effect(kQubit), identity_wire(kQubit)));
  EXPECT_TRUE(structurally_equal(bent, z));
}

TEST(DerivedKet, ShapesAndSemantics) {
  Diagram k0 = derived_ket(0, 1, kQubit);
  ASSERT_EQ(k0.nodes.size(), 1u);
  EXPECT_EQ(k0.nodes[0].kind, Kind::W);
  EXPECT_TRUE(k0.nodes[0].out_caps.empty());
  EXPECT_TRUE(approx_equal(interpret(k0), basis_ket(0, 2)));
  Tensor k2 = interpret(derived_ket(2, 2, Flavor::qudit(3)));
  EXPECT_TRUE(approx_equal(k2, std::sqrt(2.0) * basis_ket(2, 3), 1e-12));
  EXPECT_EQ(kind_of([] { derived_ket(3, 2, Flavor::qudit(3)); }), ErrorKind::RangeViolation);
  // Mixed flavor: the leaves are capacity-1 KetOnes.
  Diagram m = derived_ket(3, 4, kMixed);
  for (const Node& n : m.nodes)
    if (n.kind == Kind::KetOne) EXPECT_EQ(n.cap, 1);
  EXPECT_TRUE(approx_equal(interpret(m), std::sqrt(6.0) * basis_ket(3, 5), 1e-12));
}

TEST(BendToState, CapStateAndSpider) {
  Tensor cap = interpret(bend_to_state(identity_wire(kQubit)));
  Tensor expect({2, 2});
  expect.at({0, 0}) = 1;
  expect.at({1, 1}) = 1;
  EXPECT_TRUE(approx_equal(cap, expect));
  Diagram k = ket_one(kQubit);
  EXPECT_TRUE(structurally_equal(bend_to_state(k), k));
  const cplx r(0.3, -0.7);
  Diagram s = bend_to_state(z_spider(kQubit, r, 1, 1));
  Tensor zexp({2, 2});
  zexp.at({0, 0}) = 1;
  zexp.at({1, 1}) = r;
  EXPECT_TRUE(approx_equal(interpret(s), zexp));
  EXPECT_TRUE(approx_equal(oracle::evaluate(s), zexp));
}

TEST(BendToState, ReversedInputOrder) {
  Diagram d = compose_par(identity(kMixed, {1}), identity(kMixed, {2}));
  Diagram s = bend_to_state(d);
  EXPECT_EQ(s.out_caps, (std::vector<int>{2, 1, 1, 2}));
}

TEST(RestrictedSpider, FullRestrictionIsOrdinarySpider) {
  const int d = 3;
  Tensor a = interpret(restricted_z_spider(d - 1, 1.0, 1, 1, d));
  Tensor b = oracle::evaluate(z_spider(Flavor::qudit(d), 1.0, 1, 1));
  EXPECT_LE(rel_deviation(a, b), 1e-10);
}

TEST(RestrictedSpider, ZeroRestrictionIsProjector) {
  for (int d = 2; d <= 4; ++d) {
    Tensor a = oracle::evaluate(restricted_z_spider(0, cplx(0.4, 0.2), 1, 1, d));
    Tensor p({d, d});
    p.at({0, 0}) = 1;
    EXPECT_LE(rel_deviation(a, p), 1e-10) << "d=" << d;
  }
}

TEST(RestrictedSpider, ZeroParameterAndRange) {
  const int d = 4;
  Tensor a = interpret(restricted_z_spider(2, 0.0, 1, 2, d));
  Tensor b = interpret(restricted_z_spider(0, 0.0, 1, 2, d));
  EXPECT_LE(rel_deviation(a, b), 1e-12);
  EXPECT_EQ(kind_of([] { restricted_z_spider(4, 1.0, 1, 1, 4); }), ErrorKind::RangeViolation);
}

TEST(RestrictedSpider, KeepsOnlyLowComponents) {
  const int d = 4;
  const cplx r(1.5, 0.5);
  for (int a = 0; a < d; ++a) {
    Tensor t = interpret(restricted_z_spider(a, r, 1, 1, d));
    Tensor expect({d, d});
    for (int k = 0; k <= a; ++k) expect.at({k, k}) = std::pow(r, k);
    EXPECT_LE(rel_deviation(t, expect), 1e-10) << "a=" << a;
  }
}

TEST(Validate, ReportsViolations) {
  Diagram nf = compose_seq(ket_one(kQubit), w_node(kQubit, 2));
  EXPECT_TRUE(validate(nf).empty());
  Diagram bad = empty_diagram(kMixed);
  int a = bad.add_node(Node::ket_one(1));
  int b = bad.add_node(Node::z(1.0, 1, 2));
  bad.connect(End::port(a, 0), End::port(b, 0));
  auto v = validate(bad);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::CapacityMismatch);
  Diagram q = empty_diagram(Flavor::qudit(3));
  int z = q.add_node(Node::z(1.0, 1, 1));
  q.out_caps = {1};
  q.connect(End::port(z, 0), End::out(0));
  auto vq = validate(q);
  ASSERT_FALSE(vq.empty());
  EXPECT_EQ(vq[0].kind, ViolationKind::FlavorViolation);
  Diagram u = empty_diagram(kQubit);
  u.add_node(Node::z(1.0, 2, 1));
  auto vu = validate(u);
  ASSERT_EQ(vu.size(), 2u);
  EXPECT_EQ(vu[0].kind, ViolationKind::PortUncovered);
}

TEST(Validate, PublicConstructorsProduceValidDiagrams) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    RandomSpec spec;
    spec.nodes = 1 + t % 6;
    Flavor f = t % 3 == 0 ? kMixed : Flavor::qudit(2 + t % 4);
    Diagram a = random_diagram(f, spec, rng);
    Diagram b = random_diagram(f, spec, rng);
    EXPECT_TRUE(validate(a).empty());
    EXPECT_TRUE(validate(compose_par(a, b)).empty());
    EXPECT_TRUE(validate(bend_to_state(a)).empty());
    EXPECT_TRUE(validate(dagger(b)).empty());
  }
}

TEST(Canonical, InvariantUnderRenumbering) {
  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    RandomSpec spec;
    spec.nodes = 6;
    spec.max_z_legs = 4;
    Diagram d = random_diagram(t % 2 ? kMixed : Flavor::qudit(3), spec, rng);
    // Reverse node order and flip every wire's endpoint order.
    Diagram e = d;
    const int n = static_cast<int>(d.nodes.size());
    std::reverse(e.nodes.begin(), e.nodes.end());
    for (Wire& w : e.wires) {
      for (End* x : {&w.a, &w.b})
        if (x->is_port()) x->node = n - 1 - x->node;
      std::swap(w.a, w.b);
    }
    std::reverse(e.wires.begin(), e.wires.end());
    EXPECT_TRUE(structurally_equal(d, e));
  }
}

TEST(Canonical, DistinguishesParametersAndBoundary) {
  EXPECT_FALSE(structurally_equal(z_spider(kQubit, 1.0, 1, 1), z_spider(kQubit, 2.0, 1, 1)));
  Diagram a = compose_par(ket_one(kQubit), derived_ket(0, 1, kQubit));
  Diagram b = compose_par(derived_ket(0, 1, kQubit), ket_one(kQubit));
  EXPECT_FALSE(structurally_equal(a, b));
  EXPECT_TRUE(structurally_equal(permute_outputs(a, {1, 0}), b));
}
