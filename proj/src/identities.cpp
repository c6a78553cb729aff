#include <cmath>
#include <functional>

#include "zw/combinatorics.hpp"
#include "zw/semantics.hpp"

namespace zw {

AsymmetricReport interpret_asymmetric_consistency(const Diagram& d, double tol) {
  if (d.flavor.mixed)
    throw ZwError(ErrorKind::UndefinedForFlavor, "asymmetric semantics needs a qudit diagram");
  AsymmetricReport rep;
  auto closed_check = [&](const Diagram& c, const std::string& what) {
    const double dev = rel_deviation(interpret(c), interpret(c, SemanticsFlavor::Asymmetric));
    rep.max_closed_deviation = std::max(rep.max_closed_deviation, dev);
    if (dev > tol) {
      rep.ok = false;
      rep.failures.push_back(what + ": deviation " + std::to_string(dev));
    }
  };
  if (d.num_inputs() == 0 && d.num_outputs() == 0) closed_check(d, "closed diagram");
  const Diagram s = bend_to_state(d);
  closed_check(compose_seq(s, dagger(s)), "diagram against its dagger");
  const int dim = d.flavor.d;
  for (int k = 0; k < dim; ++k) {
    const Diagram ket = derived_ket(k, -1, d.flavor);
    const double dk = rel_deviation(interpret(ket, SemanticsFlavor::Asymmetric), basis_ket(k, dim));
    Tensor bra({dim});
    bra.data[k] = static_cast<double>(factorial(k));
    const double db = rel_deviation(interpret(dagger(ket), SemanticsFlavor::Asymmetric), bra);
    rep.max_ket_deviation = std::max({rep.max_ket_deviation, dk, db});
    if (dk > tol || db > tol) {
      rep.ok = false;
      rep.failures.push_back("ket/bra " + std::to_string(k));
    }
  }
  return rep;
}

namespace {

Tensor ket_tensor(int k, Flavor f) { return interpret(derived_ket(k, -1, f)); }

Tensor kron_all(const std::vector<Tensor>& ts) {
  Tensor r = Tensor::scalar(1.0);
  for (const Tensor& t : ts) r = kron(r, t);
  return r;
}

void for_each_composition(int total, int parts, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> p(parts, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      p[i] = left;
      f(p);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      p[i] = x;
      rec(i + 1, left - x);
    }
  };
  if (parts == 0) {
    if (total == 0) f(p);
    return;
  }
  rec(0, total);
}

}  // namespace

bool check_semantic_identity(SemanticIdentity id, int d, const IdentityParams& p, double tol) {
  const Flavor f = Flavor::qudit(d);
  const int c = d - 1;
  auto in_range = [&](int x) { return x >= 0 && x <= c; };
  switch (id) {
    case SemanticIdentity::Eq1: {
      if (!in_range(p.k) || p.n < 0) throw ZwError(ErrorKind::RangeViolation, "Eq1 parameters");
      const Tensor lhs = interpret(compose_seq(derived_ket(p.k, -1, f), w_node(f, p.n)));
      std::vector<int> shape(p.n, d);
      Tensor rhs(shape);
      for_each_composition(p.k, p.n, [&](const std::vector<int>& parts) {
        std::vector<Tensor> ks;
        for (int x : parts) ks.push_back(ket_tensor(x, f));
        rhs = rhs + static_cast<double>(multinomial(p.k, parts)) * kron_all(ks);
      });
      return approx_equal(lhs, rhs, tol);
    }
    case SemanticIdentity::Eq2: {
      if (!in_range(p.k) || !in_range(p.l)) throw ZwError(ErrorKind::RangeViolation, "Eq2 parameters");
      const Diagram kets = compose_par(derived_ket(p.k, -1, f), derived_ket(p.l, -1, f));
      const Tensor lhs = interpret(compose_seq(kets, dagger(w_node(f, 2))));
      const Tensor rhs = p.k + p.l <= c ? ket_tensor(p.k + p.l, f) : Tensor({d});
      return approx_equal(lhs, rhs, tol);
    }
    case SemanticIdentity::Eq3: {
      if (!in_range(p.k) || p.n < 0) throw ZwError(ErrorKind::RangeViolation, "Eq3 parameters");
      const Tensor lhs = interpret(compose_seq(derived_ket(p.k, -1, f), z_spider(f, p.r, 1, p.n)));
      std::vector<Tensor> ks(p.n, ket_tensor(p.k, f));
      const Tensor rhs = std::pow(p.r, p.k) * kron_all(ks);
      return approx_equal(lhs, rhs, tol);
    }
    case SemanticIdentity::Eq4: {
      if (!in_range(p.k) || !in_range(p.l)) throw ZwError(ErrorKind::RangeViolation, "Eq4 parameters");
      const Tensor lhs =
          interpret(compose_seq(derived_ket(p.l, -1, f), dagger(derived_ket(p.k, -1, f))));
      const Tensor rhs = Tensor::scalar(p.k == p.l ? static_cast<double>(factorial(p.k)) : 0.0);
      return approx_equal(lhs, rhs, tol);
    }
    case SemanticIdentity::Eq5: {
      const Tensor lhs = interpret(identity_wire(f));
      Tensor rhs({d, d});
      for (int k = 0; k <= c; ++k) {
        const Diagram proj = compose_par(dagger(derived_ket(k, -1, f)), derived_ket(k, -1, f));
        rhs = rhs + (1.0 / static_cast<double>(factorial(k))) * interpret(proj);
      }
      return approx_equal(lhs, rhs, tol);
    }
  }
  return false;
}

}  // namespace zw
