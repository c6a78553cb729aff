// Numerical soundness of rule schemas, in isolation and inside random hosts.

#include <algorithm>
#include <map>

#include "zw/rules.hpp"
#include "zw/semantics.hpp"

namespace zw {
namespace {

void record(SoundnessReport& rep, double dev, double tol, const std::string& note) {
  rep.samples++;
  rep.max_deviation = std::max(rep.max_deviation, dev);
  if (dev > tol) {
    rep.failures++;
    if (rep.failure_notes.size() < 8) rep.failure_notes.push_back(note);
  }
}

}  // namespace

SoundnessReport check_rule_soundness(const RuleId& rule, const SampleBounds& bounds, int samples,
                                     std::uint64_t seed, double tol) {
  SoundnessReport rep;
  rep.rule = rule;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Binding b = sample_binding(rule, bounds, rng);
    const RulePair p = instantiate(rule, b);
    const double dev = rel_deviation(interpret(p.lhs), interpret(p.rhs));
    record(rep, dev, tol, b.describe());
  }
  return rep;
}

Diagram plug_into(const Diagram& side, const Diagram& context) {
  return compose_seq(side, context);
}

Embedding embed_in_context(const Diagram& side, int context_nodes, Rng& rng) {
  const Flavor f = side.flavor;
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng); };
  Diagram ctx = empty_diagram(f);
  ctx.in_caps = side.out_caps;
  std::vector<int> caps = ctx.in_caps;
  if (caps.empty()) caps.push_back(f.mixed ? uni(1, 3) : f.uniform_cap());
  auto pick_cap = [&] { return f.mixed ? caps[uni(0, static_cast<int>(caps.size()) - 1)] : f.uniform_cap(); };
  for (int i = 0; i < context_nodes; ++i) {
    const int roll = uni(0, 99);
    if (roll < 45) {
      ctx.add_node(Node::z(random_param(rng, true), uni(1, 3), pick_cap()));
    } else if (roll < 85) {
      const int c = pick_cap();
      std::vector<int> outs(uni(0, 2));
      for (int& o : outs) o = f.mixed ? uni(1, c) : c;
      ctx.add_node(Node::w(c, outs));
    } else if (roll < 95) {
      ctx.add_node(Node::ket_one(pick_cap()));
    } else {
      ctx.add_node(Node::scalar(random_param(rng, false)));
    }
  }
  std::vector<End> ends;
  for (int i = 0; i < ctx.num_inputs(); ++i) ends.push_back(End::in(i));
  for (int n = 0; n < static_cast<int>(ctx.nodes.size()); ++n)
    for (int p = 0; p < ctx.nodes[n].num_ports(); ++p) ends.push_back(End::port(n, p));
  std::shuffle(ends.begin(), ends.end(), rng);
  std::map<int, std::vector<End>> by_cap;
  for (const End& e : ends) by_cap[ctx.cap_of(e)].push_back(e);
  for (auto& [c, group] : by_cap) {
    // Keep roughly a third of the ends open so the host stays small but not closed.
    std::size_t i = 0;
    while (i < group.size()) {
      const bool open = i + 1 == group.size() || (uni(0, 2) == 0 && ctx.num_outputs() < 3);
      if (open) {
        ctx.out_caps.push_back(c);
        ctx.connect(group[i], End::out(ctx.num_outputs() - 1));
        i += 1;
      } else {
        ctx.connect(group[i], group[i + 1]);
        i += 2;
      }
    }
  }
  return {plug_into(side, ctx), ctx};
}

SoundnessReport check_in_context_soundness(const RuleId& rule, const SampleBounds& bounds,
                                           int context_size, int samples, std::uint64_t seed,
                                           double tol) {
  SoundnessReport rep;
  rep.rule = rule;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Binding b = sample_binding(rule, bounds, rng);
    const Direction dir = s % 2 == 0 ? Direction::LeftToRight : Direction::RightToLeft;
    const bool lr = dir == Direction::LeftToRight;
    const Diagram side = instantiate_side(rule, b, lr);
    const Diagram other = instantiate_side(rule, b, !lr);
    Embedding emb = embed_in_context(side, context_size, rng);
    const std::string note = std::string(direction_name(dir)) + " " + b.describe();
    std::vector<Match> ms = find_matches(emb.host, rule, dir);
    if (ms.empty()) {
      record(rep, 1.0, tol, note + ": pattern not found in host");
      continue;
    }
    const Tensor before = interpret(emb.host);
    const Diagram expected = plug_into(other, emb.context);
    bool intended = false;
    std::shuffle(ms.begin(), ms.end(), rng);
    double worst = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const Diagram after = apply(emb.host, ms[i]);
      if (!validate(after).empty()) {
        worst = 1.0;
        break;
      }
      if (i < 3) worst = std::max(worst, rel_deviation(before, interpret(after)));
      if (!intended && structurally_equal(after, expected)) intended = true;
      if (intended && i >= 2) break;
    }
    // Right-to-left matches pick canonical metavariables (e.g. r*s as r*1),
    // so only left-to-right rewrites must reproduce the sampled instance.
    if (!intended && lr) {
      record(rep, 1.0, tol, note + ": intended occurrence not among matches");
      continue;
    }
    record(rep, worst, tol, note);
  }
  return rep;
}

}  // namespace zw
