#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zw/error.hpp"

namespace zw {

/** Either qudit(d), where every wire has capacity d-1, or mixed capacities. */
struct Flavor {
  bool mixed = false;
  int d = 2;

  static Flavor qudit(int d);
  static Flavor mixed_dims();

  /** Capacity forced on every wire in qudit flavor. */
  int uniform_cap() const { return d - 1; }
  std::string name() const;

  bool operator==(const Flavor& o) const {
    return mixed == o.mixed && (mixed || d == o.d);
  }
};

enum class Kind { Z, W, KetOne, Scalar };

const char* kind_name(Kind k);

/**
 * A generator. Ports are numbered per kind:
 *   Z      : legs 0..legs-1 (unordered, all of capacity `cap`)
 *   W      : port 0 is the distinguished input (capacity `cap`),
 *            ports 1..n are the outputs with capacities `out_caps`
 *   KetOne : port 0 (capacity `cap`)
 *   Scalar : no ports, value in `param`
 */
struct Node {
  Kind kind = Kind::Z;
  cplx param{1.0, 0.0};
  int cap = 1;
  int legs = 0;
  std::vector<int> out_caps;

  int num_ports() const;
  int port_cap(int port) const;

  static Node z(cplx r, int legs, int cap);
  static Node w(int in_cap, std::vector<int> out_caps);
  static Node ket_one(int cap);
  static Node scalar(cplx r);

  bool operator==(const Node& o) const;
};

/** A wire endpoint: a node port, or a position on the input/output boundary. */
struct End {
  enum Type : std::uint8_t { Port, In, Out };
  Type type = Port;
  int node = -1;
  int index = 0;

  static End port(int node, int p) { return {Port, node, p}; }
  static End in(int i) { return {In, -1, i}; }
  static End out(int j) { return {Out, -1, j}; }

  bool is_port() const { return type == Port; }
  bool operator==(const End& o) const {
    return type == o.type && node == o.node && index == o.index;
  }
  bool operator<(const End& o) const;
};

struct Wire {
  End a, b;
};

/**
 * Port graph modulo the compact structure: swaps, identities, cups and caps
 * are plain wires, so snake identities hold by construction. Every port and
 * every boundary position is covered by exactly one wire.
 */
struct Diagram {
  Flavor flavor;
  std::vector<Node> nodes;
  std::vector<Wire> wires;
  std::vector<int> in_caps;
  std::vector<int> out_caps;

  int num_inputs() const { return static_cast<int>(in_caps.size()); }
  int num_outputs() const { return static_cast<int>(out_caps.size()); }
  int cap_of(const End& e) const;

  int add_node(const Node& n);
  void connect(const End& a, const End& b);
};

/** For each endpoint, the index of the wire covering it and the far end. */
class Incidence {
 public:
  explicit Incidence(const Diagram& d);

  int wire_at(const End& e) const;
  End other(const End& e) const;

 private:
  std::vector<std::vector<int>> port_wire_;
  std::vector<int> in_wire_, out_wire_;
  const Diagram* d_;
};

// ---- constructors ----------------------------------------------------------

Diagram empty_diagram(Flavor f);
/** Identity wire of the given capacity (uniform capacity in qudit flavor). */
Diagram identity_wire(Flavor f, int cap = -1);
Diagram identity(Flavor f, const std::vector<int>& caps);
/** Single-node diagram; Z exposes n inputs then m outputs, W exposes its
 *  input then its outputs (1 -> k), KetOne one output, Scalar nothing. */
Diagram make_generator(const Node& kind, Flavor f, int n = 0, int m = 0);
Diagram z_spider(Flavor f, cplx r, int n, int m, int cap = -1);
Diagram w_node(Flavor f, int n_out, int in_cap = -1, std::vector<int> out_caps = {});
Diagram ket_one(Flavor f, int cap = -1);
Diagram global_scalar(Flavor f, cplx r);
/** Cup (0 -> 2) and cap-as-effect (2 -> 0). */
Diagram cup_state(Flavor f, int cap = -1);
Diagram cap_effect(Flavor f, int cap = -1);

Diagram compose_seq(const Diagram& first, const Diagram& second);
Diagram compose_par(const Diagram& a, const Diagram& b);
Diagram dagger(const Diagram& d);
/** Permute output positions: result output j is old output perm[j]. */
Diagram permute_outputs(const Diagram& d, const std::vector<int>& perm);

/** ket_k as a binary W-tree of k KetOne leaves: sqrt(k!)|k> on capacity a. */
Diagram derived_ket(int k, int cap, Flavor f);
/** Inputs become outputs, prepended in reverse order. */
Diagram bend_to_state(const Diagram& d);
/** (1/a!) * Z_{n+m+1}(r) whose extra leg is fed by the ket_a/erasure
 *  gadget; only the components k <= a of the spider survive. */
Diagram restricted_z_spider(int a, cplx r, int n, int m, int d);

// ---- validation and structural equality ------------------------------------

enum class ViolationKind {
  PortUncovered,
  PortOvercovered,
  BoundaryUncovered,
  BoundaryOvercovered,
  CapacityMismatch,
  FlavorViolation,
  CapacityViolation,
  BadEndpoint,
};

const char* violation_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::vector<Violation> validate(const Diagram& d);
/** Throws ZwError(InvalidDiagram) on the first violation. */
void require_valid(const Diagram& d);

/** Certificate invariant under renumbering of nodes, Z legs and W outputs. */
std::string canonical_form(const Diagram& d);
bool structurally_equal(const Diagram& a, const Diagram& b);
/** Cheap exact fingerprint of the representation (not of the iso class). */
std::uint64_t fingerprint(const Diagram& d);

}  // namespace zw
