// JSON documents for diagrams, tensors and coefficient tables.

#include "zw/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json_format.hpp"

namespace zw {
namespace {

using json = nlohmann::json;

constexpr int kVersion = 1;

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
  throw ZwError(ErrorKind::ParseError, field + ": " + what);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Report the line of the offending byte.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ZwError(ErrorKind::ParseError, "line " + std::to_string(line) + ": malformed JSON");
  }
}

/** Typed access with the JSON pointer of the field in every error. */
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Reader at(const char* key) const {
    if (!j_.is_object()) parse_fail(path_, "expected an object");
    if (!j_.contains(key)) parse_fail(path_ + "/" + key, "missing field");
    return Reader(j_.at(key), path_ + "/" + key);
  }
  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "/" + std::to_string(i)); }

  int integer() const {
    if (!j_.is_number_integer()) parse_fail(path_, "expected an integer");
    return j_.get<int>();
  }
  double number() const {
    if (!j_.is_number()) parse_fail(path_, "expected a number");
    return j_.get<double>();
  }
  std::string string() const {
    if (!j_.is_string()) parse_fail(path_, "expected a string");
    return j_.get<std::string>();
  }
  std::size_t array_size() const {
    if (!j_.is_array()) parse_fail(path_, "expected an array");
    return j_.size();
  }
  cplx complex() const {
    if (array_size() != 2) parse_fail(path_, "expected [re, im]");
    return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
  }
  std::vector<int> int_list() const {
    std::vector<int> v(array_size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).integer();
    return v;
  }

  /** Rejects keys outside `allowed`. */
  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, _] : j_.items())
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        parse_fail(path_ + "/" + key, "unexpected field");
  }

 private:
  const json& j_;
  std::string path_;
};

void expect_format(const Reader& r, const char* format) {
  if (r.at("format").string() != format)
    parse_fail("/format", std::string("expected \"") + format + "\"");
  if (r.at("version").integer() != kVersion) parse_fail("/version", "unsupported version");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string end_to_string(const End& e) {
  switch (e.type) {
    case End::In: return "in" + std::to_string(e.index);
    case End::Out: return "out" + std::to_string(e.index);
    case End::Port: break;
  }
  return "n" + std::to_string(e.node) + "." + std::to_string(e.index);
}

End end_from_string(const std::string& s, const std::string& field) {
  auto number = [&](std::string_view digits) {
    int v = 0;
    const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size() || v < 0)
      parse_fail(field, "bad endpoint \"" + s + "\"");
    return v;
  };
  const std::string_view sv(s);
  if (sv.rfind("in", 0) == 0) return End::in(number(sv.substr(2)));
  if (sv.rfind("out", 0) == 0) return End::out(number(sv.substr(3)));
  if (sv.rfind("n", 0) == 0) {
    const auto dot = sv.find('.');
    if (dot == std::string_view::npos) parse_fail(field, "bad endpoint \"" + s + "\"");
    return End::port(number(sv.substr(1, dot - 1)), number(sv.substr(dot + 1)));
  }
  parse_fail(field, "bad endpoint \"" + s + "\"");
}

std::string dump(const json& j) { return format_json(j); }

Flavor flavor_from(const Reader& r) {
  const std::string name = r.at("flavor").string();
  if (name == "qudit") {
    const int d = r.at("d").integer();
    if (d < 2) parse_fail(r.path() + "/d", "qudit dimension must be >= 2");
    return Flavor::qudit(d);
  }
  if (name == "mixed") {
    if (r.has("d")) parse_fail(r.path() + "/d", "mixed documents carry no dimension");
    return Flavor::mixed_dims();
  }
  parse_fail(r.path() + "/flavor", "expected \"qudit\" or \"mixed\"");
}

void flavor_to(json& j, Flavor f) {
  j["flavor"] = f.mixed ? "mixed" : "qudit";
  if (!f.mixed) j["d"] = f.d;
}

void dump_to(const json& j, int indent, std::string& out) {
  const std::string pad(indent, ' '), inner(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += inner + json(key).dump() + ": ";
      dump_to(value, indent + 2, out);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
    if (flat) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += (i ? ",\n" : "") + inner;
      dump_to(j[i], indent + 2, out);
    }
    out += "\n" + pad + "]";
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string format_json(const nlohmann::json& j) {
  std::string out;
  dump_to(j, 0, out);
  return out + "\n";
}

std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, p) : std::to_string(x);
}

// ---- diagrams -----------------------------------------------------------------

std::string diagram_to_json(const Diagram& d) {
  json j;
  j["format"] = "zw-diagram";
  j["version"] = kVersion;
  flavor_to(j, d.flavor);
  j["inputs"] = d.num_inputs();
  j["outputs"] = d.num_outputs();
  if (d.flavor.mixed) {
    j["input_caps"] = d.in_caps;
    j["output_caps"] = d.out_caps;
  }
  json nodes = json::array();
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const Node& n = d.nodes[i];
    json o;
    o["id"] = i;
    o["kind"] = kind_name(n.kind);
    switch (n.kind) {
      case Kind::Z:
        o["param"] = complex_json(n.param);
        o["legs"] = n.legs;
        break;
      case Kind::W:
        o["outputs"] = n.out_caps.size();
        if (d.flavor.mixed) o["out_caps"] = n.out_caps;
        break;
      case Kind::KetOne:
        break;
      case Kind::Scalar:
        o["param"] = complex_json(n.param);
        break;
    }
    if (d.flavor.mixed && n.kind != Kind::Scalar) o["cap"] = n.cap;
    nodes.push_back(o);
  }
  j["nodes"] = nodes;
  // Inputs first, then node ports, then outputs.
  auto key = [](const End& e) {
    const int rank = e.type == End::In ? 0 : e.type == End::Port ? 1 : 2;
    return std::tuple{rank, e.node, e.index};
  };
  auto less = [&](const End& a, const End& b) { return key(a) < key(b); };
  std::vector<std::pair<End, End>> ws;
  for (const Wire& w : d.wires) ws.push_back(less(w.b, w.a) ? std::pair{w.b, w.a} : std::pair{w.a, w.b});
  std::sort(ws.begin(), ws.end(), [&](const auto& x, const auto& y) {
    return std::pair{key(x.first), key(x.second)} < std::pair{key(y.first), key(y.second)};
  });
  json wires = json::array();
  for (const auto& [a, b] : ws) wires.push_back(json::array({end_to_string(a), end_to_string(b)}));
  j["wires"] = wires;
  return dump(j);
}

Diagram diagram_from_json(const std::string& text) {
  const json doc = parse_text(text);
  const Reader r(doc, "");
  expect_format(r, "zw-diagram");
  const Flavor f = flavor_from(r);
  if (f.mixed) {
    r.only({"format", "version", "flavor", "inputs", "outputs", "input_caps", "output_caps", "nodes",
            "wires"});
  } else {
    r.only({"format", "version", "flavor", "d", "inputs", "outputs", "nodes", "wires"});
  }

  Diagram d = empty_diagram(f);
  const int inputs = r.at("inputs").integer(), outputs = r.at("outputs").integer();
  if (inputs < 0 || outputs < 0) parse_fail("/inputs", "boundary sizes must be >= 0");
  if (f.mixed) {
    d.in_caps = r.at("input_caps").int_list();
    d.out_caps = r.at("output_caps").int_list();
    if (static_cast<int>(d.in_caps.size()) != inputs) parse_fail("/input_caps", "length differs from inputs");
    if (static_cast<int>(d.out_caps.size()) != outputs) parse_fail("/output_caps", "length differs from outputs");
  } else {
    d.in_caps.assign(inputs, f.uniform_cap());
    d.out_caps.assign(outputs, f.uniform_cap());
  }

  const Reader nodes = r.at("nodes");
  for (std::size_t i = 0; i < nodes.array_size(); ++i) {
    const Reader o = nodes.at(i);
    if (o.at("id").integer() != static_cast<int>(i)) parse_fail(o.path() + "/id", "ids must be 0, 1, 2, ... in order");
    const std::string kind = o.at("kind").string();
    Node n;
    auto cap = [&] { return f.mixed ? o.at("cap").integer() : f.uniform_cap(); };
    if (kind == "Z") {
      o.only(f.mixed ? std::initializer_list<const char*>{"id", "kind", "param", "legs", "cap"}
                     : std::initializer_list<const char*>{"id", "kind", "param", "legs"});
      n = Node::z(o.at("param").complex(), o.at("legs").integer(), cap());
      if (n.legs < 0) parse_fail(o.path() + "/legs", "must be >= 0");
    } else if (kind == "W") {
      o.only(f.mixed ? std::initializer_list<const char*>{"id", "kind", "outputs", "cap", "out_caps"}
                     : std::initializer_list<const char*>{"id", "kind", "outputs"});
      const int k = o.at("outputs").integer();
      if (k < 0) parse_fail(o.path() + "/outputs", "must be >= 0");
      std::vector<int> outs = f.mixed ? o.at("out_caps").int_list() : std::vector<int>(k, f.uniform_cap());
      if (static_cast<int>(outs.size()) != k) parse_fail(o.path() + "/out_caps", "length differs from outputs");
      n = Node::w(cap(), std::move(outs));
    } else if (kind == "KetOne") {
      o.only(f.mixed ? std::initializer_list<const char*>{"id", "kind", "cap"}
                     : std::initializer_list<const char*>{"id", "kind"});
      n = Node::ket_one(cap());
    } else if (kind == "Scalar") {
      o.only({"id", "kind", "param"});
      n = Node::scalar(o.at("param").complex());
    } else {
      parse_fail(o.path() + "/kind", "unknown kind \"" + kind + "\"");
    }
    d.nodes.push_back(n);
  }

  const Reader wires = r.at("wires");
  for (std::size_t i = 0; i < wires.array_size(); ++i) {
    const Reader w = wires.at(i);
    if (w.array_size() != 2) parse_fail(w.path(), "expected two endpoints");
    const End a = end_from_string(w.at(std::size_t{0}).string(), w.path() + "/0");
    const End b = end_from_string(w.at(std::size_t{1}).string(), w.path() + "/1");
    d.wires.push_back({a, b});
  }

  const std::vector<Violation> v = validate(d);
  if (!v.empty()) {
    std::string msg = "invalid diagram:";
    for (const Violation& x : v) msg += std::string(" [") + violation_name(x.kind) + "] " + x.detail + ";";
    throw ZwError(ErrorKind::ValidationError, msg);
  }
  return d;
}

// ---- tensors and tables -------------------------------------------------------

std::string tensor_to_json(const Tensor& t) {
  json j;
  j["format"] = "zw-tensor";
  j["version"] = kVersion;
  j["shape"] = t.shape;
  json data = json::array();
  for (const cplx& z : t.data) data.push_back(complex_json(z));
  j["data"] = data;
  return dump(j);
}

Tensor tensor_from_json(const std::string& text) {
  const json doc = parse_text(text);
  const Reader r(doc, "");
  expect_format(r, "zw-tensor");
  r.only({"format", "version", "shape", "data"});
  const std::vector<int> shape = r.at("shape").int_list();
  for (int s : shape)
    if (s < 1) parse_fail("/shape", "axis sizes must be >= 1");
  Tensor t(shape);
  const Reader data = r.at("data");
  if (data.array_size() != t.size()) parse_fail("/data", "length differs from the shape");
  for (std::size_t i = 0; i < t.size(); ++i) t.data[i] = data.at(i).complex();
  return t;
}

std::string table_to_json(const CoefficientTable& t, Flavor f) {
  json j;
  j["format"] = "zw-table";
  j["version"] = kVersion;
  flavor_to(j, f);
  j["caps"] = t.caps;
  json entries = json::array();
  for (const auto& [x, c] : t.entries) {
    json e;
    e["x"] = x;
    e["r"] = complex_json(c);
    entries.push_back(e);
  }
  j["entries"] = entries;
  return dump(j);
}

CoefficientTable table_from_json(const std::string& text, Flavor* flavor) {
  const json doc = parse_text(text);
  const Reader r(doc, "");
  expect_format(r, "zw-table");
  const Flavor f = flavor_from(r);
  r.only({"format", "version", "flavor", "d", "caps", "entries"});
  CoefficientTable t;
  t.caps = r.at("caps").int_list();
  const Reader entries = r.at("entries");
  for (std::size_t i = 0; i < entries.array_size(); ++i) {
    const Reader e = entries.at(i);
    e.only({"x", "r"});
    std::vector<int> x = e.at("x").int_list();
    if (x.size() != t.caps.size()) parse_fail(e.path() + "/x", "length differs from caps");
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] < 0 || x[k] > t.caps[k]) parse_fail(e.path() + "/x", "exponent outside its capacity");
    if (!t.entries.emplace(std::move(x), e.at("r").complex()).second)
      parse_fail(e.path() + "/x", "duplicate exponent vector");
  }
  if (flavor) *flavor = f;
  return t;
}

// ---- files ----------------------------------------------------------------------

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ZwError(ErrorKind::ParseError, path + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ZwError(ErrorKind::ParseError, path + ": cannot write");
}

Diagram load(const std::string& path) {
  try {
    return diagram_from_json(read_text(path));
  } catch (const ZwError& e) {
    if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::ValidationError)
      throw ZwError(e.kind(), path + ": " + e.what());
    throw;
  }
}

void save(const Diagram& d, const std::string& path) { write_text(path, diagram_to_json(d)); }

}  // namespace zw
