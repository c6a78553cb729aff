// Graphviz export of diagrams.

#include <sstream>

#include "zw/io.hpp"

namespace zw {
namespace {

std::string complex_label(cplx z) {
  const double re = z.real(), im = z.imag();
  if (im == 0) return format_double(re);
  std::string imag = im == 1 ? "i" : im == -1 ? "-i" : format_double(im) + "i";
  if (re == 0) return imag;
  return format_double(re) + (im > 0 ? "+" : "") + imag;
}

std::string id_of(const End& e) {
  switch (e.type) {
    case End::In: return "in" + std::to_string(e.index);
    case End::Out: return "out" + std::to_string(e.index);
    case End::Port: break;
  }
  return "n" + std::to_string(e.node);
}

}  // namespace

std::string render_dot(const Diagram& d) {
  std::ostringstream os;
  os << "graph zw {\n"
     << "  rankdir=LR;\n"
     << "  node [fontname=\"Helvetica\"];\n";
  os << "  { rank=source;";
  for (int i = 0; i < d.num_inputs(); ++i) os << " in" << i << ";";
  os << " }\n  { rank=sink;";
  for (int j = 0; j < d.num_outputs(); ++j) os << " out" << j << ";";
  os << " }\n";
  for (int i = 0; i < d.num_inputs(); ++i)
    os << "  in" << i << " [shape=plaintext, label=\"in " << i << "\"];\n";
  for (int j = 0; j < d.num_outputs(); ++j)
    os << "  out" << j << " [shape=plaintext, label=\"out " << j << "\"];\n";
  for (std::size_t v = 0; v < d.nodes.size(); ++v) {
    const Node& n = d.nodes[v];
    os << "  n" << v << " [";
    switch (n.kind) {
      case Kind::Z:
        os << "shape=circle, style=filled, fillcolor=white, label=\"" << complex_label(n.param) << "\"";
        break;
      case Kind::W:
        os << "shape=triangle, orientation=90, style=filled, fillcolor=black, label=\"\", width=0.3";
        break;
      case Kind::KetOne:
        os << "shape=box, label=\"|1>\"";
        break;
      case Kind::Scalar:
        os << "shape=plaintext, label=\"" << complex_label(n.param) << "\"";
        break;
    }
    os << "];\n";
  }
  for (const Wire& w : d.wires) {
    os << "  " << id_of(w.a) << " -- " << id_of(w.b);
    std::vector<std::string> attrs;
    bool bold = false;
    // The distinguished W input is drawn bold and tagged at the W end.
    auto mark = [&](const End& e, const char* side) {
      if (e.is_port() && d.nodes[e.node].kind == Kind::W && e.index == 0) {
        attrs.push_back(std::string(side) + "=\"in\"");
        bold = true;
      }
    };
    mark(w.a, "taillabel");
    mark(w.b, "headlabel");
    if (bold) attrs.push_back("penwidth=2");
    if (d.flavor.mixed) attrs.push_back("label=\"" + std::to_string(d.cap_of(w.a)) + "\"");
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? ", " : "") << attrs[i];
      os << "]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace zw
