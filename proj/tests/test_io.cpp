#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>

#include "zw/io.hpp"
#include "zw/random.hpp"
#include "zw/semantics.hpp"

using namespace zw;
namespace fs = std::filesystem;

namespace {

std::vector<fs::path> corpus() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(ZW_CORPUS_DIR))
    if (e.path().extension() == ".zw") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ZwError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidDiagram;
}

const char* kQuditHeader =
    R"({"format": "zw-diagram", "version": 1, "flavor": "qudit", "d": 3, "inputs": 1, "outputs": 1,)";

}  // namespace

// ---- diagram documents --------------------------------------------------------

TEST(DiagramDocument, CorpusIsByteStable) {
  const auto files = corpus();
  ASSERT_GE(files.size(), 60u);
  for (const fs::path& p : files) {
    const std::string text = read_text(p.string());
    const Diagram d = diagram_from_json(text);
    EXPECT_EQ(diagram_to_json(d), text) << p.filename();
    EXPECT_TRUE(validate(d).empty()) << p.filename();
  }
}

TEST(DiagramDocument, RandomDiagramsRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    RandomSpec spec;
    spec.nodes = 1 + i % 5;
    spec.inputs = i % 3;
    spec.outputs = 1 + i % 2;
    const Flavor f = i % 2 ? Flavor::mixed_dims() : Flavor::qudit(2 + i % 4);
    const Diagram d = random_diagram(f, spec, rng);
    const std::string text = diagram_to_json(d);
    const Diagram back = diagram_from_json(text);
    EXPECT_EQ(diagram_to_json(back), text);
    EXPECT_TRUE(structurally_equal(d, back));
    // Parameters survive bit for bit.
    for (std::size_t v = 0; v < d.nodes.size(); ++v) EXPECT_EQ(d.nodes[v].param, back.nodes[v].param);
  }
}

TEST(DiagramDocument, WireOrderIsNormalized) {
  const std::string text = std::string(kQuditHeader) +
                           R"("nodes": [{"id": 0, "kind": "Z", "param": [0.5, -0.25], "legs": 2}],
                              "wires": [["out0", "n0.1"], ["n0.0", "in0"]]})";
  const std::string canon = diagram_to_json(diagram_from_json(text));
  EXPECT_NE(canon, text);
  EXPECT_EQ(diagram_to_json(diagram_from_json(canon)), canon);
  EXPECT_NE(canon.find(R"(["in0", "n0.0"])"), std::string::npos);
  EXPECT_NE(canon.find(R"(["n0.1", "out0"])"), std::string::npos);
}

TEST(DiagramDocument, StrayCapacityInQuditIsParseError) {
  const std::string text = std::string(kQuditHeader) +
                           R"("nodes": [{"id": 0, "kind": "Z", "param": [1, 0], "legs": 2, "cap": 2}],
                              "wires": [["in0", "n0.0"], ["n0.1", "out0"]]})";
  try {
    diagram_from_json(text);
    FAIL();
  } catch (const ZwError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("/nodes/0/cap"), std::string::npos) << e.what();
  }
}

TEST(DiagramDocument, WOutputAboveInputIsValidationError) {
  const std::string text = R"({"format": "zw-diagram", "version": 1, "flavor": "mixed",
    "inputs": 1, "outputs": 1, "input_caps": [1], "output_caps": [3],
    "nodes": [{"id": 0, "kind": "W", "cap": 1, "outputs": 1, "out_caps": [3]}],
    "wires": [["in0", "n0.0"], ["n0.1", "out0"]]})";
  EXPECT_EQ(kind_of([&] { diagram_from_json(text); }), ErrorKind::ValidationError);
}

TEST(DiagramDocument, ParseErrors) {
  // Malformed JSON reports the line.
  try {
    diagram_from_json("{\n\"format\": \"zw-diagram\",\n\"version\": 1,,\n}");
    FAIL();
  } catch (const ZwError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  const std::string body = R"("nodes": [], "wires": [["in0", "out0"]]})";
  EXPECT_EQ(kind_of([&] { diagram_from_json(R"({"format": "zw-tensor", "version": 1})"); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] {
              diagram_from_json(R"({"format": "zw-diagram", "version": 2, "flavor": "qudit", "d": 3,
                                   "inputs": 1, "outputs": 1, )" + body);
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] {
              diagram_from_json(std::string(kQuditHeader) + R"("nodes": [], "wires": [["in0", "ou0"]]})");
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] {
              diagram_from_json(std::string(kQuditHeader) +
                                R"("nodes": [{"id": 1, "kind": "KetOne"}], "wires": [["in0", "out0"]]})");
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] {
              diagram_from_json(std::string(kQuditHeader) +
                                R"("nodes": [{"id": 0, "kind": "X"}], "wires": [["in0", "out0"]]})");
            }),
            ErrorKind::ParseError);
  // The same body under a valid header loads.
  EXPECT_EQ(diagram_from_json(std::string(kQuditHeader) + body).wires.size(), 1u);
}

TEST(DiagramDocument, DanglingPortIsValidationError) {
  const std::string text = std::string(kQuditHeader) +
                           R"("nodes": [{"id": 0, "kind": "Z", "param": [1, 0], "legs": 3}],
                              "wires": [["in0", "n0.0"], ["n0.1", "out0"]]})";
  try {
    diagram_from_json(text);
    FAIL();
  } catch (const ZwError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
    EXPECT_NE(std::string(e.what()).find("PortUncovered"), std::string::npos) << e.what();
  }
}

TEST(DiagramDocument, FileHelpers) {
  const fs::path dir = fs::temp_directory_path() / "zw_io_test";
  fs::create_directories(dir);
  const Diagram d = z_spider(Flavor::qudit(3), cplx(0.1, 0.2), 1, 2);
  save(d, (dir / "z.zw").string());
  EXPECT_TRUE(structurally_equal(load((dir / "z.zw").string()), d));
  EXPECT_EQ(kind_of([&] { load((dir / "missing.zw").string()); }), ErrorKind::ParseError);
}

// ---- tensor and table documents -----------------------------------------------

TEST(TensorDocument, BitExactReload) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(-3, 3);
  Tensor t({2, 3, 2});
  for (cplx& z : t.data) z = {u(rng), u(rng) / 7.0};
  const std::string text = tensor_to_json(t);
  const Tensor back = tensor_from_json(text);
  EXPECT_EQ(back.shape, t.shape);
  EXPECT_EQ(back.data, t.data);
  EXPECT_EQ(tensor_to_json(back), text);
  EXPECT_EQ(kind_of([&] { tensor_from_json(R"({"format": "zw-tensor", "version": 1, "shape": [2], "data": []})"); }),
            ErrorKind::ParseError);
}

TEST(TableDocument, BitExactReload) {
  CoefficientTable t;
  t.caps = {2, 1};
  t.entries[{0, 0}] = cplx(1.0 / 3.0, 0);
  t.entries[{2, 1}] = cplx(-0.1, 1e-17);
  Flavor f;
  const std::string text = table_to_json(t, Flavor::qudit(3));
  const CoefficientTable back = table_from_json(text, &f);
  EXPECT_EQ(back.caps, t.caps);
  EXPECT_EQ(back.entries, t.entries);
  EXPECT_EQ(f, Flavor::qudit(3));
  EXPECT_EQ(table_to_json(back, f), text);
  const std::string bad = R"({"format": "zw-table", "version": 1, "flavor": "mixed", "caps": [1],
                              "entries": [{"x": [2], "r": [1, 0]}]})";
  EXPECT_EQ(kind_of([&] { table_from_json(bad); }), ErrorKind::ParseError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-12), "-2.5e-12");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

// ---- rendering ----------------------------------------------------------------

TEST(RenderDot, GeneratorShapes) {
  const Flavor f = Flavor::qudit(3);
  const Diagram d = compose_seq(compose_seq(ket_one(f), w_node(f, 2)),
                                compose_par(z_spider(f, cplx(0, 1), 1, 1), z_spider(f, 2.0, 1, 1)));
  const std::string dot = render_dot(compose_par(d, global_scalar(f, 0.5)));
  EXPECT_EQ(dot.rfind("graph zw {", 0), 0u);
  EXPECT_NE(dot.find("shape=circle, style=filled, fillcolor=white, label=\"i\""), std::string::npos);
  EXPECT_NE(dot.find("label=\"2\""), std::string::npos);
  EXPECT_NE(dot.find("shape=triangle"), std::string::npos);
  EXPECT_NE(dot.find("fillcolor=black"), std::string::npos);
  EXPECT_NE(dot.find("=\"in\""), std::string::npos);
  EXPECT_NE(dot.find("shape=box, label=\"|1>\""), std::string::npos);
  EXPECT_NE(dot.find("label=\"0.5\""), std::string::npos);
  EXPECT_NE(dot.find("rank=sink; out0; out1;"), std::string::npos);
}

TEST(RenderDot, ParallelWiresAreSeparateEdges) {
  const Flavor f = Flavor::qudit(3);
  Diagram d = empty_diagram(f);
  const int a = d.add_node(Node::z(1.0, 2, 2)), b = d.add_node(Node::z(1.0, 2, 2));
  d.connect(End::port(a, 0), End::port(b, 0));
  d.connect(End::port(a, 1), End::port(b, 1));
  const std::string dot = render_dot(d);
  std::size_t count = 0, pos = 0;
  while ((pos = dot.find("n0 -- n1", pos)) != std::string::npos) ++count, ++pos;
  EXPECT_EQ(count, 2u);
}

TEST(RenderDot, MixedEdgesCarryCapacities) {
  const Diagram d = w_node(Flavor::mixed_dims(), 2, 3, {1, 2});
  const std::string dot = render_dot(d);
  EXPECT_NE(dot.find("label=\"3\""), std::string::npos);
  EXPECT_NE(dot.find("label=\"2\""), std::string::npos);
}

// ---- asymmetric semantics over the corpus -------------------------------------

TEST(AsymmetricSemantics, AgreesOnCorpusClosures) {
  int checked = 0;
  for (const fs::path& p : corpus()) {
    const Diagram d = load(p.string());
    if (d.flavor.mixed || d.flavor.d > 3 || d.nodes.size() > 10) continue;
    const AsymmetricReport r = interpret_asymmetric_consistency(d, 1e-10);
    EXPECT_TRUE(r.ok) << p.filename() << " " << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_LE(r.max_closed_deviation, 1e-10) << p.filename();
    ++checked;
  }
  EXPECT_GE(checked, 40);
}
