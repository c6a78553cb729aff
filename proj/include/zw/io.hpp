#pragma once

#include <string>

#include "zw/diagram.hpp"
#include "zw/normal_form.hpp"
#include "zw/tensor.hpp"

namespace zw {

/**
 * JSON documents for diagrams (.zw), tensors (.zwt) and coefficient tables
 * (.zwnf). Keys are written sorted, nodes in id order, wires sorted by their
 * endpoints, and complex numbers as [re, im] with shortest round-trip
 * decimals, so writing a loaded canonical document reproduces it byte for
 * byte.
 *
 * Diagram document:
 *   { "format": "zw-diagram", "version": 1, "flavor": "qudit", "d": 3,
 *     "inputs": 1, "outputs": 2,
 *     "nodes": [ {"id": 0, "kind": "Z", "param": [1, 0], "legs": 3}, ... ],
 *     "wires": [ ["in0", "n0.0"], ["n0.1", "out0"], ... ] }
 * Mixed documents replace "d" by "input_caps"/"output_caps" lists and give
 * every node its capacities ("cap", and "out_caps" for W). Qudit documents
 * must not carry capacity fields.
 */

std::string diagram_to_json(const Diagram& d);
/** Throws ParseError (with line or field) or ValidationError (listing the
 *  structural violations). */
Diagram diagram_from_json(const std::string& text);

std::string tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const std::string& text);

std::string table_to_json(const CoefficientTable& t, Flavor f);
CoefficientTable table_from_json(const std::string& text, Flavor* flavor = nullptr);

/** File helpers; throw ParseError when the file cannot be read or written. */
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Diagram load(const std::string& path);
void save(const Diagram& d, const std::string& path);

/**
 * Graphviz rendering: Z-spiders as white circles labelled by their
 * parameter, W-nodes as black triangles whose input edge is marked, kets as
 * labelled boxes, scalars as plain text, boundary ports ranked left and right.
 */
std::string render_dot(const Diagram& d);

/** Shortest decimal that reads back to the same double. */
std::string format_double(double x);

}  // namespace zw
