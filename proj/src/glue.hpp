#pragma once

// Internal helper shared by composition and rewriting: gluing wire segments
// through junctions.

#include <vector>

#include "zw/diagram.hpp"

namespace zw::detail {

/** Segment endpoint during gluing: a real endpoint or a junction id. */
struct GEnd {
  bool junction = false;
  End end;
  int j = -1;
};

struct Segment {
  GEnd a, b;
};

void fuse_segments(Diagram& out, const std::vector<Segment>& segs, const std::vector<int>& jcap);

}  // namespace zw::detail
