#include "dw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dw {

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  const double inter = std::max(0.0, iw) * std::max(0.0, ih);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double giou(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  const double inter = std::max(0.0, iw) * std::max(0.0, ih);
  const double uni = a.area() + b.area() - inter;
  const double hull = (std::max(a.x2, b.x2) - std::min(a.x1, b.x1)) *
                      (std::max(a.y2, b.y2) - std::min(a.y1, b.y1));
  const double overlap = uni > 0.0 ? inter / uni : 0.0;
  if (hull <= 0.0) return overlap;
  return overlap - (hull - uni) / hull;
}

Box decode_box(const AnchorPoint& anchor, const OffsetVector& offsets) {
  if (offsets.left < 0 || offsets.top < 0 || offsets.right < 0 ||
      offsets.bottom < 0) {
    throw std::invalid_argument("decode_box: negative offset");
  }
  return {(anchor.col - offsets.left) * anchor.stride,
          (anchor.row - offsets.top) * anchor.stride,
          (anchor.col + offsets.right) * anchor.stride,
          (anchor.row + offsets.bottom) * anchor.stride};
}

OffsetVector encode_offsets(const AnchorPoint& anchor, const Box& box) {
  const double x = anchor.x();
  const double y = anchor.y();
  if (x < box.x1 || x > box.x2 || y < box.y1 || y > box.y2) {
    throw std::invalid_argument("encode_offsets: anchor outside box");
  }
  return {(x - box.x1) / anchor.stride, (y - box.y1) / anchor.stride,
          (box.x2 - x) / anchor.stride, (box.y2 - y) / anchor.stride};
}

BoundaryPoints boundary_points(const AnchorPoint& anchor,
                               const OffsetVector& o,
                               const BoundaryDeltas& d) {
  const double j = anchor.row;
  const double i = anchor.col;
  BoundaryPoints p;
  p.left = {j + d.dy_l, i - o.left + d.dx_l};
  p.top = {j - o.top + d.dy_t, i + d.dx_t};
  p.right = {j + d.dy_r, i + o.right + d.dx_r};
  p.bottom = {j + o.bottom + d.dy_b, i + d.dx_b};
  return p;
}

double sample_map(const OffsetMap& map, const GridPoint& point, int channel) {
  if (channel < 0 || channel > 3) {
    throw std::invalid_argument("sample_map: channel out of range");
  }
  const double r = std::clamp(point.row, 0.0, double(map.height() - 1));
  const double c = std::clamp(point.col, 0.0, double(map.width() - 1));
  const int r0 = static_cast<int>(std::floor(r));
  const int c0 = static_cast<int>(std::floor(c));
  const int r1 = std::min(r0 + 1, map.height() - 1);
  const int c1 = std::min(c0 + 1, map.width() - 1);
  const double fr = r - r0;
  const double fc = c - c0;
  const double v00 = map.at(r0, c0, channel);
  const double v01 = map.at(r0, c1, channel);
  const double v10 = map.at(r1, c0, channel);
  const double v11 = map.at(r1, c1, channel);
  return (1 - fr) * ((1 - fc) * v00 + fc * v01) +
         fr * ((1 - fc) * v10 + fc * v11);
}

OffsetVector refine_offsets(const OffsetMap& offsets, const DeltaMap& deltas,
                            int row, int col, RefineSign sign) {
  if (offsets.height() != deltas.height() ||
      offsets.width() != deltas.width()) {
    throw std::invalid_argument("refine_offsets: shape mismatch");
  }
  const OffsetVector o = offsets.get(row, col);
  const BoundaryDeltas& d = deltas.at(row, col);
  const AnchorPoint cell{double(row), double(col), 1.0};
  const BoundaryPoints b = boundary_points(cell, o, d);
  // kDistance folds the in-axis displacement of the left/top points as a
  // distance from the anchor, which flips its sign relative to kAdditive.
  const double sl = sign == RefineSign::kAdditive ? d.dx_l : -d.dx_l;
  const double st = sign == RefineSign::kAdditive ? d.dy_t : -d.dy_t;
  OffsetVector out;
  out.left = o.left + sl + sample_map(offsets, b.left, 0);
  out.top = o.top + st + sample_map(offsets, b.top, 1);
  out.right = o.right + d.dx_r + sample_map(offsets, b.right, 2);
  out.bottom = o.bottom + d.dy_b + sample_map(offsets, b.bottom, 3);
  return out;
}

OffsetMap refine_map(const OffsetMap& offsets, const DeltaMap& deltas,
                     RefineSign sign) {
  if (offsets.height() != deltas.height() ||
      offsets.width() != deltas.width()) {
    throw std::invalid_argument("refine_map: shape mismatch");
  }
  OffsetMap out(offsets.height(), offsets.width());
  for (int j = 0; j < offsets.height(); ++j) {
    for (int i = 0; i < offsets.width(); ++i) {
      out.set(j, i, refine_offsets(offsets, deltas, j, i, sign));
    }
  }
  return out;
}

}  // namespace dw
