#ifndef DW_GEOMETRY_HPP
#define DW_GEOMETRY_HPP

#include <vector>

namespace dw {

/// Axis-aligned rectangle in continuous image coordinates (pixels).
/// Invariant for a valid box: x1 <= x2 and y1 <= y2. Degenerate
/// (zero-area) boxes are legal inputs everywhere; overlap metrics
/// treat them as empty.
struct Box {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }
  bool valid() const { return x1 <= x2 && y1 <= y2; }
};

/// A grid location in (row j, column i) order plus the pixel stride of
/// its level. The anchor's pixel position is (col * stride, row * stride).
struct AnchorPoint {
  double row = 0;
  double col = 0;
  double stride = 1;

  double x() const { return col * stride; }
  double y() const { return row * stride; }
};

/// Distances (in grid units) from an anchor point to the four sides of
/// an enclosing box. All components are >= 0 for a valid box.
struct OffsetVector {
  double left = 0, top = 0, right = 0, bottom = 0;
};

/// Per-cell outputs of the refinement predictor: a 2-d displacement for
/// each of the four boundary points, in grid units.
struct BoundaryDeltas {
  double dx_l = 0, dy_l = 0;
  double dx_t = 0, dy_t = 0;
  double dx_r = 0, dy_r = 0;
  double dx_b = 0, dy_b = 0;
};

/// Fractional grid coordinate, (row, col) ordered.
struct GridPoint {
  double row = 0;
  double col = 0;
};

/// The four boundary points of a coarse box, one per side.
struct BoundaryPoints {
  GridPoint left, top, right, bottom;
};

/// Dense H x W x 4 field of offset values (channels: left, top, right,
/// bottom), row-major storage.
class OffsetMap {
 public:
  OffsetMap() = default;
  OffsetMap(int height, int width)
      : height_(height), width_(width), data_(4u * height * width, 0.0) {}

  int height() const { return height_; }
  int width() const { return width_; }

  double at(int row, int col, int channel) const {
    return data_[index(row, col, channel)];
  }
  double& at(int row, int col, int channel) {
    return data_[index(row, col, channel)];
  }

  void set(int row, int col, const OffsetVector& o) {
    at(row, col, 0) = o.left;
    at(row, col, 1) = o.top;
    at(row, col, 2) = o.right;
    at(row, col, 3) = o.bottom;
  }
  OffsetVector get(int row, int col) const {
    return {at(row, col, 0), at(row, col, 1), at(row, col, 2),
            at(row, col, 3)};
  }

 private:
  std::size_t index(int row, int col, int channel) const {
    return ((static_cast<std::size_t>(row) * width_ + col) * 4u) + channel;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Dense H x W field of BoundaryDeltas, row-major.
class DeltaMap {
 public:
  DeltaMap() = default;
  DeltaMap(int height, int width)
      : height_(height), width_(width),
        cells_(static_cast<std::size_t>(height) * width) {}

  int height() const { return height_; }
  int width() const { return width_; }

  const BoundaryDeltas& at(int row, int col) const {
    return cells_[static_cast<std::size_t>(row) * width_ + col];
  }
  BoundaryDeltas& at(int row, int col) {
    return cells_[static_cast<std::size_t>(row) * width_ + col];
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<BoundaryDeltas> cells_;
};

/// Sign convention for folding the boundary-point displacement back into
/// the refined offset. kAdditive adds dx_l / dy_t on the left/top
/// components; kDistance subtracts them, so that the component equals the
/// distance from the anchor to the moved boundary point.
enum class RefineSign { kAdditive, kDistance };

/// Intersection over union. Returns 0 when the union is empty.
double iou(const Box& a, const Box& b);

/// Generalized IoU: iou minus (hull - union) / hull, in [-1, 1].
/// Returns plain iou when the enclosing hull is degenerate.
double giou(const Box& a, const Box& b);

/// Decode an ltrb offset vector at an anchor into a pixel-space box:
/// (col - l, row - t, col + r, row + b) scaled by the stride.
/// Throws std::invalid_argument on negative offsets.
Box decode_box(const AnchorPoint& anchor, const OffsetVector& offsets);

/// Inverse of decode_box. The anchor must lie inside the box (throws
/// std::invalid_argument otherwise).
OffsetVector encode_offsets(const AnchorPoint& anchor, const Box& box);

/// The four boundary points of the coarse box decoded from `o` at
/// `anchor`, displaced by `d`. Grid-space; points may fall outside the
/// map (the sampler clamps).
BoundaryPoints boundary_points(const AnchorPoint& anchor,
                               const OffsetVector& o,
                               const BoundaryDeltas& d);

/// Bilinear sample of one channel at a fractional grid point, with
/// border clamping. Throws std::invalid_argument on a bad channel.
double sample_map(const OffsetMap& map, const GridPoint& point, int channel);

/// Refined offsets at integer cell (row, col): each component is the
/// coarse offset plus its boundary displacement plus the offset field
/// sampled at the corresponding boundary point.
OffsetVector refine_offsets(const OffsetMap& offsets, const DeltaMap& deltas,
                            int row, int col,
                            RefineSign sign = RefineSign::kAdditive);

/// refine_offsets applied at every cell.
OffsetMap refine_map(const OffsetMap& offsets, const DeltaMap& deltas,
                     RefineSign sign = RefineSign::kAdditive);

}  // namespace dw

#endif  // DW_GEOMETRY_HPP
