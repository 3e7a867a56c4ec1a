#ifndef DW_ASSIGNMENT_HPP
#define DW_ASSIGNMENT_HPP

#include <span>
#include <string>
#include <vector>

#include "dw/geometry.hpp"
#include "dw/weighting.hpp"

namespace dw {

/// How the candidate bag of an object is selected, always in terms of the
/// stride-normalized distance r from anchor point to object center.
struct CenterPriorStrategy {
  enum class Kind { kThreshold, kTopK, kSoftCenter };

  Kind kind = Kind::kSoftCenter;
  double r_max = 2.5;  // kThreshold: keep anchors with r < r_max
  int top_k = 9;       // kTopK: k nearest anchors per stride level

  /// Parses "threshold:R", "topk:K" or "soft".
  static CenterPriorStrategy parse(const std::string& text);
  std::string name() const;
};

/// Candidate positives of one ground-truth object.
struct CandidateBag {
  int gt_index = -1;
  std::vector<int> anchors;       // member anchor indices, ascending
  std::vector<double> center_r;   // stride-normalized distance per member
};

/// One bag member's final weights plus the quantities they came from.
struct AnchorWeight {
  int anchor = -1;
  int gt = -1;
  double s = 0;
  double iou = 0;
  double t = 0;
  WeightTriple w;
};

/// Output of the per-anchor weighting pipeline. Bags are disjoint: every
/// anchor is either exactly one bag's member or in the outside set.
struct AssignmentResult {
  std::vector<CandidateBag> bags;      // one per GT, possibly empty
  std::vector<AnchorWeight> weights;   // ascending anchor index
  std::vector<int> outside;            // pure negatives, ascending

  int inside_count() const { return static_cast<int>(weights.size()); }
  int outside_count() const { return static_cast<int>(outside.size()); }
};

/// Per-anchor predictions aligned with the anchor list.
struct Predictions {
  std::vector<double> scores;
  std::vector<Box> boxes;
};

/// Euclidean distance from the anchor point to the object center,
/// normalized by the anchor's stride.
double center_distance(const AnchorPoint& anchor, const Box& gt);

/// Selects the candidate bag of one object under the given strategy.
/// Threshold keeps r < r_max; TopK keeps the k nearest per stride level
/// (ties broken by anchor index); SoftCenter keeps anchors whose point
/// lies inside the object box.
CandidateBag build_bag(std::span<const AnchorPoint> anchors, int gt_index,
                       const Box& gt, const CenterPriorStrategy& strategy);

/// The full weighting pipeline: bags per object, conflict resolution for
/// anchors claimed by several objects (highest consistency t wins, ties
/// to the smaller object then the smaller index), scheme weights per
/// member with the soft-center multiplier when configured, per-bag
/// normalization of the pos weights, and the outside set.
/// Throws std::invalid_argument when predictions are not aligned with
/// the anchor list.
AssignmentResult assign(std::span<const AnchorPoint> anchors,
                        std::span<const Box> gt_boxes,
                        const Predictions& preds, const SchemeConfig& cfg,
                        const CenterPriorStrategy& prior);

}  // namespace dw

#endif  // DW_ASSIGNMENT_HPP
