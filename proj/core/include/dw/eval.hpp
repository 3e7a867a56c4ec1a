#ifndef DW_EVAL_HPP
#define DW_EVAL_HPP

#include <array>
#include <span>
#include <vector>

#include "dw/geometry.hpp"

namespace dw {

struct Detection {
  Box box;
  double score = 0;  // ranking score in [0, 1]
  int category = 0;
};

struct GroundTruth {
  Box box;
  int category = 0;
};

/// Per-detection TP/FP labels at one IoU threshold, in rank order.
struct MatchResult {
  double threshold = 0.5;
  std::vector<bool> tp;
  std::vector<int> matched_gt;  // -1 when FP
};

/// AP interpolation convention: the COCO 101-point recall grid, or the
/// exact area under the monotone precision envelope.
enum class ApInterp { kCoco101, kExactEnvelope };

/// AP at the ten COCO IoU thresholds plus their mean. `defined` is false
/// only when there were no ground truths and no detections.
struct ApReport {
  std::array<double, 10> thresholds{};
  std::array<double, 10> ap{};
  double mean_ap = 0;
  double ap50 = 0;
  double ap75 = 0;
  int num_gts = 0;
  int num_dets = 0;
  bool defined = true;
};

/// Drops detections scoring below `score_thresh`, then greedy per-category
/// NMS: descending score, suppress anything overlapping a kept box with
/// IoU > nms_iou. Ties in score keep insertion order. Returns survivors
/// in rank order.
std::vector<Detection> filter_and_nms(std::vector<Detection> dets,
                                      double score_thresh, double nms_iou);

/// Greedy matching in rank order: each detection takes its highest-IoU
/// unmatched ground truth of the same category (ties to the lower GT
/// index) and is a TP iff that IoU exceeds `theta`. Detections must
/// already be sorted by descending ranking score.
MatchResult match_detections(std::span<const Detection> ranked,
                             std::span<const GroundTruth> gts, double theta);

/// Area under the monotone-envelope precision-recall curve. Returns 0
/// when num_gts is 0, whether or not detections exist.
double average_precision(const MatchResult& matches, int num_gts,
                         ApInterp interp = ApInterp::kCoco101);

/// Sorts and caps the detections, then evaluates average_precision at
/// IoU thresholds 0.50, 0.55, ..., 0.95.
ApReport coco_ap(std::vector<Detection> dets,
                 std::span<const GroundTruth> gts,
                 ApInterp interp = ApInterp::kCoco101, int max_dets = 100);

}  // namespace dw

#endif  // DW_EVAL_HPP
