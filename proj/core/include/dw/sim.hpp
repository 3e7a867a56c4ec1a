#ifndef DW_SIM_HPP
#define DW_SIM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "dw/assignment.hpp"
#include "dw/eval.hpp"
#include "dw/geometry.hpp"
#include "dw/loss.hpp"
#include "dw/weighting.hpp"

namespace dw {

/// Bounds for the synthetic scene generator. The image must be divisible
/// by the stride so the anchor grid covers it.
struct SceneConfig {
  int image_h = 64;
  int image_w = 64;
  int stride = 8;
  int min_objects = 1;
  int max_objects = 3;
  double min_size = 12.0;
  double max_size = 40.0;
};

/// One synthetic image: ground-truth objects plus a single-level anchor
/// grid with one anchor point per stride cell.
struct Scene {
  int image_h = 0;
  int image_w = 0;
  int stride = 1;
  std::vector<GroundTruth> objects;
  std::uint64_t seed = 0;

  int grid_h() const { return image_h / stride; }
  int grid_w() const { return image_w / stride; }
  std::vector<AnchorPoint> anchors() const;
  std::vector<Box> gt_boxes() const;
};

/// Deterministic scene from a seed. Throws std::invalid_argument on an
/// inconsistent config.
Scene generate_scene(std::uint64_t seed, const SceneConfig& cfg = {});

/// Independent per-anchor detector parameters: one classification logit
/// and four raw box offsets per anchor (mapped through softplus so the
/// decoded offsets stay nonnegative), plus per-anchor boundary deltas for
/// the refinement path. There is no shared trunk; each anchor trains on
/// its own.
struct ToyModel {
  int grid_h = 0;
  int grid_w = 0;
  double stride = 1;
  std::vector<double> logits;
  std::vector<std::array<double, 4>> box_raw;
  std::vector<BoundaryDeltas> deltas;
  bool refine = false;
  RefineSign refine_sign = RefineSign::kAdditive;

  int anchor_count() const { return grid_h * grid_w; }

  /// Mildly noisy start: scores near 0.1, offsets in [0.5, 3] grid units,
  /// zero deltas.
  static ToyModel init(const Scene& scene, std::uint64_t seed);
};

double softplus(double x);
double softplus_inv(double y);
double logistic(double x);

/// Scores and decoded (optionally refined) boxes for every anchor.
/// Refined offsets are clamped at zero before decoding, so early in
/// training the refined path can emit degenerate boxes; downstream
/// metrics treat those as empty.
Predictions forward(const ToyModel& model, const Scene& scene);

struct TrainConfig {
  int steps = 500;
  double lr = 0.1;
  double momentum = 0.0;
  SchemeConfig scheme;
  CenterPriorStrategy prior;
  FocalParams focal;
  double score_thresh = 0.05;
  double nms_iou = 0.6;
  double fd_step = 1e-3;  // central-difference step on raw box params
};

struct StepRecord {
  int step = 0;
  LossBreakdown loss;
  double top_t = 0;  // mean consistency of the leading detection per object
};

struct TrainTrace {
  std::vector<StepRecord> steps;
  ApReport final_ap;
};

/// Plain SGD. Classification gradients are analytic through the logistic;
/// box gradients are central finite differences on the raw parameters
/// with the weights held fixed (weights are detached and receive no
/// gradient). Deterministic given model, scene and config. Throws
/// std::runtime_error when the loss turns non-finite.
TrainTrace train(ToyModel& model, const Scene& scene, const TrainConfig& cfg);

}  // namespace dw

#endif  // DW_SIM_HPP
