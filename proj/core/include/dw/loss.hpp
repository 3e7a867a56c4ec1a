#ifndef DW_LOSS_HPP
#define DW_LOSS_HPP

#include <span>

#include "dw/assignment.hpp"
#include "dw/geometry.hpp"
#include "dw/weighting.hpp"

namespace dw {

/// Focal-loss parameters for anchors outside every candidate bag.
struct FocalParams {
  double gamma = 2.0;  // focusing exponent, >= 0
  double alpha = 0.25; // balance, in (0, 1]
};

/// One evaluation of the detection loss. The identity
/// total == cls_inside + cls_outside + lambda * reg holds by
/// construction.
struct LossBreakdown {
  double cls_inside = 0;   // weighted log terms over bag members
  double cls_outside = 0;  // focal term over pure negatives
  double reg = 0;          // w_pos-weighted GIoU loss over bag members
  double total = 0;
  double lambda = 0;       // balance factor on reg
};

/// Scores are clamped to this range inside every log term.
inline constexpr double kScoreClamp = 1e-6;

/// -w_pos * ln(s) - w_neg * ln(1 - s), with s clamped away from {0, 1}.
double cls_loss_term(double s, const WeightTriple& w);

/// d(cls_loss_term)/ds = -w_pos / s + w_neg / (1 - s) at the clamped s.
double cls_loss_grad(double s, const WeightTriple& w);

/// Focal loss against target 0: (1 - alpha) * s^gamma * (-ln(1 - s)).
double focal_neg(double s, const FocalParams& p);

/// Derivative of focal_neg with respect to s.
double focal_neg_grad(double s, const FocalParams& p);

/// Sums the full detection loss for one scene: weighted cls terms over
/// bag members, focal terms over outside anchors, and the regression
/// term w_pos * (1 - giou) per member, scaled by lambda in the total.
/// Reduction order is ascending anchor index for bit-reproducibility.
/// Throws std::invalid_argument when the assignment does not match the
/// predictions.
LossBreakdown total_loss(std::span<const Box> gt_boxes,
                         const Predictions& preds,
                         const AssignmentResult& assignment, double lambda,
                         const FocalParams& focal = {});

}  // namespace dw

#endif  // DW_LOSS_HPP
