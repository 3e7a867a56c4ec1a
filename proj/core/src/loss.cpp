#include "dw/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dw {

namespace {

double clamp_score(double s) {
  return std::clamp(s, kScoreClamp, 1.0 - kScoreClamp);
}

}  // namespace

double cls_loss_term(double s, const WeightTriple& w) {
  const double sc = clamp_score(s);
  return -w.w_pos * std::log(sc) - w.w_neg * std::log(1.0 - sc);
}

double cls_loss_grad(double s, const WeightTriple& w) {
  const double sc = clamp_score(s);
  return -w.w_pos / sc + w.w_neg / (1.0 - sc);
}

double focal_neg(double s, const FocalParams& p) {
  const double sc = std::clamp(s, 0.0, 1.0 - kScoreClamp);
  if (sc <= 0.0) return 0.0;
  return (1.0 - p.alpha) * std::pow(sc, p.gamma) * (-std::log(1.0 - sc));
}

double focal_neg_grad(double s, const FocalParams& p) {
  const double sc = std::clamp(s, 0.0, 1.0 - kScoreClamp);
  if (sc <= 0.0) return 0.0;
  double g = std::pow(sc, p.gamma) / (1.0 - sc);
  if (p.gamma > 0.0) {
    g += p.gamma * std::pow(sc, p.gamma - 1.0) * (-std::log(1.0 - sc));
  }
  return (1.0 - p.alpha) * g;
}

LossBreakdown total_loss(std::span<const Box> gt_boxes,
                         const Predictions& preds,
                         const AssignmentResult& assignment, double lambda,
                         const FocalParams& focal) {
  const int n_anchors = static_cast<int>(preds.scores.size());
  LossBreakdown lb;
  lb.lambda = lambda;
  for (const AnchorWeight& aw : assignment.weights) {
    if (aw.anchor < 0 || aw.anchor >= n_anchors || aw.gt < 0 ||
        aw.gt >= static_cast<int>(gt_boxes.size())) {
      throw std::invalid_argument("total_loss: assignment/prediction mismatch");
    }
    lb.cls_inside += cls_loss_term(preds.scores[aw.anchor], aw.w);
    lb.reg += aw.w.w_pos * (1.0 - giou(preds.boxes[aw.anchor], gt_boxes[aw.gt]));
  }
  for (int a : assignment.outside) {
    if (a < 0 || a >= n_anchors) {
      throw std::invalid_argument("total_loss: assignment/prediction mismatch");
    }
    lb.cls_outside += focal_neg(preds.scores[a], focal);
  }
  lb.total = lb.cls_inside + lb.cls_outside + lambda * lb.reg;
  return lb;
}

}  // namespace dw
