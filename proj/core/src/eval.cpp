#include "dw/eval.hpp"

#include <algorithm>
#include <cmath>

namespace dw {

std::vector<Detection> filter_and_nms(std::vector<Detection> dets,
                                      double score_thresh, double nms_iou) {
  std::erase_if(dets, [&](const Detection& d) { return d.score < score_thresh; });
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.score > b.score;
                   });
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (const Detection& d : dets) {
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.category == d.category && iou(k.box, d.box) > nms_iou) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

MatchResult match_detections(std::span<const Detection> ranked,
                             std::span<const GroundTruth> gts, double theta) {
  MatchResult m;
  m.threshold = theta;
  m.tp.resize(ranked.size(), false);
  m.matched_gt.resize(ranked.size(), -1);
  std::vector<bool> used(gts.size(), false);
  for (std::size_t d = 0; d < ranked.size(); ++d) {
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || gts[g].category != ranked[d].category) continue;
      const double ov = iou(ranked[d].box, gts[g].box);
      if (best < 0 || ov > best_iou) {
        best = static_cast<int>(g);
        best_iou = ov;
      }
    }
    if (best >= 0 && best_iou > theta) {
      m.tp[d] = true;
      m.matched_gt[d] = best;
      used[best] = true;
    }
  }
  return m;
}

double average_precision(const MatchResult& matches, int num_gts,
                         ApInterp interp) {
  if (num_gts <= 0) return 0.0;
  const std::size_t n = matches.tp.size();
  std::vector<double> precision(n), recall(n);
  int tp = 0, fp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    matches.tp[i] ? ++tp : ++fp;
    precision[i] = double(tp) / double(tp + fp);
    recall[i] = double(tp) / double(num_gts);
  }
  // Monotone envelope: env[i] = max precision at or after i.
  std::vector<double> env(n);
  double run = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    run = std::max(run, precision[i]);
    env[i] = run;
  }
  if (interp == ApInterp::kCoco101) {
    double sum = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double r = k / 100.0;
      const auto it = std::lower_bound(recall.begin(), recall.end(), r);
      if (it != recall.end()) sum += env[it - recall.begin()];
    }
    return sum / 101.0;
  }
  double area = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    area += (recall[i] - prev) * env[i];
    prev = recall[i];
  }
  return area;
}

ApReport coco_ap(std::vector<Detection> dets,
                 std::span<const GroundTruth> gts, ApInterp interp,
                 int max_dets) {
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.score > b.score;
                   });
  if (static_cast<int>(dets.size()) > max_dets) dets.resize(max_dets);

  ApReport report;
  report.num_gts = static_cast<int>(gts.size());
  report.num_dets = static_cast<int>(dets.size());
  report.defined = !(gts.empty() && dets.empty());
  double sum = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double theta = (50 + 5 * i) / 100.0;
    report.thresholds[i] = theta;
    const MatchResult m = match_detections(dets, gts, theta);
    report.ap[i] = average_precision(m, report.num_gts, interp);
    sum += report.ap[i];
  }
  report.mean_ap = sum / 10.0;
  report.ap50 = report.ap[0];
  report.ap75 = report.ap[5];
  return report;
}

}  // namespace dw
