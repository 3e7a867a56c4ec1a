#ifndef DW_TESTS_ORACLES_HPP
#define DW_TESTS_ORACLES_HPP

// Brute-force reference implementations used only by tests. These stay
// deliberately naive and independent of the library code paths they
// check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dw/eval.hpp"
#include "dw/geometry.hpp"

namespace oracles {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

// O(n^2) NMS: repeatedly take the highest-scored surviving detection
// (earliest index on ties) and knock out same-category overlaps.
inline std::vector<dw::Detection> nms_reference(
    std::vector<dw::Detection> dets, double score_thresh, double nms_iou) {
  std::vector<dw::Detection> pool;
  for (const dw::Detection& d : dets) {
    if (d.score >= score_thresh) pool.push_back(d);
  }
  std::vector<bool> dead(pool.size(), false);
  std::vector<dw::Detection> kept;
  for (;;) {
    int best = -1;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (dead[i]) continue;
      if (best < 0 || pool[i].score > pool[best].score) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    dead[best] = true;
    kept.push_back(pool[best]);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (dead[i] || pool[i].category != pool[best].category) continue;
      if (dw::iou(pool[i].box, pool[best].box) > nms_iou) dead[i] = true;
    }
  }
  return kept;
}

// Independent greedy matcher: rank order, highest-IoU unmatched GT of the
// same category (lower index on ties), TP iff that IoU exceeds theta.
inline std::vector<bool> match_reference(
    const std::vector<dw::Detection>& ranked,
    const std::vector<dw::GroundTruth>& gts, double theta) {
  std::vector<bool> tp(ranked.size(), false);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t d = 0; d < ranked.size(); ++d) {
    double best_iou = -1.0;
    int best = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || gts[g].category != ranked[d].category) continue;
      const double ov = dw::iou(ranked[d].box, gts[g].box);
      if (ov > best_iou) {
        best_iou = ov;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou > theta) {
      tp[d] = true;
      taken[best] = true;
    }
  }
  return tp;
}

// 101-point AP by direct scan: for every recall grid point, walk all PR
// points and take the best precision among those with recall >= r.
inline double ap101_reference(const std::vector<bool>& tp, int num_gts) {
  if (num_gts <= 0) return 0.0;
  std::vector<double> prec, rec;
  int t = 0, f = 0;
  for (bool hit : tp) {
    hit ? ++t : ++f;
    prec.push_back(double(t) / double(t + f));
    rec.push_back(double(t) / double(num_gts));
  }
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    double best = 0.0;
    for (std::size_t i = 0; i < prec.size(); ++i) {
      if (rec[i] >= r) best = std::max(best, prec[i]);
    }
    sum += best;
  }
  return sum / 101.0;
}

// Exact area under the monotone precision envelope.
inline double ap_envelope_reference(const std::vector<bool>& tp,
                                    int num_gts) {
  if (num_gts <= 0) return 0.0;
  std::vector<double> prec, rec;
  int t = 0, f = 0;
  for (bool hit : tp) {
    hit ? ++t : ++f;
    prec.push_back(double(t) / double(t + f));
    rec.push_back(double(t) / double(num_gts));
  }
  double area = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < prec.size(); ++i) {
    double env = 0.0;
    for (std::size_t j = i; j < prec.size(); ++j) env = std::max(env, prec[j]);
    area += (rec[i] - prev) * env;
    prev = rec[i];
  }
  return area;
}

// Full ten-threshold sweep through the reference matcher and scorer.
inline dw::ApReport coco_ap_reference(std::vector<dw::Detection> dets,
                                      const std::vector<dw::GroundTruth>& gts,
                                      int max_dets = 100) {
  std::stable_sort(dets.begin(), dets.end(),
                   [](const dw::Detection& a, const dw::Detection& b) {
                     return a.score > b.score;
                   });
  if (static_cast<int>(dets.size()) > max_dets) dets.resize(max_dets);
  dw::ApReport report;
  report.num_gts = static_cast<int>(gts.size());
  report.num_dets = static_cast<int>(dets.size());
  report.defined = !(gts.empty() && dets.empty());
  double sum = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double theta = (50 + 5 * i) / 100.0;
    report.thresholds[i] = theta;
    report.ap[i] = ap101_reference(match_reference(dets, gts, theta),
                                   report.num_gts);
    sum += report.ap[i];
  }
  report.mean_ap = sum / 10.0;
  report.ap50 = report.ap[0];
  report.ap75 = report.ap[5];
  return report;
}

// Plain re-statement of the refinement rule with its own bilinear lookup.
inline double bilinear_reference(const dw::OffsetMap& m, double row,
                                 double col, int c) {
  row = std::clamp(row, 0.0, double(m.height() - 1));
  col = std::clamp(col, 0.0, double(m.width() - 1));
  const int r0 = int(std::floor(row));
  const int c0 = int(std::floor(col));
  const int r1 = std::min(r0 + 1, m.height() - 1);
  const int c1 = std::min(c0 + 1, m.width() - 1);
  const double fr = row - r0;
  const double fc = col - c0;
  return m.at(r0, c0, c) * (1 - fr) * (1 - fc) +
         m.at(r0, c1, c) * (1 - fr) * fc +
         m.at(r1, c0, c) * fr * (1 - fc) +
         m.at(r1, c1, c) * fr * fc;
}

inline dw::OffsetVector refine_reference(const dw::OffsetMap& o,
                                         const dw::DeltaMap& dm, int j, int i,
                                         bool distance_sign = false) {
  const dw::BoundaryDeltas& d = dm.at(j, i);
  const double l = o.at(j, i, 0), t = o.at(j, i, 1);
  const double r = o.at(j, i, 2), b = o.at(j, i, 3);
  dw::OffsetVector out;
  out.left = l + (distance_sign ? -d.dx_l : d.dx_l) +
             bilinear_reference(o, j + d.dy_l, i - l + d.dx_l, 0);
  out.top = t + (distance_sign ? -d.dy_t : d.dy_t) +
            bilinear_reference(o, j - t + d.dy_t, i + d.dx_t, 1);
  out.right = r + d.dx_r + bilinear_reference(o, j + d.dy_r, i + r + d.dx_r, 2);
  out.bottom = b + d.dy_b + bilinear_reference(o, j + b + d.dy_b, i + d.dx_b, 3);
  return out;
}

// Three-point central difference.
template <typename F>
double central_diff(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracles

#endif  // DW_TESTS_ORACLES_HPP
