#include "dw/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dw {

double center_distance(const AnchorPoint& anchor, const Box& gt) {
  const double dx = anchor.x() - gt.center_x();
  const double dy = anchor.y() - gt.center_y();
  return std::sqrt(dx * dx + dy * dy) / anchor.stride;
}

CandidateBag build_bag(std::span<const AnchorPoint> anchors, int gt_index,
                       const Box& gt, const CenterPriorStrategy& strategy) {
  CandidateBag bag;
  bag.gt_index = gt_index;
  switch (strategy.kind) {
    case CenterPriorStrategy::Kind::kThreshold: {
      for (int a = 0; a < static_cast<int>(anchors.size()); ++a) {
        const double r = center_distance(anchors[a], gt);
        if (r < strategy.r_max) {
          bag.anchors.push_back(a);
          bag.center_r.push_back(r);
        }
      }
      break;
    }
    case CenterPriorStrategy::Kind::kTopK: {
      // k nearest per stride level, ties broken by anchor index.
      std::map<double, std::vector<std::pair<double, int>>> by_level;
      for (int a = 0; a < static_cast<int>(anchors.size()); ++a) {
        by_level[anchors[a].stride].emplace_back(
            center_distance(anchors[a], gt), a);
      }
      std::vector<std::pair<double, int>> chosen;
      for (auto& [stride, cand] : by_level) {
        std::sort(cand.begin(), cand.end());
        const std::size_t n =
            std::min<std::size_t>(cand.size(), strategy.top_k);
        chosen.insert(chosen.end(), cand.begin(), cand.begin() + n);
      }
      std::sort(chosen.begin(), chosen.end(),
                [](const auto& x, const auto& y) { return x.second < y.second; });
      for (const auto& [r, a] : chosen) {
        bag.anchors.push_back(a);
        bag.center_r.push_back(r);
      }
      break;
    }
    case CenterPriorStrategy::Kind::kSoftCenter: {
      for (int a = 0; a < static_cast<int>(anchors.size()); ++a) {
        const double x = anchors[a].x();
        const double y = anchors[a].y();
        if (x >= gt.x1 && x <= gt.x2 && y >= gt.y1 && y <= gt.y2) {
          bag.anchors.push_back(a);
          bag.center_r.push_back(center_distance(anchors[a], gt));
        }
      }
      break;
    }
  }
  return bag;
}

AssignmentResult assign(std::span<const AnchorPoint> anchors,
                        std::span<const Box> gt_boxes,
                        const Predictions& preds, const SchemeConfig& cfg,
                        const CenterPriorStrategy& prior) {
  const int n_anchors = static_cast<int>(anchors.size());
  if (static_cast<int>(preds.scores.size()) != n_anchors ||
      static_cast<int>(preds.boxes.size()) != n_anchors) {
    throw std::invalid_argument("assign: predictions not aligned with anchors");
  }

  AssignmentResult result;
  result.bags.reserve(gt_boxes.size());
  for (int g = 0; g < static_cast<int>(gt_boxes.size()); ++g) {
    result.bags.push_back(build_bag(anchors, g, gt_boxes[g], prior));
  }

  // Claim resolution: an anchor inside several bags stays in the one with
  // the highest consistency t, ties to the smaller GT area then index.
  struct Claim {
    int gt = -1;
    double t = 0;
    double area = 0;
  };
  std::vector<Claim> best(n_anchors);
  for (const CandidateBag& bag : result.bags) {
    const double area = gt_boxes[bag.gt_index].area();
    for (int a : bag.anchors) {
      const double ov = iou(preds.boxes[a], gt_boxes[bag.gt_index]);
      const double t = consistency_of(cfg, preds.scores[a], ov);
      Claim& cur = best[a];
      const bool wins =
          cur.gt < 0 || t > cur.t || (t == cur.t && area < cur.area);
      if (wins) cur = {bag.gt_index, t, area};
    }
  }
  for (CandidateBag& bag : result.bags) {
    std::vector<int> keep_a;
    std::vector<double> keep_r;
    for (std::size_t m = 0; m < bag.anchors.size(); ++m) {
      if (best[bag.anchors[m]].gt == bag.gt_index) {
        keep_a.push_back(bag.anchors[m]);
        keep_r.push_back(bag.center_r[m]);
      }
    }
    bag.anchors = std::move(keep_a);
    bag.center_r = std::move(keep_r);
  }

  // Weights per bag: raw scheme weights, soft-center multiplier, per-bag
  // normalization of the pos weights, w_reg tied to the normalized w_pos.
  for (const CandidateBag& bag : result.bags) {
    if (bag.anchors.empty()) continue;
    const Box& gt = gt_boxes[bag.gt_index];
    std::vector<AnchorWeight> members(bag.anchors.size());
    std::vector<double> raw_pos(bag.anchors.size());
    for (std::size_t m = 0; m < bag.anchors.size(); ++m) {
      AnchorWeight& aw = members[m];
      aw.anchor = bag.anchors[m];
      aw.gt = bag.gt_index;
      aw.s = preds.scores[aw.anchor];
      aw.iou = iou(preds.boxes[aw.anchor], gt);
      aw.t = consistency_of(cfg, aw.s, aw.iou);
      aw.w = scheme_weights(cfg, aw.s, aw.iou);
      if (prior.kind == CenterPriorStrategy::Kind::kSoftCenter) {
        const double r = bag.center_r[m];
        aw.w.w_pos *= std::exp(-r * r);
      }
      raw_pos[m] = aw.w.w_pos;
    }
    const std::vector<double> norm = normalize_pos_weights(raw_pos);
    for (std::size_t m = 0; m < members.size(); ++m) {
      members[m].w.w_pos = norm[m];
      members[m].w.w_reg = norm[m];
      if (cfg.scheme == Scheme::kDw && cfg.neg_mode == DwNegMode::kCoupled) {
        members[m].w.w_neg = std::clamp(1.0 - norm[m], 0.0, 1.0);
      }
      result.weights.push_back(members[m]);
    }
  }
  std::sort(result.weights.begin(), result.weights.end(),
            [](const AnchorWeight& x, const AnchorWeight& y) {
              return x.anchor < y.anchor;
            });

  std::vector<bool> inside(n_anchors, false);
  for (const AnchorWeight& aw : result.weights) inside[aw.anchor] = true;
  for (int a = 0; a < n_anchors; ++a) {
    if (!inside[a]) result.outside.push_back(a);
  }
  return result;
}

CenterPriorStrategy CenterPriorStrategy::parse(const std::string& text) {
  CenterPriorStrategy s;
  if (text == "soft") {
    s.kind = Kind::kSoftCenter;
    return s;
  }
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  try {
    if (head == "threshold") {
      s.kind = Kind::kThreshold;
      s.r_max = std::stod(arg);
      if (!(s.r_max > 0)) throw std::invalid_argument("r_max");
      return s;
    }
    if (head == "topk") {
      s.kind = Kind::kTopK;
      s.top_k = std::stoi(arg);
      if (s.top_k < 1) throw std::invalid_argument("top_k");
      return s;
    }
  } catch (const std::exception&) {
    // fall through to the common error below
  }
  throw std::invalid_argument(
      "bad center prior '" + text + "' (want threshold:R, topk:K or soft)");
}

std::string CenterPriorStrategy::name() const {
  switch (kind) {
    case Kind::kThreshold:
      return "threshold:" + std::to_string(r_max);
    case Kind::kTopK:
      return "topk:" + std::to_string(top_k);
    case Kind::kSoftCenter:
      return "soft";
  }
  return "soft";
}

}  // namespace dw
