#include "dw/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace dw {

namespace {

// Portable uniform double in [lo, hi) from the top 53 bits; the std
// distributions are implementation-specified, this is not.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

double softplus(double x) {
  if (x > 30.0) return x;
  return std::log1p(std::exp(x));
}

double softplus_inv(double y) {
  if (y > 30.0) return y;
  if (y <= 0.0) throw std::invalid_argument("softplus_inv: need y > 0");
  return std::log(std::expm1(y));
}

double logistic(double x) {
  return 1.0 / (1.0 + std::exp(-x));
}

std::vector<AnchorPoint> Scene::anchors() const {
  std::vector<AnchorPoint> out;
  out.reserve(static_cast<std::size_t>(grid_h()) * grid_w());
  for (int j = 0; j < grid_h(); ++j) {
    for (int i = 0; i < grid_w(); ++i) {
      out.push_back({double(j), double(i), double(stride)});
    }
  }
  return out;
}

std::vector<Box> Scene::gt_boxes() const {
  std::vector<Box> out;
  out.reserve(objects.size());
  for (const GroundTruth& g : objects) out.push_back(g.box);
  return out;
}

Scene generate_scene(std::uint64_t seed, const SceneConfig& cfg) {
  if (cfg.stride <= 0 || cfg.image_h <= 0 || cfg.image_w <= 0 ||
      cfg.image_h % cfg.stride != 0 || cfg.image_w % cfg.stride != 0) {
    throw std::invalid_argument("generate_scene: image must be a positive multiple of stride");
  }
  if (cfg.min_objects < 0 || cfg.max_objects < cfg.min_objects) {
    throw std::invalid_argument("generate_scene: bad object count range");
  }
  if (!(cfg.min_size > 0) || cfg.max_size < cfg.min_size ||
      cfg.max_size > cfg.image_h || cfg.max_size > cfg.image_w) {
    throw std::invalid_argument("generate_scene: bad size range");
  }
  Scene scene;
  scene.image_h = cfg.image_h;
  scene.image_w = cfg.image_w;
  scene.stride = cfg.stride;
  scene.seed = seed;
  std::mt19937_64 rng(seed);
  const int count = uniform_int(rng, cfg.min_objects, cfg.max_objects);
  for (int n = 0; n < count; ++n) {
    const double w = uniform(rng, cfg.min_size, cfg.max_size);
    const double h = uniform(rng, cfg.min_size, cfg.max_size);
    const double x1 = uniform(rng, 0.0, cfg.image_w - w);
    const double y1 = uniform(rng, 0.0, cfg.image_h - h);
    scene.objects.push_back({{x1, y1, x1 + w, y1 + h}, 0});
  }
  return scene;
}

ToyModel ToyModel::init(const Scene& scene, std::uint64_t seed) {
  ToyModel m;
  m.grid_h = scene.grid_h();
  m.grid_w = scene.grid_w();
  m.stride = scene.stride;
  const int n = m.anchor_count();
  m.logits.resize(n);
  m.box_raw.resize(n);
  m.deltas.resize(n);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int a = 0; a < n; ++a) {
    m.logits[a] = uniform(rng, -2.5, -1.5);
    for (int p = 0; p < 4; ++p) {
      m.box_raw[a][p] = softplus_inv(uniform(rng, 0.5, 3.0));
    }
  }
  return m;
}

namespace {

OffsetMap model_offset_map(const ToyModel& model) {
  OffsetMap map(model.grid_h, model.grid_w);
  for (int j = 0; j < model.grid_h; ++j) {
    for (int i = 0; i < model.grid_w; ++i) {
      const auto& raw = model.box_raw[j * model.grid_w + i];
      map.at(j, i, 0) = softplus(raw[0]);
      map.at(j, i, 1) = softplus(raw[1]);
      map.at(j, i, 2) = softplus(raw[2]);
      map.at(j, i, 3) = softplus(raw[3]);
    }
  }
  return map;
}

DeltaMap model_delta_map(const ToyModel& model) {
  DeltaMap map(model.grid_h, model.grid_w);
  for (int j = 0; j < model.grid_h; ++j) {
    for (int i = 0; i < model.grid_w; ++i) {
      map.at(j, i) = model.deltas[j * model.grid_w + i];
    }
  }
  return map;
}

OffsetVector clamp_nonneg(OffsetVector o) {
  o.left = std::max(0.0, o.left);
  o.top = std::max(0.0, o.top);
  o.right = std::max(0.0, o.right);
  o.bottom = std::max(0.0, o.bottom);
  return o;
}

Box decode_at(const ToyModel& model, const OffsetVector& o, int j, int i) {
  const AnchorPoint anchor{double(j), double(i), model.stride};
  return decode_box(anchor, o);
}

}  // namespace

Predictions forward(const ToyModel& model, const Scene& scene) {
  if (model.grid_h != scene.grid_h() || model.grid_w != scene.grid_w()) {
    throw std::invalid_argument("forward: model grid does not match scene");
  }
  Predictions preds;
  const int n = model.anchor_count();
  preds.scores.resize(n);
  preds.boxes.resize(n);
  const OffsetMap offsets = model_offset_map(model);
  DeltaMap deltas;
  if (model.refine) deltas = model_delta_map(model);
  for (int j = 0; j < model.grid_h; ++j) {
    for (int i = 0; i < model.grid_w; ++i) {
      const int a = j * model.grid_w + i;
      preds.scores[a] = logistic(model.logits[a]);
      OffsetVector o = offsets.get(j, i);
      if (model.refine) {
        o = clamp_nonneg(
            refine_offsets(offsets, deltas, j, i, model.refine_sign));
      }
      preds.boxes[a] = decode_at(model, o, j, i);
    }
  }
  return preds;
}

namespace {

std::vector<Detection> as_detections(const Predictions& preds) {
  std::vector<Detection> dets(preds.scores.size());
  for (std::size_t a = 0; a < preds.scores.size(); ++a) {
    dets[a] = {preds.boxes[a], preds.scores[a], 0};
  }
  return dets;
}

// Mean consistency t of the leading post-NMS detection per object: walk
// the kept list in rank order and let each object be claimed by the first
// detection whose highest-IoU object it is.
double top_consistency(const Predictions& preds, const Scene& scene,
                       const TrainConfig& cfg) {
  if (scene.objects.empty()) return 0.0;
  const std::vector<Detection> kept =
      filter_and_nms(as_detections(preds), cfg.score_thresh, cfg.nms_iou);
  std::vector<bool> claimed(scene.objects.size(), false);
  double sum = 0.0;
  int found = 0;
  for (const Detection& d : kept) {
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < scene.objects.size(); ++g) {
      const double ov = iou(d.box, scene.objects[g].box);
      if (best < 0 || ov > best_iou) {
        best = static_cast<int>(g);
        best_iou = ov;
      }
    }
    if (best >= 0 && !claimed[best]) {
      claimed[best] = true;
      sum += consistency(d.score, best_iou, cfg.scheme.dw.beta);
      ++found;
    }
  }
  return found > 0 ? sum / found : 0.0;
}

// Regression sum with frozen weights, used by the finite-difference path
// when refinement couples cells through map sampling.
double reg_sum_refined(const ToyModel& model, const OffsetMap& offsets,
                       const DeltaMap& deltas,
                       const std::vector<AnchorWeight>& members,
                       std::span<const Box> gt_boxes) {
  double sum = 0.0;
  for (const AnchorWeight& aw : members) {
    const int j = aw.anchor / model.grid_w;
    const int i = aw.anchor % model.grid_w;
    const OffsetVector o = clamp_nonneg(
        refine_offsets(offsets, deltas, j, i, model.refine_sign));
    sum += aw.w.w_pos * (1.0 - giou(decode_at(model, o, j, i), gt_boxes[aw.gt]));
  }
  return sum;
}

}  // namespace

TrainTrace train(ToyModel& model, const Scene& scene, const TrainConfig& cfg) {
  if (cfg.steps < 0) throw std::invalid_argument("train: steps must be >= 0");
  const std::vector<AnchorPoint> anchors = scene.anchors();
  const std::vector<Box> gtb = scene.gt_boxes();
  const double lambda = cfg.scheme.dw.beta;
  const int n = model.anchor_count();
  const double h = cfg.fd_step;

  TrainTrace trace;
  trace.steps.reserve(cfg.steps);
  std::vector<double> v_logit, v_box, v_delta;
  if (cfg.momentum > 0.0) {
    v_logit.assign(n, 0.0);
    v_box.assign(4 * n, 0.0);
    v_delta.assign(8 * n, 0.0);
  }

  for (int step = 0; step < cfg.steps; ++step) {
    const Predictions preds = forward(model, scene);
    const AssignmentResult ar =
        assign(anchors, gtb, preds, cfg.scheme, cfg.prior);
    const LossBreakdown lb = total_loss(gtb, preds, ar, lambda, cfg.focal);
    if (!std::isfinite(lb.total)) {
      throw std::runtime_error("train: non-finite loss at step " +
                               std::to_string(step));
    }

    std::vector<double> g_logit(n, 0.0);
    for (const AnchorWeight& aw : ar.weights) {
      const double s = preds.scores[aw.anchor];
      g_logit[aw.anchor] = cls_loss_grad(s, aw.w) * s * (1.0 - s);
    }
    for (int a : ar.outside) {
      const double s = preds.scores[a];
      g_logit[a] = focal_neg_grad(s, cfg.focal) * s * (1.0 - s);
    }

    std::vector<double> g_box(4 * n, 0.0);
    std::vector<double> g_delta(8 * n, 0.0);
    if (!model.refine) {
      // Each member's GIoU term depends only on its own four parameters.
      for (const AnchorWeight& aw : ar.weights) {
        if (aw.w.w_pos == 0.0) continue;
        const int j = aw.anchor / model.grid_w;
        const int i = aw.anchor % model.grid_w;
        auto raw = model.box_raw[aw.anchor];
        for (int p = 0; p < 4; ++p) {
          const double keep = raw[p];
          auto eval = [&](double value) {
            raw[p] = value;
            const OffsetVector o{softplus(raw[0]), softplus(raw[1]),
                                 softplus(raw[2]), softplus(raw[3])};
            return 1.0 - giou(decode_at(model, o, j, i), gtb[aw.gt]);
          };
          const double up = eval(keep + h);
          const double dn = eval(keep - h);
          raw[p] = keep;
          g_box[4 * aw.anchor + p] =
              lambda * aw.w.w_pos * (up - dn) / (2.0 * h);
        }
      }
    } else {
      // Map sampling couples cells, so difference the whole reg sum.
      OffsetMap offsets = model_offset_map(model);
      DeltaMap deltas = model_delta_map(model);
      for (int a = 0; a < n; ++a) {
        const int j = a / model.grid_w;
        const int i = a % model.grid_w;
        for (int p = 0; p < 4; ++p) {
          const double keep = model.box_raw[a][p];
          offsets.at(j, i, p) = softplus(keep + h);
          const double up = reg_sum_refined(model, offsets, deltas,
                                            ar.weights, gtb);
          offsets.at(j, i, p) = softplus(keep - h);
          const double dn = reg_sum_refined(model, offsets, deltas,
                                            ar.weights, gtb);
          offsets.at(j, i, p) = softplus(keep);
          g_box[4 * a + p] = lambda * (up - dn) / (2.0 * h);
        }
        double* fields[8] = {&deltas.at(j, i).dx_l, &deltas.at(j, i).dy_l,
                             &deltas.at(j, i).dx_t, &deltas.at(j, i).dy_t,
                             &deltas.at(j, i).dx_r, &deltas.at(j, i).dy_r,
                             &deltas.at(j, i).dx_b, &deltas.at(j, i).dy_b};
        for (int p = 0; p < 8; ++p) {
          const double keep = *fields[p];
          *fields[p] = keep + h;
          const double up = reg_sum_refined(model, offsets, deltas,
                                            ar.weights, gtb);
          *fields[p] = keep - h;
          const double dn = reg_sum_refined(model, offsets, deltas,
                                            ar.weights, gtb);
          *fields[p] = keep;
          g_delta[8 * a + p] = lambda * (up - dn) / (2.0 * h);
        }
      }
    }

    if (cfg.momentum > 0.0) {
      for (int a = 0; a < n; ++a) {
        v_logit[a] = cfg.momentum * v_logit[a] + g_logit[a];
        model.logits[a] -= cfg.lr * v_logit[a];
        for (int p = 0; p < 4; ++p) {
          const int idx = 4 * a + p;
          v_box[idx] = cfg.momentum * v_box[idx] + g_box[idx];
          model.box_raw[a][p] -= cfg.lr * v_box[idx];
        }
      }
      if (model.refine) {
        for (int a = 0; a < n; ++a) {
          double* fields[8] = {&model.deltas[a].dx_l, &model.deltas[a].dy_l,
                               &model.deltas[a].dx_t, &model.deltas[a].dy_t,
                               &model.deltas[a].dx_r, &model.deltas[a].dy_r,
                               &model.deltas[a].dx_b, &model.deltas[a].dy_b};
          for (int p = 0; p < 8; ++p) {
            const int idx = 8 * a + p;
            v_delta[idx] = cfg.momentum * v_delta[idx] + g_delta[idx];
            *fields[p] -= cfg.lr * v_delta[idx];
          }
        }
      }
    } else {
      for (int a = 0; a < n; ++a) {
        model.logits[a] -= cfg.lr * g_logit[a];
        for (int p = 0; p < 4; ++p) {
          model.box_raw[a][p] -= cfg.lr * g_box[4 * a + p];
        }
      }
      if (model.refine) {
        for (int a = 0; a < n; ++a) {
          double* fields[8] = {&model.deltas[a].dx_l, &model.deltas[a].dy_l,
                               &model.deltas[a].dx_t, &model.deltas[a].dy_t,
                               &model.deltas[a].dx_r, &model.deltas[a].dy_r,
                               &model.deltas[a].dx_b, &model.deltas[a].dy_b};
          for (int p = 0; p < 8; ++p) {
            *fields[p] -= cfg.lr * g_delta[8 * a + p];
          }
        }
      }
    }

    StepRecord rec;
    rec.step = step;
    rec.loss = lb;
    rec.top_t = top_consistency(preds, scene, cfg);
    trace.steps.push_back(rec);
  }

  const Predictions final_preds = forward(model, scene);
  const std::vector<Detection> kept = filter_and_nms(
      as_detections(final_preds), cfg.score_thresh, cfg.nms_iou);
  trace.final_ap = coco_ap(kept, scene.objects);
  return trace;
}

}  // namespace dw
