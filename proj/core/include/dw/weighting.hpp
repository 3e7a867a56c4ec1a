#ifndef DW_WEIGHTING_HPP
#define DW_WEIGHTING_HPP

#include <string>
#include <vector>

namespace dw {

/// Hyper-parameters of the dual-weighting scheme. `k` and `b` are the
/// coefficients of the negative-probability curve -k * iou^gamma1 + b,
/// solved at construction so that the curve passes through (0.5, 1) and
/// (0.95, 0). Immutable after construction.
struct DwParams {
  double beta = 5.0;    // consistency balance, t = s * iou^beta
  double mu = 5.0;      // pos-weight sharpness, w = e^(mu t) * t
  double gamma1 = 2.0;  // neg-prob curvature
  double gamma2 = 2.0;  // neg-importance exponent
  double k = 0.0;
  double b = 0.0;

  /// Solves k, b and validates ranges. Throws std::invalid_argument on
  /// beta <= 0, mu < 0, gamma1 <= 0 or gamma2 <= 0.
  static DwParams make(double beta = 5.0, double mu = 5.0,
                       double gamma1 = 2.0, double gamma2 = 2.0);
};

enum class Scheme { kDw, kGfl, kVfl, kTood, kMusu };

/// Which factors of the DW negative weight are active. The kCoupled
/// variant replaces w_neg with clamp(1 - w_pos, 0, 1); assignment applies
/// it after per-bag normalization of the pos weights.
enum class DwNegMode { kFull, kNone, kProbOnly, kImportanceOnly, kCoupled };

/// Selects one weighting scheme and carries its parameters. For TOOD and
/// MuSu the consistency target t = s^s_exp * iou^iou_exp; the published
/// form of t for those methods is underspecified, so this is a documented
/// approximation used only for comparison runs.
struct SchemeConfig {
  Scheme scheme = Scheme::kDw;
  DwParams dw = DwParams::make();
  DwNegMode neg_mode = DwNegMode::kFull;
  double t_s_exp = 0.5;
  double t_iou_exp = 0.5;

  /// Parses "dw", "gfl", "vfl", "tood", "musu" plus the DW ablation names
  /// "dw-pos-only", "dw-pneg-only", "dw-ineg-only", "dw-coupled".
  static SchemeConfig parse(const std::string& name);
  std::string name() const;
};

/// Weights assigned to one anchor for one ground-truth object, all >= 0.
/// w_reg always equals w_pos.
struct WeightTriple {
  double w_pos = 0;
  double w_neg = 0;
  double w_reg = 0;
};

/// Consistency metric t = s * iou^beta. Throws on inputs outside [0, 1].
double consistency(double s, double iou, double beta);

/// Unnormalized pos weight e^(mu t) * t.
double pos_weight_raw(double t, double mu);

/// Normalizes one candidate bag's pos weights to sum 1. An all-zero bag
/// is returned unchanged. Throws std::invalid_argument on an empty bag.
std::vector<double> normalize_pos_weights(const std::vector<double>& raw);

/// Probability of being a negative sample: 1 below iou 0.5, 0 above
/// 0.95, and -k * iou^gamma1 + b (clamped to [0, 1]) in between.
double neg_prob(double iou, double gamma1, double k, double b);

/// Importance conditioned on being negative: s^gamma2.
double neg_importance(double s, double gamma2);

/// neg_prob * neg_importance under `params`.
double neg_weight_dw(double s, double iou, const DwParams& params);

/// The scheme's consistency target t for one anchor; used for trace
/// metrics and multi-object conflict resolution.
double consistency_of(const SchemeConfig& cfg, double s, double iou);

/// Per-anchor weights under the configured scheme, given the predicted
/// cls score and the IoU between the predicted box and the GT object.
WeightTriple scheme_weights(const SchemeConfig& cfg, double s, double iou);

}  // namespace dw

#endif  // DW_WEIGHTING_HPP
