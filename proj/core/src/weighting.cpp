#include "dw/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dw {

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " outside [0,1]");
  }
}

}  // namespace

DwParams DwParams::make(double beta, double mu, double gamma1, double gamma2) {
  if (!(beta > 0)) throw std::invalid_argument("DwParams: beta must be > 0");
  if (!(mu >= 0)) throw std::invalid_argument("DwParams: mu must be >= 0");
  if (!(gamma1 > 0)) throw std::invalid_argument("DwParams: gamma1 must be > 0");
  if (!(gamma2 > 0)) throw std::invalid_argument("DwParams: gamma2 must be > 0");
  DwParams p;
  p.beta = beta;
  p.mu = mu;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  // Two-point solve in the variable u = iou^gamma1:
  //   -k * 0.5^g + b = 1,  -k * 0.95^g + b = 0.
  const double u_lo = std::pow(0.5, gamma1);
  const double u_hi = std::pow(0.95, gamma1);
  p.k = 1.0 / (u_hi - u_lo);
  p.b = u_hi / (u_hi - u_lo);
  return p;
}

double consistency(double s, double iou, double beta) {
  check_unit(s, "consistency: s");
  check_unit(iou, "consistency: iou");
  return s * std::pow(iou, beta);
}

double pos_weight_raw(double t, double mu) {
  return std::exp(mu * t) * t;
}

std::vector<double> normalize_pos_weights(const std::vector<double>& raw) {
  if (raw.empty()) {
    throw std::invalid_argument("normalize_pos_weights: empty bag");
  }
  double sum = 0.0;
  for (double w : raw) sum += w;
  if (sum <= 0.0) return raw;
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / sum;
  return out;
}

double neg_prob(double iou, double gamma1, double k, double b) {
  if (iou < 0.5) return 1.0;
  if (iou > 0.95) return 0.0;
  return std::clamp(-k * std::pow(iou, gamma1) + b, 0.0, 1.0);
}

double neg_importance(double s, double gamma2) {
  return std::pow(s, gamma2);
}

double neg_weight_dw(double s, double iou, const DwParams& params) {
  return neg_prob(iou, params.gamma1, params.k, params.b) *
         neg_importance(s, params.gamma2);
}

double consistency_of(const SchemeConfig& cfg, double s, double iou) {
  switch (cfg.scheme) {
    case Scheme::kDw:
      return consistency(s, iou, cfg.dw.beta);
    case Scheme::kGfl:
    case Scheme::kVfl:
      return iou;
    case Scheme::kTood:
    case Scheme::kMusu:
      return std::pow(s, cfg.t_s_exp) * std::pow(iou, cfg.t_iou_exp);
  }
  return 0.0;
}

WeightTriple scheme_weights(const SchemeConfig& cfg, double s, double iou) {
  check_unit(s, "scheme_weights: s");
  check_unit(iou, "scheme_weights: iou");
  WeightTriple w;
  switch (cfg.scheme) {
    case Scheme::kDw: {
      const double t = consistency(s, iou, cfg.dw.beta);
      w.w_pos = pos_weight_raw(t, cfg.dw.mu);
      switch (cfg.neg_mode) {
        case DwNegMode::kFull:
          w.w_neg = neg_weight_dw(s, iou, cfg.dw);
          break;
        case DwNegMode::kNone:
          w.w_neg = 0.0;
          break;
        case DwNegMode::kProbOnly:
          w.w_neg = neg_prob(iou, cfg.dw.gamma1, cfg.dw.k, cfg.dw.b);
          break;
        case DwNegMode::kImportanceOnly:
          w.w_neg = neg_importance(s, cfg.dw.gamma2);
          break;
        case DwNegMode::kCoupled:
          // Placeholder before normalization; assignment rewrites it as
          // clamp(1 - normalized w_pos, 0, 1).
          w.w_neg = std::clamp(1.0 - w.w_pos, 0.0, 1.0);
          break;
      }
      break;
    }
    case Scheme::kGfl: {
      const double t = iou;
      const double m = (s - t) * (s - t);
      w.w_pos = m * t;
      w.w_neg = m * (1.0 - t);
      break;
    }
    case Scheme::kVfl: {
      const double t = iou;
      w.w_pos = t * t;
      w.w_neg = t * (1.0 - t);
      break;
    }
    case Scheme::kTood: {
      const double t = consistency_of(cfg, s, iou);
      const double m = (s - t) * (s - t);
      w.w_pos = m * t;
      w.w_neg = m * (1.0 - t);
      break;
    }
    case Scheme::kMusu: {
      const double t = consistency_of(cfg, s, iou);
      const double one_minus = 1.0 - t;
      w.w_pos = (s - t) * (s - t) * t;
      w.w_neg = s * s * one_minus * one_minus * one_minus * one_minus;
      break;
    }
  }
  w.w_reg = w.w_pos;
  return w;
}

SchemeConfig SchemeConfig::parse(const std::string& name) {
  SchemeConfig cfg;
  if (name == "dw") {
    cfg.scheme = Scheme::kDw;
  } else if (name == "dw-pos-only") {
    cfg.scheme = Scheme::kDw;
    cfg.neg_mode = DwNegMode::kNone;
  } else if (name == "dw-pneg-only") {
    cfg.scheme = Scheme::kDw;
    cfg.neg_mode = DwNegMode::kProbOnly;
  } else if (name == "dw-ineg-only") {
    cfg.scheme = Scheme::kDw;
    cfg.neg_mode = DwNegMode::kImportanceOnly;
  } else if (name == "dw-coupled") {
    cfg.scheme = Scheme::kDw;
    cfg.neg_mode = DwNegMode::kCoupled;
  } else if (name == "gfl") {
    cfg.scheme = Scheme::kGfl;
  } else if (name == "vfl") {
    cfg.scheme = Scheme::kVfl;
  } else if (name == "tood") {
    cfg.scheme = Scheme::kTood;
  } else if (name == "musu") {
    cfg.scheme = Scheme::kMusu;
  } else {
    throw std::invalid_argument("unknown scheme: " + name);
  }
  return cfg;
}

std::string SchemeConfig::name() const {
  switch (scheme) {
    case Scheme::kGfl:
      return "gfl";
    case Scheme::kVfl:
      return "vfl";
    case Scheme::kTood:
      return "tood";
    case Scheme::kMusu:
      return "musu";
    case Scheme::kDw:
      break;
  }
  switch (neg_mode) {
    case DwNegMode::kFull:
      return "dw";
    case DwNegMode::kNone:
      return "dw-pos-only";
    case DwNegMode::kProbOnly:
      return "dw-pneg-only";
    case DwNegMode::kImportanceOnly:
      return "dw-ineg-only";
    case DwNegMode::kCoupled:
      return "dw-coupled";
  }
  return "dw";
}

}  // namespace dw
