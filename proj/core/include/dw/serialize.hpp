#ifndef DW_SERIALIZE_HPP
#define DW_SERIALIZE_HPP

#include <string>
#include <vector>

#include "dw/assignment.hpp"
#include "dw/eval.hpp"
#include "dw/loss.hpp"
#include "dw/sim.hpp"

namespace dw {

// JSON text <-> domain structs. Scene files look like
//   {"image": [H, W], "stride": s,
//    "objects": [{"box": [x1, y1, x2, y2], "cat": c}, ...], "seed": n}
// predictions files like {"scores": [...], "boxes": [[x1,y1,x2,y2], ...]}
// and detection files are arrays of {"box": [...], "score": s, "cat": c}.
// Parse failures throw std::runtime_error carrying the parser's
// line/column message.

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);

std::string predictions_to_json(const Predictions& preds);
Predictions predictions_from_json(const std::string& text);

std::string detections_to_json(const std::vector<Detection>& dets);
std::vector<Detection> detections_from_json(const std::string& text);

/// Accepts either a scene file or a bare array of {"box", "cat"} records.
std::vector<GroundTruth> ground_truths_from_json(const std::string& text);

std::string loss_to_json(const LossBreakdown& lb);
std::string ap_report_to_json(const ApReport& report);

/// One JSON object per line (step records), then one {"final_ap": ...}.
std::string trace_to_jsonl(const TrainTrace& trace);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dw

#endif  // DW_SERIALIZE_HPP
