#include "dw/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dw {

using nlohmann::json;

namespace {

json box_to_json(const Box& b) {
  return json::array({b.x1, b.y1, b.x2, b.y2});
}

Box box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw std::runtime_error("box must be an array [x1, y1, x2, y2]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(e.what());
  }
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  json j;
  j["image"] = json::array({scene.image_h, scene.image_w});
  j["stride"] = scene.stride;
  j["objects"] = json::array();
  for (const GroundTruth& g : scene.objects) {
    j["objects"].push_back({{"box", box_to_json(g.box)}, {"cat", g.category}});
  }
  j["seed"] = scene.seed;
  return j.dump();
}

Scene scene_from_json(const std::string& text) {
  const json j = parse(text);
  Scene scene;
  scene.image_h = j.at("image").at(0).get<int>();
  scene.image_w = j.at("image").at(1).get<int>();
  scene.stride = j.at("stride").get<int>();
  if (scene.stride <= 0 || scene.image_h % scene.stride != 0 ||
      scene.image_w % scene.stride != 0) {
    throw std::runtime_error("scene: image must be a positive multiple of stride");
  }
  for (const json& o : j.at("objects")) {
    scene.objects.push_back(
        {box_from_json(o.at("box")), o.value("cat", 0)});
  }
  scene.seed = j.value("seed", std::uint64_t{0});
  return scene;
}

std::string predictions_to_json(const Predictions& preds) {
  json j;
  j["scores"] = preds.scores;
  j["boxes"] = json::array();
  for (const Box& b : preds.boxes) j["boxes"].push_back(box_to_json(b));
  return j.dump();
}

Predictions predictions_from_json(const std::string& text) {
  const json j = parse(text);
  Predictions preds;
  for (const json& s : j.at("scores")) preds.scores.push_back(s.get<double>());
  for (const json& b : j.at("boxes")) preds.boxes.push_back(box_from_json(b));
  if (preds.scores.size() != preds.boxes.size()) {
    throw std::runtime_error("predictions: scores and boxes differ in length");
  }
  return preds;
}

std::string detections_to_json(const std::vector<Detection>& dets) {
  json j = json::array();
  for (const Detection& d : dets) {
    j.push_back({{"box", box_to_json(d.box)},
                 {"score", d.score},
                 {"cat", d.category}});
  }
  return j.dump();
}

std::vector<Detection> detections_from_json(const std::string& text) {
  const json j = parse(text);
  std::vector<Detection> dets;
  for (const json& d : j) {
    dets.push_back({box_from_json(d.at("box")), d.at("score").get<double>(),
                    d.value("cat", 0)});
  }
  return dets;
}

std::vector<GroundTruth> ground_truths_from_json(const std::string& text) {
  const json j = parse(text);
  const json& list = j.is_array() ? j : j.at("objects");
  std::vector<GroundTruth> gts;
  for (const json& g : list) {
    gts.push_back({box_from_json(g.at("box")), g.value("cat", 0)});
  }
  return gts;
}

std::string loss_to_json(const LossBreakdown& lb) {
  const json j = {{"cls_inside", lb.cls_inside},
                  {"cls_outside", lb.cls_outside},
                  {"reg", lb.reg},
                  {"total", lb.total},
                  {"lambda", lb.lambda}};
  return j.dump();
}

namespace {

json ap_report_json(const ApReport& report) {
  return {{"thresholds", report.thresholds},
          {"ap", report.ap},
          {"mean_ap", report.mean_ap},
          {"ap50", report.ap50},
          {"ap75", report.ap75},
          {"num_gts", report.num_gts},
          {"num_dets", report.num_dets},
          {"defined", report.defined}};
}

}  // namespace

std::string ap_report_to_json(const ApReport& report) {
  return ap_report_json(report).dump();
}

std::string trace_to_jsonl(const TrainTrace& trace) {
  std::ostringstream out;
  for (const StepRecord& rec : trace.steps) {
    const json j = {{"step", rec.step},
                    {"cls_inside", rec.loss.cls_inside},
                    {"cls_outside", rec.loss.cls_outside},
                    {"reg", rec.loss.reg},
                    {"total", rec.loss.total},
                    {"lambda", rec.loss.lambda},
                    {"top_t", rec.top_t}};
    out << j.dump() << "\n";
  }
  out << json{{"final_ap", ap_report_json(trace.final_ap)}}.dump() << "\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace dw
