#include "dw/fixtures.hpp"

namespace dw::fixtures {

Scene fig1_scene() {
  Scene scene;
  scene.image_h = 40;
  scene.image_w = 40;
  scene.stride = 10;
  scene.objects = {{{5.0, 5.0, 25.0, 25.0}, 0}};
  scene.seed = 0;
  return scene;
}

Predictions fig1_predictions() {
  Predictions preds;
  preds.scores.assign(16, 0.05);
  preds.boxes.resize(16);
  // Background anchors predict a small box around their own point.
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const double x = 10.0 * i;
      const double y = 10.0 * j;
      preds.boxes[j * 4 + i] = {x - 2, y - 2, x + 2, y + 2};
    }
  }
  // The four inside anchors: sub-boxes of the object sharing its left
  // edge, so IoU is exactly (box area) / 400.
  preds.scores[5] = 0.3;
  preds.boxes[5] = {5, 5, 25, 11};  // IoU 0.30
  preds.scores[6] = 0.8;
  preds.boxes[6] = {5, 5, 25, 13};  // IoU 0.40
  preds.scores[9] = 0.7;
  preds.boxes[9] = {5, 5, 25, 19};  // IoU 0.70
  preds.scores[10] = 0.4;
  preds.boxes[10] = {5, 5, 25, 22};  // IoU 0.85
  return preds;
}

}  // namespace dw::fixtures
