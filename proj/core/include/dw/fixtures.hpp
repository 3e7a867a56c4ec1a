#ifndef DW_FIXTURES_HPP
#define DW_FIXTURES_HPP

#include "dw/assignment.hpp"
#include "dw/sim.hpp"

namespace dw::fixtures {

// Bundled four-anchor ambiguity fixture: one 20x20 object on a 4x4 grid,
// whose four inside anchors carry the classic conflicting profiles
//   A: s = 0.3, IoU = 0.3      (score equals IoU, low)
//   B: s = 0.8, IoU = 0.4      (confident but badly placed)
//   C: s = 0.7, IoU = 0.7      (score equals IoU, high)
//   D: s = 0.4, IoU = 0.85     (well placed but timid)
// All four sit at the same distance from the object center. The twelve
// remaining anchors are background. The same data ships as
// data/fig1_scene.json and data/fig1_predictions.json.

Scene fig1_scene();
Predictions fig1_predictions();

/// Anchor indices of A, B, C, D in the fixture grid.
inline constexpr int kFig1Anchors[4] = {5, 6, 9, 10};

}  // namespace dw::fixtures

#endif  // DW_FIXTURES_HPP
