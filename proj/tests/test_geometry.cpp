#include <cmath>
#include <random>

#include "doctest.h"
#include "dw/geometry.hpp"
#include "oracles.hpp"

using namespace dw;

TEST_CASE("iou basics") {
  const Box unit{0, 0, 1, 1};
  CHECK(iou(unit, unit) == doctest::Approx(1.0));
  CHECK(iou({0, 0, 1, 1}, {2, 2, 3, 3}) == 0.0);
  CHECK(iou({0, 0, 2, 2}, {1, 1, 3, 3}) == doctest::Approx(1.0 / 7.0));
  // degenerate boxes are legal and yield 0
  CHECK(iou({1, 1, 1, 1}, {1, 1, 1, 1}) == 0.0);
  CHECK(iou({0, 0, 0, 5}, {0, 0, 0, 5}) == 0.0);
}

TEST_CASE("iou symmetry and range on random boxes") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 2000; ++n) {
    const Box a{oracles::uniform(rng, 0, 10), oracles::uniform(rng, 0, 10),
                oracles::uniform(rng, 10, 20), oracles::uniform(rng, 10, 20)};
    const Box b{oracles::uniform(rng, 0, 15), oracles::uniform(rng, 0, 15),
                oracles::uniform(rng, 15, 25), oracles::uniform(rng, 15, 25)};
    const double ab = iou(a, b);
    CHECK(ab == iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(giou(a, b) <= ab + 1e-12);
  }
}

TEST_CASE("giou values") {
  CHECK(giou({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0));
  CHECK(giou({0, 0, 2, 2}, {1, 1, 3, 3}) ==
        doctest::Approx(1.0 / 7.0 - 2.0 / 9.0));
  // far apart boxes approach -1
  CHECK(giou({0, 0, 1, 1}, {999, 999, 1000, 1000}) < -0.99);
}

TEST_CASE("decode_box and encode_offsets") {
  const AnchorPoint origin{0, 0, 1};
  const Box b = decode_box(origin, {1, 1, 1, 1});
  CHECK(b.x1 == -1);
  CHECK(b.y1 == -1);
  CHECK(b.x2 == 1);
  CHECK(b.y2 == 1);

  const Box point = decode_box(origin, {0, 0, 0, 0});
  CHECK(point.area() == 0.0);

  CHECK_THROWS_AS(decode_box(origin, {-0.1, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(encode_offsets({0, 0, 1}, {1, 1, 2, 2}),
                  std::invalid_argument);

  // round trip over random boxes containing the anchor
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const AnchorPoint anchor{oracles::uniform(rng, 0, 8),
                             oracles::uniform(rng, 0, 8),
                             oracles::uniform(rng, 0.5, 16)};
    const Box box{anchor.x() - oracles::uniform(rng, 0, 20),
                  anchor.y() - oracles::uniform(rng, 0, 20),
                  anchor.x() + oracles::uniform(rng, 0, 20),
                  anchor.y() + oracles::uniform(rng, 0, 20)};
    const Box back = decode_box(anchor, encode_offsets(anchor, box));
    CHECK(back.x1 == doctest::Approx(box.x1).epsilon(1e-9));
    CHECK(back.y1 == doctest::Approx(box.y1).epsilon(1e-9));
    CHECK(back.x2 == doctest::Approx(box.x2).epsilon(1e-9));
    CHECK(back.y2 == doctest::Approx(box.y2).epsilon(1e-9));
  }
}

TEST_CASE("boundary points") {
  const AnchorPoint anchor{5, 5, 1};

  SUBCASE("direct substitution") {
    const BoundaryPoints p = boundary_points(anchor, {2, 0, 0, 0}, {});
    CHECK(p.left.row == 5);
    CHECK(p.left.col == 3);
  }

  SUBCASE("zero deltas give the side points of a centered box") {
    const OffsetVector o{2, 3, 2, 3};
    const BoundaryPoints p = boundary_points(anchor, o, {});
    CHECK(p.left.row == 5);
    CHECK(p.left.col == 3);
    CHECK(p.top.row == 2);
    CHECK(p.top.col == 5);
    CHECK(p.right.row == 5);
    CHECK(p.right.col == 7);
    CHECK(p.bottom.row == 8);
    CHECK(p.bottom.col == 5);
  }

  SUBCASE("dy_l moves the left point vertically only") {
    BoundaryDeltas d;
    d.dy_l = 1.5;
    const BoundaryPoints p = boundary_points(anchor, {2, 2, 2, 2}, d);
    CHECK(p.left.row == 6.5);
    CHECK(p.left.col == 3);
  }
}

TEST_CASE("sample_map") {
  OffsetMap m(3, 3);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      m.at(j, i, 0) = j * 10 + i;
    }
  }
  CHECK(sample_map(m, {1, 2}, 0) == 12.0);
  CHECK(sample_map(m, {0, 0.5}, 0) == doctest::Approx(0.5));
  CHECK(sample_map(m, {0.5, 0}, 0) == doctest::Approx(5.0));
  // border clamp
  CHECK(sample_map(m, {-3, 10}, 0) == 2.0);
  CHECK_THROWS_AS(sample_map(m, {0, 0}, 4), std::invalid_argument);

  OffsetMap constant(4, 5);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 5; ++i) constant.at(j, i, 2) = 3.25;
  }
  std::mt19937_64 rng(3);
  for (int n = 0; n < 200; ++n) {
    const GridPoint p{oracles::uniform(rng, -2, 6), oracles::uniform(rng, -2, 7)};
    CHECK(sample_map(constant, p, 2) == doctest::Approx(3.25));
  }
}

TEST_CASE("refine with zero deltas doubles a constant field") {
  OffsetMap m(4, 4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) m.set(j, i, {1.5, 0.5, 2.0, 1.0});
  }
  DeltaMap d(4, 4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const OffsetVector o = refine_offsets(m, d, j, i);
      CHECK(o.left == doctest::Approx(3.0));
      CHECK(o.top == doctest::Approx(1.0));
      CHECK(o.right == doctest::Approx(4.0));
      CHECK(o.bottom == doctest::Approx(2.0));
    }
  }
}

TEST_CASE("refine of a zero field with zero deltas is zero") {
  OffsetMap m(3, 3);
  DeltaMap d(3, 3);
  const OffsetVector o = refine_offsets(m, d, 1, 1);
  CHECK(o.left == 0.0);
  CHECK(o.top == 0.0);
  CHECK(o.right == 0.0);
  CHECK(o.bottom == 0.0);
}

TEST_CASE("refine matches the brute-force oracle on random maps") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = 2 + int(rng() % 6);
    const int w = 2 + int(rng() % 6);
    OffsetMap m(h, w);
    DeltaMap d(h, w);
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        for (int c = 0; c < 4; ++c) {
          m.at(j, i, c) = oracles::uniform(rng, 0, 4);
        }
        BoundaryDeltas& bd = d.at(j, i);
        for (double* f : {&bd.dx_l, &bd.dy_l, &bd.dx_t, &bd.dy_t, &bd.dx_r,
                          &bd.dy_r, &bd.dx_b, &bd.dy_b}) {
          *f = oracles::uniform(rng, -1.5, 1.5);
        }
      }
    }
    for (const RefineSign sign : {RefineSign::kAdditive, RefineSign::kDistance}) {
      const OffsetMap refined = refine_map(m, d, sign);
      for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
          const OffsetVector want = oracles::refine_reference(
              m, d, j, i, sign == RefineSign::kDistance);
          CHECK(refined.at(j, i, 0) == doctest::Approx(want.left).epsilon(1e-12));
          CHECK(refined.at(j, i, 1) == doctest::Approx(want.top).epsilon(1e-12));
          CHECK(refined.at(j, i, 2) == doctest::Approx(want.right).epsilon(1e-12));
          CHECK(refined.at(j, i, 3) == doctest::Approx(want.bottom).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("refine sign switch flips only the left/top displacement") {
  OffsetMap m(3, 3);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) m.set(j, i, {1, 1, 1, 1});
  }
  DeltaMap d(3, 3);
  d.at(1, 1).dx_l = 0.25;
  d.at(1, 1).dy_t = 0.5;
  d.at(1, 1).dx_r = 0.125;
  const OffsetVector add = refine_offsets(m, d, 1, 1, RefineSign::kAdditive);
  const OffsetVector dist = refine_offsets(m, d, 1, 1, RefineSign::kDistance);
  CHECK(add.left - dist.left == doctest::Approx(0.5));
  CHECK(add.top - dist.top == doctest::Approx(1.0));
  CHECK(add.right == dist.right);
  CHECK(add.bottom == dist.bottom);
}
