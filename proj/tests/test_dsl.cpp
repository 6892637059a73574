#include <doctest.h>

#include <cctype>
#include <functional>

#include "occamix/dsl.hpp"
#include "test_helpers.hpp"

using namespace occamix;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ConfigError;
}

// Random valid AST for round-trip properties.
Transform random_transform(std::mt19937& rng, int structured_depth) {
  std::uniform_int_distribution<int> pick(0, structured_depth < 2 ? 9 : 7);
  std::uniform_int_distribution<int> offset(-4, 4);
  std::uniform_int_distribution<int> color(0, 9);
  std::uniform_int_distribution<int> small(0, 4);
  Transform t;
  switch (pick(rng)) {
    case 0:
      t.kind = TransformKind::Translate;
      t.dx = offset(rng);
      t.dy = offset(rng);
      break;
    case 1:
      t.kind = TransformKind::DuplicateOffset;
      t.dx = offset(rng);
      t.dy = offset(rng);
      break;
    case 2:
      t.kind = TransformKind::ReplicateVertical;
      t.direction = static_cast<VerticalDirection>(small(rng) % 3);
      t.until = small(rng) % 2 ? StopRule::Blocked : StopRule::Edge;
      break;
    case 3:
      t.kind = TransformKind::MoveToCenter;
      break;
    case 4:
      t.kind = TransformKind::Rotate;
      t.quarter_turns = small(rng);
      break;
    case 5:
      t.kind = TransformKind::Reflect;
      t.axis = small(rng) % 2 ? Axis::Horizontal : Axis::Vertical;
      break;
    case 6:
      t.kind = TransformKind::Recolor;
      t.from = color(rng);
      t.to = color(rng);
      break;
    case 7:
      t.kind = TransformKind::FillColumn;
      break;
    case 8:
      t.kind = TransformKind::PerColumn;
      t.parity = small(rng) % 2 ? ColumnParity::Even : ColumnParity::Odd;
      t.inner.push_back(random_transform(rng, structured_depth + 1));
      break;
    default:
      t.kind = TransformKind::PerObject;
      t.filter.kind =
          small(rng) % 2 ? ObjectFilterKind::Color : ObjectFilterKind::Size;
      t.filter.value = t.filter.kind == ObjectFilterKind::Color
                           ? color(rng)
                           : 1 + small(rng);
      t.inner.push_back(random_transform(rng, structured_depth + 1));
      break;
  }
  return t;
}

Grid cell_at(int r, int c, int v) {
  Grid g(5, 5);
  g.set(r, c, static_cast<CellValue>(v));
  return g;
}

}  // namespace

TEST_CASE("parse_program basic shapes") {
  const Program p = parse_program("translate(dx=2, dy=0)");
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0].kind == TransformKind::Translate);
  CHECK(p.steps[0].dx == 2);
  CHECK(p.steps[0].dy == 0);

  // Nested AST shape checked node by node against the grammar.
  const Program nested =
      parse_program("per_column(parity=even, inner=translate(dx=0, dy=-1))");
  REQUIRE(nested.steps.size() == 1);
  const Transform& outer = nested.steps[0];
  CHECK(outer.kind == TransformKind::PerColumn);
  CHECK(outer.parity == ColumnParity::Even);
  REQUIRE(outer.inner.size() == 1);
  CHECK(outer.inner[0].kind == TransformKind::Translate);
  CHECK(outer.inner[0].dx == 0);
  CHECK(outer.inner[0].dy == -1);

  const Program multi = parse_program("move_to_center; fill_column");
  CHECK(multi.steps.size() == 2);
  CHECK(parse_program("move_to_center()") == parse_program("move_to_center"));
}

TEST_CASE("parse_program errors") {
  CHECK(code_of([] { parse_program("warp(x=1)"); }) ==
        ErrorCode::UnknownTransform);
  CHECK(code_of([] { parse_program("translate(dx=45, dy=0)"); }) ==
        ErrorCode::ParamOutOfRange);
  CHECK(code_of([] { parse_program("translate(dx=1)"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_program("translate(dx=1, dx=2, dy=0)"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_program("rotate(quarter_turns=9)"); }) ==
        ErrorCode::ParamOutOfRange);
  CHECK(code_of([] { parse_program(""); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] {
          parse_program(
              "per_column(parity=even, inner=per_column(parity=odd, "
              "inner=per_object(filter=size:1, inner=move_to_center)))");
        }) == ErrorCode::ParamOutOfRange);

  // Reported offset points at the offending token.
  try {
    parse_program("translate(dx=2 dy=0)");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("offset 15") != std::string::npos);
  }
}

TEST_CASE("unparse round-trips") {
  for (const char* canonical : {
           "translate(dx=2, dy=0)",
           "duplicate_offset(dx=-1, dy=3)",
           "replicate_vertical(direction=both, until=blocked)",
           "move_to_center",
           "rotate(quarter_turns=3)",
           "reflect(axis=v)",
           "recolor(from=2, to=7)",
           "per_column(parity=odd, inner=translate(dx=0, dy=1))",
           "per_object(filter=size:2, inner=reflect(axis=h))",
           "per_object(filter=color:4, inner=per_column(parity=even, "
           "inner=fill_column))",
           "fill_column",
           "move_to_center; translate(dx=1, dy=1); fill_column",
       }) {
    CAPTURE(canonical);
    CHECK(unparse(parse_program(canonical)) == canonical);
  }

  std::mt19937 rng(17);
  for (int iter = 0; iter < 300; ++iter) {
    Program p;
    const int steps = 1 + iter % 3;
    for (int s = 0; s < steps; ++s) p.steps.push_back(random_transform(rng, 0));
    CHECK(parse_program(unparse(p)) == p);
  }
}

TEST_CASE("apply translate and duplicate") {
  // Move from (0,0) to (0,2): dx counts columns, dy counts rows.
  const Grid moved =
      apply_program(parse_program("translate(dx=2, dy=0)"), cell_at(0, 0, 2));
  CHECK(moved == cell_at(0, 2, 2));

  const Grid same =
      apply_program(parse_program("translate(dx=0, dy=0)"), cell_at(3, 1, 5));
  CHECK(same == cell_at(3, 1, 5));

  // Out-of-bounds cells are dropped.
  const Grid gone =
      apply_program(parse_program("translate(dx=0, dy=-3)"), cell_at(1, 1, 5));
  CHECK(gone == Grid(5, 5));

  Grid dup = apply_program(parse_program("duplicate_offset(dx=2, dy=0)"),
                           cell_at(0, 0, 2));
  Grid expected = cell_at(0, 0, 2);
  expected.set(0, 2, 2);
  CHECK(dup == expected);
}

TEST_CASE("apply replicate_vertical") {
  const Program both_edge =
      parse_program("replicate_vertical(direction=both, until=edge)");
  Grid column = apply_program(both_edge, cell_at(2, 1, 3));
  for (int r = 0; r < 5; ++r) CHECK(column.at(r, 1) == 3);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c)
      if (c != 1) CHECK(column.at(r, c) == 0);

  // blocked: stops before a differently-colored input cell...
  Grid with_block = cell_at(3, 1, 3);
  with_block.set(1, 1, 5);
  const Grid blocked = apply_program(
      parse_program("replicate_vertical(direction=up, until=blocked)"),
      with_block);
  CHECK(blocked.at(2, 1) == 3);
  CHECK(blocked.at(1, 1) == 5);
  CHECK(blocked.at(0, 1) == 5);  // the blocker replicates too

  // ...but passes through same-colored cells.
  Grid same_color = cell_at(3, 1, 3);
  same_color.set(1, 1, 3);
  const Grid passed = apply_program(
      parse_program("replicate_vertical(direction=up, until=blocked)"),
      same_color);
  CHECK(passed.at(0, 1) == 3);

  // edge ignores blockers; the later row-major source overwrites the
  // earlier ray all the way up.
  const Grid bulldozed = apply_program(
      parse_program("replicate_vertical(direction=up, until=edge)"),
      with_block);
  CHECK(bulldozed.at(0, 1) == 3);
  CHECK(bulldozed.at(1, 1) == 3);
  CHECK(bulldozed.at(2, 1) == 3);
}

TEST_CASE("apply move_to_center and fill_column") {
  Grid cross(5, 5);
  for (auto [r, c] : {std::pair{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}})
    cross.set(r, c, 4);
  const Grid centered =
      apply_program(parse_program("move_to_center"), cross);
  Grid expected(5, 5);
  for (auto [r, c] : {std::pair{1, 2}, {2, 1}, {2, 2}, {2, 3}, {3, 2}})
    expected.set(r, c, 4);
  CHECK(centered == expected);

  Grid mixed(5, 5);
  mixed.set(1, 2, 3);
  mixed.set(3, 2, 7);  // same column, different colors: topmost wins
  const Grid filled = apply_program(parse_program("fill_column"), mixed);
  for (int r = 0; r < 5; ++r) CHECK(filled.at(r, 2) == 3);
}

TEST_CASE("apply per_column and per_object") {
  Grid g(5, 5);
  g.set(2, 0, 3);  // even column
  g.set(2, 3, 7);  // odd column
  const Grid shifted = apply_program(
      parse_program("per_column(parity=even, inner=translate(dx=0, dy=-1)); "
                    "per_column(parity=odd, inner=translate(dx=0, dy=1))"),
      g);
  Grid expected(5, 5);
  expected.set(1, 0, 3);
  expected.set(3, 3, 7);
  CHECK(shifted == expected);

  Grid two(5, 5);
  two.set(0, 0, 2);
  two.set(4, 4, 5);
  const Grid recolored = apply_program(
      parse_program("per_object(filter=color:2, inner=recolor(from=2, to=9))"),
      two);
  CHECK(recolored.at(0, 0) == 9);
  CHECK(recolored.at(4, 4) == 5);

  // Size filter: only the 2-cell object moves.
  Grid sized(5, 5);
  sized.set(0, 0, 2);
  sized.set(0, 1, 2);
  sized.set(4, 4, 2);
  const Grid nudged = apply_program(
      parse_program("per_object(filter=size:2, inner=translate(dx=0, dy=1))"),
      sized);
  CHECK(nudged.at(1, 0) == 2);
  CHECK(nudged.at(1, 1) == 2);
  CHECK(nudged.at(0, 0) == 0);
  CHECK(nudged.at(4, 4) == 2);
}

TEST_CASE("rotate and reflect algebra") {
  std::mt19937 rng(41);
  for (int iter = 0; iter < 100; ++iter) {
    const int n = 1 + iter % 6;
    const Grid g = testutil::random_grid(rng, n, n, 0.5);
    for (int k = 0; k <= 4; ++k) {
      Transform rot;
      rot.kind = TransformKind::Rotate;
      rot.quarter_turns = k;
      Grid four_times = g;
      for (int i = 0; i < 4; ++i) four_times = apply_transform(rot, four_times);
      CHECK(four_times == g);
    }
    Transform full;
    full.kind = TransformKind::Rotate;
    full.quarter_turns = 4;
    CHECK(apply_transform(full, g) == g);

    const Grid rect = testutil::random_grid(rng, n, n + 1, 0.5);
    for (const Axis axis : {Axis::Horizontal, Axis::Vertical}) {
      Transform refl;
      refl.kind = TransformKind::Reflect;
      refl.axis = axis;
      CHECK(apply_transform(refl, apply_transform(refl, rect)) == rect);
    }
  }

  // Odd quarter turns on non-square canvases pass the grid through.
  const Grid rect = testutil::random_grid(rng, 3, 5, 0.5);
  Transform quarter;
  quarter.kind = TransformKind::Rotate;
  quarter.quarter_turns = 1;
  CHECK(apply_transform(quarter, rect) == rect);
}

TEST_CASE("apply preserves dimensions and palette") {
  std::mt19937 rng(59);
  for (int iter = 0; iter < 500; ++iter) {
    Program p;
    const int steps = 1 + iter % 3;
    for (int s = 0; s < steps; ++s) p.steps.push_back(random_transform(rng, 0));
    const int rows = 1 + iter % 7, cols = 1 + (iter * 3) % 7;
    const Grid g = testutil::random_grid(rng, rows, cols, 0.45);
    const Grid out = apply_program(p, g);
    CHECK(out.rows() == rows);
    CHECK(out.cols() == cols);
    for (const CellValue v : out.cells()) CHECK(v < kNumColors);
  }
}

TEST_CASE("token_length follows the tokenizer rules") {
  const Hypothesis move =
      make_hypothesis("h", "move right", {}, "translate(dx=1, dy=0)");
  CHECK(token_length(move) == 2);

  // 9 words plus the terminal period under the stated rules.
  const Hypothesis shift = make_hypothesis(
      "h", "Shift all red squares two cells to the right.", {},
      "translate(dx=2, dy=0)");
  CHECK(token_length(shift) == 10);

  CHECK(tokenize_text("(0,0)") ==
        std::vector<std::string>{"(", "0", ",", "0", ")"});
  CHECK(tokenize_text("Cross-shaped") ==
        std::vector<std::string>{"cross", "-", "shaped"});

  // Sub-hypotheses join the measured text.
  const Hypothesis with_subs = make_hypothesis(
      "h", "move right", {"keep color", "keep size"}, "translate(dx=1, dy=0)");
  CHECK(token_length(with_subs) == 6);

  CHECK(token_length(move) == token_length(move));
}

TEST_CASE("token_length ignores case and outer whitespace") {
  std::mt19937 rng(71);
  const std::string base = "Shift all red squares two cells";
  const Hypothesis h1 = make_hypothesis("a", base, {}, "move_to_center");
  const Hypothesis h2 =
      make_hypothesis("a", "  " + base + "  \t", {}, "move_to_center");
  std::string upper = base;
  for (char& ch : upper) ch = std::toupper(static_cast<unsigned char>(ch));
  const Hypothesis h3 = make_hypothesis("a", upper, {}, "move_to_center");
  CHECK(token_length(h1) == token_length(h2));
  CHECK(token_length(h1) == token_length(h3));
  (void)rng;
}

TEST_CASE("make_hypothesis validates") {
  try {
    make_hypothesis("x", "   ", {}, "move_to_center");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaError);
  }
  try {
    make_hypothesis("x", "fine", {}, "warp(x=1)");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ProgramParseError);
    CHECK(std::string(e.what()).find("'x'") != std::string::npos);
  }
}
