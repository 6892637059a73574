#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "occamix/grid.hpp"

namespace occamix {

// Closed set of grid transforms. Programs are sequences of these; see
// docs/dsl.md for the grammar and the exact apply semantics.
enum class TransformKind {
  Translate,
  DuplicateOffset,
  ReplicateVertical,
  MoveToCenter,
  Rotate,
  Reflect,
  Recolor,
  PerColumn,
  PerObject,
  FillColumn,
};

enum class VerticalDirection { Up, Down, Both };
enum class StopRule { Blocked, Edge };
enum class Axis { Horizontal, Vertical };
enum class ColumnParity { Even, Odd };
enum class ObjectFilterKind { Color, Size };

struct ObjectFilter {
  ObjectFilterKind kind = ObjectFilterKind::Color;
  int value = 0;
  friend bool operator==(const ObjectFilter&, const ObjectFilter&) = default;
};

struct Transform {
  TransformKind kind = TransformKind::MoveToCenter;
  int dx = 0, dy = 0;                // translate, duplicate_offset
  VerticalDirection direction = VerticalDirection::Both;
  StopRule until = StopRule::Edge;   // replicate_vertical
  int quarter_turns = 0;             // rotate, clockwise
  Axis axis = Axis::Horizontal;      // reflect
  int from = 0, to = 0;              // recolor
  ColumnParity parity = ColumnParity::Even;
  ObjectFilter filter;               // per_object
  std::vector<Transform> inner;      // exactly one for per_column/per_object

  friend bool operator==(const Transform&, const Transform&) = default;
};

struct Program {
  std::vector<Transform> steps;
  friend bool operator==(const Program&, const Program&) = default;
};

struct Hypothesis {
  std::string id;
  std::string description;
  std::vector<std::string> sub_hypotheses;
  Program program;
  std::string program_text;  // canonical form of `program`
};

// Parses DSL text into a validated AST. Errors: SyntaxError (with byte
// offset), UnknownTransform, ParamOutOfRange.
Program parse_program(std::string_view text);

// Canonical text; parse_program(unparse(p)) == p, and unparse is the
// identity on already-canonical text.
std::string unparse(const Transform& t);
std::string unparse(const Program& p);

// Total on valid inputs: output has the input's dimensions, cells moved out
// of bounds are dropped, later writes overwrite earlier ones.
Grid apply_transform(const Transform& t, const Grid& input);
Grid apply_program(const Program& p, const Grid& input);

// Lowercased tokens: maximal alphanumeric runs plus single punctuation
// characters; whitespace separates only.
std::vector<std::string> tokenize_text(std::string_view text);

// Token length of the hypothesis text: description then sub-hypotheses,
// whitespace-joined.
int token_length(const Hypothesis& h);

// Validates invariants and parses the program; `id` is reported in errors.
Hypothesis make_hypothesis(std::string id, std::string description,
                           std::vector<std::string> sub_hypotheses,
                           const std::string& program_text);

}  // namespace occamix
