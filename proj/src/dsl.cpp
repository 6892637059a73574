#include "occamix/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace occamix {

namespace {

constexpr int kMaxOffset = kMaxGridDim;   // dx/dy range
constexpr int kMaxObjectSize = kMaxGridDim * kMaxGridDim;
constexpr int kMaxStructuredDepth = 2;    // per_column/per_object nesting

// ---------------------------------------------------------------- lexing

enum class TokKind { Ident, Int, Symbol, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int pos = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_])))
      ++i_;
    const int pos = static_cast<int>(i_);
    if (i_ >= src_.size()) return {TokKind::End, "", pos};
    const char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const size_t b = i_;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
              src_[i_] == '_'))
        ++i_;
      return {TokKind::Ident, std::string(src_.substr(b, i_ - b)), pos};
    }
    const bool neg = c == '-' && i_ + 1 < src_.size() &&
                     std::isdigit(static_cast<unsigned char>(src_[i_ + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || neg) {
      const size_t b = i_++;
      while (i_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[i_])))
        ++i_;
      return {TokKind::Int, std::string(src_.substr(b, i_ - b)), pos};
    }
    ++i_;
    return {TokKind::Symbol, std::string(1, c), pos};
  }

private:
  std::string_view src_;
  size_t i_ = 0;
};

const std::map<std::string, TransformKind, std::less<>>& transform_names() {
  static const std::map<std::string, TransformKind, std::less<>> names = {
      {"translate", TransformKind::Translate},
      {"duplicate_offset", TransformKind::DuplicateOffset},
      {"replicate_vertical", TransformKind::ReplicateVertical},
      {"move_to_center", TransformKind::MoveToCenter},
      {"rotate", TransformKind::Rotate},
      {"reflect", TransformKind::Reflect},
      {"recolor", TransformKind::Recolor},
      {"per_column", TransformKind::PerColumn},
      {"per_object", TransformKind::PerObject},
      {"fill_column", TransformKind::FillColumn},
  };
  return names;
}

[[noreturn]] void range_fail(const std::string& transform,
                             const std::string& param, int value,
                             const std::string& range) {
  throw Error(ErrorCode::ParamOutOfRange, transform + ": " + param + "=" +
                                              std::to_string(value) +
                                              " outside " + range);
}

// ---------------------------------------------------------------- parsing

class Parser {
public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  Program parse() {
    Program p;
    p.steps.push_back(parse_transform(0));
    while (accept_symbol(";")) p.steps.push_back(parse_transform(0));
    if (cur_.kind != TokKind::End) fail("';' or end of program");
    return p;
  }

private:
  void advance() { cur_ = lex_.next(); }

  bool accept_symbol(const char* s) {
    if (cur_.kind == TokKind::Symbol && cur_.text == s) {
      advance();
      return true;
    }
    return false;
  }

  void expect_symbol(const char* s) {
    if (!accept_symbol(s)) fail(std::string("'") + s + "'");
  }

  [[noreturn]] void fail(const std::string& expected) {
    const std::string got =
        cur_.kind == TokKind::End ? "<end>" : "'" + cur_.text + "'";
    throw Error(ErrorCode::SyntaxError,
                "at offset " + std::to_string(cur_.pos) + ": expected " +
                    expected + ", got " + got);
  }

  std::string expect_ident(const char* what) {
    if (cur_.kind != TokKind::Ident) fail(what);
    std::string s = cur_.text;
    advance();
    return s;
  }

  int expect_int(const char* what) {
    if (cur_.kind != TokKind::Int) fail(what);
    int v = std::stoi(cur_.text);
    advance();
    return v;
  }

  // structured_depth counts enclosing per_column/per_object nodes.
  Transform parse_transform(int structured_depth) {
    if (cur_.kind != TokKind::Ident) fail("transform name");
    const Token name = cur_;
    advance();
    const auto it = transform_names().find(name.text);
    if (it == transform_names().end())
      throw Error(ErrorCode::UnknownTransform,
                  "unknown transform '" + name.text + "'");
    Transform t;
    t.kind = it->second;

    const bool structured = t.kind == TransformKind::PerColumn ||
                            t.kind == TransformKind::PerObject;
    if (structured && structured_depth >= kMaxStructuredDepth)
      throw Error(ErrorCode::ParamOutOfRange,
                  name.text + ": nesting depth exceeds " +
                      std::to_string(kMaxStructuredDepth));

    std::map<std::string, bool> seen;
    if (accept_symbol("(")) {
      if (!accept_symbol(")")) {
        do {
          parse_arg(t, structured_depth, seen);
        } while (accept_symbol(","));
        expect_symbol(")");
      }
    }
    finish(t, name.text, seen);
    return t;
  }

  void parse_arg(Transform& t, int structured_depth,
                 std::map<std::string, bool>& seen) {
    const std::string key = expect_ident("argument name");
    if (seen.count(key)) fail("distinct argument names");
    seen[key] = true;
    expect_symbol("=");
    switch (t.kind) {
      case TransformKind::Translate:
      case TransformKind::DuplicateOffset:
        if (key == "dx") t.dx = expect_int("integer");
        else if (key == "dy") t.dy = expect_int("integer");
        else fail("'dx' or 'dy'");
        return;
      case TransformKind::ReplicateVertical:
        if (key == "direction") {
          const std::string v = expect_ident("up|down|both");
          if (v == "up") t.direction = VerticalDirection::Up;
          else if (v == "down") t.direction = VerticalDirection::Down;
          else if (v == "both") t.direction = VerticalDirection::Both;
          else fail("up|down|both");
        } else if (key == "until") {
          const std::string v = expect_ident("blocked|edge");
          if (v == "blocked") t.until = StopRule::Blocked;
          else if (v == "edge") t.until = StopRule::Edge;
          else fail("blocked|edge");
        } else {
          fail("'direction' or 'until'");
        }
        return;
      case TransformKind::Rotate:
        if (key == "quarter_turns") t.quarter_turns = expect_int("integer");
        else fail("'quarter_turns'");
        return;
      case TransformKind::Reflect:
        if (key == "axis") {
          const std::string v = expect_ident("h|v");
          if (v == "h") t.axis = Axis::Horizontal;
          else if (v == "v") t.axis = Axis::Vertical;
          else fail("h|v");
        } else {
          fail("'axis'");
        }
        return;
      case TransformKind::Recolor:
        if (key == "from") t.from = expect_int("integer");
        else if (key == "to") t.to = expect_int("integer");
        else fail("'from' or 'to'");
        return;
      case TransformKind::PerColumn:
        if (key == "parity") {
          const std::string v = expect_ident("even|odd");
          if (v == "even") t.parity = ColumnParity::Even;
          else if (v == "odd") t.parity = ColumnParity::Odd;
          else fail("even|odd");
        } else if (key == "inner") {
          t.inner.push_back(parse_transform(structured_depth + 1));
        } else {
          fail("'parity' or 'inner'");
        }
        return;
      case TransformKind::PerObject:
        if (key == "filter") {
          const std::string v = expect_ident("color|size");
          if (v == "color") t.filter.kind = ObjectFilterKind::Color;
          else if (v == "size") t.filter.kind = ObjectFilterKind::Size;
          else fail("color|size");
          expect_symbol(":");
          t.filter.value = expect_int("integer");
        } else if (key == "inner") {
          t.inner.push_back(parse_transform(structured_depth + 1));
        } else {
          fail("'filter' or 'inner'");
        }
        return;
      case TransformKind::MoveToCenter:
      case TransformKind::FillColumn:
        fail("no arguments");
    }
  }

  // Required-argument and range checks once all args are read.
  void finish(Transform& t, const std::string& name,
              const std::map<std::string, bool>& seen) {
    auto require = [&](const char* key) {
      if (!seen.count(key))
        throw Error(ErrorCode::SyntaxError,
                    name + ": missing argument '" + std::string(key) + "'");
    };
    switch (t.kind) {
      case TransformKind::Translate:
      case TransformKind::DuplicateOffset:
        require("dx");
        require("dy");
        if (t.dx < -kMaxOffset || t.dx > kMaxOffset)
          range_fail(name, "dx", t.dx, "[-30,30]");
        if (t.dy < -kMaxOffset || t.dy > kMaxOffset)
          range_fail(name, "dy", t.dy, "[-30,30]");
        break;
      case TransformKind::ReplicateVertical:
        require("direction");
        require("until");
        break;
      case TransformKind::Rotate:
        require("quarter_turns");
        if (t.quarter_turns < 0 || t.quarter_turns > 4)
          range_fail(name, "quarter_turns", t.quarter_turns, "[0,4]");
        break;
      case TransformKind::Reflect:
        require("axis");
        break;
      case TransformKind::Recolor:
        require("from");
        require("to");
        if (t.from < 0 || t.from >= kNumColors)
          range_fail(name, "from", t.from, "[0,9]");
        if (t.to < 0 || t.to >= kNumColors)
          range_fail(name, "to", t.to, "[0,9]");
        break;
      case TransformKind::PerColumn:
        require("parity");
        require("inner");
        break;
      case TransformKind::PerObject:
        require("filter");
        require("inner");
        if (t.filter.kind == ObjectFilterKind::Color &&
            (t.filter.value < 0 || t.filter.value >= kNumColors))
          range_fail(name, "filter=color", t.filter.value, "[0,9]");
        if (t.filter.kind == ObjectFilterKind::Size &&
            (t.filter.value < 1 || t.filter.value > kMaxObjectSize))
          range_fail(name, "filter=size", t.filter.value, "[1,900]");
        break;
      case TransformKind::MoveToCenter:
      case TransformKind::FillColumn:
        break;
    }
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).parse(); }

std::string unparse(const Transform& t) {
  char buf[96];
  switch (t.kind) {
    case TransformKind::Translate:
      std::snprintf(buf, sizeof(buf), "translate(dx=%d, dy=%d)", t.dx, t.dy);
      return buf;
    case TransformKind::DuplicateOffset:
      std::snprintf(buf, sizeof(buf), "duplicate_offset(dx=%d, dy=%d)", t.dx,
                    t.dy);
      return buf;
    case TransformKind::ReplicateVertical: {
      const char* dir = t.direction == VerticalDirection::Up     ? "up"
                        : t.direction == VerticalDirection::Down ? "down"
                                                                 : "both";
      const char* until = t.until == StopRule::Blocked ? "blocked" : "edge";
      std::snprintf(buf, sizeof(buf),
                    "replicate_vertical(direction=%s, until=%s)", dir, until);
      return buf;
    }
    case TransformKind::MoveToCenter:
      return "move_to_center";
    case TransformKind::Rotate:
      std::snprintf(buf, sizeof(buf), "rotate(quarter_turns=%d)",
                    t.quarter_turns);
      return buf;
    case TransformKind::Reflect:
      return t.axis == Axis::Horizontal ? "reflect(axis=h)" : "reflect(axis=v)";
    case TransformKind::Recolor:
      std::snprintf(buf, sizeof(buf), "recolor(from=%d, to=%d)", t.from, t.to);
      return buf;
    case TransformKind::PerColumn:
      return std::string("per_column(parity=") +
             (t.parity == ColumnParity::Even ? "even" : "odd") +
             ", inner=" + unparse(t.inner.front()) + ")";
    case TransformKind::PerObject:
      return std::string("per_object(filter=") +
             (t.filter.kind == ObjectFilterKind::Color ? "color" : "size") +
             ":" + std::to_string(t.filter.value) +
             ", inner=" + unparse(t.inner.front()) + ")";
    case TransformKind::FillColumn:
      return "fill_column";
  }
  return "";
}

std::string unparse(const Program& p) {
  std::string out;
  for (size_t i = 0; i < p.steps.size(); ++i) {
    if (i) out += "; ";
    out += unparse(p.steps[i]);
  }
  return out;
}

// ------------------------------------------------------------- execution

namespace {

// Overlays every nonzero cell of `src` onto `dst`, row-major order.
void overlay(Grid& dst, const Grid& src) {
  for (int r = 0; r < src.rows(); ++r)
    for (int c = 0; c < src.cols(); ++c)
      if (const CellValue v = src.at(r, c)) dst.set(r, c, v);
}

Grid apply_translate(const Transform& t, const Grid& g) {
  Grid out(g.rows(), g.cols());
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      if (const CellValue v = g.at(r, c)) {
        const int nr = r + t.dy, nc = c + t.dx;
        if (g.in_bounds(nr, nc)) out.set(nr, nc, v);
      }
  return out;
}

Grid apply_duplicate(const Transform& t, const Grid& g) {
  Grid out = g;
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      if (const CellValue v = g.at(r, c)) {
        const int nr = r + t.dy, nc = c + t.dx;
        if (g.in_bounds(nr, nc)) out.set(nr, nc, v);
      }
  return out;
}

Grid apply_replicate_vertical(const Transform& t, const Grid& g) {
  Grid out = g;
  auto ray = [&](int r, int c, CellValue v, int step) {
    for (int rr = r + step; rr >= 0 && rr < g.rows(); rr += step) {
      const CellValue original = g.at(rr, c);
      // "blocked": stop before a differently-colored nonzero input cell.
      if (t.until == StopRule::Blocked && original != 0 && original != v)
        break;
      out.set(rr, c, v);
    }
  };
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      if (const CellValue v = g.at(r, c)) {
        if (t.direction != VerticalDirection::Down) ray(r, c, v, -1);
        if (t.direction != VerticalDirection::Up) ray(r, c, v, 1);
      }
  return out;
}

Grid apply_move_to_center(const Grid& g) {
  // Object semantics inside the DSL are fixed to 4-connectivity so a
  // program's meaning never depends on run configuration.
  const auto objects = extract_objects(g, Connectivity::Four);
  Grid out(g.rows(), g.cols());
  const int tr = (g.rows() - 1) / 2, tc = (g.cols() - 1) / 2;
  for (const auto& o : objects) {
    const int cr = (o.bounding_box.min_row + o.bounding_box.max_row) / 2;
    const int cc = (o.bounding_box.min_col + o.bounding_box.max_col) / 2;
    const int dy = tr - cr, dx = tc - cc;
    for (auto [r, c] : o.cells) {
      const int nr = r + dy, nc = c + dx;
      if (g.in_bounds(nr, nc)) out.set(nr, nc, o.color);
    }
  }
  return out;
}

Grid rotate_cw_once(const Grid& g) {
  const int n = g.rows();
  Grid out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.set(r, c, g.at(n - 1 - c, r));
  return out;
}

Grid apply_rotate(const Transform& t, const Grid& g) {
  const int k = t.quarter_turns % 4;
  if (k == 0) return g;
  if (k == 2) {
    Grid out(g.rows(), g.cols());
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.cols(); ++c)
        out.set(r, c, g.at(g.rows() - 1 - r, g.cols() - 1 - c));
    return out;
  }
  // Odd quarter turns are shape-changing; on non-square canvases they are
  // a documented no-op to keep apply total and dimension-preserving.
  if (g.rows() != g.cols()) return g;
  Grid out = rotate_cw_once(g);
  if (k == 3) out = rotate_cw_once(rotate_cw_once(out));
  return out;
}

Grid apply_reflect(const Transform& t, const Grid& g) {
  Grid out(g.rows(), g.cols());
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      out.set(r, c, t.axis == Axis::Horizontal
                        ? g.at(g.rows() - 1 - r, c)
                        : g.at(r, g.cols() - 1 - c));
  return out;
}

Grid apply_recolor(const Transform& t, const Grid& g) {
  Grid out = g;
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      if (g.at(r, c) == static_cast<CellValue>(t.from))
        out.set(r, c, static_cast<CellValue>(t.to));
  return out;
}

Grid apply_per_column(const Transform& t, const Grid& g) {
  const int want = t.parity == ColumnParity::Even ? 0 : 1;  // 0-based parity
  Grid masked(g.rows(), g.cols());
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      if (c % 2 == want) masked.set(r, c, g.at(r, c));
  const Grid transformed = apply_transform(t.inner.front(), masked);
  Grid out = g;
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c)
      if (c % 2 == want) out.set(r, c, 0);
  overlay(out, transformed);
  return out;
}

bool filter_matches(const ObjectFilter& f, const ObjectRegion& o) {
  if (f.kind == ObjectFilterKind::Color)
    return o.color == static_cast<CellValue>(f.value);
  return static_cast<int>(o.cells.size()) == f.value;
}

Grid apply_per_object(const Transform& t, const Grid& g) {
  const auto objects = extract_objects(g, Connectivity::Four);
  Grid out = g;
  std::vector<const ObjectRegion*> matched;
  for (const auto& o : objects)
    if (filter_matches(t.filter, o)) {
      matched.push_back(&o);
      for (auto [r, c] : o.cells) out.set(r, c, 0);
    }
  for (const ObjectRegion* o : matched) {
    Grid lone(g.rows(), g.cols());
    for (auto [r, c] : o->cells) lone.set(r, c, o->color);
    overlay(out, apply_transform(t.inner.front(), lone));
  }
  return out;
}

Grid apply_fill_column(const Grid& g) {
  Grid out = g;
  for (int c = 0; c < g.cols(); ++c) {
    CellValue top = 0;
    for (int r = 0; r < g.rows(); ++r)
      if (g.at(r, c)) {
        top = g.at(r, c);
        break;
      }
    if (top)
      for (int r = 0; r < g.rows(); ++r) out.set(r, c, top);
  }
  return out;
}

}  // namespace

Grid apply_transform(const Transform& t, const Grid& input) {
  switch (t.kind) {
    case TransformKind::Translate: return apply_translate(t, input);
    case TransformKind::DuplicateOffset: return apply_duplicate(t, input);
    case TransformKind::ReplicateVertical:
      return apply_replicate_vertical(t, input);
    case TransformKind::MoveToCenter: return apply_move_to_center(input);
    case TransformKind::Rotate: return apply_rotate(t, input);
    case TransformKind::Reflect: return apply_reflect(t, input);
    case TransformKind::Recolor: return apply_recolor(t, input);
    case TransformKind::PerColumn: return apply_per_column(t, input);
    case TransformKind::PerObject: return apply_per_object(t, input);
    case TransformKind::FillColumn: return apply_fill_column(input);
  }
  return input;
}

Grid apply_program(const Program& p, const Grid& input) {
  Grid g = input;
  for (const Transform& step : p.steps) g = apply_transform(step, g);
  return g;
}

// ------------------------------------------------------------ tokenizing

std::vector<std::string> tokenize_text(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char raw : text) {
    const unsigned char uc = static_cast<unsigned char>(raw);
    const char ch = static_cast<char>(std::tolower(uc));
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      current.push_back(ch);
      continue;
    }
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
    if (!std::isspace(uc)) tokens.emplace_back(1, ch);
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

int token_length(const Hypothesis& h) {
  std::string joined = h.description;
  for (const auto& sub : h.sub_hypotheses) {
    joined += ' ';
    joined += sub;
  }
  return static_cast<int>(tokenize_text(joined).size());
}

Hypothesis make_hypothesis(std::string id, std::string description,
                           std::vector<std::string> sub_hypotheses,
                           const std::string& program_text) {
  if (id.empty())
    throw Error(ErrorCode::SchemaError, "hypothesis id is empty");
  if (tokenize_text(description).empty())
    throw Error(ErrorCode::SchemaError,
                "hypothesis '" + id + "': description is empty");
  Hypothesis h;
  h.id = std::move(id);
  h.description = std::move(description);
  h.sub_hypotheses = std::move(sub_hypotheses);
  try {
    h.program = parse_program(program_text);
  } catch (const Error& e) {
    throw Error(ErrorCode::ProgramParseError,
                "hypothesis '" + h.id + "': " + e.what());
  }
  h.program_text = unparse(h.program);
  return h;
}

}  // namespace occamix
