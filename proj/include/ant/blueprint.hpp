#pragma once
// Excavation blueprint: per-cell work specification. ASCII format, one char
// per cell, row-major: digits 0-9 give the target depth below grade (cell is
// scored), 'D' marks dump cells, 'X' marks don't-care cells.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ant {

struct BlueprintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CellKind : uint8_t { Target = 0, Dump, DontCare };

// Ring widths of generated rectangular sites. The excavation area sits in the
// middle, wrapped by a dump apron wide enough to absorb berms, wrapped by a
// don't-care margin robots can retreat into.
constexpr int kDumpRing = 1;
constexpr int kBorderRing = 2;

class Blueprint {
 public:
  Blueprint(int width, int height)
      : width_(width), height_(height),
        kind_(static_cast<size_t>(width) * height, CellKind::DontCare),
        target_(static_cast<size_t>(width) * height, 0) {
    if (width <= 0 || height <= 0) throw BlueprintError("empty blueprint");
  }

  static Blueprint rectangular(int area_w, int area_h, int depth) {
    if (area_w <= 0 || area_h <= 0) throw BlueprintError("empty excavation area");
    if (depth < 0 || depth > 9) throw BlueprintError("depth must be in [0, 9]");
    const int pad = kDumpRing + kBorderRing;
    Blueprint bp(area_w + 2 * pad, area_h + 2 * pad);
    for (int y = 0; y < bp.height_; ++y)
      for (int x = 0; x < bp.width_; ++x) {
        const int bx = std::min({x, y, bp.width_ - 1 - x, bp.height_ - 1 - y});
        if (bx < kBorderRing) continue;  // stays DontCare
        if (x >= pad && x < pad + area_w && y >= pad && y < pad + area_h)
          bp.set_target(x, y, -depth);
        else
          bp.set_dump(x, y);
      }
    return bp;
  }

  static Blueprint parse(const std::string& text) {
    std::vector<std::string> rows;
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        rows.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) rows.push_back(cur);
    while (!rows.empty() && rows.back().empty()) rows.pop_back();
    if (rows.empty()) throw BlueprintError("empty blueprint");
    const size_t w = rows[0].size();
    Blueprint bp(static_cast<int>(w), static_cast<int>(rows.size()));
    for (size_t y = 0; y < rows.size(); ++y) {
      if (rows[y].size() != w)
        throw BlueprintError("row " + std::to_string(y) + " has length " +
                             std::to_string(rows[y].size()) + ", expected " +
                             std::to_string(w));
      for (size_t x = 0; x < w; ++x) {
        const char c = rows[y][x];
        if (c >= '0' && c <= '9')
          bp.set_target(static_cast<int>(x), static_cast<int>(y), -(c - '0'));
        else if (c == 'D')
          bp.set_dump(static_cast<int>(x), static_cast<int>(y));
        else if (c == 'X')
          ;  // default
        else
          throw BlueprintError("bad character '" + std::string(1, c) + "' at row " +
                               std::to_string(y) + " col " + std::to_string(x));
      }
    }
    return bp;
  }

  std::string to_ascii() const {
    std::string out;
    out.reserve(static_cast<size_t>(height_) * (width_ + 1));
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        switch (kind(x, y)) {
          case CellKind::Target:
            out.push_back(static_cast<char>('0' - target(x, y)));
            break;
          case CellKind::Dump:
            out.push_back('D');
            break;
          case CellKind::DontCare:
            out.push_back('X');
            break;
        }
      }
      out.push_back('\n');
    }
    return out;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }
  CellKind kind(int x, int y) const { return kind_[idx(x, y)]; }
  // Target height in soil units, 0 or negative (digging goes down).
  int target(int x, int y) const { return target_[idx(x, y)]; }

  size_t target_cell_count() const {
    size_t n = 0;
    for (auto k : kind_)
      if (k == CellKind::Target) ++n;
    return n;
  }

  void set_target(int x, int y, int target_height) {
    kind_[idx(x, y)] = CellKind::Target;
    target_[idx(x, y)] = static_cast<int8_t>(target_height);
  }
  void set_dump(int x, int y) { kind_[idx(x, y)] = CellKind::Dump; }
  void set_dont_care(int x, int y) {
    kind_[idx(x, y)] = CellKind::DontCare;
    target_[idx(x, y)] = 0;
  }

  bool operator==(const Blueprint&) const = default;

 private:
  size_t idx(int x, int y) const { return static_cast<size_t>(y) * width_ + x; }

  int width_, height_;
  std::vector<CellKind> kind_;
  std::vector<int8_t> target_;
};

}  // namespace ant
