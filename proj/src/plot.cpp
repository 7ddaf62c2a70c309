#include <voxpose/plot.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace voxpose {

namespace {

// 3x5 glyphs, one row per entry, MSB = left pixel.
struct Glyph {
  char ch;
  std::uint8_t rows[5];
};

constexpr Glyph kFont[] = {
    {'a', {0b000, 0b011, 0b101, 0b101, 0b011}},
    {'b', {0b100, 0b100, 0b110, 0b101, 0b110}},
    {'c', {0b000, 0b011, 0b100, 0b100, 0b011}},
    {'d', {0b001, 0b001, 0b011, 0b101, 0b011}},
    {'e', {0b000, 0b011, 0b101, 0b110, 0b011}},
    {'f', {0b001, 0b010, 0b111, 0b010, 0b010}},
    {'g', {0b011, 0b101, 0b011, 0b001, 0b110}},
    {'h', {0b100, 0b100, 0b110, 0b101, 0b101}},
    {'i', {0b010, 0b000, 0b010, 0b010, 0b010}},
    {'j', {0b001, 0b000, 0b001, 0b101, 0b010}},
    {'k', {0b100, 0b101, 0b110, 0b101, 0b101}},
    {'l', {0b010, 0b010, 0b010, 0b010, 0b001}},
    {'m', {0b000, 0b110, 0b111, 0b101, 0b101}},
    {'n', {0b000, 0b110, 0b101, 0b101, 0b101}},
    {'o', {0b000, 0b010, 0b101, 0b101, 0b010}},
    {'p', {0b000, 0b110, 0b101, 0b110, 0b100}},
    {'q', {0b000, 0b011, 0b101, 0b011, 0b001}},
    {'r', {0b000, 0b011, 0b100, 0b100, 0b100}},
    {'s', {0b011, 0b100, 0b010, 0b001, 0b110}},
    {'t', {0b010, 0b111, 0b010, 0b010, 0b001}},
    {'u', {0b000, 0b101, 0b101, 0b101, 0b011}},
    {'v', {0b000, 0b101, 0b101, 0b101, 0b010}},
    {'w', {0b000, 0b101, 0b101, 0b111, 0b010}},
    {'x', {0b000, 0b101, 0b010, 0b101, 0b000}},
    {'y', {0b000, 0b101, 0b011, 0b001, 0b110}},
    {'z', {0b111, 0b001, 0b010, 0b100, 0b111}},
    {'0', {0b010, 0b101, 0b101, 0b101, 0b010}},
    {'1', {0b010, 0b110, 0b010, 0b010, 0b111}},
    {'2', {0b110, 0b001, 0b010, 0b100, 0b111}},
    {'3', {0b110, 0b001, 0b010, 0b001, 0b110}},
    {'4', {0b101, 0b101, 0b111, 0b001, 0b001}},
    {'5', {0b111, 0b100, 0b110, 0b001, 0b110}},
    {'6', {0b011, 0b100, 0b110, 0b101, 0b010}},
    {'7', {0b111, 0b001, 0b010, 0b010, 0b010}},
    {'8', {0b010, 0b101, 0b010, 0b101, 0b010}},
    {'9', {0b010, 0b101, 0b011, 0b001, 0b110}},
    {'.', {0b000, 0b000, 0b000, 0b000, 0b010}},
    {'-', {0b000, 0b000, 0b111, 0b000, 0b000}},
    {'%', {0b101, 0b001, 0b010, 0b100, 0b101}},
    {' ', {0b000, 0b000, 0b000, 0b000, 0b000}},
};

const Glyph* find_glyph(char ch) {
  for (const Glyph& g : kFont) {
    if (g.ch == ch) return &g;
  }
  return nullptr;
}

void fill_rect(Image& img, int x0, int y0, int x1, int y1, const Color& c) {
  x0 = std::max(0, x0);
  y0 = std::max(0, y0);
  x1 = std::min(img.width, x1);
  y1 = std::min(img.height, y1);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) img.set(x, y, c);
  }
}

void draw_line(Image& img, int x0, int y0, int x1, int y1, const Color& c) {
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (x0 >= 0 && x0 < img.width && y0 >= 0 && y0 < img.height) {
      img.set(x0, y0, c);
    }
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_text(Image& img, int x, int y, const std::string& text, const Color& c,
               int scale = 1) {
  int cx = x;
  for (char raw : text) {
    const char ch = static_cast<char>(std::tolower(
        static_cast<unsigned char>(raw)));
    const Glyph* g = find_glyph(ch);
    if (g) {
      for (int r = 0; r < 5; ++r) {
        for (int b = 0; b < 3; ++b) {
          if (g->rows[r] & (0b100 >> b)) {
            fill_rect(img, cx + b * scale, y + r * scale, cx + (b + 1) * scale,
                      y + (r + 1) * scale, c);
          }
        }
      }
    }
    cx += 4 * scale;
  }
}

std::string short_number(double v) {
  std::ostringstream ss;
  if (v == 0) return "0";
  if (v >= 100) {
    ss << static_cast<long>(std::llround(v));
  } else if (v >= 1) {
    ss.precision(3);
    ss << v;
  } else {
    ss.precision(2);
    ss << v;
  }
  return ss.str();
}

const Color kPalette[] = {
    Color(0.12f, 0.35f, 0.80f), Color(0.85f, 0.20f, 0.15f),
    Color(0.10f, 0.60f, 0.25f), Color(0.90f, 0.55f, 0.10f),
    Color(0.55f, 0.20f, 0.70f), Color(0.15f, 0.65f, 0.65f),
};

struct Panel {
  std::string title;
  double (*pick)(const CurvePoint&);
  bool is_fraction;
};

}  // namespace

Image plot_curves(const ExperimentReport& report) {
  const Panel panels[6] = {
      {"avg re deg", [](const CurvePoint& p) { return p.avg_re; }, false},
      {"median re deg", [](const CurvePoint& p) { return p.med_re; }, false},
      {"re fail rate", [](const CurvePoint& p) { return p.fail_re; }, true},
      {"avg te", [](const CurvePoint& p) { return p.avg_te; }, false},
      {"median te", [](const CurvePoint& p) { return p.med_te; }, false},
      {"te fail rate", [](const CurvePoint& p) { return p.fail_te; }, true},
  };

  const int pw = 340, ph = 300, margin_left = 46, margin_bottom = 26,
            margin_top = 22, pad = 12;
  const int legend_h = 18 * std::max<int>(1, static_cast<int>(report.arms.size()));
  Image img(3 * (pw + pad) + pad, 2 * (ph + pad) + pad + legend_h + 10);
  fill_rect(img, 0, 0, img.width, img.height, Color(1, 1, 1));

  int max_epoch = 1;
  for (const ArmReport& arm : report.arms) {
    if (!arm.curves.empty()) max_epoch = std::max(max_epoch, arm.curves.back().epoch);
  }

  const Color axis_col(0.1f, 0.1f, 0.1f);
  for (int p = 0; p < 6; ++p) {
    const int px = pad + (p % 3) * (pw + pad);
    const int py = pad + (p / 3) * (ph + pad);
    const int ax0 = px + margin_left, ay0 = py + margin_top;
    const int ax1 = px + pw - 8, ay1 = py + ph - margin_bottom;

    double vmax = panels[p].is_fraction ? 1.0 : 0.0;
    for (const ArmReport& arm : report.arms) {
      for (const CurvePoint& pt : arm.curves) {
        vmax = std::max(vmax, panels[p].pick(pt));
      }
    }
    if (vmax <= 0) vmax = 1.0;
    vmax *= panels[p].is_fraction ? 1.0 : 1.05;

    draw_text(img, px + margin_left, py + 6, panels[p].title, axis_col, 2);
    draw_line(img, ax0, ay0, ax0, ay1, axis_col);
    draw_line(img, ax0, ay1, ax1, ay1, axis_col);
    draw_text(img, px + 4, ay0 - 2, short_number(vmax), axis_col);
    draw_text(img, px + 4, ay1 - 4, "0", axis_col);
    draw_text(img, ax1 - 4 * static_cast<int>(short_number(max_epoch).size()),
              ay1 + 6, short_number(max_epoch), axis_col);
    draw_text(img, ax0, ay1 + 6, "1", axis_col);
    draw_text(img, (ax0 + ax1) / 2 - 10, ay1 + 14, "epoch", axis_col);

    for (std::size_t a = 0; a < report.arms.size(); ++a) {
      const ArmReport& arm = report.arms[a];
      if (arm.curves.empty()) continue;
      const Color col = kPalette[a % 6];
      int last_x = -1, last_y = -1;
      for (const CurvePoint& pt : arm.curves) {
        const double fx = max_epoch > 1
                              ? static_cast<double>(pt.epoch - 1) / (max_epoch - 1)
                              : 0.0;
        const double fy = std::min(1.0, panels[p].pick(pt) / vmax);
        const int x = ax0 + static_cast<int>(fx * (ax1 - ax0));
        const int y = ay1 - static_cast<int>(fy * (ay1 - ay0));
        if (last_x >= 0) draw_line(img, last_x, last_y, x, y, col);
        last_x = x;
        last_y = y;
      }
    }
  }

  int ly = 2 * (ph + pad) + pad + 6;
  for (std::size_t a = 0; a < report.arms.size(); ++a) {
    const Color col = kPalette[a % 6];
    fill_rect(img, pad, ly + 2, pad + 24, ly + 12, col);
    draw_text(img, pad + 32, ly, report.arms[a].label, Color(0.1f, 0.1f, 0.1f), 2);
    ly += 18;
  }
  return img;
}

}  // namespace voxpose
