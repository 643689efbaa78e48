#include "casimir/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace casimir {

const char* to_string(Polarization p) { return p == Polarization::TM ? "TM" : "TE"; }

const char* to_string(FieldComp f) {
  switch (f) {
    case FieldComp::Ez: return "Ez";
    case FieldComp::Hx: return "Hx";
    case FieldComp::Hy: return "Hy";
    case FieldComp::Hz: return "Hz";
    case FieldComp::Ex: return "Ex";
    case FieldComp::Ey: return "Ey";
  }
  return "?";
}

size_t BoolGrid::count() const {
  return static_cast<size_t>(std::accumulate(v_.begin(), v_.end(), std::int64_t{0}));
}

namespace {

bool rect_less(const Rect& a, const Rect& b) {
  return std::tie(a.x0, a.y0, a.x1, a.y1) < std::tie(b.x0, b.y0, b.x1, b.y1);
}

void sort_rects(std::vector<Rect>& r) { std::sort(r.begin(), r.end(), rect_less); }

}  // namespace

Geometry build_parallel_plates_1d(int gap, int wall, int pad) {
  if (gap < 4) throw std::invalid_argument("gap under-resolved: gap must be at least 4 cells");
  if (wall < 2) throw std::invalid_argument("plate thickness must be at least 2 cells");
  if (pad < 4) throw std::invalid_argument("pad must be at least 4 cells");
  Geometry g;
  g.kind = GeometryKind::ParallelPlates1D;
  g.gap = gap;
  g.wall = wall;
  g.pad = pad;
  g.ncells_x = gap + 2 * wall + 2 * pad + 2;
  g.ncells_y = 1;
  const int left = 1 + pad;              // first cell of the left plate
  const int right = left + wall + gap;   // first cell of the right plate
  g.rects = {
      {0, 0, 1, 1},                                  // left domain-edge wall
      {left, 0, left + wall, 1},                     // left plate
      {right, 0, right + wall, 1},                   // right plate
      {g.ncells_x - 1, 0, g.ncells_x, 1},            // right domain-edge wall
  };
  sort_rects(g.rects);
  g.x_mid_gap = left + wall + gap / 2;
  g.x_mid_pad = right + wall + pad / 2;
  return g;
}

Geometry build_piston_2d(int s, int gap, std::optional<int> sidewall_sep, int pad) {
  if (s < 8) throw std::invalid_argument("block must be at least 8 cells on a side");
  if (gap < 4) throw std::invalid_argument("gap under-resolved: gap must be at least 4 cells");
  if (pad < 4) throw std::invalid_argument("pad must be at least 4 cells");
  Geometry g;
  g.kind = GeometryKind::Piston2D;
  g.block = s;
  g.gap = gap;
  g.pad_x = pad;
  g.sidewall_sep = sidewall_sep;
  g.ncells_x = 2 * pad + 2 * s + gap;
  if (sidewall_sep) {
    const int d = *sidewall_sep;
    if (d < s + 4)
      throw std::invalid_argument("insufficient sidewall clearance: separation must be at least block + 4");
    g.sidewall = 2;
    g.ncells_y = 2 * g.sidewall + d;
    g.by0 = g.sidewall + (d - s) / 2;
  } else {
    g.sidewall = 0;
    const int pad_y = std::max(3 * s, pad);
    g.ncells_y = 2 * pad_y + s;
    g.by0 = pad_y;
  }
  g.ax0 = pad;
  g.bx0 = pad + s + gap;
  if (g.sidewall > 0) {
    g.rects.push_back({0, 0, g.ncells_x, g.sidewall});
    g.rects.push_back({0, g.ncells_y - g.sidewall, g.ncells_x, g.ncells_y});
  }
  g.rects.push_back({g.ax0, g.by0, g.ax0 + s, g.by0 + s});
  g.rects.push_back({g.bx0, g.by0, g.bx0 + s, g.by0 + s});
  sort_rects(g.rects);
  return g;
}

Geometry build_custom_rectangles_2d(int ncells_x, int ncells_y, std::vector<Rect> rects) {
  if (ncells_x < 4 || ncells_y < 4)
    throw std::invalid_argument("domain must be at least 4 cells in each direction");
  for (const Rect& r : rects) {
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > ncells_x || r.y1 > ncells_y || r.x0 >= r.x1 || r.y0 >= r.y1)
      throw std::invalid_argument("rectangle out of domain or empty");
  }
  Geometry g;
  g.kind = GeometryKind::CustomRectangles2D;
  g.ncells_x = ncells_x;
  g.ncells_y = ncells_y;
  g.rects = std::move(rects);
  sort_rects(g.rects);
  return g;
}

PECMask rasterize(const Geometry& g) {
  PECMask m;
  m.two_d = g.two_d();
  m.nx = g.ncells_x;
  m.ny = g.two_d() ? g.ncells_y : 1;
  m.occ = BoolGrid(m.nx, m.ny);
  for (const Rect& r : g.rects)
    for (int i = r.x0; i < r.x1; ++i)
      for (int j = r.y0; j < r.y1; ++j) m.occ.set(i, j, true);

  if (!m.two_d) {
    m.node = BoolGrid(m.nx + 1, 1);
    for (int i = 0; i <= m.nx; ++i) {
      bool b = (i == 0 || i == m.nx) || m.occ.at_clamped(i - 1, 0) || m.occ.at_clamped(i, 0);
      m.node.set(i, 0, b);
    }
    return m;
  }

  m.node = BoolGrid(m.nx + 1, m.ny + 1);
  for (int i = 0; i <= m.nx; ++i)
    for (int j = 0; j <= m.ny; ++j) {
      bool b = (i == 0 || i == m.nx || j == 0 || j == m.ny) ||
               m.occ.at_clamped(i - 1, j - 1) || m.occ.at_clamped(i, j - 1) ||
               m.occ.at_clamped(i - 1, j) || m.occ.at_clamped(i, j);
      m.node.set(i, j, b);
    }
  m.ex = BoolGrid(m.nx, m.ny + 1);
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j <= m.ny; ++j) {
      bool b = (j == 0 || j == m.ny) || m.occ.at_clamped(i, j - 1) || m.occ.at_clamped(i, j);
      m.ex.set(i, j, b);
    }
  m.ey = BoolGrid(m.nx + 1, m.ny);
  for (int i = 0; i <= m.nx; ++i)
    for (int j = 0; j < m.ny; ++j) {
      bool b = (i == 0 || i == m.nx) || m.occ.at_clamped(i - 1, j) || m.occ.at_clamped(i, j);
      m.ey.set(i, j, b);
    }
  return m;
}

StressSurface stress_surface(const Geometry& g, char body) {
  if (body != 'A' && body != 'B') throw std::invalid_argument("body must be 'A' or 'B'");
  StressSurface s;
  if (!g.two_d()) {
    s.points.push_back({static_cast<double>(g.x_mid_gap), 0.0, -1, 'x'});
    s.points.push_back({static_cast<double>(g.x_mid_pad), 0.0, +1, 'x'});
    return s;
  }
  if (g.kind != GeometryKind::Piston2D)
    throw std::invalid_argument("stress surface is defined for plate and piston scenes only");
  const int x0 = (body == 'A') ? g.ax0 : g.bx0;
  const int x1 = x0 + g.block;
  const int y0 = g.by0;
  const int y1 = g.by0 + g.block;
  const int offx = 2;
  int offy = 2;
  if (g.sidewall_sep) {
    const int clearance = (*g.sidewall_sep - g.block) / 2;
    offy = (clearance > 1) ? std::min(2, clearance - 1) : 1;
  }
  const int xL = x0 - offx, xR = x1 + offx;
  const int yB = y0 - offy, yT = y1 + offy;
  for (int x : {xL, xR})
    for (int j = yB; j < yT; ++j)
      s.points.push_back({static_cast<double>(x), j + 0.5, x == xR ? +1 : -1, 'x'});
  for (int y : {yB, yT})
    for (int i = xL; i < xR; ++i)
      s.points.push_back({i + 0.5, static_cast<double>(y), y == yT ? +1 : -1, 'y'});
  return s;
}

namespace {

struct AxisSplit {
  int idx[2];
  double w[2];
  int n;
};

// Decompose coordinate v into native lattice indices for an axis whose native
// locations are integers (half = false) or half-integers (half = true).
AxisSplit split_axis(double v, bool half) {
  const double u = half ? v - 0.5 : v;
  const double lo = std::floor(u);
  AxisSplit out{};
  if (std::abs(u - lo) < 1e-9) {
    out.idx[0] = static_cast<int>(lo);
    out.w[0] = 1.0;
    out.n = 1;
  } else if (std::abs(u - (lo + 1.0)) < 1e-9) {
    out.idx[0] = static_cast<int>(lo) + 1;
    out.w[0] = 1.0;
    out.n = 1;
  } else {
    out.idx[0] = static_cast<int>(lo);
    out.idx[1] = static_cast<int>(lo) + 1;
    out.w[0] = out.w[1] = 0.5;
    out.n = 2;
  }
  return out;
}

void offsets_for(FieldComp c, bool two_d, bool& halfx, bool& halfy) {
  if (!two_d) {
    // 1D: E on nodes, H on cell centers.
    halfx = (c == FieldComp::Hz);
    halfy = false;
    return;
  }
  switch (c) {
    case FieldComp::Ez: halfx = false; halfy = false; break;
    case FieldComp::Hx: halfx = false; halfy = true; break;
    case FieldComp::Hy: halfx = true; halfy = false; break;
    case FieldComp::Hz: halfx = true; halfy = true; break;
    case FieldComp::Ex: halfx = true; halfy = false; break;
    case FieldComp::Ey: halfx = false; halfy = true; break;
  }
}

}  // namespace

SampleList sample_points(FieldComp comp, double x, double y, bool two_d) {
  bool halfx = false, halfy = false;
  offsets_for(comp, two_d, halfx, halfy);
  const AxisSplit sx = split_axis(x, halfx);
  SampleList out;
  if (!two_d) {
    for (int a = 0; a < sx.n; ++a) out.push_back({comp, sx.idx[a], 0, sx.w[a]});
    return out;
  }
  const AxisSplit sy = split_axis(y, halfy);
  for (int a = 0; a < sx.n; ++a)
    for (int b = 0; b < sy.n; ++b)
      out.push_back({comp, sx.idx[a], sy.idx[b], sx.w[a] * sy.w[b]});
  return out;
}

bool sample_masked(const PECMask& mask, FieldComp comp, int i, int j) {
  if (!mask.two_d) {
    if (comp == FieldComp::Ey) return mask.node.at(i, 0);
    return false;  // magnetic samples are never masked
  }
  switch (comp) {
    case FieldComp::Ez: return mask.node.at(i, j);
    case FieldComp::Ex: return mask.ex.at(i, j);
    case FieldComp::Ey: return mask.ey.at(i, j);
    default: return false;
  }
}

namespace {

// Native array shape of a component on an (nx, ny)-cell grid.
void native_shape(FieldComp c, bool two_d, int nx, int ny, int& sx, int& sy) {
  if (!two_d) {
    sx = (c == FieldComp::Ey) ? nx + 1 : nx;
    sy = 1;
    return;
  }
  switch (c) {
    case FieldComp::Ez: sx = nx + 1; sy = ny + 1; break;
    case FieldComp::Hx: sx = nx + 1; sy = ny; break;
    case FieldComp::Hy: sx = nx; sy = ny + 1; break;
    case FieldComp::Hz: sx = nx; sy = ny; break;
    case FieldComp::Ex: sx = nx; sy = ny + 1; break;
    case FieldComp::Ey: sx = nx + 1; sy = ny; break;
  }
}

}  // namespace

bool surface_in_vacuum(const PECMask& mask, const StressSurface& surf, Polarization pol) {
  std::vector<FieldComp> comps;
  if (!mask.two_d) {
    comps = {FieldComp::Ey, FieldComp::Hz};
  } else if (pol == Polarization::TM) {
    comps = {FieldComp::Ez, FieldComp::Hx, FieldComp::Hy};
  } else {
    comps = {FieldComp::Hz, FieldComp::Ex, FieldComp::Ey};
  }
  for (const SurfacePoint& p : surf.points) {
    for (FieldComp c : comps) {
      for (const Sample& s : sample_points(c, p.x, p.y, mask.two_d)) {
        int sx = 0, sy = 0;
        native_shape(c, mask.two_d, mask.nx, mask.ny, sx, sy);
        if (s.i < 0 || s.i >= sx || s.j < 0 || s.j >= sy) return false;
        if (sample_masked(mask, c, s.i, s.j)) return false;
      }
    }
  }
  return true;
}

}  // namespace casimir
