#pragma once
// Staggered-grid geometry: perfectly conducting bodies rasterized onto a
// uniform Yee lattice (dx = 1), plus the closed measurement surfaces on which
// the stress tensor is sampled.
//
// Field placement, 2D (cells indexed i = 0..nx-1, j = 0..ny-1):
//   TM: Ez at nodes (i, j);     Hx at (i, j+1/2);    Hy at (i+1/2, j)
//   TE: Hz at (i+1/2, j+1/2);   Ex at (i+1/2, j);    Ey at (i, j+1/2)
// 1D (fields f(x, t), propagation along x):
//   E at nodes x = i;  H at cell centers x = i+1/2.
//
// A perfect conductor pins the tangential electric field: an E sample is
// "masked" (held at zero) if it touches an occupied cell or lies on the
// domain boundary in a direction tangential to that boundary.  Magnetic
// samples are never masked.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace casimir {

enum class Polarization { TM, TE };

// Field components across 1D and 2D simulations.  In 1D, `Ey` is the nodal
// electric field and `Hz` the cell-centered magnetic field.
enum class FieldComp { Ez, Hx, Hy, Hz, Ex, Ey };

const char* to_string(Polarization p);
const char* to_string(FieldComp f);

// Dense boolean grid with shape (nx, ny), row-major in i.
class BoolGrid {
 public:
  BoolGrid() = default;
  BoolGrid(int nx, int ny) : nx_(nx), ny_(ny), v_(static_cast<size_t>(nx) * ny, 0) {}
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  bool at(int i, int j) const { return v_[static_cast<size_t>(i) * ny_ + j] != 0; }
  void set(int i, int j, bool b) { v_[static_cast<size_t>(i) * ny_ + j] = b ? 1 : 0; }
  // True if (i, j) is inside the grid and set.
  bool at_clamped(int i, int j) const {
    return i >= 0 && i < nx_ && j >= 0 && j < ny_ && at(i, j);
  }
  size_t count() const;
  bool operator==(const BoolGrid& o) const { return nx_ == o.nx_ && ny_ == o.ny_ && v_ == o.v_; }

 private:
  int nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> v_;
};

// Axis-aligned block of occupied cells: x in [x0, x1), y in [y0, y1).
struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

enum class GeometryKind { ParallelPlates1D, Piston2D, CustomRectangles2D };

// A fully resolved scene: domain size in cells plus the occupied-cell
// rectangles, in a canonical deterministic order.  Derived anchors needed by
// the stress-surface builder (plate midpoints, block corners) are stored so
// downstream code never re-derives layout arithmetic.
struct Geometry {
  GeometryKind kind = GeometryKind::CustomRectangles2D;
  int ncells_x = 0;
  int ncells_y = 0;  // 1 for 1D scenes
  std::vector<Rect> rects;

  // 1D parameters (valid when kind == ParallelPlates1D)
  int gap = 0, wall = 0, pad = 0;
  int x_mid_gap = 0;  // measurement node inside the gap
  int x_mid_pad = 0;  // measurement node inside the outer region

  // Piston parameters (valid when kind == Piston2D)
  int block = 0;                    // square block side s
  std::optional<int> sidewall_sep;  // sidewall separation d; nullopt = open (d -> infinity)
  int sidewall = 0;                 // sidewall thickness in cells (0 when open)
  int pad_x = 0;
  // Block corner cells: A is the left block, B the right one.
  int ax0 = 0, bx0 = 0, by0 = 0;

  bool two_d() const { return kind != GeometryKind::ParallelPlates1D; }
};

// 1D scene, ncells = gap + 2*wall + 2*pad + 2:
//   [outer wall (1 cell) | pad | plate (wall) | gap | plate (wall) | pad | outer wall]
// Preconditions: gap >= 4 ("gap under-resolved"), wall >= 2, pad >= 4.
Geometry build_parallel_plates_1d(int gap, int wall, int pad);

// Two s x s blocks separated by `gap` along x, between two sidewalls
// separated by d along y (sidewall thickness 2), or in open space when
// `sidewall_sep` is empty.  Preconditions: s >= 8, gap >= 4, and
// d >= s + 4 ("insufficient sidewall clearance") when finite.
Geometry build_piston_2d(int s, int gap, std::optional<int> sidewall_sep, int pad);

// Arbitrary occupied rectangles in an ncells_x x ncells_y vacuum box.
// Rectangles must lie inside the domain; they are stored sorted.
Geometry build_custom_rectangles_2d(int ncells_x, int ncells_y, std::vector<Rect> rects);

// Conductor masks for every tangential-E sample class of a scene.
struct PECMask {
  bool two_d = false;
  int nx = 0, ny = 0;  // domain size in cells (ny = 1 for 1D)
  BoolGrid occ;        // occupied cells,            shape (nx, ny)
  BoolGrid node;       // Ez nodes / 1D E nodes,     shape (nx+1, ny+1) (1D: (nx+1, 1))
  BoolGrid ex;         // Ex samples (i+1/2, j),     shape (nx, ny+1)  (2D only)
  BoolGrid ey;         // Ey samples (i, j+1/2),     shape (nx+1, ny)  (2D only)
};

PECMask rasterize(const Geometry& g);

// One point of a closed measurement surface.  `face` is 'x' for a point on a
// constant-x face (contributes the xx stress) or 'y' for a constant-y face
// (xy stress); `sgn` is +1 on the face whose outward normal points along +x
// (or whose shear contribution enters with +), -1 on the opposite face.
struct SurfacePoint {
  double x = 0, y = 0;
  int sgn = 1;
  char face = 'x';
};

struct StressSurface {
  std::vector<SurfacePoint> points;
};

// Measurement surface for the net x-force on a body.
//   1D: two points, one mid-gap (sgn -1) and one mid-pad (sgn +1); the
//       reported quantity is the force on the right plate.
//   2D piston: a rectangle around block 'A' (left) or 'B' (right), offset
//       2 cells from the block faces where clearance allows (1 cell at the
//       tightest sidewall separations).
StressSurface stress_surface(const Geometry& g, char body = 'B');

// One lattice sample of a field component with an interpolation weight.
struct Sample {
  FieldComp comp = FieldComp::Ez;
  int i = 0, j = 0;
  double w = 1.0;
};
using SampleList = std::vector<Sample>;

// Expands a continuous-coordinate request for component `comp` at (x, y)
// into lattice samples.  Along each axis the coordinate either matches the
// component's native offset (integer or half-integer) and yields one sample,
// or sits between two native locations and yields the two nearest with
// weight 1/2 each.  In 1D, y is ignored.
SampleList sample_points(FieldComp comp, double x, double y, bool two_d);

// True if every field sample used by `surf` under polarization `pol` lies in
// vacuum (no sample touches a masked location).
bool surface_in_vacuum(const PECMask& mask, const StressSurface& surf, Polarization pol);

// True if this sample class is pinned to zero at (i, j) by the mask.
bool sample_masked(const PECMask& mask, FieldComp comp, int i, int j);

}  // namespace casimir
