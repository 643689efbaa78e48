#pragma once
// Independent benchmarks the time-domain pipeline is validated against:
//  - closed-form parallel-plate force per unit area in 1D (one polarization);
//  - a frequency-domain solver assembled on the *same* staggered lattice and
//    measurement surface as the simulation ("grid oracle"), so the two
//    methods share discretization error and can be compared tightly;
//  - thermal (Matsubara) summation and zero-temperature quadrature drivers;
//  - a transverse-wavenumber integrator lifting 2D scenes toward 3D.
//
// Thermal force evaluation at temperature T (omega_T = 2 k_B T):
//   F(T) = pi omega_T [ f(0+)/2 + sum_{n>=1} f(n pi omega_T) ],
// where f(xi) is the imaginary-frequency force integrand and f(0+) its
// xi -> 0 limit; at T = 0 the bracket becomes (1/pi) int_0^inf f(xi) dxi.

#include <functional>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "casimir/force.hpp"
#include "casimir/geometry.hpp"
#include "casimir/stress.hpp"

namespace casimir {

// ---------------------------------------------------------------- analytic

// Imaginary-frequency integrand of the ideal 1D two-plate force per unit
// area at gap a: f(xi) = -(1/pi) xi / (e^{2 xi a} - 1); f(0) returns the
// xi -> 0+ limit -1 / (2 pi a).
double lifshitz_integrand_1d(double xi, double a);

struct Lifshitz1D {
  double total = 0, n0 = 0, npos = 0;
};

// Closed-form 1D parallel-plate force per unit area, one polarization,
// at reduced temperature tau = T a (tau = 0 gives -pi / (24 a^2)).
Lifshitz1D lifshitz_parallel_plates_1d(double a, double tau);

// ------------------------------------------------------------ summation ops

using TermSink = std::function<void(int n, double xi, double f_xi, double partial)>;

// pi omega_T [ f(0)/2 + sum_{n>=1} f(n pi omega_T) ]; the evaluator is called
// with xi = 0 for the first term and must return the xi -> 0+ limit there.
// Terminates when |term| <= tail_tol * |running sum| or n reaches n_max.
double matsubara_sum(const std::function<double(double)>& f, double omega_T,
                     int n_max = 100000, double tail_tol = 1e-13,
                     const TermSink& sink = nullptr);

// Gauss-Legendre abscissas/weights on [0, hi].
void gauss_legendre(int n, double hi, std::vector<double>& x, std::vector<double>& w);

// (1/pi) int_0^{kz_max} M(kz) dkz with M(kz) the Matsubara sum of
// f(sqrt(xi_n^2 + kz^2)): lifts a per-(2D-mode) integrand toward the
// 3D-per-area force.  Requires omega_T > 0.
double kz_integrate(const std::function<double(double)>& f, double omega_T,
                    double kz_max, int nodes = 32);

// --------------------------------------------------------------- grid oracle

// Frequency-domain companion solver on the simulation lattice.  The two
// first-order curl maps of the leapfrog scheme are assembled as sparse
// matrices (masked tangential-E samples removed); eliminating the non-scalar
// sector yields (L + xi^2) with L symmetric positive semidefinite on the
// scalar sector (Ez for TM, Hz for TE, E for 1D).  Surface responses follow
// by sparse Cholesky solves, giving the force integrand f(xi) for the same
// stress terms the time-domain pipeline uses.
class GridOracle {
 public:
  GridOracle(const PECMask& mask, Polarization pol);

  // Imaginary-frequency force integrand on the measurement surface (xi > 0).
  double force_integrand(double xi, const StressSurface& surf);

  // Scalar-sector Green column: response of the scalar field to a unit
  // source distribution, returned on the full native scalar grid (masked
  // entries zero).  Shape: (nx+1)*(ny+1) for TM, nx*ny for TE, nx+1 for 1D,
  // row-major in i.
  std::vector<double> green_scalar(double xi, const SampleList& src);

  // Largest |entry| of (S_from_O + O_from_S^T); exactly zero when the two
  // curl maps are mutual negative transposes, as the energy argument requires.
  double skew_defect() const;

  int scalar_dofs() const { return nS_; }

 private:
  void factorize(double xi);
  void build_vectors(const SampleList& s, Eigen::VectorXd& vS, Eigen::VectorXd& vO) const;
  bool scalar_term(bool magnetic) const;

  bool two_d_ = false;
  Polarization pol_ = Polarization::TM;
  int nx_ = 0, ny_ = 0;
  int nS_ = 0, nO_ = 0;
  std::vector<int> sidx_;             // native scalar location -> dof (-1 masked)
  std::vector<int> oidx_ex_, oidx_ey_;  // TE: free Ex / Ey dofs
  int hx_count_ = 0;                  // TM: Hy dof offset
  Eigen::SparseMatrix<double> S_from_O_;  // scalar-dot from other sector
  Eigen::SparseMatrix<double> O_from_S_;  // other-dot from scalar sector
  Eigen::SparseMatrix<double> L_;         // -(S_from_O * O_from_S)
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
  double cur_xi_ = -1.0;
  bool analyzed_ = false;
};

// Thermal grid-oracle force: Matsubara sum of the oracle integrand with the
// xi -> 0 limit estimated by Richardson extrapolation from xi0/2 and xi0.
ForceResult force_matsubara_grid(GridOracle& orc, const StressSurface& surf, double omega_T,
                                 double xi0 = 1e-2, int n_max = 400, double tail_tol = 1e-10,
                                 const TermSink& sink = nullptr);

// Zero-temperature grid-oracle force: Gauss-Legendre quadrature of the
// integrand over [0, xi_hi].
double force_quadrature_grid(GridOracle& orc, const StressSurface& surf, double xi_hi,
                             int nodes = 64, const TermSink& sink = nullptr);

}  // namespace casimir
