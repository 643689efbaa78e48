#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "casimir/weights.hpp"

using namespace casimir;
using std::fabs;

namespace {
constexpr double PI = 3.14159265358979323846;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("contour frequency: principal branch anchors") {
  // sqrt(1 + i), upper-half-plane branch
  cplx w = omega_contour(1.0, 1.0);
  CHECK(fabs(w.real() - 1.0986841134678100) < 1e-15);
  CHECK(fabs(w.imag() - 0.4550898605622273) < 1e-15);
  // sigma = 0 reduces to the real axis
  cplx w0 = omega_contour(2.5, 0.0);
  CHECK(w0.real() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(fabs(w0.imag()) < 1e-15);
  // imaginary part must stay nonnegative (damping, not gain)
  for (double xi : {1e-4, 1e-2, 0.3, 2.0, 6.0}) CHECK(omega_contour(xi, 0.7).imag() >= 0.0);
}

TEST_CASE("zero-temperature weight anchors") {
  cplx g = weight_T0(1.0, 1.0);
  CHECK(fabs(g.real() - 1.0044319172961322) < 1e-14);
  CHECK(fabs(g.imag() + 0.8711391831866964) < 1e-14);
  // lossless limit: g(xi) = -i xi
  cplx g0 = weight_T0(3.0, 0.0);
  CHECK(fabs(g0.real()) < 1e-15);
  CHECK(fabs(g0.imag() + 3.0) < 1e-15);
}

TEST_CASE("coth minus pole: series branch matches direct evaluation") {
  // just inside the series cutoff |z| = 1e-3 the direct formula still has
  // ~7 significant digits after cancellation; the series must agree there
  for (double arg : {0.2, 0.9, 1.4}) {
    cplx z = std::polar(0.99e-3, arg);
    cplx series = coth_minus_pole(z);
    cplx direct = std::cosh(z) / std::sinh(z) - 1.0 / z;
    CHECK(rel(series, direct) < 1e-8);
  }
  // moderate argument sanity: coth(1) - 1
  cplx v = coth_minus_pole(cplx(1.0, 0.0));
  CHECK(fabs(v.real() - (1.0 / std::tanh(1.0) - 1.0)) < 1e-15);
  // odd function
  cplx z(4e-4, 2e-4);
  CHECK(std::abs(coth_minus_pole(z) + coth_minus_pole(-z)) < 1e-18);
}

TEST_CASE("pole-subtracted spectrum: anchors and zero-frequency limit") {
  const double sg = 0.025, wT = 2 * PI / 40.0;
  cplx v = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Electric, 0.3, sg, wT);
  CHECK(fabs(v.real() - 0.0173896997845923) < 1e-15);
  CHECK(fabs(v.imag() + 0.1560586337091419) < 1e-15);

  cplx lim = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Electric, 0.0, sg, wT);
  CHECK(fabs(lim.real()) < 1e-18);
  CHECK(fabs(lim.imag() - 6.6314559621623076e-4) < 1e-18);
  CHECK(fabs(lim.imag() - sg * sg / (6.0 * wT)) < 1e-18);

  // the xi -> 0 approach of the formula reaches the stored limit; the
  // leading deviation is linear, about 3 xi / sigma
  double prev = 1e300;
  for (double xi : {1e-6, 1e-7, 1e-8, 1e-9}) {
    cplx near = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Electric, xi, sg, wT);
    double r = rel(near, lim);
    CHECK(r < prev);
    CHECK(r < 5.0 * xi / sg);
    prev = r;
  }
  CHECK(prev < 1e-6);  // at xi = 1e-9
  // magnetic variant limit vanishes
  cplx mlim = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Magnetic, 0.0, sg, wT);
  CHECK(std::abs(mlim) < 1e-18);
  // magnetic = electric / (1 + i sigma / xi)
  cplx e1 = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Electric, 0.7, sg, wT);
  cplx m1 = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Magnetic, 0.7, sg, wT);
  CHECK(std::abs(m1 * cplx(1.0, sg / 0.7) - e1) < 1e-15);
}

TEST_CASE("thermal spectrum recovers the zero-temperature weight as T -> 0") {
  const double sg = 0.1;
  cplx e = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Electric, 1.0, sg, 1e-8);
  CHECK(rel(e, weight_T0(1.0, sg)) < 2e-8);
  cplx m = spectrum_value(SpectrumKind::PoleSubtracted, Variant::Magnetic, 1.0, sg, 1e-8);
  CHECK(rel(m, weight_T0(1.0, sg) / cplx(1.0, sg)) < 2e-8);
}

TEST_CASE("pole subtraction keeps the spectrum bounded where the naive weight diverges") {
  const double sg = 0.05, wT = 0.1;
  const double cap = 2.0 * std::abs(spectrum_value(SpectrumKind::PoleSubtracted,
                                                   Variant::Electric, 0.0, sg, wT));
  double prev_naive = 0.0;
  for (int k = 2; k <= 8; ++k) {
    const double xi = std::pow(10.0, -k);
    const double ps = std::abs(spectrum_value(SpectrumKind::PoleSubtracted, Variant::Electric, xi, sg, wT));
    const double nv = std::abs(spectrum_value(SpectrumKind::NaiveCoth, Variant::Electric, xi, sg, wT));
    CHECK(ps < cap + std::abs(weight_T0(xi, sg)));
    if (prev_naive > 0) CHECK(nv > 5.0 * prev_naive);  // ~1/xi growth per decade
    prev_naive = nv;
  }
}

TEST_CASE("zero-mode constant") {
  CHECK(fabs(zero_mode_constant(1.0, PI / 10.0) - PI / 20.0) < 1e-16);
  CHECK(zero_mode_constant(0.3, 0.0) == 0.0);
  CHECK_THROWS_WITH_AS(zero_mode_constant(0.0, 0.5),
                       "zero-frequency contribution requires sigma > 0", std::invalid_argument);
}

TEST_CASE("raised-cosine taper") {
  const double xm = 4.0, f = 0.1;
  CHECK(taper_value(0.5 * xm, xm, f) == 1.0);
  CHECK(taper_value((1.0 - f) * xm, xm, f) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fabs(taper_value((1.0 - 0.5 * f) * xm, xm, f) - 0.5) < 1e-12);
  CHECK(fabs(taper_value(xm, xm, f)) < 1e-12);
  // monotone across the roll
  double prev = 1.0;
  for (int i = 0; i <= 50; ++i) {
    double v = taper_value((1.0 - f + f * i / 50.0) * xm, xm, f);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("synthesize matches per-term evaluation and the analytic flat-spectrum limit") {
  const double dt = 0.5;
  const int n = 256, J = 4 * n / 2;
  const double dxi = 2 * PI / (4 * n * dt);
  std::vector<double> xi(J);
  std::vector<cplx> W(J, cplx(0.0, 1.0));
  for (int j = 0; j < J; ++j) xi[j] = (j + 1) * dxi;
  std::vector<double> g = synthesize(xi, W, dt, n);
  REQUIRE(static_cast<int>(g.size()) == n);
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) * dt;
    double acc = 0;
    for (int j = 0; j < J; ++j) acc += (W[j] * std::polar(1.0, xi[j] * t)).imag();
    worst = std::max(worst, fabs(g[k] - acc * dxi / PI));
  }
  CHECK(worst < 1e-12);  // phase recurrence does not drift

  // dense flat spectrum approaches (1/pi) Int cos(xi t) dxi = sin(xi_max t)/(pi t),
  // and at t_k = (k + 1/2) dt with xi_max = pi/dt that is (-1)^k / (pi t_k)
  const int n2 = 32, J2 = 1 << 16;
  const double dxi2 = (PI / dt) / J2;
  std::vector<double> xi2(J2);
  std::vector<cplx> W2(J2, cplx(0.0, 1.0));
  for (int j = 0; j < J2; ++j) xi2[j] = (j + 1) * dxi2;
  std::vector<double> g2 = synthesize(xi2, W2, dt, n2);
  for (int k = 0; k < n2; ++k) {
    const double t = (k + 0.5) * dt;
    const double ref = ((k % 2) ? -1.0 : 1.0) / (PI * t);
    CHECK(fabs(g2[k] - ref) / fabs(ref) < 2e-3);
  }
}

TEST_CASE("synthesize is linear and shifts in time under a phase ramp") {
  const double dt = 0.5;
  const int n = 512, J = 4 * n / 2, m = 7;
  const double dxi = 2 * PI / (4 * n * dt);
  std::vector<double> xi(J);
  std::vector<cplx> W1(J), W2(J), Ws(J), Wc(J);
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (int j = 0; j < J; ++j) {
    xi[j] = (j + 1) * dxi;
    W1[j] = cplx(nd(rng), nd(rng)) / (1.0 + xi[j]);
    W2[j] = cplx(nd(rng), nd(rng));
    Ws[j] = W1[j] * std::polar(1.0, -xi[j] * m * dt);
    Wc[j] = 2.5 * W1[j] - 0.75 * W2[j];
  }
  std::vector<double> g1 = synthesize(xi, W1, dt, n);
  std::vector<double> g2 = synthesize(xi, W2, dt, n);
  std::vector<double> gs = synthesize(xi, Ws, dt, n);
  std::vector<double> gc = synthesize(xi, Wc, dt, n);
  double lworst = 0, lscale = 0, sworst = 0;
  for (int k = 0; k < n; ++k) {
    lworst = std::max(lworst, fabs(gc[k] - (2.5 * g1[k] - 0.75 * g2[k])));
    lscale = std::max(lscale, fabs(gc[k]));
  }
  for (int k = m; k < n; ++k) sworst = std::max(sworst, fabs(gs[k] - g1[k - m]));
  CHECK(lworst / lscale < 1e-12);
  CHECK(sworst < 1e-12);
}

TEST_CASE("synthesize validates its frequency grid") {
  const double dt = 0.5;
  std::vector<double> xi = {0.1, 0.2, 0.3};
  std::vector<cplx> W(3, cplx(0, 1));
  CHECK_NOTHROW(synthesize(xi, W, dt, 4));
  std::vector<double> bad1 = {0.1, 0.25, 0.3};  // non-uniform
  CHECK_THROWS_AS(synthesize(bad1, W, dt, 4), std::invalid_argument);
  std::vector<double> bad2 = {0.2, 0.4, 0.6};  // does not start at dxi... (starts at 0.2 with spacing 0.2: fine)
  CHECK_NOTHROW(synthesize(bad2, W, dt, 4));
  std::vector<double> bad3 = {3.0, 6.0, 9.0};  // beyond pi/dt = 2pi
  CHECK_THROWS_WITH_AS(synthesize(bad3, W, dt, 2),
                       "frequency bins exceed the lattice Nyquist limit pi / dt",
                       std::invalid_argument);
}

TEST_CASE("synthesize rejects a window longer than its periodization") {
  const double dt = 0.5;
  std::vector<double> xi = {0.5, 1.0};
  std::vector<cplx> W(2, cplx(0, 1));
  // period 2 pi / 0.5 ~ 12.57 -> 26 steps of 0.5 exceed it
  CHECK_THROWS_WITH_AS(synthesize(xi, W, dt, 26),
                       "time window exceeds the synthesis period 2 pi / dxi",
                       std::invalid_argument);
  CHECK_NOTHROW(synthesize(xi, W, dt, 25));
}

TEST_CASE("make_weights assembles the documented grid") {
  const double sg = 0.04, wT = 0.2, dt = 0.5;
  const int n = 128, qm = 4;
  WeightFunction w = make_weights(SpectrumKind::PoleSubtracted, Variant::Electric, sg, wT, dt, n, qm);
  CHECK(w.n_steps == n);
  CHECK(static_cast<int>(w.g.size()) == n);
  CHECK(w.dxi == doctest::Approx(2 * PI / (qm * n * dt)).epsilon(1e-15));
  CHECK(w.xi_max == doctest::Approx(PI / dt).epsilon(1e-15));
  CHECK(w.zero_mode_const == doctest::Approx(sg * wT / 2).epsilon(1e-15));
  CHECK(w.omega_T == wT);

  WeightFunction w0 = make_weights(SpectrumKind::ZeroTemperature, Variant::Electric, sg, 0.7, dt, n);
  CHECK(w0.omega_T == 0.0);  // forced; the kind has no temperature
  CHECK(w0.zero_mode_const == 0.0);

  WeightFunction wn = make_weights(SpectrumKind::NaiveCoth, Variant::Electric, sg, wT, dt, n);
  CHECK(wn.zero_mode_const == 0.0);  // naive control gets no closed-form zero mode
}

TEST_CASE("make_weights thermal kinds require positive conductivity") {
  CHECK_THROWS_AS(make_weights(SpectrumKind::PoleSubtracted, Variant::Electric, 0.0, 0.3, 0.5, 64),
                  std::invalid_argument);
}
