#pragma once

// Periodic side: multipliers phi(max(|k1|, |k2|)) on Z^2, their kernels
// K(x) = sum_k phi e^{i(k, x)} on the torus, L1 norms of the kernels and the
// periodization identity linking samples f(delta k) to the 2D transform.

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "maxnorm/common.hpp"
#include "maxnorm/membership.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/transform.hpp"

namespace maxnorm {

enum class GeneratorKind { marcinkiewicz_riesz, exponential, profile, sharp };

struct Generator {
  GeneratorKind kind = GeneratorKind::sharp;
  double alpha = 1, beta = 1;     // Marcinkiewicz-Riesz exponents
  std::optional<Profile> profile;  // for GeneratorKind::profile

  static Generator mr(double a, double b) { return {GeneratorKind::marcinkiewicz_riesz, a, b, std::nullopt}; }
  static Generator exp() { return {GeneratorKind::exponential, 1, 1, std::nullopt}; }
  static Generator sharp() { return {GeneratorKind::sharp, 1, 1, std::nullopt}; }
  static Generator of(Profile p) { return {GeneratorKind::profile, 1, 1, std::move(p)}; }
};

/// Field phi(max(|k1|, |k2|)) on [-K, K]^2 stored by shell m = 0..K.
struct MultiplierField {
  std::string generator;
  double scale = 0;            // n for mr / sharp, eps for exp, delta for profile
  int K = 0;
  std::vector<double> radial;  // radial[m] = phi(m)
  double tail_estimate = 0;    // sum of |phi| over the dropped lattice points
  double tail_sup = 0;         // largest dropped |phi|
  bool tail_flag = false;      // tail above the requested budget

  double at(int k1, int k2) const {
    int m = std::max(std::abs(k1), std::abs(k2));
    return m <= K ? radial[static_cast<std::size_t>(m)] : 0.0;
  }
};

namespace detail {

// Sum over shells m > K of 8m |phi(m)|, stopping once terms are negligible.
template <class Phi>
double shell_tail(Phi&& phi, int K, double* sup = nullptr, int hard_cap = 1000000) {
  double acc = 0;
  int quiet = 0;
  for (int m = K + 1; m < hard_cap; ++m) {
    double v = std::abs(phi(m));
    if (sup) *sup = std::max(*sup, v);
    double term = 8.0 * m * v;
    acc += term;
    quiet = term <= 1e-18 * std::max(acc, 1e-300) || term == 0 ? quiet + 1 : 0;
    if (quiet > 64) break;
  }
  return acc;
}

}  // namespace detail

/// Samples the generator on the lattice. `K = 0` picks the window: the
/// support for compact generators, otherwise the smallest K whose dropped
/// shells sum to at most `budget` (capped at 4096 and flagged beyond).
inline MultiplierField sample_multiplier(const Generator& gen, double scale, int K = 0, double budget = 1e-10) {
  if (!(scale > 0)) throw domain_error("multiplier scale must be > 0");
  if (K < 0) throw domain_error("lattice window must be >= 0");
  MultiplierField f;
  f.scale = scale;
  std::function<double(int)> phi;
  int natural = -1;  // window beyond which phi vanishes
  std::ostringstream desc;
  switch (gen.kind) {
    case GeneratorKind::marcinkiewicz_riesz: {
      if (!(gen.alpha > 0) || !(gen.beta > 0)) throw domain_error("Marcinkiewicz-Riesz exponents must be > 0");
      double a = gen.alpha, b = gen.beta, n = scale;
      phi = [a, b, n](int m) {
        double r = m / n;
        return r >= 1 ? 0.0 : std::pow(1 - std::pow(r, a), b);
      };
      natural = static_cast<int>(std::ceil(n));
      desc << "mr(alpha=" << a << ", beta=" << b << ", n=" << n << ")";
      break;
    }
    case GeneratorKind::exponential: {
      double eps = scale;
      phi = [eps](int m) { return std::exp(-eps * m); };
      desc << "exp(eps=" << eps << ")";
      break;
    }
    case GeneratorKind::profile: {
      if (!gen.profile) throw domain_error("profile generator needs a profile");
      const Profile& p = *gen.profile;
      double delta = scale;
      phi = [&p, delta](int m) { return p.eval_unchecked(delta * m); };
      if (p.compact()) natural = static_cast<int>(std::ceil(p.support_radius() / delta));
      desc << "profile(" << p.describe() << ", delta=" << delta << ")";
      break;
    }
    case GeneratorKind::sharp: {
      int n = static_cast<int>(std::floor(scale));
      phi = [n](int m) { return m <= n ? 1.0 : 0.0; };
      natural = n;
      desc << "sharp(n=" << n << ")";
      break;
    }
  }
  f.generator = desc.str();
  if (K == 0) {
    if (natural >= 0) {
      K = natural;
    } else {
      K = 1;
      while (K < 4096 && detail::shell_tail(phi, K) > budget) K = K < 64 ? K + 1 : K + K / 8;
      K = std::min(K, 4096);
    }
  }
  f.K = K;
  f.radial.resize(static_cast<std::size_t>(K) + 1);
  for (int m = 0; m <= K; ++m) f.radial[static_cast<std::size_t>(m)] = phi(m);
  f.tail_estimate = (natural >= 0 && K >= natural) ? 0.0 : detail::shell_tail(phi, K, &f.tail_sup);
  f.tail_flag = f.tail_estimate > budget;
  return f;
}

namespace detail {

// D_m(x) = sum_{|k| <= m} e^{ikx} for m = 0..K.
inline std::vector<double> dirichlet_table(double x, int K) {
  std::vector<double> D(static_cast<std::size_t>(K) + 1);
  double acc = 1;
  D[0] = 1;
  for (int m = 1; m <= K; ++m) D[static_cast<std::size_t>(m)] = acc += 2 * std::cos(m * x);
  return D;
}

// Shell differences phi_m - phi_{m+1}; K(x) = sum_m w_m D_m(x1) D_m(x2).
inline std::vector<double> shell_weights(const MultiplierField& f) {
  std::vector<double> w(f.radial.size());
  for (std::size_t m = 0; m < w.size(); ++m) w[m] = f.radial[m] - (m + 1 < w.size() ? f.radial[m + 1] : 0.0);
  return w;
}

inline double kernel_from_tables(const std::vector<double>& w, const std::vector<double>& D1,
                                 const std::vector<double>& D2) {
  double s = 0;
  for (std::size_t m = 0; m < w.size(); ++m) s += w[m] * D1[m] * D2[m];
  return s;
}

}  // namespace detail

/// Brute-force complex sum over the lattice window; the test oracle.
inline std::complex<double> kernel_direct(const MultiplierField& f, double x1, double x2) {
  std::complex<double> s = 0;
  for (int k1 = -f.K; k1 <= f.K; ++k1)
    for (int k2 = -f.K; k2 <= f.K; ++k2) s += f.at(k1, k2) * std::polar(1.0, k1 * x1 + k2 * x2);
  return s;
}

struct Kernel2D {
  std::size_t N = 0;
  std::vector<double> grid;    // x_i = -pi + 2 pi i / N
  std::vector<double> values;  // row-major, values[i * N + j] = K(x_i, x_j)
  double min = 0, max = 0;
  double min_x1 = 0, min_x2 = 0;
  double mean = 0;

  double at(std::size_t i, std::size_t j) const { return values[i * N + j]; }
};

/// K on the N x N grid x_i = -pi + 2 pi i / N.
inline Kernel2D kernel(const MultiplierField& f, std::size_t N = 256) {
  if (N < 2) throw domain_error("kernel grid needs two or more points per axis");
  Kernel2D k;
  k.N = N;
  k.grid.resize(N);
  for (std::size_t i = 0; i < N; ++i) k.grid[i] = -pi + 2 * pi * static_cast<double>(i) / static_cast<double>(N);
  std::vector<std::vector<double>> D(N);
  parallel_for(N, [&](std::size_t i) { D[i] = detail::dirichlet_table(k.grid[i], f.K); });
  auto w = detail::shell_weights(f);
  k.values.resize(N * N);
  parallel_for(N, [&](std::size_t i) {
    for (std::size_t j = 0; j < N; ++j) k.values[i * N + j] = detail::kernel_from_tables(w, D[i], D[j]);
  });
  k.min = k.max = k.values[0];
  double acc = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      double v = k.values[i * N + j];
      acc += v;
      if (v < k.min) {
        k.min = v;
        k.min_x1 = k.grid[i];
        k.min_x2 = k.grid[j];
      }
      k.max = std::max(k.max, v);
    }
  k.mean = acc / static_cast<double>(N * N);
  return k;
}

struct L1Norm {
  double value = 0;           // on the refined grid
  double coarse = 0;          // on the base grid
  double error_estimate = 0;  // |value - coarse|
  std::size_t grid = 0;
};

namespace detail {

// (2 pi)^-2 int |K| by the midpoint rule with N points per axis; K is even in
// each coordinate so one quadrant of the symmetric midpoint grid suffices.
inline double l1_midpoint(const MultiplierField& f, std::size_t N) {
  std::size_t H = N / 2;
  std::vector<std::vector<double>> D(H);
  parallel_for(H, [&](std::size_t i) {
    double x = pi * (static_cast<double>(i) + 0.5) / static_cast<double>(H);
    D[i] = dirichlet_table(x, f.K);
  });
  auto w = shell_weights(f);
  std::vector<double> rows(H);
  parallel_for(H, [&](std::size_t i) {
    double s = 0;
    for (std::size_t j = 0; j < H; ++j) s += std::abs(kernel_from_tables(w, D[i], D[j]));
    rows[i] = s;
  });
  double total = 0;
  for (double r : rows) total += r;
  return total / static_cast<double>(H * H);
}

}  // namespace detail

/// `grid_density` 0 picks max(512, 16 K) points per axis so that the
/// oscillations of the kernel stay resolved; the estimate is refined once to
/// twice that density.
inline L1Norm kernel_l1_norm(const MultiplierField& f, std::size_t grid_density = 0) {
  if (grid_density == 0) grid_density = std::max<std::size_t>(512, 16 * static_cast<std::size_t>(f.K));
  if (grid_density < 2 || grid_density % 2) throw domain_error("L1 grid density must be even");
  L1Norm r;
  r.grid = 2 * grid_density;
  r.coarse = detail::l1_midpoint(f, grid_density);
  r.value = detail::l1_midpoint(f, 2 * grid_density);
  r.error_estimate = std::abs(r.value - r.coarse);
  return r;
}

struct GrowthFit {
  double exponent = 0;  // p in N = (a + b ln n)^p
  double a = 0, b = 0;
  double r_squared = 0;
};

/// Fits norms N(n) = (a + b ln n)^p by scanning p and fitting N^{1/p}
/// linearly in ln n.
inline GrowthFit fit_log_power(const std::vector<double>& n, const std::vector<double>& norms) {
  if (n.size() != norms.size() || n.size() < 3) throw domain_error("growth fit needs three or more points");
  std::vector<double> x;
  for (double v : n) x.push_back(std::log(v));
  GrowthFit best;
  best.r_squared = -INFINITY;
  for (int i = 0; i <= 700; ++i) {
    double p = 0.5 + 0.005 * i;
    std::vector<double> y;
    for (double v : norms) y.push_back(std::pow(v, 1 / p));
    auto f = fit_line(x, y);
    if (f.r_squared > best.r_squared) best = {p, f.intercept, f.slope, f.r_squared};
  }
  return best;
}

struct CoefficientSample {
  int k1 = 0, k2 = 0;
  double reconstructed = 0;  // periodized transform, extrapolated in the image window
  double raw = 0;            // periodized transform, full image window only
  double from_kernel = 0;    // direct-sum kernel of the sampled field
  double direct = 0;         // f(delta k)
  double abs_diff = 0;       // |reconstructed - direct|
};

struct PeriodizationReport {
  double delta = 0;
  int images = 0;            // |m|_inf <= images in the periodization sum
  std::size_t grid = 0;
  std::vector<CoefficientSample> samples;  // first entry is k = (0, 0), the kernel mean
  double discrepancy = 0;    // max abs_diff
  double imag_residue = 0;   // largest |sum K sin(k, x)| / N^2
  double budget = 1e-4;
  bool flagged = false;
};

namespace detail {

// delta^-2 sum_{|m|_inf <= M} fhat((2 pi m - x) / delta) on the grid
// x_i = -pi + 2 pi i / N. K is even in each coordinate and symmetric under
// the swap, so it is computed on (|x1|, |x2|) = 2 pi (q1, q2) / N, q1 <= q2.
inline std::vector<double> periodized_kernel(const GFunction& G, double origin, double delta, int M, std::size_t N) {
  std::size_t H = N / 2;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a <= H; ++a)
    for (std::size_t b = a; b <= H; ++b) pairs.emplace_back(a, b);
  std::vector<double> V((H + 1) * (H + 1));
  parallel_for(pairs.size(), [&](std::size_t n) {
    auto [a, b] = pairs[n];
    double y1 = 2 * pi * static_cast<double>(a) / static_cast<double>(N);
    double y2 = 2 * pi * static_cast<double>(b) / static_cast<double>(N);
    double s = 0;
    for (int m1 = -M; m1 <= M; ++m1)
      for (int m2 = -M; m2 <= M; ++m2) s += G.fhat((2 * pi * m1 - y1) / delta, (2 * pi * m2 - y2) / delta, origin);
    V[a * (H + 1) + b] = V[b * (H + 1) + a] = s / (delta * delta);
  });
  auto q_of = [H](std::size_t i) { return i >= H ? i - H : H - i; };
  std::vector<double> K(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) K[i * N + j] = V[q_of(i) * (H + 1) + q_of(j)];
  return K;
}

// Riemann-sum Fourier coefficient; the sine part goes to *imag.
inline double grid_coefficient(const std::vector<double>& K, std::size_t N, int k1, int k2, double* imag = nullptr) {
  double re = 0, im = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double x1 = -pi + 2 * pi * static_cast<double>(i) / static_cast<double>(N);
    for (std::size_t j = 0; j < N; ++j) {
      double x2 = -pi + 2 * pi * static_cast<double>(j) / static_cast<double>(N);
      double ph = k1 * x1 + k2 * x2;
      re += K[i * N + j] * std::cos(ph);
      im += K[i * N + j] * std::sin(ph);
    }
  }
  double n2 = static_cast<double>(N * N);
  if (imag) *imag = std::abs(im) / n2;
  return re / n2;
}

}  // namespace detail

/// Two routes to the Fourier coefficients of the periodic kernel with
/// samples f(delta k): the Poisson periodization
///   K(x) = delta^-2 sum_m fhat((2 pi m - x) / delta),  |m|_inf <= images,
/// read off by an N x N Riemann sum, against the samples themselves. The
/// truncation error of the image sum is O(1 / images); one Richardson step
/// against images / 2 removes the leading term.
inline PeriodizationReport periodization_check(const Profile& p, double delta, int images = 40, std::size_t N = 64,
                                               double budget = 1e-4) {
  if (!(delta > 0)) throw domain_error("periodization needs delta > 0");
  if (images < 2 || N < 4 || N % 2) throw domain_error("periodization needs images >= 2 and an even grid >= 4");
  if (!p.is_zero() && !modulus_criterion(p).satisfied)
    throw domain_error("transform not known to be integrable for this profile");
  PeriodizationReport r;
  r.delta = delta;
  r.images = images;
  r.grid = N;
  r.budget = budget;

  std::vector<double> full(N * N, 0.0), half(N * N, 0.0);
  if (!p.is_zero()) {
    FhatEvaluator ev(p);
    double reach = 2.0 * (2 * pi * (images + 1)) / delta;
    GFunction G(ev, reach, static_cast<std::size_t>(std::min(4e5, reach / 0.01)) + 1);
    full = detail::periodized_kernel(G, ev.origin(), delta, images, N);
    half = detail::periodized_kernel(G, ev.origin(), delta, images / 2, N);
  }
  auto field = sample_multiplier(Generator::of(p), delta, static_cast<int>(N / 2 - 1));
  auto kd = kernel(field, N);
  // Richardson weight for errors c / M with M in {images / 2, images}.
  double Mf = images, Mh = images / 2;
  double w = Mf / (Mf - Mh);

  for (auto [k1, k2] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {0, 3}, {3, 3}}) {
    CoefficientSample s;
    s.k1 = k1;
    s.k2 = k2;
    double im = 0;
    s.raw = detail::grid_coefficient(full, N, k1, k2, &im);
    double h = detail::grid_coefficient(half, N, k1, k2);
    s.reconstructed = w * s.raw + (1 - w) * h;
    s.from_kernel = detail::grid_coefficient(kd.values, N, k1, k2);
    s.direct = p(delta * std::max(std::abs(k1), std::abs(k2)));
    s.abs_diff = std::abs(s.reconstructed - s.direct);
    r.imag_residue = std::max(r.imag_residue, im);
    r.discrepancy = std::max(r.discrepancy, s.abs_diff);
    r.samples.push_back(s);
  }
  r.flagged = r.discrepancy > budget;
  return r;
}

}  // namespace maxnorm
