#pragma once

// Dense polynomial helpers shared by double and exact-rational code paths.
// Coefficients are stored lowest degree first.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace maxnorm {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

namespace poly {

template <class T>
T binomial(int n, int k) {
  T r = 1;
  for (int i = 1; i <= k; ++i) r = r * T(n - k + i) / T(i);
  return r;
}

template <class T>
T horner(const std::vector<T>& c, const T& x) {
  T r = 0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

template <class T>
std::vector<T> derivative(const std::vector<T>& c) {
  if (c.size() <= 1) return {};
  std::vector<T> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * T(static_cast<long>(k));
  return d;
}

template <class T>
std::vector<T> add(std::vector<T> a, const std::vector<T>& b) {
  if (a.size() < b.size()) a.resize(b.size(), T(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

template <class T>
std::vector<T> scale(std::vector<T> a, const T& s) {
  for (auto& x : a) x *= s;
  return a;
}

template <class T>
std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<T> c(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

/// Multiplies by t.
template <class T>
std::vector<T> shift_up(const std::vector<T>& a) {
  if (a.empty()) return {};
  std::vector<T> c(a.size() + 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i) c[i + 1] = a[i];
  return c;
}

/// Coefficients of p(1 - s) in powers of s. Applying it twice is the identity.
template <class T>
std::vector<T> reflect(const std::vector<T>& c) {
  std::vector<T> b(c.size(), T(0));
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      T term = c[k] * binomial<T>(static_cast<int>(k), static_cast<int>(j));
      if (j % 2 == 1) term = -term;
      b[j] += term;
    }
  }
  return b;
}

/// (1 - t)^n expanded.
template <class T>
std::vector<T> one_minus_t_pow(int n) {
  std::vector<T> c(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    T b = binomial<T>(n, j);
    c[static_cast<std::size_t>(j)] = (j % 2 == 1) ? T(-b) : b;
  }
  return c;
}

template <class T>
void trim(std::vector<T>& c) {
  while (!c.empty() && c.back() == T(0)) c.pop_back();
}

template <class T>
std::vector<double> to_double(const std::vector<T>& c) {
  std::vector<double> out;
  out.reserve(c.size());
  for (const auto& x : c) out.push_back(maxnorm::to_double(x));
  return out;
}

}  // namespace poly
}  // namespace maxnorm
