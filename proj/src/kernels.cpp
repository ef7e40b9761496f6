#include "nashlab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace nashlab::kernels {

namespace {

Backend g_backend = Backend::kScalar;

struct Dispatch {
  void (*blend)(std::span<double>, std::span<const double>, double);
  void (*axpy)(std::span<double>, std::span<const double>, double);
  void (*vexp)(std::span<double>);
  double (*max_abs_diff)(std::span<const double>, std::span<const double>);
  double (*max_abs)(std::span<const double>);
  double (*sum)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  void (*scale)(std::span<double>, double);
};

}  // namespace

namespace scalar {

void blend(std::span<double> y, std::span<const double> w, double lambda) {
  const double keep = 1.0 - lambda;
  for (size_t i = 0; i < y.size(); ++i) y[i] = std::fma(lambda, w[i], keep * y[i]);
}

void axpy(std::span<double> y, std::span<const double> x, double a) {
  for (size_t i = 0; i < y.size(); ++i) y[i] = std::fma(a, x[i], y[i]);
}

void vexp(std::span<double> x) {
  for (double& v : x) {
    double c = v < -708.0 ? -708.0 : (v > 709.0 ? 709.0 : v);
    v = std::exp(c);
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s = std::fma(a[i], b[i], s);
  return s;
}

void scale(std::span<double> x, double a) {
  for (double& v : x) v *= a;
}

}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
// defined in kernels_avx2.cpp
void blend(std::span<double>, std::span<const double>, double);
void axpy(std::span<double>, std::span<const double>, double);
void vexp(std::span<double>);
double max_abs_diff(std::span<const double>, std::span<const double>);
double max_abs(std::span<const double>);
double sum(std::span<const double>);
double dot(std::span<const double>, std::span<const double>);
void scale(std::span<double>, double);
}  // namespace avx2
#endif

namespace {

Dispatch g_table = {scalar::blend, scalar::axpy, scalar::vexp, scalar::max_abs_diff,
                    scalar::max_abs, scalar::sum, scalar::dot, scalar::scale};

void install(Backend b) {
  if (b == Backend::kAvx2) {
#if defined(__x86_64__) || defined(_M_X64)
    g_table = {avx2::blend, avx2::axpy, avx2::vexp, avx2::max_abs_diff,
               avx2::max_abs, avx2::sum, avx2::dot, avx2::scale};
#endif
  } else {
    g_table = {scalar::blend, scalar::axpy, scalar::vexp, scalar::max_abs_diff,
               scalar::max_abs, scalar::sum, scalar::dot, scalar::scale};
  }
  g_backend = b;
}

struct AutoSelect {
  AutoSelect() { select_best_backend(); }
} g_auto_select;

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void select_best_backend() {
  Backend b = avx2_supported() ? Backend::kAvx2 : Backend::kScalar;
  if (const char* env = std::getenv("NASHLAB_KERNELS")) {
    std::string s(env);
    if (s == "scalar") b = Backend::kScalar;
    else if (s == "avx2") {
      if (!avx2_supported())
        throw std::runtime_error("NASHLAB_KERNELS=avx2 but CPU lacks AVX2/FMA");
      b = Backend::kAvx2;
    }
  }
  install(b);
}

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
  if (b == Backend::kAvx2 && !avx2_supported())
    throw std::runtime_error("AVX2 backend not supported on this CPU");
  install(b);
}

std::string backend_name(Backend b) {
  return b == Backend::kAvx2 ? "avx2" : "scalar";
}

void blend(std::span<double> y, std::span<const double> w, double lambda) {
  g_table.blend(y, w, lambda);
}
void axpy(std::span<double> y, std::span<const double> x, double a) {
  g_table.axpy(y, x, a);
}
void vexp(std::span<double> x) { g_table.vexp(x); }
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return g_table.max_abs_diff(a, b);
}
double max_abs(std::span<const double> a) { return g_table.max_abs(a); }
double sum(std::span<const double> a) { return g_table.sum(a); }
double dot(std::span<const double> a, std::span<const double> b) {
  return g_table.dot(a, b);
}
void scale(std::span<double> x, double a) { g_table.scale(x, a); }

}  // namespace nashlab::kernels
