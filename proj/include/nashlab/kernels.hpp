#pragma once

#include <span>
#include <string>

namespace nashlab::kernels {

enum class Backend { kScalar, kAvx2 };

// Backend is process-global. select_best_backend() picks AVX2 when the CPU
// supports AVX2+FMA unless the NASHLAB_KERNELS environment variable
// ("scalar" | "avx2") says otherwise; it runs once at static-init time.
Backend active_backend();
void set_backend(Backend b);
bool avx2_supported();
void select_best_backend();
std::string backend_name(Backend b);

// y <- (1 - lambda) * y + lambda * w
void blend(std::span<double> y, std::span<const double> w, double lambda);
// y <- y + a * x
void axpy(std::span<double> y, std::span<const double> x, double a);
// x <- exp(x) elementwise; inputs are clamped to [-708, 709] first
void vexp(std::span<double> x);
// max_i |a_i - b_i|
double max_abs_diff(std::span<const double> a, std::span<const double> b);
// max_i |a_i|
double max_abs(std::span<const double> a);
double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
void scale(std::span<double> x, double a);

}  // namespace nashlab::kernels
