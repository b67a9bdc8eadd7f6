#include "chaoskit/spatial.hpp"

#include <fftw3.h>

#include <cmath>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

std::vector<std::complex<double>> run_fft(const std::vector<std::complex<double>>& in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.size());
  // FFTW guarantees complex<double> layout compatibility.
  fftw_complex* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  fftw_complex* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan = fftw_plan_dft_1d(n, src, dst, sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::vector<std::complex<double>> dft(const std::vector<double>& v) {
  std::vector<std::complex<double>> in(v.begin(), v.end());
  return run_fft(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& v) {
  return run_fft(v, FFTW_FORWARD);
}

std::vector<double> idft_real(const std::vector<std::complex<double>>& f) {
  const std::vector<std::complex<double>> out = run_fft(f, FFTW_BACKWARD);
  std::vector<double> real(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) real[i] = out[i].real() / static_cast<double>(out.size());
  return real;
}

double spatial_norm_sq(const std::vector<double>& v, const SpatialGrid& g) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return sum * g.dx();
}

std::vector<double> gaussian_bump(const SpatialGrid& g, double center, double width) {
  std::vector<double> out(static_cast<std::size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    double d = std::abs(g.node(j) - center);
    d = std::min(d, g.length - d);
    out[static_cast<std::size_t>(j)] = std::exp(-0.5 * d * d / (width * width));
  }
  return out;
}

SpatialOperator SpatialOperator::diffusion(double a, const SpatialGrid& g) {
  std::vector<std::complex<double>> symbol(static_cast<std::size_t>(g.n));
  for (int m = 0; m < g.n; ++m) {
    const double y = g.frequency(m);
    symbol[static_cast<std::size_t>(m)] = {-a * y * y, 0.0};
  }
  return from_symbol(std::move(symbol));
}

SpatialOperator SpatialOperator::convection(double c, const SpatialGrid& g) {
  std::vector<std::complex<double>> symbol(static_cast<std::size_t>(g.n));
  for (int m = 0; m < g.n; ++m) {
    if (g.n % 2 == 0 && m == g.n / 2) continue;  // odd symbol vanishes at Nyquist
    symbol[static_cast<std::size_t>(m)] = {0.0, c * g.frequency(m)};
  }
  return from_symbol(std::move(symbol));
}

SpatialOperator SpatialOperator::from_symbol(std::vector<std::complex<double>> symbol) {
  SpatialOperator op;
  op.kind_ = Kind::Symbol;
  op.symbol_ = std::move(symbol);
  return op;
}

SpatialOperator SpatialOperator::fd_laplacian(double a, const SpatialGrid& g) {
  Matrix m(g.n, g.n);
  const double scale = a / (g.dx() * g.dx());
  for (int j = 0; j < g.n; ++j) {
    m(j, j) = -2.0 * scale;
    m(j, (j + 1) % g.n) = scale;
    m(j, (j + g.n - 1) % g.n) = scale;
  }
  return from_matrix(std::move(m));
}

SpatialOperator SpatialOperator::fd_gradient(double c, const SpatialGrid& g) {
  Matrix m(g.n, g.n);
  const double scale = c / (2.0 * g.dx());
  for (int j = 0; j < g.n; ++j) {
    m(j, (j + 1) % g.n) = scale;
    m(j, (j + g.n - 1) % g.n) = -scale;
  }
  return from_matrix(std::move(m));
}

SpatialOperator SpatialOperator::from_matrix(Matrix m) {
  if (m.rows != m.cols) throw Error("spatial operator matrix must be square");
  SpatialOperator op;
  op.kind_ = Kind::Matrix;
  op.matrix_ = std::move(m);
  return op;
}

std::vector<double> SpatialOperator::apply(const std::vector<double>& v) const {
  if (kind_ == Kind::Matrix) return matvec(matrix_, v);
  std::vector<std::complex<double>> f = dft(v);
  for (std::size_t m = 0; m < f.size(); ++m) f[m] *= symbol_[m];
  return idft_real(f);
}

}  // namespace chaoskit
