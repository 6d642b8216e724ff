#include "holo/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fft.hpp"
#include "holo/error.hpp"

namespace holo {

namespace detail {

struct AxisTables {
  std::size_t n = 0;
  std::size_t band_limit = 0;
  std::vector<Complex> source_chirp;     // S[n], including the shift's linear phase
  std::vector<Complex> dest_chirp;       // D[m], including the shift's constant + linear phase
  std::vector<Complex> kernel_spectrum;  // FFT(h * W) / 2N, length 2N
};

struct PropagationOperator {
  double z = 0.0;
  double wavelength = 0.0;
  Pitch source_pitch;
  Pitch dest_pitch;
  Offset shift;
  Shape shape;
  AxisTables x;
  AxisTables y;
  Complex constant;
  std::unique_ptr<BatchedFft> row_fft;  // block of rows, length 2 * cols
  std::unique_ptr<BatchedFft> col_fft;  // block of columns (transposed), length 2 * rows
};

}  // namespace detail

namespace {

using detail::AxisTables;
using detail::PropagationOperator;
constexpr double kPi = std::numbers::pi;

Complex unit_phasor(double radians) { return {std::cos(radians), std::sin(radians)}; }

double centered(std::size_t index, std::size_t n) {
  return static_cast<double>(static_cast<std::ptrdiff_t>(index) - static_cast<std::ptrdiff_t>(n / 2));
}

// p_sx * p_sy * exp(i 2 pi z / lambda) / (i lambda z)
Complex fresnel_constant(double z, double wavelength, Pitch source_pitch) {
  const double cycles = z / wavelength;
  const Complex carrier = unit_phasor(2.0 * kPi * (cycles - std::floor(cycles)));
  return source_pitch.x * source_pitch.y * carrier / (Complex(0.0, 1.0) * wavelength * z);
}

AxisTables build_axis(std::size_t n, double z, double wavelength, double source_pitch, double scale,
                      double shift, std::size_t band_limit) {
  AxisTables t;
  t.n = n;
  t.band_limit = band_limit;
  const double c = kPi * source_pitch * source_pitch / (wavelength * z);
  const double lz = wavelength * z;
  t.source_chirp.resize(n);
  t.dest_chirp.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = centered(i, n);
    t.source_chirp[i] = unit_phasor(c * (1.0 - scale) * k * k - 2.0 * kPi * shift * k * source_pitch / lz);
    t.dest_chirp[i] = unit_phasor(c * (scale * scale - scale) * k * k +
                                  2.0 * kPi * shift * scale * source_pitch * k / lz +
                                  kPi * shift * shift / lz);
  }
  const std::size_t padded = 2 * n;
  t.kernel_spectrum.assign(padded, Complex{});
  for (std::size_t j = 0; j < padded; ++j) {
    const double k = j < n ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(padded);
    if (std::abs(k) <= static_cast<double>(band_limit)) t.kernel_spectrum[j] = unit_phasor(c * scale * k * k);
  }
  detail::fft_forward_1d(t.kernel_spectrum.data(), padded);
  for (Complex& v : t.kernel_spectrum) v /= static_cast<double>(padded);
  return t;
}

// Transforms run over blocks of this many rows (or columns) at a time so the
// padded working set stays cache resident.
std::size_t block_rows(std::size_t n) {
  std::size_t b = 32;
  while (n % b != 0) b /= 2;
  return b;
}

std::shared_ptr<const PropagationOperator> build_operator(double z, Pitch src, Pitch dst, double wavelength,
                                                          Shape shape, Offset shift) {
  auto op = std::make_shared<PropagationOperator>();
  op->z = z;
  op->wavelength = wavelength;
  op->source_pitch = src;
  op->dest_pitch = dst;
  op->shift = shift;
  op->shape = shape;
  const double sx = dst.x / src.x;
  const double sy = dst.y / src.y;
  const auto kx = static_cast<std::size_t>(band_limit_half_width(wavelength, z, src.x, sx));
  const auto ky = static_cast<std::size_t>(band_limit_half_width(wavelength, z, src.y, sy));
  op->x = build_axis(shape.cols, z, wavelength, src.x, sx, shift.x, kx);
  op->y = build_axis(shape.rows, z, wavelength, src.y, sy, shift.y, ky);
  op->constant = fresnel_constant(z, wavelength, src);
  op->row_fft = std::make_unique<detail::BatchedFft>(2 * shape.cols, block_rows(shape.rows));
  op->col_fft = std::make_unique<detail::BatchedFft>(2 * shape.rows, block_rows(shape.cols));
  return op;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

void check_input(const PropagationOperator& op, const ComplexField& field) {
  if (field.shape() != op.shape) {
    throw Error(ErrorCode::PlanMismatch, "field is " + std::to_string(field.rows()) + "x" +
                                             std::to_string(field.cols()) + ", plan expects " +
                                             std::to_string(op.shape.rows) + "x" + std::to_string(op.shape.cols));
  }
  if (!close(field.pitch().x, op.source_pitch.x) || !close(field.pitch().y, op.source_pitch.y)) {
    throw Error(ErrorCode::PlanMismatch, "field pitch does not match the plan's input pitch");
  }
  if (!close(field.wavelength(), op.wavelength)) {
    throw Error(ErrorCode::PlanMismatch, "field wavelength does not match the plan");
  }
}

// `count` rows of length 2N with data in the first N entries, convolved in
// place with the axis kernel.
void convolve_block(const detail::BatchedFft& fft, const AxisTables& axis, Complex* buf) {
  fft.forward(buf);
  const std::size_t len = fft.length();
  for (std::size_t b = 0; b < fft.batch(); ++b) {
    Complex* row = buf + b * len;
    for (std::size_t j = 0; j < len; ++j) row[j] *= axis.kernel_spectrum[j];
  }
  fft.backward(buf);
}

ComplexField apply(const PropagationOperator& op, const ComplexField& field) {
  check_input(op, field);
  const std::size_t rows = op.shape.rows;
  const std::size_t cols = op.shape.cols;
  const auto in = field.samples();

  // x pass: block of rows -> padded buffer -> convolve -> transposed store.
  std::vector<Complex> mid(cols * rows);
  {
    const std::size_t block = op.row_fft->batch();
    auto buf = detail::make_fft_buffer(block * 2 * cols);
    for (std::size_t r0 = 0; r0 < rows; r0 += block) {
      for (std::size_t b = 0; b < block; ++b) {
        const std::size_t r = r0 + b;
        Complex* dst = buf.get() + b * 2 * cols;
        const Complex sy = op.y.source_chirp[r];
        for (std::size_t c = 0; c < cols; ++c) dst[c] = in[r * cols + c] * op.x.source_chirp[c] * sy;
        std::fill(dst + cols, dst + 2 * cols, Complex{});
      }
      convolve_block(*op.row_fft, op.x, buf.get());
      for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t b = 0; b < block; ++b) mid[c * rows + r0 + b] = buf[b * 2 * cols + c];
      }
    }
  }

  // y pass on the transpose, written back in row-major order.
  std::vector<Complex> out(rows * cols);
  {
    const std::size_t block = op.col_fft->batch();
    auto buf = detail::make_fft_buffer(block * 2 * rows);
    for (std::size_t c0 = 0; c0 < cols; c0 += block) {
      for (std::size_t b = 0; b < block; ++b) {
        Complex* dst = buf.get() + b * 2 * rows;
        const Complex* src = mid.data() + (c0 + b) * rows;
        std::copy(src, src + rows, dst);
        std::fill(dst + rows, dst + 2 * rows, Complex{});
      }
      convolve_block(*op.col_fft, op.y, buf.get());
      for (std::size_t r = 0; r < rows; ++r) {
        const Complex dy = op.constant * op.y.dest_chirp[r];
        for (std::size_t b = 0; b < block; ++b) {
          out[r * cols + c0 + b] = dy * op.x.dest_chirp[c0 + b] * buf[b * 2 * rows + r];
        }
      }
    }
  }
  return ComplexField(rows, cols, op.dest_pitch, op.wavelength, std::move(out));
}

void validate_geometry(double z, Pitch src, Pitch dst, double wavelength) {
  if (z == 0.0 || !std::isfinite(z)) throw Error(ErrorCode::InvalidGeometry, "propagation distance must be nonzero");
  for (double p : {src.x, src.y, dst.x, dst.y}) {
    if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidGeometry, "pitches must be positive");
  }
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw Error(ErrorCode::InvalidGeometry, "wavelength must be positive");
  }
}

}  // namespace

double band_limit_half_width(double wavelength, double z, double source_pitch, double scale) {
  return std::floor(wavelength * std::abs(z) / (2.0 * scale * source_pitch * source_pitch));
}

PropagationPlan make_plan(double z, Pitch source_pitch, Pitch dest_pitch, double wavelength, Shape shape,
                          Offset shift) {
  validate_geometry(z, source_pitch, dest_pitch, wavelength);
  if (shape.rows < 2 || shape.cols < 2 || shape.rows % 2 != 0 || shape.cols % 2 != 0) {
    throw Error(ErrorCode::InvalidGeometry, "grid sides must be even and at least 2");
  }
  const double kx = band_limit_half_width(wavelength, z, source_pitch.x, dest_pitch.x / source_pitch.x);
  const double ky = band_limit_half_width(wavelength, z, source_pitch.y, dest_pitch.y / source_pitch.y);
  if (kx < 1.0 || ky < 1.0) {
    throw Error(ErrorCode::DegeneratePlan, "band-limit window is empty (K = " + std::to_string(kx) + ", " +
                                               std::to_string(ky) + ")");
  }
  PropagationPlan plan;
  plan.forward_ = build_operator(z, source_pitch, dest_pitch, wavelength, shape, shift);
  plan.inverse_ = build_operator(-z, dest_pitch, source_pitch, wavelength, shape, -shift);
  return plan;
}

double PropagationPlan::distance() const noexcept { return forward_->z; }
Pitch PropagationPlan::source_pitch() const noexcept { return forward_->source_pitch; }
Pitch PropagationPlan::dest_pitch() const noexcept { return forward_->dest_pitch; }
double PropagationPlan::wavelength() const noexcept { return forward_->wavelength; }
Offset PropagationPlan::dest_shift() const noexcept { return forward_->shift; }
Shape PropagationPlan::shape() const noexcept { return forward_->shape; }
Pitch PropagationPlan::scale() const noexcept {
  return {forward_->dest_pitch.x / forward_->source_pitch.x, forward_->dest_pitch.y / forward_->source_pitch.y};
}
std::size_t PropagationPlan::band_limit_x() const noexcept { return forward_->x.band_limit; }
std::size_t PropagationPlan::band_limit_y() const noexcept { return forward_->y.band_limit; }

ComplexField propagate(const PropagationPlan& plan, const ComplexField& field) { return apply(*plan.forward_, field); }

ComplexField propagate_inverse(const PropagationPlan& plan, const ComplexField& field) {
  return apply(*plan.inverse_, field);
}

ComplexField propagate_direct_dft(double z, Pitch source_pitch, Pitch dest_pitch, double wavelength, Offset shift,
                                  const ComplexField& field, DirectDftOptions options) {
  validate_geometry(z, source_pitch, dest_pitch, wavelength);
  const std::size_t rows = field.rows();
  const std::size_t cols = field.cols();
  if (!options.allow_large && (rows > options.max_side || cols > options.max_side)) {
    throw Error(ErrorCode::OracleTooLarge, "direct Fresnel sum refused for a " + std::to_string(rows) + "x" +
                                               std::to_string(cols) + " grid");
  }
  const double lz = wavelength * z;
  // kernel[m][n] = exp(i pi (x_d(m) - x_s(n))^2 / (lambda z)) for one axis
  auto axis_kernel = [&](std::size_t n, double ps, double pd, double o) {
    std::vector<Complex> k(n * n);
    for (std::size_t m = 0; m < n; ++m) {
      const double xd = centered(m, n) * pd + o;
      for (std::size_t s = 0; s < n; ++s) {
        const double d = xd - centered(s, n) * ps;
        k[m * n + s] = unit_phasor(kPi * d * d / lz);
      }
    }
    return k;
  };
  const auto kx = axis_kernel(cols, source_pitch.x, dest_pitch.x, shift.x);
  const auto ky = axis_kernel(rows, source_pitch.y, dest_pitch.y, shift.y);
  const Complex constant = fresnel_constant(z, wavelength, source_pitch);
  const auto in = field.samples();

  std::vector<Complex> out(rows * cols);
  for (std::size_t my = 0; my < rows; ++my) {
    for (std::size_t mx = 0; mx < cols; ++mx) {
      Complex acc{};
      for (std::size_t ny = 0; ny < rows; ++ny) {
        const Complex wy = ky[my * rows + ny];
        for (std::size_t nx = 0; nx < cols; ++nx) acc += in[ny * cols + nx] * wy * kx[mx * cols + nx];
      }
      out[my * cols + mx] = constant * acc;
    }
  }
  return ComplexField(rows, cols, dest_pitch, wavelength, std::move(out));
}

}  // namespace holo
