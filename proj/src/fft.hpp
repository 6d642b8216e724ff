#pragma once

// Thin RAII layer over FFTW for batched, in-place 1-D complex transforms.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>

namespace holo::detail {

struct FftwFree {
  void operator()(std::complex<double>* p) const noexcept { fftw_free(p); }
};

/// SIMD-aligned buffer; every buffer handed to BatchedFft must come from here.
using FftBuffer = std::unique_ptr<std::complex<double>[], FftwFree>;

FftBuffer make_fft_buffer(std::size_t count);

/// `batch` transforms of length `length`, executed in place. Element i of
/// transform b lives at b * distance + i * stride; the default layout is
/// contiguous rows. Plans are created under a global lock (the FFTW planner is
/// not reentrant); execution is reentrant.
class BatchedFft {
 public:
  BatchedFft(std::size_t length, std::size_t batch);
  BatchedFft(std::size_t length, std::size_t batch, std::size_t stride, std::size_t distance);
  ~BatchedFft();
  BatchedFft(const BatchedFft&) = delete;
  BatchedFft& operator=(const BatchedFft&) = delete;

  std::size_t length() const noexcept { return length_; }
  std::size_t batch() const noexcept { return batch_; }

  void forward(std::complex<double>* data) const;
  void backward(std::complex<double>* data) const;

 private:
  std::size_t length_;
  std::size_t batch_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// Unnormalized single forward transform (used for kernel spectra).
void fft_forward_1d(std::complex<double>* data, std::size_t length);

}  // namespace holo::detail
