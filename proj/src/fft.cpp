#include "fft.hpp"

#include <algorithm>
#include <mutex>
#include <new>

namespace holo::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FftBuffer make_fft_buffer(std::size_t count) {
  auto* raw = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(count));
  if (raw == nullptr) throw std::bad_alloc();
  for (std::size_t i = 0; i < count; ++i) raw[i] = {};
  return FftBuffer(raw);
}

BatchedFft::BatchedFft(std::size_t length, std::size_t batch) : BatchedFft(length, batch, 1, length) {}

BatchedFft::BatchedFft(std::size_t length, std::size_t batch, std::size_t stride, std::size_t distance)
    : length_(length), batch_(batch) {
  FftBuffer scratch = make_fft_buffer(length * batch);
  const int n = static_cast<int>(length);
  const int howmany = static_cast<int>(batch);
  const int st = static_cast<int>(stride);
  const int dist = static_cast<int>(distance);
  std::lock_guard lock(planner_mutex());
  forward_ = fftw_plan_many_dft(1, &n, howmany, as_fftw(scratch.get()), nullptr, st, dist,
                                as_fftw(scratch.get()), nullptr, st, dist, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_many_dft(1, &n, howmany, as_fftw(scratch.get()), nullptr, st, dist,
                                 as_fftw(scratch.get()), nullptr, st, dist, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (forward_ == nullptr || backward_ == nullptr) throw std::bad_alloc();
}

BatchedFft::~BatchedFft() {
  std::lock_guard lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(forward_);
  if (backward_ != nullptr) fftw_destroy_plan(backward_);
}

void BatchedFft::forward(std::complex<double>* data) const {
  fftw_execute_dft(forward_, as_fftw(data), as_fftw(data));
}

void BatchedFft::backward(std::complex<double>* data) const {
  fftw_execute_dft(backward_, as_fftw(data), as_fftw(data));
}

void fft_forward_1d(std::complex<double>* data, std::size_t length) {
  FftBuffer aligned = make_fft_buffer(length);
  std::copy(data, data + length, aligned.get());
  BatchedFft(length, 1).forward(aligned.get());
  std::copy(aligned.get(), aligned.get() + length, data);
}

}  // namespace holo::detail
