#include "holo/encoding.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "holo/error.hpp"

namespace holo {

std::string_view to_string(Encoding e) { return e == Encoding::PhaseOnly ? "phase-only" : "bleached"; }

Encoding parse_encoding(std::string_view text) {
  if (text == "phase-only") return Encoding::PhaseOnly;
  if (text == "bleached") return Encoding::Bleached;
  throw Error(ErrorCode::InvalidArgument, "unknown encoding '" + std::string(text) + "'");
}

PhaseHologram encode_phase_only(const ComplexField& field) {
  PhaseHologram h{field.rows(), field.cols(), field.pitch(), field.wavelength(), {}, Encoding::PhaseOnly, 1.0};
  h.phase.reserve(field.samples().size());
  for (const Complex& z : field.samples()) h.phase.push_back(principal_arg(z));
  return h;
}

PhaseHologram encode_bleached(const ComplexField& field, double peak_phase) {
  PhaseHologram h{field.rows(), field.cols(), field.pitch(), field.wavelength(), {}, Encoding::Bleached, 0.0};
  double peak = 0.0;
  for (const Complex& z : field.samples()) peak = std::max(peak, std::abs(z.real()));
  h.scale = peak > 0.0 ? peak_phase / peak : 0.0;
  h.phase.reserve(field.samples().size());
  for (const Complex& z : field.samples()) h.phase.push_back(h.scale * z.real());
  return h;
}

PhaseHologram encode(const ComplexField& field, Encoding encoding) {
  return encoding == Encoding::PhaseOnly ? encode_phase_only(field) : encode_bleached(field);
}

ComplexField lift(const PhaseHologram& holo) {
  std::vector<Complex> samples(holo.phase.size());
  for (std::size_t k = 0; k < samples.size(); ++k) samples[k] = {std::cos(holo.phase[k]), std::sin(holo.phase[k])};
  return ComplexField(holo.rows, holo.cols, holo.pitch, holo.wavelength, std::move(samples));
}

}  // namespace holo
