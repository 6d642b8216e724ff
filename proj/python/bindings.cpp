#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "holo/diffraction.hpp"
#include "holo/encoding.hpp"
#include "holo/error.hpp"
#include "holo/field.hpp"
#include "holo/goldens.hpp"
#include "holo/gs.hpp"
#include "holo/io.hpp"
#include "holo/metrics.hpp"
#include "holo/phase_init.hpp"
#include "holo/pipeline.hpp"

namespace py = pybind11;
using namespace holo;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Pitch to_pitch(std::pair<double, double> p) { return {p.first, p.second}; }
std::pair<double, double> from_pitch(Pitch p) { return {p.x, p.y}; }

void require_2d(const py::array& a, const char* what) {
  if (a.ndim() != 2) throw py::value_error(std::string(what) + " must be a 2-D array");
}

template <class T>
py::array_t<T> to_numpy(std::size_t rows, std::size_t cols, std::span<const T> data) {
  py::array_t<T> out({rows, cols});
  std::memcpy(out.mutable_data(), data.data(), data.size() * sizeof(T));
  return out;
}

template <class T, class A>
std::vector<T> to_vector(const A& a) {
  return std::vector<T>(a.data(), a.data() + a.size());
}

ComplexField make_field(const ComplexArray& samples, std::pair<double, double> pitch, double wavelength) {
  require_2d(samples, "samples");
  return ComplexField(samples.shape(0), samples.shape(1), to_pitch(pitch), wavelength, to_vector<Complex>(samples));
}

RealImage make_image(const DoubleArray& pixels) {
  require_2d(pixels, "image");
  return RealImage(pixels.shape(0), pixels.shape(1), to_vector<double>(pixels));
}

GrayImage make_gray(const ByteArray& pixels) {
  require_2d(pixels, "image");
  return GrayImage(pixels.shape(0), pixels.shape(1), to_vector<std::uint8_t>(pixels));
}

py::array_t<double> real_to_numpy(const RealArray& a) {
  return to_numpy<double>(a.rows, a.cols, a.data);
}

py::array_t<std::uint8_t> gray_to_numpy(const GrayImage& g) {
  return to_numpy<std::uint8_t>(g.rows, g.cols, g.data);
}

}  // namespace

PYBIND11_MODULE(_holo, m) {
  m.doc() = "Scaled-diffraction phase hologram toolkit";

  static py::handle holo_error = py::exception<Error>(m, "HoloError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(holo_error)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(holo_error.ptr(), exc.ptr());
    }
  });

  py::class_<ComplexField>(m, "Field")
      .def(py::init(&make_field), py::arg("samples"), py::arg("pitch"), py::arg("wavelength"))
      .def_property_readonly("samples",
                             [](const ComplexField& f) { return to_numpy<Complex>(f.rows(), f.cols(), f.samples()); })
      .def_property_readonly("pitch", [](const ComplexField& f) { return from_pitch(f.pitch()); })
      .def_property_readonly("wavelength", &ComplexField::wavelength)
      .def_property_readonly("shape", [](const ComplexField& f) { return py::make_tuple(f.rows(), f.cols()); })
      .def("__repr__", [](const ComplexField& f) {
        return "<Field " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) + ">";
      });

  py::class_<PropagationPlan>(m, "PropagationPlan")
      .def_property_readonly("distance", &PropagationPlan::distance)
      .def_property_readonly("source_pitch", [](const PropagationPlan& p) { return from_pitch(p.source_pitch()); })
      .def_property_readonly("dest_pitch", [](const PropagationPlan& p) { return from_pitch(p.dest_pitch()); })
      .def_property_readonly("wavelength", &PropagationPlan::wavelength)
      .def_property_readonly("shift", [](const PropagationPlan& p) { return std::pair{p.dest_shift().x, p.dest_shift().y}; })
      .def_property_readonly("shape", [](const PropagationPlan& p) { return py::make_tuple(p.shape().rows, p.shape().cols); })
      .def_property_readonly("band_limit", [](const PropagationPlan& p) { return std::pair{p.band_limit_x(), p.band_limit_y()}; })
      .def("propagate", [](const PropagationPlan& p, const ComplexField& f) {
        py::gil_scoped_release nogil;
        return propagate(p, f);
      })
      .def("propagate_inverse", [](const PropagationPlan& p, const ComplexField& f) {
        py::gil_scoped_release nogil;
        return propagate_inverse(p, f);
      });

  m.def(
      "make_plan",
      [](double z, std::pair<double, double> src, std::pair<double, double> dst, double wavelength,
         std::pair<std::size_t, std::size_t> shape, std::pair<double, double> shift) {
        return make_plan(z, to_pitch(src), to_pitch(dst), wavelength, {shape.first, shape.second},
                         {shift.first, shift.second});
      },
      py::arg("z"), py::arg("source_pitch"), py::arg("dest_pitch"), py::arg("wavelength"), py::arg("shape"),
      py::arg("shift") = std::pair{0.0, 0.0});
  m.def(
      "propagate_direct_dft",
      [](double z, std::pair<double, double> src, std::pair<double, double> dst, double wavelength,
         std::pair<double, double> shift, const ComplexField& f) {
        return propagate_direct_dft(z, to_pitch(src), to_pitch(dst), wavelength, {shift.first, shift.second}, f);
      },
      py::arg("z"), py::arg("source_pitch"), py::arg("dest_pitch"), py::arg("wavelength"), py::arg("shift"),
      py::arg("field"));
  m.def("band_limit_half_width", &band_limit_half_width, py::arg("wavelength"), py::arg("z"),
        py::arg("source_pitch"), py::arg("scale"));

  m.def("focal_length", &focal_length, py::arg("z"), py::arg("image_side"), py::arg("holo_side"));
  m.def(
      "convergent_phase",
      [](double f, std::pair<double, double> offset, double wavelength, std::pair<double, double> image_pitch,
         std::pair<std::size_t, std::size_t> shape) {
        return real_to_numpy(convergent_phase(
            {f, {offset.first, offset.second}, wavelength, to_pitch(image_pitch), {shape.first, shape.second}}));
      },
      py::arg("focal_length"), py::arg("offset"), py::arg("wavelength"), py::arg("image_pitch"), py::arg("shape"));
  m.def(
      "random_phase",
      [](std::pair<std::size_t, std::size_t> shape, std::uint64_t seed) {
        return real_to_numpy(random_phase({shape.first, shape.second}, seed));
      },
      py::arg("shape"), py::arg("seed"));

  py::class_<PhaseHologram>(m, "PhaseHologram")
      .def_property_readonly("phase", [](const PhaseHologram& h) { return to_numpy<double>(h.rows, h.cols, h.phase); })
      .def_property_readonly("pitch", [](const PhaseHologram& h) { return from_pitch(h.pitch); })
      .def_property_readonly("wavelength", [](const PhaseHologram& h) { return h.wavelength; })
      .def_property_readonly("encoding", [](const PhaseHologram& h) { return std::string(to_string(h.encoding)); })
      .def_property_readonly("scale", [](const PhaseHologram& h) { return h.scale; })
      .def_property_readonly("shape", [](const PhaseHologram& h) { return py::make_tuple(h.rows, h.cols); });

  m.def("encode_phase_only", &encode_phase_only, py::arg("field"));
  m.def("encode_bleached", &encode_bleached, py::arg("field"), py::arg("peak_phase") = std::numbers::pi);
  m.def("lift", &lift, py::arg("hologram"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("wavelength", &RunConfig::wavelength)
      .def_readwrite("holo_pitch", &RunConfig::holo_pitch)
      .def_readwrite("image_pitch", &RunConfig::image_pitch)
      .def_readwrite("distance", &RunConfig::distance)
      .def_property(
          "offset", [](const RunConfig& c) { return std::pair{c.offset.x, c.offset.y}; },
          [](RunConfig& c, std::pair<double, double> o) { c.offset = {o.first, o.second}; })
      .def_readwrite("grid", &RunConfig::grid)
      .def_property(
          "encoding", [](const RunConfig& c) { return std::string(to_string(c.encoding)); },
          [](RunConfig& c, const std::string& e) { c.encoding = parse_encoding(e); })
      .def_readwrite("iterations", &RunConfig::iterations)
      .def_readwrite("seed", &RunConfig::seed)
      .def_property(
          "init", [](const RunConfig& c) { return c.init == InitKind::Random ? "random" : "convergent"; },
          [](RunConfig& c, const std::string& v) {
            if (v == "random") c.init = InitKind::Random;
            else if (v == "convergent") c.init = InitKind::Convergent;
            else throw py::value_error("init must be 'random' or 'convergent'");
          });
  m.def("scaled_config", &scaled_config, py::arg("grid"));
  m.def("make_run_plan", &make_run_plan, py::arg("config"));
  m.def(
      "generate",
      [](const DoubleArray& target, const RunConfig& cfg) {
        const RealImage img = make_image(target);
        py::gil_scoped_release nogil;
        return generate(img, cfg);
      },
      py::arg("target"), py::arg("config"));
  m.def(
      "optimize",
      [](const DoubleArray& target, const RunConfig& cfg) {
        const RealImage img = make_image(target);
        GsResult r;
        {
          py::gil_scoped_release nogil;
          r = optimize(img, cfg, make_run_plan(cfg));
        }
        return py::make_tuple(r.hologram, r.trace.residual);
      },
      py::arg("target"), py::arg("config"),
      "Returns (hologram, residual per iteration).");
  m.def(
      "reconstruct",
      [](const PhaseHologram& h, const RunConfig& cfg) { return gray_to_numpy(reconstruct(h, cfg)); },
      py::arg("hologram"), py::arg("config"));

  m.def(
      "psnr", [](const ByteArray& a, const ByteArray& b) { return psnr(make_gray(a), make_gray(b)); },
      py::arg("reference"), py::arg("test"));
  m.def(
      "ssim", [](const ByteArray& a, const ByteArray& b) { return ssim(make_gray(a), make_gray(b)); },
      py::arg("reference"), py::arg("test"));

  m.def("read_field", &io::read_field, py::arg("path"));
  m.def("write_field", &io::write_field, py::arg("path"), py::arg("field"));
  m.def("read_hologram_png", &io::read_hologram_png, py::arg("path"));
  m.def("write_hologram_png", &io::write_hologram_png, py::arg("path"), py::arg("hologram"));
  m.def(
      "load_image",
      [](const std::filesystem::path& p, std::optional<std::size_t> size) {
        const RealImage img = io::load_image(p, size);
        return to_numpy<double>(img.rows(), img.cols(), img.pixels());
      },
      py::arg("path"), py::arg("size") = py::none());
  m.def(
      "save_image", [](const std::filesystem::path& p, const DoubleArray& img) { io::save_image(p, make_image(img)); },
      py::arg("path"), py::arg("image"));

  m.def(
      "emit_goldens",
      [](const std::filesystem::path& dir, std::uint64_t seed) {
        std::vector<std::string> ids;
        for (const auto& c : goldens::emit_goldens(dir, seed).cases) ids.push_back(c.id);
        return ids;
      },
      py::arg("directory"), py::arg("seed") = 0);
  m.def(
      "replay_goldens",
      [](const std::filesystem::path& path) {
        py::list out;
        for (const auto& r : goldens::replay(goldens::load_manifest(path))) {
          py::dict d;
          d["id"] = r.id;
          d["error"] = r.error;
          d["tolerance"] = r.tolerance;
          d["pass"] = r.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("path"));
}
